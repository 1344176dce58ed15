use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use greedyvote::bench::{run_benchmark, BenchConfig};
use greedyvote::election::{score_candidate, ElectionResult};
use greedyvote::io::write_native;
use greedyvote::{
    compare_results, generate_impartial_culture, parse_profile, score_all_with, total_deficit, BallotFormat, Engine,
    Error, ExactLimits, Mode, Profile, Rule, Score, ScoreReport, ScoringOptions, TieConvention,
};

/// Exit status when the requested score does not exist.
const EXIT_UNSCORABLE: u8 = 3;

#[derive(Parser)]
#[command(name = "greedyvote", version, about = "Greedy and exact Dodgson and Young scores")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score one candidate
    Score {
        #[command(flatten)]
        election: ElectionArgs,
        #[arg(long)]
        candidate: usize,
        /// Print the edit sequence after the score
        #[arg(long)]
        witness: bool,
    },
    /// Score every candidate and list them best first
    Rank {
        #[command(flatten)]
        election: ElectionArgs,
    },
    /// Print the candidates with the lowest score
    Winner {
        #[command(flatten)]
        election: ElectionArgs,
        /// Reduce a tied winner set to its lowest-numbered member
        #[arg(long, value_enum)]
        tiebreak: Option<Tiebreak>,
    },
    /// Total pairwise deficit of a candidate
    Tideman {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        candidate: usize,
        #[arg(long, default_value = "strict")]
        convention: TieConvention,
    },
    /// Greedy against exact scores for every candidate
    Compare {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value = "dodgson")]
        rule: Rule,
        #[arg(long, default_value = "strict")]
        convention: TieConvention,
        #[arg(long)]
        engine: Option<Engine>,
        #[command(flatten)]
        limits: LimitArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Write a seeded impartial-culture profile in native format
    Gen {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        /// Output file; standard output when absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a benchmark described by a TOML file
    Bench {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Ballot file (native, or SOC when the extension is .soc)
    file: PathBuf,
    /// Override format detection: native or soc
    #[arg(long)]
    input_format: Option<BallotFormat>,
}

#[derive(Args)]
struct LimitArgs {
    /// Node budget for the exact Dodgson search
    #[arg(long)]
    node_budget: Option<u64>,
    /// Largest electorate the exact Young search accepts
    #[arg(long)]
    voter_cap: Option<usize>,
}

#[derive(Args)]
struct ElectionArgs {
    #[command(flatten)]
    input: InputArgs,
    /// dodgson or young
    #[arg(long, default_value = "dodgson")]
    rule: Rule,
    /// greedy or exact
    #[arg(long, default_value = "greedy")]
    mode: Mode,
    /// strict or weak
    #[arg(long, default_value = "strict")]
    convention: TieConvention,
    /// Greedy engine, queue or naive (greedy mode only)
    #[arg(long)]
    engine: Option<Engine>,
    #[command(flatten)]
    limits: LimitArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Tiebreak {
    Lex,
}

impl InputArgs {
    fn load(&self) -> Result<Profile, Error> {
        let format = self.input_format.unwrap_or_else(|| BallotFormat::from_path(&self.file));
        parse_profile(&self.file, format)
    }
}

impl LimitArgs {
    fn limits(&self) -> ExactLimits {
        let defaults = ExactLimits::default();
        ExactLimits {
            dodgson_node_budget: self.node_budget.unwrap_or(defaults.dodgson_node_budget),
            young_voter_cap: self.voter_cap.unwrap_or(defaults.young_voter_cap),
        }
    }
}

impl ElectionArgs {
    fn options(&self) -> ScoringOptions {
        if self.mode == Mode::Exact && self.engine.is_some() {
            Cli::command()
                .error(
                    ErrorKind::ArgumentConflict,
                    "--engine selects a greedy engine and cannot be used with --mode exact",
                )
                .exit();
        }
        ScoringOptions { engine: self.engine.unwrap_or(Engine::Queue), limits: self.limits.limits() }
    }
}

enum Outcome {
    Done,
    Unscorable,
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes")
}

fn joined<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn score_outcome(score: Score) -> Outcome {
    if score.is_finite() {
        Outcome::Done
    } else {
        Outcome::Unscorable
    }
}

fn print_score(report: &ScoreReport, witness: bool, format: Format) {
    match format {
        Format::Json => println!("{}", to_json(report)),
        Format::Text => {
            println!("{}", report.score);
            if witness {
                print!("{}", report.witness.to_text());
            }
        }
    }
}

fn print_ranking(result: &ElectionResult, format: Format) {
    match format {
        Format::Json => println!("{}", to_json(result)),
        Format::Text => {
            for group in &result.ranking {
                println!("{}\t{}", group.score, joined(&group.candidates));
            }
        }
    }
}

fn run_bench(path: &Path) -> Result<Outcome, Error> {
    let config = BenchConfig::from_file(path)?;
    let report = run_benchmark(&config)?;
    let summary = report.summary_json();
    match &config.csv {
        Some(csv) => fs::write(csv, report.csv_string())?,
        None => print!("{}", report.csv_string()),
    }
    match &config.summary {
        Some(file) => fs::write(file, format!("{summary}\n"))?,
        None if config.csv.is_some() => println!("{summary}"),
        None => eprintln!("{summary}"),
    }
    let s = &report.summary;
    if s.bound_enforced && s.bound_violations > 0 {
        return Err(Error::Mismatch(format!("{} rows exceed the 1 + ln m bound", s.bound_violations)));
    }
    if s.engine_mismatches > 0 {
        return Err(Error::Mismatch(format!("{} rows differ between engines", s.engine_mismatches)));
    }
    Ok(Outcome::Done)
}

fn run(command: Command) -> Result<Outcome, Error> {
    match command {
        Command::Score { election, candidate, witness } => {
            let options = election.options();
            let profile = election.input.load()?;
            let c = profile.candidate(candidate)?;
            let report = score_candidate(&profile, c, election.rule, election.mode, election.convention, &options)?;
            print_score(&report, witness, election.format);
            Ok(score_outcome(report.score))
        }
        Command::Rank { election } => {
            let options = election.options();
            let profile = election.input.load()?;
            let result = score_all_with(&profile, election.rule, election.mode, election.convention, &options)?;
            print_ranking(&result, election.format);
            Ok(score_outcome(result.ranking[0].score))
        }
        Command::Winner { election, tiebreak } => {
            let options = election.options();
            let profile = election.input.load()?;
            let result = score_all_with(&profile, election.rule, election.mode, election.convention, &options)?;
            let winners = match tiebreak {
                Some(Tiebreak::Lex) => result.lexicographic_winner().into_iter().collect(),
                None => result.winner_set.clone(),
            };
            let score = result.ranking[0].score;
            match election.format {
                Format::Text => println!("{}", joined(&winners)),
                Format::Json => println!("{}", to_json(&serde_json::json!({ "winners": winners, "score": score }))),
            }
            Ok(score_outcome(score))
        }
        Command::Tideman { input, candidate, convention } => {
            let profile = input.load()?;
            let c = profile.candidate(candidate)?;
            println!("{}", total_deficit(profile.tally(), c, convention));
            Ok(Outcome::Done)
        }
        Command::Compare { input, rule, convention, engine, limits, format } => {
            let profile = input.load()?;
            let options = ScoringOptions { engine: engine.unwrap_or(Engine::Queue), limits: limits.limits() };
            let greedy = score_all_with(&profile, rule, Mode::Greedy, convention, &options)?;
            let exact = score_all_with(&profile, rule, Mode::Exact, convention, &options)?;
            let record = compare_results(&greedy, &exact)?;
            match format {
                Format::Json => println!("{}", to_json(&record)),
                Format::Text => {
                    println!("winners_equal {}", record.winners_equal);
                    println!("ranking_equal {}", record.ranking_equal);
                    println!("max_ratio {:.6}", record.max_ratio);
                    for r in &record.ratios {
                        println!(
                            "candidate {} greedy {} exact {} ratio {:.6}",
                            r.candidate, r.first, r.second, r.ratio
                        );
                    }
                }
            }
            Ok(Outcome::Done)
        }
        Command::Gen { m, n, seed, out } => {
            let profile = generate_impartial_culture(m, n, seed)?;
            let text = write_native(&profile);
            match out {
                Some(path) => fs::write(&path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?,
                None => std::io::stdout().write_all(text.as_bytes())?,
            }
            Ok(Outcome::Done)
        }
        Command::Bench { config } => run_bench(&config),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Unscorable) => ExitCode::from(EXIT_UNSCORABLE),
        Err(e) => {
            let body = serde_json::json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
            eprintln!("{body}");
            ExitCode::FAILURE
        }
    }
}
