//! Greedy-versus-exact benchmark harness.
//!
//! A run scores every candidate of every trial profile with the greedy
//! scorer and the exact oracle and emits one CSV row per candidate plus a
//! JSON summary. Trial profiles come from impartial culture over a grid of
//! `(m, n)` cells, or from fixed ballot files. Each random trial's seed is
//! derived from `(master seed, m, n, trial index)`, so results do not depend
//! on scheduling.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::election::{score_ratio, ElectionResult};
use crate::error::{Error, Result};
use crate::exact::{exact_report, ExactLimits};
use crate::generate::{derive_seed, generate_impartial_culture};
use crate::greedy::{greedy_score, Engine, Mode, Rule, Score, ScoreReport};
use crate::io::{parse_profile, BallotFormat};
use crate::profile::{Profile, TieConvention};

pub const CSV_HEADER: [&str; 10] = [
    "m",
    "n",
    "seed",
    "candidate",
    "exact_score",
    "greedy_score",
    "ratio",
    "greedy_runtime_us",
    "oracle_runtime_us",
    "winner_agreement",
];

/// Columns holding wall-clock measurements.
pub const RUNTIME_COLUMNS: [usize; 2] = [7, 8];

fn default_engines() -> Vec<Engine> {
    vec![Engine::Queue]
}

fn default_trials() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub rule: Rule,
    #[serde(default)]
    pub convention: TieConvention,
    /// Inclusive candidate-count range `[min, max]`.
    #[serde(default)]
    pub m: Option<(usize, usize)>,
    /// Inclusive voter-count range `[min, max]`.
    #[serde(default)]
    pub n: Option<(usize, usize)>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    /// Greedy engines to run; the first supplies the reported score, the
    /// rest are checked against it.
    #[serde(default = "default_engines")]
    pub engines: Vec<Engine>,
    /// Fixed ballot files, scored once each in addition to the random grid.
    #[serde(default)]
    pub profiles: Vec<PathBuf>,
    #[serde(default)]
    pub csv: Option<PathBuf>,
    #[serde(default)]
    pub summary: Option<PathBuf>,
    #[serde(default)]
    pub dodgson_node_budget: Option<u64>,
    #[serde(default)]
    pub young_voter_cap: Option<usize>,
}

impl BenchConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: BenchConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Reads a TOML config; relative paths inside it resolve against the
    /// file's directory.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let mut config = Self::from_toml(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        let resolve = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        config.profiles.iter_mut().for_each(resolve);
        config.csv.iter_mut().for_each(resolve);
        config.summary.iter_mut().for_each(resolve);
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.engines.is_empty() {
            return Err(Error::Config("at least one engine is required".into()));
        }
        match (self.m, self.n) {
            (Some((lo_m, hi_m)), Some((lo_n, hi_n))) => {
                if lo_m < 1 || lo_m > hi_m {
                    return Err(Error::Config(format!("candidate range [{lo_m}, {hi_m}] is empty or starts below 1")));
                }
                if lo_n < 1 || lo_n > hi_n {
                    return Err(Error::Config(format!("voter range [{lo_n}, {hi_n}] is empty or starts below 1")));
                }
            }
            (None, None) => {}
            _ => return Err(Error::Config("`m` and `n` ranges must be given together".into())),
        }
        Ok(())
    }

    fn limits(&self) -> ExactLimits {
        let defaults = ExactLimits::default();
        ExactLimits {
            dodgson_node_budget: self.dodgson_node_budget.unwrap_or(defaults.dodgson_node_budget),
            young_voter_cap: self.young_voter_cap.unwrap_or(defaults.young_voter_cap),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub m: usize,
    pub n: usize,
    /// Absent for fixed profiles.
    pub seed: Option<u64>,
    pub candidate: usize,
    pub exact: Score,
    pub greedy: Score,
    pub ratio: f64,
    pub greedy_us: u128,
    pub oracle_us: u128,
    pub winner_agreement: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkippedCell {
    pub m: usize,
    pub n: usize,
    pub seed: Option<u64>,
    pub source: Option<String>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchSummary {
    pub rule: Rule,
    pub convention: TieConvention,
    pub trials: usize,
    pub rows: usize,
    /// Mean and max over rows where both scores are finite.
    pub mean_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
    /// Rows with greedy above `(1 + ln m) * exact`, or greedy unscorable
    /// while exact is finite. Must be zero for Dodgson; informational for
    /// Young.
    pub bound_violations: usize,
    pub bound_enforced: bool,
    /// Rows with greedy strictly below exact (always a defect).
    pub below_exact: usize,
    /// Rows where the secondary engines disagreed with the first.
    pub engine_mismatches: usize,
    pub winner_agreement: Option<f64>,
    pub ranking_agreement: Option<f64>,
    pub skipped_cells: usize,
    pub skipped: Vec<SkippedCell>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub summary: BenchSummary,
}

fn csv_score(s: Score) -> String {
    s.to_string()
}

fn csv_ratio(r: f64) -> String {
    if r.is_finite() {
        format!("{r:.6}")
    } else {
        "inf".to_string()
    }
}

impl BenchReport {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(CSV_HEADER).map_err(io)?;
        for r in &self.rows {
            w.write_record([
                r.m.to_string(),
                r.n.to_string(),
                r.seed.map(|s| s.to_string()).unwrap_or_default(),
                r.candidate.to_string(),
                csv_score(r.exact),
                csv_score(r.greedy),
                csv_ratio(r.ratio),
                r.greedy_us.to_string(),
                r.oracle_us.to_string(),
                r.winner_agreement.to_string(),
            ])
            .map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    pub fn summary_json(&self) -> String {
        serde_json::to_string_pretty(&self.summary).expect("summary serializes")
    }
}

/// `(1 + ln m)`, the Dodgson approximation guarantee.
pub fn log_bound(m: usize) -> f64 {
    1.0 + (m as f64).ln()
}

/// Whether `greedy` respects `greedy <= (1 + ln m) * exact`.
pub fn within_bound(greedy: Score, exact: Score, m: usize) -> bool {
    match (greedy, exact) {
        (Score::Finite(g), Score::Finite(e)) => g as f64 <= log_bound(m) * e as f64 + 1e-9,
        (Score::Unscorable, Score::Finite(_)) => false,
        (_, Score::Unscorable) => true,
    }
}

enum TrialSource {
    Random { m: usize, n: usize, seed: u64 },
    Fixed(PathBuf),
}

enum TrialOutcome {
    Done { rows: Vec<BenchRow>, ranking_agreement: bool, engine_mismatches: usize },
    Skipped(SkippedCell),
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, u128) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_micros())
}

fn run_trial(config: &BenchConfig, limits: &ExactLimits, source: &TrialSource) -> Result<TrialOutcome> {
    let (profile, seed, label): (Profile, Option<u64>, Option<String>) = match source {
        TrialSource::Random { m, n, seed } => (generate_impartial_culture(*m, *n, *seed)?, Some(*seed), None),
        TrialSource::Fixed(path) => {
            (parse_profile(path, BallotFormat::from_path(path))?, None, Some(path.display().to_string()))
        }
    };
    let (m, n) = (profile.m(), profile.n_live());
    let tc = config.convention;

    let mut greedy_reports = Vec::with_capacity(m);
    let mut exact_reports = Vec::with_capacity(m);
    let mut timings = Vec::with_capacity(m);
    let mut engine_mismatches = 0;
    for c in profile.candidates() {
        let (greedy, greedy_us) = timed(|| greedy_score(&profile, c, config.rule, tc, config.engines[0]));
        let greedy = greedy?;
        for &other in &config.engines[1..] {
            let mut alt = greedy_score(&profile, c, config.rule, tc, other)?;
            alt.engine = greedy.engine;
            if alt != greedy {
                engine_mismatches += 1;
            }
        }
        let (exact, oracle_us) = timed(|| exact_report(&profile, c, config.rule, tc, limits));
        let exact = match exact {
            Ok(r) => r,
            Err(Error::OracleInfeasible { reason, .. }) => {
                return Ok(TrialOutcome::Skipped(SkippedCell { m, n, seed, source: label, reason }));
            }
            Err(e) => return Err(e),
        };
        greedy_reports.push(greedy);
        exact_reports.push(exact);
        timings.push((greedy_us, oracle_us));
    }

    let assemble = |reports: Vec<ScoreReport>, mode| ElectionResult::from_reports(config.rule, mode, tc, reports);
    let greedy_result = assemble(greedy_reports, Mode::Greedy);
    let exact_result = assemble(exact_reports, Mode::Exact);
    let comparison = crate::election::compare_results(&greedy_result, &exact_result)?;

    let rows = greedy_result
        .reports
        .iter()
        .zip(&exact_result.reports)
        .zip(timings)
        .map(|((g, e), (greedy_us, oracle_us))| BenchRow {
            m,
            n,
            seed,
            candidate: g.candidate.get(),
            exact: e.score,
            greedy: g.score,
            ratio: score_ratio(g.score, e.score),
            greedy_us,
            oracle_us,
            winner_agreement: comparison.winners_equal,
        })
        .collect();
    Ok(TrialOutcome::Done { rows, ranking_agreement: comparison.ranking_equal, engine_mismatches })
}

pub fn run_benchmark(config: &BenchConfig) -> Result<BenchReport> {
    config.validate()?;
    let limits = config.limits();

    let mut sources: Vec<TrialSource> = config.profiles.iter().cloned().map(TrialSource::Fixed).collect();
    if let (Some((lo_m, hi_m)), Some((lo_n, hi_n))) = (config.m, config.n) {
        for m in lo_m..=hi_m {
            for n in lo_n..=hi_n {
                for t in 0..config.trials {
                    let seed = derive_seed(config.seed, &[m as u64, n as u64, t as u64]);
                    sources.push(TrialSource::Random { m, n, seed });
                }
            }
        }
    }

    let outcomes: Vec<Result<TrialOutcome>> = sources.par_iter().map(|s| run_trial(config, &limits, s)).collect();

    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    let mut trials = 0;
    let mut winner_hits = 0;
    let mut ranking_hits = 0;
    let mut engine_mismatches = 0;
    for outcome in outcomes {
        match outcome? {
            TrialOutcome::Done { rows: trial_rows, ranking_agreement, engine_mismatches: mismatches } => {
                trials += 1;
                if trial_rows.first().is_some_and(|r| r.winner_agreement) {
                    winner_hits += 1;
                }
                if ranking_agreement {
                    ranking_hits += 1;
                }
                engine_mismatches += mismatches;
                rows.extend(trial_rows);
            }
            TrialOutcome::Skipped(cell) => skipped.push(cell),
        }
    }

    let finite: Vec<f64> =
        rows.iter().filter(|r| r.greedy.is_finite() && r.exact.is_finite()).map(|r| r.ratio).collect();
    let rate = |hits: usize| (trials > 0).then(|| hits as f64 / trials as f64);
    let summary = BenchSummary {
        rule: config.rule,
        convention: config.convention,
        trials,
        rows: rows.len(),
        mean_ratio: (!finite.is_empty()).then(|| finite.iter().sum::<f64>() / finite.len() as f64),
        max_ratio: finite.iter().copied().reduce(f64::max),
        bound_violations: rows.iter().filter(|r| !within_bound(r.greedy, r.exact, r.m)).count(),
        bound_enforced: config.rule == Rule::Dodgson,
        below_exact: rows.iter().filter(|r| r.greedy < r.exact).count(),
        engine_mismatches,
        winner_agreement: rate(winner_hits),
        ranking_agreement: rate(ranking_hits),
        skipped_cells: skipped.len(),
        skipped,
    };
    Ok(BenchReport { rows, summary })
}
