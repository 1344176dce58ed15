//! Marginal-cost greedy scoring.
//!
//! Each round considers every single-voter move that is currently available,
//! prices it as edits per deficit reduction, and applies the cheapest one
//! until the scored candidate has no deficit left. Two move pools are
//! supported:
//!
//! * Dodgson: raise the candidate past the `k` rivals directly above it in
//!   one voter's ranking (`k` adjacent swaps).
//! * Young: delete one voter.
//!
//! A move's reductions are the rivals it touches whose deficit is currently
//! positive; each such rival counts once per move. Ties between equally
//! priced moves go to the smaller cost, then the smaller voter number, then
//! the smaller raise depth.
//!
//! Two engines produce identical reports. `Naive` re-enumerates the whole
//! pool every round. `Queue` keeps the pool in an ordered set with a chain of
//! entries per voter: applying a move only re-enumerates that voter, and the
//! whole set is rebuilt only when some rival's deficit changes between zero
//! and positive.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};

use crate::edit::{Edit, EditSequence};
use crate::error::{Error, Result};
use crate::profile::{total_deficit, CandidateId, Profile, Ranking, TieConvention, VoterId};

macro_rules! keyword_enum {
    ($name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
        #[serde(rename_all = "lowercase")]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($text => Ok($name::$variant),)+
                    other => Err(format!(
                        concat!("unknown ", stringify!($name), " `{}` (expected one of: {})"),
                        other,
                        [$($text),+].join(", ")
                    )),
                }
            }
        }
    };
}

keyword_enum!(Rule { Dodgson => "dodgson", Young => "young" });
keyword_enum!(Engine { Queue => "queue", Naive => "naive" });
keyword_enum!(Mode { Greedy => "greedy", Exact => "exact" });

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MoveKind {
    Raise,
    Delete,
}

/// A candidate move for one voter: the last-element representation of a
/// run of raises, or a single deletion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Move {
    pub voter: VoterId,
    pub kind: MoveKind,
    /// Raise depth; `None` for deletions.
    pub target_count: Option<usize>,
    pub cost: u64,
    pub reductions: u64,
}

impl Move {
    pub fn marginal_cost(&self) -> MarginalCost {
        MarginalCost::new(self.cost, self.reductions)
    }
}

pub fn marginal_cost(mv: &Move) -> MarginalCost {
    mv.marginal_cost()
}

/// Edits per deficit reduction, as an exact ratio. Infinite when the move
/// yields no reduction.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MarginalCost {
    pub edits: u64,
    pub reductions: u64,
}

impl MarginalCost {
    pub fn new(edits: u64, reductions: u64) -> Self {
        MarginalCost { edits, reductions }
    }

    pub fn is_infinite(&self) -> bool {
        self.reductions == 0
    }
}

impl Ord for MarginalCost {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_infinite(), other.is_infinite()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => {
                (self.edits as u128 * other.reductions as u128).cmp(&(other.edits as u128 * self.reductions as u128))
            }
        }
    }
}

impl PartialOrd for MarginalCost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for MarginalCost {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for MarginalCost {}

impl fmt::Display for MarginalCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}/{}", self.edits, self.reductions)
        }
    }
}

/// A score value: a number of edits, or no edit sequence of the allowed kind
/// exists. `Unscorable` orders after every finite score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Score {
    Finite(u64),
    Unscorable,
}

impl Score {
    pub fn finite(self) -> Option<u64> {
        match self {
            Score::Finite(v) => Some(v),
            Score::Unscorable => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Score::Finite(_))
    }
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Score::Finite(v) => write!(f, "{v}"),
            Score::Unscorable => f.write_str("UNSCORABLE"),
        }
    }
}

impl Serialize for Score {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Score::Finite(v) => serializer.serialize_u64(*v),
            Score::Unscorable => serializer.serialize_str("UNSCORABLE"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LoggedMove {
    #[serde(flatten)]
    pub mv: Move,
    pub marginal_cost: MarginalCost,
    /// Total deficit of the scored candidate after the move.
    pub deficit_after: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScoreReport {
    pub candidate: CandidateId,
    pub score: Score,
    pub witness: EditSequence,
    pub move_log: Vec<LoggedMove>,
    pub rule: Rule,
    pub convention: TieConvention,
    pub mode: Mode,
    /// Greedy engine; absent for exact reports.
    pub engine: Option<Engine>,
}

impl ScoreReport {
    /// Line-oriented record: header fields, the move log, then the witness.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("candidate {}\n", self.candidate));
        out.push_str(&format!("rule {}\n", self.rule));
        out.push_str(&format!("convention {}\n", self.convention));
        out.push_str(&format!("mode {}\n", self.mode));
        if let Some(engine) = self.engine {
            out.push_str(&format!("engine {engine}\n"));
        }
        out.push_str(&format!("score {}\n", self.score));
        out.push_str(&format!("moves {}\n", self.move_log.len()));
        for logged in &self.move_log {
            let mv = &logged.mv;
            let kind = match mv.kind {
                MoveKind::Raise => format!("raise k={}", mv.target_count.unwrap_or(0)),
                MoveKind::Delete => "delete".to_string(),
            };
            out.push_str(&format!(
                "move voter={} {} cost={} reductions={} marginal={} deficit={}\n",
                mv.voter, kind, mv.cost, mv.reductions, logged.marginal_cost, logged.deficit_after
            ));
        }
        out.push_str(&format!("witness {}\n", self.witness.len()));
        out.push_str(&self.witness.to_text());
        out
    }
}

/// Priority order of a move: marginal cost, then cost, voter, raise depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct QueueKey {
    marginal: MarginalCost,
    cost: u64,
    voter: VoterId,
    target_count: usize,
    reductions: u64,
    kind_delete: bool,
}

impl QueueKey {
    fn of(mv: &Move) -> Self {
        QueueKey {
            marginal: mv.marginal_cost(),
            cost: mv.cost,
            voter: mv.voter,
            target_count: mv.target_count.unwrap_or(0),
            reductions: mv.reductions,
            kind_delete: mv.kind == MoveKind::Delete,
        }
    }

    fn to_move(self) -> Move {
        Move {
            voter: self.voter,
            kind: if self.kind_delete { MoveKind::Delete } else { MoveKind::Raise },
            target_count: if self.kind_delete { None } else { Some(self.target_count) },
            cost: self.cost,
            reductions: self.reductions,
        }
    }
}

/// `positive[d]` is whether `c` currently trails `d`.
fn positive_deficits(profile: &Profile, c: CandidateId, tc: TieConvention) -> Vec<bool> {
    let tally = profile.tally();
    profile.candidates().map(|d| d != c && tally.deficit_unchecked(c, d, tc) > 0).collect()
}

fn push_raise_moves(voter: VoterId, ranking: &Ranking, c: CandidateId, positive: &[bool], out: &mut Vec<Move>) {
    let pos = ranking.position(c);
    let mut reductions = 0;
    for k in 1..=pos {
        if positive[ranking.at(pos - k).idx()] {
            reductions += 1;
        }
        out.push(Move { voter, kind: MoveKind::Raise, target_count: Some(k), cost: k as u64, reductions });
    }
}

fn delete_move(voter: VoterId, ranking: &Ranking, c: CandidateId, positive: &[bool]) -> Move {
    let pos = ranking.position(c);
    let reductions = ranking.order()[..pos].iter().filter(|d| positive[d.idx()]).count() as u64;
    Move { voter, kind: MoveKind::Delete, target_count: None, cost: 1, reductions }
}

fn voter_moves(rule: Rule, voter: VoterId, ranking: &Ranking, c: CandidateId, positive: &[bool], out: &mut Vec<Move>) {
    match rule {
        Rule::Dodgson => push_raise_moves(voter, ranking, c, positive, out),
        Rule::Young => out.push(delete_move(voter, ranking, c, positive)),
    }
}

fn all_moves(profile: &Profile, c: CandidateId, rule: Rule, tc: TieConvention) -> Vec<Move> {
    let positive = positive_deficits(profile, c, tc);
    let mut out = Vec::new();
    for (voter, ranking) in profile.live_voters() {
        voter_moves(rule, voter, ranking, c, &positive, &mut out);
    }
    out
}

/// Every raise move currently available to `c`, voter by voter and by
/// increasing depth.
pub fn enumerate_dodgson_moves(profile: &Profile, c: CandidateId, tc: TieConvention) -> Result<Vec<Move>> {
    let c = profile.candidate(c.get())?;
    Ok(all_moves(profile, c, Rule::Dodgson, tc))
}

/// One deletion move per live voter.
pub fn enumerate_young_moves(profile: &Profile, c: CandidateId, tc: TieConvention) -> Result<Vec<Move>> {
    let c = profile.candidate(c.get())?;
    Ok(all_moves(profile, c, Rule::Young, tc))
}

/// Applies a move to the working profile, appending its edits to `witness`.
fn apply_move(work: &mut Profile, c: CandidateId, mv: &Move, witness: &mut EditSequence) {
    match mv.kind {
        MoveKind::Raise => {
            for _ in 0..mv.target_count.unwrap_or(0) {
                let below = work.ranking(mv.voter).expect("live voter").below_count(c);
                let e = Edit::Swap { voter: mv.voter, boundary: below + 1 };
                work.apply(&e).expect("raise stays within the ranking");
                witness.push(e);
            }
        }
        MoveKind::Delete => {
            let e = Edit::Delete { voter: mv.voter };
            work.apply(&e).expect("deleting a live voter");
            witness.push(e);
        }
    }
}

struct Run {
    work: Profile,
    c: CandidateId,
    rule: Rule,
    tc: TieConvention,
    witness: EditSequence,
    log: Vec<LoggedMove>,
}

impl Run {
    fn total(&self) -> u64 {
        total_deficit(self.work.tally(), self.c, self.tc)
    }

    fn commit(&mut self, mv: Move) {
        apply_move(&mut self.work, self.c, &mv, &mut self.witness);
        let deficit_after = self.total();
        self.log.push(LoggedMove { mv, marginal_cost: mv.marginal_cost(), deficit_after });
    }
}

fn run_naive(run: &mut Run) -> Score {
    loop {
        if run.total() == 0 {
            return Score::Finite(run.witness.len() as u64);
        }
        let best = all_moves(&run.work, run.c, run.rule, run.tc)
            .into_iter()
            .filter(|mv| mv.reductions > 0)
            .min_by_key(QueueKey::of);
        match best {
            Some(mv) => run.commit(mv),
            None => return Score::Unscorable,
        }
    }
}

struct MoveQueue {
    set: BTreeSet<QueueKey>,
    chains: Vec<Vec<QueueKey>>,
    scratch: Vec<Move>,
}

impl MoveQueue {
    fn new(n: usize) -> Self {
        MoveQueue { set: BTreeSet::new(), chains: vec![Vec::new(); n], scratch: Vec::new() }
    }

    fn chain_for(&mut self, run: &Run, voter: VoterId, positive: &[bool]) -> Vec<QueueKey> {
        self.scratch.clear();
        if let Some(ranking) = run.work.ranking(voter) {
            voter_moves(run.rule, voter, ranking, run.c, positive, &mut self.scratch);
        }
        self.scratch.iter().filter(|mv| mv.reductions > 0).map(QueueKey::of).collect()
    }

    fn rebuild(&mut self, run: &Run, positive: &[bool]) {
        let mut all = Vec::new();
        for v in 0..self.chains.len() {
            let chain = self.chain_for(run, VoterId::from_idx(v), positive);
            all.extend_from_slice(&chain);
            self.chains[v] = chain;
        }
        all.sort_unstable();
        self.set = all.into_iter().collect();
    }

    fn refresh_voter(&mut self, run: &Run, voter: VoterId, positive: &[bool]) {
        for key in std::mem::take(&mut self.chains[voter.idx()]) {
            self.set.remove(&key);
        }
        let chain = self.chain_for(run, voter, positive);
        self.set.extend(chain.iter().copied());
        self.chains[voter.idx()] = chain;
    }
}

fn run_queue(run: &mut Run) -> Score {
    let mut positive = positive_deficits(&run.work, run.c, run.tc);
    let mut queue = MoveQueue::new(run.work.n_original());
    queue.rebuild(run, &positive);
    loop {
        if run.total() == 0 {
            return Score::Finite(run.witness.len() as u64);
        }
        let Some(key) = queue.set.pop_first() else {
            return Score::Unscorable;
        };
        let mv = key.to_move();
        run.commit(mv);
        let now = positive_deficits(&run.work, run.c, run.tc);
        if now != positive {
            positive = now;
            queue.rebuild(run, &positive);
        } else {
            queue.refresh_voter(run, mv.voter, &positive);
        }
    }
}

/// Scores `c` greedily under `rule`.
pub fn greedy_score(
    profile: &Profile,
    c: CandidateId,
    rule: Rule,
    tc: TieConvention,
    engine: Engine,
) -> Result<ScoreReport> {
    let c = profile.candidate(c.get()).map_err(|_| Error::UnknownCandidate(c.get()))?;
    let mut run = Run { work: profile.clone(), c, rule, tc, witness: EditSequence::new(), log: Vec::new() };
    let score = match engine {
        Engine::Naive => run_naive(&mut run),
        Engine::Queue => run_queue(&mut run),
    };
    if !score.is_finite() {
        // the move log keeps the abandoned attempt
        run.witness = EditSequence::new();
    }
    Ok(ScoreReport {
        candidate: c,
        score,
        witness: run.witness,
        move_log: run.log,
        rule,
        convention: tc,
        mode: Mode::Greedy,
        engine: Some(engine),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edit::is_condorcet_sequence;
    use crate::fixtures::ex5;
    use crate::profile::build_profile;

    fn c(i: usize) -> CandidateId {
        CandidateId::new(i)
    }

    fn cost_reductions(moves: &[Move], voter: usize) -> Vec<(u64, u64)> {
        moves.iter().filter(|mv| mv.voter == VoterId::new(voter)).map(|mv| (mv.cost, mv.reductions)).collect()
    }

    #[test]
    fn ex5_dodgson_moves() {
        let moves = enumerate_dodgson_moves(&ex5(), c(3), TieConvention::Strict).unwrap();
        assert_eq!(cost_reductions(&moves, 1), vec![(1, 0), (2, 1)]);
        assert_eq!(cost_reductions(&moves, 3), vec![(1, 0), (2, 1), (3, 1)]);
        // c tops voter 5's ballot
        assert!(cost_reductions(&moves, 5).is_empty());
    }

    #[test]
    fn ex5_young_moves() {
        let moves = enumerate_young_moves(&ex5(), c(4), TieConvention::Strict).unwrap();
        assert_eq!(moves.len(), 5);
        assert_eq!(cost_reductions(&moves, 1), vec![(1, 2)]);
        assert_eq!(cost_reductions(&moves, 3), vec![(1, 0)]);
    }

    #[test]
    fn no_reductions_for_a_unanimous_favourite() {
        let p = build_profile(&[[2, 1, 3], [2, 3, 1]], 3).unwrap();
        let moves = enumerate_young_moves(&p, c(2), TieConvention::Strict).unwrap();
        assert!(moves.iter().all(|mv| mv.reductions == 0));
        assert!(enumerate_dodgson_moves(&p, c(2), TieConvention::Strict).unwrap().is_empty());
    }

    #[test]
    fn marginal_costs() {
        assert_eq!(MarginalCost::new(2, 1).to_string(), "2/1");
        assert_eq!(MarginalCost::new(1, 2).to_string(), "1/2");
        assert!(MarginalCost::new(3, 0).is_infinite());
        assert_eq!(MarginalCost::new(2, 4), MarginalCost::new(1, 2));
        assert!(MarginalCost::new(1, 2) < MarginalCost::new(2, 1));
        assert!(MarginalCost::new(1000, 1) < MarginalCost::new(1, 0));
        assert_eq!(MarginalCost::new(1, 0), MarginalCost::new(7, 0));
        let mv = Move { voter: VoterId::new(1), kind: MoveKind::Raise, target_count: Some(2), cost: 2, reductions: 1 };
        assert_eq!(marginal_cost(&mv).to_string(), "2/1");
    }

    #[test]
    fn ex5_greedy_dodgson() {
        for engine in [Engine::Queue, Engine::Naive] {
            let r = greedy_score(&ex5(), c(3), Rule::Dodgson, TieConvention::Strict, engine).unwrap();
            assert_eq!(r.score, Score::Finite(4));
            assert_eq!(
                r.witness,
                EditSequence(vec![Edit::swap(1, 3), Edit::swap(1, 4), Edit::swap(2, 3), Edit::swap(2, 4)])
            );
            let picked: Vec<(usize, u64, String)> =
                r.move_log.iter().map(|l| (l.mv.voter.get(), l.mv.cost, l.marginal_cost.to_string())).collect();
            assert_eq!(picked, vec![(1, 2, "2/1".into()), (2, 2, "2/1".into())]);
            assert!(is_condorcet_sequence(&ex5(), c(3), &r.witness, TieConvention::Strict).unwrap());
        }
    }

    #[test]
    fn ex5_greedy_young() {
        for engine in [Engine::Queue, Engine::Naive] {
            let r = greedy_score(&ex5(), c(4), Rule::Young, TieConvention::Strict, engine).unwrap();
            assert_eq!(r.score, Score::Finite(2));
            assert_eq!(r.witness, EditSequence(vec![Edit::delete(1), Edit::delete(2)]));
            assert!(r.move_log.iter().all(|l| l.marginal_cost.to_string() == "1/2"));
        }
    }

    #[test]
    fn condorcet_winner_scores_zero() {
        let p = build_profile(&[[2, 1, 3], [1, 2, 3], [2, 3, 1]], 3).unwrap();
        for rule in [Rule::Dodgson, Rule::Young] {
            let r = greedy_score(&p, c(2), rule, TieConvention::Strict, Engine::Queue).unwrap();
            assert_eq!(r.score, Score::Finite(0));
            assert!(r.witness.is_empty());
        }
    }

    #[test]
    fn young_strict_can_be_unscorable() {
        let p = build_profile(&[[2, 1], [2, 1], [2, 1]], 2).unwrap();
        for engine in [Engine::Queue, Engine::Naive] {
            let strict = greedy_score(&p, c(1), Rule::Young, TieConvention::Strict, engine).unwrap();
            assert_eq!(strict.score, Score::Unscorable);
            let weak = greedy_score(&p, c(1), Rule::Young, TieConvention::Weak, engine).unwrap();
            assert_eq!(weak.score, Score::Finite(3));
        }
    }

    #[test]
    fn unknown_candidate_is_rejected() {
        assert_eq!(
            greedy_score(&ex5(), c(6), Rule::Dodgson, TieConvention::Strict, Engine::Queue).unwrap_err(),
            Error::UnknownCandidate(6)
        );
    }

    #[test]
    fn report_text_lists_moves_and_witness() {
        let r = greedy_score(&ex5(), c(4), Rule::Young, TieConvention::Strict, Engine::Queue).unwrap();
        let text = r.to_text();
        assert!(text.contains("score 2\n"));
        assert!(text.contains("move voter=1 delete cost=1 reductions=2 marginal=1/2 deficit=2\n"));
        assert!(text.ends_with("witness 2\ndelete 1\ndelete 2\n"));
    }

    #[test]
    fn score_ordering_and_json() {
        assert!(Score::Finite(1_000) < Score::Unscorable);
        assert_eq!(serde_json::to_string(&Score::Unscorable).unwrap(), "\"UNSCORABLE\"");
        assert_eq!(serde_json::to_string(&Score::Finite(4)).unwrap(), "4");
        assert_eq!("young".parse::<Rule>(), Ok(Rule::Young));
        assert!("kemeny".parse::<Rule>().is_err());
    }
}
