//! Exhaustive Dodgson and Young scores for small elections.
//!
//! The Dodgson search only considers, per voter, raising the scored candidate
//! past some number of the rivals directly above it: some optimal swap
//! sequence always has that shape. [`dodgson_by_bfs`] searches arbitrary swap
//! sequences instead and exists to check that claim on tiny profiles.
//!
//! Searches that would exceed their configured limits fail with
//! [`Error::OracleInfeasible`] rather than return a guess.

use std::collections::HashSet;

use itertools::Itertools;

use crate::edit::{Edit, EditSequence};
use crate::error::{Error, Result};
use crate::greedy::{Mode, Rule, Score, ScoreReport};
use crate::profile::{CandidateId, Profile, TieConvention, VoterId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactLimits {
    /// Search nodes the Dodgson branch-and-bound may visit.
    pub dodgson_node_budget: u64,
    /// Largest electorate the Young subset enumeration accepts.
    pub young_voter_cap: usize,
}

impl Default for ExactLimits {
    fn default() -> Self {
        ExactLimits { dodgson_node_budget: 10_000_000, young_voter_cap: 20 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactResult {
    pub score: Score,
    pub witness: EditSequence,
}

/// Per-voter raise amounts: `raises[v]` passes the `raises[v]` rivals directly
/// above the scored candidate in voter `v`'s ballot.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RaiseVector {
    pub raises: Vec<(VoterId, usize)>,
}

impl RaiseVector {
    pub fn cost(&self) -> u64 {
        self.raises.iter().map(|&(_, k)| k as u64).sum()
    }

    /// The c-normal swap sequence realising this vector, voters in order.
    pub fn to_swaps(&self, profile: &Profile, c: CandidateId) -> EditSequence {
        let mut seq = EditSequence::new();
        for &(voter, k) in &self.raises {
            let below = profile.ranking(voter).expect("live voter").below_count(c);
            for step in 1..=k {
                seq.push(Edit::Swap { voter, boundary: below + step });
            }
        }
        seq
    }
}

/// Passes of `d` needed to close a deficit: each pass moves the margin by two.
fn passes_needed(deficit: u32) -> u32 {
    deficit.div_ceil(2)
}

struct DodgsonSearch {
    // per voter with something above c: rival indices from nearest upward
    above: Vec<Vec<usize>>,
    // admissible raise depths per voter, ascending, starting at 0
    options: Vec<Vec<usize>>,
    // suffix_avail[i][d]: voters i.. that could pass d
    suffix_avail: Vec<Vec<u32>>,
    need: Vec<u32>,
    remaining: u32,
    current: Vec<usize>,
    best_cost: u64,
    best: Option<Vec<usize>>,
    nodes: u64,
    budget: u64,
    c: CandidateId,
}

impl DodgsonSearch {
    fn dfs(&mut self, i: usize, cost: u64) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::OracleInfeasible {
                candidate: self.c,
                reason: format!("Dodgson search exceeded {} nodes", self.budget),
            });
        }
        if self.remaining == 0 {
            if cost < self.best_cost {
                self.best_cost = cost;
                let mut v = self.current[..i].to_vec();
                v.resize(self.above.len(), 0);
                self.best = Some(v);
            }
            return Ok(());
        }
        if i == self.above.len() || cost + self.remaining as u64 >= self.best_cost {
            return Ok(());
        }
        if self.need.iter().zip(&self.suffix_avail[i]).any(|(need, avail)| need > avail) {
            return Ok(());
        }
        for oi in 0..self.options[i].len() {
            let k = self.options[i][oi];
            if cost + k as u64 >= self.best_cost {
                break;
            }
            let mut taken = Vec::new();
            for &d in &self.above[i][..k] {
                if self.need[d] > 0 {
                    self.need[d] -= 1;
                    self.remaining -= 1;
                    taken.push(d);
                }
            }
            self.current[i] = k;
            let outcome = self.dfs(i + 1, cost + k as u64);
            for d in taken {
                self.need[d] += 1;
                self.remaining += 1;
            }
            self.current[i] = 0;
            outcome?;
        }
        Ok(())
    }
}

pub fn exact_dodgson(profile: &Profile, c: CandidateId, tc: TieConvention) -> Result<ExactResult> {
    exact_dodgson_with(profile, c, tc, &ExactLimits::default())
}

/// Minimum number of adjacent swaps making `c` the Condorcet winner.
///
/// Among optimal raise vectors the lexicographically smallest (in voter
/// order) is returned as the witness.
pub fn exact_dodgson_with(
    profile: &Profile,
    c: CandidateId,
    tc: TieConvention,
    limits: &ExactLimits,
) -> Result<ExactResult> {
    let c = profile.candidate(c.get())?;
    let m = profile.m();
    let tally = profile.tally();
    let need: Vec<u32> = profile
        .candidates()
        .map(|d| if d == c { 0 } else { passes_needed(tally.deficit_unchecked(c, d, tc)) })
        .collect();
    let remaining: u32 = need.iter().sum();
    if remaining == 0 {
        return Ok(ExactResult { score: Score::Finite(0), witness: EditSequence::new() });
    }

    let mut voters = Vec::new();
    let mut above = Vec::new();
    let mut options = Vec::new();
    for (voter, ranking) in profile.live_voters() {
        let pos = ranking.position(c);
        if pos == 0 {
            continue;
        }
        let list: Vec<usize> = (1..=pos).map(|k| ranking.at(pos - k).idx()).collect();
        // an optimal raise always ends on a rival that still needs passing
        let mut opts = vec![0];
        opts.extend((1..=pos).filter(|&k| need[list[k - 1]] > 0));
        voters.push(voter);
        above.push(list);
        options.push(opts);
    }
    let mut suffix_avail = vec![vec![0u32; m]; above.len() + 1];
    for i in (0..above.len()).rev() {
        suffix_avail[i] = suffix_avail[i + 1].clone();
        for &d in &above[i] {
            suffix_avail[i][d] += 1;
        }
    }

    let mut search = DodgsonSearch {
        current: vec![0; above.len()],
        above,
        options,
        suffix_avail,
        need,
        remaining,
        best_cost: u64::MAX,
        best: None,
        nodes: 0,
        budget: limits.dodgson_node_budget,
        c,
    };
    search.dfs(0, 0)?;

    match search.best {
        None => Ok(ExactResult { score: Score::Unscorable, witness: EditSequence::new() }),
        Some(ks) => {
            let vector = RaiseVector { raises: voters.into_iter().zip(ks).filter(|&(_, k)| k > 0).collect() };
            Ok(ExactResult { score: Score::Finite(vector.cost()), witness: vector.to_swaps(profile, c) })
        }
    }
}

pub fn exact_young(profile: &Profile, c: CandidateId, tc: TieConvention) -> Result<ExactResult> {
    exact_young_with(profile, c, tc, &ExactLimits::default())
}

/// Smallest set of voters whose deletion makes `c` the Condorcet winner.
///
/// Sets are tried by increasing size and, within a size, in lexicographic
/// voter order, so the first hit is optimal and its witness lists the
/// deletions in increasing voter order.
pub fn exact_young_with(
    profile: &Profile,
    c: CandidateId,
    tc: TieConvention,
    limits: &ExactLimits,
) -> Result<ExactResult> {
    let c = profile.candidate(c.get())?;
    let n = profile.n_live();
    if n > limits.young_voter_cap {
        return Err(Error::OracleInfeasible {
            candidate: c,
            reason: format!("Young enumeration is capped at {} voters, profile has {n}", limits.young_voter_cap),
        });
    }
    let tally = profile.tally();
    let rivals: Vec<CandidateId> = profile.candidates().filter(|&d| d != c).collect();
    let margins: Vec<i64> = rivals.iter().map(|&d| tally.margin(c, d)).collect();
    let slack = match tc {
        TieConvention::Strict => 1,
        TieConvention::Weak => 0,
    };
    let voters: Vec<(VoterId, Vec<i64>)> = profile
        .live_voters()
        .map(|(v, r)| {
            // deleting v lowers the margin against rivals it ranks above c
            let delta = rivals.iter().map(|&d| if r.prefers(d, c) { -1 } else { 1 }).collect();
            (v, delta)
        })
        .collect();

    let mut work = vec![0i64; rivals.len()];
    for size in 0..=n {
        for subset in (0..n).combinations(size) {
            work.copy_from_slice(&margins);
            for &v in &subset {
                for (w, delta) in work.iter_mut().zip(&voters[v].1) {
                    *w += delta;
                }
            }
            if work.iter().all(|&margin| margin + slack <= 0) {
                let witness = subset.iter().map(|&v| Edit::Delete { voter: voters[v].0 }).collect();
                return Ok(ExactResult { score: Score::Finite(size as u64), witness });
            }
        }
    }
    Ok(ExactResult { score: Score::Unscorable, witness: EditSequence::new() })
}

/// Exact score wrapped as a report, for use alongside greedy reports.
pub fn exact_report(
    profile: &Profile,
    c: CandidateId,
    rule: Rule,
    tc: TieConvention,
    limits: &ExactLimits,
) -> Result<ScoreReport> {
    let result = match rule {
        Rule::Dodgson => exact_dodgson_with(profile, c, tc, limits)?,
        Rule::Young => exact_young_with(profile, c, tc, limits)?,
    };
    Ok(ScoreReport {
        candidate: c,
        score: result.score,
        witness: result.witness,
        move_log: Vec::new(),
        rule,
        convention: tc,
        mode: Mode::Exact,
        engine: None,
    })
}

/// Dodgson score by breadth-first search over every sequence of adjacent
/// swaps, with no restriction on which candidates move.
///
/// States pack each ranking into 4-bit cells, so this needs `m <= 16` and
/// `n_live * m <= 32`. Fails once more than `state_budget` profiles have been
/// visited.
pub fn dodgson_by_bfs(profile: &Profile, c: CandidateId, tc: TieConvention, state_budget: usize) -> Result<Score> {
    let c = profile.candidate(c.get())?;
    let m = profile.m();
    let rows = profile.rows();
    let n = rows.len();
    if m > 16 || n * m > 32 {
        return Err(Error::OracleInfeasible {
            candidate: c,
            reason: format!("breadth-first search needs n*m <= 32, got {n}x{m}"),
        });
    }
    let cell = |state: u128, v: usize, p: usize| ((state >> (4 * (v * m + p))) & 0xF) as usize;
    let mut start = 0u128;
    for (v, row) in rows.iter().enumerate() {
        for (p, &cand) in row.iter().enumerate() {
            start |= ((cand - 1) as u128) << (4 * (v * m + p));
        }
    }
    let target = c.get() - 1;
    let slack = match tc {
        TieConvention::Strict => 1,
        TieConvention::Weak => 0,
    };
    let is_goal = |state: u128| -> bool {
        let mut margin = vec![0i64; m];
        for v in 0..n {
            let mut seen_c = false;
            for p in 0..m {
                let cand = cell(state, v, p);
                if cand == target {
                    seen_c = true;
                } else if seen_c {
                    margin[cand] -= 1;
                } else {
                    margin[cand] += 1;
                }
            }
        }
        (0..m).filter(|&d| d != target).all(|d| margin[d] + slack <= 0)
    };

    let mut seen = HashSet::new();
    seen.insert(start);
    let mut frontier = vec![start];
    let mut depth = 0u64;
    while !frontier.is_empty() {
        if frontier.iter().any(|&s| is_goal(s)) {
            return Ok(Score::Finite(depth));
        }
        let mut next = Vec::new();
        for &state in &frontier {
            for v in 0..n {
                for p in 0..m - 1 {
                    let a = cell(state, v, p) as u128;
                    let b = cell(state, v, p + 1) as u128;
                    let lo = 4 * (v * m + p);
                    let mask = (0xFFu128) << lo;
                    let swapped = (state & !mask) | (b << lo) | (a << (lo + 4));
                    if seen.insert(swapped) {
                        next.push(swapped);
                    }
                }
            }
            if seen.len() > state_budget {
                return Err(Error::OracleInfeasible {
                    candidate: c,
                    reason: format!("breadth-first search exceeded {state_budget} states"),
                });
            }
        }
        frontier = next;
        depth += 1;
    }
    Ok(Score::Unscorable)
}
