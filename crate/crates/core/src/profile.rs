//! Candidates, voters, rankings and preference profiles, together with the
//! pairwise tally every deficit is read from.
//!
//! Candidates and voters are numbered from 1 on the public surface. A profile
//! keeps a slot for every voter it was built with; deleting a voter empties
//! its slot but never renumbers the others, so edit sequences written against
//! the original numbering stay replayable.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CandidateId(u32);

impl CandidateId {
    /// Wraps a 1-based candidate number.
    ///
    /// Panics if `index` is zero.
    pub fn new(index: usize) -> Self {
        assert!(index >= 1, "candidate numbers start at 1");
        CandidateId(index as u32)
    }

    pub fn get(self) -> usize {
        self.0 as usize
    }

    pub(crate) fn idx(self) -> usize {
        self.0 as usize - 1
    }

    pub(crate) fn from_idx(idx: usize) -> Self {
        CandidateId(idx as u32 + 1)
    }
}

impl fmt::Display for CandidateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VoterId(u32);

impl VoterId {
    /// Wraps a 1-based voter number.
    ///
    /// Panics if `index` is zero.
    pub fn new(index: usize) -> Self {
        assert!(index >= 1, "voter numbers start at 1");
        VoterId(index as u32)
    }

    pub fn get(self) -> usize {
        self.0 as usize
    }

    pub(crate) fn idx(self) -> usize {
        self.0 as usize - 1
    }

    pub(crate) fn from_idx(idx: usize) -> Self {
        VoterId(idx as u32 + 1)
    }
}

impl fmt::Display for VoterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// How a pairwise tie is treated when measuring a deficit.
///
/// `Strict` charges a tie as a one-vote deficit, so a candidate with zero
/// total deficit beats every rival by a strict majority. `Weak` uses the raw
/// clamped margin, so ties count as not trailing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TieConvention {
    #[default]
    Strict,
    Weak,
}

impl TieConvention {
    pub fn as_str(self) -> &'static str {
        match self {
            TieConvention::Strict => "strict",
            TieConvention::Weak => "weak",
        }
    }
}

impl fmt::Display for TieConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TieConvention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(TieConvention::Strict),
            "weak" => Ok(TieConvention::Weak),
            other => Err(format!("unknown tie convention `{other}` (expected strict or weak)")),
        }
    }
}

/// One voter's strict total order, most preferred first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ranking {
    order: Vec<CandidateId>,
    // position[c.idx()] = distance of c from the top
    position: Vec<usize>,
}

impl Ranking {
    fn from_validated(order: Vec<CandidateId>) -> Self {
        let mut position = vec![0; order.len()];
        for (p, c) in order.iter().enumerate() {
            position[c.idx()] = p;
        }
        Ranking { order, position }
    }

    pub fn order(&self) -> &[CandidateId] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Number of candidates ranked above `c`.
    pub fn position(&self, c: CandidateId) -> usize {
        self.position[c.idx()]
    }

    /// Number of candidates ranked below `c`.
    pub fn below_count(&self, c: CandidateId) -> usize {
        self.order.len() - 1 - self.position[c.idx()]
    }

    pub fn prefers(&self, a: CandidateId, b: CandidateId) -> bool {
        self.position[a.idx()] < self.position[b.idx()]
    }

    /// Candidate at distance `p` from the top.
    pub fn at(&self, p: usize) -> CandidateId {
        self.order[p]
    }

    /// Exchanges the candidates at positions `p` and `p + 1`.
    pub(crate) fn swap_down(&mut self, p: usize) {
        self.order.swap(p, p + 1);
        self.position[self.order[p].idx()] = p;
        self.position[self.order[p + 1].idx()] = p + 1;
    }
}

/// Pairwise preference counts over the live voters.
///
/// `count(d, c)` is the number of live voters ranking `d` above `c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TallyMatrix {
    m: usize,
    n_live: usize,
    counts: Vec<u32>,
}

impl TallyMatrix {
    fn zeroed(m: usize) -> Self {
        TallyMatrix { m, n_live: 0, counts: vec![0; m * m] }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n_live(&self) -> usize {
        self.n_live
    }

    /// Voters ranking `d` above `c`.
    pub fn count(&self, d: CandidateId, c: CandidateId) -> u32 {
        self.counts[d.idx() * self.m + c.idx()]
    }

    /// How far `c` trails `d`: voters preferring `d` minus voters preferring `c`.
    pub fn margin(&self, c: CandidateId, d: CandidateId) -> i64 {
        self.count(d, c) as i64 - self.count(c, d) as i64
    }

    pub(crate) fn deficit_unchecked(&self, c: CandidateId, d: CandidateId, tc: TieConvention) -> u32 {
        let margin = self.margin(c, d);
        let raw = match tc {
            TieConvention::Strict => margin + 1,
            TieConvention::Weak => margin,
        };
        raw.max(0) as u32
    }

    fn add_ballot(&mut self, ranking: &Ranking) {
        let order = ranking.order();
        for (p, &above) in order.iter().enumerate() {
            for &below in &order[p + 1..] {
                self.counts[above.idx() * self.m + below.idx()] += 1;
            }
        }
        self.n_live += 1;
    }

    fn remove_ballot(&mut self, ranking: &Ranking) {
        let order = ranking.order();
        for (p, &above) in order.iter().enumerate() {
            for &below in &order[p + 1..] {
                self.counts[above.idx() * self.m + below.idx()] -= 1;
            }
        }
        self.n_live -= 1;
    }

    /// `upper` was directly above `lower` in some ballot and now is directly below it.
    fn flip(&mut self, upper: CandidateId, lower: CandidateId) {
        self.counts[upper.idx() * self.m + lower.idx()] -= 1;
        self.counts[lower.idx() * self.m + upper.idx()] += 1;
    }
}

/// A preference profile: one strict ranking per voter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Profile {
    m: usize,
    rankings: Vec<Option<Ranking>>,
    n_live: usize,
    tally: TallyMatrix,
}

impl Profile {
    /// Builds a profile from rows of 1-based candidate numbers, most
    /// preferred first. Voters are numbered 1..=n in row order.
    pub fn new<R: AsRef<[usize]>>(rows: &[R], m: usize) -> Result<Self> {
        if m < 1 {
            return Err(Error::NoCandidates);
        }
        if rows.is_empty() {
            return Err(Error::NoVoters);
        }
        let mut rankings = Vec::with_capacity(rows.len());
        let mut tally = TallyMatrix::zeroed(m);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            let voter = i + 1;
            if row.len() != m {
                return Err(Error::RankingLength { voter, len: row.len(), m });
            }
            let mut seen = vec![false; m];
            let mut order = Vec::with_capacity(m);
            for &candidate in row {
                if candidate < 1 || candidate > m {
                    return Err(Error::CandidateOutOfRange { voter, candidate, m });
                }
                if std::mem::replace(&mut seen[candidate - 1], true) {
                    return Err(Error::DuplicateCandidate { voter, candidate });
                }
                order.push(CandidateId::new(candidate));
            }
            let ranking = Ranking::from_validated(order);
            tally.add_ballot(&ranking);
            rankings.push(Some(ranking));
        }
        Ok(Profile { m, n_live: rankings.len(), rankings, tally })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of voters the profile was built with, live or deleted.
    pub fn n_original(&self) -> usize {
        self.rankings.len()
    }

    pub fn n_live(&self) -> usize {
        self.n_live
    }

    pub fn tally(&self) -> &TallyMatrix {
        &self.tally
    }

    pub fn ranking(&self, voter: VoterId) -> Option<&Ranking> {
        self.rankings.get(voter.idx()).and_then(Option::as_ref)
    }

    pub fn is_live(&self, voter: VoterId) -> bool {
        self.ranking(voter).is_some()
    }

    /// Live voters in increasing voter order.
    pub fn live_voters(&self) -> impl Iterator<Item = (VoterId, &Ranking)> + '_ {
        self.rankings.iter().enumerate().filter_map(|(i, r)| r.as_ref().map(|r| (VoterId::from_idx(i), r)))
    }

    pub fn candidates(&self) -> impl Iterator<Item = CandidateId> {
        (0..self.m).map(CandidateId::from_idx)
    }

    /// Validates a 1-based candidate number against this profile.
    pub fn candidate(&self, index: usize) -> Result<CandidateId> {
        if index >= 1 && index <= self.m {
            Ok(CandidateId::new(index))
        } else {
            Err(Error::UnknownCandidate(index))
        }
    }

    /// Live rankings as rows of candidate numbers.
    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.live_voters().map(|(_, r)| r.order().iter().map(|c| c.get()).collect()).collect()
    }

    /// Exchanges the candidates at positions `p` and `p + 1` of a live voter's
    /// ranking and keeps the tally in step.
    pub(crate) fn swap_at(&mut self, voter: VoterId, p: usize) {
        let ranking = self.rankings[voter.idx()].as_mut().expect("live voter");
        let upper = ranking.at(p);
        let lower = ranking.at(p + 1);
        ranking.swap_down(p);
        self.tally.flip(upper, lower);
    }

    pub(crate) fn remove_voter(&mut self, voter: VoterId) -> Ranking {
        let ranking = self.rankings[voter.idx()].take().expect("live voter");
        self.tally.remove_ballot(&ranking);
        self.n_live -= 1;
        ranking
    }
}

/// Shorthand for [`Profile::new`].
pub fn build_profile<R: AsRef<[usize]>>(rows: &[R], m: usize) -> Result<Profile> {
    Profile::new(rows, m)
}

/// Recounts the pairwise tally of the live voters from scratch.
pub fn pairwise_tally(profile: &Profile) -> TallyMatrix {
    let mut tally = TallyMatrix::zeroed(profile.m());
    for (_, ranking) in profile.live_voters() {
        tally.add_ballot(ranking);
    }
    tally
}

/// Deficit of `c` against `d` under the given convention.
pub fn deficit(tally: &TallyMatrix, c: CandidateId, d: CandidateId, tc: TieConvention) -> Result<u32> {
    if c == d {
        return Err(Error::SelfDeficit(c));
    }
    Ok(tally.deficit_unchecked(c, d, tc))
}

/// Sum of `c`'s deficits against every rival (the Tideman score).
pub fn total_deficit(tally: &TallyMatrix, c: CandidateId, tc: TieConvention) -> u64 {
    (0..tally.m())
        .map(CandidateId::from_idx)
        .filter(|&d| d != c)
        .map(|d| tally.deficit_unchecked(c, d, tc) as u64)
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CondorcetStatus {
    Winner(CandidateId),
    /// More than one candidate has zero total deficit (weak convention only).
    Tied(Vec<CandidateId>),
    None,
}

pub fn condorcet_status(profile: &Profile, tc: TieConvention) -> CondorcetStatus {
    let tally = profile.tally();
    let zero: Vec<CandidateId> = profile.candidates().filter(|&c| total_deficit(tally, c, tc) == 0).collect();
    match zero.len() {
        0 => CondorcetStatus::None,
        1 => CondorcetStatus::Winner(zero[0]),
        _ => CondorcetStatus::Tied(zero),
    }
}

/// The unique candidate with zero total deficit, if there is one.
pub fn condorcet_winner(profile: &Profile, tc: TieConvention) -> Option<CandidateId> {
    match condorcet_status(profile, tc) {
        CondorcetStatus::Winner(c) => Some(c),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::ex5;

    fn c(i: usize) -> CandidateId {
        CandidateId::new(i)
    }

    #[test]
    fn builds_ex5() {
        let p = ex5();
        assert_eq!(p.m(), 5);
        assert_eq!(p.n_live(), 5);
        assert_eq!(p.ranking(VoterId::new(3)).unwrap().order()[0], c(4));
    }

    #[test]
    fn smallest_profile() {
        let p = build_profile(&[[1]], 1).unwrap();
        assert_eq!(p.n_live(), 1);
        assert_eq!(condorcet_winner(&p, TieConvention::Strict), Some(c(1)));
        assert_eq!(condorcet_winner(&p, TieConvention::Weak), Some(c(1)));
    }

    #[test]
    fn rejects_bad_rows() {
        assert_eq!(build_profile(&[[1, 1, 3]], 3), Err(Error::DuplicateCandidate { voter: 1, candidate: 1 }));
        assert_eq!(build_profile(&[[1, 4, 2]], 3), Err(Error::CandidateOutOfRange { voter: 1, candidate: 4, m: 3 }));
        assert_eq!(build_profile(&[vec![1, 2], vec![2]], 2), Err(Error::RankingLength { voter: 2, len: 1, m: 2 }));
        assert_eq!(build_profile::<Vec<usize>>(&[], 2), Err(Error::NoVoters));
        assert_eq!(build_profile(&[Vec::<usize>::new()], 0), Err(Error::NoCandidates));
    }

    #[test]
    fn ranking_positions() {
        let p = ex5();
        let r = p.ranking(VoterId::new(1)).unwrap();
        assert_eq!(r.below_count(c(1)), 4);
        assert_eq!(r.below_count(c(3)), 2);
        assert_eq!(r.position(c(3)), 2);
        assert!(r.prefers(c(2), c(3)));
    }

    #[test]
    fn ex5_tallies() {
        let t = pairwise_tally(&ex5());
        assert_eq!(t.count(c(1), c(3)), 4);
        assert_eq!(t.count(c(3), c(1)), 1);
        assert_eq!(t.count(c(2), c(4)), 3);
        assert_eq!(t.count(c(4), c(2)), 2);
        assert_eq!(&t, ex5().tally());
    }

    #[test]
    fn single_ballot_tally() {
        let t = pairwise_tally(&build_profile(&[[1, 2]], 2).unwrap());
        assert_eq!(t.count(c(1), c(2)), 1);
        assert_eq!(t.count(c(2), c(1)), 0);
    }

    #[test]
    fn ex5_deficits() {
        let p = ex5();
        let t = p.tally();
        assert_eq!(deficit(t, c(3), c(1), TieConvention::Strict), Ok(4));
        assert_eq!(deficit(t, c(3), c(2), TieConvention::Strict), Ok(0));
        assert_eq!(deficit(t, c(4), c(3), TieConvention::Weak), Ok(1));
        assert_eq!(deficit(t, c(3), c(3), TieConvention::Strict), Err(Error::SelfDeficit(c(3))));
        assert_eq!(total_deficit(t, c(3), TieConvention::Strict), 4);
        assert_eq!(total_deficit(t, c(4), TieConvention::Strict), 4);
        assert_eq!(total_deficit(t, c(3), TieConvention::Weak), 3);
    }

    #[test]
    fn unanimous_first_choice_has_no_deficit() {
        let p = build_profile(&[[2, 1, 3], [2, 3, 1], [2, 1, 3]], 3).unwrap();
        assert_eq!(total_deficit(p.tally(), c(2), TieConvention::Strict), 0);
        assert_eq!(condorcet_winner(&p, TieConvention::Strict), Some(c(2)));
    }

    #[test]
    fn ex5_has_no_condorcet_winner() {
        assert_eq!(condorcet_winner(&ex5(), TieConvention::Strict), None);
        assert_eq!(condorcet_winner(&ex5(), TieConvention::Weak), None);
    }

    #[test]
    fn ex5_without_first_two_voters_elects_d() {
        let mut p = ex5();
        p.remove_voter(VoterId::new(1));
        p.remove_voter(VoterId::new(2));
        assert_eq!(condorcet_winner(&p, TieConvention::Strict), Some(c(4)));
        assert_eq!(p.n_live(), 3);
        assert_eq!(&pairwise_tally(&p), p.tally());
    }

    #[test]
    fn weak_ties_are_flagged() {
        let p = build_profile(&[[1, 2], [2, 1]], 2).unwrap();
        assert_eq!(condorcet_status(&p, TieConvention::Weak), CondorcetStatus::Tied(vec![c(1), c(2)]));
        assert_eq!(condorcet_status(&p, TieConvention::Strict), CondorcetStatus::None);
        assert_eq!(deficit(p.tally(), c(1), c(2), TieConvention::Strict), Ok(1));
        assert_eq!(deficit(p.tally(), c(2), c(1), TieConvention::Strict), Ok(1));
    }

    #[test]
    fn empty_profile_deficits() {
        let mut p = build_profile(&[[1, 2]], 2).unwrap();
        p.remove_voter(VoterId::new(1));
        assert_eq!(deficit(p.tally(), c(1), c(2), TieConvention::Weak), Ok(0));
        assert_eq!(deficit(p.tally(), c(1), c(2), TieConvention::Strict), Ok(1));
    }
}
