//! Whole-election scoring and greedy-versus-exact comparison.

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{exact_report, ExactLimits};
use crate::greedy::{greedy_score, Engine, Mode, Rule, Score, ScoreReport};
use crate::profile::{CandidateId, Profile, TieConvention};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScoringOptions {
    pub engine: Engine,
    pub limits: ExactLimits,
}

impl Default for ScoringOptions {
    fn default() -> Self {
        ScoringOptions { engine: Engine::Queue, limits: ExactLimits::default() }
    }
}

/// Candidates sharing one score.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankGroup {
    pub score: Score,
    pub candidates: Vec<CandidateId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElectionResult {
    pub rule: Rule,
    pub mode: Mode,
    pub convention: TieConvention,
    pub reports: Vec<ScoreReport>,
    /// Ascending by score; unscorable candidates last.
    pub ranking: Vec<RankGroup>,
    pub winner_set: Vec<CandidateId>,
}

impl ElectionResult {
    /// Ranks already computed reports.
    pub fn from_reports(rule: Rule, mode: Mode, convention: TieConvention, reports: Vec<ScoreReport>) -> Self {
        let mut order: Vec<(Score, CandidateId)> = reports.iter().map(|r| (r.score, r.candidate)).collect();
        order.sort();
        let mut ranking: Vec<RankGroup> = Vec::new();
        for (score, candidate) in order {
            match ranking.last_mut() {
                Some(group) if group.score == score => group.candidates.push(candidate),
                _ => ranking.push(RankGroup { score, candidates: vec![candidate] }),
            }
        }
        let winner_set = ranking.first().map(|g| g.candidates.clone()).unwrap_or_default();
        ElectionResult { rule, mode, convention, reports, ranking, winner_set }
    }

    pub fn score_of(&self, c: CandidateId) -> Option<Score> {
        self.reports.iter().find(|r| r.candidate == c).map(|r| r.score)
    }

    /// Lowest-numbered member of the winner set.
    pub fn lexicographic_winner(&self) -> Option<CandidateId> {
        self.winner_set.first().copied()
    }

    fn ranking_order(&self) -> Vec<&[CandidateId]> {
        self.ranking.iter().map(|g| g.candidates.as_slice()).collect()
    }
}

pub fn score_candidate(
    profile: &Profile,
    c: CandidateId,
    rule: Rule,
    mode: Mode,
    tc: TieConvention,
    options: &ScoringOptions,
) -> Result<ScoreReport> {
    match mode {
        Mode::Greedy => greedy_score(profile, c, rule, tc, options.engine),
        Mode::Exact => exact_report(profile, c, rule, tc, &options.limits),
    }
}

pub fn score_all(profile: &Profile, rule: Rule, mode: Mode, tc: TieConvention) -> Result<ElectionResult> {
    score_all_with(profile, rule, mode, tc, &ScoringOptions::default())
}

/// Scores every candidate, in parallel. The first failing candidate in
/// candidate order decides the error.
pub fn score_all_with(
    profile: &Profile,
    rule: Rule,
    mode: Mode,
    tc: TieConvention,
    options: &ScoringOptions,
) -> Result<ElectionResult> {
    let candidates: Vec<CandidateId> = profile.candidates().collect();
    let outcomes: Vec<Result<ScoreReport>> =
        candidates.par_iter().map(|&c| score_candidate(profile, c, rule, mode, tc, options)).collect();
    let reports = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(ElectionResult::from_reports(rule, mode, tc, reports))
}

/// `numerator / denominator` for two scores of the same candidate. Two
/// unscorable values compare as equal (1); a finite numerator over an
/// unscorable denominator is 0, the reverse is infinite.
pub fn score_ratio(numerator: Score, denominator: Score) -> f64 {
    match (numerator, denominator) {
        (Score::Finite(a), Score::Finite(b)) => {
            if b == 0 {
                if a == 0 {
                    1.0
                } else {
                    f64::INFINITY
                }
            } else {
                a as f64 / b as f64
            }
        }
        (Score::Unscorable, Score::Unscorable) => 1.0,
        (Score::Unscorable, Score::Finite(_)) => f64::INFINITY,
        (Score::Finite(_), Score::Unscorable) => 0.0,
    }
}

fn serialize_ratio<S: Serializer>(value: &f64, serializer: S) -> Result<S::Ok, S::Error> {
    if value.is_finite() {
        serializer.serialize_f64(*value)
    } else {
        serializer.serialize_str("inf")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateRatio {
    pub candidate: CandidateId,
    pub first: Score,
    pub second: Score,
    #[serde(serialize_with = "serialize_ratio")]
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRecord {
    pub winners_equal: bool,
    pub ranking_equal: bool,
    /// `first / second` per candidate, e.g. greedy over exact.
    pub ratios: Vec<CandidateRatio>,
    #[serde(serialize_with = "serialize_ratio")]
    pub max_ratio: f64,
}

/// Compares two results over the same candidates, typically greedy (`a`)
/// against exact (`b`).
pub fn compare_results(a: &ElectionResult, b: &ElectionResult) -> Result<ComparisonRecord> {
    if a.reports.len() != b.reports.len() {
        return Err(Error::Mismatch(format!("{} candidates versus {}", a.reports.len(), b.reports.len())));
    }
    let mut ratios = Vec::with_capacity(a.reports.len());
    for ra in &a.reports {
        let second = b
            .score_of(ra.candidate)
            .ok_or_else(|| Error::Mismatch(format!("candidate {} missing from second result", ra.candidate)))?;
        ratios.push(CandidateRatio {
            candidate: ra.candidate,
            first: ra.score,
            second,
            ratio: score_ratio(ra.score, second),
        });
    }
    let max_ratio =
        if ratios.is_empty() { 1.0 } else { ratios.iter().map(|r| r.ratio).fold(f64::NEG_INFINITY, f64::max) };
    Ok(ComparisonRecord {
        winners_equal: a.winner_set == b.winner_set,
        ranking_equal: a.ranking_order() == b.ranking_order(),
        ratios,
        max_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::ex5;
    use crate::profile::build_profile;

    fn c(i: usize) -> CandidateId {
        CandidateId::new(i)
    }

    #[test]
    fn ex5_exact_dodgson_of_c() {
        let res = score_all(&ex5(), Rule::Dodgson, Mode::Exact, TieConvention::Strict).unwrap();
        let report = &res.reports[2];
        assert_eq!(report.candidate, c(3));
        assert_eq!(report.score, Score::Finite(4));
        assert_eq!(report.witness.len(), 4);
    }

    #[test]
    fn ex5_exact_young() {
        let res = score_all(&ex5(), Rule::Young, Mode::Exact, TieConvention::Strict).unwrap();
        assert_eq!(res.score_of(c(4)), Some(Score::Finite(2)));
        // a also needs only two deletions (voters 3 and 4)
        assert_eq!(res.score_of(c(1)), Some(Score::Finite(2)));
        assert_eq!(res.winner_set, vec![c(1), c(4)]);
        assert_eq!(res.lexicographic_winner(), Some(c(1)));
        assert_eq!(res.ranking.last().unwrap().score, Score::Unscorable);
    }

    #[test]
    fn condorcet_winner_wins_every_combination() {
        let p = build_profile(&[[2, 1, 3], [1, 2, 3], [2, 3, 1], [3, 2, 1]], 3).unwrap();
        for rule in [Rule::Dodgson, Rule::Young] {
            for mode in [Mode::Greedy, Mode::Exact] {
                let res = score_all(&p, rule, mode, TieConvention::Strict).unwrap();
                assert_eq!(res.winner_set, vec![c(2)], "{rule} {mode}");
                assert_eq!(res.score_of(c(2)), Some(Score::Finite(0)));
            }
        }
    }

    #[test]
    fn identical_results_compare_equal() {
        let res = score_all(&ex5(), Rule::Dodgson, Mode::Greedy, TieConvention::Strict).unwrap();
        let rec = compare_results(&res, &res).unwrap();
        assert!(rec.winners_equal && rec.ranking_equal);
        assert_eq!(rec.max_ratio, 1.0);
    }

    #[test]
    fn ex5_greedy_matches_exact_dodgson() {
        let g = score_all(&ex5(), Rule::Dodgson, Mode::Greedy, TieConvention::Strict).unwrap();
        let e = score_all(&ex5(), Rule::Dodgson, Mode::Exact, TieConvention::Strict).unwrap();
        let rec = compare_results(&g, &e).unwrap();
        assert_eq!(rec.max_ratio, 1.0);
        assert!(rec.ranking_equal);
    }

    #[test]
    fn greedy_overshoot() {
        // Candidate 1 trails 3 and 4 by one swap each. Greedy takes the cheap
        // raise past 3 in voter 1 first and then pays 2 more to pass 4; one
        // two-step raise in voter 2 clears both.
        let p = build_profile(&[[4, 2, 3, 1], [4, 3, 1, 2], [1, 3, 2, 4]], 4).unwrap();
        let g = score_all(&p, Rule::Dodgson, Mode::Greedy, TieConvention::Strict).unwrap();
        let e = score_all(&p, Rule::Dodgson, Mode::Exact, TieConvention::Strict).unwrap();
        assert_eq!(g.score_of(c(1)), Some(Score::Finite(3)));
        assert_eq!(e.score_of(c(1)), Some(Score::Finite(2)));
        let rec = compare_results(&g, &e).unwrap();
        assert_eq!(rec.max_ratio, 1.5);
        assert!(rec.max_ratio <= 1.0 + 4f64.ln());
        assert!(rec.winners_equal);
    }

    #[test]
    fn mismatched_results_are_rejected() {
        let a = score_all(&ex5(), Rule::Dodgson, Mode::Greedy, TieConvention::Strict).unwrap();
        let b = score_all(&build_profile(&[[1, 2]], 2).unwrap(), Rule::Dodgson, Mode::Greedy, TieConvention::Strict)
            .unwrap();
        assert!(matches!(compare_results(&a, &b), Err(Error::Mismatch(_))));
    }

    #[test]
    fn ratios() {
        assert_eq!(score_ratio(Score::Finite(0), Score::Finite(0)), 1.0);
        assert_eq!(score_ratio(Score::Finite(6), Score::Finite(4)), 1.5);
        assert_eq!(score_ratio(Score::Unscorable, Score::Unscorable), 1.0);
        assert!(score_ratio(Score::Unscorable, Score::Finite(3)).is_infinite());
        assert_eq!(score_ratio(Score::Finite(3), Score::Unscorable), 0.0);
    }

    #[test]
    fn infeasible_oracle_names_the_candidate() {
        let rows = vec![[1, 2, 3]; 21];
        let p = build_profile(&rows, 3).unwrap();
        let err = score_all(&p, Rule::Young, Mode::Exact, TieConvention::Strict).unwrap_err();
        assert!(matches!(err, Error::OracleInfeasible { candidate, .. } if candidate == c(1)));
    }
}
