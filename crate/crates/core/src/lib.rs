//! Greedy marginal-cost approximations of the Dodgson and Young election
//! scores.
//!
//! Both scores measure how far a preference profile is from one in which a
//! given candidate is the Condorcet winner: Dodgson counts adjacent swaps in
//! ballots, Young counts deleted ballots. Computing either exactly is
//! NP-hard. The greedy scorers here repeatedly apply the single-voter move
//! with the fewest edits per deficit reduction; the Dodgson variant is
//! within a factor `1 + ln m` of the optimum. Exhaustive oracles, election
//! ranking, ballot-file parsing and a benchmark harness are included.
//!
//! ```
//! use greedyvote::{fixtures, greedy_score, CandidateId, Engine, Rule, Score, TieConvention};
//!
//! let profile = fixtures::ex5();
//! let report = greedy_score(&profile, CandidateId::new(3), Rule::Dodgson, TieConvention::Strict, Engine::Queue)?;
//! assert_eq!(report.score, Score::Finite(4));
//! # Ok::<(), greedyvote::Error>(())
//! ```

pub mod bench;
pub mod edit;
pub mod election;
pub mod error;
pub mod exact;
pub mod fixtures;
pub mod generate;
pub mod greedy;
pub mod io;
pub mod profile;

pub use edit::{
    apply_edit, apply_sequence, deficit_reduction_trace, is_condorcet_sequence, parse_witness, DeficitReduction, Edit,
    EditSequence,
};
pub use election::{compare_results, score_all, score_all_with, ComparisonRecord, ElectionResult, ScoringOptions};
pub use error::{EditFault, Error, Result};
pub use exact::{dodgson_by_bfs, exact_dodgson, exact_young, ExactLimits, ExactResult};
pub use generate::generate_impartial_culture;
pub use greedy::{
    enumerate_dodgson_moves, enumerate_young_moves, greedy_score, marginal_cost, Engine, MarginalCost, Mode, Move,
    MoveKind, Rule, Score, ScoreReport,
};
pub use io::{parse_profile, BallotFormat};
pub use profile::{
    build_profile, condorcet_status, condorcet_winner, deficit, pairwise_tally, total_deficit, CandidateId,
    CondorcetStatus, Profile, Ranking, TallyMatrix, TieConvention, VoterId,
};
