use thiserror::Error;

use crate::profile::{CandidateId, VoterId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("profile must have at least one candidate")]
    NoCandidates,
    #[error("profile must have at least one voter")]
    NoVoters,
    #[error("ranking of voter {voter} has {len} entries, expected {m}")]
    RankingLength { voter: usize, len: usize, m: usize },
    #[error("ranking of voter {voter} lists candidate {candidate} more than once")]
    DuplicateCandidate { voter: usize, candidate: usize },
    #[error("ranking of voter {voter} names candidate {candidate}, outside 1..={m}")]
    CandidateOutOfRange { voter: usize, candidate: usize, m: usize },
    #[error("candidate {0} does not exist in this profile")]
    UnknownCandidate(usize),
    #[error("a candidate has no deficit against itself ({0})")]
    SelfDeficit(CandidateId),
    #[error("edit {index} cannot be applied: {reason}")]
    InapplicableEdit { index: usize, reason: EditFault },
    #[error("oracle infeasible for candidate {candidate}: {reason}")]
    OracleInfeasible { candidate: CandidateId, reason: String },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("results are not comparable: {0}")]
    Mismatch(String),
}

/// Why a single edit could not be applied.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EditFault {
    #[error("voter {0} is not live")]
    DeadVoter(VoterId),
    #[error("boundary {boundary} is outside 1..{m}")]
    Boundary { boundary: usize, m: usize },
}

impl Error {
    /// Short machine-readable tag, used in CLI error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NoCandidates | Error::NoVoters => "empty_profile",
            Error::RankingLength { .. } | Error::DuplicateCandidate { .. } | Error::CandidateOutOfRange { .. } => {
                "invalid_ranking"
            }
            Error::UnknownCandidate(_) => "unknown_candidate",
            Error::SelfDeficit(_) => "self_deficit",
            Error::InapplicableEdit { .. } => "inapplicable_edit",
            Error::OracleInfeasible { .. } => "oracle_infeasible",
            Error::Parse { .. } => "parse",
            Error::Io(_) => "io",
            Error::Config(_) => "config",
            Error::Mismatch(_) => "mismatch",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
