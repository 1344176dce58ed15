//! Swap and deletion edits, their application to profiles, and the
//! deficit-reduction trace of an edit sequence.
//!
//! A swap is written `(voter, j)` and exchanges the two adjacent candidates of
//! that voter whose below-counts are `j` and `j - 1`, for `0 < j < m`. Raising
//! a candidate with below-count `b` by one place is therefore the swap
//! `(voter, b + 1)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{EditFault, Error, Result};
use crate::profile::{total_deficit, CandidateId, Profile, TieConvention, VoterId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Edit {
    Swap { voter: VoterId, boundary: usize },
    Delete { voter: VoterId },
}

impl Edit {
    pub fn swap(voter: usize, boundary: usize) -> Self {
        Edit::Swap { voter: VoterId::new(voter), boundary }
    }

    pub fn delete(voter: usize) -> Self {
        Edit::Delete { voter: VoterId::new(voter) }
    }

    pub fn voter(&self) -> VoterId {
        match *self {
            Edit::Swap { voter, .. } | Edit::Delete { voter } => voter,
        }
    }
}

impl fmt::Display for Edit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Edit::Swap { voter, boundary } => write!(f, "swap {voter} {boundary}"),
            Edit::Delete { voter } => write!(f, "delete {voter}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EditSequence(pub Vec<Edit>);

impl EditSequence {
    pub fn new() -> Self {
        EditSequence(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, e: Edit) {
        self.0.push(e);
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Edit> {
        self.0.iter()
    }

    /// Line-oriented witness form: one `swap v j` or `delete v` per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.0 {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }
}

impl FromIterator<Edit> for EditSequence {
    fn from_iter<I: IntoIterator<Item = Edit>>(iter: I) -> Self {
        EditSequence(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a EditSequence {
    type Item = &'a Edit;
    type IntoIter = std::slice::Iter<'a, Edit>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Parses the witness text form. Blank lines and `#` comments are skipped.
pub fn parse_witness(text: &str) -> Result<EditSequence> {
    let mut seq = EditSequence::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse { line: i + 1, message };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let number = |s: &str| -> Result<usize> {
            s.parse::<usize>().map_err(|_| err(format!("`{s}` is not a non-negative integer")))
        };
        let voter = |s: &str| -> Result<VoterId> {
            match number(s)? {
                0 => Err(err("voter numbers start at 1".into())),
                v if v > u32::MAX as usize => Err(err(format!("voter number {v} is too large"))),
                v => Ok(VoterId::new(v)),
            }
        };
        let edit = match fields.as_slice() {
            ["swap", v, j] => Edit::Swap { voter: voter(v)?, boundary: number(j)? },
            ["delete", v] => Edit::Delete { voter: voter(v)? },
            _ => return Err(err(format!("expected `swap <voter> <j>` or `delete <voter>`, found `{line}`"))),
        };
        seq.push(edit);
    }
    Ok(seq)
}

impl Profile {
    /// Applies one edit in place. On error the profile is unchanged.
    pub fn apply(&mut self, e: &Edit) -> Result<(), EditFault> {
        match *e {
            Edit::Swap { voter, boundary } => {
                if !self.is_live(voter) {
                    return Err(EditFault::DeadVoter(voter));
                }
                let m = self.m();
                if boundary == 0 || boundary >= m {
                    return Err(EditFault::Boundary { boundary, m });
                }
                // below-count j sits at distance m - 1 - j from the top
                self.swap_at(voter, m - 1 - boundary);
            }
            Edit::Delete { voter } => {
                if !self.is_live(voter) {
                    return Err(EditFault::DeadVoter(voter));
                }
                self.remove_voter(voter);
            }
        }
        Ok(())
    }
}

pub fn apply_edit(profile: &Profile, e: &Edit) -> Result<Profile> {
    let mut out = profile.clone();
    out.apply(e).map_err(|reason| Error::InapplicableEdit { index: 0, reason })?;
    Ok(out)
}

/// Applies the edits left to right. The error names the 0-based index of the
/// first edit that could not be applied.
pub fn apply_sequence(profile: &Profile, s: &EditSequence) -> Result<Profile> {
    let mut out = profile.clone();
    for (index, e) in s.iter().enumerate() {
        out.apply(e).map_err(|reason| Error::InapplicableEdit { index, reason })?;
    }
    Ok(out)
}

/// One edit strictly lowering one of `c`'s pairwise deficits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeficitReduction {
    /// Index of the triggering edit in the replayed sequence.
    pub step_index: usize,
    pub c: CandidateId,
    pub d: CandidateId,
    pub deficit_before: u32,
    pub deficit_after: u32,
}

/// Replays `s` on `profile` and records every (edit, opponent) pair at which
/// `c`'s deficit against that opponent strictly drops, in application order.
pub fn deficit_reduction_trace(
    profile: &Profile,
    c: CandidateId,
    s: &EditSequence,
    tc: TieConvention,
) -> Result<Vec<DeficitReduction>> {
    let c = profile.candidate(c.get())?;
    let opponents: Vec<CandidateId> = profile.candidates().filter(|&d| d != c).collect();
    let mut work = profile.clone();
    let mut before: Vec<u32> = opponents.iter().map(|&d| work.tally().deficit_unchecked(c, d, tc)).collect();
    let mut trace = Vec::new();
    for (step_index, e) in s.iter().enumerate() {
        work.apply(e).map_err(|reason| Error::InapplicableEdit { index: step_index, reason })?;
        for (slot, &d) in opponents.iter().enumerate() {
            let after = work.tally().deficit_unchecked(c, d, tc);
            if after < before[slot] {
                trace.push(DeficitReduction { step_index, c, d, deficit_before: before[slot], deficit_after: after });
            }
            before[slot] = after;
        }
    }
    Ok(trace)
}

/// Whether applying `s` leaves `c` with zero total deficit.
pub fn is_condorcet_sequence(profile: &Profile, c: CandidateId, s: &EditSequence, tc: TieConvention) -> Result<bool> {
    let c = profile.candidate(c.get())?;
    let after = apply_sequence(profile, s)?;
    Ok(total_deficit(after.tally(), c, tc) == 0)
}
