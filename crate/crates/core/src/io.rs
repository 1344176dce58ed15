//! Ballot file formats.
//!
//! Native format: an `m n` header line followed by `n` rows of `m`
//! space-separated candidate numbers, most preferred first. Lines starting
//! with `#` and blank lines are ignored anywhere.
//!
//! SOC format (strict orders, complete lists): `#` metadata lines, then data
//! lines `count: c1,c2,...,cm`. Each data line expands into `count` identical
//! voters in file order.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::Profile;

/// Refuse to expand SOC multiplicities past this many voters.
pub const MAX_EXPANDED_VOTERS: usize = 1_000_000;
/// Refuse to expand SOC multiplicities past this many ballot entries.
pub const MAX_EXPANDED_CELLS: usize = 20_000_000;
/// Refuse more candidates than this; the tally grows with the square.
pub const MAX_CANDIDATES: usize = 2_048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BallotFormat {
    Native,
    Soc,
}

impl BallotFormat {
    /// `.soc` files are SOC, everything else native.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("soc") => BallotFormat::Soc,
            _ => BallotFormat::Native,
        }
    }
}

impl fmt::Display for BallotFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BallotFormat::Native => "native",
            BallotFormat::Soc => "soc",
        })
    }
}

impl FromStr for BallotFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "native" => Ok(BallotFormat::Native),
            "soc" => Ok(BallotFormat::Soc),
            other => Err(format!("unknown ballot format `{other}` (expected native or soc)")),
        }
    }
}

pub fn parse_profile(path: &Path, format: BallotFormat) -> Result<Profile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_str(&text, format)
}

pub fn parse_str(text: &str, format: BallotFormat) -> Result<Profile> {
    match format {
        BallotFormat::Native => parse_native(text),
        BallotFormat::Soc => parse_soc(text),
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_number(line: usize, token: &str) -> Result<usize> {
    token.parse::<usize>().map_err(|_| parse_error(line, format!("`{token}` is not a non-negative integer")))
}

/// Builds the profile, reporting ranking faults at the line of the offending row.
fn build_at_lines(rows: &[Vec<usize>], row_lines: &[usize], m: usize, fallback_line: usize) -> Result<Profile> {
    Profile::new(rows, m).map_err(|e| {
        let voter = match e {
            Error::RankingLength { voter, .. }
            | Error::DuplicateCandidate { voter, .. }
            | Error::CandidateOutOfRange { voter, .. } => Some(voter),
            _ => None,
        };
        let line = voter.and_then(|v| row_lines.get(v - 1).copied()).unwrap_or(fallback_line);
        parse_error(line, e.to_string())
    })
}

pub fn parse_native(text: &str) -> Result<Profile> {
    let mut lines = content_lines(text);
    let (header_line, header) = lines.next().ok_or_else(|| parse_error(1, "missing `m n` header"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [m, n] = fields.as_slice() else {
        return Err(parse_error(header_line, format!("expected `m n` header, found `{header}`")));
    };
    let m = parse_number(header_line, m)?;
    let n = parse_number(header_line, n)?;
    if !(1..=MAX_CANDIDATES).contains(&m) {
        return Err(parse_error(header_line, format!("candidate count {m} outside 1..={MAX_CANDIDATES}")));
    }
    if n < 1 {
        return Err(parse_error(header_line, "voter count must be at least 1"));
    }

    let mut rows = Vec::new();
    let mut row_lines = Vec::new();
    let mut last_line = header_line;
    for (line, content) in lines {
        last_line = line;
        if rows.len() == n {
            return Err(parse_error(line, format!("more than the declared {n} ballots")));
        }
        let row = content.split_whitespace().map(|t| parse_number(line, t)).collect::<Result<Vec<_>>>()?;
        if row.len() != m {
            return Err(parse_error(line, format!("ballot has {} entries, expected {m}", row.len())));
        }
        rows.push(row);
        row_lines.push(line);
    }
    if rows.len() < n {
        return Err(parse_error(last_line + 1, format!("declared {n} ballots but found {}", rows.len())));
    }
    build_at_lines(&rows, &row_lines, m, header_line)
}

/// Native text for the live voters of `profile`.
pub fn write_native(profile: &Profile) -> String {
    let rows = profile.rows();
    let mut out = format!("{} {}\n", profile.m(), rows.len());
    for row in rows {
        let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

fn header_value(line: usize, body: &str) -> Result<Option<(String, usize)>> {
    let Some((key, value)) = body.split_once(':') else {
        return Ok(None);
    };
    let key = key.trim().to_ascii_uppercase();
    if key == "NUMBER ALTERNATIVES" || key == "NUMBER VOTERS" {
        let v = parse_number(line, value.trim())?;
        return Ok(Some((key, v)));
    }
    Ok(None)
}

pub fn parse_soc(text: &str) -> Result<Profile> {
    let mut declared_m = None;
    let mut declared_n = None;
    let mut m = None;
    let mut rows: Vec<Vec<usize>> = Vec::new();
    let mut row_lines = Vec::new();
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let content = raw.trim();
        if content.is_empty() {
            continue;
        }
        if let Some(body) = content.strip_prefix('#') {
            match header_value(line, body)? {
                Some((key, v)) if key == "NUMBER ALTERNATIVES" => {
                    if !(1..=MAX_CANDIDATES).contains(&v) {
                        return Err(parse_error(line, format!("candidate count {v} outside 1..={MAX_CANDIDATES}")));
                    }
                    declared_m = Some(v);
                    m = m.or(Some(v));
                }
                Some((_, v)) => declared_n = Some(v),
                None => {}
            }
            continue;
        }
        let (count, order) = content
            .split_once(':')
            .ok_or_else(|| parse_error(line, format!("expected `count: c1,...,cm`, found `{content}`")))?;
        let count = parse_number(line, count.trim())?;
        let order = order.split(',').map(|t| parse_number(line, t.trim())).collect::<Result<Vec<_>>>()?;
        let width = *m.get_or_insert(order.len());
        if order.len() != width {
            return Err(parse_error(line, format!("order has {} entries, expected {width}", order.len())));
        }
        if width > MAX_CANDIDATES {
            return Err(parse_error(line, format!("more than {MAX_CANDIDATES} candidates")));
        }
        let voters = rows.len().saturating_add(count);
        if voters > MAX_EXPANDED_VOTERS || voters.saturating_mul(width) > MAX_EXPANDED_CELLS {
            return Err(parse_error(
                line,
                format!("expansion exceeds {MAX_EXPANDED_VOTERS} voters or {MAX_EXPANDED_CELLS} ballot entries"),
            ));
        }
        for _ in 0..count {
            rows.push(order.clone());
            row_lines.push(line);
        }
    }

    let m = m.ok_or_else(|| parse_error(last_line.max(1), "no candidates declared and no orders given"))?;
    if let Some(dm) = declared_m {
        if dm != m {
            return Err(parse_error(last_line.max(1), format!("header declares {dm} alternatives, orders have {m}")));
        }
    }
    if rows.is_empty() {
        return Err(parse_error(last_line.max(1), "no voters"));
    }
    if let Some(dn) = declared_n {
        if dn != rows.len() {
            return Err(parse_error(
                last_line.max(1),
                format!("header declares {dn} voters, orders expand to {}", rows.len()),
            ));
        }
    }
    build_at_lines(&rows, &row_lines, m, last_line.max(1))
}
