//! Text formats consumed by the command-line tool: particle configurations
//! and quantum-number ranges.

use thiserror::Error;

use crate::manybody::ParticleConfig;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("invalid particle configuration: {0}")]
    Config(String),
    #[error("invalid range `{0}`: expected `N`, `A..B` (inclusive) or `all`")]
    Range(String),
}

/// Parses `{"z0": r, "points": [[re, im], ...]}`.
pub fn parse_particle_config(text: &str) -> Result<ParticleConfig, ParseError> {
    serde_json::from_str(text).map_err(|e| ParseError::Config(e.to_string()))
}

/// A selection of level labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LevelRange {
    /// Every level the geometry admits (only meaningful when finite).
    All,
    /// `lo..=hi`.
    Span { lo: u32, hi: u32 },
}

impl LevelRange {
    /// Concrete labels, clipping `All` to `available` levels.
    pub fn labels(&self, available: Option<u32>) -> Option<Vec<u32>> {
        match *self {
            LevelRange::Span { lo, hi } => Some((lo..=hi).collect()),
            LevelRange::All => available.map(|n| (0..n).collect()),
        }
    }
}

/// Longest span accepted, to keep outputs at desk scale.
pub const MAX_SPAN: u32 = 100_000;

/// Parses `all`, a single label `N`, or an inclusive span `A..B`.
pub fn parse_range(text: &str) -> Result<LevelRange, ParseError> {
    let t = text.trim();
    let bad = || ParseError::Range(text.to_string());
    if t.eq_ignore_ascii_case("all") {
        return Ok(LevelRange::All);
    }
    let num = |s: &str| -> Result<u32, ParseError> {
        let s = s.trim();
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        s.parse().map_err(|_| bad())
    };
    let (lo, hi) = match t.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let n = num(t)?;
            (n, n)
        }
    };
    if lo > hi || hi - lo > MAX_SPAN {
        return Err(bad());
    }
    Ok(LevelRange::Span { lo, hi })
}
