//! Counter bounds for instrumented runs.
//!
//! For a word of letter length `n` with `γ0 = max |γ_j|`:
//!
//! * every query spells a word of at most `n` letters over indices
//!   `<= ⌊log2 4γ0⌋ <= Lg(n)`, so its code has length `<= n·Lg(Lg(n))`;
//! * the word problem inspects `6γ0 + 1` sections and at most `2η0 + 3 <= 2n + 3`
//!   points of each;
//! * membership additionally inspects the section at `s¹`.

use serde::Serialize;

use crate::embed::conjugate_normal_form;
use crate::oracles::OracleStats;
use crate::words::{floor_log2, lg, saturating_u64, CsWord};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub limit: u64,
    pub observed: u64,
    pub pass: bool,
}

impl BoundCheck {
    pub fn new(name: impl Into<String>, limit: u64, observed: u64) -> Self {
        Self {
            name: name.into(),
            limit,
            observed,
            pass: observed <= limit,
        }
    }
}

/// Letter length and `γ0` of a word, saturated to `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordMeasure {
    pub letter_length: u64,
    pub gamma0: u64,
}

impl WordMeasure {
    pub fn of(word: &CsWord) -> Self {
        let gamma0 = conjugate_normal_form(word).gamma0().magnitude().clone();
        Self {
            letter_length: saturating_u64(&word.letter_length()),
            gamma0: saturating_u64(&gamma0),
        }
    }
}

/// `n·Lg(Lg(n))`, stated for `n >= 2`.
pub fn query_length_limit(n: u64) -> Option<u64> {
    (n >= 2).then(|| n.saturating_mul(lg(lg(n))))
}

/// `(6γ0 + 1)(2n + 3)`.
pub fn decide_query_limit(gamma0: u64, n: u64) -> u64 {
    gamma0
        .saturating_mul(6)
        .saturating_add(1)
        .saturating_mul(n.saturating_mul(2).saturating_add(3))
}

/// `(6γ0 + 3)(2n + 3)`.
pub fn member_query_limit(gamma0: u64, n: u64) -> u64 {
    gamma0
        .saturating_mul(6)
        .saturating_add(3)
        .saturating_mul(n.saturating_mul(2).saturating_add(3))
}

/// `⌊log2 4γ0⌋`, stated for `γ0 >= 1`.
pub fn query_index_limit(gamma0: u64) -> Option<u64> {
    (gamma0 >= 1).then(|| floor_log2(gamma0.saturating_mul(4)))
}

fn shared_checks(measure: WordMeasure, stats: &OracleStats) -> Vec<BoundCheck> {
    let mut checks = vec![BoundCheck::new(
        "gamma0_le_length",
        measure.letter_length,
        measure.gamma0,
    )];
    if let Some(limit) = query_length_limit(measure.letter_length) {
        checks.push(BoundCheck::new(
            "query_code_length",
            limit,
            stats.max_code_length,
        ));
    }
    if stats.query_count > 0 {
        let limit = query_index_limit(measure.gamma0).unwrap_or(0);
        checks.push(BoundCheck::new(
            "query_generator_index",
            limit,
            stats.max_generator_index,
        ));
    }
    checks
}

/// Checks for one word-problem call, given the stats of that call alone.
pub fn decide_checks(measure: WordMeasure, stats: &OracleStats) -> Vec<BoundCheck> {
    let mut checks = vec![BoundCheck::new(
        "query_count",
        decide_query_limit(measure.gamma0, measure.letter_length),
        stats.query_count,
    )];
    checks.extend(shared_checks(measure, stats));
    checks
}

/// Checks for one membership call, given the stats of that call alone.
pub fn member_checks(measure: WordMeasure, stats: &OracleStats) -> Vec<BoundCheck> {
    let mut checks = vec![BoundCheck::new(
        "query_count",
        member_query_limit(measure.gamma0, measure.letter_length),
        stats.query_count,
    )];
    checks.extend(shared_checks(measure, stats));
    checks
}
