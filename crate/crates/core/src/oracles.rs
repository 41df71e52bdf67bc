//! Word-problem oracles for the base group `H`.
//!
//! Every oracle answers triviality queries posed as [`QuaternaryCode`]s, the
//! same interface the reduction from `G` to `H` produces. The built-in groups
//! are the trivial group, free abelian and free groups of countable rank, and
//! direct sums of cyclic groups. [`Instrumented`] and [`Delayed`] wrap any
//! oracle to count queries or to charge a simulated cost per query.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::words::{decode_hword, HWord, QuaternaryCode, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("malformed oracle query: {0}")]
    Malformed(#[from] WordError),
    #[error("generator index {0} is outside the oracle's generator universe")]
    IndexOutOfUniverse(u64),
    #[error("unknown oracle `{0}` (expected trivial, free-abelian, free or cyclic:<m>)")]
    UnknownOracle(String),
    #[error("cyclic modulus must be an integer >= 2, got `{0}`")]
    BadModulus(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OracleVerdict {
    Trivial,
    Nontrivial,
}

impl OracleVerdict {
    pub fn is_trivial(self) -> bool {
        self == OracleVerdict::Trivial
    }
}

impl From<bool> for OracleVerdict {
    fn from(trivial: bool) -> Self {
        if trivial {
            OracleVerdict::Trivial
        } else {
            OracleVerdict::Nontrivial
        }
    }
}

/// Decides the word problem of `H` on encoded words.
///
/// Takes `&mut self` so that wrappers can keep per-session counters; the
/// built-in groups are stateless.
pub trait WordOracle {
    fn is_trivial(&mut self, code: &QuaternaryCode) -> Result<OracleVerdict, OracleError>;
}

impl<O: WordOracle + ?Sized> WordOracle for &mut O {
    fn is_trivial(&mut self, code: &QuaternaryCode) -> Result<OracleVerdict, OracleError> {
        (**self).is_trivial(code)
    }
}

impl<O: WordOracle + ?Sized> WordOracle for Box<O> {
    fn is_trivial(&mut self, code: &QuaternaryCode) -> Result<OracleVerdict, OracleError> {
        (**self).is_trivial(code)
    }
}

pub fn oracle_is_trivial<O: WordOracle + ?Sized>(
    oracle: &mut O,
    code: &QuaternaryCode,
) -> Result<OracleVerdict, OracleError> {
    oracle.is_trivial(code)
}

// ---------------------------------------------------------------------------
// Base groups
// ---------------------------------------------------------------------------

fn net_exponents(word: &HWord) -> BTreeMap<u64, i128> {
    let mut sums = BTreeMap::new();
    for letter in word.letters() {
        *sums.entry(letter.index).or_insert(0i128) += i128::from(letter.exponent);
    }
    sums
}

/// Trivial in `⊕ℤ` iff every generator has zero net exponent.
pub fn free_abelian_is_trivial(word: &HWord) -> bool {
    net_exponents(word).values().all(|&sum| sum == 0)
}

/// Trivial in the free group iff the word freely reduces to the empty word.
pub fn free_is_trivial(word: &HWord) -> bool {
    // Reducing runs `a_i^e` by merging equal neighbours is the same as
    // reducing the unit expansion letter by letter.
    let mut stack: Vec<(u64, i128)> = Vec::new();
    for letter in word.letters() {
        let exponent = i128::from(letter.exponent);
        match stack.last_mut() {
            Some((index, acc)) if *index == letter.index => {
                *acc += exponent;
                if *acc == 0 {
                    stack.pop();
                }
            }
            _ => stack.push((letter.index, exponent)),
        }
    }
    stack.is_empty()
}

/// Trivial in `⊕ ℤ/m_i` iff every net exponent vanishes modulo `modulus_rule(i)`.
pub fn cyclic_sum_is_trivial(word: &HWord, modulus_rule: impl Fn(u64) -> u64) -> bool {
    net_exponents(word).into_iter().all(|(index, sum)| {
        let modulus = i128::from(modulus_rule(index));
        sum.rem_euclid(modulus) == 0
    })
}

/// The one-element group.
#[derive(Debug, Clone, Copy, Default)]
pub struct TrivialGroup;

impl WordOracle for TrivialGroup {
    fn is_trivial(&mut self, code: &QuaternaryCode) -> Result<OracleVerdict, OracleError> {
        decode_hword(code)?;
        Ok(OracleVerdict::Trivial)
    }
}

/// Free abelian group on `a1, a2, ...`.
#[derive(Debug, Clone, Copy, Default)]
pub struct FreeAbelian;

impl WordOracle for FreeAbelian {
    fn is_trivial(&mut self, code: &QuaternaryCode) -> Result<OracleVerdict, OracleError> {
        Ok(free_abelian_is_trivial(&decode_hword(code)?).into())
    }
}

/// Free group on `a1, a2, ...`.
#[derive(Debug, Clone, Copy, Default)]
pub struct FreeGroup;

impl WordOracle for FreeGroup {
    fn is_trivial(&mut self, code: &QuaternaryCode) -> Result<OracleVerdict, OracleError> {
        Ok(free_is_trivial(&decode_hword(code)?).into())
    }
}

/// `⊕ ℤ/m_i` where `m_i = modulus_rule(i) >= 2`.
#[derive(Clone, Copy)]
pub struct CyclicSum<F> {
    modulus_rule: F,
}

impl<F: Fn(u64) -> u64> CyclicSum<F> {
    pub fn new(modulus_rule: F) -> Self {
        Self { modulus_rule }
    }
}

impl<F: Fn(u64) -> u64> WordOracle for CyclicSum<F> {
    fn is_trivial(&mut self, code: &QuaternaryCode) -> Result<OracleVerdict, OracleError> {
        let word = decode_hword(code)?;
        Ok(cyclic_sum_is_trivial(&word, &self.modulus_rule).into())
    }
}

/// A built-in oracle selected by name: `trivial`, `free-abelian`, `free`,
/// or `cyclic:<m>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BuiltinOracle {
    Trivial,
    FreeAbelian,
    Free,
    Cyclic(u64),
}

impl BuiltinOracle {
    pub fn decide(&self, word: &HWord) -> bool {
        match *self {
            BuiltinOracle::Trivial => true,
            BuiltinOracle::FreeAbelian => free_abelian_is_trivial(word),
            BuiltinOracle::Free => free_is_trivial(word),
            BuiltinOracle::Cyclic(m) => cyclic_sum_is_trivial(word, |_| m),
        }
    }
}

impl WordOracle for BuiltinOracle {
    fn is_trivial(&mut self, code: &QuaternaryCode) -> Result<OracleVerdict, OracleError> {
        let word = decode_hword(code)?;
        Ok(self.decide(&word).into())
    }
}

impl FromStr for BuiltinOracle {
    type Err = OracleError;

    fn from_str(name: &str) -> Result<Self, Self::Err> {
        match name {
            "trivial" => Ok(BuiltinOracle::Trivial),
            "free-abelian" => Ok(BuiltinOracle::FreeAbelian),
            "free" => Ok(BuiltinOracle::Free),
            other => {
                let modulus = other
                    .strip_prefix("cyclic:")
                    .ok_or_else(|| OracleError::UnknownOracle(other.to_string()))?;
                match modulus.parse::<u64>() {
                    Ok(m) if m >= 2 => Ok(BuiltinOracle::Cyclic(m)),
                    _ => Err(OracleError::BadModulus(modulus.to_string())),
                }
            }
        }
    }
}

impl fmt::Display for BuiltinOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuiltinOracle::Trivial => f.write_str("trivial"),
            BuiltinOracle::FreeAbelian => f.write_str("free-abelian"),
            BuiltinOracle::Free => f.write_str("free"),
            BuiltinOracle::Cyclic(m) => write!(f, "cyclic:{m}"),
        }
    }
}

// ---------------------------------------------------------------------------
// Wrappers
// ---------------------------------------------------------------------------

/// Per-session query statistics. Merging two sessions adds counts and takes
/// maxima.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct OracleStats {
    pub query_count: u64,
    pub max_code_length: u64,
    pub total_code_length: u64,
    pub max_generator_index: u64,
}

impl OracleStats {
    pub fn record(&mut self, code_length: u64, max_index: u64) {
        self.query_count += 1;
        self.max_code_length = self.max_code_length.max(code_length);
        self.total_code_length += code_length;
        self.max_generator_index = self.max_generator_index.max(max_index);
    }

    pub fn merge(&mut self, other: &OracleStats) {
        self.query_count += other.query_count;
        self.max_code_length = self.max_code_length.max(other.max_code_length);
        self.total_code_length += other.total_code_length;
        self.max_generator_index = self.max_generator_index.max(other.max_generator_index);
    }
}

/// Forwards every query and records [`OracleStats`]. One instance per worker.
#[derive(Debug, Clone)]
pub struct Instrumented<O> {
    inner: O,
    stats: OracleStats,
}

pub fn wrap_instrumented<O: WordOracle>(oracle: O) -> Instrumented<O> {
    Instrumented {
        inner: oracle,
        stats: OracleStats::default(),
    }
}

impl<O> Instrumented<O> {
    pub fn stats(&self) -> OracleStats {
        self.stats
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }

    pub fn into_inner(self) -> O {
        self.inner
    }
}

impl<O: WordOracle> WordOracle for Instrumented<O> {
    fn is_trivial(&mut self, code: &QuaternaryCode) -> Result<OracleVerdict, OracleError> {
        let max_index = decode_hword(code)?.max_index();
        let verdict = self.inner.is_trivial(code)?;
        self.stats.record(code.len() as u64, max_index);
        Ok(verdict)
    }
}

/// Simulated cost of one query as a function of its code length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DelayModel {
    Const,
    Linear,
    Quad,
}

impl DelayModel {
    pub fn cost(self, code_length: u64) -> u128 {
        let len = u128::from(code_length);
        match self {
            DelayModel::Const => 1,
            DelayModel::Linear => len,
            DelayModel::Quad => len * len,
        }
    }
}

impl FromStr for DelayModel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "const" => Ok(DelayModel::Const),
            "linear" => Ok(DelayModel::Linear),
            "quad" => Ok(DelayModel::Quad),
            other => Err(format!(
                "unknown delay model `{other}` (expected const, linear or quad)"
            )),
        }
    }
}

impl fmt::Display for DelayModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DelayModel::Const => "const",
            DelayModel::Linear => "linear",
            DelayModel::Quad => "quad",
        })
    }
}

/// Charges `model.cost(𝔏(query))` simulated units per query. No real waiting.
#[derive(Debug, Clone)]
pub struct Delayed<O> {
    inner: O,
    model: DelayModel,
    cost: u128,
}

pub fn wrap_delayed<O: WordOracle>(oracle: O, model: DelayModel) -> Delayed<O> {
    Delayed {
        inner: oracle,
        model,
        cost: 0,
    }
}

impl<O> Delayed<O> {
    pub fn simulated_cost(&self) -> u128 {
        self.cost
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }

    pub fn into_inner(self) -> O {
        self.inner
    }
}

impl<O: WordOracle> WordOracle for Delayed<O> {
    fn is_trivial(&mut self, code: &QuaternaryCode) -> Result<OracleVerdict, OracleError> {
        let verdict = self.inner.is_trivial(code)?;
        self.cost += self.model.cost(code.len() as u64);
        Ok(verdict)
    }
}
