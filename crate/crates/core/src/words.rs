//! Word types for both groups in the construction.
//!
//! * [`HWord`]: a word over the countable generating set `a1, a2, ...` of the
//!   base group, stored as `(index, exponent)` letters.
//! * [`QuaternaryCode`]: the machine encoding of an [`HWord`] that base-group
//!   oracles consume. `a_i` is written as the digit `3` followed by `i` in
//!   binary and `a_i^-1` as `4` followed by `i` in binary.
//! * [`CsWord`]: a word over `{c, s}` in run-length form
//!   `s^α0 c^β1 s^α1 ... c^βn s^αn` with arbitrary-precision exponents.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("malformed token `{0}`")]
    MalformedToken(String),
    #[error("zero exponent in token `{0}`")]
    ZeroExponent(String),
    #[error("generator index must be at least 1")]
    ZeroIndex,
    #[error("invalid digit `{0}` in quaternary code")]
    InvalidDigit(char),
    #[error("quaternary code has an index digit at position {0} with no preceding marker")]
    MissingMarker(usize),
    #[error("marker digit at position {0} is not followed by an index numeral")]
    DanglingMarker(usize),
    #[error("index numeral at position {0} has a leading zero")]
    LeadingZero(usize),
    #[error("index numeral at position {0} does not fit in 64 bits")]
    IndexOverflow(usize),
}

/// `Lg(n) = 2 + floor(log2 n)`, with `log2 n = 0` for `n <= 0`.
pub fn lg(n: u64) -> u64 {
    2 + floor_log2(n)
}

/// `floor(log2 n)`, and 0 for `n == 0`.
pub fn floor_log2(n: u64) -> u64 {
    if n == 0 {
        0
    } else {
        u64::from(63 - n.leading_zeros())
    }
}

/// Length of the code token for `a_index^{±1}`: one marker digit plus the binary numeral.
pub fn token_length(index: u64) -> u64 {
    lg(index)
}

// ---------------------------------------------------------------------------
// H-words
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HLetter {
    pub index: u64,
    pub exponent: i64,
}

/// A word over the generating set of the base group. No free reduction is
/// ever applied; equality in the group is decided by an oracle.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct HWord {
    letters: Vec<HLetter>,
}

impl HWord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: &[(u64, i64)]) -> Result<Self, WordError> {
        let mut word = Self::new();
        for &(index, exponent) in pairs {
            word.push(index, exponent)?;
        }
        Ok(word)
    }

    /// The single generator `a_index`.
    pub fn generator(index: u64) -> Result<Self, WordError> {
        Self::from_pairs(&[(index, 1)])
    }

    pub fn push(&mut self, index: u64, exponent: i64) -> Result<(), WordError> {
        if index == 0 {
            return Err(WordError::ZeroIndex);
        }
        if exponent == 0 {
            return Err(WordError::ZeroExponent(format!("a{index}^0")));
        }
        self.letters.push(HLetter { index, exponent });
        Ok(())
    }

    pub fn letters(&self) -> &[HLetter] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `‖u‖_S`, the sum of absolute exponents.
    pub fn letter_length(&self) -> u64 {
        self.letters
            .iter()
            .fold(0u64, |acc, l| acc.saturating_add(l.exponent.unsigned_abs()))
    }

    /// Largest generator index used, or 0 for the empty word.
    pub fn max_index(&self) -> u64 {
        self.letters.iter().map(|l| l.index).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Self {
        let letters = self
            .letters
            .iter()
            .rev()
            .map(|l| HLetter {
                index: l.index,
                exponent: -l.exponent,
            })
            .collect();
        Self { letters }
    }

    /// Rewrites every letter `a_i^e` as `|e|` letters `a_i^{±1}`.
    pub fn unit_expansion(&self) -> Self {
        let letters = self
            .letters
            .iter()
            .flat_map(|l| {
                let unit = HLetter {
                    index: l.index,
                    exponent: l.exponent.signum(),
                };
                std::iter::repeat_n(unit, l.exponent.unsigned_abs() as usize)
            })
            .collect();
        Self { letters }
    }
}

impl Mul for &HWord {
    type Output = HWord;

    fn mul(self, rhs: &HWord) -> HWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&rhs.letters);
        HWord { letters }
    }
}

impl fmt::Display for HWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            if l.exponent == 1 {
                write!(f, "a{}", l.index)?;
            } else {
                write!(f, "a{}^{}", l.index, l.exponent)?;
            }
        }
        Ok(())
    }
}

impl FromStr for HWord {
    type Err = WordError;

    /// Parses whitespace-separated tokens `aI` or `aI^K`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut word = HWord::new();
        for token in text.split_whitespace() {
            let malformed = || WordError::MalformedToken(token.to_string());
            let body = token.strip_prefix('a').ok_or_else(malformed)?;
            let (index, exponent) = match body.split_once('^') {
                Some((i, k)) => (i, k.parse::<i64>().map_err(|_| malformed())?),
                None => (body, 1),
            };
            if index.is_empty() || !index.bytes().all(|b| b.is_ascii_digit()) {
                return Err(malformed());
            }
            let index = index.parse::<u64>().map_err(|_| malformed())?;
            if exponent == 0 {
                return Err(WordError::ZeroExponent(token.to_string()));
            }
            word.push(index, exponent)?;
        }
        Ok(word)
    }
}

// ---------------------------------------------------------------------------
// Quaternary code
// ---------------------------------------------------------------------------

/// A digit string over `{0, 1, 3, 4}`. Construction only checks the alphabet;
/// token structure is validated by [`decode_hword`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct QuaternaryCode(String);

impl QuaternaryCode {
    pub fn from_digits(digits: &str) -> Result<Self, WordError> {
        if let Some(bad) = digits
            .chars()
            .find(|ch| !matches!(ch, '0' | '1' | '3' | '4'))
        {
            return Err(WordError::InvalidDigit(bad));
        }
        Ok(Self(digits.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// `𝔏`, the number of digits.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for QuaternaryCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for QuaternaryCode {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::from_digits(s)
    }
}

/// Emits one token per unit of exponent; there are no separators since the
/// marker digits make the code prefix-free.
pub fn encode_hword(word: &HWord) -> QuaternaryCode {
    let mut out = String::new();
    for letter in word.letters() {
        let marker = if letter.exponent > 0 { '3' } else { '4' };
        let token = format!("{marker}{:b}", letter.index);
        for _ in 0..letter.exponent.unsigned_abs() {
            out.push_str(&token);
        }
    }
    QuaternaryCode(out)
}

pub fn decode_hword(code: &QuaternaryCode) -> Result<HWord, WordError> {
    let bytes = code.0.as_bytes();
    let mut word = HWord::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let sign = match bytes[pos] {
            b'3' => 1,
            b'4' => -1,
            _ => return Err(WordError::MissingMarker(pos)),
        };
        let start = pos + 1;
        let mut end = start;
        while end < bytes.len() && matches!(bytes[end], b'0' | b'1') {
            end += 1;
        }
        if end == start {
            return Err(WordError::DanglingMarker(pos));
        }
        if bytes[start] == b'0' {
            return Err(WordError::LeadingZero(start));
        }
        if end - start > 64 {
            return Err(WordError::IndexOverflow(start));
        }
        let index = u64::from_str_radix(&code.0[start..end], 2)
            .map_err(|_| WordError::IndexOverflow(start))?;
        word.push(index, sign)?;
        pos = end;
    }
    Ok(word)
}

// ---------------------------------------------------------------------------
// {c, s}-words
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    C,
    S,
}

impl Generator {
    fn symbol(self) -> char {
        match self {
            Generator::C => 'c',
            Generator::S => 's',
        }
    }
}

/// A canonical word `s^α0 c^β1 s^α1 ... c^βn s^αn`.
///
/// Invariant: `alphas.len() == betas.len() + 1`, every `β` and every interior
/// `α` is nonzero. Only `α0` and `αn` may vanish.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CsWord {
    alphas: Vec<BigInt>,
    betas: Vec<BigInt>,
}

impl Default for CsWord {
    fn default() -> Self {
        Self::identity()
    }
}

impl CsWord {
    pub fn identity() -> Self {
        Self {
            alphas: vec![BigInt::zero()],
            betas: Vec::new(),
        }
    }

    pub fn c() -> Self {
        Self::from_blocks([(Generator::C, BigInt::one())])
    }

    pub fn s() -> Self {
        Self::from_blocks([(Generator::S, BigInt::one())])
    }

    /// Builds the canonical word from an arbitrary block sequence: zero
    /// blocks are dropped and adjacent blocks of one letter are merged,
    /// repeatedly, until neither applies.
    pub fn from_blocks<I, E>(blocks: I) -> Self
    where
        I: IntoIterator<Item = (Generator, E)>,
        E: Into<BigInt>,
    {
        let mut stack: Vec<(Generator, BigInt)> = Vec::new();
        for (generator, exponent) in blocks {
            let exponent = exponent.into();
            if exponent.is_zero() {
                continue;
            }
            match stack.last_mut() {
                Some((top, acc)) if *top == generator => {
                    *acc += exponent;
                    if acc.is_zero() {
                        stack.pop();
                    }
                }
                _ => stack.push((generator, exponent)),
            }
        }

        let mut alphas = Vec::new();
        let mut betas = Vec::new();
        let mut pending = BigInt::zero();
        for (generator, exponent) in stack {
            match generator {
                Generator::S => pending = exponent,
                Generator::C => {
                    alphas.push(std::mem::take(&mut pending));
                    betas.push(exponent);
                }
            }
        }
        alphas.push(pending);
        Self { alphas, betas }
    }

    /// The s-exponents `α0..αn`.
    pub fn alphas(&self) -> &[BigInt] {
        &self.alphas
    }

    /// The c-exponents `β1..βn`.
    pub fn betas(&self) -> &[BigInt] {
        &self.betas
    }

    /// `n`, the number of c-blocks.
    pub fn num_c_blocks(&self) -> usize {
        self.betas.len()
    }

    pub fn is_identity(&self) -> bool {
        self.betas.is_empty() && self.alphas[0].is_zero()
    }

    /// Nonzero blocks in reading order.
    pub fn blocks(&self) -> impl Iterator<Item = (Generator, &BigInt)> + '_ {
        let s_blocks = self.alphas.iter().map(|a| (Generator::S, a));
        let c_blocks = self.betas.iter().map(|b| (Generator::C, b));
        let mut interleaved = Vec::with_capacity(self.alphas.len() + self.betas.len());
        let mut c_iter = c_blocks;
        for s in s_blocks {
            interleaved.push(s);
            if let Some(c) = c_iter.next() {
                interleaved.push(c);
            }
        }
        interleaved.into_iter().filter(|(_, e)| !e.is_zero())
    }

    /// `‖w‖ = Σ|α| + Σ|β|`.
    pub fn letter_length(&self) -> BigUint {
        self.alphas
            .iter()
            .chain(self.betas.iter())
            .map(|e| e.magnitude())
            .fold(BigUint::zero(), |acc, m| acc + m)
    }

    pub fn inverse(&self) -> Self {
        let reversed: Vec<(Generator, BigInt)> = self
            .blocks()
            .map(|(g, e)| (g, -e))
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .collect();
        Self::from_blocks(reversed)
    }

    /// Conjugate `y x y⁻¹` of `self = x` by `y`.
    pub fn conjugated_by(&self, by: &CsWord) -> Self {
        &(by * self) * &by.inverse()
    }

    /// Commutator `[x, y] = x y x⁻¹ y⁻¹`.
    pub fn commutator(&self, other: &CsWord) -> Self {
        let xy = self * other;
        let inv = &self.inverse() * &other.inverse();
        &xy * &inv
    }

    pub fn pow(&self, exponent: i64) -> Self {
        let base = if exponent < 0 {
            self.inverse()
        } else {
            self.clone()
        };
        let mut out = Self::identity();
        for _ in 0..exponent.unsigned_abs() {
            out = &out * &base;
        }
        out
    }
}

impl Mul for &CsWord {
    type Output = CsWord;

    fn mul(self, rhs: &CsWord) -> CsWord {
        let lhs: Vec<_> = self.blocks().map(|(g, e)| (g, e.clone())).collect();
        let rhs: Vec<_> = rhs.blocks().map(|(g, e)| (g, e.clone())).collect();
        CsWord::from_blocks(lhs.into_iter().chain(rhs))
    }
}

impl fmt::Display for CsWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (generator, exponent)) in self.blocks().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            if exponent.is_one() {
                write!(f, "{}", generator.symbol())?;
            } else {
                write!(f, "{}^{}", generator.symbol(), exponent)?;
            }
        }
        Ok(())
    }
}

impl FromStr for CsWord {
    type Err = WordError;

    /// Parses whitespace-separated tokens `c`, `s`, `c^K`, `s^K`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        parse_cs_word(text)
    }
}

pub fn parse_cs_word(text: &str) -> Result<CsWord, WordError> {
    let mut blocks = Vec::new();
    for token in text.split_whitespace() {
        let malformed = || WordError::MalformedToken(token.to_string());
        let mut chars = token.chars();
        let generator = match chars.next() {
            Some('c') => Generator::C,
            Some('s') => Generator::S,
            _ => return Err(malformed()),
        };
        let rest = chars.as_str();
        let exponent = if rest.is_empty() {
            BigInt::one()
        } else {
            let digits = rest.strip_prefix('^').ok_or_else(malformed)?;
            let unsigned = digits.strip_prefix('-').unwrap_or(digits);
            if unsigned.is_empty() || !unsigned.bytes().all(|b| b.is_ascii_digit()) {
                return Err(malformed());
            }
            let value: BigInt = digits.parse().map_err(|_| malformed())?;
            if value.is_zero() {
                return Err(WordError::ZeroExponent(token.to_string()));
            }
            value
        };
        blocks.push((generator, exponent));
    }
    Ok(CsWord::from_blocks(blocks))
}

/// Convenience for letter-length comparisons against machine-size bounds.
pub fn saturating_u64(value: &BigUint) -> u64 {
    u64::try_from(value).unwrap_or(u64::MAX)
}
