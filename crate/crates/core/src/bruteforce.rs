//! Reference verdicts by direct evaluation inside the iterated wreath product.
//!
//! Nothing here goes through the normal forms of [`crate::embed`] beyond the
//! list of conjugating exponents used to pick candidate points. Sections are
//! computed by walking the `{c, s}`-word with the product rule
//! `(f1 b1)(f2 b2) = f1 f2^{b1} b1 b2`, and elements of `K` are evaluated
//! pointwise from the step functions `b⁽ⁱ⁾(z^k) = a⁽ⁱ⁾` for `k > 0`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::embed::{ConjugateNormalForm, EmbedError, MembershipResult};
use crate::oracles::WordOracle;
use crate::words::{encode_hword, CsWord, Generator, HWord};

/// Points `μ` at which a section may be nontrivial.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SupportPointSet {
    points: BTreeSet<BigInt>,
}

impl SupportPointSet {
    pub fn points(&self) -> impl Iterator<Item = &BigInt> {
        self.points.iter()
    }

    pub fn contains(&self, mu: &BigInt) -> bool {
        self.points.contains(mu)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `{ 2^x - γ_j : 0 <= x <= X }` with `X = max(2, ⌈log2(3γ0 + 2)⌉ + 1)`.
///
/// If two different conjugates `c^{s^γk}`, `c^{s^γl}` are both nontrivial at
/// `μ = 2^{x1} - γk = 2^{x2} - γl`, then `2^{min(x1,x2)} <= |γk - γl| <= 2γ0`
/// and `2^{max(x1,x2)} <= μ + γ0 <= 4γ0 < 2^X`. Beyond the cap only one class
/// can be active at a point, and the section there is a power of a single
/// element of `K` with the class sum as exponent.
pub fn candidate_support(nf: &ConjugateNormalForm) -> SupportPointSet {
    let bound: BigInt = nf.gamma0() * 3 + 1;
    let ceil_log = bound.magnitude().bits(); // ⌈log2(3γ0 + 2)⌉
    let cap = (ceil_log + 1).max(2);
    let mut points = BTreeSet::new();
    for factor in nf.factors() {
        for x in 0..=cap {
            points.insert((BigInt::one() << x) - &factor.gamma);
        }
    }
    SupportPointSet { points }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum KGen {
    Z,
    B(u64),
}

/// An element of `K` as a product of generator powers, kept unevaluated.
#[derive(Debug, Clone, Default)]
struct KWord {
    letters: Vec<(KGen, BigInt)>,
}

impl KWord {
    fn active_part(&self) -> BigInt {
        self.letters
            .iter()
            .filter(|(g, _)| *g == KGen::Z)
            .map(|(_, e)| e)
            .sum()
    }

    /// Largest `|shift|` in front of any `b`-letter.
    fn shift_radius(&self) -> BigInt {
        let mut shift = BigInt::zero();
        let mut radius = BigInt::zero();
        for (generator, exponent) in &self.letters {
            match generator {
                KGen::Z => shift += exponent,
                KGen::B(_) => radius = radius.max(shift.abs()),
            }
        }
        radius
    }

    /// Passive part at `z^ν`: `∏ f_t(z^{ν + shift_t})` over the letters.
    fn passive_at(&self, nu: &BigInt) -> Result<HWord, EmbedError> {
        let mut shift = BigInt::zero();
        let mut word = HWord::new();
        for (generator, exponent) in &self.letters {
            match generator {
                KGen::Z => shift += exponent,
                KGen::B(index) => {
                    if (nu + &shift).is_positive() {
                        let e = i64::try_from(exponent)
                            .map_err(|_| EmbedError::ExponentOverflow(exponent.clone()))?;
                        word.push(*index, e).expect("valid letter");
                    }
                }
            }
        }
        Ok(word)
    }
}

/// `c(s^k)`.
fn c_value(k: &BigInt) -> Option<KGen> {
    if k.is_one() {
        return Some(KGen::Z);
    }
    if !k.is_positive() {
        return None;
    }
    let mut rest = k.clone();
    let mut log = 0u64;
    while (&rest % 2u32).is_zero() {
        rest >>= 1;
        log += 1;
    }
    rest.is_one().then_some(KGen::B(log))
}

/// The passive part of `word` at `s^μ`, walking the letters left to right.
fn section_at(word: &CsWord, mu: &BigInt) -> KWord {
    let mut shift = BigInt::zero();
    let mut section = KWord::default();
    for (generator, exponent) in word.blocks() {
        match generator {
            Generator::S => shift += exponent,
            Generator::C => {
                if let Some(value) = c_value(&(mu + &shift)) {
                    section.letters.push((value, exponent.clone()));
                }
            }
        }
    }
    section
}

fn total_s_exponent(word: &CsWord) -> BigInt {
    word.blocks()
        .filter(|(g, _)| *g == Generator::S)
        .map(|(_, e)| e)
        .sum()
}

fn class_sums_vanish(word: &CsWord) -> bool {
    let mut shift = BigInt::zero();
    let mut sums: BTreeMap<BigInt, BigInt> = BTreeMap::new();
    for (generator, exponent) in word.blocks() {
        match generator {
            Generator::S => shift += exponent,
            Generator::C => *sums.entry(shift.clone()).or_default() += exponent,
        }
    }
    sums.values().all(Zero::is_zero)
}

fn oracle_trivial<O: WordOracle + ?Sized>(
    oracle: &mut O,
    word: &HWord,
) -> Result<bool, EmbedError> {
    if word.is_empty() {
        return Ok(true);
    }
    Ok(oracle.is_trivial(&encode_hword(word))?.is_trivial())
}

/// `b⁽ⁱ⁾` is a step function, so the passive part is trivial left of
/// `-radius` and constant right of `radius + 1`.
fn k_window(section: &KWord) -> (BigInt, BigInt) {
    let radius: BigInt = section.shift_radius() + 1;
    (-radius.clone(), radius)
}

fn section_trivial<O: WordOracle + ?Sized>(
    section: &KWord,
    oracle: &mut O,
    skip_origin: bool,
) -> Result<bool, EmbedError> {
    if !section.active_part().is_zero() {
        return Ok(false);
    }
    let (mut nu, last) = k_window(section);
    while nu <= last {
        if !(skip_origin && nu.is_zero()) && !oracle_trivial(oracle, &section.passive_at(&nu)?)? {
            return Ok(false);
        }
        nu += 1;
    }
    Ok(true)
}

pub fn brute_is_trivial<O: WordOracle + ?Sized>(
    word: &CsWord,
    oracle: &mut O,
) -> Result<bool, EmbedError> {
    if !total_s_exponent(word).is_zero() || !class_sums_vanish(word) {
        return Ok(false);
    }
    let support = candidate_support(&crate::embed::conjugate_normal_form(word));
    for mu in support.points() {
        if !section_trivial(&section_at(word, mu), oracle, false)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn brute_membership<O: WordOracle + ?Sized>(
    word: &CsWord,
    oracle: &mut O,
) -> Result<MembershipResult, EmbedError> {
    let rejected = MembershipResult {
        member: false,
        value: None,
    };
    if !total_s_exponent(word).is_zero() || !class_sums_vanish(word) {
        return Ok(rejected);
    }
    let one = BigInt::one();
    let support = candidate_support(&crate::embed::conjugate_normal_form(word));
    for mu in support.points().filter(|mu| **mu != one) {
        if !section_trivial(&section_at(word, mu), oracle, false)? {
            return Ok(rejected);
        }
    }
    let at_one = section_at(word, &one);
    if !section_trivial(&at_one, oracle, true)? {
        return Ok(rejected);
    }
    Ok(MembershipResult {
        member: true,
        value: Some(at_one.passive_at(&BigInt::zero())?),
    })
}
