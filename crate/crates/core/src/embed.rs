//! The embedding `φ: H → G = ⟨c, s⟩` and the decision procedures built on it.
//!
//! `G` sits inside `K Wr ⟨s⟩` where `K = ⟨z, b⁽ⁱ⁾⟩ ≤ H Wr ⟨z⟩`. The function
//! `c: ⟨s⟩ → K` is `z` at `s¹`, `b⁽ⁱ⁾` at `s^{2^i}` and trivial elsewhere, and
//! `b⁽ⁱ⁾: ⟨z⟩ → H` is `a⁽ⁱ⁾` at every `z^k` with `k > 0`.
//!
//! A word `s^α0 c^β1 ... c^βn s^αn` is first rewritten as
//! `(c^{s^γ1})^β1 ... (c^{s^γn})^βn s^γ` with `γ_j` the prefix sums of the
//! `α`s. Its passive part at `s^μ` (the *section*) is a word in `z` and the
//! `b⁽ⁱ⁾`, which is rewritten the same way into a K normal form whose value
//! at each `z^ν` is an `H`-word handed to the oracle.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::oracles::{OracleError, WordOracle};
use crate::words::{encode_hword, CsWord, Generator, HWord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbedError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("exponent {0} is too large to spell out as an H-word")]
    ExponentOverflow(BigInt),
}

/// One factor `(c^{s^γ})^β` of the conjugate normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConjugateFactor {
    pub gamma: BigInt,
    pub beta: BigInt,
}

/// `(c^{s^γ1})^β1 ... (c^{s^γn})^βn s^γ`, with `γ0 = max |γ_j|`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConjugateNormalForm {
    factors: Vec<ConjugateFactor>,
    gamma: BigInt,
    gamma0: BigInt,
}

impl ConjugateNormalForm {
    pub fn new(factors: Vec<ConjugateFactor>, gamma: BigInt) -> Self {
        let gamma0 = factors
            .iter()
            .map(|f| f.gamma.abs())
            .max()
            .unwrap_or_else(BigInt::zero);
        Self {
            factors,
            gamma,
            gamma0,
        }
    }

    pub fn factors(&self) -> &[ConjugateFactor] {
        &self.factors
    }

    /// Active part, the total s-exponent.
    pub fn gamma(&self) -> &BigInt {
        &self.gamma
    }

    pub fn gamma0(&self) -> &BigInt {
        &self.gamma0
    }
}

/// A letter of a raw section word: a power of `z` or of some `b⁽ⁱ⁾`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SectionLetter {
    Z(BigInt),
    B { index: u64, exponent: BigInt },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KFactor {
    pub index: u64,
    pub eta: BigInt,
    pub xi: BigInt,
}

/// `((b^{(i1)})^{z^η1})^ξ1 ... ((b^{(im)})^{z^ηm})^ξm z^η`, with `η0 = max |η_j|`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KNormalForm {
    factors: Vec<KFactor>,
    eta: BigInt,
    eta0: BigInt,
}

impl KNormalForm {
    pub fn new(factors: Vec<KFactor>, eta: BigInt) -> Self {
        let eta0 = factors
            .iter()
            .map(|f| f.eta.abs())
            .max()
            .unwrap_or_else(BigInt::zero);
        Self { factors, eta, eta0 }
    }

    pub fn factors(&self) -> &[KFactor] {
        &self.factors
    }

    pub fn eta(&self) -> &BigInt {
        &self.eta
    }

    pub fn eta0(&self) -> &BigInt {
        &self.eta0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipResult {
    pub member: bool,
    /// A word for `φ⁻¹(w)`, present iff `member`. Not freely reduced.
    pub value: Option<HWord>,
}

impl MembershipResult {
    fn rejected() -> Self {
        Self {
            member: false,
            value: None,
        }
    }
}

/// `a⁽ⁱ⁾ ↦ [c, c^{s^{2^i - 1}}] = c · s^k c s^-k · c⁻¹ · s^k c⁻¹ s^-k` with `k = 2^i - 1`.
pub fn phi(word: &HWord) -> CsWord {
    let mut blocks: Vec<(Generator, BigInt)> = Vec::new();
    for letter in word.letters() {
        let k: BigInt = (BigInt::one() << letter.index) - 1;
        let commutator = [
            (Generator::C, BigInt::one()),
            (Generator::S, k.clone()),
            (Generator::C, BigInt::one()),
            (Generator::S, -&k),
            (Generator::C, -BigInt::one()),
            (Generator::S, k.clone()),
            (Generator::C, -BigInt::one()),
            (Generator::S, -k),
        ];
        let unit: Vec<(Generator, BigInt)> = if letter.exponent > 0 {
            commutator.to_vec()
        } else {
            commutator.iter().rev().map(|(g, e)| (*g, -e)).collect()
        };
        for _ in 0..letter.exponent.unsigned_abs() {
            blocks.extend(unit.iter().cloned());
        }
    }
    CsWord::from_blocks(blocks)
}

pub fn conjugate_normal_form(word: &CsWord) -> ConjugateNormalForm {
    let mut prefix = BigInt::zero();
    let mut factors = Vec::with_capacity(word.num_c_blocks());
    for (alpha, beta) in word.alphas().iter().zip(word.betas()) {
        prefix += alpha;
        factors.push(ConjugateFactor {
            gamma: prefix.clone(),
            beta: beta.clone(),
        });
    }
    prefix += word
        .alphas()
        .last()
        .expect("canonical word has a trailing s-block");
    ConjugateNormalForm::new(factors, prefix)
}

/// `γ-value ↦ Σ β_j` over the factors sharing that `γ`, ascending in `γ`.
pub fn class_sums(nf: &ConjugateNormalForm) -> BTreeMap<BigInt, BigInt> {
    let mut sums: BTreeMap<BigInt, BigInt> = BTreeMap::new();
    for factor in nf.factors() {
        *sums.entry(factor.gamma.clone()).or_default() += &factor.beta;
    }
    sums
}

fn class_sums_vanish(nf: &ConjugateNormalForm) -> bool {
    class_sums(nf).values().all(Zero::is_zero)
}

/// Value of `c` at `s^point`: `z` at 1, `b⁽ⁱ⁾` at `2^i` for `i >= 1`, else trivial.
fn c_at(point: &BigInt) -> Option<Option<u64>> {
    if !point.is_positive() {
        return None;
    }
    let magnitude = point.magnitude();
    if magnitude.count_ones() != 1 {
        return None;
    }
    match magnitude.trailing_zeros() {
        Some(0) => Some(None),
        Some(i) => Some(Some(i)),
        None => None,
    }
}

/// The section at `s^μ` before collection: one letter per factor whose
/// conjugate of `c` is nontrivial there.
pub fn evaluate_section(nf: &ConjugateNormalForm, mu: &BigInt) -> Vec<SectionLetter> {
    nf.factors()
        .iter()
        .filter_map(|factor| {
            let point = &factor.gamma + mu;
            c_at(&point).map(|letter| match letter {
                None => SectionLetter::Z(factor.beta.clone()),
                Some(index) => SectionLetter::B {
                    index,
                    exponent: factor.beta.clone(),
                },
            })
        })
        .collect()
}

/// Collects the z-powers to the right with `z^ζ b^ξ = (b^{z^ζ})^ξ z^ζ`.
pub fn k_normal_form(section: &[SectionLetter]) -> KNormalForm {
    let mut prefix = BigInt::zero();
    let mut factors = Vec::new();
    for letter in section {
        match letter {
            SectionLetter::Z(zeta) => prefix += zeta,
            SectionLetter::B { index, exponent } => factors.push(KFactor {
                index: *index,
                eta: prefix.clone(),
                xi: exponent.clone(),
            }),
        }
    }
    KNormalForm::new(factors, prefix)
}

/// The passive part of `kf` at `z^ν` as an `H`-word: factor `j` contributes
/// `(a^{(i_j)})^{ξ_j}` exactly when `η_j + ν > 0`.
pub fn k_evaluate_at(kf: &KNormalForm, nu: &BigInt) -> Result<HWord, EmbedError> {
    let mut word = HWord::new();
    for factor in kf.factors() {
        if (&factor.eta + nu).is_positive() {
            let xi = i64::try_from(&factor.xi)
                .map_err(|_| EmbedError::ExponentOverflow(factor.xi.clone()))?;
            word.push(factor.index, xi)
                .expect("section indices are >= 1 and exponents nonzero");
        }
    }
    Ok(word)
}

fn query<O: WordOracle + ?Sized>(oracle: &mut O, word: &HWord) -> Result<bool, EmbedError> {
    // the empty word is trivial in every group
    if word.is_empty() {
        return Ok(true);
    }
    Ok(oracle.is_trivial(&encode_hword(word))?.is_trivial())
}

/// Integers in `[-radius, radius]`, skipping `exclude` if given.
fn symmetric_window(radius: &BigInt) -> impl Iterator<Item = BigInt> {
    let end = radius.clone();
    let mut next = -radius.clone();
    std::iter::from_fn(move || {
        if next > end {
            return None;
        }
        let current = next.clone();
        next += 1;
        Some(current)
    })
}

/// The `ν` values inspected for a K element: `|ν| <= η0 + 1`.
///
/// The step function `ν ↦ kf(z^ν)` is trivial for `ν <= -η0` and constant for
/// `ν >= 1 + η0`, so this window covers every distinct value.
fn nu_window(kf: &KNormalForm) -> impl Iterator<Item = BigInt> {
    symmetric_window(&(kf.eta0() + 1))
}

/// `μ` values inspected for a G element: `|μ| <= 3γ0`.
fn mu_window(nf: &ConjugateNormalForm) -> impl Iterator<Item = BigInt> {
    symmetric_window(&(nf.gamma0() * 3))
}

pub fn k_is_trivial<O: WordOracle + ?Sized>(
    kf: &KNormalForm,
    oracle: &mut O,
) -> Result<bool, EmbedError> {
    if !kf.eta().is_zero() {
        return Ok(false);
    }
    if kf.factors().is_empty() {
        return Ok(true);
    }
    for nu in nu_window(kf) {
        if !query(oracle, &k_evaluate_at(kf, &nu)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Decides whether `word` is the identity of `G`.
pub fn g_is_trivial<O: WordOracle + ?Sized>(
    word: &CsWord,
    oracle: &mut O,
) -> Result<bool, EmbedError> {
    let nf = conjugate_normal_form(word);
    if !nf.gamma().is_zero() || !class_sums_vanish(&nf) {
        return Ok(false);
    }
    for mu in mu_window(&nf) {
        let kf = k_normal_form(&evaluate_section(&nf, &mu));
        if !k_is_trivial(&kf, oracle)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Decides whether `word` lies in `φ(H)` and, if so, extracts a preimage.
///
/// The preimage is the value at `z⁰` of the section at `s¹`.
pub fn membership<O: WordOracle + ?Sized>(
    word: &CsWord,
    oracle: &mut O,
) -> Result<MembershipResult, EmbedError> {
    let nf = conjugate_normal_form(word);
    if !nf.gamma().is_zero() || !class_sums_vanish(&nf) {
        return Ok(MembershipResult::rejected());
    }
    let one = BigInt::one();
    for mu in mu_window(&nf).filter(|mu| *mu != one) {
        let kf = k_normal_form(&evaluate_section(&nf, &mu));
        if !k_is_trivial(&kf, oracle)? {
            return Ok(MembershipResult::rejected());
        }
    }

    let kf = k_normal_form(&evaluate_section(&nf, &one));
    if !kf.eta().is_zero() {
        return Ok(MembershipResult::rejected());
    }
    for nu in nu_window(&kf).filter(|nu| !nu.is_zero()) {
        if !query(oracle, &k_evaluate_at(&kf, &nu)?)? {
            return Ok(MembershipResult::rejected());
        }
    }
    Ok(MembershipResult {
        member: true,
        value: Some(k_evaluate_at(&kf, &BigInt::zero())?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{wrap_instrumented, BuiltinOracle, FreeAbelian, FreeGroup, TrivialGroup};
    use crate::words::parse_cs_word;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn w(text: &str) -> CsWord {
        parse_cs_word(text).unwrap()
    }

    fn hw(pairs: &[(u64, i64)]) -> HWord {
        HWord::from_pairs(pairs).unwrap()
    }

    fn factors(nf: &ConjugateNormalForm) -> Vec<(i64, i64)> {
        nf.factors()
            .iter()
            .map(|f| {
                (
                    i64::try_from(&f.gamma).unwrap(),
                    i64::try_from(&f.beta).unwrap(),
                )
            })
            .collect()
    }

    fn kform(items: &[(u64, i64, i64)], eta: i64) -> KNormalForm {
        KNormalForm::new(
            items
                .iter()
                .map(|&(index, eta, xi)| KFactor {
                    index,
                    eta: big(eta),
                    xi: big(xi),
                })
                .collect(),
            big(eta),
        )
    }

    #[test]
    fn phi_examples() {
        assert_eq!(
            phi(&hw(&[(1, 1)])).to_string(),
            "c s c s^-1 c^-1 s c^-1 s^-1"
        );
        assert_eq!(
            phi(&hw(&[(2, 1)])).to_string(),
            "c s^3 c s^-3 c^-1 s^3 c^-1 s^-3"
        );
        assert!(phi(&HWord::new()).is_identity());
        assert_eq!(phi(&hw(&[(2, -1)])), phi(&hw(&[(2, 1)])).inverse());
        assert_eq!(phi(&hw(&[(1, 2)])), phi(&hw(&[(1, 1), (1, 1)])));
    }

    #[test]
    fn phi_letter_lengths() {
        use num_bigint::BigUint;
        assert_eq!(phi(&hw(&[(2, 1)])).letter_length(), BigUint::from(16u32));
        assert_eq!(phi(&hw(&[(8, 1)])).letter_length(), BigUint::from(1024u32));
        // exponents past 64 bits stay exact
        let huge = phi(&hw(&[(100, 1)]));
        assert_eq!(huge.alphas()[1], (BigInt::one() << 100u32) - 1);
    }

    #[test]
    fn conjugate_normal_form_examples() {
        let nf = conjugate_normal_form(&w("s c s^-1 c^-1"));
        assert_eq!(factors(&nf), vec![(1, 1), (0, -1)]);
        assert_eq!(nf.gamma(), &big(0));
        assert_eq!(nf.gamma0(), &big(1));

        let nf = conjugate_normal_form(&w("c"));
        assert_eq!(factors(&nf), vec![(0, 1)]);
        assert_eq!(nf.gamma(), &big(0));
        assert_eq!(nf.gamma0(), &big(0));

        let nf = conjugate_normal_form(&w("s^3"));
        assert!(nf.factors().is_empty());
        assert_eq!(nf.gamma(), &big(3));
        assert_eq!(nf.gamma0(), &big(0));
    }

    #[test]
    fn class_sum_examples() {
        let sums = class_sums(&conjugate_normal_form(&w("s c s^-1 c^-1")));
        assert_eq!(
            sums.into_iter().collect::<Vec<_>>(),
            vec![(big(0), big(-1)), (big(1), big(1))]
        );
        let sums = class_sums(&conjugate_normal_form(&w("c s c^-1 s^-1 c")));
        // classes {0: 1 + 1, 1: -1}
        assert_eq!(
            sums.into_iter().collect::<Vec<_>>(),
            vec![(big(0), big(2)), (big(1), big(-1))]
        );
        let nf = ConjugateNormalForm::new(
            vec![
                ConjugateFactor {
                    gamma: big(0),
                    beta: big(1),
                },
                ConjugateFactor {
                    gamma: big(0),
                    beta: big(-1),
                },
            ],
            big(0),
        );
        assert_eq!(
            class_sums(&nf).into_iter().collect::<Vec<_>>(),
            vec![(big(0), big(0))]
        );
        assert!(class_sums(&conjugate_normal_form(&CsWord::identity())).is_empty());
    }

    #[test]
    fn section_cases() {
        let single = |gamma: i64, beta: i64| {
            ConjugateNormalForm::new(
                vec![ConjugateFactor {
                    gamma: big(gamma),
                    beta: big(beta),
                }],
                big(0),
            )
        };
        assert_eq!(
            evaluate_section(&single(3, -2), &big(1)),
            vec![SectionLetter::B {
                index: 2,
                exponent: big(-2)
            }]
        );
        assert_eq!(
            evaluate_section(&single(0, 5), &big(1)),
            vec![SectionLetter::Z(big(5))]
        );
        assert!(evaluate_section(&single(-2, 1), &big(1)).is_empty());
        // 6 is not a power of two; 0 and negatives are never in the support
        assert!(evaluate_section(&single(5, 1), &big(1)).is_empty());
        assert!(evaluate_section(&single(0, 1), &big(0)).is_empty());
        assert!(evaluate_section(&single(0, 1), &big(-4)).is_empty());
    }

    #[test]
    fn section_of_phi_generator() {
        for i in 1..=6u64 {
            let nf = conjugate_normal_form(&phi(&hw(&[(i, 1)])));
            let section = evaluate_section(&nf, &big(1));
            assert_eq!(
                section,
                vec![
                    SectionLetter::Z(big(1)),
                    SectionLetter::B {
                        index: i,
                        exponent: big(1)
                    },
                    SectionLetter::Z(big(-1)),
                    SectionLetter::B {
                        index: i,
                        exponent: big(-1)
                    },
                ]
            );
            let kf = k_normal_form(&section);
            assert_eq!(kf, kform(&[(i, 1, 1), (i, 0, -1)], 0));
            assert_eq!(kf.eta0(), &big(1));
        }
    }

    #[test]
    fn k_normal_form_degenerate() {
        let kf = k_normal_form(&[SectionLetter::Z(big(5))]);
        assert!(kf.factors().is_empty());
        assert_eq!(kf.eta(), &big(5));
        assert_eq!(kf.eta0(), &big(0));
        let kf = k_normal_form(&[]);
        assert_eq!(kf, kform(&[], 0));
    }

    #[test]
    fn k_evaluate_examples() {
        assert_eq!(
            k_evaluate_at(&kform(&[(2, 1, -3)], 0), &big(0)).unwrap(),
            hw(&[(2, -3)])
        );
        assert!(k_evaluate_at(&kform(&[(2, -1, 5)], 0), &big(0))
            .unwrap()
            .is_empty());
        let kf = kform(&[(4, 1, 1), (4, 0, -1)], 0);
        assert_eq!(k_evaluate_at(&kf, &big(1)).unwrap(), hw(&[(4, 1), (4, -1)]));
        assert_eq!(k_evaluate_at(&kf, &big(0)).unwrap(), hw(&[(4, 1)]));
        assert!(k_evaluate_at(&kf, &big(-1)).unwrap().is_empty());
    }

    #[test]
    fn k_evaluate_overflowing_exponent() {
        let kf = KNormalForm::new(
            vec![KFactor {
                index: 1,
                eta: big(1),
                xi: BigInt::one() << 80u32,
            }],
            big(0),
        );
        assert!(matches!(
            k_evaluate_at(&kf, &big(0)),
            Err(EmbedError::ExponentOverflow(_))
        ));
    }

    #[test]
    fn k_triviality_examples() {
        assert!(k_is_trivial(&kform(&[], 0), &mut FreeGroup).unwrap());
        assert!(!k_is_trivial(&kform(&[], 2), &mut TrivialGroup).unwrap());
        // single b^(1): value 1 up to ν = 0, a1 from ν = 1 on
        assert!(!k_is_trivial(&kform(&[(1, 0, 1)], 0), &mut FreeAbelian).unwrap());
        assert!(!k_is_trivial(&kform(&[(3, 1, 1), (3, 0, -1)], 0), &mut FreeGroup).unwrap());
        assert!(k_is_trivial(&kform(&[(3, 1, 1), (3, 0, -1)], 0), &mut TrivialGroup).unwrap());
        // same threshold on both factors: cancels everywhere
        assert!(k_is_trivial(&kform(&[(3, 2, 1), (3, 2, -1)], 0), &mut FreeGroup).unwrap());
    }

    #[test]
    fn nu_window_needs_the_extra_point() {
        // With the literal window |ν| <= η0 = 0 the single factor below would
        // be judged trivial; its first nontrivial value sits at ν = 1.
        let kf = kform(&[(1, 0, 1)], 0);
        assert!(k_evaluate_at(&kf, &big(0)).unwrap().is_empty());
        assert_eq!(k_evaluate_at(&kf, &big(1)).unwrap(), hw(&[(1, 1)]));
    }

    #[test]
    fn commutator_caught_only_past_eta0() {
        // [c, c^{s^2}] has one nontrivial section, b1 b2 b1⁻¹ b2⁻¹ at μ = 2, with
        // every η_j = 0. Its value is 1 at ν = 0 and [a1, a2] from ν = 1 on.
        let word = CsWord::c().commutator(&CsWord::c().conjugated_by(&w("s^2")));
        let nf = conjugate_normal_form(&word);
        let kf = k_normal_form(&evaluate_section(&nf, &big(2)));
        assert_eq!(kf.eta0(), &big(0));
        assert!(k_evaluate_at(&kf, &big(0)).unwrap().is_empty());
        assert!(!g_is_trivial(&word, &mut FreeGroup).unwrap());
        assert!(g_is_trivial(&word, &mut FreeAbelian).unwrap());
        assert!(!crate::bruteforce::brute_is_trivial(&word, &mut FreeGroup).unwrap());
    }

    #[test]
    fn word_problem_examples() {
        assert!(!g_is_trivial(&w("s"), &mut FreeGroup).unwrap());
        assert!(g_is_trivial(&w("c c^-1"), &mut FreeGroup).unwrap());
        assert!(!g_is_trivial(&w("c^2"), &mut TrivialGroup).unwrap());
        let phi_a1 = phi(&hw(&[(1, 1)]));
        assert!(g_is_trivial(&phi_a1, &mut TrivialGroup).unwrap());
        assert!(!g_is_trivial(&phi_a1, &mut FreeGroup).unwrap());
        assert!(g_is_trivial(&CsWord::identity(), &mut FreeGroup).unwrap());
    }

    #[test]
    fn sparse_support_gives_relations() {
        // c(s^k) and c(s^{k+5}) are never both nontrivial, so they commute
        let x = CsWord::c();
        let y = CsWord::c().conjugated_by(&w("s^5"));
        assert!(g_is_trivial(&x.commutator(&y), &mut FreeGroup).unwrap());
        // shift 1 lines up 1 and 2: [z, b^(1)] ≠ 1
        let y = CsWord::c().conjugated_by(&w("s"));
        assert!(!g_is_trivial(&x.commutator(&y), &mut FreeGroup).unwrap());
    }

    #[test]
    fn phi_is_a_homomorphism_on_relators() {
        // [a1, a2] is trivial exactly when H is abelian
        let u = hw(&[(1, 1), (2, 1), (1, -1), (2, -1)]);
        assert!(g_is_trivial(&phi(&u), &mut FreeAbelian).unwrap());
        assert!(!g_is_trivial(&phi(&u), &mut FreeGroup).unwrap());
        let u = hw(&[(3, 2)]);
        assert!(g_is_trivial(&phi(&u), &mut BuiltinOracle::Cyclic(2)).unwrap());
        assert!(!g_is_trivial(&phi(&u), &mut BuiltinOracle::Cyclic(3)).unwrap());
    }

    #[test]
    fn membership_examples() {
        let result = membership(&phi(&hw(&[(1, 1)])), &mut FreeAbelian).unwrap();
        assert!(result.member);
        assert_eq!(result.value, Some(hw(&[(1, 1)])));

        assert_eq!(
            membership(&w("s"), &mut FreeGroup).unwrap(),
            MembershipResult::rejected()
        );
        assert!(!membership(&w("c"), &mut FreeGroup).unwrap().member);
        assert!(!membership(&w("s c s^-1"), &mut FreeGroup).unwrap().member);

        let result = membership(&w("c c^-1"), &mut FreeGroup).unwrap();
        assert!(result.member);
        assert_eq!(result.value, Some(HWord::new()));
    }

    #[test]
    fn membership_rejects_conjugated_image() {
        // s φ(a1) s⁻¹ moves the support from s¹ to s⁰
        let moved = phi(&hw(&[(1, 1)])).conjugated_by(&CsWord::s());
        assert!(!membership(&moved, &mut FreeGroup).unwrap().member);
        // but in the trivial group it is the identity, hence a member
        assert!(membership(&moved, &mut TrivialGroup).unwrap().member);
    }

    #[test]
    fn membership_extracts_products() {
        let u = hw(&[(2, -1), (1, 2), (3, 1)]);
        let result = membership(&phi(&u), &mut FreeGroup).unwrap();
        assert!(result.member);
        let value = result.value.unwrap();
        assert!(crate::oracles::free_is_trivial(&(&value * &u.inverse())));
    }

    #[test]
    fn empty_word_issues_no_queries() {
        let mut oracle = wrap_instrumented(FreeGroup);
        assert!(g_is_trivial(&CsWord::identity(), &mut oracle).unwrap());
        assert!(membership(&CsWord::identity(), &mut oracle).unwrap().member);
        assert_eq!(oracle.stats().query_count, 0);
    }

    #[test]
    fn queries_use_small_indices() {
        let word = phi(&hw(&[(5, 1), (3, -1)]));
        let gamma0 = i64::try_from(conjugate_normal_form(&word).gamma0()).unwrap() as u64;
        let mut oracle = wrap_instrumented(FreeGroup);
        g_is_trivial(&word, &mut oracle).unwrap();
        assert!(oracle.stats().query_count > 0);
        assert!(oracle.stats().max_generator_index <= crate::words::floor_log2(4 * gamma0));
    }
}
