//! Seeded random words and the embed-vs-bruteforce differential check.
//!
//! Word `index` under seed `seed` is drawn from its own ChaCha stream, so any
//! failure is replayable from `(seed, index)` alone.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{decide_checks, member_checks, BoundCheck, WordMeasure};
use crate::bruteforce::{brute_is_trivial, brute_membership};
use crate::embed::{g_is_trivial, membership, phi, EmbedError};
use crate::oracles::{wrap_instrumented, BuiltinOracle, OracleStats, WordOracle};
use crate::words::{encode_hword, saturating_u64, CsWord, Generator, HWord};

/// Shape of the words a [`WordGenerator`] draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordFamily {
    /// Alternating `c`/`s` blocks with random exponents.
    UniformBlocks,
    /// Random words and the structured families below in equal shares:
    /// commutators of conjugates of `c`-powers, conjugates of `φ`-images,
    /// plain `φ`-images and products of two such words. These pass the
    /// class-sum test far more often than uniform words do.
    Mixed,
}

#[derive(Debug, Clone)]
pub struct WordGenerator {
    seed: u64,
    family: WordFamily,
}

impl WordGenerator {
    pub fn new(seed: u64, family: WordFamily) -> Self {
        Self { seed, family }
    }

    fn rng(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }

    /// Word number `index`, of letter length at most `max_len`.
    pub fn word(&self, index: u64, max_len: u64) -> CsWord {
        let mut rng = self.rng(index);
        match self.family {
            WordFamily::UniformBlocks => uniform_blocks(&mut rng, max_len),
            WordFamily::Mixed => mixed(&mut rng, max_len),
        }
    }
}

/// Alternating blocks; each exponent is bounded by the remaining budget so
/// the letter length never exceeds the drawn target.
pub fn uniform_blocks<R: Rng>(rng: &mut R, max_len: u64) -> CsWord {
    let target = rng.gen_range(0..=max_len);
    let mut remaining = target;
    let mut generator = if rng.gen_bool(0.5) {
        Generator::C
    } else {
        Generator::S
    };
    let mut blocks = Vec::new();
    while remaining > 0 {
        let magnitude = rng.gen_range(1..=remaining.min(6));
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        blocks.push((generator, BigInt::from(sign * magnitude as i64)));
        remaining -= magnitude;
        generator = match generator {
            Generator::C => Generator::S,
            Generator::S => Generator::C,
        };
    }
    CsWord::from_blocks(blocks)
}

fn small_exponent<R: Rng>(rng: &mut R, max: i64) -> i64 {
    let magnitude = rng.gen_range(1..=max);
    if rng.gen_bool(0.5) {
        magnitude
    } else {
        -magnitude
    }
}

fn conjugated_c_power<R: Rng>(rng: &mut R) -> CsWord {
    let shift = rng.gen_range(-9i64..=9);
    let power = small_exponent(rng, 2);
    CsWord::c()
        .pow(power)
        .conjugated_by(&CsWord::s().pow(shift))
}

fn short_conjugator<R: Rng>(rng: &mut R) -> CsWord {
    let len = rng.gen_range(0..=6);
    uniform_blocks(rng, len)
}

fn small_hword<R: Rng>(rng: &mut R) -> HWord {
    let letters = rng.gen_range(1..=2);
    let mut word = HWord::new();
    for _ in 0..letters {
        let index = rng.gen_range(1..=3);
        let exponent = if rng.gen_bool(0.5) { 1 } else { -1 };
        word.push(index, exponent).expect("valid letter");
    }
    word
}

fn structured<R: Rng>(rng: &mut R) -> CsWord {
    match rng.gen_range(0..4) {
        0 => conjugated_c_power(rng)
            .commutator(&conjugated_c_power(rng))
            .conjugated_by(&short_conjugator(rng)),
        1 => phi(&small_hword(rng)).conjugated_by(&short_conjugator(rng)),
        2 => phi(&small_hword(rng)),
        _ => {
            let left = conjugated_c_power(rng).commutator(&conjugated_c_power(rng));
            let right = phi(&HWord::generator(rng.gen_range(1..=2)).expect("index >= 1"))
                .conjugated_by(&short_conjugator(rng));
            &left * &right
        }
    }
}

fn mixed<R: Rng>(rng: &mut R, max_len: u64) -> CsWord {
    if rng.gen_bool(0.5) {
        return uniform_blocks(rng, max_len);
    }
    for _ in 0..16 {
        let word = structured(rng);
        if saturating_u64(&word.letter_length()) <= max_len {
            return word;
        }
    }
    uniform_blocks(rng, max_len)
}

/// Verdicts of both deciders on one word, with per-call bound checks.
#[derive(Debug, Clone)]
pub struct DifferentialReport {
    pub trivial: bool,
    pub brute_trivial: bool,
    pub member: bool,
    pub brute_member: bool,
    /// Both extracted preimages are equal in `H` (vacuously true unless both are members).
    pub values_agree: bool,
    pub value: Option<HWord>,
    pub bounds: Vec<BoundCheck>,
    /// Merged stats of the two embed-side calls.
    pub stats: OracleStats,
}

impl DifferentialReport {
    pub fn agrees(&self) -> bool {
        self.trivial == self.brute_trivial && self.member == self.brute_member && self.values_agree
    }

    pub fn bounds_hold(&self) -> bool {
        self.bounds.iter().all(|b| b.pass)
    }

    /// Human-readable reason for the first failed expectation, if any.
    pub fn failure(&self) -> Option<String> {
        if self.trivial != self.brute_trivial {
            return Some(format!(
                "word problem: embed says {}, bruteforce says {}",
                self.trivial, self.brute_trivial
            ));
        }
        if self.member != self.brute_member {
            return Some(format!(
                "membership: embed says {}, bruteforce says {}",
                self.member, self.brute_member
            ));
        }
        if !self.values_agree {
            return Some("extracted preimages differ in H".to_string());
        }
        self.bounds
            .iter()
            .find(|b| !b.pass)
            .map(|b| format!("bound {} violated: {} > {}", b.name, b.observed, b.limit))
    }
}

/// Runs the normal-form deciders (each on a fresh instrumented oracle) and the
/// brute-force evaluator on `word`.
pub fn differential_check(
    word: &CsWord,
    oracle: BuiltinOracle,
) -> Result<DifferentialReport, EmbedError> {
    let measure = WordMeasure::of(word);

    let mut decide_oracle = wrap_instrumented(oracle);
    let trivial = g_is_trivial(word, &mut decide_oracle)?;
    let mut bounds = decide_checks(measure, &decide_oracle.stats());
    for check in &mut bounds {
        check.name = format!("decide.{}", check.name);
    }

    let mut member_oracle = wrap_instrumented(oracle);
    let member = membership(word, &mut member_oracle)?;
    bounds.extend(
        member_checks(measure, &member_oracle.stats())
            .into_iter()
            .map(|mut c| {
                c.name = format!("member.{}", c.name);
                c
            }),
    );

    let mut brute_oracle = oracle;
    let brute_trivial = brute_is_trivial(word, &mut brute_oracle)?;
    let brute = brute_membership(word, &mut brute_oracle)?;

    let values_agree = match (&member.value, &brute.value) {
        (Some(ours), Some(theirs)) => {
            let quotient = ours * &theirs.inverse();
            brute_oracle
                .is_trivial(&encode_hword(&quotient))?
                .is_trivial()
        }
        _ => true,
    };

    let mut stats = decide_oracle.stats();
    stats.merge(&member_oracle.stats());
    Ok(DifferentialReport {
        trivial,
        brute_trivial,
        member: member.member,
        brute_member: brute.member,
        values_agree,
        value: member.value,
        bounds,
        stats,
    })
}
