//! Embedding a countable group `H` with solvable word problem into the
//! 2-generated group `G = ⟨c, s⟩ ≤ (H Wr ℤ) Wr ℤ`, with decision procedures
//! for the word problem of `G` and for membership in the embedded copy of `H`.
//!
//! ```
//! use twogen_core::{g_is_trivial, membership, parse_cs_word, phi, FreeGroup, HWord};
//!
//! let w = phi(&"a1 a2^-1".parse::<HWord>().unwrap());
//! assert!(!g_is_trivial(&w, &mut FreeGroup).unwrap());
//! assert!(membership(&w, &mut FreeGroup).unwrap().member);
//! assert!(g_is_trivial(&parse_cs_word("c s c^-1 s^-1 s c s^-1 c^-1").unwrap(), &mut FreeGroup).unwrap());
//! ```

pub mod bounds;
pub mod bruteforce;
pub mod embed;
pub mod fuzz;
pub mod oracles;
pub mod words;

pub use bounds::{BoundCheck, WordMeasure};
pub use bruteforce::{brute_is_trivial, brute_membership, candidate_support, SupportPointSet};
pub use embed::{
    class_sums, conjugate_normal_form, evaluate_section, g_is_trivial, k_evaluate_at, k_is_trivial,
    k_normal_form, membership, phi, ConjugateFactor, ConjugateNormalForm, EmbedError, KFactor,
    KNormalForm, MembershipResult, SectionLetter,
};
pub use fuzz::{differential_check, DifferentialReport, WordFamily, WordGenerator};
pub use oracles::{
    oracle_is_trivial, wrap_delayed, wrap_instrumented, BuiltinOracle, CyclicSum, DelayModel,
    Delayed, FreeAbelian, FreeGroup, Instrumented, OracleError, OracleStats, OracleVerdict,
    TrivialGroup, WordOracle,
};
pub use words::{
    decode_hword, encode_hword, lg, parse_cs_word, CsWord, Generator, HLetter, HWord,
    QuaternaryCode, WordError,
};
