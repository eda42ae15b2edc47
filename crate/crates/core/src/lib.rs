//! Absorption of subalgebras in finite semigroups and n-ary semigroups.
//!
//! The crate decides whether a subuniverse `B` of a finite (n-ary) semigroup
//! `A` absorbs `A` through the product-and-exponent criterion, checks the
//! result against a brute-force search for absorbing idempotent terms, and
//! runs both over exhaustively enumerated or sampled corpora.
//!
//! - [`algebra`]: tables, words, powers, subuniverses.
//! - [`absorption`]: the product-and-exponent criterion, witnesses, case tags.
//! - [`oracle`]: bounded search for absorbing terms.
//! - [`enumeration`]: corpus generators and canonical forms.
//! - [`harness`]: per-pair checks, corpus runs, reports, file formats.

pub mod absorption;
pub mod algebra;
pub mod enumeration;
mod error;
pub mod harness;
pub mod oracle;

pub use absorption::{
    cond2_products, cond3_products, construct_witness, decide_theorem, derive_power_algebra,
    detect_case, verify_witness, AbsorptionVerdict, CaseTag, FailedCondition,
};
pub use algebra::{
    compute_exponent, element_power, enumerate_subuniverses, eval_word, is_associative, is_closed,
    is_commutative, is_idempotent, Elem, NaryTable, PowerProfile, Subuniverse, Word,
};
pub use error::{Error, Result};
pub use oracle::{oracle_agrees, search_absorbing_term, Agreement, OracleBounds, OracleOutcome};
