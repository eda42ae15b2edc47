//! Brute-force search for absorbing idempotent terms.
//!
//! This module only knows the definition of absorption: a word is a witness
//! when it is idempotent and every single-coordinate substitution of an
//! arbitrary element, with all other variables in `B`, evaluates into `B`.
//! It never consults the product-and-exponent criterion.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::absorption::{verify_unchecked, AbsorptionVerdict};
use crate::algebra::{is_closed, is_valid_length, NaryTable, PowerCache, Subuniverse, Word};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_VARS: usize = 3;
pub const DEFAULT_MIN_MAX_LEN: usize = 9;

/// Truncation of the term space searched by the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleBounds {
    pub max_vars: usize,
    pub max_len: usize,
    /// Admit the one-letter word `x`.
    pub allow_trivial: bool,
}

impl OracleBounds {
    pub fn new(max_vars: usize, max_len: usize) -> Self {
        OracleBounds {
            max_vars,
            max_len,
            allow_trivial: false,
        }
    }

    /// Three variables and length `max(9, k)`.
    pub fn default_for(table: &NaryTable) -> Self {
        let k = PowerCache::new(table).exponent().unwrap_or(0);
        OracleBounds::new(DEFAULT_MAX_VARS, DEFAULT_MIN_MAX_LEN.max(k))
    }

    fn validate(&self) -> Result<()> {
        if self.max_vars == 0 || (!self.allow_trivial && self.max_len < 2) {
            return Err(Error::PreconditionsUnmet(format!(
                "oracle bounds need max_vars ≥ 1 and max_len ≥ 2, got {self:?}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum OracleResult {
    FoundWitness(Word),
    NoneWithinBounds,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleOutcome {
    pub result: OracleResult,
    pub words_examined: u64,
}

impl OracleOutcome {
    pub fn witness(&self) -> Option<&Word> {
        match &self.result {
            OracleResult::FoundWitness(w) => Some(w),
            OracleResult::NoneWithinBounds => None,
        }
    }

    pub fn found(&self) -> bool {
        self.witness().is_some()
    }
}

/// Search-space reductions; switching them off only changes `words_examined`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pruning {
    /// Canonical variable naming, only variables that occur, and skipping
    /// lengths at which no idempotent word exists.
    On,
    /// Every letter sequence over `max_vars` declared variables.
    Off,
}

/// First absorbing word in (length, lexicographic) order within `bounds`.
pub fn search_absorbing_term(
    table: &NaryTable,
    sub: &Subuniverse,
    bounds: &OracleBounds,
) -> Result<OracleOutcome> {
    search_absorbing_term_with(table, sub, bounds, Pruning::On)
}

pub fn search_absorbing_term_with(
    table: &NaryTable,
    sub: &Subuniverse,
    bounds: &OracleBounds,
    pruning: Pruning,
) -> Result<OracleOutcome> {
    sub.check_against(table)?;
    bounds.validate()?;
    if !is_closed(table, sub) {
        return Err(Error::NotClosed);
    }
    if sub.is_full() {
        return Err(Error::NotProperSubuniverse);
    }
    let powers = PowerCache::new(table);
    let n = table.arity();
    let min_len = if bounds.allow_trivial { 1 } else { 2 };
    let mut examined = 0u64;
    let mut letters = Vec::with_capacity(bounds.max_len);
    for len in (min_len..=bounds.max_len).filter(|&q| is_valid_length(q, n)) {
        // a word of length q is idempotent only if a^q = a everywhere
        if pruning == Pruning::On && !powers.fixes_all(len) {
            continue;
        }
        letters.clear();
        let hit = match pruning {
            Pruning::On => {
                restricted_growth(&mut letters, len, bounds.max_vars, 0, &mut |w, used| {
                    examined += 1;
                    test_word(table, sub, w, used)
                })
            }
            Pruning::Off => all_sequences(&mut letters, len, bounds.max_vars, &mut |w| {
                examined += 1;
                test_word(table, sub, w, bounds.max_vars)
            }),
        };
        if let ControlFlow::Break(word) = hit {
            debug_assert!(verify_unchecked(table, sub, word.letters(), word.num_vars()));
            return Ok(OracleOutcome {
                result: OracleResult::FoundWitness(word),
                words_examined: examined,
            });
        }
    }
    Ok(OracleOutcome {
        result: OracleResult::NoneWithinBounds,
        words_examined: examined,
    })
}

fn test_word(table: &NaryTable, sub: &Subuniverse, letters: &[usize], num_vars: usize) -> ControlFlow<Word> {
    if verify_unchecked(table, sub, letters, num_vars) {
        ControlFlow::Break(Word::new(num_vars, letters.to_vec()).expect("letters below num_vars"))
    } else {
        ControlFlow::Continue(())
    }
}

/// Words whose variables first occur in increasing order, in lexicographic order.
fn restricted_growth(
    prefix: &mut Vec<usize>,
    len: usize,
    max_vars: usize,
    used: usize,
    visit: &mut impl FnMut(&[usize], usize) -> ControlFlow<Word>,
) -> ControlFlow<Word> {
    if prefix.len() == len {
        return visit(prefix, used);
    }
    for l in 0..(used + 1).min(max_vars) {
        prefix.push(l);
        let r = restricted_growth(prefix, len, max_vars, used.max(l + 1), visit);
        prefix.pop();
        r?;
    }
    ControlFlow::Continue(())
}

fn all_sequences(
    prefix: &mut Vec<usize>,
    len: usize,
    max_vars: usize,
    visit: &mut impl FnMut(&[usize]) -> ControlFlow<Word>,
) -> ControlFlow<Word> {
    if prefix.len() == len {
        return visit(prefix);
    }
    for l in 0..max_vars {
        prefix.push(l);
        let r = all_sequences(prefix, len, max_vars, visit);
        prefix.pop();
        r?;
    }
    ControlFlow::Continue(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Agreement {
    Agree,
    Disagree,
    Unresolved,
}

/// Compares a criterion verdict with an oracle outcome on the same pair.
///
/// A positive verdict comes with the witness `x^(k-1) y`, so bounds with two
/// variables and length `k` must find something. A negative verdict is only
/// confirmed when a proved case covers the pair.
pub fn oracle_agrees(
    table: &NaryTable,
    bounds: &OracleBounds,
    verdict: &AbsorptionVerdict,
    outcome: &OracleOutcome,
) -> Agreement {
    let bound_covers_witness =
        bounds.max_vars >= 2 && verdict.exponent_k.is_none_or(|k| bounds.max_len >= k);
    let proved = table.arity() == 2 || verdict.proof_status.is_proved();
    match (verdict.absorbs, outcome.found()) {
        (true, true) => Agreement::Agree,
        (false, true) => Agreement::Disagree,
        (true, false) if bound_covers_witness => Agreement::Disagree,
        (false, false) if bound_covers_witness && proved => Agreement::Agree,
        _ => Agreement::Unresolved,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::absorption::{decide_theorem, verify_witness, CaseTag};

    fn min2() -> NaryTable {
        NaryTable::from_fn(2, 2, |x| x[0].min(x[1])).unwrap()
    }
    fn left_zero() -> NaryTable {
        NaryTable::from_fn(2, 2, |x| x[0]).unwrap()
    }
    fn b0() -> Subuniverse {
        Subuniverse::from_elements(2, &[0]).unwrap()
    }

    #[test]
    fn finds_shortest_witness() {
        let t = min2();
        let out = search_absorbing_term(&t, &b0(), &OracleBounds::default_for(&t)).unwrap();
        assert_eq!(out.witness().unwrap().to_string(), "xy");
        // only "xx" precedes it
        assert_eq!(out.words_examined, 2);
    }

    #[test]
    fn finds_nothing_for_left_zero_and_z2() {
        let t = left_zero();
        let out = search_absorbing_term(&t, &b0(), &OracleBounds::default_for(&t)).unwrap();
        assert_eq!(out.result, OracleResult::NoneWithinBounds);
        let z2 = NaryTable::from_fn(2, 2, |x| (x[0] + x[1]) % 2).unwrap();
        let out = search_absorbing_term(&z2, &b0(), &OracleBounds::default_for(&z2)).unwrap();
        assert_eq!(out.result, OracleResult::NoneWithinBounds);
    }

    #[test]
    fn rejects_invalid_pairs() {
        let t = min2();
        let full = Subuniverse::full(2).unwrap();
        assert_eq!(
            search_absorbing_term(&t, &full, &OracleBounds::new(3, 9)),
            Err(Error::NotProperSubuniverse)
        );
        let z2 = NaryTable::from_fn(2, 2, |x| (x[0] + x[1]) % 2).unwrap();
        let b1 = Subuniverse::from_elements(2, &[1]).unwrap();
        assert_eq!(search_absorbing_term(&z2, &b1, &OracleBounds::new(3, 9)), Err(Error::NotClosed));
        assert!(search_absorbing_term(&t, &b0(), &OracleBounds::new(3, 1)).is_err());
    }

    #[test]
    fn trivial_words_only_when_allowed() {
        // with B = A the one-letter word would absorb, but B = A is rejected;
        // on a proper B the one-letter word never absorbs
        let t = min2();
        let bounds = OracleBounds {
            allow_trivial: true,
            ..OracleBounds::new(2, 2)
        };
        let out = search_absorbing_term(&t, &b0(), &bounds).unwrap();
        assert_eq!(out.witness().unwrap().len(), 2);
        assert_eq!(out.words_examined, 3);
    }

    #[test]
    fn idempotence_prefilter_skips_lengths() {
        // Z_3: only lengths ≡ 1 mod 3 are idempotent, and nothing absorbs {0}
        let z3 = NaryTable::from_fn(2, 3, |x| (x[0] + x[1]) % 3).unwrap();
        let b = Subuniverse::from_elements(3, &[0]).unwrap();
        let on = search_absorbing_term(&z3, &b, &OracleBounds::new(2, 7)).unwrap();
        let off = search_absorbing_term_with(&z3, &b, &OracleBounds::new(2, 7), Pruning::Off).unwrap();
        assert!(!on.found() && !off.found());
        // lengths 4 and 7 only, 2^(q-1) restricted-growth words each
        assert_eq!(on.words_examined, 8 + 64);
        assert_eq!(off.words_examined, (2..=7).map(|q| 1u64 << q).sum::<u64>());
    }

    #[test]
    fn witnesses_verify() {
        let t = NaryTable::from_fn(3, 2, |x| *x.iter().min().unwrap()).unwrap();
        let out = search_absorbing_term(&t, &b0(), &OracleBounds::default_for(&t)).unwrap();
        let w = out.witness().unwrap();
        assert_eq!(w.to_string(), "xxy");
        assert!(verify_witness(&t, &b0(), w).unwrap());
    }

    #[test]
    fn agreement_examples() {
        let t = min2();
        let bounds = OracleBounds::default_for(&t);
        let v = decide_theorem(&t, &b0()).unwrap();
        let o = search_absorbing_term(&t, &b0(), &bounds).unwrap();
        assert_eq!(oracle_agrees(&t, &bounds, &v, &o), Agreement::Agree);

        let t = left_zero();
        let v = decide_theorem(&t, &b0()).unwrap();
        let o = search_absorbing_term(&t, &b0(), &bounds).unwrap();
        assert_eq!(oracle_agrees(&t, &bounds, &v, &o), Agreement::Agree);
    }

    #[test]
    fn conjectural_negative_is_unresolved() {
        let bin = NaryTable::from_fn(2, 4, |x| (x[0] / 2) * 2).unwrap();
        let ter = crate::absorption::derive_power_algebra(&bin, 3).unwrap();
        let b = Subuniverse::from_elements(4, &[0, 2]).unwrap();
        let v = decide_theorem(&ter, &b).unwrap();
        assert_eq!(v.proof_status, CaseTag::Conjectural);
        assert!(!v.absorbs);
        let bounds = OracleBounds::default_for(&ter);
        let o = search_absorbing_term(&ter, &b, &bounds).unwrap();
        assert!(!o.found());
        assert_eq!(oracle_agrees(&ter, &bounds, &v, &o), Agreement::Unresolved);
    }

    #[test]
    fn positive_verdict_without_oracle_hit_is_disagreement_only_within_bounds() {
        let t = min2();
        let v = decide_theorem(&t, &b0()).unwrap();
        let none = OracleOutcome {
            result: OracleResult::NoneWithinBounds,
            words_examined: 0,
        };
        assert_eq!(oracle_agrees(&t, &OracleBounds::new(2, 2), &v, &none), Agreement::Disagree);
        assert_eq!(oracle_agrees(&t, &OracleBounds::new(1, 2), &v, &none), Agreement::Unresolved);
    }
}
