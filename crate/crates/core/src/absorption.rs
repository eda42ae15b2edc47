//! Product-and-exponent criterion for absorption in (n-ary) semigroups.
//!
//! For a semigroup `A` and a proper subuniverse `B`, `B` absorbs `A` exactly
//! when `ab, ba ∈ B` for all `a ∈ A`, `b ∈ B` and some `k > 1` satisfies
//! `a^k = a` everywhere. The witness is then `x^(k-1) y`.
//!
//! For arity `n ≥ 3` the analogous condition reads `a b^(n-1), b^(n-1) a ∈ B`
//! (condition 2), with the stronger-looking condition 3 asking that any
//! product with at least one factor from `B` stays in `B`. The equivalence with
//! absorption is known for commutative operations, for `|A \ B| = 1`, and for
//! idempotent ternary semigroups; elsewhere verdicts are tagged
//! [`CaseTag::Conjectural`].

use serde::{Deserialize, Serialize};

use crate::algebra::{
    checked_pow, eval_letters_unchecked, for_each_tuple, for_each_tuple_until, is_closed,
    is_valid_length, NaryTable, PowerCache, Subuniverse, Word,
};
use crate::error::{Error, Result};

/// Largest table [`derive_power_algebra`] will tabulate.
pub const MAX_DERIVED_CELLS: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FailedCondition {
    ProductsEscapeB,
    NoExponent,
}

/// Which proved result (if any) certifies a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseTag {
    TheoremBinary,
    TheoremCommutative,
    TheoremCoatom,
    TheoremIdempotentTernary,
    Conjectural,
}

impl CaseTag {
    pub const ALL: [CaseTag; 5] = [
        CaseTag::TheoremBinary,
        CaseTag::TheoremCommutative,
        CaseTag::TheoremCoatom,
        CaseTag::TheoremIdempotentTernary,
        CaseTag::Conjectural,
    ];

    pub fn is_proved(self) -> bool {
        self != CaseTag::Conjectural
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsorptionVerdict {
    pub absorbs: bool,
    pub exponent_k: Option<usize>,
    pub witness: Option<Word>,
    pub failed_condition: Option<FailedCondition>,
    pub proof_status: CaseTag,
}

fn check_pair(table: &NaryTable, sub: &Subuniverse) -> Result<()> {
    sub.check_against(table)?;
    if !table.is_associative() {
        return Err(Error::NotAssociative);
    }
    if !is_closed(table, sub) {
        return Err(Error::NotClosed);
    }
    if sub.is_full() {
        return Err(Error::NotProperSubuniverse);
    }
    Ok(())
}

/// Condition 2: `f(a, b, .., b) ∈ B` and `f(b, .., b, a) ∈ B` for all `a ∈ A`, `b ∈ B`.
pub fn cond2_products(table: &NaryTable, sub: &Subuniverse) -> bool {
    let n = table.arity();
    let mut args = vec![0; n];
    sub.elements().into_iter().all(|b| {
        (0..table.size()).all(|a| {
            args.fill(b);
            args[0] = a;
            if !sub.contains(table.apply(&args)) {
                return false;
            }
            args[0] = b;
            args[n - 1] = a;
            sub.contains(table.apply(&args))
        })
    })
}

/// Condition 3: every product with at least one factor in `B` lands in `B`.
pub fn cond3_products(table: &NaryTable, sub: &Subuniverse) -> bool {
    (0..table.entries().len()).all(|idx| {
        let t = table.tuple_of(idx);
        !t.iter().any(|&a| sub.contains(a)) || sub.contains(table.cell(idx))
    })
}

/// Which proved case covers the pair; priority binary, commutative, coatom, idempotent ternary.
pub fn detect_case(table: &NaryTable, sub: &Subuniverse) -> CaseTag {
    if table.arity() == 2 {
        CaseTag::TheoremBinary
    } else if table.is_commutative() {
        CaseTag::TheoremCommutative
    } else if table.size() - sub.len() == 1 {
        CaseTag::TheoremCoatom
    } else if table.arity() == 3 && table.is_idempotent() {
        CaseTag::TheoremIdempotentTernary
    } else {
        CaseTag::Conjectural
    }
}

/// The two-variable witness `x^(k-1) y`.
pub fn construct_witness(k: usize) -> Word {
    assert!(k >= 2, "exponent must exceed 1");
    let mut letters = vec![0; k - 1];
    letters.push(1);
    Word::new(2, letters).expect("two-variable word")
}

/// Whether `word` is an idempotent term under which `sub` absorbs `table`.
///
/// Every declared variable is quantified, including ones that never occur.
pub fn verify_witness(table: &NaryTable, sub: &Subuniverse, word: &Word) -> Result<bool> {
    sub.check_against(table)?;
    if !is_valid_length(word.len(), table.arity()) {
        return Err(Error::LengthNotEvaluable {
            length: word.len(),
            arity: table.arity(),
        });
    }
    Ok(verify_unchecked(table, sub, word.letters(), word.num_vars()))
}

pub(crate) fn verify_unchecked(
    table: &NaryTable,
    sub: &Subuniverse,
    letters: &[usize],
    num_vars: usize,
) -> bool {
    let m = table.size();
    let mut asg = vec![0; num_vars];
    for a in 0..m {
        asg.fill(a);
        if eval_letters_unchecked(table, letters, &asg) != a {
            return false;
        }
    }
    let members = sub.elements();
    let mut ok = true;
    for var in 0..num_vars {
        for a in 0..m {
            for_each_tuple_until(members.len(), num_vars - 1, |pick| {
                let mut others = pick.iter();
                for (v, slot) in asg.iter_mut().enumerate() {
                    *slot = if v == var {
                        a
                    } else {
                        members[*others.next().expect("tuple length")]
                    };
                }
                ok = sub.contains(eval_letters_unchecked(table, letters, &asg));
                ok
            });
            if !ok {
                return false;
            }
        }
    }
    true
}

/// Decides absorption of a proper closed subuniverse via condition 2 and the exponent.
pub fn decide_theorem(table: &NaryTable, sub: &Subuniverse) -> Result<AbsorptionVerdict> {
    check_pair(table, sub)?;
    let exponent_k = PowerCache::new(table).exponent();
    let proof_status = detect_case(table, sub);
    let failed_condition = if !cond2_products(table, sub) {
        Some(FailedCondition::ProductsEscapeB)
    } else if exponent_k.is_none() {
        Some(FailedCondition::NoExponent)
    } else {
        None
    };
    let absorbs = failed_condition.is_none();
    Ok(AbsorptionVerdict {
        absorbs,
        exponent_k,
        witness: if absorbs { exponent_k.map(construct_witness) } else { None },
        failed_condition,
        proof_status,
    })
}

/// The `k`-ary operation `f'(x_1, .., x_k) = x_1 x_2 .. x_k`.
pub fn derive_power_algebra(table: &NaryTable, k: usize) -> Result<NaryTable> {
    let step = table.arity() - 1;
    if k < 2 || !(k - 1).is_multiple_of(step) {
        return Err(Error::InvalidArityTarget { target: k, step });
    }
    let m = table.size();
    let cells = checked_pow(m, k).filter(|&c| c <= MAX_DERIVED_CELLS);
    let Some(cells) = cells else {
        return Err(Error::BudgetExceeded {
            what: "derived table",
            detail: format!("{m}^{k} cells"),
        });
    };
    let letters: Vec<usize> = (0..k).collect();
    let mut entries = Vec::with_capacity(cells);
    for_each_tuple(m, k, |t| entries.push(eval_letters_unchecked(table, &letters, t)));
    NaryTable::new(k, m, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::eval_product;

    fn t2(rows: &[&[usize]]) -> NaryTable {
        NaryTable::binary(rows).unwrap()
    }
    fn min_n(n: usize, m: usize) -> NaryTable {
        NaryTable::from_fn(n, m, |x| *x.iter().min().unwrap()).unwrap()
    }
    fn xor3() -> NaryTable {
        NaryTable::from_fn(3, 2, |x| x.iter().sum::<usize>() % 2).unwrap()
    }
    fn sub(m: usize, e: &[usize]) -> Subuniverse {
        Subuniverse::from_elements(m, e).unwrap()
    }

    #[test]
    fn cond2_examples() {
        assert!(cond2_products(&min_n(2, 2), &sub(2, &[0])));
        assert!(!cond2_products(&t2(&[&[0, 0], &[1, 1]]), &sub(2, &[0])));
        assert!(!cond2_products(&xor3(), &sub(2, &[0])));
    }

    #[test]
    fn cond3_examples() {
        // exhaustive over the 9 pairs: min(a,b) ≤ b ≤ 1 whenever b ∈ {0,1}
        assert!(cond3_products(&min_n(2, 3), &sub(3, &[0, 1])));
        assert!(!cond3_products(&t2(&[&[0, 0], &[1, 1]]), &sub(2, &[0])));
        assert!(cond3_products(&min_n(3, 2), &sub(2, &[0])));
    }

    #[test]
    fn decide_examples() {
        let v = decide_theorem(&min_n(2, 2), &sub(2, &[0])).unwrap();
        assert!(v.absorbs);
        assert_eq!(v.exponent_k, Some(2));
        assert_eq!(v.witness.as_ref().unwrap().to_string(), "xy");
        assert_eq!(v.proof_status, CaseTag::TheoremBinary);

        let z2 = NaryTable::from_fn(2, 2, |x| (x[0] + x[1]) % 2).unwrap();
        let v = decide_theorem(&z2, &sub(2, &[0])).unwrap();
        assert!(!v.absorbs);
        assert_eq!(v.exponent_k, Some(3));
        assert_eq!(v.failed_condition, Some(FailedCondition::ProductsEscapeB));
        assert_eq!(v.witness, None);

        let v = decide_theorem(&min_n(3, 2), &sub(2, &[0])).unwrap();
        assert!(v.absorbs);
        assert_eq!(v.exponent_k, Some(3));
        assert_eq!(v.witness.as_ref().unwrap().to_string(), "xxy");
        // ternary min is commutative, so that tag takes priority over the coatom tag
        assert_eq!(v.proof_status, CaseTag::TheoremCommutative);
    }

    #[test]
    fn decide_reports_missing_exponent() {
        // null semigroup: products collapse to 0 ∈ B, but 1 never recurs
        let null = t2(&[&[0, 0], &[0, 0]]);
        let v = decide_theorem(&null, &sub(2, &[0])).unwrap();
        assert!(!v.absorbs);
        assert_eq!(v.failed_condition, Some(FailedCondition::NoExponent));
    }

    #[test]
    fn decide_rejects_invalid_pairs() {
        let z2 = NaryTable::from_fn(2, 2, |x| (x[0] + x[1]) % 2).unwrap();
        assert_eq!(decide_theorem(&z2, &sub(2, &[1])), Err(Error::NotClosed));
        assert_eq!(
            decide_theorem(&z2, &sub(2, &[0, 1])),
            Err(Error::NotProperSubuniverse)
        );
        let odd = t2(&[&[0, 1], &[0, 0]]);
        assert_eq!(decide_theorem(&odd, &sub(2, &[0])), Err(Error::NotAssociative));
        assert!(matches!(
            decide_theorem(&z2, &sub(3, &[0])),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn witness_construction() {
        assert_eq!(construct_witness(2).to_string(), "xy");
        assert_eq!(construct_witness(3).to_string(), "xxy");
        assert_eq!(construct_witness(5).to_string(), "xxxxy");
    }

    #[test]
    fn verify_examples() {
        let w = Word::parse("xy").unwrap();
        assert!(verify_witness(&min_n(2, 2), &sub(2, &[0]), &w).unwrap());
        assert!(!verify_witness(&t2(&[&[0, 0], &[1, 1]]), &sub(2, &[0]), &w).unwrap());
        let z2 = NaryTable::from_fn(2, 2, |x| (x[0] + x[1]) % 2).unwrap();
        // x=0, y=1 gives 1 ∉ B
        assert!(!verify_witness(&z2, &sub(2, &[0]), &Word::parse("xxy").unwrap()).unwrap());
        assert!(matches!(
            verify_witness(&min_n(3, 2), &sub(2, &[0]), &w),
            Err(Error::LengthNotEvaluable { .. })
        ));
    }

    #[test]
    fn unused_variables_are_still_quantified() {
        // y never occurs: t(a, b) = a escapes B when a ∉ B
        let w = Word::new(2, vec![0, 0]).unwrap();
        assert!(!verify_witness(&min_n(2, 2), &sub(2, &[0]), &w).unwrap());
    }

    #[test]
    fn case_detection() {
        assert_eq!(detect_case(&t2(&[&[0, 0], &[1, 1]]), &sub(2, &[0])), CaseTag::TheoremBinary);
        assert_eq!(detect_case(&xor3(), &sub(2, &[0])), CaseTag::TheoremCommutative);
        // ternary first projection on 3 elements, B = {0,1}: coatom
        let proj = NaryTable::from_fn(3, 3, |x| x[0]).unwrap();
        assert_eq!(detect_case(&proj, &sub(3, &[0, 1])), CaseTag::TheoremCoatom);
        // idempotent ternary, |A \ B| = 2
        assert_eq!(detect_case(&proj, &sub(3, &[0])), CaseTag::TheoremIdempotentTernary);
    }

    #[test]
    fn conjectural_case_from_non_commutative_non_band() {
        // A = {0,1} × {0,1} (index 2l + z) with (l1,z1)(l2,z2) = (l1, 0):
        // left-zero in the first coordinate, null in the second.
        let bin = NaryTable::from_fn(2, 4, |x| (x[0] / 2) * 2).unwrap();
        assert!(bin.is_associative());
        let ter = derive_power_algebra(&bin, 3).unwrap();
        assert!(!ter.is_commutative());
        assert!(!ter.is_idempotent());
        let b = sub(4, &[0, 2]);
        assert!(is_closed(&ter, &b));
        assert_eq!(detect_case(&ter, &b), CaseTag::Conjectural);
    }

    #[test]
    fn power_algebra_examples() {
        let z2 = NaryTable::from_fn(2, 2, |x| (x[0] + x[1]) % 2).unwrap();
        assert_eq!(derive_power_algebra(&z2, 3).unwrap(), xor3());
        assert_eq!(derive_power_algebra(&min_n(2, 2), 2).unwrap(), min_n(2, 2));
        assert_eq!(derive_power_algebra(&min_n(3, 2), 5).unwrap(), min_n(5, 2));
        assert_eq!(
            derive_power_algebra(&min_n(3, 2), 4),
            Err(Error::InvalidArityTarget { target: 4, step: 2 })
        );
        assert!(derive_power_algebra(&min_n(2, 2), 1).is_err());
    }

    #[test]
    fn power_algebra_tabulates_products() {
        let t = NaryTable::from_fn(2, 3, |x| if x[0] == 0 { x[1] } else { x[0] }).unwrap();
        let d = derive_power_algebra(&t, 4).unwrap();
        for idx in 0..d.entries().len() {
            let tuple = d.tuple_of(idx);
            assert_eq!(d.cell(idx), eval_product(&t, tuple).unwrap());
        }
    }
}
