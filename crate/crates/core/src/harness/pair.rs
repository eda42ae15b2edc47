use serde::{Deserialize, Serialize};

use crate::absorption::{
    cond2_products, cond3_products, construct_witness, decide_theorem, derive_power_algebra,
    verify_witness, AbsorptionVerdict, CaseTag,
};
use crate::algebra::{eval_word, is_closed, Elem, NaryTable, Subuniverse, Word};
use crate::enumeration::table_id;
use crate::error::{Error, Result};
use crate::oracle::{oracle_agrees, search_absorbing_term, Agreement, OracleBounds, OracleOutcome};

/// Something a pair record contradicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Violation {
    /// Criterion and oracle contradict each other on a pair where that is impossible.
    Disagree,
    /// Condition 2 and the exponent hold but condition 3 fails.
    Cond2WithoutCond3,
    /// Condition 3 and the exponent hold but `x^(k-1) y` is not absorbing.
    ConstructedWitnessRejected,
    /// A positive verdict carries a witness that does not verify.
    VerdictWitnessRejected,
    /// A proved case where the oracle finds a witness although condition 2 fails.
    ProvedCaseOracleYesCond2False,
    /// The oracle witness does not carry over to the derived power algebra.
    ReductionFailed,
    /// A membership fact implied by the idempotent ternary argument fails.
    ProbeFailed,
    /// Conjectural case: oracle finds a witness but condition 2 fails, re-checked.
    ConjectureCandidate,
    /// A conjecture candidate whose re-checks (witness, closure, associativity) fail.
    CandidateRecheckFailed,
}

impl Violation {
    /// Whether the violation makes a run inconsistent.
    pub fn is_fatal(self) -> bool {
        self != Violation::ConjectureCandidate
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeResult {
    pub fact: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairReport {
    pub table_index: usize,
    pub table_id: String,
    pub arity: usize,
    pub size: usize,
    pub sub_mask: u64,
    pub sub: Vec<Elem>,
    pub cond2: bool,
    pub cond3: bool,
    pub exponent_k: Option<usize>,
    pub case: CaseTag,
    pub theorem_verdict: AbsorptionVerdict,
    pub oracle_bounds: OracleBounds,
    pub oracle_outcome: OracleOutcome,
    pub agreement: Agreement,
    /// `x^(k-1) y` verified, when condition 3 and an exponent hold.
    pub constructed_witness_verifies: Option<bool>,
    /// Oracle witness transferred to the power algebra of its length.
    pub reduction_ok: Option<bool>,
    pub probes: Option<Vec<ProbeResult>>,
    pub violations: Vec<Violation>,
}

impl PairReport {
    pub fn is_fatal(&self) -> bool {
        self.violations.iter().any(|v| v.is_fatal())
    }

    pub fn is_candidate(&self) -> bool {
        self.violations.contains(&Violation::ConjectureCandidate)
    }
}

const PROBES: [&str; 8] = ["abbab", "babba", "aab", "baa", "aabaa", "bab", "abb", "bba"];

/// Membership facts that must hold for every absorbing idempotent ternary pair:
/// for all `a ∈ A`, `b ∈ B` the words below (with `a`, `b` substituted) lie in `B`.
pub fn derived_fact_probes(table: &NaryTable, sub: &Subuniverse) -> Result<Vec<ProbeResult>> {
    if table.arity() != 3 || !table.is_idempotent() {
        return Err(Error::PreconditionsUnmet(
            "probes need an idempotent ternary table".into(),
        ));
    }
    let verdict = decide_theorem(table, sub)?;
    if !verdict.absorbs {
        return Err(Error::PreconditionsUnmet("pair is not absorbing".into()));
    }
    let bs = sub.elements();
    PROBES
        .iter()
        .map(|&fact| {
            let letters = fact.bytes().map(|c| usize::from(c == b'b')).collect();
            let word = Word::new(2, letters)?;
            let mut holds = true;
            for a in 0..table.size() {
                for &b in &bs {
                    holds &= sub.contains(eval_word(table, &word, &[a, b])?);
                }
            }
            Ok(ProbeResult {
                fact: fact.to_string(),
                holds,
            })
        })
        .collect()
}

/// Every check the corpus run performs on one (table, subuniverse) pair.
pub fn check_pair(table: &NaryTable, sub: &Subuniverse, bounds: &OracleBounds) -> Result<PairReport> {
    let verdict = decide_theorem(table, sub)?;
    let outcome = search_absorbing_term(table, sub, bounds)?;
    let agreement = oracle_agrees(table, bounds, &verdict, &outcome);
    let cond2 = cond2_products(table, sub);
    let cond3 = cond3_products(table, sub);
    let k = verdict.exponent_k;
    let case = verdict.proof_status;

    let mut violations = Vec::new();
    if cond2 && k.is_some() && !cond3 {
        violations.push(Violation::Cond2WithoutCond3);
    }
    let constructed_witness_verifies = match k {
        Some(k) if cond3 => Some(verify_witness(table, sub, &construct_witness(k))?),
        _ => None,
    };
    if constructed_witness_verifies == Some(false) {
        violations.push(Violation::ConstructedWitnessRejected);
    }
    if let Some(w) = &verdict.witness {
        if !verify_witness(table, sub, w)? {
            violations.push(Violation::VerdictWitnessRejected);
        }
    }
    if case.is_proved() && outcome.found() && !cond2 {
        violations.push(Violation::ProvedCaseOracleYesCond2False);
    }
    if agreement == Agreement::Disagree {
        if case == CaseTag::Conjectural && !verdict.absorbs {
            let w = outcome.witness().expect("negative verdict disagrees only on a hit");
            let rechecked = verify_witness(table, sub, w)? && is_closed(table, sub) && table.is_associative();
            violations.push(if rechecked {
                Violation::ConjectureCandidate
            } else {
                Violation::CandidateRecheckFailed
            });
        } else {
            violations.push(Violation::Disagree);
        }
    }

    let reduction_ok = match outcome.witness() {
        Some(w) => check_reduction(table, sub, w)?,
        None => None,
    };
    if reduction_ok == Some(false) {
        violations.push(Violation::ReductionFailed);
    }

    let probes = if table.arity() == 3 && table.is_idempotent() && verdict.absorbs {
        Some(derived_fact_probes(table, sub)?)
    } else {
        None
    };
    if probes.as_ref().is_some_and(|ps| ps.iter().any(|p| !p.holds)) {
        violations.push(Violation::ProbeFailed);
    }

    Ok(PairReport {
        table_index: 0,
        table_id: table_id(table),
        arity: table.arity(),
        size: table.size(),
        sub_mask: sub.mask(),
        sub: sub.elements(),
        cond2,
        cond3,
        exponent_k: k,
        case,
        theorem_verdict: verdict,
        oracle_bounds: *bounds,
        oracle_outcome: outcome,
        agreement,
        constructed_witness_verifies,
        reduction_ok,
        probes,
        violations,
    })
}

/// The power algebra of the witness length is an idempotent semigroup in which
/// the same word still absorbs. `None` if the derived table is over budget.
pub fn check_reduction(table: &NaryTable, sub: &Subuniverse, witness: &Word) -> Result<Option<bool>> {
    let derived = match derive_power_algebra(table, witness.len()) {
        Ok(d) => d,
        Err(Error::BudgetExceeded { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    Ok(Some(
        derived.is_associative() && derived.is_idempotent() && verify_witness(&derived, sub, witness)?,
    ))
}
