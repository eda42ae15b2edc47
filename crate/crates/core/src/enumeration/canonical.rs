use itertools::Itertools;
use sha2::{Digest, Sha256};

use crate::algebra::NaryTable;
use crate::error::{Error, Result};

pub const DEFAULT_MAX_CANONICAL_SIZE: usize = 6;

/// Relabels `table` along the permutation `perm` (element `a` becomes `perm[a]`).
pub fn relabel(table: &NaryTable, perm: &[usize]) -> NaryTable {
    let m = table.size();
    let mut entries = vec![0; table.entries().len()];
    for (idx, &v) in table.entries().iter().enumerate() {
        let target = table
            .tuple_of(idx)
            .iter()
            .fold(0, |acc, &a| acc * m + perm[a]);
        entries[target] = perm[v];
    }
    NaryTable::new(table.arity(), m, entries).expect("relabeling preserves shape")
}

/// Lexicographically least entry sequence over all relabelings.
pub fn canonical_form(table: &NaryTable) -> Result<NaryTable> {
    canonical_form_capped(table, DEFAULT_MAX_CANONICAL_SIZE)
}

pub fn canonical_form_capped(table: &NaryTable, max_size: usize) -> Result<NaryTable> {
    let m = table.size();
    if m > max_size {
        return Err(Error::BudgetExceeded {
            what: "canonical form",
            detail: format!("carrier size {m} > {max_size}"),
        });
    }
    let best = (0..m)
        .permutations(m)
        .map(|perm| relabel(table, &perm))
        .min()
        .expect("at least the identity permutation");
    Ok(best)
}

/// Stable identifier: a digest of the canonical form when it is within budget,
/// of the raw table otherwise (prefixed `raw-`).
pub fn table_id(table: &NaryTable) -> String {
    let (prefix, t) = match canonical_form(table) {
        Ok(c) => ("", c),
        Err(_) => ("raw-", table.clone()),
    };
    let mut h = Sha256::new();
    h.update(format!("{}:{}:", t.arity(), t.size()).as_bytes());
    for &e in t.entries() {
        h.update((e as u32).to_le_bytes());
    }
    let digest = h.finalize();
    format!("{prefix}{}", hex::encode(&digest[..8]))
}
