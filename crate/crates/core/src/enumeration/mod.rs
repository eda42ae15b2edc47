//! Corpus generators: exhaustive backtracking, powers of binary semigroups,
//! seeded sampling, canonical forms and pairing with subuniverses.

mod backtrack;
mod canonical;

use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::absorption::derive_power_algebra;
use crate::algebra::{enumerate_subuniverses_capped, NaryTable, Subuniverse, DEFAULT_MAX_SCAN_SIZE};
use crate::error::{Error, Result};

pub use canonical::{canonical_form, canonical_form_capped, relabel, table_id, DEFAULT_MAX_CANONICAL_SIZE};

/// Name of the generator behind [`GenMode::RandomFiltered`], recorded in corpus metadata.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng::seed_from_u64 (rand_chacha 0.3)";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Filters {
    pub idempotent: bool,
    pub commutative: bool,
}

impl Filters {
    pub fn accepts(&self, t: &NaryTable) -> bool {
        (!self.idempotent || t.is_idempotent()) && (!self.commutative || t.is_commutative())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GenMode {
    ExhaustiveBacktrack,
    /// All binary semigroups of the given size, raised to the target arity.
    FromBinaryPower,
    RandomFiltered { count: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub size: usize,
    pub arity: usize,
    pub mode: GenMode,
    pub filters: Filters,
    pub dedup: bool,
}

impl GenSpec {
    pub fn exhaustive(size: usize, arity: usize) -> Self {
        GenSpec {
            size,
            arity,
            mode: GenMode::ExhaustiveBacktrack,
            filters: Filters::default(),
            dedup: false,
        }
    }

    pub fn with_filters(mut self, filters: Filters) -> Self {
        self.filters = filters;
        self
    }
}

/// Budgets that keep generation at desk scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumConfig {
    /// Exhaustive search allowed only with at most this many independent cells.
    pub max_free_cells: usize,
    pub max_canonical_size: usize,
    pub max_scan_size: usize,
    /// Total randomized descents allowed per sampling run, on top of `count`.
    pub random_attempt_slack: usize,
    pub random_node_budget: usize,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig {
            max_free_cells: 16,
            max_canonical_size: DEFAULT_MAX_CANONICAL_SIZE,
            max_scan_size: DEFAULT_MAX_SCAN_SIZE,
            random_attempt_slack: 1000,
            random_node_budget: 20_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    pub tables: Vec<NaryTable>,
    /// Sampling stopped before `count` keepers were found.
    pub attempt_cap_exhausted: bool,
}

pub fn enumerate_tables(spec: &GenSpec) -> Result<Generated> {
    enumerate_tables_with(spec, &EnumConfig::default())
}

pub fn enumerate_tables_with(spec: &GenSpec, cfg: &EnumConfig) -> Result<Generated> {
    let (tables, exhausted) = match spec.mode {
        GenMode::ExhaustiveBacktrack => (exhaustive(spec.size, spec.arity, spec.filters, cfg)?, false),
        GenMode::FromBinaryPower => {
            let binaries = exhaustive(spec.size, 2, Filters::default(), cfg)?;
            let mut out = Vec::new();
            for b in &binaries {
                let t = derive_from_semigroup(b, spec.arity)?;
                if spec.filters.accepts(&t) {
                    out.push(t);
                }
            }
            (out, false)
        }
        GenMode::RandomFiltered { count, seed } => {
            let run = random_filtered_with(spec.size, spec.arity, spec.filters, count, seed, cfg)?;
            (run.tables, run.attempt_cap_exhausted)
        }
    };
    let tables = if spec.dedup {
        dedup_canonical(tables, cfg.max_canonical_size)?
    } else {
        tables
    };
    Ok(Generated {
        tables,
        attempt_cap_exhausted: exhausted,
    })
}

fn exhaustive(size: usize, arity: usize, filters: Filters, cfg: &EnumConfig) -> Result<Vec<NaryTable>> {
    let mut filler = backtrack::Filler::new(size, arity, filters)?;
    if filler.free_cells() > cfg.max_free_cells {
        return Err(Error::BudgetExceeded {
            what: "exhaustive enumeration",
            detail: format!(
                "{} free cells for size {size} arity {arity}, limit {}",
                filler.free_cells(),
                cfg.max_free_cells
            ),
        });
    }
    let mut out = Vec::new();
    filler.enumerate(|cells| {
        out.push(NaryTable::new(arity, size, cells.to_vec()).expect("complete assignment"));
        true
    });
    Ok(out)
}

/// Keeps the first table of each isomorphism class, in input order.
pub fn dedup_canonical(tables: Vec<NaryTable>, max_size: usize) -> Result<Vec<NaryTable>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for t in tables {
        if seen.insert(canonical_form_capped(&t, max_size)?) {
            out.push(t);
        }
    }
    Ok(out)
}

/// The `n`-ary operation of `n`-fold products in a binary semigroup.
pub fn derive_from_semigroup(binary: &NaryTable, n: usize) -> Result<NaryTable> {
    if binary.arity() != 2 {
        return Err(Error::PreconditionsUnmet(format!(
            "expected a binary table, got arity {}",
            binary.arity()
        )));
    }
    if !binary.is_associative() {
        return Err(Error::NotAssociative);
    }
    derive_power_algebra(binary, n)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomRun {
    pub tables: Vec<NaryTable>,
    pub attempts: usize,
    pub attempt_cap_exhausted: bool,
}

/// Seeded sample of associative tables satisfying `filters`.
///
/// Each attempt is one randomized depth-first descent through the same
/// pruned search tree the exhaustive generator walks, so every keeper is
/// associative and satisfies the filters by construction.
pub fn random_filtered(
    size: usize,
    arity: usize,
    filters: Filters,
    count: usize,
    seed: u64,
) -> Result<RandomRun> {
    random_filtered_with(size, arity, filters, count, seed, &EnumConfig::default())
}

pub fn random_filtered_with(
    size: usize,
    arity: usize,
    filters: Filters,
    count: usize,
    seed: u64,
    cfg: &EnumConfig,
) -> Result<RandomRun> {
    let mut filler = backtrack::Filler::new(size, arity, filters)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cap = count + cfg.random_attempt_slack;
    let mut tables = Vec::with_capacity(count);
    let mut attempts = 0;
    while tables.len() < count && attempts < cap {
        attempts += 1;
        if let Some(cells) = filler.random_table(&mut rng, cfg.random_node_budget) {
            tables.push(filler.to_table(&cells));
        }
    }
    Ok(RandomRun {
        attempt_cap_exhausted: tables.len() < count,
        tables,
        attempts,
    })
}

/// Each table paired with its closed nonempty (proper) subuniverses.
pub fn enumerate_pairs(
    tables: &[NaryTable],
    proper_only: bool,
) -> Result<Vec<(NaryTable, Subuniverse)>> {
    let mut out = Vec::new();
    for t in tables {
        for s in enumerate_subuniverses_capped(t, proper_only, DEFAULT_MAX_SCAN_SIZE)? {
            out.push((t.clone(), s));
        }
    }
    Ok(out)
}
