//! Cell-by-cell construction of associative tables with early pruning.
//!
//! Cells are filled in row-major order of their orbit representatives (the
//! sorted tuple under the commutative filter, the cell itself otherwise).
//! After each assignment every associativity instance that reads the new cell,
//! either as the inner product or as the outer one, is re-checked on whatever
//! bracketings are already fully determined.

use rand::seq::SliceRandom;
use rand::Rng;

use super::Filters;
use crate::algebra::{checked_pow, Elem, NaryTable};
use crate::error::{Error, Result};

const UNSET: usize = usize::MAX;

pub(crate) struct Filler {
    n: usize,
    m: usize,
    cells: Vec<usize>,
    /// Representative cells in fill order, each with its whole orbit.
    orbits: Vec<Vec<usize>>,
    fixed: Vec<usize>,
    // scratch
    x: Vec<Elem>,
    args: Vec<Elem>,
}

impl Filler {
    pub(crate) fn new(size: usize, arity: usize, filters: Filters) -> Result<Self> {
        if arity < 2 {
            return Err(Error::InvalidArity(arity));
        }
        if size == 0 {
            return Err(Error::EmptyCarrier);
        }
        let total = checked_pow(size, arity).ok_or(Error::BudgetExceeded {
            what: "table",
            detail: format!("{size}^{arity} cells"),
        })?;
        let mut cells = vec![UNSET; total];
        let mut fixed = Vec::new();
        if filters.idempotent {
            for a in 0..size {
                let idx = (0..arity).fold(0, |acc, _| acc * size + a);
                cells[idx] = a;
                fixed.push(idx);
            }
        }
        let mut orbits: Vec<Vec<usize>> = Vec::new();
        let mut rep_of = vec![UNSET; total];
        let mut tuple = vec![0; arity];
        for idx in 0..total {
            if cells[idx] != UNSET {
                continue;
            }
            decode(idx, size, &mut tuple);
            let rep = if filters.commutative {
                let mut sorted = tuple.clone();
                sorted.sort_unstable();
                encode(&sorted, size)
            } else {
                idx
            };
            if rep == idx {
                rep_of[idx] = orbits.len();
                orbits.push(vec![idx]);
            } else {
                orbits[rep_of[rep]].push(idx);
            }
        }
        Ok(Filler {
            n: arity,
            m: size,
            cells,
            orbits,
            fixed,
            x: vec![0; 2 * arity - 1],
            args: vec![0; arity],
        })
    }

    /// Number of independent choices left after the filters.
    pub(crate) fn free_cells(&self) -> usize {
        self.orbits.len()
    }

    fn fixed_cells_consistent(&mut self) -> bool {
        let fixed = self.fixed.clone();
        fixed.into_iter().all(|c| self.check_cell(c))
    }

    /// Visits every completion in lexicographic order; stops when `emit` returns false.
    pub(crate) fn enumerate(&mut self, mut emit: impl FnMut(&[usize]) -> bool) {
        if !self.fixed_cells_consistent() {
            return;
        }
        self.descend(0, &mut emit);
    }

    fn descend(&mut self, depth: usize, emit: &mut impl FnMut(&[usize]) -> bool) -> bool {
        if depth == self.orbits.len() {
            return emit(&self.cells);
        }
        for v in 0..self.m {
            if self.assign(depth, v) && !self.descend(depth + 1, emit) {
                self.unassign(depth);
                return false;
            }
            self.unassign(depth);
        }
        true
    }

    /// One randomized depth-first descent; `None` if `node_budget` runs out or no table exists.
    pub(crate) fn random_table(&mut self, rng: &mut impl Rng, node_budget: usize) -> Option<Vec<usize>> {
        if !self.fixed_cells_consistent() {
            return None;
        }
        let mut nodes = 0usize;
        let found = self.random_descend(0, rng, &mut nodes, node_budget);
        let out = found.then(|| self.cells.clone());
        for depth in 0..self.orbits.len() {
            self.unassign(depth);
        }
        out
    }

    fn random_descend(&mut self, depth: usize, rng: &mut impl Rng, nodes: &mut usize, budget: usize) -> bool {
        if depth == self.orbits.len() {
            return true;
        }
        let mut values: Vec<usize> = (0..self.m).collect();
        values.shuffle(rng);
        for v in values {
            *nodes += 1;
            if *nodes > budget {
                return false;
            }
            if self.assign(depth, v) && self.random_descend(depth + 1, rng, nodes, budget) {
                return true;
            }
            self.unassign(depth);
        }
        false
    }

    fn assign(&mut self, depth: usize, v: usize) -> bool {
        for i in 0..self.orbits[depth].len() {
            let c = self.orbits[depth][i];
            self.cells[c] = v;
        }
        for i in 0..self.orbits[depth].len() {
            let c = self.orbits[depth][i];
            if !self.check_cell(c) {
                return false;
            }
        }
        true
    }

    fn unassign(&mut self, depth: usize) {
        for &c in &self.orbits[depth] {
            self.cells[c] = UNSET;
        }
    }

    /// Re-checks every instance that reads cell `c`.
    fn check_cell(&mut self, c: usize) -> bool {
        let (n, m) = (self.n, self.m);
        let mut y = vec![0; n];
        decode(c, m, &mut y);
        let mut ctx = vec![0; n - 1];
        // c as the inner product at position p
        for p in 0..n {
            ctx.fill(0);
            loop {
                self.x[..p].copy_from_slice(&ctx[..p]);
                self.x[p..p + n].copy_from_slice(&y);
                self.x[p + n..].copy_from_slice(&ctx[p..]);
                if !self.instance_consistent() {
                    return false;
                }
                if !increment(&mut ctx, m) {
                    break;
                }
            }
        }
        // c as the outer product at position p, around any inner cell valued y[p]
        let mut u = vec![0; n];
        for p in 0..n {
            for inner in 0..self.cells.len() {
                if self.cells[inner] != y[p] {
                    continue;
                }
                decode(inner, m, &mut u);
                self.x[..p].copy_from_slice(&y[..p]);
                self.x[p..p + n].copy_from_slice(&u);
                self.x[p + n..].copy_from_slice(&y[p + 1..]);
                if !self.instance_consistent() {
                    return false;
                }
            }
        }
        true
    }

    /// All determined bracketings of the product `self.x` agree.
    fn instance_consistent(&mut self) -> bool {
        let (n, m) = (self.n, self.m);
        let mut seen = UNSET;
        for q in 0..n {
            let inner = encode(&self.x[q..q + n], m);
            let v = self.cells[inner];
            if v == UNSET {
                continue;
            }
            self.args[..q].copy_from_slice(&self.x[..q]);
            self.args[q] = v;
            self.args[q + 1..].copy_from_slice(&self.x[q + n..]);
            let w = self.cells[encode(&self.args, m)];
            if w == UNSET {
                continue;
            }
            if seen == UNSET {
                seen = w;
            } else if seen != w {
                return false;
            }
        }
        true
    }

    pub(crate) fn to_table(&self, cells: &[usize]) -> NaryTable {
        NaryTable::new(self.n, self.m, cells.to_vec()).expect("complete assignment")
    }
}

fn encode(t: &[Elem], m: usize) -> usize {
    t.iter().fold(0, |acc, &a| acc * m + a)
}

fn decode(mut idx: usize, m: usize, out: &mut [Elem]) {
    for slot in out.iter_mut().rev() {
        *slot = idx % m;
        idx /= m;
    }
}

fn increment(t: &mut [Elem], m: usize) -> bool {
    for slot in t.iter_mut().rev() {
        *slot += 1;
        if *slot < m {
            return true;
        }
        *slot = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::for_each_tuple;

    /// Independent oracle: test every candidate table.
    fn naive_count(size: usize, arity: usize) -> usize {
        let cells = size.pow(arity as u32);
        let mut count = 0;
        for_each_tuple(size, cells, |entries| {
            if NaryTable::new(arity, size, entries.to_vec()).unwrap().is_associative() {
                count += 1;
            }
        });
        count
    }

    fn backtrack_all(size: usize, arity: usize, filters: Filters) -> Vec<NaryTable> {
        let mut f = Filler::new(size, arity, filters).unwrap();
        let mut out = Vec::new();
        f.enumerate(|cells| {
            out.push(NaryTable::new(arity, size, cells.to_vec()).unwrap());
            true
        });
        out
    }

    #[test]
    fn matches_naive_filter_small() {
        assert_eq!(naive_count(2, 2), 8);
        assert_eq!(backtrack_all(2, 2, Filters::default()).len(), 8);
        let naive3 = naive_count(2, 3);
        assert_eq!(backtrack_all(2, 3, Filters::default()).len(), naive3);
    }

    #[test]
    fn emits_in_lexicographic_order() {
        let all = backtrack_all(3, 2, Filters::default());
        assert_eq!(all.len(), 113);
        assert!(all.windows(2).all(|w| w[0].entries() < w[1].entries()));
    }

    #[test]
    fn filters_are_structural() {
        let f = Filters {
            idempotent: true,
            commutative: true,
        };
        for t in backtrack_all(3, 3, f) {
            assert!(t.is_associative() && t.is_idempotent() && t.is_commutative());
        }
        assert_eq!(Filler::new(3, 3, f).unwrap().free_cells(), 10 - 3);
    }
}
