use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Element of a finite carrier `{0, .., size - 1}`.
pub type Elem = usize;

/// A finite `n`-ary operation stored as a flat row-major lookup table.
///
/// The value of `f(a_1, .., a_n)` lives at index `Σ a_i · m^(n-1-i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawTable", into = "RawTable")]
pub struct NaryTable {
    arity: usize,
    size: usize,
    entries: Vec<Elem>,
}

#[derive(Serialize, Deserialize)]
struct RawTable {
    arity: usize,
    size: usize,
    table: Vec<Elem>,
}

impl TryFrom<RawTable> for NaryTable {
    type Error = Error;

    fn try_from(raw: RawTable) -> Result<Self> {
        NaryTable::new(raw.arity, raw.size, raw.table)
    }
}

impl From<NaryTable> for RawTable {
    fn from(t: NaryTable) -> Self {
        RawTable {
            arity: t.arity,
            size: t.size,
            table: t.entries,
        }
    }
}

/// `size^exp`, or `None` on overflow.
pub(crate) fn checked_pow(size: usize, exp: usize) -> Option<usize> {
    size.checked_pow(u32::try_from(exp).ok()?)
}

impl NaryTable {
    pub fn new(arity: usize, size: usize, entries: Vec<Elem>) -> Result<Self> {
        if arity < 2 {
            return Err(Error::InvalidArity(arity));
        }
        if size == 0 {
            return Err(Error::EmptyCarrier);
        }
        let expected = checked_pow(size, arity).ok_or(Error::BudgetExceeded {
            what: "table",
            detail: format!("{size}^{arity} cells"),
        })?;
        if entries.len() != expected {
            return Err(Error::WrongTableLength {
                expected,
                actual: entries.len(),
            });
        }
        if let Some((index, &value)) = entries.iter().enumerate().find(|(_, &v)| v >= size) {
            return Err(Error::EntryOutOfRange { index, value, size });
        }
        Ok(NaryTable {
            arity,
            size,
            entries,
        })
    }

    /// Tabulates `op` over every argument tuple in row-major order.
    pub fn from_fn(arity: usize, size: usize, mut op: impl FnMut(&[Elem]) -> Elem) -> Result<Self> {
        if arity < 2 {
            return Err(Error::InvalidArity(arity));
        }
        if size == 0 {
            return Err(Error::EmptyCarrier);
        }
        let cells = checked_pow(size, arity).ok_or(Error::BudgetExceeded {
            what: "table",
            detail: format!("{size}^{arity} cells"),
        })?;
        let mut entries = Vec::with_capacity(cells);
        for_each_tuple(size, arity, |t| entries.push(op(t)));
        NaryTable::new(arity, size, entries)
    }

    /// Binary table from a square matrix of rows.
    pub fn binary(rows: &[&[Elem]]) -> Result<Self> {
        let size = rows.len();
        let entries: Vec<Elem> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        NaryTable::new(2, size, entries)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entries(&self) -> &[Elem] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Elem> {
        self.entries
    }

    /// Row-major cell index of an argument tuple.
    #[inline]
    pub fn index_of(&self, args: &[Elem]) -> usize {
        debug_assert_eq!(args.len(), self.arity);
        args.iter().fold(0, |acc, &a| acc * self.size + a)
    }

    /// Argument tuple stored at a row-major cell index.
    pub fn tuple_of(&self, mut index: usize) -> Vec<Elem> {
        let mut out = vec![0; self.arity];
        for slot in out.iter_mut().rev() {
            *slot = index % self.size;
            index /= self.size;
        }
        out
    }

    #[inline]
    pub fn apply(&self, args: &[Elem]) -> Elem {
        self.entries[self.index_of(args)]
    }

    #[inline]
    pub fn cell(&self, index: usize) -> Elem {
        self.entries[index]
    }

    /// `f(a, .., a)`.
    #[inline]
    pub fn diagonal(&self, a: Elem) -> Elem {
        let idx = (0..self.arity).fold(0, |acc, _| acc * self.size + a);
        self.entries[idx]
    }

    /// Whether every bracketing of every `(2n-1)`-fold product agrees.
    pub fn is_associative(&self) -> bool {
        // Adjacent bracketings agree iff g(u, g(c, s), d, w) = g(u, c, g(s, d), w)
        // for all c, d, shared middle s of length n-1, and outer context (u, w)
        // of length n-2. That depends on (c, s, d) only through
        // (g(c, s), d, c, g(s, d)), so collect those first.
        let n = self.arity;
        let m = self.size;
        let mut quads = HashSet::new();
        let mut args = vec![0; n];
        for_each_tuple(m, n + 1, |x| {
            let alpha = self.apply(&x[..n]);
            let beta = self.apply(&x[1..]);
            quads.insert([alpha, x[n], x[0], beta]);
        });
        let mut other = vec![0; n];
        quads.iter().all(|&[alpha, d, c, beta]| {
            (0..n - 1).all(|p| {
                let mut ok = true;
                for_each_tuple_until(m, n - 2, |ctx| {
                    let (u, w) = ctx.split_at(p);
                    args[..p].copy_from_slice(u);
                    args[p] = alpha;
                    args[p + 1] = d;
                    args[p + 2..].copy_from_slice(w);
                    other[..p].copy_from_slice(u);
                    other[p] = c;
                    other[p + 1] = beta;
                    other[p + 2..].copy_from_slice(w);
                    ok = self.apply(&args) == self.apply(&other);
                    ok
                });
                ok
            })
        })
    }

    /// Invariance under every adjacent transposition of argument positions.
    pub fn is_commutative(&self) -> bool {
        let mut swapped = vec![0; self.arity];
        (0..self.entries.len()).all(|idx| {
            let t = self.tuple_of(idx);
            (0..self.arity - 1).all(|i| {
                swapped.copy_from_slice(&t);
                swapped.swap(i, i + 1);
                self.apply(&swapped) == self.entries[idx]
            })
        })
    }

    pub fn is_idempotent(&self) -> bool {
        (0..self.size).all(|a| self.diagonal(a) == a)
    }
}

/// Calls `visit` on every tuple of `len` elements below `size`, in row-major order.
pub(crate) fn for_each_tuple(size: usize, len: usize, mut visit: impl FnMut(&[Elem])) {
    for_each_tuple_until(size, len, |t| {
        visit(t);
        true
    });
}

/// Like [`for_each_tuple`] but stops as soon as `visit` returns false.
pub(crate) fn for_each_tuple_until(size: usize, len: usize, mut visit: impl FnMut(&[Elem]) -> bool) {
    let mut t = vec![0; len];
    loop {
        if !visit(&t) {
            return;
        }
        let mut i = len;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < size {
                break;
            }
            t[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn min2() -> NaryTable {
        NaryTable::binary(&[&[0, 0], &[0, 1]]).unwrap()
    }

    #[test]
    fn rejects_malformed_tables() {
        assert_eq!(NaryTable::new(1, 2, vec![0, 1]), Err(Error::InvalidArity(1)));
        assert_eq!(NaryTable::new(2, 0, vec![]), Err(Error::EmptyCarrier));
        assert_eq!(
            NaryTable::new(2, 2, vec![0, 0, 0]),
            Err(Error::WrongTableLength {
                expected: 4,
                actual: 3
            })
        );
        assert!(matches!(
            NaryTable::new(2, 2, vec![0, 0, 2, 0]),
            Err(Error::EntryOutOfRange { index: 2, .. })
        ));
    }

    #[test]
    fn index_formula_is_row_major() {
        let t = NaryTable::from_fn(3, 3, |x| x[0]).unwrap();
        assert_eq!(t.index_of(&[1, 2, 0]), 9 + 6);
        assert_eq!(t.tuple_of(15), vec![1, 2, 0]);
        assert_eq!(t.apply(&[2, 0, 1]), 2);
    }

    #[test]
    fn associativity_examples() {
        assert!(min2().is_associative());
        // f(0,1)=1, everything else 0
        let odd = NaryTable::binary(&[&[0, 1], &[0, 0]]).unwrap();
        let brute = (0..8).all(|i| {
            let (a, b, c) = (i >> 2 & 1, i >> 1 & 1, i & 1);
            odd.apply(&[odd.apply(&[a, b]), c]) == odd.apply(&[a, odd.apply(&[b, c])])
        });
        assert_eq!(odd.is_associative(), brute);
        // f(f(1,0),1) = f(0,1) = 1 but f(1,f(0,1)) = f(1,1) = 0
        assert!(!brute);
        let xor3 = NaryTable::from_fn(3, 2, |x| x.iter().sum::<usize>() % 2).unwrap();
        assert!(xor3.is_associative());
    }

    /// Every bracketing of every (2n-1)-tuple.
    fn associative_by_brute_force(t: &NaryTable) -> bool {
        let n = t.arity();
        let mut ok = true;
        for_each_tuple(t.size(), 2 * n - 1, |x| {
            let values: Vec<usize> = (0..n)
                .map(|p| {
                    let mut outer = x[..p].to_vec();
                    outer.push(t.apply(&x[p..p + n]));
                    outer.extend_from_slice(&x[p + n..]);
                    t.apply(&outer)
                })
                .collect();
            ok &= values.windows(2).all(|v| v[0] == v[1]);
        });
        ok
    }

    #[test]
    fn associativity_matches_brute_force() {
        for (arity, size) in [(2usize, 2usize), (2, 3), (3, 2), (4, 2)] {
            let cells = size.pow(arity as u32);
            let total = size.pow(cells as u32);
            let mut count = 0;
            for code in 0..total {
                let mut c = code;
                let entries = (0..cells)
                    .map(|_| {
                        let v = c % size;
                        c /= size;
                        v
                    })
                    .collect();
                let t = NaryTable::new(arity, size, entries).unwrap();
                let fast = t.is_associative();
                assert_eq!(fast, associative_by_brute_force(&t), "{t:?}");
                count += usize::from(fast);
            }
            assert!(count > 0);
        }
    }

    #[test]
    fn commutativity_and_idempotence() {
        let left_zero = NaryTable::binary(&[&[0, 0], &[1, 1]]).unwrap();
        let null = NaryTable::binary(&[&[0, 0], &[0, 0]]).unwrap();
        let xor3 = NaryTable::from_fn(3, 2, |x| x.iter().sum::<usize>() % 2).unwrap();
        assert!(min2().is_commutative());
        assert!(!left_zero.is_commutative());
        assert!(xor3.is_commutative());
        assert!(min2().is_idempotent());
        assert!(!null.is_idempotent());
        assert!(xor3.is_idempotent());
    }

    #[test]
    fn serde_uses_flat_layout() {
        let json = serde_json::to_string(&min2()).unwrap();
        assert_eq!(json, r#"{"arity":2,"size":2,"table":[0,0,0,1]}"#);
        let bad: std::result::Result<NaryTable, _> =
            serde_json::from_str(r#"{"arity":2,"size":2,"table":[0,0,0]}"#);
        assert!(bad.is_err());
    }
}
