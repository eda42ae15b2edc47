use std::fmt;

use serde::{Deserialize, Serialize};

use super::table::{Elem, NaryTable};
use crate::error::{Error, Result};

/// Default cap on carrier size for exhaustive subset scans.
pub const DEFAULT_MAX_SCAN_SIZE: usize = 16;

/// A nonempty subset of the carrier `{0, .., carrier_size - 1}`, stored as a bit mask.
///
/// Closedness is not part of the type; see [`is_closed`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subuniverse {
    carrier_size: usize,
    mask: u64,
}

impl Subuniverse {
    pub fn from_mask(carrier_size: usize, mask: u64) -> Result<Self> {
        if carrier_size > 64 {
            return Err(Error::CarrierTooLarge(carrier_size));
        }
        if mask == 0 {
            return Err(Error::EmptySubuniverse);
        }
        if carrier_size < 64 && mask >> carrier_size != 0 {
            return Err(Error::ElementOutOfRange {
                element: 63 - mask.leading_zeros() as usize,
                size: carrier_size,
            });
        }
        Ok(Subuniverse { carrier_size, mask })
    }

    pub fn from_elements(carrier_size: usize, elements: &[Elem]) -> Result<Self> {
        if carrier_size > 64 {
            return Err(Error::CarrierTooLarge(carrier_size));
        }
        let mut mask = 0u64;
        for &e in elements {
            if e >= carrier_size {
                return Err(Error::ElementOutOfRange {
                    element: e,
                    size: carrier_size,
                });
            }
            mask |= 1 << e;
        }
        Subuniverse::from_mask(carrier_size, mask)
    }

    pub fn full(carrier_size: usize) -> Result<Self> {
        if carrier_size == 0 {
            return Err(Error::EmptySubuniverse);
        }
        let mask = if carrier_size >= 64 {
            u64::MAX
        } else {
            (1u64 << carrier_size) - 1
        };
        Subuniverse::from_mask(carrier_size, mask)
    }

    pub fn carrier_size(&self) -> usize {
        self.carrier_size
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    #[inline]
    pub fn contains(&self, e: Elem) -> bool {
        e < 64 && self.mask >> e & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    /// Always false; the type is nonempty by construction.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.carrier_size
    }

    pub fn elements(&self) -> Vec<Elem> {
        (0..self.carrier_size).filter(|&e| self.contains(e)).collect()
    }

    pub(crate) fn check_against(&self, table: &NaryTable) -> Result<()> {
        if self.carrier_size != table.size() {
            return Err(Error::SizeMismatch {
                table: table.size(),
                sub: self.carrier_size,
            });
        }
        Ok(())
    }
}

impl fmt::Display for Subuniverse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements().into_iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// Whether every `n`-tuple of members maps back into `sub`.
pub fn is_closed(table: &NaryTable, sub: &Subuniverse) -> bool {
    if sub.carrier_size() != table.size() {
        return false;
    }
    let members = sub.elements();
    let n = table.arity();
    let mut args = vec![0; n];
    let mut ok = true;
    super::table::for_each_tuple_until(members.len(), n, |pick| {
        for (slot, &i) in args.iter_mut().zip(pick) {
            *slot = members[i];
        }
        ok = sub.contains(table.apply(&args));
        ok
    });
    ok
}

/// All nonempty closed subsets in ascending mask order, optionally without the full carrier.
pub fn enumerate_subuniverses(table: &NaryTable, proper_only: bool) -> Result<Vec<Subuniverse>> {
    enumerate_subuniverses_capped(table, proper_only, DEFAULT_MAX_SCAN_SIZE)
}

pub fn enumerate_subuniverses_capped(
    table: &NaryTable,
    proper_only: bool,
    max_size: usize,
) -> Result<Vec<Subuniverse>> {
    let m = table.size();
    if m > max_size {
        return Err(Error::BudgetExceeded {
            what: "subuniverse scan",
            detail: format!("carrier size {m} > {max_size}"),
        });
    }
    let full = (1u64 << m) - 1;
    let mut out = Vec::new();
    for mask in 1..=full {
        if proper_only && mask == full {
            continue;
        }
        let sub = Subuniverse::from_mask(m, mask)?;
        if is_closed(table, &sub) {
            out.push(sub);
        }
    }
    Ok(out)
}
