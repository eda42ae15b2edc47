use serde::{Deserialize, Serialize};

use super::table::{Elem, NaryTable};
use super::word::check_length;
use crate::error::Result;

/// Shape of the sequence `a, a^n, a^(2n-1), ..` of valid powers of one element.
///
/// Indices count steps of `n-1`: step `j` is `a^(1 + j(n-1))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerProfile {
    pub element: Elem,
    pub tail: usize,
    pub period: usize,
}

/// `a^(1+j(n-1))` for `j = 0 .. tail + period`, together with its profile.
fn power_orbit(table: &NaryTable, a: Elem) -> (PowerProfile, Vec<Elem>) {
    let n = table.arity();
    let m = table.size();
    let mut seen = vec![usize::MAX; m];
    let mut orbit = Vec::new();
    // index contribution of the trailing n-1 copies of `a`
    let pad = (1..n).fold(0, |acc, _| acc * m + a);
    let stride = m.pow((n - 1) as u32);
    let mut cur = a;
    loop {
        if seen[cur] != usize::MAX {
            let tail = seen[cur];
            let profile = PowerProfile {
                element: a,
                tail,
                period: orbit.len() - tail,
            };
            return (profile, orbit);
        }
        seen[cur] = orbit.len();
        orbit.push(cur);
        cur = table.cell(cur * stride + pad);
    }
}

pub fn power_profile(table: &NaryTable, a: Elem) -> PowerProfile {
    power_orbit(table, a).0
}

/// `a^e` for a valid exponent `e ≡ 1 (mod n-1)`.
pub fn element_power(table: &NaryTable, a: Elem, e: usize) -> Result<Elem> {
    check_length(e, table.arity())?;
    let (profile, orbit) = power_orbit(table, a);
    Ok(power_from_orbit(&profile, &orbit, (e - 1) / (table.arity() - 1)))
}

fn power_from_orbit(profile: &PowerProfile, orbit: &[Elem], step: usize) -> Elem {
    if step < orbit.len() {
        orbit[step]
    } else {
        orbit[profile.tail + (step - profile.tail) % profile.period]
    }
}

/// All valid powers `a^e` for every element, via cached orbits.
pub struct PowerCache {
    arity: usize,
    orbits: Vec<(PowerProfile, Vec<Elem>)>,
}

impl PowerCache {
    pub fn new(table: &NaryTable) -> Self {
        PowerCache {
            arity: table.arity(),
            orbits: (0..table.size()).map(|a| power_orbit(table, a)).collect(),
        }
    }

    /// `a^e`; `e` must be a valid length.
    pub fn power(&self, a: Elem, e: usize) -> Elem {
        debug_assert!(super::word::is_valid_length(e, self.arity));
        let (profile, orbit) = &self.orbits[a];
        power_from_orbit(profile, orbit, (e - 1) / (self.arity - 1))
    }

    /// Whether `a^e = a` for every element.
    pub fn fixes_all(&self, e: usize) -> bool {
        (0..self.orbits.len()).all(|a| self.power(a, e) == a)
    }

    pub fn profiles(&self) -> impl Iterator<Item = &PowerProfile> {
        self.orbits.iter().map(|(p, _)| p)
    }

    /// Minimal `k > 1` with `a^k = a` for all `a`, when one exists.
    pub fn exponent(&self) -> Option<usize> {
        let mut lcm = 1usize;
        for p in self.profiles() {
            if p.tail != 0 {
                return None;
            }
            lcm = lcm / gcd(lcm, p.period) * p.period;
        }
        Some(1 + lcm * (self.arity - 1))
    }
}

/// Minimal `k > 1`, `k ≡ 1 (mod n-1)`, with `a^k = a` for every element.
pub fn compute_exponent(table: &NaryTable) -> Option<usize> {
    PowerCache::new(table).exponent()
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
