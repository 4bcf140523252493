//! Integer lattices of sparse vectors indexed by arbitrary ordered keys.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub type SparseVec<K> = BTreeMap<K, BigInt>;

/// Echelon basis keyed by leading (smallest) coordinate; pivots positive.
#[derive(Clone, Debug, Default)]
pub struct SparseLattice<K: Ord + Clone> {
    rows: BTreeMap<K, SparseVec<K>>,
}

fn axpy<K: Ord + Clone>(v: &mut SparseVec<K>, q: &BigInt, w: &SparseVec<K>) {
    for (k, c) in w {
        let e = v.entry(k.clone()).or_default();
        *e += q * c;
        if e.is_zero() {
            v.remove(k);
        }
    }
}

fn lin<K: Ord + Clone>(a: &BigInt, v: &SparseVec<K>, b: &BigInt, w: &SparseVec<K>) -> SparseVec<K> {
    let mut out: SparseVec<K> = v.iter().map(|(k, c)| (k.clone(), a * c)).filter(|(_, c)| !c.is_zero()).collect();
    axpy(&mut out, b, w);
    out
}

impl<K: Ord + Clone> SparseLattice<K> {
    pub fn new() -> Self {
        SparseLattice { rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<K>> {
        self.rows.values()
    }

    /// Adds a generator; returns whether the lattice grew.
    pub fn insert(&mut self, mut v: SparseVec<K>) -> bool {
        v.retain(|_, c| !c.is_zero());
        let mut changed = false;
        while let Some((lead, lc)) = v.iter().next().map(|(k, c)| (k.clone(), c.clone())) {
            match self.rows.get_mut(&lead) {
                None => {
                    if lc.is_negative() {
                        v.values_mut().for_each(|c| *c = -&*c);
                    }
                    self.rows.insert(lead, v);
                    return true;
                }
                Some(h) => {
                    let hc = h[&lead].clone();
                    if lc.is_multiple_of(&hc) {
                        let q = -(&lc / &hc);
                        axpy(&mut v, &q, h);
                    } else {
                        let e = hc.extended_gcd(&lc);
                        let (ag, bg) = (&hc / &e.gcd, &lc / &e.gcd);
                        let mut new_row = lin(&e.x, h, &e.y, &v);
                        if new_row[&lead].is_negative() {
                            new_row.values_mut().for_each(|c| *c = -&*c);
                        }
                        let rest = lin(&ag, &v, &(-bg), h);
                        *h = new_row;
                        v = rest;
                        changed = true;
                    }
                }
            }
        }
        changed
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        let mut v: SparseVec<K> = v.iter().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k.clone(), c.clone())).collect();
        while let Some((lead, lc)) = v.iter().next().map(|(k, c)| (k.clone(), c.clone())) {
            let Some(h) = self.rows.get(&lead) else { return false };
            let (q, r) = lc.div_rem(&h[&lead]);
            if !r.is_zero() {
                return false;
            }
            axpy(&mut v, &-q, h);
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(pairs: &[(u32, i64)]) -> SparseVec<u32> {
        pairs.iter().map(|&(k, c)| (k, BigInt::from(c))).collect()
    }

    #[test]
    fn rank_and_membership() {
        let mut l = SparseLattice::new();
        assert!(l.insert(sv(&[(0, 2), (5, 1)])));
        assert!(l.insert(sv(&[(0, 3)])));
        assert!(!l.insert(sv(&[(0, 4), (5, 2)])));
        assert_eq!(l.rank(), 2);
        assert!(!l.contains(&sv(&[(0, 1)])));
        assert!(l.contains(&sv(&[(0, 1), (5, -1)])));
        assert!(l.contains(&sv(&[(5, 3)])));
        assert!(!l.contains(&sv(&[(7, 1)])));
    }
}
