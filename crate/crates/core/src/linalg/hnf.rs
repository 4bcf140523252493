//! Row-style Hermite normal form and lattices of integer vectors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use super::snf::snf_rows;
use crate::error::{Error, Result};

/// A sublattice of Z^d held by its Hermite normal form basis.
///
/// Rows are sorted by strictly increasing pivot column, pivots are positive,
/// and every entry above a pivot lies in `[0, pivot)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeBasis {
    dim: usize,
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    elementary_divisors: Option<Vec<BigInt>>,
}

#[derive(Clone, Debug)]
pub struct HnfResult {
    pub basis: LatticeBasis,
    /// Unimodular `U` with `U * M` equal to the basis followed by zero rows.
    pub transform: IntMatrix,
}

impl LatticeBasis {
    pub fn zero(dim: usize) -> Self {
        LatticeBasis { dim, rows: Vec::new(), pivots: Vec::new(), elementary_divisors: None }
    }

    /// The full lattice Z^d.
    pub fn full(dim: usize) -> Self {
        let mut b = Self::zero(dim);
        for i in 0..dim {
            let mut e = vec![BigInt::zero(); dim];
            e[i] = BigInt::one();
            b.rows.push(e);
            b.pivots.push(i);
        }
        b
    }

    pub fn from_generators<I, V>(dim: usize, gens: I) -> Result<Self>
    where
        I: IntoIterator<Item = V>,
        V: AsRef<[BigInt]>,
    {
        let mut b = Self::zero(dim);
        for g in gens {
            b.insert(g.as_ref())?;
        }
        Ok(b)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.dim
    }

    /// True when the lattice is all of Z^d.
    pub fn is_everything(&self) -> bool {
        self.is_full_rank() && self.rows.iter().zip(&self.pivots).all(|(r, &p)| r[p].is_one())
    }

    /// Index in Z^d; `None` when the rank is deficient.
    pub fn index(&self) -> Option<BigInt> {
        self.is_full_rank()
            .then(|| self.rows.iter().zip(&self.pivots).map(|(r, &p)| r[p].clone()).product())
    }

    pub fn as_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(&self.rows).unwrap_or_else(|_| IntMatrix::int_zeros(0, self.dim))
    }

    pub fn elementary_divisors(&mut self) -> &[BigInt] {
        if self.elementary_divisors.is_none() {
            self.elementary_divisors = Some(snf_rows(self.rows.clone(), self.dim));
        }
        self.elementary_divisors.as_deref().unwrap_or_default()
    }

    pub fn cached_divisors(&self) -> Option<&[BigInt]> {
        self.elementary_divisors.as_deref()
    }

    fn check_dim(&self, v: &[BigInt]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        Ok(())
    }

    /// Adds `v` to the generating set. Returns whether the lattice grew.
    pub fn insert(&mut self, v: &[BigInt]) -> Result<bool> {
        self.check_dim(v)?;
        let mut v = v.to_vec();
        let mut changed = false;
        let mut k = 0;
        while let Some(lead) = v.iter().position(|a| !a.is_zero()) {
            while k < self.rows.len() && self.pivots[k] < lead {
                k += 1;
            }
            if k == self.rows.len() || self.pivots[k] > lead {
                if v[lead].is_negative() {
                    v.iter_mut().for_each(|a| *a = -&*a);
                }
                self.rows.insert(k, v);
                self.pivots.insert(k, lead);
                changed = true;
                break;
            }
            let h = &self.rows[k];
            let (a, b) = (&h[lead], &v[lead]);
            if b.is_multiple_of(a) {
                let q = b / a;
                for (x, y) in v.iter_mut().zip(h) {
                    *x -= &q * y;
                }
            } else {
                let e = a.extended_gcd(b);
                let (ag, bg) = (a / &e.gcd, b / &e.gcd);
                let new_row: Vec<BigInt> =
                    h.iter().zip(&v).map(|(x, y)| &e.x * x + &e.y * y).collect();
                let rest: Vec<BigInt> = h.iter().zip(&v).map(|(x, y)| &ag * y - &bg * x).collect();
                self.rows[k] = new_row;
                if self.rows[k][lead].is_negative() {
                    self.rows[k].iter_mut().for_each(|a| *a = -&*a);
                }
                v = rest;
                changed = true;
            }
        }
        if changed {
            self.reduce_above();
            self.elementary_divisors = None;
        }
        Ok(changed)
    }

    fn reduce_above(&mut self) {
        for i in 0..self.rows.len() {
            let p = self.pivots[i];
            let (head, tail) = self.rows.split_at_mut(i);
            let piv_row = &tail[0];
            let m = &piv_row[p];
            for row in head.iter_mut() {
                let q = row[p].div_floor(m);
                if !q.is_zero() {
                    for (x, y) in row.iter_mut().zip(piv_row) {
                        *x -= &q * y;
                    }
                }
            }
        }
    }

    /// Coordinates of `v` in the basis rows, when `v` lies in the lattice.
    pub fn solve(&self, v: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        self.check_dim(v)?;
        let mut v = v.to_vec();
        let mut coords = vec![BigInt::zero(); self.rows.len()];
        for (k, (row, &p)) in self.rows.iter().zip(&self.pivots).enumerate() {
            if v[..p].iter().any(|a| !a.is_zero()) {
                return Ok(None);
            }
            let (q, r) = v[p].div_rem(&row[p]);
            if !r.is_zero() {
                return Ok(None);
            }
            if !q.is_zero() {
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= &q * y;
                }
            }
            coords[k] = q;
        }
        Ok(v.iter().all(Zero::is_zero).then_some(coords))
    }

    pub fn contains(&self, v: &[BigInt]) -> Result<bool> {
        Ok(self.solve(v)?.is_some())
    }

    /// True when every row of `other` lies in `self`.
    pub fn contains_lattice(&self, other: &LatticeBasis) -> Result<bool> {
        for r in &other.rows {
            if !self.contains(r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Hermite normal form of the row lattice of `m`, with the transform.
pub fn hnf(m: &IntMatrix) -> HnfResult {
    let (r, c) = (m.rows(), m.cols());
    let mut a: Vec<Vec<BigInt>> = (0..r).map(|i| m.row(i).to_vec()).collect();
    let mut u: Vec<Vec<BigInt>> = (0..r)
        .map(|i| (0..r).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..c {
        if top == r {
            break;
        }
        // gcd-combine the column below `top` into row `top`
        for i in top + 1..r {
            if a[i][col].is_zero() {
                continue;
            }
            if a[top][col].is_zero() {
                a.swap(top, i);
                u.swap(top, i);
                continue;
            }
            if a[i][col].is_multiple_of(&a[top][col]) {
                let q = &a[i][col] / &a[top][col];
                sub_row(&mut a, i, top, &q);
                sub_row(&mut u, i, top, &q);
                continue;
            }
            let e = a[top][col].extended_gcd(&a[i][col]);
            let (ag, bg) = (&a[top][col] / &e.gcd, &a[i][col] / &e.gcd);
            combine(&mut a, top, i, &e.x, &e.y, &ag, &bg);
            combine(&mut u, top, i, &e.x, &e.y, &ag, &bg);
        }
        if a[top][col].is_zero() {
            continue;
        }
        if a[top][col].is_negative() {
            a[top].iter_mut().for_each(|x| *x = -&*x);
            u[top].iter_mut().for_each(|x| *x = -&*x);
        }
        for i in 0..top {
            let q = a[i][col].div_floor(&a[top][col]);
            if !q.is_zero() {
                sub_row(&mut a, i, top, &q);
                sub_row(&mut u, i, top, &q);
            }
        }
        pivots.push(col);
        top += 1;
    }
    a.truncate(top);
    let basis = LatticeBasis { dim: c, rows: a, pivots, elementary_divisors: None };
    let transform = IntMatrix::from_rows(&u).unwrap_or_else(|_| IntMatrix::int_zeros(0, 0));
    HnfResult { basis, transform }
}

/// Rows `(i, j)` become `(s*i + t*j, ag*j - bg*i)`; the 2x2 step has determinant 1.
fn combine(a: &mut [Vec<BigInt>], i: usize, j: usize, s: &BigInt, t: &BigInt, ag: &BigInt, bg: &BigInt) {
    let (ri, rj) = (a[i].clone(), a[j].clone());
    a[i] = ri.iter().zip(&rj).map(|(x, y)| s * x + t * y).collect();
    a[j] = ri.iter().zip(&rj).map(|(x, y)| ag * y - bg * x).collect();
}

fn sub_row(a: &mut [Vec<BigInt>], i: usize, src: usize, q: &BigInt) {
    let s = a[src].clone();
    for (x, y) in a[i].iter_mut().zip(&s) {
        *x -= q * y;
    }
}

/// Whether `v` lies in the Z-span of the basis rows.
pub fn lattice_membership(b: &LatticeBasis, v: &[BigInt]) -> Result<bool> {
    b.contains(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn incremental_matches_batch() {
        let m = IntMatrix::from_i64(&[[2, 4, 6], [0, 3, 9], [4, 1, 0], [1, 1, 1]]);
        let batch = hnf(&m).basis;
        let inc = LatticeBasis::from_generators(3, (0..4).map(|i| m.row(i).to_vec())).unwrap();
        assert_eq!(batch.rows(), inc.rows());
    }

    #[test]
    fn membership_basics() {
        let b = LatticeBasis::from_generators(2, [bi(&[2, 0]), bi(&[0, 2])]).unwrap();
        assert!(!b.contains(&bi(&[1, 0])).unwrap());
        assert!(b.contains(&bi(&[4, -6])).unwrap());
        assert!(b.contains(&bi(&[1])).is_err());
        assert_eq!(b.index(), Some(BigInt::from(4)));
    }
}
