//! Circulants, units of the integral group ring of a cyclic group, the
//! idempotents `Y_1` they produce, and the normal form of a representation
//! satisfying the cyclic relations.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::divisor_count;
use crate::error::{Error, Result};
use crate::linalg::det::{det, inverse_int};
use crate::linalg::{IntMatrix, LatticeBasis};
use crate::presentations::{check_relations, r2, standard_relators, Variant};
use crate::words::NcPoly;

/// Largest box searched by [`find_circulant_units`].
pub const MAX_BOX: u64 = 20_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Circulant {
    pub n: usize,
    #[serde(with = "crate::json::big_vec")]
    pub c: Vec<BigInt>,
}

impl Circulant {
    pub fn new(c: Vec<BigInt>) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::InvalidParameter("empty circulant vector".into()));
        }
        Ok(Circulant { n: c.len(), c })
    }

    pub fn from_i64(c: &[i64]) -> Result<Self> {
        Circulant::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn matrix(&self) -> IntMatrix {
        let n = self.n;
        let mut m = IntMatrix::int_zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, self.c[(n + j - i) % n].clone());
            }
        }
        m
    }

    pub fn det(&self) -> BigInt {
        det(&self.matrix())
    }

    /// `c_{2-i}`, indices mod `n`; the circulant of the transpose.
    pub fn reflected(&self) -> Circulant {
        let n = self.n;
        Circulant { n, c: (0..n).map(|i| self.c[(n - i) % n].clone()).collect() }
    }

    pub fn is_trivial_unit(&self) -> bool {
        let nz: Vec<&BigInt> = self.c.iter().filter(|v| !v.is_zero()).collect();
        nz.len() == 1 && nz[0].abs().is_one()
    }
}

/// `sum_{i=1..n} c_{n-i+1} X^i`
pub fn circ(c: &[BigInt]) -> Result<IntMatrix> {
    Ok(Circulant::new(c.to_vec())?.matrix())
}

/// Cyclic convolution with zero-based indices; `circ` turns it into the
/// matrix product.
pub fn cyclic_convolution(c: &[BigInt], d: &[BigInt]) -> Result<Vec<BigInt>> {
    if c.len() != d.len() || c.is_empty() {
        return Err(Error::DimensionMismatch { expected: c.len(), got: d.len() });
    }
    let n = c.len();
    let mut out = vec![BigInt::zero(); n];
    for (u, a) in c.iter().enumerate() {
        for (v, b) in d.iter().enumerate() {
            out[(u + v) % n] += a * b;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitPair {
    pub c: Circulant,
    /// `circ(c) * circ(d) = I`
    pub d: Circulant,
    #[serde(with = "crate::json::big")]
    pub det: BigInt,
    pub trivial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitSearch {
    pub n: usize,
    pub bound: u64,
    pub searched: u64,
    pub units: Vec<UnitPair>,
    pub trivial_count: usize,
    pub nontrivial_count: usize,
}

fn det_i128(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n.saturating_sub(1) {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn circ_rows(c: &[i64]) -> Vec<Vec<i128>> {
    let n = c.len();
    (0..n).map(|i| (0..n).map(|j| c[(n + j - i) % n] as i128).collect()).collect()
}

/// Exhaustive search over `[-bound, bound]^n` for circulants of determinant
/// `±1`, each paired with its inverse.
pub fn find_circulant_units(n: usize, bound: u64) -> Result<UnitSearch> {
    if n < 2 || bound < 1 {
        return Err(Error::InvalidParameter("need n >= 2 and bound >= 1".into()));
    }
    let side = 2 * bound + 1;
    let size = (side as u128).checked_pow(n as u32).filter(|&s| s <= MAX_BOX as u128);
    let Some(size) = size else {
        return Err(Error::ResourceCap(format!("box of side {side} in dimension {n} exceeds {MAX_BOX}")));
    };
    let b = bound as i64;
    let rest = size as u64 / side;
    let found: Vec<Vec<i64>> = (-b..=b)
        .into_par_iter()
        .flat_map_iter(|lead| {
            let mut hits = Vec::new();
            let mut c = vec![-b; n];
            c[0] = lead;
            for _ in 0..rest {
                if det_i128(circ_rows(&c)).abs() == 1 {
                    hits.push(c.clone());
                }
                for slot in c.iter_mut().skip(1) {
                    if *slot < b {
                        *slot += 1;
                        break;
                    }
                    *slot = -b;
                }
            }
            hits
        })
        .collect();
    let mut units = Vec::with_capacity(found.len());
    for c in found {
        let c = Circulant::from_i64(&c)?;
        let inv = inverse_int(&c.matrix()).ok_or(Error::NotUnimodular)?;
        let d = Circulant::new(inv.row(0).to_vec())?;
        let trivial = c.is_trivial_unit();
        units.push(UnitPair { det: c.det(), c, d, trivial });
    }
    let trivial_count = units.iter().filter(|u| u.trivial).count();
    Ok(UnitSearch {
        n,
        bound,
        searched: size as u64,
        nontrivial_count: units.len() - trivial_count,
        trivial_count,
        units,
    })
}

/// `(n + t_2 - 2l + 1) / 2` for the cyclic group of order `n`.
pub fn higman_rank(n: u64) -> u64 {
    assert!(n >= 1, "cyclic group of order 0");
    let t2 = u64::from(n.is_multiple_of(2));
    (n + t2 + 1 - 2 * divisor_count(n)) / 2
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Conjugator {
    pub name: String,
    #[serde(with = "crate::json::matrix")]
    pub matrix: IntMatrix,
    #[serde(with = "crate::json::big")]
    pub det: BigInt,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Y1Report {
    #[serde(with = "crate::json::matrix")]
    pub y1: IntMatrix,
    pub idempotent: bool,
    pub r2_vanishes: bool,
    pub sandwiches_vanish: bool,
    /// Every cyclic diagonal of `Y_1` sums to `delta_{ij}`.
    pub diagonal_sums: bool,
    pub dnepr_relations: bool,
    #[serde(with = "crate::json::big")]
    pub trace: BigInt,
    /// Zero-based `i` when `Y_1 = E_ii`.
    pub standard_unit: Option<usize>,
    pub has_positive: bool,
    pub has_negative: bool,
    /// `C Y C^{-1} = Y_1` with `C` commuting with `X`.
    pub conjugator: Option<Conjugator>,
}

impl Y1Report {
    pub fn all_pass(&self) -> bool {
        self.idempotent
            && self.r2_vanishes
            && self.sandwiches_vanish
            && self.diagonal_sums
            && self.dnepr_relations
            && self.trace.is_one()
            && (self.standard_unit.is_some() || (self.has_positive && self.has_negative))
            && self.conjugator.is_some()
    }
}

/// `Y_1 = (c_i d_{2-j})`, indices mod `n`.
pub fn build_y1(c: &Circulant, d: &Circulant) -> Result<IntMatrix> {
    if c.n != d.n {
        return Err(Error::DimensionMismatch { expected: c.n, got: d.n });
    }
    if !(&c.matrix() * &d.matrix()).is_identity() {
        return Err(Error::NotInverse);
    }
    let n = c.n;
    let dr = d.reflected();
    let mut y = IntMatrix::int_zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            y.set(i, j, &c.c[i] * &dr.c[j]);
        }
    }
    Ok(y)
}

pub fn build_and_verify_y1(c: &Circulant, d: &Circulant) -> Result<Y1Report> {
    let y1 = build_y1(c, d)?;
    let n = c.n;
    let x = IntMatrix::shift(n);
    let eval = |p: &NcPoly| p.evaluate(&x, &y1);
    let r2_vanishes = eval(&r2(n))?.is_zero();
    let mut sandwiches_vanish = true;
    for k in 1..n {
        sandwiches_vanish &= (&(&y1 * &x.pow(k as u32)) * &y1).is_zero();
    }
    let diagonal_sums = (0..n).all(|i| {
        (0..n).all(|j| {
            let s: BigInt = (0..n).map(|k| y1.get((i + k) % n, (j + k) % n)).sum();
            s == BigInt::from(u8::from(i == j))
        })
    });
    let dnepr = standard_relators(n, Variant::Dnepr)?;
    let dnepr_relations = check_relations(&x, &y1, &dnepr)?.pass;
    let standard_unit = (0..n).find(|&i| y1 == IntMatrix::unit(n, i as i64 + 1, i as i64 + 1));
    let y = IntMatrix::unit(n, 1, 1);
    let candidates = [
        ("circ(c)", c.matrix()),
        ("circ(d)", d.matrix()),
        ("circ(c)^T", c.matrix().transpose()),
        ("circ(d)^T", d.matrix().transpose()),
    ];
    let conjugator = candidates.into_iter().find_map(|(name, m)| {
        let dt = det(&m);
        (dt.abs().is_one() && &m * &y == &y1 * &m).then(|| Conjugator { name: name.into(), matrix: m, det: dt })
    });
    Ok(Y1Report {
        idempotent: &y1 * &y1 == y1,
        r2_vanishes,
        sandwiches_vanish,
        diagonal_sums,
        dnepr_relations,
        trace: y1.trace(),
        standard_unit,
        has_positive: y1.entries().iter().any(|v| v.is_positive()),
        has_negative: y1.entries().iter().any(|v| v.is_negative()),
        conjugator,
        y1,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CanonicalForm {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub r: usize,
    #[serde(with = "crate::json::matrix")]
    pub b: IntMatrix,
    #[serde(with = "crate::json::matrix")]
    pub b_inverse: IntMatrix,
    #[serde(with = "crate::json::matrix")]
    pub x_block: IntMatrix,
    #[serde(with = "crate::json::matrix")]
    pub y_block: IntMatrix,
}

/// `diag(I_k (x) X, 0_r)` and `diag(I_k (x) Y, 0_r)`.
pub fn canonical_model(n: usize, k: usize, r: usize) -> (IntMatrix, IntMatrix) {
    let ik = IntMatrix::int_identity(k);
    let pad = |m: IntMatrix| {
        if r == 0 {
            m
        } else {
            IntMatrix::block_diag(crate::linalg::Integers, &[m, IntMatrix::int_zeros(r, r)])
        }
    };
    (pad(ik.kron(&IntMatrix::shift(n))), pad(ik.kron(&IntMatrix::unit(n, 1, 1))))
}

fn column_lattice(m: &IntMatrix) -> Result<LatticeBasis> {
    LatticeBasis::from_generators(m.rows(), m.transpose().to_rows())
}

fn mat_vec(m: &IntMatrix, v: &[BigInt]) -> Vec<BigInt> {
    (0..m.rows()).map(|i| m.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// Conjugates `(X_1, Y_1)` into block form over the integers.
pub fn canonicalize_representation(x1: &IntMatrix, y1: &IntMatrix, n: usize) -> Result<CanonicalForm> {
    if n < 1 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if !x1.is_square() || x1.rows() != y1.rows() || x1.cols() != y1.cols() {
        return Err(Error::ShapeMismatch("X_1 and Y_1 must be square of the same size".into()));
    }
    if x1.is_zero() || y1.is_zero() {
        return Err(Error::Precondition("X_1 and Y_1 must be nonzero".into()));
    }
    let m = x1.rows();
    let e = x1.pow(n as u32);
    let mut sum = IntMatrix::int_zeros(m, m);
    for i in 0..n {
        sum = &sum + &(&(&x1.pow((n - i) as u32) * y1) * &x1.pow(i as u32));
    }
    let checks = [
        (&e * x1 == *x1, "X_1^{n+1} = X_1"),
        (y1 * &e == *y1, "Y_1 X_1^n = Y_1"),
        (y1 * y1 == *y1, "Y_1^2 = Y_1"),
        (sum == e, "sum_i X_1^{n-i} Y_1 X_1^i = X_1^n"),
    ];
    if let Some((_, what)) = checks.iter().find(|(ok, _)| !ok) {
        return Err(Error::RelationViolation((*what).into()));
    }
    let trace = y1.trace();
    let p = column_lattice(&e)?;
    let z = column_lattice(&(&IntMatrix::int_identity(m) - &e))?;
    let q = p.rank();
    let k = usize::try_from(&trace).ok().filter(|&k| k > 0 && k * n == q);
    let Some(k) = k else {
        return Err(Error::NonIntegralTrace(format!("{trace} with rank of X_1^n equal to {q}")));
    };
    let u = column_lattice(y1)?;
    if u.rank() != k {
        return Err(Error::NonIntegralTrace(format!("{trace} but Y_1 has rank {}", u.rank())));
    }
    let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(m);
    for s in u.rows() {
        let mut v = s.clone();
        for _ in 0..n {
            cols.push(v.clone());
            v = mat_vec(x1, &v);
        }
    }
    cols.extend(z.rows().iter().cloned());
    let b = IntMatrix::from_rows(&cols)?.transpose();
    let b_inverse = inverse_int(&b).ok_or(Error::NotUnimodular)?;
    let r = m - k * n;
    let x_block = &(&b_inverse * x1) * &b;
    let y_block = &(&b_inverse * y1) * &b;
    let (xc, yc) = canonical_model(n, k, r);
    if x_block != xc || y_block != yc {
        return Err(Error::CanonicalFormNotFound("conjugated pair is not in block form".into()));
    }
    Ok(CanonicalForm { n, m, k, r, b, b_inverse, x_block, y_block })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum NonnegRoot {
    Pass,
    /// A row without exactly one positive entry equal to 1.
    Counterexample { row: usize },
}

/// A nonnegative `X_1` with `X_1^n = I` is a permutation matrix.
pub fn nonneg_root_check(x1: &IntMatrix, n: usize) -> Result<NonnegRoot> {
    if !x1.is_square() || n < 1 {
        return Err(Error::Precondition("square matrix and n >= 1 required".into()));
    }
    if !x1.is_nonnegative() {
        return Err(Error::Precondition("entries must be nonnegative".into()));
    }
    if !x1.pow(n as u32).is_identity() {
        return Err(Error::Precondition(format!("X_1^{n} is not the identity")));
    }
    for i in 0..x1.rows() {
        let nz: Vec<&BigInt> = x1.row(i).iter().filter(|v| !v.is_zero()).collect();
        if nz.len() != 1 || !nz[0].is_one() {
            return Ok(NonnegRoot::Counterexample { row: i });
        }
    }
    Ok(NonnegRoot::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn circ_basics() {
        assert!(circ(&big(&[1, 0, 0, 0])).unwrap().is_identity());
        assert_eq!(circ(&big(&[0, 0, 0, 1])).unwrap(), IntMatrix::shift(4));
        assert_eq!(circ(&big(&[3, 5])).unwrap(), IntMatrix::from_i64(&[[3, 5], [5, 3]]));
        assert!(circ(&[]).is_err());
    }

    #[test]
    fn bareiss_matches() {
        for c in [[2i64, -1, 0, 1, 1], [1, 1, -1, 0, 0], [3, 0, 2, 2, -1]] {
            assert_eq!(BigInt::from(det_i128(circ_rows(&c))), Circulant::from_i64(&c).unwrap().det());
        }
    }

    #[test]
    fn higman_small() {
        assert_eq!(higman_rank(5), 1);
        assert_eq!(higman_rank(6), 0);
        assert_eq!(higman_rank(2), 0);
        assert_eq!(higman_rank(1), 0);
    }

    #[test]
    fn identity_pair() {
        let e = Circulant::from_i64(&[1, 0, 0]).unwrap();
        let rep = build_and_verify_y1(&e, &e).unwrap();
        assert_eq!(rep.y1, IntMatrix::unit(3, 1, 1));
        assert!(rep.all_pass());
    }

    #[test]
    fn not_inverse() {
        let c = Circulant::from_i64(&[1, 1]).unwrap();
        assert_eq!(build_and_verify_y1(&c, &c), Err(Error::NotInverse));
    }

    #[test]
    fn already_canonical() {
        let f = canonicalize_representation(&IntMatrix::shift(3), &IntMatrix::unit(3, 1, 1), 3).unwrap();
        assert_eq!((f.k, f.r), (1, 0));
        assert_eq!(f.x_block, IntMatrix::shift(3));
    }

    #[test]
    fn nonneg_roots() {
        assert_eq!(nonneg_root_check(&IntMatrix::shift(4), 4).unwrap(), NonnegRoot::Pass);
        assert_eq!(nonneg_root_check(&IntMatrix::int_identity(3), 1).unwrap(), NonnegRoot::Pass);
        assert!(nonneg_root_check(&IntMatrix::from_i64(&[[1, 1], [0, 1]]), 2).is_err());
    }
}
