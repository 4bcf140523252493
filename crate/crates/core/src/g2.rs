//! Pairs of 2x2 integer matrices generating `M_2(Z)`, and the equation
//! `a^2 - abc - b^2 = +-1`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gentest::{is_generating_with, Target};
use crate::json;
use crate::linalg::det::det;
use crate::linalg::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct G2Check {
    pub generates: bool,
    /// `gcd(det A, det B, det(A + B))`
    #[serde(with = "json::big")]
    pub det_gcd: BigInt,
    /// Determinant of the 4x4 matrix with rows `I, A, B, AB` flattened.
    #[serde(with = "json::big")]
    pub span_det: BigInt,
}

fn check_2x2(m: &IntMatrix) -> Result<()> {
    if m.rows() != 2 || m.cols() != 2 {
        return Err(Error::ShapeMismatch(format!("expected 2x2, got {}x{}", m.rows(), m.cols())));
    }
    Ok(())
}

pub fn g2_fast_check(a: &IntMatrix, b: &IntMatrix) -> Result<G2Check> {
    check_2x2(a)?;
    check_2x2(b)?;
    let det_gcd = det(a).gcd(&det(b)).gcd(&det(&(a + b)));
    let id = IntMatrix::int_identity(2);
    let ab = a * b;
    let rows: Vec<Vec<BigInt>> = [&id, a, b, &ab].iter().map(|m| m.entries().to_vec()).collect();
    let span_det = det(&IntMatrix::from_rows(&rows)?);
    let generates = det_gcd.is_one() && span_det.abs().is_one();
    Ok(G2Check { generates, det_gcd, span_det })
}

/// `A_1 = [[c, 1], [1, 0]]`, `B_1 = [[a, 0], [b, 0]]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalTriple {
    #[serde(with = "json::big")]
    pub c: BigInt,
    #[serde(with = "json::big")]
    pub a: BigInt,
    #[serde(with = "json::big")]
    pub b: BigInt,
}

impl CanonicalTriple {
    pub fn new(c: impl Into<BigInt>, a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        CanonicalTriple { c: c.into(), a: a.into(), b: b.into() }
    }

    pub fn matrices(&self) -> (IntMatrix, IntMatrix) {
        let z = BigInt::zero();
        let o = BigInt::one();
        let a1 = IntMatrix::from_rows(&[vec![self.c.clone(), o.clone()], vec![o, z.clone()]]).expect("2x2");
        let b1 = IntMatrix::from_rows(&[vec![self.a.clone(), z.clone()], vec![self.b.clone(), z]]).expect("2x2");
        (a1, b1)
    }

    /// `a^2 - abc - b^2`
    pub fn form_value(&self) -> BigInt {
        &self.a * &self.a - &self.a * &self.b * &self.c - &self.b * &self.b
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Reduction {
    pub triple: CanonicalTriple,
    pub steps: Vec<String>,
    /// Conjugations by `[[1, 0], [k, 1]]` applied during the search.
    pub conjugations: Vec<i64>,
}

/// Largest `|k|` tried for the lower unitriangular conjugation when the
/// span alone cannot reach the canonical shape.
pub const CONJUGATION_WINDOW: i64 = 64;

fn e(m: &IntMatrix, i: usize, j: usize) -> BigInt {
    m.get(i, j).clone()
}

fn fmt2(m: &IntMatrix) -> String {
    m.to_string()
}

/// Reduces a triple `(I, A, B)` generating `M_2(Z)` to the canonical
/// `(I, A_1, B_1)` shape, logging each step.
pub fn reduce_triple(a: &IntMatrix, b: &IntMatrix) -> Result<Reduction> {
    check_2x2(a)?;
    check_2x2(b)?;
    let mut steps = Vec::new();
    let (x12, y12) = (e(a, 0, 1), e(b, 0, 1));
    if x12.is_zero() && y12.is_zero() {
        return Err(Error::NotGeneratingTriple("both (1,2) entries are zero".into()));
    }
    let report = is_generating_with(a, b, &Target::Matrices { n: 2 }, true)?;
    if !report.generates() {
        return Err(Error::NotGeneratingTriple("I, A, B do not generate M_2(Z)".into()));
    }
    let g = x12.extended_gcd(&y12);
    if !g.gcd.is_one() {
        return Err(Error::NotGeneratingTriple(format!("gcd of (1,2) entries is {}", g.gcd)));
    }
    let (s, t) = (g.x, g.y);
    let mut a1 = &a.scale(&s) + &b.scale(&t);
    let mut b1 = &b.scale(&x12) - &a.scale(&y12);
    steps.push(format!("A <- {s}*A + {t}*B = {}", fmt2(&a1)));
    steps.push(format!("B <- {x12}*B - {y12}*A = {}", fmt2(&b1)));

    let (x22, y22) = (e(&a1, 1, 1), e(&b1, 1, 1));
    a1 = &a1 - &IntMatrix::scalar(2, x22.clone());
    b1 = &b1 - &IntMatrix::scalar(2, y22.clone());
    steps.push(format!("A <- A - {x22}*I = {}", fmt2(&a1)));
    steps.push(format!("B <- B - {y22}*I = {}", fmt2(&b1)));

    let (y11, y21) = (e(&b1, 0, 0), e(&b1, 1, 0));
    if !y11.gcd(&y21).is_one() {
        return Err(Error::NotGeneratingTriple(format!("gcd(y11, y21) = {}", y11.gcd(&y21))));
    }
    let x11 = e(&a1, 0, 0);
    let x21 = e(&a1, 1, 0);
    // conjugating by K_k = [[1,0],[k,1]] and adding kI keeps both shapes
    let mut ks: Vec<i64> = vec![0];
    for k in 1..=CONJUGATION_WINDOW {
        ks.push(k);
        ks.push(-k);
    }
    for k in ks {
        let kb = BigInt::from(k);
        let cx11 = &x11 + 2 * &kb;
        let cx21 = &x21 - &kb * &x11 - &kb * &kb;
        let cy21 = &y21 - &kb * &y11;
        let j = if cy21.is_zero() {
            if !cx21.is_one() {
                continue;
            }
            BigInt::zero()
        } else {
            let (q, r) = (BigInt::one() - &cx21).div_rem(&cy21);
            if !r.is_zero() {
                continue;
            }
            q
        };
        if k != 0 {
            steps.push(format!("conjugate by [[1,0],[{k},1]] and add {k}*I to A"));
        }
        let c = &cx11 + &j * &y11;
        if !j.is_zero() {
            steps.push(format!("A <- A + {j}*B"));
        }
        let triple = CanonicalTriple { c, a: y11.clone(), b: cy21 };
        let v = triple.form_value();
        steps.push(format!(
            "canonical (c, a, b) = ({}, {}, {}); a^2 - abc - b^2 = {v}",
            triple.c, triple.a, triple.b
        ));
        if !v.abs().is_one() {
            return Err(Error::NotGeneratingTriple(format!("form value {v} is not +-1")));
        }
        let conjugations = if k == 0 { vec![] } else { vec![k] };
        return Ok(Reduction { triple, steps, conjugations });
    }
    Err(Error::CanonicalFormNotFound(format!(
        "no (2,1) entry equal to 1 within conjugation window {CONJUGATION_WINDOW}"
    )))
}

/// A solution of `d^2 - D b^2 = +-4`, i.e. the unit `(d + b sqrt(D)) / 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadUnit {
    #[serde(with = "json::big")]
    pub d: BigInt,
    #[serde(with = "json::big")]
    pub b: BigInt,
    #[serde(with = "json::big")]
    pub disc: BigInt,
}

impl QuadUnit {
    /// `d^2 - D b^2`, which is `4` or `-4`.
    pub fn norm4(&self) -> BigInt {
        &self.d * &self.d - &self.disc * &self.b * &self.b
    }

    pub fn mul(&self, other: &QuadUnit) -> QuadUnit {
        assert_eq!(self.disc, other.disc);
        let d = (&self.d * &other.d + &self.disc * &self.b * &other.b) / 2;
        let b = (&self.d * &other.b + &other.d * &self.b) / 2;
        QuadUnit { d, b, disc: self.disc.clone() }
    }

    pub fn one(disc: &BigInt) -> QuadUnit {
        QuadUnit { d: BigInt::from(2), b: BigInt::zero(), disc: disc.clone() }
    }
}

const CF_STEPS: usize = 100_000;

/// Convergents `h/q` of the quadratic irrational `(p0 + sqrt(D)) / q0`.
fn convergents(disc: &BigInt, p0: BigInt, q0: BigInt) -> impl Iterator<Item = (BigInt, BigInt)> {
    let root = disc.sqrt();
    let (mut p, mut q) = (p0, q0);
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
    let disc = disc.clone();
    (0..CF_STEPS).map(move |_| {
        // q stays positive for these expansions, so flooring with isqrt is exact
        debug_assert!(q.is_positive());
        let a: BigInt = (&p + &root).div_floor(&q);
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        let p_next = &a * &q - &p;
        let q_next = (&disc - &p_next * &p_next) / &q;
        p = p_next;
        q = q_next;
        (h.clone(), k.clone())
    })
}

/// Least solution with `b > 0` of `d^2 - (c^2 + 4) b^2 = +-4`, by the
/// continued fraction of `sqrt(c^2/4 + 1)` (even `c`) or `(1 + sqrt(c^2+4))/2`
/// (odd `c`).
pub fn pell_fundamental(c: i64) -> Result<QuadUnit> {
    if c == 0 {
        return Err(Error::DegenerateDiscriminant(4));
    }
    let cb = BigInt::from(c);
    let disc: BigInt = &cb * &cb + 4;
    let four = BigInt::from(4);
    if disc.is_multiple_of(&four) {
        let dq = &disc / 4;
        for (h, k) in convergents(&dq, BigInt::zero(), BigInt::one()) {
            let v = &h * &h - &dq * &k * &k;
            if v.abs().is_one() && k.is_positive() {
                return Ok(QuadUnit { d: 2 * h, b: k, disc });
            }
        }
    } else {
        for (h, k) in convergents(&disc, BigInt::one(), BigInt::from(2)) {
            let d: BigInt = 2 * &h - &k;
            let v: BigInt = &d * &d - &disc * &k * &k;
            if v.abs() == four && k.is_positive() {
                return Ok(QuadUnit { d, b: k, disc });
            }
        }
    }
    Err(Error::ResourceCap(format!("no unit within {CF_STEPS} continued fraction steps")))
}

#[derive(Clone, Debug, Serialize)]
pub struct Solution {
    #[serde(with = "json::big")]
    pub a: BigInt,
    #[serde(with = "json::big")]
    pub b: BigInt,
    #[serde(with = "json::big")]
    pub c: BigInt,
    /// `a^2 - abc - b^2`
    #[serde(with = "json::big")]
    pub value: BigInt,
    #[serde(with = "json::matrix")]
    pub a1: IntMatrix,
    #[serde(with = "json::matrix")]
    pub b1: IntMatrix,
}

fn solution(a: BigInt, b: BigInt, c: &BigInt) -> Solution {
    let t = CanonicalTriple { c: c.clone(), a, b };
    let (a1, b1) = t.matrices();
    Solution { value: t.form_value(), a: t.a, b: t.b, c: t.c, a1, b1 }
}

fn order_key(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, bool, bool) {
    (b.abs(), a.abs(), b.is_negative(), a.is_negative())
}

/// The first `count` solutions `(a, b)` of `a^2 - abc - b^2 = +-1`, ordered
/// by `|b|` then `|a|` (positive before negative). For `c != 0` only
/// solutions with `ab != 0` are listed; `c = 0` gives the four solutions
/// with `|a| + |b| = 1`.
pub fn enumerate_solutions(c: i64, count: usize) -> Result<Vec<Solution>> {
    if count == 0 {
        return Err(Error::InvalidParameter("count must be at least 1".into()));
    }
    let cb = BigInt::from(c);
    if c == 0 {
        let mut v: Vec<(BigInt, BigInt)> = [(1, 0), (-1, 0), (0, 1), (0, -1)]
            .iter()
            .map(|&(a, b)| (BigInt::from(a), BigInt::from(b)))
            .collect();
        v.sort_by_key(|(a, b)| order_key(a, b));
        return Ok(v.into_iter().take(count).map(|(a, b)| solution(a, b, &cb)).collect());
    }
    let eps = pell_fundamental(c)?;
    let mut found: BTreeSet<(BigInt, BigInt, bool, bool, BigInt, BigInt)> = BTreeSet::new();
    let mut unit = eps.clone();
    loop {
        for d in [unit.d.clone(), -unit.d.clone()] {
            for b in [unit.b.clone(), -unit.b.clone()] {
                let num: BigInt = &b * &cb + &d;
                debug_assert!(num.is_even());
                let a: BigInt = num / 2;
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                let k = order_key(&a, &b);
                found.insert((k.0, k.1, k.2, k.3, a, b));
            }
        }
        // every solution with |b| below the next unit's b is now present
        let next = unit.mul(&eps);
        if found.len() >= count {
            let kth_b = found.iter().nth(count - 1).map(|t| t.0.clone()).unwrap_or_default();
            if next.b.abs() > kth_b {
                break;
            }
        }
        unit = next;
    }
    Ok(found.into_iter().take(count).map(|t| solution(t.4, t.5, &cb)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_check_examples() {
        let x = IntMatrix::shift(2);
        let y = IntMatrix::unit(2, 1, 1);
        assert!(g2_fast_check(&x, &y).unwrap().generates);
        let i = IntMatrix::int_identity(2);
        assert!(!g2_fast_check(&i, &i).unwrap().generates);
        let d = IntMatrix::from_i64(&[[1, 0], [0, 2]]);
        let r = g2_fast_check(&d, &d).unwrap();
        assert!(!r.generates);
        assert_eq!(r.det_gcd, BigInt::from(2));
    }

    #[test]
    fn small_units() {
        assert_eq!(pell_fundamental(1).unwrap().d, BigInt::from(1));
        assert_eq!(pell_fundamental(2).unwrap().d, BigInt::from(2));
        assert!(matches!(pell_fundamental(0), Err(Error::DegenerateDiscriminant(_))));
        for c in -7..=7 {
            if c == 0 {
                continue;
            }
            let u = pell_fundamental(c).unwrap();
            assert_eq!(u.norm4().abs(), BigInt::from(4));
        }
    }
}
