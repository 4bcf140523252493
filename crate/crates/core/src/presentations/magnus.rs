//! The ring of quadruples `(A, U, V, z)` standing for
//! `[[A, 0], [xi U + eta V, z]]` and the ideals of its relator images.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{r1, s};
use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, LatticeBasis};
use crate::words::{Letter, NcPoly};

const CLOSURE_CAP: usize = 200_000;

#[derive(Clone, Debug, PartialEq)]
pub struct MagnusElem {
    pub a: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub z: BigInt,
}

impl MagnusElem {
    pub fn zero(n: usize) -> Self {
        let z = IntMatrix::int_zeros(n, n);
        MagnusElem { a: z.clone(), u: z.clone(), v: z, z: BigInt::zero() }
    }

    pub fn mul(&self, o: &MagnusElem) -> MagnusElem {
        MagnusElem {
            a: &self.a * &o.a,
            u: &(&self.u * &o.a) + &o.u.scale(&self.z),
            v: &(&self.v * &o.a) + &o.v.scale(&self.z),
            z: &self.z * &o.z,
        }
    }

    pub fn add(&self, o: &MagnusElem) -> MagnusElem {
        MagnusElem { a: &self.a + &o.a, u: &self.u + &o.u, v: &self.v + &o.v, z: &self.z + &o.z }
    }

    pub fn scale(&self, c: &BigInt) -> MagnusElem {
        MagnusElem { a: self.a.scale(c), u: self.u.scale(c), v: self.v.scale(c), z: &self.z * c }
    }

    pub fn coords(&self) -> Vec<BigInt> {
        let mut out: Vec<BigInt> = Vec::new();
        for m in [&self.a, &self.u, &self.v] {
            out.extend(m.entries().iter().cloned());
        }
        out.push(self.z.clone());
        out
    }

    pub fn from_coords(n: usize, c: &[BigInt]) -> MagnusElem {
        let block = |k: usize| {
            let rows: Vec<Vec<BigInt>> = (0..n).map(|i| c[k * n * n + i * n..k * n * n + (i + 1) * n].to_vec()).collect();
            IntMatrix::from_rows(&rows).expect("square block")
        };
        MagnusElem { a: block(0), u: block(1), v: block(2), z: c[3 * n * n].clone() }
    }
}

/// Generators `I`, `X`, `Y` of the ring.
#[derive(Clone, Debug)]
pub struct MagnusRing {
    pub n: usize,
    pub one: MagnusElem,
    pub x: MagnusElem,
    pub y: MagnusElem,
}

impl MagnusRing {
    pub fn new(n: usize) -> Self {
        let id = IntMatrix::int_identity(n);
        let zero = IntMatrix::int_zeros(n, n);
        MagnusRing {
            n,
            one: MagnusElem { a: id.clone(), u: zero.clone(), v: zero.clone(), z: BigInt::one() },
            x: MagnusElem { a: IntMatrix::shift(n), u: id.clone(), v: zero.clone(), z: BigInt::one() },
            y: MagnusElem { a: IntMatrix::unit(n, 1, 1), u: zero, v: id, z: BigInt::zero() },
        }
    }

    pub fn ambient_rank(&self) -> usize {
        3 * self.n * self.n + 1
    }

    pub fn evaluate(&self, p: &NcPoly) -> MagnusElem {
        let mut acc = MagnusElem::zero(self.n);
        for (w, c) in p.terms() {
            let mut v = self.one.clone();
            for l in w.letters() {
                v = v.mul(if *l == Letter::X { &self.x } else { &self.y });
            }
            acc = acc.add(&v.scale(c));
        }
        acc
    }

    /// Smallest lattice containing `seeds` and closed under the given sides
    /// of multiplication by `X` and `Y`.
    fn closure(&self, seeds: &[MagnusElem], left: bool, right: bool) -> Result<LatticeBasis> {
        let mut lat = LatticeBasis::zero(self.ambient_rank());
        let mut queue: VecDeque<MagnusElem> = VecDeque::new();
        for e in seeds {
            if lat.insert(&e.coords())? {
                queue.push_back(e.clone());
            }
        }
        let mut steps = 0;
        while let Some(e) = queue.pop_front() {
            steps += 1;
            if steps > CLOSURE_CAP {
                return Err(Error::ResourceCap("ideal closure did not stabilize".into()));
            }
            let mut next = Vec::new();
            for g in [&self.x, &self.y] {
                if left {
                    next.push(g.mul(&e));
                }
                if right {
                    next.push(e.mul(g));
                }
            }
            for p in next {
                if lat.insert(&p.coords())? {
                    queue.push_back(p);
                }
            }
        }
        Ok(lat)
    }

    pub fn ring_lattice(&self) -> Result<LatticeBasis> {
        self.closure(std::slice::from_ref(&self.one), false, true)
    }

    pub fn ideal(&self, g: &MagnusElem) -> Result<LatticeBasis> {
        self.closure(std::slice::from_ref(g), true, true)
    }

    /// Every basis vector times every generator stays in the lattice.
    pub fn is_ideal(&self, lat: &LatticeBasis) -> Result<bool> {
        for row in lat.rows() {
            let e = MagnusElem::from_coords(self.n, row);
            for g in [&self.x, &self.y] {
                if !lat.contains(&g.mul(&e).coords())? || !lat.contains(&e.mul(g).coords())? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MagnusReport {
    pub n: usize,
    pub ambient_rank: usize,
    pub ring_rank: usize,
    pub r1_rank: usize,
    /// Ranks of the ideals of `s_0, ..., s_{n-1}`.
    pub s_ranks: Vec<usize>,
    pub ideals_closed: bool,
    pub r1_meets_s0_trivially: bool,
    pub sum_is_direct: bool,
    pub sum_equals_s0: bool,
}

fn sum(dim: usize, parts: &[&LatticeBasis]) -> Result<LatticeBasis> {
    LatticeBasis::from_generators(dim, parts.iter().flat_map(|l| l.rows().iter()))
}

pub fn magnus_directness(n: usize) -> Result<MagnusReport> {
    if n < 2 {
        return Err(Error::InvalidParameter("n must be at least 2".into()));
    }
    let ring = MagnusRing::new(n);
    let dim = ring.ambient_rank();
    let r1l = ring.ideal(&ring.evaluate(&r1(n)))?;
    let sl: Vec<LatticeBasis> = (0..n).map(|j| ring.ideal(&ring.evaluate(&s(j)))).collect::<Result<_>>()?;
    let mut ideals_closed = ring.is_ideal(&r1l)?;
    for l in &sl {
        ideals_closed &= ring.is_ideal(l)?;
    }
    let r1_s0 = sum(dim, &[&r1l, &sl[0]])?;
    let parts: Vec<&LatticeBasis> = sl[1..].iter().collect();
    let direct = sum(dim, &parts)?;
    let part_total: usize = parts.iter().map(|l| l.rank()).sum();
    let sum_equals_s0 = direct.contains_lattice(&sl[0])? && sl[0].contains_lattice(&direct)?;
    Ok(MagnusReport {
        n,
        ambient_rank: dim,
        ring_rank: ring.ring_lattice()?.rank(),
        r1_rank: r1l.rank(),
        s_ranks: sl.iter().map(LatticeBasis::rank).collect(),
        ideals_closed,
        r1_meets_s0_trivially: r1_s0.rank() == r1l.rank() + sl[0].rank(),
        sum_is_direct: direct.rank() == part_total,
        sum_equals_s0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_closure() {
        let ring = MagnusRing::new(2);
        assert_eq!(ring.ideal(&MagnusElem::zero(2)).unwrap().rank(), 0);
    }

    #[test]
    fn product_is_associative_on_generators() {
        let ring = MagnusRing::new(3);
        let (x, y) = (&ring.x, &ring.y);
        assert_eq!(x.mul(y).mul(x), x.mul(&y.mul(x)));
        assert_eq!(y.mul(y).mul(x), y.mul(&y.mul(x)));
    }

    #[test]
    fn coords_round_trip() {
        let ring = MagnusRing::new(2);
        let e = ring.x.mul(&ring.y);
        assert_eq!(MagnusElem::from_coords(2, &e.coords()), e);
    }

    #[test]
    fn n2_report() {
        let r = magnus_directness(2).unwrap();
        assert!(r.r1_meets_s0_trivially && r.sum_is_direct && r.sum_equals_s0 && r.ideals_closed, "{r:?}");
    }
}
