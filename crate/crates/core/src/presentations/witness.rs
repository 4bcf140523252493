//! Matrix rings over `Z[t, 1/t]` satisfying all but some of the relators,
//! with growing additive rank.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{r1, r2, s};
use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, LaurentPoly, Matrix, PolyRing, SparseLattice};
use crate::words::{NcPoly, Word};

type PolyMatrix = Matrix<PolyRing>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Elim1 { n: usize },
    Elim2 { n: usize },
    Elim7 { n: usize, h: usize },
    Elim8 { n: usize, h: usize },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Elim1 { n } => write!(f, "elim1({n})"),
            Witness::Elim2 { n } => write!(f, "elim2({n})"),
            Witness::Elim7 { n, h } => write!(f, "elim7({n},{h})"),
            Witness::Elim8 { n, h } => write!(f, "elim8({n},{h})"),
        }
    }
}

impl FromStr for Witness {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad witness {s}"));
        let (name, rest) = s.trim().split_once('(').ok_or_else(bad)?;
        let args: Vec<usize> = rest
            .strip_suffix(')')
            .ok_or_else(bad)?
            .split(',')
            .map(|a| a.trim().parse().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        match (name, args.as_slice()) {
            ("elim1", [n]) => Ok(Witness::Elim1 { n: *n }),
            ("elim2", [n]) => Ok(Witness::Elim2 { n: *n }),
            ("elim7", [n, h]) => Ok(Witness::Elim7 { n: *n, h: *h }),
            ("elim8", [n, h]) => Ok(Witness::Elim8 { n: *n, h: *h }),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessAudit {
    pub identity: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub witness: String,
    pub retained: Vec<String>,
    pub omitted: Vec<String>,
    pub retained_vanish: bool,
    pub omitted_nonzero: bool,
    pub ranks: Vec<(usize, usize)>,
    pub strictly_increasing: bool,
    pub audits: Vec<WitnessAudit>,
}

fn ring() -> PolyRing {
    PolyRing::laurent()
}

fn lift(m: &IntMatrix) -> PolyMatrix {
    m.to_poly(ring())
}

fn mono(c: i64, e: i64) -> LaurentPoly {
    LaurentPoly::monomial(c, e)
}

fn scaled(m: &IntMatrix, p: LaurentPoly) -> PolyMatrix {
    lift(m).scale(&p)
}

fn e(n: usize, i: i64, j: i64) -> IntMatrix {
    IntMatrix::unit(n, i, j)
}

/// `X^k` for any integer `k`.
fn xpow(n: usize, k: i64) -> PolyMatrix {
    lift(&IntMatrix::shift(n).pow(k.rem_euclid(n as i64) as u32))
}

fn named(label: String, p: NcPoly) -> (String, NcPoly) {
    (label, p)
}

struct Model {
    a: PolyMatrix,
    b: PolyMatrix,
    retained: Vec<(String, NcPoly)>,
    omitted: Vec<(String, NcPoly)>,
}

fn monomials(n: usize, skip: &[usize]) -> (Vec<(String, NcPoly)>, Vec<(String, NcPoly)>) {
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for j in 1..n {
        let item = named(format!("s_{j}"), s(j));
        if skip.contains(&j) {
            dropped.push(item);
        } else {
            kept.push(item);
        }
    }
    (kept, dropped)
}

fn model(w: Witness) -> Result<Model> {
    let (n, h) = match w {
        Witness::Elim1 { n } | Witness::Elim2 { n } => (n, 0),
        Witness::Elim7 { n, h } => {
            if h == 0 || h >= n {
                return Err(Error::InvalidParameter(format!("elim7 needs 1 <= h <= n-1, got h = {h}")));
            }
            (n, h)
        }
        Witness::Elim8 { n, h } => {
            if h == 0 || 2 * h >= n {
                return Err(Error::InvalidParameter(format!("elim8 needs 1 <= h < 2h <= n-1, got h = {h}")));
            }
            (n, h)
        }
    };
    if n < 2 {
        return Err(Error::InvalidParameter("n must be at least 2".into()));
    }
    let x = IntMatrix::shift(n);
    let hi = h as i64;
    let r1n = named(format!("r_1,{n}"), r1(n));
    let r2n = named(format!("r_2,{n}"), r2(n));
    Ok(match w {
        Witness::Elim1 { .. } => {
            let (mut retained, _) = monomials(n, &[]);
            retained.insert(0, r2n);
            Model { a: scaled(&x, mono(1, 1)), b: scaled(&e(n, 1, 1), mono(1, -(n as i64))), retained, omitted: vec![r1n] }
        }
        Witness::Elim2 { .. } => {
            let (mut retained, _) = monomials(n, &[]);
            retained.insert(0, r1n);
            Model { a: lift(&x), b: scaled(&e(n, 1, 1), mono(1, 1)), retained, omitted: vec![r2n] }
        }
        Witness::Elim7 { .. } => {
            let (mut retained, omitted) = monomials(n, &[h, n - h]);
            retained.splice(0..0, [r1n, r2n]);
            let b = &scaled(&e(n, 1, 1), mono(1, 1)) + &scaled(&e(n, 1 + hi, 1 + hi), LaurentPoly::from_terms([(0, 1.into()), (1, (-1).into())]));
            Model { a: lift(&x), b, retained, omitted }
        }
        Witness::Elim8 { .. } => {
            let (mut retained, omitted) = monomials(n, &[h, 2 * h]);
            retained.splice(0..0, [r1n, r2n]);
            let b = &(&lift(&e(n, 1, 1)) + &scaled(&e(n, 1, 1 + hi), mono(1, 1))) - &scaled(&e(n, 1 - hi, 1), mono(1, 1));
            Model { a: lift(&x), b, retained, omitted }
        }
    })
}

fn flatten(m: &PolyMatrix) -> BTreeMap<(usize, usize, i64), BigInt> {
    let mut v = BTreeMap::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            for (ex, c) in m.get(i, j).terms() {
                v.insert((i, j, ex), c.clone());
            }
        }
    }
    v
}

/// Ranks of the spans of the words of length at most each cutoff, unital.
fn span_ranks(a: &PolyMatrix, b: &PolyMatrix, cutoffs: &[usize]) -> Vec<(usize, usize)> {
    let max = cutoffs.iter().copied().max().unwrap_or(0);
    let mut lattice = SparseLattice::new();
    let id = Matrix::identity(ring(), a.rows());
    lattice.insert(flatten(&id));
    let mut level = vec![id];
    let mut ranks = BTreeMap::new();
    ranks.insert(0, lattice.rank());
    for len in 1..=max {
        let mut next = Vec::new();
        for w in &level {
            for g in [a, b] {
                let v = g * w;
                if lattice.insert(flatten(&v)) {
                    next.push(v);
                }
            }
        }
        ranks.insert(len, lattice.rank());
        level = next;
    }
    cutoffs.iter().map(|&c| (c, ranks[&c])).collect()
}

fn word(s: &str) -> Word {
    s.parse().expect("static word")
}

/// `x^k` as a word, with negative powers written through `x^n = 1`.
fn xw(n: usize, k: i64) -> Word {
    Word::x_pow(k.rem_euclid(n as i64) as usize)
}

fn audits(w: Witness, m: &Model) -> Result<Vec<WitnessAudit>> {
    let r = ring();
    let t = |c: i64, ex: i64| mono(c, ex);
    let mut out = Vec::new();
    let mut push = |identity: String, holds: bool| out.push(WitnessAudit { identity, holds });
    match w {
        Witness::Elim1 { n } => {
            let v = Word::x_pow(n).evaluate(&m.a, &m.b)?;
            push(format!("x^{n} = t^{n} I"), v == Matrix::identity(r, n).scale(&t(1, n as i64)));
        }
        Witness::Elim2 { n } => {
            let mut p = NcPoly::zero(true);
            for i in 0..n as i64 {
                p.add_term(xw(n, -i).concat(&word("y")).concat(&xw(n, i)), 1.into());
            }
            let v = p.evaluate(&m.a, &m.b)?;
            push("sum_i x^{-i} y x^i = t I".into(), v == Matrix::identity(r, n).scale(&t(1, 1)));
        }
        Witness::Elim7 { n, h } | Witness::Elim8 { n, h } => {
            let hi = h as i64;
            let ni = n as i64;
            let special: Vec<i64> = if matches!(w, Witness::Elim7 { .. }) { vec![hi, ni - hi] } else { vec![hi, 2 * hi] };
            let mut pattern = true;
            for i in 1..ni {
                let v = NcPoly::from_word(word("y").concat(&xw(n, i)).concat(&word("y")).concat(&xw(n, -i)), 1)
                    .evaluate(&m.a, &m.b)?;
                pattern &= v.is_zero() != special.contains(&i);
            }
            let list: Vec<String> = special.iter().map(|v| v.to_string()).collect();
            push(format!("y x^i y x^-i = 0 exactly for i not in {{{}}}", list.join(",")), pattern);

            let k = if matches!(w, Witness::Elim7 { .. }) { hi } else { 2 * hi };
            let core = word("y").concat(&xw(n, k)).concat(&word("y")).concat(&xw(n, -k));
            let mut p = NcPoly::zero(true);
            for i in 0..ni {
                p.add_term(xw(n, -i).concat(&core).concat(&xw(n, i)), (-1).into());
            }
            let v = p.evaluate(&m.a, &m.b)?;
            if matches!(w, Witness::Elim7 { .. }) {
                let tt1 = LaurentPoly::from_terms([(2, 1.into()), (1, (-1).into())]);
                push(format!("-sum_i x^-i (y x^{h} y x^-{h}) x^i = t(t-1) I"), v == Matrix::identity(r, n).scale(&tt1));
            } else {
                let target = xpow(n, -2 * hi).scale(&t(1, 2));
                push(format!("-sum_i x^-i (y x^{k} y x^-{k}) x^i = t^2 X^-{k}"), v == target);
                let shifted = &xpow(n, 1 + hi) * &v;
                push(format!("x^{} times that sum = t^2 X^(1-{h})", 1 + h), shifted == xpow(n, 1 - hi).scale(&t(1, 2)));
            }
        }
    }
    Ok(out)
}

pub fn witness_rank_growth(w: Witness, cutoffs: &[usize]) -> Result<WitnessReport> {
    let m = model(w)?;
    if cutoffs.is_empty() {
        return Err(Error::InvalidParameter("no cutoffs".into()));
    }
    let mut retained_vanish = true;
    for (_, p) in &m.retained {
        retained_vanish &= p.evaluate(&m.a, &m.b)?.is_zero();
    }
    let mut omitted_nonzero = true;
    for (_, p) in &m.omitted {
        omitted_nonzero &= !p.evaluate(&m.a, &m.b)?.is_zero();
    }
    let mut sorted = cutoffs.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let ranks = span_ranks(&m.a, &m.b, &sorted);
    let strictly_increasing = ranks.windows(2).all(|p| p[0].1 < p[1].1);
    Ok(WitnessReport {
        witness: w.to_string(),
        retained: m.retained.iter().map(|(l, _)| l.clone()).collect(),
        omitted: m.omitted.iter().map(|(l, _)| l.clone()).collect(),
        retained_vanish,
        omitted_nonzero,
        ranks,
        strictly_increasing,
        audits: audits(w, &m)?,
    })
}
