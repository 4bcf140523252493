//! Conditions on the index set `H`, the rewriting into the normal form
//! `x^a y^b x^c y^d x^e`, and the central idempotent of the ring with all
//! `s_m` imposed but `r_{2,n}` dropped.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::r2;
use crate::error::{Error, Result};
use crate::gentest::{flatten_blocks, is_generating_with, Target};
use crate::linalg::{Integers, IntMatrix, LatticeBasis, Matrix};
use crate::words::{Letter, NcPoly, Word};

/// Sums congruent to zero are skipped when checking the sum condition.
pub const ZERO_SUM_CONVENTION: &str = "sums congruent to 0 mod n are excluded from condition (a)";

pub(crate) fn validate_h(n: usize, h: &BTreeSet<usize>) -> Result<()> {
    if h.is_empty() {
        return Err(Error::Precondition("H is empty".into()));
    }
    if h.iter().any(|&v| v == 0 || v >= n) {
        return Err(Error::Precondition(format!("H must lie in 1..{}", n - 1)));
    }
    if h.len() == n - 1 {
        return Err(Error::Precondition("H is all of 1..n-1".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum HCheck {
    Valid { convention: String },
    ViolatesSums { a: i64, b: i64, sum: usize, convention: String },
    ViolatesQuadruples { h: usize, k: usize, l: usize, value: usize, convention: String },
}

impl HCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, HCheck::Valid { .. })
    }
}

pub fn check_h_conditions(n: usize, h: &BTreeSet<usize>) -> Result<HCheck> {
    validate_h(n, h)?;
    let conv = ZERO_SUM_CONVENTION.to_string();
    let ni = n as i64;
    let signed: Vec<i64> = h.iter().flat_map(|&v| [v as i64, -(v as i64)]).collect();
    for &a in &signed {
        for &b in &signed {
            let sum = (a + b).rem_euclid(ni) as usize;
            if sum != 0 && h.contains(&sum) {
                return Ok(HCheck::ViolatesSums { a, b, sum, convention: conv });
            }
        }
    }
    for &hh in h {
        for &k in h {
            for &l in h {
                let value = (k as i64 + l as i64 - hh as i64).rem_euclid(ni) as usize;
                if h.contains(&value) && hh != k && hh != l {
                    return Ok(HCheck::ViolatesQuadruples { h: hh, k, l, value, convention: conv });
                }
            }
        }
    }
    Ok(HCheck::Valid { convention: conv })
}

/// One summand: run-length word as alternating `x` exponents and `y` exponents,
/// `x^{a0} y^{b1} x^{a1} ... y^{bk} x^{ak}` with every `b >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Shape {
    xs: Vec<usize>,
    ys: Vec<usize>,
}

impl Shape {
    fn from_word(w: &Word, n: usize) -> Shape {
        let mut xs = vec![0];
        let mut ys = Vec::new();
        for (l, k) in w.runs() {
            match l {
                Letter::X => *xs.last_mut().unwrap() += k,
                Letter::Y => {
                    ys.push(k);
                    xs.push(0);
                }
            }
        }
        Shape { xs, ys }.normalized(n)
    }

    /// Reduces `x` exponents mod `n` and merges `y` blocks that become adjacent.
    fn normalized(mut self, n: usize) -> Shape {
        for a in &mut self.xs {
            *a %= n;
        }
        let mut i = 1;
        while i < self.xs.len() - 1 {
            if self.xs[i] == 0 {
                self.xs.remove(i);
                let b = self.ys.remove(i);
                self.ys[i - 1] += b;
            } else {
                i += 1;
            }
        }
        for b in &mut self.ys {
            *b = (*b).min(2);
        }
        self
    }

    fn to_word(&self) -> Word {
        let mut runs = vec![(Letter::X, self.xs[0])];
        for (b, a) in self.ys.iter().zip(&self.xs[1..]) {
            runs.push((Letter::Y, *b));
            runs.push((Letter::X, *a));
        }
        Word::from_runs(&runs)
    }
}

/// Rewrites a word of the ring `S(H)` into a combination of words
/// `x^a y^b x^c y^d x^e` with exponents `a, c, e < n` and `b, d <= 2`.
pub fn rewrite_normal_form(w: &Word, n: usize, h: &BTreeSet<usize>) -> Result<NcPoly> {
    if !check_h_conditions(n, h)?.is_valid() {
        return Err(Error::Precondition("H violates the conditions".into()));
    }
    if h.iter().any(|&v| h.contains(&(n - v))) {
        return Err(Error::Precondition("the rule y^3 = y^2 needs H and -H disjoint".into()));
    }
    let mut pending: BTreeMap<Shape, BigInt> = BTreeMap::new();
    pending.insert(Shape::from_word(w, n), BigInt::from(1));
    let mut done: BTreeMap<Shape, BigInt> = BTreeMap::new();
    let mut steps = 0usize;
    while let Some((s, c)) = pending.pop_first() {
        steps += 1;
        if steps > 1_000_000 {
            return Err(Error::ResourceCap("normal form rewriting did not terminate".into()));
        }
        if c.is_zero() {
            continue;
        }
        let push = |t: Shape, c: BigInt, pending: &mut BTreeMap<Shape, BigInt>| {
            *pending.entry(t.normalized(n)).or_default() += c;
        };
        // y x^j y with j outside H vanishes
        if s.xs.iter().take(s.ys.len()).skip(1).any(|a| !h.contains(a)) {
            continue;
        }
        if s.ys.len() < 3 && !(s.ys.len() == 2 && s.ys == [2, 2]) {
            *done.entry(s).or_default() += c;
            continue;
        }
        if s.ys.len() == 2 {
            // y^2 x^k y^2 = 0
            continue;
        }
        // three or more y blocks: look at the first three
        let (b0, b1) = (s.ys[0], s.ys[1]);
        if b1 == 2 {
            // y x^k y^2 = y x^k y - y^2 x^k y
            let mut t = s.clone();
            t.ys[1] = 1;
            push(t.clone(), c.clone(), &mut pending);
            t.ys[0] = b0 + 1;
            push(t, -c, &mut pending);
        } else {
            // y x^l y x^k y = y^2 x^l y x^k
            let mut t = s.clone();
            t.ys[0] = b0 + 1;
            t.ys[2] -= 1;
            if t.ys[2] == 0 {
                t.ys.remove(2);
                let a = t.xs.remove(3);
                t.xs[2] += a;
            }
            push(t, c, &mut pending);
        }
    }
    Ok(NcPoly::from_terms(done.into_iter().map(|(s, c)| (s.to_word(), c)), true))
}

/// The `9 n^3` candidate words `x^a y^b x^c y^d x^e`, duplicates removed.
pub fn normal_form_spanning_set(n: usize) -> Vec<Word> {
    let mut out = BTreeSet::new();
    for a in 0..n {
        for c in 0..n {
            for e in 0..n {
                for b in 0..3 {
                    for d in 0..3 {
                        let runs = [(Letter::X, a), (Letter::Y, b), (Letter::X, c), (Letter::Y, d), (Letter::X, e)];
                        out.insert(Word::from_runs(&runs));
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdempotentReport {
    pub n: usize,
    pub idempotent: bool,
    pub central: bool,
    pub model_rank: usize,
    pub model_generates: bool,
}

/// In the model `x -> (X, X)`, `y -> (Y, 0)` of `M_n(Z)` plus the circulants,
/// checks that `-r_{2,n}` is a central idempotent and that the model is all
/// of `M_n(Z) + Z[X]`.
pub fn central_idempotent_check(n: usize) -> Result<IdempotentReport> {
    if n < 2 {
        return Err(Error::InvalidParameter("n must be at least 2".into()));
    }
    let x = IntMatrix::shift(n);
    let a = Matrix::block_diag(Integers, &[x.clone(), x.clone()]);
    let b = Matrix::block_diag(Integers, &[IntMatrix::unit(n, 1, 1), IntMatrix::int_zeros(n, n)]);
    let r = r2(n).scale(&BigInt::from(-1)).evaluate(&a, &b)?;
    let idempotent = &r * &r == r;
    let central = &r * &a == &a * &r && &r * &b == &b * &r;
    let sizes = vec![n, n];
    let zero = IntMatrix::int_zeros(n, n);
    let mut gens = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            gens.push(flatten_blocks(&Matrix::block_diag(Integers, &[IntMatrix::unit(n, i as i64, j as i64), zero.clone()]), &sizes));
        }
    }
    for k in 0..n {
        gens.push(flatten_blocks(&Matrix::block_diag(Integers, &[zero.clone(), x.pow(k as u32)]), &sizes));
    }
    let basis = LatticeBasis::from_generators(2 * n * n, &gens)?;
    let model_rank = basis.rank();
    let rep = is_generating_with(&a, &b, &Target::Lattice { sizes, basis }, true)?;
    Ok(IdempotentReport { n, idempotent, central, model_rank, model_generates: rep.generates() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn seven_one_two_fails_sums() {
        let r = check_h_conditions(7, &set(&[1, 2])).unwrap();
        assert!(matches!(r, HCheck::ViolatesSums { sum: 2, .. }));
    }

    #[test]
    fn five_one_four_valid_under_convention() {
        assert!(check_h_conditions(5, &set(&[1, 4])).unwrap().is_valid());
    }

    #[test]
    fn full_h_rejected() {
        assert!(check_h_conditions(4, &set(&[1, 2, 3])).is_err());
        assert!(check_h_conditions(4, &set(&[])).is_err());
    }

    #[test]
    fn rewriting_lands_in_normal_form() {
        let h = set(&[1]);
        let allowed = normal_form_spanning_set(5);
        for w in crate::words::enumerate_words(7, true) {
            let nf = rewrite_normal_form(&w, 5, &h).unwrap();
            assert!(nf.terms().all(|(v, _)| allowed.contains(v)), "{w} -> {nf}");
        }
        assert!(rewrite_normal_form(&Word::y(), 5, &set(&[1, 4])).is_err());
    }

    #[test]
    fn spanning_set_bound() {
        for n in 2..6 {
            assert!(normal_form_spanning_set(n).len() <= 9 * n * n * n);
        }
    }

    #[test]
    fn central_idempotent() {
        for n in 2..5 {
            let r = central_idempotent_check(n).unwrap();
            assert!(r.idempotent && r.central && r.model_generates);
            assert_eq!(r.model_rank, n * n + n);
        }
    }
}
