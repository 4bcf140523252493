//! Smith normal form divisor chains.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::hnf::hnf;
use super::matrix::IntMatrix;

/// Elementary divisors `d_1 | d_2 | ... | d_r` of an integer matrix, where `r`
/// is its rank.
pub fn snf(m: &IntMatrix) -> Vec<BigInt> {
    // the HNF rows have the same row lattice and full row rank
    let h = hnf(m).basis;
    snf_rows(h.rows().to_vec(), m.cols())
}

pub(crate) fn snf_rows(mut a: Vec<Vec<BigInt>>, cols: usize) -> Vec<BigInt> {
    let rows = a.len();
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            clear_cross(&mut a, t, cols);
            let piv = a[t][t].clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&piv)));
            match bad {
                Some(i) => {
                    let ri = a[i].clone();
                    for (x, y) in a[t].iter_mut().zip(&ri) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

/// Zeroes row `t` and column `t` outside the diagonal with unimodular steps.
fn clear_cross(a: &mut [Vec<BigInt>], t: usize, cols: usize) {
    let rows = a.len();
    loop {
        for i in t + 1..rows {
            if a[i][t].is_zero() {
                continue;
            }
            if a[i][t].is_multiple_of(&a[t][t]) {
                let q = &a[i][t] / &a[t][t];
                let rt = a[t].clone();
                for (x, y) in a[i].iter_mut().zip(&rt) {
                    *x -= &q * y;
                }
                continue;
            }
            let e = a[t][t].extended_gcd(&a[i][t]);
            let (ag, bg) = (&a[t][t] / &e.gcd, &a[i][t] / &e.gcd);
            let (rt, ri) = (a[t].clone(), a[i].clone());
            a[t] = rt.iter().zip(&ri).map(|(x, y)| &e.x * x + &e.y * y).collect();
            a[i] = rt.iter().zip(&ri).map(|(x, y)| &ag * y - &bg * x).collect();
        }
        let mut touched = false;
        for j in t + 1..cols {
            if a[t][j].is_zero() {
                continue;
            }
            if a[t][j].is_multiple_of(&a[t][t]) {
                let q = &a[t][j] / &a[t][t];
                for row in a.iter_mut() {
                    let v = &q * &row[t];
                    row[j] -= v;
                }
                continue;
            }
            touched = true;
            let e = a[t][t].extended_gcd(&a[t][j]);
            let (ag, bg) = (&a[t][t] / &e.gcd, &a[t][j] / &e.gcd);
            for row in a.iter_mut() {
                let (x, y) = (row[t].clone(), row[j].clone());
                row[t] = &e.x * &x + &e.y * &y;
                row[j] = &ag * &y - &bg * &x;
            }
        }
        if !touched {
            return;
        }
    }
}

/// Product of the divisors, i.e. the index of a full-rank row lattice.
pub fn divisor_product(d: &[BigInt]) -> BigInt {
    d.iter().fold(BigInt::one(), |acc, x| acc * x)
}
