//! Determinants, modular rank and exact inverses.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::IntMatrix;
#[cfg(test)]
use super::matrix::Matrix;
#[cfg(test)]
use super::ring::{PrimeField, Ring};

/// Fraction-free (Bareiss) determinant of a square integer matrix.
pub fn det(m: &IntMatrix) -> BigInt {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = !sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

#[cfg(test)]
/// Rank of a matrix over a prime field.
pub fn rank_mod_p(m: &Matrix<PrimeField>) -> usize {
    let f = *m.ring();
    let rows: Vec<Vec<u64>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    rank_rows_mod_p(f, rows)
}

#[cfg(test)]
pub fn rank_rows_mod_p(f: PrimeField, mut a: Vec<Vec<u64>>) -> usize {
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, p);
        let inv = f.inv(a[r][c]).expect("nonzero pivot");
        let piv: Vec<u64> = a[r].iter().map(|x| f.mul(x, &inv)).collect();
        for row in a.iter_mut().skip(r + 1) {
            let k = row[c];
            if k != 0 {
                for (x, y) in row.iter_mut().zip(&piv) {
                    *x = f.sub(x, &f.mul(&k, y));
                }
            }
        }
        a[r] = piv;
        r += 1;
    }
    r
}

/// Exact inverse over Q, or `None` when singular.
pub fn inverse_rational(m: &IntMatrix) -> Option<Vec<Vec<BigRational>>> {
    assert!(m.is_square());
    let n = m.rows();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = m.row(i).iter().map(|x| BigRational::from_integer(x.clone())).collect();
            row.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[c].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != c && !row[c].is_zero() {
                let k = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &k * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Exact integer inverse, when it exists.
pub fn inverse_int(m: &IntMatrix) -> Option<IntMatrix> {
    let inv = inverse_rational(m)?;
    if inv.iter().flatten().any(|x| !x.is_integer()) {
        return None;
    }
    let rows: Vec<Vec<BigInt>> = inv.iter().map(|r| r.iter().map(|x| x.to_integer()).collect()).collect();
    IntMatrix::from_rows(&rows).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_small() {
        assert_eq!(det(&IntMatrix::from_i64(&[[1, 2], [3, 4]])), BigInt::from(-2));
        assert_eq!(det(&IntMatrix::from_i64(&[[0, 1, 0], [1, 0, 0], [0, 0, 5]])), BigInt::from(-5));
        assert_eq!(det(&IntMatrix::from_i64(&[[2, 4], [1, 2]])), BigInt::zero());
        assert_eq!(det(&IntMatrix::shift(5)), BigInt::one());
    }

    #[test]
    fn modular_rank() {
        let f = PrimeField::new(2).unwrap();
        let m = IntMatrix::from_i64(&[[1, 1], [1, 3]]);
        assert_eq!(rank_mod_p(&m.reduce_mod(f)), 1);
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(rank_mod_p(&m.reduce_mod(f3)), 2);
    }

    #[test]
    fn integer_inverse() {
        let u = IntMatrix::from_i64(&[[2, 1], [1, 1]]);
        let v = inverse_int(&u).unwrap();
        assert!((&u * &v).is_identity());
        assert!(inverse_int(&IntMatrix::from_i64(&[[2, 0], [0, 1]])).is_none());
    }
}
