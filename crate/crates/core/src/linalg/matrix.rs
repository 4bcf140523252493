use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::ring::{Integers, PolyRing, PrimeField, Ring};
use crate::error::{Error, Result};

/// Dense row-major matrix over a coefficient ring.
#[derive(Clone, PartialEq)]
pub struct Matrix<R: Ring> {
    ring: R,
    rows: usize,
    cols: usize,
    data: Vec<R::Elem>,
}

pub type IntMatrix = Matrix<Integers>;

impl<R: Ring> Matrix<R> {
    pub fn new(ring: R, rows: usize, cols: usize, data: Vec<R::Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { ring, rows, cols, data })
    }

    pub fn zeros(ring: R, rows: usize, cols: usize) -> Self {
        let data = vec![ring.zero(); rows * cols];
        Matrix { ring, rows, cols, data }
    }

    pub fn identity(ring: R, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = m.ring.one();
        }
        m
    }

    pub fn from_fn(ring: R, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { ring, rows, cols, data }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Zero-based entry access.
    pub fn get(&self, i: usize, j: usize) -> &R::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[R::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[R::Elem] {
        &self.data
    }

    pub fn into_entries(self) -> Vec<R::Elem> {
        self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| self.ring.is_zero(e))
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!("{} vs {}", self.ring.tag(), other.ring.tag())));
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| self.ring.add(a, b)).collect();
        Ok(Matrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| self.ring.sub(a, b)).collect();
        Ok(Matrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!("{} vs {}", self.ring.tag(), other.ring.tag())));
        }
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let r = &self.ring;
        let mut out = Matrix::zeros(r.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if r.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k * other.cols + j];
                    if r.is_zero(b) {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = r.add(&out.data[idx], &r.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let data = self.data.iter().map(|a| self.ring.mul(c, a)).collect();
        Matrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn pow(&self, mut k: u32) -> Self {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut acc = Matrix::identity(self.ring.clone(), self.rows);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.ring.clone(), self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> R::Elem {
        let n = self.rows.min(self.cols);
        (0..n).fold(self.ring.zero(), |acc, i| self.ring.add(&acc, self.get(i, i)))
    }

    /// Entry-wise image under a ring map.
    pub fn map_ring<S: Ring>(&self, target: S, f: impl Fn(&R::Elem) -> S::Elem) -> Matrix<S> {
        let data = self.data.iter().map(f).collect();
        Matrix { ring: target, rows: self.rows, cols: self.cols, data }
    }

    /// Block-diagonal sum of square blocks.
    pub fn block_diag(ring: R, blocks: &[Self]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(ring, n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Square diagonal block `index` of a block-diagonal matrix whose block
    /// sizes are `sizes`.
    pub fn diagonal_block(&self, sizes: &[usize], index: usize) -> Self {
        let start: usize = sizes[..index].iter().sum();
        let n = sizes[index];
        Matrix::from_fn(self.ring.clone(), n, n, |i, j| self.get(start + i, start + j).clone())
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let r = &self.ring;
        Matrix::from_fn(r.clone(), self.rows * other.rows, self.cols * other.cols, |i, j| {
            r.mul(self.get(i / other.rows, j / other.cols), other.get(i % other.rows, j % other.cols))
        })
    }
}

impl<R: Ring> fmt::Debug for Matrix<R>
where
    R::Elem: fmt::Debug,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[{}]{{", self.ring.tag())?;
        for i in 0..self.rows {
            write!(f, "{:?}", self.row(i))?;
        }
        write!(f, "}}")
    }
}

impl<R: Ring> Add for &Matrix<R> {
    type Output = Matrix<R>;
    fn add(self, rhs: Self) -> Matrix<R> {
        self.try_add(rhs).expect("matrix addition")
    }
}

impl<R: Ring> Sub for &Matrix<R> {
    type Output = Matrix<R>;
    fn sub(self, rhs: Self) -> Matrix<R> {
        self.try_sub(rhs).expect("matrix subtraction")
    }
}

impl<R: Ring> Mul for &Matrix<R> {
    type Output = Matrix<R>;
    fn mul(self, rhs: Self) -> Matrix<R> {
        self.try_mul(rhs).expect("matrix product")
    }
}

impl<R: Ring> Neg for &Matrix<R> {
    type Output = Matrix<R>;
    fn neg(self) -> Matrix<R> {
        self.map_ring(self.ring.clone(), |a| self.ring.neg(a))
    }
}

impl IntMatrix {
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        let data = rows.iter().flat_map(|row| row.iter().cloned().map(Into::into)).collect();
        Matrix::new(Integers, r, c, data)
    }

    /// Builds from a fixed-size array literal; panics on ragged input.
    pub fn from_i64<const C: usize>(rows: &[[i64; C]]) -> Self {
        let data = rows.iter().flat_map(|row| row.iter().map(|&v| BigInt::from(v))).collect();
        Matrix { ring: Integers, rows: rows.len(), cols: C, data }
    }

    pub fn int_zeros(rows: usize, cols: usize) -> Self {
        Matrix::zeros(Integers, rows, cols)
    }

    pub fn int_identity(n: usize) -> Self {
        Matrix::identity(Integers, n)
    }

    /// Elementary matrix `E_{ij}` with one-based indices taken modulo `n`.
    pub fn unit(n: usize, i: i64, j: i64) -> Self {
        let mut m = IntMatrix::int_zeros(n, n);
        let (i, j) = (wrap(i, n), wrap(j, n));
        m.set(i, j, BigInt::one());
        m
    }

    /// The cyclic shift `X = E_21 + E_32 + ... + E_{n,n-1} + E_1n`.
    pub fn shift(n: usize) -> Self {
        let mut m = IntMatrix::int_zeros(n, n);
        for j in 0..n {
            m.set((j + 1) % n, j, BigInt::one());
        }
        m
    }

    pub fn scalar(n: usize, c: impl Into<BigInt>) -> Self {
        IntMatrix::int_identity(n).scale(&c.into())
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&BigInt::from(c))
    }

    pub fn reduce_mod(&self, field: PrimeField) -> Matrix<PrimeField> {
        self.map_ring(field, |a| field.from_int(a))
    }

    pub fn to_poly(&self, ring: PolyRing) -> Matrix<PolyRing> {
        self.map_ring(ring, |a| ring.from_int(a))
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows()).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn max_abs(&self) -> BigInt {
        self.data.iter().map(|a| a.abs()).max().unwrap_or_default()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|a| !a.is_negative())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = self.get(i, j);
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }
}

fn wrap(i: i64, n: usize) -> usize {
    (i - 1).rem_euclid(n as i64) as usize
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_has_order_n() {
        for n in 2..7 {
            let x = IntMatrix::shift(n);
            assert!(x.pow(n as u32).is_identity());
            assert!(!x.pow(n as u32 - 1).is_identity());
        }
    }

    #[test]
    fn unit_indices_wrap() {
        let n = 4;
        assert_eq!(IntMatrix::unit(n, 5, 0), IntMatrix::unit(n, 1, 4));
        // X e_1 = e_2
        let x = IntMatrix::shift(n);
        assert_eq!(&(&x * &IntMatrix::unit(n, 1, 1)) * &x.transpose(), IntMatrix::unit(n, 2, 2));
    }

    #[test]
    fn shape_errors() {
        let a = IntMatrix::int_zeros(2, 3);
        let b = IntMatrix::int_zeros(2, 3);
        assert!(a.try_mul(&b).is_err());
        assert!(a.try_add(&IntMatrix::int_zeros(3, 2)).is_err());
        assert!(IntMatrix::from_rows(&[vec![1, 2], vec![3]]).is_err());
    }

    #[test]
    fn kron_and_blocks() {
        let x = IntMatrix::shift(2);
        let k = IntMatrix::int_identity(2).kron(&x);
        let d = Matrix::block_diag(Integers, &[x.clone(), x.clone()]);
        assert_eq!(k, d);
        assert_eq!(d.diagonal_block(&[2, 2], 1), x);
    }
}
