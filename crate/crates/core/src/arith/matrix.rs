//! Small dense matrices over the exact scalar types.

use std::fmt;

use super::quad::QuadElem;
use super::radical::RadicalElem;

/// Field operations a matrix entry must support.
pub trait Entry: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn inverse(&self) -> Option<Self>;
}

impl Entry for QuadElem {
    fn zero() -> Self {
        QuadElem::zero()
    }
    fn one() -> Self {
        QuadElem::one()
    }
    fn is_zero(&self) -> bool {
        QuadElem::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn inverse(&self) -> Option<Self> {
        QuadElem::inverse(self)
    }
}

impl Entry for RadicalElem {
    fn zero() -> Self {
        RadicalElem::base(QuadElem::zero())
    }
    fn one() -> Self {
        RadicalElem::base(QuadElem::one())
    }
    fn is_zero(&self) -> bool {
        RadicalElem::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        RadicalElem::plus(self, rhs)
    }
    fn minus(&self, rhs: &Self) -> Self {
        RadicalElem::minus(self, rhs)
    }
    fn times(&self, rhs: &Self) -> Self {
        RadicalElem::times(self, rhs)
    }
    fn inverse(&self) -> Option<Self> {
        RadicalElem::inverse(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Entry> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Option<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return None;
        }
        Some(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn diagonal(entries: &[T]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { T::zero() })
    }

    /// Block-diagonal matrix with the given square blocks.
    pub fn block_diagonal(blocks: &[Matrix<T>]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut out = Self::zeros(n, n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(off + i, off + j, b.get(i, j).clone());
                }
            }
            off += b.rows;
        }
        out
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

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<U: Entry>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matrix shape mismatch");
        Self::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = T::zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                let b = rhs.get(k, j);
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.plus(&a.times(b));
                }
            }
            acc
        })
    }

    pub fn scale(&self, c: &T) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|e| e.times(c)).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    /// `Some(c)` when the matrix equals `c·I`.
    pub fn as_scalar(&self) -> Option<T> {
        if !self.is_square() || self.rows == 0 {
            return None;
        }
        let c = self.get(0, 0).clone();
        (*self == Self::identity(self.rows).scale(&c)).then_some(c)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    /// Gauss-Jordan inverse; `None` when singular or not square.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let p_inv = a.get(col, col).inverse()?;
            a.scale_row(col, &p_inv);
            inv.scale_row(col, &p_inv);
            for r in 0..n {
                if r != col && !a.get(r, col).is_zero() {
                    let factor = a.get(r, col).clone();
                    a.add_row_multiple(r, col, &factor);
                    inv.add_row_multiple(r, col, &factor);
                }
            }
        }
        Some(inv)
    }

    pub fn determinant(&self) -> Option<T> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = T::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return Some(T::zero());
            };
            if pivot != col {
                a.swap_rows(pivot, col);
                det = T::zero().minus(&det);
            }
            let p = a.get(col, col).clone();
            det = det.times(&p);
            let p_inv = p.inverse()?;
            for r in col + 1..n {
                if !a.get(r, col).is_zero() {
                    let factor = a.get(r, col).times(&p_inv);
                    a.add_row_multiple(r, col, &factor);
                }
            }
        }
        Some(det)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, c: &T) {
        for j in 0..self.cols {
            let v = self.get(r, j).times(c);
            self.set(r, j, v);
        }
    }

    // row_r -= factor * row_src
    fn add_row_multiple(&mut self, r: usize, src: usize, factor: &T) {
        for j in 0..self.cols {
            let v = self.get(r, j).minus(&factor.times(self.get(src, j)));
            self.set(r, j, v);
        }
    }
}

impl Matrix<QuadElem> {
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| QuadElem::int(v)).collect()).collect())
            .expect("ragged integer matrix")
    }

    /// Lift into k(√g) (entries gain no radical part).
    pub fn lift(&self) -> Matrix<RadicalElem> {
        self.map(|e| RadicalElem::base(e.clone()))
    }
}

impl Matrix<RadicalElem> {
    pub fn conjugate(&self) -> Self {
        self.map(RadicalElem::conjugate)
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_determinant() {
        let a = Matrix::from_ints(&[&[2, 1], &[-1, -2]]);
        assert_eq!(a.determinant(), Some(QuadElem::int(-3)));
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        let singular = Matrix::from_ints(&[&[1, 2], &[2, 4]]);
        assert!(singular.inverse().is_none());
        assert_eq!(singular.determinant(), Some(QuadElem::zero()));
        let swap = Matrix::from_ints(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        assert_eq!(swap.determinant(), Some(QuadElem::int(-1)));
    }

    #[test]
    fn scalar_detection() {
        let a = Matrix::<QuadElem>::identity(3).scale(&QuadElem::int(7));
        assert_eq!(a.as_scalar(), Some(QuadElem::int(7)));
        assert_eq!(Matrix::from_ints(&[&[1, 0], &[0, 2]]).as_scalar(), None);
    }

    #[test]
    fn block_diagonal_layout() {
        let a = Matrix::from_ints(&[&[1, 2], &[3, 4]]);
        let b = Matrix::from_ints(&[&[5]]);
        let m = Matrix::block_diagonal(&[a, b]);
        assert_eq!(m, Matrix::from_ints(&[&[1, 2, 0], &[3, 4, 0], &[0, 0, 5]]));
    }
}
