use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Dense complex matrix stored row-major.
///
/// This is the single carrier for operators, frame synthesis matrices and
/// coefficient maps. Vectors are plain `[C64]` slices.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

/// On-disk form: `{"rows", "cols", "re", "im"}` with row-major arrays.
#[derive(Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl TryFrom<MatrixJson> for CMat {
    type Error = Error;

    fn try_from(m: MatrixJson) -> Result<Self> {
        if m.rows == 0 || m.cols == 0 {
            return Err(Error::Format("matrix dimensions must be positive".into()));
        }
        let len = m.rows * m.cols;
        if m.re.len() != len || m.im.len() != len {
            return Err(Error::Format(format!(
                "expected {len} entries for a {}x{} matrix, got re={} im={}",
                m.rows,
                m.cols,
                m.re.len(),
                m.im.len()
            )));
        }
        let data: Vec<C64> = m.re.iter().zip(&m.im).map(|(&re, &im)| C64::new(re, im)).collect();
        let mat = CMat { rows: m.rows, cols: m.cols, data };
        if !mat.is_finite() {
            return Err(Error::Format("matrix contains NaN or Inf".into()));
        }
        Ok(mat)
    }
}

impl From<CMat> for MatrixJson {
    fn from(m: CMat) -> Self {
        MatrixJson {
            rows: m.rows,
            cols: m.cols,
            re: m.data.iter().map(|z| z.re).collect(),
            im: m.data.iter().map(|z| z.im).collect(),
        }
    }
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMat { rows, cols, data }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(CMat { rows, cols, data })
    }

    /// Real matrix from nested rows. Panics on ragged input; meant for tests and examples.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Self::from_fn(r, c, |i, j| {
            assert_eq!(rows[i].len(), c, "ragged rows");
            C64::new(rows[i][j], 0.0)
        })
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<C64>]) -> Result<Self> {
        if let Some(bad) = columns.iter().find(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch(format!(
                "column of length {} in a matrix with {rows} rows",
                bad.len()
            )));
        }
        Ok(Self::from_fn(rows, columns.len(), |i, j| columns[j][i]))
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

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn col(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_col(&mut self, j: usize, v: &[C64]) {
        for (i, &z) in v.iter().enumerate() {
            self[(i, j)] = z;
        }
    }

    /// Submatrix made of the listed columns, in the given order.
    pub fn select_cols(&self, idx: &[usize]) -> CMat {
        CMat::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])])
    }

    /// Submatrix made of the listed rows, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> CMat {
        CMat::from_fn(idx.len(), self.cols, |i, j| self[(idx[i], j)])
    }

    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: f64) -> CMat {
        self.map(|z| z * s)
    }

    pub fn scale_c(&self, s: C64) -> CMat {
        self.map(|z| z * s)
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> CMat {
        CMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| f(z)).collect() }
    }

    /// `(A + Aᴴ) / 2`.
    pub fn hermitian_part(&self) -> CMat {
        assert!(self.is_square(), "hermitian_part of a non-square matrix");
        CMat::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn matmul(&self, rhs: &CMat) -> Result<CMat> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(self.mul_unchecked(rhs))
    }

    fn mul_unchecked(&self, rhs: &CMat) -> CMat {
        let mut out = CMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against a {}x{} matrix",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter().zip(v).map(|(&a, &b)| a * b).sum()
            })
            .collect())
    }

    /// `Aᴴ v` without materialising the adjoint.
    pub fn adjoint_mul_vec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against the adjoint of a {}x{} matrix",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        let mut out = vec![ZERO; self.cols];
        for (i, &vi) in v.iter().enumerate() {
            for (j, o) in out.iter_mut().enumerate() {
                *o += self.data[i * self.cols + j].conj() * vi;
            }
        }
        Ok(out)
    }

    fn check_same_shape(&self, other: &CMat, op: &str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{op} of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &CMat) -> Result<CMat> {
        self.check_same_shape(other, "sum")?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &CMat) -> Result<CMat> {
        self.check_same_shape(other, "difference")?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &CMat, f: impl Fn(C64, C64) -> C64) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

// Operator impls panic on shape mismatch; fallible callers use `matmul`/`try_add`/`try_sub`.
impl Mul for &CMat {
    type Output = CMat;

    fn mul(self, rhs: &CMat) -> CMat {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        self.mul_unchecked(rhs)
    }
}

impl Add for &CMat {
    type Output = CMat;

    fn add(self, rhs: &CMat) -> CMat {
        self.try_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl Sub for &CMat {
    type Output = CMat;

    fn sub(self, rhs: &CMat) -> CMat {
        self.try_sub(rhs).expect("matrix difference shape mismatch")
    }
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// `⟨x, y⟩ = yᴴx`, linear in the first argument.
pub fn inner(x: &[C64], y: &[C64]) -> C64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(&a, &b)| a * b.conj()).sum()
}

pub fn norm_sq(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum()
}

pub fn norm(x: &[C64]) -> f64 {
    norm_sq(x).sqrt()
}

pub fn vec_sub(x: &[C64], y: &[C64]) -> Vec<C64> {
    x.iter().zip(y).map(|(&a, &b)| a - b).collect()
}

pub fn vec_add(x: &[C64], y: &[C64]) -> Vec<C64> {
    x.iter().zip(y).map(|(&a, &b)| a + b).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape_is_row_major_re_im() {
        let m = CMat::from_fn(2, 3, |i, j| C64::new((3 * i + j) as f64, -(i as f64)));
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"rows":2,"cols":3,"re":[0.0,1.0,2.0,3.0,4.0,5.0],"im":[-0.0,-0.0,-0.0,-1.0,-1.0,-1.0]}"#);
        let back: CMat = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn json_rejects_bad_lengths() {
        let bad = r#"{"rows":2,"cols":2,"re":[1,2,3],"im":[0,0,0,0]}"#;
        assert!(serde_json::from_str::<CMat>(bad).is_err());
    }

    #[test]
    fn inner_product_is_linear_in_first_argument() {
        let x = [C64::new(1.0, 2.0), C64::new(0.0, -1.0)];
        let y = [C64::new(3.0, 0.0), C64::new(1.0, 1.0)];
        let s = C64::new(0.5, -2.0);
        let sx: Vec<C64> = x.iter().map(|&z| z * s).collect();
        let lhs = inner(&sx, &y);
        let rhs = s * inner(&x, &y);
        assert!((lhs - rhs).norm() < 1e-14);
        assert!((inner(&x, &x).re - norm_sq(&x)).abs() < 1e-14);
    }

    #[test]
    fn product_matches_hand_computation() {
        let a = CMat::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let b = CMat::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(&a * &b, CMat::from_real_rows(&[&[2.0, 1.0], &[4.0, 3.0]]));
        assert!(a.matmul(&CMat::zeros(3, 1)).is_err());
    }
}
