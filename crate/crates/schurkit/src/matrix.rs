//! Dense complex matrices, row-major.
//!
//! A minimal dense matrix type over `Complex64` with the operations the rest
//! of the crate needs: products, adjoints, block assembly/extraction, norms,
//! and the on-disk JSON format
//! `{"rows": n, "cols": m, "data": [[re, im], ...]}` (row-major). Readers
//! reject wrong-length data arrays and non-finite entries.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Errors from matrix construction and arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("data length {got} does not match {rows}x{cols} = {expected}")]
    BadDataLength {
        rows: usize,
        cols: usize,
        expected: usize,
        got: usize,
    },
    #[error("matrix entries must be finite (found NaN or infinity at index {index})")]
    NonFiniteEntry { index: usize },
    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyMatrix { rows: usize, cols: usize },
}

/// Dense complex matrix, row-major storage: `data[i * cols + j] = M[i, j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Build from raw row-major data, validating shape and finiteness.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::EmptyMatrix { rows, cols });
        }
        let expected = rows * cols;
        if data.len() != expected {
            return Err(MatrixError::BadDataLength {
                rows,
                cols,
                expected,
                got: data.len(),
            });
        }
        if let Some(index) = data
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(MatrixError::NonFiniteEntry { index });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Square diagonal matrix with the given real diagonal.
    pub fn diag_real(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    /// Build from rows of real entries (imaginary parts zero).
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        assert!(r > 0, "need at least one row");
        let c = rows[0].len();
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().map(|&x| Complex64::new(x, 0.0)));
        }
        Self::new(r, c, data).expect("finite real rows")
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Column vector from a slice.
    pub fn column_vector(entries: &[Complex64]) -> Self {
        Self::new(entries.len(), 1, entries.to_vec()).expect("finite column")
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

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Conjugate transpose M*.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let data = self.data.iter().map(|&z| z * factor).collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    pub fn add(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| a + b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| a - b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    fn check_same_shape(&self, other: &Self) -> Result<(), MatrixError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatrixError::DimensionMismatch {
                expected: format!("{}x{}", self.rows, self.cols),
                got: format!("{}x{}", other.rows, other.cols),
            });
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch {
                expected: format!("{} rows", self.cols),
                got: format!("{} rows", other.rows),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += aik * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>, MatrixError> {
        if self.cols != v.len() {
            return Err(MatrixError::DimensionMismatch {
                expected: format!("vector of length {}", self.cols),
                got: format!("length {}", v.len()),
            });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..self.cols {
                acc += self[(i, j)] * v[j];
            }
            out[i] = acc;
        }
        Ok(out)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// ‖M - M*‖_F, zero for Hermitian matrices.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = self[(i, j)] - self[(j, i)].conj();
                acc += d.norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.hermitian_defect() <= tol * self.frobenius_norm().max(1.0)
    }

    /// (M + M*)/2; requires a square matrix.
    pub fn hermitian_part(&self) -> Result<Self, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        }))
    }

    /// Assemble [[a, b], [c, d]]; block shapes must be consistent.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self, MatrixError> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(MatrixError::DimensionMismatch {
                expected: "consistent block shapes".into(),
                got: format!(
                    "a {}x{}, b {}x{}, c {}x{}, d {}x{}",
                    a.rows, a.cols, b.rows, b.cols, c.rows, c.cols, d.rows, d.cols
                ),
            });
        }
        let rows = a.rows + c.rows;
        let cols = a.cols + b.cols;
        let mut out = Self::zeros(rows, cols);
        out.write_block(0, 0, a);
        out.write_block(0, a.cols, b);
        out.write_block(a.rows, 0, c);
        out.write_block(a.rows, a.cols, d);
        Ok(out)
    }

    fn write_block(&mut self, row0: usize, col0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(row0 + i, col0 + j)] = block[(i, j)];
            }
        }
    }

    /// Extract the `rows x cols` block with top-left corner (row0, col0).
    pub fn block(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> Self {
        assert!(
            row0 + rows <= self.rows && col0 + cols <= self.cols,
            "block out of range"
        );
        Self::from_fn(rows, cols, |i, j| self[(row0 + i, col0 + j)])
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        crate::jsonout::matrix_json(self)
    }

    pub fn from_json_str(text: &str) -> Result<Self, MatrixParseError> {
        let parsed: MatrixJson = serde_json::from_str(text)?;
        Ok(parsed.try_into()?)
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Wire format for matrices: `{"rows": n, "cols": m, "data": [[re, im], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = MatrixError;

    fn try_from(value: MatrixJson) -> Result<Self, MatrixError> {
        let data = value
            .data
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        ComplexMatrix::new(value.rows, value.cols, data)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum MatrixParseError {
    #[error("invalid matrix JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Standard inner product ⟨x, y⟩ = Σ x_i conj(y_i).
pub fn vec_inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(&a, &b)| a * b.conj()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_and_mul() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let b = ComplexMatrix::identity(2);
        let c = a.mul(&b).unwrap();
        assert_eq!(c, a);
        assert_eq!(a[(1, 0)], Complex64::new(3.0, 0.0));
    }

    #[test]
    fn adjoint_conjugates() {
        let m = ComplexMatrix::new(
            1,
            2,
            vec![Complex64::new(1.0, 2.0), Complex64::new(0.0, -1.0)],
        )
        .unwrap();
        let a = m.adjoint();
        assert_eq!(a.rows(), 2);
        assert_eq!(a[(0, 0)], Complex64::new(1.0, -2.0));
        assert_eq!(a[(1, 0)], Complex64::new(0.0, 1.0));
    }

    #[test]
    fn json_rejects_wrong_length() {
        let text = r#"{"rows": 2, "cols": 2, "data": [[1.0, 0.0], [2.0, 0.0]]}"#;
        let err = ComplexMatrix::from_json_str(text).unwrap_err();
        assert!(matches!(
            err,
            MatrixParseError::Matrix(MatrixError::BadDataLength {
                expected: 4,
                got: 2,
                ..
            })
        ));
    }

    #[test]
    fn json_rejects_non_finite() {
        let text = r#"{"rows": 1, "cols": 1, "data": [[1e999, 0.0]]}"#;
        assert!(ComplexMatrix::from_json_str(text).is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = ComplexMatrix::new(
            2,
            1,
            vec![Complex64::new(0.5, -1.25), Complex64::new(-3.0, 0.0)],
        )
        .unwrap();
        let text = m.to_json_string();
        let back = ComplexMatrix::from_json_str(&text).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn blocks_round_trip() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let b = ComplexMatrix::from_real_rows(&[&[5.0], &[6.0]]);
        let c = ComplexMatrix::from_real_rows(&[&[7.0, 8.0]]);
        let d = ComplexMatrix::from_real_rows(&[&[9.0]]);
        let s = ComplexMatrix::from_blocks(&a, &b, &c, &d).unwrap();
        assert_eq!(s.block(0, 0, 2, 2), a);
        assert_eq!(s.block(0, 2, 2, 1), b);
        assert_eq!(s.block(2, 0, 1, 2), c);
        assert_eq!(s.block(2, 2, 1, 1), d);
    }

    #[test]
    fn hermitian_defect_detects_asymmetry() {
        let h = ComplexMatrix::new(
            2,
            2,
            vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(2.0, 0.0),
            ],
        )
        .unwrap();
        assert!(h.hermitian_defect() < 1e-15);
        let g = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        assert!(g.hermitian_defect() > 1.0);
    }
}
