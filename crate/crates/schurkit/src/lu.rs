//! LU factorization with partial pivoting for dense complex matrices.
//!
//! Used for linear solves (K recovery, S^{-1} in the reconstruction
//! formula), inverses in the Aitken factors, and determinants for the Schur
//! determinant identity.

use num_complex::Complex64;

use crate::matrix::ComplexMatrix;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LuError {
    #[error("LU factorization requires a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular at pivot {pivot}")]
    Singular { pivot: usize },
    #[error("right-hand side has {got} rows, expected {expected}")]
    RhsMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone)]
pub struct LuDecomposition {
    lu: ComplexMatrix,
    /// Row permutation: factored row i came from input row perm[i].
    perm: Vec<usize>,
    sign: f64,
    singular_at: Option<usize>,
}

impl LuDecomposition {
    pub fn new(m: &ComplexMatrix) -> Result<Self, LuError> {
        if !m.is_square() {
            return Err(LuError::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let n = m.rows();
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let mut singular_at = None;

        for k in 0..n {
            let mut best = k;
            let mut best_abs = lu[(k, k)].norm();
            for i in k + 1..n {
                let a = lu[(i, k)].norm();
                if a > best_abs {
                    best_abs = a;
                    best = i;
                }
            }
            if best != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(best, j)];
                    lu[(best, j)] = tmp;
                }
                perm.swap(k, best);
                sign = -sign;
            }
            let pivot = lu[(k, k)];
            if best_abs == 0.0 {
                if singular_at.is_none() {
                    singular_at = Some(k);
                }
                continue;
            }
            for i in k + 1..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                for j in k + 1..n {
                    let correction = factor * lu[(k, j)];
                    lu[(i, j)] -= correction;
                }
            }
        }

        Ok(Self {
            lu,
            perm,
            sign,
            singular_at,
        })
    }

    pub fn is_singular(&self) -> bool {
        self.singular_at.is_some()
    }

    pub fn determinant(&self) -> Complex64 {
        let n = self.lu.rows();
        let mut det = Complex64::new(self.sign, 0.0);
        for k in 0..n {
            det *= self.lu[(k, k)];
        }
        det
    }

    /// Smallest pivot magnitude relative to the largest; a crude
    /// conditioning indicator, zero when singular.
    pub fn pivot_ratio(&self) -> f64 {
        let n = self.lu.rows();
        let mags: Vec<f64> = (0..n).map(|k| self.lu[(k, k)].norm()).collect();
        let max = mags.iter().cloned().fold(0.0, f64::max);
        if max == 0.0 {
            return 0.0;
        }
        mags.iter().cloned().fold(f64::INFINITY, f64::min) / max
    }

    pub fn solve_vec(&self, rhs: &[Complex64]) -> Result<Vec<Complex64>, LuError> {
        let n = self.lu.rows();
        if rhs.len() != n {
            return Err(LuError::RhsMismatch {
                expected: n,
                got: rhs.len(),
            });
        }
        if let Some(pivot) = self.singular_at {
            return Err(LuError::Singular { pivot });
        }
        let mut y = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut v = rhs[self.perm[i]];
            for (j, yj) in y.iter().enumerate().take(i) {
                v -= self.lu[(i, j)] * yj;
            }
            y[i] = v;
        }
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for i in (0..n).rev() {
            let mut v = y[i];
            for (j, xj) in x.iter().enumerate().skip(i + 1) {
                v -= self.lu[(i, j)] * xj;
            }
            x[i] = v / self.lu[(i, i)];
        }
        Ok(x)
    }

    /// Solve A X = B column by column.
    pub fn solve_matrix(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix, LuError> {
        let n = self.lu.rows();
        if rhs.rows() != n {
            return Err(LuError::RhsMismatch {
                expected: n,
                got: rhs.rows(),
            });
        }
        let mut out = ComplexMatrix::zeros(n, rhs.cols());
        for j in 0..rhs.cols() {
            let col = self.solve_vec(&rhs.column(j))?;
            for (i, v) in col.into_iter().enumerate() {
                out[(i, j)] = v;
            }
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Result<ComplexMatrix, LuError> {
        self.solve_matrix(&ComplexMatrix::identity(self.lu.rows()))
    }
}

/// Determinant via LU; zero matrix pivots give an exact complex zero.
pub fn determinant(m: &ComplexMatrix) -> Result<Complex64, LuError> {
    let lu = LuDecomposition::new(m)?;
    if lu.is_singular() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(lu.determinant())
}
