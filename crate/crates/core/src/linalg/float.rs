use nalgebra::{DMatrix, DVector};

use super::jacobi::{generalized_eigen, symmetric_eigen};
use super::qr::col_piv_qr;
use super::{classify_banded, Diagonalization, Field, RawSolve, Sign, Tolerances};
use crate::error::{Error, Result};

impl Field for f64 {
    const EXACT: bool = false;
    const NAME: &'static str = "float";

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn sign(&self, band: f64) -> (Sign, bool) {
        classify_banded(*self, band)
    }

    fn asymmetry(m: &DMatrix<Self>, tol: &Tolerances) -> Option<f64> {
        if !m.is_square() {
            return Some(f64::INFINITY);
        }
        let limit = tol.symmetry * m.norm();
        let n = m.nrows();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in (i + 1)..n {
                worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
            }
        }
        (worst > limit || worst.is_nan()).then_some(worst)
    }

    fn diagonalize(a: &DMatrix<Self>, gram: &DMatrix<Self>, tol: &Tolerances) -> Result<Diagonalization<Self>> {
        let eig = generalized_eigen(a, gram, true, tol)?;
        let band = tol.null_rel * eig.spectral_radius().max(1.0);
        Ok(Diagonalization {
            basis: eig.vectors.expect("vectors requested"),
            values: eig.values,
            band,
        })
    }

    fn diagonal_values(a: &DMatrix<Self>, gram: &DMatrix<Self>, tol: &Tolerances) -> Result<(Vec<Self>, f64)> {
        let eig = generalized_eigen(a, gram, false, tol)?;
        let band = tol.null_rel * eig.spectral_radius().max(1.0);
        Ok((eig.values, band))
    }

    fn is_positive_definite(g: &DMatrix<Self>, _tol: &Tolerances) -> Result<bool> {
        Ok(nalgebra::Cholesky::new(g.clone()).is_some())
    }

    fn null_space(c: &DMatrix<Self>, tol: &Tolerances) -> (usize, DMatrix<Self>) {
        let n = c.ncols();
        if c.nrows() == 0 {
            return (0, DMatrix::identity(n, n));
        }
        let (rank, q) = col_piv_qr(&c.transpose(), tol.rank);
        (rank, q.columns(rank, n - rank).into_owned())
    }

    fn solve_spd(g: &DMatrix<Self>, b: &DVector<Self>) -> Result<DVector<Self>> {
        let chol = nalgebra::Cholesky::new(g.clone()).ok_or(Error::NotPositiveDefinite)?;
        Ok(chol.solve(b))
    }

    fn solve_symmetric(a: &DMatrix<Self>, f: &DVector<Self>, tol: &Tolerances) -> RawSolve<Self> {
        let n = a.nrows();
        let eig = match symmetric_eigen(a, true, tol) {
            Ok(e) => e,
            Err(_) => {
                return RawSolve {
                    solution: None,
                    kernel_component: DVector::zeros(n),
                    residual: f64::NAN,
                    marginal: true,
                }
            }
        };
        let band = tol.null_rel * eig.spectral_radius().max(1.0);
        let v = eig.vectors.expect("vectors requested");
        let mut u = DVector::zeros(n);
        let mut kernel = DVector::zeros(n);
        for (k, &lambda) in eig.values.iter().enumerate() {
            let col = v.column(k);
            let coeff = col.dot(f);
            if lambda.abs() > band {
                u += col * (coeff / lambda);
            } else {
                kernel += col * coeff;
            }
        }
        let residual = (f - a * &u).norm();
        let threshold = tol.residual * f.norm().max(1.0);
        let marginal = residual > threshold / 10.0 && residual <= threshold * 10.0;
        if residual <= threshold {
            RawSolve {
                solution: Some(u),
                kernel_component: kernel,
                residual,
                marginal,
            }
        } else {
            RawSolve {
                solution: None,
                kernel_component: kernel,
                residual,
                marginal,
            }
        }
    }
}
