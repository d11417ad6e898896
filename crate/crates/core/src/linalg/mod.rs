//! Scalar backends and the dense kernels behind them.
//!
//! Two scalar types implement [`Field`]:
//!
//! * [`Rational`] (arbitrary-precision rationals): inertia by symmetric
//!   congruence, kernels and solves by exact elimination. Every sign decision
//!   is exact, so integer statements about index and nullity can be verified
//!   without tolerances.
//! * `f64`: inertia from a generalized symmetric eigenproblem solved with
//!   cyclic Jacobi rotations, kernels from a column-pivoted Householder
//!   factorization, solves by minimum-norm least squares. Sign decisions use
//!   the band `τ = null_rel · max(1, spectral radius)`.

mod exact;
mod float;
pub mod jacobi;
pub mod qr;

use std::fmt;
use std::ops::Neg;

use nalgebra::{ClosedAddAssign, ClosedDivAssign, ClosedMulAssign, ClosedSubAssign, DMatrix, DVector, Scalar};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Result;

pub use exact::{parse_rational, Rational};

/// Numerical thresholds used by the floating backend. The exact backend
/// ignores everything except `jacobi_*` (which it never reaches).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative width of the zero band: `τ = null_rel · max(1, ρ)`.
    pub null_rel: f64,
    /// Relative residual below which `A·u = f` counts as solved.
    pub residual: f64,
    /// Relative entrywise asymmetry tolerated in inputs.
    pub symmetry: f64,
    /// Relative pivot threshold for rank decisions.
    pub rank: f64,
    /// Jacobi stops once the off-diagonal Frobenius norm is below `jacobi_off · ‖A‖`.
    pub jacobi_off: f64,
    pub jacobi_max_sweeps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            null_rel: 1e-9,
            residual: 1e-8,
            symmetry: 1e-12,
            rank: 1e-10,
            jacobi_off: 1e-12,
            jacobi_max_sweeps: 60,
        }
    }
}

/// Three-way sign of a scalar after banding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

/// Classifies `x` against the band `[-tau, tau]`. The second component is the
/// marginal flag: `|x|` lies within a factor 10 of the band edge, on either side.
pub fn classify_banded(x: f64, tau: f64) -> (Sign, bool) {
    let ax = x.abs();
    let sign = if ax <= tau {
        Sign::Zero
    } else if x < 0.0 {
        Sign::Negative
    } else {
        Sign::Positive
    };
    let marginal = tau > 0.0 && ax > tau / 10.0 && ax <= tau * 10.0;
    (sign, marginal)
}

/// A basis `P` (as columns) with `Pᵀ·A·P` diagonal, together with the
/// diagonal entries and the band used to classify them.
#[derive(Debug, Clone)]
pub struct Diagonalization<T: Scalar> {
    pub basis: DMatrix<T>,
    pub values: Vec<T>,
    /// Zero band; always 0 in the exact backend.
    pub band: f64,
}

/// Raw outcome of solving `A·u = f` for symmetric `A`; see
/// [`crate::constraint::solve_dual`] for the public wrapper.
#[derive(Debug, Clone)]
pub struct RawSolve<T: Scalar> {
    pub solution: Option<DVector<T>>,
    /// Component of `f` along `Ker(A)`; nonzero exactly when `f ∉ ran(A)`.
    pub kernel_component: DVector<T>,
    pub residual: f64,
    pub marginal: bool,
}

/// Scalar field backing a bilinear form.
pub trait Field:
    Scalar
    + Zero
    + One
    + ClosedAddAssign
    + ClosedSubAssign
    + ClosedMulAssign
    + ClosedDivAssign
    + Neg<Output = Self>
    + PartialOrd
    + Send
    + Sync
    + fmt::Display
{
    const EXACT: bool;
    const NAME: &'static str;

    fn from_i64(v: i64) -> Self;
    fn to_f64(&self) -> f64;

    /// Sign of `self` with the given zero band (ignored by exact scalars).
    fn sign(&self, band: f64) -> (Sign, bool);

    /// `None` when `m` is symmetric under the backend's policy, otherwise the
    /// largest asymmetry found.
    fn asymmetry(m: &DMatrix<Self>, tol: &Tolerances) -> Option<f64>;

    /// Diagonalizes `A` by a congruence. In the floating backend the basis is
    /// the generalized eigenbasis of `A x = λ G x` (so it is also
    /// `G`-orthonormal); in the exact backend `G` is not consulted.
    fn diagonalize(a: &DMatrix<Self>, gram: &DMatrix<Self>, tol: &Tolerances) -> Result<Diagonalization<Self>>;

    /// Diagonal values of [`Field::diagonalize`] and their band, without the basis.
    fn diagonal_values(a: &DMatrix<Self>, gram: &DMatrix<Self>, tol: &Tolerances) -> Result<(Vec<Self>, f64)> {
        let d = Self::diagonalize(a, gram, tol)?;
        Ok((d.values, d.band))
    }

    fn is_positive_definite(g: &DMatrix<Self>, tol: &Tolerances) -> Result<bool> {
        let n = g.nrows();
        let (values, band) = Self::diagonal_values(g, &DMatrix::identity(n, n), tol)?;
        Ok(values.iter().all(|v| v.sign(band).0 == Sign::Positive))
    }

    /// Rank of `c` and a basis (as columns) of its null space.
    fn null_space(c: &DMatrix<Self>, tol: &Tolerances) -> (usize, DMatrix<Self>);

    /// Solves `G·x = b` for the positive definite `G`.
    fn solve_spd(g: &DMatrix<Self>, b: &DVector<Self>) -> Result<DVector<Self>>;

    fn solve_symmetric(a: &DMatrix<Self>, f: &DVector<Self>, tol: &Tolerances) -> RawSolve<Self>;

    /// Band for deciding whether a scalar of size `scale` vanishes.
    fn band_for(scale: f64, tol: &Tolerances) -> f64 {
        if Self::EXACT {
            0.0
        } else {
            tol.null_rel * scale.max(1.0)
        }
    }
}

/// Builds a matrix from integer rows. Panics on ragged input.
pub fn int_matrix<T: Field>(rows: &[&[i64]]) -> DMatrix<T> {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    assert!(rows.iter().all(|r| r.len() == m), "ragged rows");
    DMatrix::from_fn(n, m, |i, j| T::from_i64(rows[i][j]))
}

pub fn int_vector<T: Field>(entries: &[i64]) -> DVector<T> {
    DVector::from_iterator(entries.len(), entries.iter().map(|&v| T::from_i64(v)))
}

pub(crate) fn frobenius<T: Field>(m: &DMatrix<T>) -> f64 {
    m.iter().map(|x| x.to_f64().powi(2)).sum::<f64>().sqrt()
}

pub(crate) fn vec_norm<T: Field>(v: &DVector<T>) -> f64 {
    v.iter().map(|x| x.to_f64().powi(2)).sum::<f64>().sqrt()
}

pub(crate) fn is_zero_vec<T: Field>(v: &DVector<T>) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// `uᵀ·A·v`.
pub(crate) fn bilinear<T: Field>(a: &DMatrix<T>, u: &DVector<T>, v: &DVector<T>) -> T {
    (u.transpose() * (a * v))[(0, 0)].clone()
}

pub(crate) fn dot<T: Field>(u: &DVector<T>, v: &DVector<T>) -> T {
    (u.transpose() * v)[(0, 0)].clone()
}
