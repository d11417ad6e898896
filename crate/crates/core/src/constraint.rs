//! Index and nullity of a form under finitely many linear constraints,
//! predicted from the dual solve `𝒮u = φ` and checked against explicit
//! restriction.
//!
//! For a single non-trivial functional `φ` with coefficients `f`:
//!
//! | dual solve `A·u = f`            | index change | nullity change |
//! |---------------------------------|--------------|----------------|
//! | solvable, `φ(u) < 0`            | −1           | 0              |
//! | solvable, `φ(u) = 0`            | −1           | +1             |
//! | solvable, `φ(u) > 0`            | 0            | 0              |
//! | not solvable (`f ∉ ran A`)      | 0            | −1             |
//!
//! For `k` independent functionals that are all in the range, with duals
//! `uᵢ`, the index drops by the number of non-positive eigenvalues of
//! `M = [S(uᵢ, uⱼ)]` and the nullity grows by `dim Ker M`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::bilinear::{Inertia, InnerProductSpace, SymmetricForm};
use crate::error::{Error, Result};
use crate::linalg::{self, Field, Sign};

/// Continuous linear functional `φ(v) = fᵀ·v`.
#[derive(Debug, Clone, PartialEq)]
pub struct Functional<T: Field> {
    coeffs: DVector<T>,
}

impl<T: Field> Functional<T> {
    pub fn new(coeffs: DVector<T>) -> Self {
        Functional { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Functional::new(linalg::int_vector(coeffs))
    }

    pub fn coeffs(&self) -> &DVector<T> {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        linalg::is_zero_vec(&self.coeffs)
    }

    pub fn eval(&self, v: &DVector<T>) -> T {
        linalg::dot(&self.coeffs, v)
    }

    /// Coefficients of `φ` restricted to the subspace spanned by the columns of `basis`.
    pub fn pull_back(&self, basis: &DMatrix<T>) -> Functional<T> {
        Functional::new(basis.transpose() * &self.coeffs)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolveStatus<T: Field> {
    /// `A·u = f` with `phi_of_u = fᵀ·u`.
    InRange { u: DVector<T>, phi_of_u: T },
    /// `f ∉ ran(A)`; `kernel_component ∈ Ker(A)` with `fᵀ·kernel_component ≠ 0`.
    NotInRange { kernel_component: DVector<T> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome<T: Field> {
    pub status: SolveStatus<T>,
    /// `‖A·u − f‖` (0 in the exact backend, ∞ when not in range).
    pub residual: f64,
    /// Residual within a factor 10 of the in-range threshold.
    pub marginal: bool,
}

impl<T: Field> SolveOutcome<T> {
    pub fn is_in_range(&self) -> bool {
        matches!(self.status, SolveStatus::InRange { .. })
    }

    pub fn solution(&self) -> Option<&DVector<T>> {
        match &self.status {
            SolveStatus::InRange { u, .. } => Some(u),
            SolveStatus::NotInRange { .. } => None,
        }
    }

    pub fn phi_of_u(&self) -> Option<&T> {
        match &self.status {
            SolveStatus::InRange { phi_of_u, .. } => Some(phi_of_u),
            SolveStatus::NotInRange { .. } => None,
        }
    }
}

/// Which case of the single-constraint theory a functional falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    NegativePhi,
    ZeroPhi,
    PositivePhi,
    NotInRange,
}

impl Branch {
    pub fn index_drop(self) -> usize {
        match self {
            Branch::NegativePhi | Branch::ZeroPhi => 1,
            Branch::PositivePhi | Branch::NotInRange => 0,
        }
    }

    pub fn nullity_change(self) -> i32 {
        match self {
            Branch::ZeroPhi => 1,
            Branch::NotInRange => -1,
            Branch::NegativePhi | Branch::PositivePhi => 0,
        }
    }
}

/// Riesz representative `φ̄ = G⁻¹·f`, so that `(φ̄, v) = φ(v)`.
pub fn riesz<T: Field>(space: &InnerProductSpace<T>, phi: &Functional<T>) -> Result<DVector<T>> {
    check_len(space.dim(), phi)?;
    T::solve_spd(space.gram(), phi.coeffs())
}

/// Solves `𝒮u = φ`, i.e. `A·u = f`.
///
/// Exact backend: elimination. Floating backend: minimum-norm least squares,
/// accepted when `‖A·u − f‖ ≤ residual · max(1, ‖f‖)`.
pub fn solve_dual<T: Field>(form: &SymmetricForm<T>, phi: &Functional<T>) -> Result<SolveOutcome<T>> {
    check_len(form.dim(), phi)?;
    let raw = T::solve_symmetric(form.matrix(), phi.coeffs(), form.tolerances());
    let status = match raw.solution {
        Some(u) => {
            let phi_of_u = phi.eval(&u);
            SolveStatus::InRange { u, phi_of_u }
        }
        None => SolveStatus::NotInRange {
            kernel_component: raw.kernel_component,
        },
    };
    Ok(SolveOutcome {
        status,
        residual: raw.residual,
        marginal: raw.marginal,
    })
}

/// Classifies `φ` into its [`Branch`]; the flag marks a marginal sign or
/// residual decision.
pub fn classify<T: Field>(form: &SymmetricForm<T>, phi: &Functional<T>) -> Result<(Branch, bool)> {
    classify_with_outcome(form, phi).map(|(b, m, _)| (b, m))
}

fn classify_with_outcome<T: Field>(
    form: &SymmetricForm<T>,
    phi: &Functional<T>,
) -> Result<(Branch, bool, SolveOutcome<T>)> {
    if phi.is_trivial() {
        return Err(Error::TrivialFunctional);
    }
    let outcome = solve_dual(form, phi)?;
    let (branch, marginal) = match &outcome.status {
        SolveStatus::NotInRange { .. } => (Branch::NotInRange, outcome.marginal),
        SolveStatus::InRange { u, phi_of_u } => {
            // φ(u) = fᵀu is measured against the cancellation scale ‖f‖·‖u‖
            let band = T::band_for(linalg::vec_norm(u) * linalg::vec_norm(phi.coeffs()), form.tolerances());
            let (sign, marginal) = phi_of_u.sign(band);
            let b = match sign {
                Sign::Negative => Branch::NegativePhi,
                Sign::Zero => Branch::ZeroPhi,
                Sign::Positive => Branch::PositivePhi,
            };
            (b, marginal || outcome.marginal)
        }
    };
    Ok((branch, marginal, outcome))
}

/// `MI(S) − MI^φ(S)`: 1 iff `𝒮u = φ` is solvable with `φ(u) ≤ 0`.
pub fn predict_index_drop<T: Field>(form: &SymmetricForm<T>, phi: &Functional<T>) -> Result<usize> {
    Ok(classify(form, phi)?.0.index_drop())
}

/// `n^φ(S) − n(S)`: +1 iff solvable with `φ(u) = 0`, −1 iff `f ∉ ran(A)`.
pub fn predict_nullity_change<T: Field>(form: &SymmetricForm<T>, phi: &Functional<T>) -> Result<i32> {
    Ok(classify(form, phi)?.0.nullity_change())
}

/// Whether `φ` is S-critical, i.e. `φ(W) = R` for every maximal
/// negative-definite `W`. Equivalent to the index dropping under `φ`.
pub fn is_s_critical<T: Field>(form: &SymmetricForm<T>, phi: &Functional<T>) -> Result<bool> {
    Ok(predict_index_drop(form, phi)? == 1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiConstraintReport<T: Field> {
    /// `uᵢ` with `A·uᵢ = fᵢ`.
    pub duals: Vec<DVector<T>>,
    /// `Mᵢⱼ = S(uᵢ, uⱼ)`.
    pub gram_matrix: DMatrix<T>,
    pub gram_inertia: Inertia,
    /// Number of non-positive eigenvalues of `M`.
    pub c: usize,
    /// `dim Ker M`.
    pub c0: usize,
    pub predicted_morse_index: usize,
    pub predicted_nullity: usize,
}

/// Multi-constraint prediction; requires independent functionals that are
/// all in the range of `𝒮`.
pub fn predict_multi<T: Field>(
    form: &SymmetricForm<T>,
    constraints: &[Functional<T>],
) -> Result<MultiConstraintReport<T>> {
    let k = constraints.len();
    for phi in constraints {
        check_len(form.dim(), phi)?;
    }
    let stack = DMatrix::from_fn(k, form.dim(), |i, j| constraints[i].coeffs()[j].clone());
    let (rank, _) = T::null_space(&stack, form.tolerances());
    if rank < k {
        return Err(Error::DependentConstraints { rank, count: k });
    }
    let mut duals = Vec::with_capacity(k);
    for (index, phi) in constraints.iter().enumerate() {
        match solve_dual(form, phi)?.status {
            SolveStatus::InRange { u, .. } => duals.push(u),
            SolveStatus::NotInRange { .. } => return Err(Error::NotInRange { index }),
        }
    }
    let gram_matrix = DMatrix::from_fn(k, k, |i, j| constraints[i].eval(&duals[j]));
    let gram_matrix = symmetrized(gram_matrix);
    let (values, own_band) = T::diagonal_values(&gram_matrix, &DMatrix::identity(k, k), form.tolerances())?;
    // same cancellation allowance as the single-constraint φ(u) test
    let f_max = constraints
        .iter()
        .map(|phi| linalg::vec_norm(phi.coeffs()))
        .fold(0.0, f64::max);
    let u_max = duals.iter().map(linalg::vec_norm).fold(0.0, f64::max);
    let gram_inertia = Inertia::from_values(&values, own_band.max(T::band_for(f_max * u_max, form.tolerances())));
    let full = form.inertia()?;
    let c = gram_inertia.negative + gram_inertia.zero;
    let c0 = gram_inertia.zero;
    Ok(MultiConstraintReport {
        duals,
        gram_matrix,
        gram_inertia,
        c,
        c0,
        predicted_morse_index: full.negative.saturating_sub(c),
        predicted_nullity: full.zero + c0,
    })
}

/// Replaces independent `u₁..u_k` by an S-orthogonal basis of their span.
pub fn diagonalize_duals<T: Field>(form: &SymmetricForm<T>, duals: &[DVector<T>]) -> Result<Vec<DVector<T>>> {
    let k = duals.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    if duals.iter().any(|u| u.len() != form.dim()) {
        return Err(Error::DimensionMismatch("dual vector length".into()));
    }
    let u = DMatrix::from_columns(duals);
    let (rank, _) = T::null_space(&u, form.tolerances());
    if rank < k {
        return Err(Error::DependentInput);
    }
    let m = symmetrized(u.transpose() * form.matrix() * &u);
    let diag = T::diagonalize(&m, &DMatrix::identity(k, k), form.tolerances())?;
    let out = &u * diag.basis;
    Ok(out.column_iter().map(|c| c.into_owned()).collect())
}

/// Applies the single-constraint index predictor one functional at a time,
/// each on the space already cut down by the earlier ones; returns the
/// total drop.
pub fn sequential_index_drop<T: Field>(form: &SymmetricForm<T>, constraints: &[Functional<T>]) -> Result<usize> {
    let mut total = 0;
    for j in 0..constraints.len() {
        let sub = form.kernel_intersection(&constraints[..j])?;
        let restricted = form.restrict_to(&sub)?;
        let phi = constraints[j].pull_back(sub.basis());
        total += predict_index_drop(&restricted, &phi)?;
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiSummary {
    pub c: usize,
    pub c0: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PredictionMode {
    Predicted,
    OracleOnly,
}

/// Prediction next to restriction-oracle truth for one constraint set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstrainedReport {
    pub backend: String,
    pub dim: usize,
    pub constraint_count: usize,
    pub kernel_dim: usize,
    pub mi_full: usize,
    pub nullity_full: usize,
    pub mi_constrained_oracle: usize,
    pub nullity_constrained_oracle: usize,
    pub mi_constrained_predicted: Option<usize>,
    pub nullity_constrained_predicted: Option<usize>,
    pub mode: PredictionMode,
    pub s_critical: Vec<bool>,
    pub branches: Vec<Option<Branch>>,
    pub phi_of_u: Vec<Option<f64>>,
    pub multi: Option<MultiSummary>,
    pub agreement: bool,
    pub warnings: Vec<String>,
}

/// Fills a [`ConstrainedReport`]: oracle values by restriction, predictions
/// by the single- or multi-constraint theory. Trivial, dependent or mixed
/// in/out-of-range constraint sets fall back to oracle-only mode.
pub fn analyze<T: Field>(form: &SymmetricForm<T>, constraints: &[Functional<T>]) -> Result<ConstrainedReport> {
    let full = form.inertia()?;
    let restricted = form.restrict(constraints)?;
    let oracle = restricted.inertia()?;
    let mut warnings = Vec::new();
    if full.marginal {
        warnings.push("marginal eigenvalue in the full form".to_string());
    }
    if oracle.marginal {
        warnings.push("marginal eigenvalue in the restricted form".to_string());
    }

    let mut s_critical = Vec::with_capacity(constraints.len());
    let mut branches = Vec::with_capacity(constraints.len());
    let mut phi_of_u = Vec::with_capacity(constraints.len());
    for (i, phi) in constraints.iter().enumerate() {
        if phi.is_trivial() {
            warnings.push(format!("TrivialFunctional: constraint {i} is zero"));
            s_critical.push(false);
            branches.push(None);
            phi_of_u.push(None);
            continue;
        }
        let (branch, marginal, outcome) = classify_with_outcome(form, phi)?;
        if marginal {
            warnings.push(format!("marginal dual-solve decision for constraint {i}"));
        }
        s_critical.push(branch.index_drop() == 1);
        branches.push(Some(branch));
        phi_of_u.push(outcome.phi_of_u().map(Field::to_f64));
    }

    let mut multi = None;
    let prediction: Option<(usize, usize)> = if constraints.is_empty() {
        Some((full.negative, full.zero))
    } else if branches.iter().any(Option::is_none) {
        None
    } else if let [_] = constraints {
        let b = branches[0].expect("checked above");
        let nullity = full.zero as i64 + b.nullity_change() as i64;
        Some((full.negative - b.index_drop(), nullity.max(0) as usize))
    } else {
        match predict_multi(form, constraints) {
            Ok(report) => {
                if report.gram_inertia.marginal {
                    warnings.push("marginal eigenvalue in the dual gram matrix".to_string());
                }
                multi = Some(MultiSummary {
                    c: report.c,
                    c0: report.c0,
                });
                Some((report.predicted_morse_index, report.predicted_nullity))
            }
            Err(e) => {
                warnings.push(format!("{}: {e}; oracle only", e.kind()));
                None
            }
        }
    };

    let (mode, mi_pred, n_pred, agreement) = match prediction {
        Some((mi, n)) => (
            PredictionMode::Predicted,
            Some(mi),
            Some(n),
            mi == oracle.negative && n == oracle.zero,
        ),
        None => (PredictionMode::OracleOnly, None, None, true),
    };

    Ok(ConstrainedReport {
        backend: T::NAME.to_string(),
        dim: form.dim(),
        constraint_count: constraints.len(),
        kernel_dim: restricted.dim(),
        mi_full: full.negative,
        nullity_full: full.zero,
        mi_constrained_oracle: oracle.negative,
        nullity_constrained_oracle: oracle.zero,
        mi_constrained_predicted: mi_pred,
        nullity_constrained_predicted: n_pred,
        mode,
        s_critical,
        branches,
        phi_of_u,
        multi,
        agreement,
        warnings,
    })
}

fn check_len<T: Field>(dim: usize, phi: &Functional<T>) -> Result<()> {
    if phi.len() != dim {
        return Err(Error::DimensionMismatch(format!(
            "functional has length {}, space has dimension {dim}",
            phi.len()
        )));
    }
    Ok(())
}

fn symmetrized<T: Field>(m: DMatrix<T>) -> DMatrix<T> {
    if T::EXACT {
        m
    } else {
        let two = T::one() + T::one();
        (&m + m.transpose()) / two
    }
}
