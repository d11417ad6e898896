//! Robin, Dirichlet and Steklov spectra for the 1-D operator
//! `L u = −u'' − p(x) u` on `[a, b]` with boundary terms `q_a u(a)² + q_b u(b)²`.
//!
//! Everything is discretized with continuous piecewise-linear elements on a
//! uniform mesh. The quadratic form is
//!
//! ```text
//! Q(u, v) = ∫ u'v' − ∫ p u v − q_a u(a) v(a) − q_b u(b) v(b)
//! ```
//!
//! assembled as `Qmat = K − P − D`, with the consistent mass matrix `M`
//! playing the role of the L² inner product.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize, Serializer};

use crate::bilinear::{Inertia, InnerProductSpace, SymmetricForm};
use crate::constraint::{analyze, ConstrainedReport, Functional};
use crate::error::{Error, Result};
use crate::linalg::jacobi::{generalized_eigen, symmetric_eigen};
use crate::linalg::Tolerances;

/// Highest polynomial degree accepted for `p`.
pub const MAX_POLY_DEGREE: usize = 6;

/// Number of leading eigenvalues tracked across refinement levels.
const TRACKED: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalDomain {
    pub a: f64,
    pub b: f64,
    /// Number of elements; the mesh has `n + 1` nodes.
    pub n: usize,
}

impl IntervalDomain {
    pub fn new(a: f64, b: f64, n: usize) -> Result<Self> {
        let d = IntervalDomain { a, b, n };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a.is_finite() && self.b.is_finite() && self.a < self.b) {
            return Err(Error::InvalidCoefficients(format!(
                "interval [{}, {}] must be finite with a < b",
                self.a, self.b
            )));
        }
        if self.n == 0 {
            return Err(Error::InvalidCoefficients("mesh needs at least one element".into()));
        }
        Ok(())
    }

    pub fn h(&self) -> f64 {
        (self.b - self.a) / self.n as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i == self.n {
            self.b
        } else {
            self.a + i as f64 * self.h()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.n).map(|i| self.node(i)).collect()
    }

    pub fn with_elements(&self, n: usize) -> Result<Self> {
        IntervalDomain::new(self.a, self.b, n)
    }
}

/// The potential `p(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Potential {
    Constant(f64),
    /// Coefficients in ascending order, `p(x) = Σ cₖ xᵏ`.
    Polynomial(Vec<f64>),
    /// Values at equally spaced points spanning `[a, b]`, interpolated linearly.
    #[serde(rename = "nodal")]
    NodalSamples(Vec<f64>),
}

impl Potential {
    pub fn validate(&self) -> Result<()> {
        let values: &[f64] = match self {
            Potential::Constant(c) => std::slice::from_ref(c),
            Potential::Polynomial(c) => {
                if c.is_empty() {
                    return Err(Error::InvalidCoefficients("polynomial has no coefficients".into()));
                }
                if c.len() > MAX_POLY_DEGREE + 1 {
                    return Err(Error::InvalidCoefficients(format!(
                        "polynomial degree {} exceeds {MAX_POLY_DEGREE}",
                        c.len() - 1
                    )));
                }
                c
            }
            Potential::NodalSamples(v) => {
                if v.is_empty() {
                    return Err(Error::InvalidCoefficients("no nodal samples".into()));
                }
                v
            }
        };
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidCoefficients("p has a non-finite value".into()));
        }
        Ok(())
    }

    pub fn eval(&self, x: f64, domain: &IntervalDomain) -> f64 {
        match self {
            Potential::Constant(c) => *c,
            Potential::Polynomial(c) => c.iter().rev().fold(0.0, |acc, ck| acc * x + ck),
            Potential::NodalSamples(v) => {
                if v.len() == 1 {
                    return v[0];
                }
                let m = v.len() - 1;
                let t = ((x - domain.a) / (domain.b - domain.a) * m as f64).clamp(0.0, m as f64);
                let k = (t.floor() as usize).min(m - 1);
                let s = t - k as f64;
                (1.0 - s) * v[k] + s * v[k + 1]
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSpec {
    pub p: Potential,
    pub q_a: f64,
    pub q_b: f64,
}

impl CoefficientSpec {
    pub fn new(p: Potential, q_a: f64, q_b: f64) -> Result<Self> {
        let c = CoefficientSpec { p, q_a, q_b };
        c.validate()?;
        Ok(c)
    }

    pub fn constant(p: f64, q: f64) -> Self {
        CoefficientSpec {
            p: Potential::Constant(p),
            q_a: q,
            q_b: q,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.p.validate()?;
        for (name, q) in [("q_a", self.q_a), ("q_b", self.q_b)] {
            if !q.is_finite() || q < 0.0 {
                return Err(Error::InvalidCoefficients(format!(
                    "{name} = {q} must be finite and >= 0"
                )));
            }
        }
        Ok(())
    }
}

/// Assembled matrices on a mesh of `n + 1` nodes.
#[derive(Debug, Clone)]
pub struct AssembledProblem {
    pub domain: IntervalDomain,
    pub coeffs: CoefficientSpec,
    pub stiffness: DMatrix<f64>,
    pub mass: DMatrix<f64>,
    pub potential: DMatrix<f64>,
    pub boundary: DMatrix<f64>,
    /// `K − P − D`.
    pub qmat: DMatrix<f64>,
    pub tol: Tolerances,
}

impl AssembledProblem {
    pub fn size(&self) -> usize {
        self.domain.n + 1
    }

    pub fn interior(&self) -> Vec<usize> {
        (1..self.domain.n).collect()
    }

    /// `K − P`: the form without its boundary terms.
    pub fn volume_part(&self) -> DMatrix<f64> {
        &self.stiffness - &self.potential
    }

    /// `Qmat` on the L² (mass) inner product.
    pub fn form(&self) -> Result<SymmetricForm<f64>> {
        let space = InnerProductSpace::new(self.mass.clone(), &self.tol)?;
        SymmetricForm::with_tolerances(space, self.qmat.clone(), self.tol)
    }

    /// Coefficients of `v ↦ ∫ v`, i.e. `M·1`.
    pub fn volume_functional(&self) -> DVector<f64> {
        &self.mass * DVector::from_element(self.size(), 1.0)
    }
}

pub fn assemble(domain: &IntervalDomain, coeffs: &CoefficientSpec) -> Result<AssembledProblem> {
    assemble_with(domain, coeffs, Tolerances::default())
}

pub fn assemble_with(domain: &IntervalDomain, coeffs: &CoefficientSpec, tol: Tolerances) -> Result<AssembledProblem> {
    domain.validate()?;
    coeffs.validate()?;
    let n = domain.n;
    let h = domain.h();
    let size = n + 1;
    let mut k = DMatrix::zeros(size, size);
    let mut m = DMatrix::zeros(size, size);
    let mut p = DMatrix::zeros(size, size);
    let g = 1.0 / 3.0_f64.sqrt();

    for e in 0..n {
        let (x0, x1) = (domain.node(e), domain.node(e + 1));
        let xm = 0.5 * (x0 + x1);
        let mut pe = [[0.0; 2]; 2];
        for xi in [-g, g] {
            let x = xm + xi * 0.5 * h;
            let w = 0.5 * h * coeffs.p.eval(x, domain);
            let shape = [(x1 - x) / h, (x - x0) / h];
            for (i, row) in pe.iter_mut().enumerate() {
                for (j, entry) in row.iter_mut().enumerate() {
                    *entry += w * shape[i] * shape[j];
                }
            }
        }
        let off = pe[0][1];
        let local_k = [[1.0 / h, -1.0 / h], [-1.0 / h, 1.0 / h]];
        let local_m = [[h / 3.0, h / 6.0], [h / 6.0, h / 3.0]];
        let local_p = [[pe[0][0], off], [off, pe[1][1]]];
        for i in 0..2 {
            for j in 0..2 {
                k[(e + i, e + j)] += local_k[i][j];
                m[(e + i, e + j)] += local_m[i][j];
                p[(e + i, e + j)] += local_p[i][j];
            }
        }
    }

    let mut d = DMatrix::zeros(size, size);
    d[(0, 0)] = coeffs.q_a;
    d[(n, n)] += coeffs.q_b;
    let qmat = &k - &p - &d;
    Ok(AssembledProblem {
        domain: *domain,
        coeffs: coeffs.clone(),
        stiffness: k,
        mass: m,
        potential: p,
        boundary: d,
        qmat,
        tol,
    })
}

/// Eigenvalues of `Qmat x = λ M x`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RobinSpectrum {
    pub eigenvalues: Vec<f64>,
    pub band: f64,
    /// `#{λ < −τ}`.
    pub mi_q: usize,
    pub nullity: usize,
    pub marginal: bool,
}

pub fn robin_spectrum(problem: &AssembledProblem) -> Result<RobinSpectrum> {
    let eig = generalized_eigen(&problem.qmat, &problem.mass, false, &problem.tol)?;
    let band = problem.tol.null_rel * eig.spectral_radius().max(1.0);
    let inertia = counts(&eig.values, band);
    Ok(RobinSpectrum {
        marginal: any_within(&eig.values, 10.0 * band),
        band,
        mi_q: inertia.negative,
        nullity: inertia.zero,
        eigenvalues: eig.values,
    })
}

/// Eigenvalues `δ` of the interior block `(K − P)_II x = δ M_II x`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirichletSpectrum {
    pub eigenvalues: Vec<f64>,
    pub band: f64,
    /// `#{δ ≤ τ}`.
    pub a: usize,
    /// Some `|δ| ≤ τ`.
    pub degenerate: bool,
    pub marginal: bool,
}

pub fn dirichlet_spectrum(problem: &AssembledProblem) -> Result<DirichletSpectrum> {
    let interior = problem.interior();
    if interior.is_empty() {
        return Ok(DirichletSpectrum {
            eigenvalues: Vec::new(),
            band: problem.tol.null_rel,
            a: 0,
            degenerate: false,
            marginal: false,
        });
    }
    let a_ii = problem.volume_part().select_rows(&interior).select_columns(&interior);
    let m_ii = problem.mass.select_rows(&interior).select_columns(&interior);
    let eig = generalized_eigen(&a_ii, &m_ii, false, &problem.tol)?;
    let band = problem.tol.null_rel * eig.spectral_radius().max(1.0);
    Ok(DirichletSpectrum {
        a: eig.values.iter().filter(|d| **d <= band).count(),
        degenerate: any_within(&eig.values, band),
        marginal: any_within(&eig.values, 10.0 * band),
        band,
        eigenvalues: eig.values,
    })
}

/// Boundary pencil data: the Dirichlet-to-Neumann matrix `T`, the pencil
/// eigenvalues `T x = μ D_B x` (`+∞` where the weight vanishes) and the
/// inertia of `T − D_B`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SteklovSpectrum {
    #[serde(serialize_with = "serialize_extended")]
    pub eigenvalues: Vec<f64>,
    pub dtn: [[f64; 2]; 2],
    /// Eigenvalues of `T − D_B`, ascending.
    pub shifted: Vec<f64>,
    pub band: f64,
    /// Negative inertia of `T − D_B`.
    pub b: usize,
    pub marginal: bool,
}

pub fn steklov_spectrum(problem: &AssembledProblem) -> Result<SteklovSpectrum> {
    let (q_a, q_b) = (problem.coeffs.q_a, problem.coeffs.q_b);
    if q_a == 0.0 && q_b == 0.0 {
        return Err(Error::ZeroBoundaryWeight);
    }
    let dir = dirichlet_spectrum(problem)?;
    if dir.degenerate {
        let smallest = dir.eigenvalues.iter().map(|d| d.abs()).fold(f64::INFINITY, f64::min);
        return Err(Error::DegenerateDirichletKernel { smallest });
    }

    let n = problem.domain.n;
    let boundary = [0, n];
    let a = problem.volume_part();
    let a_bb = a.select_rows(&boundary).select_columns(&boundary);
    let interior = problem.interior();
    let t = if interior.is_empty() {
        a_bb
    } else {
        let a_ii = a.select_rows(&interior).select_columns(&interior);
        let a_ib = a.select_rows(&interior).select_columns(&boundary);
        let x = a_ii
            .lu()
            .solve(&a_ib)
            .ok_or(Error::DegenerateDirichletKernel { smallest: 0.0 })?;
        a_bb - a_ib.transpose() * x
    };
    let off = 0.5 * (t[(0, 1)] + t[(1, 0)]);
    let dtn = [[t[(0, 0)], off], [off, t[(1, 1)]]];

    let shifted_m = DMatrix::from_row_slice(2, 2, &[dtn[0][0] - q_a, off, off, dtn[1][1] - q_b]);
    let shifted = symmetric_eigen(&shifted_m, false, &problem.tol)?;
    let band = problem.tol.null_rel * shifted.spectral_radius().max(1.0);
    let b = shifted.values.iter().filter(|v| **v < -band).count();

    let scale = problem.tol.null_rel * frob2(&dtn).max(1.0);
    let eigenvalues = pencil_eigenvalues(&dtn, [q_a, q_b], scale, &problem.tol)?;
    Ok(SteklovSpectrum {
        eigenvalues,
        dtn,
        marginal: any_within(&shifted.values, 10.0 * band),
        shifted: shifted.values,
        band,
        b,
    })
}

/// Solves the 2×2 pencil `T x = μ W x` with diagonal `W ≥ 0`, `W ≠ 0`.
fn pencil_eigenvalues(t: &[[f64; 2]; 2], w: [f64; 2], band: f64, tol: &Tolerances) -> Result<Vec<f64>> {
    let mut mu = match (w[0] > 0.0, w[1] > 0.0) {
        (true, true) => {
            let s = [w[0].sqrt(), w[1].sqrt()];
            let c = DMatrix::from_fn(2, 2, |i, j| t[i][j] / (s[i] * s[j]));
            symmetric_eigen(&c, false, tol)?.values
        }
        (true, false) | (false, true) => {
            // eliminate the unweighted coordinate z by its Schur complement
            let (wi, z) = if w[0] > 0.0 { (0, 1) } else { (1, 0) };
            if t[z][z].abs() <= band {
                vec![f64::INFINITY, f64::INFINITY]
            } else {
                vec![(t[wi][wi] - t[wi][z] * t[wi][z] / t[z][z]) / w[wi], f64::INFINITY]
            }
        }
        (false, false) => return Err(Error::ZeroBoundaryWeight),
    };
    mu.sort_by(f64::total_cmp);
    Ok(mu)
}

/// Outcome of checking `MI(Q) = a + b`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub n: usize,
    pub robin: RobinSpectrum,
    pub dirichlet: DirichletSpectrum,
    pub steklov: SteklovSpectrum,
    pub mi_q: usize,
    pub a: usize,
    pub b: usize,
    pub decomposition_ok: bool,
    /// Full inertia of `Qmat` equals inertia of the interior block plus
    /// inertia of its Schur complement.
    pub haynsworth_ok: bool,
    pub marginal: bool,
    pub warnings: Vec<String>,
}

pub fn verify_decomposition(problem: &AssembledProblem) -> Result<SpectrumReport> {
    let robin = robin_spectrum(problem)?;
    let steklov = steklov_spectrum(problem)?;
    let dirichlet = dirichlet_spectrum(problem)?;
    let full = counts(&robin.eigenvalues, robin.band);
    let split = counts(&dirichlet.eigenvalues, dirichlet.band) + counts(&steklov.shifted, steklov.band);
    let marginal = robin.marginal || dirichlet.marginal || steklov.marginal;
    let mut warnings = Vec::new();
    if marginal {
        warnings.push("eigenvalue within 10τ of zero; counts may be unreliable".to_string());
    }
    Ok(SpectrumReport {
        n: problem.domain.n,
        mi_q: robin.mi_q,
        a: dirichlet.a,
        b: steklov.b,
        decomposition_ok: robin.mi_q == dirichlet.a + steklov.b,
        haynsworth_ok: full.counts() == split.counts(),
        marginal,
        warnings,
        robin,
        dirichlet,
        steklov,
    })
}

/// Constraint for the weak (constrained) index.
#[derive(Debug, Clone, PartialEq)]
pub enum WeakConstraint {
    /// `v ↦ ∫ v`.
    Volume,
    /// Coefficients against the nodal basis.
    Custom(DVector<f64>),
}

/// Index of `Q` restricted to the kernel of the constraint, with the dual
/// prediction next to the restriction oracle.
pub fn weak_index(problem: &AssembledProblem, constraint: &WeakConstraint) -> Result<ConstrainedReport> {
    let coeffs = match constraint {
        WeakConstraint::Volume => problem.volume_functional(),
        WeakConstraint::Custom(c) => {
            if c.len() != problem.size() {
                return Err(Error::DimensionMismatch(format!(
                    "constraint has {} coefficients, mesh has {} nodes",
                    c.len(),
                    problem.size()
                )));
            }
            c.clone()
        }
    };
    analyze(&problem.form()?, &[Functional::new(coeffs)])
}

/// Counts on one mesh of a refinement sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelSummary {
    pub n: usize,
    pub mi_q: usize,
    pub a: usize,
    /// `None` when the boundary weight vanishes or the interior block is singular.
    pub b: Option<usize>,
    pub decomposition_ok: Option<bool>,
    pub weak_index: usize,
    pub weak_nullity: usize,
    pub robin_leading: Vec<f64>,
    pub dirichlet_leading: Vec<f64>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefinementReport {
    pub levels: Vec<LevelSummary>,
    pub counts_constant: bool,
    /// Largest change of a tracked eigenvalue between consecutive levels.
    pub drift: Vec<f64>,
    /// `(δ₁(h₋₂) − δ₁(h₋₁)) / (δ₁(h₋₁) − δ₁(h))` for the lowest Dirichlet
    /// eigenvalue; ≈ 4 under halving for second-order convergence.
    pub richardson: Vec<Option<f64>>,
    /// A tracked eigenvalue is closer to zero than its own drift.
    pub near_marginal: bool,
    pub stable: bool,
}

/// Repeats the analysis on meshes of `levels[i]` elements over the same interval.
pub fn refine_and_check(
    domain: &IntervalDomain,
    coeffs: &CoefficientSpec,
    levels: &[usize],
    constraint: &WeakConstraint,
) -> Result<RefinementReport> {
    let mut summaries = Vec::with_capacity(levels.len());
    let mut bands = Vec::with_capacity(levels.len());
    for &n in levels {
        let problem = assemble(&domain.with_elements(n)?, coeffs)?;
        let robin = robin_spectrum(&problem)?;
        let dirichlet = dirichlet_spectrum(&problem)?;
        let mut warnings = Vec::new();
        let (b, decomposition_ok) = match steklov_spectrum(&problem) {
            Ok(s) => (Some(s.b), Some(robin.mi_q == dirichlet.a + s.b)),
            Err(e @ (Error::ZeroBoundaryWeight | Error::DegenerateDirichletKernel { .. })) => {
                warnings.push(format!("{}: {e}", e.kind()));
                (None, None)
            }
            Err(e) => return Err(e),
        };
        let weak = weak_index(&problem, constraint)?;
        warnings.extend(weak.warnings.iter().cloned());
        bands.push(robin.band.max(dirichlet.band));
        summaries.push(LevelSummary {
            n,
            mi_q: robin.mi_q,
            a: dirichlet.a,
            b,
            decomposition_ok,
            weak_index: weak.mi_constrained_oracle,
            weak_nullity: weak.nullity_constrained_oracle,
            robin_leading: robin.eigenvalues.iter().take(TRACKED).copied().collect(),
            dirichlet_leading: dirichlet.eigenvalues.iter().take(TRACKED).copied().collect(),
            warnings,
        });
    }

    let key = |s: &LevelSummary| (s.mi_q, s.a, s.b, s.weak_index, s.weak_nullity);
    let counts_constant = summaries.windows(2).all(|w| key(&w[0]) == key(&w[1]));

    let mut drift = Vec::new();
    let mut near_marginal = false;
    for (i, w) in summaries.windows(2).enumerate() {
        let mut worst = 0.0_f64;
        for (prev, cur) in [
            (&w[0].robin_leading, &w[1].robin_leading),
            (&w[0].dirichlet_leading, &w[1].dirichlet_leading),
        ] {
            for (x0, x1) in prev.iter().zip(cur) {
                let d = (x1 - x0).abs();
                worst = worst.max(d);
                if x1.abs() <= d.max(10.0 * bands[i + 1]) {
                    near_marginal = true;
                }
            }
        }
        drift.push(worst);
    }

    let lowest: Vec<Option<f64>> = summaries.iter().map(|s| s.dirichlet_leading.first().copied()).collect();
    let richardson = lowest
        .windows(3)
        .map(|w| match (w[0], w[1], w[2]) {
            (Some(x0), Some(x1), Some(x2)) if x1 != x2 => Some((x0 - x1) / (x1 - x2)),
            _ => None,
        })
        .collect();

    Ok(RefinementReport {
        stable: counts_constant && !near_marginal,
        levels: summaries,
        counts_constant,
        drift,
        richardson,
        near_marginal,
    })
}

fn counts(values: &[f64], band: f64) -> Inertia {
    let negative = values.iter().filter(|v| **v < -band).count();
    let zero = values.iter().filter(|v| v.abs() <= band).count();
    Inertia::new(negative, zero, values.len() - negative - zero)
}

fn any_within(values: &[f64], radius: f64) -> bool {
    values.iter().any(|v| v.abs() <= radius)
}

fn frob2(t: &[[f64; 2]; 2]) -> f64 {
    t.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
}

/// Writes non-finite entries as the strings `"inf"`, `"-inf"` and `"nan"`.
pub fn serialize_extended<S: Serializer>(values: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(values.len()))?;
    for v in values {
        if v.is_finite() {
            seq.serialize_element(v)?;
        } else if v.is_nan() {
            seq.serialize_element("nan")?;
        } else if *v > 0.0 {
            seq.serialize_element("inf")?;
        } else {
            seq.serialize_element("-inf")?;
        }
    }
    seq.end()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn unit(n: usize) -> IntervalDomain {
        IntervalDomain::new(0.0, 1.0, n).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn single_element_matrices() {
        let p = assemble(&unit(1), &CoefficientSpec::constant(0.0, 1.0)).unwrap();
        let k = DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]);
        let m = DMatrix::from_row_slice(2, 2, &[1.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0]);
        let q = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, -1.0, 0.0]);
        assert!((p.stiffness - k).norm() < 1e-15);
        assert!((p.mass - m).norm() < 1e-15);
        assert!((p.qmat - q).norm() < 1e-15);
    }

    #[test]
    fn potential_matrix_integrates_linear_p_exactly() {
        // p(x) = 1 + 2x: ∫ p over [0, 1] = 2 = 1ᵀ P 1
        let c = CoefficientSpec::new(Potential::Polynomial(vec![1.0, 2.0]), 0.0, 0.0).unwrap();
        let p = assemble(&unit(5), &c).unwrap();
        assert!(close(p.potential.sum(), 2.0, 1e-13));
        let nodal = CoefficientSpec::new(Potential::NodalSamples(vec![1.0, 3.0]), 0.0, 0.0).unwrap();
        let pn = assemble(&unit(5), &nodal).unwrap();
        assert!((pn.potential - p.potential).norm() < 1e-13);
    }

    #[test]
    fn coefficient_validation() {
        assert!(CoefficientSpec::new(Potential::Polynomial(vec![0.0; 8]), 1.0, 1.0).is_err());
        assert!(CoefficientSpec::new(Potential::Polynomial(vec![0.0; 7]), 1.0, 1.0).is_ok());
        assert!(CoefficientSpec::new(Potential::Constant(0.0), -1.0, 1.0).is_err());
        assert!(CoefficientSpec::new(Potential::Constant(f64::NAN), 1.0, 1.0).is_err());
        assert!(IntervalDomain::new(1.0, 0.0, 4).is_err());
        assert!(IntervalDomain::new(0.0, 1.0, 0).is_err());
    }

    #[test]
    fn steklov_closed_forms() {
        for (q0, mu1, b) in [(1.0, 2.0, 1), (3.0, 2.0 / 3.0, 2), (2.0, 1.0, 1)] {
            let p = assemble(&unit(16), &CoefficientSpec::constant(0.0, q0)).unwrap();
            let s = steklov_spectrum(&p).unwrap();
            assert!(close(s.eigenvalues[0], 0.0, 1e-9), "{s:?}");
            assert!(close(s.eigenvalues[1], mu1, 1e-9), "{s:?}");
            assert_eq!(s.b, b);
        }
    }

    #[test]
    fn marginal_boundary_weight_is_flagged() {
        let p = assemble(&unit(16), &CoefficientSpec::constant(0.0, 2.0)).unwrap();
        let r = verify_decomposition(&p).unwrap();
        assert!(r.marginal);
        let p = assemble(&unit(16), &CoefficientSpec::constant(0.0, 1.0)).unwrap();
        let r = verify_decomposition(&p).unwrap();
        assert!(!r.marginal);
        assert_eq!((r.mi_q, r.a, r.b), (1, 0, 1));
        assert!(r.decomposition_ok && r.haynsworth_ok);
    }

    #[test]
    fn one_sided_weight_has_infinite_eigenvalue() {
        let c = CoefficientSpec::new(Potential::Constant(0.0), 1.0, 0.0).unwrap();
        let s = steklov_spectrum(&assemble(&unit(8), &c).unwrap()).unwrap();
        // T = [[1,-1],[-1,1]], eliminating u(b) leaves 1 - 1 = 0
        assert!(close(s.eigenvalues[0], 0.0, 1e-12));
        assert!(s.eigenvalues[1].is_infinite());
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.contains("\"inf\""));
    }

    #[test]
    fn steklov_preconditions() {
        let p = assemble(&unit(8), &CoefficientSpec::constant(0.0, 0.0)).unwrap();
        assert_eq!(steklov_spectrum(&p).unwrap_err(), Error::ZeroBoundaryWeight);
        let d = IntervalDomain::new(0.0, 1.0, 2).unwrap();
        // single interior node: δ = (2/h)/(2h/3) − p = 3/h² − p
        let h = d.h();
        let p = assemble(&d, &CoefficientSpec::constant(3.0 / (h * h), 1.0)).unwrap();
        assert!(matches!(
            steklov_spectrum(&p),
            Err(Error::DegenerateDirichletKernel { .. })
        ));
    }

    #[test]
    fn dirichlet_lowest_eigenvalue_on_zero_pi() {
        let d = IntervalDomain::new(0.0, PI, 256).unwrap();
        let p = assemble(&d, &CoefficientSpec::constant(2.5, 1.0)).unwrap();
        let s = dirichlet_spectrum(&p).unwrap();
        assert!(close(s.eigenvalues[0], -1.5, 1e-3));
        assert_eq!(s.a, 1);
    }

    #[test]
    fn weak_index_examples() {
        let cases = [(5.0, 1, 0), (15.0, 2, 1), (0.0, 0, 0)];
        for (pc, mi, weak) in cases {
            let p = assemble(&unit(32), &CoefficientSpec::constant(pc, 0.0)).unwrap();
            let r = weak_index(&p, &WeakConstraint::Volume).unwrap();
            assert_eq!(r.mi_full, mi, "p = {pc}");
            assert_eq!(r.mi_constrained_oracle, weak, "p = {pc}");
            assert!(r.agreement, "{r:?}");
        }
    }

    #[test]
    fn dual_of_volume_constraint_for_constant_p() {
        // u = −1/5 solves (K − 5M) u = M·1
        let p = assemble(&unit(16), &CoefficientSpec::constant(5.0, 0.0)).unwrap();
        let r = weak_index(&p, &WeakConstraint::Volume).unwrap();
        assert!(close(r.phi_of_u[0].unwrap(), -0.2, 1e-10));
    }

    #[test]
    fn refinement_flags_marginal_potential() {
        let d = unit(16);
        let levels = [16, 32, 64];
        let stable = refine_and_check(
            &d,
            &CoefficientSpec::constant(5.0, 0.0),
            &levels,
            &WeakConstraint::Volume,
        )
        .unwrap();
        assert!(stable.stable, "{stable:?}");
        let marginal = refine_and_check(
            &d,
            &CoefficientSpec::constant(PI * PI, 0.0),
            &levels,
            &WeakConstraint::Volume,
        )
        .unwrap();
        assert!(marginal.near_marginal);
        assert!(!marginal.stable);
    }

    #[test]
    fn richardson_ratio_near_four() {
        let d = IntervalDomain::new(0.0, PI, 64).unwrap();
        let r = refine_and_check(
            &d,
            &CoefficientSpec::constant(2.5, 1.0),
            &[64, 128, 256],
            &WeakConstraint::Volume,
        )
        .unwrap();
        let ratio = r.richardson[0].unwrap();
        assert!((3.6..=4.4).contains(&ratio), "{ratio}");
    }
}
