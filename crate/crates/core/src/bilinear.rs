//! Finite-dimensional inner-product spaces, symmetric bilinear forms on them,
//! and their index data.
//!
//! A form `S` on a space with gram matrix `G` is stored as the symmetric
//! coordinate matrix `A`, so that `S(u, v) = uᵀ·A·v` and `(u, v) = uᵀ·G·v`.
//! In these coordinates the map `𝒮: H → H*` sends `u` to the functional with
//! coefficients `A·u`, and the self-adjoint operator `𝐒` is `G⁻¹·A`.
//!
//! [`SymmetricForm::restrict`] is the brute-force oracle for constrained
//! index and nullity: it builds the form on `∩ Ker(φᵢ)` explicitly.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::constraint::Functional;
use crate::error::{Error, Result};
use crate::linalg::{self, Field, Sign, Tolerances};

#[derive(Debug, Clone, PartialEq)]
pub struct InnerProductSpace<T: Field> {
    gram: DMatrix<T>,
}

impl<T: Field> InnerProductSpace<T> {
    /// Validates that `gram` is symmetric and positive definite.
    pub fn new(gram: DMatrix<T>, tol: &Tolerances) -> Result<Self> {
        if let Some(asymmetry) = T::asymmetry(&gram, tol) {
            return Err(Error::NonSymmetric {
                what: "gram",
                asymmetry,
            });
        }
        let n = gram.nrows();
        let space = InnerProductSpace { gram };
        if n > 0 && !T::is_positive_definite(&space.gram, tol)? {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(space)
    }

    /// `Rⁿ` with the standard inner product.
    pub fn euclidean(dim: usize) -> Self {
        InnerProductSpace {
            gram: DMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    pub fn gram(&self) -> &DMatrix<T> {
        &self.gram
    }

    pub fn inner(&self, u: &DVector<T>, v: &DVector<T>) -> T {
        linalg::bilinear(&self.gram, u, v)
    }

    /// Basis of `∩ᵢ Ker(φᵢ)`, the null space of the stacked coefficient rows.
    pub fn kernel_intersection(&self, constraints: &[Functional<T>], tol: &Tolerances) -> Result<Subspace<T>> {
        let n = self.dim();
        for (i, phi) in constraints.iter().enumerate() {
            if phi.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "constraint {i} has length {}, space has dimension {n}",
                    phi.len()
                )));
            }
        }
        let stack = DMatrix::from_fn(constraints.len(), n, |i, j| constraints[i].coeffs()[j].clone());
        let (_, basis) = T::null_space(&stack, tol);
        Ok(Subspace { basis })
    }
}

/// The triple `(n₋, n₀, n₊)`: Morse index, nullity and positive count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Inertia {
    pub negative: usize,
    pub zero: usize,
    pub positive: usize,
    /// Some eigenvalue sat within a factor 10 of the zero band edge.
    #[serde(default)]
    pub marginal: bool,
}

impl Inertia {
    pub fn new(negative: usize, zero: usize, positive: usize) -> Self {
        Inertia {
            negative,
            zero,
            positive,
            marginal: false,
        }
    }

    pub fn dim(&self) -> usize {
        self.negative + self.zero + self.positive
    }

    /// Counts only; the marginal flag is ignored.
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.negative, self.zero, self.positive)
    }

    pub(crate) fn from_values<T: Field>(values: &[T], band: f64) -> Self {
        let mut out = Inertia::default();
        for v in values {
            let (sign, marginal) = v.sign(band);
            match sign {
                Sign::Negative => out.negative += 1,
                Sign::Zero => out.zero += 1,
                Sign::Positive => out.positive += 1,
            }
            out.marginal |= marginal;
        }
        out
    }
}

impl std::ops::Add for Inertia {
    type Output = Inertia;

    fn add(self, rhs: Inertia) -> Inertia {
        Inertia {
            negative: self.negative + rhs.negative,
            zero: self.zero + rhs.zero,
            positive: self.positive + rhs.positive,
            marginal: self.marginal || rhs.marginal,
        }
    }
}

/// A subspace given by linearly independent basis columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace<T: Field> {
    basis: DMatrix<T>,
}

impl<T: Field> Subspace<T> {
    pub fn new(basis: DMatrix<T>, tol: &Tolerances) -> Result<Self> {
        let (rank, _) = T::null_space(&basis, tol);
        if rank != basis.ncols() {
            return Err(Error::DependentInput);
        }
        Ok(Subspace { basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    /// Basis vectors as the columns of a matrix.
    pub fn basis(&self) -> &DMatrix<T> {
        &self.basis
    }

    pub fn vectors(&self) -> Vec<DVector<T>> {
        self.basis.column_iter().map(|c| c.into_owned()).collect()
    }

    /// Whether `v` lies in the span (exact in the rational backend).
    pub fn contains(&self, v: &DVector<T>, tol: &Tolerances) -> bool {
        let mut stacked = self.basis.clone().insert_column(self.dim(), T::zero());
        stacked.set_column(self.dim(), v);
        let (rank, _) = T::null_space(&stacked, tol);
        rank == self.dim()
    }
}

/// Fundamental decomposition `H = H₋ ⊕ H₀ ⊕ H₊`, from the generalized
/// eigenbasis of `A x = λ G x`.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub basis_neg: Vec<DVector<f64>>,
    pub basis_zero: Vec<DVector<f64>>,
    pub basis_pos: Vec<DVector<f64>>,
    /// Eigenvalues paired with `basis_neg`, then `basis_zero`, then `basis_pos`.
    pub eigenvalues: Vec<f64>,
    pub band: f64,
    pub marginal: bool,
}

impl Decomposition {
    pub fn inertia(&self) -> Inertia {
        Inertia {
            negative: self.basis_neg.len(),
            zero: self.basis_zero.len(),
            positive: self.basis_pos.len(),
            marginal: self.marginal,
        }
    }

    /// All basis vectors in the order neg, zero, pos.
    pub fn all_vectors(&self) -> impl Iterator<Item = &DVector<f64>> {
        self.basis_neg.iter().chain(&self.basis_zero).chain(&self.basis_pos)
    }
}

/// Symmetric bilinear form on an inner-product space.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricForm<T: Field> {
    space: InnerProductSpace<T>,
    matrix: DMatrix<T>,
    tol: Tolerances,
}

impl<T: Field> SymmetricForm<T> {
    /// Rejects non-square or non-symmetric matrices; never symmetrizes.
    pub fn new(space: InnerProductSpace<T>, matrix: DMatrix<T>) -> Result<Self> {
        Self::with_tolerances(space, matrix, Tolerances::default())
    }

    pub fn with_tolerances(space: InnerProductSpace<T>, matrix: DMatrix<T>, tol: Tolerances) -> Result<Self> {
        if matrix.nrows() != space.dim() || matrix.ncols() != space.dim() {
            return Err(Error::DimensionMismatch(format!(
                "form is {}x{}, space has dimension {}",
                matrix.nrows(),
                matrix.ncols(),
                space.dim()
            )));
        }
        if let Some(asymmetry) = T::asymmetry(&matrix, &tol) {
            return Err(Error::NonSymmetric {
                what: "form",
                asymmetry,
            });
        }
        Ok(SymmetricForm { space, matrix, tol })
    }

    /// Form on `Rⁿ` with the standard inner product.
    pub fn euclidean(matrix: DMatrix<T>) -> Result<Self> {
        let n = matrix.nrows();
        Self::new(InnerProductSpace::euclidean(n), matrix)
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::euclidean(linalg::int_matrix(rows))
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn space(&self) -> &InnerProductSpace<T> {
        &self.space
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.matrix
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn set_tolerances(&mut self, tol: Tolerances) {
        self.tol = tol;
    }

    /// `S(u, v)`.
    pub fn eval(&self, u: &DVector<T>, v: &DVector<T>) -> T {
        linalg::bilinear(&self.matrix, u, v)
    }

    /// The quadratic form `𝔖(v) = S(v, v)`.
    pub fn quadratic(&self, v: &DVector<T>) -> T {
        self.eval(v, v)
    }

    /// Coefficients of the functional `𝒮u = S(u, ·)`.
    pub fn dual_of(&self, u: &DVector<T>) -> DVector<T> {
        &self.matrix * u
    }

    /// `𝐒u = G⁻¹·A·u`.
    pub fn operator(&self, u: &DVector<T>) -> Result<DVector<T>> {
        T::solve_spd(self.space.gram(), &self.dual_of(u))
    }

    /// Zero band for a quadratic value at a vector of norm `scale`, sized by
    /// `‖A‖_F` as a spectral radius bound.
    pub(crate) fn band(&self) -> f64 {
        T::band_for(linalg::frobenius(&self.matrix), &self.tol)
    }

    pub fn inertia(&self) -> Result<Inertia> {
        if self.dim() == 0 {
            return Ok(Inertia::default());
        }
        let (values, band) = T::diagonal_values(&self.matrix, self.space.gram(), &self.tol)?;
        Ok(Inertia::from_values(&values, band))
    }

    /// `MI(S)`.
    pub fn morse_index(&self) -> Result<usize> {
        Ok(self.inertia()?.negative)
    }

    /// `n(S)`.
    pub fn nullity(&self) -> Result<usize> {
        Ok(self.inertia()?.zero)
    }

    pub fn kernel_intersection(&self, constraints: &[Functional<T>]) -> Result<Subspace<T>> {
        self.space.kernel_intersection(constraints, &self.tol)
    }

    /// The form restricted to `∩ Ker(φᵢ)`: matrix `BᵀAB` and gram `BᵀGB`
    /// where `B` holds a basis of the intersection as columns.
    pub fn restrict(&self, constraints: &[Functional<T>]) -> Result<SymmetricForm<T>> {
        let sub = self.kernel_intersection(constraints)?;
        self.restrict_to(&sub)
    }

    /// The form pulled back to the coordinates of `sub`.
    pub fn restrict_to(&self, sub: &Subspace<T>) -> Result<SymmetricForm<T>> {
        if sub.ambient_dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "subspace lives in dimension {}, form in {}",
                sub.ambient_dim(),
                self.dim()
            )));
        }
        let b = sub.basis();
        let bt = b.transpose();
        let matrix = symmetrize(&bt * &self.matrix * b);
        let gram = symmetrize(&bt * self.space.gram() * b);
        Ok(SymmetricForm {
            space: InnerProductSpace { gram },
            matrix,
            tol: self.tol,
        })
    }

    /// `Pro^S_u(v) = S(u,v)/S(u,u) · u`.
    pub fn s_project(&self, u: &DVector<T>, v: &DVector<T>) -> Result<DVector<T>> {
        let suu = self.quadratic(u);
        let scale = linalg::vec_norm(u).powi(2);
        if suu.sign(self.band() * scale).0 == Sign::Zero {
            return Err(Error::IsotropicDirection);
        }
        let coeff = self.eval(u, v) / suu;
        Ok(u * coeff)
    }

    /// A maximal negative-definite subspace containing `u`, for `S(u,u) < 0`.
    ///
    /// `u` is S-projected onto a negative subspace `N` spanned by an
    /// S-orthogonal basis; the S-orthogonal complement `W₁` of that
    /// projection inside `N` is S-perpendicular to `u`, and `span(u, W₁)` is
    /// returned.
    pub fn maximal_negative_subspace_through(&self, u: &DVector<T>) -> Result<Subspace<T>> {
        if u.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "vector has length {}, form has dimension {}",
                u.len(),
                self.dim()
            )));
        }
        let scale = linalg::vec_norm(u).powi(2);
        if self.quadratic(u).sign(self.band() * scale).0 != Sign::Negative {
            return Err(Error::NotNegativeDirection);
        }
        let diag = T::diagonalize(&self.matrix, self.space.gram(), &self.tol)?;
        let neg: Vec<usize> = (0..diag.values.len())
            .filter(|&k| diag.values[k].sign(diag.band).0 == Sign::Negative)
            .collect();
        let m = neg.len();
        let n_basis = DMatrix::from_fn(self.dim(), m, |r, c| diag.basis[(r, neg[c])].clone());

        // coefficients of the S-projection u₀ of u onto N, scaled by S(nᵢ,nᵢ)
        let weights = DMatrix::from_fn(1, m, |_, c| {
            let col = n_basis.column(c).into_owned();
            self.eval(u, &col)
        });
        if weights.iter().all(|w| w.is_zero()) {
            return Err(Error::NotNegativeDirection);
        }
        let (_, y) = T::null_space(&weights, &self.tol);
        let w1 = &n_basis * y;
        let mut basis = DMatrix::zeros(self.dim(), 1 + w1.ncols());
        basis.set_column(0, u);
        basis.view_mut((0, 1), (self.dim(), w1.ncols())).copy_from(&w1);
        Ok(Subspace { basis })
    }
}

impl SymmetricForm<f64> {
    /// `H = H₋ ⊕ H₀ ⊕ H₊` from the generalized eigenproblem, classified with
    /// the same band as [`SymmetricForm::inertia`].
    pub fn fundamental_decomposition(&self) -> Result<Decomposition> {
        let diag = f64::diagonalize(&self.matrix, self.space.gram(), &self.tol)?;
        let mut out = Decomposition {
            basis_neg: Vec::new(),
            basis_zero: Vec::new(),
            basis_pos: Vec::new(),
            eigenvalues: Vec::new(),
            band: diag.band,
            marginal: false,
        };
        let mut grouped: [Vec<(f64, DVector<f64>)>; 3] = Default::default();
        for (k, &lambda) in diag.values.iter().enumerate() {
            let (sign, marginal) = linalg::classify_banded(lambda, diag.band);
            out.marginal |= marginal;
            let slot = match sign {
                Sign::Negative => 0,
                Sign::Zero => 1,
                Sign::Positive => 2,
            };
            grouped[slot].push((lambda, diag.basis.column(k).into_owned()));
        }
        let [neg, zero, pos] = grouped;
        for (lambda, v) in neg {
            out.eigenvalues.push(lambda);
            out.basis_neg.push(v);
        }
        for (lambda, v) in zero {
            out.eigenvalues.push(lambda);
            out.basis_zero.push(v);
        }
        for (lambda, v) in pos {
            out.eigenvalues.push(lambda);
            out.basis_pos.push(v);
        }
        Ok(out)
    }

    /// Largest `|(u, v)|` and largest `|S(u, v)|` over basis vectors taken
    /// from different parts of `d`.
    pub fn cross_residuals(&self, d: &Decomposition) -> (f64, f64) {
        let parts = [&d.basis_neg, &d.basis_zero, &d.basis_pos];
        let (mut orth, mut cross) = (0.0_f64, 0.0_f64);
        for (k, first) in parts.iter().enumerate() {
            for second in &parts[k + 1..] {
                for u in first.iter() {
                    for v in second.iter() {
                        orth = orth.max(self.space.inner(u, v).abs());
                        cross = cross.max(self.eval(u, v).abs());
                    }
                }
            }
        }
        (orth, cross)
    }
}

fn symmetrize<T: Field>(m: DMatrix<T>) -> DMatrix<T> {
    if T::EXACT {
        return m;
    }
    let two = T::one() + T::one();
    (&m + m.transpose()) / two
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int_vector, Rational};
    use approx::assert_relative_eq;

    fn exact(rows: &[&[i64]]) -> SymmetricForm<Rational> {
        SymmetricForm::from_int_rows(rows).unwrap()
    }

    fn float(rows: &[&[i64]]) -> SymmetricForm<f64> {
        SymmetricForm::from_int_rows(rows).unwrap()
    }

    fn functional<T: Field>(c: &[i64]) -> Functional<T> {
        Functional::new(int_vector(c))
    }

    /// Eigenvalues of `[[a,b],[b,c]]` from the characteristic polynomial.
    fn eig2(a: f64, b: f64, c: f64) -> (f64, f64) {
        let mid = (a + c) / 2.0;
        let rad = (((a - c) / 2.0).powi(2) + b * b).sqrt();
        (mid - rad, mid + rad)
    }

    #[test]
    fn inertia_examples_both_backends() {
        assert_eq!(exact(&[&[-1, 0], &[0, 1]]).inertia().unwrap().counts(), (1, 0, 1));
        assert_eq!(float(&[&[-1, 0], &[0, 1]]).inertia().unwrap().counts(), (1, 0, 1));

        let (lo, hi) = eig2(0.0, 1.0, 0.0);
        assert_eq!((lo, hi), (-1.0, 1.0));
        assert_eq!(exact(&[&[0, 1], &[1, 0]]).inertia().unwrap().counts(), (1, 0, 1));
        assert_eq!(float(&[&[0, 1], &[1, 0]]).inertia().unwrap().counts(), (1, 0, 1));

        let d = [&[-2, 0, 0, 0][..], &[0, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 3]];
        assert_eq!(exact(&d).inertia().unwrap().counts(), (1, 2, 1));
        assert_eq!(float(&d).inertia().unwrap().counts(), (1, 2, 1));
    }

    #[test]
    fn morse_index_and_nullity_projections() {
        let f = exact(&[&[-1, 0], &[0, 1]]);
        assert_eq!((f.morse_index().unwrap(), f.nullity().unwrap()), (1, 0));
        let id = exact(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!((id.morse_index().unwrap(), id.nullity().unwrap()), (0, 0));
        let d = exact(&[&[-2, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 3]]);
        assert_eq!(d.nullity().unwrap(), 2);
    }

    #[test]
    fn non_symmetric_input_is_rejected() {
        assert!(matches!(
            SymmetricForm::<Rational>::from_int_rows(&[&[1, 2], &[3, 1]]),
            Err(Error::NonSymmetric { .. })
        ));
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0 + 1e-6, 1.0]);
        assert!(matches!(SymmetricForm::euclidean(m), Err(Error::NonSymmetric { .. })));
    }

    #[test]
    fn gram_must_be_positive_definite() {
        let g: DMatrix<Rational> = linalg::int_matrix(&[&[1, 2], &[2, 1]]);
        assert_eq!(
            InnerProductSpace::new(g, &Tolerances::default()),
            Err(Error::NotPositiveDefinite)
        );
    }

    #[test]
    fn decomposition_examples() {
        let d = float(&[&[-1, 0], &[0, 1]]).fundamental_decomposition().unwrap();
        assert_eq!(d.basis_neg.len(), 1);
        assert_relative_eq!(d.basis_neg[0][0].abs(), 1.0, epsilon = 1e-14);
        assert_relative_eq!(d.basis_pos[0][1].abs(), 1.0, epsilon = 1e-14);

        let d = float(&[&[0, 1], &[1, 0]]).fundamental_decomposition().unwrap();
        let s = 0.5_f64.sqrt();
        let n = &d.basis_neg[0];
        let p = &d.basis_pos[0];
        assert_relative_eq!(n[0].abs(), s, epsilon = 1e-14);
        assert_relative_eq!(n[0], -n[1], epsilon = 1e-14);
        assert_relative_eq!(p[0], p[1], epsilon = 1e-14);

        let d = float(&[&[0, 0], &[0, 0]]).fundamental_decomposition().unwrap();
        assert_eq!(d.basis_zero.len(), 2);
    }

    #[test]
    fn kernel_intersection_examples() {
        let space = InnerProductSpace::<Rational>::euclidean(2);
        let tol = Tolerances::default();
        let k = space.kernel_intersection(&[functional(&[1, 0])], &tol).unwrap();
        assert_eq!(k.vectors(), vec![int_vector(&[0, 1])]);

        let space3 = InnerProductSpace::<Rational>::euclidean(3);
        let cs = [functional(&[1, 0, 0]), functional(&[0, 1, 0]), functional(&[1, 1, 0])];
        let k = space3.kernel_intersection(&cs, &tol).unwrap();
        assert_eq!(k.vectors(), vec![int_vector(&[0, 0, 1])]);

        let k = space
            .kernel_intersection(&[functional(&[1, 1]), functional(&[1, -1])], &tol)
            .unwrap();
        assert_eq!(k.dim(), 0);

        let fspace = InnerProductSpace::<f64>::euclidean(3);
        let cs = [functional(&[1, 0, 0]), functional(&[0, 1, 0]), functional(&[1, 1, 0])];
        let k = fspace.kernel_intersection(&cs, &tol).unwrap();
        assert_eq!(k.dim(), 1);
        assert_relative_eq!(k.basis()[(2, 0)].abs(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn restrict_examples() {
        let r = exact(&[&[-1, 0], &[0, 1]]).restrict(&[functional(&[1, 0])]).unwrap();
        assert_eq!(r.matrix(), &linalg::int_matrix::<Rational>(&[&[1]]));
        assert_eq!(r.inertia().unwrap().counts(), (0, 0, 1));

        // hand restriction to span(e₂): [0,1]·A·[0,1]ᵀ = 0
        let r = exact(&[&[0, 1], &[1, 0]]).restrict(&[functional(&[1, 0])]).unwrap();
        assert_eq!(r.matrix(), &linalg::int_matrix::<Rational>(&[&[0]]));
        assert_eq!(r.inertia().unwrap().counts(), (0, 1, 0));

        let f = exact(&[&[-1, 0, 0, 0], &[0, -1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        let r = f
            .restrict(&[functional(&[1, 0, 0, 0]), functional(&[0, 1, 0, 0])])
            .unwrap();
        assert_eq!(r.inertia().unwrap().counts(), (0, 0, 2));
    }

    #[test]
    fn full_restriction_is_empty_form() {
        let f = exact(&[&[-1, 0], &[0, 1]]);
        let r = f.restrict(&[functional(&[1, 0]), functional(&[0, 1])]).unwrap();
        assert_eq!(r.dim(), 0);
        assert_eq!(r.inertia().unwrap().counts(), (0, 0, 0));
        let f = float(&[&[-1, 0], &[0, 1]]);
        let r = f.restrict(&[functional(&[1, 0]), functional(&[0, 1])]).unwrap();
        assert_eq!(r.inertia().unwrap().counts(), (0, 0, 0));
    }

    #[test]
    fn s_project_examples() {
        let id = exact(&[&[1, 0], &[0, 1]]);
        let p = id.s_project(&int_vector(&[1, 0]), &int_vector(&[3, 4])).unwrap();
        assert_eq!(p, int_vector(&[3, 0]));

        // S(u,v) = -3, S(u,u) = -1
        let f = exact(&[&[-1, 0], &[0, 1]]);
        let u = int_vector(&[1, 0]);
        let v = int_vector(&[3, 4]);
        let p = f.s_project(&u, &v).unwrap();
        assert_eq!(p, int_vector(&[3, 0]));
        assert_eq!(f.eval(&u, &(&v - &p)), Rational::from_i64(0));

        let p = f.s_project(&u, &int_vector(&[0, 5])).unwrap();
        assert_eq!(p, int_vector(&[0, 0]));

        let h = exact(&[&[0, 1], &[1, 0]]);
        assert_eq!(
            h.s_project(&int_vector(&[1, 0]), &int_vector(&[1, 1])),
            Err(Error::IsotropicDirection)
        );
    }

    #[test]
    fn maximal_negative_subspace_examples() {
        let f = exact(&[&[-1, 0, 0], &[0, -2, 0], &[0, 0, 3]]);
        let u = int_vector(&[1, 1, 0]);
        let w = f.maximal_negative_subspace_through(&u).unwrap();
        assert_eq!(w.dim(), 2);
        assert!(w.contains(&u, f.tolerances()));
        assert_eq!(f.restrict_to(&w).unwrap().inertia().unwrap().counts(), (2, 0, 0));

        let f = exact(&[&[-1, 0], &[0, 1]]);
        let w = f.maximal_negative_subspace_through(&int_vector(&[1, 0])).unwrap();
        assert_eq!(w.dim(), 1);

        let id = exact(&[&[1, 0], &[0, 1]]);
        assert_eq!(
            id.maximal_negative_subspace_through(&int_vector(&[1, 1])),
            Err(Error::NotNegativeDirection)
        );

        let ff = float(&[&[-1, 0, 0], &[0, -2, 0], &[0, 0, 3]]);
        let u = DVector::from_vec(vec![1.0, 1.0, 0.5]);
        let w = ff.maximal_negative_subspace_through(&u).unwrap();
        assert_eq!(w.dim(), 2);
        assert_eq!(ff.restrict_to(&w).unwrap().inertia().unwrap().counts(), (2, 0, 0));
    }

    #[test]
    fn operator_uses_gram() {
        let g = linalg::int_matrix::<Rational>(&[&[2, 0], &[0, 1]]);
        let space = InnerProductSpace::new(g, &Tolerances::default()).unwrap();
        let f = SymmetricForm::new(space, linalg::int_matrix(&[&[2, 0], &[0, 3]])).unwrap();
        assert_eq!(f.operator(&int_vector(&[1, 1])).unwrap(), int_vector(&[1, 3]));
    }
}
