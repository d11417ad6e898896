//! Cyclic Jacobi eigensolver for dense symmetric matrices, and the
//! generalized problem `A x = λ G x` reduced through a Cholesky factor of `G`.

use nalgebra::DMatrix;

use super::Tolerances;
use crate::error::{Error, Result};

/// Eigenvalues in ascending order, with eigenvectors as matching columns when
/// requested.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Option<DMatrix<f64>>,
}

impl SymmetricEigen {
    pub fn spectral_radius(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi sweeps.
///
/// Stops once the off-diagonal Frobenius norm falls below
/// `tol.jacobi_off · ‖A‖_F`; fails after `tol.jacobi_max_sweeps` sweeps.
pub fn symmetric_eigen(a: &DMatrix<f64>, want_vectors: bool, tol: &Tolerances) -> Result<SymmetricEigen> {
    let n = a.nrows();
    // row-major working copy
    let mut w: Vec<f64> = (0..n * n).map(|k| a[(k / n, k % n)]).collect();
    let mut v: Vec<f64> = if want_vectors {
        (0..n * n).map(|k| if k / n == k % n { 1.0 } else { 0.0 }).collect()
    } else {
        Vec::new()
    };

    let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = tol.jacobi_off * norm;
    let mut off = off_norm(&w, n);
    let mut sweeps = 0;
    while off > target {
        if sweeps == tol.jacobi_max_sweeps {
            return Err(Error::EigensolverFailure { sweeps, off_norm: off });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = w[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = w[p * n + p];
                let aqq = w[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut w, n, p, q, c, s);
                w[p * n + p] = app - t * apq;
                w[q * n + q] = aqq + t * apq;
                w[p * n + q] = 0.0;
                w[q * n + p] = 0.0;
                if want_vectors {
                    for r in 0..n {
                        let vp = v[r * n + p];
                        let vq = v[r * n + q];
                        v[r * n + p] = c * vp - s * vq;
                        v[r * n + q] = s * vp + c * vq;
                    }
                }
            }
        }
        sweeps += 1;
        off = off_norm(&w, n);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| w[i * n + i].total_cmp(&w[j * n + j]));
    let values = order.iter().map(|&i| w[i * n + i]).collect();
    let vectors = want_vectors.then(|| DMatrix::from_fn(n, n, |r, c| v[r * n + order[c]]));
    Ok(SymmetricEigen { values, vectors })
}

// Applies the rotation to rows/columns p and q, off the (p,q) block.
fn rotate(w: &mut [f64], n: usize, p: usize, q: usize, c: f64, s: f64) {
    for r in 0..n {
        if r == p || r == q {
            continue;
        }
        let arp = w[r * n + p];
        let arq = w[r * n + q];
        let np = c * arp - s * arq;
        let nq = s * arp + c * arq;
        w[r * n + p] = np;
        w[p * n + r] = np;
        w[r * n + q] = nq;
        w[q * n + r] = nq;
    }
}

fn off_norm(w: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for p in 0..n {
        for q in (p + 1)..n {
            s += w[p * n + q] * w[p * n + q];
        }
    }
    (2.0 * s).sqrt()
}

/// Solves `A x = λ G x` for symmetric `A` and positive definite `G`.
/// Eigenvectors, when requested, are `G`-orthonormal.
pub fn generalized_eigen(
    a: &DMatrix<f64>,
    g: &DMatrix<f64>,
    want_vectors: bool,
    tol: &Tolerances,
) -> Result<SymmetricEigen> {
    let n = a.nrows();
    if g.nrows() != n || g.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "gram is {}x{}, form is {n}x{n}",
            g.nrows(),
            g.ncols()
        )));
    }
    if *g == DMatrix::identity(n, n) {
        return symmetric_eigen(a, want_vectors, tol);
    }
    let chol = nalgebra::Cholesky::new(g.clone()).ok_or(Error::NotPositiveDefinite)?;
    let l = chol.l();
    let x = l.solve_lower_triangular(a).ok_or(Error::NotPositiveDefinite)?;
    let c = l
        .solve_lower_triangular(&x.transpose())
        .ok_or(Error::NotPositiveDefinite)?;
    let c = (&c + c.transpose()) * 0.5;
    let mut eig = symmetric_eigen(&c, want_vectors, tol)?;
    if let Some(y) = eig.vectors.take() {
        let vecs = l.tr_solve_lower_triangular(&y).ok_or(Error::NotPositiveDefinite)?;
        eig.vectors = Some(vecs);
    }
    Ok(eig)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn two_by_two_swap_matrix() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let e = symmetric_eigen(&a, true, &Tolerances::default()).unwrap();
        assert_relative_eq!(e.values[0], -1.0, epsilon = 1e-14);
        assert_relative_eq!(e.values[1], 1.0, epsilon = 1e-14);
        let v = e.vectors.unwrap();
        // (1,-1)/√2 up to sign
        assert_relative_eq!(v[(0, 0)].abs(), 0.5_f64.sqrt(), epsilon = 1e-14);
        assert_relative_eq!(v[(0, 0)], -v[(1, 0)], epsilon = 1e-14);
    }

    #[test]
    fn reconstructs_random_matrix() {
        let n = 12;
        let a = DMatrix::from_fn(n, n, |i, j| ((i * 7 + j * 7 + i * j) % 11) as f64 - 5.0);
        let e = symmetric_eigen(&a, true, &Tolerances::default()).unwrap();
        let v = e.vectors.unwrap();
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(e.values.clone()));
        let back = &v * d * v.transpose();
        assert!((back - &a).norm() <= 1e-11 * a.norm());
        assert!((v.transpose() * &v - DMatrix::identity(n, n)).norm() < 1e-12);
    }

    #[test]
    fn generalized_matches_scaled_problem() {
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 3.0]);
        let g = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]);
        let e = generalized_eigen(&a, &g, true, &Tolerances::default()).unwrap();
        assert_relative_eq!(e.values[0], 1.0, epsilon = 1e-14);
        assert_relative_eq!(e.values[1], 3.0, epsilon = 1e-14);
        let v = e.vectors.unwrap();
        assert!((v.transpose() * &g * &v - DMatrix::identity(2, 2)).norm() < 1e-13);
    }

    #[test]
    fn sweep_budget_is_enforced() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, -1.0]);
        let tol = Tolerances {
            jacobi_max_sweeps: 0,
            ..Tolerances::default()
        };
        assert!(matches!(
            symmetric_eigen(&a, false, &tol),
            Err(Error::EigensolverFailure { .. })
        ));
    }
}
