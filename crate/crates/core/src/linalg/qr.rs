//! Householder QR with column pivoting.

use nalgebra::DMatrix;

/// Factors `M·Π = Q·R` with full orthogonal `Q` (`m×m`) and returns
/// `(rank, Q)`. A pivot counts toward the rank when `|R_jj| > rel_tol · |R_00|`.
pub fn col_piv_qr(m: &DMatrix<f64>, rel_tol: f64) -> (usize, DMatrix<f64>) {
    let (rows, cols) = m.shape();
    let mut r = m.clone();
    let mut q = DMatrix::<f64>::identity(rows, rows);
    let mut diag = Vec::new();

    for j in 0..rows.min(cols) {
        let norms: Vec<f64> = (j..cols).map(|c| r.view((j, c), (rows - j, 1)).norm()).collect();
        let (best, &best_norm) = norms
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty column range");
        if best_norm == 0.0 {
            break;
        }
        r.swap_columns(j, j + best);

        let x0 = r[(j, j)];
        let alpha = if x0 >= 0.0 { -best_norm } else { best_norm };
        let mut v = r.view((j, j), (rows - j, 1)).into_owned();
        v[0] -= alpha;
        let vn = v.norm();
        if vn > 0.0 {
            v /= vn;
            // R[j.., j..] -= 2 v (vᵀ R[j.., j..])
            let mut block = r.view_mut((j, j), (rows - j, cols - j));
            let proj = v.transpose() * &block;
            block -= (&v * proj) * 2.0;
            // Q[:, j..] -= 2 (Q[:, j..] v) vᵀ
            let mut qb = q.view_mut((0, j), (rows, rows - j));
            let qv = &qb * &v;
            qb -= (qv * v.transpose()) * 2.0;
        }
        diag.push(r[(j, j)].abs());
    }

    let lead = diag.first().copied().unwrap_or(0.0);
    let rank = if lead == 0.0 {
        0
    } else {
        diag.iter().take_while(|d| **d > rel_tol * lead).count()
    };
    (rank, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_dependent_columns() {
        // columns (1,0,0), (0,1,0), (1,1,0)
        let m = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0]);
        let (rank, q) = col_piv_qr(&m, 1e-10);
        assert_eq!(rank, 2);
        assert!((q.transpose() * &q - DMatrix::identity(3, 3)).norm() < 1e-14);
        // trailing column of Q spans the complement of the column space
        let tail = q.column(2);
        assert!((m.transpose() * tail).norm() < 1e-14);
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let m = DMatrix::<f64>::zeros(3, 2);
        let (rank, q) = col_piv_qr(&m, 1e-10);
        assert_eq!(rank, 0);
        assert_eq!(q, DMatrix::identity(3, 3));
    }
}
