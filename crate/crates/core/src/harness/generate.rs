//! Random integer instances with prescribed inertia and prescribed branch.
//!
//! Forms are built as `A = Bᵀ Λ B` with `B` unimodular, so the inertia of
//! `A` is read off the integer diagonal `Λ`. For `f = Bᵀ Λ w` the dual
//! solve has `u = B⁻¹ w` and `φ(u) = wᵀ Λ w`, which makes every branch
//! reachable by choosing `w`. Adding a component supported on the zero
//! entries of `Λ` pushes `f` out of the range.

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::constraint::Branch;

/// Integer instance: form, gram and constraint rows.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Instance {
    pub form: Vec<Vec<i64>>,
    pub gram: Option<Vec<Vec<i64>>>,
    pub constraints: Vec<Vec<i64>>,
    /// Diagonal of `Λ`, i.e. the inertia the form was built with.
    pub lambda: Vec<i64>,
    /// The branch targeted by construction (single-constraint instances).
    pub target: Option<Branch>,
}

impl Instance {
    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    pub fn negative_count(&self) -> usize {
        self.lambda.iter().filter(|l| **l < 0).count()
    }

    pub fn zero_count(&self) -> usize {
        self.lambda.iter().filter(|l| **l == 0).count()
    }
}

/// Unimodular integer matrix from `2n` random shears and a shuffle of rows.
pub fn unimodular<R: Rng>(rng: &mut R, n: usize) -> DMatrix<i64> {
    unimodular_with(rng, n, 2 * n)
}

/// Unimodular integer matrix from `shears` random row shears `rᵢ += c·rⱼ`,
/// `|c| ≤ 2`, followed by a shuffle of rows.
pub fn unimodular_with<R: Rng>(rng: &mut R, n: usize, shears: usize) -> DMatrix<i64> {
    let mut b = DMatrix::<i64>::identity(n, n);
    if n < 2 {
        return b;
    }
    for _ in 0..shears {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = *[-2, -1, 1, 2].choose(rng).expect("nonempty");
        let row_j = b.row(j).into_owned();
        let mut row_i = b.row_mut(i);
        row_i += row_j * c;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    b.select_rows(&order)
}

/// `Bᵀ Λ B`.
pub fn congruent(b: &DMatrix<i64>, lambda: &[i64]) -> DMatrix<i64> {
    let l = DMatrix::from_diagonal(&DVector::from_column_slice(lambda));
    b.transpose() * l * b
}

/// Symmetric positive definite `I + CᵀC` with small entries.
pub fn spd_gram<R: Rng>(rng: &mut R, n: usize) -> DMatrix<i64> {
    let c = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1..=1));
    DMatrix::identity(n, n) + c.transpose() * c
}

fn random_lambda<R: Rng>(rng: &mut R, n: usize) -> Vec<i64> {
    (0..n)
        .map(|_| match rng.gen_range(0..6) {
            0 => 0,
            1 | 2 => -rng.gen_range(1..=4),
            _ => rng.gen_range(1..=4),
        })
        .collect()
}

fn random_w<R: Rng>(rng: &mut R, n: usize) -> Vec<i64> {
    (0..n).map(|_| rng.gen_range(-3..=3)).collect()
}

fn quad(lambda: &[i64], w: &[i64]) -> i64 {
    lambda.iter().zip(w).map(|(l, x)| l * x * x).sum()
}

fn to_rows(m: &DMatrix<i64>) -> Vec<Vec<i64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn pick<R: Rng>(rng: &mut R, lambda: &[i64], pred: impl Fn(i64) -> bool) -> Option<usize> {
    let idx: Vec<usize> = (0..lambda.len()).filter(|&i| pred(lambda[i])).collect();
    idx.choose(rng).copied()
}

/// Index of an entry of `Λ` satisfying `pred`, creating one by overwriting
/// a random slot with `value` if there is none.
fn ensure<R: Rng>(rng: &mut R, lambda: &mut [i64], pred: impl Fn(i64) -> bool, value: i64) -> usize {
    if let Some(i) = pick(rng, lambda, pred) {
        return i;
    }
    let i = rng.gen_range(0..lambda.len());
    lambda[i] = value;
    i
}

/// Single-constraint instance of dimension in `2..=dim_max` whose functional
/// lands in `target`.
pub fn single<R: Rng>(rng: &mut R, dim_max: usize, target: Branch) -> Instance {
    let n = rng.gen_range(2..=dim_max.max(2));
    let b = unimodular(rng, n);
    let mut lambda = random_lambda(rng, n);
    let mut w = random_w(rng, n);
    let mut z = vec![0_i64; n];

    match target {
        Branch::NegativePhi | Branch::PositivePhi => {
            let neg = target == Branch::NegativePhi;
            let value = rng.gen_range(1..=4);
            let i = if neg {
                ensure(rng, &mut lambda, |l| l < 0, -value)
            } else {
                ensure(rng, &mut lambda, |l| l > 0, value)
            };
            // make Λ_i w_i² dominate the rest with the required sign
            w[i] = 0;
            let rest = quad(&lambda, &w);
            let li = lambda[i].abs();
            let need = if neg { rest + 1 } else { 1 - rest };
            let mut wi = 1;
            while li * wi * wi < need {
                wi += 1;
            }
            w[i] = if rng.gen_bool(0.5) { wi } else { -wi };
        }
        Branch::ZeroPhi => {
            // Λ_i = −a s², Λ_j = a t², w_i = t, w_j = s gives wᵀΛw = 0
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let (a, s, t) = (rng.gen_range(1..=2), rng.gen_range(1..=2), rng.gen_range(1..=2));
            lambda[i] = -a * s * s;
            lambda[j] = a * t * t;
            for (k, wk) in w.iter_mut().enumerate() {
                if k != i && k != j && lambda[k] != 0 {
                    *wk = 0;
                }
            }
            w[i] = t;
            w[j] = if rng.gen_bool(0.5) { s } else { -s };
        }
        Branch::NotInRange => {
            let k = ensure(rng, &mut lambda, |l| l == 0, 0);
            for (idx, zi) in z.iter_mut().enumerate() {
                if lambda[idx] == 0 && (idx == k || rng.gen_bool(0.5)) {
                    *zi = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
                }
            }
        }
    }

    let lw: DVector<i64> = DVector::from_iterator(n, lambda.iter().zip(&w).map(|(l, x)| l * x));
    let f = b.transpose() * (lw + DVector::from_vec(z));
    debug_assert!(f.iter().any(|x| *x != 0));
    let gram = rng.gen_bool(1.0 / 3.0).then(|| to_rows(&spd_gram(rng, n)));
    Instance {
        form: to_rows(&congruent(&b, &lambda)),
        gram,
        constraints: vec![f.iter().copied().collect()],
        lambda,
        target: Some(target),
    }
}

/// Instance with `k` linearly independent in-range constraints,
/// `fᵢ = Bᵀ Λ wᵢ`, in dimension `k+1..=max(dim_max, k+1)`.
///
/// With `degenerate`, `w₁` is Λ-isotropic and Λ-orthogonal to the others, so the
/// dual gram matrix `Mᵢⱼ = wᵢᵀ Λ wⱼ` has a zero row and `c0 ≥ 1`.
pub fn multi<R: Rng>(rng: &mut R, dim_max: usize, k: usize, degenerate: bool) -> Instance {
    let n = rng.gen_range(k + 1..=dim_max.max(k + 1));
    let b = unimodular(rng, n);
    let mut lambda = random_lambda(rng, n);
    let mut pair = None;
    if degenerate {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let (a, s, t) = (rng.gen_range(1..=2), rng.gen_range(1..=2), rng.gen_range(1..=2));
        lambda[i] = -a * s * s;
        lambda[j] = a * t * t;
        pair = Some((i, j, s, t));
    }
    // the constraints need rank(Λ) ≥ k
    while lambda.iter().filter(|l| **l != 0).count() < k + usize::from(degenerate) {
        let i = pick(rng, &lambda, |l| l == 0).expect("some zero entry");
        lambda[i] = if rng.gen_bool(0.5) { 1 } else { -1 } * rng.gen_range(1..=4);
    }
    let columns = loop {
        let mut ws: Vec<Vec<i64>> = (0..k).map(|_| random_w(rng, n)).collect();
        if let Some((i, j, s, t)) = pair {
            // w₁ = t eᵢ + s eⱼ is isotropic, and any w agreeing with a multiple
            // of w₁ on {i, j} pairs to zero with it
            ws[0] = vec![0; n];
            ws[0][i] = t;
            ws[0][j] = s;
            for w in ws.iter_mut().skip(1) {
                let m = rng.gen_range(-2..=2);
                w[i] = m * t;
                w[j] = m * s;
            }
        }
        let lw = DMatrix::from_fn(n, k, |r, c| lambda[r] * ws[c][r]);
        if integer_rank(&lw) == k {
            break lw;
        }
    };
    let f = b.transpose() * columns;
    let gram = rng.gen_bool(1.0 / 3.0).then(|| to_rows(&spd_gram(rng, n)));
    Instance {
        form: to_rows(&congruent(&b, &lambda)),
        gram,
        constraints: f.column_iter().map(|c| c.iter().copied().collect()).collect(),
        lambda,
        target: None,
    }
}

/// Rank over the rationals by fraction-free elimination on `i128`.
pub fn integer_rank(m: &DMatrix<i64>) -> usize {
    let mut a: Vec<Vec<i128>> = m.row_iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let (rows, cols) = m.shape();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..rows {
            let (top, lead) = (a[rank][c], a[r][c]);
            if lead == 0 {
                continue;
            }
            let g = gcd(top, lead);
            let pivot = a[rank].clone();
            for (x, p) in a[r][c..].iter_mut().zip(&pivot[c..]) {
                *x = *x * (top / g) - p * (lead / g);
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unimodular_has_unit_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..8 {
            let b = unimodular(&mut rng, n).map(|x| x as f64);
            assert!((b.determinant().abs() - 1.0).abs() < 1e-6, "n = {n}");
        }
    }

    #[test]
    fn targeted_phi_has_the_requested_sign() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            for target in [Branch::NegativePhi, Branch::ZeroPhi, Branch::PositivePhi] {
                let inst = single(&mut rng, 8, target);
                assert_eq!(inst.target, Some(target));
                assert!(inst.constraints[0].iter().any(|x| *x != 0));
            }
        }
    }

    #[test]
    fn multi_constraints_are_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in [2, 3] {
            for _ in 0..50 {
                let inst = multi(&mut rng, 8, k, false);
                let f = DMatrix::from_fn(inst.dim(), k, |r, c| inst.constraints[c][r]);
                assert_eq!(integer_rank(&f), k);
            }
        }
    }

    #[test]
    fn degenerate_multi_has_singular_dual_gram() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let inst = multi(&mut rng, 6, 2, true);
            assert!(inst.dim() >= 3);
            assert_eq!(inst.constraints.len(), 2);
            let f = DMatrix::from_fn(inst.dim(), 2, |r, c| inst.constraints[c][r]);
            assert_eq!(integer_rank(&f), 2);
        }
    }

    #[test]
    fn integer_rank_examples() {
        let m = DMatrix::from_row_slice(3, 2, &[1, 2, 2, 4, 3, 6]);
        assert_eq!(integer_rank(&m), 1);
        assert_eq!(integer_rank(&DMatrix::<i64>::identity(3, 3)), 3);
        assert_eq!(integer_rank(&DMatrix::<i64>::zeros(2, 2)), 0);
    }
}
