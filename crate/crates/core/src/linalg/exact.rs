use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Diagonalization, Field, RawSolve, Sign, Tolerances};
use crate::error::{Error, Result};

/// Arbitrary-precision rational scalar of the exact backend.
pub type Rational = BigRational;

/// Parses `"n"`, `"n/d"` or a decimal literal such as `"-1.25e-3"` into an
/// exact rational. Decimal literals are read digit by digit, so `"0.1"` is
/// exactly one tenth.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse().ok()?;
    let scale = exponent - frac_part.len() as i32 - 1;
    let ten = BigInt::from(10u32);
    let mut value = BigRational::from_integer(digits);
    if scale >= 0 {
        value *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if negative { -value } else { value })
}

impl Field for BigRational {
    const EXACT: bool = true;
    const NAME: &'static str = "exact";

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn sign(&self, _band: f64) -> (Sign, bool) {
        let s = if self.is_zero() {
            Sign::Zero
        } else if self.is_negative() {
            Sign::Negative
        } else {
            Sign::Positive
        };
        (s, false)
    }

    fn asymmetry(m: &DMatrix<Self>, _tol: &Tolerances) -> Option<f64> {
        if !m.is_square() {
            return Some(f64::INFINITY);
        }
        let n = m.nrows();
        let mut worst: Option<f64> = None;
        for i in 0..n {
            for j in (i + 1)..n {
                if m[(i, j)] != m[(j, i)] {
                    let d = Field::to_f64(&(&m[(i, j)] - &m[(j, i)])).abs();
                    worst = Some(worst.map_or(d, |w| w.max(d)));
                }
            }
        }
        worst
    }

    fn diagonalize(a: &DMatrix<Self>, _gram: &DMatrix<Self>, _tol: &Tolerances) -> Result<Diagonalization<Self>> {
        let (basis, values) = congruence(a);
        Ok(Diagonalization {
            basis,
            values,
            band: 0.0,
        })
    }

    fn null_space(c: &DMatrix<Self>, _tol: &Tolerances) -> (usize, DMatrix<Self>) {
        let (rref, pivots) = row_reduce(c.clone());
        let n = c.ncols();
        let free: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
        let mut basis = DMatrix::zeros(n, free.len());
        for (k, &fc) in free.iter().enumerate() {
            basis[(fc, k)] = BigRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                basis[(pc, k)] = -rref[(row, fc)].clone();
            }
        }
        (pivots.len(), basis)
    }

    fn solve_spd(g: &DMatrix<Self>, b: &DVector<Self>) -> Result<DVector<Self>> {
        let n = g.nrows();
        let mut aug = DMatrix::zeros(n, n + 1);
        aug.view_mut((0, 0), (n, n)).copy_from(g);
        aug.set_column(n, b);
        let (rref, pivots) = row_reduce(aug);
        if pivots.len() != n || pivots.contains(&n) {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(DVector::from_iterator(n, (0..n).map(|i| rref[(i, n)].clone())))
    }

    fn solve_symmetric(a: &DMatrix<Self>, f: &DVector<Self>, tol: &Tolerances) -> RawSolve<Self> {
        let n = a.nrows();
        let mut aug = DMatrix::zeros(n, n + 1);
        aug.view_mut((0, 0), (n, n)).copy_from(a);
        aug.set_column(n, f);
        let (rref, pivots) = row_reduce(aug);
        if pivots.contains(&n) {
            // f has a component outside ran(A) = Ker(A)^⊥; pick a kernel
            // vector that f does not annihilate.
            let (_, kernel) = Self::null_space(a, tol);
            let witness = kernel
                .column_iter()
                .map(|c| c.into_owned())
                .find(|k| !super::dot(k, f).is_zero())
                .expect("f outside ran(A) pairs nontrivially with Ker(A)");
            return RawSolve {
                solution: None,
                kernel_component: witness,
                residual: f64::INFINITY,
                marginal: false,
            };
        }
        let mut u = DVector::zeros(n);
        for (row, &pc) in pivots.iter().enumerate() {
            u[pc] = rref[(row, n)].clone();
        }
        RawSolve {
            solution: Some(u),
            kernel_component: DVector::zeros(n),
            residual: 0.0,
            marginal: false,
        }
    }
}

/// Reduced row echelon form with the list of pivot columns.
pub(crate) fn row_reduce(mut m: DMatrix<BigRational>) -> (DMatrix<BigRational>, Vec<usize>) {
    let (rows, cols) = m.shape();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        m.swap_rows(r, p);
        let inv = m[(r, c)].recip();
        for j in c..cols {
            let v = &m[(r, j)] * &inv;
            m[(r, j)] = v;
        }
        for i in 0..rows {
            if i == r || m[(i, c)].is_zero() {
                continue;
            }
            let factor = m[(i, c)].clone();
            for j in c..cols {
                let v = &m[(r, j)] * &factor;
                m[(i, j)] -= v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

/// Symmetric Gaussian congruence with diagonal pivoting. Returns `P` and `d`
/// with `Pᵀ·A·P = diag(d)`.
///
/// When every remaining diagonal entry vanishes but some off-diagonal
/// `a_ij = b` does not, the basis change `e_i ← e_i + e_j` turns the
/// hyperbolic pair into pivots `2b` and `-b/2`, contributing one negative and
/// one positive square.
pub(crate) fn congruence(a: &DMatrix<BigRational>) -> (DMatrix<BigRational>, Vec<BigRational>) {
    let n = a.nrows();
    let mut w = a.clone();
    let mut p = DMatrix::<BigRational>::identity(n, n);
    let mut d = Vec::with_capacity(n);

    for k in 0..n {
        let pivot = match (k..n).find(|&i| !w[(i, i)].is_zero()) {
            Some(i) => Some(i),
            None => hyperbolic_pair(&w, k).map(|(i, j)| {
                add_index(&mut w, &mut p, i, j);
                i
            }),
        };
        let Some(i) = pivot else {
            d.extend((k..n).map(|_| BigRational::zero()));
            break;
        };
        swap_index(&mut w, &mut p, k, i);

        let piv = w[(k, k)].clone();
        for r in (k + 1)..n {
            if w[(k, r)].is_zero() {
                continue;
            }
            let factor = &w[(k, r)] / &piv;
            for c in (k + 1)..n {
                let v = &factor * &w[(k, c)];
                w[(r, c)] -= v;
            }
            for row in 0..n {
                let v = &factor * &p[(row, k)];
                p[(row, r)] -= v;
            }
        }
        for r in (k + 1)..n {
            w[(k, r)] = BigRational::zero();
            w[(r, k)] = BigRational::zero();
        }
        d.push(piv);
    }
    (p, d)
}

fn hyperbolic_pair(w: &DMatrix<BigRational>, k: usize) -> Option<(usize, usize)> {
    let n = w.nrows();
    (k..n).find_map(|i| ((i + 1)..n).find(|&j| !w[(i, j)].is_zero()).map(|j| (i, j)))
}

/// Basis change `e_i ← e_i + e_j` applied to the working matrix and to `P`.
fn add_index(w: &mut DMatrix<BigRational>, p: &mut DMatrix<BigRational>, i: usize, j: usize) {
    let n = w.nrows();
    for c in 0..n {
        let v = w[(j, c)].clone();
        w[(i, c)] += v;
    }
    for r in 0..n {
        let v = w[(r, j)].clone();
        w[(r, i)] += v;
    }
    for r in 0..n {
        let v = p[(r, j)].clone();
        p[(r, i)] += v;
    }
}

fn swap_index(w: &mut DMatrix<BigRational>, p: &mut DMatrix<BigRational>, a: usize, b: usize) {
    if a != b {
        w.swap_rows(a, b);
        w.swap_columns(a, b);
        p.swap_columns(a, b);
    }
}
