//! Morse index and nullity of a symmetric form, exactly and in floating point,
//! including a non-Euclidean inner product.

use morse_index::bilinear::{InnerProductSpace, SymmetricForm};
use morse_index::linalg::{int_matrix, Rational, Tolerances};

fn main() -> Result<(), morse_index::error::Error> {
    let rows: &[&[i64]] = &[&[1, 2, 0], &[2, 1, 0], &[0, 0, 0]];

    let exact = SymmetricForm::<Rational>::from_int_rows(rows)?;
    let i = exact.inertia()?;
    println!(
        "exact:  negative {} zero {} positive {}",
        i.negative, i.zero, i.positive
    );

    let float = SymmetricForm::<f64>::from_int_rows(rows)?;
    let i = float.inertia()?;
    println!(
        "float:  negative {} zero {} positive {} (marginal: {})",
        i.negative, i.zero, i.positive, i.marginal
    );

    // S(u, v) = vᵀAu is fixed; a different gram matrix changes the operator
    // representing it, never the counts
    let gram = int_matrix::<Rational>(&[&[2, 1, 0], &[1, 2, 0], &[0, 0, 5]]);
    let space = InnerProductSpace::new(gram, &Tolerances::default())?;
    let weighted = SymmetricForm::new(space, int_matrix(rows))?;
    println!(
        "weighted: index {} nullity {}",
        weighted.morse_index()?,
        weighted.nullity()?
    );

    let d = float.fundamental_decomposition()?;
    println!(
        "decomposition: {} negative, {} null, {} positive directions",
        d.basis_neg.len(),
        d.basis_zero.len(),
        d.basis_pos.len()
    );
    Ok(())
}
