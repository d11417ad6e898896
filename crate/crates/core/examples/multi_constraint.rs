//! Several constraints at once: the index drops by the number of non-positive
//! eigenvalues of the matrix `fᵢ(uⱼ)` and the nullity grows by its kernel.

use morse_index::bilinear::SymmetricForm;
use morse_index::constraint::{diagonalize_duals, predict_multi, sequential_index_drop, Functional};
use morse_index::linalg::Rational;

fn main() -> Result<(), morse_index::error::Error> {
    let form =
        SymmetricForm::<Rational>::from_int_rows(&[&[-1, 0, 0, 0], &[0, -1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 2]])?;
    let sets: [(&str, Vec<&[i64]>); 2] = [
        ("two negative directions", vec![&[1, 0, 0, 0], &[0, 1, 0, 0]]),
        ("an isotropic pair", vec![&[1, 0, 1, 0], &[0, 1, 0, 1]]),
    ];
    for (name, rows) in sets {
        let cs: Vec<Functional<Rational>> = rows.iter().map(|r| Functional::from_ints(r)).collect();
        let r = predict_multi(&form, &cs)?;
        let oracle = form.restrict(&cs)?.inertia()?;
        println!("{name}:");
        println!(
            "  M = {:?}",
            r.gram_matrix.iter().map(|x| x.to_string()).collect::<Vec<_>>()
        );
        println!("  c = {}, c0 = {}", r.c, r.c0);
        println!(
            "  predicted index {} nullity {}; oracle index {} nullity {}",
            r.predicted_morse_index, r.predicted_nullity, oracle.negative, oracle.zero
        );
        println!("  one at a time: drop {}", sequential_index_drop(&form, &cs)?);
        let v = diagonalize_duals(&form, &r.duals)?;
        let diag: Vec<String> = v.iter().map(|x| form.quadratic(x).to_string()).collect();
        println!("  S on an S-orthogonal basis of the duals: {diag:?}");
    }
    Ok(())
}
