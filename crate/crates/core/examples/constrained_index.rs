//! One linear constraint: the four possible outcomes for index and nullity,
//! each compared with the restriction oracle.

use morse_index::bilinear::SymmetricForm;
use morse_index::constraint::{classify, solve_dual, Functional};
use morse_index::linalg::Rational;

fn main() -> Result<(), morse_index::error::Error> {
    // diag(-1, 1, 0): index 1, nullity 1
    let form = SymmetricForm::<Rational>::from_int_rows(&[&[-1, 0, 0], &[0, 1, 0], &[0, 0, 0]])?;
    let full = form.inertia()?;
    println!("full form: index {} nullity {}", full.negative, full.zero);

    let cases: [(&str, &[i64]); 4] = [
        ("f = (1, 0, 0)", &[1, 0, 0]),
        ("f = (1, 1, 0)", &[1, 1, 0]),
        ("f = (0, 1, 0)", &[0, 1, 0]),
        ("f = (0, 0, 1)", &[0, 0, 1]),
    ];
    for (label, coeffs) in cases {
        let phi = Functional::from_ints(coeffs);
        let (branch, _) = classify(&form, &phi)?;
        let oracle = form.restrict(std::slice::from_ref(&phi))?.inertia()?;
        let dual = solve_dual(&form, &phi)?;
        let phi_u = dual.phi_of_u().map_or("none".to_string(), |x| x.to_string());
        println!(
            "{label}: φ(u) = {phi_u:>4}, {branch:?}: predicted drop {} nullity {:+}; oracle index {} nullity {}",
            branch.index_drop(),
            branch.nullity_change(),
            oracle.negative,
            oracle.zero
        );
    }
    Ok(())
}
