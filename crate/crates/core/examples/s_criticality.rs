//! A functional is critical when it cannot vanish on any maximal negative
//! subspace. Shown here by sampling negative vectors and extending each one.

use nalgebra::DVector;

use morse_index::bilinear::SymmetricForm;
use morse_index::constraint::{is_s_critical, Functional};
use morse_index::linalg::Rational;

fn q(x: i64) -> Rational {
    Rational::from_integer(x.into())
}

fn main() -> Result<(), morse_index::error::Error> {
    let form = SymmetricForm::<Rational>::from_int_rows(&[&[-1, 0, 0], &[0, -2, 0], &[0, 0, 3]])?;
    println!("index {}", form.morse_index()?);

    let critical = Functional::<Rational>::from_ints(&[1, 1, 0]);
    let harmless = Functional::<Rational>::from_ints(&[1, 0, 3]);
    for (name, phi) in [("(1, 1, 0)", &critical), ("(1, 0, 3)", &harmless)] {
        println!("\nφ = {name}: critical = {}", is_s_critical(&form, phi)?);
        for seed in [[1, 0, 0], [1, -1, 0], [2, 1, 1]] {
            let u = DVector::from_iterator(3, seed.into_iter().map(q));
            if form.quadratic(&u) >= q(0) {
                continue;
            }
            let w = form.maximal_negative_subspace_through(&u)?;
            let values: Vec<String> = w.vectors().iter().map(|v| phi.eval(v).to_string()).collect();
            println!("  W through {seed:?} (dim {}): φ on basis = {values:?}", w.dim());
        }
        let kept = form.restrict(std::slice::from_ref(phi))?.morse_index()?;
        println!("  index on Ker φ: {kept}");
    }
    Ok(())
}
