//! `−u'' − p u` on an interval with Robin weights: the index splits into an
//! interior (Dirichlet) part and a boundary part read off a 2×2 pencil.

use morse_index::pde::{assemble, verify_decomposition, CoefficientSpec, IntervalDomain, Potential};

fn main() -> Result<(), morse_index::error::Error> {
    let domain = IntervalDomain::new(0.0, 1.0, 64)?;
    let cases = [
        ("p = 0, q = 1", CoefficientSpec::constant(0.0, 1.0)),
        ("p = 0, q = 3", CoefficientSpec::constant(0.0, 3.0)),
        ("p = 12, q = 1", CoefficientSpec::constant(12.0, 1.0)),
        (
            "p = 3 + 20x, q = (0.5, 0)",
            CoefficientSpec::new(Potential::Polynomial(vec![3.0, 20.0]), 0.5, 0.0)?,
        ),
    ];
    for (name, coeffs) in cases {
        let r = verify_decomposition(&assemble(&domain, &coeffs)?)?;
        let mu: Vec<String> = r.steklov.eigenvalues.iter().map(|m| format!("{m:.4}")).collect();
        println!(
            "{name:<26} index {} = {} interior + {} boundary  μ = {mu:?}  ok: {}",
            r.mi_q, r.a, r.b, r.decomposition_ok
        );
    }
    Ok(())
}
