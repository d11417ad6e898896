//! Integer outputs across mesh levels, the convergence ratio of the lowest
//! Dirichlet eigenvalue, and a zero eigenvalue flagged as near-marginal.

use std::f64::consts::PI;

use morse_index::pde::{refine_and_check, CoefficientSpec, IntervalDomain, WeakConstraint};

fn main() -> Result<(), morse_index::error::Error> {
    let levels = [16, 32, 64, 128];
    let cases = [
        (
            "[0, π], p = 2.5, q = 1",
            IntervalDomain::new(0.0, PI, 16)?,
            CoefficientSpec::constant(2.5, 1.0),
        ),
        (
            "[0, 1], p = π², q = 0",
            IntervalDomain::new(0.0, 1.0, 16)?,
            CoefficientSpec::constant(PI * PI, 0.0),
        ),
    ];
    for (name, domain, coeffs) in cases {
        let r = refine_and_check(&domain, &coeffs, &levels, &WeakConstraint::Volume)?;
        println!("{name}");
        for l in &r.levels {
            println!(
                "  n = {:>3}: index {} = {} + {}, weak index {}, δ₁ = {:.6}",
                l.n,
                l.mi_q,
                l.a,
                l.b.map_or("-".to_string(), |b| b.to_string()),
                l.weak_index,
                l.dirichlet_leading.first().copied().unwrap_or(f64::NAN)
            );
        }
        let ratios: Vec<String> = r
            .richardson
            .iter()
            .map(|x| x.map_or("-".into(), |x| format!("{x:.3}")))
            .collect();
        println!(
            "  counts constant: {}, near marginal: {}, stable: {}, ratios {ratios:?}",
            r.counts_constant, r.near_marginal, r.stable
        );
    }
    Ok(())
}
