//! Index under the volume constraint `∫u = 0` for a Neumann problem, and the
//! dual solution `u = −1/p` behind it.

use morse_index::constraint::{solve_dual, Functional};
use morse_index::pde::{assemble, weak_index, CoefficientSpec, IntervalDomain, WeakConstraint};

fn main() -> Result<(), morse_index::error::Error> {
    for p in [5.0, 15.0, 45.0] {
        let problem = assemble(&IntervalDomain::new(0.0, 1.0, 128)?, &CoefficientSpec::constant(p, 0.0))?;
        let r = weak_index(&problem, &WeakConstraint::Volume)?;
        let dual = solve_dual(&problem.form()?, &Functional::new(problem.volume_functional()))?;
        let u0 = dual.solution().map(|u| u[0]).unwrap_or(f64::NAN);
        println!(
            "p = {p:>4}: index {} -> {} under ∫u = 0 (predicted {:?}), u ≡ {u0:.4}, φ(u) = {:.4}",
            r.mi_full,
            r.mi_constrained_oracle,
            r.mi_constrained_predicted,
            dual.phi_of_u().copied().unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
