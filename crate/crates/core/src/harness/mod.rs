//! Problem files, seeded campaigns and reports.
//!
//! [`run`] dispatches a parsed [`ProblemFile`] to the analysis modules and
//! [`fuzz::fuzz`] drives randomized campaigns; both produce a [`RunReport`].

pub mod fuzz;
pub mod generate;
pub mod problem;
pub mod report;

use std::time::Instant;

pub use fuzz::{fuzz, Campaign, FuzzConfig, FuzzSummary};
pub use problem::{parse_problem, AbstractProblem, Backend, PdeProblem, ProblemFile};
pub use report::{ErrorInfo, RunReport, Verdict};

use crate::constraint::analyze;
use crate::error::Result;
use crate::linalg::Field;
use crate::pde::{assemble_with, refine_and_check, verify_decomposition, weak_index, WeakConstraint};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Adds wall-clock time to the report (which then is no longer reproducible byte for byte).
    pub timing: bool,
}

/// Analyzes one problem. Module errors end up in the report, never as panics.
pub fn run(problem: &ProblemFile, opts: RunOptions) -> RunReport {
    let start = Instant::now();
    let mut report = match problem {
        ProblemFile::Abstract(p) => run_abstract(p),
        ProblemFile::Pde(p) => run_pde(p),
    };
    report.input = serde_json::to_value(problem).ok();
    if opts.timing {
        report.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    report.finalize();
    report
}

/// Runs a campaign and wraps its summary in a report.
pub fn run_fuzz(config: &FuzzConfig, opts: RunOptions) -> RunReport {
    let start = Instant::now();
    let mut report = RunReport::new("fuzz");
    report.seed = Some(config.seed);
    match fuzz(config) {
        Ok(summary) => {
            if summary.marginal > 0 {
                report
                    .warnings
                    .push(format!("{} trials had marginal decisions", summary.marginal));
            }
            report.fuzz = Some(summary);
        }
        Err(e) => report.record_error(&e),
    }
    if opts.timing {
        report.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    report.finalize();
    report
}

fn run_abstract(p: &AbstractProblem) -> RunReport {
    let mut report = RunReport::new("analyze");
    let result = match p.backend {
        Backend::Exact => analyze_in(p, Clone::clone),
        Backend::Float => analyze_in(p, Field::to_f64),
    };
    match result {
        Ok(c) => {
            report.warnings.extend(c.warnings.iter().cloned());
            report.constrained = Some(c);
        }
        Err(e) => report.record_error(&e),
    }
    report
}

fn analyze_in<T: Field>(
    p: &AbstractProblem,
    convert: impl Fn(&crate::linalg::Rational) -> T,
) -> Result<crate::constraint::ConstrainedReport> {
    let (form, constraints) = p.build(convert)?;
    analyze(&form, &constraints)
}

fn run_pde(p: &PdeProblem) -> RunReport {
    let mut report = RunReport::new("pde");
    let problem = match assemble_with(&p.domain, &p.coeffs, p.tolerances) {
        Ok(problem) => problem,
        Err(e) => {
            report.record_error(&e);
            return report;
        }
    };
    if p.verify_decomposition {
        match verify_decomposition(&problem) {
            Ok(s) => {
                report.warnings.extend(s.warnings.iter().cloned());
                report.spectrum = Some(s);
            }
            Err(e) => report.record_error(&e),
        }
    }
    for c in &p.constraints {
        match weak_index(&problem, c) {
            Ok(w) => {
                report.warnings.extend(w.warnings.iter().cloned());
                report.weak.push(w);
            }
            Err(e) => report.record_error(&e),
        }
    }
    if !p.refine.is_empty() {
        let constraint = p.constraints.first().cloned().unwrap_or(WeakConstraint::Volume);
        match refine_and_check(&p.domain, &p.coeffs, &p.refine, &constraint) {
            Ok(r) => {
                if !r.stable {
                    report.warnings.push(if r.near_marginal {
                        "refinement: an eigenvalue is within its own mesh drift of zero".to_string()
                    } else {
                        "refinement: integer outputs change with the mesh".to_string()
                    });
                }
                report.refinement = Some(r);
            }
            Err(e) => report.record_error(&e),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_text(doc: &str) -> RunReport {
        run(&parse_problem(doc).unwrap(), RunOptions::default())
    }

    #[test]
    fn abstract_example_passes() {
        for backend in ["exact", "float"] {
            let r = run_text(&format!(
                r#"{{"kind":"abstract","dim":2,"form":[[-1,0],[0,1]],"constraints":[[1,0]],"backend":"{backend}"}}"#
            ));
            let c = r.constrained.as_ref().unwrap();
            assert_eq!(c.mi_constrained_predicted, Some(0));
            assert_eq!(c.mi_constrained_oracle, 0);
            assert!(r.passed());
        }
    }

    #[test]
    fn pde_closed_form_passes() {
        let r = run_text(r#"{"kind":"pde","domain":{"a":0,"b":1,"n_elements":64},"p":{"constant":0},"q_a":1,"q_b":1}"#);
        let s = r.spectrum.as_ref().unwrap();
        assert_eq!((s.mi_q, s.a, s.b), (1, 0, 1));
        assert!(r.passed());
    }

    #[test]
    fn zero_boundary_weight_fails() {
        let r = run_text(
            r#"{"kind":"pde","domain":{"a":0,"b":1,"n_elements":16},"p":{"constant":5},"q_a":0,"q_b":0,
                "constraints":["volume"]}"#,
        );
        assert!(!r.passed());
        assert_eq!(r.errors[0].kind, "ZeroBoundaryWeight");
        assert_eq!(r.weak[0].mi_constrained_oracle, 0);
    }

    #[test]
    fn reports_are_reproducible() {
        let config = FuzzConfig::new(3, 20, 5, Backend::Exact, Campaign::Single);
        let a = run_fuzz(&config, RunOptions::default()).to_json();
        let b = run_fuzz(&config, RunOptions::default()).to_json();
        assert_eq!(a, b);
        assert!(!a.contains("elapsed_ms"));
        let timed = run_fuzz(&config, RunOptions { timing: true });
        assert!(timed.elapsed_ms.is_some());
    }
}
