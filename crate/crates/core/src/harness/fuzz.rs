//! Seeded campaigns comparing predicted constrained indices with the
//! restriction oracle.
//!
//! Trial `i` draws from `ChaCha8Rng::seed_from_u64(seed)` on stream `i`, so
//! any trial can be replayed on its own and the summary does not depend on
//! evaluation order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::generate::{self, Instance};
use super::problem::Backend;
use crate::bilinear::{InnerProductSpace, SymmetricForm};
use crate::constraint::{classify, predict_multi, Branch, Functional};
use crate::error::{Error, Result};
use crate::linalg::{int_matrix, Field, Rational, Tolerances};

/// Largest dimension accepted by the exact backend.
pub const EXACT_DIM_LIMIT: usize = 12;

/// Dumps kept in a summary; further failures are only counted.
const MAX_DUMPS: usize = 25;

const BRANCHES: [Branch; 4] = [
    Branch::NegativePhi,
    Branch::ZeroPhi,
    Branch::PositivePhi,
    Branch::NotInRange,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Campaign {
    /// One constraint per trial; trial `i` targets branch `i mod 4`.
    Single,
    /// Two or three independent in-range constraints per trial; every third
    /// trial has a singular dual gram matrix by construction.
    Multi,
}

impl std::str::FromStr for Campaign {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "single" => Ok(Campaign::Single),
            "multi" => Ok(Campaign::Multi),
            other => Err(format!("unknown campaign `{other}` (expected single or multi)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzConfig {
    pub seed: u64,
    pub trials: usize,
    pub dim_max: usize,
    pub backend: Backend,
    pub campaign: Campaign,
    pub tolerances: Tolerances,
}

impl FuzzConfig {
    pub fn new(seed: u64, trials: usize, dim_max: usize, backend: Backend, campaign: Campaign) -> Self {
        FuzzConfig {
            seed,
            trials,
            dim_max,
            backend,
            campaign,
            tolerances: Tolerances::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let min = match self.campaign {
            Campaign::Single => 2,
            Campaign::Multi => 3,
        };
        if self.dim_max < min {
            return Err(Error::validation(
                "dim_max",
                format!("must be at least {min} for this campaign"),
            ));
        }
        if self.backend == Backend::Exact && self.dim_max > EXACT_DIM_LIMIT {
            return Err(Error::validation(
                "dim_max",
                format!("must be at most {EXACT_DIM_LIMIT} with the exact backend"),
            ));
        }
        Ok(())
    }

    /// Generator for trial `index`.
    pub fn rng(&self, index: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        rng
    }

    /// The instance drawn for trial `index`.
    pub fn instance(&self, index: usize) -> Instance {
        let mut rng = self.rng(index);
        match self.campaign {
            Campaign::Single => generate::single(&mut rng, self.dim_max, BRANCHES[index % 4]),
            Campaign::Multi => {
                let k = if index.is_multiple_of(2) || self.dim_max < 4 {
                    2
                } else {
                    3
                };
                generate::multi(&mut rng, self.dim_max, k, index % 3 == 2)
            }
        }
    }
}

/// Counts indexed by [`Branch`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct BranchCounts {
    pub negative_phi: usize,
    pub zero_phi: usize,
    pub positive_phi: usize,
    pub not_in_range: usize,
}

impl BranchCounts {
    fn bump(&mut self, b: Branch) {
        match b {
            Branch::NegativePhi => self.negative_phi += 1,
            Branch::ZeroPhi => self.zero_phi += 1,
            Branch::PositivePhi => self.positive_phi += 1,
            Branch::NotInRange => self.not_in_range += 1,
        }
    }

    pub fn min(&self) -> usize {
        self.negative_phi
            .min(self.zero_phi)
            .min(self.positive_phi)
            .min(self.not_in_range)
    }
}

/// Oracle nullity change `n^φ − n` for single-constraint trials.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct NullityCases {
    pub plus_one: usize,
    pub unchanged: usize,
    pub minus_one: usize,
}

/// `(morse index, nullity)`.
pub type IndexPair = (usize, usize);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialDump {
    pub trial: usize,
    pub reason: String,
    pub instance: Instance,
    pub full: Option<IndexPair>,
    pub predicted: Option<IndexPair>,
    pub oracle: Option<IndexPair>,
    pub branch: Option<Branch>,
}

/// Per-trial result before reduction.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub trial: usize,
    pub instance: Instance,
    pub full: IndexPair,
    pub predicted: IndexPair,
    pub oracle: IndexPair,
    pub branch: Option<Branch>,
    /// `(c, c0)` for multi-constraint trials.
    pub multi: Option<(usize, usize)>,
    pub marginal: bool,
}

impl TrialOutcome {
    pub fn agrees(&self) -> bool {
        self.predicted == self.oracle
    }

    pub fn index_drop(&self) -> i64 {
        self.full.0 as i64 - self.oracle.0 as i64
    }

    pub fn nullity_change(&self) -> i64 {
        self.oracle.1 as i64 - self.full.1 as i64
    }

    /// Oracle drop in `{0, 1}` and nullity change in `{−1, 0, 1}`.
    pub fn at_most_one(&self) -> bool {
        (0..=1).contains(&self.index_drop()) && (-1..=1).contains(&self.nullity_change())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzSummary {
    pub campaign: Campaign,
    pub backend: Backend,
    pub seed: u64,
    pub trials: usize,
    pub dim_max: usize,
    pub agreements: usize,
    pub disagreements: usize,
    pub errors: usize,
    pub marginal: usize,
    /// Branches as classified by the predictor.
    pub branch_counts: BranchCounts,
    /// Predicted branch differs from the branch the generator targeted.
    pub target_mismatches: usize,
    pub nullity_cases: NullityCases,
    pub at_most_one_violations: usize,
    /// Histogram of `c` (index drop) over multi-constraint trials.
    pub c_histogram: Vec<usize>,
    /// Histogram of `c0` (nullity gain) over multi-constraint trials.
    pub c0_histogram: Vec<usize>,
    /// Required per-branch count, `⌈trials/20⌉` for single campaigns.
    pub coverage_required: usize,
    pub coverage_ok: bool,
    pub failures: usize,
    pub dumps: Vec<TrialDump>,
}

impl FuzzSummary {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.coverage_ok
    }
}

/// Runs one trial in the configured backend.
pub fn run_trial(config: &FuzzConfig, index: usize) -> Result<TrialOutcome> {
    let instance = config.instance(index);
    match config.backend {
        Backend::Exact => evaluate::<Rational>(index, instance, &config.tolerances),
        Backend::Float => evaluate::<f64>(index, instance, &config.tolerances),
    }
}

/// Predicted and oracle indices for an integer instance.
pub fn evaluate<T: Field>(trial: usize, instance: Instance, tol: &Tolerances) -> Result<TrialOutcome> {
    let to_matrix = |m: &[Vec<i64>]| int_matrix::<T>(&m.iter().map(Vec::as_slice).collect::<Vec<_>>());
    let n = instance.dim();
    let gram = match &instance.gram {
        Some(g) => to_matrix(g),
        None => nalgebra::DMatrix::identity(n, n),
    };
    let space = InnerProductSpace::new(gram, tol)?;
    let form = SymmetricForm::with_tolerances(space, to_matrix(&instance.form), *tol)?;
    let constraints: Vec<Functional<T>> = instance.constraints.iter().map(|c| Functional::from_ints(c)).collect();

    let full = form.inertia()?;
    let restricted = form.restrict(&constraints)?.inertia()?;
    let mut marginal = full.marginal || restricted.marginal;
    let (predicted, branch, multi) = if let [phi] = constraints.as_slice() {
        let (b, m) = classify(&form, phi)?;
        marginal |= m;
        let nullity = (full.zero as i64 + b.nullity_change() as i64).max(0) as usize;
        ((full.negative.saturating_sub(b.index_drop()), nullity), Some(b), None)
    } else {
        let report = predict_multi(&form, &constraints)?;
        marginal |= report.gram_inertia.marginal;
        (
            (report.predicted_morse_index, report.predicted_nullity),
            None,
            Some((report.c, report.c0)),
        )
    };
    Ok(TrialOutcome {
        trial,
        instance,
        full: (full.negative, full.zero),
        predicted,
        oracle: (restricted.negative, restricted.zero),
        branch,
        multi,
        marginal,
    })
}

/// Runs the campaign and reduces the trials in index order.
pub fn fuzz(config: &FuzzConfig) -> Result<FuzzSummary> {
    config.validate()?;
    let mut s = FuzzSummary {
        campaign: config.campaign,
        backend: config.backend,
        seed: config.seed,
        trials: config.trials,
        dim_max: config.dim_max,
        agreements: 0,
        disagreements: 0,
        errors: 0,
        marginal: 0,
        branch_counts: BranchCounts::default(),
        target_mismatches: 0,
        nullity_cases: NullityCases::default(),
        at_most_one_violations: 0,
        c_histogram: Vec::new(),
        c0_histogram: Vec::new(),
        coverage_required: 0,
        coverage_ok: true,
        failures: 0,
        dumps: Vec::new(),
    };
    for index in 0..config.trials {
        let outcome = match run_trial(config, index) {
            Ok(o) => o,
            Err(e) => {
                s.errors += 1;
                let d = TrialDump {
                    trial: index,
                    reason: format!("{}: {e}", e.kind()),
                    instance: config.instance(index),
                    full: None,
                    predicted: None,
                    oracle: None,
                    branch: None,
                };
                dump(&mut s, d);
                continue;
            }
        };
        s.marginal += outcome.marginal as usize;
        if let Some(b) = outcome.branch {
            s.branch_counts.bump(b);
            match outcome.nullity_change() {
                1 => s.nullity_cases.plus_one += 1,
                0 => s.nullity_cases.unchanged += 1,
                -1 => s.nullity_cases.minus_one += 1,
                _ => {}
            }
        }
        if let Some((c, c0)) = outcome.multi {
            bump_histogram(&mut s.c_histogram, c);
            bump_histogram(&mut s.c0_histogram, c0);
        }

        let mut reasons = Vec::new();
        if outcome.agrees() {
            s.agreements += 1;
        } else {
            s.disagreements += 1;
            reasons.push(format!(
                "predicted {:?} != oracle {:?}",
                outcome.predicted, outcome.oracle
            ));
        }
        if outcome.branch.is_some() && !outcome.at_most_one() {
            s.at_most_one_violations += 1;
            reasons.push(format!(
                "oracle drop {} / nullity change {} outside the unit range",
                outcome.index_drop(),
                outcome.nullity_change()
            ));
        }
        if let (Some(b), Some(t)) = (outcome.branch, outcome.instance.target) {
            if b != t {
                s.target_mismatches += 1;
                if config.backend == Backend::Exact {
                    reasons.push(format!("classified {b:?}, generated for {t:?}"));
                }
            }
        }
        if !reasons.is_empty() {
            let d = TrialDump {
                trial: index,
                reason: reasons.join("; "),
                full: Some(outcome.full),
                predicted: Some(outcome.predicted),
                oracle: Some(outcome.oracle),
                branch: outcome.branch,
                instance: outcome.instance,
            };
            dump(&mut s, d);
        }
    }

    if config.campaign == Campaign::Single && config.trials > 0 {
        s.coverage_required = config.trials.div_ceil(20);
        s.coverage_ok = s.branch_counts.min() >= s.coverage_required;
    }
    Ok(s)
}

fn dump(s: &mut FuzzSummary, d: TrialDump) {
    s.failures += 1;
    if s.dumps.len() < MAX_DUMPS {
        s.dumps.push(d);
    }
}

fn bump_histogram(h: &mut Vec<usize>, at: usize) {
    if h.len() <= at {
        h.resize(at + 1, 0);
    }
    h[at] += 1;
}
