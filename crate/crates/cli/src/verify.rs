//! The `verify` suites: each one samples points from the seed and folds the
//! per-state reports into a single report.

use clap::ValueEnum;
use parakepler::geometry::{constraint_check_all, metric_pullback_check, spherical_to_parabolic};
use parakepler::kepler::admissible_states;
use parakepler::operators::{
    b_operator_residual, hamiltonian_residual, momentum_commutators, ode_residual, runge_lenz_check, QPolynomial,
};
use parakepler::samples::{ode_points, parabolic_points, quasi_points, spherical_points};
use parakepler::sampling::Sampler;
use parakepler::{Error, ResidualReport, SpaceTag, StateParams};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Ode,
    Hamiltonian,
    Boperator,
    Rungelenz,
    Metric,
    Constraint,
    Commutators,
    All,
}

impl Suite {
    const EACH: [Suite; 7] = [
        Suite::Ode,
        Suite::Hamiltonian,
        Suite::Boperator,
        Suite::Rungelenz,
        Suite::Metric,
        Suite::Constraint,
        Suite::Commutators,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Ode => "ode",
            Suite::Hamiltonian => "hamiltonian",
            Suite::Boperator => "boperator",
            Suite::Rungelenz => "rungelenz",
            Suite::Metric => "metric",
            Suite::Constraint => "constraint",
            Suite::Commutators => "commutators",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyConfig {
    pub space: SpaceTag,
    pub e: f64,
    pub max_k: u32,
    pub seed: u64,
    pub tol: Option<f64>,
    pub perturb_eps: f64,
}

pub const ODE_POINTS: usize = 100;
pub const OPERATOR_POINTS: usize = 200;
pub const RUNGE_LENZ_POINTS: usize = 60;
pub const RUNGE_LENZ_MAX_K: u32 = 2;
pub const RUNGE_LENZ_STEP: f64 = 1e-3;
pub const METRIC_POINTS: usize = 200;
pub const CONSTRAINT_POINTS: usize = 10_000;
pub const POLYNOMIALS: usize = 20;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub suite: &'static str,
    pub report: ResidualReport,
    /// Labels of the individual runs that failed.
    pub failures: Vec<String>,
}

impl VerifyConfig {
    fn judge(&self, r: ResidualReport) -> ResidualReport {
        match self.tol {
            Some(t) => r.with_tolerance(t),
            None => r,
        }
    }

    fn states(&self) -> Result<Vec<StateParams>, Error> {
        let states: Vec<_> = admissible_states(self.space, self.e, self.max_k)
            .into_iter()
            .map(|s| s.perturbed(self.perturb_eps, 0.0, 0.0))
            .collect();
        if states.is_empty() {
            return Err(Error::NotBoundState(format!(
                "no bound states for {} with e = {} and k <= {}",
                self.space, self.e, self.max_k
            )));
        }
        Ok(states)
    }

    fn seed_for(&self, suite: Suite, index: usize) -> u64 {
        let offset = Suite::EACH.iter().position(|&s| s == suite).unwrap_or(0) as u64;
        self.seed.wrapping_mul(1_000_003).wrapping_add(offset * 100_000 + index as u64)
    }
}

fn state_label(base: &str, s: &StateParams) -> String {
    format!("{base}[{},{},{}]", s.qn.n1, s.qn.n2, s.qn.m)
}

fn fold(cfg: &VerifyConfig, suite: Suite, label: String, runs: Vec<ResidualReport>) -> SuiteResult {
    let runs: Vec<_> = runs.into_iter().map(|r| cfg.judge(r)).collect();
    let failures = runs.iter().filter(|r| !r.passed).map(|r| r.label.clone()).collect();
    SuiteResult { suite: suite.name(), report: ResidualReport::merge(&label, &runs), failures }
}

pub fn run_suite(cfg: &VerifyConfig, suite: Suite) -> Result<Vec<SuiteResult>, Error> {
    if suite == Suite::All {
        return Suite::EACH.iter().map(|&s| run_one(cfg, s)).collect();
    }
    Ok(vec![run_one(cfg, suite)?])
}

fn run_one(cfg: &VerifyConfig, suite: Suite) -> Result<SuiteResult, Error> {
    let space = cfg.space;
    let mut runs = Vec::new();
    match suite {
        Suite::Ode => {
            for (i, s) in cfg.states()?.iter().enumerate() {
                for which in [1u8, 2] {
                    let pts = ode_points(s, which, cfg.seed_for(suite, 2 * i + which as usize), ODE_POINTS);
                    let mut r = ode_residual(s, which, &pts)?;
                    r.label = state_label(&r.label, s);
                    runs.push(r);
                }
            }
        }
        Suite::Hamiltonian | Suite::Boperator => {
            for (i, s) in cfg.states()?.iter().enumerate() {
                let pts = parabolic_points(space, cfg.seed_for(suite, i), OPERATOR_POINTS);
                let mut r = if suite == Suite::Hamiltonian {
                    hamiltonian_residual(s, &pts)
                } else {
                    b_operator_residual(s, &pts)
                };
                r.label = state_label(&r.label, s);
                runs.push(r);
            }
        }
        Suite::Rungelenz => {
            let states: Vec<_> = cfg.states()?.into_iter().filter(|s| s.k <= RUNGE_LENZ_MAX_K).collect();
            for (i, s) in states.iter().enumerate() {
                let pts = quasi_points(space, cfg.seed_for(suite, i), RUNGE_LENZ_POINTS);
                let mut r = runge_lenz_check(s, &pts, RUNGE_LENZ_STEP)?;
                r.label = state_label(&r.label, s);
                runs.push(r);
            }
        }
        Suite::Metric => {
            for (i, p) in spherical_points(space, cfg.seed_for(suite, 0), METRIC_POINTS).iter().enumerate() {
                if p.chi <= 0.06 || (space == SpaceTag::H3 && p.chi > 3.0) {
                    continue;
                }
                let mut r = metric_pullback_check(space, p, 1e-5)?;
                r.label = format!("{}#{i}", r.label);
                runs.push(r);
            }
        }
        Suite::Constraint => {
            // the constraint lives on the complex S₃ chart whatever --space says
            let pts: Vec<_> = spherical_points(SpaceTag::S3, cfg.seed_for(suite, 0), CONSTRAINT_POINTS)
                .iter()
                .map(|sp| spherical_to_parabolic(SpaceTag::S3, sp))
                .collect::<Result<_, _>>()?;
            runs.push(constraint_check_all(&pts));
        }
        Suite::Commutators => {
            let mut sampler = Sampler::new(cfg.seed_for(suite, 0));
            for i in 0..POLYNOMIALS {
                let f = QPolynomial::random(&mut sampler, 6, 12)?;
                let mut r = momentum_commutators(space, &f)?;
                r.label = format!("{}#{i}", r.label);
                runs.push(r);
            }
        }
        Suite::All => unreachable!("expanded by run_suite"),
    }
    let label = format!("{}-{}", suite.name(), if suite == Suite::Constraint { SpaceTag::S3 } else { space });
    Ok(fold(cfg, suite, label, runs))
}
