//! Certification: Monte Carlo estimates against upper bounds, the scaling
//! exponent of the adversarial lower bound, and Lorentz norms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::bounds::{
    forced_bound, log_modified_bound, moment_bound, optimized_moment_bound, power_phi_bound, sub_phi_bound,
    w_operator_bound, weibull_bound, BetaMode, BoundReport,
};
use crate::error::{Error, Result};
use crate::numerics::{linear_fit, log_space};
use crate::phi::PhiFunction;
use crate::sim::{estimate_q_multi, MartingaleSpec, MonteCarloEstimate};
use crate::tails::{EmpiricalTail, TailFunction};

/// The p-norms `|ξ(i)|_p`, identical for every index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormModel {
    /// `|ξ(i)|_p = c` for all `p` (bounded by `c`, attained for ±c).
    Constant(f64),
    /// Symmetric Weibull magnitude: `|ξ|_p = Γ(1 + p/q)^{1/p}`.
    WeibullSym(f64),
}

impl NormModel {
    pub fn norm(&self, p: f64) -> f64 {
        match *self {
            NormModel::Constant(c) => c,
            NormModel::WeibullSym(q) => gamma(1.0 + p / q).powf(1.0 / p),
        }
    }
}

/// A bound method with everything needed to evaluate it at `(n, x)`.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundSpec {
    WOperator {
        tail: TailFunction,
    },
    Weibull {
        y: f64,
        k: f64,
        q: f64,
        mode: BetaMode,
    },
    LogModified {
        c1: f64,
        c2: f64,
        k: f64,
        q: f64,
        r: f64,
        c4: Option<f64>,
    },
    Moment {
        p: f64,
        norms: NormModel,
    },
    MomentOpt {
        a: f64,
        norms: NormModel,
    },
    SubPhi {
        phi: PhiFunction,
        n_max: u64,
    },
    PowerPhi {
        q: f64,
        c1: Option<f64>,
        c2: Option<f64>,
    },
    /// A fixed number in place of a bound, for harness sanity checks.
    Forced {
        value: f64,
    },
}

impl BoundSpec {
    pub fn evaluate(&self, n: u64, x: f64) -> Result<BoundReport> {
        match self {
            BoundSpec::WOperator { tail } => w_operator_bound(tail, n, x),
            BoundSpec::Weibull { y, k, q, mode } => weibull_bound(*y, *k, *q, n, x, *mode),
            BoundSpec::LogModified { c1, c2, k, q, r, c4 } => log_modified_bound(*c1, *c2, *k, *q, *r, n, x, *c4),
            BoundSpec::Moment { p, norms } => {
                let v = norms.norm(*p);
                moment_bound(*p, n, x, &vec![v; n as usize])
            }
            BoundSpec::MomentOpt { a, norms } => {
                let norms = *norms;
                let opt = optimized_moment_bound(*a, n, x, |p| {
                    let v = norms.norm(p);
                    v.is_finite().then(|| vec![v; n as usize])
                })?;
                Ok(opt.report)
            }
            BoundSpec::SubPhi { phi, n_max } => sub_phi_bound(phi, n, x, *n_max),
            BoundSpec::PowerPhi { q, c1, c2 } => power_phi_bound(*q, n, x, *c1, *c2),
            BoundSpec::Forced { value } => Ok(forced_bound(*value, n, x)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub spec: MartingaleSpec,
    pub bound: BoundSpec,
    pub grid: Vec<(u64, f64)>,
    pub replicas: u64,
    pub seed: u64,
    pub confidence: f64,
    /// Bound values per grid point, computed when the scenario is built.
    bounds: Vec<BoundReport>,
}

impl Scenario {
    /// Builds a scenario, evaluating the bound at every grid point so that
    /// domain violations surface here rather than as failed checks.
    pub fn new(
        spec: MartingaleSpec,
        bound: BoundSpec,
        grid: Vec<(u64, f64)>,
        replicas: u64,
        seed: u64,
        confidence: f64,
    ) -> Result<Self> {
        if grid.is_empty() {
            return Err(Error::Scenario("empty (n, x) grid".into()));
        }
        if replicas == 0 {
            return Err(Error::Scenario("replicas must be at least 1".into()));
        }
        if !(confidence > 0.0 && confidence < 1.0) {
            return Err(Error::Scenario(format!(
                "confidence must lie in (0, 1) (got {confidence})"
            )));
        }
        let bounds = grid
            .iter()
            .map(|&(n, x)| {
                bound
                    .evaluate(n, x)
                    .map_err(|e| Error::Scenario(format!("bound at n={n}, x={x}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Scenario {
            spec,
            bound,
            grid,
            replicas,
            seed,
            confidence,
            bounds,
        })
    }

    pub fn bounds(&self) -> &[BoundReport] {
        &self.bounds
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictPoint {
    pub n: u64,
    pub x: f64,
    pub bound: BoundReport,
    pub estimate: MonteCarloEstimate,
    /// `ci_high ≤ bound`.
    pub pass: bool,
    /// `bound − ci_high`.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub points: Vec<VerdictPoint>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.points.iter().all(|p| p.pass)
    }
}

/// Runs [`Scenario`]'s estimates and compares each upper confidence limit
/// with the bound. Points sharing `n` share paths.
pub fn validate_upper(scenario: &Scenario) -> Result<Verdict> {
    let mut by_n: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (i, &(n, _)) in scenario.grid.iter().enumerate() {
        by_n.entry(n).or_default().push(i);
    }
    let mut estimates: Vec<Option<MonteCarloEstimate>> = vec![None; scenario.grid.len()];
    for (n, idx) in by_n {
        let spec = MartingaleSpec::new(scenario.spec.generator.clone(), n)?;
        let xs: Vec<f64> = idx.iter().map(|&i| scenario.grid[i].1).collect();
        let est = estimate_q_multi(&spec, &xs, scenario.replicas, scenario.seed, scenario.confidence)?;
        for (i, e) in idx.into_iter().zip(est) {
            estimates[i] = Some(e);
        }
    }
    let points = scenario
        .grid
        .iter()
        .zip(&scenario.bounds)
        .zip(estimates)
        .map(|((&(n, x), bound), estimate)| {
            let estimate = estimate.expect("every grid point estimated");
            VerdictPoint {
                n,
                x,
                pass: estimate.ci_high <= bound.value,
                margin: bound.value - estimate.ci_high,
                bound: bound.clone(),
                estimate,
            }
        })
        .collect();
    Ok(Verdict { points })
}

/// OLS of `−ln Q̂_n(1)` on `n^a`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub q: f64,
    /// `q/(q+2)`.
    pub exponent: f64,
    pub n: Vec<u64>,
    pub abscissas: Vec<f64>,
    pub ordinates: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// `(exponent, R²)` for the comparison exponents `q/2` and `1`.
    pub alternatives: Vec<(f64, f64)>,
    /// Values of `n` dropped because their estimate was zero.
    pub excluded: Vec<u64>,
}

impl ScalingFit {
    /// The fit under `q/(q+2)` beats every comparison exponent.
    pub fn exponent_preferred(&self) -> bool {
        self.alternatives.iter().all(|&(_, r2)| self.r_squared > r2)
    }
}

/// Only the exponent of the lower bound is identified; its constants are not.
pub const SCALING_CAVEAT: &str =
    "constants of the exp(-C n^{q/(q+2)}) form are not identified; only the exponent's fit quality is assessed";

/// Fits `−ln Q̂ = slope·n^{q/(q+2)} + intercept` and the same form with
/// exponents `q/2` and `1`. Needs at least four distinct `n` with `Q̂ > 0`.
pub fn fit_scaling(q: f64, estimates: &[(u64, f64)]) -> Result<ScalingFit> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::domain(format!("scaling fit needs q > 0 (got {q})")));
    }
    let mut kept: Vec<(u64, f64)> = Vec::new();
    let mut excluded = Vec::new();
    for &(n, p) in estimates {
        if p > 0.0 && p.is_finite() {
            kept.push((n, p));
        } else {
            excluded.push(n);
        }
    }
    let mut distinct: Vec<u64> = kept.iter().map(|k| k.0).collect();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 4 {
        return Err(Error::Precondition(format!(
            "scaling fit needs at least 4 distinct n with positive estimates (have {})",
            distinct.len()
        )));
    }
    let ordinates: Vec<f64> = kept.iter().map(|k| -k.1.ln()).collect();
    let fit = |a: f64| {
        let xs: Vec<f64> = kept.iter().map(|k| (k.0 as f64).powf(a)).collect();
        let (slope, intercept, r2) = linear_fit(&xs, &ordinates);
        (xs, slope, intercept, r2)
    };
    let exponent = q / (q + 2.0);
    let (abscissas, slope, intercept, r_squared) = fit(exponent);
    let alternatives = [q / 2.0, 1.0].iter().map(|&a| (a, fit(a).3)).collect();
    Ok(ScalingFit {
        q,
        exponent,
        n: kept.iter().map(|k| k.0).collect(),
        abscissas,
        ordinates,
        slope,
        intercept,
        r_squared,
        alternatives,
        excluded,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LorentzNorm {
    pub value: f64,
    /// Where the sup was found; `None` when it is not attained.
    pub argmax: Option<f64>,
    /// The maximum sat on an end of the evaluation grid.
    pub boundary_hit: bool,
}

pub const LORENTZ_GRID: usize = 10_000;

/// `sup_{x>0} x^s·T(x)`. Pareto tails are handled analytically (`1` when
/// `s ≤ r`, infinite otherwise); other tails on 10⁴ log-spaced points over
/// `[10⁻³, 10³]·scale`.
pub fn lorentz_norm(t: &TailFunction, s: f64) -> Result<LorentzNorm> {
    if !(s > 1.0 && s.is_finite()) {
        return Err(Error::domain(format!("Lorentz norm needs s > 1 (got {s})")));
    }
    let scale = match t {
        TailFunction::Pareto { r } => {
            return Ok(if s <= *r {
                LorentzNorm {
                    value: 1.0,
                    argmax: Some(1.0),
                    boundary_hit: false,
                }
            } else {
                LorentzNorm {
                    value: f64::INFINITY,
                    argmax: None,
                    boundary_hit: false,
                }
            });
        }
        TailFunction::Empirical(e) => return Ok(lorentz_norm_empirical(e, s)),
        TailFunction::Weibull { k, .. } | TailFunction::LogModified { k, .. } => *k,
        TailFunction::SubGaussian { sigma } => *sigma,
    };
    let grid = log_space(1e-3 * scale, 1e3 * scale, LORENTZ_GRID);
    let mut best = (0usize, f64::NEG_INFINITY);
    for (i, &x) in grid.iter().enumerate() {
        let v = x.powf(s) * t.eval(x)?;
        if v > best.1 {
            best = (i, v);
        }
    }
    Ok(LorentzNorm {
        value: best.1,
        argmax: Some(grid[best.0]),
        boundary_hit: best.0 == 0 || best.0 == LORENTZ_GRID - 1,
    })
}

/// The same sup for a sample: the tail is a step function, so the sup is
/// attained at a jump point `|ξ_j|`.
pub fn lorentz_norm_sample(sample: &[f64], s: f64) -> Result<LorentzNorm> {
    if !(s > 1.0 && s.is_finite()) {
        return Err(Error::domain(format!("Lorentz norm needs s > 1 (got {s})")));
    }
    Ok(lorentz_norm_empirical(&EmpiricalTail::new(sample)?, s))
}

fn lorentz_norm_empirical(e: &EmpiricalTail, s: f64) -> LorentzNorm {
    let mut best = LorentzNorm {
        value: 0.0,
        argmax: None,
        boundary_hit: false,
    };
    for b in e.jump_points() {
        let v = b.powf(s) * e.eval(b);
        if v > best.value {
            best.value = v;
            best.argmax = Some(b);
        }
    }
    best
}
