//! Upper bounds on `Q_n(x) = P(S(n)/n > x)`.
//!
//! Every bound returns a [`BoundReport`] carrying the value together with the
//! constants that produced it and where each constant came from. Constants
//! the theory only proves to exist are configuration parameters with a
//! documented default; the report marks them [`Provenance::ConfigDefault`].

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::numerics::{golden_section_min, integrate_to_infinity, log_space};
use crate::phi::{legendre_transform, overline_phi, OverlinePhi, PhiFunction};
use crate::tails::{w_operator_detailed, TailFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// `W[T](x√n)` for differences with tails dominated by `T`.
    WOperator,
    /// Closed form for Weibull-type tails `Y·exp(−(x/K)^q)`.
    Weibull,
    /// Closed form for log-modified Weibull tails.
    LogModified,
    /// Markov bound from the martingale L_p inequality.
    Moment,
    /// [`Method::Moment`] minimised over `p`.
    MomentOpt,
    /// `2·exp(−φ̄*(x√n))` for conditionally sub-φ differences.
    SubPhi,
    /// The power form `C1·exp(−C2·x^γ·n^{γ/2})` for `φ = φ_q`.
    PowerPhi,
    /// Tail of a single difference implied by an exponential bound on `Q_n(1)`.
    Inverse,
    /// Tail of a single difference implied by a power bound on `Q_n(1)`.
    InversePower,
    /// A fixed value supplied by the caller; only used to test the harness.
    Forced,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::WOperator => "w-operator",
            Method::Weibull => "weibull",
            Method::LogModified => "log-modified",
            Method::Moment => "moment",
            Method::MomentOpt => "moment-opt",
            Method::SubPhi => "sub-phi",
            Method::PowerPhi => "power-phi",
            Method::Inverse => "inverse",
            Method::InversePower => "inverse-power",
            Method::Forced => "forced",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Determined by a formula rather than chosen.
    Derived,
    /// A free constant left at its documented default.
    ConfigDefault,
    /// Supplied by the caller.
    User,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Derived => "derived",
            Provenance::ConfigDefault => "config-default",
            Provenance::User => "user",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constant {
    pub name: String,
    pub value: f64,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub method: Method,
    pub n: u64,
    pub x: f64,
    pub value: f64,
    pub parameters: Vec<Constant>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl BoundReport {
    fn new(method: Method, n: u64, x: f64, raw: f64) -> Self {
        BoundReport {
            method,
            n,
            x,
            value: probability(raw),
            parameters: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn with(mut self, name: &str, value: f64, provenance: Provenance) -> Self {
        self.parameters.push(Constant {
            name: name.to_string(),
            value,
            provenance,
        });
        self
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn parameter(&self, name: &str) -> Option<&Constant> {
        self.parameters.iter().find(|c| c.name == name)
    }

    /// Names of constants left at their defaults.
    pub fn defaulted(&self) -> Vec<&str> {
        self.parameters
            .iter()
            .filter(|c| c.provenance == Provenance::ConfigDefault)
            .map(|c| c.name.as_str())
            .collect()
    }
}

/// Clamp into `(0, 1]`; underflow becomes the smallest positive normal,
/// which is still an upper bound.
fn probability(v: f64) -> f64 {
    if v.is_nan() {
        return 1.0;
    }
    v.clamp(f64::MIN_POSITIVE, 1.0)
}

fn require_n(method: Method, n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::domain(format!("the {method} bound requires n >= 1")));
    }
    Ok(())
}

fn require_x_at_least(method: Method, x: f64, min: f64) -> Result<()> {
    if x.is_nan() || x < min {
        return Err(Error::domain(format!(
            "the {method} bound requires x >= {min} (got {x})"
        )));
    }
    Ok(())
}

fn user_or_default(v: Option<f64>, default: f64) -> (f64, Provenance) {
    match v {
        Some(v) => (v, Provenance::User),
        None => (default, Provenance::ConfigDefault),
    }
}

/// `W[T](x√n)`: bound for `Q_n(x)` when every difference has
/// `T(ξ(i), ·) ≤ T`. Valid for `x ≥ 2`.
pub fn w_operator_bound(tail: &TailFunction, n: u64, x: f64) -> Result<BoundReport> {
    let method = Method::WOperator;
    require_n(method, n)?;
    require_x_at_least(method, x, 2.0)?;
    let w = w_operator_detailed(tail, x * (n as f64).sqrt())?;
    let mut report = BoundReport::new(method, n, x, w.value)
        .with("v_argmin", w.argmin, Provenance::Derived)
        .note(format!("tail = {tail}"));
    if w.boundary_hit {
        report = report.note("infimum over v landed on the edge of the search window");
    }
    Ok(report)
}

/// `δ(q) = (min(q/2, 1))^{−1/q}`.
pub fn delta_q(q: f64) -> Result<f64> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::domain(format!("δ(q) needs q > 0 (got {q})")));
    }
    Ok((0.5 * q).min(1.0).powf(-1.0 / q))
}

/// How `β(q)` is evaluated for `q ≤ 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BetaMode {
    /// `max(Γ(2/q)/q, (e/q)·(2/(eq)))` for `q ≤ 2`, the numerical sup above.
    #[default]
    AsPrinted,
    /// The numerical sup for every `q` (sensitivity runs).
    Alt,
}

/// `Γ(2/q)/(q·e)`, the stated majorant of the `q > 2` supremum.
pub fn beta_majorant(q: f64) -> f64 {
    gamma(2.0 / q) / (q * std::f64::consts::E)
}

/// `sup_{v ≥ 0} exp(v^q)·∫_v^∞ x·exp(−x^q) dx`, by a 10³-point scan over
/// `v ∈ [0, 4]` with adaptive quadrature per point. Errors when the sup
/// sits at the right end of the scan (it diverges for `q < 2`).
pub fn beta_sup(q: f64) -> Result<f64> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::domain(format!("β(q) needs q > 0 (got {q})")));
    }
    let h = |v: f64| {
        let vq = v.powf(q);
        integrate_to_infinity(
            |x| x * (vq - x.powf(q)).exp(),
            v,
            |x| x * (vq - x.powf(q)).exp() < 1e-18,
            1e-13,
        )
    };
    const POINTS: usize = 1000;
    let grid: Vec<f64> = (0..POINTS).map(|i| 4.0 * i as f64 / (POINTS - 1) as f64).collect();
    let values: Vec<f64> = grid.iter().map(|&v| h(v)).collect();
    let mut best = 0;
    for i in 1..POINTS {
        if values[i] > values[best] * (1.0 + 1e-12) {
            best = i;
        }
    }
    if best == POINTS - 1 {
        return Err(Error::NotAttained(format!("sup defining β({q}) diverges")));
    }
    if best == 0 {
        return Ok(values[0]);
    }
    let (_, neg) = golden_section_min(|v| -h(v), grid[best - 1], grid[best + 1], 1e-10);
    Ok((-neg).max(values[best]))
}

/// `β(q)`: `max(Γ(2/q)/q, (e/q)·(2/(e·q)))` for `q ∈ (0, 2]`, the numerical
/// sup [`beta_sup`] for `q > 2`.
pub fn beta_q(q: f64, mode: BetaMode) -> Result<f64> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::domain(format!("β(q) needs q > 0 (got {q})")));
    }
    if q > 2.0 || mode == BetaMode::Alt {
        return beta_sup(q);
    }
    let e = std::f64::consts::E;
    Ok((gamma(2.0 / q) / q).max((e / q) * (2.0 / (e * q))))
}

/// `min(1, (1 + 2Yβ(q))·exp(−n^{q/(q+2)}·(x/(Kδ(q)))^{2q/(q+2)}))` for
/// differences with `T(ξ(i), x) ≤ Y·exp(−(x/K)^q)`. Valid for `x ≥ 2`.
pub fn weibull_bound(y: f64, k: f64, q: f64, n: u64, x: f64, mode: BetaMode) -> Result<BoundReport> {
    let method = Method::Weibull;
    require_n(method, n)?;
    require_x_at_least(method, x, 2.0)?;
    TailFunction::weibull(y, k, q)?;
    let delta = delta_q(q)?;
    let beta = beta_q(q, mode)?;
    let nf = n as f64;
    let exponent = nf.powf(q / (q + 2.0)) * (x / (k * delta)).powf(2.0 * q / (q + 2.0));
    let value = (1.0 + 2.0 * y * beta) * (-exponent).exp();
    let mut report = BoundReport::new(method, n, x, value.min(1.0))
        .with("Y", y, Provenance::User)
        .with("K", k, Provenance::User)
        .with("q", q, Provenance::User)
        .with("delta", delta, Provenance::Derived)
        .with("beta", beta, Provenance::Derived);
    if mode == BetaMode::Alt {
        report = report.note("beta-q-alt: β(q) replaced by the numerical sup");
    }
    if q > 2.0 {
        let maj = beta_majorant(q);
        report = report.with("beta_majorant", maj, Provenance::Derived);
        if beta > maj * (1.0 + 1e-6) {
            report = report.note("numerical β(q) exceeds the stated majorant Γ(2/q)/(qe); the sup is used");
        }
    }
    Ok(report)
}

/// `L(q, r) = (2q/(q+2), 2r/(q+2))`.
pub fn l_vector(q: f64, r: f64) -> (f64, f64) {
    (2.0 * q / (q + 2.0), 2.0 * r / (q + 2.0))
}

/// `F(q, r) = 1` for `r ≤ 0`, `e^q` for `r > 0`.
pub fn f_shift(q: f64, r: f64) -> f64 {
    if r > 0.0 {
        q.exp()
    } else {
        1.0
    }
}

/// `min(1, exp(−C4·z^{L1}·(log(F(L1, L2) + z))^{L2}))`, `z = x√n/K`, for
/// differences with log-modified Weibull tails. `C4` defaults to 1. Valid
/// for `x ≥ 2`.
#[allow(clippy::too_many_arguments)]
pub fn log_modified_bound(
    c1: f64,
    c2: f64,
    k: f64,
    q: f64,
    r: f64,
    n: u64,
    x: f64,
    c4: Option<f64>,
) -> Result<BoundReport> {
    let method = Method::LogModified;
    require_n(method, n)?;
    require_x_at_least(method, x, 2.0)?;
    TailFunction::log_modified(c1, c2, k, q, r)?;
    let (c4, c4_prov) = user_or_default(c4, 1.0);
    if !(c4 > 0.0) {
        return Err(Error::domain(format!("C4 must be positive (got {c4})")));
    }
    let (l1, l2) = l_vector(q, r);
    let f = f_shift(l1, l2);
    let z = x * (n as f64).sqrt() / k;
    let g = c4 * z.powf(l1) * (f + z).ln().powf(l2);
    Ok(BoundReport::new(method, n, x, (-g).exp().min(1.0))
        .with("C1", c1, Provenance::User)
        .with("C2", c2, Provenance::User)
        .with("K", k, Provenance::User)
        .with("q", q, Provenance::User)
        .with("r", r, Provenance::User)
        .with("C4", c4, c4_prov)
        .with("L1", l1, Provenance::Derived)
        .with("L2", l2, Provenance::Derived)
        .with("F", f, Provenance::Derived))
}

fn moment_log_objective(p: f64, n: u64, x: f64, norms: &[f64]) -> f64 {
    let nf = n as f64;
    let mut squares: Vec<f64> = norms.iter().map(|v| v * v).collect();
    squares.sort_by(f64::total_cmp);
    let mean_sq = squares.iter().sum::<f64>() / nf;
    -p * x.ln() + p * (p - 1.0).ln() - 0.5 * p * nf.ln() + 0.5 * p * mean_sq.ln()
}

fn check_norms(n: u64, norms: &[f64]) -> Result<()> {
    if norms.len() as u64 != n {
        return Err(Error::domain(format!("expected {n} norms, got {}", norms.len())));
    }
    if norms.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::domain("norms must be finite and non-negative"));
    }
    Ok(())
}

/// `min(1, x^{−p}·(p−1)^p·n^{−p/2}·(n⁻¹·Σ|ξ(i)|_p²)^{p/2})` from the L_p
/// martingale inequality with constant `p − 1`. Needs `p ≥ 2`, `x ≥ 1`.
pub fn moment_bound(p: f64, n: u64, x: f64, norms: &[f64]) -> Result<BoundReport> {
    let method = Method::Moment;
    require_n(method, n)?;
    require_x_at_least(method, x, 1.0)?;
    if !(p >= 2.0 && p.is_finite()) {
        return Err(Error::domain(format!("the moment bound requires p >= 2 (got {p})")));
    }
    check_norms(n, norms)?;
    let value = moment_log_objective(p, n, x, norms).exp().min(1.0);
    Ok(BoundReport::new(method, n, x, value).with("p", p, Provenance::User))
}

/// Result of [`optimized_moment_bound`].
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizedMoment {
    pub report: BoundReport,
    pub argmin_p: f64,
    /// Grid values of `p` dropped because the norms were unavailable there.
    pub excluded: Vec<f64>,
}

const MOMENT_GRID: usize = 128;
const MOMENT_EDGE: f64 = 1e-9;

/// Infimum over `p ∈ [2, a)` of [`moment_bound`]: a 128-point grid on
/// `[2, a − 10⁻⁹]` with golden-section refinement. `norm_fn(p)` returns the
/// per-index p-norms, or `None` where they are infinite.
pub fn optimized_moment_bound<F>(a: f64, n: u64, x: f64, norm_fn: F) -> Result<OptimizedMoment>
where
    F: Fn(f64) -> Option<Vec<f64>>,
{
    let method = Method::MomentOpt;
    require_n(method, n)?;
    require_x_at_least(method, x, 1.0)?;
    if !(a > 2.0) {
        return Err(Error::domain(format!(
            "the optimised moment bound needs a > 2 (got {a})"
        )));
    }
    let top = (a - MOMENT_EDGE).max(2.0);
    let grid: Vec<f64> = if top <= 2.0 {
        vec![2.0]
    } else {
        (0..MOMENT_GRID)
            .map(|i| 2.0 + (top - 2.0) * i as f64 / (MOMENT_GRID - 1) as f64)
            .collect()
    };

    let objective = |p: f64| -> Option<f64> {
        let norms = norm_fn(p)?;
        if check_norms(n, &norms).is_err() {
            return None;
        }
        let v = moment_log_objective(p, n, x, &norms);
        v.is_finite().then_some(v)
    };

    let mut excluded = Vec::new();
    let mut evaluated: Vec<(usize, f64)> = Vec::new();
    for (i, &p) in grid.iter().enumerate() {
        match objective(p) {
            Some(v) => evaluated.push((i, v)),
            None => excluded.push(p),
        }
    }
    if evaluated.is_empty() {
        return Err(Error::domain("norm function is unavailable at every grid p"));
    }
    // first minimum of the capped objective
    let capped = |v: f64| v.min(0.0);
    let mut best = evaluated[0];
    for &(i, v) in &evaluated[1..] {
        if capped(v) < capped(best.1) {
            best = (i, v);
        }
    }
    let (mut p_star, mut v_star) = (grid[best.0], best.1);
    if capped(v_star) < 0.0 && grid.len() > 1 {
        let lo = grid[best.0.saturating_sub(1)];
        let hi = grid[(best.0 + 1).min(grid.len() - 1)];
        let (p, v) = golden_section_min(|p| objective(p).unwrap_or(f64::INFINITY), lo, hi, 1e-12);
        if v < v_star {
            p_star = p;
            v_star = v;
        }
    }
    let mut report = BoundReport::new(method, n, x, v_star.exp().min(1.0))
        .with("a", a, Provenance::User)
        .with("p_argmin", p_star, Provenance::Derived);
    if !excluded.is_empty() {
        report = report.note(format!(
            "{} grid value(s) of p excluded: norms unavailable",
            excluded.len()
        ));
    }
    Ok(OptimizedMoment {
        report,
        argmin_p: p_star,
        excluded,
    })
}

/// `min(1, 2·exp(−φ̄*(x√n)))` for differences that are conditionally
/// sub-φ with unit norm. The envelope `φ̄` is maximised over `n ≤ n_max`;
/// an error is returned when that sup is not captured at the maximiser.
pub fn sub_phi_bound(phi: &PhiFunction, n: u64, x: f64, n_max: u64) -> Result<BoundReport> {
    let method = Method::SubPhi;
    require_n(method, n)?;
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain(format!("the {method} bound requires x > 0 (got {x})")));
    }
    let exponent = sub_phi_exponent(phi, x * (n as f64).sqrt(), n_max)?;
    Ok(BoundReport::new(method, n, x, (2.0 * (-exponent.0).exp()).min(1.0))
        .with("n_max", n_max as f64, Provenance::ConfigDefault)
        .with("lambda_argmax", exponent.1, Provenance::Derived)
        .note(format!("phi = {}", phi.spec_string())))
}

/// `(φ̄*(u), argmax λ)`.
fn sub_phi_exponent(phi: &PhiFunction, u: f64, n_max: u64) -> Result<(f64, f64)> {
    let envelope = OverlinePhi { phi, n_max };
    let conj = match legendre_transform(&envelope, u) {
        Ok(c) => c,
        Err(Error::NotAttained(msg)) => {
            // a sup running off to infinity means the envelope grows linearly,
            // which happens when n_max cuts it off
            let edge = 400.0 * (u.abs() + 1.0);
            if overline_phi(phi, edge, n_max)?.boundary_hit {
                return Err(Error::EnvelopeBoundary { n_max, lambda: edge });
            }
            return Err(Error::NotAttained(msg));
        }
        Err(e) => return Err(e),
    };
    let at = overline_phi(phi, conj.argmax, n_max)?;
    if at.boundary_hit {
        return Err(Error::EnvelopeBoundary {
            n_max,
            lambda: conj.argmax,
        });
    }
    Ok((conj.value, conj.argmax))
}

/// `γ(q) = min(2, q)` for `q ≥ 2`, `2q/(2+q)` for `q ∈ (0, 2)`.
pub fn gamma_q(q: f64) -> Result<f64> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::domain(format!("γ(q) needs q > 0 (got {q})")));
    }
    Ok(if q >= 2.0 { q.min(2.0) } else { 2.0 * q / (2.0 + q) })
}

/// Constants of the power form, back-solved so that it envelopes
/// [`sub_phi_bound`] with `φ = φ_q` for `u = x√n` in `u_range`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerCalibration {
    pub c1: f64,
    pub c2: f64,
    /// `u` at which the envelope condition binds.
    pub u_star: f64,
    pub u_range: (f64, f64),
    pub n_max: u64,
}

pub const DEFAULT_CALIBRATION_RANGE: (f64, f64) = (1.0, 100.0);
pub const DEFAULT_N_MAX: u64 = 10_000;

/// `C1 = 2`, `C2 = min_u φ̄*(u)/u^γ` over 64 log-spaced `u` in `u_range`.
pub fn calibrate_power_phi(q: f64, u_range: (f64, f64), n_max: u64) -> Result<PowerCalibration> {
    let phi = PhiFunction::phi_q(q)?;
    let g = gamma_q(q)?;
    if !(u_range.0 > 0.0 && u_range.1 >= u_range.0) {
        return Err(Error::domain(format!(
            "calibration range must satisfy 0 < lo <= hi (got {u_range:?})"
        )));
    }
    let us = if u_range.1 > u_range.0 {
        log_space(u_range.0, u_range.1, 64)
    } else {
        vec![u_range.0]
    };
    let mut best: Option<(f64, f64)> = None;
    for u in us {
        let (e, _) = sub_phi_exponent(&phi, u, n_max)?;
        let c2 = e / u.powf(g);
        if best.is_none_or(|(b, _)| c2 < b) {
            best = Some((c2, u));
        }
    }
    let (c2, u_star) = best.expect("non-empty calibration grid");
    Ok(PowerCalibration {
        c1: 2.0,
        c2,
        u_star,
        u_range,
        n_max,
    })
}

/// [`calibrate_power_phi`] over the default range, memoised per `q`.
pub fn default_calibration(q: f64) -> Result<PowerCalibration> {
    static CACHE: OnceLock<Mutex<HashMap<u64, PowerCalibration>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(c) = cache.lock().expect("calibration cache").get(&q.to_bits()) {
        return Ok(*c);
    }
    let cal = calibrate_power_phi(q, DEFAULT_CALIBRATION_RANGE, DEFAULT_N_MAX)?;
    cache.lock().expect("calibration cache").insert(q.to_bits(), cal);
    Ok(cal)
}

/// `min(1, C1·exp(−C2·x^γ·n^{γ/2}))` with `γ = γ(q)`. Missing constants
/// come from [`calibrate_power_phi`] over the default range.
pub fn power_phi_bound(q: f64, n: u64, x: f64, c1: Option<f64>, c2: Option<f64>) -> Result<BoundReport> {
    let method = Method::PowerPhi;
    require_n(method, n)?;
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain(format!("the {method} bound requires x > 0 (got {x})")));
    }
    let g = gamma_q(q)?;
    let mut notes = Vec::new();
    let (c1, p1) = user_or_default(c1, 2.0);
    let (c2, p2) = match c2 {
        Some(v) => (v, Provenance::User),
        None => {
            let cal = default_calibration(q)?;
            notes.push(format!(
                "C2 back-solved from the sub-phi bound with phi-q:{q}: min of φ̄*(u)/u^γ over u in [{}, {}], binding at u = {}",
                cal.u_range.0, cal.u_range.1, cal.u_star
            ));
            (cal.c2, Provenance::ConfigDefault)
        }
    };
    let value = c1 * (-c2 * x.powf(g) * (n as f64).powf(g / 2.0)).exp();
    let mut report = BoundReport::new(method, n, x, value.min(1.0))
        .with("q", q, Provenance::User)
        .with("gamma", g, Provenance::Derived)
        .with("C1", c1, p1)
        .with("C2", c2, p2);
    report.notes = notes;
    Ok(report)
}

/// Tail of one i.i.d. difference implied by `Q_n(1) ≤ C1·exp(−C2·n^{q/(q+2)})`:
/// `min(1, C3·exp(−C4·x^{2q/(q+2)}))`, `C3 = C1` and `C4 = C2` by default.
/// Valid for `x ≥ 2`.
pub fn inverse_tail_bound(c1: f64, c2: f64, q: f64, x: f64, c3: Option<f64>, c4: Option<f64>) -> Result<BoundReport> {
    let method = Method::Inverse;
    require_x_at_least(method, x, 2.0)?;
    if !(c1 > 0.0 && c2 > 0.0 && q > 0.0) {
        return Err(Error::domain(format!(
            "inverse map needs C1, C2, q > 0 (got {c1}, {c2}, {q})"
        )));
    }
    let (c3, p3) = user_or_default(c3, c1);
    let (c4, p4) = user_or_default(c4, c2);
    let exponent = 2.0 * q / (q + 2.0);
    Ok(
        BoundReport::new(method, 1, x, (c3 * (-c4 * x.powf(exponent)).exp()).min(1.0))
            .with("C1", c1, Provenance::User)
            .with("C2", c2, Provenance::User)
            .with("q", q, Provenance::User)
            .with("C3", c3, p3)
            .with("C4", c4, p4)
            .with("tail_exponent", exponent, Provenance::Derived),
    )
}

/// Tail of one i.i.d. difference implied by `Q_n(1) ≤ C·n^{1−s}`:
/// `min(1, C5·x^{−s})` with `C5 = C·2^s·e` by default. Valid for `x ≥ 1`.
pub fn inverse_power_bound(c: f64, s: f64, x: f64, c5: Option<f64>) -> Result<BoundReport> {
    let method = Method::InversePower;
    require_x_at_least(method, x, 1.0)?;
    if !(c > 0.0 && s > 1.0) {
        return Err(Error::domain(format!(
            "inverse power map needs C > 0 and s > 1 (got {c}, {s})"
        )));
    }
    let (c5, p5) = user_or_default(c5, c * 2f64.powf(s) * std::f64::consts::E);
    Ok(BoundReport::new(method, 1, x, (c5 * x.powf(-s)).min(1.0))
        .with("C", c, Provenance::User)
        .with("s", s, Provenance::User)
        .with("C5", c5, p5))
}

/// A caller-fixed bound value, clamped to `[0, 1]`. Exists so the harness
/// can be exercised with a bound that must fail.
pub fn forced_bound(value: f64, n: u64, x: f64) -> BoundReport {
    BoundReport {
        method: Method::Forced,
        n,
        x,
        value: value.clamp(0.0, 1.0),
        parameters: vec![Constant {
            name: "value".into(),
            value,
            provenance: Provenance::User,
        }],
        notes: vec!["forced value: not a bound".into()],
    }
}
