//! Class-Φ functions, Young–Fenchel conjugation and B(φ) norms.
//!
//! A member of Φ is an even convex `φ` with `φ(0) = 0`, `0 < φ''(0) < ∞` and
//! `φ(λ)/λ → ∞` at the edge of its domain. A centered variable belongs to
//! `B(φ)` with norm `τ` when `E exp(λξ) ≤ exp(φ(λτ))` for every `λ`.
//!
//! The conjugate `φ*(u) = sup_λ (λu − φ(λ))` is computed by bisection on `φ'`
//! when a monotone derivative is known and by a scan with golden-section
//! refinement otherwise. [`overline_phi`] is the integer envelope
//! `sup_n n·φ(λ/√n)` that governs normalised sums.

use crate::error::{Error, Result};
use crate::numerics::golden_section_min;

/// Something that can be conjugated. Implementors are even in λ and return
/// `+∞` outside their effective domain.
pub trait ConvexFunction {
    fn value(&self, lambda: f64) -> f64;

    /// Non-decreasing right derivative on `λ ≥ 0`, when one is available.
    fn derivative(&self, _lambda: f64) -> Option<f64> {
        None
    }

    /// Radius `λ0` of the effective domain.
    fn domain_radius(&self) -> f64 {
        f64::INFINITY
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PhiFunction {
    /// `c·λ²`
    Quadratic { c: f64 },
    /// `λ²` for `|λ| ≤ 1`, `|λ|^q` beyond.
    PhiQ { q: f64 },
    /// Piecewise-linear interpolation of `(λ, φ(λ))` nodes on `λ ≥ 0`,
    /// extended evenly; `+∞` beyond the last node.
    Tabulated(PhiTable),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhiTable {
    lambdas: Vec<f64>,
    values: Vec<f64>,
}

impl PhiTable {
    /// Nodes must start at `λ = 0` and be strictly increasing.
    pub fn new(points: &[(f64, f64)]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::domain("a tabulated φ needs at least two nodes"));
        }
        if points[0].0 != 0.0 {
            return Err(Error::domain("a tabulated φ must start at λ = 0"));
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::domain("tabulated λ nodes must be strictly increasing"));
        }
        if points.iter().any(|p| !p.0.is_finite() || !p.1.is_finite()) {
            return Err(Error::domain("tabulated φ contains a non-finite node"));
        }
        Ok(PhiTable {
            lambdas: points.iter().map(|p| p.0).collect(),
            values: points.iter().map(|p| p.1).collect(),
        })
    }

    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.lambdas.iter().copied().zip(self.values.iter().copied())
    }

    fn eval(&self, lambda: f64) -> f64 {
        let a = lambda.abs();
        let last = self.lambdas.len() - 1;
        if a > self.lambdas[last] {
            return f64::INFINITY;
        }
        let i = self.lambdas.partition_point(|&l| l <= a).clamp(1, last);
        let (l0, l1) = (self.lambdas[i - 1], self.lambdas[i]);
        let (v0, v1) = (self.values[i - 1], self.values[i]);
        v0 + (v1 - v0) * (a - l0) / (l1 - l0)
    }

    fn radius(&self) -> f64 {
        self.lambdas[self.lambdas.len() - 1]
    }
}

impl PhiFunction {
    pub fn quadratic(c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::domain(format!("quadratic φ needs c > 0 (got {c})")));
        }
        Ok(PhiFunction::Quadratic { c })
    }

    pub fn phi_q(q: f64) -> Result<Self> {
        if !(q >= 1.0 && q.is_finite()) {
            return Err(Error::domain(format!("φ_q needs q >= 1 (got {q})")));
        }
        Ok(PhiFunction::PhiQ { q })
    }

    pub fn tabulated(points: &[(f64, f64)]) -> Result<Self> {
        Ok(PhiFunction::Tabulated(PhiTable::new(points)?))
    }

    /// Parses `quadratic:c` and `phi-q:q`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (family, arg) = spec
            .split_once(':')
            .ok_or_else(|| Error::domain(format!("φ spec `{spec}` must look like family:param")))?;
        let value: f64 = arg
            .trim()
            .parse()
            .map_err(|e| Error::domain(format!("φ spec `{spec}`: {e}")))?;
        match family.trim().to_ascii_lowercase().as_str() {
            "quadratic" => PhiFunction::quadratic(value),
            "phi-q" | "phiq" => PhiFunction::phi_q(value),
            other => Err(Error::domain(format!("unknown φ family `{other}`"))),
        }
    }

    pub fn spec_string(&self) -> String {
        match self {
            PhiFunction::Quadratic { c } => format!("quadratic:{c}"),
            PhiFunction::PhiQ { q } => format!("phi-q:{q}"),
            PhiFunction::Tabulated(t) => format!("table:<{} nodes>", t.lambdas.len()),
        }
    }
}

impl ConvexFunction for PhiFunction {
    fn value(&self, lambda: f64) -> f64 {
        match self {
            PhiFunction::Quadratic { c } => c * lambda * lambda,
            PhiFunction::PhiQ { q } => {
                let a = lambda.abs();
                if a <= 1.0 {
                    a * a
                } else {
                    a.powf(*q)
                }
            }
            PhiFunction::Tabulated(t) => t.eval(lambda),
        }
    }

    fn derivative(&self, lambda: f64) -> Option<f64> {
        match self {
            PhiFunction::Quadratic { c } => Some(2.0 * c * lambda),
            // below q = 2 the slope drops at |λ| = 1 and φ_q is not convex
            PhiFunction::PhiQ { q } if *q >= 2.0 => Some(if lambda <= 1.0 {
                2.0 * lambda
            } else {
                q * lambda.powf(q - 1.0)
            }),
            _ => None,
        }
    }

    fn domain_radius(&self) -> f64 {
        match self {
            PhiFunction::Tabulated(t) => t.radius(),
            _ => f64::INFINITY,
        }
    }
}

/// Outcome of [`check_phi_membership`]; one flag per defining condition.
#[derive(Debug, Clone, PartialEq)]
pub struct Membership {
    pub even: bool,
    pub zero_at_origin: bool,
    pub convex: bool,
    pub positive_curvature: bool,
    pub superlinear: bool,
    pub smooth_beyond_two: bool,
    /// Second difference at 0 with step 10⁻⁴.
    pub curvature_at_zero: f64,
}

impl Membership {
    pub fn passes(&self) -> bool {
        self.even
            && self.zero_at_origin
            && self.convex
            && self.positive_curvature
            && self.superlinear
            && self.smooth_beyond_two
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        for (ok, name) in [
            (self.even, "even"),
            (self.zero_at_origin, "φ(0) = 0"),
            (self.convex, "convex"),
            (self.positive_curvature, "0 < φ''(0) < ∞"),
            (self.superlinear, "φ(λ)/λ → ∞"),
            (self.smooth_beyond_two, "smooth on |λ| ≥ 2"),
        ] {
            if !ok {
                out.push(name);
            }
        }
        out
    }
}

/// Checks the conditions defining class Φ on a symmetric grid.
pub fn check_phi_membership(phi: &PhiFunction) -> Membership {
    let grid: Vec<f64> = match phi {
        PhiFunction::Tabulated(t) => {
            let mut g: Vec<f64> = t.lambdas.iter().rev().map(|l| -l).collect();
            g.extend(t.lambdas.iter().skip(1));
            g
        }
        _ => (0..=4000).map(|i| -100.0 + 0.05 * i as f64).collect(),
    };
    let values: Vec<f64> = grid.iter().map(|&l| phi.value(l)).collect();
    let scale = values.iter().fold(1.0_f64, |m, v| m.max(v.abs()));

    let even = grid
        .iter()
        .zip(&values)
        .all(|(&l, &v)| (phi.value(-l) - v).abs() <= 1e-12 * scale);
    let zero_at_origin = phi.value(0.0) == 0.0;

    // slopes between consecutive grid points must not decrease
    let slopes: Vec<f64> = grid
        .windows(2)
        .zip(values.windows(2))
        .map(|(l, v)| (v[1] - v[0]) / (l[1] - l[0]))
        .collect();
    let convex = slopes
        .windows(2)
        .all(|s| s[1] >= s[0] - 1e-9 * s[0].abs().max(s[1].abs()).max(1.0));

    let h = 1e-4;
    let curvature_at_zero = (phi.value(h) + phi.value(-h) - 2.0 * phi.value(0.0)) / (h * h);
    let positive_curvature = curvature_at_zero > 0.0 && curvature_at_zero.is_finite();

    let top = grid[grid.len() - 1];
    let last_decade: Vec<(f64, f64)> = grid
        .iter()
        .zip(&values)
        .filter(|(&l, _)| l >= top / 10.0 && l > 0.0)
        .map(|(&l, &v)| (l, v / l))
        .collect();
    let superlinear = last_decade.len() >= 2 && last_decade.windows(2).all(|w| w[1].1 > w[0].1);

    // twice differentiable on |λ| ≥ 2: second differences change gradually
    let positive: Vec<(f64, f64)> = grid
        .iter()
        .copied()
        .zip(values.iter().copied())
        .filter(|&(l, _)| l >= 2.0)
        .collect();
    let second: Vec<f64> = positive
        .windows(3)
        .map(|w| {
            let (l0, v0) = w[0];
            let (l1, v1) = w[1];
            let (l2, v2) = w[2];
            2.0 * ((v2 - v1) / (l2 - l1) - (v1 - v0) / (l1 - l0)) / (l2 - l0)
        })
        .collect();
    let smooth_beyond_two = second.windows(2).all(|d| {
        let (a, b) = (d[0], d[1]);
        let m = a.abs().max(b.abs());
        m < 1e-12 * scale || (a * b > 0.0 && m / a.abs().min(b.abs()) <= 2.0)
    });

    Membership {
        even,
        zero_at_origin,
        convex,
        positive_curvature,
        superlinear,
        smooth_beyond_two,
        curvature_at_zero,
    }
}

/// Value and maximiser of a conjugate evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conjugate {
    pub value: f64,
    pub argmax: f64,
    /// The λ search window had to be widened once.
    pub window_extended: bool,
}

/// `φ*(u) = sup_λ (λu − φ(λ))`, even in `u`.
pub fn legendre_transform<F: ConvexFunction + ?Sized>(phi: &F, u: f64) -> Result<Conjugate> {
    if !u.is_finite() {
        return Err(Error::domain(format!("conjugate argument must be finite (got {u})")));
    }
    let a = u.abs();
    let radius = phi.domain_radius();
    if phi.derivative(0.0).is_some() {
        return conjugate_by_derivative(phi, a, radius);
    }
    conjugate_by_scan(phi, a, radius)
}

fn conjugate_by_derivative<F: ConvexFunction + ?Sized>(phi: &F, a: f64, radius: f64) -> Result<Conjugate> {
    let slope = |l: f64| phi.derivative(l).unwrap_or(f64::INFINITY);
    let mut lo = 0.0;
    let mut hi = 1.0_f64.min(radius);
    while slope(hi) < a {
        if hi >= radius {
            // sup at the domain edge
            return Ok(Conjugate {
                value: radius * a - phi.value(radius),
                argmax: radius,
                window_extended: false,
            });
        }
        lo = hi;
        hi = (2.0 * hi).min(radius);
        if hi > 1e150 {
            return Err(Error::NotAttained(format!("φ' stays below {a}; conjugate is infinite")));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if slope(mid) < a {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // kinks and flat derivatives: take the better endpoint
    let (vl, vh) = (lo * a - phi.value(lo), hi * a - phi.value(hi));
    let (argmax, value) = if vl >= vh { (lo, vl) } else { (hi, vh) };
    Ok(Conjugate {
        value,
        argmax,
        window_extended: false,
    })
}

const SCAN: usize = 512;

fn conjugate_by_scan<F: ConvexFunction + ?Sized>(phi: &F, a: f64, radius: f64) -> Result<Conjugate> {
    let mut window = if radius.is_finite() { radius } else { 4.0 * a + 4.0 };
    let mut extended = false;
    loop {
        let objective = |l: f64| l * a - phi.value(l);
        let step = window / SCAN as f64;
        let mut best = 0;
        let mut best_v = objective(0.0);
        for i in 1..=SCAN {
            let v = objective(step * i as f64);
            if v > best_v {
                best = i;
                best_v = v;
            }
        }
        if best == SCAN && window < radius {
            if extended {
                return Err(Error::NotAttained(format!(
                    "sup_λ(λ·{a} − φ(λ)) still at the window edge λ = {window}"
                )));
            }
            window = (window * 100.0).min(radius);
            extended = true;
            continue;
        }
        let left = step * best.saturating_sub(1) as f64;
        let right = (step * (best + 1) as f64).min(window);
        let (l, neg) = golden_section_min(|l| -objective(l), left, right, 1e-13);
        let (argmax, value) = if -neg > best_v {
            (l, -neg)
        } else {
            (step * best as f64, best_v)
        };
        return Ok(Conjugate {
            value,
            argmax,
            window_extended: extended,
        });
    }
}

/// `exp(φ*(u)) − 1`, the N-function of the Orlicz space isomorphic to B(φ).
pub fn n_function<F: ConvexFunction + ?Sized>(phi: &F, u: f64) -> Result<f64> {
    Ok(legendre_transform(phi, u)?.value.exp_m1())
}

/// `φ*` seen as a function of `u`, so it can be conjugated again.
pub struct ConjugateOf<'a, F: ConvexFunction + ?Sized>(pub &'a F);

impl<F: ConvexFunction + ?Sized> ConvexFunction for ConjugateOf<'_, F> {
    fn value(&self, u: f64) -> f64 {
        legendre_transform(self.0, u).map(|c| c.value).unwrap_or(f64::INFINITY)
    }

    /// The maximiser `λ*(u)` is the derivative of `φ*` (envelope identity).
    fn derivative(&self, u: f64) -> Option<f64> {
        Some(legendre_transform(self.0, u).map(|c| c.argmax).unwrap_or(f64::INFINITY))
    }
}

/// `max_{|λ| ≤ lambda_max} |φ**(λ) − φ(λ)|` over 201 equally spaced points.
pub fn double_conjugate_check(phi: &PhiFunction, lambda_max: f64) -> Result<f64> {
    let conj = ConjugateOf(phi);
    let mut worst = 0.0_f64;
    for i in 0..=200 {
        let l = -lambda_max + 2.0 * lambda_max * i as f64 / 200.0;
        let back = legendre_transform(&conj, l)?.value;
        worst = worst.max((back - phi.value(l)).abs());
    }
    Ok(worst)
}

/// Conjugate values on an equally spaced `u`-grid over `[0, u_max]`,
/// linearly interpolated and extended evenly.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugateTable {
    pub u: Vec<f64>,
    pub values: Vec<f64>,
}

impl ConjugateTable {
    pub const POINTS: usize = 4096;

    pub fn build<F: ConvexFunction + ?Sized>(phi: &F, u_max: f64) -> Result<Self> {
        if !(u_max > 0.0 && u_max.is_finite()) {
            return Err(Error::domain(format!("conjugate table needs u_max > 0 (got {u_max})")));
        }
        let u: Vec<f64> = (0..Self::POINTS)
            .map(|i| u_max * i as f64 / (Self::POINTS - 1) as f64)
            .collect();
        let values = u
            .iter()
            .map(|&x| legendre_transform(phi, x).map(|c| c.value))
            .collect::<Result<_>>()?;
        Ok(ConjugateTable { u, values })
    }

    /// Interpolated `φ*(u)`; `None` outside the tabulated range.
    pub fn eval(&self, u: f64) -> Option<f64> {
        let a = u.abs();
        let top = self.u[self.u.len() - 1];
        if a > top {
            return None;
        }
        let h = top / (self.u.len() - 1) as f64;
        let i = ((a / h) as usize).min(self.u.len() - 2);
        let t = (a - self.u[i]) / h;
        Some(self.values[i] + t * (self.values[i + 1] - self.values[i]))
    }
}

/// `max_{1 ≤ n ≤ n_max} n·φ(λ/√n)` with its bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    pub value: f64,
    /// Smallest `n` attaining the maximum.
    pub argmax: u64,
    /// Number of `n` within relative 10⁻¹² of the maximum.
    pub ties: u64,
    /// The last term strictly exceeds every earlier one: the sup over all
    /// integers has not been captured.
    pub boundary_hit: bool,
    /// Sup of `t·φ(λ/√t)` over real `t ∈ [1, n_max]`, reported for comparison.
    pub continuous_sup: f64,
}

const TIE_TOL: f64 = 1e-12;

fn envelope_scan<F: ConvexFunction + ?Sized>(phi: &F, lambda: f64, n_max: u64) -> (f64, u64, u64, bool) {
    let mut best = f64::NEG_INFINITY;
    let mut argmax = 1;
    let mut ties = 0;
    let mut before_last = f64::NEG_INFINITY;
    for n in 1..=n_max {
        let nf = n as f64;
        let v = nf * phi.value(lambda / nf.sqrt());
        if n == n_max {
            before_last = best;
        }
        if v > best * (1.0 + TIE_TOL) + f64::MIN_POSITIVE {
            best = v;
            argmax = n;
            ties = 1;
        } else if (v - best).abs() <= TIE_TOL * best.abs() {
            ties += 1;
            best = best.max(v);
        }
    }
    let boundary_hit = n_max > 1 && argmax == n_max && best > before_last * (1.0 + TIE_TOL);
    (best, argmax, ties, boundary_hit)
}

/// The rescaled envelope `φ̄(λ) = sup_n n·φ(λ/√n)`, maximised over integers
/// `1 ≤ n ≤ n_max`.
pub fn overline_phi<F: ConvexFunction + ?Sized>(phi: &F, lambda: f64, n_max: u64) -> Result<Envelope> {
    if n_max == 0 {
        return Err(Error::domain("overline φ needs n_max >= 1"));
    }
    let (value, argmax, ties, boundary_hit) = envelope_scan(phi, lambda, n_max);
    let (_, neg) = golden_section_min(
        |s| {
            let t = s.exp();
            -t * phi.value(lambda / t.sqrt())
        },
        0.0,
        (n_max as f64).ln(),
        1e-12,
    );
    Ok(Envelope {
        value,
        argmax,
        ties,
        boundary_hit,
        continuous_sup: (-neg).max(value),
    })
}

/// `φ̄` as a convex function of `λ`, for conjugation.
pub struct OverlinePhi<'a, F: ConvexFunction + ?Sized> {
    pub phi: &'a F,
    pub n_max: u64,
}

impl<F: ConvexFunction + ?Sized> ConvexFunction for OverlinePhi<'_, F> {
    fn value(&self, lambda: f64) -> f64 {
        envelope_scan(self.phi, lambda, self.n_max).0
    }

    fn domain_radius(&self) -> f64 {
        self.phi.domain_radius()
    }
}

/// Empirical unconditional B(φ) norm of a sample.
#[derive(Debug, Clone, PartialEq)]
pub struct NormEstimate {
    pub tau: f64,
    /// λ values whose empirical MGF overflowed; they were ignored.
    pub dropped: Vec<f64>,
}

const TAU_LO: f64 = 1e-6;
const TAU_HI: f64 = 1e3;

/// Smallest `τ` (bisection on `[10⁻⁶, 10³]`, 60 steps) such that
/// `log Ê exp(λξ) ≤ φ(λτ)` for every `λ` in `lambda_grid`.
pub fn bphi_norm_estimate<F: ConvexFunction + ?Sized>(
    sample: &[f64],
    phi: &F,
    lambda_grid: &[f64],
) -> Result<NormEstimate> {
    if sample.is_empty() {
        return Err(Error::domain("B(φ) norm of an empty sample"));
    }
    let n = sample.len() as f64;
    let mean = sample.iter().sum::<f64>() / n;
    let var = sample.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0).max(1.0);
    let se = (var / n).sqrt();
    if mean.abs() > 3.0 * se {
        return Err(Error::Precondition(format!(
            "sample is not centered: mean {mean} exceeds 3 standard errors ({se})"
        )));
    }
    let radius = phi.domain_radius();
    if let Some(l) = lambda_grid.iter().find(|l| l.abs() >= radius) {
        return Err(Error::domain(format!(
            "λ = {l} lies outside the domain of φ (radius {radius})"
        )));
    }

    let mut dropped = Vec::new();
    let mut log_mgf = Vec::with_capacity(lambda_grid.len());
    for &l in lambda_grid {
        let top = sample.iter().map(|v| l * v).fold(f64::NEG_INFINITY, f64::max);
        let lm = top + (sample.iter().map(|v| (l * v - top).exp()).sum::<f64>() / n).ln();
        if lm.is_finite() {
            log_mgf.push((l, lm));
        } else {
            dropped.push(l);
        }
    }
    let feasible = |tau: f64| {
        log_mgf
            .iter()
            .all(|&(l, lm)| lm <= phi.value(l * tau) + 1e-15 * lm.abs())
    };

    if feasible(0.0) {
        return Ok(NormEstimate { tau: 0.0, dropped });
    }
    if !feasible(TAU_HI) {
        return Err(Error::NotAttained(format!("B(φ) norm exceeds {TAU_HI}")));
    }
    let (mut lo, mut hi) = (TAU_LO, TAU_HI);
    if feasible(lo) {
        return Ok(NormEstimate { tau: lo, dropped });
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(NormEstimate { tau: hi, dropped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn quartic_table() -> PhiFunction {
        let pts: Vec<(f64, f64)> = (0..=3000)
            .map(|i| {
                let l = i as f64 * 1e-3;
                (l, l.powi(4))
            })
            .collect();
        PhiFunction::tabulated(&pts).unwrap()
    }

    #[test]
    fn membership_examples() {
        assert!(check_phi_membership(&PhiFunction::quadratic(1.0).unwrap()).passes());
        let m = check_phi_membership(&PhiFunction::phi_q(3.0).unwrap());
        assert!(m.passes(), "{:?}", m.failures());
        let concave: Vec<(f64, f64)> = (0..=100).map(|i| (i as f64 * 0.1, (i as f64 * 0.1).sqrt())).collect();
        let m = check_phi_membership(&PhiFunction::tabulated(&concave).unwrap());
        assert!(!m.convex && !m.passes());
        // slope drops from 2 to 1 at |λ| = 1
        let m = check_phi_membership(&PhiFunction::phi_q(1.0).unwrap());
        assert!(!m.convex);
        assert!(check_phi_membership(&quartic_table()).passes());
    }

    #[test]
    fn conjugate_examples() {
        let half = PhiFunction::quadratic(0.5).unwrap();
        assert!((legendre_transform(&half, 3.0).unwrap().value - 4.5).abs() < 1e-12);
        let one = PhiFunction::quadratic(1.0).unwrap();
        assert!((legendre_transform(&one, 2.0).unwrap().value - 1.0).abs() < 1e-12);
        assert!((legendre_transform(&one, -2.0).unwrap().value - 1.0).abs() < 1e-12);
        // oracle: sup over a 10⁶-point λ-grid on [0, 20]
        let q3 = PhiFunction::phi_q(3.0).unwrap();
        assert!((legendre_transform(&q3, 5.0).unwrap().value - 4.303_314_829).abs() < 1e-5);
        let quartic = quartic_table();
        let c = legendre_transform(&quartic, 4.0).unwrap();
        // λ* = 1, value 4 − 1 = 3
        assert!((c.value - 3.0).abs() < 1e-6, "{c:?}");
    }

    #[test]
    fn conjugate_of_non_superlinear_is_flagged() {
        let q1 = PhiFunction::phi_q(1.0).unwrap();
        assert!(matches!(legendre_transform(&q1, 2.0), Err(Error::NotAttained(_))));
        assert!((legendre_transform(&q1, 0.5).unwrap().value - 0.0625).abs() < 1e-9);
    }

    #[test]
    fn double_conjugate_examples() {
        assert!(double_conjugate_check(&PhiFunction::quadratic(0.5).unwrap(), 5.0).unwrap() <= 1e-6);
        assert!(double_conjugate_check(&PhiFunction::quadratic(2.0).unwrap(), 5.0).unwrap() <= 1e-5);
        assert!(double_conjugate_check(&PhiFunction::phi_q(4.0).unwrap(), 5.0).unwrap() <= 1e-4);
    }

    #[test]
    fn envelope_examples() {
        let one = PhiFunction::quadratic(1.0).unwrap();
        let e = overline_phi(&one, 3.0, 50).unwrap();
        assert!((e.value - 9.0).abs() < 1e-12 && e.ties == 50 && !e.boundary_hit);
        let e = overline_phi(&quartic_table(), 2.0, 100).unwrap();
        assert!((e.value - 16.0).abs() < 1e-9 && e.argmax == 1);
        // oracle: exhaustive integer scan in numpy gives 100
        let q1 = PhiFunction::phi_q(1.0).unwrap();
        let e = overline_phi(&q1, 10.0, 10_000).unwrap();
        let brute = (1..=10_000u64)
            .map(|n| n as f64 * q1.value(10.0 / (n as f64).sqrt()))
            .fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(e.value, brute);
        assert!((e.value - 100.0).abs() < 1e-9 && e.argmax == 100 && !e.boundary_hit);
        let e = overline_phi(&q1, 10.0, 50).unwrap();
        assert!(e.boundary_hit);
        assert!(e.continuous_sup >= e.value);
    }

    #[test]
    fn bphi_norm_examples() {
        let zeros = vec![0.0; 1000];
        let half = PhiFunction::quadratic(0.5).unwrap();
        let grid: Vec<f64> = (1..=40)
            .map(|i| i as f64 * 0.25 - 5.25)
            .filter(|l: &f64| l.abs() > 1e-9)
            .collect();
        assert_eq!(bphi_norm_estimate(&zeros, &half, &grid).unwrap().tau, 0.0);
        let rademacher: Vec<f64> = (0..10_000).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let est = bphi_norm_estimate(&rademacher, &half, &grid).unwrap();
        assert!(est.tau <= 1.0 + 1e-9, "{}", est.tau);
        // oracle: τ = sqrt(max 2·ln(sinh λ/λ)/λ²) on the grid = 0.576751
        let grid: Vec<f64> = (0..=40)
            .map(|i| -5.0 + 0.25 * i as f64)
            .filter(|l: &f64| l.abs() > 1e-9)
            .collect();
        let uniform: Vec<f64> = (0..100_000).map(|i| 2.0 * (i as f64 + 0.5) / 100_000.0 - 1.0).collect();
        let est = bphi_norm_estimate(&uniform, &half, &grid).unwrap();
        assert!((est.tau / 0.576_750_926_976_469 - 1.0).abs() < 0.10, "{}", est.tau);
        let shifted: Vec<f64> = uniform.iter().map(|v| v + 0.5).collect();
        assert!(matches!(
            bphi_norm_estimate(&shifted, &half, &grid),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn n_function_examples() {
        let half = PhiFunction::quadratic(0.5).unwrap();
        assert_eq!(n_function(&half, 0.0).unwrap(), 0.0);
        assert!((n_function(&half, 1.0).unwrap() - (0.5f64.exp() - 1.0)).abs() < 1e-12);
        // oracle: dense-grid conjugate of φ_2 at 3 is 2.25
        let q2 = PhiFunction::phi_q(2.0).unwrap();
        assert!((n_function(&q2, 3.0).unwrap() - 8.487_735_836_358_526).abs() < 1e-9);
    }

    #[test]
    fn conjugate_table_interpolates() {
        let half = PhiFunction::quadratic(0.5).unwrap();
        let t = ConjugateTable::build(&half, 10.0).unwrap();
        for &u in &[0.0, 0.37, -2.5, 9.99] {
            assert!((t.eval(u).unwrap() - u * u / 2.0).abs() < 1e-6);
        }
        assert!(t.eval(10.5).is_none());
    }

    #[test]
    fn conjugate_is_convex_and_even() {
        for phi in [
            PhiFunction::phi_q(3.0).unwrap(),
            PhiFunction::quadratic(0.7).unwrap(),
            quartic_table(),
        ] {
            let h = 0.05;
            let vals: Vec<f64> = (-100..=100)
                .map(|i| legendre_transform(&phi, i as f64 * h).unwrap().value)
                .collect();
            for w in vals.windows(3) {
                assert!(w[0] + w[2] - 2.0 * w[1] >= -1e-8 * w[1].abs().max(1.0));
            }
            for i in 0..100 {
                assert!((vals[i] - vals[200 - i]).abs() <= 1e-8 * vals[i].abs().max(1.0));
            }
        }
    }

    proptest! {
        #[test]
        fn fenchel_young(u in -20.0..20.0f64, l in -10.0..10.0f64, q in 2.0..5.0f64) {
            let phi = PhiFunction::phi_q(q).unwrap();
            let c = legendre_transform(&phi, u).unwrap().value;
            prop_assert!(c >= l * u - phi.value(l) - 1e-9 * c.abs().max(1.0));
        }

        #[test]
        fn envelope_monotone_in_n_max(l in -20.0..20.0f64, q in 1.0..4.0f64, n in 1u64..200, extra in 0u64..200) {
            let phi = PhiFunction::phi_q(q).unwrap();
            let a = overline_phi(&phi, l, n).unwrap().value;
            let b = overline_phi(&phi, l, n + extra).unwrap().value;
            prop_assert!(b >= a);
            prop_assert!(a >= phi.value(l));
        }

        #[test]
        fn bphi_norm_scale_equivariant(c in 0.2..5.0f64, seed in 0u64..1000) {
            // deterministic centered sample: symmetric pairs
            let mut s = Vec::new();
            let mut x = seed as f64 * 0.618;
            for _ in 0..200 {
                x = (x * 7.3 + 0.1).fract();
                s.push(x * 2.0);
                s.push(-x * 2.0);
            }
            let half = PhiFunction::quadratic(0.5).unwrap();
            let grid: Vec<f64> = (1..=20).map(|i| i as f64 * 0.2).collect();
            let scaled: Vec<f64> = s.iter().map(|v| c * v).collect();
            let grid_c: Vec<f64> = grid.iter().map(|l| l / c).collect();
            let a = bphi_norm_estimate(&s, &half, &grid).unwrap().tau;
            let b = bphi_norm_estimate(&scaled, &half, &grid_c).unwrap().tau;
            prop_assert!((b - c * a).abs() <= 1e-9 * (1.0 + c * a), "{} vs {}", b, c * a);
        }
    }
}
