//! Tail functions and their algebra.
//!
//! A tail function is a non-increasing map `T: [0, ∞) → [0, 1]` with
//! `T(0) = 1` and `T(∞) = 0`. For a random variable the canonical choice is
//! `T(ξ, x) = max(P(ξ ≥ x), P(ξ ≤ −x))`.
//!
//! Besides evaluation this module provides:
//! * [`product_compose`], the bound `min(1, 4·inf_y (T(y) + G(x/y)))` on the
//!   tail of a product of two variables;
//! * [`tail_second_moment`], the truncated second moment `−∫_v^∞ x² dT(x)`;
//! * [`w_operator`], `W[T](x) = min(1, inf_v [exp(−x²/(8v²)) − ∫_v^∞ x² dT(x)])`,
//!   which bounds the tail of every unit-norm weighted sum of martingale
//!   differences whose tails are dominated by `T`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numerics::{integrate_to_infinity, log_scan_min, ScanMin};

/// Points in the coarse log-spaced scan of every infimum search.
pub const SCAN_POINTS: usize = 256;
/// Relative tolerance of the golden-section refinement.
pub const REFINE_TOL: f64 = 1e-6;
/// Absolute tolerance of the layered-form quadrature.
pub const QUAD_TOL: f64 = 1e-10;
/// Truncation threshold for `x²·T(x)` in the layered integral.
pub const TRUNCATION: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub enum TailFunction {
    /// `min(1, Y·exp(−(x/K)^q))`
    Weibull {
        y: f64,
        k: f64,
        q: f64,
    },
    /// `min(1, C1·exp(−C2·(x/K)^q·(log(F + x/K))^r))`, `F = 1` for `r ≤ 0`
    /// and `F = e^q` for `r > 0`.
    LogModified {
        c1: f64,
        c2: f64,
        k: f64,
        q: f64,
        r: f64,
    },
    /// `min(1, x^{−r})`
    Pareto {
        r: f64,
    },
    /// `min(1, exp(−x²/(2σ²)))`
    SubGaussian {
        sigma: f64,
    },
    Empirical(EmpiricalTail),
}

impl TailFunction {
    pub fn weibull(y: f64, k: f64, q: f64) -> Result<Self> {
        if !(y >= 1.0 && k > 0.0 && q > 0.0) || !(y.is_finite() && k.is_finite() && q.is_finite()) {
            return Err(Error::domain(format!(
                "Weibull tail needs Y >= 1, K > 0, q > 0 (got Y={y}, K={k}, q={q})"
            )));
        }
        Ok(TailFunction::Weibull { y, k, q })
    }

    pub fn log_modified(c1: f64, c2: f64, k: f64, q: f64, r: f64) -> Result<Self> {
        if !(c1 > 0.0 && c2 > 0.0 && k > 0.0 && q > 0.0 && r.is_finite()) {
            return Err(Error::domain(format!(
                "log-modified tail needs C1, C2, K, q > 0 and finite r (got C1={c1}, C2={c2}, K={k}, q={q}, r={r})"
            )));
        }
        // x^q·log(1+x)^r is increasing only when r >= -q
        if r < -q {
            return Err(Error::domain(format!(
                "log-modified tail with r = {r} < -q = {} is not monotone",
                -q
            )));
        }
        Ok(TailFunction::LogModified { c1, c2, k, q, r })
    }

    pub fn pareto(r: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::domain(format!("Pareto tail needs r > 0 (got {r})")));
        }
        Ok(TailFunction::Pareto { r })
    }

    pub fn sub_gaussian(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::domain(format!(
                "sub-Gaussian tail needs sigma > 0 (got {sigma})"
            )));
        }
        Ok(TailFunction::SubGaussian { sigma })
    }

    pub fn empirical(sample: &[f64]) -> Result<Self> {
        Ok(TailFunction::Empirical(EmpiricalTail::new(sample)?))
    }

    /// `T(x)` for `x ≥ 0`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if x.is_nan() || x < 0.0 {
            return Err(Error::domain(format!(
                "tail functions are defined for x >= 0 (got {x})"
            )));
        }
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: f64) -> f64 {
        if x == 0.0 {
            return 1.0;
        }
        let v = match *self {
            TailFunction::Weibull { y, k, q } => y * (-(x / k).powf(q)).exp(),
            TailFunction::LogModified { c1, c2, k, q, r } => {
                let z = x / k;
                let f = if r > 0.0 { q.exp() } else { 1.0 };
                c1 * (-c2 * z.powf(q) * (f + z).ln().powf(r)).exp()
            }
            TailFunction::Pareto { r } => x.powf(-r),
            TailFunction::SubGaussian { sigma } => (-x * x / (2.0 * sigma * sigma)).exp(),
            TailFunction::Empirical(ref e) => e.eval(x),
        };
        v.clamp(0.0, 1.0)
    }

    /// Largest point of the support, when it is finite.
    pub fn support_bound(&self) -> Option<f64> {
        match self {
            TailFunction::Empirical(e) => Some(e.max_abs()),
            _ => None,
        }
    }
}

impl fmt::Display for TailFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TailFunction::Weibull { y, k, q } => write!(f, "weibull:{y},{k},{q}"),
            TailFunction::LogModified { c1, c2, k, q, r } => write!(f, "logmod:{c1},{c2},{k},{q},{r}"),
            TailFunction::Pareto { r } => write!(f, "pareto:{r}"),
            TailFunction::SubGaussian { sigma } => write!(f, "subgaussian:{sigma}"),
            TailFunction::Empirical(e) => write!(f, "empirical:<{} points>", e.len()),
        }
    }
}

/// Parses `weibull:Y,K,q`, `logmod:C1,C2,K,q,r`, `pareto:r` and `subgaussian:sigma`.
impl FromStr for TailFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (family, args) = s
            .split_once(':')
            .ok_or_else(|| Error::domain(format!("tail spec `{s}` must look like family:params")))?;
        let params: Vec<f64> = args
            .split(',')
            .map(|a| a.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::domain(format!("tail spec `{s}`: {e}")))?;
        let want = |n: usize| {
            if params.len() == n {
                Ok(())
            } else {
                Err(Error::domain(format!(
                    "tail family `{family}` takes {n} parameter(s), got {}",
                    params.len()
                )))
            }
        };
        match family.trim().to_ascii_lowercase().as_str() {
            "weibull" => {
                want(3)?;
                TailFunction::weibull(params[0], params[1], params[2])
            }
            "logmod" | "log-modified" => {
                want(5)?;
                TailFunction::log_modified(params[0], params[1], params[2], params[3], params[4])
            }
            "pareto" => {
                want(1)?;
                TailFunction::pareto(params[0])
            }
            "subgaussian" | "sub-gaussian" => {
                want(1)?;
                TailFunction::sub_gaussian(params[0])
            }
            other => Err(Error::domain(format!("unknown tail family `{other}`"))),
        }
    }
}

/// Tail function of a finite sample: `max(#{ξ ≥ x}, #{ξ ≤ −x}) / N`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalTail {
    sorted: Vec<f64>,
}

impl EmpiricalTail {
    pub fn new(sample: &[f64]) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::domain("empirical tail of an empty sample"));
        }
        if sample.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("empirical tail sample contains a non-finite value"));
        }
        let mut sorted = sample.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(EmpiricalTail { sorted })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.sorted[0].abs().max(self.sorted[self.sorted.len() - 1].abs())
    }

    fn count_ge(&self, x: f64) -> usize {
        self.sorted.len() - self.sorted.partition_point(|&v| v < x)
    }

    fn count_le(&self, x: f64) -> usize {
        self.sorted.partition_point(|&v| v <= x)
    }

    /// Evaluation for `x > 0`; `x = 0` is handled by the caller.
    pub fn eval(&self, x: f64) -> f64 {
        let hits = self.count_ge(x).max(self.count_le(-x));
        hits as f64 / self.sorted.len() as f64
    }

    /// Sorted distinct jump points `|ξ_j| > 0` of the step function.
    pub fn jump_points(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self.sorted.iter().map(|v| v.abs()).filter(|&v| v > 0.0).collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// `v²·T(v) + 2∫_v^∞ x·T(x) dx`, exact for the step function.
    fn second_moment(&self, v: f64) -> f64 {
        let tv = if v == 0.0 { 1.0 } else { self.eval(v) };
        let mut total = v * v * tv;
        let mut lo = v;
        for b in self.jump_points().into_iter().filter(|&b| b > v) {
            // T is constant on (lo, b]; its value there is T(b)
            total += self.eval(b) * (b * b - lo * lo);
            lo = b;
        }
        total
    }
}

/// `min(1, 4·inf_{y>0}(T(y) + G(x/y)))`: a bound on the tail of `ξ·η` when
/// `T(ξ,·) ≤ T` and `T(η,·) ≤ G`.
pub fn product_compose(t: &TailFunction, g: &TailFunction, x: f64) -> Result<f64> {
    Ok(product_compose_detailed(t, g, x)?.value)
}

/// As [`product_compose`], also returning the minimiser `y` and whether the
/// coarse scan hit the edge of its window `[√x·10⁻³, √x·10³]`.
pub fn product_compose_detailed(t: &TailFunction, g: &TailFunction, x: f64) -> Result<ScanMin> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::domain(format!("product composition needs x > 0 (got {x})")));
    }
    let centre = x.sqrt();
    let objective = |y: f64| t.eval_unchecked(y) + g.eval_unchecked(x / y);
    let m = log_scan_min(objective, centre * 1e-3, centre * 1e3, SCAN_POINTS, REFINE_TOL);
    Ok(ScanMin {
        value: (4.0 * m.value).min(1.0),
        ..m
    })
}

/// `−∫_v^∞ x² dT(x)`, computed through the layered form
/// `v²·T(v) + 2∫_v^∞ x·T(x) dx`.
pub fn tail_second_moment(t: &TailFunction, v: f64) -> Result<f64> {
    if v.is_nan() || v < 0.0 {
        return Err(Error::domain(format!("second moment needs v >= 0 (got {v})")));
    }
    match *t {
        TailFunction::Pareto { r } if r <= 2.0 => Err(Error::InfiniteMoment(format!(
            "Pareto tail x^-{r}: ∫ x² |dT| diverges for r <= 2"
        ))),
        TailFunction::Empirical(ref e) => Ok(e.second_moment(v)),
        _ => {
            let tv = t.eval_unchecked(v);
            let layered = integrate_to_infinity(
                |x| x * t.eval_unchecked(x),
                v,
                |x| x * x * t.eval_unchecked(x) < TRUNCATION,
                QUAD_TOL,
            );
            Ok(v * v * tv + 2.0 * layered)
        }
    }
}

/// `W[T](x) = min(1, inf_{v>0} [exp(−x²/(8v²)) + tail_second_moment(T, v)])`.
pub fn w_operator(t: &TailFunction, x: f64) -> Result<f64> {
    Ok(w_operator_detailed(t, x)?.value)
}

/// As [`w_operator`], with the minimising `v` and the boundary flag of the
/// search window `[x·10⁻³, x·10³]`.
pub fn w_operator_detailed(t: &TailFunction, x: f64) -> Result<ScanMin> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::domain(format!("W operator needs x > 0 (got {x})")));
    }
    // surfaces the infinite-moment error before the scan
    tail_second_moment(t, x)?;
    let objective = |v: f64| {
        let m = tail_second_moment(t, v).unwrap_or(f64::INFINITY);
        (-x * x / (8.0 * v * v)).exp() + m
    };
    let m = log_scan_min(objective, x * 1e-3, x * 1e3, SCAN_POINTS, REFINE_TOL);
    Ok(ScanMin {
        value: m.value.clamp(f64::MIN_POSITIVE, 1.0),
        ..m
    })
}

/// Tail function of a sample, `max(P̂(ξ ≥ x), P̂(ξ ≤ −x))`.
pub fn empirical_tail(sample: &[f64]) -> Result<EmpiricalTail> {
    EmpiricalTail::new(sample)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::integrate;
    use proptest::prelude::*;

    #[test]
    fn eval_examples() {
        let w = TailFunction::weibull(1.0, 1.0, 2.0).unwrap();
        assert_eq!(w.eval(0.0).unwrap(), 1.0);
        let p = TailFunction::pareto(1.0).unwrap();
        assert_eq!(p.eval(2.0).unwrap(), 0.5);
        let e = TailFunction::weibull(1.0, 1.0, 1.0).unwrap();
        assert!((e.eval(4f64.ln()).unwrap() - 0.25).abs() < 1e-15);
        assert!(matches!(w.eval(-1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn log_modified_clamps_and_uses_f_rule() {
        let t = TailFunction::log_modified(3.0, 1.0, 1.0, 2.0, 1.0).unwrap();
        assert_eq!(t.eval(0.01).unwrap(), 1.0);
        let x: f64 = 2.0;
        let expect = 3.0 * (-(x * x) * (2f64.exp() + x).ln()).exp();
        assert!((t.eval(x).unwrap() - expect).abs() < 1e-15);
        assert!(TailFunction::log_modified(1.0, 1.0, 1.0, 1.0, -2.0).is_err());
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["weibull:2,1,0.5", "pareto:1.5", "subgaussian:1", "logmod:1,2,1,1,-0.5"] {
            let t: TailFunction = s.parse().unwrap();
            assert_eq!(t.to_string().parse::<TailFunction>().unwrap(), t);
        }
        assert!("cauchy:1".parse::<TailFunction>().is_err());
        assert!("pareto:1,2".parse::<TailFunction>().is_err());
    }

    #[test]
    fn empirical_examples() {
        let e = empirical_tail(&[1.0, -1.0]).unwrap();
        assert_eq!(e.eval(0.5), 0.5);
        let e = empirical_tail(&[2.0, 2.0, 2.0, 2.0]).unwrap();
        assert_eq!(e.eval(1.0), 1.0);
        assert_eq!(e.eval(2.0), 1.0);
        assert_eq!(e.eval(2.0 + 1e-12), 0.0);
        assert!(empirical_tail(&[]).is_err());
    }

    #[test]
    fn compose_near_zero_is_one() {
        let t = TailFunction::sub_gaussian(1.0).unwrap();
        let g = TailFunction::pareto(1.0).unwrap();
        assert_eq!(product_compose(&t, &g, 1e-9).unwrap(), 1.0);
        assert!(product_compose(&t, &g, 0.0).is_err());
    }

    #[test]
    fn compose_exponential_pair_at_nine() {
        // oracle: 2·10⁶-point log grid over y, min at y = 3
        let e = TailFunction::weibull(1.0, 1.0, 1.0).unwrap();
        let d = product_compose_detailed(&e, &e, 9.0).unwrap();
        assert!((d.value - 0.398_296_546_942_911_5).abs() < 1e-9);
        assert!((d.value - 8.0 * (-3.0f64).exp()).abs() < 1e-9);
        assert!((d.argmin - 3.0).abs() < 1e-3);
        assert!(!d.boundary_hit);
    }

    #[test]
    fn compose_weibull_decay_exponent() {
        // −ln(bound) grows like x^{q1 q2/(q1+q2)}
        for &(q1, q2) in &[(1.0, 1.0), (2.0, 1.0), (0.5, 2.0)] {
            let t = TailFunction::weibull(1.0, 1.0, q1).unwrap();
            let g = TailFunction::weibull(1.0, 1.0, q2).unwrap();
            let (x1, x2) = (1e2, 1e4);
            let l1 = (-(product_compose(&t, &g, x1).unwrap() / 8.0).ln()).ln();
            let l2 = (-(product_compose(&t, &g, x2).unwrap() / 8.0).ln()).ln();
            let slope = (l2 - l1) / (x2 / x1).ln();
            let want = q1 * q2 / (q1 + q2);
            assert!((slope - want).abs() < 0.02, "q=({q1},{q2}) slope {slope} want {want}");
        }
    }

    #[test]
    fn second_moment_parts_identity_on_weibull() {
        // direct Stieltjes form −∫ x² T'(x) dx against the layered form
        for &(k, q) in &[(1.0, 1.0), (2.0, 0.7), (0.5, 3.0)] {
            let t = TailFunction::weibull(1.0, k, q).unwrap();
            let density = |x: f64| {
                let z: f64 = x / k;
                (q / k) * z.powf(q - 1.0) * (-z.powf(q)).exp()
            };
            for &v in &[0.0, 0.3, 1.0, 2.5] {
                let direct = crate::numerics::integrate_to_infinity(
                    |x| x * x * density(x),
                    v,
                    |x| x * x * x * density(x) < 1e-16,
                    1e-12,
                );
                let layered = tail_second_moment(&t, v).unwrap();
                assert!(
                    (direct - layered).abs() < 1e-8,
                    "k={k} q={q} v={v}: {direct} vs {layered}"
                );
            }
        }
    }

    #[test]
    fn second_moment_examples() {
        // oracle: ∫_0^∞ x³ e^{−x²/2} dx = 2 (scipy quad)
        let sg = TailFunction::sub_gaussian(1.0).unwrap();
        assert!((tail_second_moment(&sg, 0.0).unwrap() - 2.0).abs() < 1e-9);
        let direct = integrate(|x| x * x * x * (-x * x / 2.0).exp(), 0.0, 40.0, 1e-13);
        assert!((direct - 2.0).abs() < 1e-10);
        let bounded = TailFunction::empirical(&[0.5, -1.0, 0.25]).unwrap();
        assert_eq!(tail_second_moment(&bounded, 1.5).unwrap(), 0.0);
        let heavy = TailFunction::pareto(1.5).unwrap();
        assert!(matches!(tail_second_moment(&heavy, 1.0), Err(Error::InfiniteMoment(_))));
        // closed form r/(r−2) for v ≤ 1
        let p3 = TailFunction::pareto(3.0).unwrap();
        assert!((tail_second_moment(&p3, 0.5).unwrap() - 3.0).abs() < 1e-8);
    }

    #[test]
    fn empirical_second_moment_matches_sample() {
        // −∫_v^∞ x² dT for a one-sided positive sample is the mean of ξ² over ξ > v
        let s = [0.5, 1.0, 2.0, 3.0];
        let e = TailFunction::empirical(&s).unwrap();
        let m = tail_second_moment(&e, 0.75).unwrap();
        let v: f64 = 0.75;
        // layered form keeps v²·T(v) + ∑ T(b)(b² − lo²)
        let expect = v * v * 0.75 + 0.75 * (1.0 - v * v) + 0.5 * 3.0 + 0.25 * 5.0;
        assert!((m - expect).abs() < 1e-12);
        assert!((expect - (1.0 + 4.0 + 9.0) / 4.0).abs() < 1e-12);
    }

    #[test]
    fn w_operator_subgaussian_regression() {
        // oracle: 10⁵-point v-grid, then root of the derivative in mpmath
        let sg = TailFunction::sub_gaussian(1.0).unwrap();
        let w = w_operator_detailed(&sg, 8.0).unwrap();
        assert!((w.value - 0.529_916_709_803_234).abs() < 1e-9, "{}", w.value);
        assert!(!w.boundary_hit);
        assert!((w_operator(&sg, 2.0).unwrap() - 0.974_880_259_470_03).abs() < 1e-9);
        assert!((w_operator(&sg, 20.0).unwrap() - 0.042_620_020_645_171_8).abs() < 1e-9);
        assert_eq!(w_operator(&sg, 1e-6).unwrap(), 1.0);
    }

    #[test]
    fn w_operator_bounded_tail_is_gaussian_like() {
        let t = TailFunction::empirical(&[1.0, -1.0, 0.5, -0.5]).unwrap();
        for &x in &[10.0, 20.0, 30.0] {
            let w = w_operator(&t, x).unwrap();
            let at_one = (-x * x / 8.0f64).exp();
            assert!(
                w <= at_one * (1.0 + 1e-5) && w >= at_one * (1.0 - 1e-3),
                "x={x}: {w} vs {at_one}"
            );
        }
    }

    #[test]
    fn w_operator_propagates_infinite_moment() {
        let t = TailFunction::pareto(2.0).unwrap();
        assert!(matches!(w_operator(&t, 3.0), Err(Error::InfiniteMoment(_))));
    }

    fn any_tail() -> impl Strategy<Value = TailFunction> {
        prop_oneof![
            (1.0..5.0f64, 0.1..5.0f64, 0.2..4.0f64).prop_map(|(y, k, q)| TailFunction::weibull(y, k, q).unwrap()),
            (0.1..4.0f64).prop_map(|r| TailFunction::pareto(r).unwrap()),
            (0.1..5.0f64).prop_map(|s| TailFunction::sub_gaussian(s).unwrap()),
            (0.5..3.0f64, 0.1..3.0f64, 0.2..4.0f64, 0.2..3.0f64, -1.0..1.0f64).prop_map(|(c1, c2, k, q, rf)| {
                let r = if rf < 0.0 { rf * q } else { rf };
                TailFunction::log_modified(c1, c2, k, q, r).unwrap()
            }),
            prop::collection::vec(-10.0..10.0f64, 1..50).prop_map(|s| TailFunction::empirical(&s).unwrap()),
        ]
    }

    proptest! {
        #[test]
        fn eval_is_monotone(t in any_tail(), a in 0.0..50.0f64, b in 0.0..50.0f64) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let (tl, th) = (t.eval(lo).unwrap(), t.eval(hi).unwrap());
            prop_assert!(th <= tl + 1e-15);
            prop_assert!((0.0..=1.0).contains(&tl));
            prop_assert_eq!(t.eval(0.0).unwrap(), 1.0);
        }

        #[test]
        fn compose_is_symmetric(a in 1.0..5.0f64, qa in 0.5..3.0f64, s in 0.5..3.0f64, x in 0.5..50.0f64) {
            let t = TailFunction::weibull(a, 1.0, qa).unwrap();
            let g = TailFunction::sub_gaussian(s).unwrap();
            let l = product_compose(&t, &g, x).unwrap();
            let r = product_compose(&g, &t, x).unwrap();
            prop_assert!((l - r).abs() <= 1e-9, "{} vs {}", l, r);
        }

        #[test]
        fn second_moment_is_monotone(s in 0.3..3.0f64, v1 in 0.0..10.0f64, dv in 0.0..5.0f64) {
            let t = TailFunction::sub_gaussian(s).unwrap();
            let m1 = tail_second_moment(&t, v1).unwrap();
            let m2 = tail_second_moment(&t, v1 + dv).unwrap();
            prop_assert!(m2 <= m1 + 1e-9);
        }
    }

    #[test]
    fn second_moment_vanishes_far_out() {
        let t = TailFunction::weibull(2.0, 1.0, 1.0).unwrap();
        assert!(tail_second_moment(&t, 60.0).unwrap() < 1e-20);
    }

    #[test]
    fn w_operator_is_non_increasing() {
        let t = TailFunction::weibull(2.0, 1.0, 1.0).unwrap();
        let mut last = 1.0;
        for i in 1..40 {
            let w = w_operator(&t, i as f64 * 0.75).unwrap();
            assert!(w > 0.0 && w <= 1.0);
            assert!(w <= last + 1e-9, "x={}: {w} > {last}", i as f64 * 0.75);
            last = w;
        }
    }
}
