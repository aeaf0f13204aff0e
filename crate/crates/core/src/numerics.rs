//! Small numerical kernels shared by the bound computations: adaptive
//! Gauss–Kronrod quadrature, golden-section search and the log-spaced
//! scan-then-refine minimizer used for every infimum in the crate.

/// Gauss–Kronrod 7/15 abscissae on [0, 1] (symmetric; index 7 is the centre).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];

/// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Adaptive Gauss–Kronrod integral of `f` over the finite interval [a, b].
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    integrate_rec(&f, a, b, abs_tol, 0)
}

fn integrate_rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (value, err) = gk15(f, a, b);
    if err <= tol || depth >= 48 || (b - a) <= 4.0 * f64::EPSILON * a.abs().max(b.abs()) {
        return value;
    }
    let m = 0.5 * (a + b);
    integrate_rec(f, a, m, 0.5 * tol, depth + 1) + integrate_rec(f, m, b, 0.5 * tol, depth + 1)
}

/// Integral over [a, ∞) evaluated on geometrically growing segments. Integration
/// stops after the first segment whose right end satisfies `negligible`.
pub fn integrate_to_infinity<F, S>(f: F, a: f64, negligible: S, abs_tol: f64) -> f64
where
    F: Fn(f64) -> f64,
    S: Fn(f64) -> bool,
{
    let mut lo = a;
    let mut width = a.abs().max(1.0);
    let mut total = 0.0;
    for _ in 0..2000 {
        let hi = lo + width;
        total += integrate(&f, lo, hi, abs_tol);
        if negligible(hi) {
            break;
        }
        lo = hi;
        width *= 2.0;
    }
    total
}

/// Golden-section minimisation of a unimodal function on [a, b].
/// Returns `(argmin, min)`.
pub fn golden_section_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, rel_tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (b - a).abs() <= rel_tol * (c.abs() + d.abs()).max(f64::MIN_POSITIVE) {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// `n` points log-spaced from `lo` to `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi >= lo && n >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// Result of a scan-then-refine minimisation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanMin {
    pub argmin: f64,
    pub value: f64,
    /// The coarse minimum sat on the first or last grid point.
    pub boundary_hit: bool,
}

/// Coarse log-spaced scan over [lo, hi] followed by golden-section refinement
/// between the neighbours of the best grid point.
pub fn log_scan_min<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, points: usize, rel_tol: f64) -> ScanMin {
    let grid = log_space(lo, hi, points);
    let values: Vec<f64> = grid.iter().map(|&t| f(t)).collect();
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = i;
        }
    }
    let boundary_hit = best == 0 || best == points - 1;
    let left = grid[best.saturating_sub(1)];
    let right = grid[(best + 1).min(points - 1)];
    // refine in log coordinates so the relative tolerance is uniform
    let (t, v) = golden_section_min(|s| f(s.exp()), left.ln(), right.ln(), rel_tol);
    if v < values[best] {
        ScanMin {
            argmin: t.exp(),
            value: v,
            boundary_hit,
        }
    } else {
        ScanMin {
            argmin: grid[best],
            value: values[best],
            boundary_hit,
        }
    }
}

/// Ordinary least squares of `y` on `x` with intercept. Returns
/// `(slope, intercept, r_squared)`; R² is clamped to [0, 1].
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = b - (intercept + slope * a);
            r * r
        })
        .sum();
    let r2 = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    (slope, intercept, r2.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_polynomial_and_gaussian() {
        let v = integrate(|x| x * x * x, 0.0, 2.0, 1e-12);
        assert!((v - 4.0).abs() < 1e-12);
        let g = integrate_to_infinity(|x| (-x * x / 2.0).exp(), 0.0, |x| x > 40.0, 1e-12);
        assert!((g - (std::f64::consts::PI / 2.0).sqrt()).abs() < 1e-10);
    }

    #[test]
    fn golden_finds_parabola_minimum() {
        let (x, fx) = golden_section_min(|x| (x - 1.3).powi(2) + 2.0, -5.0, 5.0, 1e-10);
        assert!((x - 1.3).abs() < 1e-7);
        assert!((fx - 2.0).abs() < 1e-12);
    }

    #[test]
    fn scan_flags_boundary() {
        let s = log_scan_min(|x| x, 1.0, 10.0, 32, 1e-8);
        assert!(s.boundary_hit);
        let s = log_scan_min(|x| (x.ln() - 1.0).powi(2), 0.01, 100.0, 64, 1e-10);
        assert!(!s.boundary_hit);
        assert!((s.argmin - std::f64::consts::E).abs() < 1e-4);
    }

    #[test]
    fn exact_line_fit() {
        let x = [1.0, 2.0, 3.0, 5.0];
        let y: Vec<f64> = x.iter().map(|a| 0.5 - 2.0 * a).collect();
        let (s, i, r2) = linear_fit(&x, &y);
        assert!((s + 2.0).abs() < 1e-14 && (i - 0.5).abs() < 1e-14);
        assert_eq!(r2, 1.0);
    }
}
