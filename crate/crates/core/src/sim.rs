//! Martingale-difference generators and Monte Carlo estimators.
//!
//! Randomness is counter based: replica `r` of a run seeded with `seed` reads
//! from ChaCha8 stream `r` of the key derived from `seed`, so every estimate
//! is a pure function of its inputs no matter how replicas are scheduled
//! across threads. Counts are reduced as integers.

use nalgebra::{DMatrix, SymmetricEigen};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::clopper_pearson;

/// Replicas per work unit. Fixed so that chunking never depends on the pool.
const CHUNK: u64 = 4096;
/// Stream offset of bootstrap resampling, disjoint from the replica streams.
const BOOTSTRAP_STREAM: u64 = 1 << 63;

/// Finite discrete law given by `(value, probability)` atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDist {
    atoms: Vec<(f64, f64)>,
    cumulative: Vec<f64>,
}

impl DiscreteDist {
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::domain("a discrete law needs at least one atom"));
        }
        if atoms.iter().any(|&(v, p)| !v.is_finite() || !(p > 0.0 && p <= 1.0)) {
            return Err(Error::domain("atoms need finite values and probabilities in (0, 1]"));
        }
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!("atom probabilities sum to {total}, not 1")));
        }
        let mut acc = 0.0;
        let mut cumulative: Vec<f64> = atoms
            .iter()
            .map(|a| {
                acc += a.1;
                acc
            })
            .collect();
        *cumulative.last_mut().expect("non-empty") = f64::INFINITY;
        Ok(DiscreteDist { atoms, cumulative })
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn mean(&self) -> f64 {
        self.atoms.iter().map(|&(v, p)| v * p).sum()
    }

    pub fn moment(&self, k: i32) -> f64 {
        self.atoms.iter().map(|&(v, p)| p * v.powi(k)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.atoms.iter().fold(0.0, |m, a| m.max(a.0.abs()))
    }

    /// Same atoms at `v` and `−v` with equal mass.
    pub fn is_symmetric(&self) -> bool {
        self.atoms.iter().all(|&(v, p)| {
            let mirror: f64 = self.atoms.iter().filter(|a| a.0 == -v).map(|a| a.1).sum();
            let here: f64 = self.atoms.iter().filter(|a| a.0 == v).map(|a| a.1).sum();
            (mirror - here).abs() <= 1e-12 && p > 0.0
        })
    }

    fn sample(&self, u: f64) -> f64 {
        let i = self.cumulative.partition_point(|&c| c <= u);
        self.atoms[i.min(self.atoms.len() - 1)].0
    }
}

/// Laws for independent differences.
#[derive(Debug, Clone, PartialEq)]
pub enum IidLaw {
    Rademacher,
    /// Uniform on `[−h, h]`.
    Uniform {
        half_width: f64,
    },
    /// Random sign times a magnitude with `P(|ξ| ≥ x) = exp(−x^q)`.
    WeibullSym {
        q: f64,
    },
    /// Must have mean zero.
    Discrete(DiscreteDist),
}

impl IidLaw {
    fn validate(&self) -> Result<()> {
        match self {
            IidLaw::Rademacher => Ok(()),
            IidLaw::Uniform { half_width } if *half_width > 0.0 && half_width.is_finite() => Ok(()),
            IidLaw::Uniform { half_width } => Err(Error::domain(format!(
                "uniform half-width must be positive (got {half_width})"
            ))),
            IidLaw::WeibullSym { q } if *q > 0.0 && q.is_finite() => Ok(()),
            IidLaw::WeibullSym { q } => Err(Error::domain(format!("Weibull shape must be positive (got {q})"))),
            IidLaw::Discrete(d) if d.mean().abs() <= 1e-12 * d.max_abs().max(1.0) => Ok(()),
            IidLaw::Discrete(d) => Err(Error::domain(format!(
                "discrete differences must be centred (mean {})",
                d.mean()
            ))),
        }
    }

    fn is_symmetric(&self) -> bool {
        match self {
            IidLaw::Discrete(d) => d.is_symmetric(),
            _ => true,
        }
    }

    fn draw<R: RngCore>(&self, rng: &mut R) -> f64 {
        match self {
            IidLaw::Rademacher => random_sign(rng),
            IidLaw::Uniform { half_width } => half_width * (2.0 * unit_open(rng) - 1.0),
            IidLaw::WeibullSym { q } => {
                let sign = random_sign(rng);
                sign * weibull_magnitude(*q, unit_open(rng))
            }
            IidLaw::Discrete(d) => d.sample(unit_open(rng)),
        }
    }
}

/// Predictable sign applied to conditionally symmetric draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignRule {
    /// Always `+1`.
    Constant,
    /// `sign(S(k−1))`, `+1` at zero.
    FollowSign,
    /// `−sign(S(k−1))`, `+1` at zero.
    OppositeSign,
}

impl SignRule {
    fn factor(self, partial_sum: f64) -> f64 {
        let s = if partial_sum < 0.0 { -1.0 } else { 1.0 };
        match self {
            SignRule::Constant => 1.0,
            SignRule::FollowSign => s,
            SignRule::OppositeSign => -s,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    Iid(IidLaw),
    /// `ξ(i) = η·ζ(i)`: one symmetric Weibull(q) factor `η` per path times
    /// fresh i.i.d. draws of `ζ`.
    ProductAdversarial {
        q: f64,
        zeta: DiscreteDist,
    },
    /// `ξ(k) = ε(S(k−1))·β(k)` with `β` i.i.d. symmetric and `ε = ±1`
    /// predictable, so each difference is conditionally distributed as `β`.
    ConditionalSubPhi {
        base: IidLaw,
        rule: SignRule,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MartingaleSpec {
    pub generator: Generator,
    pub n: u64,
}

impl MartingaleSpec {
    pub fn new(generator: Generator, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("horizon n must be at least 1"));
        }
        match &generator {
            Generator::Iid(law) => law.validate()?,
            Generator::ProductAdversarial { q, zeta } => {
                if !(*q > 0.0 && q.is_finite()) {
                    return Err(Error::domain(format!("adversarial shape q must be positive (got {q})")));
                }
                if zeta.max_abs() == 0.0 {
                    return Err(Error::domain("ζ must not vanish identically"));
                }
                if zeta.mean().abs() > 1e-12 * zeta.max_abs() {
                    return Err(Error::domain(format!("ζ must be centred (mean {})", zeta.mean())));
                }
            }
            Generator::ConditionalSubPhi { base, .. } => {
                base.validate()?;
                if !base.is_symmetric() {
                    return Err(Error::domain(
                        "the base law of a sign-flipped sequence must be symmetric",
                    ));
                }
            }
        }
        Ok(MartingaleSpec { generator, n })
    }

    /// Draws one path, calling `visit(ξ(k), S(k−1))` for each step, and
    /// returns `S(n)`.
    pub fn walk<R: RngCore>(&self, rng: &mut R, mut visit: impl FnMut(f64, f64)) -> f64 {
        let mut s = 0.0;
        match &self.generator {
            Generator::Iid(law) => {
                for _ in 0..self.n {
                    let xi = law.draw(rng);
                    visit(xi, s);
                    s += xi;
                }
            }
            Generator::ProductAdversarial { q, zeta } => {
                let eta = random_sign(rng) * weibull_magnitude(*q, unit_open(rng));
                for _ in 0..self.n {
                    let xi = eta * zeta.sample(unit_open(rng));
                    visit(xi, s);
                    s += xi;
                }
            }
            Generator::ConditionalSubPhi { base, rule } => {
                for _ in 0..self.n {
                    let xi = rule.factor(s) * base.draw(rng);
                    visit(xi, s);
                    s += xi;
                }
            }
        }
        s
    }
}

/// Uniform on the open interval `(0, 1)` from the top 53 bits.
fn unit_open<R: RngCore>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

fn random_sign<R: RngCore>(rng: &mut R) -> f64 {
    if rng.next_u64() >> 63 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn weibull_magnitude(q: f64, u: f64) -> f64 {
    (-u.ln()).powf(1.0 / q)
}

/// `(−ln u)^{1/q}`, so that `P(result ≥ x) = exp(−x^q)` when `u` is uniform.
pub fn sample_weibull_magnitude(q: f64, u: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::domain(format!("u must lie in (0, 1) (got {u})")));
    }
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::domain(format!("q must be positive (got {q})")));
    }
    Ok(weibull_magnitude(q, u))
}

/// Random stream of replica `replica` under `seed`.
pub fn replica_rng(seed: u64, replica: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replica);
    rng
}

/// Probabilists' Hermite polynomials `(He_m(x), He_{m−1}(x))`.
fn hermite_pair(m: usize, x: f64) -> (f64, f64) {
    let (mut prev, mut cur) = (1.0, x);
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 1..m {
        let next = x * cur - k as f64 * prev;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// The `m`-point Gauss–Hermite law: atoms at the roots of `He_m` whose
/// moments agree with N(0, 1) through order `2m − 1`.
pub fn gauss_hermite_distribution(m: usize) -> Result<DiscreteDist> {
    if m == 0 {
        return Err(Error::domain("Gauss–Hermite order must be at least 1"));
    }
    let jacobi = DMatrix::from_fn(m, m, |i, j| {
        if i + 1 == j || j + 1 == i {
            (i.max(j) as f64).sqrt()
        } else {
            0.0
        }
    });
    let mut nodes: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
    nodes.sort_by(f64::total_cmp);
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (h, h1) = hermite_pair(m, *x);
            // He_m' = m·He_{m−1}
            if h1 != 0.0 {
                *x -= h / (m as f64 * h1);
            }
        }
    }
    for i in 0..m / 2 {
        let a = 0.5 * (nodes[m - 1 - i] - nodes[i]);
        nodes[i] = -a;
        nodes[m - 1 - i] = a;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    let factorial: f64 = (1..=m).map(|k| k as f64).product();
    let mut weights: Vec<f64> = nodes
        .iter()
        .map(|&x| {
            let (_, h1) = hermite_pair(m, x);
            factorial / ((m * m) as f64 * h1 * h1)
        })
        .collect();
    for i in 0..m / 2 {
        let w = 0.5 * (weights[i] + weights[m - 1 - i]);
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    let total: f64 = weights.iter().sum();
    DiscreteDist::new(nodes.into_iter().zip(weights.into_iter().map(|w| w / total)).collect())
}

/// The integer `s` with `q − 1 ≤ s < q`.
pub fn select_matching_order(q: f64) -> Result<u32> {
    if !(q > 1.0 && q.is_finite()) {
        return Err(Error::domain(format!("moment matching needs q > 1 (got {q})")));
    }
    Ok((q - 1.0).ceil() as u32)
}

/// Smallest Gauss–Hermite order `m` with `2m − 1 ≥ s + 2`.
pub fn gauss_hermite_order_for(s: u32) -> usize {
    (s as usize + 3).div_ceil(2)
}

/// Partial sums `S(1), …, S(n)` of one path.
pub fn generate_path<R: RngCore>(spec: &MartingaleSpec, rng: &mut R) -> Vec<f64> {
    let mut path = Vec::with_capacity(spec.n as usize);
    let end = spec.walk(rng, |xi, before| path.push(before + xi));
    debug_assert_eq!(path.last().copied(), Some(end));
    path
}

/// Monte Carlo estimate of `Q_n(x) = P(S(n)/n > x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub successes: u64,
    pub replicas: u64,
    pub point: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub confidence: f64,
    pub seed: u64,
    pub n: u64,
    pub x: f64,
}

fn check_run(replicas: u64, confidence: f64) -> Result<()> {
    if replicas == 0 {
        return Err(Error::domain("at least one replica is required"));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::domain(format!(
            "confidence must lie in (0, 1) (got {confidence})"
        )));
    }
    Ok(())
}

/// Replica values of `S(n)/n` reduced through `fold` into per-chunk
/// accumulators, in chunk order.
fn per_chunk<T, F>(replicas: u64, seed: u64, spec: &MartingaleSpec, init: impl Fn() -> T + Sync, fold: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut T, f64) + Sync,
{
    let chunks = replicas.div_ceil(CHUNK);
    let nf = spec.n as f64;
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = init();
            for r in c * CHUNK..((c + 1) * CHUNK).min(replicas) {
                let mut rng = replica_rng(seed, r);
                let mean = spec.walk(&mut rng, |_, _| {}) / nf;
                fold(&mut acc, mean);
            }
            acc
        })
        .collect()
}

/// [`estimate_q`] at several thresholds from the same paths.
pub fn estimate_q_multi(
    spec: &MartingaleSpec,
    xs: &[f64],
    replicas: u64,
    seed: u64,
    confidence: f64,
) -> Result<Vec<MonteCarloEstimate>> {
    check_run(replicas, confidence)?;
    if xs.iter().any(|x| x.is_nan()) {
        return Err(Error::domain("thresholds must not be NaN"));
    }
    let counts = per_chunk(
        replicas,
        seed,
        spec,
        || vec![0u64; xs.len()],
        |acc, mean| {
            for (c, &x) in acc.iter_mut().zip(xs) {
                if mean > x {
                    *c += 1;
                }
            }
        },
    );
    Ok(xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let successes: u64 = counts.iter().map(|c| c[i]).sum();
            let (ci_low, ci_high) = clopper_pearson(successes, replicas, confidence);
            MonteCarloEstimate {
                successes,
                replicas,
                point: successes as f64 / replicas as f64,
                ci_low,
                ci_high,
                confidence,
                seed,
                n: spec.n,
                x,
            }
        })
        .collect())
}

/// Count of paths with `S(n)/n > x` (strict) and its Clopper–Pearson
/// interval.
pub fn estimate_q(
    spec: &MartingaleSpec,
    x: f64,
    replicas: u64,
    seed: u64,
    confidence: f64,
) -> Result<MonteCarloEstimate> {
    Ok(estimate_q_multi(spec, &[x], replicas, seed, confidence)?.remove(0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Divide `S(n)` by `√n`.
    SqrtN,
    /// Divide `S(n)` by `n`.
    N,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpNormEstimate {
    pub value: f64,
    pub bootstrap_se: f64,
    pub p: f64,
    pub normalization: Normalization,
    pub replicas: u64,
    pub seed: u64,
}

pub const BOOTSTRAP_RESAMPLES: u64 = 200;

/// `(mean |S(n)/b(n)|^p)^{1/p}` with a 200-resample bootstrap standard error.
pub fn estimate_lp_norm(
    spec: &MartingaleSpec,
    p: f64,
    replicas: u64,
    seed: u64,
    normalization: Normalization,
) -> Result<LpNormEstimate> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::domain(format!("L_p norm needs p >= 1 (got {p})")));
    }
    if replicas == 0 {
        return Err(Error::domain("at least one replica is required"));
    }
    let nf = spec.n as f64;
    let rescale = match normalization {
        Normalization::SqrtN => nf.sqrt(),
        Normalization::N => 1.0,
    };
    let powers: Vec<f64> = per_chunk(replicas, seed, spec, Vec::new, |acc: &mut Vec<f64>, mean| {
        acc.push((mean * rescale).abs().powf(p));
    })
    .concat();
    let norm_of = |total: f64| (total / replicas as f64).powf(1.0 / p);
    let value = norm_of(powers.iter().sum());
    let resampled: Vec<f64> = (0..BOOTSTRAP_RESAMPLES)
        .into_par_iter()
        .map(|b| {
            let mut rng = replica_rng(seed, BOOTSTRAP_STREAM + b);
            let total: f64 = (0..replicas)
                .map(|_| powers[(rng.next_u64() % replicas) as usize])
                .sum();
            norm_of(total)
        })
        .collect();
    let mean = resampled.iter().sum::<f64>() / resampled.len() as f64;
    let var = resampled.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (resampled.len() - 1) as f64;
    Ok(LpNormEstimate {
        value,
        bootstrap_se: var.sqrt(),
        p,
        normalization,
        replicas,
        seed,
    })
}

/// `replicas` i.i.d. draws of a law, one per replica stream.
pub fn sample_law(law: &IidLaw, replicas: u64, seed: u64) -> Result<Vec<f64>> {
    law.validate()?;
    let chunks = replicas.div_ceil(CHUNK);
    Ok((0..chunks)
        .into_par_iter()
        .map(|c| {
            (c * CHUNK..((c + 1) * CHUNK).min(replicas))
                .map(|r| law.draw(&mut replica_rng(seed, r)))
                .collect::<Vec<f64>>()
        })
        .collect::<Vec<_>>()
        .concat())
}

/// `count` draws of `U^{−1/r}`, the positive Pareto law with `P(ξ ≥ x) = x^{−r}`
/// for `x ≥ 1`.
pub fn sample_pareto(r: f64, count: u64, seed: u64) -> Result<Vec<f64>> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::domain(format!("Pareto index must be positive (got {r})")));
    }
    let chunks = count.div_ceil(CHUNK);
    Ok((0..chunks)
        .into_par_iter()
        .map(|c| {
            (c * CHUNK..((c + 1) * CHUNK).min(count))
                .map(|i| unit_open(&mut replica_rng(seed, i)).powf(-1.0 / r))
                .collect::<Vec<f64>>()
        })
        .collect::<Vec<_>>()
        .concat())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::binomial_se;

    fn rademacher(n: u64) -> MartingaleSpec {
        MartingaleSpec::new(Generator::Iid(IidLaw::Rademacher), n).unwrap()
    }

    fn zero(n: u64) -> MartingaleSpec {
        let d = DiscreteDist::new(vec![(0.0, 1.0)]).unwrap();
        MartingaleSpec::new(Generator::Iid(IidLaw::Discrete(d)), n).unwrap()
    }

    #[test]
    fn weibull_magnitude_inverse() {
        let e = std::f64::consts::E;
        assert!((sample_weibull_magnitude(1.0, 1.0 / e).unwrap() - 1.0).abs() < 1e-15);
        let v = sample_weibull_magnitude(2.0, 0.01).unwrap();
        assert!((v - 100f64.ln().sqrt()).abs() < 1e-15);
        assert!(sample_weibull_magnitude(1.0, 0.0).is_err());
        assert!(sample_weibull_magnitude(1.0, 1.0).is_err());
    }

    #[test]
    fn weibull_magnitude_empirical_tail() {
        let trials = 1_000_000u64;
        let hits: u64 = (0..trials)
            .into_par_iter()
            .filter(|&r| weibull_magnitude(0.5, unit_open(&mut replica_rng(11, r))) >= 4.0)
            .count() as u64;
        let p = (-2.0f64).exp();
        let est = hits as f64 / trials as f64;
        assert!((est - p).abs() <= 3.0 * binomial_se(p, trials), "{est}");
    }

    #[test]
    fn gauss_hermite_small_orders() {
        let d2 = gauss_hermite_distribution(2).unwrap();
        assert_eq!(d2.atoms().len(), 2);
        assert!((d2.atoms()[0].0 + 1.0).abs() < 1e-14 && (d2.atoms()[1].1 - 0.5).abs() < 1e-14);
        let d3 = gauss_hermite_distribution(3).unwrap();
        let a = d3.atoms();
        assert!((a[2].0 - 3f64.sqrt()).abs() < 1e-13 && a[1].0 == 0.0);
        assert!((a[1].1 - 2.0 / 3.0).abs() < 1e-14 && (a[0].1 - 1.0 / 6.0).abs() < 1e-14);
        assert!((d3.moment(4) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn gauss_hermite_moments_match_normal() {
        for m in 1..=8usize {
            let d = gauss_hermite_distribution(m).unwrap();
            let total: f64 = d.atoms().iter().map(|a| a.1).sum();
            assert!((total - 1.0).abs() < 1e-12);
            let mut normal = 1.0; // E N^{k} for even k: (k−1)!!
            for k in 1..=(2 * m - 1) as i32 {
                let exact = if k % 2 == 1 {
                    0.0
                } else {
                    normal *= (k - 1) as f64;
                    normal
                };
                assert!((d.moment(k) - exact).abs() <= 1e-10, "m={m} k={k}: {}", d.moment(k));
            }
        }
    }

    #[test]
    fn matching_order() {
        assert_eq!(select_matching_order(2.5).unwrap(), 2);
        assert_eq!(select_matching_order(3.0).unwrap(), 2);
        assert_eq!(select_matching_order(1.2).unwrap(), 1);
        assert!(select_matching_order(1.0).is_err());
        assert_eq!(gauss_hermite_order_for(1), 2);
        assert_eq!(gauss_hermite_order_for(2), 3);
    }

    #[test]
    fn paths_have_expected_increments() {
        let path = generate_path(&rademacher(3), &mut replica_rng(1, 0));
        let mut prev = 0.0;
        for s in path {
            assert_eq!((s - prev).abs(), 1.0);
            prev = s;
        }
        let zeta = DiscreteDist::new(vec![(-1.0, 0.5), (1.0, 0.5)]).unwrap();
        let adv = MartingaleSpec::new(Generator::ProductAdversarial { q: 0.5, zeta }, 20).unwrap();
        for r in 0..10 {
            let mut sizes = Vec::new();
            adv.walk(&mut replica_rng(5, r), |xi, _| sizes.push(xi.abs()));
            assert!(sizes.iter().all(|&s| s == sizes[0]));
        }
    }

    #[test]
    fn spec_validation() {
        let skew = DiscreteDist::new(vec![(-1.0, 0.5), (2.0, 0.5)]).unwrap();
        assert!(MartingaleSpec::new(Generator::Iid(IidLaw::Discrete(skew)), 3).is_err());
        let centred = DiscreteDist::new(vec![(-2.0, 1.0 / 3.0), (1.0, 2.0 / 3.0)]).unwrap();
        let rule = SignRule::FollowSign;
        assert!(MartingaleSpec::new(
            Generator::ConditionalSubPhi {
                base: IidLaw::Discrete(centred),
                rule
            },
            3
        )
        .is_err());
        assert!(DiscreteDist::new(vec![(1.0, 0.5)]).is_err());
        assert!(MartingaleSpec::new(Generator::Iid(IidLaw::Rademacher), 0).is_err());
    }

    #[test]
    fn estimate_examples() {
        let e = estimate_q(&zero(5), 0.1, 1000, 3, 0.99).unwrap();
        assert_eq!((e.point, e.ci_low), (0.0, 0.0));
        let e = estimate_q(&rademacher(1), 0.5, 200_000, 3, 0.99).unwrap();
        assert!(e.ci_low <= 0.5 && 0.5 <= e.ci_high, "{e:?}");
        let e = estimate_q(&rademacher(2), 0.5, 200_000, 3, 0.99).unwrap();
        assert!(e.ci_low <= 0.25 && 0.25 <= e.ci_high, "{e:?}");
        // strict inequality: S(2)/2 = 1 is never > 1
        assert_eq!(estimate_q(&rademacher(2), 1.0, 1000, 3, 0.99).unwrap().successes, 0);
    }

    #[test]
    fn estimates_ignore_thread_count() {
        let zeta = gauss_hermite_distribution(3).unwrap();
        let spec = MartingaleSpec::new(Generator::ProductAdversarial { q: 0.7, zeta }, 16).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| estimate_q_multi(&spec, &[0.5, 1.0], 50_000, 42, 0.99).unwrap())
        };
        assert_eq!(run(1), run(7));
    }

    #[test]
    fn adversarial_matches_exact_probabilities() {
        // exact Q_n(1) for η = ±Weibull(1/2), ζ = ±1, by summation over the
        // binomial law of the ζ-sum
        let exact = [(16u64, 0.049_704_24), (64, 0.022_416_14), (256, 0.007_865_18)];
        let zeta = gauss_hermite_distribution(2).unwrap();
        for (n, q) in exact {
            let spec = MartingaleSpec::new(
                Generator::ProductAdversarial {
                    q: 0.5,
                    zeta: zeta.clone(),
                },
                n,
            )
            .unwrap();
            let e = estimate_q(&spec, 1.0, 200_000, 9, 0.999).unwrap();
            assert!(e.ci_low <= q && q <= e.ci_high, "n={n}: {e:?} vs {q}");
        }
    }

    #[test]
    fn sign_flipped_sequences_are_centred() {
        let replicas = 100_000u64;
        let gens = vec![
            Generator::Iid(IidLaw::Uniform { half_width: 2.0 }),
            Generator::Iid(IidLaw::WeibullSym { q: 1.5 }),
            Generator::ProductAdversarial {
                q: 1.0,
                zeta: gauss_hermite_distribution(2).unwrap(),
            },
            Generator::ConditionalSubPhi {
                base: IidLaw::Rademacher,
                rule: SignRule::FollowSign,
            },
            Generator::ConditionalSubPhi {
                base: IidLaw::WeibullSym { q: 2.0 },
                rule: SignRule::OppositeSign,
            },
        ];
        for g in gens {
            let spec = MartingaleSpec::new(g, 8).unwrap();
            // proxies E[ξ(k)·g(S(k−1))] for g = sign and g = clamp(−1, 1), plus the mean of S(n)/n
            let stats: Vec<[f64; 6]> = (0..replicas)
                .into_par_iter()
                .map(|r| {
                    let (mut a, mut b) = (0.0, 0.0);
                    let s = spec.walk(&mut replica_rng(77, r), |xi, before| {
                        a += xi
                            * if before < 0.0 {
                                -1.0
                            } else if before > 0.0 {
                                1.0
                            } else {
                                0.0
                            };
                        b += xi * before.clamp(-1.0, 1.0);
                    });
                    let m = s / 8.0;
                    [a, a * a, b, b * b, m, m * m]
                })
                .collect();
            let r = replicas as f64;
            for k in [0, 2, 4] {
                let mean = stats.iter().map(|s| s[k]).sum::<f64>() / r;
                let second = stats.iter().map(|s| s[k + 1]).sum::<f64>() / r;
                let se = ((second - mean * mean) / r).sqrt();
                assert!(
                    mean.abs() <= 4.0 * se + 1e-12,
                    "{:?} proxy {k}: {mean} (se {se})",
                    spec.generator
                );
            }
        }
    }

    #[test]
    fn lp_norm_examples() {
        let z = estimate_lp_norm(&zero(4), 2.0, 1000, 1, Normalization::SqrtN).unwrap();
        assert_eq!(z.value, 0.0);
        let one = estimate_lp_norm(&rademacher(1), 3.0, 1000, 1, Normalization::N).unwrap();
        assert_eq!(one.value, 1.0);
        let two = estimate_lp_norm(&rademacher(2), 2.0, 100_000, 1, Normalization::SqrtN).unwrap();
        assert!((two.value - 1.0).abs() <= 4.0 * two.bootstrap_se, "{two:?}");
        assert!(two.bootstrap_se > 0.0);
    }

    #[test]
    fn law_samples_are_reproducible() {
        let a = sample_law(&IidLaw::WeibullSym { q: 2.0 }, 10_000, 4).unwrap();
        let b = sample_law(&IidLaw::WeibullSym { q: 2.0 }, 10_000, 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 10_000);
    }
}
