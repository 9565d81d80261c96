//! Monte Carlo simulation of the random system X_{n+1} = τ(T(X_n) + ω_n)
//! with ω_n ~ N(0, σ²), used as a statistical cross-check of the certified
//! enclosures.
//!
//! Reproducibility contract: the generator is ChaCha12 seeded from a u64, and
//! normal deviates come from the Box–Muller transform applied to 53-bit
//! uniforms u = (next_u64() >> 11 + 1)·2⁻⁵³ ∈ (0, 1]. The same seed therefore
//! produces bit-identical trajectories on every platform.

use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

use crate::maps::{NoiseParams, TestMap};

/// σ below this is treated as the degenerate no-noise switch: the orbit is
/// the deterministic iteration and the generator is never consumed.
const NO_NOISE_BELOW: f64 = 1e-150;

/// Gaussian sampler: Box–Muller on 53-bit uniforms, second deviate cached.
pub struct GaussianSampler {
    rng: ChaCha12Rng,
    spare: Option<f64>,
}

impl GaussianSampler {
    pub fn new(seed: u64) -> Self {
        GaussianSampler {
            rng: ChaCha12Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    #[inline]
    fn uniform(&mut self) -> f64 {
        // (0, 1]: never 0, so ln is finite
        ((self.rng.next_u64() >> 11) + 1) as f64 * (1.0 / 9007199254740992.0)
    }

    /// Standard normal deviate.
    pub fn standard(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let t = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(r * t.sin());
        r * t.cos()
    }
}

/// Periodic fold to [−1, 1) in floating point.
#[inline]
fn fold_f64(x: f64) -> f64 {
    let mut t = x - 2.0 * ((x + 1.0) / 2.0).floor();
    // float rounding can land exactly on the excluded right endpoint
    if t >= 1.0 {
        t -= 2.0;
    }
    if t < -1.0 {
        t = -1.0;
    }
    t
}

/// One random step.
#[inline]
fn step(map: &TestMap, sigma: f64, x: f64, g: &mut GaussianSampler) -> f64 {
    let t = map.eval_f64(x);
    let noisy = if sigma < NO_NOISE_BELOW {
        t
    } else {
        t + sigma * g.standard()
    };
    fold_f64(noisy)
}

/// Birkhoff statistics of log|T′| along one random orbit.
#[derive(Clone, Debug)]
pub struct SimResult {
    /// Sample average of log|T′(X_i)| over the non-singular iterates.
    pub average: f64,
    /// Batch-means standard error of the average.
    pub std_error: f64,
    pub steps: usize,
    /// Iterates landing exactly on the observable singularity, excluded
    /// from the average (an almost-surely null event).
    pub skipped: usize,
    pub x_final: f64,
}

/// Run `steps` random iterations from x0 and average log|T′| along the orbit.
pub fn birkhoff(map: &TestMap, noise: NoiseParams, x0: f64, steps: usize, seed: u64) -> SimResult {
    assert!((-1.0..1.0).contains(&x0), "x0 must lie in [-1, 1)");
    assert!(steps >= 1);
    let mut g = GaussianSampler::new(seed);
    let sigma = noise.sigma;

    let n_batches = steps.min(1000);
    let batch_len = steps / n_batches;
    let mut batch_means: Vec<f64> = Vec::with_capacity(n_batches);

    let mut x = x0;
    let mut total = 0.0;
    let mut count = 0usize;
    let mut skipped = 0usize;
    let mut batch_sum = 0.0;
    let mut batch_count = 0usize;
    for i in 0..steps {
        let d = map.deriv_mag_f64(x);
        let obs = d.ln();
        if obs.is_finite() {
            total += obs;
            count += 1;
            batch_sum += obs;
            batch_count += 1;
        } else {
            skipped += 1;
        }
        if (i + 1) % batch_len == 0 && batch_means.len() < n_batches {
            if batch_count > 0 {
                batch_means.push(batch_sum / batch_count as f64);
            }
            batch_sum = 0.0;
            batch_count = 0;
        }
        x = step(map, sigma, x, &mut g);
    }

    let average = if count > 0 {
        total / count as f64
    } else {
        f64::NAN
    };
    let b = batch_means.len();
    let std_error = if b >= 2 {
        let m = batch_means.iter().sum::<f64>() / b as f64;
        let var = batch_means.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (b - 1) as f64;
        (var / b as f64).sqrt()
    } else {
        f64::INFINITY
    };
    SimResult {
        average,
        std_error,
        steps,
        skipped,
        x_final: x,
    }
}

/// The orbit X_0, X_1, …, X_steps (length steps + 1).
pub fn trajectory(
    map: &TestMap,
    noise: NoiseParams,
    x0: f64,
    steps: usize,
    seed: u64,
) -> Vec<f64> {
    assert!((-1.0..1.0).contains(&x0), "x0 must lie in [-1, 1)");
    let mut g = GaussianSampler::new(seed);
    let mut out = Vec::with_capacity(steps + 1);
    let mut x = x0;
    out.push(x);
    for _ in 0..steps {
        x = step(map, noise.sigma, x, &mut g);
        out.push(x);
    }
    out
}

/// Distances along two orbits driven by the same noise realization.
#[derive(Clone, Debug)]
pub struct TwoPointResult {
    /// Circle distances min(|x−y|, 2−|x−y|), one per step (length steps + 1).
    pub circle: Vec<f64>,
    /// Raw |x−y| for fidelity with linear-distance plots.
    pub raw: Vec<f64>,
}

/// Evolve x0 and y0 under the same noise sequence and record their distances.
pub fn two_point(
    map: &TestMap,
    noise: NoiseParams,
    x0: f64,
    y0: f64,
    steps: usize,
    seed: u64,
) -> TwoPointResult {
    assert!((-1.0..1.0).contains(&x0) && (-1.0..1.0).contains(&y0));
    let mut g = GaussianSampler::new(seed);
    let sigma = noise.sigma;
    let mut circle = Vec::with_capacity(steps + 1);
    let mut raw = Vec::with_capacity(steps + 1);
    let (mut x, mut y) = (x0, y0);
    let record = |x: f64, y: f64, circle: &mut Vec<f64>, raw: &mut Vec<f64>| {
        let d = (x - y).abs();
        raw.push(d);
        circle.push(d.min(2.0 - d));
    };
    record(x, y, &mut circle, &mut raw);
    for _ in 0..steps {
        // one shared noise draw per step
        let w = if sigma < NO_NOISE_BELOW {
            0.0
        } else {
            sigma * g.standard()
        };
        x = fold_f64(map.eval_f64(x) + w);
        y = fold_f64(map.eval_f64(y) + w);
        record(x, y, &mut circle, &mut raw);
    }
    TwoPointResult { circle, raw }
}
