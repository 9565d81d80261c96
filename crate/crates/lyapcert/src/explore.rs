//! Parameter exploration: certified single points, parameter-plane sweeps
//! with deterministic-matrix reuse, and crossing detection/refinement.
//!
//! A sweep decomposes the grid into "columns": one column per deterministic
//! map parameter (α, β), holding a single assembled matrix that is recombined
//! with every σ in the column via the diagonal Gaussian multiplier. Columns
//! are computed in parallel by a bounded worker pool (`LYAPCERT_WORKERS`
//! overrides the thread count) and flushed by a single writer in
//! deterministic grid order: map parameters vary slowest, σ ascends within a
//! column. The cached matrix is assembled at the column's smallest σ, whose
//! tolerance profile is the tightest of the column, so reused enclosures are
//! at least as tight as fresh per-point assemblies.

use std::collections::BTreeMap;
use std::sync::mpsc;
use std::time::Instant;

use rayon::prelude::*;

use crate::assemble::{assemble_deterministic, TolProfile};
use crate::certify::{enclose_density_with, CertifyOptions};
use crate::interval::IvReal;
use crate::lyapunov::lyapunov_enclosure;
use crate::maps::{MapParams, NoiseParams, TestMap};
use crate::operator::DeterministicMatrix;
use crate::si::sine_integral_multiples;
use crate::{Error, Result};

/// An inclusive linear grid of `count` values from `lo` to `hi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Range {
    pub fn new(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::Domain("range count must be at least 1"));
        }
        if !lo.is_finite() || !hi.is_finite() || hi < lo {
            return Err(Error::Domain("range must satisfy lo <= hi, both finite"));
        }
        Ok(Range { lo, hi, count })
    }

    /// A single-value range.
    pub fn point(v: f64) -> Self {
        Range {
            lo: v,
            hi: v,
            count: 1,
        }
    }

    /// Grid values; both endpoints are produced exactly.
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.lo];
        }
        let step = (self.hi - self.lo) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.hi
                } else {
                    self.lo + step * i as f64
                }
            })
            .collect()
    }
}

/// Sweep description: the α, β, σ grids (fixed parameters are single-value
/// ranges), the Fourier truncation, certification options, and whether wall
/// times are recorded (off by default so repeated runs are byte-identical).
#[derive(Clone, Copy, Debug)]
pub struct SweepConfig {
    pub alpha: Range,
    pub beta: Range,
    pub sigma: Range,
    pub k: usize,
    pub opts: CertifyOptions,
    pub timings: bool,
}

impl SweepConfig {
    pub fn grid_size(&self) -> usize {
        self.alpha.count * self.beta.count * self.sigma.count
    }
}

/// Certified sign of a λ interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
    Indeterminate,
}

/// One grid point's result. On pipeline failure the numeric fields are NaN
/// (0 for the counters) and `failure` carries the diagnostic; the sweep
/// records the row and continues.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub beta: f64,
    pub sigma: f64,
    pub modes: usize,
    pub lambda_lo: f64,
    pub lambda_hi: f64,
    /// Upper bound on the L² density error E.
    pub err_l2: f64,
    /// Upper bound on the fixed-point residual ε.
    pub eps: f64,
    /// Certified mixing step count N.
    pub n_mix: usize,
    /// Upper endpoint of C_N.
    pub cn_hi: f64,
    pub runtime_s: f64,
    pub failure: Option<String>,
}

impl SweepRow {
    pub fn failure(p: MapParams, sigma: f64, k: usize, tag: String) -> Self {
        SweepRow {
            alpha: p.alpha,
            beta: p.beta,
            sigma,
            modes: k,
            lambda_lo: f64::NAN,
            lambda_hi: f64::NAN,
            err_l2: f64::NAN,
            eps: f64::NAN,
            n_mix: 0,
            cn_hi: f64::NAN,
            runtime_s: 0.0,
            failure: Some(tag),
        }
    }

    pub fn is_failure(&self) -> bool {
        self.failure.is_some()
    }

    /// Certified sign of λ; NaN endpoints classify as indeterminate.
    pub fn certified_sign(&self) -> Sign {
        if self.lambda_lo > 0.0 {
            Sign::Positive
        } else if self.lambda_hi < 0.0 {
            Sign::Negative
        } else {
            Sign::Indeterminate
        }
    }
}

/// Full pipeline for one (α, β, σ) with a fresh assembly at this σ's
/// tolerance profile. `si` must hold Si(jπ) for j = 0..=K. Failures become a
/// tagged failure row, never a panic.
pub fn run_point(
    p: MapParams,
    noise: NoiseParams,
    k: usize,
    opts: &CertifyOptions,
    si: &[IvReal],
) -> SweepRow {
    let t0 = Instant::now();
    let profile = TolProfile::for_noise(noise, k);
    let row = match assemble_deterministic(TestMap::Family(p), k, &profile) {
        Ok((dm, _report)) => run_point_with(p, &dm, noise, opts, si),
        Err(e) => SweepRow::failure(p, noise.sigma, k, format!("assembly: {e}")),
    };
    SweepRow {
        runtime_s: t0.elapsed().as_secs_f64(),
        ..row
    }
}

/// Pipeline on a pre-assembled deterministic matrix (`dm.map` must be the
/// family map with parameters `p`); used by sweeps to reuse one assembly
/// across a σ column.
pub fn run_point_with(
    p: MapParams,
    dm: &DeterministicMatrix,
    noise: NoiseParams,
    opts: &CertifyOptions,
    si: &[IvReal],
) -> SweepRow {
    debug_assert!(matches!(dm.map, TestMap::Family(q) if q == p));
    let t0 = Instant::now();
    if noise.sigma < dm.min_sigma {
        return SweepRow::failure(
            p,
            noise.sigma,
            dm.k,
            format!(
                "matrix assembled for minimum sigma {} cannot serve sigma {}",
                dm.min_sigma, noise.sigma
            ),
        );
    }
    let out = enclose_density_with(dm, noise, opts)
        .and_then(|d| lyapunov_enclosure(&d, p, si).map(|l| (d, l)));
    match out {
        Ok((d, l)) => SweepRow {
            alpha: p.alpha,
            beta: p.beta,
            sigma: noise.sigma,
            modes: dm.k,
            lambda_lo: l.lambda.lo(),
            lambda_hi: l.lambda.hi(),
            err_l2: d.e.hi(),
            eps: d.eps.hi(),
            n_mix: d.cert.n,
            cn_hi: d.cert.c[d.cert.n].hi(),
            runtime_s: t0.elapsed().as_secs_f64(),
            failure: None,
        },
        Err(e) => SweepRow {
            runtime_s: t0.elapsed().as_secs_f64(),
            ..SweepRow::failure(p, noise.sigma, dm.k, format!("{e}"))
        },
    }
}

fn compute_column(
    p: MapParams,
    sigmas: &[f64],
    k: usize,
    opts: &CertifyOptions,
    si: &[IvReal],
    timings: bool,
) -> Vec<SweepRow> {
    let mut rows = Vec::with_capacity(sigmas.len());
    let noise0 = NoiseParams::new(sigmas[0]).expect("validated by sweep");
    let profile = TolProfile::for_noise(noise0, k);
    match assemble_deterministic(TestMap::Family(p), k, &profile) {
        Err(e) => {
            for &s in sigmas {
                rows.push(SweepRow::failure(p, s, k, format!("assembly: {e}")));
            }
        }
        Ok((dm, _report)) => {
            for &s in sigmas {
                let noise = NoiseParams::new(s).expect("validated by sweep");
                let mut row = run_point_with(p, &dm, noise, opts, si);
                // one automatic escalation: an indeterminate (gray) cell is
                // retried once at 2K before being reported
                if !row.is_failure() && row.certified_sign() == Sign::Indeterminate {
                    let retry = run_point(p, noise, 2 * k, opts, si);
                    if !retry.is_failure() {
                        row = retry;
                    }
                }
                rows.push(row);
            }
        }
    }
    if !timings {
        for r in &mut rows {
            r.runtime_s = 0.0;
        }
    }
    rows
}

/// Worker pool honoring the `LYAPCERT_WORKERS` environment variable; `None`
/// falls back to the global rayon pool.
fn worker_pool() -> Option<rayon::ThreadPool> {
    let n = std::env::var("LYAPCERT_WORKERS").ok()?.parse::<usize>().ok()?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n.max(1))
        .build()
        .ok()
}

/// Run a sweep, invoking `on_row` for every row in deterministic grid order
/// (α slowest, then β, σ ascending fastest) as results become available; the
/// full row list is also returned. Individual point failures are recorded as
/// failure rows and the sweep continues.
pub fn sweep_with<F>(cfg: &SweepConfig, mut on_row: F) -> Result<Vec<SweepRow>>
where
    F: FnMut(&SweepRow) + Send,
{
    let alphas = cfg.alpha.values();
    let betas = cfg.beta.values();
    let sigmas = cfg.sigma.values();
    let mut columns = Vec::with_capacity(alphas.len() * betas.len());
    for &a in &alphas {
        for &b in &betas {
            columns.push(MapParams::new(a, b)?);
        }
    }
    for &s in &sigmas {
        NoiseParams::new(s)?;
    }
    if cfg.k == 0 {
        return Err(Error::Domain("sweep needs at least one Fourier mode"));
    }
    // one shared sine-integral table, sized for the automatic 2K escalation
    let si = sine_integral_multiples(2 * cfg.k);
    let pool = worker_pool();

    let (tx, rx) = mpsc::channel::<(usize, Vec<SweepRow>)>();
    let compute = |tx: mpsc::Sender<(usize, Vec<SweepRow>)>| {
        columns
            .par_iter()
            .enumerate()
            .for_each_with(tx, |tx, (i, p)| {
                let rows = compute_column(*p, &sigmas, cfg.k, &cfg.opts, &si, cfg.timings);
                let _ = tx.send((i, rows));
            });
    };

    std::thread::scope(|s| {
        let writer = s.spawn(move || {
            let mut pending: BTreeMap<usize, Vec<SweepRow>> = BTreeMap::new();
            let mut next = 0usize;
            let mut all = Vec::new();
            for (idx, rows) in rx {
                pending.insert(idx, rows);
                while let Some(rows) = pending.remove(&next) {
                    for r in &rows {
                        on_row(r);
                    }
                    all.extend(rows);
                    next += 1;
                }
            }
            all
        });
        match &pool {
            Some(p) => p.install(|| compute(tx)),
            None => compute(tx),
        }
        Ok(writer.join().expect("sweep writer thread panicked"))
    })
}

/// Run a sweep and collect all rows.
pub fn sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    sweep_with(cfg, |_| {})
}

/// A σ bracket over which certified λ changes sign: λ(σ_lo) > 0 and
/// λ(σ_hi) < 0, or the reverse orientation when `reversed`.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossingBracket {
    pub alpha: f64,
    pub beta: f64,
    pub sigma_lo: f64,
    pub sigma_hi: f64,
    /// λ interval endpoints at σ_lo.
    pub lambda_at_lo: (f64, f64),
    /// λ interval endpoints at σ_hi.
    pub lambda_at_hi: (f64, f64),
    /// true when the column goes from certified negative to certified
    /// positive as σ increases.
    pub reversed: bool,
    pub modes: usize,
}

/// Scan consecutive rows (sorted by σ within fixed (α, β) blocks) for
/// certified sign changes. Indeterminate or failure rows break brackets, as
/// do block boundaries.
pub fn detect_crossings(rows: &[SweepRow]) -> Vec<CrossingBracket> {
    let mut out = Vec::new();
    for w in rows.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if a.alpha != b.alpha || a.beta != b.beta || !(b.sigma > a.sigma) {
            continue;
        }
        let reversed = match (a.certified_sign(), b.certified_sign()) {
            (Sign::Positive, Sign::Negative) => false,
            (Sign::Negative, Sign::Positive) => true,
            _ => continue,
        };
        out.push(CrossingBracket {
            alpha: a.alpha,
            beta: a.beta,
            sigma_lo: a.sigma,
            sigma_hi: b.sigma,
            lambda_at_lo: (a.lambda_lo, a.lambda_hi),
            lambda_at_hi: (b.lambda_lo, b.lambda_hi),
            reversed,
            modes: a.modes.max(b.modes),
        });
    }
    out
}

/// Certified sign of λ at a single σ, carrying the interval endpoints.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PointSign {
    Positive(f64, f64),
    Negative(f64, f64),
    Indeterminate,
}

impl PointSign {
    fn of_row(row: &SweepRow) -> Self {
        match row.certified_sign() {
            Sign::Positive => PointSign::Positive(row.lambda_lo, row.lambda_hi),
            Sign::Negative => PointSign::Negative(row.lambda_lo, row.lambda_hi),
            Sign::Indeterminate => PointSign::Indeterminate,
        }
    }
}

/// Refinement tuning: target bracket width, bisection step budget, starting
/// truncation, and the escalation cap.
#[derive(Clone, Copy, Debug)]
pub struct RefineOptions {
    pub width_target: f64,
    pub max_steps: usize,
    pub k_start: usize,
    pub k_cap: usize,
    pub certify: CertifyOptions,
}

impl RefineOptions {
    pub fn new(width_target: f64, k: usize) -> Self {
        RefineOptions {
            width_target,
            max_steps: 60,
            k_start: k,
            k_cap: 1024.max(4 * k),
            certify: CertifyOptions::default(),
        }
    }
}

/// Refinement outcome: the final bracket (endpoints retain certified
/// opposite signs), the bisection step count, and whether the refinement
/// stalled (step budget exhausted or the K escalation cap was reached before
/// the width target).
#[derive(Clone, Debug)]
pub struct RefineResult {
    pub bracket: CrossingBracket,
    pub steps: usize,
    pub stalled: bool,
}

/// Bisection driver over an arbitrary sign oracle `eval(σ, K) -> PointSign`.
/// Midpoints with indeterminate sign double K (up to `opts.k_cap`) and retry;
/// a midpoint of certified sign replaces the same-signed endpoint, so the
/// invariant "endpoints certified with opposite signs" is preserved.
pub fn refine_with<F>(
    mut eval: F,
    bracket: &CrossingBracket,
    opts: &RefineOptions,
) -> Result<RefineResult>
where
    F: FnMut(f64, usize) -> PointSign,
{
    let lo_pos = bracket.lambda_at_lo.0 > 0.0;
    let lo_neg = bracket.lambda_at_lo.1 < 0.0;
    let hi_pos = bracket.lambda_at_hi.0 > 0.0;
    let hi_neg = bracket.lambda_at_hi.1 < 0.0;
    let ok = if bracket.reversed {
        lo_neg && hi_pos
    } else {
        lo_pos && hi_neg
    };
    if !ok || !(bracket.sigma_lo < bracket.sigma_hi) {
        return Err(Error::Refinement(
            "bracket endpoints lack certified opposite signs".into(),
        ));
    }

    let mut cur = bracket.clone();
    let mut k = opts.k_start.max(1);
    let mut steps = 0usize;
    let mut stalled = false;
    while cur.sigma_hi - cur.sigma_lo > opts.width_target {
        if steps >= opts.max_steps {
            stalled = true;
            break;
        }
        let mid = 0.5 * (cur.sigma_lo + cur.sigma_hi);
        if !(mid > cur.sigma_lo && mid < cur.sigma_hi) {
            // float resolution exhausted; the bracket cannot shrink further
            break;
        }
        match eval(mid, k) {
            PointSign::Positive(l, h) => {
                if cur.reversed {
                    cur.sigma_hi = mid;
                    cur.lambda_at_hi = (l, h);
                } else {
                    cur.sigma_lo = mid;
                    cur.lambda_at_lo = (l, h);
                }
                steps += 1;
            }
            PointSign::Negative(l, h) => {
                if cur.reversed {
                    cur.sigma_lo = mid;
                    cur.lambda_at_lo = (l, h);
                } else {
                    cur.sigma_hi = mid;
                    cur.lambda_at_hi = (l, h);
                }
                steps += 1;
            }
            PointSign::Indeterminate => {
                let next = k.saturating_mul(2);
                if next > opts.k_cap {
                    stalled = true;
                    break;
                }
                k = next;
            }
        }
    }
    cur.modes = cur.modes.max(k);
    Ok(RefineResult {
        bracket: cur,
        steps,
        stalled,
    })
}

/// Refine a certified crossing bracket for the family map (α, β) by bisection
/// on σ, running the full certification pipeline at each midpoint.
pub fn refine_crossing(
    p: MapParams,
    bracket: &CrossingBracket,
    opts: &RefineOptions,
) -> Result<RefineResult> {
    let mut si = sine_integral_multiples(opts.k_start.max(1));
    let certify = opts.certify;
    let eval = move |sigma: f64, k: usize| -> PointSign {
        if si.len() < k + 1 {
            si = sine_integral_multiples(k);
        }
        let noise = match NoiseParams::new(sigma) {
            Ok(n) => n,
            Err(_) => return PointSign::Indeterminate,
        };
        PointSign::of_row(&run_point(p, noise, k, &certify, &si))
    };
    refine_with(eval, bracket, opts)
}
