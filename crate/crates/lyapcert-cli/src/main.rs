//! Command-line driver for certified Lyapunov-exponent computations:
//! single-point enclosures, parameter-plane sweeps, crossing detection and
//! refinement, density certificates, and Monte Carlo simulation.
//!
//! Exit code 0 means every certification requested by the invocation
//! succeeded; any failed grid point, stalled refinement, or pipeline error
//! exits nonzero. The `LYAPCERT_WORKERS` environment variable bounds the
//! sweep worker pool.

use std::fs;
use std::io::{BufWriter, Write as _};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use lyapcert::certify::{certificate_text, enclose_density, CertifyOptions, DensityEnclosure};
use lyapcert::emit;
use lyapcert::explore::{
    detect_crossings, refine_crossing, sweep_with, Range, RefineOptions, Sign, SweepConfig,
};
use lyapcert::lyapunov::{lyapunov_enclosure, si_table, LyapunovEnclosure};
use lyapcert::maps::{MapParams, NoiseParams, TestMap};
use lyapcert::simulate;

#[derive(Parser)]
#[command(
    name = "lyapcert",
    version,
    about = "Certified Lyapunov exponents and stationary densities for randomly perturbed interval maps"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Certify the Lyapunov exponent at one (alpha, beta, sigma)
    Lyapunov(LyapunovArgs),
    /// Certify a parameter grid; emit CSV and optional sign/mixing pixmaps
    Sweep(SweepArgs),
    /// Detect certified sign crossings along sigma, optionally refine them
    Crossings(CrossingsArgs),
    /// Certify a stationary density and emit its certificate
    Density(DensityArgs),
    /// Simulate orbits: Birkhoff averages or two-point distances
    Simulate(SimulateArgs),
}

fn parse_range(s: &str) -> std::result::Result<Range, String> {
    let num = |t: &str| {
        t.parse::<f64>()
            .map_err(|_| format!("bad number {t:?} in range"))
    };
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(Range::point(num(v)?)),
        [lo, hi, n] => {
            let count = n
                .parse::<usize>()
                .map_err(|_| format!("bad count {n:?} in range"))?;
            Range::new(num(lo)?, num(hi)?, count).map_err(|e| e.to_string())
        }
        _ => Err("expected VALUE or LO:HI:COUNT".into()),
    }
}

fn sign_name(s: Sign) -> &'static str {
    match s {
        Sign::Positive => "positive",
        Sign::Negative => "negative",
        Sign::Indeterminate => "indeterminate",
    }
}

fn certify_point(
    alpha: f64,
    beta: f64,
    sigma: f64,
    modes: usize,
    target: f64,
) -> Result<(DensityEnclosure, LyapunovEnclosure)> {
    let p = MapParams::new(alpha, beta)?;
    let noise = NoiseParams::new(sigma)?;
    let opts = CertifyOptions {
        target_cn: target,
        ..CertifyOptions::default()
    };
    let si = si_table(modes);
    let d = enclose_density(TestMap::Family(p), noise, modes, &opts)?;
    let l = lyapunov_enclosure(&d, p, &si)?;
    Ok((d, l))
}

#[derive(Args)]
struct LyapunovArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long)]
    sigma: f64,
    /// Fourier truncation K
    #[arg(long, default_value_t = 128)]
    modes: usize,
    /// Contraction target for the certified mixing bound C_N
    #[arg(long, default_value_t = 0.5)]
    target: f64,
    /// Write the density certificate to this file
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run_lyapunov(a: LyapunovArgs) -> Result<()> {
    let (d, l) = certify_point(a.alpha, a.beta, a.sigma, a.modes, a.target)?;
    println!("lambda in [{}, {}]", l.lambda.lo(), l.lambda.hi());
    println!(
        "width {:e}, certified sign: {}",
        l.lambda.hi() - l.lambda.lo(),
        sign_name(row_sign(&l))
    );
    println!(
        "density error E <= {:e}, residual eps <= {:e}, mixing N = {}, C_N <= {}",
        d.e.hi(),
        d.eps.hi(),
        d.cert.n,
        d.cert.c[d.cert.n].hi()
    );
    if let Some(path) = &a.out {
        fs::write(path, certificate_text(&d))
            .with_context(|| format!("writing certificate {}", path.display()))?;
        println!("certificate written to {}", path.display());
    }
    Ok(())
}

fn row_sign(l: &LyapunovEnclosure) -> Sign {
    if l.lambda.lo() > 0.0 {
        Sign::Positive
    } else if l.lambda.hi() < 0.0 {
        Sign::Negative
    } else {
        Sign::Indeterminate
    }
}

#[derive(Args)]
struct SweepArgs {
    /// Fixed value "A" or grid "LO:HI:COUNT"
    #[arg(long, value_parser = parse_range, default_value = "3")]
    alpha: Range,
    /// Fixed value "B" or grid "LO:HI:COUNT"
    #[arg(long, value_parser = parse_range, default_value = "1")]
    beta: Range,
    /// Noise grid "LO:HI:COUNT" (or a single value)
    #[arg(long, value_parser = parse_range)]
    sigma: Range,
    #[arg(long, default_value_t = 128)]
    modes: usize,
    #[arg(long, default_value_t = 0.5)]
    target: f64,
    /// CSV output path (header: alpha,beta,sigma,modes,lambda_lo,lambda_hi,...)
    #[arg(long)]
    out_csv: PathBuf,
    /// Certified-sign pixmap (P6 PPM): red λ>0, blue λ<0, gray indeterminate
    #[arg(long)]
    out_map: Option<PathBuf>,
    /// Mixing-rate heatmap (P6 PPM) from the certified C_N bounds
    #[arg(long)]
    out_mixing_map: Option<PathBuf>,
    /// Record wall times in runtime_s (default 0 so reruns are byte-identical)
    #[arg(long)]
    timings: bool,
}

fn run_sweep(a: SweepArgs) -> Result<()> {
    let opts = CertifyOptions {
        target_cn: a.target,
        ..CertifyOptions::default()
    };
    let cfg = SweepConfig {
        alpha: a.alpha,
        beta: a.beta,
        sigma: a.sigma,
        k: a.modes,
        opts,
        timings: a.timings,
    };
    let mut writer = emit::CsvWriter::create(&a.out_csv)?;
    let mut write_err: Option<lyapcert::Error> = None;
    let rows = sweep_with(&cfg, |r| {
        if let Some(tag) = &r.failure {
            eprintln!(
                "point (alpha={}, beta={}, sigma={}) failed: {tag}",
                r.alpha, r.beta, r.sigma
            );
        }
        if write_err.is_none() {
            if let Err(e) = writer.write_row(r) {
                write_err = Some(e);
            }
        }
    })?;
    if let Some(e) = write_err {
        return Err(e.into());
    }
    let width = cfg.alpha.count * cfg.beta.count;
    let height = cfg.sigma.count;
    if let Some(p) = &a.out_map {
        emit::write_sign_map(p, &rows, width, height)?;
    }
    if let Some(p) = &a.out_mixing_map {
        emit::write_mixing_map(p, &rows, width, height)?;
    }
    let (mut pos, mut neg, mut gray, mut failed) = (0usize, 0usize, 0usize, 0usize);
    for r in &rows {
        if r.is_failure() {
            failed += 1;
            continue;
        }
        match r.certified_sign() {
            Sign::Positive => pos += 1,
            Sign::Negative => neg += 1,
            Sign::Indeterminate => gray += 1,
        }
    }
    println!(
        "{} points: {pos} certified positive, {neg} certified negative, {gray} indeterminate, {failed} failed",
        rows.len()
    );
    if failed > 0 {
        bail!("{failed} grid points failed certification");
    }
    Ok(())
}

#[derive(Args)]
struct CrossingsArgs {
    /// Read sweep rows from a CSV written by `lyapcert sweep`
    #[arg(long, conflicts_with_all = ["alpha", "beta", "sigma", "modes", "target"])]
    from_csv: Option<PathBuf>,
    /// Fixed value "A" or grid "LO:HI:COUNT" for an inline scan
    #[arg(long, value_parser = parse_range, default_value = "3")]
    alpha: Range,
    #[arg(long, value_parser = parse_range, default_value = "1")]
    beta: Range,
    /// σ grid "LO:HI:COUNT" for the inline scan
    #[arg(long, value_parser = parse_range)]
    sigma: Option<Range>,
    #[arg(long, default_value_t = 128)]
    modes: usize,
    #[arg(long, default_value_t = 0.5)]
    target: f64,
    /// Refine every detected bracket to this σ width by certified bisection
    #[arg(long)]
    refine_width: Option<f64>,
}

fn run_crossings(a: CrossingsArgs) -> Result<()> {
    let rows = match &a.from_csv {
        Some(path) => emit::read_csv(path)?,
        None => {
            let sigma = a
                .sigma
                .context("either --from-csv or --sigma LO:HI:COUNT is required")?;
            let cfg = SweepConfig {
                alpha: a.alpha,
                beta: a.beta,
                sigma,
                k: a.modes,
                opts: CertifyOptions {
                    target_cn: a.target,
                    ..CertifyOptions::default()
                },
                timings: false,
            };
            sweep_with(&cfg, |r| {
                if let Some(tag) = &r.failure {
                    eprintln!(
                        "point (alpha={}, beta={}, sigma={}) failed: {tag}",
                        r.alpha, r.beta, r.sigma
                    );
                }
            })?
        }
    };
    let brackets = detect_crossings(&rows);
    println!("{} certified sign crossing(s)", brackets.len());
    for b in &brackets {
        println!(
            "alpha={} beta={}: sigma in [{}, {}], lambda({}) = [{}, {}], lambda({}) = [{}, {}]{}",
            b.alpha,
            b.beta,
            b.sigma_lo,
            b.sigma_hi,
            b.sigma_lo,
            b.lambda_at_lo.0,
            b.lambda_at_lo.1,
            b.sigma_hi,
            b.lambda_at_hi.0,
            b.lambda_at_hi.1,
            if b.reversed { " (negative to positive)" } else { "" }
        );
    }
    let Some(width) = a.refine_width else {
        return Ok(());
    };
    let mut stalled = 0usize;
    for b in &brackets {
        let p = MapParams::new(b.alpha, b.beta)?;
        let ropts = RefineOptions::new(width, b.modes);
        let r = refine_crossing(p, b, &ropts)?;
        println!(
            "refined alpha={} beta={}: sigma in [{}, {}] (width {:e}, {} bisection steps, final K {}){}",
            b.alpha,
            b.beta,
            r.bracket.sigma_lo,
            r.bracket.sigma_hi,
            r.bracket.sigma_hi - r.bracket.sigma_lo,
            r.steps,
            r.bracket.modes,
            if r.stalled { " [stalled]" } else { "" }
        );
        if r.stalled {
            stalled += 1;
        }
    }
    if stalled > 0 {
        bail!("{stalled} refinement(s) stalled before reaching the width target");
    }
    Ok(())
}

#[derive(Args)]
struct DensityArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long)]
    sigma: f64,
    #[arg(long, default_value_t = 128)]
    modes: usize,
    #[arg(long, default_value_t = 0.5)]
    target: f64,
    /// Output file for the certificate and density coefficients (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run_density(a: DensityArgs) -> Result<()> {
    let (d, _l) = certify_point(a.alpha, a.beta, a.sigma, a.modes, a.target)?;
    let mut text = certificate_text(&d);
    let mid = d.g.midpoint();
    let k = d.k as i64;
    for (i, c) in mid.iter().enumerate() {
        text.push_str(&format!("coeff {} {:e} {:e}\n", i as i64 - k, c.re, c.im));
    }
    match &a.out {
        Some(path) => {
            fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
            println!(
                "density certified: E <= {:e} (eps <= {:e}, N = {}), written to {}",
                d.e.hi(),
                d.eps.hi(),
                d.cert.n,
                path.display()
            );
        }
        None => print!("{text}"),
    }
    Ok(())
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long)]
    sigma: f64,
    /// Initial condition in [-1, 1)
    #[arg(long)]
    x0: f64,
    /// Second initial condition: switch to two-point distance mode
    #[arg(long)]
    y0: Option<f64>,
    #[arg(long, default_value_t = 1_000_000)]
    steps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Trajectory ("step,x") or distance ("step,circle,raw") CSV output
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run_simulate(a: SimulateArgs) -> Result<()> {
    let p = MapParams::new(a.alpha, a.beta)?;
    let map = TestMap::Family(p);
    let noise = NoiseParams::new(a.sigma)?;
    if !(-1.0..1.0).contains(&a.x0) {
        bail!("x0 must lie in [-1, 1)");
    }
    if a.steps == 0 {
        bail!("steps must be at least 1");
    }
    match a.y0 {
        None => {
            let r = simulate::birkhoff(&map, noise, a.x0, a.steps, a.seed);
            println!(
                "Birkhoff average of log|T'| over {} steps: {}",
                r.steps, r.average
            );
            println!(
                "standard error {:e}, {} singular iterate(s) skipped, final state {}",
                r.std_error, r.skipped, r.x_final
            );
            if let Some(path) = &a.out {
                let tr = simulate::trajectory(&map, noise, a.x0, a.steps, a.seed);
                let file =
                    fs::File::create(path).with_context(|| format!("writing {}", path.display()))?;
                let mut w = BufWriter::new(file);
                writeln!(w, "step,x")?;
                for (i, x) in tr.iter().enumerate() {
                    writeln!(w, "{i},{x}")?;
                }
                w.flush()?;
                println!("trajectory written to {}", path.display());
            }
        }
        Some(y0) => {
            if !(-1.0..1.0).contains(&y0) {
                bail!("y0 must lie in [-1, 1)");
            }
            let r = simulate::two_point(&map, noise, a.x0, y0, a.steps, a.seed);
            let mut tail: Vec<f64> = r.circle[r.circle.len() - (r.circle.len() / 10).max(1)..].to_vec();
            tail.sort_by(f64::total_cmp);
            println!(
                "initial circle distance {}, median of terminal 10%: {}",
                r.circle[0],
                tail[tail.len() / 2]
            );
            if let Some(path) = &a.out {
                let file =
                    fs::File::create(path).with_context(|| format!("writing {}", path.display()))?;
                let mut w = BufWriter::new(file);
                writeln!(w, "step,circle,raw")?;
                for (i, (c, d)) in r.circle.iter().zip(&r.raw).enumerate() {
                    writeln!(w, "{i},{c},{d}")?;
                }
                w.flush()?;
                println!("distances written to {}", path.display());
            }
        }
    }
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().cmd {
        Cmd::Lyapunov(a) => run_lyapunov(a),
        Cmd::Sweep(a) => run_sweep(a),
        Cmd::Crossings(a) => run_crossings(a),
        Cmd::Density(a) => run_density(a),
        Cmd::Simulate(a) => run_simulate(a),
    }
}
