//! Phase timing breakdown for one certification run.
//!
//! Usage: cargo run -p lyapcert --example phases -- ALPHA BETA SIGMA K

use std::time::Instant;

use lyapcert::assemble::{assemble_deterministic, TolProfile};
use lyapcert::certify::{approx_fixed_point, error_bound, mixing_norms, residual, CertifyOptions};
use lyapcert::fourier::{gaussian_multiplier, tail_gamma};
use lyapcert::maps::{MapParams, NoiseParams, TestMap};
use lyapcert::operator::compose;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let alpha: f64 = args[1].parse().unwrap();
    let beta: f64 = args[2].parse().unwrap();
    let sigma: f64 = args[3].parse().unwrap();
    let k: usize = args[4].parse().unwrap();

    let p = MapParams::new(alpha, beta).unwrap();
    let noise = NoiseParams::new(sigma).unwrap();
    let map = TestMap::Family(p);
    let opts = CertifyOptions::default();

    let t = Instant::now();
    let profile = TolProfile::for_noise(noise, k);
    let (dm, report) = assemble_deterministic(map, k, &profile).unwrap();
    println!(
        "assemble      {:8.3} s  (rows assembled {}, hulled {}, panels {}, worst width {:e})",
        t.elapsed().as_secs_f64(),
        k - report.hulled_rows.len(),
        report.hulled_rows.len(),
        report.panels,
        report.worst_width
    );

    let t = Instant::now();
    let d = gaussian_multiplier(noise, k);
    let gamma = tail_gamma(noise, k);
    let op = compose(&d, &dm, gamma, noise.sigma).unwrap();
    println!("compose       {:8.3} s", t.elapsed().as_secs_f64());

    let t = Instant::now();
    let g = approx_fixed_point(&op, opts.tol, opts.max_iter).unwrap();
    println!("fixed point   {:8.3} s", t.elapsed().as_secs_f64());

    let t = Instant::now();
    let eps = residual(&op, &g).unwrap();
    println!("residual      {:8.3} s  (eps {:e})", t.elapsed().as_secs_f64(), eps.hi());

    let t = Instant::now();
    let cert = mixing_norms(&op, opts.max_mix_steps, opts.target_cn).unwrap();
    println!(
        "mixing        {:8.3} s  (N {}, C_N {:e})",
        t.elapsed().as_secs_f64(),
        cert.n,
        cert.c[cert.n].hi()
    );

    let t = Instant::now();
    let e = error_bound(&cert, &eps, noise, k).unwrap();
    println!("error bound   {:8.3} s  (E {:e})", t.elapsed().as_secs_f64(), e.hi());
}
