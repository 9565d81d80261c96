//! Certified enclosures of the sine integral at multiples of π:
//! Si(jπ) = ∫₀^{jπ} sin(x)/x dx.
//!
//! Si(π) comes from the alternating power series of sin(x)/x integrated term
//! by term, with the first omitted term bounding the truncation error. Each
//! further increment ∫_{lπ}^{(l+1)π} sin(x)/x dx is computed in the exact
//! substitution x = πu as ∫_l^{l+1} sin(πu)/u du on adaptively halved dyadic
//! panels; on each panel the integrand is a degree-8 Taylor model — the sine
//! factor with its Lagrange remainder times the geometric series of 1/u —
//! whose polynomial part integrates in closed form and whose remainder enters
//! as an interval.

use crate::interval::IvReal;
use crate::taylor::Tm;
use crate::trig::{cospi_point, sinpi_point};

/// Local expansion degree on each panel.
const DEGREE: usize = 8;
/// Split a panel while its estimated truncation remainder exceeds this.
const REM_TARGET: f64 = 1e-18;

/// Si(π) by the alternating series Σ (−1)ⁿ π^{2n+1}/((2n+1)(2n+1)!),
/// truncated when the next term drops below 1e−20.
fn si_pi() -> IvReal {
    let pi = IvReal::pi();
    let pi2 = pi.sqr();
    let mut sum = IvReal::zero();
    // term_n = π^{2n+1}/(2n+1)!
    let mut term = pi;
    let mut n = 0usize;
    loop {
        let contrib = term.div(&IvReal::point((2 * n + 1) as f64)).unwrap();
        sum = if n % 2 == 0 {
            sum.add(&contrib)
        } else {
            sum.sub(&contrib)
        };
        term = term
            .mul(&pi2)
            .div(&IvReal::point(((2 * n + 2) * (2 * n + 3)) as f64))
            .unwrap();
        n += 1;
        let next = term.div(&IvReal::point((2 * n + 1) as f64)).unwrap().mag();
        if next < 1e-20 {
            // alternating, monotonically decreasing terms: the truncation
            // error is bounded by the first omitted term
            sum = sum.add(&IvReal::symmetric(next));
            return sum;
        }
        assert!(n < 64, "series failed to reach the cutoff");
    }
}

/// ∫ over the dyadic panel [l + q·2⁻ˢ, l + (q+1)·2⁻ˢ] of sin(πu)/u du.
fn panel_integral(l: u32, s: u32, q: u64) -> IvReal {
    // exact dyadic geometry
    let rho = 2f64.powi(-(s as i32 + 1));
    let u0 = l as f64 + (2 * q + 1) as f64 * rho;
    debug_assert!(u0 - rho >= 1.0);

    let pi = IvReal::pi();
    let pr = pi.scale(rho); // πρ

    // sine factor: sin(π(u0+ρτ)) = Σ c_n τⁿ + R, |R| ≤ (πρ)⁹/9!
    let s0 = sinpi_point(u0);
    let c0 = cospi_point(u0);
    let mut c_sin = Vec::with_capacity(DEGREE + 1);
    let mut pw = IvReal::one(); // (πρ)ⁿ/n!
    for n in 0..=DEGREE {
        let trig = match n % 4 {
            0 => s0.clone(),
            1 => c0.clone(),
            2 => s0.neg(),
            _ => c0.neg(),
        };
        c_sin.push(trig.mul(&pw));
        pw = pw.mul(&pr).div(&IvReal::point((n + 1) as f64)).unwrap();
    }
    // pw is now (πρ)^{d+1}/(d+1)!
    let sin_tm = Tm::from_coeffs(c_sin, IvReal::symmetric(pw.mag()), 1.0);

    // reciprocal factor: 1/(u0+ρτ) = (1/u0)·Σ (−ρ/u0)ⁿτⁿ + R,
    // |R| ≤ (1/u0)·ratio^{d+1}/(1−ratio)
    let inv_u0 = IvReal::point(u0).recip().unwrap();
    let ratio = IvReal::point(rho).div(&IvReal::point(u0)).unwrap();
    let mut c_inv = Vec::with_capacity(DEGREE + 1);
    let mut p = inv_u0.clone();
    for _ in 0..=DEGREE {
        c_inv.push(p.clone());
        p = p.mul(&ratio).neg();
    }
    let geo_tail = p.abs().div(&IvReal::one().sub(&ratio)).unwrap().hi();
    let inv_tm = Tm::from_coeffs(c_inv, IvReal::symmetric(geo_tail), 1.0);

    let f = sin_tm.mul_trunc(&inv_tm);

    // ∫_{−1}^{1} f(τ)dτ = Σ even n c_n·2/(n+1), remainder contributes 2·rem
    let mut integral = IvReal::zero();
    for n in (0..=DEGREE).step_by(2) {
        integral = integral.add(&f.c[n].scale(2.0 / (n + 1) as f64));
    }
    integral = integral.add(&f.rem.scale(2.0));
    integral.scale(rho)
}

/// Float estimate of the panel truncation remainder (splitting heuristic).
fn panel_remainder_estimate(l: u32, s: u32, q: u64) -> f64 {
    let rho = 2f64.powi(-(s as i32 + 1));
    let u0 = l as f64 + (2 * q + 1) as f64 * rho;
    let pr = std::f64::consts::PI * rho;
    let sin_rem = pr.powi(9) / 362880.0;
    let ratio = rho / u0;
    let geo_rem = ratio.powi(9) / ((1.0 - ratio) * u0);
    sin_rem + geo_rem
}

/// ∫_l^{l+1} sin(πu)/u du = Si((l+1)π) − Si(lπ), l ≥ 1.
fn pi_interval_integral(l: u32) -> IvReal {
    let mut total = IvReal::zero();
    let mut stack: Vec<(u32, u64)> = vec![(0, 0)];
    while let Some((s, q)) = stack.pop() {
        if panel_remainder_estimate(l, s, q) > REM_TARGET && s < 40 {
            stack.push((s + 1, 2 * q));
            stack.push((s + 1, 2 * q + 1));
            continue;
        }
        total = total.add(&panel_integral(l, s, q));
    }
    total
}

/// Enclosures of Si(jπ) for j = 0..=j_max; entry 0 is exactly [0,0].
pub fn sine_integral_multiples(j_max: usize) -> Vec<IvReal> {
    let mut out = Vec::with_capacity(j_max + 1);
    out.push(IvReal::zero());
    if j_max >= 1 {
        out.push(si_pi());
    }
    for l in 1..j_max {
        let inc = pi_interval_integral(l as u32);
        out.push(out[l].add(&inc));
    }
    out
}
