//! The certification pipeline: fixed-point quality, mixing certificates
//! validated against actual operator iterates, the error bound, and the
//! certificate record format.

mod common;

use lyapcert::assemble::{assemble_deterministic, TolProfile};
use lyapcert::certify::{
    apriori_discrete_norms, apriori_mixing, approx_fixed_point, certificate_summary,
    certificate_text, enclose_density, enclose_density_with, error_bound, mixing_norms, residual,
    CertifyOptions, MixingCertificate, MixingSource,
};
use lyapcert::fourier::{gaussian_multiplier, tail_gamma, FourierVector};
use lyapcert::maps::{MapParams, NoiseParams, TestMap};
use lyapcert::operator::{apply, compose, DiscretizedOperator};
use lyapcert::{IvComplex, IvReal};

fn family_operator(alpha: f64, beta: f64, sigma: f64, k: usize) -> DiscretizedOperator {
    let map = TestMap::Family(MapParams::new(alpha, beta).unwrap());
    let noise = NoiseParams::new(sigma).unwrap();
    let profile = TolProfile::for_noise(noise, k);
    let (dm, _) = assemble_deterministic(map, k, &profile).unwrap();
    let d = gaussian_multiplier(noise, k);
    compose(&d, &dm, tail_gamma(noise, k), sigma).unwrap()
}

#[test]
fn fixed_point_is_a_unit_mass_hermitian_polynomial() {
    let op = family_operator(3.25, 1.0, 0.3, 16);
    let g = approx_fixed_point(&op, None, 20_000).unwrap();
    // exact unit mass, point coefficients
    let c0 = g.get(0);
    assert!(c0.re().is_point() && c0.re().lo() == 0.5);
    assert!(c0.im().is_point() && c0.im().lo() == 0.0);
    assert_eq!(g.max_width(), 0.0);
    // Hermitian symmetry g[−j] = conj(g[j])
    for j in 1..=16i64 {
        let a = g.get(j);
        let b = g.get(-j);
        assert_eq!(a.re().lo(), b.re().lo());
        assert_eq!(a.im().lo(), -b.im().lo());
    }
    // the residual certifies it is numerically invariant
    let eps = residual(&op, &g).unwrap();
    assert!(eps.hi() < 1e-11, "residual {eps:?}");
    assert!(eps.lo() >= 0.0);
}

#[test]
fn mixing_certificate_bounds_actual_iterates() {
    let op = family_operator(3.25, 1.0, 0.2, 24);
    let cert = mixing_norms(&op, 4096, 0.5).unwrap();
    assert_eq!(cert.source, MixingSource::Matrix);
    // C_0 = 1 exactly, C_N below target
    assert!(cert.c[0].is_point() && cert.c[0].lo() == 1.0);
    assert!(cert.c[cert.n].hi() < 0.5);
    assert_eq!(cert.c.len(), cert.n + 1);

    // the certified norms must dominate the observed decay of a mass-zero
    // vector: ‖B^i w‖ ≤ C_i·‖w‖
    let k = 24i64;
    let mut w = FourierVector::zeros(24);
    for j in 1..=k {
        let re = 0.3 / (j as f64);
        let im = 0.1 / (j * j) as f64;
        w.set(j, IvComplex::point(re, im));
        w.set(-j, IvComplex::point(re, -im));
    }
    let n0 = w.norm_l2_zero_mean();
    let mut v = w;
    for i in 1..=cert.n {
        v = apply(&op, &v).unwrap();
        assert!(v.get(0).mag_upper() == 0.0, "mass row leaked at step {i}");
        let ni = v.norm_l2_zero_mean();
        let bound = cert.c[i].hi() * n0.hi();
        assert!(
            ni.lo() <= bound * (1.0 + 1e-10) + 1e-14,
            "step {i}: ‖B^i w‖ = {ni:?} exceeds C_{i}·‖w‖ = {bound}"
        );
    }
}

#[test]
fn error_bound_shape() {
    let noise = NoiseParams::new(0.3).unwrap();
    let cert = MixingCertificate {
        n: 3,
        c: vec![
            IvReal::one(),
            IvReal::point(0.8),
            IvReal::point(0.6),
            IvReal::point(0.45),
        ],
        source: MixingSource::Matrix,
    };
    let eps_small = IvReal::point(1e-13);
    let eps_big = IvReal::point(1e-9);
    let e_small = error_bound(&cert, &eps_small, noise, 64).unwrap();
    let e_big = error_bound(&cert, &eps_big, noise, 64).unwrap();
    assert!(e_small.hi() > 0.0);
    // monotone in the residual
    assert!(e_small.hi() < e_big.hi());
    // the geometric-sum factor dominates the residual: E ≥ ε·Σ/(1−C_N)
    let factor = (1.0 + 0.8 + 0.6) / (1.0 - 0.45);
    assert!(e_big.hi() >= 1e-9 * factor * 0.999);
    // a smaller truncation has a larger tail term
    let e_k8 = error_bound(&cert, &eps_small, noise, 8).unwrap();
    assert!(e_k8.hi() > e_small.hi());

    // C_N ≥ 1 invalidates the certificate
    let bad = MixingCertificate {
        n: 1,
        c: vec![IvReal::one(), IvReal::point(1.0)],
        source: MixingSource::Matrix,
    };
    assert!(error_bound(&bad, &eps_small, noise, 64).is_err());
}

#[test]
fn apriori_estimates_are_sane() {
    let noise = NoiseParams::new(0.5).unwrap();
    let a1 = apriori_mixing(noise, 1);
    assert!(a1.theta.hi() < 1.0 && a1.theta.lo() > 0.0);
    let a10 = apriori_mixing(noise, 10);
    // decay in the step count
    assert!(a10.l2.hi() < a1.l2.hi());
    assert!(a10.l1.hi() < a1.l1.hi());

    let d1 = apriori_discrete_norms(noise, 32, 1);
    let d3 = apriori_discrete_norms(noise, 32, 3);
    assert!(d1.l1.lo() >= 65.0 * (1.0 - 1e-12)); // (1+Γ)·(2K+1) ≥ 2K+1
    assert!(d3.l1.hi() >= d1.l1.hi() * (1.0 - 1e-12));
    assert!(d1.l2.hi() > 0.0 && d3.l2.hi() > 0.0);
}

#[test]
fn certificate_record_roundtrip() {
    let map = TestMap::Family(MapParams::new(3.5, 1.0).unwrap());
    let noise = NoiseParams::new(0.4).unwrap();
    let d = enclose_density(map, noise, 16, &CertifyOptions::default()).unwrap();
    let text = certificate_text(&d);
    assert!(text.starts_with("LYAPCERT1\n"));
    assert!(text.contains("map family 3.5 1\n"));
    let (sigma, k, n, cn, e) = certificate_summary(&text).unwrap();
    assert_eq!(sigma, 0.4);
    assert_eq!(k, 16);
    assert_eq!(n, d.cert.n);
    assert_eq!(cn, d.cert.c[d.cert.n].hi());
    assert_eq!(e, d.e.hi());

    // malformed records are rejected
    assert!(certificate_summary("not a certificate").is_err());
    assert!(certificate_summary("LYAPCERT1\nsigma x\n").is_err());
}

#[test]
fn end_to_end_enclosure_small() {
    let map = TestMap::Family(MapParams::new(3.25, 1.0).unwrap());
    let noise = NoiseParams::new(0.4).unwrap();
    let d = enclose_density(map, noise, 24, &CertifyOptions::default()).unwrap();
    assert!(d.eps.hi() < 1e-12, "eps = {:?}", d.eps);
    assert!(d.e.hi() < 1e-10, "E = {:?}", d.e);
    // E strictly dominates the residual (the geometric factor is ≥ 1)
    assert!(d.e.hi() > d.eps.hi());
    assert_eq!(d.sigma, 0.4);
    assert_eq!(d.k, 24);
    // the certified density is a genuine function: nonneg mass, L² norm ≥ 1/√2
    let norm = d.g.norm_l2();
    assert!(norm.lo() >= std::f64::consts::FRAC_1_SQRT_2 - 1e-12);
}

#[test]
fn matrix_reuse_across_noise_levels() {
    let map = TestMap::Family(MapParams::new(3.25, 1.0).unwrap());
    let k = 16usize;
    let noise_lo = NoiseParams::new(0.3).unwrap();
    let profile = TolProfile::for_noise(noise_lo, k);
    let (dm, _) = assemble_deterministic(map, k, &profile).unwrap();

    // one assembly certifies every σ at or above the profile's σ
    let d3 = enclose_density_with(&dm, noise_lo, &CertifyOptions::default()).unwrap();
    let d5 = enclose_density_with(&dm, NoiseParams::new(0.5).unwrap(), &CertifyOptions::default())
        .unwrap();
    assert!(d3.e.hi() < 1e-9);
    assert!(d5.e.hi() < 1e-9);
    // more noise mixes faster: the certificate needs no more steps
    assert!(d5.cert.n <= d3.cert.n);

    // reused enclosures match fresh per-σ assemblies to within their bounds
    let fresh = enclose_density(map, NoiseParams::new(0.5).unwrap(), k, &CertifyOptions::default())
        .unwrap();
    let reused_mid = d5.g.get(1).re().mid();
    let fresh_mid = fresh.g.get(1).re().mid();
    assert!((reused_mid - fresh_mid).abs() <= d5.e.hi() + fresh.e.hi());
}

#[test]
#[should_panic(expected = "matrix assembled for min")]
fn matrix_reuse_below_profile_sigma_is_rejected() {
    let map = TestMap::Family(MapParams::new(3.25, 1.0).unwrap());
    let k = 8usize;
    let profile = TolProfile::for_noise(NoiseParams::new(0.3).unwrap(), k);
    let (dm, _) = assemble_deterministic(map, k, &profile).unwrap();
    let _ = enclose_density_with(&dm, NoiseParams::new(0.1).unwrap(), &CertifyOptions::default());
}
