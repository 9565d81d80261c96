//! Lyapunov pairing machinery: observable coefficients, the Υ norm, the
//! pairing-based enclosure, and generic observable integrals.

mod common;

use lyapcert::certify::{enclose_density, CertifyOptions};
use lyapcert::fourier::FourierVector;
use lyapcert::lyapunov::{
    lyapunov_enclosure, observable_coefficients, observable_for, observable_integral, si_table,
    upsilon_for, LyapunovEnclosure,
};
use lyapcert::maps::{MapParams, NoiseParams, TestMap};
use lyapcert::si::sine_integral_multiples;
use lyapcert::{IvComplex, IvReal};

fn certified_lambda(alpha: f64, beta: f64, sigma: f64, k: usize) -> LyapunovEnclosure {
    let p = MapParams::new(alpha, beta).unwrap();
    let noise = NoiseParams::new(sigma).unwrap();
    let d = enclose_density(TestMap::Family(p), noise, k, &CertifyOptions::default()).unwrap();
    let si = sine_integral_multiples(k);
    lyapunov_enclosure(&d, p, &si).unwrap()
}

#[test]
fn si_table_reexport_is_the_table() {
    let a = si_table(16);
    let b = sine_integral_multiples(16);
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.lo().to_bits(), y.lo().to_bits());
        assert_eq!(x.hi().to_bits(), y.hi().to_bits());
    }
}

#[test]
fn observable_structure() {
    let si = sine_integral_multiples(12);
    let p = MapParams::new(3.5, 0.5).unwrap();
    let f = observable_coefficients(p, 12, &si).unwrap();
    // real and even
    for j in 0..=12i64 {
        let a = f.get(j);
        assert_eq!(a.im().lo(), 0.0);
        assert_eq!(a.im().hi(), 0.0);
        let b = f.get(-j);
        assert_eq!(a.re().lo(), b.re().lo());
        assert_eq!(a.re().hi(), b.re().hi());
    }
    // F[0] = ln(α(1+β)) − (α−1)
    let f0 = (3.5f64 * 1.5).ln() - 2.5;
    assert!((f.get(0).re().mid() - f0).abs() <= 1e-14);
    // F[j] = −((α−1)/(jπ))·Si(jπ) < 0, magnitude decreasing like 1/j
    for j in 1..=12i64 {
        let v = f.get(j).re();
        assert!(v.hi() < 0.0);
        let bound = 2.5 * (std::f64::consts::FRAC_PI_2 + 0.3) / (j as f64 * std::f64::consts::PI);
        assert!(v.mag() <= bound);
    }
    // a too-short sine-integral table is rejected
    assert!(observable_coefficients(p, 20, &si).is_err());
}

#[test]
fn observables_for_test_maps() {
    let si = sine_integral_multiples(8);
    // identity: log|T′| ≡ 0
    let id = observable_for(&TestMap::Identity, 8, &si).unwrap().unwrap();
    for j in -8..=8i64 {
        assert_eq!(id.get(j).mag_upper(), 0.0);
    }
    assert_eq!(upsilon_for(&TestMap::Identity).unwrap().hi(), 0.0);

    // constant map: T′ ≡ 0, no observable
    assert!(observable_for(&TestMap::Constant(0.2), 8, &si)
        .unwrap()
        .is_none());
    assert!(upsilon_for(&TestMap::Constant(0.2)).is_none());

    // tent: |T′| ≡ 2 shares the α = 1, β = 1 observable (constant ln 2)
    let tent = observable_for(&TestMap::Tent, 8, &si).unwrap().unwrap();
    assert!(tent.get(0).re().contains(std::f64::consts::LN_2));
    for j in 1..=8i64 {
        assert_eq!(tent.get(j).mag_upper(), 0.0);
    }

    let fam = observable_for(
        &TestMap::Family(MapParams::new(2.0, 0.5).unwrap()),
        8,
        &si,
    )
    .unwrap()
    .unwrap();
    assert!(fam.get(1).re().hi() < 0.0);
}

#[test]
fn alpha_one_lambda_is_log_one_plus_beta() {
    // α = 1: |T′| ≡ 1+β, so λ = ln(1+β) independent of σ and the density
    for beta in [0.0f64, 0.5, 1.0] {
        let l = certified_lambda(1.0, beta, 0.3, 16);
        let expected = (1.0 + beta).ln();
        assert!(
            l.lambda.contains(expected),
            "λ(α=1, β={beta}) = {:?} should contain ln(1+β) = {expected}",
            l.lambda
        );
        assert!(l.lambda.width() <= 1e-10, "width {:e}", l.lambda.width());
        // the pairing itself is exactly the constant mode product
        assert!((l.lambda_s.mid() - expected).abs() <= 1e-12);
    }
}

#[test]
fn enclosure_width_accounting() {
    let l = certified_lambda(3.5, 1.0, 0.4, 32);
    // λ = λ_s ± (density term + imaginary residue): the full interval
    // contains the pairing and is wider by exactly the error terms
    assert!(l.lambda.contains_iv(&l.lambda_s));
    assert!(l.pairing_tail.mag() == 0.0);
    assert!(l.density_term.mag() > 0.0);
    let slack = l.lambda.width() - l.lambda_s.width();
    assert!(slack >= 2.0 * l.density_term.mag() * (1.0 - 1e-12));
    assert_eq!(l.alpha, 3.5);
    assert_eq!(l.beta, 1.0);
    assert_eq!(l.sigma, 0.4);
    assert_eq!(l.k, 32);
}

#[test]
fn lambda_stable_under_truncation_growth() {
    // both enclosures contain the true λ, so they must intersect, and the
    // centers agree far beyond the certified width
    let a = certified_lambda(3.5, 1.0, 0.4, 32);
    let b = certified_lambda(3.5, 1.0, 0.4, 64);
    assert!(a.lambda.intersect(&b.lambda).is_some());
    assert!((a.lambda.mid() - b.lambda.mid()).abs() <= 1e-10);
    // and the certified value sits where the reference computation puts it
    let reference = -0.095573727242536;
    assert!((a.lambda.mid() - reference).abs() <= 1e-9);
}

#[test]
fn observable_integral_constants_and_cosine() {
    let p = MapParams::new(3.25, 1.0).unwrap();
    let noise = NoiseParams::new(0.3).unwrap();
    let k = 16usize;
    let d = enclose_density(TestMap::Family(p), noise, k, &CertifyOptions::default()).unwrap();

    // φ ≡ 1: ∫ φ f dm = 1 for any probability density
    let mut one = FourierVector::zeros(k);
    one.set(0, IvComplex::point(1.0, 0.0));
    let phi_l2 = IvReal::sqrt2();
    let total = observable_integral(&d, &one, &phi_l2).unwrap();
    assert!(total.contains(1.0));
    assert!(total.width() <= 4.0 * std::f64::consts::SQRT_2 * d.e.hi() + 1e-12);

    // φ = cos(πx): the pairing reduces to 2·Re g[1]
    let mut cosx = FourierVector::zeros(k);
    cosx.set(1, IvComplex::point(0.5, 0.0));
    cosx.set(-1, IvComplex::point(0.5, 0.0));
    let cos_l2 = IvReal::one();
    let mean_cos = observable_integral(&d, &cosx, &cos_l2).unwrap();
    let expected = 2.0 * d.g.get(1).re().mid();
    assert!((mean_cos.mid() - expected).abs() <= 1e-12);
    assert!(mean_cos.width() <= 2.0 * d.e.hi() + 1e-12);
    // mismatched truncation is rejected
    let short = FourierVector::zeros(k - 1);
    assert!(observable_integral(&d, &short, &cos_l2).is_err());
}
