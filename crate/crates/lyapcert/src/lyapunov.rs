//! Certified Lyapunov-exponent enclosures.
//!
//! The observable log|T′_{α,β}| has closed-form Fourier coefficients on
//! [−1,1]: F[0] = ln(α(1+β)) − (α−1) and F[j] = −((α−1)/(|j|π))·Si(|j|π) for
//! j ≠ 0, real and even. Pairing them with a certified density enclosure
//! gives λ: the discrete pairing λ_s = 2·Σ_j F[j]·conj(g[j]) is exact for the
//! polynomial candidate g, and |λ − λ_s| ≤ Υ·‖f_σ − g‖_{L²} with
//! Υ = √2·((ln(α(1+β)) − (α−1))² + (α−1)²)^{1/2} the L² norm of the
//! observable's zero-mean-plus-mean split used by the pairing bound.

use crate::certify::DensityEnclosure;
use crate::complex::IvComplex;
use crate::fourier::FourierVector;
use crate::interval::IvReal;
use crate::maps::{upsilon, MapParams, TestMap};
use crate::{Error, Result};

pub use crate::si::sine_integral_multiples as si_table;

/// A certified enclosure of the Lyapunov exponent with its width accounting.
#[derive(Clone, Debug)]
pub struct LyapunovEnclosure {
    /// Final certified interval for λ.
    pub lambda: IvReal,
    /// Discrete pairing 2·Σ F[j]·conj(g[j]) (real part; the imaginary
    /// residue is folded into the final width).
    pub lambda_s: IvReal,
    /// Contribution of observable modes |j| > K against g: exactly zero
    /// because g is a degree-K polynomial.
    pub pairing_tail: IvReal,
    /// Υ·E, the pairing error against the true density.
    pub density_term: IvReal,
    pub alpha: f64,
    pub beta: f64,
    pub sigma: f64,
    pub k: usize,
}

/// Fourier coefficients of log|T′_{α,β}| up to mode K: real, even, rigorous.
pub fn observable_coefficients(p: MapParams, k: usize, si: &[IvReal]) -> Result<FourierVector> {
    if si.len() < k + 1 {
        return Err(Error::Dimension {
            expected: k + 1,
            got: si.len(),
        });
    }
    let n = 2 * k + 1;
    let mut coeffs = vec![IvComplex::zero(); n];
    // F[0] = ln(α(1+β)) − (α−1)
    let a = IvReal::point(p.alpha);
    let one_plus_beta = IvReal::one().add(&IvReal::point(p.beta));
    let f0 = a
        .mul(&one_plus_beta)
        .ln()
        .unwrap()
        .sub(&IvReal::point(p.alpha - 1.0));
    coeffs[k] = IvComplex::from_real(f0);
    // F[j] = −((α−1)/(jπ))·Si(jπ), j ≥ 1; even in j
    let am1 = IvReal::point(p.alpha - 1.0);
    for j in 1..=k {
        let denom = IvReal::pi().scale(j as f64);
        let fj = am1.mul(&si[j]).div(&denom).unwrap().neg();
        coeffs[k + j] = IvComplex::from_real(fj.clone());
        coeffs[k - j] = IvComplex::from_real(fj);
    }
    FourierVector::from_coeffs(k, coeffs, true)
}

/// Observable vector for a test map, or `None` when log|T′| is not defined
/// (the constant map has T′ ≡ 0).
pub fn observable_for(map: &TestMap, k: usize, si: &[IvReal]) -> Result<Option<FourierVector>> {
    match map {
        TestMap::Family(p) => Ok(Some(observable_coefficients(*p, k, si)?)),
        TestMap::Tent => Ok(Some(observable_coefficients(
            MapParams::new(1.0, 1.0).unwrap(),
            k,
            si,
        )?)),
        TestMap::Identity => Ok(Some(FourierVector::zeros(k))),
        TestMap::Constant(_) => Ok(None),
    }
}

/// Υ for a test map (0 for the identity: its observable vanishes).
pub fn upsilon_for(map: &TestMap) -> Option<IvReal> {
    match map {
        TestMap::Family(p) => Some(upsilon(*p)),
        TestMap::Tent => Some(upsilon(MapParams::new(1.0, 1.0).unwrap())),
        TestMap::Identity => Some(IvReal::zero()),
        TestMap::Constant(_) => None,
    }
}

/// The pairing 2·Σ_{|j|≤K} a[j]·conj(b[j]) as a complex interval.
fn pairing(a: &FourierVector, b: &FourierVector) -> IvComplex {
    debug_assert_eq!(a.modes(), b.modes());
    let mut sum = IvComplex::zero();
    for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
        sum = sum.add(&x.mul(&y.conj()));
    }
    sum.scale(2.0)
}

/// Certified λ enclosure from a density enclosure for the family map (α, β).
pub fn lyapunov_enclosure(
    d: &DensityEnclosure,
    p: MapParams,
    si: &[IvReal],
) -> Result<LyapunovEnclosure> {
    let k = d.k;
    let f = observable_coefficients(p, k, si)?;
    let pair = pairing(&f, &d.g);
    // the pairing of real even F with Hermitian g is real; the numeric
    // imaginary residue widens the enclosure
    let lambda_s = pair.re().add(&IvReal::symmetric(pair.im().mag()));
    let pairing_tail = IvReal::zero(); // g has no modes beyond K
    let ups = upsilon(p);
    let density_term = ups.mul(&d.e);
    let lambda = lambda_s
        .add(&IvReal::symmetric(density_term.mag()))
        .add(&pairing_tail);
    Ok(LyapunovEnclosure {
        lambda,
        lambda_s,
        pairing_tail,
        density_term,
        alpha: p.alpha,
        beta: p.beta,
        sigma: d.sigma,
        k,
    })
}

/// Certified ∫ φ f_σ dm for an observable with coefficient vector `phi` and
/// L² norm bound `phi_l2`: pairing(φ, g) ± (imaginary residue + phi_l2·E).
pub fn observable_integral(
    d: &DensityEnclosure,
    phi: &FourierVector,
    phi_l2: &IvReal,
) -> Result<IvReal> {
    if phi.modes() != d.k {
        return Err(Error::Dimension {
            expected: d.k,
            got: phi.modes(),
        });
    }
    let pair = pairing(phi, &d.g);
    let err = phi_l2.mul(&d.e).mag();
    Ok(pair
        .re()
        .add(&IvReal::symmetric(pair.im().mag()))
        .add(&IvReal::symmetric(err)))
}
