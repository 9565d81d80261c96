//! The interval map family T_{α,β}(x) = β − (1+β)|x|^α, the periodic fold
//! τ(x) = x − 2⌊(x+1)/2⌋, the log-derivative observable, and the closed-form
//! Gaussian kernel constants feeding the certification bounds.

use crate::interval::IvReal;
use crate::taylor::Tm;
use crate::{Error, Result};

/// Parameters of the map family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MapParams {
    pub alpha: f64,
    pub beta: f64,
}

impl MapParams {
    /// Validated constructor: α ≥ 1, −1 < β ≤ 1.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha >= 1.0) || !alpha.is_finite() {
            return Err(Error::Domain("alpha must satisfy alpha >= 1"));
        }
        if !(beta > -1.0 && beta <= 1.0) {
            return Err(Error::Domain("beta must satisfy -1 < beta <= 1"));
        }
        Ok(MapParams { alpha, beta })
    }
}

/// Gaussian noise level.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseParams {
    pub sigma: f64,
}

impl NoiseParams {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::Domain("sigma must be positive and finite"));
        }
        Ok(NoiseParams { sigma })
    }
}

/// Maps the operator machinery can discretize. `Identity` and `Constant`
/// are analytic test fixtures whose transfer matrices are known exactly;
/// `Tent` has matrix entries with closed-form one-dimensional integrals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TestMap {
    Family(MapParams),
    Identity,
    Constant(f64),
    Tent,
}

impl TestMap {
    /// Whether T(−y) = T(y); even maps admit a half-domain assembly path.
    pub fn is_even(&self) -> bool {
        !matches!(self, TestMap::Identity)
    }

    /// Interval evaluation of T on x ⊆ [−1,1].
    pub fn eval(&self, x: &IvReal) -> IvReal {
        match self {
            TestMap::Family(p) => map_eval(*p, x),
            TestMap::Identity => *x,
            TestMap::Constant(c) => IvReal::point(*c),
            TestMap::Tent => IvReal::one().sub(&x.abs().scale(2.0)),
        }
    }

    /// Floating-point evaluation of T (simulation path; no enclosure).
    pub fn eval_f64(&self, x: f64) -> f64 {
        match self {
            TestMap::Family(p) => p.beta - (1.0 + p.beta) * x.abs().powf(p.alpha),
            TestMap::Identity => x,
            TestMap::Constant(c) => *c,
            TestMap::Tent => 1.0 - 2.0 * x.abs(),
        }
    }

    /// Floating-point |T′| (simulation path; −∞ after `ln` marks the
    /// observable singularity).
    pub fn deriv_mag_f64(&self, x: f64) -> f64 {
        match self {
            TestMap::Family(p) => p.alpha * (1.0 + p.beta) * x.abs().powf(p.alpha - 1.0),
            TestMap::Identity => 1.0,
            TestMap::Constant(_) => 0.0,
            TestMap::Tent => 2.0,
        }
    }

    /// Interval enclosure of |T'| on x.
    pub fn deriv_mag(&self, x: &IvReal) -> IvReal {
        match self {
            TestMap::Family(p) => {
                let opb = IvReal::one().add(&IvReal::point(p.beta));
                IvReal::point(p.alpha)
                    .mul(&opb)
                    .mul(&x.abs_pow(p.alpha - 1.0))
            }
            TestMap::Identity => IvReal::one(),
            TestMap::Constant(_) => IvReal::zero(),
            TestMap::Tent => IvReal::point(2.0),
        }
    }

    /// Taylor data of T on the panel `[y0 - r, y0 + r]` in the normalized
    /// variable τ = t/r ∈ [−1, 1]: the interval value T(y0) and a Taylor
    /// model (radius 1) of the increment `T(y0 + rτ) − T(y0)` with a
    /// structurally zero constant coefficient. Normalization keeps the
    /// coefficients O(1) at every bisection depth. The panel must avoid 0
    /// for the family map (|y|^α is not smooth there).
    pub fn taylor_increment(&self, y0: f64, r: f64, degree: usize) -> (IvReal, Tm) {
        match self {
            TestMap::Identity => {
                let mut c = vec![IvReal::zero(); degree + 1];
                c[1] = IvReal::point(r);
                (IvReal::point(y0), Tm::from_coeffs(c, IvReal::zero(), 1.0))
            }
            TestMap::Constant(v) => (
                IvReal::point(*v),
                Tm::from_coeffs(vec![IvReal::zero(); degree + 1], IvReal::zero(), 1.0),
            ),
            TestMap::Tent => {
                let mut c = vec![IvReal::zero(); degree + 1];
                // T(y) = 1 − 2|y|: slope ∓2 depending on the sign of the panel
                c[1] = IvReal::point(if y0 > 0.0 { -2.0 * r } else { 2.0 * r });
                let t0 = IvReal::one().sub(&IvReal::point(y0).abs().scale(2.0));
                (t0, Tm::from_coeffs(c, IvReal::zero(), 1.0))
            }
            TestMap::Family(p) => family_taylor(*p, y0, r, degree),
        }
    }

    /// Float estimate of the normalized Lagrange remainder magnitude of the
    /// degree-`degree` increment model on `[y0−r, y0+r]` (family map only;
    /// exactly 0 for the other variants). Used by the assembler's leaf
    /// criterion; rigor comes from the interval remainder downstream.
    pub fn remainder_estimate(&self, y0: f64, r: f64, degree: usize) -> f64 {
        match self {
            TestMap::Family(p) => {
                let yabs = y0.abs();
                let xi = yabs - r;
                if xi <= 0.0 {
                    return f64::INFINITY;
                }
                // |C(α,d+1)|·ξ^α·(r/ξ)^{d+1}·(1+β)
                let mut binom = 1.0f64;
                for k in 0..=degree {
                    binom *= (p.alpha - k as f64) / (k as f64 + 1.0);
                }
                binom.abs() * xi.powf(p.alpha) * (r / xi).powi(degree as i32 + 1)
                    * (1.0 + p.beta)
            }
            _ => 0.0,
        }
    }
}

/// T_{α,β}(x) = β − (1+β)|x|^α on interval input.
pub fn map_eval(p: MapParams, x: &IvReal) -> IvReal {
    let opb = IvReal::one().add(&IvReal::point(p.beta));
    IvReal::point(p.beta).sub(&opb.mul(&x.abs_pow(p.alpha)))
}

/// Periodic fold τ(x) = x − 2⌊(x+1)/2⌋ ∈ [−1, 1).
///
/// Intervals of width < 2 lying strictly inside one period
/// `[2k−1, 2k+1)` translate by `−2k`; anything crossing (or touching the
/// right end of) a fold point collapses to the hull [−1, 1]. The period
/// membership test compares against the exact integers 2k∓1, so a
/// misrounded floating floor cannot produce a wrong translation.
pub fn boundary_fold(x: &IvReal) -> IvReal {
    let full = IvReal::new(-1.0, 1.0);
    let (a, b) = (x.lo(), x.hi());
    if !a.is_finite() || !b.is_finite() || b - a >= 2.0 || a.abs() > 4.0e15 || b.abs() > 4.0e15 {
        return full;
    }
    let k0 = ((a + 1.0) / 2.0).floor();
    for dk in [0.0, -1.0, 1.0] {
        let k = k0 + dk;
        let lo_edge = 2.0 * k - 1.0; // exact (|k| < 2^52)
        let hi_edge = 2.0 * k + 1.0; // exact
        if lo_edge <= a && b < hi_edge {
            if k == 0.0 {
                return *x;
            }
            let t = x.sub(&IvReal::point(2.0 * k));
            // true range ⊆ [−1, 1); clip the outward rounding ticks
            return t.intersect(&full).unwrap_or(full);
        }
    }
    full
}

/// ln|T'_{α,β}(x)| = ln(α(1+β)) + (α−1)·ln|x|.
///
/// Errors when 0 ∈ x with α > 1 (the observable diverges there).
pub fn log_abs_derivative(p: MapParams, x: &IvReal) -> Result<IvReal> {
    let opb = IvReal::one().add(&IvReal::point(p.beta));
    let lead = IvReal::point(p.alpha).mul(&opb).ln()?;
    if p.alpha == 1.0 {
        return Ok(lead);
    }
    if x.contains(0.0) {
        return Err(Error::Domain(
            "log-derivative singularity: 0 in argument with alpha > 1",
        ));
    }
    let am1 = IvReal::point(p.alpha).sub(&IvReal::one());
    Ok(lead.add(&am1.mul(&x.abs().ln()?)))
}

/// Doeblin minorization constant c = (σ√(2π))⁻¹·e^{−1/(2σ²)}.
///
/// For σ below ≈ 0.026 the exponential underflows and the returned lower
/// bound is 0 (the enclosure stays valid; the a-priori contraction built
/// from it merely degenerates to θ = 1).
pub fn doeblin_constant(n: NoiseParams) -> IvReal {
    let sigma = IvReal::point(n.sigma);
    let peak = gauss_peak(&sigma);
    let inner = sigma
        .sqr()
        .scale(2.0)
        .recip()
        .expect("sigma > 0")
        .neg()
        .exp();
    peak.mul(&inner)
}

/// ρ_σ(0) = (σ√(2π))⁻¹.
fn gauss_peak(sigma: &IvReal) -> IvReal {
    sigma
        .mul(&IvReal::pi().scale(2.0).sqrt())
        .recip()
        .expect("sigma > 0")
}

/// Closed-form Gaussian kernel constants.
#[derive(Clone, Copy, Debug)]
pub struct KernelConstants {
    /// ρ_σ(0) = (σ√(2π))⁻¹, the kernel peak.
    pub rho0: IvReal,
    /// ‖ρ_σ‖_{L²(ℝ)} = (2σ√π)^{−1/2}.
    pub l2norm: IvReal,
}

pub fn kernel_constants(n: NoiseParams) -> KernelConstants {
    let sigma = IvReal::point(n.sigma);
    let rho0 = gauss_peak(&sigma);
    let l2norm = sigma
        .scale(2.0)
        .mul(&IvReal::pi().sqrt())
        .recip()
        .expect("sigma > 0")
        .sqrt();
    KernelConstants { rho0, l2norm }
}

/// Υ = √2·((ln(α(1+β)) − (α−1))² + (α−1)²)^{1/2}, the L² norm of the
/// observable over the invariant interval.
pub fn upsilon(p: MapParams) -> IvReal {
    let opb = IvReal::one().add(&IvReal::point(p.beta));
    let l = IvReal::point(p.alpha)
        .mul(&opb)
        .ln()
        .expect("alpha(1+beta) > 0");
    let a = IvReal::point(p.alpha).sub(&IvReal::one());
    l.sub(&a).sqr().add(&a.sqr()).scale(2.0).sqrt()
}

/// Binomial-series Taylor data for the family map on a panel avoiding zero,
/// in the normalized variable τ = t/r.
///
/// For y0 > 0: (y0+rτ)^α = Σ_n C(α,n)·y0^{α−n}·rⁿ·τⁿ with Lagrange remainder
/// C(α,d+1)·ξ^α·(r/ξ)^{d+1}·τ^{d+1}, ξ ∈ [y0−r, y0+r] (the ratio form never
/// overflows, unlike raw ξ^{α−d−1}). For y0 < 0 the same series at |y0| with
/// odd coefficients negated. The increment drops the n = 0 term.
fn family_taylor(p: MapParams, y0: f64, r: f64, degree: usize) -> (IvReal, Tm) {
    let pos = y0 > 0.0;
    let yabs = y0.abs();
    assert!(
        yabs - r > 0.0,
        "family panel must not touch the singular point 0"
    );
    let yiv = IvReal::point(yabs);
    let riv = IvReal::point(r);
    let ratio = riv.div(&yiv).expect("|y0| > 0");
    let alpha = IvReal::point(p.alpha);
    let neg_opb = IvReal::one().add(&IvReal::point(p.beta)).neg();

    // b[n] = C(α,n)·|y0|^{α−n}·rⁿ; b[0] = |y0|^α; all O(|y0|^α)
    let mut bn = yiv.abs_pow(p.alpha);
    // running C(α,n), kept for the Lagrange remainder
    let mut binom = IvReal::one();
    let mut c = vec![IvReal::zero(); degree + 1];
    for n in 0..degree {
        let nf = n as f64;
        let step = alpha.sub(&IvReal::point(nf));
        let np1 = IvReal::point(nf + 1.0);
        bn = bn
            .mul(&step)
            .mul(&ratio)
            .div(&np1)
            .expect("n+1 > 0");
        binom = binom.mul(&step).div(&np1).expect("n+1 > 0");
        let sign = if pos || (n + 1) % 2 == 0 { 1.0 } else { -1.0 };
        c[n + 1] = neg_opb.mul(&bn).scale(sign);
    }
    // Lagrange remainder: −(1+β)·C(α,d+1)·ξ^α·(r/ξ)^{d+1}·τ^{d+1}, |τ| ≤ 1
    let dd = degree as f64;
    binom = binom
        .mul(&alpha.sub(&IvReal::point(dd)))
        .div(&IvReal::point(dd + 1.0))
        .expect("positive");
    let xi = IvReal::new(yabs - r, yabs + r);
    let rxi = riv.div(&xi).expect("xi > 0");
    let rem_mag = neg_opb
        .mul(&binom)
        .mul(&xi.abs_pow(p.alpha))
        .mul(&rxi.pow_int(degree as u32 + 1))
        .mag();
    let rem = IvReal::symmetric(rem_mag);

    let t0 = IvReal::point(p.beta)
        .sub(&IvReal::one().add(&IvReal::point(p.beta)).mul(&yiv.abs_pow(p.alpha)));
    (t0, Tm::from_coeffs(c, rem, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_eval_examples() {
        let p = MapParams::new(3.0, 1.0).unwrap();
        assert!(map_eval(p, &IvReal::point(0.5)).contains(0.75));
        assert!(map_eval(p, &IvReal::point(0.0)).contains(1.0));
        assert!(map_eval(p, &IvReal::point(-1.0)).contains(-1.0));
        assert!(map_eval(p, &IvReal::point(1.0)).contains(-1.0));
    }

    #[test]
    fn fold_examples() {
        assert!(boundary_fold(&IvReal::point(1.5)).contains(-0.5));
        let id = boundary_fold(&IvReal::point(0.3));
        assert!(id.contains(0.3) && id.width() == 0.0);
        let crossing = boundary_fold(&IvReal::new(0.9, 1.1));
        assert_eq!((crossing.lo(), crossing.hi()), (-1.0, 1.0));
        // idempotence on points
        for x in [-3.7, -1.0, 0.0, 0.9999, 1.0, 2.0, 257.25] {
            let f1 = boundary_fold(&IvReal::point(x));
            let f2 = boundary_fold(&f1);
            assert_eq!((f1.lo(), f1.hi()), (f2.lo(), f2.hi()), "x={x}");
            assert!(f1.lo() >= -1.0 && f1.hi() <= 1.0);
        }
    }

    #[test]
    fn log_deriv_examples() {
        let p = MapParams::new(3.0, 1.0).unwrap();
        let v = log_abs_derivative(p, &IvReal::point(1.0)).unwrap();
        assert!(v.contains(6.0f64.ln()));
        assert!(log_abs_derivative(p, &IvReal::point(0.0)).is_err());
        let p1 = MapParams::new(1.0, 0.5).unwrap();
        let c = log_abs_derivative(p1, &IvReal::new(-0.5, 0.5)).unwrap();
        assert!(c.contains(1.5f64.ln()));
    }

    #[test]
    fn doeblin_below_peak() {
        for sigma in [0.05, 0.2, 0.5, 1.0, 2.0, 4.0] {
            let n = NoiseParams::new(sigma).unwrap();
            let c = doeblin_constant(n);
            let peak = kernel_constants(n).rho0;
            assert!(c.lo() >= 0.0);
            assert!(c.hi() < peak.lo(), "sigma={sigma}");
            if sigma >= 0.05 {
                assert!(c.lo() > 0.0, "sigma={sigma} should not underflow");
            }
        }
    }

    #[test]
    fn upsilon_special_cases() {
        let z = upsilon(MapParams::new(1.0, 0.0).unwrap());
        assert!(z.contains(0.0) && z.hi() < 1e-300);
        let u = upsilon(MapParams::new(1.0, 1.0).unwrap());
        let expect = std::f64::consts::SQRT_2 * std::f64::consts::LN_2;
        assert!(u.contains(expect), "{u:?} vs {expect}");
    }

    #[test]
    fn family_taylor_integer_alpha_terminates() {
        // α=3, β=1, y0=0.5: T(y0+rτ) − T(y0) = −1.5rτ − 3r²τ² − 2r³τ³ exactly
        let map = TestMap::Family(MapParams::new(3.0, 1.0).unwrap());
        let r = 1.0 / 64.0;
        let (t0, tm) = map.taylor_increment(0.5, r, 8);
        assert!(t0.contains(0.75));
        assert!(tm.c[1].contains(-1.5 * r) && tm.c[1].width() < 2e-15);
        assert!(tm.c[2].contains(-3.0 * r * r));
        assert!(tm.c[3].contains(-2.0 * r * r * r));
        for n in 4..=8 {
            assert!(tm.c[n].contains(0.0) && tm.c[n].width() < 1e-16);
        }
        assert!(tm.rem.mag() < 1e-30);
    }

    #[test]
    fn family_taylor_contains_true_increment() {
        let p = MapParams::new(2.7, 0.4).unwrap();
        let map = TestMap::Family(p);
        for &(y0, r) in &[(0.375f64, 1.0 / 128.0), (0.8125, 1.0 / 64.0), (-0.25, 1.0 / 256.0)] {
            let (t0, tm) = map.taylor_increment(y0, r, 12);
            // evaluate TM at τ = ±1 and compare with direct interval eval
            for s in [-1.0f64, 1.0] {
                let t = IvReal::point(s);
                let mut acc = IvReal::zero();
                for n in (0..=12).rev() {
                    acc = acc.mul(&t).add(&tm.c[n]);
                }
                acc = acc.add(&tm.rem).add(&t0);
                let direct = map.eval(&IvReal::point(y0 + s * r));
                assert!(
                    acc.intersect(&direct).is_some(),
                    "y0={y0} s={s}: {acc:?} vs {direct:?}"
                );
            }
        }
    }

    #[test]
    fn family_taylor_deep_panel_no_overflow() {
        // near-singular exponent on a panel adjacent to the deep stub:
        // coefficients and remainder must stay finite and tiny
        let p = MapParams::new(1.1, 0.9).unwrap();
        let map = TestMap::Family(p);
        let r = 2f64.powi(-59);
        let y0 = 3.0 * r; // panel [2r, 4r], q=1 at depth 58
        let (_, tm) = map.taylor_increment(y0, r, 18);
        for c in &tm.c {
            assert!(c.lo().is_finite() && c.hi().is_finite());
        }
        assert!(tm.rem.mag().is_finite());
        assert!(tm.bound_mag().is_finite());
    }
}
