//! Fourier coefficient vectors on [−1, 1] and the Gaussian mode multiplier.
//!
//! Convention: F(f)[k] = ½∫_{−1}^{1} f(x)·e^{−kπix} dx, modes k = −K..K,
//! Parseval ‖f‖²_{L²[−1,1]} = 2·Σ_k |F(f)[k]|². A probability density has
//! F(f)[0] = ½.

use num_complex::Complex64;

use crate::complex::IvComplex;
use crate::interval::IvReal;
use crate::maps::NoiseParams;
use crate::{Error, Result};

/// Interval Fourier coefficient vector, modes −K..K.
#[derive(Clone, Debug)]
pub struct FourierVector {
    k: usize,
    coeffs: Vec<IvComplex>,
    /// Marks vectors representing real-valued functions
    /// (coeffs[−k] = conj(coeffs[k]) up to widening).
    pub real_valued: bool,
}

impl FourierVector {
    pub fn zeros(k: usize) -> Self {
        FourierVector {
            k,
            coeffs: vec![IvComplex::zero(); 2 * k + 1],
            real_valued: true,
        }
    }

    /// The unit-mass vector: coeffs[0] = ½, everything else 0.
    pub fn unit_mass(k: usize) -> Self {
        let mut v = Self::zeros(k);
        v.set(0, IvComplex::point(0.5, 0.0));
        v
    }

    pub fn from_coeffs(k: usize, coeffs: Vec<IvComplex>, real_valued: bool) -> Result<Self> {
        if coeffs.len() != 2 * k + 1 {
            return Err(Error::Dimension {
                expected: 2 * k + 1,
                got: coeffs.len(),
            });
        }
        Ok(FourierVector {
            k,
            coeffs,
            real_valued,
        })
    }

    #[inline]
    pub fn modes(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn dim(&self) -> usize {
        2 * self.k + 1
    }

    /// Coefficient of mode `m`, m ∈ [−K, K].
    #[inline]
    pub fn get(&self, m: i64) -> &IvComplex {
        &self.coeffs[(m + self.k as i64) as usize]
    }

    #[inline]
    pub fn set(&mut self, m: i64, v: IvComplex) {
        self.coeffs[(m + self.k as i64) as usize] = v;
    }

    #[inline]
    pub fn as_slice(&self) -> &[IvComplex] {
        &self.coeffs
    }

    /// ‖f‖_{L²[−1,1]} = √(2·Σ_k |c_k|²) as a rigorous interval.
    pub fn norm_l2(&self) -> IvReal {
        let mut acc = IvReal::zero();
        for c in &self.coeffs {
            acc = acc.add(&c.mag_sq());
        }
        acc.scale(2.0).sqrt()
    }

    /// Same norm restricted to the zero-mean part (modes k ≠ 0).
    pub fn norm_l2_zero_mean(&self) -> IvReal {
        let mut acc = IvReal::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i == self.k {
                continue;
            }
            acc = acc.add(&c.mag_sq());
        }
        acc.scale(2.0).sqrt()
    }

    /// Midpoint coefficients for floating-point previews.
    pub fn midpoint(&self) -> Vec<Complex64> {
        self.coeffs
            .iter()
            .map(|z| {
                let (re, im) = z.mid();
                Complex64::new(re, im)
            })
            .collect()
    }

    /// Largest endpoint width across all coefficients.
    pub fn max_width(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|z| z.width_max())
            .fold(0.0, f64::max)
    }
}

/// The annealing multiplier D_σ[k] = e^{−σ²k²π²/2}, k = −K..K, index k+K.
///
/// Entry k = 0 is exactly [1,1]; entries are even in k; underflow keeps a
/// strictly positive upper endpoint.
pub fn gaussian_multiplier(n: NoiseParams, k: usize) -> Vec<IvReal> {
    let sigma2 = IvReal::point(n.sigma).sqr();
    let pi2 = IvReal::pi().sqr();
    let mut half: Vec<IvReal> = Vec::with_capacity(k + 1);
    half.push(IvReal::one());
    for m in 1..=k {
        let m2 = IvReal::point((m * m) as f64); // exact for m ≤ 2^26
        let exponent = sigma2.mul(&m2).mul(&pi2).scale(0.5).neg();
        half.push(exponent.exp());
    }
    let mut out = Vec::with_capacity(2 * k + 1);
    for m in (1..=k).rev() {
        out.push(half[m]);
    }
    out.extend(half);
    out
}

/// Tail bound Γ_{σ,K} = (σ√(2π))⁻¹·e^{−σ²K²π²/2}, upper endpoint > 0.
pub fn tail_gamma(n: NoiseParams, k: usize) -> IvReal {
    assert!(k >= 1, "tail bound needs K >= 1");
    let peak = crate::maps::kernel_constants(n).rho0;
    let sigma2 = IvReal::point(n.sigma).sqr();
    let k2 = IvReal::point((k * k) as f64);
    let decay = sigma2.mul(&k2).mul(&IvReal::pi().sqr()).scale(0.5).neg().exp();
    let g = peak.mul(&decay);
    // keep the upper endpoint strictly positive even after underflow
    if g.hi() <= 0.0 {
        IvReal::new(0.0, f64::from_bits(1))
    } else {
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplier_basics() {
        let n = NoiseParams::new(0.2).unwrap();
        let d = gaussian_multiplier(n, 16);
        // k = 0 exact one
        assert!(d[16].is_point() && d[16].lo() == 1.0);
        // even symmetry
        for m in 1..=16usize {
            assert_eq!(d[16 + m].lo(), d[16 - m].lo());
            assert_eq!(d[16 + m].hi(), d[16 - m].hi());
        }
        // monotone decreasing magnitude in |k|
        for m in 1..16usize {
            assert!(d[16 + m].hi() > d[16 + m + 1].hi());
        }
        // 50-digit oracle: exp(−0.04·π²/2) = 0.820868717415539937…
        assert!(d[17].lo() <= 0.8208687174155399 && d[17].hi() >= 0.82086871741554);
    }

    #[test]
    fn multiplier_underflow_positive() {
        let n = NoiseParams::new(0.2).unwrap();
        let d = gaussian_multiplier(n, 128);
        let last = d[128 + 128];
        assert!(last.lo() >= 0.0);
        assert!(last.hi() > 0.0);
        assert!(last.hi() <= 1e-300);
    }

    #[test]
    fn gamma_monotone() {
        let n = NoiseParams::new(0.2).unwrap();
        let mut prev = f64::INFINITY;
        for k in [1usize, 4, 16, 64, 128, 256] {
            let g = tail_gamma(n, k);
            assert!(g.hi() > 0.0);
            assert!(g.hi() <= prev);
            prev = g.hi();
        }
        // Γ < ρ_σ(0)
        let rho0 = crate::maps::kernel_constants(n).rho0;
        assert!(tail_gamma(n, 1).hi() < rho0.hi());
    }

    #[test]
    fn parseval_unit_mass() {
        let v = FourierVector::unit_mass(8);
        // ‖½‖² over [−1,1] = 2·(¼) = ½ → norm = 1/√2
        let norm = v.norm_l2();
        assert!(norm.contains(std::f64::consts::FRAC_1_SQRT_2));
        assert!(v.norm_l2_zero_mean().hi() == 0.0);
    }
}
