//! Interval matrices and the certified norm bounds used by the mixing
//! certificates.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::complex::IvComplex;
use crate::interval::IvReal;
use crate::{Error, Result};

/// Dense square complex interval matrix, row-major.
#[derive(Clone)]
pub struct IvMatrix {
    n: usize,
    data: Vec<IvComplex>,
}

impl IvMatrix {
    pub fn zeros(n: usize) -> Self {
        IvMatrix {
            n,
            data: vec![IvComplex::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = IvComplex::one();
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> IvComplex) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        IvMatrix { n, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &IvComplex {
        &self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: IvComplex) {
        self.data[i * self.n + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[IvComplex] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [IvComplex] {
        &mut self.data[i * self.n..(i + 1) * self.n]
    }

    /// Interval matrix product, parallel over rows.
    pub fn mul(&self, other: &IvMatrix) -> Result<IvMatrix> {
        if self.n != other.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: other.n,
            });
        }
        let n = self.n;
        let mut out = vec![IvComplex::zero(); n * n];
        out.par_chunks_mut(n).enumerate().for_each(|(i, orow)| {
            let arow = self.row(i);
            for (k, aik) in arow.iter().enumerate() {
                // skip exact zeros (sparse-ish rows after Gaussian damping)
                if aik.re().lo() == 0.0
                    && aik.re().hi() == 0.0
                    && aik.im().lo() == 0.0
                    && aik.im().hi() == 0.0
                {
                    continue;
                }
                let brow = other.row(k);
                for (o, b) in orow.iter_mut().zip(brow.iter()) {
                    *o = o.add(&aik.mul(b));
                }
            }
        });
        Ok(IvMatrix { n, data: out })
    }

    /// Interval matrix–vector product.
    pub fn matvec(&self, v: &[IvComplex]) -> Result<Vec<IvComplex>> {
        if v.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: v.len(),
            });
        }
        Ok((0..self.n)
            .map(|i| {
                let mut acc = IvComplex::zero();
                for (a, x) in self.row(i).iter().zip(v.iter()) {
                    acc = acc.add(&a.mul(x));
                }
                acc
            })
            .collect())
    }

    /// Midpoint matrix for floating-point preview computations.
    pub fn midpoint(&self) -> Vec<Complex64> {
        self.data
            .iter()
            .map(|z| {
                let (re, im) = z.mid();
                Complex64::new(re, im)
            })
            .collect()
    }

    /// Upper bound on the Frobenius norm of every point matrix inside.
    pub fn frobenius_upper(&self) -> f64 {
        let mut acc = IvReal::zero();
        for z in &self.data {
            acc = acc.add(&z.mag_sq());
        }
        acc.sqrt().hi()
    }

    /// Upper bound on the induced 1-norm (max column sum of magnitudes).
    pub fn norm1_upper(&self) -> f64 {
        let n = self.n;
        let mut best = 0.0f64;
        for j in 0..n {
            let mut acc = IvReal::zero();
            for i in 0..n {
                acc = acc.add(&IvReal::point(self.get(i, j).mag_upper()));
            }
            best = best.max(acc.hi());
        }
        best
    }

    /// Upper bound on the induced ∞-norm (max row sum of magnitudes).
    pub fn norminf_upper(&self) -> f64 {
        let mut best = 0.0f64;
        for i in 0..self.n {
            let mut acc = IvReal::zero();
            for z in self.row(i) {
                acc = acc.add(&IvReal::point(z.mag_upper()));
            }
            best = best.max(acc.hi());
        }
        best
    }

    /// Upper bound on the spectral norm of every point matrix inside:
    /// min(Frobenius, sqrt(‖·‖₁·‖·‖_∞)), all magnitudes as upper endpoints.
    pub fn norm2_upper(&self) -> IvReal {
        let fro = self.frobenius_upper();
        let holder = IvReal::point(self.norm1_upper())
            .mul(&IvReal::point(self.norminf_upper()))
            .sqrt()
            .hi();
        IvReal::point(fro.min(holder))
    }
}

/// Floating matrix–vector product for power iteration candidates.
pub fn matvec_f64(a: &[Complex64], n: usize, v: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(a.len(), n * n);
    assert_eq!(v.len(), n);
    (0..n)
        .map(|i| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (x, y) in a[i * n..(i + 1) * n].iter().zip(v.iter()) {
                acc += x * y;
            }
            acc
        })
        .collect()
}

/// ℓ² norm of the difference of two floating vectors.
pub fn l2_change(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_norm_bound() {
        let m = IvMatrix::identity(2);
        let b = m.norm2_upper().hi();
        assert!((1.0..=std::f64::consts::SQRT_2).contains(&b));
    }

    #[test]
    fn zero_norm() {
        let m = IvMatrix::zeros(3);
        assert_eq!(m.norm2_upper().hi(), 0.0);
    }

    #[test]
    fn nilpotent_jordan_block() {
        let mut m = IvMatrix::zeros(2);
        m.set(0, 1, IvComplex::one());
        assert_eq!(m.norm2_upper().hi(), 1.0);
        let sq = m.mul(&m).unwrap();
        assert_eq!(sq.norm2_upper().hi(), 0.0);
    }

    #[test]
    fn matvec_matches_float() {
        let m = IvMatrix::from_fn(3, |i, j| IvComplex::point((i + j) as f64, (i as f64) - (j as f64)));
        let v: Vec<IvComplex> = (0..3).map(|k| IvComplex::point(k as f64 + 0.5, -(k as f64))).collect();
        let iv = m.matvec(&v).unwrap();
        let vf: Vec<Complex64> = v.iter().map(|z| {
            let (re, im) = z.mid();
            Complex64::new(re, im)
        }).collect();
        let fl = matvec_f64(&m.midpoint(), 3, &vf);
        for (a, b) in iv.iter().zip(fl.iter()) {
            assert!(a.re().contains(b.re) || (a.re().lo() - b.re).abs() < 1e-12);
            assert!(a.im().contains(b.im) || (a.im().lo() - b.im).abs() < 1e-12);
        }
    }
}
