//! Rectangular complex intervals.

use crate::interval::IvReal;

/// Complex enclosure: the true value lies in the box `re × im`.
#[derive(Clone, Copy, PartialEq)]
pub struct IvComplex {
    re: IvReal,
    im: IvReal,
}

impl std::fmt::Debug for IvComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?} + i{:?}", self.re, self.im)
    }
}

impl IvComplex {
    #[inline]
    pub fn new(re: IvReal, im: IvReal) -> Self {
        IvComplex { re, im }
    }

    #[inline]
    pub fn point(re: f64, im: f64) -> Self {
        IvComplex {
            re: IvReal::point(re),
            im: IvReal::point(im),
        }
    }

    #[inline]
    pub fn zero() -> Self {
        IvComplex {
            re: IvReal::zero(),
            im: IvReal::zero(),
        }
    }

    #[inline]
    pub fn one() -> Self {
        IvComplex {
            re: IvReal::one(),
            im: IvReal::zero(),
        }
    }

    #[inline]
    pub fn from_real(re: IvReal) -> Self {
        IvComplex {
            re,
            im: IvReal::zero(),
        }
    }

    #[inline]
    pub fn re(&self) -> IvReal {
        self.re
    }

    #[inline]
    pub fn im(&self) -> IvReal {
        self.im
    }

    #[inline]
    pub fn conj(&self) -> Self {
        IvComplex {
            re: self.re,
            im: self.im.neg(),
        }
    }

    #[inline]
    pub fn neg(&self) -> Self {
        IvComplex {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    /// Multiplication by i.
    #[inline]
    pub fn mul_i(&self) -> Self {
        IvComplex {
            re: self.im.neg(),
            im: self.re,
        }
    }

    #[inline]
    pub fn add(&self, o: &Self) -> Self {
        IvComplex {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }

    #[inline]
    pub fn sub(&self, o: &Self) -> Self {
        IvComplex {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }

    #[inline]
    pub fn mul(&self, o: &Self) -> Self {
        IvComplex {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    /// `(self·o, self·conj(o))` from a single set of the four real products.
    #[inline]
    pub fn mul_both(&self, o: &Self) -> (Self, Self) {
        let ac = self.re.mul(&o.re);
        let bd = self.im.mul(&o.im);
        let ad = self.re.mul(&o.im);
        let bc = self.im.mul(&o.re);
        (
            IvComplex {
                re: ac.sub(&bd),
                im: ad.add(&bc),
            },
            IvComplex {
                re: ac.add(&bd),
                im: bc.sub(&ad),
            },
        )
    }

    /// Multiplication by a real interval.
    #[inline]
    pub fn scale_iv(&self, s: &IvReal) -> Self {
        IvComplex {
            re: self.re.mul(s),
            im: self.im.mul(s),
        }
    }

    /// Multiplication by a point value.
    #[inline]
    pub fn scale(&self, v: f64) -> Self {
        IvComplex {
            re: self.re.scale(v),
            im: self.im.scale(v),
        }
    }

    /// Enclosure of |z|².
    #[inline]
    pub fn mag_sq(&self) -> IvReal {
        self.re.sqr().add(&self.im.sqr())
    }

    /// Upper bound on |z| over the box.
    #[inline]
    pub fn mag_upper(&self) -> f64 {
        IvReal::point(self.re.mag())
            .sqr()
            .add(&IvReal::point(self.im.mag()).sqr())
            .sqrt()
            .hi()
    }

    #[inline]
    pub fn contains(&self, re: f64, im: f64) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }

    #[inline]
    pub fn hull(&self, o: &Self) -> Self {
        IvComplex {
            re: self.re.hull(&o.re),
            im: self.im.hull(&o.im),
        }
    }

    /// Midpoint as a complex pair.
    #[inline]
    pub fn mid(&self) -> (f64, f64) {
        (self.re.mid(), self.im.mid())
    }

    /// Largest of the two component widths.
    #[inline]
    pub fn width_max(&self) -> f64 {
        self.re.width().max(self.im.width())
    }
}

impl std::ops::Add for IvComplex {
    type Output = IvComplex;
    fn add(self, rhs: IvComplex) -> IvComplex {
        IvComplex::add(&self, &rhs)
    }
}

impl std::ops::Sub for IvComplex {
    type Output = IvComplex;
    fn sub(self, rhs: IvComplex) -> IvComplex {
        IvComplex::sub(&self, &rhs)
    }
}

impl std::ops::Mul for IvComplex {
    type Output = IvComplex;
    fn mul(self, rhs: IvComplex) -> IvComplex {
        IvComplex::mul(&self, &rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_products_exact()
    {
        let i = IvComplex::new(IvReal::zero(), IvReal::one());
        let m = i * i;
        assert!(m.re().is_point() && m.re().lo() == -1.0);
        assert!(m.im().is_point() && m.im().lo() == 0.0);
    }

    #[test]
    fn mag_upper_bounds() {
        let z = IvComplex::point(3.0, 4.0);
        let m = z.mag_upper();
        assert!(m >= 5.0 && m < 5.0 + 1e-14);
    }

    #[test]
    fn mul_both_matches_separate_products_bitwise() {
        let cases = [
            (
                IvComplex::new(IvReal::new(0.3, 0.31), IvReal::new(-1.2, -1.1)),
                IvComplex::new(IvReal::new(0.7, 0.72), IvReal::new(0.4, 0.45)),
            ),
            (
                IvComplex::point(1.0 / 3.0, -2.0 / 7.0),
                IvComplex::point(-5.0 / 11.0, 9.0 / 13.0),
            ),
            (
                IvComplex::new(IvReal::new(-1e-30, 1e30), IvReal::new(-2.5, 0.0)),
                IvComplex::new(IvReal::new(0.0, 1e-10), IvReal::new(-3.0, 4.0)),
            ),
        ];
        for (z, w) in cases {
            let (p, q) = z.mul_both(&w);
            let p2 = z.mul(&w);
            let q2 = z.mul(&w.conj());
            for (a, b) in [(p, p2), (q, q2)] {
                assert_eq!(a.re().lo().to_bits(), b.re().lo().to_bits());
                assert_eq!(a.re().hi().to_bits(), b.re().hi().to_bits());
                assert_eq!(a.im().lo().to_bits(), b.im().lo().to_bits());
                assert_eq!(a.im().hi().to_bits(), b.im().hi().to_bits());
            }
        }
    }
}
