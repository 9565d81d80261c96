//! Outward-rounded real interval arithmetic on IEEE-754 binary64.
//!
//! Rounding never touches the hardware rounding mode. Basic operations use
//! error-free transformations (two-sum, fma residuals) to decide whether a
//! round-to-nearest result is exact and, if not, in which direction to step
//! one representable value outward. Elementary functions go through libm and
//! are widened by two representable steps on each side, a documented margin
//! for libm kernels whose error is at most 2 ulp.
//!
//! Conventions:
//! - endpoints are never NaN; `lo <= hi` always holds;
//! - `+inf`/`-inf` appear only as explicit overflow endpoints;
//! - enclosures of strictly positive quantities may round `lo` down to 0 but
//!   `hi` never rounds down to 0 (underflow steps `hi` up to the smallest
//!   positive subnormal instead).

use crate::{Error, Result};

/// Closed real interval with binary64 endpoints.
#[derive(Clone, Copy, PartialEq)]
pub struct IvReal {
    lo: f64,
    hi: f64,
}

impl std::fmt::Debug for IvReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl std::fmt::Display for IvReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[inline]
fn step_down(x: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        x
    } else {
        x.next_down()
    }
}

#[inline]
fn step_up(x: f64) -> f64 {
    if x == f64::INFINITY {
        x
    } else {
        x.next_up()
    }
}

/// Round-to-nearest sum with the two-sum residual; `(s, e)` satisfies
/// `a + b = s + e` exactly when `s` is finite.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Lower bound of the exact `a + b`.
#[inline]
fn add_lo(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if !s.is_finite() {
        return if s == f64::NEG_INFINITY { s } else { f64::MAX };
    }
    if e < 0.0 {
        step_down(s)
    } else {
        s
    }
}

/// Upper bound of the exact `a + b`.
#[inline]
fn add_hi(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if !s.is_finite() {
        return if s == f64::INFINITY { s } else { f64::MIN };
    }
    if e > 0.0 {
        step_up(s)
    } else {
        s
    }
}

/// Lower bound of the exact `a * b` (inputs finite, product may overflow).
#[inline]
fn mul_lo(a: f64, b: f64) -> f64 {
    let p = a * b;
    if p.is_nan() {
        // only 0 * inf reaches here; the exact set is {0}
        return 0.0;
    }
    if !p.is_finite() {
        return if p == f64::NEG_INFINITY { p } else { f64::MAX };
    }
    let e = a.mul_add(b, -p);
    if e < 0.0 {
        step_down(p)
    } else {
        p
    }
}

/// Upper bound of the exact `a * b`.
#[inline]
fn mul_hi(a: f64, b: f64) -> f64 {
    let p = a * b;
    if p.is_nan() {
        return 0.0;
    }
    if !p.is_finite() {
        return if p == f64::INFINITY { p } else { f64::MIN };
    }
    let e = a.mul_add(b, -p);
    if e > 0.0 {
        step_up(p)
    } else {
        p
    }
}

/// Upper bound of the exact `a * b`, for callers outside this module that
/// maintain scalar upper-bound ladders (e.g. powers of a panel radius).
#[inline]
pub(crate) fn mul_hi_pub(a: f64, b: f64) -> f64 {
    mul_hi(a, b)
}

/// Lower bound of the exact `a / b` (`b != 0`).
#[inline]
fn div_lo(a: f64, b: f64) -> f64 {
    let q = a / b;
    if !q.is_finite() {
        return if q == f64::NEG_INFINITY { q } else { f64::MAX };
    }
    // a - q*b has the sign of the rounding error times sign(b)
    let r = q.mul_add(-b, a);
    if (r < 0.0 && b > 0.0) || (r > 0.0 && b < 0.0) {
        step_down(q)
    } else {
        q
    }
}

/// Upper bound of the exact `a / b`.
#[inline]
fn div_hi(a: f64, b: f64) -> f64 {
    let q = a / b;
    if !q.is_finite() {
        return if q == f64::INFINITY { q } else { f64::MIN };
    }
    let r = q.mul_add(-b, a);
    if (r > 0.0 && b > 0.0) || (r < 0.0 && b < 0.0) {
        step_up(q)
    } else {
        q
    }
}

impl IvReal {
    /// Interval from endpoints; panics on NaN or inverted endpoints.
    #[inline]
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(!lo.is_nan() && !hi.is_nan(), "NaN interval endpoint");
        assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        IvReal { lo, hi }
    }

    /// Degenerate interval `[v, v]`.
    #[inline]
    pub fn point(v: f64) -> Self {
        assert!(!v.is_nan(), "NaN interval point");
        IvReal { lo: v, hi: v }
    }

    #[inline]
    pub fn zero() -> Self {
        IvReal { lo: 0.0, hi: 0.0 }
    }

    #[inline]
    pub fn one() -> Self {
        IvReal { lo: 1.0, hi: 1.0 }
    }

    /// Symmetric interval `[-r, r]` from a radius upper bound.
    #[inline]
    pub fn symmetric(r: f64) -> Self {
        assert!(r >= 0.0 && !r.is_nan());
        IvReal { lo: -r, hi: r }
    }

    /// Enclosure of π.
    #[inline]
    pub fn pi() -> Self {
        // 3.141592653589793 rounds π down
        IvReal {
            lo: std::f64::consts::PI,
            hi: std::f64::consts::PI.next_up(),
        }
    }

    /// Enclosure of √2.
    #[inline]
    pub fn sqrt2() -> Self {
        Self::point(2.0).sqrt()
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn mid(&self) -> f64 {
        if self.lo == self.hi {
            return self.lo;
        }
        let m = 0.5 * (self.lo + self.hi);
        if m.is_finite() {
            m
        } else {
            0.5 * self.lo + 0.5 * self.hi
        }
    }

    #[inline]
    pub fn width(&self) -> f64 {
        // rounded up so reported widths are themselves bounds
        add_hi(self.hi, -self.lo)
    }

    /// Largest absolute value over the interval.
    #[inline]
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest absolute value over the interval.
    #[inline]
    pub fn mig(&self) -> f64 {
        if self.contains(0.0) {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    #[inline]
    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    #[inline]
    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    #[inline]
    pub fn contains_iv(&self, other: &IvReal) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    #[inline]
    pub fn hull(&self, other: &IvReal) -> IvReal {
        IvReal {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn intersect(&self, other: &IvReal) -> Option<IvReal> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo <= hi {
            Some(IvReal { lo, hi })
        } else {
            None
        }
    }

    #[inline]
    pub fn neg(&self) -> IvReal {
        IvReal {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    #[inline]
    pub fn abs(&self) -> IvReal {
        if self.lo >= 0.0 {
            *self
        } else if self.hi <= 0.0 {
            self.neg()
        } else {
            IvReal {
                lo: 0.0,
                hi: self.mag(),
            }
        }
    }

    #[inline]
    pub fn add(&self, o: &IvReal) -> IvReal {
        IvReal {
            lo: add_lo(self.lo, o.lo),
            hi: add_hi(self.hi, o.hi),
        }
    }

    #[inline]
    pub fn sub(&self, o: &IvReal) -> IvReal {
        IvReal {
            lo: add_lo(self.lo, -o.hi),
            hi: add_hi(self.hi, -o.lo),
        }
    }

    #[inline]
    pub fn mul(&self, o: &IvReal) -> IvReal {
        let (a, b, c, d) = (self.lo, self.hi, o.lo, o.hi);
        let lo = mul_lo(a, c).min(mul_lo(a, d)).min(mul_lo(b, c)).min(mul_lo(b, d));
        let hi = mul_hi(a, c).max(mul_hi(a, d)).max(mul_hi(b, c)).max(mul_hi(b, d));
        IvReal { lo, hi }
    }

    /// Multiplication by a point value.
    #[inline]
    pub fn scale(&self, v: f64) -> IvReal {
        if v >= 0.0 {
            IvReal {
                lo: mul_lo(self.lo, v),
                hi: mul_hi(self.hi, v),
            }
        } else {
            IvReal {
                lo: mul_lo(self.hi, v),
                hi: mul_hi(self.lo, v),
            }
        }
    }

    /// Division; errors when `0 ∈ o`.
    pub fn div(&self, o: &IvReal) -> Result<IvReal> {
        if o.contains(0.0) {
            return Err(Error::Domain("division by interval containing zero"));
        }
        let (a, b, c, d) = (self.lo, self.hi, o.lo, o.hi);
        let lo = div_lo(a, c).min(div_lo(a, d)).min(div_lo(b, c)).min(div_lo(b, d));
        let hi = div_hi(a, c).max(div_hi(a, d)).max(div_hi(b, c)).max(div_hi(b, d));
        Ok(IvReal { lo, hi })
    }

    /// Reciprocal; errors when `0 ∈ self`.
    pub fn recip(&self) -> Result<IvReal> {
        IvReal::one().div(self)
    }

    /// Integer power by binary exponentiation; even squarings use the tight
    /// `sqr`, so `0 ∈ x` does not inflate even powers.
    pub fn pow_int(&self, n: u32) -> IvReal {
        if n == 0 {
            return IvReal::one();
        }
        let mut result: Option<IvReal> = None;
        let mut base = *self;
        let mut k = n;
        loop {
            if k & 1 == 1 {
                result = Some(match result {
                    None => base,
                    Some(r) => r.mul(&base),
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = base.sqr();
        }
        result.unwrap()
    }

    /// Tight enclosure of `x²`.
    #[inline]
    pub fn sqr(&self) -> IvReal {
        let a = self.abs();
        IvReal {
            lo: mul_lo(a.lo, a.lo),
            hi: mul_hi(a.hi, a.hi),
        }
    }

    /// Square root; requires `lo >= 0`.
    pub fn sqrt(&self) -> IvReal {
        assert!(self.lo >= 0.0, "sqrt of interval with negative part");
        let lo = {
            let s = self.lo.sqrt();
            let r = s.mul_add(s, -self.lo);
            if r > 0.0 {
                step_down(s).max(0.0)
            } else {
                s
            }
        };
        let hi = {
            let s = self.hi.sqrt();
            let r = s.mul_add(s, -self.hi);
            if r < 0.0 {
                step_up(s)
            } else {
                s
            }
        };
        IvReal { lo, hi }
    }

    /// Exponential with the 2-ulp libm margin; positivity-preserving on
    /// underflow (`hi` becomes the smallest positive subnormal, never 0).
    pub fn exp(&self) -> IvReal {
        let lo = step_down(step_down(self.lo.exp())).max(0.0);
        let mut hi = step_up(step_up(self.hi.exp()));
        if hi == 0.0 {
            hi = f64::from_bits(1);
        }
        IvReal { lo, hi }
    }

    /// Natural log with the 2-ulp libm margin; requires `lo > 0`.
    pub fn ln(&self) -> Result<IvReal> {
        if self.lo <= 0.0 {
            return Err(Error::Domain("log of interval reaching zero"));
        }
        Ok(IvReal {
            lo: step_down(step_down(self.lo.ln())),
            hi: step_up(step_up(self.hi.ln())),
        })
    }

    /// Sine over an arbitrary interval, extrema included.
    pub fn sin(&self) -> IvReal {
        if self.width() >= 7.0 {
            return IvReal::new(-1.0, 1.0);
        }
        let slo = step_down(step_down(self.lo.sin())).max(-1.0);
        let shi = step_up(step_up(self.lo.sin())).min(1.0);
        let elo = step_down(step_down(self.hi.sin())).max(-1.0);
        let ehi = step_up(step_up(self.hi.sin())).min(1.0);
        let mut lo = slo.min(elo);
        let mut hi = shi.max(ehi);
        // extrema at (k + 1/2)π; scan the few candidates inside
        let half_pi = IvReal::pi().scale(0.5);
        let k_lo = (self.lo / (std::f64::consts::PI / 2.0)).floor() as i64 - 1;
        let k_hi = (self.hi / (std::f64::consts::PI / 2.0)).ceil() as i64 + 1;
        for k in k_lo..=k_hi {
            if k.rem_euclid(2) == 0 {
                continue;
            }
            let crit = half_pi.scale(k as f64);
            if crit.hi >= self.lo && crit.lo <= self.hi {
                // k odd: sin((k)·π/2) = ±1 with k ≡ 1 (mod 4) → +1
                if k.rem_euclid(4) == 1 {
                    hi = 1.0;
                } else {
                    lo = -1.0;
                }
            }
        }
        IvReal { lo, hi }
    }

    /// Cosine over an arbitrary interval, extrema included.
    pub fn cos(&self) -> IvReal {
        self.add(&IvReal::pi().scale(0.5)).sin()
    }

    /// Enclosure of `base^e` for a positive interval base and point exponent.
    pub fn pow_real(&self, e: f64) -> Result<IvReal> {
        if e == 0.0 {
            return Ok(IvReal::one());
        }
        if self.lo <= 0.0 {
            return Err(Error::Domain("pow_real requires positive base"));
        }
        let f = |x: f64, down: bool| -> f64 {
            // exp(e·ln x) with directed compounding
            let l = IvReal::point(x).ln().expect("positive");
            let p = l.scale(e);
            let r = p.exp();
            if down {
                r.lo
            } else {
                r.hi
            }
        };
        // x^e monotone increasing in x for e>0, decreasing for e<0
        let (lo, hi) = if e > 0.0 {
            (f(self.lo, true), f(self.hi, false))
        } else {
            (f(self.hi, true), f(self.lo, false))
        };
        Ok(IvReal { lo, hi })
    }

    /// Enclosure of `{|t|^α : t ∈ x}` for α ≥ 1, with exact 0 at t = 0.
    pub fn abs_pow(&self, alpha: f64) -> IvReal {
        assert!(alpha >= 1.0, "abs_pow requires alpha >= 1");
        let a = self.abs();
        if alpha == 1.0 {
            return a;
        }
        let hi = if a.hi == 0.0 {
            0.0
        } else if a.hi == 1.0 {
            1.0
        } else {
            IvReal::point(a.hi).pow_real(alpha).expect("positive").hi
        };
        let lo = if a.lo == 0.0 {
            0.0
        } else if a.lo == 1.0 {
            1.0
        } else {
            IvReal::point(a.lo).pow_real(alpha).expect("positive").lo.max(0.0)
        };
        IvReal { lo, hi }
    }

    /// Sum of a slice of intervals.
    pub fn sum(items: &[IvReal]) -> IvReal {
        let mut acc = IvReal::zero();
        for it in items {
            acc = acc.add(it);
        }
        acc
    }
}

impl std::ops::Add for IvReal {
    type Output = IvReal;
    fn add(self, rhs: IvReal) -> IvReal {
        IvReal::add(&self, &rhs)
    }
}

impl std::ops::Sub for IvReal {
    type Output = IvReal;
    fn sub(self, rhs: IvReal) -> IvReal {
        IvReal::sub(&self, &rhs)
    }
}

impl std::ops::Mul for IvReal {
    type Output = IvReal;
    fn mul(self, rhs: IvReal) -> IvReal {
        IvReal::mul(&self, &rhs)
    }
}

impl std::ops::Neg for IvReal {
    type Output = IvReal;
    fn neg(self) -> IvReal {
        IvReal::neg(&self)
    }
}
