//! Rigorous sin/cos of π-multiples.
//!
//! The quadrature phases are all of the form πx with x a dyadic rational, so
//! the argument reduction x mod 2 and the quadrant folds (x ↦ 1−x, x ↦ x−1)
//! are exact in binary64 (integer-valued differences below 2^53, Sterbenz
//! subtractions inside [1/2, 2]). Only the final sin(π·t) on t ∈ [0, 1/2]
//! rounds, so enclosures stay a few ulp wide no matter how large the original
//! multiple was.

use crate::complex::IvComplex;
use crate::interval::IvReal;

#[inline]
fn step_down(x: f64) -> f64 {
    x.next_down()
}

#[inline]
fn step_up(x: f64) -> f64 {
    x.next_up()
}

/// Enclosure of sin(π t) for t ∈ [0, 1/2], monotone branch.
fn sinpi_quarter(t: f64) -> IvReal {
    debug_assert!((0.0..=0.5).contains(&t));
    if t == 0.0 {
        return IvReal::zero();
    }
    if t == 0.5 {
        return IvReal::one();
    }
    let arg = IvReal::pi().scale(t);
    let lo = step_down(step_down(arg.lo().sin())).max(0.0);
    let hi = if arg.hi() >= std::f64::consts::FRAC_PI_2 {
        1.0
    } else {
        step_up(step_up(arg.hi().sin())).min(1.0)
    };
    IvReal::new(lo, hi)
}

/// Rigorous enclosure of sin(πx) for any finite binary64 x.
pub fn sinpi_point(x: f64) -> IvReal {
    assert!(x.is_finite());
    if x.abs() >= 9.007199254740992e15 {
        // every f64 of this magnitude is an even integer
        return IvReal::zero();
    }
    if x < 0.0 {
        // odd reflection; x − 2⌊x/2⌋ is exact only for x ≥ 0 (for negative
        // x the reduction is an opposite-sign addition and can round)
        return sinpi_point(-x).neg();
    }
    // exact reduction to [0, 2)
    let mut r = x - 2.0 * (x / 2.0).floor();
    debug_assert!((0.0..2.0).contains(&r) || r == 2.0);
    if r == 2.0 {
        r = 0.0;
    }
    let mut sign = 1.0;
    if r > 1.0 {
        r -= 1.0; // exact: r ∈ (1, 2)
        sign = -1.0;
    }
    if r > 0.5 {
        r = 1.0 - r; // exact: r ∈ (1/2, 1]
    }
    let s = sinpi_quarter(r);
    if sign < 0.0 {
        s.neg()
    } else {
        s
    }
}

/// Enclosure of cos(π t) for t ∈ [0, 1/2], monotone decreasing branch.
fn cospi_quarter(t: f64) -> IvReal {
    debug_assert!((0.0..=0.5).contains(&t));
    if t == 0.0 {
        return IvReal::one();
    }
    if t == 0.5 {
        return IvReal::zero();
    }
    let arg = IvReal::pi().scale(t);
    let hi = step_up(step_up(arg.lo().cos())).min(1.0);
    let lo = step_down(step_down(arg.hi().cos())).max(0.0);
    IvReal::new(lo, hi)
}

/// Rigorous enclosure of cos(πx) for any finite binary64 x. The phase shift
/// by 1/2 is not representable without rounding for general x, so the
/// quadrant folds are done directly (all exact: Sterbenz subtractions inside
/// [1/2, 2] and an integer-valued reduction).
pub fn cospi_point(x: f64) -> IvReal {
    assert!(x.is_finite());
    if x.abs() >= 9.007199254740992e15 {
        // every f64 of this magnitude is an even integer
        return IvReal::one();
    }
    let ax = x.abs();
    let mut r = ax - 2.0 * (ax / 2.0).floor();
    debug_assert!((0.0..=2.0).contains(&r));
    if r == 2.0 {
        r = 0.0;
    }
    if r >= 1.0 {
        r = 2.0 - r; // exact: r ∈ [1, 2); result ∈ (0, 1]
    }
    if r > 0.5 {
        cospi_quarter(1.0 - r).neg() // exact: r ∈ (1/2, 1]
    } else {
        cospi_quarter(r)
    }
}

/// Enclosure of e^{iπx} = cos(πx) + i·sin(πx) for point x.
pub fn cispi_point(x: f64) -> IvComplex {
    IvComplex::new(cospi_point(x), sinpi_point(x))
}

/// Enclosure of sin(πx) over an interval x.
pub fn sinpi_iv(x: &IvReal) -> IvReal {
    if x.width() >= 2.0 {
        return IvReal::new(-1.0, 1.0);
    }
    let mut out = sinpi_point(x.lo()).hull(&sinpi_point(x.hi()));
    // interior extrema of sin(πx) at x = k + 1/2
    let k0 = (x.lo() - 0.5).ceil();
    let k1 = (x.hi() - 0.5).floor();
    let mut k = k0;
    while k <= k1 {
        let crit = k + 0.5;
        if x.contains(crit) {
            if (k.rem_euclid(2.0)) == 0.0 {
                out = out.hull(&IvReal::one());
            } else {
                out = out.hull(&IvReal::point(-1.0));
            }
        }
        k += 1.0;
    }
    out
}

/// Enclosure of cos(πx) over an interval x.
pub fn cospi_iv(x: &IvReal) -> IvReal {
    sinpi_iv(&x.add(&IvReal::point(0.5)))
}

/// Enclosure of e^{iπx} over an interval x.
pub fn cispi_iv(x: &IvReal) -> IvComplex {
    IvComplex::new(cospi_iv(x), sinpi_iv(x))
}

/// e^{iπ·num·2^{-scale}} with exact integer phase reduction; `num` may be any
/// magnitude because the reduction mod 2^{scale+1} happens in integers.
pub fn cispi_dyadic(num: i128, scale: u32) -> IvComplex {
    assert!(scale < 120);
    let modulus: i128 = 1i128 << (scale + 1);
    let r = num.rem_euclid(modulus); // phase in [0, 2) turns
    // r < 2^{scale+1}; bring below 2^53 by dropping trailing zeros
    let (mut r, mut scale) = (r, scale);
    while r != 0 && r & 1 == 0 && scale > 0 {
        r >>= 1;
        scale -= 1;
    }
    if r == 0 {
        return IvComplex::one();
    }
    assert!(
        r < (1i128 << 53),
        "dyadic phase numerator exceeds exact f64 range"
    );
    let x = (r as f64) * (2.0f64).powi(-(scale as i32));
    cispi_point(x)
}
