//! Degree-bounded Taylor models on symmetric panels `[-r, r]` and the
//! oscillatory moment integrals `W_n(ω, r) = ∫_{-r}^{r} tⁿ e^{iωt} dt`
//! used by the Filon-type quadrature in the operator assembly.

use crate::complex::IvComplex;
use crate::interval::IvReal;
use crate::trig::{cospi_point, sinpi_point};

/// Real Taylor model on `[-r, r]`: value(t) ∈ Σ c[n]·tⁿ + rem for |t| ≤ r.
#[derive(Clone, Debug)]
pub struct Tm {
    pub c: Vec<IvReal>,
    pub rem: IvReal,
    pub r: f64,
}

impl Tm {
    pub fn constant(v: IvReal, degree: usize, r: f64) -> Self {
        let mut c = vec![IvReal::zero(); degree + 1];
        c[0] = v;
        Tm {
            c,
            rem: IvReal::zero(),
            r,
        }
    }

    pub fn from_coeffs(c: Vec<IvReal>, rem: IvReal, r: f64) -> Self {
        Tm { c, rem, r }
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.c.len() - 1
    }

    /// Interval enclosure of the range over `[-r, r]`.
    /// Even powers use `tⁿ ∈ [0, rⁿ]`, odd powers `tⁿ ∈ [-rⁿ, rⁿ]`.
    pub fn range(&self) -> IvReal {
        let mut acc = self.c[0].add(&self.rem);
        let mut rp = 1.0f64;
        for (n, cn) in self.c.iter().enumerate().skip(1) {
            rp = crate::interval::mul_hi_pub(rp, self.r);
            if cn.lo() == 0.0 && cn.hi() == 0.0 {
                continue;
            }
            let tpow = if n % 2 == 0 {
                IvReal::new(0.0, rp)
            } else {
                IvReal::symmetric(rp)
            };
            acc = acc.add(&cn.mul(&tpow));
        }
        acc
    }

    /// Upper bound on |value| over the panel.
    pub fn bound_mag(&self) -> f64 {
        self.range().mag()
    }

    pub fn add(&self, o: &Tm) -> Tm {
        debug_assert_eq!(self.c.len(), o.c.len());
        Tm {
            c: self
                .c
                .iter()
                .zip(o.c.iter())
                .map(|(a, b)| a.add(b))
                .collect(),
            rem: self.rem.add(&o.rem),
            r: self.r,
        }
    }

    pub fn scale_iv(&self, s: &IvReal) -> Tm {
        Tm {
            c: self.c.iter().map(|a| a.mul(s)).collect(),
            rem: self.rem.mul(s),
            r: self.r,
        }
    }

    pub fn neg(&self) -> Tm {
        Tm {
            c: self.c.iter().map(|a| a.neg()).collect(),
            rem: self.rem.neg(),
            r: self.r,
        }
    }

    /// Truncated product keeping degree `d = self.degree()`; coefficient mass
    /// above degree d and the remainder cross terms are folded into `rem`
    /// using `|t| ≤ r`.
    pub fn mul_trunc(&self, o: &Tm) -> Tm {
        let d = self.degree();
        debug_assert_eq!(d, o.degree());
        let mut c = vec![IvReal::zero(); d + 1];
        let mut overflow = IvReal::zero();
        // r^n ladders, rounded up so overflow bounds stay valid.
        let mut rpows = Vec::with_capacity(2 * d + 1);
        let mut rp = 1.0f64;
        rpows.push(rp);
        for _ in 1..=(2 * d) {
            rp = crate::interval::mul_hi_pub(rp, self.r);
            rpows.push(rp);
        }
        for (i, a) in self.c.iter().enumerate() {
            if a.lo() == 0.0 && a.hi() == 0.0 {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if b.lo() == 0.0 && b.hi() == 0.0 {
                    continue;
                }
                let p = a.mul(b);
                let n = i + j;
                if n <= d {
                    c[n] = c[n].add(&p);
                } else {
                    // |tⁿ| ≤ rⁿ; keep sign information via symmetric hull
                    overflow = overflow.add(&IvReal::symmetric(p.mag()).scale(rpows[n]));
                }
            }
        }
        // remainder cross terms: Ra·range(b) + Rb·range(a) + Ra·Rb
        let ra = &self.rem;
        let rb = &o.rem;
        let mut rem = overflow;
        if !(ra.lo() == 0.0 && ra.hi() == 0.0) {
            rem = rem.add(&ra.mul(&o.range()));
        }
        if !(rb.lo() == 0.0 && rb.hi() == 0.0) {
            // range of self WITHOUT its own remainder to avoid double counting
            let poly_range = Tm {
                c: self.c.clone(),
                rem: IvReal::zero(),
                r: self.r,
            }
            .range();
            rem = rem.add(&rb.mul(&poly_range));
        }
        Tm { c, rem, r: self.r }
    }
}

/// Complex Taylor model: re + i·im, sharing radius and degree.
#[derive(Clone, Debug)]
pub struct TmC {
    pub re: Tm,
    pub im: Tm,
}

impl TmC {
    pub fn constant(v: IvComplex, degree: usize, r: f64) -> Self {
        TmC {
            re: Tm::constant(v.re(), degree, r),
            im: Tm::constant(v.im(), degree, r),
        }
    }

    pub fn add(&self, o: &TmC) -> TmC {
        TmC {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }

    /// Multiply by the purely real Taylor model `f`.
    pub fn mul_real(&self, f: &Tm) -> TmC {
        TmC {
            re: self.re.mul_trunc(f),
            im: self.im.mul_trunc(f),
        }
    }

    /// Multiply by `i·f` for a real Taylor model `f`:
    /// (re + i·im)(i f) = -im·f + i·re·f.
    pub fn mul_by_i_real(&self, f: &Tm) -> TmC {
        TmC {
            re: self.im.mul_trunc(f).neg(),
            im: self.re.mul_trunc(f),
        }
    }

    pub fn add_complex_const(&self, v: &IvComplex) -> TmC {
        let mut out = self.clone();
        out.re.c[0] = out.re.c[0].add(&v.re());
        out.im.c[0] = out.im.c[0].add(&v.im());
        out
    }

    /// Coefficient n as a complex interval.
    pub fn coeff(&self, n: usize) -> IvComplex {
        IvComplex::new(self.re.c[n], self.im.c[n])
    }

    /// Remainder as a complex interval box.
    pub fn rem_box(&self) -> IvComplex {
        IvComplex::new(self.re.rem, self.im.rem)
    }
}

/// Taylor model of `exp(i·φ(t))` for a real Taylor model φ with φ(0) = 0
/// (structurally zero constant coefficient). Horner evaluation of the
/// truncated exponential series with `terms + 1` coefficients 1/k!,
/// k = 0..=terms, plus the rigorous tail bound
/// `Σ_{k>terms} B^k/k! ≤ B^{terms+1}/(terms+1)! · e^B`, `B ≥ sup|φ|`.
pub fn exp_i(phi: &Tm, terms: usize) -> TmC {
    debug_assert!(
        phi.c[0].lo() == 0.0 && phi.c[0].hi() == 0.0,
        "exp_i expects zero constant term"
    );
    let b = phi.bound_mag();
    // inverse factorials as tight intervals, built by interval recurrence
    let mut inv_fact = Vec::with_capacity(terms + 1);
    let mut f = IvReal::one();
    inv_fact.push(f);
    for k in 1..=terms {
        f = f.div(&IvReal::point(k as f64)).expect("k > 0");
        inv_fact.push(f);
    }
    // Horner: acc = 1/terms!; acc = acc·(iφ) + 1/k!
    let d = phi.degree();
    let mut acc = TmC::constant(
        IvComplex::from_real(inv_fact[terms]),
        d,
        phi.r,
    );
    for k in (0..terms).rev() {
        acc = acc.mul_by_i_real(phi);
        acc = acc.add_complex_const(&IvComplex::from_real(inv_fact[k]));
    }
    // series tail: |e^{iφ} - Σ_{k≤terms}| ≤ B^{terms+1}/(terms+1)!·e^B
    let biv = IvReal::new(0.0, b);
    let mut bp = IvReal::one();
    for _ in 0..=terms {
        bp = bp.mul(&biv);
    }
    let mut fact = IvReal::one();
    for k in 2..=(terms as u64 + 1) {
        fact = fact.mul(&IvReal::point(k as f64));
    }
    let tail = bp.div(&fact).expect("factorial > 0").mul(&biv.exp()).hi();
    acc.re.rem = acc.re.rem.add(&IvReal::symmetric(tail));
    acc.im.rem = acc.im.rem.add(&IvReal::symmetric(tail));
    acc
}

/// Normalized moments `Ŵ_n(πjr) = ∫_{-1}^{1} τⁿ e^{iπjr·τ} dτ` for
/// n = 0..=nmax. Taylor models are built in the unit variable τ = t/r, so a
/// panel integral is `r · (Σ Ĉ_n Ŵ_n + remainder·2)`; keeping coefficients
/// O(1) at every panel depth avoids the overflow of raw `y₀^{α−n}` ladders.
///
/// Three regimes (v = πjr, u = |v|):
///  * j = 0: exact parity formula, `Ŵ_n = 2/(n+1)` for even n, 0 for odd.
///  * u ≤ 1.5: power series in (iv) with rigorous truncation tail.
///  * otherwise: integration by parts downward recurrence
///    `Ŵ_n = BT_n + (i n/v) Ŵ_{n-1}` with boundary terms from exact
///    dyadic evaluations of sin(πjr), cos(πjr).
///
/// `j·r` must be an exact f64 product (dyadic r, moderate j), which the
/// assembler's dyadic bisection guarantees.
pub fn moments(j: i64, r: f64, nmax: usize) -> Vec<IvComplex> {
    if j == 0 {
        let mut out = Vec::with_capacity(nmax + 1);
        for n in 0..=nmax {
            if n % 2 == 0 {
                let val = IvReal::point(2.0)
                    .div(&IvReal::point((n + 1) as f64))
                    .expect("n+1 > 0");
                out.push(IvComplex::new(val, IvReal::zero()));
            } else {
                out.push(IvComplex::zero());
            }
        }
        return out;
    }
    let jr = (j as f64) * r;
    let v = IvReal::pi().scale(jr);
    if jr.abs() * std::f64::consts::PI <= 1.5 {
        moments_series(&v, nmax)
    } else {
        moments_recurrence(&v, jr, nmax)
    }
}

const SERIES_TERMS: usize = 22;

fn moments_series(v: &IvReal, nmax: usize) -> Vec<IvComplex> {
    let u = v.abs();
    let eu = u.exp();
    // u^K / K!
    let mut uk_kfact = IvReal::one();
    for k in 1..=SERIES_TERMS {
        uk_kfact = uk_kfact.mul(&u).div(&IvReal::point(k as f64)).expect("k>0");
    }
    let iv_phase = IvComplex::new(IvReal::zero(), *v);
    let mut out = Vec::with_capacity(nmax + 1);
    for n in 0..=nmax {
        // Σ_{k, n+k even} (iv)^k/k! · 2/(n+k+1)
        let mut acc = IvComplex::zero();
        let mut pk = IvComplex::one(); // (iv)^k / k!
        for k in 0..SERIES_TERMS {
            if (n + k) % 2 == 0 {
                let weight = IvReal::point(2.0)
                    .div(&IvReal::point((n + k + 1) as f64))
                    .expect("positive");
                acc = acc.add(&pk.scale_iv(&weight));
            }
            pk = pk
                .mul(&iv_phase)
                .scale_iv(&IvReal::point((k + 1) as f64).recip().expect("k+1>0"));
        }
        // tail ≤ 2/(n+1) · u^K/K! · e^u
        let tail = IvReal::point(2.0)
            .div(&IvReal::point((n + 1) as f64))
            .expect("positive")
            .mul(&uk_kfact)
            .mul(&eu)
            .hi();
        let box_iv = IvReal::symmetric(tail);
        acc = acc.add(&IvComplex::new(box_iv, box_iv));
        out.push(acc);
    }
    out
}

fn moments_recurrence(v: &IvReal, jr: f64, nmax: usize) -> Vec<IvComplex> {
    // sin(v) = sin(π·(j r)) with jr an exact dyadic f64
    let s = sinpi_point(jr);
    let c = cospi_point(jr);
    let inv_v = v.recip().expect("v != 0");
    let two_s_over_v = s.scale(2.0).mul(&inv_v);
    let two_c_over_v = c.scale(2.0).mul(&inv_v);
    let mut out = Vec::with_capacity(nmax + 1);
    // Ŵ_0 = 2 sin(v)/v
    let mut w = IvComplex::new(two_s_over_v, IvReal::zero());
    out.push(w);
    for n in 1..=nmax {
        let bt = if n % 2 == 0 {
            // 2 sin(v)/v, purely real
            IvComplex::new(two_s_over_v, IvReal::zero())
        } else {
            // -2i cos(v)/v, purely imaginary
            IvComplex::new(IvReal::zero(), two_c_over_v.neg())
        };
        // (i n / v)·Ŵ_{n-1}
        let factor = inv_v.scale(n as f64);
        let correction = w.mul_i().scale_iv(&factor);
        w = bt.add(&correction);
        out.push(w);
    }
    out
}
