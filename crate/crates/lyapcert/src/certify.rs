//! A-posteriori certification of an approximate stationary density.
//!
//! Given the discretized operator A = D_σ·M, a floating-point candidate g is
//! produced by power iteration and then certified: the residual
//! ε ≥ ‖A g − g‖_{L²} is evaluated in interval arithmetic, mixing bounds
//! C_i ≥ ‖A^i|_{U₀}‖ are obtained from interval norms of matrix powers of the
//! zero-mean block, and the final L² distance between g and the true
//! stationary density f_σ is bounded by
//!
//!   E = (1 − C_N)⁻¹ · (Σ_{i<N} C_i) · ((1 + Γ_{σ,K} + ‖ρ_σ‖_{L²(ℝ)})·Γ_{σ,K} + ε),
//!
//! where Γ_{σ,K} is the Gaussian tail of the discretization and the L¹ norm
//! of a probability density is 1.

use num_complex::Complex64;

use crate::complex::IvComplex;
use crate::fourier::{gaussian_multiplier, tail_gamma, FourierVector};
use crate::interval::IvReal;
use crate::linalg::{l2_change, matvec_f64, IvMatrix};
use crate::maps::{kernel_constants, NoiseParams, TestMap};
use crate::operator::{compose, DeterministicMatrix, DiscretizedOperator};
use crate::{Error, Result};

/// How a mixing certificate was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MixingSource {
    /// Interval norms of powers of the zero-mean block of A (a posteriori).
    Matrix,
    /// Doeblin-type a-priori decay of the continuum operator (diagnostics).
    Doeblin,
}

/// Upper bounds C_0..C_N on ‖A^i|_{U₀}‖_{L²→L²}.
#[derive(Clone, Debug)]
pub struct MixingCertificate {
    /// N: the certified step count; `c[n]` has upper endpoint < 1.
    pub n: usize,
    /// C_0..C_N; C_0 = 1 exactly.
    pub c: Vec<IvReal>,
    pub source: MixingSource,
}

impl MixingCertificate {
    /// Σ_{i=0}^{N−1} C_i, the geometric-sum factor of the main bound.
    pub fn partial_sum(&self) -> IvReal {
        IvReal::sum(&self.c[..self.n])
    }
}

/// A certified L² enclosure of the stationary density.
#[derive(Clone, Debug)]
pub struct DensityEnclosure {
    /// Candidate density: degree-K trigonometric polynomial, point
    /// coefficients, unit mass (g[0] = ½ exactly), Hermitian symmetric.
    pub g: FourierVector,
    /// Rigorous residual bound ε ≥ ‖A g − g‖_{L²}.
    pub eps: IvReal,
    /// Certified error ‖f_σ − g‖_{L²} ≤ E.hi().
    pub e: IvReal,
    pub cert: MixingCertificate,
    pub sigma: f64,
    pub k: usize,
    pub map: TestMap,
}

/// Pipeline tuning knobs.
#[derive(Clone, Copy, Debug)]
pub struct CertifyOptions {
    /// Mixing target for C_N (default 0.5).
    pub target_cn: f64,
    /// Give up on the mixing certificate past this power (default 4096).
    pub max_mix_steps: usize,
    /// Power-iteration cap (default 20000).
    pub max_iter: usize,
    /// Power-iteration stopping tolerance; `None` selects
    /// 10·ε_machine·(2K+1).
    pub tol: Option<f64>,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            target_cn: 0.5,
            max_mix_steps: 4096,
            max_iter: 20_000,
            tol: None,
        }
    }
}

/// Floating-point power iteration from the uniform density, then exact
/// symmetrization: g[0] := ½ and g[−j] := conj(g[j]) via pair averaging.
pub fn approx_fixed_point(
    op: &DiscretizedOperator,
    tol: Option<f64>,
    max_iter: usize,
) -> Result<FourierVector> {
    let k = op.k;
    let n = 2 * k + 1;
    let tol = tol.unwrap_or(10.0 * f64::EPSILON * n as f64);
    let am: Vec<Complex64> = op.a.midpoint();

    let mut v = vec![Complex64::new(0.0, 0.0); n];
    v[k] = Complex64::new(0.5, 0.0);

    // Stop at tol; accept a stagnating floor if it is already ≤ the guard.
    const FLOOR_GUARD: f64 = 1e-10;
    const STALL: usize = 50;
    let mut best = f64::INFINITY;
    let mut since_best = 0usize;
    let mut last_change = f64::INFINITY;
    let mut converged = false;
    for _ in 0..max_iter {
        let next = matvec_f64(&am, n, &v);
        last_change = l2_change(&next, &v);
        v = next;
        // the mass row of A is exact, but guard against float drift anyway
        v[k] = Complex64::new(0.5, 0.0);
        if last_change <= tol {
            converged = true;
            break;
        }
        if last_change < best * 0.999_999 {
            best = last_change;
            since_best = 0;
        } else {
            since_best += 1;
            if since_best >= STALL && best <= FLOOR_GUARD {
                converged = true;
                break;
            }
        }
    }
    if !converged {
        return Err(Error::Convergence {
            iterations: max_iter,
            last_change,
        });
    }

    // exact symmetrization: Hermitian pairs and unit mass
    let mut coeffs = vec![IvComplex::zero(); n];
    coeffs[k] = IvComplex::point(0.5, 0.0);
    for j in 1..=k {
        let p = v[k + j];
        let q = v[k - j].conj();
        let avg = Complex64::new(0.5 * (p.re + q.re), 0.5 * (p.im + q.im));
        coeffs[k + j] = IvComplex::point(avg.re, avg.im);
        coeffs[k - j] = IvComplex::point(avg.re, -avg.im);
    }
    FourierVector::from_coeffs(k, coeffs, true)
}

/// Rigorous enclosure of ‖A g − g‖_{L²[−1,1]} = √2·‖A g − g‖_{ℓ²}.
pub fn residual(op: &DiscretizedOperator, g: &FourierVector) -> Result<IvReal> {
    if g.modes() != op.k {
        return Err(Error::Dimension {
            expected: op.k,
            got: g.modes(),
        });
    }
    let ag = op.a.matvec(g.as_slice())?;
    let mut diff = Vec::with_capacity(ag.len());
    for (a, b) in ag.iter().zip(g.as_slice()) {
        diff.push(a.sub(b));
    }
    let r = FourierVector::from_coeffs(op.k, diff, false)?;
    Ok(r.norm_l2())
}

/// The zero-mean block B: A with row and column of mode 0 deleted. Mass is
/// preserved exactly by construction, so U₀ is invariant and this block is
/// the matrix of A|_{U₀}.
pub(crate) fn zero_mean_block(a: &IvMatrix, k: usize) -> IvMatrix {
    let n = 2 * k + 1;
    debug_assert_eq!(a.dim(), n);
    IvMatrix::from_fn(n - 1, |i, j| {
        let si = if i < k { i } else { i + 1 };
        let sj = if j < k { j } else { j + 1 };
        *a.get(si, sj)
    })
}

/// A-posteriori mixing certificate by dyadic squaring of the zero-mean block.
///
/// Powers B, B², B⁴, … are computed as interval matrices; their norms give
/// C_{2^t} directly and intermediate C_i are filled in by submultiplicativity
/// along the binary decomposition of i.
pub fn mixing_norms(
    op: &DiscretizedOperator,
    n_max: usize,
    target: f64,
) -> Result<MixingCertificate> {
    let b = zero_mean_block(&op.a, op.k);
    mixing_norms_of(&b, n_max, target)
}

pub(crate) fn mixing_norms_of(b: &IvMatrix, n_max: usize, target: f64) -> Result<MixingCertificate> {
    assert!(n_max >= 1 && target > 0.0 && target < 1.0);
    // Rows whose total mass falls below this cut are not carried through the
    // matrix powers; they enter the bounds as a norm perturbation instead.
    // The Gaussian multiplier crushes high-mode rows far below it, so the
    // powers run on a small sub-block at realistic noise levels.
    const ROW_CUT: f64 = 1e-15;
    let dim = b.dim();
    let mut active: Vec<usize> = Vec::new();
    let mut active_sq = IvReal::zero();
    let mut tail_sq = IvReal::zero();
    for i in 0..dim {
        let mut f2 = IvReal::zero();
        for z in b.row(i) {
            f2 = f2.add(&z.mag_sq());
        }
        if f2.sqrt().hi() > ROW_CUT {
            active.push(i);
            active_sq = active_sq.add(&f2);
        } else {
            tail_sq = tail_sq.add(&f2);
        }
    }
    if active.len() == dim {
        return mixing_norms_dense(b, n_max, target);
    }
    // The perturbation term can defeat the target in principle (it grows with
    // the power); the dense squaring stays available as the slow path.
    mixing_norms_trimmed(b, &active, &active_sq, &tail_sq, n_max, target)
        .or_else(|_| mixing_norms_dense(b, n_max, target))
}

/// Split B = B₀ + E, where B₀ keeps the active rows and E holds the rows
/// below the cut, ‖E‖₂ ≤ ‖E‖_F = e. Since B₀ has zero rows outside the
/// active set, B₀^i = diag-block structure gives ‖B₀^i‖ ≤ ‖B11^{i−1}‖·‖B₀‖
/// with B11 the active×active sub-block, and
///   ‖B^i‖ ≤ ‖B₀^i‖ + i·e·(‖B₀‖+e)^{i−1}
/// by telescoping B^i − B₀^i. Dyadic powers are needed only for B11.
fn mixing_norms_trimmed(
    b: &IvMatrix,
    active: &[usize],
    active_sq: &IvReal,
    tail_sq: &IvReal,
    n_max: usize,
    target: f64,
) -> Result<MixingCertificate> {
    let dim = b.dim();
    let e = IvReal::point(tail_sq.sqrt().hi());

    // ‖B₀‖₂ ≤ min(Frobenius, √(‖·‖₁·‖·‖_∞)) over the active rows only
    let fro = active_sq.sqrt().hi();
    let mut norm1 = 0.0f64;
    for j in 0..dim {
        let mut acc = IvReal::zero();
        for &i in active {
            acc = acc.add(&IvReal::point(b.get(i, j).mag_upper()));
        }
        norm1 = norm1.max(acc.hi());
    }
    let mut norminf = 0.0f64;
    for &i in active {
        let mut acc = IvReal::zero();
        for z in b.row(i) {
            acc = acc.add(&IvReal::point(z.mag_upper()));
        }
        norminf = norminf.max(acc.hi());
    }
    let holder = IvReal::point(norm1)
        .mul(&IvReal::point(norminf))
        .sqrt()
        .hi();
    let c0 = IvReal::point(fro.min(holder));

    let b11 = IvMatrix::from_fn(active.len(), |i, j| *b.get(active[i], active[j]));

    // u[t] ≥ ‖B11^{2^t}‖; ‖B11^{i−1}‖ by binary decomposition as in the
    // dense path, then the perturbation correction on top.
    let c_of = |i: usize, u: &[IvReal]| -> IvReal {
        let mut pow = IvReal::one();
        let mut rest = i - 1;
        while rest != 0 {
            let t = rest.trailing_zeros() as usize;
            pow = pow.mul(&u[t]);
            rest &= rest - 1;
        }
        let grow = c0.add(&e).pow_int((i - 1) as u32);
        let corr = e.scale(i as f64).mul(&grow);
        pow.mul(&c0).add(&corr)
    };

    let mut u: Vec<IvReal> = vec![b11.norm2_upper()];
    let mut p = b11;
    let mut n = 1usize;
    let mut best = f64::INFINITY;
    loop {
        let cn = c_of(n, &u);
        best = best.min(cn.hi());
        if cn.hi() <= target {
            break;
        }
        if 2 * n > n_max {
            return Err(Error::Certification {
                steps: n_max,
                best_c: best,
            });
        }
        p = p.mul(&p)?;
        u.push(p.norm2_upper());
        n *= 2;
    }
    let mut c = Vec::with_capacity(n + 1);
    c.push(IvReal::one());
    for i in 1..=n {
        c.push(c_of(i, &u));
    }
    Ok(MixingCertificate {
        n,
        c,
        source: MixingSource::Matrix,
    })
}

fn mixing_norms_dense(b: &IvMatrix, n_max: usize, target: f64) -> Result<MixingCertificate> {
    // norms of dyadic powers: dyadic[t] = C_{2^t}
    let mut dyadic: Vec<IvReal> = Vec::new();
    let mut best = f64::INFINITY;
    let mut p = b.clone();
    let mut n = 1usize;
    loop {
        let c = p.norm2_upper();
        best = best.min(c.hi());
        dyadic.push(c);
        if best <= target {
            break;
        }
        if 2 * n > n_max {
            return Err(Error::Certification {
                steps: n_max,
                best_c: best,
            });
        }
        p = p.mul(&p)?;
        n *= 2;
    }

    // fill C_0..C_N: exact dyadic norms where available, binary-decomposition
    // products elsewhere (valid upper bounds by submultiplicativity)
    let mut c = Vec::with_capacity(n + 1);
    c.push(IvReal::one());
    for i in 1..=n {
        if i.is_power_of_two() {
            c.push(dyadic[i.trailing_zeros() as usize].clone());
        } else {
            let mut prod = IvReal::one();
            let mut rest = i;
            while rest != 0 {
                let t = rest.trailing_zeros() as usize;
                prod = prod.mul(&dyadic[t]);
                rest &= rest - 1;
            }
            c.push(prod);
        }
    }
    Ok(MixingCertificate {
        n,
        c,
        source: MixingSource::Matrix,
    })
}

/// A-priori decay bounds for the continuum operator at the given step count:
/// `l1` = (1 − 2c)^steps on L¹ and `l2` = (√2(1+3ρ_σ(0)))^{1/2}·θ^steps on L²
/// with θ = (1 − 2c)^{1/2} and c the Doeblin constant. Diagnostics only; the
/// discretized operator is always certified a posteriori.
#[derive(Clone, Debug)]
pub struct AprioriMixing {
    pub l1: IvReal,
    pub l2: IvReal,
    /// θ = √(1 − 2c), the per-step L² decay rate.
    pub theta: IvReal,
}

pub fn apriori_mixing(n: NoiseParams, steps: usize) -> AprioriMixing {
    let c = crate::maps::doeblin_constant(n);
    // 1 − 2c ∈ (0, 1): c(σ) = (σ√(2π))⁻¹e^{−1/(2σ²)} peaks at σ=1 with ≈ 0.242
    let one_minus = IvReal::one().sub(&c.scale(2.0));
    let l1 = one_minus.pow_int(steps as u32);
    let theta = one_minus.sqrt();
    let rho0 = kernel_constants(n).rho0;
    let cc = IvReal::sqrt2()
        .mul(&IvReal::one().add(&rho0.scale(3.0)))
        .sqrt();
    let l2 = cc.mul(&theta.pow_int(steps as u32));
    AprioriMixing { l1, l2, theta }
}

/// A-priori norms of the discretized operator powers (diagnostics only):
/// `l1` = (1+Γ_{σ,K})^i·(2K+1), `l2` = ‖ρ_σ‖_{L²(ℝ)}·(1+Γ_{σ,K})^{i−1}·(2K+1)·√2.
pub struct AprioriDiscrete {
    pub l1: IvReal,
    pub l2: IvReal,
}

pub fn apriori_discrete_norms(n: NoiseParams, k: usize, i: usize) -> AprioriDiscrete {
    assert!(k >= 1 && i >= 1);
    let gamma = tail_gamma(n, k);
    let dim = IvReal::point((2 * k + 1) as f64);
    let one_plus = IvReal::one().add(&gamma);
    let l1 = one_plus.pow_int(i as u32).mul(&dim);
    let l2 = kernel_constants(n)
        .l2norm
        .mul(&one_plus.pow_int(i as u32 - 1))
        .mul(&dim)
        .mul(&IvReal::sqrt2());
    AprioriDiscrete { l1, l2 }
}

/// The main error bound: ‖f_σ − g‖_{L²} ≤
/// (1 − C_N)⁻¹·(Σ_{i<N} C_i)·((1 + Γ_{σ,K} + ‖ρ_σ‖_{L²(ℝ)})·Γ_{σ,K} + ε),
/// with ‖f_σ‖_{L¹} = 1 for a probability density.
pub fn error_bound(
    cert: &MixingCertificate,
    eps: &IvReal,
    n: NoiseParams,
    k: usize,
) -> Result<IvReal> {
    let cn = &cert.c[cert.n];
    if !(cn.hi() < 1.0) {
        return Err(Error::InvalidCertificate);
    }
    let gamma = tail_gamma(n, k);
    let rho_l2 = kernel_constants(n).l2norm;
    let tail_factor = IvReal::one().add(&gamma).add(&rho_l2).mul(&gamma);
    let inner = tail_factor.add(eps);
    let sum = cert.partial_sum();
    let denom = IvReal::one().sub(cn);
    sum.mul(&inner).div(&denom)
}

/// Full certification pipeline on a pre-assembled deterministic matrix.
pub fn enclose_density_with(
    dm: &DeterministicMatrix,
    noise: NoiseParams,
    opts: &CertifyOptions,
) -> Result<DensityEnclosure> {
    assert!(
        noise.sigma >= dm.min_sigma,
        "matrix assembled for min σ {} used at σ {}",
        dm.min_sigma,
        noise.sigma
    );
    let k = dm.k;
    let d = gaussian_multiplier(noise, k);
    let gamma = tail_gamma(noise, k);
    let op = compose(&d, dm, gamma, noise.sigma)?;
    let g = approx_fixed_point(&op, opts.tol, opts.max_iter)?;
    let eps = residual(&op, &g)?;
    let cert = mixing_norms(&op, opts.max_mix_steps, opts.target_cn)?;
    let e = error_bound(&cert, &eps, noise, k)?;
    Ok(DensityEnclosure {
        g,
        eps,
        e,
        cert,
        sigma: noise.sigma,
        k,
        map: dm.map,
    })
}

/// Assemble-and-certify convenience entry point.
pub fn enclose_density(
    map: TestMap,
    noise: NoiseParams,
    k: usize,
    opts: &CertifyOptions,
) -> Result<DensityEnclosure> {
    let profile = crate::assemble::TolProfile::for_noise(noise, k);
    let (dm, _report) = crate::assemble::assemble_deterministic(map, k, &profile)?;
    enclose_density_with(&dm, noise, opts)
}

/// Plain-text certificate record (consumed by the explorer's mixing maps).
pub fn certificate_text(d: &DensityEnclosure) -> String {
    let mut s = String::new();
    s.push_str("LYAPCERT1\n");
    s.push_str(&format!("map {}\n", crate::operator::map_descriptor(&d.map)));
    s.push_str(&format!("sigma {}\n", d.sigma));
    s.push_str(&format!("modes {}\n", d.k));
    s.push_str(&format!("N {}\n", d.cert.n));
    s.push_str(&format!(
        "source {}\n",
        match d.cert.source {
            MixingSource::Matrix => "matrix",
            MixingSource::Doeblin => "doeblin",
        }
    ));
    s.push_str(&format!("eps {:e}\n", d.eps.hi()));
    let gamma = tail_gamma(NoiseParams::new(d.sigma).unwrap(), d.k);
    s.push_str(&format!("gamma {:e}\n", gamma.hi()));
    s.push_str(&format!("E {:e}\n", d.e.hi()));
    for (i, ci) in d.cert.c.iter().enumerate() {
        s.push_str(&format!("C_{} {:e}\n", i, ci.hi()));
    }
    s
}

/// Minimal parse of a certificate record: (σ, K, N, C_N upper, E upper).
pub fn certificate_summary(text: &str) -> Result<(f64, usize, usize, f64, f64)> {
    let mut lines = text.lines();
    if lines.next() != Some("LYAPCERT1") {
        return Err(Error::Format("missing LYAPCERT1 header".into()));
    }
    let (mut sigma, mut k, mut n, mut e) = (None, None, None, None);
    let mut c_last = None;
    for line in lines {
        let mut it = line.split_whitespace();
        let (Some(key), Some(val)) = (it.next(), it.next()) else {
            continue;
        };
        match key {
            "sigma" => sigma = val.parse::<f64>().ok(),
            "modes" => k = val.parse::<usize>().ok(),
            "N" => n = val.parse::<usize>().ok(),
            "E" => e = val.parse::<f64>().ok(),
            _ if key.starts_with("C_") => c_last = val.parse::<f64>().ok(),
            _ => {}
        }
    }
    match (sigma, k, n, c_last, e) {
        (Some(s), Some(k), Some(n), Some(c), Some(e)) => Ok((s, k, n, c, e)),
        _ => Err(Error::Format("incomplete certificate record".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity_op(sigma: f64, k: usize) -> DiscretizedOperator {
        // exact identity matrix: the composed operator is exactly diag(D)
        let noise = NoiseParams::new(sigma).unwrap();
        let dm = DeterministicMatrix {
            k,
            map: TestMap::Identity,
            mat: IvMatrix::identity(2 * k + 1),
            min_sigma: 0.0,
        };
        let d = gaussian_multiplier(noise, k);
        compose(&d, &dm, tail_gamma(noise, k), sigma).unwrap()
    }

    #[test]
    fn identity_fixed_point_is_uniform() {
        let op = identity_op(0.2, 8);
        let g = approx_fixed_point(&op, None, 100).unwrap();
        let (re, im) = g.get(0).mid();
        assert_eq!((re, im), (0.5, 0.0));
        for j in 1..=8 {
            let (re, im) = g.get(j).mid();
            assert_eq!((re, im), (0.0, 0.0));
        }
        let eps = residual(&op, &g).unwrap();
        assert!(eps.contains(0.0) || eps.lo() >= 0.0);
        assert!(eps.hi() <= 1e-15, "{eps:?}");
    }

    #[test]
    fn identity_mixing_first_power() {
        // B is diagonal with entries D[m], m ≠ 0; C_1 = D[1] ≈ 0.8209 < 0.9
        let op = identity_op(0.2, 8);
        let cert = mixing_norms(&op, 64, 0.9).unwrap();
        assert_eq!(cert.n, 1);
        assert_eq!(cert.source, MixingSource::Matrix);
        let c1 = &cert.c[1];
        assert!(c1.hi() >= 0.8208687174155399 && c1.hi() <= 0.8208687174156);
    }

    #[test]
    fn nilpotent_block_reaches_zero() {
        // strictly upper-triangular 5×5 Jordan block: B^8 = 0
        let n = 5;
        let b = IvMatrix::from_fn(n, |i, j| {
            if j == i + 1 {
                IvComplex::one()
            } else {
                IvComplex::zero()
            }
        });
        let cert = mixing_norms_of(&b, 64, 1e-30).unwrap();
        assert_eq!(cert.n, 8);
        assert_eq!(cert.c[8].hi(), 0.0);
        // intermediate fills are valid: C_3 ≤ C_1·C_2
        assert!(cert.c[3].hi() <= cert.c[1].hi() * cert.c[2].hi() + 1e-12);
    }

    #[test]
    fn mixing_failure_reports_best() {
        let b = IvMatrix::identity(3);
        match mixing_norms_of(&b, 8, 0.5) {
            Err(Error::Certification { steps, best_c }) => {
                assert_eq!(steps, 8);
                assert!(best_c >= 1.0);
            }
            other => panic!("expected certification failure, got {other:?}"),
        }
    }

    #[test]
    fn error_bound_affine_in_eps() {
        let noise = NoiseParams::new(0.2).unwrap();
        let cert = MixingCertificate {
            n: 1,
            c: vec![IvReal::one(), IvReal::point(0.5)],
            source: MixingSource::Matrix,
        };
        let e0 = error_bound(&cert, &IvReal::zero(), noise, 32).unwrap();
        let e1 = error_bound(&cert, &IvReal::point(1e-3), noise, 32).unwrap();
        // Γ(0.2, 32) ≈ e^{−202}: essentially zero
        assert!(e0.hi() < 1e-80);
        // slope = (Σ C_i)/(1 − C_N) = 1/0.5 = 2
        assert!((e1.hi() - 2e-3).abs() < 1e-15);
    }

    #[test]
    fn invalid_certificate_rejected() {
        let noise = NoiseParams::new(0.5).unwrap();
        let cert = MixingCertificate {
            n: 1,
            c: vec![IvReal::one(), IvReal::one()],
            source: MixingSource::Matrix,
        };
        match error_bound(&cert, &IvReal::zero(), noise, 8) {
            Err(Error::InvalidCertificate) => {}
            other => panic!("expected invalid certificate, got {other:?}"),
        }
    }

    #[test]
    fn apriori_theta_oracle() {
        // θ(σ=1) = √(1 − 2c), 50-digit oracle 0.71837215352609067798…
        let noise = NoiseParams::new(1.0).unwrap();
        let m = apriori_mixing(noise, 1);
        assert!(m.theta.lo() <= 0.7183721535260907 && m.theta.hi() >= 0.7183721535260907);
        assert!(m.theta.width() < 1e-14);
        // power law: l1(2) = l1(1)² within widening
        let m2 = apriori_mixing(noise, 2);
        let sq = m.l1.sqr();
        assert!(sq.intersect(&m2.l1).is_some());
        // vacuous-but-valid region
        let small = apriori_mixing(NoiseParams::new(0.05).unwrap(), 1);
        assert!(small.l1.hi() <= 1.0 && small.l1.hi() > 0.999_999);
    }

    #[test]
    fn apriori_discrete_examples() {
        let noise = NoiseParams::new(0.5).unwrap();
        let d = apriori_discrete_norms(noise, 64, 1);
        assert!(d.l1.contains(129.0) || (d.l1.lo() >= 129.0 && d.l1.lo() < 129.0000001));
        let noise2 = NoiseParams::new(0.2).unwrap();
        let d3 = apriori_discrete_norms(noise2, 16, 3);
        assert!(d3.l1.lo() <= 33.0000000001 && d3.l1.hi() >= 33.0);
        // ratio structure: l1(i=2)/l1(i=1) = 1+Γ ≈ 1
        let d1 = apriori_discrete_norms(noise2, 16, 1);
        let d2 = apriori_discrete_norms(noise2, 16, 2);
        let ratio = d2.l1.div(&d1.l1).unwrap();
        assert!(ratio.contains(1.0) || (ratio.lo() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn identity_pipeline_tiny_error() {
        let noise = NoiseParams::new(0.2).unwrap();
        let d = enclose_density(TestMap::Identity, noise, 32, &CertifyOptions::default()).unwrap();
        assert!(d.e.hi() <= 1e-10, "E = {:?}", d.e);
        let (re, im) = d.g.get(0).mid();
        assert_eq!((re, im), (0.5, 0.0));
        assert_eq!(d.g.max_width(), 0.0);
    }

    #[test]
    fn tent_pipeline_end_to_end() {
        let noise = NoiseParams::new(0.3).unwrap();
        let d = enclose_density(TestMap::Tent, noise, 16, &CertifyOptions::default()).unwrap();
        assert!(d.e.hi().is_finite() && d.e.hi() > 0.0);
        assert!(d.e.hi() < 1e-6, "E = {:?}", d.e);
        // Hermitian symmetry holds exactly
        for j in 1..=16 {
            let p = d.g.get(j);
            let q = d.g.get(-j);
            let (pre, pim) = p.mid();
            let (qre, qim) = q.mid();
            assert_eq!(pre, qre);
            assert_eq!(pim, -qim);
        }
        // certificate text round trip
        let text = certificate_text(&d);
        let (s, k, n, c, e) = certificate_summary(&text).unwrap();
        assert_eq!(s, 0.3);
        assert_eq!(k, 16);
        assert_eq!(n, d.cert.n);
        assert_eq!(c, d.cert.c[d.cert.n].hi());
        assert_eq!(e, d.e.hi());
    }
}
