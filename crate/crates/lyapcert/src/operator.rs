//! Discretized transfer operator types: the deterministic matrix, the
//! composed annealed operator, application to coefficient vectors, and a
//! portable binary dump for reusing matrices across noise levels.

use std::io::{Read as _, Write as _};
use std::path::Path;

use crate::complex::IvComplex;
use crate::fourier::FourierVector;
use crate::interval::IvReal;
use crate::linalg::IvMatrix;
use crate::maps::{MapParams, TestMap};
use crate::{Error, Result};

/// Galerkin matrix of the deterministic transfer operator:
/// M[m,j] ⊇ ½∫_{−1}^{1} e^{iπ(jy − mT(y))} dy, rows/cols indexed −K..K.
#[derive(Clone)]
pub struct DeterministicMatrix {
    pub k: usize,
    pub map: TestMap,
    pub mat: IvMatrix,
    /// Smallest σ whose tolerance profile this matrix was assembled for;
    /// rows crushed below that σ's multiplier hold the trivial hull and the
    /// matrix stays a valid (if wide) enclosure for any σ ≥ 0.
    pub min_sigma: f64,
}

impl DeterministicMatrix {
    /// Entry M[m,j], m, j ∈ [−K, K].
    #[inline]
    pub fn entry(&self, m: i64, j: i64) -> &IvComplex {
        let k = self.k as i64;
        self.mat.get((m + k) as usize, (j + k) as usize)
    }
}

/// The discretized annealed operator A = D_σ·M plus its tail bound Γ_{σ,K}.
#[derive(Clone)]
pub struct DiscretizedOperator {
    pub k: usize,
    pub sigma: f64,
    pub a: IvMatrix,
    pub gamma: IvReal,
}

impl DiscretizedOperator {
    #[inline]
    pub fn entry(&self, m: i64, j: i64) -> &IvComplex {
        let k = self.k as i64;
        self.a.get((m + k) as usize, (j + k) as usize)
    }
}

/// A[m,j] = D[m]·M[m,j]; row m = 0 keeps the exact unit row.
pub fn compose(
    multiplier: &[IvReal],
    m: &DeterministicMatrix,
    gamma: IvReal,
    sigma: f64,
) -> Result<DiscretizedOperator> {
    let n = 2 * m.k + 1;
    if multiplier.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: multiplier.len(),
        });
    }
    let a = IvMatrix::from_fn(n, |i, j| m.mat.get(i, j).scale_iv(&multiplier[i]));
    Ok(DiscretizedOperator {
        k: m.k,
        sigma,
        a,
        gamma,
    })
}

/// Interval matrix–vector application; mode 0 of the output equals mode 0 of
/// the input exactly (mass row).
pub fn apply(op: &DiscretizedOperator, v: &FourierVector) -> Result<FourierVector> {
    if v.modes() != op.k {
        return Err(Error::Dimension {
            expected: op.k,
            got: v.modes(),
        });
    }
    let out = op.a.matvec(v.as_slice())?;
    FourierVector::from_coeffs(op.k, out, v.real_valued)
}

pub(crate) fn map_descriptor(map: &TestMap) -> String {
    match map {
        TestMap::Family(MapParams { alpha, beta }) => format!("family {alpha} {beta}"),
        TestMap::Identity => "identity".to_string(),
        TestMap::Constant(c) => format!("constant {c}"),
        TestMap::Tent => "tent".to_string(),
    }
}

pub(crate) fn parse_descriptor(desc: &[&str]) -> Result<TestMap> {
    match desc {
        ["identity"] => Ok(TestMap::Identity),
        ["tent"] => Ok(TestMap::Tent),
        ["constant", c] => {
            let c: f64 = c
                .parse()
                .map_err(|_| Error::Format("bad constant in matrix header".into()))?;
            Ok(TestMap::Constant(c))
        }
        ["family", a, b] => {
            let alpha: f64 = a
                .parse()
                .map_err(|_| Error::Format("bad alpha in matrix header".into()))?;
            let beta: f64 = b
                .parse()
                .map_err(|_| Error::Format("bad beta in matrix header".into()))?;
            Ok(TestMap::Family(MapParams::new(alpha, beta)?))
        }
        _ => Err(Error::Format("unknown map descriptor".into())),
    }
}

/// Self-describing binary dump: ASCII header line
/// `LYAPMAT1 <dim> <min_sigma> <map descriptor>\n` followed by four
/// little-endian binary64 arrays of length dim² each:
/// re_lo, re_hi, im_lo, im_hi, rows m = −K..K outer, columns j = −K..K.
pub fn dump_matrix(m: &DeterministicMatrix, path: &Path) -> Result<()> {
    let n = 2 * m.k + 1;
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let header = format!(
        "LYAPMAT1 {} {} {}\n",
        n,
        m.min_sigma,
        map_descriptor(&m.map)
    );
    f.write_all(header.as_bytes()).map_err(|e| Error::io(path, e))?;
    let mut buf = Vec::with_capacity(n * n * 8);
    for pick in 0..4usize {
        buf.clear();
        for i in 0..n {
            for j in 0..n {
                let z = m.mat.get(i, j);
                let v = match pick {
                    0 => z.re().lo(),
                    1 => z.re().hi(),
                    2 => z.im().lo(),
                    _ => z.im().hi(),
                };
                buf.extend_from_slice(&v.to_le_bytes());
            }
        }
        f.write_all(&buf).map_err(|e| Error::io(path, e))?;
    }
    Ok(())
}

/// Inverse of `dump_matrix`.
pub fn load_matrix(path: &Path) -> Result<DeterministicMatrix> {
    let mut f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut bytes = Vec::new();
    f.read_to_end(&mut bytes).map_err(|e| Error::io(path, e))?;
    let nl = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| Error::Format("missing matrix header line".into()))?;
    let header = std::str::from_utf8(&bytes[..nl])
        .map_err(|_| Error::Format("matrix header is not UTF-8".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() < 3 || fields[0] != "LYAPMAT1" {
        return Err(Error::Format("not a LYAPMAT1 file".into()));
    }
    let n: usize = fields[1]
        .parse()
        .map_err(|_| Error::Format("bad dimension in matrix header".into()))?;
    if n == 0 || n % 2 == 0 {
        return Err(Error::Format("matrix dimension must be odd".into()));
    }
    let min_sigma: f64 = fields[2]
        .parse()
        .map_err(|_| Error::Format("bad min_sigma in matrix header".into()))?;
    let map = parse_descriptor(&fields[3..])?;
    let body = &bytes[nl + 1..];
    if body.len() != 4 * n * n * 8 {
        return Err(Error::Format(format!(
            "matrix body has {} bytes, expected {}",
            body.len(),
            4 * n * n * 8
        )));
    }
    let read_plane = |p: usize, idx: usize| -> f64 {
        let off = (p * n * n + idx) * 8;
        f64::from_le_bytes(body[off..off + 8].try_into().unwrap())
    };
    let mat = IvMatrix::from_fn(n, |i, j| {
        let idx = i * n + j;
        IvComplex::new(
            IvReal::new(read_plane(0, idx), read_plane(1, idx)),
            IvReal::new(read_plane(2, idx), read_plane(3, idx)),
        )
    });
    Ok(DeterministicMatrix {
        k: (n - 1) / 2,
        map,
        mat,
        min_sigma,
    })
}
