//! Artifact emission: sweep CSV with full-round-trip float formatting,
//! certified-sign portable pixmaps, and mixing-rate heatmaps.
//!
//! CSV rows print every float with the shortest representation that parses
//! back to the identical bit pattern, so `read_csv(write_csv(rows))` loses
//! nothing. Pixel grids share the sweep's layout: one image column per map
//! parameter (ascending), one image row per σ (ascending, smallest σ at the
//! top), and the flat row slice ordered column-major exactly as a sweep
//! returns it.

use std::fs::{self, File};
use std::io::{BufWriter, Write as _};
use std::path::{Path, PathBuf};

use crate::explore::{Sign, SweepRow};
use crate::{Error, Result};

/// Fixed CSV header.
pub const CSV_HEADER: &str =
    "alpha,beta,sigma,modes,lambda_lo,lambda_hi,err_l2,eps,n_mix,cn_hi,runtime_s";

/// Red: certified λ > 0 (chaotic regime).
pub const SIGN_POSITIVE: [u8; 3] = [200, 40, 40];
/// Blue: certified λ < 0 (synchronization regime).
pub const SIGN_NEGATIVE: [u8; 3] = [40, 70, 210];
/// Gray: 0 ∈ λ or no result.
pub const SIGN_INDETERMINATE: [u8; 3] = [128, 128, 128];

/// One CSV data line (no newline).
pub fn csv_line(r: &SweepRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{}",
        r.alpha,
        r.beta,
        r.sigma,
        r.modes,
        r.lambda_lo,
        r.lambda_hi,
        r.err_l2,
        r.eps,
        r.n_mix,
        r.cn_hi,
        r.runtime_s
    )
}

/// Write a complete CSV file: header plus one line per row.
pub fn write_csv(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let mut s = String::with_capacity(rows.len() * 96 + CSV_HEADER.len() + 1);
    s.push_str(CSV_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&csv_line(r));
        s.push('\n');
    }
    fs::write(path, s).map_err(|e| Error::io(path, e))
}

/// Incremental CSV writer: the header is written on creation and every row
/// is flushed as it arrives, so partial sweep output is always readable.
pub struct CsvWriter {
    out: BufWriter<File>,
    path: PathBuf,
}

impl CsvWriter {
    pub fn create(path: &Path) -> Result<Self> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = CsvWriter {
            out: BufWriter::new(file),
            path: path.to_path_buf(),
        };
        w.raw_line(CSV_HEADER)?;
        Ok(w)
    }

    fn raw_line(&mut self, line: &str) -> Result<()> {
        writeln!(self.out, "{line}")
            .and_then(|_| self.out.flush())
            .map_err(|e| Error::io(&self.path, e))
    }

    pub fn write_row(&mut self, r: &SweepRow) -> Result<()> {
        self.raw_line(&csv_line(r))
    }
}

/// Parse CSV text produced by [`write_csv`]; lines beginning with `#` and
/// blank lines are ignored. Floats round-trip bit-exactly.
pub fn parse_csv(text: &str) -> Result<Vec<SweepRow>> {
    let mut lines = text
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Format("empty CSV".into()))?;
    if header.trim() != CSV_HEADER {
        return Err(Error::Format(format!(
            "unexpected CSV header: {}",
            header.trim()
        )));
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 11 {
            return Err(Error::Format(format!(
                "row {}: expected 11 fields, found {}",
                i + 1,
                fields.len()
            )));
        }
        let f = |j: usize| -> Result<f64> {
            fields[j]
                .parse::<f64>()
                .map_err(|_| Error::Format(format!("row {}: bad number {:?}", i + 1, fields[j])))
        };
        let u = |j: usize| -> Result<usize> {
            fields[j]
                .parse::<usize>()
                .map_err(|_| Error::Format(format!("row {}: bad count {:?}", i + 1, fields[j])))
        };
        rows.push(SweepRow {
            alpha: f(0)?,
            beta: f(1)?,
            sigma: f(2)?,
            modes: u(3)?,
            lambda_lo: f(4)?,
            lambda_hi: f(5)?,
            err_l2: f(6)?,
            eps: f(7)?,
            n_mix: u(8)?,
            cn_hi: f(9)?,
            runtime_s: f(10)?,
            failure: None,
        });
    }
    Ok(rows)
}

/// Read rows back from a CSV file.
pub fn read_csv(path: &Path) -> Result<Vec<SweepRow>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_csv(&text)
}

/// Write a binary portable pixmap (P6).
pub fn write_ppm(path: &Path, width: usize, height: usize, pixels: &[u8]) -> Result<()> {
    if pixels.len() != 3 * width * height {
        return Err(Error::Dimension {
            expected: 3 * width * height,
            got: pixels.len(),
        });
    }
    let mut buf = Vec::with_capacity(pixels.len() + 32);
    buf.extend_from_slice(format!("P6\n{width} {height}\n255\n").as_bytes());
    buf.extend_from_slice(pixels);
    fs::write(path, buf).map_err(|e| Error::io(path, e))
}

fn grid_pixels<F>(rows: &[SweepRow], width: usize, height: usize, color: F) -> Result<Vec<u8>>
where
    F: Fn(&SweepRow) -> [u8; 3],
{
    if rows.len() != width * height {
        return Err(Error::Dimension {
            expected: width * height,
            got: rows.len(),
        });
    }
    let mut px = vec![0u8; 3 * width * height];
    for c in 0..width {
        for r in 0..height {
            let o = 3 * (r * width + c);
            px[o..o + 3].copy_from_slice(&color(&rows[c * height + r]));
        }
    }
    Ok(px)
}

/// RGB pixels of the certified-sign map for a `width` (map parameters) ×
/// `height` (σ values) sweep, rows in sweep order.
pub fn sign_map_pixels(rows: &[SweepRow], width: usize, height: usize) -> Result<Vec<u8>> {
    grid_pixels(rows, width, height, |r| match r.certified_sign() {
        Sign::Positive => SIGN_POSITIVE,
        Sign::Negative => SIGN_NEGATIVE,
        Sign::Indeterminate => SIGN_INDETERMINATE,
    })
}

/// Emit the certified-sign pixmap.
pub fn write_sign_map(path: &Path, rows: &[SweepRow], width: usize, height: usize) -> Result<()> {
    write_ppm(path, width, height, &sign_map_pixels(rows, width, height)?)
}

/// Grayscale level for a certified mixing bound: log₁₀(C_N) clamped to
/// [−8, 0] mapped onto [0, 255], so black = fastest certified mixing and
/// white = no contraction certified. Missing values (NaN) render white.
pub fn mixing_level(cn_hi: f64) -> u8 {
    if cn_hi.is_nan() {
        return 255;
    }
    let t = (cn_hi.log10().clamp(-8.0, 0.0) + 8.0) / 8.0;
    (t * 255.0).round() as u8
}

/// Grayscale pixels of the mixing heatmap (same layout as the sign map).
pub fn mixing_map_pixels(rows: &[SweepRow], width: usize, height: usize) -> Result<Vec<u8>> {
    grid_pixels(rows, width, height, |r| {
        let g = mixing_level(r.cn_hi);
        [g, g, g]
    })
}

/// Emit the mixing heatmap pixmap.
pub fn write_mixing_map(
    path: &Path,
    rows: &[SweepRow],
    width: usize,
    height: usize,
) -> Result<()> {
    write_ppm(path, width, height, &mixing_map_pixels(rows, width, height)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::MapParams;

    fn mk_row(alpha: f64, sigma: f64, lo: f64, hi: f64) -> SweepRow {
        SweepRow {
            alpha,
            beta: 1.0,
            sigma,
            modes: 128,
            lambda_lo: lo,
            lambda_hi: hi,
            err_l2: 3.5e-13,
            eps: 1.25e-14,
            n_mix: 3,
            cn_hi: 0.41,
            runtime_s: 0.0,
            failure: None,
        }
    }

    fn tmp(name: &str) -> PathBuf {
        std::env::temp_dir().join(format!("lyapcert-emit-{}-{}", std::process::id(), name))
    }

    #[test]
    fn csv_shape_and_header() {
        let rows: Vec<SweepRow> = (0..4)
            .map(|i| mk_row(3.0, 0.1 * (i + 1) as f64, -0.1, 0.2))
            .collect();
        let path = tmp("shape.csv");
        write_csv(&path, &rows).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], CSV_HEADER);
        fs::remove_file(&path).ok();
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let mut rows = vec![
            mk_row(3.25, 0.2, 0.13961086236946672, 0.13961086236947814),
            mk_row(3.0, 1.0 / 3.0, -1e-300, f64::MIN_POSITIVE),
        ];
        rows.push(SweepRow::failure(
            MapParams::new(3.5, 0.75).unwrap(),
            0.4,
            128,
            "synthetic".into(),
        ));
        let path = tmp("roundtrip.csv");
        write_csv(&path, &rows).unwrap();
        let back = read_csv(&path).unwrap();
        assert_eq!(back.len(), rows.len());
        for (a, b) in rows.iter().zip(&back) {
            assert_eq!(a.alpha.to_bits(), b.alpha.to_bits());
            assert_eq!(a.sigma.to_bits(), b.sigma.to_bits());
            assert_eq!(a.modes, b.modes);
            assert_eq!(a.n_mix, b.n_mix);
            for (x, y) in [
                (a.lambda_lo, b.lambda_lo),
                (a.lambda_hi, b.lambda_hi),
                (a.err_l2, b.err_l2),
                (a.eps, b.eps),
                (a.cn_hi, b.cn_hi),
            ] {
                if x.is_nan() {
                    assert!(y.is_nan());
                } else {
                    assert_eq!(x.to_bits(), y.to_bits());
                }
            }
        }
        fs::remove_file(&path).ok();
    }

    #[test]
    fn incremental_writer_matches_batch_output() {
        let rows: Vec<SweepRow> = (0..3).map(|i| mk_row(3.0, 0.2 + 0.1 * i as f64, 0.1, 0.2)).collect();
        let p1 = tmp("inc.csv");
        let p2 = tmp("batch.csv");
        let mut w = CsvWriter::create(&p1).unwrap();
        for r in &rows {
            w.write_row(r).unwrap();
        }
        drop(w);
        write_csv(&p2, &rows).unwrap();
        assert_eq!(fs::read(&p1).unwrap(), fs::read(&p2).unwrap());
        fs::remove_file(&p1).ok();
        fs::remove_file(&p2).ok();
    }

    #[test]
    fn sign_map_layout_and_exclusivity() {
        // 2 map-parameter columns × 3 σ rows, sweep (column-major) order:
        // column 0: +, gray, −   column 1: −, −, +
        let rows = vec![
            mk_row(3.0, 0.1, 0.5, 0.6),
            mk_row(3.0, 0.2, -0.1, 0.1),
            mk_row(3.0, 0.3, -0.6, -0.5),
            mk_row(3.5, 0.1, -0.3, -0.2),
            mk_row(3.5, 0.2, -0.3, -0.2),
            mk_row(3.5, 0.3, 0.2, 0.3),
        ];
        let px = sign_map_pixels(&rows, 2, 3).unwrap();
        assert_eq!(px.len(), 18);
        let pixel = |r: usize, c: usize| -> [u8; 3] {
            let o = 3 * (r * 2 + c);
            [px[o], px[o + 1], px[o + 2]]
        };
        assert_eq!(pixel(0, 0), SIGN_POSITIVE); // smallest σ at the top
        assert_eq!(pixel(1, 0), SIGN_INDETERMINATE);
        assert_eq!(pixel(2, 0), SIGN_NEGATIVE);
        assert_eq!(pixel(0, 1), SIGN_NEGATIVE);
        assert_eq!(pixel(2, 1), SIGN_POSITIVE);
        for p in px.chunks(3) {
            let p: [u8; 3] = [p[0], p[1], p[2]];
            assert!(p == SIGN_POSITIVE || p == SIGN_NEGATIVE || p == SIGN_INDETERMINATE);
        }
        // dimension mismatch is rejected
        assert!(sign_map_pixels(&rows, 3, 3).is_err());

        let path = tmp("sign.ppm");
        write_sign_map(&path, &rows, 2, 3).unwrap();
        let bytes = fs::read(&path).unwrap();
        assert!(bytes.starts_with(b"P6\n2 3\n255\n"));
        assert_eq!(bytes.len(), b"P6\n2 3\n255\n".len() + 18);
        fs::remove_file(&path).ok();
    }

    #[test]
    fn mixing_levels_clamp_and_scale() {
        assert_eq!(mixing_level(1.0), 255);
        assert_eq!(mixing_level(2.0), 255); // clamped above
        assert_eq!(mixing_level(1e-8), 0);
        assert_eq!(mixing_level(0.0), 0); // −∞ clamps to the floor
        assert_eq!(mixing_level(1e-4), 128); // midpoint of the scale
        assert_eq!(mixing_level(f64::NAN), 255);
        let mut rows = vec![mk_row(3.0, 0.1, 0.1, 0.2)];
        rows[0].cn_hi = 1e-8;
        let px = mixing_map_pixels(&rows, 1, 1).unwrap();
        assert_eq!(px, vec![0, 0, 0]);
    }
}
