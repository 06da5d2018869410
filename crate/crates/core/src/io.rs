//! File formats: signal/IF/alpha CSVs, ground-truth JSON, the binary TFR
//! format, and PGM images.
//!
//! TFR layout (little endian): `b"TYCN"`, `u32` version (1), `u32` rows,
//! `u32` cols, `f64` dt, `f64` dw, then `rows * cols` `(re, im)` pairs of
//! `f64` in row-major order.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TycoonError};
use crate::grid::{ChirpTrack, SampledSignal, TFGrid, TFMatrix};
use crate::synth::GIMTComponent;

pub const TFR_MAGIC: &[u8; 4] = b"TYCN";
pub const TFR_VERSION: u32 = 1;

fn format_err(msg: impl Into<String>) -> TycoonError {
    TycoonError::Format(msg.into())
}

/// Attach the offending path to an OS error.
fn at(path: &Path) -> impl Fn(std::io::Error) -> TycoonError + '_ {
    move |e| TycoonError::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

fn read_two_columns(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| format_err(format!("{}: {e}", path.display())))?;
    let (mut t, mut v) = (Vec::new(), Vec::new());
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| format_err(format!("{}: {e}", path.display())))?;
        if rec.len() < 2 {
            return Err(format_err(format!("{}: row {} has {} fields", path.display(), i + 1, rec.len())));
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| format_err(format!("{}: row {}: bad number {s:?}", path.display(), i + 1)))
        };
        t.push(parse(&rec[0])?);
        v.push(parse(&rec[1])?);
    }
    Ok((t, v))
}

fn write_two_columns(path: &Path, header: [&str; 2], t: impl Iterator<Item = f64>, v: &[f64]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| format_err(format!("{}: {e}", path.display())))?;
    w.write_record(header).map_err(|e| format_err(e.to_string()))?;
    for (ti, vi) in t.zip(v) {
        w.write_record([format!("{ti}"), format!("{vi}")])
            .map_err(|e| format_err(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Infer the sample spacing from uniformly spaced time stamps.
fn uniform_dt(t: &[f64], path: &Path) -> Result<f64> {
    if t.len() < 2 {
        return Err(format_err(format!("{}: need at least two rows", path.display())));
    }
    let dt = (t[t.len() - 1] - t[0]) / (t.len() - 1) as f64;
    let tol = 1e-6 * dt.abs().max(1e-12);
    if !(dt > 0.0) || t.windows(2).any(|w| ((w[1] - w[0]) - dt).abs() > tol.max(1e-9 * w[1].abs())) {
        return Err(format_err(format!("{}: time column is not uniformly spaced", path.display())));
    }
    Ok(dt)
}

/// Read a `t,value` CSV. The spacing is inferred from the time column.
pub fn read_signal_csv(path: &Path) -> Result<SampledSignal> {
    let (t, v) = read_two_columns(path)?;
    let dt = uniform_dt(&t, path)?;
    SampledSignal::new(Array1::from(v), dt)
}

pub fn write_signal_csv(path: &Path, f: &SampledSignal) -> Result<()> {
    write_two_columns(path, ["t", "value"], f.times().into_iter(), f.samples().as_slice().expect("contiguous"))
}

/// Read a `t,instantaneous_frequency_hz` trace and resample it onto
/// `len` samples at spacing `dt` with a natural cubic spline.
pub fn read_if_trace(path: &Path, len: usize, dt: f64) -> Result<Array1<f64>> {
    let (t, v) = read_two_columns(path)?;
    let at: Vec<f64> = (0..len).map(|m| m as f64 * dt).collect();
    let out = crate::synth::cubic_spline(&t, &v, &at)?;
    if out.iter().any(|f| !(*f > 0.0)) {
        return Err(TycoonError::InvalidParameter(format!(
            "{}: resampled IF must stay positive",
            path.display()
        )));
    }
    Ok(Array1::from(out))
}

pub fn write_if_trace(path: &Path, inst_freq: &[f64], dt: f64) -> Result<()> {
    write_two_columns(
        path,
        ["t", "instantaneous_frequency_hz"],
        (0..inst_freq.len()).map(|m| m as f64 * dt),
        inst_freq,
    )
}

pub fn write_alpha_csv(path: &Path, alpha: &ChirpTrack, dt: f64) -> Result<()> {
    let a = alpha.values();
    write_two_columns(path, ["t", "alpha"], (0..a.len()).map(|m| m as f64 * dt), a.as_slice().expect("contiguous"))
}

pub fn read_alpha_csv(path: &Path) -> Result<ChirpTrack> {
    let (_, v) = read_two_columns(path)?;
    ChirpTrack::new(Array1::from(v))
}

/// Ground-truth description of a synthetic signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Truth {
    pub dt: f64,
    pub components: Vec<TruthComponent>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthComponent {
    pub amp: Vec<f64>,
    /// Phase in cycles.
    pub phase: Vec<f64>,
    /// Half-open sample range `[start, end)`.
    pub support: [usize; 2],
}

impl Truth {
    pub fn from_components(dt: f64, components: &[GIMTComponent]) -> Self {
        Self {
            dt,
            components: components
                .iter()
                .map(|c| TruthComponent {
                    amp: c.amp.clone(),
                    phase: c.phase.clone(),
                    support: [c.support.0, c.support.1],
                })
                .collect(),
        }
    }

    pub fn to_components(&self) -> Result<Vec<GIMTComponent>> {
        self.components
            .iter()
            .map(|c| GIMTComponent::new(c.amp.clone(), c.phase.clone(), (c.support[0], c.support[1])))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.components.first().map_or(0, |c| c.amp.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path).map_err(at(path))?);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| format_err(e.to_string()))?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let r = BufReader::new(File::open(path).map_err(at(path))?);
    serde_json::from_reader(r).map_err(|e| format_err(format!("{}: {e}", path.display())))
}

pub fn encode_tfr(f: &TFMatrix) -> Vec<u8> {
    let g = f.grid();
    let mut out = Vec::with_capacity(32 + 16 * g.rows() * g.cols());
    out.extend_from_slice(TFR_MAGIC);
    out.extend_from_slice(&TFR_VERSION.to_le_bytes());
    out.extend_from_slice(&(g.rows() as u32).to_le_bytes());
    out.extend_from_slice(&(g.cols() as u32).to_le_bytes());
    out.extend_from_slice(&g.dt().to_le_bytes());
    out.extend_from_slice(&g.dw().to_le_bytes());
    for z in f.values().iter() {
        out.extend_from_slice(&z.re.to_le_bytes());
        out.extend_from_slice(&z.im.to_le_bytes());
    }
    out
}

pub fn decode_tfr(bytes: &[u8]) -> Result<TFMatrix> {
    if bytes.len() < 32 || &bytes[..4] != TFR_MAGIC {
        return Err(format_err("not a TFR file (bad magic)"));
    }
    let u32_at = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().expect("4 bytes"));
    let f64_at = |i: usize| f64::from_le_bytes(bytes[i..i + 8].try_into().expect("8 bytes"));
    let version = u32_at(4);
    if version != TFR_VERSION {
        return Err(format_err(format!("unsupported TFR version {version}")));
    }
    let (rows, cols) = (u32_at(8) as usize, u32_at(12) as usize);
    let (dt, dw) = (f64_at(16), f64_at(24));
    let expected = 32 + 16 * rows * cols;
    if bytes.len() != expected {
        return Err(format_err(format!("TFR payload is {} bytes, expected {expected}", bytes.len())));
    }
    let grid = TFGrid::from_parts(rows, cols, dt, dw)?;
    let values = Array2::from_shape_fn((rows, cols), |(n, m)| {
        let at = 32 + 16 * (n * cols + m);
        Complex64::new(f64_at(at), f64_at(at + 8))
    });
    TFMatrix::from_values(grid, values)
}

pub fn write_tfr(path: &Path, f: &TFMatrix) -> Result<()> {
    let mut w = BufWriter::new(File::create(path).map_err(at(path))?);
    w.write_all(&encode_tfr(f))?;
    w.flush()?;
    Ok(())
}

pub fn read_tfr(path: &Path) -> Result<TFMatrix> {
    let mut bytes = Vec::new();
    File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(at(path))?;
    decode_tfr(&bytes)
}

/// Binary 8-bit PGM of values in `[0, 1]`. Row 0 of the image is the
/// highest frequency bin.
pub fn encode_pgm(image: &Array2<f64>) -> Vec<u8> {
    let (rows, cols) = image.dim();
    let mut out = format!("P5\n{cols} {rows}\n255\n").into_bytes();
    for n in (0..rows).rev() {
        for m in 0..cols {
            out.push((255.0 * image[[n, m]].clamp(0.0, 1.0)).round() as u8);
        }
    }
    out
}

pub fn write_pgm(path: &Path, image: &Array2<f64>) -> Result<()> {
    std::fs::write(path, encode_pgm(image)).map_err(at(path))?;
    Ok(())
}

/// Parse a binary PGM written by [`encode_pgm`] into `(width, height, pixels)`.
pub fn decode_pgm(bytes: &[u8]) -> Result<(usize, usize, Vec<u8>)> {
    let mut fields = Vec::new();
    let mut i = 0;
    while fields.len() < 4 {
        while i < bytes.len() && bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        let start = i;
        while i < bytes.len() && !bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        if start == i {
            return Err(format_err("truncated PGM header"));
        }
        fields.push(String::from_utf8_lossy(&bytes[start..i]).into_owned());
    }
    if fields[0] != "P5" || fields[3] != "255" {
        return Err(format_err("expected an 8-bit P5 graymap"));
    }
    let parse = |s: &str| s.parse::<usize>().map_err(|_| format_err("bad PGM dimension"));
    let (w, h) = (parse(&fields[1])?, parse(&fields[2])?);
    let pixels = bytes[i + 1..].to_vec();
    if pixels.len() != w * h {
        return Err(format_err("PGM payload size mismatch"));
    }
    Ok((w, h, pixels))
}

/// CSV with a time column and one IF column per component (empty outside
/// the support), for overlaying on rendered images.
pub fn write_if_overlay(path: &Path, truth: &Truth) -> Result<()> {
    let comps = truth.to_components()?;
    let ifs: Vec<Vec<f64>> = comps.iter().map(|c| c.inst_freq(truth.dt)).collect();
    let mut w = csv::Writer::from_path(path).map_err(|e| format_err(format!("{}: {e}", path.display())))?;
    let mut header = vec!["t".to_string()];
    header.extend((0..comps.len()).map(|k| format!("if_{}", k + 1)));
    w.write_record(&header).map_err(|e| format_err(e.to_string()))?;
    for m in 0..truth.len() {
        let mut row = vec![format!("{}", m as f64 * truth.dt)];
        for (c, f) in comps.iter().zip(&ifs) {
            row.push(if c.in_support(m) { format!("{}", f[m]) } else { String::new() });
        }
        w.write_record(&row).map_err(|e| format_err(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tfr_round_trip_bit_exact() {
        let grid = TFGrid::new(6, 0.25).unwrap();
        let values = Array2::from_shape_fn(grid.shape(), |(n, m)| {
            Complex64::new((n as f64 + 0.1).ln() * 1e-300, (m as f64).sqrt() / 3.0)
        });
        let f = TFMatrix::from_values(grid, values).unwrap();
        let back = decode_tfr(&encode_tfr(&f)).unwrap();
        for (a, b) in f.values().iter().zip(back.values()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
        assert_eq!(back.grid(), f.grid());
    }

    #[test]
    fn tfr_header_layout_and_rejects() {
        let f = TFMatrix::zeros(TFGrid::new(4, 0.5).unwrap());
        let b = encode_tfr(&f);
        assert_eq!(&b[..4], b"TYCN");
        assert_eq!(u32::from_le_bytes(b[4..8].try_into().unwrap()), 1);
        assert_eq!(u32::from_le_bytes(b[8..12].try_into().unwrap()), 3);
        assert_eq!(u32::from_le_bytes(b[12..16].try_into().unwrap()), 5);
        assert_eq!(f64::from_le_bytes(b[16..24].try_into().unwrap()), 0.5);
        assert_eq!(b.len(), 32 + 16 * 15);
        assert!(decode_tfr(&b[..b.len() - 1]).is_err());
        let mut bad = b.clone();
        bad[0] = b'X';
        assert!(decode_tfr(&bad).is_err());
        let mut v2 = b;
        v2[4] = 2;
        assert!(decode_tfr(&v2).is_err());
    }

    #[test]
    fn pgm_orientation() {
        let img = Array2::from_shape_vec((2, 3), vec![0.0, 0.0, 0.0, 1.0, 0.5, 1.0]).unwrap();
        let b = encode_pgm(&img);
        let (w, h, px) = decode_pgm(&b).unwrap();
        assert_eq!((w, h), (3, 2));
        assert_eq!(px, vec![255, 128, 255, 0, 0, 0]);
    }
}
