//! CIFG grid files and PGM previews.
//!
//! CIFG v1 layout: magic `CIFG`, `u8` version (1), `u8` dtype (0 = f64 real,
//! 1 = complex128 interleaved re/im), `u32` LE rows, `u32` LE cols, then the
//! row-major little-endian payload.

use std::fs;
use std::path::Path;

use num_complex::Complex64;

use super::grid::{ComplexGrid, RealGrid};
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"CIFG";
const VERSION: u8 = 1;
const HEADER_LEN: usize = 14;

#[derive(Clone, Debug, PartialEq)]
pub enum GridFile {
    Real(RealGrid),
    Complex(ComplexGrid),
}

impl GridFile {
    pub fn shape(&self) -> (usize, usize) {
        match self {
            GridFile::Real(g) => g.shape(),
            GridFile::Complex(g) => g.shape(),
        }
    }

    pub fn into_real(self) -> Result<RealGrid> {
        match self {
            GridFile::Real(g) => Ok(g),
            GridFile::Complex(_) => Err(Error::Format("expected a real grid".into())),
        }
    }

    pub fn into_complex(self) -> ComplexGrid {
        match self {
            GridFile::Real(g) => g.to_complex(),
            GridFile::Complex(g) => g,
        }
    }
}

fn header(dtype: u8, rows: usize, cols: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN);
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.push(dtype);
    out.extend_from_slice(&(rows as u32).to_le_bytes());
    out.extend_from_slice(&(cols as u32).to_le_bytes());
    out
}

pub fn encode_real(g: &RealGrid) -> Vec<u8> {
    let mut out = header(0, g.rows(), g.cols());
    out.reserve(g.data().len() * 8);
    for v in g.data() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn encode_complex(g: &ComplexGrid) -> Vec<u8> {
    let mut out = header(1, g.rows(), g.cols());
    out.reserve(g.data().len() * 16);
    for c in g.data() {
        out.extend_from_slice(&c.re.to_le_bytes());
        out.extend_from_slice(&c.im.to_le_bytes());
    }
    out
}

pub fn decode(bytes: &[u8]) -> Result<GridFile> {
    if bytes.len() < HEADER_LEN || &bytes[..4] != MAGIC {
        return Err(Error::Format("missing CIFG magic".into()));
    }
    if bytes[4] != VERSION {
        return Err(Error::Format(format!("unsupported CIFG version {}", bytes[4])));
    }
    let dtype = bytes[5];
    let rows = u32::from_le_bytes(bytes[6..10].try_into().unwrap()) as usize;
    let cols = u32::from_le_bytes(bytes[10..14].try_into().unwrap()) as usize;
    let payload = &bytes[HEADER_LEN..];
    let f64_at = |k: usize| f64::from_le_bytes(payload[8 * k..8 * k + 8].try_into().unwrap());
    match dtype {
        0 => {
            if payload.len() != rows * cols * 8 {
                return Err(Error::Format(format!(
                    "payload is {} bytes, expected {}",
                    payload.len(),
                    rows * cols * 8
                )));
            }
            let data = (0..rows * cols).map(f64_at).collect();
            Ok(GridFile::Real(RealGrid::new(rows, cols, data)?))
        }
        1 => {
            if payload.len() != rows * cols * 16 {
                return Err(Error::Format(format!(
                    "payload is {} bytes, expected {}",
                    payload.len(),
                    rows * cols * 16
                )));
            }
            let data = (0..rows * cols)
                .map(|k| Complex64::new(f64_at(2 * k), f64_at(2 * k + 1)))
                .collect();
            Ok(GridFile::Complex(ComplexGrid::new(rows, cols, data)?))
        }
        d => Err(Error::Format(format!("unknown CIFG dtype {d}"))),
    }
}

pub fn write_real(path: &Path, g: &RealGrid) -> Result<()> {
    fs::write(path, encode_real(g)).map_err(|e| Error::io(path, e))
}

pub fn write_complex(path: &Path, g: &ComplexGrid) -> Result<()> {
    fs::write(path, encode_complex(g)).map_err(|e| Error::io(path, e))
}

pub fn read(path: &Path) -> Result<GridFile> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes)
}

/// Binary 8-bit PGM (`P5`). Values are clamped to `[0, 1]` and scaled by 255.
pub fn encode_pgm(g: &RealGrid) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", g.cols(), g.rows()).into_bytes();
    out.extend(
        g.data()
            .iter()
            .map(|v| (v.clamp(0.0, 1.0) * 255.0).round() as u8),
    );
    out
}

pub fn write_pgm(path: &Path, g: &RealGrid) -> Result<()> {
    fs::write(path, encode_pgm(g)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn header_layout() {
        let g = RealGrid::from_fn(2, 3, |i, j| (i * 3 + j) as f64);
        let b = encode_real(&g);
        assert_eq!(&b[..4], b"CIFG");
        assert_eq!(b[4], 1);
        assert_eq!(b[5], 0);
        assert_eq!(&b[6..10], &2u32.to_le_bytes());
        assert_eq!(&b[10..14], &3u32.to_le_bytes());
        assert_eq!(b.len(), 14 + 6 * 8);
        assert_eq!(&b[14 + 8..14 + 16], &1.0f64.to_le_bytes());
    }

    #[test]
    fn rejects_corrupt_files() {
        assert!(decode(b"NOPE").is_err());
        let mut b = encode_real(&RealGrid::zeros(2, 2));
        b.pop();
        assert!(decode(&b).is_err());
        let mut b = encode_real(&RealGrid::zeros(2, 2));
        b[5] = 9;
        assert!(decode(&b).is_err());
    }

    #[test]
    fn pgm_header_and_clamp() {
        let g = RealGrid::new(1, 3, vec![-1.0, 0.5, 2.0]).unwrap();
        let b = encode_pgm(&g);
        assert!(b.starts_with(b"P5\n3 1\n255\n"));
        assert_eq!(&b[b.len() - 3..], &[0, 128, 255]);
    }

    proptest! {
        #[test]
        fn complex_round_trip(rows in 1usize..6, cols in 1usize..6, seed in any::<u64>()) {
            let g = ComplexGrid::from_fn(rows, cols, |i, j| {
                let t = (seed.wrapping_mul(31).wrapping_add((i * 7 + j) as u64) % 1000) as f64;
                Complex64::new(t / 7.0, -t / 3.0)
            });
            let back = decode(&encode_complex(&g)).unwrap();
            prop_assert_eq!(back, GridFile::Complex(g));
        }
    }
}
