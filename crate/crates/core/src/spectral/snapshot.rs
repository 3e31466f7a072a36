//! Binary field snapshots.
//!
//! Layout (all integers little-endian):
//!
//! | offset | size | content                         |
//! |--------|------|---------------------------------|
//! | 0      | 4    | magic `b"SQGF"`                 |
//! | 4      | 4    | format version, u32 (= 1)       |
//! | 8      | 4    | N, u32                          |
//! | 12     | 20   | reserved, zero                  |
//! | 32     | 8·N² | real samples, f64, row-major    |
//!
//! Row-major means sample `(i, j)` at x = (i·h, j·h) is stored at position
//! `j·N + i`.

use std::fs;
use std::path::Path;

use super::field::ScalarField;
use super::grid::GridSpec;
use crate::error::{Result, SqgError};

pub const MAGIC: &[u8; 4] = b"SQGF";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 32;

pub fn encode(field: &ScalarField) -> Vec<u8> {
    let n = field.grid().n();
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * n * n);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(n as u32).to_le_bytes());
    out.extend_from_slice(&[0u8; 20]);
    for v in field.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

/// Decode a snapshot. The dealias fraction is not stored in the file and must
/// come from the run configuration.
pub fn decode(bytes: &[u8], dealias_fraction: f64) -> Result<ScalarField> {
    if bytes.len() < HEADER_LEN {
        return Err(SqgError::Snapshot(format!(
            "file too short for header ({} bytes)",
            bytes.len()
        )));
    }
    if &bytes[0..4] != MAGIC {
        return Err(SqgError::Snapshot("bad magic".into()));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != VERSION {
        return Err(SqgError::Snapshot(format!("unsupported version {version}")));
    }
    let n = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let grid = GridSpec::with_dealias(n, dealias_fraction)?;
    let body = &bytes[HEADER_LEN..];
    if body.len() != 8 * grid.len() {
        return Err(SqgError::Snapshot(format!(
            "expected {} payload bytes for N={n}, found {}",
            8 * grid.len(),
            body.len()
        )));
    }
    let values = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    ScalarField::from_values(grid, values)
}

pub fn write(path: &Path, field: &ScalarField) -> Result<Vec<u8>> {
    let bytes = encode(field);
    fs::write(path, &bytes).map_err(|e| SqgError::io(path, e))?;
    Ok(bytes)
}

pub fn read(path: &Path, dealias_fraction: f64) -> Result<ScalarField> {
    let bytes = fs::read(path).map_err(|e| SqgError::io(path, e))?;
    decode(&bytes, dealias_fraction)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_layout() {
        let g = GridSpec::new(16).unwrap();
        let f = ScalarField::from_fn(g, |x, y| x.sin() * y.cos());
        let bytes = encode(&f);
        assert_eq!(bytes.len(), 32 + 8 * 256);
        assert_eq!(&bytes[..4], b"SQGF");
        assert_eq!(&bytes[4..8], &[1, 0, 0, 0]);
        assert_eq!(&bytes[8..12], &[16, 0, 0, 0]);
        assert!(bytes[12..32].iter().all(|&b| b == 0));
        let v1 = f64::from_le_bytes(bytes[40..48].try_into().unwrap());
        assert_eq!(v1, f.values()[1]);
    }

    #[test]
    fn decode_is_bit_exact() {
        let g = GridSpec::new(32).unwrap();
        let f = ScalarField::from_fn(g, |x, y| (x + 2.0 * y).sin() + 0.1);
        let back = decode(&encode(&f), g.dealias_fraction()).unwrap();
        assert_eq!(back.values(), f.values());
        assert_eq!(back.coeffs(), f.coeffs());
    }

    #[test]
    fn rejects_damaged_input() {
        let g = GridSpec::new(16).unwrap();
        let mut bytes = encode(&ScalarField::zeros(g));
        assert!(decode(&bytes[..100], 2.0 / 3.0).is_err());
        bytes[0] = b'X';
        assert!(decode(&bytes, 2.0 / 3.0).is_err());
    }
}
