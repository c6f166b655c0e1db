//! TPWF field files and atomic output.
//!
//! Layout (all little-endian): `b"TPWF"`, `u32` version, `u32 n_t`, `u32 n_x`,
//! `f64 box_len`, `f64 period`, then `n_t * n_x^3` `f64` samples in
//! `(t, x1, x2, x3)` row-major order.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::GridSpec;

pub const MAGIC: &[u8; 4] = b"TPWF";
pub const VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 4 + 4 + 8 + 8;

pub fn encode_field(f: &Field) -> Vec<u8> {
    let g = f.grid();
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * g.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(g.n_t as u32).to_le_bytes());
    out.extend_from_slice(&(g.n_x as u32).to_le_bytes());
    out.extend_from_slice(&g.box_len.to_le_bytes());
    out.extend_from_slice(&g.period.to_le_bytes());
    for v in f.samples() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

fn read_u32(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(b[at..at + 4].try_into().expect("4 bytes"))
}

fn read_f64(b: &[u8], at: usize) -> f64 {
    f64::from_le_bytes(b[at..at + 8].try_into().expect("8 bytes"))
}

pub fn decode_field(bytes: &[u8]) -> Result<Field> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Format(format!("{} bytes is shorter than the header", bytes.len())));
    }
    if &bytes[..4] != MAGIC {
        return Err(Error::Format("missing TPWF magic".into()));
    }
    let version = read_u32(bytes, 4);
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let grid = GridSpec::new(
        read_u32(bytes, 8) as usize,
        read_u32(bytes, 12) as usize,
        read_f64(bytes, 16),
        read_f64(bytes, 24),
    )?;
    let body = &bytes[HEADER_LEN..];
    if body.len() != 8 * grid.len() {
        return Err(Error::Format(format!("expected {} sample bytes, found {}", 8 * grid.len(), body.len())));
    }
    let samples = body.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect();
    Field::from_samples(grid, samples)
}

/// Write via a temporary file in the target directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}

pub fn write_field(path: &Path, f: &Field) -> Result<()> {
    write_atomic(path, &encode_field(f))
}

pub fn read_field(path: &Path) -> Result<Field> {
    decode_field(&fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_layout() {
        let g = GridSpec::new(4, 4, 2.5, 3.0).unwrap();
        let f = Field::from_fn(g, |t, x| t - x[1]);
        let b = encode_field(&f);
        assert_eq!(&b[..4], b"TPWF");
        assert_eq!(b[4..8], [1, 0, 0, 0]);
        assert_eq!(b[8..12], [4, 0, 0, 0]);
        assert_eq!(f64::from_le_bytes(b[16..24].try_into().unwrap()), 2.5);
        assert_eq!(b.len(), 32 + 8 * 256);
        assert_eq!(f64::from_le_bytes(b[32 + 8..40 + 8].try_into().unwrap()), f.samples()[1]);
    }

    #[test]
    fn corrupt_input_is_rejected() {
        let g = GridSpec::new(4, 4, 1.0, 1.0).unwrap();
        let mut b = encode_field(&Field::zeros(g));
        assert!(decode_field(&b[..b.len() - 1]).is_err());
        b[0] = b'X';
        assert!(decode_field(&b).is_err());
        assert!(decode_field(&[]).is_err());
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let g = GridSpec::new(4, 4, 1.0, 1.0).unwrap();
        let f = Field::from_fn(g, |t, x| (t * 3.3 + x[0]).sin() / 7.0);
        let path = dir.path().join("sub/u.tpwf");
        write_field(&path, &f).unwrap();
        assert_eq!(read_field(&path).unwrap(), f);
    }
}
