//! Field snapshot format (`.sfld`): a single-line JSON header
//! `{"n": <grid>, "name": <str>, "t": <time>}` terminated by a newline,
//! followed by the raw coefficients as little-endian 64-bit float pairs
//! `(re, im)` in wavevector-major (row-major FFT index), component-minor
//! order.

use std::fs;
use std::io::Read;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::atomic::write_atomic;
use crate::spectral::{SpectralField, TorusGrid};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SfldHeader {
    pub n: usize,
    pub name: String,
    pub t: f64,
}

pub fn write_sfld(path: &Path, field: &SpectralField, name: &str, t: f64) -> Result<()> {
    let n = field.grid().resolution();
    let header = SfldHeader {
        n,
        name: name.to_string(),
        t,
    };
    let mut bytes = serde_json::to_vec(&header).expect("header serializes");
    bytes.push(b'\n');
    bytes.reserve(n * n * n * 3 * 16);
    for i0 in 0..n {
        for i1 in 0..n {
            for i2 in 0..n {
                for j in 0..3 {
                    let c = field.component(j)[[i0, i1, i2]];
                    bytes.extend_from_slice(&c.re.to_le_bytes());
                    bytes.extend_from_slice(&c.im.to_le_bytes());
                }
            }
        }
    }
    write_atomic(path, &bytes)
}

pub fn read_sfld(path: &Path) -> Result<(SpectralField, SfldHeader)> {
    let display = path.display().to_string();
    let mut file = fs::File::open(path).map_err(|e| Error::io(&display, e))?;
    let mut bytes = Vec::new();
    file.read_to_end(&mut bytes)
        .map_err(|e| Error::io(&display, e))?;
    let newline = bytes
        .iter()
        .position(|b| *b == b'\n')
        .ok_or_else(|| Error::format(&display, "missing header line"))?;
    let header: SfldHeader = serde_json::from_slice(&bytes[..newline])
        .map_err(|e| Error::format(&display, format!("bad header: {e}")))?;
    let n = header.n;
    let body = &bytes[newline + 1..];
    let expected = n * n * n * 3 * 16;
    if body.len() != expected {
        return Err(Error::format(
            &display,
            format!("expected {expected} payload bytes, found {}", body.len()),
        ));
    }
    let grid: Arc<TorusGrid> = TorusGrid::new(n)?;
    let mut field = SpectralField::zeros(grid);
    let mut off = 0;
    for i0 in 0..n {
        for i1 in 0..n {
            for i2 in 0..n {
                for j in 0..3 {
                    let re = f64::from_le_bytes(body[off..off + 8].try_into().unwrap());
                    let im = f64::from_le_bytes(body[off + 8..off + 16].try_into().unwrap());
                    field.component_mut(j)[[i0, i1, i2]] = Complex64::new(re, im);
                    off += 16;
                }
            }
        }
    }
    Ok((field, header))
}
