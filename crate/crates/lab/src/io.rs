//! File formats.
//!
//! * Field CSV: header `k,re,im`, one Fourier mode per row in FFT order.
//! * Snapshot CSV: header `x,psi,s` (modulation) or `X,re,im` (CGL), one
//!   grid point per row.
//! * Binary field dump, little endian: magic `EKFD`, n as u64, L as f64,
//!   dtype as u32 (0 Fourier coefficients, 1 physical values), then n pairs
//!   of f64 (Re, Im).
//!
//! Numbers in CSV files are written with 17 significant digits.

use std::fs;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use eckhaus_core::{AnsatzCoefficients, CglParams, ExpansionCoefficients};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::modulation::ModulationState;
use crate::{LabError, Result, SpectralField, SpectralGrid};

pub const MAGIC: &[u8; 4] = b"EKFD";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u32)]
pub enum Dtype {
    Fourier = 0,
    Physical = 1,
}

/// A float with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV with a header row; every cell is a float.
pub fn write_csv(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "{}", header.join(","))?;
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(fmt17).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_field_csv(path: &Path, u: &SpectralField) -> Result<()> {
    let g = *u.grid();
    write_csv(
        path,
        &["k", "re", "im"],
        u.coeffs().iter().enumerate().map(|(i, c)| vec![g.wavenumber(i), c.re, c.im]),
    )
}

pub fn write_modulation_csv(path: &Path, v: &ModulationState) -> Result<()> {
    let pts = v.grid().points();
    let (psi, s) = (v.psi.to_real(), v.s.to_real());
    write_csv(path, &["x", "psi", "s"], (0..pts.len()).map(|j| vec![pts[j], psi[j], s[j]]))
}

pub fn write_cgl_csv(path: &Path, u: &SpectralField) -> Result<()> {
    let pts = u.grid().points();
    let vals = u.to_complex();
    write_csv(path, &["X", "re", "im"], pts.iter().zip(&vals).map(|(x, z)| vec![*x, z.re, z.im]))
}

pub fn write_field_binary(path: &Path, u: &SpectralField, dtype: Dtype) -> Result<()> {
    let g = u.grid();
    let data = match dtype {
        Dtype::Fourier => u.coeffs().to_vec(),
        Dtype::Physical => u.to_complex(),
    };
    let mut w = BufWriter::new(fs::File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&(g.n() as u64).to_le_bytes())?;
    w.write_all(&g.length().to_le_bytes())?;
    w.write_all(&(dtype as u32).to_le_bytes())?;
    for z in data {
        w.write_all(&z.re.to_le_bytes())?;
        w.write_all(&z.im.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a binary dump back as (grid, dtype, values).
pub fn read_field_binary(path: &Path) -> Result<(SpectralGrid, Dtype, Vec<Complex64>)> {
    let mut buf = Vec::new();
    fs::File::open(path)?.read_to_end(&mut buf)?;
    if buf.len() < 24 || &buf[..4] != MAGIC {
        return Err(LabError::Format("missing EKFD header".into()));
    }
    let word = |i: usize| -> [u8; 8] { buf[i..i + 8].try_into().unwrap() };
    let n = u64::from_le_bytes(word(4)) as usize;
    let l = f64::from_le_bytes(word(12));
    let dtype = match u32::from_le_bytes(buf[20..24].try_into().unwrap()) {
        0 => Dtype::Fourier,
        1 => Dtype::Physical,
        d => return Err(LabError::Format(format!("unknown dtype {d}"))),
    };
    if buf.len() != 24 + 16 * n {
        return Err(LabError::Format(format!("expected {} bytes, found {}", 24 + 16 * n, buf.len())));
    }
    let vals = (0..n)
        .map(|j| {
            let o = 24 + 16 * j;
            Complex64::new(f64::from_le_bytes(word(o)), f64::from_le_bytes(word(o + 8)))
        })
        .collect();
    Ok((SpectralGrid::new(n, l)?, dtype, vals))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let s = serde_json::to_string_pretty(value).map_err(|e| LabError::Format(e.to_string()))?;
    fs::write(path, s + "\n")?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamsRecord {
    pub alpha: f64,
    pub beta: f64,
    pub zeta: f64,
    pub epsilon: f64,
    pub sigma: f64,
    pub psi0: f64,
    pub r0: f64,
    pub omega0: f64,
    pub c: f64,
}

impl From<&CglParams> for ParamsRecord {
    fn from(p: &CglParams) -> Self {
        Self {
            alpha: p.alpha,
            beta: p.beta,
            zeta: p.zeta,
            epsilon: p.epsilon,
            sigma: p.sigma,
            psi0: p.psi0,
            r0: p.r0,
            omega0: p.omega0,
            c: p.c,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnsatzRecord {
    pub nu0: f64,
    pub nu1: f64,
    pub nu2: f64,
    pub nu3: f64,
    pub gamma_lin: f64,
    pub gamma_non: f64,
    pub c: f64,
    pub sigma: f64,
}

impl From<&AnsatzCoefficients> for AnsatzRecord {
    fn from(a: &AnsatzCoefficients) -> Self {
        Self {
            nu0: a.nu0,
            nu1: a.nu1,
            nu2: a.nu2,
            nu3: a.nu3,
            gamma_lin: a.gamma_lin,
            gamma_non: a.gamma_non,
            c: a.c,
            sigma: a.sigma,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionRecord {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c3s: Option<f64>,
    pub c4s: Option<f64>,
    pub j: f64,
}

impl From<&ExpansionCoefficients> for ExpansionRecord {
    fn from(e: &ExpansionCoefficients) -> Self {
        Self { c1: e.c1, c2: e.c2, c3: e.c3, c4: e.c4, c3s: e.c3s, c4s: e.c4s, j: e.j }
    }
}
