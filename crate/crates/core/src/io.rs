//! Path and table serialization.
//!
//! The binary path layout is little-endian: `dt: f64`, `n: u64`, `seed: u64`,
//! then `n` pairs `(re, im)` of `f64`, then `n` local-time values.

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use crate::disk::DiskPath;
use crate::error::{Error, Result};

pub fn write_path_bin(path: &DiskPath, mut w: impl Write) -> Result<()> {
    w.write_all(&path.dt.to_le_bytes())?;
    w.write_all(&(path.len() as u64).to_le_bytes())?;
    w.write_all(&path.seed.to_le_bytes())?;
    for z in &path.positions {
        w.write_all(&z.re.to_le_bytes())?;
        w.write_all(&z.im.to_le_bytes())?;
    }
    for l in &path.local_time {
        w.write_all(&l.to_le_bytes())?;
    }
    Ok(())
}

fn read_f64(r: &mut impl Read) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

fn read_u64(r: &mut impl Read) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

/// Reads a path written by [`write_path_bin`]. Jump records are not stored.
pub fn read_path_bin(mut r: impl Read) -> Result<DiskPath> {
    let dt = read_f64(&mut r)?;
    let n = read_u64(&mut r)?;
    let seed = read_u64(&mut r)?;
    if n > 1 << 32 {
        return Err(Error::InvalidInput(format!("path length {n} is implausible")));
    }
    let n = n as usize;
    let mut positions = Vec::with_capacity(n);
    for _ in 0..n {
        let re = read_f64(&mut r)?;
        let im = read_f64(&mut r)?;
        positions.push(Complex64::new(re, im));
    }
    let mut local_time = Vec::with_capacity(n);
    for _ in 0..n {
        local_time.push(read_f64(&mut r)?);
    }
    Ok(DiskPath::new(dt, seed, positions, local_time))
}

/// One row per sample: `t,x,y,local_time`.
pub fn write_path_csv(path: &DiskPath, mut w: impl Write) -> Result<()> {
    writeln!(w, "t,x,y,local_time")?;
    for (i, (z, l)) in path.positions.iter().zip(&path.local_time).enumerate() {
        writeln!(w, "{},{},{},{}", path.time(i), z.re, z.im, l)?;
    }
    Ok(())
}

/// Generic numeric table with a header row.
pub fn write_table_csv(header: &[&str], rows: &[Vec<f64>], mut w: impl Write) -> Result<()> {
    writeln!(w, "{}", header.join(","))?;
    for row in rows {
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}

pub fn write_json<T: Serialize + ?Sized>(value: &T, file: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    std::fs::write(file, text)?;
    Ok(())
}
