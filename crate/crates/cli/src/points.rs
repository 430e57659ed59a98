//! Binary points file: iterate snapshots exchanged between `run` and
//! `diagnose`. Layout (little-endian): magic `RCSP`, version `u32`, count
//! and dimension as `u64`, then per snapshot the iteration index as `u64`
//! followed by the coordinates as `f64`.

use anyhow::{bail, Context, Result};
use rcs_core::{ProbeSnapshot, Vector};
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

const MAGIC: [u8; 4] = *b"RCSP";
const VERSION: u32 = 1;

pub fn write_points(path: &Path, probes: &[ProbeSnapshot]) -> Result<()> {
    let dim = probes.first().map(|p| p.x.len()).unwrap_or(0);
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(&MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(probes.len() as u64).to_le_bytes())?;
    w.write_all(&(dim as u64).to_le_bytes())?;
    for probe in probes {
        w.write_all(&(probe.k as u64).to_le_bytes())?;
        for v in probe.x.as_slice() {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_points(path: &Path) -> Result<Vec<ProbeSnapshot>> {
    let mut r = BufReader::new(
        File::open(path).with_context(|| format!("opening points file {}", path.display()))?,
    );
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if magic != MAGIC {
        bail!("bad points file magic");
    }
    let mut u32buf = [0u8; 4];
    r.read_exact(&mut u32buf)?;
    if u32::from_le_bytes(u32buf) != VERSION {
        bail!("unsupported points file version");
    }
    let mut u64buf = [0u8; 8];
    r.read_exact(&mut u64buf)?;
    let count = u64::from_le_bytes(u64buf) as usize;
    r.read_exact(&mut u64buf)?;
    let dim = u64::from_le_bytes(u64buf) as usize;
    let mut probes = Vec::with_capacity(count);
    for _ in 0..count {
        r.read_exact(&mut u64buf)?;
        let k = u64::from_le_bytes(u64buf) as usize;
        let mut x = vec![0.0f64; dim];
        for slot in &mut x {
            r.read_exact(&mut u64buf)?;
            *slot = f64::from_le_bytes(u64buf);
        }
        probes.push(ProbeSnapshot { k, x: Vector::new(x)? });
    }
    Ok(probes)
}
