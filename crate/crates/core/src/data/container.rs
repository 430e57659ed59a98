//! Flat binary dataset container plus its JSON sidecar.
//!
//! Layout (little-endian throughout): magic `RCSD`, version `u32`, `n` and
//! `d` as `u64`, then row-major `f64` payloads for the matrix, the
//! measurement vector, and the reference signal.

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::vector::Vector;
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

const MAGIC: [u8; 4] = *b"RCSD";
const VERSION: u32 = 1;

#[derive(Debug, Clone)]
pub struct Dataset {
    pub matrix: DenseMatrix,
    /// `b` for regression/SVM data, `b^2` for phase retrieval.
    pub measurements: Vec<f64>,
    pub x_star: Vector,
}

/// Generating configuration, stored beside the container as JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetMeta {
    pub family: String,
    pub n: usize,
    pub d: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sparsity: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub repeats: Option<usize>,
    pub p_fail: f64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clip_outliers: Option<bool>,
}

pub fn write_dataset(path: impl AsRef<Path>, data: &Dataset) -> Result<()> {
    let n = data.matrix.nrows();
    let d = data.matrix.ncols();
    if data.measurements.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: data.measurements.len() });
    }
    if data.x_star.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: data.x_star.len() });
    }
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(&MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(n as u64).to_le_bytes())?;
    w.write_all(&(d as u64).to_le_bytes())?;
    for i in 0..n {
        for j in 0..d {
            w.write_all(&data.matrix.get(i, j).to_le_bytes())?;
        }
    }
    for v in &data.measurements {
        w.write_all(&v.to_le_bytes())?;
    }
    for v in data.x_star.as_slice() {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if magic != MAGIC {
        return Err(Error::Parse { line: 0, message: "bad dataset magic".into() });
    }
    let version = read_u32(&mut r)?;
    if version != VERSION {
        return Err(Error::Parse { line: 0, message: format!("unsupported version {version}") });
    }
    let n = read_u64(&mut r)? as usize;
    let d = read_u64(&mut r)? as usize;
    let mut entries = vec![0.0f64; n * d];
    read_f64s(&mut r, &mut entries)?;
    let matrix = DenseMatrix::from_row_major(n, d, &entries)?;
    let mut measurements = vec![0.0f64; n];
    read_f64s(&mut r, &mut measurements)?;
    let mut x_star = vec![0.0f64; d];
    read_f64s(&mut r, &mut x_star)?;
    Ok(Dataset { matrix, measurements, x_star: Vector::new(x_star)? })
}

/// Conventional sidecar path: `<container>.json`.
pub fn sidecar_path(path: &Path) -> std::path::PathBuf {
    let mut os = path.as_os_str().to_owned();
    os.push(".json");
    os.into()
}

pub fn write_meta(container_path: impl AsRef<Path>, meta: &DatasetMeta) -> Result<()> {
    let json = serde_json::to_string_pretty(meta)
        .map_err(|e| Error::InvalidConfig(format!("meta serialization: {e}")))?;
    std::fs::write(sidecar_path(container_path.as_ref()), json)?;
    Ok(())
}

pub fn read_meta(container_path: impl AsRef<Path>) -> Result<DatasetMeta> {
    let text = std::fs::read_to_string(sidecar_path(container_path.as_ref()))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Parse { line: 0, message: format!("meta sidecar: {e}") })
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf)?;
    Ok(u32::from_le_bytes(buf))
}

fn read_u64(r: &mut impl Read) -> Result<u64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    Ok(u64::from_le_bytes(buf))
}

fn read_f64s(r: &mut impl Read, out: &mut [f64]) -> Result<()> {
    let mut buf = [0u8; 8];
    for slot in out {
        r.read_exact(&mut buf)?;
        *slot = f64::from_le_bytes(buf);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_identical() {
        let data = Dataset {
            matrix: DenseMatrix::from_row_major(2, 3, &[1.0, -2.5, 3.25, 0.1, 0.0, -7.0])
                .unwrap(),
            measurements: vec![0.5, -0.5],
            x_star: Vector::new(vec![1.0, 0.0, -1.0]).unwrap(),
        };
        let dir = tempfile::tempdir().unwrap();
        let p1 = dir.path().join("a.rcsd");
        let p2 = dir.path().join("b.rcsd");
        write_dataset(&p1, &data).unwrap();
        let back = read_dataset(&p1).unwrap();
        write_dataset(&p2, &back).unwrap();
        assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
        assert_eq!(back.matrix, data.matrix);
        assert_eq!(back.measurements, data.measurements);
    }

    #[test]
    fn meta_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.rcsd");
        let meta = DatasetMeta {
            family: "mestimator".into(),
            n: 10,
            d: 20,
            sparsity: Some(3),
            repeats: None,
            p_fail: 0.2,
            seed: 7,
            clip_outliers: None,
        };
        write_meta(&p, &meta).unwrap();
        assert_eq!(read_meta(&p).unwrap(), meta);
    }
}
