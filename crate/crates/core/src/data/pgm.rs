//! Plain-text PGM (P2) import/export for image-valued signals.

use crate::error::{Error, Result};
use std::path::Path;

/// Reads a P2 file; returns `(width, height, values)` with the raw sample
/// values as `f64` in row-major order.
pub fn read_pgm(path: impl AsRef<Path>) -> Result<(usize, usize, Vec<f64>)> {
    let text = std::fs::read_to_string(path)?;
    let mut tokens = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(|l| l.split_whitespace().map(str::to_owned).collect::<Vec<_>>());
    let magic = tokens.next().ok_or_else(|| parse_err("missing magic"))?;
    if magic != "P2" {
        return Err(parse_err(&format!("expected P2, got {magic:?}")));
    }
    let width: usize = next_num(&mut tokens, "width")?;
    let height: usize = next_num(&mut tokens, "height")?;
    let _maxval: usize = next_num(&mut tokens, "maxval")?;
    let mut values = Vec::with_capacity(width * height);
    for _ in 0..width * height {
        values.push(next_num::<f64>(&mut tokens, "pixel")?);
    }
    Ok((width, height, values))
}

/// Writes a P2 file, mapping `[min, max]` of the values linearly onto
/// `0..=255` (a constant image maps to 0).
pub fn write_pgm(path: impl AsRef<Path>, width: usize, height: usize, values: &[f64]) -> Result<()> {
    if values.len() != width * height {
        return Err(Error::DimensionMismatch { expected: width * height, got: values.len() });
    }
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    let mut out = format!("P2\n{width} {height}\n255\n");
    for row in 0..height {
        let line: Vec<String> = (0..width)
            .map(|col| {
                let v = ((values[row * width + col] - lo) / span * 255.0).round() as i64;
                v.clamp(0, 255).to_string()
            })
            .collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

fn parse_err(message: &str) -> Error {
    Error::Parse { line: 0, message: message.into() }
}

fn next_num<T: std::str::FromStr>(
    tokens: &mut impl Iterator<Item = String>,
    what: &str,
) -> Result<T> {
    let tok = tokens.next().ok_or_else(|| parse_err(&format!("missing {what}")))?;
    tok.parse().map_err(|_| parse_err(&format!("bad {what}: {tok:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_preserves_shape() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("img.pgm");
        let values = vec![0.0, 0.5, 1.0, 0.25, 0.75, 0.1];
        write_pgm(&p, 3, 2, &values).unwrap();
        let (w, h, back) = read_pgm(&p).unwrap();
        assert_eq!((w, h), (3, 2));
        assert_eq!(back.len(), 6);
        assert_eq!(back[0], 0.0);
        assert_eq!(back[2], 255.0);
    }

    #[test]
    fn comments_are_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("img.pgm");
        std::fs::write(&p, "P2\n# a comment\n2 1\n255\n7 9\n").unwrap();
        let (w, h, values) = read_pgm(&p).unwrap();
        assert_eq!((w, h), (2, 1));
        assert_eq!(values, vec![7.0, 9.0]);
    }
}
