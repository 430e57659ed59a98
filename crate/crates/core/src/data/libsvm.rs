//! Reader for the sparse libsvm text format: `label idx:val idx:val ...`
//! with 1-based feature indices. Labels are coerced to plus/minus one
//! (values at or below zero map to -1).

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use std::fs;
use std::path::Path;

pub fn read_libsvm(path: impl AsRef<Path>) -> Result<(DenseMatrix, Vec<f64>)> {
    let content = fs::read_to_string(path)?;
    let mut labels = Vec::new();
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut max_index = 0usize;

    for (lineno, line) in content.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let label_tok = tokens.next().expect("non-empty line has a first token");
        let label: f64 = label_tok.parse().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("bad label {label_tok:?}"),
        })?;
        labels.push(if label <= 0.0 { -1.0 } else { 1.0 });

        let mut row = Vec::new();
        for tok in tokens {
            let (idx_s, val_s) = tok.split_once(':').ok_or_else(|| Error::Parse {
                line: lineno,
                message: format!("expected idx:val, got {tok:?}"),
            })?;
            let idx: usize = idx_s.parse().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("bad feature index {idx_s:?}"),
            })?;
            if idx == 0 {
                return Err(Error::Parse {
                    line: lineno,
                    message: "feature indices are 1-based".into(),
                });
            }
            let val: f64 = val_s.parse().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("bad feature value {val_s:?}"),
            })?;
            max_index = max_index.max(idx);
            row.push((idx - 1, val));
        }
        rows.push(row);
    }

    if labels.is_empty() {
        return Err(Error::Parse { line: 0, message: "empty libsvm file".into() });
    }
    if max_index == 0 {
        return Err(Error::Parse { line: 0, message: "no features in libsvm file".into() });
    }

    let mut a = DenseMatrix::zeros(labels.len(), max_index);
    for (i, row) in rows.iter().enumerate() {
        for &(j, v) in row {
            a.set(i, j, v);
        }
    }
    Ok((a, labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn parses_sparse_rows() {
        let f = write_temp("+1 1:0.5 3:2\n-1 2:1\n");
        let (a, labels) = read_libsvm(f.path()).unwrap();
        assert_eq!(a.nrows(), 2);
        assert_eq!(a.ncols(), 3);
        assert_eq!(a.row(0), vec![0.5, 0.0, 2.0]);
        assert_eq!(a.row(1), vec![0.0, 1.0, 0.0]);
        assert_eq!(labels, vec![1.0, -1.0]);
    }

    #[test]
    fn zero_label_coerces_to_negative() {
        let f = write_temp("0 2:1\n");
        let (_, labels) = read_libsvm(f.path()).unwrap();
        assert_eq!(labels, vec![-1.0]);
    }

    #[test]
    fn malformed_line_reports_number() {
        let f = write_temp("+1 1:0.5\n-1 nonsense\n");
        match read_libsvm(f.path()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn empty_file_is_an_error() {
        let f = write_temp("");
        assert!(read_libsvm(f.path()).is_err());
    }
}
