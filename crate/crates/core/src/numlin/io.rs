//! Plain-text matrix format: first line `n_rows n_cols`, then one row per
//! line with whitespace-separated entries written as `re+imj`. Plain reals
//! ("1.5") are accepted as imaginary-part-zero.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::NumlinError;

/// Parse the text format, rejecting non-finite entries and shape mismatches.
pub fn parse_matrix(text: &str) -> Result<ComplexMatrix, NumlinError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (header_line, header) = lines.next().ok_or(NumlinError::Parse {
        line: 1,
        msg: "empty input".into(),
    })?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    if dims.len() != 2 {
        return Err(NumlinError::Parse {
            line: header_line,
            msg: format!("expected \"n_rows n_cols\", got {header:?}"),
        });
    }
    let parse_dim = |s: &str| -> Result<usize, NumlinError> {
        s.parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or(NumlinError::Parse {
                line: header_line,
                msg: format!("bad dimension {s:?}"),
            })
    };
    let n_rows = parse_dim(dims[0])?;
    let n_cols = parse_dim(dims[1])?;
    let mut data = Vec::with_capacity(n_rows * n_cols);
    let mut rows_read = 0;
    for (line_no, line) in lines {
        if rows_read == n_rows {
            return Err(NumlinError::Parse {
                line: line_no,
                msg: "more rows than declared".into(),
            });
        }
        let mut count = 0;
        for tok in line.split_whitespace() {
            let z = parse_entry(tok).map_err(|msg| NumlinError::Parse { line: line_no, msg })?;
            data.push(z);
            count += 1;
        }
        if count != n_cols {
            return Err(NumlinError::Parse {
                line: line_no,
                msg: format!("expected {n_cols} entries, got {count}"),
            });
        }
        rows_read += 1;
    }
    if rows_read != n_rows {
        return Err(NumlinError::Parse {
            line: 0,
            msg: format!("expected {n_rows} rows, got {rows_read}"),
        });
    }
    ComplexMatrix::from_entries(n_rows, n_cols, data)
}

/// Render in the same format, entries always as `re+imj`.
pub fn write_matrix(m: &ComplexMatrix) -> String {
    let mut out = format!("{} {}\n", m.n_rows(), m.n_cols());
    for i in 0..m.n_rows() {
        let row: Vec<String> = m
            .row(i)
            .iter()
            .map(|z| {
                if z.im < 0.0 {
                    format!("{}-{}j", z.re, -z.im)
                } else {
                    format!("{}+{}j", z.re, z.im)
                }
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

fn parse_entry(tok: &str) -> Result<Complex64, String> {
    let finite = |v: f64, src: &str| -> Result<f64, String> {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("non-finite value {src:?}"))
        }
    };
    if let Some(body) = tok.strip_suffix('j').or_else(|| tok.strip_suffix('J')) {
        // find the sign splitting re and im, skipping a leading sign and
        // exponent signs like 1e-3
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            let b = bytes[k];
            if (b == b'+' || b == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                split = Some(k);
                break;
            }
        }
        match split {
            Some(k) => {
                let re: f64 = body[..k]
                    .parse()
                    .map_err(|_| format!("bad real part in {tok:?}"))?;
                let im_str = &body[k..];
                let im: f64 = if im_str == "+" {
                    1.0
                } else if im_str == "-" {
                    -1.0
                } else {
                    im_str.parse().map_err(|_| format!("bad imaginary part in {tok:?}"))?
                };
                Ok(Complex64::new(finite(re, tok)?, finite(im, tok)?))
            }
            None => {
                // pure imaginary: "1.5j", "j", "-j"
                let im: f64 = if body.is_empty() {
                    1.0
                } else if body == "-" {
                    -1.0
                } else {
                    body.parse().map_err(|_| format!("bad imaginary part in {tok:?}"))?
                };
                Ok(Complex64::new(0.0, finite(im, tok)?))
            }
        }
    } else {
        let re: f64 = tok.parse().map_err(|_| format!("bad entry {tok:?}"))?;
        Ok(Complex64::new(finite(re, tok)?, 0.0))
    }
}
