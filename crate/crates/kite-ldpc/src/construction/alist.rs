//! alist interchange format for sparse binary matrices.
//!
//! Layout (all tokens whitespace-separated):
//! ```text
//! n m                      // columns, rows
//! max_col_deg max_row_deg
//! d_1 .. d_n               // column degrees
//! e_1 .. e_m               // row degrees
//! n lines of row indices   // per column, 1-based, zero-padded to max_col_deg
//! m lines of column indices// per row, 1-based, zero-padded to max_row_deg
//! ```
//! The reader is whitespace-agnostic and checks both index lists against
//! each other. The information/parity split is recovered as k = n - m,
//! which is exact for every prefix of a systematic code with unit
//! lower-triangular parity part.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

use super::SparseParityCheck;

/// Serialize a matrix in alist form.
pub fn write_alist<W: Write>(h: &SparseParityCheck, out: &mut W) -> Result<()> {
    let (k, r, n) = (h.k(), h.r(), h.n());

    let mut cols: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut row_deg: Vec<usize> = Vec::with_capacity(r);
    for t in 0..r {
        for &j in h.hv_row(t) {
            cols[j as usize].push(t as u32);
        }
        for &s in h.hw_row(t) {
            cols[k + s as usize].push(t as u32);
        }
        row_deg.push(h.hv_row(t).len() + h.hw_row(t).len());
    }
    let max_col = cols.iter().map(Vec::len).max().unwrap_or(0);
    let max_row = row_deg.iter().copied().max().unwrap_or(0);

    writeln!(out, "{n} {r}")?;
    writeln!(out, "{max_col} {max_row}")?;
    write_joined(out, cols.iter().map(Vec::len))?;
    write_joined(out, row_deg.iter().copied())?;
    for col in &cols {
        write_padded(out, col.iter().map(|&t| t as usize + 1), col.len(), max_col)?;
    }
    for (t, &deg) in row_deg.iter().enumerate() {
        let hv = h.hv_row(t).iter().map(|&j| j as usize + 1);
        let hw = h.hw_row(t).iter().map(|&s| k + s as usize + 1);
        write_padded(out, hv.chain(hw), deg, max_row)?;
    }
    Ok(())
}

fn write_joined<W: Write>(out: &mut W, values: impl Iterator<Item = usize>) -> Result<()> {
    let mut first = true;
    for v in values {
        if !first {
            write!(out, " ")?;
        }
        write!(out, "{v}")?;
        first = false;
    }
    writeln!(out)?;
    Ok(())
}

fn write_padded<W: Write>(
    out: &mut W,
    values: impl Iterator<Item = usize>,
    count: usize,
    width: usize,
) -> Result<()> {
    write_joined(out, values.chain(std::iter::repeat_n(0, width - count)))
}

/// Parse a matrix from alist text.
pub fn read_alist<R: Read>(input: R) -> Result<SparseParityCheck> {
    let mut text = String::new();
    let mut input = input;
    input.read_to_string(&mut text)?;
    let mut tokens = text.split_whitespace().map(|tok| {
        tok.parse::<usize>()
            .map_err(|_| Error::AlistParse(format!("bad integer token {tok:?}")))
    });
    let mut next = |what: &str| -> Result<usize> {
        tokens
            .next()
            .ok_or_else(|| Error::AlistParse(format!("unexpected end of input at {what}")))?
    };

    let n = next("column count")?;
    let m = next("row count")?;
    if m > n {
        return Err(Error::AlistParse(format!("{m} rows exceed {n} columns")));
    }
    let k = n - m;
    let max_col = next("max column degree")?;
    let max_row = next("max row degree")?;
    let col_deg: Vec<usize> = (0..n)
        .map(|_| next("column degree"))
        .collect::<Result<_>>()?;
    let row_deg: Vec<usize> = (0..m).map(|_| next("row degree")).collect::<Result<_>>()?;
    if col_deg.iter().any(|&d| d > max_col) || row_deg.iter().any(|&d| d > max_row) {
        return Err(Error::AlistParse("degree exceeds declared maximum".into()));
    }

    // Column lists: retained to cross-check against the row lists.
    let mut cols: Vec<Vec<usize>> = Vec::with_capacity(n);
    for (j, &deg) in col_deg.iter().enumerate() {
        let mut list = Vec::with_capacity(deg);
        for slot in 0..max_col {
            let v = next("column entry")?;
            if slot < deg {
                if v == 0 || v > m {
                    return Err(Error::AlistParse(format!(
                        "column {j}: row index {v} outside 1..={m}"
                    )));
                }
                list.push(v - 1);
            } else if v != 0 {
                return Err(Error::AlistParse(format!(
                    "column {j}: nonzero padding {v}"
                )));
            }
        }
        cols.push(list);
    }

    let mut hv_rows: Vec<Vec<u32>> = Vec::with_capacity(m);
    let mut hw_rows: Vec<Vec<u32>> = Vec::with_capacity(m);
    let mut seen_in_cols = vec![0usize; n];
    for (t, &deg) in row_deg.iter().enumerate() {
        let mut hv = Vec::new();
        let mut hw = Vec::new();
        for slot in 0..max_row {
            let v = next("row entry")?;
            if slot < deg {
                if v == 0 || v > n {
                    return Err(Error::AlistParse(format!(
                        "row {t}: column index {v} outside 1..={n}"
                    )));
                }
                let j = v - 1;
                if !cols[j].contains(&t) {
                    return Err(Error::AlistParse(format!(
                        "row {t} lists column {v} but the column list disagrees"
                    )));
                }
                seen_in_cols[j] += 1;
                if j < k {
                    hv.push(j as u32);
                } else {
                    hw.push((j - k) as u32);
                }
            } else if v != 0 {
                return Err(Error::AlistParse(format!("row {t}: nonzero padding {v}")));
            }
        }
        hv_rows.push(hv);
        hw_rows.push(hw);
    }
    if tokens.next().transpose()?.is_some() {
        return Err(Error::AlistParse("trailing tokens after matrix".into()));
    }
    if seen_in_cols != col_deg {
        return Err(Error::AlistParse("row and column lists disagree".into()));
    }

    SparseParityCheck::from_parts(k, hv_rows, hw_rows)
        .map_err(|e| Error::AlistParse(format!("structural check failed: {e}")))
}

/// Write to a file path.
pub fn save_alist(h: &SparseParityCheck, path: &Path) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_alist(h, &mut out)?;
    out.flush()?;
    Ok(())
}

/// Read from a file path.
pub fn load_alist(path: &Path) -> Result<SparseParityCheck> {
    read_alist(BufReader::new(File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{build_mother_code, CodeSpec, CodeVariant};
    use crate::qprofile::QProfile;

    fn sample(k: usize, seed: u64) -> SparseParityCheck {
        let spec = CodeSpec::new(k, CodeVariant::Improved, seed).unwrap();
        let q = QProfile::from_formula(k).unwrap();
        build_mother_code(&spec, &q).unwrap()
    }

    #[test]
    fn test_round_trip_is_bit_exact() {
        let h = sample(60, 17);
        let mut buf = Vec::new();
        write_alist(&h, &mut buf).unwrap();
        let back = read_alist(&buf[..]).unwrap();
        assert_eq!(h, back);
        // Writing again produces identical bytes.
        let mut buf2 = Vec::new();
        write_alist(&back, &mut buf2).unwrap();
        assert_eq!(buf, buf2);
    }

    #[test]
    fn test_round_trip_through_file() {
        let h = sample(40, 3).prefix(40 * 7).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("code.alist");
        save_alist(&h, &path).unwrap();
        let back = load_alist(&path).unwrap();
        assert_eq!(h, back);
    }

    #[test]
    fn test_header_dimensions() {
        let h = sample(40, 3);
        let mut buf = Vec::new();
        write_alist(&h, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "800 760");
    }

    #[test]
    fn test_rejects_malformed_input() {
        assert!(read_alist("not numbers".as_bytes()).is_err());
        assert!(read_alist("4 2".as_bytes()).is_err());
        // 2x2 identity claimed, but row list names the wrong column.
        let bad = "2 2\n1 1\n1 1\n1 1\n1\n2\n2\n1\n";
        assert!(read_alist(bad.as_bytes()).is_err());
        // Valid tiny matrix: H_w = I (k = 0 edge: n = m).
        let ok = "2 2\n1 1\n1 1\n1 1\n1\n2\n1\n2\n";
        let h = read_alist(ok.as_bytes()).unwrap();
        assert_eq!(h.k(), 0);
        assert_eq!(h.r(), 2);
    }

    #[test]
    fn test_rejects_trailing_garbage() {
        let h = sample(40, 5);
        let mut buf = Vec::new();
        write_alist(&h, &mut buf).unwrap();
        buf.extend_from_slice(b" 7");
        assert!(read_alist(&buf[..]).is_err());
    }
}
