//! Matrix Market and CSV reading and writing.
//!
//! Floats are written with 17 significant digits so values survive a round
//! trip exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::matrix::{DesignMatrix, Storage};
use crate::trace::{ConvergenceTrace, TraceRecord};

const MM_BANNER: &str = "%%MatrixMarket";

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

struct Ctx<'a> {
    path: &'a Path,
}

impl Ctx<'_> {
    fn err(&self, line: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            path: self.path.to_path_buf(),
            line,
            message: message.into(),
        }
    }

    fn float(&self, line: usize, token: &str) -> Result<f64> {
        let v: f64 = token
            .trim()
            .parse()
            .map_err(|_| self.err(line, format!("invalid number {:?}", token.trim())))?;
        if !v.is_finite() {
            return Err(self.err(line, format!("non-finite value {:?}", token.trim())));
        }
        Ok(v)
    }

    fn count(&self, line: usize, token: &str) -> Result<usize> {
        token
            .parse()
            .map_err(|_| self.err(line, format!("invalid count {token:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Real,
    Pattern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
    Skew,
}

/// Parses Matrix Market text. Coordinate files become CSR, array files dense.
pub fn parse_matrix_market(text: &str, path: &Path) -> Result<DesignMatrix> {
    let ctx = Ctx { path };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (hl, header) = lines.next().ok_or_else(|| ctx.err(1, "empty file"))?;
    let words: Vec<String> = header.split_whitespace().map(str::to_lowercase).collect();
    if words.len() != 5 || words[0] != MM_BANNER.to_lowercase() || words[1] != "matrix" {
        return Err(ctx.err(
            hl,
            "expected '%%MatrixMarket matrix <format> <field> <symmetry>'",
        ));
    }
    let coordinate = match words[2].as_str() {
        "coordinate" => true,
        "array" => false,
        other => return Err(ctx.err(hl, format!("unsupported format {other:?}"))),
    };
    let field = match words[3].as_str() {
        "real" | "double" | "integer" => Field::Real,
        "pattern" if coordinate => Field::Pattern,
        other => return Err(ctx.err(hl, format!("unsupported field {other:?}"))),
    };
    let symmetry = match words[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::Skew,
        other => return Err(ctx.err(hl, format!("unsupported symmetry {other:?}"))),
    };

    let mut body = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (sl, size) = body
        .next()
        .ok_or_else(|| ctx.err(hl, "missing size line"))?;
    let dims: Vec<&str> = size.split_whitespace().collect();
    let expected = if coordinate { 3 } else { 2 };
    if dims.len() != expected {
        return Err(ctx.err(sl, format!("size line needs {expected} integers")));
    }
    let rows = ctx.count(sl, dims[0])?;
    let cols = ctx.count(sl, dims[1])?;
    if symmetry != Symmetry::General && rows != cols {
        return Err(ctx.err(sl, "symmetric storage requires a square matrix"));
    }

    if coordinate {
        let nnz = ctx.count(sl, dims[2])?;
        let mut triplets = Vec::with_capacity(nnz);
        let mut seen = 0;
        let mut last = sl;
        for (ln, l) in body {
            last = ln;
            seen += 1;
            if seen > nnz {
                return Err(ctx.err(ln, format!("more than the declared {nnz} entries")));
            }
            let tok: Vec<&str> = l.split_whitespace().collect();
            let want = if field == Field::Pattern { 2 } else { 3 };
            if tok.len() != want {
                return Err(ctx.err(ln, format!("expected {want} fields, found {}", tok.len())));
            }
            let i = ctx.count(ln, tok[0])?;
            let j = ctx.count(ln, tok[1])?;
            if i == 0 || j == 0 || i > rows || j > cols {
                return Err(ctx.err(ln, format!("index ({i}, {j}) outside {rows}x{cols}")));
            }
            let v = if field == Field::Pattern {
                1.0
            } else {
                ctx.float(ln, tok[2])?
            };
            triplets.push((i - 1, j - 1, v));
            if i != j {
                match symmetry {
                    Symmetry::General => {}
                    Symmetry::Symmetric => triplets.push((j - 1, i - 1, v)),
                    Symmetry::Skew => triplets.push((j - 1, i - 1, -v)),
                }
            }
        }
        if seen != nnz {
            return Err(ctx.err(last, format!("expected {nnz} entries, found {seen}")));
        }
        DesignMatrix::from_triplets(rows, cols, &triplets)
    } else {
        let mut values = vec![0.0; rows * cols];
        // column-major; symmetric variants list only the lower triangle
        let slots: Vec<(usize, usize)> = (0..cols)
            .flat_map(|j| (0..rows).map(move |i| (i, j)))
            .filter(|&(i, j)| match symmetry {
                Symmetry::General => true,
                Symmetry::Symmetric => i >= j,
                Symmetry::Skew => i > j,
            })
            .collect();
        let mut count = 0;
        let mut last = sl;
        for (ln, l) in body {
            last = ln;
            for tok in l.split_whitespace() {
                let &(i, j) = slots
                    .get(count)
                    .ok_or_else(|| ctx.err(ln, format!("more than {} values", slots.len())))?;
                let v = ctx.float(ln, tok)?;
                values[i * cols + j] = v;
                match symmetry {
                    Symmetry::General => {}
                    Symmetry::Symmetric => values[j * cols + i] = v,
                    Symmetry::Skew => values[j * cols + i] = -v,
                }
                count += 1;
            }
        }
        if count != slots.len() {
            return Err(ctx.err(
                last,
                format!("expected {} values, found {count}", slots.len()),
            ));
        }
        DesignMatrix::from_dense(rows, cols, values)
    }
}

/// Sparse matrices are written as `coordinate`, dense ones as `array`.
pub fn format_matrix_market(a: &DesignMatrix) -> String {
    let mut out = String::new();
    match a.storage() {
        Storage::Csr {
            row_offsets,
            col_indices,
            values,
        } => {
            out.push_str("%%MatrixMarket matrix coordinate real general\n");
            let _ = writeln!(out, "{} {} {}", a.n_rows(), a.n_cols(), values.len());
            for i in 0..a.n_rows() {
                for k in row_offsets[i]..row_offsets[i + 1] {
                    let _ = writeln!(
                        out,
                        "{} {} {}",
                        i + 1,
                        col_indices[k] + 1,
                        format_float(values[k])
                    );
                }
            }
        }
        Storage::Dense(values) => {
            out.push_str("%%MatrixMarket matrix array real general\n");
            let _ = writeln!(out, "{} {}", a.n_rows(), a.n_cols());
            for j in 0..a.n_cols() {
                for i in 0..a.n_rows() {
                    let _ = writeln!(out, "{}", format_float(values[i * a.n_cols() + j]));
                }
            }
        }
    }
    out
}

/// Comma-separated rows, no header. Blank lines are skipped.
pub fn parse_csv_rows(text: &str, path: &Path) -> Result<Vec<Vec<f64>>> {
    let ctx = Ctx { path };
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let ln = i + 1;
        if l.trim().is_empty() {
            continue;
        }
        let row = l
            .split(',')
            .map(|t| ctx.float(ln, t))
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(ctx.err(
                    ln,
                    format!("expected {} columns, found {}", first.len(), row.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(ctx.err(1, "no data"));
    }
    Ok(rows)
}

pub fn parse_csv_matrix(text: &str, path: &Path) -> Result<DesignMatrix> {
    DesignMatrix::from_rows(&parse_csv_rows(text, path)?)
}

/// A single column or a single row.
pub fn parse_csv_vector(text: &str, path: &Path) -> Result<Vec<f64>> {
    let rows = parse_csv_rows(text, path)?;
    if rows[0].len() == 1 {
        Ok(rows.into_iter().map(|r| r[0]).collect())
    } else if rows.len() == 1 {
        Ok(rows.into_iter().next().unwrap_or_default())
    } else {
        Err(Ctx { path }.err(1, "expected a single row or a single column"))
    }
}

pub fn format_csv_matrix(a: &DesignMatrix) -> String {
    let values = a.to_dense_values();
    let mut out = String::new();
    for row in values.chunks(a.n_cols().max(1)).take(a.n_rows()) {
        let line: Vec<String> = row.iter().map(|&v| format_float(v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn format_csv_vector(v: &[f64]) -> String {
    v.iter().map(|&x| format_float(x) + "\n").collect()
}

fn is_matrix_market(text: &str) -> bool {
    text.trim_start()
        .get(..MM_BANNER.len())
        .is_some_and(|h| h.eq_ignore_ascii_case(MM_BANNER))
}

/// Reads a Matrix Market or CSV file, told apart by the banner line.
pub fn load_matrix(path: impl AsRef<Path>) -> Result<DesignMatrix> {
    let path = path.as_ref();
    let text = read_text(path)?;
    if is_matrix_market(&text) {
        parse_matrix_market(&text, path)
    } else {
        parse_csv_matrix(&text, path)
    }
}

/// Reads a vector from CSV or from a one-row or one-column Matrix Market file.
pub fn load_vector(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let text = read_text(path)?;
    if is_matrix_market(&text) {
        let m = parse_matrix_market(&text, path)?;
        if m.n_cols() != 1 && m.n_rows() != 1 {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: 1,
                message: format!(
                    "expected a vector, found a {}x{} matrix",
                    m.n_rows(),
                    m.n_cols()
                ),
            });
        }
        Ok(m.to_dense_values())
    } else {
        parse_csv_vector(&text, path)
    }
}

pub fn save_matrix_market(a: &DesignMatrix, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &format_matrix_market(a))
}

pub fn save_csv_matrix(a: &DesignMatrix, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &format_csv_matrix(a))
}

pub fn save_vector(v: &[f64], path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &format_csv_vector(v))
}

pub const TRACE_HEADER: &str = "iteration,rel_error";

pub fn format_trace(trace: &ConvergenceTrace) -> String {
    let mut out = format!("{TRACE_HEADER}\n");
    for r in &trace.records {
        let _ = writeln!(out, "{},{}", r.iteration, format_float(r.rel_error));
    }
    out
}

pub fn save_csv(trace: &ConvergenceTrace, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &format_trace(trace))
}

pub fn parse_trace(text: &str, path: &Path) -> Result<Vec<TraceRecord>> {
    let ctx = Ctx { path };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, h)) if h.trim() == TRACE_HEADER => {}
        _ => return Err(ctx.err(1, format!("expected header {TRACE_HEADER:?}"))),
    }
    let mut records = Vec::new();
    for (ln, l) in lines {
        if l.trim().is_empty() {
            continue;
        }
        let (it, err) = l
            .split_once(',')
            .ok_or_else(|| ctx.err(ln, "expected two fields"))?;
        let iteration = ctx.count(ln, it.trim())?;
        if iteration != records.len() {
            return Err(ctx.err(ln, format!("expected iteration {}", records.len())));
        }
        records.push(TraceRecord {
            iteration,
            rel_error: ctx.float(ln, err)?,
        });
    }
    Ok(records)
}

pub fn load_trace(path: impl AsRef<Path>) -> Result<Vec<TraceRecord>> {
    let path = path.as_ref();
    parse_trace(&read_text(path)?, path)
}

/// Writes a header row and numeric rows.
pub fn save_table(path: impl AsRef<Path>, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let line: Vec<String> = row.iter().map(|&v| format_float(v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    write_text(path.as_ref(), &out)
}

/// `{prefix}{suffix}` as a path, for output families like `run_A.mtx`.
pub fn with_suffix(prefix: &str, suffix: &str) -> PathBuf {
    PathBuf::from(format!("{prefix}{suffix}"))
}
