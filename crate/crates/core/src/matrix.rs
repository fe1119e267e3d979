//! Design matrix storage and the matrix-vector products every solver is built
//! from.
//!
//! Rows are samples. A matrix is either dense (row-major) or compressed sparse
//! rows; both share one API and agree to rounding (summation order differs
//! between the two layouts, so results are not bit-identical).

use crate::error::{check_finite, check_len, Error, Result};
use crate::vecops::{axpy, dot};

#[derive(Debug, Clone, PartialEq)]
pub enum Storage {
    /// Row-major values, `values[i * n_cols + j] = A[i, j]`.
    Dense(Vec<f64>),
    Csr {
        row_offsets: Vec<usize>,
        col_indices: Vec<usize>,
        values: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    n_rows: usize,
    n_cols: usize,
    storage: Storage,
}

impl DesignMatrix {
    pub fn from_dense(n_rows: usize, n_cols: usize, values: Vec<f64>) -> Result<Self> {
        check_len("dense matrix data", n_rows * n_cols, values.len())?;
        check_finite("dense matrix data", &values)?;
        Ok(Self {
            n_rows,
            n_cols,
            storage: Storage::Dense(values),
        })
    }

    /// Builds a dense matrix from equal-length rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut values = Vec::with_capacity(rows.len() * n_cols);
        for row in rows {
            check_len("matrix row", n_cols, row.as_ref().len())?;
            values.extend_from_slice(row.as_ref());
        }
        Self::from_dense(rows.len(), n_cols, values)
    }

    pub fn from_csr(
        n_rows: usize,
        n_cols: usize,
        row_offsets: Vec<usize>,
        col_indices: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        check_len("CSR row offsets", n_rows + 1, row_offsets.len())?;
        check_len("CSR values", col_indices.len(), values.len())?;
        if row_offsets[0] != 0 || row_offsets[n_rows] != values.len() {
            return Err(Error::InvalidCsr(format!(
                "offsets must span [0, {}], got [{}, {}]",
                values.len(),
                row_offsets[0],
                row_offsets[n_rows]
            )));
        }
        for (i, w) in row_offsets.windows(2).enumerate() {
            if w[0] > w[1] {
                return Err(Error::InvalidCsr(format!(
                    "row offsets decrease at row {i}"
                )));
            }
            let cols = &col_indices[w[0]..w[1]];
            if let Some(&c) = cols.iter().find(|&&c| c >= n_cols) {
                return Err(Error::InvalidCsr(format!(
                    "column index {c} out of range in row {i} (n_cols = {n_cols})"
                )));
            }
            if cols.windows(2).any(|p| p[0] >= p[1]) {
                return Err(Error::InvalidCsr(format!(
                    "column indices not strictly increasing in row {i}"
                )));
            }
        }
        check_finite("CSR values", &values)?;
        Ok(Self {
            n_rows,
            n_cols,
            storage: Storage::Csr {
                row_offsets,
                col_indices,
                values,
            },
        })
    }

    /// Builds a CSR matrix from `(row, col, value)` triplets in any order.
    /// Duplicate coordinates are summed.
    pub fn from_triplets(
        n_rows: usize,
        n_cols: usize,
        triplets: &[(usize, usize, f64)],
    ) -> Result<Self> {
        let mut sorted = triplets.to_vec();
        for &(i, j, _) in &sorted {
            if i >= n_rows || j >= n_cols {
                return Err(Error::InvalidCsr(format!(
                    "entry ({i}, {j}) outside a {n_rows}x{n_cols} matrix"
                )));
            }
        }
        sorted.sort_by_key(|&(i, j, _)| (i, j));
        let mut row_offsets = vec![0usize; n_rows + 1];
        let mut col_indices = Vec::with_capacity(sorted.len());
        let mut values: Vec<f64> = Vec::with_capacity(sorted.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in sorted {
            if last == Some((i, j)) {
                *values.last_mut().expect("duplicate follows an entry") += v;
                continue;
            }
            last = Some((i, j));
            row_offsets[i + 1] += 1;
            col_indices.push(j);
            values.push(v);
        }
        for i in 0..n_rows {
            row_offsets[i + 1] += row_offsets[i];
        }
        Self::from_csr(n_rows, n_cols, row_offsets, col_indices, values)
    }

    pub fn diag(entries: &[f64]) -> Result<Self> {
        let n = entries.len();
        let mut values = vec![0.0; n * n];
        for (i, &e) in entries.iter().enumerate() {
            values[i * n + i] = e;
        }
        Self::from_dense(n, n, values)
    }

    pub fn identity(n: usize) -> Self {
        Self::diag(&vec![1.0; n]).expect("identity is finite")
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn storage(&self) -> &Storage {
        &self.storage
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.storage, Storage::Csr { .. })
    }

    /// Stored entries: all of them for dense, the explicit ones for CSR.
    pub fn nnz(&self) -> usize {
        match &self.storage {
            Storage::Dense(v) => v.len(),
            Storage::Csr { values, .. } => values.len(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.n_rows && j < self.n_cols, "index out of bounds");
        match &self.storage {
            Storage::Dense(v) => v[i * self.n_cols + j],
            Storage::Csr {
                row_offsets,
                col_indices,
                values,
            } => {
                let range = row_offsets[i]..row_offsets[i + 1];
                match col_indices[range.clone()].binary_search(&j) {
                    Ok(k) => values[range.start + k],
                    Err(_) => 0.0,
                }
            }
        }
    }

    /// Row-major dense copy of the entries.
    pub fn to_dense_values(&self) -> Vec<f64> {
        match &self.storage {
            Storage::Dense(v) => v.clone(),
            Storage::Csr {
                row_offsets,
                col_indices,
                values,
            } => {
                let mut out = vec![0.0; self.n_rows * self.n_cols];
                for i in 0..self.n_rows {
                    for k in row_offsets[i]..row_offsets[i + 1] {
                        out[i * self.n_cols + col_indices[k]] = values[k];
                    }
                }
                out
            }
        }
    }

    pub fn to_dense(&self) -> Self {
        Self {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            storage: Storage::Dense(self.to_dense_values()),
        }
    }

    /// CSR copy keeping only nonzero entries.
    pub fn to_csr(&self) -> Self {
        if self.is_sparse() {
            return self.clone();
        }
        let dense = self.to_dense_values();
        let mut triplets = Vec::new();
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                let v = dense[i * self.n_cols + j];
                if v != 0.0 {
                    triplets.push((i, j, v));
                }
            }
        }
        Self::from_triplets(self.n_rows, self.n_cols, &triplets).expect("entries in range")
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        match &self.storage {
            Storage::Dense(v) => dot(v, v),
            Storage::Csr { values, .. } => dot(values, values),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.storage {
            Storage::Dense(v) => v.iter().all(|&x| x == 0.0),
            Storage::Csr { values, .. } => values.iter().all(|&x| x == 0.0),
        }
    }

    /// `A x`
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len("matvec input", self.n_cols, x.len())?;
        let mut out = vec![0.0; self.n_rows];
        self.matvec_into(x, &mut out);
        Ok(out)
    }

    /// `Aᵀ y`
    pub fn matvec_t(&self, y: &[f64]) -> Result<Vec<f64>> {
        check_len("transposed matvec input", self.n_rows, y.len())?;
        let mut out = vec![0.0; self.n_cols];
        self.matvec_t_into(y, &mut out);
        Ok(out)
    }

    pub(crate) fn matvec_into(&self, x: &[f64], out: &mut [f64]) {
        match &self.storage {
            Storage::Dense(v) => {
                for (o, row) in out.iter_mut().zip(v.chunks_exact(self.n_cols.max(1))) {
                    *o = dot(row, x);
                }
                if self.n_cols == 0 {
                    out.fill(0.0);
                }
            }
            Storage::Csr {
                row_offsets,
                col_indices,
                values,
            } => {
                for (i, o) in out.iter_mut().enumerate() {
                    let r = row_offsets[i]..row_offsets[i + 1];
                    *o = col_indices[r.clone()]
                        .iter()
                        .zip(&values[r])
                        .map(|(&j, &a)| a * x[j])
                        .sum();
                }
            }
        }
    }

    pub(crate) fn matvec_t_into(&self, y: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        match &self.storage {
            Storage::Dense(v) => {
                if self.n_cols == 0 {
                    return;
                }
                for (&yi, row) in y.iter().zip(v.chunks_exact(self.n_cols)) {
                    axpy(yi, row, out);
                }
            }
            Storage::Csr {
                row_offsets,
                col_indices,
                values,
            } => {
                for (i, &yi) in y.iter().enumerate() {
                    for k in row_offsets[i]..row_offsets[i + 1] {
                        out[col_indices[k]] += values[k] * yi;
                    }
                }
            }
        }
    }

    /// `AᵀA x` in one pass over the rows, without forming `AᵀA`.
    pub(crate) fn gram_apply_into(&self, x: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        match &self.storage {
            Storage::Dense(v) => {
                if self.n_cols == 0 {
                    return;
                }
                for row in v.chunks_exact(self.n_cols) {
                    let t = dot(row, x);
                    axpy(t, row, out);
                }
            }
            Storage::Csr {
                row_offsets,
                col_indices,
                values,
            } => {
                for i in 0..self.n_rows {
                    let r = row_offsets[i]..row_offsets[i + 1];
                    let cols = &col_indices[r.clone()];
                    let vals = &values[r];
                    let t: f64 = cols.iter().zip(vals).map(|(&j, &a)| a * x[j]).sum();
                    for (&j, &a) in cols.iter().zip(vals) {
                        out[j] += a * t;
                    }
                }
            }
        }
    }
}

/// `AᵀA x`, computed as two matrix-vector products.
pub fn gram_apply(a: &DesignMatrix, x: &[f64]) -> Result<Vec<f64>> {
    check_len("gram_apply input", a.n_cols(), x.len())?;
    check_finite("gram_apply input", x)?;
    let mut out = vec![0.0; a.n_cols()];
    a.gram_apply_into(x, &mut out);
    Ok(out)
}

/// `‖x‖_{AᵀA} = ‖A x‖₂`.
pub fn gram_norm(a: &DesignMatrix, x: &[f64]) -> Result<f64> {
    let ax = a.matvec(x)?;
    Ok(dot(&ax, &ax).sqrt())
}
