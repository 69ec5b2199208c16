//! Compressed sparse row matrices with deterministic assembly.

use std::fmt::Write as _;

use faer::sparse::{SparseColMat, Triplet};
use faer::Mat;
use num_complex::Complex64;

use crate::error::{CpmError, Result};

/// Entries smaller than this in magnitude are dropped after assembly.
pub const DROP_TOL: f64 = 1e-14;

/// Real sparse matrix in CSR form. Columns within a row are sorted and unique.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOperator {
    nrows: usize,
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseOperator {
    /// Assembles from `(row, col, value)` triplets. Duplicates are summed in
    /// input order; sums below [`DROP_TOL`] are dropped.
    pub fn from_triplets(nrows: usize, ncols: usize, mut triplets: Vec<(usize, usize, f64)>) -> Result<Self> {
        if let Some(&(r, c, _)) = triplets.iter().find(|t| t.0 >= nrows || t.1 >= ncols) {
            return Err(CpmError::Internal(format!(
                "entry ({r}, {c}) outside a {nrows}x{ncols} matrix"
            )));
        }
        triplets.sort_by_key(|t| (t.0, t.1));
        let mut indptr = vec![0; nrows + 1];
        let mut indices = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        let mut k = 0;
        while k < triplets.len() {
            let (r, c, mut v) = triplets[k];
            k += 1;
            while k < triplets.len() && triplets[k].0 == r && triplets[k].1 == c {
                v += triplets[k].2;
                k += 1;
            }
            if v.abs() >= DROP_TOL {
                indices.push(c);
                values.push(v);
                indptr[r + 1] += 1;
            }
        }
        for r in 0..nrows {
            indptr[r + 1] += indptr[r];
        }
        Ok(SparseOperator { nrows, ncols, indptr, indices, values })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![1.0; n])
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        let t = d.iter().enumerate().map(|(i, &v)| (i, i, v)).collect();
        Self::from_triplets(d.len(), d.len(), t).expect("diagonal entries are in range")
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseOperator { nrows, ncols, indptr: vec![0; nrows + 1], indices: vec![], values: vec![] }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let (a, b) = (self.indptr[i], self.indptr[i + 1]);
        (&self.indices[a..b], &self.values[a..b])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).map_or(0.0, |k| vals[k])
    }

    /// All stored entries in row-major order.
    pub fn triplets(&self) -> Vec<(usize, usize, f64)> {
        (0..self.nrows)
            .flat_map(|i| {
                let (c, v) = self.row(i);
                c.iter().zip(v).map(move |(&j, &x)| (i, j, x))
            })
            .collect()
    }

    /// Leading diagonal (length `min(nrows, ncols)`).
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.nrows.min(self.ncols)).map(|i| self.get(i, i)).collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.nrows).map(|i| self.row(i).1.iter().sum()).collect()
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x.len())?;
        Ok((0..self.nrows)
            .map(|i| {
                let (c, v) = self.row(i);
                c.iter().zip(v).map(|(&j, &a)| a * x[j]).sum()
            })
            .collect())
    }

    pub fn matvec_complex(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(x.len())?;
        Ok((0..self.nrows)
            .map(|i| {
                let (c, v) = self.row(i);
                c.iter().zip(v).map(|(&j, &a)| x[j] * a).sum()
            })
            .collect())
    }

    /// `Aᵀ x`.
    pub fn matvec_transpose(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.nrows {
            return Err(CpmError::Config(format!(
                "vector of length {} does not match {} rows",
                x.len(),
                self.nrows
            )));
        }
        let mut y = vec![0.0; self.ncols];
        for (i, &xi) in x.iter().enumerate() {
            let (c, v) = self.row(i);
            for (&j, &a) in c.iter().zip(v) {
                y[j] += a * xi;
            }
        }
        Ok(y)
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n != self.ncols {
            return Err(CpmError::Config(format!(
                "vector of length {n} does not match {} columns",
                self.ncols
            )));
        }
        Ok(())
    }

    pub fn transpose(&self) -> Self {
        let t = self.triplets().into_iter().map(|(i, j, v)| (j, i, v)).collect();
        Self::from_triplets(self.ncols, self.nrows, t).expect("transposed entries are in range")
    }

    /// Sparse product `self * other`. Each output row is accumulated in the
    /// stored order of `self`'s row, so results are bitwise reproducible.
    pub fn matmul(&self, other: &SparseOperator) -> Result<SparseOperator> {
        if self.ncols != other.nrows {
            return Err(CpmError::Internal(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let mut acc = vec![0.0; other.ncols];
        let mut seen = vec![false; other.ncols];
        let mut touched = Vec::new();
        let mut triplets = Vec::new();
        for i in 0..self.nrows {
            let (ca, va) = self.row(i);
            for (&k, &a) in ca.iter().zip(va) {
                let (cb, vb) = other.row(k);
                for (&j, &b) in cb.iter().zip(vb) {
                    if !seen[j] {
                        seen[j] = true;
                        touched.push(j);
                    }
                    acc[j] += a * b;
                }
            }
            touched.sort_unstable();
            for &j in &touched {
                triplets.push((i, j, acc[j]));
                acc[j] = 0.0;
                seen[j] = false;
            }
            touched.clear();
        }
        Self::from_triplets(self.nrows, other.ncols, triplets)
    }

    /// `alpha * self + beta * other`.
    pub fn linear_combination(&self, alpha: f64, other: &SparseOperator, beta: f64) -> Result<SparseOperator> {
        if self.nrows != other.nrows || self.ncols != other.ncols {
            return Err(CpmError::Internal(format!(
                "cannot add {}x{} and {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let mut t: Vec<_> = self.triplets().into_iter().map(|(i, j, v)| (i, j, alpha * v)).collect();
        t.extend(other.triplets().into_iter().map(|(i, j, v)| (i, j, beta * v)));
        Self::from_triplets(self.nrows, self.ncols, t)
    }

    pub fn scaled(&self, alpha: f64) -> SparseOperator {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= alpha);
        out.retain_nonzero();
        out
    }

    /// `self - shift * I` (square matrices).
    pub fn shifted(&self, shift: f64) -> Result<SparseOperator> {
        let n = self.nrows.min(self.ncols);
        let mut t = self.triplets();
        t.extend((0..n).map(|i| (i, i, -shift)));
        Self::from_triplets(self.nrows, self.ncols, t)
    }

    /// Copy with the leading diagonal removed.
    pub fn without_diagonal(&self) -> SparseOperator {
        let t = self.triplets().into_iter().filter(|&(i, j, _)| i != j).collect();
        Self::from_triplets(self.nrows, self.ncols, t).expect("subset of valid entries")
    }

    /// First `k` columns.
    pub fn leading_columns(&self, k: usize) -> SparseOperator {
        let t = self.triplets().into_iter().filter(|&(_, j, _)| j < k).collect();
        Self::from_triplets(self.nrows, k.min(self.ncols), t).expect("subset of valid entries")
    }

    /// First `k` rows.
    pub fn leading_rows(&self, k: usize) -> SparseOperator {
        let t = self.triplets().into_iter().filter(|&(i, _, _)| i < k).collect();
        Self::from_triplets(k.min(self.nrows), self.ncols, t).expect("subset of valid entries")
    }

    fn retain_nonzero(&mut self) {
        let t = self.triplets();
        *self = Self::from_triplets(self.nrows, self.ncols, t).expect("valid entries");
    }

    /// Largest absolute entry of `self - other`.
    pub fn max_abs_diff(&self, other: &SparseOperator) -> Result<f64> {
        let d = self.linear_combination(1.0, other, -1.0)?;
        Ok(d.values.iter().fold(0.0, |m, v| m.max(v.abs())))
    }

    pub fn to_dense(&self) -> Mat<f64> {
        let mut m = Mat::zeros(self.nrows, self.ncols);
        for (i, j, v) in self.triplets() {
            m[(i, j)] = v;
        }
        m
    }

    pub fn to_faer(&self) -> Result<SparseColMat<usize, f64>> {
        let t: Vec<_> = self.triplets().into_iter().map(|(i, j, v)| Triplet::new(i, j, v)).collect();
        SparseColMat::try_new_from_triplets(self.nrows, self.ncols, &t)
            .map_err(|e| CpmError::Internal(format!("sparse conversion failed: {e:?}")))
    }

    /// Matrix Market coordinate text (1-based indices).
    pub fn to_matrix_market(&self) -> String {
        let mut s = String::from("%%MatrixMarket matrix coordinate real general\n");
        let _ = writeln!(s, "{} {} {}", self.nrows, self.ncols, self.nnz());
        for (i, j, v) in self.triplets() {
            let _ = writeln!(s, "{} {} {:.17e}", i + 1, j + 1, v);
        }
        s
    }

    pub fn from_matrix_market(text: &str) -> Result<SparseOperator> {
        let mut lines = text.lines();
        let header = lines.next().unwrap_or("");
        let h: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
        if h.len() < 5 || h[0] != "%%matrixmarket" || h[1] != "matrix" || h[2] != "coordinate" || h[3] != "real" {
            return Err(CpmError::Parse(format!("unsupported Matrix Market header '{header}'")));
        }
        let symmetric = match h[4].as_str() {
            "general" => false,
            "symmetric" => true,
            other => return Err(CpmError::Parse(format!("unsupported symmetry '{other}'"))),
        };
        let mut data = lines.map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('%'));
        let size = data.next().ok_or_else(|| CpmError::Parse("missing size line".into()))?;
        let dims: Vec<usize> = size
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| CpmError::Parse(format!("bad size line '{size}'"))))
            .collect::<Result<_>>()?;
        if dims.len() != 3 {
            return Err(CpmError::Parse(format!("bad size line '{size}'")));
        }
        let (nr, nc, nnz) = (dims[0], dims[1], dims[2]);
        let mut t = Vec::with_capacity(nnz);
        for _ in 0..nnz {
            let line = data.next().ok_or_else(|| CpmError::Parse("fewer entries than declared".into()))?;
            let f: Vec<&str> = line.split_whitespace().collect();
            let bad = || CpmError::Parse(format!("bad entry line '{line}'"));
            if f.len() != 3 {
                return Err(bad());
            }
            let i: usize = f[0].parse().map_err(|_| bad())?;
            let j: usize = f[1].parse().map_err(|_| bad())?;
            let v: f64 = f[2].parse().map_err(|_| bad())?;
            if i == 0 || j == 0 || i > nr || j > nc {
                return Err(bad());
            }
            t.push((i - 1, j - 1, v));
            if symmetric && i != j {
                t.push((j - 1, i - 1, v));
            }
        }
        Self::from_triplets(nr, nc, t)
    }
}
