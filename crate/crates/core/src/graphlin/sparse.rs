use nalgebra::DMatrix;

use crate::error::{invalid, Result};
use crate::hypergraph::Hypergraph;

/// A real linear map applied to vectors, with its transpose.
pub trait LinearOperator {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    /// `y = A x`.
    fn apply(&self, x: &[f64], y: &mut [f64]);
    /// `y = Aᵀ x`.
    fn apply_transpose(&self, x: &[f64], y: &mut [f64]);

    /// Applies the operator to every column of `x`.
    fn apply_block(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.nrows(), x.ncols());
        for j in 0..x.ncols() {
            self.apply(x.column(j).as_slice(), out.column_mut(j).as_mut_slice());
        }
        out
    }

    fn apply_transpose_block(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.ncols(), x.ncols());
        for j in 0..x.ncols() {
            self.apply_transpose(x.column(j).as_slice(), out.column_mut(j).as_mut_slice());
        }
        out
    }
}

impl LinearOperator for DMatrix<f64> {
    fn nrows(&self) -> usize {
        self.nrows()
    }

    fn ncols(&self) -> usize {
        self.ncols()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    fn apply_transpose(&self, x: &[f64], y: &mut [f64]) {
        for (j, yj) in y.iter_mut().enumerate() {
            *yj = self.column(j).iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }
}

/// Compressed sparse rows with non-negative integer weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    offsets: Vec<usize>,
    indices: Vec<u32>,
    values: Vec<u32>,
}

impl CsrMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            offsets: vec![0; nrows + 1],
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Builds from `(row, col)` pairs; repeated pairs add up.
    pub fn from_pairs(nrows: usize, ncols: usize, mut pairs: Vec<(u32, u32)>) -> Self {
        pairs.sort_unstable();
        let mut offsets = vec![0usize; nrows + 1];
        let mut indices = Vec::new();
        let mut values: Vec<u32> = Vec::new();
        let mut last = None;
        for (r, c) in pairs {
            if last == Some((r, c)) {
                *values.last_mut().expect("a previous entry") += 1;
            } else {
                indices.push(c);
                values.push(1);
                offsets[r as usize + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..nrows {
            offsets[i + 1] += offsets[i];
        }
        Self {
            nrows,
            ncols,
            offsets,
            indices,
            values,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[u32], &[u32]) {
        let r = self.offsets[i]..self.offsets[i + 1];
        (&self.indices[r.clone()], &self.values[r])
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        let (cols, vals) = self.row(i);
        cols.binary_search(&(j as u32)).map_or(0, |p| vals[p])
    }

    pub fn row_sums(&self) -> Vec<u64> {
        (0..self.nrows)
            .map(|i| self.row(i).1.iter().map(|&v| u64::from(v)).sum())
            .collect()
    }

    pub fn col_sums(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.ncols];
        for (c, v) in self.indices.iter().zip(&self.values) {
            out[*c as usize] += u64::from(*v);
        }
        out
    }

    pub fn transpose(&self) -> CsrMatrix {
        let mut pairs = Vec::with_capacity(self.values.iter().map(|&v| v as usize).sum());
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (c, v) in cols.iter().zip(vals) {
                for _ in 0..*v {
                    pairs.push((*c, i as u32));
                }
            }
        }
        CsrMatrix::from_pairs(self.ncols, self.nrows, pairs)
    }

    /// Zeroes every entry whose row or column is not kept.
    pub fn mask(&self, keep_rows: &[bool], keep_cols: &[bool]) -> CsrMatrix {
        let mut offsets = vec![0usize; self.nrows + 1];
        let mut indices = Vec::new();
        let mut values = Vec::new();
        for i in 0..self.nrows {
            if keep_rows[i] {
                let (cols, vals) = self.row(i);
                for (c, v) in cols.iter().zip(vals) {
                    if keep_cols[*c as usize] {
                        indices.push(*c);
                        values.push(*v);
                    }
                }
            }
            offsets[i + 1] = indices.len();
        }
        CsrMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            offsets,
            indices,
            values,
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.nrows, self.ncols);
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (c, v) in cols.iter().zip(vals) {
                out[(i, *c as usize)] = f64::from(*v);
            }
        }
        out
    }
}

impl LinearOperator for CsrMatrix {
    fn nrows(&self) -> usize {
        self.nrows
    }

    fn ncols(&self) -> usize {
        self.ncols
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let (cols, vals) = self.row(i);
            *yi = cols
                .iter()
                .zip(vals)
                .map(|(c, v)| f64::from(*v) * x[*c as usize])
                .sum();
        }
    }

    fn apply_transpose(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        for (i, xi) in x.iter().enumerate() {
            if *xi == 0.0 {
                continue;
            }
            let (cols, vals) = self.row(i);
            for (c, v) in cols.iter().zip(vals) {
                y[*c as usize] += f64::from(*v) * xi;
            }
        }
    }
}

/// Symmetric adjacency matrix with zero diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseSymMatrix(CsrMatrix);

impl SparseSymMatrix {
    pub fn n(&self) -> usize {
        self.0.nrows
    }

    pub fn csr(&self) -> &CsrMatrix {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.0.get(i, j)
    }

    pub fn row(&self, i: usize) -> (&[u32], &[u32]) {
        self.0.row(i)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        self.0.to_dense()
    }

    /// Restriction to the principal submatrix on `keep`, padded with zeros.
    pub fn mask(&self, keep: &[bool]) -> SparseSymMatrix {
        SparseSymMatrix(self.0.mask(keep, keep))
    }
}

impl LinearOperator for SparseSymMatrix {
    fn nrows(&self) -> usize {
        self.0.nrows
    }

    fn ncols(&self) -> usize {
        self.0.ncols
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.0.apply(x, y);
    }

    fn apply_transpose(&self, x: &[f64], y: &mut [f64]) {
        self.0.apply(x, y);
    }
}

/// `A_ij` = number of edges containing both `i` and `j`, for `i != j`.
pub fn adjacency(h: &Hypergraph) -> SparseSymMatrix {
    let mut pairs = Vec::new();
    for e in h.iter() {
        for (a, &i) in e.vertices.iter().enumerate() {
            for &j in &e.vertices[a + 1..] {
                pairs.push((i, j));
                pairs.push((j, i));
            }
        }
    }
    SparseSymMatrix(CsrMatrix::from_pairs(h.n(), h.n(), pairs))
}

/// The adjacency block between `rows` and `cols`, embedded in an `n x n`
/// matrix: entry `(i, j)` is `A_ij` when `i` is a row vertex and `j` a column
/// vertex, zero otherwise.
pub fn bipartite_embed(h: &Hypergraph, rows: &[bool], cols: &[bool]) -> Result<CsrMatrix> {
    let n = h.n();
    if rows.len() != n || cols.len() != n {
        return invalid("row and column masks must have length n");
    }
    if rows.iter().zip(cols).any(|(r, c)| *r && *c) {
        return invalid("row and column vertex sets overlap");
    }
    let mut pairs = Vec::new();
    for e in h.iter() {
        for &i in e.vertices {
            if !rows[i as usize] {
                continue;
            }
            for &j in e.vertices {
                if cols[j as usize] {
                    pairs.push((i, j));
                }
            }
        }
    }
    Ok(CsrMatrix::from_pairs(n, n, pairs))
}

/// `row(i) = Σ_j A_ij`, which counts every order-`m` edge through `i` `m - 1` times.
pub fn row_sums(a: &SparseSymMatrix) -> Vec<u64> {
    a.0.row_sums()
}

/// Zeroes the rows and columns of vertices whose row sum exceeds `threshold`.
///
/// Returns the masked matrix and the kept set.
pub fn regularize(a: &SparseSymMatrix, threshold: f64) -> (SparseSymMatrix, Vec<bool>) {
    let keep: Vec<bool> = row_sums(a).iter().map(|&r| r as f64 <= threshold).collect();
    (a.mask(&keep), keep)
}

/// [`regularize`] for an embedded bipartite block. A vertex's degree is its
/// row sum plus its column sum, so that row and column vertices are treated
/// alike.
pub fn regularize_bipartite(a: &CsrMatrix, threshold: f64) -> (CsrMatrix, Vec<bool>) {
    let keep: Vec<bool> = a
        .row_sums()
        .iter()
        .zip(a.col_sums())
        .map(|(&r, c)| (r + c) as f64 <= threshold)
        .collect();
    (a.mask(&keep, &keep), keep)
}
