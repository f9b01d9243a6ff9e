//! Compressed sparse row matrices over `Complex64`.
//!
//! Only what the representation layer needs: assembly from triplets,
//! products, sums, adjoints and column/principal restrictions. Explicit zeros
//! are never stored.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

#[derive(Clone, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<Complex64>,
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseMatrix({}x{}, nnz={})", self.rows, self.cols, self.nnz())
    }
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, indptr: vec![0; rows + 1], indices: Vec::new(), values: Vec::new() }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![Complex64::new(1.0, 0.0); dim])
    }

    pub fn diagonal(diag: &[Complex64]) -> Self {
        Self::from_triplets(diag.len(), diag.len(), diag.iter().enumerate().map(|(i, v)| (i, i, *v)))
    }

    /// Builds a matrix from `(row, col, value)` entries. Duplicates are summed
    /// and entries that end up exactly zero are dropped.
    ///
    /// Panics if an index is out of bounds.
    pub fn from_triplets<I>(rows: usize, cols: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Complex64)>,
    {
        let mut per_row: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); rows];
        for (r, c, v) in entries {
            assert!(r < rows && c < cols, "entry ({r}, {c}) outside {rows}x{cols}");
            per_row[r].push((c, v));
        }
        let mut indptr = Vec::with_capacity(rows + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for mut row in per_row {
            row.sort_by_key(|&(c, _)| c);
            let mut i = 0;
            while i < row.len() {
                let c = row[i].0;
                let mut acc = ZERO;
                while i < row.len() && row[i].0 == c {
                    acc += row[i].1;
                    i += 1;
                }
                if acc != ZERO {
                    indices.push(c);
                    values.push(acc);
                }
            }
            indptr.push(indices.len());
        }
        SparseMatrix { rows, cols, indptr, indices, values }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Stored entries of row `r` as `(col, value)`.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let span = self.indptr[r]..self.indptr[r + 1];
        self.indices[span.clone()].iter().copied().zip(self.values[span].iter().copied())
    }

    /// All stored entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.rows).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        let span = self.indptr[r]..self.indptr[r + 1];
        match self.indices[span.clone()].binary_search(&c) {
            Ok(k) => self.values[span.start + k],
            Err(_) => ZERO,
        }
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols, "matvec dimension mismatch");
        (0..self.rows)
            .map(|r| self.row(r).fold(ZERO, |acc, (c, v)| acc + v * x[c]))
            .collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> SparseMatrix {
        SparseMatrix::from_triplets(self.cols, self.rows, self.entries().map(|(r, c, v)| (c, r, v.conj())))
    }

    /// Matrix product `self · other` (row-by-row accumulation).
    pub fn matmul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut acc = vec![ZERO; other.cols];
        let mut touched: Vec<usize> = Vec::new();
        let mut mark = vec![false; other.cols];
        let mut indptr = Vec::with_capacity(self.rows + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for r in 0..self.rows {
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    if !mark[c] {
                        mark[c] = true;
                        touched.push(c);
                    }
                    acc[c] += a * b;
                }
            }
            touched.sort_unstable();
            for &c in &touched {
                if acc[c] != ZERO {
                    indices.push(c);
                    values.push(acc[c]);
                }
                acc[c] = ZERO;
                mark[c] = false;
            }
            touched.clear();
            indptr.push(indices.len());
        }
        SparseMatrix { rows: self.rows, cols: other.cols, indptr, indices, values }
    }

    /// `self + alpha·other`.
    pub fn add_scaled(&self, other: &SparseMatrix, alpha: Complex64) -> SparseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "add dimension mismatch");
        SparseMatrix::from_triplets(
            self.rows,
            self.cols,
            self.entries().chain(other.entries().map(|(r, c, v)| (r, c, alpha * v))),
        )
    }

    pub fn scale(&self, alpha: Complex64) -> SparseMatrix {
        SparseMatrix::from_triplets(self.rows, self.cols, self.entries().map(|(r, c, v)| (r, c, alpha * v)))
    }

    /// Keeps the listed columns, in the listed order.
    pub fn select_columns(&self, columns: &[usize]) -> SparseMatrix {
        let mut position = vec![usize::MAX; self.cols];
        for (k, &c) in columns.iter().enumerate() {
            position[c] = k;
        }
        SparseMatrix::from_triplets(
            self.rows,
            columns.len(),
            self.entries().filter(|&(_, c, _)| position[c] != usize::MAX).map(|(r, c, v)| (r, position[c], v)),
        )
    }

    /// Principal submatrix on the listed indices.
    pub fn principal(&self, idx: &[usize]) -> SparseMatrix {
        assert!(self.is_square());
        let mut position = vec![usize::MAX; self.cols];
        for (k, &c) in idx.iter().enumerate() {
            position[c] = k;
        }
        SparseMatrix::from_triplets(
            idx.len(),
            idx.len(),
            self.entries()
                .filter(|&(r, c, _)| position[r] != usize::MAX && position[c] != usize::MAX)
                .map(|(r, c, v)| (position[r], position[c], v)),
        )
    }

    /// Assembles a block matrix. Every block in a block-row must share its
    /// row count and every block in a block-column its column count; `None`
    /// is a zero block whose shape is taken from its neighbours.
    pub fn block(grid: &[Vec<Option<&SparseMatrix>>]) -> SparseMatrix {
        let br = grid.len();
        let bc = grid.first().map_or(0, Vec::len);
        let mut row_sizes = vec![None; br];
        let mut col_sizes = vec![None; bc];
        for (i, row) in grid.iter().enumerate() {
            assert_eq!(row.len(), bc, "ragged block grid");
            for (j, m) in row.iter().enumerate() {
                if let Some(m) = m {
                    assert!(row_sizes[i].is_none_or(|s| s == m.rows), "block row size mismatch");
                    assert!(col_sizes[j].is_none_or(|s| s == m.cols), "block column size mismatch");
                    row_sizes[i] = Some(m.rows);
                    col_sizes[j] = Some(m.cols);
                }
            }
        }
        let row_sizes: Vec<usize> = row_sizes.into_iter().map(|s| s.expect("empty block row")).collect();
        let col_sizes: Vec<usize> = col_sizes.into_iter().map(|s| s.expect("empty block column")).collect();
        let row_off: Vec<usize> = row_sizes.iter().scan(0, |acc, &s| { let o = *acc; *acc += s; Some(o) }).collect();
        let col_off: Vec<usize> = col_sizes.iter().scan(0, |acc, &s| { let o = *acc; *acc += s; Some(o) }).collect();
        let mut triplets = Vec::new();
        for (i, row) in grid.iter().enumerate() {
            for (j, m) in row.iter().enumerate() {
                if let Some(m) = m {
                    triplets.extend(m.entries().map(|(r, c, v)| (r + row_off[i], c + col_off[j], v)));
                }
            }
        }
        SparseMatrix::from_triplets(row_sizes.iter().sum(), col_sizes.iter().sum(), triplets)
    }

    /// Squared Frobenius norm.
    pub fn frobenius_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::from_element(self.rows, self.cols, ZERO);
        for (r, c, v) in self.entries() {
            m[(r, c)] = v;
        }
        m
    }
}
