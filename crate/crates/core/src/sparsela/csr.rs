use crate::error::{Error, Result};

/// Compressed sparse row matrix.
///
/// Column indices are sorted and unique within each row.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseCsr {
    nrows: usize,
    ncols: usize,
    offsets: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    symmetric: bool,
}

impl SparseCsr {
    /// Builds a matrix from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: &[(usize, usize, f64)],
    ) -> Result<Self> {
        let mut counts = vec![0usize; nrows + 1];
        for &(i, j, _) in triplets {
            if i >= nrows || j >= ncols {
                return Err(Error::invalid(format!(
                    "entry ({i}, {j}) outside a {nrows}x{ncols} matrix"
                )));
            }
            counts[i + 1] += 1;
        }
        for i in 0..nrows {
            counts[i + 1] += counts[i];
        }
        // Bucket by row, then sort and merge each row.
        let mut next = counts.clone();
        let mut buf = vec![(0usize, 0.0f64); triplets.len()];
        for &(i, j, v) in triplets {
            buf[next[i]] = (j, v);
            next[i] += 1;
        }
        let mut offsets = Vec::with_capacity(nrows + 1);
        let mut cols = Vec::with_capacity(triplets.len());
        let mut vals = Vec::with_capacity(triplets.len());
        offsets.push(0);
        for i in 0..nrows {
            let row = &mut buf[counts[i]..counts[i + 1]];
            row.sort_by_key(|e| e.0);
            for &(j, v) in row.iter() {
                if cols.len() > offsets[i] && *cols.last().unwrap() == j {
                    *vals.last_mut().unwrap() += v;
                } else {
                    cols.push(j);
                    vals.push(v);
                }
            }
            offsets.push(cols.len());
        }
        Ok(Self {
            nrows,
            ncols,
            offsets,
            cols,
            vals,
            symmetric: false,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let n = d.len();
        Self {
            nrows: n,
            ncols: n,
            offsets: (0..=n).collect(),
            cols: (0..n).collect(),
            vals: d.to_vec(),
            symmetric: true,
        }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            offsets: vec![0; nrows + 1],
            cols: Vec::new(),
            vals: Vec::new(),
            symmetric: nrows == ncols,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.cols
    }

    pub fn values(&self) -> &[f64] {
        &self.vals
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.vals
    }

    /// Whether the matrix has been flagged symmetric by its producer.
    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn with_symmetric(mut self, flag: bool) -> Self {
        self.symmetric = flag;
        self
    }

    /// Checks symmetry numerically; sets and returns the flag.
    pub fn check_symmetric(&mut self, tol: f64) -> bool {
        let ok = self.nrows == self.ncols
            && (0..self.nrows).all(|i| {
                self.row(i)
                    .all(|(j, v)| (self.get(j, i) - v).abs() <= tol * v.abs().max(1.0))
            });
        self.symmetric = ok;
        ok
    }

    /// `(col, value)` pairs of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.offsets[i]..self.offsets[i + 1];
        self.cols[r.clone()]
            .iter()
            .copied()
            .zip(self.vals[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let r = self.offsets[i]..self.offsets[i + 1];
        match self.cols[r.clone()].binary_search(&j) {
            Ok(k) => self.vals[r.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.nrows.min(self.ncols))
            .map(|i| self.get(i, i))
            .collect()
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.ncols {
            return Err(Error::DimensionMismatch {
                expected: self.ncols,
                got: x.len(),
            });
        }
        let mut y = vec![0.0; self.nrows];
        self.matvec_into(x, &mut y);
        Ok(y)
    }

    /// `y = A x` without allocation. Panics on dimension mismatch.
    pub fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.ncols);
        assert_eq!(y.len(), self.nrows);
        for (i, yi) in y.iter_mut().enumerate() {
            let r = self.offsets[i]..self.offsets[i + 1];
            let mut acc = 0.0;
            for (&j, &v) in self.cols[r.clone()].iter().zip(&self.vals[r]) {
                acc += v * x[j];
            }
            *yi = acc;
        }
    }

    /// `xᵀ A y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (i, &xi) in x.iter().enumerate() {
            let mut row = 0.0;
            for (j, v) in self.row(i) {
                row += v * y[j];
            }
            acc += xi * row;
        }
        acc
    }

    /// `a·self + b·other`, merging sparsity patterns.
    pub fn linear_combination(&self, a: f64, other: &SparseCsr, b: f64) -> Result<SparseCsr> {
        if self.nrows != other.nrows || self.ncols != other.ncols {
            return Err(Error::DimensionMismatch {
                expected: self.nrows,
                got: other.nrows,
            });
        }
        if self.offsets == other.offsets && self.cols == other.cols {
            return Ok(SparseCsr {
                vals: self
                    .vals
                    .iter()
                    .zip(&other.vals)
                    .map(|(x, y)| a * x + b * y)
                    .collect(),
                symmetric: self.symmetric && other.symmetric,
                ..self.clone()
            });
        }
        let mut offsets = Vec::with_capacity(self.nrows + 1);
        let mut cols = Vec::with_capacity(self.nnz().max(other.nnz()));
        let mut vals = Vec::with_capacity(cols.capacity());
        offsets.push(0);
        for i in 0..self.nrows {
            let mut p = self.row(i).peekable();
            let mut q = other.row(i).peekable();
            loop {
                let next = match (p.peek(), q.peek()) {
                    (Some(&(j1, v1)), Some(&(j2, v2))) => {
                        if j1 == j2 {
                            p.next();
                            q.next();
                            (j1, a * v1 + b * v2)
                        } else if j1 < j2 {
                            p.next();
                            (j1, a * v1)
                        } else {
                            q.next();
                            (j2, b * v2)
                        }
                    }
                    (Some(&(j, v)), None) => {
                        p.next();
                        (j, a * v)
                    }
                    (None, Some(&(j, v))) => {
                        q.next();
                        (j, b * v)
                    }
                    (None, None) => break,
                };
                cols.push(next.0);
                vals.push(next.1);
            }
            offsets.push(cols.len());
        }
        Ok(SparseCsr {
            nrows: self.nrows,
            ncols: self.ncols,
            offsets,
            cols,
            vals,
            symmetric: self.symmetric && other.symmetric,
        })
    }

    pub fn scale(&mut self, s: f64) {
        self.vals.iter_mut().for_each(|v| *v *= s);
    }

    /// Sum of all stored entries.
    pub fn entry_sum(&self) -> f64 {
        crate::fractime::neumaier_sum(self.vals.iter().copied())
    }

    /// Dense copy, row-major. Intended for tests and small systems.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.ncols]; self.nrows];
        for (i, row) in d.iter_mut().enumerate() {
            for (j, v) in self.row(i) {
                row[j] = v;
            }
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn triplets_sum_duplicates_and_sort() {
        let a =
            SparseCsr::from_triplets(2, 3, &[(0, 2, 1.0), (0, 0, 2.0), (0, 2, 0.5), (1, 1, -1.0)])
                .unwrap();
        assert_eq!(a.offsets(), &[0, 2, 3]);
        assert_eq!(a.col_indices(), &[0, 2, 1]);
        assert_eq!(a.values(), &[2.0, 1.5, -1.0]);
        assert!(SparseCsr::from_triplets(2, 2, &[(2, 0, 1.0)]).is_err());
    }

    #[test]
    fn identity_and_zero_matvec() {
        let x = vec![1.0, -2.0, 3.5];
        assert_eq!(SparseCsr::identity(3).matvec(&x).unwrap(), x);
        assert_eq!(SparseCsr::zeros(3, 3).matvec(&x).unwrap(), vec![0.0; 3]);
        assert!(matches!(
            SparseCsr::identity(2).matvec(&x),
            Err(Error::DimensionMismatch {
                expected: 2,
                got: 3
            })
        ));
    }

    #[test]
    fn combination_merges_patterns() {
        let a = SparseCsr::from_triplets(2, 2, &[(0, 0, 1.0), (1, 0, 2.0)]).unwrap();
        let b = SparseCsr::from_triplets(2, 2, &[(0, 1, 3.0), (1, 0, 1.0)]).unwrap();
        let c = a.linear_combination(2.0, &b, -1.0).unwrap();
        assert_eq!(c.to_dense(), vec![vec![2.0, -3.0], vec![3.0, 0.0]]);
    }

    #[test]
    fn symmetry_check() {
        let mut a =
            SparseCsr::from_triplets(2, 2, &[(0, 1, 1.0), (1, 0, 1.0), (0, 0, 4.0)]).unwrap();
        assert!(a.check_symmetric(0.0));
        let mut b = SparseCsr::from_triplets(2, 2, &[(0, 1, 1.0)]).unwrap();
        assert!(!b.check_symmetric(0.0));
    }

    proptest! {
        #[test]
        fn matvec_matches_dense(
            entries in proptest::collection::vec((0usize..6, 0usize..5, -3.0f64..3.0), 0..30),
            x in proptest::collection::vec(-2.0f64..2.0, 5),
        ) {
            let a = SparseCsr::from_triplets(6, 5, &entries).unwrap();
            let dense = a.to_dense();
            let y = a.matvec(&x).unwrap();
            for i in 0..6 {
                let want: f64 = (0..5).map(|j| dense[i][j] * x[j]).sum();
                prop_assert!((y[i] - want).abs() < 1e-12);
            }
            // bitwise reproducible
            prop_assert_eq!(y, a.matvec(&x).unwrap());
        }
    }
}
