//! Compressed sparse column storage for symmetric matrices.
//!
//! Both triangles are stored so that products and row access need no
//! special casing; the solver hands only the lower triangle to the
//! factorisation.

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricCsc {
    n: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SymmetricCsc {
    /// Zero matrix with the given column patterns. Each column's rows must be
    /// sorted and unique, and the pattern must be structurally symmetric.
    pub fn from_pattern(columns: &[Vec<usize>]) -> Self {
        let n = columns.len();
        let mut col_ptr = Vec::with_capacity(n + 1);
        let mut row_idx = Vec::new();
        col_ptr.push(0);
        for col in columns {
            debug_assert!(col.windows(2).all(|w| w[0] < w[1]));
            row_idx.extend_from_slice(col);
            col_ptr.push(row_idx.len());
        }
        let values = vec![0.0; row_idx.len()];
        Self { n, col_ptr, row_idx, values }
    }

    /// Sums duplicate `(row, col, value)` entries; off-diagonal entries are
    /// mirrored into the other triangle.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut columns = vec![Vec::new(); n];
        for &(i, j, _) in triplets {
            columns[j].push(i);
            columns[i].push(j);
        }
        for c in &mut columns {
            c.sort_unstable();
            c.dedup();
        }
        let mut m = Self::from_pattern(&columns);
        for &(i, j, v) in triplets {
            let k = m.find(i, j).expect("entry in pattern");
            m.values[k] += v;
            if i != j {
                let k = m.find(j, i).expect("entry in pattern");
                m.values[k] += v;
            }
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        let columns: Vec<Vec<usize>> = (0..n).map(|j| vec![j]).collect();
        let mut m = Self::from_pattern(&columns);
        m.values.fill(1.0);
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.row_idx.len()
    }

    pub fn col_ptr(&self) -> &[usize] {
        &self.col_ptr
    }

    pub fn row_idx(&self) -> &[usize] {
        &self.row_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Position of entry `(i, j)` in the value array.
    pub fn find(&self, i: usize, j: usize) -> Option<usize> {
        let (lo, hi) = (self.col_ptr[j], self.col_ptr[j + 1]);
        self.row_idx[lo..hi].binary_search(&i).ok().map(|k| lo + k)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.find(i, j).map_or(0.0, |k| self.values[k])
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for j in 0..self.n {
            let xj = x[j];
            for k in self.col_ptr[j]..self.col_ptr[j + 1] {
                y[self.row_idx[k]] += self.values[k] * xj;
            }
        }
        y
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.n]; self.n];
        for j in 0..self.n {
            for k in self.col_ptr[j]..self.col_ptr[j + 1] {
                d[self.row_idx[k]][j] = self.values[k];
            }
        }
        d
    }

    /// Largest `|a_ij - a_ji|` relative to the largest entry.
    pub fn asymmetry(&self) -> f64 {
        let scale = self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut worst = 0.0f64;
        for j in 0..self.n {
            for k in self.col_ptr[j]..self.col_ptr[j + 1] {
                let i = self.row_idx[k];
                worst = worst.max((self.values[k] - self.get(j, i)).abs());
            }
        }
        if scale > 0.0 {
            worst / scale
        } else {
            0.0
        }
    }

    /// Lower triangle (including the diagonal) as `(col_ptr, row_idx, values)`.
    pub fn lower(&self) -> (Vec<usize>, Vec<usize>, Vec<f64>) {
        let mut col_ptr = Vec::with_capacity(self.n + 1);
        let mut row_idx = Vec::with_capacity(self.nnz() / 2 + self.n);
        let mut values = Vec::with_capacity(self.nnz() / 2 + self.n);
        col_ptr.push(0);
        for j in 0..self.n {
            for k in self.col_ptr[j]..self.col_ptr[j + 1] {
                if self.row_idx[k] >= j {
                    row_idx.push(self.row_idx[k]);
                    values.push(self.values[k]);
                }
            }
            col_ptr.push(row_idx.len());
        }
        (col_ptr, row_idx, values)
    }
}
