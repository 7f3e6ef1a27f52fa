use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Symmetric matrix in compressed row storage with the full pattern stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseSymOperator {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<f64>,
}

impl SparseSymOperator {
    /// Sums duplicate entries in the order given. Fails if the result is not
    /// exactly symmetric.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(i, j, v) in triplets {
            if i >= n || j >= n {
                return Err(Error::Index {
                    index: i.max(j),
                    len: n,
                });
            }
            rows[i].push((j, v));
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for row in &mut rows {
            row.sort_by_key(|&(j, _)| j);
            let mut k = 0;
            while k < row.len() {
                let col = row[k].0;
                let mut sum = 0.0;
                while k < row.len() && row[k].0 == col {
                    sum += row[k].1;
                    k += 1;
                }
                col_idx.push(col);
                values.push(sum);
            }
            row_ptr.push(col_idx.len());
        }
        let op = Self {
            n,
            row_ptr,
            col_idx,
            values,
        };
        let asym = op.max_asymmetry();
        if asym != 0.0 {
            return Err(Error::Internal(format!(
                "assembled operator is not symmetric ({asym:e})"
            )));
        }
        Ok(op)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[r.clone()]
            .iter()
            .copied()
            .zip(self.values[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.col_idx[r.clone()].binary_search(&j) {
            Ok(k) => self.values[r.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// `y = A x`.
    pub fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n, "operand length");
        assert_eq!(y.len(), self.n, "output length");
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).map(|(j, v)| v * x[j]).sum();
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.apply_into(x, &mut y);
        y
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).map(|(_, v)| v).sum()).collect()
    }

    /// `max |A_ij - A_ji|`.
    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                worst = worst.max((v - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// `a A + b B`, pattern union.
    pub fn linear_combination(a: f64, lhs: &Self, b: f64, rhs: &Self) -> Result<Self> {
        if lhs.n != rhs.n {
            return Err(Error::Internal(format!("size mismatch {} vs {}", lhs.n, rhs.n)));
        }
        let mut triplets = Vec::with_capacity(lhs.nnz() + rhs.nnz());
        for i in 0..lhs.n {
            triplets.extend(lhs.row(i).map(|(j, v)| (i, j, a * v)));
            triplets.extend(rhs.row(i).map(|(j, v)| (i, j, b * v)));
        }
        Self::from_triplets(lhs.n, &triplets)
    }

    /// Principal submatrix on `keep`, where `keep[i]` is the new index of row `i`.
    pub fn restrict(&self, keep: &[Option<usize>]) -> Result<Self> {
        let m = keep.iter().flatten().count();
        let mut triplets = Vec::new();
        for i in 0..self.n {
            let Some(ni) = keep[i] else { continue };
            for (j, v) in self.row(i) {
                if let Some(nj) = keep[j] {
                    triplets.push((ni, nj, v));
                }
            }
        }
        Self::from_triplets(m, &triplets)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut d = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                d[(i, j)] = v;
            }
        }
        d
    }

    /// `x^T A y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        x.iter().zip(self.apply(y)).map(|(a, b)| a * b).sum()
    }
}
