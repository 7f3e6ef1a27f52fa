use crate::error::{Error, Result};

use super::SparseSymOperator;

/// Relative residual target `‖b − A x‖ ≤ tol ‖b‖`.
pub const CG_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgStats {
    pub iterations: usize,
    pub relative_residual: f64,
}

/// Jacobi-preconditioned conjugate gradients for a fixed SPD matrix.
#[derive(Debug, Clone)]
pub struct CgSolver {
    matrix: SparseSymOperator,
    inv_diag: Vec<f64>,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl CgSolver {
    pub fn new(matrix: SparseSymOperator) -> Result<Self> {
        let diag = matrix.diagonal();
        if let Some(i) = diag.iter().position(|&d| !(d > 0.0)) {
            return Err(Error::Internal(format!(
                "non-positive diagonal entry {} at row {i}",
                diag[i]
            )));
        }
        let inv_diag = diag.iter().map(|d| 1.0 / d).collect();
        let max_iterations = 10 * matrix.n.max(1);
        Ok(Self {
            matrix,
            inv_diag,
            tolerance: CG_TOLERANCE,
            max_iterations,
        })
    }

    pub fn matrix(&self) -> &SparseSymOperator {
        &self.matrix
    }

    /// Solves `A x = b`, using the incoming `x` as the initial guess.
    pub fn solve_into(&self, b: &[f64], x: &mut [f64]) -> Result<CgStats> {
        let n = self.matrix.n;
        assert_eq!(b.len(), n, "right-hand side length");
        assert_eq!(x.len(), n, "solution length");
        let b_norm = norm(b);
        if b_norm == 0.0 {
            x.fill(0.0);
            return Ok(CgStats {
                iterations: 0,
                relative_residual: 0.0,
            });
        }
        let target = self.tolerance * b_norm;
        let mut r = self.matrix.apply(x);
        for (ri, bi) in r.iter_mut().zip(b) {
            *ri = bi - *ri;
        }
        let mut z: Vec<f64> = r.iter().zip(&self.inv_diag).map(|(a, d)| a * d).collect();
        let mut p = z.clone();
        let mut ap = vec![0.0; n];
        let mut rz = dot(&r, &z);
        let mut res = norm(&r);
        let mut it = 0;
        while res > target {
            if it >= self.max_iterations {
                return Err(Error::Solver {
                    iterations: it,
                    residual: res / b_norm,
                });
            }
            self.matrix.apply_into(&p, &mut ap);
            let pap = dot(&p, &ap);
            if !(pap > 0.0) {
                return Err(Error::Solver {
                    iterations: it,
                    residual: res / b_norm,
                });
            }
            let step = rz / pap;
            for i in 0..n {
                x[i] += step * p[i];
                r[i] -= step * ap[i];
            }
            for i in 0..n {
                z[i] = r[i] * self.inv_diag[i];
            }
            let rz_new = dot(&r, &z);
            let beta = rz_new / rz;
            rz = rz_new;
            for i in 0..n {
                p[i] = z[i] + beta * p[i];
            }
            res = norm(&r);
            it += 1;
        }
        Ok(CgStats {
            iterations: it,
            relative_residual: res / b_norm,
        })
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let mut x = vec![0.0; b.len()];
        self.solve_into(b, &mut x)?;
        Ok(x)
    }
}

/// One-shot SPD solve with zero initial guess.
pub fn spd_solve(a: &SparseSymOperator, b: &[f64]) -> Result<Vec<f64>> {
    CgSolver::new(a.clone())?.solve(b)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_returns_rhs() {
        let b = vec![1.0, -2.0, 3.5];
        let x = spd_solve(&SparseSymOperator::identity(3), &b).unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn zero_rhs_gives_zero() {
        let x = spd_solve(&SparseSymOperator::identity(4), &[0.0; 4]).unwrap();
        assert!(x.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn tridiagonal_system() {
        let n = 50;
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
                t.push((i + 1, i, -1.0));
            }
        }
        let a = SparseSymOperator::from_triplets(n, &t).unwrap();
        let want: Vec<f64> = (0..n).map(|i| (i as f64 * 0.3).sin()).collect();
        let b = a.apply(&want);
        let x = spd_solve(&a, &b).unwrap();
        let err = x.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-9, "{err}");
    }

    #[test]
    fn indefinite_matrix_surfaces_failure() {
        let a = SparseSymOperator::from_triplets(2, &[(0, 0, 1.0), (1, 1, 1.0), (0, 1, 2.0), (1, 0, 2.0)]).unwrap();
        let err = spd_solve(&a, &[1.0, -1.0]).unwrap_err();
        assert!(matches!(err, Error::Solver { .. }));
    }
}
