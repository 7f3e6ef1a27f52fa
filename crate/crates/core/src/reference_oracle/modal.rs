use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{param, Error, Result};
use crate::quadrature::GaussLegendre;
use crate::spatial_fem::{FemSpace, GridFunction};
use crate::time_stepping::LinearProblem;

use super::scalar::ResolventRule;

/// Dense decompositions are refused above this many unknowns.
pub const DENSE_DOF_LIMIT: usize = 1024;

const DUHAMEL_PANELS: usize = 24;
const DUHAMEL_NODES: usize = 12;

/// Generalized eigenpairs `S v_k = λ_k M v_k`, `λ_k` ascending, `v_k` mass-orthonormal.
#[derive(Debug, Clone)]
pub struct ModalBasis {
    pub eigenvalues: Vec<f64>,
    /// Column `k` holds `v_k`.
    pub vectors: DMatrix<f64>,
    mass: DMatrix<f64>,
}

impl ModalBasis {
    pub fn new(space: &FemSpace) -> Result<Self> {
        let n = space.num_dofs();
        if n > DENSE_DOF_LIMIT {
            return Err(param(
                "mesh",
                format!("{n} unknowns exceed the dense limit {DENSE_DOF_LIMIT}"),
            ));
        }
        let mass = space.mass.to_dense();
        let stiff = space.stiffness.to_dense();
        let chol = mass
            .clone()
            .cholesky()
            .ok_or_else(|| Error::Eigen("mass matrix is not SPD".into()))?;
        let l = chol.l();
        let l_inv = l
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Eigen("singular Cholesky factor".into()))?;
        let mut c = &l_inv * stiff * l_inv.transpose();
        c = (&c + c.transpose()) * 0.5;
        let eig = SymmetricEigen::new(c);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        if let Some(bad) = eigenvalues.iter().find(|&&v| !(v > 0.0)) {
            return Err(Error::Eigen(format!("non-positive eigenvalue {bad}")));
        }
        let lt_inv = l_inv.transpose();
        let mut vectors = DMatrix::zeros(n, n);
        for (col, &k) in order.iter().enumerate() {
            vectors.set_column(col, &(&lt_inv * eig.eigenvectors.column(k)));
        }
        Ok(Self {
            eigenvalues,
            vectors,
            mass,
        })
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn mode(&self, k: usize) -> GridFunction {
        GridFunction::new(self.vectors.column(k).iter().copied().collect())
    }

    /// `c_k = v_k^T M u`.
    pub fn coefficients(&self, u: &[f64]) -> Vec<f64> {
        let mu = &self.mass * DVector::from_column_slice(u);
        (self.vectors.transpose() * mu).iter().copied().collect()
    }

    /// `c_k = v_k^T b` for a load vector `b = (g, φ_i)`.
    pub fn load_coefficients(&self, b: &[f64]) -> Vec<f64> {
        (self.vectors.transpose() * DVector::from_column_slice(b))
            .iter()
            .copied()
            .collect()
    }

    pub fn synthesize(&self, c: &[f64]) -> GridFunction {
        GridFunction::new(
            (&self.vectors * DVector::from_column_slice(c))
                .iter()
                .copied()
                .collect(),
        )
    }
}

/// Semi-discrete solution `u_h(t)` of the linear problem, mode by mode:
/// `c_k(t) = c_k(0) − λ_k F(t) c_k(0) + ∫_0^t E(t − s) g_k(s) ds`.
pub fn linear_reference_solution(
    problem: &LinearProblem,
    basis: &ModalBasis,
    alpha: f64,
    t: f64,
) -> Result<GridFunction> {
    let u0 = problem.initial_value()?;
    reference_at(problem, basis, alpha, &basis.coefficients(&u0.values), t)
}

/// [`linear_reference_solution`] at several times; `t = 0` returns the initial value.
pub fn linear_reference_states(
    problem: &LinearProblem,
    basis: &ModalBasis,
    alpha: f64,
    times: &[f64],
) -> Result<Vec<GridFunction>> {
    let u0 = problem.initial_value()?;
    let c0 = basis.coefficients(&u0.values);
    times
        .iter()
        .map(|&t| {
            if t == 0.0 {
                Ok(u0.clone())
            } else {
                reference_at(problem, basis, alpha, &c0, t)
            }
        })
        .collect()
}

fn reference_at(problem: &LinearProblem, basis: &ModalBasis, alpha: f64, c0: &[f64], t: f64) -> Result<GridFunction> {
    if c0.len() != basis.len() {
        return Err(Error::Index {
            index: c0.len(),
            len: basis.len(),
        });
    }
    let rule = ResolventRule::new(alpha, t)?;
    let mut c = Vec::with_capacity(basis.len());
    for (k, &lam) in basis.eigenvalues.iter().enumerate() {
        c.push(c0[k] * (1.0 - lam * rule.f(-lam)?));
    }
    if problem.source.is_some() {
        let duhamel = if problem.steady_source {
            let gk = basis.load_coefficients(&problem.load_at(0.0));
            basis
                .eigenvalues
                .iter()
                .zip(&gk)
                .map(|(&lam, g)| Ok(rule.f(-lam)? * g))
                .collect::<Result<Vec<_>>>()?
        } else {
            duhamel_integral(problem, basis, alpha, t)?
        };
        for (ck, d) in c.iter_mut().zip(duhamel) {
            *ck += d;
        }
    }
    Ok(basis.synthesize(&c))
}

/// `∫_0^t E(t − s) g_k(s) ds` with `s = t(1 − σ^{1/α})` and geometric panels toward `σ = 0`.
fn duhamel_integral(problem: &LinearProblem, basis: &ModalBasis, alpha: f64, t: f64) -> Result<Vec<f64>> {
    let rule = GaussLegendre::cached(DUHAMEL_NODES);
    let mut out = vec![0.0; basis.len()];
    let mut hi = 1.0;
    for panel in 0..DUHAMEL_PANELS {
        let lo = if panel + 1 == DUHAMEL_PANELS { 0.0 } else { hi * 0.5 };
        let (mid, half) = (0.5 * (hi + lo), 0.5 * (hi - lo));
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let sigma = mid + half * x;
            let root = sigma.powf(1.0 / alpha);
            let r = t * root;
            let s = t - r;
            let jac = t / alpha * sigma.powf(1.0 / alpha - 1.0) * w * half;
            let gk = basis.load_coefficients(&problem.load_at(s));
            let er = ResolventRule::new(alpha, r)?;
            for (k, &lam) in basis.eigenvalues.iter().enumerate() {
                out[k] += jac * er.e(-lam)? * gk[k];
            }
        }
        hi = lo;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;
    use std::sync::Arc;

    use super::*;
    use crate::spatial_fem::{Dimension, Point, ScalarField, TriMesh};
    use crate::special::mittag_leffler_series;
    use crate::time_stepping::InitialProjection;

    fn space(dim: Dimension, m: usize) -> Arc<FemSpace> {
        Arc::new(FemSpace::new(TriMesh::new(dim, m).unwrap(), 0.1).unwrap())
    }

    fn discrete_field(space: &FemSpace, values: &[f64]) -> ScalarField {
        let mesh = space.mesh.clone();
        let nodal = mesh.extend_by_zero(values);
        ScalarField::new(move |p: Point| mesh.evaluate_nodal(&nodal, p))
    }

    #[test]
    fn eigenpairs_against_dense_generalized_problem() {
        let sp = space(Dimension::Two, 8);
        let basis = ModalBasis::new(&sp).unwrap();
        let (m, s) = (sp.mass.to_dense(), sp.stiffness.to_dense());
        for k in [0, 1, 2, 10, 48] {
            let v = basis.vectors.column(k).into_owned();
            let res = &s * &v - &m * &v * basis.eigenvalues[k];
            assert!(res.norm() < 1e-10 * basis.eigenvalues[k], "{k}");
            assert!(((v.transpose() * &m * &v)[(0, 0)] - 1.0).abs() < 1e-12);
        }
        let first = 0.1 * 2.0 * PI * PI;
        assert!(basis.eigenvalues.iter().all(|&l| l > 0.0));
        assert!(basis.eigenvalues[0] >= first);
        // conforming elements overshoot by O(h^2)
        let coarse = ModalBasis::new(&space(Dimension::Two, 4)).unwrap();
        let ratio = (coarse.eigenvalues[0] - first) / (basis.eigenvalues[0] - first);
        assert!((3.5..4.5).contains(&ratio), "{ratio}");
    }

    #[test]
    fn coefficients_round_trip() {
        let sp = space(Dimension::Two, 5);
        let basis = ModalBasis::new(&sp).unwrap();
        let u: Vec<f64> = (0..sp.num_dofs()).map(|i| (i as f64).sin()).collect();
        let back = basis.synthesize(&basis.coefficients(&u));
        assert!(back.values.iter().zip(&u).all(|(a, b)| (a - b).abs() < 1e-12));
    }

    #[test]
    fn eigenmode_decays_like_mittag_leffler() {
        let sp = space(Dimension::Two, 6);
        let basis = ModalBasis::new(&sp).unwrap();
        let v1 = basis.mode(0);
        let p = LinearProblem::homogeneous(sp.clone(), discrete_field(&sp, &v1.values))
            .with_projection(InitialProjection::Lagrange);
        let alpha = 0.6;
        for &t in &[0.05, 0.5, 1.0] {
            let u = linear_reference_solution(&p, &basis, alpha, t).unwrap();
            let ml = mittag_leffler_series(alpha, 1.0, -basis.eigenvalues[0] * t.powf(alpha), 300);
            for (a, b) in u.values.iter().zip(&v1.values) {
                assert!((a - ml * b).abs() < 1e-10, "{t}");
            }
        }
        let early = linear_reference_solution(&p, &basis, alpha, 1e-12).unwrap();
        assert!(early.values.iter().zip(&v1.values).all(|(a, b)| (a - b).abs() < 1e-5));
    }

    #[test]
    fn transient_quadrature_matches_steady_closed_form() {
        let sp = space(Dimension::One, 10);
        let basis = ModalBasis::new(&sp).unwrap();
        let u0 = ScalarField::new(|p: Point| (PI * p[0]).sin()).with_gradient(|p| [PI * (PI * p[0]).cos(), 0.0]);
        let steady = LinearProblem::homogeneous(sp.clone(), u0.clone()).with_steady_source(|p| 1.0 + p[0]);
        let transient = LinearProblem::homogeneous(sp.clone(), u0).with_source(|_, p| 1.0 + p[0]);
        for &alpha in &[0.3, 0.5, 0.8] {
            let a = linear_reference_solution(&steady, &basis, alpha, 0.7).unwrap();
            let b = linear_reference_solution(&transient, &basis, alpha, 0.7).unwrap();
            let d = a
                .values
                .iter()
                .zip(&b.values)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            assert!(d < 1e-9, "{alpha} {d}");
        }
    }

    #[test]
    fn dense_limit_enforced() {
        let sp = space(Dimension::Two, 40);
        assert!(ModalBasis::new(&sp).is_err());
    }
}
