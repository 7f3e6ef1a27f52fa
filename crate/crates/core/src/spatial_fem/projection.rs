use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::assembly::{basis_gradients, element_quadrature};
use super::cg::spd_solve;
use super::mesh::{Point, TriMesh};
use super::SparseSymOperator;

type ValueFn = Arc<dyn Fn(Point) -> f64 + Send + Sync>;
type GradientFn = Arc<dyn Fn(Point) -> [f64; 2] + Send + Sync>;

/// A function on the domain, optionally with its gradient.
#[derive(Clone)]
pub struct ScalarField {
    value: ValueFn,
    gradient: Option<GradientFn>,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField")
            .field("has_gradient", &self.gradient.is_some())
            .finish()
    }
}

impl ScalarField {
    pub fn new(value: impl Fn(Point) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            value: Arc::new(value),
            gradient: None,
        }
    }

    pub fn with_gradient(mut self, gradient: impl Fn(Point) -> [f64; 2] + Send + Sync + 'static) -> Self {
        self.gradient = Some(Arc::new(gradient));
        self
    }

    pub fn zero() -> Self {
        Self::new(|_| 0.0).with_gradient(|_| [0.0, 0.0])
    }

    pub fn has_gradient(&self) -> bool {
        self.gradient.is_some()
    }

    pub fn value(&self, p: Point) -> f64 {
        (self.value)(p)
    }

    /// Analytic gradient when supplied, else central differences.
    pub fn gradient(&self, p: Point) -> [f64; 2] {
        if let Some(g) = &self.gradient {
            return g(p);
        }
        let h = 1e-6;
        let dx = (self.value([p[0] + h, p[1]]) - self.value([p[0] - h, p[1]])) / (2.0 * h);
        let dy = (self.value([p[0], p[1] + h]) - self.value([p[0], p[1] - h])) / (2.0 * h);
        [dx, dy]
    }
}

/// Interior nodal values of a P1 function with zero boundary trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn zeros(n: usize) -> Self {
        Self { values: vec![0.0; n] }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn check_mesh(&self, mesh: &TriMesh) -> Result<()> {
        if self.len() != mesh.num_dofs() {
            return Err(Error::Index {
                index: self.len(),
                len: mesh.num_dofs(),
            });
        }
        Ok(())
    }

    /// `sqrt(x^T M x)`.
    pub fn mass_norm(&self, mass: &SparseSymOperator) -> f64 {
        mass.bilinear(&self.values, &self.values).max(0.0).sqrt()
    }

    pub fn max_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn evaluate(&self, mesh: &TriMesh, p: Point) -> f64 {
        mesh.evaluate_nodal(&mesh.extend_by_zero(&self.values), p)
    }

    /// Nodal interpolation onto `fine`; exact when `fine` refines `coarse`.
    pub fn prolongate(&self, coarse: &TriMesh, fine: &TriMesh) -> Result<Self> {
        self.check_mesh(coarse)?;
        let nodal = coarse.extend_by_zero(&self.values);
        Ok(Self::new(
            fine.interior_vertices
                .iter()
                .map(|&v| coarse.evaluate_nodal(&nodal, fine.vertices[v]))
                .collect(),
        ))
    }
}

/// `b_i = ∫ g φ_i` by element quadrature.
pub fn load_vector(mesh: &TriMesh, g: impl Fn(Point) -> f64) -> Vec<f64> {
    let mut b = vec![0.0; mesh.num_dofs()];
    for element in mesh.elements() {
        for q in element_quadrature(mesh, element) {
            let gq = g(q.point) * q.weight;
            for (k, &v) in element.iter().enumerate() {
                if let Some(i) = mesh.interior_index[v] {
                    b[i] += gq * q.basis[k];
                }
            }
        }
    }
    b
}

/// `b_i = ∫ f(u_h) φ_i` with `f` applied to the P1 function at each quadrature point.
pub fn nonlinear_load(mesh: &TriMesh, u: &[f64], f: &dyn Fn(f64) -> f64) -> Vec<f64> {
    let nodal = mesh.extend_by_zero(u);
    let mut b = vec![0.0; mesh.num_dofs()];
    for element in mesh.elements() {
        for q in element_quadrature(mesh, element) {
            let uq: f64 = element.iter().enumerate().map(|(k, &v)| q.basis[k] * nodal[v]).sum();
            let fq = f(uq) * q.weight;
            for (k, &v) in element.iter().enumerate() {
                if let Some(i) = mesh.interior_index[v] {
                    b[i] += fq * q.basis[k];
                }
            }
        }
    }
    b
}

pub fn l2_project(mesh: &TriMesh, mass: &SparseSymOperator, g: impl Fn(Point) -> f64) -> Result<GridFunction> {
    Ok(GridFunction::new(spd_solve(mass, &load_vector(mesh, g))?))
}

/// Solves `S x = b` with `b_i = κ ∫ ∇v·∇φ_i`.
///
/// `v` must vanish on the boundary; this is not checked.
pub fn ritz_project(
    mesh: &TriMesh,
    stiffness: &SparseSymOperator,
    kappa: f64,
    v: &ScalarField,
) -> Result<GridFunction> {
    let mut b = vec![0.0; mesh.num_dofs()];
    for element in mesh.elements() {
        let grads = basis_gradients(mesh, element);
        for q in element_quadrature(mesh, element) {
            let gv = v.gradient(q.point);
            for (k, &vert) in element.iter().enumerate() {
                if let Some(i) = mesh.interior_index[vert] {
                    b[i] += kappa * q.weight * (gv[0] * grads[k][0] + gv[1] * grads[k][1]);
                }
            }
        }
    }
    Ok(GridFunction::new(spd_solve(stiffness, &b)?))
}

pub fn lagrange_interpolate(mesh: &TriMesh, v: impl Fn(Point) -> f64) -> GridFunction {
    GridFunction::new(mesh.interior_vertices.iter().map(|&i| v(mesh.vertices[i])).collect())
}

/// L2 distance between two P1 functions on the same mesh, by element quadrature.
pub fn l2_distance_quadrature(mesh: &TriMesh, a: &[f64], b: &[f64]) -> f64 {
    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    l2_error_against(mesh, &diff, |_| 0.0)
}

/// `‖u_h − u‖_{L2}` by element quadrature.
pub fn l2_error_against(mesh: &TriMesh, u: &[f64], exact: impl Fn(Point) -> f64) -> f64 {
    let nodal = mesh.extend_by_zero(u);
    let mut sum = 0.0;
    for element in mesh.elements() {
        for q in element_quadrature(mesh, element) {
            let uq: f64 = element.iter().enumerate().map(|(k, &v)| q.basis[k] * nodal[v]).sum();
            let d = uq - exact(q.point);
            sum += q.weight * d * d;
        }
    }
    sum.sqrt()
}
