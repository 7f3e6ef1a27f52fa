use serde::{Deserialize, Serialize};

use crate::error::{param, Result};

use super::mesh::{Dimension, Point, TriMesh};
use super::SparseSymOperator;

/// Mesh together with its interior mass and stiffness operators.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FemSpace {
    pub mesh: TriMesh,
    pub kappa: f64,
    pub mass: SparseSymOperator,
    pub stiffness: SparseSymOperator,
}

impl FemSpace {
    pub fn new(mesh: TriMesh, kappa: f64) -> Result<Self> {
        let (mass, stiffness) = assemble(&mesh, kappa)?;
        Ok(Self {
            mesh,
            kappa,
            mass,
            stiffness,
        })
    }

    pub fn num_dofs(&self) -> usize {
        self.mesh.num_dofs()
    }
}

/// Quadrature point of an element: location, weight, and the values of the
/// element's local basis functions there.
pub(crate) struct QuadPoint {
    pub point: Point,
    pub weight: f64,
    pub basis: [f64; 3],
}

/// Edge midpoints on triangles, two-point Gauss on segments. Both are exact
/// for quadratics.
pub(crate) fn element_quadrature(mesh: &TriMesh, element: &[usize]) -> Vec<QuadPoint> {
    let p = |k: usize| mesh.vertices[element[k]];
    let measure = mesh.element_measure(element);
    match mesh.dimension {
        Dimension::One => {
            let (a, b) = (p(0)[0], p(1)[0]);
            let g = 0.5 / 3f64.sqrt();
            [0.5 - g, 0.5 + g]
                .into_iter()
                .map(|s| QuadPoint {
                    point: [a + s * (b - a), 0.0],
                    weight: 0.5 * measure,
                    basis: [1.0 - s, s, 0.0],
                })
                .collect()
        }
        Dimension::Two => {
            let mid = |i: usize, j: usize| [(p(i)[0] + p(j)[0]) * 0.5, (p(i)[1] + p(j)[1]) * 0.5];
            let w = measure / 3.0;
            vec![
                QuadPoint {
                    point: mid(0, 1),
                    weight: w,
                    basis: [0.5, 0.5, 0.0],
                },
                QuadPoint {
                    point: mid(1, 2),
                    weight: w,
                    basis: [0.0, 0.5, 0.5],
                },
                QuadPoint {
                    point: mid(2, 0),
                    weight: w,
                    basis: [0.5, 0.0, 0.5],
                },
            ]
        }
    }
}

/// Constant gradients of the local basis functions.
pub(crate) fn basis_gradients(mesh: &TriMesh, element: &[usize]) -> [[f64; 2]; 3] {
    let p = |k: usize| mesh.vertices[element[k]];
    match mesh.dimension {
        Dimension::One => {
            let len = p(1)[0] - p(0)[0];
            [[-1.0 / len, 0.0], [1.0 / len, 0.0], [0.0, 0.0]]
        }
        Dimension::Two => {
            let (a, b, c) = (p(0), p(1), p(2));
            let det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
            [
                [(b[1] - c[1]) / det, (c[0] - b[0]) / det],
                [(c[1] - a[1]) / det, (a[0] - c[0]) / det],
                [(a[1] - b[1]) / det, (b[0] - a[0]) / det],
            ]
        }
    }
}

/// Mass and stiffness over every vertex, boundary included.
pub fn assemble_full(mesh: &TriMesh, kappa: f64) -> Result<(SparseSymOperator, SparseSymOperator)> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(param("kappa", format!("must be positive and finite, got {kappa}")));
    }
    let nv = mesh.vertices.len();
    let npe = mesh.dimension.nodes_per_element();
    let mut mass = Vec::with_capacity(mesh.num_elements() * npe * npe);
    let mut stiff = Vec::with_capacity(mesh.num_elements() * npe * npe);
    for element in mesh.elements() {
        let measure = mesh.element_measure(element);
        let grads = basis_gradients(mesh, element);
        for a in 0..npe {
            for b in 0..npe {
                let m = match mesh.dimension {
                    Dimension::One => measure / 6.0 * if a == b { 2.0 } else { 1.0 },
                    Dimension::Two => measure / 12.0 * if a == b { 2.0 } else { 1.0 },
                };
                let g = grads[a][0] * grads[b][0] + grads[a][1] * grads[b][1];
                mass.push((element[a], element[b], m));
                stiff.push((element[a], element[b], kappa * measure * g));
            }
        }
    }
    let mass = symmetric_from(nv, mass)?;
    let stiff = symmetric_from(nv, stiff)?;
    Ok((mass, stiff))
}

/// Sorted contributions make `(i,j)` and `(j,i)` accumulate identically.
fn symmetric_from(n: usize, mut triplets: Vec<(usize, usize, f64)>) -> Result<SparseSymOperator> {
    let transposed: Vec<_> = triplets.iter().map(|&(i, j, v)| (j, i, v)).collect();
    triplets.extend(transposed);
    triplets.iter_mut().for_each(|t| t.2 *= 0.5);
    triplets.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)).then(x.2.total_cmp(&y.2)));
    SparseSymOperator::from_triplets(n, &triplets)
}

/// Interior (Dirichlet-eliminated) mass and stiffness.
pub fn assemble(mesh: &TriMesh, kappa: f64) -> Result<(SparseSymOperator, SparseSymOperator)> {
    let (mass, stiff) = assemble_full(mesh, kappa)?;
    Ok((
        mass.restrict(&mesh.interior_index)?,
        stiff.restrict(&mesh.interior_index)?,
    ))
}
