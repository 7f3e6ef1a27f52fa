use serde::{Deserialize, Serialize};

use crate::error::{param, Result};

pub type Point = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dimension {
    One,
    Two,
}

impl Dimension {
    pub fn from_int(d: usize) -> Result<Self> {
        match d {
            1 => Ok(Dimension::One),
            2 => Ok(Dimension::Two),
            _ => Err(param("dimension", format!("supported dimensions are 1 and 2, got {d}"))),
        }
    }

    pub fn nodes_per_element(self) -> usize {
        match self {
            Dimension::One => 2,
            Dimension::Two => 3,
        }
    }
}

/// Uniform partition of the unit interval, or the unit square cut into
/// `2 M^2` congruent right triangles.
///
/// 1D points store `y = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriMesh {
    pub dimension: Dimension,
    pub subdivisions: usize,
    pub h: f64,
    pub vertices: Vec<Point>,
    /// Flattened vertex lists, `dimension + 1` entries per element.
    pub element_nodes: Vec<usize>,
    /// Interior DOF index of each vertex; `None` on the boundary.
    pub interior_index: Vec<Option<usize>>,
    /// Vertex of each interior DOF.
    pub interior_vertices: Vec<usize>,
}

impl TriMesh {
    pub fn new(dimension: Dimension, subdivisions: usize) -> Result<Self> {
        let m = subdivisions;
        if m < 2 {
            return Err(param("M", format!("need at least 2 subdivisions, got {m}")));
        }
        let h = 1.0 / m as f64;
        let coord = |i: usize| if i == m { 1.0 } else { i as f64 * h };
        let (vertices, element_nodes, boundary): (Vec<Point>, Vec<usize>, Vec<bool>) = match dimension {
            Dimension::One => {
                let vertices = (0..=m).map(|i| [coord(i), 0.0]).collect();
                let elements = (0..m).flat_map(|i| [i, i + 1]).collect();
                let boundary = (0..=m).map(|i| i == 0 || i == m).collect();
                (vertices, elements, boundary)
            }
            Dimension::Two => {
                let id = |i: usize, j: usize| j * (m + 1) + i;
                let mut vertices = Vec::with_capacity((m + 1) * (m + 1));
                let mut boundary = Vec::with_capacity((m + 1) * (m + 1));
                for j in 0..=m {
                    for i in 0..=m {
                        vertices.push([coord(i), coord(j)]);
                        boundary.push(i == 0 || j == 0 || i == m || j == m);
                    }
                }
                let mut elements = Vec::with_capacity(6 * m * m);
                for j in 0..m {
                    for i in 0..m {
                        elements.extend([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
                        elements.extend([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
                    }
                }
                (vertices, elements, boundary)
            }
        };
        let mut interior_index = vec![None; vertices.len()];
        let mut interior_vertices = Vec::new();
        for (v, &b) in boundary.iter().enumerate() {
            if !b {
                interior_index[v] = Some(interior_vertices.len());
                interior_vertices.push(v);
            }
        }
        Ok(Self {
            dimension,
            subdivisions: m,
            h,
            vertices,
            element_nodes,
            interior_index,
            interior_vertices,
        })
    }

    pub fn num_elements(&self) -> usize {
        self.element_nodes.len() / self.dimension.nodes_per_element()
    }

    pub fn num_dofs(&self) -> usize {
        self.interior_vertices.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = &[usize]> {
        self.element_nodes.chunks_exact(self.dimension.nodes_per_element())
    }

    pub fn is_boundary(&self, vertex: usize) -> bool {
        self.interior_index[vertex].is_none()
    }

    /// Measure (length or area) of an element.
    pub fn element_measure(&self, element: &[usize]) -> f64 {
        let p = |k: usize| self.vertices[element[k]];
        match self.dimension {
            Dimension::One => (p(1)[0] - p(0)[0]).abs(),
            Dimension::Two => {
                let (a, b, c) = (p(0), p(1), p(2));
                0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])).abs()
            }
        }
    }

    /// Nodal values on every vertex from interior values (zero trace).
    pub fn extend_by_zero(&self, interior: &[f64]) -> Vec<f64> {
        self.interior_index
            .iter()
            .map(|idx| idx.map_or(0.0, |i| interior[i]))
            .collect()
    }

    /// Value at `p` of the P1 function with the given nodal values on all vertices.
    pub fn evaluate_nodal(&self, nodal: &[f64], p: Point) -> f64 {
        let m = self.subdivisions;
        let locate = |x: f64| {
            let s = (x.clamp(0.0, 1.0)) * m as f64;
            let i = (s.floor() as usize).min(m - 1);
            (i, s - i as f64)
        };
        match self.dimension {
            Dimension::One => {
                let (i, xi) = locate(p[0]);
                nodal[i] * (1.0 - xi) + nodal[i + 1] * xi
            }
            Dimension::Two => {
                let (i, xi) = locate(p[0]);
                let (j, eta) = locate(p[1]);
                let id = |a: usize, b: usize| nodal[b * (m + 1) + a];
                let (u00, u10, u11, u01) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
                if xi >= eta {
                    u00 + xi * (u10 - u00) + eta * (u11 - u10)
                } else {
                    u00 + xi * (u11 - u01) + eta * (u01 - u00)
                }
            }
        }
    }
}
