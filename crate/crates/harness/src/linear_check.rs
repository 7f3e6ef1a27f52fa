use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use subdiff_core::frac_kernels::KernelScheme;
use subdiff_core::reference_oracle::{linear_reference_solution, ModalBasis};
use subdiff_core::spatial_fem::{l2_distance_quadrature, Dimension, FemSpace, Point, ScalarField, TriMesh};
use subdiff_core::time_stepping::{solve_linear, InitialProjection, LinearProblem, TimeGrid};

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::table::{ConvergenceSeries, ConvergenceTable, StudyKind};

/// Linear problem with the first discrete eigenmode as initial value and
/// `g(t, x) = (1 + t) sin(πx) sin(πy)`.
pub fn eigenmode_problem(space: Arc<FemSpace>, basis: &ModalBasis) -> LinearProblem {
    let mesh = space.mesh.clone();
    let nodal = mesh.extend_by_zero(&basis.mode(0).values);
    let v0 = ScalarField::new(move |p: Point| mesh.evaluate_nodal(&nodal, p));
    LinearProblem::homogeneous(space, v0)
        .with_projection(InitialProjection::Lagrange)
        .with_source(|t, p| (1.0 + t) * (PI * p[0]).sin() * (PI * p[1]).sin())
}

/// Error at `t = T` against the modal reference, over the configured step counts.
pub fn run_linear_check(config: &ExperimentConfig) -> Result<ConvergenceTable> {
    config.validate()?;
    let space = Arc::new(FemSpace::new(
        TriMesh::new(Dimension::Two, config.temporal_mesh)?,
        config.kappa,
    )?);
    let basis = ModalBasis::new(&space)?;
    let problem = eigenmode_problem(space.clone(), &basis);
    let combos: Vec<(KernelScheme, f64)> = config
        .scheme
        .iter()
        .flat_map(|&s| config.alpha.iter().map(move |&a| (s, a)))
        .collect();
    let series = combos
        .par_iter()
        .map(|&(scheme, alpha)| {
            let exact = linear_reference_solution(&problem, &basis, alpha, config.final_time)?;
            let levels = config
                .temporal_steps
                .iter()
                .map(|&n| {
                    let grid = TimeGrid::new(config.final_time, n)?;
                    let traj = solve_linear(&problem, grid, scheme, alpha)?;
                    let err = l2_distance_quadrature(&space.mesh, &traj.final_state().values, &exact.values);
                    Ok((n, grid.tau(), err))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(ConvergenceSeries::new(config.case, scheme, alpha, &levels))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceTable {
        kind: StudyKind::Linear,
        series,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn backward_euler_is_first_order_at_final_time() {
        let c = ExperimentConfig {
            alpha: vec![0.5],
            scheme: vec![KernelScheme::BACKWARD_EULER],
            temporal_steps: vec![20, 40, 80],
            temporal_reference: 160,
            temporal_mesh: 4,
            ..ExperimentConfig::default()
        };
        let t = run_linear_check(&c).unwrap();
        let r = t.series[0].fitted_rate.unwrap();
        assert!(r > 0.85, "{r}");
    }
}
