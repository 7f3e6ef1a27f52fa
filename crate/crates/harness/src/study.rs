use std::sync::Arc;

use rayon::prelude::*;
use subdiff_core::frac_kernels::KernelScheme;
use subdiff_core::spatial_fem::{l2_distance_quadrature, Dimension, FemSpace, TriMesh};
use subdiff_core::time_stepping::{solve_semilinear, SemilinearProblem, TimeGrid, Trajectory};

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::table::{ConvergenceSeries, ConvergenceTable, StudyKind};

fn space(m: usize, kappa: f64) -> Result<Arc<FemSpace>> {
    Ok(Arc::new(FemSpace::new(TriMesh::new(Dimension::Two, m)?, kappa)?))
}

/// Builds the problem to solve on a given space.
pub trait ProblemBuilder: Fn(Arc<FemSpace>) -> SemilinearProblem + Sync {}
impl<F: Fn(Arc<FemSpace>) -> SemilinearProblem + Sync> ProblemBuilder for F {}

fn solve(
    config: &ExperimentConfig,
    build: &impl ProblemBuilder,
    space: Arc<FemSpace>,
    steps: usize,
    scheme: KernelScheme,
    alpha: f64,
) -> Result<Trajectory> {
    Ok(solve_semilinear(
        &build(space),
        TimeGrid::new(config.final_time, steps)?,
        scheme,
        alpha,
    )?)
}

fn case_builder(config: &ExperimentConfig) -> impl ProblemBuilder + '_ {
    move |space| config.case.problem(space, config.initial_projection)
}

fn combinations(config: &ExperimentConfig) -> Vec<(KernelScheme, f64)> {
    config
        .scheme
        .iter()
        .flat_map(|&s| config.alpha.iter().map(move |&a| (s, a)))
        .collect()
}

/// `max_{1≤n≤N} ‖u_M^n − u_ref^n‖` on the reference mesh, for every level.
pub fn run_spatial_study(config: &ExperimentConfig) -> Result<ConvergenceTable> {
    run_spatial_study_with(config, &case_builder(config))
}

pub fn run_spatial_study_with(config: &ExperimentConfig, build: &impl ProblemBuilder) -> Result<ConvergenceTable> {
    config.validate()?;
    let mut meshes: Vec<usize> = config.spatial_levels.clone();
    meshes.push(config.spatial_reference);
    let spaces: Vec<Arc<FemSpace>> = meshes.iter().map(|&m| space(m, config.kappa)).collect::<Result<_>>()?;
    let combos = combinations(config);
    let jobs: Vec<(usize, usize)> = (0..combos.len())
        .flat_map(|c| (0..meshes.len()).map(move |l| (c, l)))
        .collect();
    let mut solved: Vec<Trajectory> = jobs
        .par_iter()
        .map(|&(c, l)| {
            solve(
                config,
                build,
                spaces[l].clone(),
                config.spatial_steps,
                combos[c].0,
                combos[c].1,
            )
        })
        .collect::<Result<_>>()?;
    let fine = spaces.last().expect("reference mesh");
    let per_combo = meshes.len();
    let mut table = ConvergenceTable::new(StudyKind::Spatial);
    for (c, &(scheme, alpha)) in combos.iter().enumerate().rev() {
        let mut chunk: Vec<Trajectory> = solved.drain(c * per_combo..).collect();
        let reference = chunk.pop().expect("reference trajectory");
        let levels: Vec<(usize, f64, f64)> = chunk
            .par_iter()
            .zip(&spaces)
            .map(|(traj, sp)| {
                let mut worst = 0.0_f64;
                for n in 1..traj.len() {
                    let up = traj.states[n].prolongate(&sp.mesh, &fine.mesh)?;
                    worst = worst.max(l2_distance_quadrature(
                        &fine.mesh,
                        &up.values,
                        &reference.states[n].values,
                    ));
                }
                Ok((sp.mesh.subdivisions, sp.mesh.h, worst))
            })
            .collect::<Result<_>>()?;
        table
            .series
            .push(ConvergenceSeries::new(config.case, scheme, alpha, &levels));
    }
    table.series.reverse();
    Ok(table)
}

/// `max_{1≤n≤N} ‖u_N^n − u_ref(t_n)‖` on the fixed mesh, for every step count.
pub fn run_temporal_study(config: &ExperimentConfig) -> Result<ConvergenceTable> {
    run_temporal_study_with(config, &case_builder(config))
}

pub fn run_temporal_study_with(config: &ExperimentConfig, build: &impl ProblemBuilder) -> Result<ConvergenceTable> {
    config.validate()?;
    let sp = space(config.temporal_mesh, config.kappa)?;
    let mut steps = config.temporal_steps.clone();
    steps.push(config.temporal_reference);
    let combos = combinations(config);
    let jobs: Vec<(usize, usize)> = (0..combos.len())
        .flat_map(|c| (0..steps.len()).map(move |l| (c, l)))
        .collect();
    let mut solved: Vec<Trajectory> = jobs
        .par_iter()
        .map(|&(c, l)| solve(config, build, sp.clone(), steps[l], combos[c].0, combos[c].1))
        .collect::<Result<_>>()?;
    let per_combo = steps.len();
    let mut table = ConvergenceTable::new(StudyKind::Temporal);
    for (c, &(scheme, alpha)) in combos.iter().enumerate().rev() {
        let mut chunk: Vec<Trajectory> = solved.drain(c * per_combo..).collect();
        let reference = chunk.pop().expect("reference trajectory");
        let levels: Vec<(usize, f64, f64)> = chunk
            .iter()
            .map(|traj| (traj.grid.steps, traj.grid.tau(), temporal_error(&sp, traj, &reference)))
            .collect();
        table
            .series
            .push(ConvergenceSeries::new(config.case, scheme, alpha, &levels));
    }
    table.series.reverse();
    Ok(table)
}

/// Max-in-time L2 distance at the coarse grid times.
pub fn temporal_error(space: &FemSpace, coarse: &Trajectory, reference: &Trajectory) -> f64 {
    let stride = reference.grid.steps / coarse.grid.steps;
    (1..coarse.len())
        .map(|n| {
            l2_distance_quadrature(
                &space.mesh,
                &coarse.states[n].values,
                &reference.states[n * stride].values,
            )
        })
        .fold(0.0, f64::max)
}

/// Same as [`temporal_error`] but measured in the mass norm of nodal differences.
pub fn temporal_error_mass_norm(space: &FemSpace, coarse: &Trajectory, reference: &Trajectory) -> f64 {
    let stride = reference.grid.steps / coarse.grid.steps;
    (1..coarse.len())
        .map(|n| {
            let d: Vec<f64> = coarse.states[n]
                .values
                .iter()
                .zip(&reference.states[n * stride].values)
                .map(|(a, b)| a - b)
                .collect();
            space.mass.bilinear(&d, &d).max(0.0).sqrt()
        })
        .fold(0.0, f64::max)
}
