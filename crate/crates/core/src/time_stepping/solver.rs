use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::frac_kernels::{KernelScheme, KernelWeights};
use crate::spatial_fem::{nonlinear_load, CgSolver, FemSpace, GridFunction, SparseSymOperator};

use super::problem::{LinearProblem, SemilinearProblem};

/// Uniform partition of `[0, T]` into `N` steps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub final_time: f64,
    pub steps: usize,
}

impl TimeGrid {
    pub fn new(final_time: f64, steps: usize) -> Result<Self> {
        if !(final_time > 0.0) || !final_time.is_finite() {
            return Err(param("T", format!("final time must be positive, got {final_time}")));
        }
        if steps == 0 {
            return Err(param("N", "need at least one step"));
        }
        Ok(Self { final_time, steps })
    }

    pub fn tau(&self) -> f64 {
        self.final_time / self.steps as f64
    }

    pub fn time(&self, n: usize) -> f64 {
        if n == self.steps {
            self.final_time
        } else {
            n as f64 * self.tau()
        }
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.steps).map(|n| self.time(n)).collect()
    }
}

/// `u^0, …, u^N` on a time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub grid: TimeGrid,
    pub states: Vec<GridFunction>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, n: usize) -> Result<&GridFunction> {
        self.states.get(n).ok_or(Error::Index {
            index: n,
            len: self.states.len(),
        })
    }

    pub fn final_state(&self) -> &GridFunction {
        self.states.last().expect("trajectory holds at least u^0")
    }

    /// `max_n ‖u^n‖` in the mass norm.
    pub fn max_mass_norm(&self, mass: &SparseSymOperator) -> f64 {
        self.states.iter().map(|u| u.mass_norm(mass)).fold(0.0, f64::max)
    }
}

/// `τ^{-α} Σ_{j=0}^{n} K_{n-j} (u^j − u^0)` as nodal coefficients.
pub fn history_convolution(weights: &KernelWeights, prefix: &[GridFunction], n: usize) -> Result<Vec<f64>> {
    if n >= prefix.len() {
        return Err(Error::Index {
            index: n,
            len: prefix.len(),
        });
    }
    if n >= weights.len() {
        return Err(Error::Internal(format!(
            "{} weights cannot cover step {n}",
            weights.len()
        )));
    }
    let u0 = &prefix[0].values;
    let mut out = vec![0.0; u0.len()];
    for (j, uj) in prefix.iter().enumerate().take(n + 1).skip(1) {
        let k = weights.weights[n - j];
        for ((o, uj), u0i) in out.iter_mut().zip(&uj.values).zip(u0) {
            *o += k * (uj - u0i);
        }
    }
    let scale = weights.prefactor();
    out.iter_mut().for_each(|v| *v *= scale);
    Ok(out)
}

/// Deviations `u^j − u^0` stored row-wise for the history sum.
struct History {
    dofs: usize,
    deviations: Vec<f64>,
}

impl History {
    fn new(dofs: usize, steps: usize) -> Self {
        Self {
            dofs,
            deviations: Vec::with_capacity(dofs * (steps + 1)),
        }
    }

    fn push(&mut self, d: impl Iterator<Item = f64>) {
        self.deviations.extend(d);
    }

    /// `Σ_{j=1}^{n-1} K_{n-j} d^j` with `d^j` the `j`-th stored row (row 0 is `d^0 = 0`).
    fn lagged_sum(&self, weights: &[f64], n: usize, out: &mut [f64]) {
        out.fill(0.0);
        for j in 1..n {
            let k = weights[n - j];
            let row = &self.deviations[j * self.dofs..(j + 1) * self.dofs];
            for (o, d) in out.iter_mut().zip(row) {
                *o += k * d;
            }
        }
    }
}

/// Runs the scheme with `load(n, u^{n-1})` supplying `b^n`.
fn march(
    space: &FemSpace,
    weights: &KernelWeights,
    grid: TimeGrid,
    u0: GridFunction,
    blow_up: f64,
    mut load: impl FnMut(usize, &[f64]) -> Result<Vec<f64>>,
) -> Result<Trajectory> {
    u0.check_mesh(&space.mesh)?;
    let n_steps = grid.steps;
    if weights.len() < n_steps + 1 {
        return Err(Error::Internal(format!(
            "{} weights for {} steps",
            weights.len(),
            n_steps
        )));
    }
    let dofs = space.num_dofs();
    let scale = weights.prefactor();
    let k0 = weights.weights[0];
    let system = SparseSymOperator::linear_combination(k0 * scale, &space.mass, 1.0, &space.stiffness)?;
    let solver = CgSolver::new(system)?;

    let mut history = History::new(dofs, n_steps);
    history.push(std::iter::repeat_n(0.0, dofs));
    let mut states = Vec::with_capacity(n_steps + 1);
    states.push(u0.clone());
    let mut lag = vec![0.0; dofs];
    let mut w = vec![0.0; dofs];
    let mut rhs = vec![0.0; dofs];
    let mut x = u0.values.clone();
    for n in 1..=n_steps {
        let b = load(n, &states[n - 1].values)?;
        history.lagged_sum(&weights.weights, n, &mut lag);
        for i in 0..dofs {
            w[i] = scale * (k0 * u0.values[i] - lag[i]);
        }
        space.mass.apply_into(&w, &mut rhs);
        for (r, bi) in rhs.iter_mut().zip(&b) {
            *r += bi;
        }
        solver.solve_into(&rhs, &mut x)?;
        let peak = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if !peak.is_finite() || peak > blow_up {
            return Err(Error::BlowUp {
                step: n,
                max_norm: peak,
            });
        }
        history.push(x.iter().zip(&u0.values).map(|(a, b)| a - b));
        states.push(GridFunction::new(x.clone()));
    }
    Ok(Trajectory { grid, states })
}

fn step_weights(scheme: KernelScheme, alpha: f64, grid: TimeGrid) -> Result<KernelWeights> {
    scheme.validate()?;
    KernelWeights::generate(scheme, alpha, grid.steps + 1)?.with_step(grid.tau())
}

/// Semilinear scheme with the source lagged by one step.
pub fn solve_semilinear(
    problem: &SemilinearProblem,
    grid: TimeGrid,
    scheme: KernelScheme,
    alpha: f64,
) -> Result<Trajectory> {
    let weights = step_weights(scheme, alpha, grid)?;
    let mesh = &problem.space.mesh;
    let f = problem.source.as_ref();
    march(
        &problem.space,
        &weights,
        grid,
        problem.initial_value()?,
        problem.blow_up_threshold,
        |_, prev| Ok(nonlinear_load(mesh, prev, f)),
    )
}

/// Linear scheme with the load of `g(t_n)` at step `n`.
pub fn solve_linear(problem: &LinearProblem, grid: TimeGrid, scheme: KernelScheme, alpha: f64) -> Result<Trajectory> {
    let weights = step_weights(scheme, alpha, grid)?;
    march(
        &problem.space,
        &weights,
        grid,
        problem.initial_value()?,
        f64::INFINITY,
        |n, _| Ok(problem.load_at(grid.time(n))),
    )
}

/// Relative defects `‖M B∂(u^n − u^0) + S u^n − b^n‖` of a stored trajectory,
/// `b^n = loads[n-1]`, each scaled by the largest of the three term norms.
pub fn scheme_residuals(
    space: &FemSpace,
    weights: &KernelWeights,
    trajectory: &Trajectory,
    loads: &[Vec<f64>],
) -> Result<Vec<f64>> {
    let steps = trajectory.len() - 1;
    if loads.len() != steps {
        return Err(Error::Index {
            index: loads.len(),
            len: steps,
        });
    }
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    (1..=steps)
        .map(|n| {
            let hist = history_convolution(weights, &trajectory.states, n)?;
            let mh = space.mass.apply(&hist);
            let su = space.stiffness.apply(&trajectory.states[n].values);
            let b = &loads[n - 1];
            let defect: Vec<f64> = (0..mh.len()).map(|i| mh[i] + su[i] - b[i]).collect();
            let scale = norm(&mh).max(norm(&su)).max(norm(b));
            Ok(if scale == 0.0 { 0.0 } else { norm(&defect) / scale })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;
    use std::sync::Arc;

    use super::*;
    use crate::spatial_fem::{lagrange_interpolate, Dimension, Point, ScalarField, TriMesh};

    fn space(dim: Dimension, m: usize) -> Arc<FemSpace> {
        Arc::new(FemSpace::new(TriMesh::new(dim, m).unwrap(), 0.1).unwrap())
    }

    fn bubble() -> ScalarField {
        ScalarField::new(|p: Point| p[0] * p[1] * (1.0 - p[0]) * (1.0 - p[1])).with_gradient(|p| {
            [
                (1.0 - 2.0 * p[0]) * p[1] * (1.0 - p[1]),
                (1.0 - 2.0 * p[1]) * p[0] * (1.0 - p[0]),
            ]
        })
    }

    #[test]
    fn time_grid_endpoints() {
        let g = TimeGrid::new(1.0, 3).unwrap();
        assert_eq!(g.time(3), 1.0);
        assert_eq!(g.times().len(), 4);
        assert!(TimeGrid::new(0.0, 3).is_err());
        assert!(TimeGrid::new(1.0, 0).is_err());
    }

    #[test]
    fn zero_data_gives_zero_trajectory() {
        let sp = space(Dimension::Two, 6);
        let p = SemilinearProblem::new(sp.clone(), |_| 0.0, ScalarField::zero());
        let grid = TimeGrid::new(1.0, 10).unwrap();
        for scheme in [KernelScheme::BACKWARD_EULER, KernelScheme::L1] {
            let t = solve_semilinear(&p, grid, scheme, 0.5).unwrap();
            assert_eq!(t.len(), 11);
            assert!(t.states.iter().all(|u| u.values.iter().all(|&v| v == 0.0)));
            let l = solve_linear(
                &LinearProblem::homogeneous(sp.clone(), ScalarField::zero()),
                grid,
                scheme,
                0.5,
            )
            .unwrap();
            assert!(l.states.iter().all(|u| u.max_norm() == 0.0));
        }
    }

    #[test]
    fn history_matches_double_loop() {
        let w = KernelWeights::generate(KernelScheme::L1, 0.3, 6)
            .unwrap()
            .with_step(0.1)
            .unwrap();
        let prefix: Vec<GridFunction> = (0..6)
            .map(|j| GridFunction::new((0..4).map(|i| ((j * 5 + i * 3) % 7) as f64 * 0.37 - 1.0).collect()))
            .collect();
        for n in 0..6 {
            let got = history_convolution(&w, &prefix, n).unwrap();
            for i in 0..4 {
                let mut want = 0.0;
                for j in 0..=n {
                    want += w.weights[n - j] * (prefix[j].values[i] - prefix[0].values[i]);
                }
                want *= 0.1f64.powf(-0.3);
                assert!((got[i] - want).abs() <= 1e-14 * want.abs().max(1.0));
            }
        }
        assert!(history_convolution(&w, &prefix, 6).is_err());
        let constant = vec![prefix[2].clone(); 5];
        assert!(history_convolution(&w, &constant, 4).unwrap().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn residuals_vanish_post_hoc() {
        let sp = space(Dimension::Two, 8);
        let f = |u: f64| (1.0 + u * u).sqrt();
        let p = SemilinearProblem::new(sp.clone(), f, bubble());
        let grid = TimeGrid::new(1.0, 40).unwrap();
        for scheme in [KernelScheme::BACKWARD_EULER, KernelScheme::L1, KernelScheme::Bdf(2)] {
            let traj = solve_semilinear(&p, grid, scheme, 0.6).unwrap();
            let w = KernelWeights::generate(scheme, 0.6, 41)
                .unwrap()
                .with_step(grid.tau())
                .unwrap();
            let loads: Vec<Vec<f64>> = (0..40)
                .map(|n| nonlinear_load(&sp.mesh, &traj.states[n].values, &f))
                .collect();
            let r = scheme_residuals(&sp, &w, &traj, &loads).unwrap();
            assert!(
                r.iter().all(|&x| x <= 1e-9),
                "{scheme} {:?}",
                r.iter().cloned().fold(0.0, f64::max)
            );
        }
    }

    #[test]
    fn steady_linear_matches_constant_source() {
        let sp = space(Dimension::Two, 6);
        let grid = TimeGrid::new(1.0, 20).unwrap();
        let lin = LinearProblem::homogeneous(sp.clone(), bubble()).with_steady_source(|_| 0.7);
        let semi = SemilinearProblem::new(sp, |_| 0.7, bubble());
        let a = solve_linear(&lin, grid, KernelScheme::L1, 0.4).unwrap();
        let b = solve_semilinear(&semi, grid, KernelScheme::L1, 0.4).unwrap();
        for (x, y) in a.states.iter().zip(&b.states) {
            let d = x
                .values
                .iter()
                .zip(&y.values)
                .map(|(p, q)| (p - q).abs())
                .fold(0.0, f64::max);
            assert!(d <= 1e-12, "{d}");
        }
    }

    #[test]
    fn linear_scheme_is_additive() {
        let sp = space(Dimension::Two, 6);
        let grid = TimeGrid::new(1.0, 16).unwrap();
        let g1 = |t: f64, p: Point| t * p[0];
        let g2 = |t: f64, p: Point| (PI * p[1]).sin() * (1.0 + t * t);
        let v1 = bubble();
        let v2 = ScalarField::new(|p: Point| (PI * p[0]).sin() * (2.0 * PI * p[1]).sin());
        let sum_v = {
            let (a, b) = (v1.clone(), v2.clone());
            ScalarField::new(move |p| a.value(p) + b.value(p))
        };
        let mk = |v: ScalarField, g: Box<dyn Fn(f64, Point) -> f64 + Send + Sync>| {
            LinearProblem::homogeneous(sp.clone(), v)
                .with_source(g)
                .with_projection(super::super::InitialProjection::Lagrange)
        };
        let a = solve_linear(&mk(v1, Box::new(g1)), grid, KernelScheme::BACKWARD_EULER, 0.5).unwrap();
        let b = solve_linear(&mk(v2, Box::new(g2)), grid, KernelScheme::BACKWARD_EULER, 0.5).unwrap();
        let c = solve_linear(
            &mk(sum_v, Box::new(move |t, p| g1(t, p) + g2(t, p))),
            grid,
            KernelScheme::BACKWARD_EULER,
            0.5,
        )
        .unwrap();
        for n in 0..=16 {
            for i in 0..sp.num_dofs() {
                let d = c.states[n].values[i] - a.states[n].values[i] - b.states[n].values[i];
                assert!(d.abs() < 1e-10, "{d}");
            }
        }
    }

    #[test]
    fn near_unit_order_approaches_heat_equation() {
        let sp = space(Dimension::Two, 8);
        let grid = TimeGrid::new(1.0, 100).unwrap();
        let u0 = ScalarField::new(|p: Point| (PI * p[0]).sin() * (PI * p[1]).sin());
        let lin = LinearProblem::homogeneous(sp.clone(), u0.clone())
            .with_projection(super::super::InitialProjection::Lagrange);
        let frac = solve_linear(&lin, grid, KernelScheme::BACKWARD_EULER, 0.999).unwrap();
        // classical implicit Euler for M u' + S u = 0
        let tau = grid.tau();
        let sys = SparseSymOperator::linear_combination(1.0 / tau, &sp.mass, 1.0, &sp.stiffness).unwrap();
        let solver = CgSolver::new(sys).unwrap();
        let mut u = lagrange_interpolate(&sp.mesh, |p| u0.value(p)).values;
        for _ in 0..100 {
            let rhs: Vec<f64> = sp.mass.apply(&u).iter().map(|v| v / tau).collect();
            u = solver.solve(&rhs).unwrap();
        }
        let heat = GridFunction::new(u);
        let diff = GridFunction::new(
            frac.final_state()
                .values
                .iter()
                .zip(&heat.values)
                .map(|(a, b)| a - b)
                .collect(),
        );
        let rel = diff.mass_norm(&sp.mass) / heat.mass_norm(&sp.mass);
        assert!(rel <= 0.02, "{rel}");
    }

    #[test]
    fn trajectory_stays_bounded_as_steps_double() {
        let sp = space(Dimension::Two, 6);
        let p = SemilinearProblem::new(sp.clone(), |u: f64| (1.0 + u * u).sqrt(), bubble());
        let peaks: Vec<f64> = [20, 40, 80, 160]
            .iter()
            .map(|&n| {
                solve_semilinear(&p, TimeGrid::new(1.0, n).unwrap(), KernelScheme::BACKWARD_EULER, 0.5)
                    .unwrap()
                    .max_mass_norm(&sp.mass)
            })
            .collect();
        let lo = peaks.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = peaks.iter().cloned().fold(0.0, f64::max);
        assert!(hi.is_finite() && hi <= 1.5 * lo, "{peaks:?}");
    }

    #[test]
    fn blow_up_is_flagged() {
        let sp = space(Dimension::One, 8);
        let u0 = ScalarField::new(|p: Point| 50.0 * (PI * p[0]).sin());
        let p = SemilinearProblem::new(sp, |u: f64| u * u * u, u0)
            .with_projection(super::super::InitialProjection::Lagrange)
            .with_blow_up_threshold(1e6);
        let err = solve_semilinear(&p, TimeGrid::new(1.0, 50).unwrap(), KernelScheme::BACKWARD_EULER, 0.5).unwrap_err();
        assert!(matches!(err, Error::BlowUp { .. }));
    }

    #[test]
    fn projection_choice_sets_initial_state() {
        let sp = space(Dimension::Two, 5);
        let p = SemilinearProblem::new(sp.clone(), |_| 0.0, bubble());
        let ritz = p.initial_value().unwrap();
        let lag = p
            .clone()
            .with_projection(super::super::InitialProjection::Lagrange)
            .initial_value()
            .unwrap();
        let grid = TimeGrid::new(1.0, 2).unwrap();
        let t = solve_semilinear(&p, grid, KernelScheme::L1, 0.5).unwrap();
        assert_eq!(t.states[0], ritz);
        assert_ne!(ritz, lag);
        assert!("Lagrange".parse::<super::super::InitialProjection>().is_ok());
        assert!("nodal".parse::<super::super::InitialProjection>().is_err());
    }
}
