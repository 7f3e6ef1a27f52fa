use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::spatial_fem::{lagrange_interpolate, load_vector, ritz_project, FemSpace, GridFunction, Point, ScalarField};

pub type Nonlinearity = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type SourceFn = Arc<dyn Fn(f64, Point) -> f64 + Send + Sync>;

/// Max-norm beyond which a trajectory is declared unbounded.
pub const DEFAULT_BLOW_UP: f64 = 1e8;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialProjection {
    #[default]
    Ritz,
    Lagrange,
}

impl fmt::Display for InitialProjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InitialProjection::Ritz => "ritz",
            InitialProjection::Lagrange => "lagrange",
        })
    }
}

impl FromStr for InitialProjection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ritz" => Ok(InitialProjection::Ritz),
            "lagrange" => Ok(InitialProjection::Lagrange),
            other => Err(param(
                "initial_projection",
                format!("expected ritz or lagrange, got `{other}`"),
            )),
        }
    }
}

impl InitialProjection {
    pub fn apply(self, space: &FemSpace, v: &ScalarField) -> Result<GridFunction> {
        match self {
            InitialProjection::Ritz => ritz_project(&space.mesh, &space.stiffness, space.kappa, v),
            InitialProjection::Lagrange => Ok(lagrange_interpolate(&space.mesh, |p| v.value(p))),
        }
    }
}

/// `∂_t^α u − κΔu = f(u)` with homogeneous Dirichlet data.
#[derive(Clone)]
pub struct SemilinearProblem {
    pub space: Arc<FemSpace>,
    pub source: Nonlinearity,
    pub lipschitz_hint: Option<f64>,
    pub initial: ScalarField,
    pub initial_projection: InitialProjection,
    pub blow_up_threshold: f64,
}

impl fmt::Debug for SemilinearProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SemilinearProblem")
            .field("dofs", &self.space.num_dofs())
            .field("kappa", &self.space.kappa)
            .field("lipschitz_hint", &self.lipschitz_hint)
            .field("initial_projection", &self.initial_projection)
            .finish()
    }
}

impl SemilinearProblem {
    pub fn new(
        space: Arc<FemSpace>,
        source: impl Fn(f64) -> f64 + Send + Sync + 'static,
        initial: ScalarField,
    ) -> Self {
        Self {
            space,
            source: Arc::new(source),
            lipschitz_hint: None,
            initial,
            initial_projection: InitialProjection::default(),
            blow_up_threshold: DEFAULT_BLOW_UP,
        }
    }

    pub fn with_projection(mut self, projection: InitialProjection) -> Self {
        self.initial_projection = projection;
        self
    }

    pub fn with_lipschitz_hint(mut self, l: f64) -> Self {
        self.lipschitz_hint = Some(l);
        self
    }

    pub fn with_blow_up_threshold(mut self, threshold: f64) -> Self {
        self.blow_up_threshold = threshold;
        self
    }

    pub fn initial_value(&self) -> Result<GridFunction> {
        self.initial_projection.apply(&self.space, &self.initial)
    }
}

/// `∂_t^α v − κΔv = g(t, x)` with homogeneous Dirichlet data.
#[derive(Clone)]
pub struct LinearProblem {
    pub space: Arc<FemSpace>,
    /// `None` means `g ≡ 0`.
    pub source: Option<SourceFn>,
    /// Set when `g` does not depend on `t`.
    pub steady_source: bool,
    pub initial: ScalarField,
    pub initial_projection: InitialProjection,
}

impl fmt::Debug for LinearProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LinearProblem")
            .field("dofs", &self.space.num_dofs())
            .field("has_source", &self.source.is_some())
            .field("steady_source", &self.steady_source)
            .finish()
    }
}

impl LinearProblem {
    pub fn homogeneous(space: Arc<FemSpace>, initial: ScalarField) -> Self {
        Self {
            space,
            source: None,
            steady_source: true,
            initial,
            initial_projection: InitialProjection::Ritz,
        }
    }

    pub fn with_source(mut self, g: impl Fn(f64, Point) -> f64 + Send + Sync + 'static) -> Self {
        self.source = Some(Arc::new(g));
        self.steady_source = false;
        self
    }

    pub fn with_steady_source(mut self, g: impl Fn(Point) -> f64 + Send + Sync + 'static) -> Self {
        self.source = Some(Arc::new(move |_, p| g(p)));
        self.steady_source = true;
        self
    }

    pub fn with_projection(mut self, projection: InitialProjection) -> Self {
        self.initial_projection = projection;
        self
    }

    pub fn initial_value(&self) -> Result<GridFunction> {
        self.initial_projection.apply(&self.space, &self.initial)
    }

    /// Load vector of `g(t, ·)`.
    pub fn load_at(&self, t: f64) -> Vec<f64> {
        match &self.source {
            None => vec![0.0; self.space.num_dofs()],
            Some(g) => load_vector(&self.space.mesh, |p| g(t, p)),
        }
    }
}
