use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use subdiff_core::spatial_fem::{FemSpace, Point, ScalarField};
use subdiff_core::time_stepping::{InitialProjection, SemilinearProblem};

use crate::error::{value_error, HarnessError};

/// Problem data on the unit square.
///
/// * `a`: `u0 = xy(1−x)(1−y)`, `f(u) = sqrt(1 + u²)`
/// * `b`: `u0 = x(1−x) sin(2πy)`, `f(u) = 1 − u³`
/// * `custom`: `u0 = sin(πx) sin(πy)`, `f ≡ 0`
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    A,
    B,
    Custom,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::A => "a",
            Case::B => "b",
            Case::Custom => "custom",
        })
    }
}

impl FromStr for Case {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a" => Ok(Case::A),
            "b" => Ok(Case::B),
            "custom" => Ok(Case::Custom),
            other => Err(value_error("case", format!("expected a, b or custom, got `{other}`"))),
        }
    }
}

impl Case {
    pub fn initial(self) -> ScalarField {
        match self {
            Case::A => ScalarField::new(|p: Point| p[0] * p[1] * (1.0 - p[0]) * (1.0 - p[1])).with_gradient(|p| {
                [
                    (1.0 - 2.0 * p[0]) * p[1] * (1.0 - p[1]),
                    (1.0 - 2.0 * p[1]) * p[0] * (1.0 - p[0]),
                ]
            }),
            Case::B => ScalarField::new(|p: Point| p[0] * (1.0 - p[0]) * (2.0 * PI * p[1]).sin()).with_gradient(|p| {
                [
                    (1.0 - 2.0 * p[0]) * (2.0 * PI * p[1]).sin(),
                    2.0 * PI * p[0] * (1.0 - p[0]) * (2.0 * PI * p[1]).cos(),
                ]
            }),
            Case::Custom => ScalarField::new(|p: Point| (PI * p[0]).sin() * (PI * p[1]).sin()).with_gradient(|p| {
                [
                    PI * (PI * p[0]).cos() * (PI * p[1]).sin(),
                    PI * (PI * p[0]).sin() * (PI * p[1]).cos(),
                ]
            }),
        }
    }

    pub fn source(self) -> fn(f64) -> f64 {
        match self {
            Case::A => |u| (1.0 + u * u).sqrt(),
            Case::B => |u| 1.0 - u * u * u,
            Case::Custom => |_| 0.0,
        }
    }

    /// Global Lipschitz constant of the source when one exists.
    pub fn lipschitz(self) -> Option<f64> {
        match self {
            Case::A => Some(1.0),
            Case::B => None,
            Case::Custom => Some(0.0),
        }
    }

    pub fn problem(self, space: Arc<FemSpace>, projection: InitialProjection) -> SemilinearProblem {
        let mut p = SemilinearProblem::new(space, self.source(), self.initial()).with_projection(projection);
        if let Some(l) = self.lipschitz() {
            p = p.with_lipschitz_hint(l);
        }
        p
    }
}
