//! Benchmark PDE problems on `[0,1]^d` and manufactured solutions.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::basis::{apply_operator, eval_tensor, BasisFamily, ShapeVector};
use crate::collocation::OperatorKind;
use crate::error::{Error, Result};
use crate::grid::BoundaryRule;
use crate::MAX_DIM;

pub type ScalarField = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// `ℒu = f` in the open cube, `u = g` on the Dirichlet part of the boundary.
#[derive(Clone)]
pub struct PdeProblem {
    pub name: String,
    pub dimension: usize,
    pub operator: OperatorKind,
    pub f: ScalarField,
    pub g: ScalarField,
    pub exact: Option<ScalarField>,
    /// Coordinate holding time for parabolic problems.
    pub time_axis: Option<usize>,
}

impl fmt::Debug for PdeProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PdeProblem")
            .field("name", &self.name)
            .field("dimension", &self.dimension)
            .field("operator", &self.operator)
            .field("has_exact", &self.exact.is_some())
            .field("time_axis", &self.time_axis)
            .finish()
    }
}

impl PdeProblem {
    pub fn boundary_rule(&self) -> BoundaryRule {
        match self.time_axis {
            Some(time_axis) => BoundaryRule::OpenFinalTime { time_axis },
            None => BoundaryRule::AllFaces,
        }
    }
}

pub const BUILTIN_NAMES: [&str; 8] =
    ["ee2d1", "ee2d2", "ee3d1", "ee3dnt", "ee4d1", "ee4dnt", "pe4d1", "pe4d2"];

fn field(f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> ScalarField {
    Arc::new(f)
}

fn elliptic(name: &str, dimension: usize, f: ScalarField, exact: ScalarField) -> PdeProblem {
    PdeProblem {
        name: name.to_string(),
        dimension,
        operator: OperatorKind::Laplace,
        f,
        g: exact.clone(),
        exact: Some(exact),
        time_axis: None,
    }
}

fn parabolic(name: &str, f: ScalarField, exact: ScalarField) -> PdeProblem {
    PdeProblem {
        name: name.to_string(),
        dimension: 4,
        operator: OperatorKind::Heat,
        f,
        g: exact.clone(),
        exact: Some(exact),
        time_axis: Some(0),
    }
}

/// `Δ sin(π Π x_i) = −π² sin(π Π x_i) Σ_k Π_{j≠k} x_j²`.
fn product_sine_problem(name: &str, d: usize) -> PdeProblem {
    let f = field(move |x: &[f64]| {
        let prod: f64 = x.iter().product();
        let weights: f64 = (0..d)
            .map(|k| (0..d).filter(|&j| j != k).map(|j| x[j] * x[j]).product::<f64>())
            .sum();
        -PI * PI * (PI * prod).sin() * weights
    });
    let exact = field(|x: &[f64]| (PI * x.iter().product::<f64>()).sin());
    elliptic(name, d, f, exact)
}

pub fn builtin(name: &str) -> Result<PdeProblem> {
    let problem = match name {
        "ee2d1" => elliptic(
            name,
            2,
            field(|x| -PI * PI * (PI * x[0] * x[1]).sin() * (x[0] * x[0] + x[1] * x[1])),
            field(|x| (PI * x[0] * x[1]).sin()),
        ),
        "ee2d2" => elliptic(
            name,
            2,
            field(|x| -2.0 * PI * PI * (PI * x[0]).sin() * (PI * x[1]).cos()),
            field(|x| (PI * x[0]).sin() * (PI * x[1]).cos()),
        ),
        "ee3d1" => {
            let k = 2f64.sqrt() * PI;
            elliptic(
                name,
                3,
                field(|_| 0.0),
                field(move |x| (PI * x[0]).sin() * (PI * x[1]).sin() * (k * x[2]).sinh() / k.sinh()),
            )
        }
        "ee3dnt" => product_sine_problem(name, 3),
        "ee4d1" => {
            let k = 3f64.sqrt() * PI;
            elliptic(
                name,
                4,
                field(|_| 0.0),
                field(move |x| {
                    (PI * x[0]).sin() * (PI * x[1]).sin() * (PI * x[2]).sin() * (k * x[3]).sinh()
                        / k.sinh()
                }),
            )
        }
        "ee4dnt" => product_sine_problem(name, 4),
        // (t, x1, x2, x3)
        "pe4d1" => parabolic(
            name,
            field(|p| {
                let s: f64 = p[1..].iter().map(|&x| (PI * x).sin()).product();
                PI * s * ((PI * p[0]).cos() + 3.0 * PI * (PI * p[0]).sin())
            }),
            field(|p| (PI * p[0]).sin() * p[1..].iter().map(|&x| (PI * x).sin()).product::<f64>()),
        ),
        "pe4d2" => parabolic(
            name,
            field(|p| {
                let (x1, x2, x3) = (p[1], p[2], p[3]);
                let w = x2 * x2 * x3 * x3 + x1 * x1 * x3 * x3 + x1 * x1 * x2 * x2;
                (10.0 * (p[0] - 1.0)).exp() * (PI * x1 * x2 * x3).sin() * (10.0 + PI * PI * w)
            }),
            field(|p| (10.0 * (p[0] - 1.0)).exp() * (PI * p[1] * p[2] * p[3]).sin()),
        ),
        other => return Err(Error::UnknownProblem(other.to_string())),
    };
    Ok(problem)
}

/// Problem whose exact solution is a single basis function, so collocation
/// on any grid containing `center` with the same shape reproduces it.
pub fn manufactured_from_basis(
    family: &BasisFamily,
    shape: &ShapeVector,
    center: &[f64],
    operator: OperatorKind,
) -> Result<PdeProblem> {
    let d = shape.dim();
    if center.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: center.len() });
    }
    if d > MAX_DIM {
        return Err(Error::UnsupportedDimension(d));
    }
    operator.check_dimension(d)?;
    let (fam, s, c) = (*family, shape.clone(), center.to_vec());
    let exact = field(move |y| eval_tensor(&fam, &s, &c, y).expect("dimension checked"));
    let (s, c) = (shape.clone(), center.to_vec());
    let f = field(move |y| apply_operator(operator, &fam, &s, &c, y).expect("dimension checked"));
    Ok(PdeProblem {
        name: "manufactured".to_string(),
        dimension: d,
        operator,
        f,
        g: exact.clone(),
        exact: Some(exact),
        time_axis: (operator == OperatorKind::Heat).then_some(0),
    })
}
