//! Anisotropic tensor-product multiquadric and Gaussian kernels.
//!
//! A basis function is `Φ_c(x) = Π_i μ_{c_i}(x_i)` where `μ` is either the
//! multiquadric `√(x² + c²)` or the Gaussian `exp(−x²/c²)`. All derivatives
//! are analytic; operators are assembled from per-axis value and derivative
//! factors.

use std::fmt;
use std::str::FromStr;

use crate::collocation::OperatorKind;
use crate::error::{Error, Result};
use crate::grid::MultiIndex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisKind {
    Multiquadric,
    Gaussian,
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BasisKind::Multiquadric => "mq",
            BasisKind::Gaussian => "gauss",
        })
    }
}

impl FromStr for BasisKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mq" | "multiquadric" => Ok(BasisKind::Multiquadric),
            "gauss" | "gaussian" => Ok(BasisKind::Gaussian),
            other => Err(Error::InvalidConfig(format!("unknown basis `{other}`"))),
        }
    }
}

/// Kernel kind together with the global shape constant `C`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BasisFamily {
    kind: BasisKind,
    shape_constant: f64,
}

impl BasisFamily {
    pub fn new(kind: BasisKind, shape_constant: f64) -> Result<Self> {
        if !(shape_constant > 0.0 && shape_constant.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "shape constant must be positive, got {shape_constant}"
            )));
        }
        Ok(BasisFamily { kind, shape_constant })
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn shape_constant(&self) -> f64 {
        self.shape_constant
    }

    /// Shape vector `c_i = C · 2^{-l_i}` for the grid with the given levels.
    pub fn shape_for(&self, index: &MultiIndex) -> ShapeVector {
        ShapeVector(
            index
                .levels()
                .iter()
                .map(|&l| self.shape_constant * (-(l as f64)).exp2())
                .collect(),
        )
    }
}

/// Per-axis shape parameters of one anisotropic basis function.
#[derive(Clone, Debug, PartialEq)]
pub struct ShapeVector(Vec<f64>);

impl ShapeVector {
    pub fn new(c: Vec<f64>) -> Result<Self> {
        if c.is_empty() || c.iter().any(|&ci| !(ci > 0.0 && ci.is_finite())) {
            return Err(Error::InvalidConfig(format!(
                "shape parameters must be positive, got {c:?}"
            )));
        }
        Ok(ShapeVector(c))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

#[inline]
pub fn eval_1d(kind: BasisKind, c: f64, x: f64) -> f64 {
    match kind {
        BasisKind::Multiquadric => (x * x + c * c).sqrt(),
        BasisKind::Gaussian => (-(x * x) / (c * c)).exp(),
    }
}

#[inline]
pub fn eval_1d_d1(kind: BasisKind, c: f64, x: f64) -> f64 {
    match kind {
        BasisKind::Multiquadric => x / (x * x + c * c).sqrt(),
        BasisKind::Gaussian => {
            let c2 = c * c;
            -2.0 * x / c2 * (-(x * x) / c2).exp()
        }
    }
}

#[inline]
pub fn eval_1d_d2(kind: BasisKind, c: f64, x: f64) -> f64 {
    match kind {
        BasisKind::Multiquadric => {
            let r2 = x * x + c * c;
            c * c / (r2 * r2.sqrt())
        }
        BasisKind::Gaussian => {
            let c2 = c * c;
            (4.0 * x * x / (c2 * c2) - 2.0 / c2) * (-(x * x) / c2).exp()
        }
    }
}

/// Value and operator factor of one axis.
///
/// Every supported operator has the form `Σ_i w_i Π_{j≠i} v_j`, where `v_j`
/// is the kernel value along axis `j` and `w_i` is a derivative along axis
/// `i`. For the Laplacian `w_i` is the second derivative; for the heat
/// operator it is the first derivative along the time axis and the negated
/// second derivative along each spatial axis.
#[inline]
pub(crate) fn axis_factors(
    op: OperatorKind,
    kind: BasisKind,
    axis: usize,
    c: f64,
    x: f64,
) -> (f64, f64) {
    let value = eval_1d(kind, c, x);
    let weight = match op {
        OperatorKind::Laplace => eval_1d_d2(kind, c, x),
        OperatorKind::Heat if axis == 0 => eval_1d_d1(kind, c, x),
        OperatorKind::Heat => -eval_1d_d2(kind, c, x),
    };
    (value, weight)
}

fn check_dims(shape: &ShapeVector, center: &[f64], y: &[f64]) -> Result<()> {
    let d = shape.dim();
    for len in [center.len(), y.len()] {
        if len != d {
            return Err(Error::DimensionMismatch { expected: d, found: len });
        }
    }
    Ok(())
}

pub fn eval_tensor(
    family: &BasisFamily,
    shape: &ShapeVector,
    center: &[f64],
    y: &[f64],
) -> Result<f64> {
    check_dims(shape, center, y)?;
    Ok(shape
        .as_slice()
        .iter()
        .zip(center.iter().zip(y))
        .map(|(&c, (&xc, &yi))| eval_1d(family.kind, c, yi - xc))
        .product())
}

/// The PDE operator applied to the basis function centred at `center`,
/// evaluated at `y`.
pub fn apply_operator(
    op: OperatorKind,
    family: &BasisFamily,
    shape: &ShapeVector,
    center: &[f64],
    y: &[f64],
) -> Result<f64> {
    check_dims(shape, center, y)?;
    let d = shape.dim();
    op.check_dimension(d)?;
    let factors: Vec<(f64, f64)> = (0..d)
        .map(|i| axis_factors(op, family.kind, i, shape.0[i], y[i] - center[i]))
        .collect();
    Ok((0..d)
        .map(|i| {
            factors
                .iter()
                .enumerate()
                .map(|(j, &(v, w))| if i == j { w } else { v })
                .product::<f64>()
        })
        .sum())
}
