//! Kansa collocation on one anisotropic uniform subgrid.
//!
//! Every node of `X_ℓ` is both a kernel centre and a collocation point, so
//! the system is square. Interior nodes get PDE rows, boundary nodes get
//! Dirichlet rows.

use std::fmt;

use crate::basis::{self, BasisFamily, BasisKind, ShapeVector};
use crate::error::{Error, Result};
use crate::grid::{make_uniform_grid, BoundaryRule, MultiIndex, NodeClass, UniformGrid};
use crate::linalg::{DenseMatrix, LuFactors};
use crate::problems::PdeProblem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OperatorKind {
    /// `Δu`
    Laplace,
    /// `u_t − Δ_x u` with time on axis 0.
    Heat,
}

impl OperatorKind {
    pub fn check_dimension(self, d: usize) -> Result<()> {
        match self {
            OperatorKind::Heat if d < 2 => Err(Error::UnsupportedOperator(d)),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OperatorKind::Laplace => "laplace",
            OperatorKind::Heat => "heat",
        })
    }
}

/// Right-hand side data sampled at collocation nodes.
pub type Rhs<'a> = &'a (dyn Fn(&[f64]) -> f64 + Sync);

/// Per-axis kernel tables `T[a][b] = μ(x_a − x_b)` for value and operator
/// factor, so a matrix entry is a product of `d` table lookups.
struct AxisTables {
    n: usize,
    value: Vec<f64>,
    weight: Vec<f64>,
}

fn axis_tables(
    op: OperatorKind,
    kind: BasisKind,
    grid: &UniformGrid,
    shape: &ShapeVector,
) -> Vec<AxisTables> {
    (0..grid.dim())
        .map(|i| {
            let axis = grid.axis(i);
            let n = axis.len();
            let c = shape.as_slice()[i];
            let mut value = Vec::with_capacity(n * n);
            let mut weight = Vec::with_capacity(n * n);
            for &y in axis {
                for &x in axis {
                    let (v, w) = basis::axis_factors(op, kind, i, c, y - x);
                    value.push(v);
                    weight.push(w);
                }
            }
            AxisTables { n, value, weight }
        })
        .collect()
}

fn multi_index_of(mut flat: usize, sizes: &[usize], out: &mut [usize]) {
    for i in (0..sizes.len()).rev() {
        out[i] = flat % sizes[i];
        flat /= sizes[i];
    }
}

/// Collocation matrix and right-hand side for one subgrid, plus the row
/// classes in node order.
pub struct CollocationSystem {
    pub matrix: DenseMatrix,
    pub rhs: Vec<f64>,
    pub classes: Vec<NodeClass>,
}

pub fn assemble(
    index: &MultiIndex,
    problem: &PdeProblem,
    rhs_interior: Rhs<'_>,
    rhs_boundary: Rhs<'_>,
    family: &BasisFamily,
) -> Result<(CollocationSystem, UniformGrid, ShapeVector)> {
    let d = index.dim();
    if d != problem.dimension {
        return Err(Error::DimensionMismatch { expected: problem.dimension, found: d });
    }
    problem.operator.check_dimension(d)?;
    let grid = make_uniform_grid(index);
    let shape = family.shape_for(index);
    let rule = problem.boundary_rule();
    let system = assemble_on(&grid, &shape, problem.operator, rule, family, rhs_interior, rhs_boundary)?;
    Ok((system, grid, shape))
}

fn assemble_on(
    grid: &UniformGrid,
    shape: &ShapeVector,
    op: OperatorKind,
    rule: BoundaryRule,
    family: &BasisFamily,
    rhs_interior: Rhs<'_>,
    rhs_boundary: Rhs<'_>,
) -> Result<CollocationSystem> {
    let d = grid.dim();
    let n = grid.len();
    let tables = axis_tables(op, family.kind(), grid, shape);
    let sizes: Vec<usize> = tables.iter().map(|t| t.n).collect();
    let mut matrix = DenseMatrix::zeros(n, n);
    let mut rhs = Vec::with_capacity(n);
    let mut classes = Vec::with_capacity(n);
    let mut kr = vec![0usize; d];
    let mut kc = vec![0usize; d];
    let mut vals = vec![0.0; d];
    let mut wts = vec![0.0; d];

    for r in 0..n {
        let y = grid.nodes().point(r);
        let class = rule.classify(y)?;
        multi_index_of(r, &sizes, &mut kr);
        let row = matrix.row_mut(r);
        for (c, entry) in row.iter_mut().enumerate() {
            multi_index_of(c, &sizes, &mut kc);
            for i in 0..d {
                let at = kr[i] * sizes[i] + kc[i];
                vals[i] = tables[i].value[at];
                wts[i] = tables[i].weight[at];
            }
            *entry = match class {
                NodeClass::Boundary => vals.iter().product(),
                NodeClass::Interior => (0..d)
                    .map(|i| {
                        (0..d)
                            .map(|j| if i == j { wts[j] } else { vals[j] })
                            .product::<f64>()
                    })
                    .sum(),
            };
        }
        rhs.push(match class {
            NodeClass::Boundary => rhs_boundary(y),
            NodeClass::Interior => rhs_interior(y),
        });
        classes.push(class);
    }
    Ok(CollocationSystem { matrix, rhs, classes })
}

/// Dense LU solve; returns the coefficients and the 1-norm condition
/// estimate of the factored matrix.
pub fn solve(matrix: DenseMatrix, rhs: &[f64]) -> Result<(Vec<f64>, f64)> {
    if matrix.rows() != matrix.cols() || matrix.rows() != rhs.len() {
        return Err(Error::DimensionMismatch { expected: matrix.rows(), found: rhs.len() });
    }
    let lu = LuFactors::factor(matrix)?;
    let x = lu.solve(rhs);
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok((x, lu.condition_estimate()))
}

/// Solved collocation expansion `u_ℓ(y) = Σ_j α_j Φ_ℓ(y − x_j)` on one subgrid.
#[derive(Clone, Debug)]
pub struct SubgridSolution {
    grid: UniformGrid,
    shape: ShapeVector,
    family: BasisFamily,
    coefficients: Vec<f64>,
    condition_estimate: f64,
}

/// Assemble and solve the collocation system on `X_ℓ`.
pub fn solve_subgrid(
    index: &MultiIndex,
    problem: &PdeProblem,
    rhs_interior: Rhs<'_>,
    rhs_boundary: Rhs<'_>,
    family: &BasisFamily,
) -> Result<SubgridSolution> {
    let (system, grid, shape) = assemble(index, problem, rhs_interior, rhs_boundary, family)?;
    let (coefficients, condition_estimate) = solve(system.matrix, &system.rhs)?;
    Ok(SubgridSolution { grid, shape, family: *family, coefficients, condition_estimate })
}

impl SubgridSolution {
    /// Build a solution from given coefficients, mainly for tests and
    /// synthetic expansions.
    pub fn from_parts(
        index: &MultiIndex,
        family: &BasisFamily,
        coefficients: Vec<f64>,
        condition_estimate: f64,
    ) -> Result<Self> {
        let grid = make_uniform_grid(index);
        if coefficients.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), found: coefficients.len() });
        }
        Ok(SubgridSolution {
            shape: family.shape_for(index),
            grid,
            family: *family,
            coefficients,
            condition_estimate,
        })
    }

    pub fn index(&self) -> &MultiIndex {
        self.grid.index()
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn centers(&self) -> &crate::grid::PointSet {
        self.grid.nodes()
    }

    pub fn shape(&self) -> &ShapeVector {
        &self.shape
    }

    pub fn family(&self) -> &BasisFamily {
        &self.family
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn condition_estimate(&self) -> f64 {
        self.condition_estimate
    }

    pub(crate) fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.coefficients.iter_mut().for_each(|a| *a *= s);
        out
    }

    fn check_point(&self, y: &[f64]) -> Result<()> {
        if y.len() != self.grid.dim() {
            return Err(Error::DimensionMismatch { expected: self.grid.dim(), found: y.len() });
        }
        Ok(())
    }

    /// `u_ℓ(y)`.
    pub fn eval(&self, y: &[f64]) -> Result<f64> {
        self.check_point(y)?;
        Ok(self.contract(y, None))
    }

    /// `ℒ u_ℓ(y)`.
    pub fn eval_operator(&self, op: OperatorKind, y: &[f64]) -> Result<f64> {
        self.check_point(y)?;
        op.check_dimension(y.len())?;
        Ok(self.contract(y, Some(op)))
    }

    /// Tensor contraction of the coefficient array with per-axis factor
    /// vectors, last axis first.
    ///
    /// For the value, each step reduces `A ← Σ_k A[.., k] v[k]`. For an
    /// operator `Σ_i w_i Π_{j≠i} v_j` a second accumulator `B` carries the
    /// terms with exactly one `w` factor: `B ← Σ_k (B[.., k] v[k] + A[.., k] w[k])`.
    fn contract(&self, y: &[f64], op: Option<OperatorKind>) -> f64 {
        let d = self.grid.dim();
        let kind = self.family.kind();
        let c = self.shape.as_slice();
        let mut factors: Vec<(Vec<f64>, Vec<f64>)> = Vec::with_capacity(d);
        for i in 0..d {
            let axis = self.grid.axis(i);
            let (v, w): (Vec<f64>, Vec<f64>) = match op {
                Some(op) => axis.iter().map(|&x| basis::axis_factors(op, kind, i, c[i], y[i] - x)).unzip(),
                None => (axis.iter().map(|&x| basis::eval_1d(kind, c[i], y[i] - x)).collect(), Vec::new()),
            };
            factors.push((v, w));
        }

        let (v_last, w_last) = &factors[d - 1];
        let n_last = v_last.len();
        let mut a: Vec<f64> = self
            .coefficients
            .chunks_exact(n_last)
            .map(|chunk| dot(chunk, v_last))
            .collect();
        let mut b: Vec<f64> = match op {
            Some(_) => self.coefficients.chunks_exact(n_last).map(|chunk| dot(chunk, w_last)).collect(),
            None => Vec::new(),
        };
        for i in (0..d - 1).rev() {
            let (v, w) = &factors[i];
            let n = v.len();
            let next_a: Vec<f64> = a.chunks_exact(n).map(|chunk| dot(chunk, v)).collect();
            if op.is_some() {
                b = b
                    .chunks_exact(n)
                    .zip(a.chunks_exact(n))
                    .map(|(bc, ac)| dot(bc, v) + dot(ac, w))
                    .collect();
            }
            a = next_a;
        }
        if op.is_some() {
            b[0]
        } else {
            a[0]
        }
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn eval_solution(sol: &SubgridSolution, y: &[f64]) -> Result<f64> {
    sol.eval(y)
}

pub fn eval_operator_of_solution(sol: &SubgridSolution, op: OperatorKind, y: &[f64]) -> Result<f64> {
    sol.eval_operator(op, y)
}
