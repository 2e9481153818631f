//! Single-level sparse-grid kernel collocation (combination technique).

use rayon::prelude::*;

use crate::basis::BasisFamily;
use crate::collocation::{solve_subgrid, OperatorKind, Rhs, SubgridSolution};
use crate::error::{Error, Result};
use crate::grid::{combination_terms, PointSet};
use crate::problems::PdeProblem;

/// `u^{n,d} = Σ_q (−1)^q binom(d−1, q) Σ_{‖ℓ‖₁ = n+d−1−q} u_ℓ`.
#[derive(Clone, Debug)]
pub struct SikSolution {
    level: u32,
    terms: Vec<(i64, SubgridSolution)>,
    max_condition: f64,
}

impl SikSolution {
    pub fn from_terms(level: u32, terms: Vec<(i64, SubgridSolution)>) -> Self {
        let max_condition = terms
            .iter()
            .map(|(_, s)| s.condition_estimate())
            .fold(0.0, f64::max);
        SikSolution { level, terms, max_condition }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn terms(&self) -> &[(i64, SubgridSolution)] {
        &self.terms
    }

    pub fn max_condition(&self) -> f64 {
        self.max_condition
    }

    pub fn dim(&self) -> usize {
        self.terms.first().map_or(0, |(_, s)| s.grid().dim())
    }

    /// A copy with every coefficient vector multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        SikSolution {
            level: self.level,
            terms: self.terms.iter().map(|(c, t)| (*c, t.scaled(s))).collect(),
            max_condition: self.max_condition,
        }
    }

    pub fn eval(&self, y: &[f64]) -> Result<f64> {
        let mut sum = 0.0;
        for (coeff, sol) in &self.terms {
            sum += *coeff as f64 * sol.eval(y)?;
        }
        Ok(sum)
    }

    pub fn eval_operator(&self, op: OperatorKind, y: &[f64]) -> Result<f64> {
        let mut sum = 0.0;
        for (coeff, sol) in &self.terms {
            sum += *coeff as f64 * sol.eval_operator(op, y)?;
        }
        Ok(sum)
    }

    /// Values at every point of `points`, evaluated in parallel.
    pub fn eval_many(&self, points: &PointSet) -> Result<Vec<f64>> {
        (0..points.len())
            .into_par_iter()
            .map(|i| self.eval(points.point(i)))
            .collect()
    }
}

pub fn solve_sik(
    n: u32,
    problem: &PdeProblem,
    family: &BasisFamily,
    rhs_interior: Rhs<'_>,
    rhs_boundary: Rhs<'_>,
) -> Result<SikSolution> {
    let terms = combination_terms(n, problem.dimension)?;
    let solved: Vec<(i64, SubgridSolution)> = terms
        .par_iter()
        .map(|term| {
            solve_subgrid(&term.index, problem, rhs_interior, rhs_boundary, family)
                .map(|sol| (term.coefficient, sol))
                .map_err(|source| Error::Subgrid {
                    index: term.index.clone(),
                    source: Box::new(source),
                })
        })
        .collect::<Result<_>>()?;
    log::debug!("solved SIK-C level {n}: {} subgrids", solved.len());
    Ok(SikSolution::from_terms(n, solved))
}

pub fn eval_sik(sol: &SikSolution, y: &[f64]) -> Result<f64> {
    sol.eval(y)
}

pub fn eval_operator_of_sik(sol: &SikSolution, op: OperatorKind, y: &[f64]) -> Result<f64> {
    sol.eval_operator(op, y)
}
