//! Multilevel residual correction over a sequence of sparse grids.
//!
//! `Δ_0` is the SIK-C solution on the coarsest sparse grid. Each later
//! `Δ_k` solves the same PDE with data residuals
//! `f − ℒ Σ_{j<k} Δ_j` (interior) and `g − Σ_{j<k} Δ_j` (boundary) on the
//! next finer sparse grid. The approximation is `Σ_k Δ_k`.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::basis::BasisFamily;
use crate::error::{Error, Result};
use crate::grid::{point_key, sparse_grid_nodes, NodeClass, PointSet};
use crate::problems::PdeProblem;
use crate::sik::{solve_sik, SikSolution};
use crate::MAX_DIM;

/// Level at which the residual loop stopped early.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelFailure {
    pub level: u32,
    pub message: String,
}

#[derive(Clone, Debug)]
pub struct MusikSolution {
    base_level: u32,
    deltas: Vec<SikSolution>,
    per_level_conditions: Vec<f64>,
    failure: Option<LevelFailure>,
}

impl MusikSolution {
    pub fn from_deltas(base_level: u32, deltas: Vec<SikSolution>) -> Self {
        let per_level_conditions = deltas.iter().map(SikSolution::max_condition).collect();
        MusikSolution { base_level, deltas, per_level_conditions, failure: None }
    }

    pub fn base_level(&self) -> u32 {
        self.base_level
    }

    pub fn deltas(&self) -> &[SikSolution] {
        &self.deltas
    }

    pub fn per_level_conditions(&self) -> &[f64] {
        &self.per_level_conditions
    }

    pub fn failure(&self) -> Option<&LevelFailure> {
        self.failure.as_ref()
    }

    /// Finest level that was solved successfully.
    pub fn finest_level(&self) -> Option<u32> {
        (!self.deltas.is_empty()).then(|| self.base_level + self.deltas.len() as u32 - 1)
    }

    pub fn eval(&self, y: &[f64]) -> Result<f64> {
        let mut sum = 0.0;
        for delta in &self.deltas {
            sum += delta.eval(y)?;
        }
        Ok(sum)
    }

    pub fn eval_many(&self, points: &PointSet) -> Result<Vec<f64>> {
        (0..points.len())
            .into_par_iter()
            .map(|i| self.eval(points.point(i)))
            .collect()
    }
}

pub fn eval_musik(sol: &MusikSolution, y: &[f64]) -> Result<f64> {
    sol.eval(y)
}

/// Accumulated value (boundary nodes) or operator value (interior nodes) of
/// the previous corrections at every node of the next sparse grid.
fn previous_correction(
    deltas: &[SikSolution],
    level: u32,
    problem: &PdeProblem,
) -> Result<HashMap<[u64; MAX_DIM], f64>> {
    let nodes = sparse_grid_nodes(level, problem.dimension)?;
    let rule = problem.boundary_rule();
    let op = problem.operator;
    let values: Vec<f64> = (0..nodes.len())
        .into_par_iter()
        .map(|i| {
            let x = nodes.point(i);
            let mut sum = 0.0;
            match rule.classify(x)? {
                NodeClass::Boundary => {
                    for delta in deltas {
                        sum += delta.eval(x)?;
                    }
                }
                NodeClass::Interior => {
                    for delta in deltas {
                        sum += delta.eval_operator(op, x)?;
                    }
                }
            }
            Ok(sum)
        })
        .collect::<Result<_>>()?;
    Ok(nodes.iter().map(point_key).zip(values).collect())
}

pub fn solve_musik(
    n0: u32,
    n_max: u32,
    problem: &PdeProblem,
    family: &BasisFamily,
) -> Result<MusikSolution> {
    let d = problem.dimension;
    if (n0 as usize) < d {
        return Err(Error::LevelTooSmall { level: n0, dim: d });
    }
    if n_max < n0 {
        return Err(Error::InvalidConfig(format!(
            "finest level {n_max} is below the coarsest level {n0}"
        )));
    }
    problem.operator.check_dimension(d)?;

    let mut deltas: Vec<SikSolution> = Vec::new();
    let mut failure = None;
    for level in n0..=n_max {
        let result = if deltas.is_empty() {
            solve_sik(level, problem, family, &*problem.f, &*problem.g)
        } else {
            let correction = previous_correction(&deltas, level, problem)?;
            let lookup = |x: &[f64]| {
                *correction
                    .get(&point_key(x))
                    .expect("subgrid node missing from the sparse grid")
            };
            let f = &problem.f;
            let g = &problem.g;
            let interior = |x: &[f64]| f(x) - lookup(x);
            let boundary = |x: &[f64]| g(x) - lookup(x);
            solve_sik(level, problem, family, &interior, &boundary)
        };
        match result {
            Ok(delta) => {
                log::info!(
                    "{}: level {level} solved, max cond {:.3e}",
                    problem.name,
                    delta.max_condition()
                );
                deltas.push(delta);
            }
            Err(err) => {
                log::warn!("{}: level {level} failed: {err}", problem.name);
                failure = Some(LevelFailure { level, message: err.to_string() });
                break;
            }
        }
    }
    let mut sol = MusikSolution::from_deltas(n0, deltas);
    sol.failure = failure;
    Ok(sol)
}
