//! Convergence experiments and their tabular output.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rayon::prelude::*;

use crate::basis::{BasisFamily, BasisKind};
use crate::error::{Error, Result};
use crate::extrapolation::{estimate_beta, extrapolate_values};
use crate::grid::{halton_points, sparse_grid_nodes, PointSet};
use crate::musik::solve_musik;
use crate::problems::{builtin, PdeProblem};
use crate::sik::solve_sik;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorMetric {
    MaxAbs,
    Rms,
}

impl FromStr for ErrorMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "max" | "maxabs" => Ok(ErrorMetric::MaxAbs),
            "rms" => Ok(ErrorMetric::Rms),
            other => Err(Error::InvalidConfig(format!("unknown error metric `{other}`"))),
        }
    }
}

impl fmt::Display for ErrorMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorMetric::MaxAbs => "max",
            ErrorMetric::Rms => "rms",
        })
    }
}

impl ErrorMetric {
    /// Error between `exact` and `approx`, reduced in index order. Any NaN
    /// makes the result NaN.
    pub fn measure(self, exact: &[f64], approx: &[f64]) -> f64 {
        assert_eq!(exact.len(), approx.len());
        let diffs = exact.iter().zip(approx).map(|(u, v)| (u - v).abs());
        match self {
            ErrorMetric::MaxAbs => diffs.fold(0.0, |m, e| if e.is_nan() || e > m { e } else { m }),
            ErrorMetric::Rms => {
                let sum: f64 = diffs.map(|e| e * e).sum();
                (sum / exact.len() as f64).sqrt()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub problem: String,
    pub basis: BasisKind,
    pub shape_constant: f64,
    pub n0: u32,
    pub n_max: u32,
    pub test_points: usize,
    pub metric: ErrorMetric,
    pub extrapolate: bool,
}

impl ExperimentConfig {
    /// Halton test-set size used by the reference tables for dimension `d`.
    pub fn default_test_points(d: usize) -> usize {
        match d {
            2 => 64_000,
            3 => 120_000,
            _ => 240_000,
        }
    }

    /// A configuration with the reference test-set size and metric for the
    /// named problem: RMS for parabolic problems, max error otherwise.
    pub fn for_problem(problem: &str, basis: BasisKind, shape_constant: f64, n0: u32, n_max: u32) -> Result<Self> {
        let p = builtin(problem)?;
        Ok(ExperimentConfig {
            problem: problem.to_string(),
            basis,
            shape_constant,
            n0,
            n_max,
            test_points: Self::default_test_points(p.dimension),
            metric: if p.time_axis.is_some() { ErrorMetric::Rms } else { ErrorMetric::MaxAbs },
            extrapolate: true,
        })
    }

    fn validate(&self, problem: &PdeProblem) -> Result<()> {
        if (self.n0 as usize) < problem.dimension {
            return Err(Error::LevelTooSmall { level: self.n0, dim: problem.dimension });
        }
        if self.n_max < self.n0 {
            return Err(Error::InvalidConfig(format!(
                "level range {}..{} is empty",
                self.n0, self.n_max
            )));
        }
        if self.test_points == 0 {
            return Err(Error::InvalidConfig("test point count must be positive".into()));
        }
        Ok(())
    }
}

/// One row of a convergence table.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelReport {
    pub level: u32,
    pub nodes: usize,
    /// Largest condition estimate among the level's subgrid systems.
    pub cond: Option<f64>,
    /// `None` marks a failed level.
    pub error: Option<f64>,
    /// Slope of `log E` against `log Nodes` from the previous row.
    pub rho: Option<f64>,
    /// `log₂(E_prev / E)`.
    pub rho_h: Option<f64>,
    pub error_extra: Option<f64>,
    pub rho_extra: Option<f64>,
}

impl LevelReport {
    pub fn failed(&self) -> bool {
        self.error.is_none()
    }
}

fn slope(e_prev: f64, e_curr: f64, n_prev: usize, n_curr: usize) -> f64 {
    (e_curr.ln() - e_prev.ln()) / ((n_curr as f64).ln() - (n_prev as f64).ln())
}

struct Setup {
    problem: PdeProblem,
    family: BasisFamily,
    test: PointSet,
    exact: Vec<f64>,
}

fn setup(config: &ExperimentConfig) -> Result<Setup> {
    let problem = builtin(&config.problem)?;
    config.validate(&problem)?;
    let family = BasisFamily::new(config.basis, config.shape_constant)?;
    let u = problem
        .exact
        .clone()
        .ok_or_else(|| Error::NoExactSolution(problem.name.clone()))?;
    let test = halton_points(config.test_points, problem.dimension)?;
    let exact = (0..test.len()).into_par_iter().map(|i| u(test.point(i))).collect();
    Ok(Setup { problem, family, test, exact })
}

/// Fills `rho` and `rho_h` from consecutive successful rows.
fn fill_slopes(rows: &mut [LevelReport]) {
    for i in 1..rows.len() {
        let (prev, curr) = (&rows[i - 1], &rows[i]);
        if let (Some(e0), Some(e1)) = (prev.error, curr.error) {
            let (n0, n1) = (prev.nodes, curr.nodes);
            rows[i].rho = Some(slope(e0, e1, n0, n1));
            rows[i].rho_h = Some((e0 / e1).log2());
        }
    }
}

fn failed_row(level: u32, nodes: usize) -> LevelReport {
    LevelReport {
        level,
        nodes,
        cond: None,
        error: None,
        rho: None,
        rho_h: None,
        error_extra: None,
        rho_extra: None,
    }
}

/// Multilevel experiment: one row per level from `n0` to the finest level
/// reached, with extrapolated errors when requested.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<LevelReport>> {
    let Setup { problem, family, test, exact } = setup(config)?;
    let d = problem.dimension;
    let solution = solve_musik(config.n0, config.n_max, &problem, &family)?;

    let mut rows: Vec<LevelReport> = Vec::new();
    let mut values = vec![0.0; test.len()];
    let mut prev_values: Option<Vec<f64>> = None;
    for (k, delta) in solution.deltas().iter().enumerate() {
        let level = config.n0 + k as u32;
        let nodes = sparse_grid_nodes(level, d)?.len();
        let increment = delta.eval_many(&test)?;
        for (v, dv) in values.iter_mut().zip(&increment) {
            *v += dv;
        }
        let error = config.metric.measure(&exact, &values);
        if !error.is_finite() {
            rows.push(failed_row(level, nodes));
            break;
        }
        let mut row = LevelReport {
            cond: Some(delta.max_condition()),
            error: Some(error),
            ..failed_row(level, nodes)
        };
        if let (true, Some(prev), Some(last)) = (config.extrapolate, &prev_values, rows.last()) {
            // rate from the two raw iterates only; extrapolated values are
            // never reused
            let extra = estimate_beta(last.error.unwrap(), error, last.nodes, nodes)
                .and_then(|rate| extrapolate_values(prev, &values, &rate));
            match extra {
                Ok(extra) => row.error_extra = Some(config.metric.measure(&exact, &extra)),
                Err(err) => log::warn!("level {level}: extrapolation skipped: {err}"),
            }
            if let (Some(e0), Some(e1)) = (last.error_extra, row.error_extra) {
                row.rho_extra = Some(slope(e0, e1, last.nodes, nodes));
            }
        }
        rows.push(row);
        prev_values = Some(values.clone());
    }
    if let Some(failure) = solution.failure() {
        if rows.last().is_none_or(|r| !r.failed()) {
            let nodes = sparse_grid_nodes(failure.level, d)?.len();
            rows.push(failed_row(failure.level, nodes));
        }
    }
    fill_slopes(&mut rows);
    Ok(rows)
}

/// Single-level experiment: every level solved independently against the
/// original data.
pub fn also_sik(config: &ExperimentConfig) -> Result<Vec<LevelReport>> {
    let Setup { problem, family, test, exact } = setup(config)?;
    let d = problem.dimension;
    let mut rows = Vec::new();
    for level in config.n0..=config.n_max {
        let nodes = sparse_grid_nodes(level, d)?.len();
        let sol = match solve_sik(level, &problem, &family, &*problem.f, &*problem.g) {
            Ok(sol) => sol,
            Err(err) => {
                log::warn!("{}: SIK-C level {level} failed: {err}", problem.name);
                rows.push(failed_row(level, nodes));
                break;
            }
        };
        let values = sol.eval_many(&test)?;
        let error = config.metric.measure(&exact, &values);
        if !error.is_finite() {
            rows.push(failed_row(level, nodes));
            break;
        }
        rows.push(LevelReport {
            cond: Some(sol.max_condition()),
            error: Some(error),
            ..failed_row(level, nodes)
        });
    }
    fill_slopes(&mut rows);
    Ok(rows)
}

pub const CSV_HEADER: &str = "level,nodes,cond,error,rho,rho_h,error_extra,rho_extra";

fn fmt_opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:e}")).unwrap_or_default()
}

pub fn emit_csv<W: Write>(reports: &[LevelReport], mut out: W) -> Result<()> {
    if reports.is_empty() {
        return Err(Error::InvalidConfig("no report rows to write".into()));
    }
    writeln!(out, "{CSV_HEADER}")?;
    for r in reports {
        let error = match r.error {
            Some(e) => format!("{e:e}"),
            None => "failed".to_string(),
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.level,
            r.nodes,
            fmt_opt(r.cond),
            error,
            fmt_opt(r.rho),
            fmt_opt(r.rho_h),
            fmt_opt(r.error_extra),
            fmt_opt(r.rho_extra),
        )?;
    }
    out.flush()?;
    Ok(())
}

/// `nodes error` pairs, one per successful level.
pub fn emit_plot_data<W: Write>(reports: &[LevelReport], mut out: W) -> Result<()> {
    for r in reports {
        if let Some(e) = r.error {
            writeln!(out, "{} {e:e}", r.nodes)?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn parse_csv<R: BufRead>(input: R) -> Result<Vec<LevelReport>> {
    let mut lines = input.lines().enumerate();
    match lines.next() {
        Some((_, Ok(h))) if h == CSV_HEADER => {}
        Some((_, Ok(h))) => return Err(Error::Parse { line: 1, reason: format!("bad header `{h}`") }),
        Some((_, Err(e))) => return Err(e.into()),
        None => return Err(Error::Parse { line: 1, reason: "empty input".into() }),
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        let line = line?;
        let lineno = i + 1;
        let bad = |reason: String| Error::Parse { line: lineno, reason };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(bad(format!("expected 8 fields, found {}", fields.len())));
        }
        let opt = |s: &str| -> Result<Option<f64>> {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse().map(Some).map_err(|e| bad(format!("`{s}`: {e}")))
            }
        };
        let error = match fields[3] {
            "failed" => None,
            "" => return Err(bad("missing error".into())),
            s => opt(s)?,
        };
        rows.push(LevelReport {
            level: fields[0].parse().map_err(|e| bad(format!("level: {e}")))?,
            nodes: fields[1].parse().map_err(|e| bad(format!("nodes: {e}")))?,
            cond: opt(fields[2])?,
            error,
            rho: opt(fields[4])?,
            rho_h: opt(fields[5])?,
            error_extra: opt(fields[6])?,
            rho_extra: opt(fields[7])?,
        });
    }
    Ok(rows)
}
