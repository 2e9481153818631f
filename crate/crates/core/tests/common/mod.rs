//! Independent oracles shared by the property and acceptance targets.

#![allow(dead_code)]

use musikc_core::basis::{eval_1d, eval_1d_d1, eval_1d_d2};
use musikc_core::collocation::{assemble, solve, solve_subgrid};
use musikc_core::grid::{combination_terms, halton_points, sparse_grid_nodes};
use musikc_core::problems::{builtin, manufactured_from_basis, BUILTIN_NAMES};
use musikc_core::{BasisFamily, BasisKind, MultiIndex, NodeClass, OperatorKind, PdeProblem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = Result<(), String>;

fn on_grid(x: f64, level: u32) -> bool {
    let k = x * (1u64 << level) as f64;
    k == k.floor()
}

/// Every node of the level-`n` sparse grid has combination weight one, and
/// the signed subgrid sizes add up to the node count.
pub fn inclusion_exclusion(n: u32, d: usize) -> Check {
    let terms = combination_terms(n, d).map_err(|e| e.to_string())?;
    let nodes = sparse_grid_nodes(n, d).map_err(|e| e.to_string())?;
    for x in nodes.iter() {
        let weight: i64 = terms
            .iter()
            .filter(|t| x.iter().zip(t.index.levels()).all(|(&xi, &l)| on_grid(xi, l)))
            .map(|t| t.coefficient)
            .sum();
        if weight != 1 {
            return Err(format!("n={n} d={d}: node {x:?} has weight {weight}"));
        }
    }
    let signed: i64 = terms.iter().map(|t| t.coefficient * t.index.node_count() as i64).sum();
    if signed != nodes.len() as i64 {
        return Err(format!("n={n} d={d}: signed size {signed} vs {} nodes", nodes.len()));
    }
    Ok(())
}

/// Worst relative deviation of the analytic 1-D derivatives from central
/// differences over `samples` random `(kind, c, x)`.
pub fn derivative_fd_error(samples: usize, seed: u64) -> (f64, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = (0.0, String::new());
    for _ in 0..samples {
        let kind = if rng.gen_bool(0.5) { BasisKind::Multiquadric } else { BasisKind::Gaussian };
        let c: f64 = rng.gen_range(0.05..4.0);
        let x: f64 = rng.gen_range(-2.0..2.0);
        let h = 1e-5 * c.min(1.0) / (1.0 + x.abs() / c);
        let f = |t: f64| eval_1d(kind, c, t);
        let g = |t: f64| eval_1d_d1(kind, c, t);
        let fd1 = (f(x + h) - f(x - h)) / (2.0 * h);
        let fd2 = (g(x + h) - g(x - h)) / (2.0 * h);
        let d1 = eval_1d_d1(kind, c, x);
        let d2 = eval_1d_d2(kind, c, x);
        let e1 = (d1 - fd1).abs() / d1.abs().max(f(x).abs() / c);
        let e2 = (d2 - fd2).abs() / d2.abs().max(f(x).abs() / (c * c));
        let e = e1.max(e2);
        if e > worst.0 {
            worst = (e, format!("{kind:?} c={c} x={x}"));
        }
    }
    worst
}

fn family(kind: BasisKind, c: f64) -> BasisFamily {
    BasisFamily::new(kind, c).unwrap()
}

/// `‖Aα − b‖∞ ≤ n ε (‖A‖∞ ‖α‖∞ + ‖b‖∞)` on every subgrid system of the
/// given problem and level.
pub fn collocation_residuals(problem: &PdeProblem, level: u32, fam: &BasisFamily) -> Check {
    for term in combination_terms(level, problem.dimension).map_err(|e| e.to_string())? {
        let (system, _, _) = assemble(&term.index, problem, &*problem.f, &*problem.g, fam)
            .map_err(|e| e.to_string())?;
        let a = system.matrix.clone();
        let (alpha, _) = solve(system.matrix, &system.rhs).map_err(|e| e.to_string())?;
        let n = a.rows();
        let mut resid: f64 = 0.0;
        for i in 0..n {
            let ax: f64 = a.row(i).iter().zip(&alpha).map(|(p, q)| p * q).sum();
            resid = resid.max((ax - system.rhs[i]).abs());
        }
        let norm_a = a.norm_inf();
        let norm_x = alpha.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let norm_b = system.rhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let bound = n as f64 * f64::EPSILON * (norm_a * norm_x + norm_b);
        if resid > bound {
            return Err(format!(
                "{} {}: residual {resid:e} exceeds {bound:e}",
                problem.name, term.index
            ));
        }
    }
    Ok(())
}

pub fn all_collocation_residuals() -> Check {
    let mq = family(BasisKind::Multiquadric, 2.0);
    let gauss = family(BasisKind::Gaussian, 2.0);
    for (name, levels) in [
        ("ee2d1", 2..=6),
        ("ee2d2", 2..=5),
        ("ee3d1", 3..=4),
        ("ee3dnt", 3..=4),
        ("ee4d1", 4..=4),
        ("ee4dnt", 4..=4),
        ("pe4d1", 4..=4),
        ("pe4d2", 4..=4),
    ] {
        let p = builtin(name).unwrap();
        for level in levels {
            collocation_residuals(&p, level, &mq)?;
        }
    }
    collocation_residuals(&builtin("ee2d1").unwrap(), 5, &gauss)
}

/// Largest deviation of the recovered coefficients from the unit vector of
/// the planted center.
pub fn planted_recovery(
    kind: BasisKind,
    levels: &[u32],
    center: &[f64],
    op: OperatorKind,
) -> Result<f64, String> {
    let fam = family(kind, 2.0);
    let index = MultiIndex::new(levels.to_vec()).unwrap();
    let shape = fam.shape_for(&index);
    let p = manufactured_from_basis(&fam, &shape, center, op).map_err(|e| e.to_string())?;
    let sol = solve_subgrid(&index, &p, &*p.f, &*p.g, &fam).map_err(|e| e.to_string())?;
    let j = sol
        .centers()
        .iter()
        .position(|x| x == center)
        .ok_or("center is not a grid node")?;
    Ok(sol
        .coefficients()
        .iter()
        .enumerate()
        .map(|(i, &a)| (a - if i == j { 1.0 } else { 0.0 }).abs())
        .fold(0.0, f64::max))
}

pub fn planted_cases() -> Vec<(BasisKind, Vec<u32>, Vec<f64>, OperatorKind)> {
    use BasisKind::*;
    use OperatorKind::*;
    vec![
        (Multiquadric, vec![3], vec![0.375], Laplace),
        (Multiquadric, vec![2, 2], vec![0.5, 0.25], Laplace),
        (Gaussian, vec![3, 1], vec![0.625, 0.5], Laplace),
        (Multiquadric, vec![1, 2, 1], vec![0.5, 0.75, 0.5], Laplace),
        (Multiquadric, vec![2, 2], vec![0.75, 0.5], Heat),
        (Gaussian, vec![1, 2, 1], vec![1.0, 0.25, 0.5], Heat),
    ]
}

/// Finite-difference `ℒu` at `x` with step `h`.
pub fn fd_operator(u: &dyn Fn(&[f64]) -> f64, op: OperatorKind, x: &[f64], h: f64) -> (f64, f64) {
    let d = x.len();
    let u0 = u(x);
    let mut y = x.to_vec();
    let mut value = 0.0;
    let mut scale = 0.0;
    for i in 0..d {
        y[i] = x[i] + h;
        let up = u(&y);
        y[i] = x[i] - h;
        let down = u(&y);
        y[i] = x[i];
        let term = if op == OperatorKind::Heat && i == 0 {
            (up - down) / (2.0 * h)
        } else {
            let second = (up - 2.0 * u0 + down) / (h * h);
            if op == OperatorKind::Heat {
                -second
            } else {
                second
            }
        };
        value += term;
        scale += term.abs();
    }
    (value, scale)
}

/// Worst relative mismatch between `f` and the finite-difference operator
/// applied to the exact solution of a built-in problem, normalised by the
/// magnitude of the individual operator terms.
pub fn source_consistency(name: &str, samples: usize) -> Result<f64, String> {
    let p = builtin(name).map_err(|e| e.to_string())?;
    let u = p.exact.clone().ok_or("no exact solution")?;
    let pts = halton_points(samples, p.dimension).unwrap();
    let mut worst: f64 = 0.0;
    for x in pts.iter() {
        let x: Vec<f64> = x.iter().map(|&v| 0.02 + 0.96 * v).collect();
        let (fd, scale) = fd_operator(&*u, p.operator, &x, 5e-4);
        let f = (p.f)(&x);
        let err = (fd - f).abs() / scale.max(f.abs()).max(1e-3);
        worst = worst.max(err);
    }
    Ok(worst)
}

pub fn all_source_consistency() -> Check {
    for name in BUILTIN_NAMES {
        let err = source_consistency(name, 1000)?;
        if err > 1e-4 {
            return Err(format!("{name}: f vs FD operator relative mismatch {err:e}"));
        }
    }
    Ok(())
}

/// Boundary points of the unit cube obtained by pinning one coordinate of a
/// Halton point to 0 or 1.
pub fn boundary_points(d: usize, count: usize) -> Vec<Vec<f64>> {
    halton_points(count, d)
        .unwrap()
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let mut y = x.to_vec();
            y[i % d] = ((i / d) % 2) as f64;
            y
        })
        .collect()
}

pub fn is_boundary(p: &PdeProblem, x: &[f64]) -> bool {
    p.boundary_rule().classify(x).unwrap() == NodeClass::Boundary
}
