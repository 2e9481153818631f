//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Reference values are the published convergence tables.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use musikc_core::grid::sparse_grid_nodes;
use musikc_core::harness::{also_sik, run_experiment};
use musikc_core::{BasisKind, ErrorMetric, ExperimentConfig, LevelReport};

type Outcome = Result<String, String>;

fn config(
    problem: &str,
    basis: BasisKind,
    c: f64,
    n0: u32,
    n_max: u32,
    points: usize,
) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::for_problem(problem, basis, c, n0, n_max).unwrap();
    cfg.test_points = points;
    cfg
}

fn within_factor(value: f64, reference: f64, factor: f64) -> bool {
    value >= reference / factor && value <= reference * factor
}

fn errors(rows: &[LevelReport]) -> Result<Vec<f64>, String> {
    rows.iter()
        .map(|r| r.error.ok_or_else(|| format!("level {} failed", r.level)))
        .collect()
}

fn match_table(rows: &[LevelReport], reference: &[f64]) -> Outcome {
    if rows.len() != reference.len() {
        return Err(format!("{} rows, expected {}", rows.len(), reference.len()));
    }
    let errs = errors(rows)?;
    let listing: Vec<String> = errs.iter().map(|e| format!("{e:.2e}")).collect();
    for ((r, &e), &want) in rows.iter().zip(&errs).zip(reference) {
        if !within_factor(e, want, 3.0) {
            return Err(format!("level {}: E = {e:.3e}, reference {want:.2e}", r.level));
        }
    }
    Ok(format!("E = [{}]", listing.join(", ")))
}

fn rho_h_in(rows: &[LevelReport], lo: f64, hi: f64) -> Outcome {
    let mut seen = Vec::new();
    for r in rows {
        let v = r.rho_h.ok_or_else(|| format!("level {}: no rho_h", r.level))?;
        if !(lo..=hi).contains(&v) {
            return Err(format!("level {}: rho_h = {v:.3}", r.level));
        }
        seen.push(format!("{v:.2}"));
    }
    Ok(format!("rho_h = [{}]", seen.join(", ")))
}

fn node_counts() -> Outcome {
    let tables: [(usize, u32, &[usize]); 3] = [
        (2, 2, &[21, 49, 113, 257, 577, 1281, 2817, 6145, 13313, 28673, 61441]),
        (3, 3, &[225, 593, 1505, 3713, 8961, 21249]),
        (4, 4, &[2769, 7681, 20481, 52993, 133889]),
    ];
    for (d, first, counts) in tables {
        for (k, &want) in counts.iter().enumerate() {
            let level = first + k as u32;
            let got = sparse_grid_nodes(level, d).map_err(|e| e.to_string())?.len();
            if got != want {
                return Err(format!("d={d} level {level}: {got} nodes, expected {want}"));
            }
        }
    }
    Ok("all 22 counts exact".into())
}

struct TwoD {
    musik: Vec<LevelReport>,
    sik: Vec<LevelReport>,
}

fn two_d_convergence(run: &TwoD) -> Outcome {
    let table = match_table(
        &run.musik,
        &[4.51e-2, 1.61e-2, 3.85e-3, 8.66e-4, 2.09e-4, 5.17e-5, 1.27e-5],
    )?;
    let slopes = rho_h_in(&run.musik[3..], 1.6, 2.4)?;
    Ok(format!("{table}; {slopes}"))
}

fn gaussian_stagnation() -> Outcome {
    let rows = also_sik(&config("ee2d1", BasisKind::Gaussian, 2.0, 4, 8, 10_000))
        .map_err(|e| e.to_string())?;
    let errs = errors(&rows)?;
    for (r, &e) in rows.iter().zip(&errs) {
        if !(1.5e-2..=4e-2).contains(&e) {
            return Err(format!("level {}: E_SIK = {e:.3e}", r.level));
        }
    }
    let decreasing = errs.windows(2).all(|w| w[1] < w[0]);
    if decreasing && *errs.last().unwrap() < 2.0e-2 {
        return Err("monotone decrease below 2.0e-2".into());
    }
    let listing: Vec<String> = errs.iter().map(|e| format!("{e:.2e}")).collect();
    Ok(format!("E_SIK = [{}]", listing.join(", ")))
}

fn multilevel_advantage(run: &TwoD) -> Outcome {
    let ml = run.musik.last().and_then(|r| r.error).ok_or("MuSIK level 8 missing")?;
    let sl = run.sik.last().and_then(|r| r.error).ok_or("SIK level 8 missing")?;
    let ratio = ml / sl;
    if ratio <= 0.1 {
        Ok(format!("E_MuSIK/E_SIK = {ml:.2e}/{sl:.2e} = {ratio:.2e}"))
    } else {
        Err(format!("ratio {ratio:.3e}"))
    }
}

fn extrapolation(run: &TwoD) -> Outcome {
    let n0 = run.musik[0].level;
    for r in run.musik.iter().filter(|r| r.level >= n0 + 2) {
        let e = r.error.ok_or("failed level")?;
        let x = r.error_extra.ok_or_else(|| format!("level {}: no E_extra", r.level))?;
        if x > e {
            return Err(format!("level {}: E_extra {x:.3e} > E {e:.3e}", r.level));
        }
    }
    let top = run.musik.last().unwrap();
    let x = top.error_extra.ok_or("no E_extra at level 8")?;
    if !within_factor(x, 4.95e-6, 3.0) {
        return Err(format!("level 8 E_extra = {x:.3e}"));
    }
    Ok(format!("level 8 E_extra = {x:.2e}"))
}

fn three_d() -> Outcome {
    let rows = run_experiment(&config("ee3d1", BasisKind::Multiquadric, 2.0, 3, 6, 20_000))
        .map_err(|e| e.to_string())?;
    match_table(&rows, &[3.01e-2, 7.83e-3, 1.92e-3, 3.49e-4])
}

fn four_d_parabolic() -> Outcome {
    let cfg = config("pe4d1", BasisKind::Multiquadric, 2.0, 4, 6, 20_000);
    if cfg.metric != ErrorMetric::Rms {
        return Err("parabolic run does not use RMS".into());
    }
    let rows = run_experiment(&cfg).map_err(|e| e.to_string())?;
    let table = match_table(&rows, &[1.80e-3, 3.71e-4, 8.91e-5])?;
    let slopes = rho_h_in(&rows[1..], 1.6, 2.4)?;
    Ok(format!("{table}; {slopes}"))
}

fn property_suites() -> Outcome {
    for d in 2..=4usize {
        for n in d as u32..=d as u32 + 4 {
            common::inclusion_exclusion(n, d)?;
        }
    }
    let (worst, at) = common::derivative_fd_error(1000, 2024);
    if worst > 1e-6 {
        return Err(format!("kernel derivative mismatch {worst:e} at {at}"));
    }
    common::all_collocation_residuals()?;
    for (kind, levels, center, op) in common::planted_cases() {
        let err = common::planted_recovery(kind, &levels, &center, op)?;
        if err > 1e-8 {
            return Err(format!("planted {kind:?} {levels:?} {op}: {err:e}"));
        }
    }
    common::all_source_consistency()?;
    Ok("inclusion-exclusion, derivatives, residuals, planted recovery, sources".into())
}

fn wide_shape_high_levels() -> Outcome {
    let rows = run_experiment(&config("ee2d1", BasisKind::Multiquadric, 3.0, 2, 10, 10_000))
        .map_err(|e| e.to_string())?;
    let last = rows.last().ok_or("no rows")?;
    let status = match last.error {
        Some(e) => format!("level {} E = {e:.2e}", last.level),
        None => format!("level {} reported as failed", last.level),
    };
    Ok(format!("completed {} rows, {status}", rows.len()))
}

fn main() -> ExitCode {
    let mut failures = 0;
    let mut report = |name: &str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS  {name}: {msg} ({secs:.1}s)"),
            Err(msg) => {
                failures += 1;
                println!("FAIL  {name}: {msg} ({secs:.1}s)");
            }
        }
    };

    let run = TwoD {
        musik: run_experiment(&config("ee2d1", BasisKind::Multiquadric, 2.0, 2, 8, 10_000))
            .expect("2-D multilevel run"),
        sik: also_sik(&config("ee2d1", BasisKind::Multiquadric, 2.0, 2, 8, 10_000))
            .expect("2-D single-level run"),
    };

    report("1 node counts", &mut node_counts);
    report("2 ee2d1 MQ C=2 convergence", &mut || two_d_convergence(&run));
    report("3 ee2d1 Gaussian SIK stagnation", &mut gaussian_stagnation);
    report("4 multilevel advantage", &mut || multilevel_advantage(&run));
    report("5 extrapolation", &mut || extrapolation(&run));
    report("6 ee3d1 MQ C=2 convergence", &mut three_d);
    report("7 pe4d1 MQ C=2 RMS convergence", &mut four_d_parabolic);
    report("8 property suites", &mut property_suites);
    report("qualitative ee2d1 MQ C=3 to level 10", &mut wide_shape_high_levels);

    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
