use std::path::Path;
use std::time::Instant;

use neurofield::stepper::{
    self, matrix_form_value_count, run_reference, vector_form_value_count, Evaluator, RunRecord,
    SimSetup,
};
use neurofield::{DendriticDelta, Grid};

use crate::config::RunConfig;
use crate::output::{write_csv, write_provenance};
use crate::CliResult;

struct Rung {
    alg: f64, // 1 = matrix form (fft), 1.5 = matrix form (compact), 2 = vector form
    n_x: usize,
    n_xi: usize,
    record: RunRecord,
    wall_ms: f64,
    values: u64,
}

/// Runs the grid-size ladders, reporting per-step operation counters, wall
/// times (informational, not asserted anywhere), empirical scaling
/// exponents, and the working-set accounting of both algorithm forms.
pub fn cmd_bench(cfg: &RunConfig, out_dir: &Path) -> CliResult<()> {
    let steps = cfg.bench.steps;
    let mut rungs: Vec<Rung> = Vec::new();

    let setup_for = |grid: Grid, evaluator: Evaluator| -> CliResult<SimSetup> {
        let mut s = cfg.build_sim_setup()?;
        if evaluator == Evaluator::Compact {
            s.delta = DendriticDelta::TruncatedGaussian {
                eps: cfg.model.eps,
                kappa_d: cfg.model.kappa_d,
            };
        }
        s.grid = grid;
        s.n_steps = steps;
        s.snapshot_stride = steps.max(1);
        s.evaluator = evaluator;
        Ok(s)
    };

    // matrix form: fft and compact evaluators over the n_x ladder
    for &n_x in &cfg.bench.nx_ladder {
        for (tag, evaluator) in [(1.0, Evaluator::Fft), (1.5, Evaluator::Compact)] {
            let grid = Grid::new(n_x, cfg.grid.n_xi, cfg.grid.l_x, cfg.grid.l_xi)?;
            let setup = setup_for(grid, evaluator)?;
            let start = Instant::now();
            let record = stepper::run(&setup)?;
            let wall_ms = start.elapsed().as_secs_f64() * 1e3;
            rungs.push(Rung {
                alg: tag,
                n_x,
                n_xi: cfg.grid.n_xi,
                record,
                wall_ms,
                values: matrix_form_value_count(n_x, cfg.grid.n_xi),
            });
        }
    }

    // vector form over the paired ladder, capped
    for &n_x in &cfg.bench.alg2_nx_ladder {
        let n_xi = n_x + 1;
        if n_x * n_xi > cfg.bench.cell_cap {
            eprintln!(
                "bench: skipping vector-form rung {n_x}x{n_xi} (exceeds cell cap {})",
                cfg.bench.cell_cap
            );
            continue;
        }
        let grid = Grid::new(n_x, n_xi, cfg.grid.l_x, cfg.grid.l_xi)?;
        let setup = setup_for(grid, Evaluator::Direct)?;
        let start = Instant::now();
        let record = run_reference(&setup, cfg.bench.cell_cap)?;
        let wall_ms = start.elapsed().as_secs_f64() * 1e3;
        rungs.push(Rung {
            alg: 2.0,
            n_x,
            n_xi,
            record,
            wall_ms,
            values: vector_form_value_count(n_x, n_xi),
        });
    }

    let mut rows = Vec::new();
    for r in &rungs {
        let c = &r.record.counters;
        println!(
            "alg {:.1} {:>5}x{:<5}: init {:>12} flops, {:>14.3e} flops/step, {:>8.3} ms/step, {:>10} values",
            r.alg,
            r.n_x,
            r.n_xi,
            c.flops_init,
            c.flops_per_step(),
            r.wall_ms / steps.max(1) as f64,
            r.values
        );
        rows.push(vec![
            r.alg,
            r.n_x as f64,
            r.n_xi as f64,
            c.flops_init as f64,
            c.flops_per_step(),
            c.linear_solve_count as f64 / steps.max(1) as f64,
            c.fft_count as f64 / steps.max(1) as f64,
            r.wall_ms / steps.max(1) as f64,
            r.values as f64,
        ]);
    }
    write_csv(
        &out_dir.join("bench.csv"),
        "alg,n_x,n_xi,flops_init,flops_per_step,solves_per_step,ffts_per_step,wall_ms_per_step,value_count",
        &rows,
    )?;

    // scaling exponents from log-log fits of flops/step
    let fit = |tag: f64, x: fn(&Rung) -> f64| -> Option<f64> {
        let pts: Vec<(f64, f64)> = rungs
            .iter()
            .filter(|r| r.alg == tag)
            .map(|r| (x(r), r.record.counters.flops_per_step()))
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let n = pts.len() as f64;
        let xm = pts.iter().map(|p| p.0.ln()).sum::<f64>() / n;
        let ym = pts.iter().map(|p| p.1.ln()).sum::<f64>() / n;
        let (mut sxx, mut sxy) = (0.0, 0.0);
        for (x, y) in &pts {
            sxx += (x.ln() - xm) * (x.ln() - xm);
            sxy += (x.ln() - xm) * (y.ln() - ym);
        }
        Some(sxy / sxx)
    };
    if let Some(s) = fit(1.0, |r| r.n_x as f64) {
        println!("matrix form (fft): flops/step ~ n_x^{s:.3} at fixed n_xi");
    }
    if let Some(s) = fit(1.5, |r| r.n_x as f64) {
        println!("matrix form (compact): flops/step ~ n_x^{s:.3} at fixed n_xi");
    }
    if let Some(s) = fit(2.0, |r| (r.n_x * r.n_xi) as f64) {
        println!("vector form (direct): flops/step ~ (n_x n_xi)^{s:.3}");
    }

    // working-set comparison at the largest vector-form rung
    if let Some(r2) = rungs.iter().rev().find(|r| r.alg == 2.0) {
        let v1 = matrix_form_value_count(r2.n_x, r2.n_xi);
        let ratio = r2.values as f64 / v1 as f64;
        println!(
            "working set at {}x{}: vector form {} values vs matrix form {v1} values (ratio {ratio:.3}, limit 7/4)",
            r2.n_x, r2.n_xi, r2.values
        );
    }
    write_provenance(out_dir, cfg)?;
    Ok(())
}
