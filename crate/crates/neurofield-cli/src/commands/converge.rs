use std::path::Path;

use neurofield::analysis::{
    log_log_slope, measure_wave_speed, observed_orders, theoretical_wave_speed, ROOT_TOL,
};
use neurofield::matrix::restrict_to_coarse;
use neurofield::model::{DendriticDelta, FiringRate, SomaticKernel};
use neurofield::stepper::{self, SimSetup};
use neurofield::{Grid, Mat};

use crate::config::{ConvergeAxis, RunConfig};
use crate::output::{write_csv, write_provenance};
use crate::{CliError, CliResult};

fn final_field(setup: &SimSetup) -> CliResult<Mat> {
    let record = stepper::run(setup)?;
    Ok(record.snapshots.last().unwrap().values.clone())
}

/// Self-convergence and accuracy reports along one refinement axis.
///
/// - `tau`: runs at `tau, tau/2, tau/4, ...` ([run].tau is the base, the
///   ladder has [converge].levels rungs) against a reference whose step is
///   one eighth of the finest rung; reports errors at `t_final` and observed
///   orders.
/// - `h`: paired (h_x, h_xi) halvings starting from [grid] as the coarsest
///   level, against a reference 4x finer than the finest rung, at the fixed
///   [run].tau.
/// - `eps` / `beta`: wave-speed error against the implicit-equation root
///   across the configured levels (decay expected as the mollifiers sharpen).
pub fn cmd_converge(cfg: &RunConfig, out_dir: &Path) -> CliResult<()> {
    match cfg.converge.axis {
        ConvergeAxis::Tau => tau_axis(cfg, out_dir),
        ConvergeAxis::H => h_axis(cfg, out_dir),
        ConvergeAxis::Eps => mollifier_axis(cfg, out_dir, MollifierAxis::Eps),
        ConvergeAxis::Beta => mollifier_axis(cfg, out_dir, MollifierAxis::Beta),
    }?;
    write_provenance(out_dir, cfg)?;
    Ok(())
}

fn tau_axis(cfg: &RunConfig, out_dir: &Path) -> CliResult<()> {
    let t_final = cfg.converge.t_final;
    let base = cfg.build_sim_setup()?;
    let taus: Vec<f64> = (0..cfg.converge.levels)
        .map(|k| cfg.run.tau / (1 << k) as f64)
        .collect();
    let tau_ref = taus.last().unwrap() / 8.0;
    let run_at = |tau: f64| -> CliResult<Mat> {
        let mut s = base.clone();
        s.tau = tau;
        s.n_steps = (t_final / tau).round() as u64;
        s.snapshot_stride = s.n_steps.max(1);
        final_field(&s)
    };
    let reference = run_at(tau_ref)?;
    let mut errors = Vec::new();
    for &tau in &taus {
        errors.push(run_at(tau)?.max_abs_diff(&reference));
    }
    report_orders(out_dir, "tau", &taus, &errors, 1.0)
}

fn h_axis(cfg: &RunConfig, out_dir: &Path) -> CliResult<()> {
    let t_final = cfg.converge.t_final;
    let base = cfg.build_sim_setup()?;
    let n_steps = (t_final / cfg.run.tau).round() as u64;
    let levels = cfg.converge.levels;
    let run_at = |factor: usize| -> CliResult<Mat> {
        let grid = Grid::new(
            cfg.grid.n_x * factor,
            (cfg.grid.n_xi - 1) * factor + 1,
            cfg.grid.l_x,
            cfg.grid.l_xi,
        )?;
        let mut s = base.clone();
        s.grid = grid;
        s.n_steps = n_steps;
        s.snapshot_stride = n_steps.max(1);
        final_field(&s)
    };
    let ref_factor = (1 << (levels - 1)) * 4;
    let reference = run_at(ref_factor)?;
    let mut hs = Vec::new();
    let mut errors = Vec::new();
    for k in 0..levels {
        let factor = 1 << k;
        let field = run_at(factor)?;
        let restricted = restrict_to_coarse(&reference, ref_factor / factor);
        hs.push(2.0 * cfg.grid.l_x / (cfg.grid.n_x * factor) as f64);
        errors.push(field.max_abs_diff(&restricted));
    }
    report_orders(out_dir, "h", &hs, &errors, 2.0)
}

fn report_orders(
    out_dir: &Path,
    axis: &str,
    levels: &[f64],
    errors: &[f64],
    expected: f64,
) -> CliResult<()> {
    let orders = observed_orders(errors);
    let slope = log_log_slope(levels, errors);
    let mut rows = Vec::new();
    for (k, (&lv, &e)) in levels.iter().zip(errors).enumerate() {
        let order = if k == 0 { f64::NAN } else { orders[k - 1] };
        println!("{axis} = {lv:.6e}: error {e:.6e}, pairwise order {order:.4}");
        rows.push(vec![lv, e, order]);
    }
    println!("observed order (log-log fit): {slope:.4}, expected about {expected}");
    write_csv(
        &out_dir.join(format!("converge_{axis}.csv")),
        &format!("{axis},error,pairwise_order"),
        &rows,
    )?;
    Ok(())
}

enum MollifierAxis {
    Eps,
    Beta,
}

fn mollifier_axis(cfg: &RunConfig, out_dir: &Path, which: MollifierAxis) -> CliResult<()> {
    let kappa = match cfg.build_kernel()? {
        SomaticKernel::ExpDecay { kappa } => kappa,
        other => {
            return Err(CliError::Core(neurofield::Error::Validation(format!(
                "speed-error convergence needs the exponential kernel, got {other:?}"
            ))))
        }
    };
    let theta = cfg.model.theta;
    let v_theory = theoretical_wave_speed(
        theta,
        kappa,
        cfg.model.xi_0,
        cfg.model.gamma,
        cfg.model.nu,
        ROOT_TOL,
    )?;
    let (name, levels) = match which {
        MollifierAxis::Eps => ("eps", cfg.converge.eps_levels.clone()),
        MollifierAxis::Beta => ("beta", cfg.converge.beta_levels.clone()),
    };
    if levels.is_empty() {
        return Err(CliError::Config {
            line: None,
            message: format!("converge.{name}_levels must not be empty for axis = {name}"),
        });
    }
    let window = (cfg.wave_speed.fit_t_start, cfg.wave_speed.fit_t_end);
    let mut rows = Vec::new();
    for &level in &levels {
        let mut setup = cfg.build_sim_setup()?;
        match which {
            MollifierAxis::Eps => {
                setup.params =
                    neurofield::PhysicalParams::new(cfg.model.gamma, cfg.model.nu, cfg.model.xi_0, level)?;
                setup.delta = DendriticDelta::Gaussian { eps: level };
            }
            MollifierAxis::Beta => {
                setup.rate = FiringRate::Sigmoid { beta: level, theta };
            }
        }
        let record = stepper::run(&setup)?;
        super::print_warnings(&record);
        let m = measure_wave_speed(&record, &setup.grid, theta, window)?;
        let error = (m.speed - v_theory).abs();
        println!(
            "{name} = {level}: measured {:.5}, theory {v_theory:.5}, speed error {error:.5e}",
            m.speed
        );
        rows.push(vec![level, m.speed, v_theory, error]);
    }
    write_csv(
        &out_dir.join(format!("converge_{name}.csv")),
        &format!("{name},v_measured,v_theory,speed_error"),
        &rows,
    )?;
    Ok(())
}
