use std::path::Path;

use neurofield::analysis::{measure_wave_speed, theoretical_wave_speed, ROOT_TOL};
use neurofield::model::{FiringRate, SomaticKernel};
use neurofield::stepper;

use crate::config::RunConfig;
use crate::output::{write_csv, write_provenance};
use crate::{CliError, CliResult};

/// Runs one simulation per threshold level, measures the front speed from
/// the level set of the somatic row, and compares with the implicit-equation
/// root. Writes `wave_speed.csv` plus one `levelset_<k>.csv` per level with
/// the tracked positions and pointwise difference-quotient speeds.
pub fn cmd_wave_speed(cfg: &RunConfig, out_dir: &Path) -> CliResult<()> {
    let kappa = match cfg.build_kernel()? {
        SomaticKernel::ExpDecay { kappa } => kappa,
        other => {
            return Err(CliError::Core(neurofield::Error::Validation(format!(
                "the wave-speed experiment needs the exponential kernel, got {other:?}"
            ))))
        }
    };
    let window = (cfg.wave_speed.fit_t_start, cfg.wave_speed.fit_t_end);
    let mut rows = Vec::new();
    for (k, &theta) in cfg.wave_speed.theta_levels.iter().enumerate() {
        let mut setup = cfg.build_sim_setup()?;
        setup.rate = match setup.rate {
            FiringRate::Sigmoid { beta, .. } => FiringRate::Sigmoid { beta, theta },
            FiringRate::Heaviside { .. } => FiringRate::Heaviside { theta },
            FiringRate::ShiftedSigmoid { .. } => {
                return Err(CliError::Core(neurofield::Error::Validation(
                    "the wave-speed experiment needs a thresholded firing rate".into(),
                )))
            }
        };
        let record = stepper::run(&setup)?;
        super::print_warnings(&record);
        let m = measure_wave_speed(&record, &setup.grid, theta, window)?;
        if m.residual_warning {
            eprintln!(
                "warning: theta = {theta}: fit residual {:.3e} exceeds one somatic spacing; \
                 the window may include the ignition transient",
                m.fit_residual
            );
        }
        let v_theory = theoretical_wave_speed(
            theta,
            kappa,
            cfg.model.xi_0,
            cfg.model.gamma,
            cfg.model.nu,
            ROOT_TOL,
        )?;
        let rel_err = (m.speed - v_theory).abs() / v_theory.abs().max(1e-300);
        println!(
            "theta = {theta}: measured {:.5}, theory {:.5}, rel err {:.3}%",
            m.speed,
            v_theory,
            100.0 * rel_err
        );
        rows.push(vec![theta, v_theory, m.speed, rel_err, m.fit_residual]);

        let mut ls_rows = Vec::new();
        let mut prev: Option<(f64, f64)> = None;
        for (t, pos) in m.trace.times.iter().zip(&m.trace.positions) {
            if let Some(x) = pos {
                let dq = match prev {
                    Some((tp, xp)) if *t > tp => (x - xp) / (t - tp),
                    _ => f64::NAN,
                };
                ls_rows.push(vec![*t, *x, dq]);
                prev = Some((*t, *x));
            }
        }
        write_csv(
            &out_dir.join(format!("levelset_{k}.csv")),
            "time,x_star,pointwise_speed",
            &ls_rows,
        )?;
    }
    write_csv(
        &out_dir.join("wave_speed.csv"),
        "theta,v_theory,v_measured,rel_err,fit_residual",
        &rows,
    )?;
    write_provenance(out_dir, cfg)?;
    Ok(())
}
