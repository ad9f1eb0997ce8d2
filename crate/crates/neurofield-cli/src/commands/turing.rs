use std::path::Path;

use neurofield::analysis::{static_turing_threshold, turing_experiment, TuringRunSettings};

use crate::config::RunConfig;
use crate::output::{write_csv, write_provenance};
use crate::CliResult;

/// Computes the static instability threshold from the configured kernel and
/// cable parameters, simulates the configured steepness values around it,
/// and writes `turing.csv` (beta, growth factor) and `dispersion.csv`
/// (p, ŵ(p)).
pub fn cmd_turing(cfg: &RunConfig, out_dir: &Path) -> CliResult<()> {
    let params = cfg.build_params()?;
    let kernel = cfg.build_kernel()?;
    let th = static_turing_threshold(&params, &kernel);
    println!(
        "threshold: p* = {:.6}, w_hat(p*) = {:.6}, critical slope {:.6}, critical beta {:.4}",
        th.p_star, th.w_hat_max, th.critical_slope, th.critical_beta
    );
    let in_bracket = (28.0..=30.0).contains(&th.critical_beta);
    println!(
        "note: critical beta {:.4} is {} the published onset bracket [28, 30] under the \
         configured leak rate (non-blocking; the bracket's normalisation is underdetermined)",
        th.critical_beta,
        if in_bracket { "inside" } else { "outside" }
    );

    let betas: Vec<f64> = if cfg.turing.beta_values.is_empty() {
        cfg.turing
            .beta_factors
            .iter()
            .map(|f| f * th.critical_beta)
            .collect()
    } else {
        cfg.turing.beta_values.clone()
    };
    let settings = TuringRunSettings {
        n_x: cfg.turing.n_x,
        n_xi: cfg.turing.n_xi,
        tau: cfg.turing.tau,
        n_steps: cfg.turing.n_steps,
        eps: cfg.turing.eps,
        amplitude: cfg.turing.amplitude,
    };
    let results = turing_experiment(&params, &kernel, &betas, &settings)?;
    let mut rows = Vec::new();
    for r in &results {
        println!(
            "beta = {:.4}: growth factor {:.4e} ({})",
            r.beta,
            r.growth_factor,
            if r.growth_factor > 1.0 { "growth" } else { "decay" }
        );
        rows.push(vec![r.beta, r.growth_factor]);
    }
    write_csv(&out_dir.join("turing.csv"), "beta,growth_factor", &rows)?;

    let p_max = if th.p_star > 0.0 { 4.0 * th.p_star } else { 4.0 };
    let disp_rows: Vec<Vec<f64>> = (0..=400)
        .map(|k| {
            let p = p_max * k as f64 / 400.0;
            vec![p, kernel.fourier(p)]
        })
        .collect();
    write_csv(&out_dir.join("dispersion.csv"), "p,w_hat", &disp_rows)?;
    write_provenance(out_dir, cfg)?;
    Ok(())
}
