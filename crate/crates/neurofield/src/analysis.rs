//! Semi-analytic validation layer.
//!
//! Two experiments have theory to compare against:
//!
//! **Travelling fronts.** With a Heaviside rate at threshold θ, an
//! exponential kernel `w(x) = (κ/2) e^{-|x|/2}` and point contacts, the
//! somatic trace supports a front `V(x, 0, t) = φ(x - v* t)` whose speed
//! solves the implicit equation
//!
//! ```text
//! κ exp(-ψ(v*/2, ν) ξ0) / (2 ψ(v*/2, ν) ν) = θ,   ψ(v, ν) = sqrt((γ+v)/ν),
//! ```
//!
//! where the halving of `v*` inside ψ is the kernel's decay rate (see
//! [`speed_residual`]).
//!
//! [`theoretical_wave_speed`] finds the root by bisection;
//! [`measure_wave_speed`] extracts the empirical speed from simulation
//! snapshots by tracking the rightmost θ-crossing of the somatic row and
//! fitting a line through the crossing positions.
//!
//! **Static Turing onset.** Linearising about the rest state `V = 0` gives
//! growth rates λ(p) from the dispersion relation
//!
//! ```text
//! 𝓔(λ, p) = 1 − S'(0) exp(-ψ(λ,ν) ξ0) / (2 ψ(λ,ν) ν) · ŵ(p) = 0,
//! ```
//!
//! so the rest state loses stability when `ŵ(p)` first touches
//! `w* = 2 ψ(0,ν) ν exp(ψ(0,ν) ξ0) / S'(0)` at the maximizer `p*` of `ŵ`.
//! [`static_turing_threshold`] locates `p*` and the critical rate slope;
//! [`turing_experiment`] runs the stepper just below and above the critical
//! steepness and reports amplitude growth factors.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::matrix::Mat;
use crate::model::{DendriticDelta, FiringRate, PhysicalParams, SomaticKernel};
use crate::stepper::{self, Evaluator, ForcingSpec, InitialCondition, RunRecord, SimSetup};

/// Bracket tolerance used by the bisection searches.
pub const ROOT_TOL: f64 = 1e-10;

/// `ψ(v, ν) = sqrt((γ + v)/ν)` on the real branch; requires `v > -γ`.
pub fn psi(v: f64, nu: f64, gamma: f64) -> Result<f64> {
    if v <= -gamma {
        return Err(Error::Domain(format!(
            "psi requires v > -gamma, got v = {v}, gamma = {gamma}"
        )));
    }
    Ok(((gamma + v) / nu).sqrt())
}

/// Principal-branch `ψ(λ, ν)` for complex growth rates.
pub fn psi_complex(lambda: Complex64, nu: f64, gamma: f64) -> Complex64 {
    ((lambda + gamma) / nu).sqrt()
}

/// Left-hand side of the implicit speed equation minus θ:
/// `κ exp(-ψ̃ ξ0)/(2 ψ̃ ν) − θ` with `ψ̃ = ψ(v/2, ν)`. Strictly decreasing
/// in `v`.
///
/// The `v/2` is the exponential kernel's decay rate at work: seen from the
/// frame moving with the front, the total input behind the interface is
/// `∫_{vτ}^∞ (κ/2) e^{-r/2} dr = κ e^{-vτ/2}`, so the cable attenuation is
/// evaluated at the rate `γ + v/2`. (Evaluating it at `γ + v` instead
/// returns half the front speed; direct simulations of this kernel
/// converge to the root of the form used here.)
pub fn speed_residual(
    v: f64,
    theta: f64,
    kappa: f64,
    xi_0: f64,
    gamma: f64,
    nu: f64,
) -> Result<f64> {
    let p = psi(0.5 * v, nu, gamma)?;
    Ok(kappa * (-p * xi_0).exp() / (2.0 * p * nu) - theta)
}

/// Root of the implicit speed equation, by bisection on
/// `[-γ + tol, v_max]` with `v_max` grown geometrically until the residual
/// changes sign (capped at 1e6).
pub fn theoretical_wave_speed(
    theta: f64,
    kappa: f64,
    xi_0: f64,
    gamma: f64,
    nu: f64,
    tol: f64,
) -> Result<f64> {
    const V_CAP: f64 = 1e6;
    let mut lo = -gamma + tol;
    if speed_residual(lo, theta, kappa, xi_0, gamma, nu)? < 0.0 {
        return Err(Error::NoRoot(format!(
            "residual already negative at v = {lo}; theta = {theta} too large"
        )));
    }
    // grow until the residual is strictly negative: the transfer term
    // underflows to exactly zero at very large v, which must not count as a
    // sign change when theta = 0
    let mut hi = lo.abs().max(1.0);
    while speed_residual(hi, theta, kappa, xi_0, gamma, nu)? >= 0.0 {
        hi *= 2.0;
        if hi > V_CAP {
            return Err(Error::NoRoot(format!(
                "no sign change on [{lo}, {V_CAP}]; theta = {theta} too small for the cap"
            )));
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if speed_residual(mid, theta, kappa, xi_0, gamma, nu)? >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Positions of the rightmost θ-crossing of the somatic row over time.
/// `None` entries mark snapshots without a crossing (front not yet formed,
/// or already gone).
#[derive(Debug, Clone)]
pub struct LevelSetTrace {
    pub times: Vec<f64>,
    pub positions: Vec<Option<f64>>,
}

/// Outcome of a speed measurement.
#[derive(Debug, Clone)]
pub struct SpeedMeasurement {
    /// Slope of the least-squares line through `(t, x_*(t))`.
    pub speed: f64,
    /// Root-mean-square residual of the fit, in space units.
    pub fit_residual: f64,
    /// Set when the residual exceeds one somatic spacing; usually means the
    /// window still contains the ignition transient.
    pub residual_warning: bool,
    /// The tracked level set, all snapshots.
    pub trace: LevelSetTrace,
    /// First-order difference quotients of consecutive crossing positions
    /// inside the fit window, for comparison with the fitted slope.
    pub pointwise_speeds: Vec<f64>,
}

/// Tracks the θ-level set of `V(x, ξ≈0, t)` on `x ∈ [0, L_x]` across the
/// snapshots of a run. Takes the dendritic row nearest `ξ = 0`; within each
/// snapshot scans node pairs for sign changes of `V − θ` and keeps the
/// rightmost crossing, located by linear interpolation.
pub fn track_level_set(record: &RunRecord, grid: &Grid, theta: f64) -> LevelSetTrace {
    let row = grid.nearest_xi_index(0.0);
    let mut times = Vec::with_capacity(record.snapshots.len());
    let mut positions = Vec::with_capacity(record.snapshots.len());
    for snap in &record.snapshots {
        times.push(snap.time);
        positions.push(rightmost_crossing(&snap.values, grid, row, theta));
    }
    LevelSetTrace { times, positions }
}

fn rightmost_crossing(values: &Mat, grid: &Grid, row: usize, theta: f64) -> Option<f64> {
    let mut best: Option<f64> = None;
    for j in 0..grid.n_x - 1 {
        let (xa, xb) = (grid.x_nodes[j], grid.x_nodes[j + 1]);
        if xb < 0.0 {
            continue;
        }
        let fa = values.at(row, j) - theta;
        let fb = values.at(row, j + 1) - theta;
        if fa == 0.0 {
            best = Some(xa);
        }
        if fb == 0.0 {
            best = Some(xb);
        } else if fa * fb < 0.0 {
            let x = xa + (xb - xa) * fa / (fa - fb);
            if x >= 0.0 {
                best = Some(x);
            }
        }
    }
    best
}

/// Fits a line to the level-set positions inside `window = (t0, t1)` and
/// returns its slope as the front speed.
pub fn measure_wave_speed(
    record: &RunRecord,
    grid: &Grid,
    theta: f64,
    window: (f64, f64),
) -> Result<SpeedMeasurement> {
    let trace = track_level_set(record, grid, theta);
    let mut ts = Vec::new();
    let mut xs = Vec::new();
    for (t, pos) in trace.times.iter().zip(&trace.positions) {
        if *t >= window.0 && *t <= window.1 {
            if let Some(x) = pos {
                ts.push(*t);
                xs.push(*x);
            }
        }
    }
    if ts.len() < 2 {
        return Err(Error::NoCrossing(format!(
            "{} usable crossings in the window [{}, {}]; front not formed or escaped",
            ts.len(),
            window.0,
            window.1
        )));
    }
    let n = ts.len() as f64;
    let tm = ts.iter().sum::<f64>() / n;
    let xm = xs.iter().sum::<f64>() / n;
    let mut stt = 0.0;
    let mut stx = 0.0;
    for (t, x) in ts.iter().zip(&xs) {
        stt += (t - tm) * (t - tm);
        stx += (t - tm) * (x - xm);
    }
    if stt == 0.0 {
        return Err(Error::NoCrossing(
            "degenerate fit window: all crossings at one time".into(),
        ));
    }
    let speed = stx / stt;
    let intercept = xm - speed * tm;
    let mut ss = 0.0;
    for (t, x) in ts.iter().zip(&xs) {
        let r = x - (intercept + speed * t);
        ss += r * r;
    }
    let fit_residual = (ss / n).sqrt();
    let pointwise_speeds = ts
        .windows(2)
        .zip(xs.windows(2))
        .map(|(tw, xw)| (xw[1] - xw[0]) / (tw[1] - tw[0]))
        .collect();
    Ok(SpeedMeasurement {
        speed,
        fit_residual,
        residual_warning: fit_residual > grid.h_x,
        trace,
        pointwise_speeds,
    })
}

/// Inputs of the dispersion relation.
#[derive(Debug, Clone)]
pub struct DispersionContext {
    pub params: PhysicalParams,
    pub kernel: SomaticKernel,
    /// `S'(0)` of the firing rate.
    pub slope0: f64,
}

/// `𝓔(λ, p) = 1 − S'(0) exp(-ψ(λ,ν) ξ0)/(2 ψ(λ,ν) ν) ŵ(p)`.
/// Real for real λ > -γ; requires `Re λ > -γ` to stay off the branch cut.
pub fn dispersion_value(ctx: &DispersionContext, lambda: Complex64, p: f64) -> Result<Complex64> {
    if lambda.re <= -ctx.params.gamma {
        return Err(Error::Domain(format!(
            "dispersion requires Re(lambda) > -gamma, got {} <= {}",
            lambda.re, -ctx.params.gamma
        )));
    }
    let ps = psi_complex(lambda, ctx.params.nu, ctx.params.gamma);
    let transfer = (-ps * ctx.params.xi_0).exp() / (2.0 * ps * ctx.params.nu);
    Ok(Complex64::new(1.0, 0.0) - ctx.slope0 * transfer * ctx.kernel.fourier(p))
}

/// Static instability threshold derived from the dispersion relation.
#[derive(Debug, Clone, Copy)]
pub struct TuringThreshold {
    /// `w_* · S'(0) = 2 ψ(0,ν) ν exp(ψ(0,ν) ξ0)`, the slope-independent part
    /// of the stability threshold.
    pub w_star_times_slope: f64,
    /// Maximizer of `ŵ`; zero when the transform peaks at the origin, in
    /// which case no patterned (nonzero-wavenumber) instability exists.
    pub p_star: f64,
    /// `ŵ(p_star)`.
    pub w_hat_max: f64,
    /// Critical rate slope `S'(0)` at which `𝓔(0, p_star) = 0`.
    pub critical_slope: f64,
    /// `β` realizing the critical slope for the shifted sigmoid (`S'(0)=β/4`).
    pub critical_beta: f64,
}

/// Locates the maximizer of `ŵ(p)` (log-spaced scan on (0, 50] bracketing a
/// golden-section refinement to 1e-10) and assembles the threshold data.
/// Returns `p_star = 0` when no interior maximum exceeds `ŵ(0)`.
pub fn static_turing_threshold(params: &PhysicalParams, kernel: &SomaticKernel) -> TuringThreshold {
    let what = |p: f64| kernel.fourier(p);
    let n_scan = 600;
    let (lo_exp, hi_exp) = (-4.0f64, 50f64.log10());
    let mut best_k = 0usize;
    let mut best_v = f64::NEG_INFINITY;
    let ps: Vec<f64> = (0..n_scan)
        .map(|k| 10f64.powf(lo_exp + (hi_exp - lo_exp) * k as f64 / (n_scan - 1) as f64))
        .collect();
    for (k, &p) in ps.iter().enumerate() {
        let v = what(p);
        if v > best_v {
            best_v = v;
            best_k = k;
        }
    }
    let p_star = if best_v <= what(0.0) {
        0.0
    } else {
        let a = if best_k == 0 { 0.0 } else { ps[best_k - 1] };
        let b = if best_k + 1 < ps.len() {
            ps[best_k + 1]
        } else {
            ps[best_k] * 2.0
        };
        golden_section_max(what, a, b, ROOT_TOL)
    };
    let w_hat_max = what(p_star);
    let psi0 = (params.gamma / params.nu).sqrt();
    let w_star_times_slope = 2.0 * psi0 * params.nu * (psi0 * params.xi_0).exp();
    let critical_slope = w_star_times_slope / w_hat_max;
    TuringThreshold {
        w_star_times_slope,
        p_star,
        w_hat_max,
        critical_slope,
        critical_beta: 4.0 * critical_slope,
    }
}

fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Stability predicate of the rest state: `ŵ(p) < w_*` for all `p`, checked
/// on a scan grid. `slope0` is `S'(0)` of the configured rate.
pub fn rest_state_stable(params: &PhysicalParams, kernel: &SomaticKernel, slope0: f64) -> bool {
    let th = static_turing_threshold(params, kernel);
    let w_star = th.w_star_times_slope / slope0;
    // the scan maximum is what the threshold search found
    th.w_hat_max < w_star && kernel.fourier(0.0) < w_star
}

/// Settings for the direct simulation of the Turing onset.
#[derive(Debug, Clone, Copy)]
pub struct TuringRunSettings {
    pub n_x: usize,
    pub n_xi: usize,
    pub tau: f64,
    pub n_steps: u64,
    /// Contact profile width used in the simulation.
    pub eps: f64,
    /// Perturbation amplitude of the cosine initial condition.
    pub amplitude: f64,
}

/// Growth factor of the somatic perturbation amplitude for one steepness.
#[derive(Debug, Clone, Copy)]
pub struct BetaGrowth {
    pub beta: f64,
    /// `max_t |V(ξ≈0)|` over the last quarter of the run divided by the same
    /// maximum over the first quarter. Above 1: growth.
    pub growth_factor: f64,
}

/// Perturbs the rest state with `V0 = amplitude·cos(p_star x)` on the domain
/// `[-4π/p_star, 4π/p_star] x [-π/p_star, π/p_star]` and measures amplitude
/// growth at `ξ = 0` for each steepness in `betas`. Requires a patterned
/// threshold (`p_star > 0`).
pub fn turing_experiment(
    params: &PhysicalParams,
    kernel: &SomaticKernel,
    betas: &[f64],
    settings: &TuringRunSettings,
) -> Result<Vec<BetaGrowth>> {
    let threshold = static_turing_threshold(params, kernel);
    if threshold.p_star <= 0.0 {
        return Err(Error::Validation(
            "turing experiment needs a kernel whose transform peaks away from p = 0".into(),
        ));
    }
    let p = threshold.p_star;
    let l_x = 4.0 * std::f64::consts::PI / p;
    let l_xi = std::f64::consts::PI / p;
    let grid = Grid::new(settings.n_x, settings.n_xi, l_x, l_xi)?;
    let trace_row = grid.nearest_xi_index(0.0);
    let params_run = PhysicalParams::new(params.gamma, params.nu, params.xi_0, settings.eps)?;
    let mut out = Vec::with_capacity(betas.len());
    for &beta in betas {
        let setup = SimSetup {
            grid: grid.clone(),
            params: params_run,
            kernel: *kernel,
            delta: DendriticDelta::Gaussian { eps: settings.eps },
            rate: FiringRate::ShiftedSigmoid { beta },
            forcing: ForcingSpec::Zero,
            ic: InitialCondition::CosineInX {
                amplitude: settings.amplitude,
                wavenumber: p,
            },
            tau: settings.tau,
            n_steps: settings.n_steps,
            snapshot_stride: settings.n_steps.max(1),
            evaluator: Evaluator::Fft,
            trace_row: Some(trace_row),
        };
        let record = stepper::run(&setup)?;
        let trace = record
            .row_max_trace
            .as_ref()
            .expect("trace_row was set");
        let q = trace.len() / 4;
        let first = trace[..q.max(1)].iter().cloned().fold(0.0, f64::max);
        let last = trace[trace.len() - q.max(1)..]
            .iter()
            .cloned()
            .fold(0.0, f64::max);
        out.push(BetaGrowth {
            beta,
            growth_factor: last / first,
        });
    }
    Ok(out)
}

/// Pairwise observed orders `log2(e_k / e_{k+1})` of an error ladder.
pub fn observed_orders(errors: &[f64]) -> Vec<f64> {
    errors
        .windows(2)
        .map(|w| (w[0] / w[1]).log2())
        .collect()
}

/// Least-squares slope of `log e` against `log h` over a refinement ladder.
pub fn log_log_slope(hs: &[f64], errors: &[f64]) -> f64 {
    assert_eq!(hs.len(), errors.len());
    let n = hs.len() as f64;
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let xm = xs.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - xm) * (x - xm);
        sxy += (x - xm) * (y - ym);
    }
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stepper::FieldState;

    // Fig-2-style parameters used throughout the front tests
    const GAMMA: f64 = 1.0;
    const NU: f64 = 0.4;
    const XI0: f64 = 1.0;
    const KAPPA: f64 = 3.0;

    fn theta_for_zero_speed() -> f64 {
        let p0 = (GAMMA / NU).sqrt();
        KAPPA * (-p0 * XI0).exp() / (2.0 * p0 * NU)
    }

    #[test]
    fn psi_values() {
        assert!((psi(0.0, 0.4, 1.0).unwrap() - 2.5f64.sqrt()).abs() < 1e-15);
        assert!((psi(0.0, 1.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((psi(3.0, 1.0, 1.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(psi(-1.0, 1.0, 1.0).is_err());
        assert!(psi(-1.5, 1.0, 1.0).is_err());
    }

    #[test]
    fn residual_vanishes_at_constructed_theta() {
        let theta = theta_for_zero_speed();
        // the constructed threshold is 0.4879568222502151
        assert!((theta - 0.4879568222502151).abs() < 1e-13);
        let r = speed_residual(0.0, theta, KAPPA, XI0, GAMMA, NU).unwrap();
        assert!(r.abs() < 1e-15);
        // and with the threshold rounded to 6 figures it is still small
        let r6 = speed_residual(0.0, 0.487957, KAPPA, XI0, GAMMA, NU).unwrap();
        assert!(r6.abs() < 1e-6);
    }

    #[test]
    fn residual_positive_for_zero_threshold() {
        for v in [-0.9, -0.5, 0.0, 1.0, 10.0, 1e4] {
            assert!(speed_residual(v, 0.0, KAPPA, XI0, GAMMA, NU).unwrap() > 0.0);
        }
    }

    #[test]
    fn residual_strictly_decreasing_in_v() {
        let mut prev = f64::INFINITY;
        let mut v = -0.95;
        while v < 20.0 {
            let r = speed_residual(v, 0.1, KAPPA, XI0, GAMMA, NU).unwrap();
            assert!(r < prev, "residual not decreasing at v = {v}");
            prev = r;
            v += 0.05;
        }
    }

    #[test]
    fn zero_speed_anchor() {
        let v = theoretical_wave_speed(theta_for_zero_speed(), KAPPA, XI0, GAMMA, NU, ROOT_TOL)
            .unwrap();
        assert!(v.abs() <= 1e-8, "v = {v:e}");
    }

    #[test]
    fn positive_speed_with_sign_check() {
        let theta = 0.01;
        let v = theoretical_wave_speed(theta, KAPPA, XI0, GAMMA, NU, ROOT_TOL).unwrap();
        assert!(v > 0.0);
        // frozen from an independent bisection of the closed-form residual
        assert!((v - 13.7492713544163).abs() < 1e-6, "v = {v}");
        let above = speed_residual(v + 1e-6, theta, KAPPA, XI0, GAMMA, NU).unwrap();
        let below = speed_residual(v - 1e-6, theta, KAPPA, XI0, GAMMA, NU).unwrap();
        assert!(below > 0.0 && above < 0.0);
    }

    #[test]
    fn speed_decreases_with_threshold() {
        let mut prev = f64::INFINITY;
        for k in 0..20 {
            let theta = 0.005 + 0.395 * k as f64 / 19.0;
            let v = theoretical_wave_speed(theta, KAPPA, XI0, GAMMA, NU, ROOT_TOL).unwrap();
            assert!(v < prev, "speed not decreasing at theta = {theta}");
            prev = v;
        }
    }

    #[test]
    fn no_root_reported_for_vanishing_threshold() {
        match theoretical_wave_speed(0.0, KAPPA, XI0, GAMMA, NU, ROOT_TOL) {
            Err(Error::NoRoot(msg)) => assert!(msg.contains("1000000")),
            other => panic!("expected NoRoot, got {other:?}"),
        }
    }

    fn synthetic_record(
        grid: &Grid,
        times: &[f64],
        profile: impl Fn(f64, f64) -> f64,
    ) -> RunRecord {
        let snapshots = times
            .iter()
            .map(|&t| FieldState {
                values: Mat::from_fn(grid.n_xi, grid.n_x, |_, j| profile(grid.x_nodes[j], t)),
                time: t,
            })
            .collect();
        RunRecord {
            snapshots,
            max_abs_trace: vec![],
            row_max_trace: None,
            counters: Default::default(),
            boundedness_bound: f64::INFINITY,
            warnings: vec![],
        }
    }

    #[test]
    fn manufactured_front_speed_recovered() {
        let grid = Grid::new(512, 3, 20.0, 1.0).unwrap();
        let v_true = 0.7;
        let times: Vec<f64> = (0..40).map(|k| k as f64 * 0.25).collect();
        // translating smooth front, high for x < front position
        let record = synthetic_record(&grid, &times, |x, t| {
            0.5 * (1.0 - ((x - 3.0 - v_true * t) / 0.8).tanh())
        });
        let m = measure_wave_speed(&record, &grid, 0.5, (0.0, 10.0)).unwrap();
        assert!((m.speed - v_true).abs() < 1e-3, "speed {}", m.speed);
        assert!(!m.residual_warning);
        // pointwise difference quotients agree with the fitted slope
        for s in &m.pointwise_speeds {
            assert!((s - v_true).abs() < 0.05);
        }
    }

    #[test]
    fn stationary_profile_measures_zero_speed() {
        let grid = Grid::new(256, 3, 10.0, 1.0).unwrap();
        let times: Vec<f64> = (0..20).map(|k| k as f64 * 0.5).collect();
        let record = synthetic_record(&grid, &times, |x, _| {
            0.5 * (1.0 - ((x - 4.0) / 0.8).tanh())
        });
        let m = measure_wave_speed(&record, &grid, 0.5, (0.0, 10.0)).unwrap();
        assert!(m.speed.abs() < 1e-10);
    }

    #[test]
    fn missing_front_is_an_error() {
        let grid = Grid::new(64, 3, 10.0, 1.0).unwrap();
        let times: Vec<f64> = (0..5).map(|k| k as f64).collect();
        let record = synthetic_record(&grid, &times, |_, _| 0.0);
        assert!(matches!(
            measure_wave_speed(&record, &grid, 0.5, (0.0, 10.0)),
            Err(Error::NoCrossing(_))
        ));
    }

    fn fig4_kernel() -> SomaticKernel {
        SomaticKernel::MexicanHat {
            a1: 1.0,
            b1: 1.0,
            a2: 0.25,
            b2: 0.5,
        }
    }

    fn fig4_params() -> PhysicalParams {
        PhysicalParams::new(1.0, 6.0, 1.0, 0.05).unwrap()
    }

    #[test]
    fn dispersion_real_on_real_axis_and_conjugate_symmetric() {
        let ctx = DispersionContext {
            params: fig4_params(),
            kernel: fig4_kernel(),
            slope0: 7.0,
        };
        for lam in [-0.5, 0.0, 0.3, 2.0] {
            let e = dispersion_value(&ctx, Complex64::new(lam, 0.0), 0.7).unwrap();
            assert!(e.im.abs() < 1e-14, "lambda {lam}: im {}", e.im);
        }
        for (re, im, p) in [(0.2, 0.9, 0.4), (-0.3, 2.0, 1.3), (1.0, -0.5, 0.1)] {
            let l = Complex64::new(re, im);
            let a = dispersion_value(&ctx, l, p).unwrap();
            let b = dispersion_value(&ctx, l.conj(), p).unwrap();
            assert!((a.conj() - b).norm() < 1e-13);
        }
        assert!(dispersion_value(&ctx, Complex64::new(-1.0, 0.0), 0.4).is_err());
    }

    #[test]
    fn dispersion_is_one_for_flat_rate() {
        let ctx = DispersionContext {
            params: fig4_params(),
            kernel: fig4_kernel(),
            slope0: 0.0,
        };
        let e = dispersion_value(&ctx, Complex64::new(0.1, 0.2), 1.0).unwrap();
        assert!((e - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn threshold_for_mexican_hat() {
        let th = static_turing_threshold(&fig4_params(), &fig4_kernel());
        // frozen from an independent maximization of the closed-form transform
        assert!((th.p_star - 0.400235705364829).abs() < 1e-7, "p* {}", th.p_star);
        assert!((th.w_hat_max - 1.11438191683587).abs() < 1e-10);
        assert!((th.critical_beta - 26.4503568636372).abs() < 1e-8);
        // at the threshold the dispersion root sits at lambda = 0, p = p*:
        let ctx = DispersionContext {
            params: fig4_params(),
            kernel: fig4_kernel(),
            slope0: th.critical_slope,
        };
        let e0 = dispersion_value(&ctx, Complex64::new(0.0, 0.0), th.p_star).unwrap();
        assert!(e0.norm() < 1e-8, "E(0, p*) = {e0}");
        // and p* is a stationary point of E(0, .)
        let d = 1e-5;
        let ep = dispersion_value(&ctx, Complex64::new(0.0, 0.0), th.p_star + d).unwrap();
        let em = dispersion_value(&ctx, Complex64::new(0.0, 0.0), th.p_star - d).unwrap();
        assert!(((ep - em).norm() / (2.0 * d)) < 1e-6);
    }

    #[test]
    fn exp_decay_kernel_has_no_patterned_instability() {
        let params = PhysicalParams::new(1.0, 0.4, 1.0, 0.05).unwrap();
        let th = static_turing_threshold(&params, &SomaticKernel::ExpDecay { kappa: 3.0 });
        assert_eq!(th.p_star, 0.0);
        assert!((th.w_hat_max - 6.0).abs() < 1e-12);
    }

    #[test]
    fn stability_predicate_flips_at_critical_slope() {
        let params = fig4_params();
        let kernel = fig4_kernel();
        let th = static_turing_threshold(&params, &kernel);
        assert!(rest_state_stable(&params, &kernel, th.critical_slope * 0.95));
        assert!(!rest_state_stable(&params, &kernel, th.critical_slope * 1.05));
    }

    #[test]
    fn turing_experiment_smoke() {
        // tiny grid, short run; directions only
        let params = fig4_params();
        let kernel = fig4_kernel();
        let th = static_turing_threshold(&params, &kernel);
        let settings = TuringRunSettings {
            n_x: 32,
            n_xi: 65,
            tau: 0.05,
            n_steps: 400,
            eps: 0.4,
            amplitude: 0.01,
        };
        let out = turing_experiment(
            &params,
            &kernel,
            &[0.6 * th.critical_beta, 1.6 * th.critical_beta],
            &settings,
        )
        .unwrap();
        assert!(out[0].growth_factor < 1.0, "decay case: {:?}", out[0]);
        assert!(out[1].growth_factor > 1.0, "growth case: {:?}", out[1]);
    }

    #[test]
    fn order_helpers() {
        let errors = [0.4, 0.1, 0.025];
        let orders = observed_orders(&errors);
        assert!((orders[0] - 2.0).abs() < 1e-12);
        assert!((orders[1] - 2.0).abs() < 1e-12);
        let hs = [0.4, 0.2, 0.1];
        assert!((log_log_slope(&hs, &errors) - 2.0).abs() < 1e-12);
    }
}
