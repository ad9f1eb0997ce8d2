//! Run configuration: a flat `key = value` format with `#` comments and
//! `[section]` headers. Every key is validated against the preconditions of
//! the module that consumes it, and unknown keys are errors. The resolved
//! configuration (defaults included) is written back next to the outputs so
//! a run is reproducible from a single file; the writer and parser
//! round-trip exactly.

use std::path::Path;

use neurofield::stepper::Evaluator;
use neurofield::{
    DendriticDelta, FiringRate, ForcingSpec, Grid, InitialCondition, PhysicalParams, SimSetup,
    SomaticKernel,
};

use crate::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub struct GridSection {
    pub n_x: usize,
    pub n_xi: usize,
    pub l_x: f64,
    pub l_xi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateKind {
    Sigmoid,
    ShiftedSigmoid,
    Heaviside,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    ExpDecay,
    MexicanHat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaKind {
    Gaussian,
    TruncatedGaussian,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSection {
    pub gamma: f64,
    pub nu: f64,
    pub xi_0: f64,
    pub eps: f64,
    pub firing_rate: RateKind,
    pub beta: f64,
    pub theta: f64,
    pub kernel: KernelKind,
    pub kappa: f64,
    pub a_1: f64,
    pub b_1: f64,
    pub a_2: f64,
    pub b_2: f64,
    pub delta: DeltaKind,
    pub kappa_d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalKind {
    Fft,
    Direct,
    Compact,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSection {
    pub experiment: String,
    pub tau: f64,
    pub n_steps: u64,
    pub snapshot_stride: u64,
    pub evaluator: EvalKind,
    /// Reserved for randomized inputs; all shipped experiments are
    /// deterministic, the key is kept for provenance.
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitKind {
    Zero,
    Constant,
    CosineX,
    GaussianBump,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitSection {
    pub kind: InitKind,
    pub value: f64,
    pub amplitude: f64,
    pub wavenumber: f64,
    pub center_x: f64,
    pub center_xi: f64,
    pub width_x: f64,
    pub width_xi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForcingKind {
    Zero,
    GaussianPulse,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForcingSection {
    pub kind: ForcingKind,
    pub amplitude: f64,
    pub center_x: f64,
    pub center_xi: f64,
    pub width_x: f64,
    pub width_xi: f64,
    pub t_on: f64,
    pub t_off: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSection {
    pub dir: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveSpeedSection {
    pub theta_levels: Vec<f64>,
    pub fit_t_start: f64,
    pub fit_t_end: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuringSection {
    /// Absolute steepness values to simulate; when empty, `beta_factors`
    /// are applied to the computed critical steepness.
    pub beta_values: Vec<f64>,
    pub beta_factors: Vec<f64>,
    pub n_x: usize,
    pub n_xi: usize,
    pub tau: f64,
    pub n_steps: u64,
    pub eps: f64,
    pub amplitude: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvergeAxis {
    Tau,
    H,
    Eps,
    Beta,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergeSection {
    pub axis: ConvergeAxis,
    /// Number of ladder levels (halvings / doublings from the base).
    pub levels: usize,
    pub t_final: f64,
    pub eps_levels: Vec<f64>,
    pub beta_levels: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchSection {
    /// Somatic sizes of the matrix-form ladder (dendritic size from [grid]).
    pub nx_ladder: Vec<usize>,
    /// Somatic sizes of the vector-form ladder; paired with `n_xi = n_x + 1`.
    pub alg2_nx_ladder: Vec<usize>,
    pub steps: u64,
    pub cell_cap: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub grid: GridSection,
    pub model: ModelSection,
    pub run: RunSection,
    pub init: InitSection,
    pub forcing: ForcingSection,
    pub output: OutputSection,
    pub wave_speed: WaveSpeedSection,
    pub turing: TuringSection,
    pub converge: ConvergeSection,
    pub bench: BenchSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            grid: GridSection {
                n_x: 128,
                n_xi: 65,
                l_x: 10.0,
                l_xi: 2.0,
            },
            model: ModelSection {
                gamma: 1.0,
                nu: 0.4,
                xi_0: 1.0,
                eps: 0.1,
                firing_rate: RateKind::Sigmoid,
                beta: 20.0,
                theta: 0.1,
                kernel: KernelKind::ExpDecay,
                kappa: 3.0,
                a_1: 1.0,
                b_1: 1.0,
                a_2: 0.25,
                b_2: 0.5,
                delta: DeltaKind::Gaussian,
                kappa_d: 1.0,
            },
            run: RunSection {
                experiment: "run".into(),
                tau: 0.05,
                n_steps: 200,
                snapshot_stride: 10,
                evaluator: EvalKind::Fft,
                seed: 1,
            },
            init: InitSection {
                kind: InitKind::GaussianBump,
                value: 0.0,
                amplitude: 1.0,
                wavenumber: 1.0,
                center_x: 0.0,
                center_xi: 0.0,
                width_x: 2.0,
                width_xi: 1.0,
            },
            forcing: ForcingSection {
                kind: ForcingKind::Zero,
                amplitude: 0.0,
                center_x: 0.0,
                center_xi: 0.0,
                width_x: 1.0,
                width_xi: 1.0,
                t_on: 0.0,
                t_off: 0.0,
            },
            output: OutputSection { dir: "out".into() },
            wave_speed: WaveSpeedSection {
                theta_levels: vec![0.01, 0.05, 0.1, 0.2],
                fit_t_start: 3.0,
                fit_t_end: 8.0,
            },
            turing: TuringSection {
                beta_values: vec![],
                beta_factors: vec![0.9, 1.1],
                n_x: 128,
                n_xi: 513,
                tau: 0.01,
                n_steps: 4000,
                eps: 0.05,
                amplitude: 0.01,
            },
            converge: ConvergeSection {
                axis: ConvergeAxis::Tau,
                levels: 3,
                t_final: 2.0,
                eps_levels: vec![0.08, 0.04, 0.02],
                beta_levels: vec![50.0, 100.0, 200.0],
            },
            bench: BenchSection {
                nx_ladder: vec![256, 512, 1024],
                alg2_nx_ladder: vec![16, 32, 64],
                steps: 5,
                cell_cap: 8192,
            },
        }
    }
}

fn err(line: usize, message: impl Into<String>) -> CliError {
    CliError::Config {
        line: Some(line),
        message: message.into(),
    }
}

fn parse_f64(line: usize, key: &str, value: &str) -> CliResult<f64> {
    value
        .parse::<f64>()
        .map_err(|_| err(line, format!("key '{key}': '{value}' is not a number")))
}

fn parse_usize(line: usize, key: &str, value: &str) -> CliResult<usize> {
    value
        .parse::<usize>()
        .map_err(|_| err(line, format!("key '{key}': '{value}' is not a non-negative integer")))
}

fn parse_u64(line: usize, key: &str, value: &str) -> CliResult<u64> {
    value
        .parse::<u64>()
        .map_err(|_| err(line, format!("key '{key}': '{value}' is not a non-negative integer")))
}

fn parse_f64_list(line: usize, key: &str, value: &str) -> CliResult<Vec<f64>> {
    if value.trim().is_empty() {
        return Ok(vec![]);
    }
    value
        .split(',')
        .map(|v| parse_f64(line, key, v.trim()))
        .collect()
}

fn parse_usize_list(line: usize, key: &str, value: &str) -> CliResult<Vec<usize>> {
    if value.trim().is_empty() {
        return Ok(vec![]);
    }
    value
        .split(',')
        .map(|v| parse_usize(line, key, v.trim()))
        .collect()
}

/// Parses and validates a config file.
pub fn parse_config_file(path: &Path) -> CliResult<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config {
        line: None,
        message: format!("cannot read '{}': {e}", path.display()),
    })?;
    parse_config(&text)
}

/// Parses and validates config text.
pub fn parse_config(text: &str) -> CliResult<RunConfig> {
    let mut cfg = RunConfig::default();
    let mut section = String::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            if !line.ends_with(']') {
                return Err(err(line_no, format!("malformed section header '{line}'")));
            }
            let name = line[1..line.len() - 1].trim();
            match name {
                "grid" | "model" | "run" | "init" | "forcing" | "output" | "wave_speed"
                | "turing" | "converge" | "bench" => section = name.to_string(),
                other => return Err(err(line_no, format!("unknown section '[{other}]'"))),
            }
            continue;
        }
        let Some(eq) = line.find('=') else {
            return Err(err(line_no, format!("expected 'key = value', got '{line}'")));
        };
        let key = line[..eq].trim();
        let value = line[eq + 1..].trim();
        if section.is_empty() {
            return Err(err(
                line_no,
                format!("key '{key}' appears before any [section] header"),
            ));
        }
        apply_key(&mut cfg, &section, key, value, line_no)?;
    }
    validate(&cfg)?;
    Ok(cfg)
}

fn apply_key(
    cfg: &mut RunConfig,
    section: &str,
    key: &str,
    value: &str,
    line: usize,
) -> CliResult<()> {
    let unknown = || {
        Err(err(
            line,
            format!("unknown key '{key}' in section [{section}]"),
        ))
    };
    match section {
        "grid" => match key {
            "n_x" => cfg.grid.n_x = parse_usize(line, key, value)?,
            "n_xi" => cfg.grid.n_xi = parse_usize(line, key, value)?,
            "l_x" => cfg.grid.l_x = parse_f64(line, key, value)?,
            "l_xi" => cfg.grid.l_xi = parse_f64(line, key, value)?,
            _ => return unknown(),
        },
        "model" => match key {
            "gamma" => cfg.model.gamma = parse_f64(line, key, value)?,
            "nu" => cfg.model.nu = parse_f64(line, key, value)?,
            "xi_0" => cfg.model.xi_0 = parse_f64(line, key, value)?,
            "eps" => cfg.model.eps = parse_f64(line, key, value)?,
            "firing_rate" => {
                cfg.model.firing_rate = match value {
                    "sigmoid" => RateKind::Sigmoid,
                    "shifted_sigmoid" => RateKind::ShiftedSigmoid,
                    "heaviside" => RateKind::Heaviside,
                    _ => {
                        return Err(err(
                            line,
                            format!(
                                "firing_rate must be sigmoid | shifted_sigmoid | heaviside, got '{value}'"
                            ),
                        ))
                    }
                }
            }
            "beta" => cfg.model.beta = parse_f64(line, key, value)?,
            "theta" => cfg.model.theta = parse_f64(line, key, value)?,
            "kernel" => {
                cfg.model.kernel = match value {
                    "exp_decay" => KernelKind::ExpDecay,
                    "mexican_hat" => KernelKind::MexicanHat,
                    _ => {
                        return Err(err(
                            line,
                            format!("kernel must be exp_decay | mexican_hat, got '{value}'"),
                        ))
                    }
                }
            }
            "kappa" => cfg.model.kappa = parse_f64(line, key, value)?,
            "a_1" => cfg.model.a_1 = parse_f64(line, key, value)?,
            "b_1" => cfg.model.b_1 = parse_f64(line, key, value)?,
            "a_2" => cfg.model.a_2 = parse_f64(line, key, value)?,
            "b_2" => cfg.model.b_2 = parse_f64(line, key, value)?,
            "delta" => {
                cfg.model.delta = match value {
                    "gaussian" => DeltaKind::Gaussian,
                    "truncated_gaussian" => DeltaKind::TruncatedGaussian,
                    _ => {
                        return Err(err(
                            line,
                            format!("delta must be gaussian | truncated_gaussian, got '{value}'"),
                        ))
                    }
                }
            }
            "kappa_d" => cfg.model.kappa_d = parse_f64(line, key, value)?,
            _ => return unknown(),
        },
        "run" => match key {
            "experiment" => cfg.run.experiment = value.to_string(),
            "tau" => cfg.run.tau = parse_f64(line, key, value)?,
            "n_steps" => cfg.run.n_steps = parse_u64(line, key, value)?,
            "snapshot_stride" => cfg.run.snapshot_stride = parse_u64(line, key, value)?,
            "evaluator" => {
                cfg.run.evaluator = match value {
                    "fft" => EvalKind::Fft,
                    "direct" => EvalKind::Direct,
                    "compact" => EvalKind::Compact,
                    _ => {
                        return Err(err(
                            line,
                            format!("evaluator must be fft | direct | compact, got '{value}'"),
                        ))
                    }
                }
            }
            "seed" => cfg.run.seed = parse_u64(line, key, value)?,
            _ => return unknown(),
        },
        "init" => match key {
            "kind" => {
                cfg.init.kind = match value {
                    "zero" => InitKind::Zero,
                    "constant" => InitKind::Constant,
                    "cosine_x" => InitKind::CosineX,
                    "gaussian_bump" => InitKind::GaussianBump,
                    _ => {
                        return Err(err(
                            line,
                            format!(
                                "init kind must be zero | constant | cosine_x | gaussian_bump, got '{value}'"
                            ),
                        ))
                    }
                }
            }
            "value" => cfg.init.value = parse_f64(line, key, value)?,
            "amplitude" => cfg.init.amplitude = parse_f64(line, key, value)?,
            "wavenumber" => cfg.init.wavenumber = parse_f64(line, key, value)?,
            "center_x" => cfg.init.center_x = parse_f64(line, key, value)?,
            "center_xi" => cfg.init.center_xi = parse_f64(line, key, value)?,
            "width_x" => cfg.init.width_x = parse_f64(line, key, value)?,
            "width_xi" => cfg.init.width_xi = parse_f64(line, key, value)?,
            _ => return unknown(),
        },
        "forcing" => match key {
            "kind" => {
                cfg.forcing.kind = match value {
                    "zero" => ForcingKind::Zero,
                    "gaussian_pulse" => ForcingKind::GaussianPulse,
                    _ => {
                        return Err(err(
                            line,
                            format!("forcing kind must be zero | gaussian_pulse, got '{value}'"),
                        ))
                    }
                }
            }
            "amplitude" => cfg.forcing.amplitude = parse_f64(line, key, value)?,
            "center_x" => cfg.forcing.center_x = parse_f64(line, key, value)?,
            "center_xi" => cfg.forcing.center_xi = parse_f64(line, key, value)?,
            "width_x" => cfg.forcing.width_x = parse_f64(line, key, value)?,
            "width_xi" => cfg.forcing.width_xi = parse_f64(line, key, value)?,
            "t_on" => cfg.forcing.t_on = parse_f64(line, key, value)?,
            "t_off" => cfg.forcing.t_off = parse_f64(line, key, value)?,
            _ => return unknown(),
        },
        "output" => match key {
            "dir" => cfg.output.dir = value.to_string(),
            _ => return unknown(),
        },
        "wave_speed" => match key {
            "theta_levels" => cfg.wave_speed.theta_levels = parse_f64_list(line, key, value)?,
            "fit_t_start" => cfg.wave_speed.fit_t_start = parse_f64(line, key, value)?,
            "fit_t_end" => cfg.wave_speed.fit_t_end = parse_f64(line, key, value)?,
            _ => return unknown(),
        },
        "turing" => match key {
            "beta_values" => cfg.turing.beta_values = parse_f64_list(line, key, value)?,
            "beta_factors" => cfg.turing.beta_factors = parse_f64_list(line, key, value)?,
            "n_x" => cfg.turing.n_x = parse_usize(line, key, value)?,
            "n_xi" => cfg.turing.n_xi = parse_usize(line, key, value)?,
            "tau" => cfg.turing.tau = parse_f64(line, key, value)?,
            "n_steps" => cfg.turing.n_steps = parse_u64(line, key, value)?,
            "eps" => cfg.turing.eps = parse_f64(line, key, value)?,
            "amplitude" => cfg.turing.amplitude = parse_f64(line, key, value)?,
            _ => return unknown(),
        },
        "converge" => match key {
            "axis" => {
                cfg.converge.axis = match value {
                    "tau" => ConvergeAxis::Tau,
                    "h" => ConvergeAxis::H,
                    "eps" => ConvergeAxis::Eps,
                    "beta" => ConvergeAxis::Beta,
                    _ => {
                        return Err(err(
                            line,
                            format!("axis must be tau | h | eps | beta, got '{value}'"),
                        ))
                    }
                }
            }
            "levels" => cfg.converge.levels = parse_usize(line, key, value)?,
            "t_final" => cfg.converge.t_final = parse_f64(line, key, value)?,
            "eps_levels" => cfg.converge.eps_levels = parse_f64_list(line, key, value)?,
            "beta_levels" => cfg.converge.beta_levels = parse_f64_list(line, key, value)?,
            _ => return unknown(),
        },
        "bench" => match key {
            "nx_ladder" => cfg.bench.nx_ladder = parse_usize_list(line, key, value)?,
            "alg2_nx_ladder" => cfg.bench.alg2_nx_ladder = parse_usize_list(line, key, value)?,
            "steps" => cfg.bench.steps = parse_u64(line, key, value)?,
            "cell_cap" => cfg.bench.cell_cap = parse_usize(line, key, value)?,
            _ => return unknown(),
        },
        _ => unreachable!("sections are filtered at the header"),
    }
    Ok(())
}

/// Validates every key against the preconditions of the module that
/// consumes it, by building the module objects.
fn validate(cfg: &RunConfig) -> CliResult<()> {
    cfg.build_grid()?;
    cfg.build_params()?;
    cfg.build_rate()?.validate()?;
    cfg.build_kernel()?.validate()?;
    cfg.build_delta().validate()?;
    if !(cfg.run.tau > 0.0 && cfg.run.tau.is_finite()) {
        return Err(CliError::Config {
            line: None,
            message: format!("run.tau must be positive and finite, got {}", cfg.run.tau),
        });
    }
    if cfg.run.snapshot_stride == 0 {
        return Err(CliError::Config {
            line: None,
            message: "run.snapshot_stride must be >= 1".into(),
        });
    }
    if cfg.run.experiment.contains('#') || cfg.run.experiment.contains('\n') {
        return Err(CliError::Config {
            line: None,
            message: "run.experiment must not contain '#' or newlines".into(),
        });
    }
    if cfg.wave_speed.fit_t_end <= cfg.wave_speed.fit_t_start {
        return Err(CliError::Config {
            line: None,
            message: "wave_speed.fit_t_end must exceed fit_t_start".into(),
        });
    }
    if cfg.converge.levels < 2 {
        return Err(CliError::Config {
            line: None,
            message: "converge.levels must be >= 2".into(),
        });
    }
    if cfg.bench.nx_ladder.is_empty() || cfg.bench.alg2_nx_ladder.is_empty() {
        return Err(CliError::Config {
            line: None,
            message: "bench ladders must not be empty".into(),
        });
    }
    Ok(())
}

impl RunConfig {
    pub fn build_grid(&self) -> CliResult<Grid> {
        Ok(Grid::new(
            self.grid.n_x,
            self.grid.n_xi,
            self.grid.l_x,
            self.grid.l_xi,
        )?)
    }

    pub fn build_params(&self) -> CliResult<PhysicalParams> {
        Ok(PhysicalParams::new(
            self.model.gamma,
            self.model.nu,
            self.model.xi_0,
            self.model.eps,
        )?)
    }

    pub fn build_rate(&self) -> CliResult<FiringRate> {
        let rate = match self.model.firing_rate {
            RateKind::Sigmoid => FiringRate::Sigmoid {
                beta: self.model.beta,
                theta: self.model.theta,
            },
            RateKind::ShiftedSigmoid => FiringRate::ShiftedSigmoid {
                beta: self.model.beta,
            },
            RateKind::Heaviside => FiringRate::Heaviside {
                theta: self.model.theta,
            },
        };
        rate.validate()?;
        Ok(rate)
    }

    pub fn build_kernel(&self) -> CliResult<SomaticKernel> {
        let kernel = match self.model.kernel {
            KernelKind::ExpDecay => SomaticKernel::ExpDecay {
                kappa: self.model.kappa,
            },
            KernelKind::MexicanHat => SomaticKernel::MexicanHat {
                a1: self.model.a_1,
                b1: self.model.b_1,
                a2: self.model.a_2,
                b2: self.model.b_2,
            },
        };
        kernel.validate()?;
        Ok(kernel)
    }

    pub fn build_delta(&self) -> DendriticDelta {
        match self.model.delta {
            DeltaKind::Gaussian => DendriticDelta::Gaussian {
                eps: self.model.eps,
            },
            DeltaKind::TruncatedGaussian => DendriticDelta::TruncatedGaussian {
                eps: self.model.eps,
                kappa_d: self.model.kappa_d,
            },
        }
    }

    pub fn build_ic(&self) -> InitialCondition {
        match self.init.kind {
            InitKind::Zero => InitialCondition::Zero,
            InitKind::Constant => InitialCondition::Constant(self.init.value),
            InitKind::CosineX => InitialCondition::CosineInX {
                amplitude: self.init.amplitude,
                wavenumber: self.init.wavenumber,
            },
            InitKind::GaussianBump => InitialCondition::GaussianBump {
                amplitude: self.init.amplitude,
                center_x: self.init.center_x,
                center_xi: self.init.center_xi,
                width_x: self.init.width_x,
                width_xi: self.init.width_xi,
            },
        }
    }

    pub fn build_forcing(&self) -> ForcingSpec {
        match self.forcing.kind {
            ForcingKind::Zero => ForcingSpec::Zero,
            ForcingKind::GaussianPulse => ForcingSpec::GaussianPulse {
                amplitude: self.forcing.amplitude,
                center_x: self.forcing.center_x,
                center_xi: self.forcing.center_xi,
                width_x: self.forcing.width_x,
                width_xi: self.forcing.width_xi,
                t_on: self.forcing.t_on,
                t_off: self.forcing.t_off,
            },
        }
    }

    pub fn build_evaluator(&self) -> Evaluator {
        match self.run.evaluator {
            EvalKind::Fft => Evaluator::Fft,
            EvalKind::Direct => Evaluator::Direct,
            EvalKind::Compact => Evaluator::Compact,
        }
    }

    pub fn build_sim_setup(&self) -> CliResult<SimSetup> {
        Ok(SimSetup {
            grid: self.build_grid()?,
            params: self.build_params()?,
            kernel: self.build_kernel()?,
            delta: self.build_delta(),
            rate: self.build_rate()?,
            forcing: self.build_forcing(),
            ic: self.build_ic(),
            tau: self.run.tau,
            n_steps: self.run.n_steps,
            snapshot_stride: self.run.snapshot_stride,
            evaluator: self.build_evaluator(),
            trace_row: None,
        })
    }

    /// Canonical text form; `parse_config(cfg.to_text())` reproduces `cfg`
    /// exactly.
    pub fn to_text(&self) -> String {
        fn list(v: &[f64]) -> String {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
        fn ulist(v: &[usize]) -> String {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
        let m = &self.model;
        let rate = match m.firing_rate {
            RateKind::Sigmoid => "sigmoid",
            RateKind::ShiftedSigmoid => "shifted_sigmoid",
            RateKind::Heaviside => "heaviside",
        };
        let kernel = match m.kernel {
            KernelKind::ExpDecay => "exp_decay",
            KernelKind::MexicanHat => "mexican_hat",
        };
        let delta = match m.delta {
            DeltaKind::Gaussian => "gaussian",
            DeltaKind::TruncatedGaussian => "truncated_gaussian",
        };
        let evaluator = match self.run.evaluator {
            EvalKind::Fft => "fft",
            EvalKind::Direct => "direct",
            EvalKind::Compact => "compact",
        };
        let init_kind = match self.init.kind {
            InitKind::Zero => "zero",
            InitKind::Constant => "constant",
            InitKind::CosineX => "cosine_x",
            InitKind::GaussianBump => "gaussian_bump",
        };
        let forcing_kind = match self.forcing.kind {
            ForcingKind::Zero => "zero",
            ForcingKind::GaussianPulse => "gaussian_pulse",
        };
        let axis = match self.converge.axis {
            ConvergeAxis::Tau => "tau",
            ConvergeAxis::H => "h",
            ConvergeAxis::Eps => "eps",
            ConvergeAxis::Beta => "beta",
        };
        format!(
            "[grid]\n\
             n_x = {}\nn_xi = {}\nl_x = {}\nl_xi = {}\n\
             \n[model]\n\
             gamma = {}\nnu = {}\nxi_0 = {}\neps = {}\n\
             firing_rate = {rate}\nbeta = {}\ntheta = {}\n\
             kernel = {kernel}\nkappa = {}\na_1 = {}\nb_1 = {}\na_2 = {}\nb_2 = {}\n\
             delta = {delta}\nkappa_d = {}\n\
             \n[run]\n\
             experiment = {}\ntau = {}\nn_steps = {}\nsnapshot_stride = {}\nevaluator = {evaluator}\nseed = {}\n\
             \n[init]\n\
             kind = {init_kind}\nvalue = {}\namplitude = {}\nwavenumber = {}\ncenter_x = {}\ncenter_xi = {}\nwidth_x = {}\nwidth_xi = {}\n\
             \n[forcing]\n\
             kind = {forcing_kind}\namplitude = {}\ncenter_x = {}\ncenter_xi = {}\nwidth_x = {}\nwidth_xi = {}\nt_on = {}\nt_off = {}\n\
             \n[output]\ndir = {}\n\
             \n[wave_speed]\ntheta_levels = {}\nfit_t_start = {}\nfit_t_end = {}\n\
             \n[turing]\nbeta_values = {}\nbeta_factors = {}\nn_x = {}\nn_xi = {}\ntau = {}\nn_steps = {}\neps = {}\namplitude = {}\n\
             \n[converge]\naxis = {axis}\nlevels = {}\nt_final = {}\neps_levels = {}\nbeta_levels = {}\n\
             \n[bench]\nnx_ladder = {}\nalg2_nx_ladder = {}\nsteps = {}\ncell_cap = {}\n",
            self.grid.n_x,
            self.grid.n_xi,
            self.grid.l_x,
            self.grid.l_xi,
            m.gamma,
            m.nu,
            m.xi_0,
            m.eps,
            m.beta,
            m.theta,
            m.kappa,
            m.a_1,
            m.b_1,
            m.a_2,
            m.b_2,
            m.kappa_d,
            self.run.experiment,
            self.run.tau,
            self.run.n_steps,
            self.run.snapshot_stride,
            self.run.seed,
            self.init.value,
            self.init.amplitude,
            self.init.wavenumber,
            self.init.center_x,
            self.init.center_xi,
            self.init.width_x,
            self.init.width_xi,
            self.forcing.amplitude,
            self.forcing.center_x,
            self.forcing.center_xi,
            self.forcing.width_x,
            self.forcing.width_xi,
            self.forcing.t_on,
            self.forcing.t_off,
            self.output.dir,
            list(&self.wave_speed.theta_levels),
            self.wave_speed.fit_t_start,
            self.wave_speed.fit_t_end,
            list(&self.turing.beta_values),
            list(&self.turing.beta_factors),
            self.turing.n_x,
            self.turing.n_xi,
            self.turing.tau,
            self.turing.n_steps,
            self.turing.eps,
            self.turing.amplitude,
            self.converge.levels,
            self.converge.t_final,
            list(&self.converge.eps_levels),
            list(&self.converge.beta_levels),
            ulist(&self.bench.nx_ladder),
            ulist(&self.bench.alg2_nx_ladder),
            self.bench.steps,
            self.bench.cell_cap,
        )
    }
}
