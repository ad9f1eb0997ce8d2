//! First-order IMEX time stepping.
//!
//! One step advances the field as
//!
//! ```text
//! A V^n = V^{n-1} + τ N(V^{n-1}) + τ G^{n-1},    A = (1+γτ) I − τν D_ξξ,
//! ```
//!
//! i.e. backward Euler on the stiff cable operator and an explicit evaluation
//! of the nonlocal term. [`run`] is the matrix-blocked form: `A` is an
//! `n_ξ x n_ξ` tridiagonal matrix factorized once, and each step solves
//! against the `n_x` columns of the right-hand side. [`run_reference`] is a
//! deliberately naive flat formulation on the lexicographic vector of length
//! `n_x n_ξ`, with the nonlocal term evaluated by the quadruple-sum
//! quadrature; it exists as an end-to-end oracle and as the baseline for the
//! operation-count comparisons, and its per-step cost is `O(n_x² n_ξ²)`.
//!
//! Runs are single-threaded with a strict step order, so identical
//! configurations produce bitwise-identical trajectories.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::linop::{
    build_a, build_laplacian, factorize_flop_count, solve_flop_count, TridiagFactorization,
    TridiagonalMatrix,
};
use crate::matrix::Mat;
use crate::model::{DendriticDelta, FiringRate, PhysicalParams, SomaticKernel};
use crate::nonlocal::NonlocalPlan;

/// Voltage field at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    /// `n_ξ x n_x` matrix; entry (i, j) approximates `V(x_j, ξ_i, time)`.
    pub values: Mat,
    pub time: f64,
}

/// Initial condition, sampled pointwise at the grid nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialCondition {
    Zero,
    Constant(f64),
    /// `V(x, ξ) = amplitude * cos(wavenumber * x)`, constant along the fibre.
    CosineInX { amplitude: f64, wavenumber: f64 },
    /// Localized bump, periodic in x through the wrapped distance. The
    /// default front igniter: centred at the contact point with amplitude
    /// above threshold it launches two counter-propagating fronts.
    GaussianBump {
        amplitude: f64,
        center_x: f64,
        center_xi: f64,
        width_x: f64,
        width_xi: f64,
    },
}

impl InitialCondition {
    pub fn sample(&self, grid: &Grid) -> Mat {
        match *self {
            InitialCondition::Zero => Mat::zeros(grid.n_xi, grid.n_x),
            InitialCondition::Constant(c) => Mat::filled(grid.n_xi, grid.n_x, c),
            InitialCondition::CosineInX {
                amplitude,
                wavenumber,
            } => Mat::from_fn(grid.n_xi, grid.n_x, |_, j| {
                amplitude * (wavenumber * grid.x_nodes[j]).cos()
            }),
            InitialCondition::GaussianBump {
                amplitude,
                center_x,
                center_xi,
                width_x,
                width_xi,
            } => Mat::from_fn(grid.n_xi, grid.n_x, |i, j| {
                let dx = grid.wrapped_distance(grid.x_nodes[j], center_x) / width_x;
                let dxi = (grid.xi_nodes[i] - center_xi) / width_xi;
                amplitude * (-dx * dx - dxi * dxi).exp()
            }),
        }
    }
}

/// External input `G(x, ξ, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ForcingSpec {
    Zero,
    /// Gaussian in space (periodic in x), on during `[t_on, t_off)`.
    GaussianPulse {
        amplitude: f64,
        center_x: f64,
        center_xi: f64,
        width_x: f64,
        width_xi: f64,
        t_on: f64,
        t_off: f64,
    },
}

impl ForcingSpec {
    /// Samples `G(., ., t)`; `None` when the forcing vanishes at `t`.
    pub fn sample(&self, grid: &Grid, t: f64) -> Option<Mat> {
        match *self {
            ForcingSpec::Zero => None,
            ForcingSpec::GaussianPulse {
                amplitude,
                center_x,
                center_xi,
                width_x,
                width_xi,
                t_on,
                t_off,
            } => {
                if t < t_on || t >= t_off {
                    return None;
                }
                Some(Mat::from_fn(grid.n_xi, grid.n_x, |i, j| {
                    let dx = grid.wrapped_distance(grid.x_nodes[j], center_x) / width_x;
                    let dxi = (grid.xi_nodes[i] - center_xi) / width_xi;
                    amplitude * (-dx * dx - dxi * dxi).exp()
                }))
            }
        }
    }

    /// `C_G`: uniform bound on `|G|`.
    pub fn sup_abs(&self) -> f64 {
        match *self {
            ForcingSpec::Zero => 0.0,
            ForcingSpec::GaussianPulse { amplitude, .. } => amplitude.abs(),
        }
    }
}

/// Operation counters, split into the one-off initialisation phase and the
/// per-step phase. Function evaluations count one flop; a DFT of length n
/// counts `5 n ceil(log2 n)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepCounters {
    /// Flops spent building grid vectors, synaptic vectors, weights and the
    /// LU factorization.
    pub flops_init: u64,
    /// Flops spent inside time steps, cumulative.
    pub flops_steps: u64,
    /// Number of completed steps.
    pub steps: u64,
    /// Tridiagonal column solves performed.
    pub linear_solve_count: u64,
    /// DFTs performed during stepping.
    pub fft_count: u64,
}

impl StepCounters {
    /// Average flops per time step.
    pub fn flops_per_step(&self) -> f64 {
        if self.steps == 0 {
            0.0
        } else {
            self.flops_steps as f64 / self.steps as f64
        }
    }
}

/// Which evaluation path computes the nonlocal term inside `run`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evaluator {
    /// Circular convolution by DFT (the production path).
    Fft,
    /// Quadruple-sum quadrature (the oracle, run end-to-end).
    Direct,
    /// Sparse fast path; requires the truncated delta profile.
    Compact,
}

/// Complete configuration of one run.
#[derive(Debug, Clone)]
pub struct SimSetup {
    pub grid: Grid,
    pub params: PhysicalParams,
    pub kernel: SomaticKernel,
    pub delta: DendriticDelta,
    pub rate: FiringRate,
    pub forcing: ForcingSpec,
    pub ic: InitialCondition,
    pub tau: f64,
    pub n_steps: u64,
    /// A snapshot is recorded at step 0, every `snapshot_stride` steps, and
    /// at the final step.
    pub snapshot_stride: u64,
    pub evaluator: Evaluator,
    /// When set, `row_max_trace` records `max_j |V(x_j, ξ_row, t_n)|` per step.
    pub trace_row: Option<usize>,
}

impl SimSetup {
    fn validate(&self) -> Result<()> {
        self.kernel.validate()?;
        self.delta.validate()?;
        self.rate.validate()?;
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::Validation(format!(
                "tau must be positive and finite, got {}",
                self.tau
            )));
        }
        if self.snapshot_stride == 0 {
            return Err(Error::Validation("snapshot_stride must be >= 1".into()));
        }
        if self.evaluator == Evaluator::Compact && !self.delta.is_compact() {
            return Err(Error::Validation(
                "the compact evaluator requires the truncated delta profile".into(),
            ));
        }
        if let Some(row) = self.trace_row {
            if row >= self.grid.n_xi {
                return Err(Error::Validation(format!(
                    "trace_row {row} out of range (n_xi = {})",
                    self.grid.n_xi
                )));
            }
        }
        Ok(())
    }
}

/// Everything a run produces.
#[derive(Debug, Clone)]
pub struct RunRecord {
    /// Fields at step 0, every stride-th step, and the final step.
    pub snapshots: Vec<FieldState>,
    /// `max_ij |V^n_ij|` for n = 0..n_steps.
    pub max_abs_trace: Vec<f64>,
    /// `max_j |V^n(ξ_row)|` when `trace_row` was set.
    pub row_max_trace: Option<Vec<f64>>,
    pub counters: StepCounters,
    /// A-priori bound on the solution; the running trace never exceeds it
    /// for bounded firing rates.
    pub boundedness_bound: f64,
    pub warnings: Vec<String>,
}

/// A-priori solution bound: `|V⁰|_∞ + n_x (μ(Ω̄) C_W C_S + C_G)/γ`, with
/// `v0_norm` the induced (max-row-sum) infinity norm of the initial field.
pub fn lemma1_bound(
    v0_norm: f64,
    params: &PhysicalParams,
    grid: &Grid,
    c_w: f64,
    c_s: f64,
    c_g: f64,
) -> f64 {
    v0_norm + grid.n_x as f64 * (grid.domain_measure() * c_w * c_s + c_g) / params.gamma
}

/// One IMEX step: `V^n = A^{-1}(V^{n-1} + τ N(V^{n-1}) + τ G^{n-1})`.
///
/// The factorization must come from the same grid and `(γ, ν, τ)`.
pub fn imex_step(
    factorization: &TridiagFactorization,
    plan: &NonlocalPlan,
    rate: &FiringRate,
    evaluator: Evaluator,
    forcing_prev: Option<&Mat>,
    state: &FieldState,
    tau: f64,
) -> Result<FieldState> {
    let mut rhs = match evaluator {
        Evaluator::Fft => plan.eval_fft(rate, &state.values)?,
        Evaluator::Direct => plan.eval_direct(rate, &state.values)?,
        Evaluator::Compact => plan.eval_compact(rate, &state.values)?,
    };
    match forcing_prev {
        Some(g) => {
            for j in 0..rhs.cols() {
                let (v_col, g_col) = (state.values.col(j), g.col(j));
                let r_col = rhs.col_mut(j);
                for i in 0..r_col.len() {
                    r_col[i] = v_col[i] + tau * (r_col[i] + g_col[i]);
                }
            }
        }
        None => {
            for j in 0..rhs.cols() {
                let v_col = state.values.col(j);
                let r_col = rhs.col_mut(j);
                for i in 0..r_col.len() {
                    r_col[i] = v_col[i] + tau * r_col[i];
                }
            }
        }
    }
    factorization.solve_in_place(&mut rhs)?;
    Ok(FieldState {
        values: rhs,
        time: state.time + tau,
    })
}

struct RecordBuilder {
    snapshots: Vec<FieldState>,
    max_abs_trace: Vec<f64>,
    row_max_trace: Option<Vec<f64>>,
    stride: u64,
    n_steps: u64,
    bound: f64,
}

impl RecordBuilder {
    fn new(setup: &SimSetup, bound: f64) -> Self {
        RecordBuilder {
            snapshots: Vec::new(),
            max_abs_trace: Vec::new(),
            row_max_trace: setup.trace_row.map(|_| Vec::new()),
            stride: setup.snapshot_stride,
            n_steps: setup.n_steps,
            bound,
        }
    }

    /// Records traces and snapshots for step `n`; errors on non-finite values.
    fn observe(&mut self, setup: &SimSetup, state: &FieldState, n: u64) -> Result<()> {
        let max_abs = state.values.max_abs();
        if !max_abs.is_finite() {
            return Err(Error::NonFinite { step: n });
        }
        debug_assert!(
            max_abs <= self.bound * (1.0 + 1e-12),
            "boundedness violated at step {n}: {max_abs} > {}",
            self.bound
        );
        self.max_abs_trace.push(max_abs);
        if let (Some(trace), Some(row)) = (self.row_max_trace.as_mut(), setup.trace_row) {
            let mut m = 0.0f64;
            for j in 0..state.values.cols() {
                m = m.max(state.values.at(row, j).abs());
            }
            trace.push(m);
        }
        if n.is_multiple_of(self.stride) || n == self.n_steps {
            self.snapshots.push(state.clone());
        }
        Ok(())
    }

    fn finish(self, counters: StepCounters, warnings: Vec<String>) -> RunRecord {
        RunRecord {
            snapshots: self.snapshots,
            max_abs_trace: self.max_abs_trace,
            row_max_trace: self.row_max_trace,
            counters,
            boundedness_bound: self.bound,
            warnings,
        }
    }
}

/// Matrix-form IMEX run: factorize the `n_ξ x n_ξ` system once, then step.
pub fn run(setup: &SimSetup) -> Result<RunRecord> {
    setup.validate()?;
    let grid = &setup.grid;
    let weights = grid.quadrature_weights();
    let plan = NonlocalPlan::new(grid, &weights, &setup.kernel, &setup.delta, setup.params.xi_0)?;
    let laplacian = build_laplacian(grid);
    let a = build_a(&laplacian, setup.params.gamma, setup.params.nu, setup.tau);
    let factorization = TridiagFactorization::new(&a)?;

    let mut counters = StepCounters {
        flops_init: plan.init_flops()
            + (grid.n_x + grid.n_xi) as u64          // quadrature weights
            + factorize_flop_count(grid.n_xi),
        ..StepCounters::default()
    };

    let mut warnings = Vec::new();
    if !plan.delta_resolved() {
        warnings.push(format!(
            "h_xi = {:.3e} does not resolve the delta profile width eps = {:.3e}; \
             its quadrature is unreliable",
            grid.h_xi,
            setup.delta.eps()
        ));
    }

    let state = FieldState {
        values: setup.ic.sample(grid),
        time: 0.0,
    };
    let bound = lemma1_bound(
        state.values.inf_norm(),
        &setup.params,
        grid,
        plan.max_abs_coupling(),
        setup.rate.sup_abs(),
        setup.forcing.sup_abs(),
    );

    let eval_flops = match setup.evaluator {
        Evaluator::Fft => plan.fft_eval_flop_count(),
        Evaluator::Direct => plan.direct_eval_flop_count(),
        Evaluator::Compact => plan.compact_eval_flop_count(),
    };
    let eval_ffts = match setup.evaluator {
        Evaluator::Fft | Evaluator::Compact => 2,
        Evaluator::Direct => 0,
    };
    let z = (grid.n_x * grid.n_xi) as u64;

    let mut builder = RecordBuilder::new(setup, bound);
    builder.observe(setup, &state, 0)?;

    let mut state = state;
    for n in 1..=setup.n_steps {
        let t_prev = (n - 1) as f64 * setup.tau;
        let forcing = setup.forcing.sample(grid, t_prev);
        state = imex_step(
            &factorization,
            &plan,
            &setup.rate,
            setup.evaluator,
            forcing.as_ref(),
            &state,
            setup.tau,
        )?;
        // keep time exact: n*tau, not accumulated additions
        state.time = n as f64 * setup.tau;

        counters.steps += 1;
        counters.fft_count += eval_ffts;
        counters.linear_solve_count += grid.n_x as u64;
        counters.flops_steps += eval_flops
            + if forcing.is_some() { 4 * z } else { 3 * z } // G eval + axpy
            + solve_flop_count(grid.n_xi, grid.n_x);

        builder.observe(setup, &state, n)?;
    }
    Ok(builder.finish(counters, warnings))
}

/// Flat vector-form IMEX run (the naive baseline): one LU factorization of
/// the full `n_x n_ξ` system and the quadruple-sum nonlocal term.
///
/// Refuses grids with more than `cell_cap` unknowns; the per-step cost grows
/// with the square of the cell count.
pub fn run_reference(setup: &SimSetup, cell_cap: usize) -> Result<RunRecord> {
    setup.validate()?;
    let grid = &setup.grid;
    let z = grid.n_x * grid.n_xi;
    if z > cell_cap {
        return Err(Error::Validation(format!(
            "reference run refused: {z} cells exceed the cap of {cell_cap}"
        )));
    }
    let weights = grid.quadrature_weights();
    let plan = NonlocalPlan::new(grid, &weights, &setup.kernel, &setup.delta, setup.params.xi_0)?;
    let laplacian = build_laplacian(grid);
    let a_block = build_a(&laplacian, setup.params.gamma, setup.params.nu, setup.tau);

    // Flat system matrix (1+γτ) I − τν I ⊗ D_ξξ on the lexicographic vector
    // (column-major flattening: cable index fastest). Block-diagonal with
    // identical tridiagonal blocks, hence itself tridiagonal with zero
    // couplings at block boundaries.
    let n_xi = grid.n_xi;
    let mut lower = vec![0.0; z - 1];
    let mut main = vec![0.0; z];
    let mut upper = vec![0.0; z - 1];
    for b in 0..grid.n_x {
        let off = b * n_xi;
        for i in 0..n_xi {
            main[off + i] = a_block.main[i];
            if i + 1 < n_xi {
                lower[off + i] = a_block.lower[i];
                upper[off + i] = a_block.upper[i];
            }
        }
    }
    let a_flat = TridiagonalMatrix { lower, main, upper };
    let factorization = TridiagFactorization::new(&a_flat)?;

    let mut counters = StepCounters {
        flops_init: (grid.n_x + grid.n_xi) as u64    // grid vectors
            + grid.n_x as u64                         // w samples
            + 2 * grid.n_xi as u64                    // alpha, alpha'
            + (grid.n_x + grid.n_xi) as u64           // weights
            + factorize_flop_count(z),
        ..StepCounters::default()
    };

    let mut warnings = Vec::new();
    if !plan.delta_resolved() {
        warnings.push(format!(
            "h_xi = {:.3e} does not resolve the delta profile width eps = {:.3e}; \
             its quadrature is unreliable",
            grid.h_xi,
            setup.delta.eps()
        ));
    }

    let mut state = FieldState {
        values: setup.ic.sample(grid),
        time: 0.0,
    };
    let bound = lemma1_bound(
        state.values.inf_norm(),
        &setup.params,
        grid,
        plan.max_abs_coupling(),
        setup.rate.sup_abs(),
        setup.forcing.sup_abs(),
    );

    let mut builder = RecordBuilder::new(setup, bound);
    builder.observe(setup, &state, 0)?;

    for n in 1..=setup.n_steps {
        let t_prev = (n - 1) as f64 * setup.tau;
        let forcing = setup.forcing.sample(grid, t_prev);
        let mut rhs = plan.eval_direct(&setup.rate, &state.values)?;
        let tau = setup.tau;
        match forcing.as_ref() {
            Some(g) => {
                let (v, gs) = (state.values.as_slice(), g.as_slice());
                for (k, r) in rhs.as_mut_slice().iter_mut().enumerate() {
                    *r = v[k] + tau * (*r + gs[k]);
                }
            }
            None => {
                let v = state.values.as_slice();
                for (k, r) in rhs.as_mut_slice().iter_mut().enumerate() {
                    *r = v[k] + tau * *r;
                }
            }
        }
        // the flat vector is the column-major storage itself
        factorization.solve_column_in_place(rhs.as_mut_slice());
        state = FieldState {
            values: rhs,
            time: n as f64 * setup.tau,
        };

        counters.steps += 1;
        counters.linear_solve_count += 1;
        counters.flops_steps += plan.direct_eval_flop_count()
            + if forcing.is_some() { 4 * z as u64 } else { 3 * z as u64 }
            + solve_flop_count(z, 1);

        builder.observe(setup, &state, n)?;
    }
    Ok(builder.finish(counters, warnings))
}

/// Working-set size of the matrix-form algorithm, in stored floating-point
/// values: `4 n_x n_ξ + 7 n_ξ + 3 n_x`.
pub fn matrix_form_value_count(n_x: usize, n_xi: usize) -> u64 {
    (4 * n_x * n_xi + 7 * n_xi + 3 * n_x) as u64
}

/// Working-set size of the flat vector-form algorithm:
/// `7 n_x n_ξ + 2 n_ξ + 2 n_x`.
pub fn vector_form_value_count(n_x: usize, n_xi: usize) -> u64 {
    (7 * n_x * n_xi + 2 * n_xi + 2 * n_x) as u64
}
