//! The discretised nonlocal coupling
//!
//! ```text
//! N_ij(V) = Σ_{j'} Σ_{i'} α_i α'_{i'} w(|x_j − x_{j'}|) S(V_{i'j'}) ρ_{j'} σ_{i'}
//! ```
//!
//! with `α_i = δε(ξ_i − ξ0)` and `α'_{i'} = δε(ξ_{i'})`, evaluated three ways
//! from one precomputed plan:
//!
//! - [`NonlocalPlan::eval_direct`]: the quadruple sum, literally. `O(n_x² n_ξ²)`
//!   per call; kept as the reference oracle.
//! - [`NonlocalPlan::eval_fft`]: the kernel factorizes, `w` is periodic, and
//!   `ρ_j = h_x`, so the somatic sum is a circular convolution. Reduce the
//!   dendritic sum to a row, convolve by DFT, scale by `h_x`, and spread back
//!   with the outer product against `α`. `O(n_x n_ξ) + O(n_x log n_x)`.
//! - [`NonlocalPlan::eval_compact`]: with a compactly supported `δε` only the
//!   index sets `𝕀 = {i: α_i ≠ 0}` and `𝕀' = {i': α'_{i'} ≠ 0}` participate;
//!   rows outside `𝕀` are exactly zero.
//!
//! DFT convention: forward unnormalized, inverse carries `1/n_x`. The small
//! imaginary residue of the inverse transform is dropped; a debug assertion
//! bounds it at 1e-10 relative.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::{Grid, QuadratureWeights};
use crate::matrix::Mat;
use crate::model::{DendriticDelta, FiringRate, SomaticKernel};

/// Precomputed vectors and FFT plans for evaluating the coupling term.
/// Immutable after construction; evaluation is pure and reentrant.
pub struct NonlocalPlan {
    n_x: usize,
    n_xi: usize,
    /// Circulant generator: `w_samples[k] = w(wrapped(k*h_x))`, so index 0
    /// holds `w(0)` and the array is even under `k -> n_x - k`.
    w_samples: Vec<f64>,
    /// Forward DFT of `w_samples`; conjugate-symmetric.
    w_hat: Vec<Complex64>,
    /// `alpha[i] = delta_eps(xi_i - xi_0)`.
    alpha: Vec<f64>,
    /// `alpha_prime[i] = delta_eps(xi_i)`.
    alpha_prime: Vec<f64>,
    /// Dendritic quadrature weights.
    sigma: Vec<f64>,
    /// `alpha_prime ⊙ sigma`, the per-column reduction weights.
    alpha_prime_sigma: Vec<f64>,
    /// Somatic quadrature weight (identical for all nodes).
    h_x: f64,
    /// `𝕀`: rows where `alpha` is nonzero (all rows for the Gaussian delta).
    support_in: Vec<usize>,
    /// `𝕀'`: rows where `alpha_prime` is nonzero.
    support_out: Vec<usize>,
    compact: bool,
    delta_resolved: bool,
    init_flops: u64,
    fft_fwd: Arc<dyn Fft<f64>>,
    fft_inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for NonlocalPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NonlocalPlan")
            .field("n_x", &self.n_x)
            .field("n_xi", &self.n_xi)
            .field("compact", &self.compact)
            .field("support_in", &self.support_in.len())
            .field("support_out", &self.support_out.len())
            .finish()
    }
}

impl NonlocalPlan {
    pub fn new(
        grid: &Grid,
        weights: &QuadratureWeights,
        kernel: &SomaticKernel,
        delta: &DendriticDelta,
        xi_0: f64,
    ) -> Result<Self> {
        kernel.validate()?;
        delta.validate()?;
        if weights.sigma.len() != grid.n_xi || weights.rho.len() != grid.n_x {
            return Err(Error::Dimension(
                "quadrature weights do not match the grid".into(),
            ));
        }
        let n_x = grid.n_x;
        let n_xi = grid.n_xi;

        // kernel sampled at wrapped displacements k*h_x; the periodic
        // extension required on the circle comes in through the wrapping.
        // The wrap is taken on the integer offset so the generator is even
        // under k -> n_x - k exactly.
        let w_samples: Vec<f64> = (0..n_x)
            .map(|k| kernel.eval(k.min(n_x - k) as f64 * grid.h_x))
            .collect();

        let mut planner = FftPlanner::new();
        let fft_fwd = planner.plan_fft_forward(n_x);
        let fft_inv = planner.plan_fft_inverse(n_x);
        let mut w_hat: Vec<Complex64> =
            w_samples.iter().map(|&w| Complex64::new(w, 0.0)).collect();
        fft_fwd.process(&mut w_hat);

        let alpha: Vec<f64> = grid.xi_nodes.iter().map(|&xi| delta.eval(xi - xi_0)).collect();
        let alpha_prime: Vec<f64> = grid.xi_nodes.iter().map(|&xi| delta.eval(xi)).collect();
        let alpha_prime_sigma: Vec<f64> = alpha_prime
            .iter()
            .zip(&weights.sigma)
            .map(|(a, s)| a * s)
            .collect();

        let compact = delta.is_compact();
        let (support_in, support_out) = if compact {
            (
                (0..n_xi).filter(|&i| alpha[i] != 0.0).collect(),
                (0..n_xi).filter(|&i| alpha_prime[i] != 0.0).collect(),
            )
        } else {
            // full support by definition of the smooth profile
            ((0..n_xi).collect(), (0..n_xi).collect())
        };

        let init_flops = (n_x + n_xi) as u64        // grid vectors
            + 2 * n_x as u64                        // w samples and its DFT (1 flop/eval convention)
            + fft_flop_count(n_x)
            + 2 * n_xi as u64                       // alpha, alpha_prime
            + n_xi as u64; // alpha_prime ⊙ sigma

        Ok(NonlocalPlan {
            n_x,
            n_xi,
            w_samples,
            w_hat,
            alpha,
            alpha_prime,
            sigma: weights.sigma.clone(),
            alpha_prime_sigma,
            h_x: grid.h_x,
            support_in,
            support_out,
            compact,
            delta_resolved: grid.h_xi <= delta.eps(),
            init_flops,
            fft_fwd,
            fft_inv,
        })
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn n_xi(&self) -> usize {
        self.n_xi
    }

    pub fn w_samples(&self) -> &[f64] {
        &self.w_samples
    }

    pub fn w_hat(&self) -> &[Complex64] {
        &self.w_hat
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn alpha_prime(&self) -> &[f64] {
        &self.alpha_prime
    }

    pub fn support_in(&self) -> &[usize] {
        &self.support_in
    }

    pub fn support_out(&self) -> &[usize] {
        &self.support_out
    }

    pub fn is_compact(&self) -> bool {
        self.compact
    }

    /// False when `h_xi > eps`, i.e. the grid does not resolve the contact
    /// profile and its quadrature is unreliable. Callers surface a warning.
    pub fn delta_resolved(&self) -> bool {
        self.delta_resolved
    }

    /// True when the sampled coupling vanishes identically (empty support on
    /// either dendritic profile), so `N(V) = 0` for every field.
    pub fn coupling_vanishes(&self) -> bool {
        self.alpha.iter().all(|&a| a == 0.0) || self.alpha_prime.iter().all(|&a| a == 0.0)
    }

    /// Flops spent building the plan (grid/synaptic vectors, DFT of w, LU
    /// excluded).
    pub fn init_flops(&self) -> u64 {
        self.init_flops
    }

    /// `C_W`: maximum of `|W|` over grid samples, for the boundedness bound.
    pub fn max_abs_coupling(&self) -> f64 {
        let ma = self.alpha.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let map = self.alpha_prime.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mw = self.w_samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        ma * map * mw
    }

    /// Reference evaluation: the quadruple-sum quadrature, term by term.
    pub fn eval_direct(&self, rate: &FiringRate, field: &Mat) -> Result<Mat> {
        self.check_dims(field)?;
        let s_v = Mat::from_fn(self.n_xi, self.n_x, |i, j| rate.eval(field.at(i, j)));
        let n = self.n_x;
        let mut out = Mat::zeros(self.n_xi, self.n_x);
        for j in 0..n {
            for i in 0..self.n_xi {
                let mut acc = 0.0;
                for jp in 0..n {
                    let w = self.w_samples[(j + n - jp) % n];
                    for ip in 0..self.n_xi {
                        acc += self.alpha[i]
                            * self.alpha_prime[ip]
                            * w
                            * s_v.at(ip, jp)
                            * self.h_x
                            * self.sigma[ip];
                    }
                }
                *out.at_mut(i, j) = acc;
            }
        }
        Ok(out)
    }

    /// Fast evaluation: dendritic reduction, circular convolution by DFT,
    /// outer product against `alpha`.
    pub fn eval_fft(&self, rate: &FiringRate, field: &Mat) -> Result<Mat> {
        self.check_dims(field)?;
        let row = self.reduce_columns(rate, field, None);
        let conv = self.circular_convolve(&row);
        Ok(self.outer_with_alpha(&conv, None))
    }

    /// Compact-support evaluation; requires a plan built with the truncated
    /// delta. Rows outside `𝕀` are never written and stay exactly zero.
    pub fn eval_compact(&self, rate: &FiringRate, field: &Mat) -> Result<Mat> {
        if !self.compact {
            return Err(Error::Validation(
                "compact evaluation requires a compactly supported delta profile".into(),
            ));
        }
        self.check_dims(field)?;
        if self.support_in.is_empty() || self.support_out.is_empty() {
            return Ok(Mat::zeros(self.n_xi, self.n_x));
        }
        let row = self.reduce_columns(rate, field, Some(&self.support_out));
        let conv = self.circular_convolve(&row);
        Ok(self.outer_with_alpha(&conv, Some(&self.support_in)))
    }

    fn check_dims(&self, field: &Mat) -> Result<()> {
        if field.rows() != self.n_xi || field.cols() != self.n_x {
            return Err(Error::Dimension(format!(
                "field is {}x{}, plan expects {}x{}",
                field.rows(),
                field.cols(),
                self.n_xi,
                self.n_x
            )));
        }
        Ok(())
    }

    /// `r_j = Σ_i alpha'_i sigma_i S(V_ij)`, over all rows or a support set.
    fn reduce_columns(&self, rate: &FiringRate, field: &Mat, rows: Option<&[usize]>) -> Vec<f64> {
        let mut r = vec![0.0; self.n_x];
        for (j, rj) in r.iter_mut().enumerate() {
            let col = field.col(j);
            let mut s = 0.0;
            match rows {
                None => {
                    for (i, &v) in col.iter().enumerate() {
                        s += self.alpha_prime_sigma[i] * rate.eval(v);
                    }
                }
                Some(rows) => {
                    for &i in rows {
                        s += self.alpha_prime_sigma[i] * rate.eval(col[i]);
                    }
                }
            }
            *rj = s;
        }
        r
    }

    /// `h_x * (w ⊛ r)` via forward DFT, Hadamard product with `ŵ`, inverse
    /// DFT (carrying `1/n_x`), real part.
    fn circular_convolve(&self, r: &[f64]) -> Vec<f64> {
        let mut buf: Vec<Complex64> = r.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fft_fwd.process(&mut buf);
        for (b, wh) in buf.iter_mut().zip(&self.w_hat) {
            *b *= *wh;
        }
        self.fft_inv.process(&mut buf);
        let scale = self.h_x / self.n_x as f64;
        if cfg!(debug_assertions) {
            let max_re = buf.iter().fold(0.0f64, |m, c| m.max(c.re.abs()));
            let max_im = buf.iter().fold(0.0f64, |m, c| m.max(c.im.abs()));
            debug_assert!(
                max_im <= 1e-10 * (1.0 + max_re),
                "imaginary residue {max_im:e} too large vs {max_re:e}"
            );
        }
        buf.into_iter().map(|c| c.re * scale).collect()
    }

    fn outer_with_alpha(&self, conv: &[f64], rows: Option<&[usize]>) -> Mat {
        let mut out = Mat::zeros(self.n_xi, self.n_x);
        match rows {
            None => {
                for (j, &c) in conv.iter().enumerate() {
                    let col = out.col_mut(j);
                    for i in 0..self.n_xi {
                        col[i] = self.alpha[i] * c;
                    }
                }
            }
            Some(rows) => {
                for (j, &c) in conv.iter().enumerate() {
                    let col = out.col_mut(j);
                    for &i in rows {
                        col[i] = self.alpha[i] * c;
                    }
                }
            }
        }
        out
    }

    /// Flop count of one [`eval_fft`](Self::eval_fft) call.
    pub fn fft_eval_flop_count(&self) -> u64 {
        let z = (self.n_x * self.n_xi) as u64;
        let n = self.n_x as u64;
        // S evals + reduction mult-adds + two DFTs + Hadamard + scaling + outer
        3 * z + 2 * fft_flop_count(self.n_x) + 6 * n + n + z
    }

    /// Flop count of one [`eval_direct`](Self::eval_direct) call.
    pub fn direct_eval_flop_count(&self) -> u64 {
        let z = (self.n_x * self.n_xi) as u64;
        2 * z * z + z
    }

    /// Flop count of one [`eval_compact`](Self::eval_compact) call.
    pub fn compact_eval_flop_count(&self) -> u64 {
        let n = self.n_x as u64;
        let i_in = self.support_in.len() as u64;
        let i_out = self.support_out.len() as u64;
        (3 * i_out + i_in) * n + 2 * fft_flop_count(self.n_x) + 7 * n
    }
}

/// Flop convention for one DFT of length n: `5 n ceil(log2 n)`.
pub fn fft_flop_count(n: usize) -> u64 {
    let log2 = (usize::BITS - (n.max(2) - 1).leading_zeros()) as u64;
    5 * n as u64 * log2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{DendriticDelta, FiringRate, SomaticKernel};

    fn plan_for(
        n_x: usize,
        n_xi: usize,
        l_x: f64,
        l_xi: f64,
        kernel: SomaticKernel,
        delta: DendriticDelta,
        xi_0: f64,
    ) -> (Grid, NonlocalPlan) {
        let grid = Grid::new(n_x, n_xi, l_x, l_xi).unwrap();
        let w = grid.quadrature_weights();
        let plan = NonlocalPlan::new(&grid, &w, &kernel, &delta, xi_0).unwrap();
        (grid, plan)
    }

    fn pseudo_random_field(rows: usize, cols: usize, seed: u64) -> Mat {
        let mut state = seed.wrapping_mul(2685821657736338717).wrapping_add(1);
        Mat::from_fn(rows, cols, |_, _| {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        })
    }

    #[test]
    fn generator_samples_wrapped_distances() {
        // n_x = 4, l_x = 2: displacements 0, 1, 2, 1
        let kernel = SomaticKernel::ExpDecay { kappa: 3.0 };
        let (_, plan) = plan_for(
            4,
            5,
            2.0,
            1.0,
            kernel,
            DendriticDelta::Gaussian { eps: 0.3 },
            0.0,
        );
        let expect: Vec<f64> = [0.0, 1.0, 2.0, 1.0].iter().map(|&d| kernel.eval(d)).collect();
        for (a, b) in plan.w_samples().iter().zip(&expect) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn generator_is_even_under_reflection() {
        let (_, plan) = plan_for(
            12,
            5,
            3.3,
            1.0,
            SomaticKernel::MexicanHat {
                a1: 1.0,
                b1: 1.0,
                a2: 0.25,
                b2: 0.5,
            },
            DendriticDelta::Gaussian { eps: 0.3 },
            0.2,
        );
        let w = plan.w_samples();
        for k in 1..12 {
            assert_eq!(w[k], w[12 - k]);
        }
    }

    #[test]
    fn w_hat_conjugate_symmetric() {
        let (_, plan) = plan_for(
            8,
            5,
            2.0,
            1.0,
            SomaticKernel::ExpDecay { kappa: 1.0 },
            DendriticDelta::Gaussian { eps: 0.3 },
            0.0,
        );
        let wh = plan.w_hat();
        for k in 1..8 {
            let a = wh[k];
            let b = wh[8 - k].conj();
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn centered_delta_gives_equal_profiles() {
        let (_, plan) = plan_for(
            4,
            9,
            2.0,
            1.0,
            SomaticKernel::ExpDecay { kappa: 1.0 },
            DendriticDelta::Gaussian { eps: 0.2 },
            0.0,
        );
        assert_eq!(plan.alpha(), plan.alpha_prime());
    }

    #[test]
    fn off_grid_truncated_delta_vanishes() {
        // h_xi = 0.5 > 2 eps, xi_0 between nodes and farther than eps from any
        let (_, plan) = plan_for(
            4,
            5,
            2.0,
            1.0,
            SomaticKernel::ExpDecay { kappa: 1.0 },
            DendriticDelta::TruncatedGaussian {
                eps: 0.1,
                kappa_d: 1.0,
            },
            0.25,
        );
        assert!(plan.support_in().is_empty());
        assert!(plan.coupling_vanishes());
        let v = Mat::filled(5, 4, 1.0);
        let rate = FiringRate::Sigmoid {
            beta: 5.0,
            theta: 0.0,
        };
        let n = plan.eval_compact(&rate, &v).unwrap();
        assert_eq!(n.max_abs(), 0.0);
    }

    #[test]
    fn zero_rate_gives_zero_coupling() {
        let (_, plan) = plan_for(
            8,
            7,
            2.0,
            1.0,
            SomaticKernel::ExpDecay { kappa: 2.0 },
            DendriticDelta::Gaussian { eps: 0.3 },
            0.2,
        );
        let rate = FiringRate::ShiftedSigmoid { beta: 10.0 };
        let v = Mat::zeros(7, 8);
        assert_eq!(plan.eval_direct(&rate, &v).unwrap().max_abs(), 0.0);
        assert_eq!(plan.eval_fft(&rate, &v).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn zero_kernel_gives_zero_coupling() {
        let (_, plan) = plan_for(
            8,
            7,
            2.0,
            1.0,
            SomaticKernel::ExpDecay { kappa: 0.0 },
            DendriticDelta::Gaussian { eps: 0.3 },
            0.0,
        );
        let rate = FiringRate::Sigmoid {
            beta: 5.0,
            theta: 0.1,
        };
        let v = pseudo_random_field(7, 8, 5);
        assert_eq!(plan.eval_direct(&rate, &v).unwrap().max_abs(), 0.0);
        assert!(plan.eval_fft(&rate, &v).unwrap().max_abs() < 1e-300);
    }

    #[test]
    fn constant_field_factorizes() {
        // For V ≡ c the sums factorize:
        // N_ij = alpha_i * (Σ_i' alpha'_i' sigma_i') * S(c) * h_x * Σ_k w_k
        let (grid, plan) = plan_for(
            4,
            5,
            2.0,
            1.0,
            SomaticKernel::ExpDecay { kappa: 3.0 },
            DendriticDelta::Gaussian { eps: 0.4 },
            0.5,
        );
        let rate = FiringRate::Sigmoid {
            beta: 2.0,
            theta: 0.25,
        };
        let c = 0.75;
        let v = Mat::filled(5, 4, c);
        let n = plan.eval_direct(&rate, &v).unwrap();
        let weights = grid.quadrature_weights();
        let col_mass: f64 = plan
            .alpha_prime()
            .iter()
            .zip(&weights.sigma)
            .map(|(a, s)| a * s)
            .sum();
        let ring: f64 = plan.w_samples().iter().sum::<f64>() * grid.h_x;
        for i in 0..5 {
            let want = plan.alpha()[i] * col_mass * rate.eval(c) * ring;
            for j in 0..4 {
                assert!((n.at(i, j) - want).abs() < 1e-12 * want.abs().max(1.0));
            }
        }
    }

    #[test]
    fn impulse_row_convolves_to_rotated_kernel() {
        // One active column -> the somatic profile of N is the generator
        // rotated to that column, scaled by the column mass.
        let (grid, plan) = plan_for(
            8,
            3,
            2.0,
            1.0,
            SomaticKernel::ExpDecay { kappa: 3.0 },
            DendriticDelta::Gaussian { eps: 0.4 },
            0.0,
        );
        // Heaviside at 0.5: only column 3 has V above threshold
        let rate = FiringRate::Heaviside { theta: 0.5 };
        let v = Mat::from_fn(3, 8, |_, j| if j == 3 { 1.0 } else { 0.0 });
        let n = plan.eval_fft(&rate, &v).unwrap();
        let weights = grid.quadrature_weights();
        let col_mass: f64 = plan
            .alpha_prime()
            .iter()
            .zip(&weights.sigma)
            .map(|(a, s)| a * s)
            .sum();
        for j in 0..8 {
            let want = plan.alpha()[1] * col_mass * grid.h_x * plan.w_samples()[(j + 8 - 3) % 8];
            assert!(
                (n.at(1, j) - want).abs() < 1e-12 * want.abs().max(1.0),
                "column {j}"
            );
        }
    }

    #[test]
    fn fft_matches_direct_oracle() {
        let rate = FiringRate::Sigmoid {
            beta: 4.0,
            theta: 0.1,
        };
        for (n_x, n_xi) in [(4usize, 5usize), (8, 9), (16, 17)] {
            let (_, plan) = plan_for(
                n_x,
                n_xi,
                2.5,
                1.2,
                SomaticKernel::MexicanHat {
                    a1: 1.0,
                    b1: 1.0,
                    a2: 0.25,
                    b2: 0.5,
                },
                DendriticDelta::Gaussian { eps: 0.3 },
                0.4,
            );
            for s in 0..10 {
                let v = pseudo_random_field(n_xi, n_x, s + 17 * n_x as u64);
                let nd = plan.eval_direct(&rate, &v).unwrap();
                let nf = plan.eval_fft(&rate, &v).unwrap();
                let scale = 1.0 + nd.max_abs();
                assert!(
                    nd.max_abs_diff(&nf) <= 1e-10 * scale,
                    "{n_x}x{n_xi} seed {s}"
                );
            }
        }
    }

    #[test]
    fn coupling_commutes_with_cyclic_shift() {
        let rate = FiringRate::Sigmoid {
            beta: 6.0,
            theta: 0.0,
        };
        let (_, plan) = plan_for(
            16,
            9,
            3.0,
            1.0,
            SomaticKernel::ExpDecay { kappa: 2.0 },
            DendriticDelta::Gaussian { eps: 0.25 },
            0.3,
        );
        let v = pseudo_random_field(9, 16, 99);
        let n = plan.eval_fft(&rate, &v).unwrap();
        for k in [1usize, 5, 11] {
            let v_shift = Mat::from_fn(9, 16, |i, j| v.at(i, (j + 16 - k) % 16));
            let n_shift = plan.eval_fft(&rate, &v_shift).unwrap();
            let scale = 1.0 + n.max_abs();
            for j in 0..16 {
                for i in 0..9 {
                    let d = (n_shift.at(i, (j + k) % 16) - n.at(i, j)).abs();
                    assert!(d <= 1e-12 * scale, "shift {k} at ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn compact_matches_fft_and_zero_rows_are_exact() {
        let delta = DendriticDelta::TruncatedGaussian {
            eps: 0.3,
            kappa_d: 2.0,
        };
        let (_, plan) = plan_for(
            16,
            17,
            3.0,
            1.0,
            SomaticKernel::ExpDecay { kappa: 2.0 },
            delta,
            0.5,
        );
        assert!(!plan.support_in().is_empty());
        assert!(plan.support_in().len() < 17);
        let rate = FiringRate::Sigmoid {
            beta: 4.0,
            theta: 0.1,
        };
        let v = pseudo_random_field(17, 16, 3);
        let nc = plan.eval_compact(&rate, &v).unwrap();
        let nf = plan.eval_fft(&rate, &v).unwrap();
        assert!(nc.max_abs_diff(&nf) <= 1e-12 * (1.0 + nf.max_abs()));
        for i in 0..17 {
            if !plan.support_in().contains(&i) {
                for j in 0..16 {
                    assert_eq!(nc.at(i, j), 0.0, "row {i} must stay untouched");
                }
            }
        }
    }

    #[test]
    fn compact_requires_truncated_delta() {
        let (_, plan) = plan_for(
            8,
            5,
            2.0,
            1.0,
            SomaticKernel::ExpDecay { kappa: 1.0 },
            DendriticDelta::Gaussian { eps: 0.3 },
            0.0,
        );
        let rate = FiringRate::Sigmoid {
            beta: 1.0,
            theta: 0.0,
        };
        assert!(plan.eval_compact(&rate, &Mat::zeros(5, 8)).is_err());
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let (_, plan) = plan_for(
            8,
            5,
            2.0,
            1.0,
            SomaticKernel::ExpDecay { kappa: 1.0 },
            DendriticDelta::Gaussian { eps: 0.3 },
            0.0,
        );
        let rate = FiringRate::Sigmoid {
            beta: 1.0,
            theta: 0.0,
        };
        assert!(plan.eval_fft(&rate, &Mat::zeros(4, 8)).is_err());
        assert!(plan.eval_direct(&rate, &Mat::zeros(5, 9)).is_err());
    }

    #[test]
    fn norm_bound_and_lipschitz_bound_hold() {
        // |N(V)|_inf <= n_x mu C_W C_S and
        // |N(V1)-N(V2)|_inf <= zeta |V1-V2|_inf with
        // zeta = n_x mu C_W sup|S'|
        let (grid, plan) = plan_for(
            12,
            9,
            2.0,
            1.0,
            SomaticKernel::MexicanHat {
                a1: 1.0,
                b1: 1.0,
                a2: 0.25,
                b2: 0.5,
            },
            DendriticDelta::Gaussian { eps: 0.25 },
            0.4,
        );
        let rate = FiringRate::Sigmoid {
            beta: 8.0,
            theta: 0.05,
        };
        let mu = grid.domain_measure();
        let c_w = plan.max_abs_coupling();
        let cap = grid.n_x as f64 * mu * c_w * rate.sup_abs();
        let zeta = grid.n_x as f64 * mu * c_w * rate.sup_slope().unwrap();
        for s in 0..5 {
            let v1 = pseudo_random_field(9, 12, 1000 + s);
            let v2 = pseudo_random_field(9, 12, 2000 + s);
            let n1 = plan.eval_direct(&rate, &v1).unwrap();
            let n2 = plan.eval_direct(&rate, &v2).unwrap();
            assert!(n1.inf_norm() <= cap * (1.0 + 1e-12));
            let dv = Mat::from_fn(9, 12, |i, j| v1.at(i, j) - v2.at(i, j));
            let dn = Mat::from_fn(9, 12, |i, j| n1.at(i, j) - n2.at(i, j));
            assert!(dn.inf_norm() <= zeta * dv.inf_norm() * (1.0 + 1e-12));
        }
    }

    #[test]
    fn resolution_flag() {
        let (_, plan) = plan_for(
            4,
            5,
            2.0,
            1.0, // h_xi = 0.5
            SomaticKernel::ExpDecay { kappa: 1.0 },
            DendriticDelta::Gaussian { eps: 0.1 },
            0.0,
        );
        assert!(!plan.delta_resolved());
        let (_, plan) = plan_for(
            4,
            41,
            2.0,
            1.0, // h_xi = 0.05
            SomaticKernel::ExpDecay { kappa: 1.0 },
            DendriticDelta::Gaussian { eps: 0.1 },
            0.0,
        );
        assert!(plan.delta_resolved());
    }
}
