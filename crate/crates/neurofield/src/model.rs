//! Physical parameters, firing rates, somatic kernels and dendritic contact
//! profiles, together with the closed-form quantities (Fourier transforms,
//! slopes at rest) needed by the linear stability analysis.

use crate::error::{Error, Result};

/// Exponent arguments are clamped to this magnitude before `exp`; beyond it
/// the sigmoid is 0 or 1 to machine precision anyway.
const EXP_ARG_LIMIT: f64 = 700.0;

fn clamped_exp(t: f64) -> f64 {
    t.clamp(-EXP_ARG_LIMIT, EXP_ARG_LIMIT).exp()
}

/// Cable and coupling-geometry parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    /// Leak rate; `1/gamma` is the membrane time constant.
    pub gamma: f64,
    /// Diffusion coefficient along the fibre.
    pub nu: f64,
    /// Dendritic contact offset: inputs arrive near `xi = xi_0`.
    pub xi_0: f64,
    /// Width of the contact profile `delta_eps`.
    pub eps: f64,
}

impl PhysicalParams {
    pub fn new(gamma: f64, nu: f64, xi_0: f64, eps: f64) -> Result<Self> {
        for (name, v, positive) in [
            ("gamma", gamma, true),
            ("nu", nu, true),
            ("xi_0", xi_0, false),
            ("eps", eps, true),
        ] {
            if !v.is_finite() {
                return Err(Error::Validation(format!("{name} must be finite, got {v}")));
            }
            if positive && v <= 0.0 {
                return Err(Error::Validation(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(PhysicalParams {
            gamma,
            nu,
            xi_0,
            eps,
        })
    }
}

/// Voltage-to-rate nonlinearity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FiringRate {
    /// `S(v) = 1/(1 + exp(-beta (v - theta)))`, output in (0, 1).
    Sigmoid { beta: f64, theta: f64 },
    /// `S(v) = 1/(1 + exp(-beta v)) - 1/2`, output in (-1/2, 1/2) with
    /// `S(0) = 0`, so `V = 0` is an exact rest state.
    ShiftedSigmoid { beta: f64 },
    /// Step at `theta`; returns 1/2 at the threshold (midpoint convention).
    Heaviside { theta: f64 },
}

impl FiringRate {
    pub fn validate(&self) -> Result<()> {
        let check_beta = |beta: f64| {
            if beta > 0.0 && beta.is_finite() {
                Ok(())
            } else {
                Err(Error::Validation(format!(
                    "beta must be positive and finite, got {beta}"
                )))
            }
        };
        let check_theta = |theta: f64| {
            if theta.is_finite() {
                Ok(())
            } else {
                Err(Error::Validation(format!(
                    "theta must be finite, got {theta}"
                )))
            }
        };
        match *self {
            FiringRate::Sigmoid { beta, theta } => {
                check_beta(beta)?;
                check_theta(theta)
            }
            FiringRate::ShiftedSigmoid { beta } => check_beta(beta),
            FiringRate::Heaviside { theta } => check_theta(theta),
        }
    }

    #[inline]
    pub fn eval(&self, v: f64) -> f64 {
        match *self {
            FiringRate::Sigmoid { beta, theta } => 1.0 / (1.0 + clamped_exp(-beta * (v - theta))),
            FiringRate::ShiftedSigmoid { beta } => 1.0 / (1.0 + clamped_exp(-beta * v)) - 0.5,
            FiringRate::Heaviside { theta } => {
                if v > theta {
                    1.0
                } else if v < theta {
                    0.0
                } else {
                    0.5
                }
            }
        }
    }

    /// `S'(0)`, the slope at the rest state, needed by the dispersion
    /// relation. Undefined for the Heaviside variant.
    pub fn slope_at_zero(&self) -> Result<f64> {
        match *self {
            FiringRate::Sigmoid { beta, .. } => {
                let s = self.eval(0.0);
                Ok(beta * s * (1.0 - s))
            }
            FiringRate::ShiftedSigmoid { beta } => Ok(0.25 * beta),
            FiringRate::Heaviside { .. } => Err(Error::Domain(
                "slope undefined at threshold for the Heaviside firing rate".into(),
            )),
        }
    }

    /// `sup |S|`, the constant `C_S` of the boundedness hypothesis.
    pub fn sup_abs(&self) -> f64 {
        match self {
            FiringRate::Sigmoid { .. } | FiringRate::Heaviside { .. } => 1.0,
            FiringRate::ShiftedSigmoid { .. } => 0.5,
        }
    }

    /// `sup |S'|` for the smooth variants (`beta/4`), `None` for Heaviside.
    pub fn sup_slope(&self) -> Option<f64> {
        match *self {
            FiringRate::Sigmoid { beta, .. } | FiringRate::ShiftedSigmoid { beta } => {
                Some(0.25 * beta)
            }
            FiringRate::Heaviside { .. } => None,
        }
    }
}

/// Somatic connectivity strength as a function of distance along the layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SomaticKernel {
    /// `w(x) = (kappa/2) exp(-|x|/2)`; purely excitatory.
    ExpDecay { kappa: f64 },
    /// `w(x) = a1 exp(-b1 |x|) - a2 exp(-b2 |x|)`; short-range excitation
    /// with long-range inhibition when `a1 > a2`, `b1 > b2`.
    MexicanHat { a1: f64, b1: f64, a2: f64, b2: f64 },
}

impl SomaticKernel {
    /// Amplitudes may be zero (a vanishing kernel decouples the layer, which
    /// some diagnostics rely on); decay rates must be strictly positive.
    pub fn validate(&self) -> Result<()> {
        match *self {
            SomaticKernel::ExpDecay { kappa } => {
                if !(kappa >= 0.0 && kappa.is_finite()) {
                    return Err(Error::Validation(format!(
                        "kappa must be non-negative and finite, got {kappa}"
                    )));
                }
            }
            SomaticKernel::MexicanHat { a1, b1, a2, b2 } => {
                for (name, v) in [("a_1", a1), ("a_2", a2)] {
                    if !(v >= 0.0 && v.is_finite()) {
                        return Err(Error::Validation(format!(
                            "{name} must be non-negative and finite, got {v}"
                        )));
                    }
                }
                for (name, v) in [("b_1", b1), ("b_2", b2)] {
                    if !(v > 0.0 && v.is_finite()) {
                        return Err(Error::Validation(format!(
                            "{name} must be positive and finite, got {v}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Kernel value at distance `d >= 0` (callers pass a wrapped distance).
    #[inline]
    pub fn eval(&self, d: f64) -> f64 {
        match *self {
            SomaticKernel::ExpDecay { kappa } => 0.5 * kappa * (-0.5 * d).exp(),
            SomaticKernel::MexicanHat { a1, b1, a2, b2 } => {
                a1 * (-b1 * d).exp() - a2 * (-b2 * d).exp()
            }
        }
    }

    /// Fourier transform `∫ w(|y|) e^{-ipy} dy`, real because `w` is even.
    /// Uses the closed form: the transform of `a e^{-b|x|}` is
    /// `2ab/(b^2 + p^2)`.
    pub fn fourier(&self, p: f64) -> f64 {
        match *self {
            SomaticKernel::ExpDecay { kappa } => 0.5 * kappa / (0.25 + p * p),
            SomaticKernel::MexicanHat { a1, b1, a2, b2 } => {
                2.0 * a1 * b1 / (b1 * b1 + p * p) - 2.0 * a2 * b2 / (b2 * b2 + p * p)
            }
        }
    }
}

/// Dendritic contact profile `delta_eps`, concentrating input transfer near a
/// point on the fibre.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DendriticDelta {
    /// `exp(-xi^2/eps^2)/(eps sqrt(pi))`; unit mass.
    Gaussian { eps: f64 },
    /// `kappa_d exp(-xi^2/eps^2)` cut off to zero outside `(-eps, eps)`.
    /// Compact support enables the sparse fast path, at the cost of the
    /// smoothness the convergence theory assumes.
    TruncatedGaussian { eps: f64, kappa_d: f64 },
}

impl DendriticDelta {
    pub fn validate(&self) -> Result<()> {
        let (eps, kd) = match *self {
            DendriticDelta::Gaussian { eps } => (eps, 1.0),
            DendriticDelta::TruncatedGaussian { eps, kappa_d } => (eps, kappa_d),
        };
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::Validation(format!(
                "eps must be positive and finite, got {eps}"
            )));
        }
        if !(kd > 0.0 && kd.is_finite()) {
            return Err(Error::Validation(format!(
                "kappa_d must be positive and finite, got {kd}"
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn eval(&self, xi: f64) -> f64 {
        match *self {
            DendriticDelta::Gaussian { eps } => {
                let t = xi / eps;
                (-t * t).exp() / (eps * std::f64::consts::PI.sqrt())
            }
            DendriticDelta::TruncatedGaussian { eps, kappa_d } => {
                if xi.abs() >= eps {
                    0.0
                } else {
                    let t = xi / eps;
                    kappa_d * (-t * t).exp()
                }
            }
        }
    }

    /// True for the compactly supported variant.
    pub fn is_compact(&self) -> bool {
        matches!(self, DendriticDelta::TruncatedGaussian { .. })
    }

    pub fn eps(&self) -> f64 {
        match *self {
            DendriticDelta::Gaussian { eps } | DendriticDelta::TruncatedGaussian { eps, .. } => eps,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigmoid_hits_half_at_threshold() {
        let s = FiringRate::Sigmoid {
            beta: 1000.0,
            theta: 0.01,
        };
        assert_eq!(s.eval(0.01), 0.5);
    }

    #[test]
    fn shifted_sigmoid_rests_at_zero() {
        let s = FiringRate::ShiftedSigmoid { beta: 30.0 };
        assert_eq!(s.eval(0.0), 0.0);
    }

    #[test]
    fn steep_sigmoid_saturates_without_overflow() {
        let s = FiringRate::Sigmoid {
            beta: 1000.0,
            theta: 0.01,
        };
        // 1/(1 + e^{-990}) = 1 to machine precision
        assert!((s.eval(1.0) - 1.0).abs() <= 1e-12);
        // clamped exponent: fully saturated, no overflow
        assert!(s.eval(-1e6) < 1e-300);
        assert!(s.eval(1e308).is_finite());
    }

    #[test]
    fn heaviside_tie_break() {
        let s = FiringRate::Heaviside { theta: 0.3 };
        assert_eq!(s.eval(0.4), 1.0);
        assert_eq!(s.eval(0.2), 0.0);
        assert_eq!(s.eval(0.3), 0.5);
        assert!(s.slope_at_zero().is_err());
    }

    #[test]
    fn slopes_at_zero() {
        let s = FiringRate::ShiftedSigmoid { beta: 28.0 };
        assert!((s.slope_at_zero().unwrap() - 7.0).abs() < 1e-15);
        let s = FiringRate::ShiftedSigmoid { beta: 4.0 };
        assert!((s.slope_at_zero().unwrap() - 1.0).abs() < 1e-15);
        let s = FiringRate::Sigmoid {
            beta: 2.0,
            theta: 0.0,
        };
        assert!((s.slope_at_zero().unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn slope_matches_centered_differences() {
        let h = 1e-6;
        for rate in [
            FiringRate::Sigmoid {
                beta: 3.0,
                theta: 0.2,
            },
            FiringRate::Sigmoid {
                beta: 11.0,
                theta: -0.4,
            },
            FiringRate::ShiftedSigmoid { beta: 28.0 },
        ] {
            let fd = (rate.eval(h) - rate.eval(-h)) / (2.0 * h);
            let exact = rate.slope_at_zero().unwrap();
            assert!(
                (fd - exact).abs() <= 1e-6 * exact.abs(),
                "{rate:?}: fd {fd} vs {exact}"
            );
        }
    }

    #[test]
    fn rates_are_monotone() {
        for rate in [
            FiringRate::Sigmoid {
                beta: 7.0,
                theta: 0.1,
            },
            FiringRate::ShiftedSigmoid { beta: 5.0 },
            FiringRate::Heaviside { theta: 0.0 },
        ] {
            let mut prev = f64::NEG_INFINITY;
            let mut v = -5.0;
            while v <= 5.0 {
                let s = rate.eval(v);
                assert!(s >= prev - 1e-15, "{rate:?} not monotone at {v}");
                prev = s;
                v += 0.01;
            }
        }
    }

    #[test]
    fn kernel_values() {
        let mh = SomaticKernel::MexicanHat {
            a1: 1.0,
            b1: 1.0,
            a2: 0.25,
            b2: 0.5,
        };
        assert_eq!(mh.eval(0.0), 0.75);
        let ed = SomaticKernel::ExpDecay { kappa: 3.0 };
        assert_eq!(ed.eval(0.0), 1.5);
        // (kappa/2) e^{-1}
        assert!((ed.eval(2.0) - 0.5518191617571635).abs() < 1e-15);
    }

    #[test]
    fn kernel_fourier_closed_forms() {
        let mh = SomaticKernel::MexicanHat {
            a1: 1.0,
            b1: 1.0,
            a2: 0.25,
            b2: 0.5,
        };
        // 2 a1/b1 - 2 a2/b2 = 2 - 1
        assert!((mh.fourier(0.0) - 1.0).abs() < 1e-15);
        let ed = SomaticKernel::ExpDecay { kappa: 3.0 };
        assert!((ed.fourier(0.0) - 6.0).abs() < 1e-15);
        // global maximum of the mexican-hat transform, located numerically
        // from the closed form (stationarity checked below)
        let p_star = 0.400235705364829;
        assert!((mh.fourier(p_star) - 1.11438191683587).abs() < 1e-10);
        let d = 1e-6;
        let deriv = (mh.fourier(p_star + d) - mh.fourier(p_star - d)) / (2.0 * d);
        assert!(deriv.abs() < 1e-6);
    }

    #[test]
    fn kernel_fourier_matches_quadrature() {
        // trapezium quadrature of ∫ w(|y|) cos(py) dy over 40 decay lengths
        let quad = |kernel: &SomaticKernel, p: f64, decay_len: f64| {
            let half = 40.0 * decay_len;
            let n = 800_000usize;
            let h = 2.0 * half / n as f64;
            let mut sum = 0.0;
            for k in 0..=n {
                let y = -half + k as f64 * h;
                let w = if k == 0 || k == n { 0.5 } else { 1.0 };
                sum += w * kernel.eval(y.abs()) * (p * y).cos();
            }
            sum * h
        };
        let kernels = [
            (SomaticKernel::ExpDecay { kappa: 3.0 }, 2.0),
            (
                SomaticKernel::MexicanHat {
                    a1: 1.0,
                    b1: 1.0,
                    a2: 0.25,
                    b2: 0.5,
                },
                2.0,
            ),
        ];
        // deterministic pseudo-random p values in (0, 3]
        let mut x = 0.5f64;
        for _ in 0..20 {
            x = (x * 9301.0 + 49297.0) % 233280.0 / 233280.0;
            let p = 3.0 * x.max(1e-3);
            for (kernel, decay) in &kernels {
                let q = quad(kernel, p, *decay);
                assert!(
                    (q - kernel.fourier(p)).abs() < 1e-8,
                    "{kernel:?} at p={p}: {q} vs {}",
                    kernel.fourier(p)
                );
            }
        }
    }

    #[test]
    fn delta_values() {
        let g = DendriticDelta::Gaussian { eps: 0.005 };
        assert!((g.eval(0.0) - 112.83791670955126).abs() < 1e-10);
        assert_eq!(g.eval(0.37), g.eval(-0.37));
        let t = DendriticDelta::TruncatedGaussian {
            eps: 0.005,
            kappa_d: 1.0,
        };
        assert_eq!(t.eval(0.01), 0.0);
        assert_eq!(t.eval(0.005), 0.0);
        assert!(t.eval(0.004) > 0.0);
    }

    #[test]
    fn gaussian_delta_has_unit_mass() {
        // trapezium on a grid resolving eps (h <= eps/4)
        let eps = 0.02;
        let g = DendriticDelta::Gaussian { eps };
        let l = 1.0;
        let n = 801usize; // h = 2/800 = 0.0025 = eps/8
        let h = 2.0 * l / (n - 1) as f64;
        let mut sum = 0.0;
        for k in 0..n {
            let xi = -l + k as f64 * h;
            let w = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
            sum += w * g.eval(xi);
        }
        sum *= h;
        assert!((sum - 1.0).abs() < 1e-6);
    }

    #[test]
    fn validation_rejects_bad_parameters() {
        assert!(PhysicalParams::new(0.0, 1.0, 0.0, 0.1).is_err());
        assert!(PhysicalParams::new(1.0, -1.0, 0.0, 0.1).is_err());
        assert!(PhysicalParams::new(1.0, 1.0, f64::INFINITY, 0.1).is_err());
        assert!(PhysicalParams::new(1.0, 1.0, 0.0, 0.0).is_err());
        assert!(FiringRate::Sigmoid {
            beta: 0.0,
            theta: 0.0
        }
        .validate()
        .is_err());
        assert!(SomaticKernel::ExpDecay { kappa: -1.0 }.validate().is_err());
        assert!(SomaticKernel::MexicanHat {
            a1: 1.0,
            b1: 0.0,
            a2: 0.25,
            b2: 0.5
        }
        .validate()
        .is_err());
        assert!(DendriticDelta::Gaussian { eps: 0.0 }.validate().is_err());
        // zero kernel is allowed: it decouples the layer
        assert!(SomaticKernel::ExpDecay { kappa: 0.0 }.validate().is_ok());
    }
}
