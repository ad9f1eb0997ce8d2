//! Somato-dendritic grid and quadrature weights.
//!
//! The somatic direction is periodic on `(−Lx, Lx]` with `n_x` nodes
//! `x_j = −Lx + j·h_x` (j = 1..n_x, `h_x = 2Lx/n_x`); node `x_{n_x}` lands on
//! `Lx`, which is identified with `−Lx`. The dendritic direction covers
//! `[−Lξ, Lξ]` inclusive with `n_ξ` nodes `ξ_i = −Lξ + (i−1)·h_ξ`
//! (`h_ξ = 2Lξ/(n_ξ−1)`). Storage is 0-based: `x_nodes[k]` holds `x_{k+1}`
//! and `xi_nodes[k]` holds `ξ_{k+1}`.

use crate::error::{Error, Result};

/// Evenly spaced somato-dendritic grid. Immutable after construction;
/// safe to share across concurrent runs.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    /// Somatic node count.
    pub n_x: usize,
    /// Dendritic node count (≥ 3 so the Laplacian stencil has an interior row).
    pub n_xi: usize,
    /// Somatic half-length; the domain is the circle of circumference `2*l_x`.
    pub l_x: f64,
    /// Dendritic half-length.
    pub l_xi: f64,
    /// Somatic spacing `2*l_x/n_x`.
    pub h_x: f64,
    /// Dendritic spacing `2*l_xi/(n_xi-1)`.
    pub h_xi: f64,
    /// Somatic nodes, spanning `(-l_x, l_x]`.
    pub x_nodes: Vec<f64>,
    /// Dendritic nodes, spanning `[-l_xi, l_xi]` inclusive.
    pub xi_nodes: Vec<f64>,
}

/// Composite trapezium weights: identical weights on the periodic somatic
/// direction, endpoint-halved weights on the dendritic direction.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureWeights {
    /// Somatic weights, `rho[j] = h_x` for all j.
    pub rho: Vec<f64>,
    /// Dendritic weights, `h_xi` in the interior and `h_xi/2` at both ends.
    pub sigma: Vec<f64>,
}

impl Grid {
    /// Builds the grid, validating `n_x >= 2`, `n_xi >= 3` and positive,
    /// finite half-lengths.
    pub fn new(n_x: usize, n_xi: usize, l_x: f64, l_xi: f64) -> Result<Self> {
        if n_x < 2 {
            return Err(Error::Validation(format!("n_x must be >= 2, got {n_x}")));
        }
        if n_xi < 3 {
            return Err(Error::Validation(format!(
                "n_xi must be >= 3 (the dendritic Laplacian needs an interior node), got {n_xi}"
            )));
        }
        if !(l_x > 0.0 && l_x.is_finite()) {
            return Err(Error::Validation(format!(
                "l_x must be positive and finite, got {l_x}"
            )));
        }
        if !(l_xi > 0.0 && l_xi.is_finite()) {
            return Err(Error::Validation(format!(
                "l_xi must be positive and finite, got {l_xi}"
            )));
        }
        let h_x = 2.0 * l_x / n_x as f64;
        let h_xi = 2.0 * l_xi / (n_xi - 1) as f64;
        let x_nodes = (1..=n_x).map(|j| -l_x + j as f64 * h_x).collect();
        let xi_nodes = (0..n_xi).map(|i| -l_xi + i as f64 * h_xi).collect();
        Ok(Grid {
            n_x,
            n_xi,
            l_x,
            l_xi,
            h_x,
            h_xi,
            x_nodes,
            xi_nodes,
        })
    }

    /// Trapezium weights for this grid.
    pub fn quadrature_weights(&self) -> QuadratureWeights {
        let rho = vec![self.h_x; self.n_x];
        let mut sigma = vec![self.h_xi; self.n_xi];
        sigma[0] = 0.5 * self.h_xi;
        sigma[self.n_xi - 1] = 0.5 * self.h_xi;
        QuadratureWeights { rho, sigma }
    }

    /// Distance between two somatic coordinates on the circle of
    /// circumference `2*l_x`: `min(|a-b|, 2*l_x - |a-b|)`.
    pub fn wrapped_distance(&self, x_a: f64, x_b: f64) -> f64 {
        let period = 2.0 * self.l_x;
        let d = (x_a - x_b).abs() % period;
        d.min(period - d)
    }

    /// Index of the dendritic node closest to `xi` (ties resolve to the
    /// lower index).
    pub fn nearest_xi_index(&self, xi: f64) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, &node) in self.xi_nodes.iter().enumerate() {
            let d = (node - xi).abs();
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }

    /// Measure of the closed domain, `4 * l_x * l_xi`. The quadrature weights
    /// integrate the constant 1 to exactly this value (up to rounding).
    pub fn domain_measure(&self) -> f64 {
        4.0 * self.l_x * self.l_xi
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_match_formulas() {
        let g = Grid::new(4, 3, 2.0, 1.0).unwrap();
        assert_eq!(g.h_x, 1.0);
        assert_eq!(g.x_nodes, vec![-1.0, 0.0, 1.0, 2.0]);
        assert_eq!(g.h_xi, 1.0);
        assert_eq!(g.xi_nodes, vec![-1.0, 0.0, 1.0]);
    }

    #[test]
    fn high_resolution_spacing() {
        // h_x = 2*24π/1024 = 48π/1024
        let g = Grid::new(1 << 10, 1 << 12, 24.0 * std::f64::consts::PI, 3.0).unwrap();
        assert_eq!(g.h_x, 48.0 * std::f64::consts::PI / 1024.0);
        assert_eq!(g.x_nodes.len(), 1024);
        assert!((g.x_nodes[1023] - 24.0 * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn node_formulas_exact() {
        let g = Grid::new(37, 23, 1.7, 0.9).unwrap();
        for (k, &x) in g.x_nodes.iter().enumerate() {
            assert_eq!(x, -g.l_x + (k + 1) as f64 * g.h_x);
        }
        for (k, &xi) in g.xi_nodes.iter().enumerate() {
            assert_eq!(xi, -g.l_xi + k as f64 * g.h_xi);
        }
        assert_eq!(g.xi_nodes[0], -g.l_xi);
        assert_eq!(g.xi_nodes[g.n_xi - 1], g.l_xi);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(Grid::new(1, 3, 1.0, 1.0).is_err());
        assert!(Grid::new(4, 2, 1.0, 1.0).is_err());
        assert!(Grid::new(4, 3, 0.0, 1.0).is_err());
        assert!(Grid::new(4, 3, 1.0, -2.0).is_err());
        assert!(Grid::new(4, 3, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn trapezium_weights() {
        let g = Grid::new(4, 3, 2.0, 1.0).unwrap();
        let w = g.quadrature_weights();
        assert_eq!(w.rho, vec![1.0; 4]);
        assert_eq!(w.sigma, vec![0.5, 1.0, 0.5]);
    }

    #[test]
    fn weights_integrate_constants() {
        for (n_x, n_xi, l_x, l_xi) in [(4, 3, 2.0, 1.0), (17, 9, 5.3, 2.2), (128, 65, 75.0, 3.0)] {
            let g = Grid::new(n_x, n_xi, l_x, l_xi).unwrap();
            let w = g.quadrature_weights();
            let sx: f64 = w.rho.iter().sum();
            let sxi: f64 = w.sigma.iter().sum();
            assert!((sx - 2.0 * l_x).abs() <= 1e-12 * 2.0 * l_x);
            assert!((sxi - 2.0 * l_xi).abs() <= 1e-12 * 2.0 * l_xi);
            // applying (rho, sigma) to the all-ones field gives the measure
            let total: f64 = w
                .sigma
                .iter()
                .map(|s| s * w.rho.iter().sum::<f64>())
                .sum();
            assert!((total - g.domain_measure()).abs() <= 1e-12 * g.domain_measure());
        }
    }

    #[test]
    fn wrapped_distance_examples() {
        let g = Grid::new(4, 3, 2.0, 1.0).unwrap();
        assert_eq!(g.wrapped_distance(-1.5, 1.5), 1.0);
        assert_eq!(g.wrapped_distance(0.7, 0.7), 0.0);
        let gp = Grid::new(4, 3, std::f64::consts::PI, 1.0).unwrap();
        assert!((gp.wrapped_distance(0.0, std::f64::consts::PI) - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn wrapped_distance_symmetric_and_bounded() {
        let g = Grid::new(16, 5, 3.7, 1.0).unwrap();
        let pts = [-3.5, -1.0, 0.0, 0.3, 2.9, 3.7];
        for &a in &pts {
            for &b in &pts {
                let d = g.wrapped_distance(a, b);
                assert_eq!(d, g.wrapped_distance(b, a));
                assert!(d <= g.l_x + 1e-15);
                assert!(d >= 0.0);
            }
        }
    }

    #[test]
    fn nearest_xi() {
        let g = Grid::new(4, 5, 2.0, 1.0).unwrap();
        // nodes: -1, -0.5, 0, 0.5, 1
        assert_eq!(g.nearest_xi_index(0.0), 2);
        assert_eq!(g.nearest_xi_index(0.24), 2);
        assert_eq!(g.nearest_xi_index(0.26), 3);
        assert_eq!(g.nearest_xi_index(-5.0), 0);
    }
}
