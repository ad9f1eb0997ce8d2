//! Dendritic differentiation matrix and the per-step linear solves.
//!
//! The second-order centred stencil with Neumann rows folded in is
//!
//! ```text
//!        ( -2   2            )
//!        (  1  -2   1        )
//! Δ  =   (     ..  ..  ..    ),    D_ξξ = Δ / h_ξ²,
//!        (         1  -2   1 )
//!        (             2  -2 )
//! ```
//!
//! and the implicit matrix of one backward-Euler substep is
//! `A = (1 + γτ) I − τν D_ξξ`. `A` is strictly diagonally dominant with row
//! margin exactly `1 + γτ`, so its LU factorization needs no pivoting and
//! `|A⁻¹|_∞ ≤ 1/(1 + γτ)`. The factorization is computed once per run and
//! reused as a multi-right-hand-side solver across the `n_x` columns of every
//! step.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::matrix::Mat;

/// Pivot guard for the unpivoted LU; valid inputs stay far above this.
const MIN_PIVOT: f64 = 1e-14;

/// Tridiagonal matrix: `lower` and `upper` have length `n-1`, `main` has
/// length `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalMatrix {
    pub lower: Vec<f64>,
    pub main: Vec<f64>,
    pub upper: Vec<f64>,
}

impl TridiagonalMatrix {
    pub fn dim(&self) -> usize {
        self.main.len()
    }

    /// Dense n x n copy, for small-system oracles and tests.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            m[i][i] = self.main[i];
            if i + 1 < n {
                m[i][i + 1] = self.upper[i];
                m[i + 1][i] = self.lower[i];
            }
        }
        m
    }

    /// `y = M x` for a length-n vector.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(x.len(), n);
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut s = self.main[i] * x[i];
            if i > 0 {
                s += self.lower[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                s += self.upper[i] * x[i + 1];
            }
            y[i] = s;
        }
        y
    }
}

/// Finite-difference dendritic Laplacian `D_ξξ = Δ/h_ξ²` with Neumann
/// boundary rows. The corner entries are 2, not 1, exactly as the stencil
/// above prescribes; the symmetrized alternative is deliberately not used.
pub fn build_laplacian(grid: &Grid) -> TridiagonalMatrix {
    let n = grid.n_xi;
    let s = 1.0 / (grid.h_xi * grid.h_xi);
    let mut lower = vec![s; n - 1];
    let mut upper = vec![s; n - 1];
    let main = vec![-2.0 * s; n];
    upper[0] = 2.0 * s;
    lower[n - 2] = 2.0 * s;
    TridiagonalMatrix { lower, main, upper }
}

/// `A = (1 + gamma*tau) I - tau*nu*D`. Strictly diagonally dominant by rows:
/// `|A_ii| - sum_j |A_ij| = 1 + gamma*tau` exactly, for every row.
pub fn build_a(d: &TridiagonalMatrix, gamma: f64, nu: f64, tau: f64) -> TridiagonalMatrix {
    let c = tau * nu;
    TridiagonalMatrix {
        lower: d.lower.iter().map(|v| -c * v).collect(),
        main: d.main.iter().map(|v| 1.0 + gamma * tau - c * v).collect(),
        upper: d.upper.iter().map(|v| -c * v).collect(),
    }
}

/// Unpivoted LU of a tridiagonal matrix: `L` is unit lower bidiagonal
/// (one subdiagonal), `U` upper bidiagonal (diagonal + superdiagonal).
/// Three vectors in total.
#[derive(Debug, Clone)]
pub struct TridiagFactorization {
    /// Subdiagonal of L, length n-1.
    l_sub: Vec<f64>,
    /// Diagonal of U, length n; strictly positive for matrices from `build_a`.
    u_diag: Vec<f64>,
    /// Superdiagonal of U (equal to the superdiagonal of A), length n-1.
    u_super: Vec<f64>,
}

impl TridiagFactorization {
    /// Factorizes without pivoting. Fails with a singularity error if any
    /// pivot magnitude drops below 1e-14.
    pub fn new(a: &TridiagonalMatrix) -> Result<Self> {
        let n = a.dim();
        let mut l_sub = vec![0.0; n - 1];
        let mut u_diag = vec![0.0; n];
        let u_super = a.upper.clone();
        u_diag[0] = a.main[0];
        for i in 1..n {
            let pivot = u_diag[i - 1];
            if pivot.abs() < MIN_PIVOT {
                return Err(Error::SingularPivot {
                    row: i - 1,
                    pivot,
                    limit: MIN_PIVOT,
                });
            }
            let l = a.lower[i - 1] / pivot;
            l_sub[i - 1] = l;
            u_diag[i] = a.main[i] - l * u_super[i - 1];
        }
        if u_diag[n - 1].abs() < MIN_PIVOT {
            return Err(Error::SingularPivot {
                row: n - 1,
                pivot: u_diag[n - 1],
                limit: MIN_PIVOT,
            });
        }
        Ok(TridiagFactorization {
            l_sub,
            u_diag,
            u_super,
        })
    }

    pub fn dim(&self) -> usize {
        self.u_diag.len()
    }

    pub fn l_sub(&self) -> &[f64] {
        &self.l_sub
    }

    pub fn u_diag(&self) -> &[f64] {
        &self.u_diag
    }

    pub fn u_super(&self) -> &[f64] {
        &self.u_super
    }

    /// Solves `A x = b` for one column in place: forward substitution
    /// (2n-2 flops) then backward substitution (3n-2 flops).
    pub fn solve_column_in_place(&self, b: &mut [f64]) {
        let n = self.dim();
        debug_assert_eq!(b.len(), n);
        for i in 1..n {
            b[i] -= self.l_sub[i - 1] * b[i - 1];
        }
        b[n - 1] /= self.u_diag[n - 1];
        for i in (0..n - 1).rev() {
            b[i] = (b[i] - self.u_super[i] * b[i + 1]) / self.u_diag[i];
        }
    }

    /// Solves `A X = B` in place, column by column. The column loop is
    /// sequential so results are bitwise reproducible.
    pub fn solve_in_place(&self, b: &mut Mat) -> Result<()> {
        if b.rows() != self.dim() {
            return Err(Error::Dimension(format!(
                "solve expects {} rows, got {}",
                self.dim(),
                b.rows()
            )));
        }
        for j in 0..b.cols() {
            self.solve_column_in_place(b.col_mut(j));
        }
        Ok(())
    }
}

/// Bound `|A⁻¹|_∞ ≤ 1/(1 + gamma*tau)` implied by strict diagonal dominance.
pub fn inverse_inf_norm_bound(gamma: f64, tau: f64) -> f64 {
    1.0 / (1.0 + gamma * tau)
}

/// Flop count of one tridiagonal factorization (paper-style convention).
pub fn factorize_flop_count(n: usize) -> u64 {
    2 * n as u64 + 1
}

/// Flop count of forward+backward substitution for `cols` right-hand sides.
pub fn solve_flop_count(n: usize, cols: usize) -> u64 {
    (5 * n as u64 - 4) * cols as u64
}
