//! Dense real matrix in column-major storage.
//!
//! Fields are stored with `rows = n_xi` (dendritic index) and `cols = n_x`
//! (somatic index), so each column is the contiguous voltage profile of one
//! cable. This makes the per-column tridiagonal solves and the per-column
//! dendritic reductions stride-1.

/// Column-major `rows x cols` matrix of f64.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn filled(rows: usize, cols: usize, value: f64) -> Self {
        Mat {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    /// Builds from `f(i, j)` with `i` the row (dendritic) and `j` the column
    /// (somatic) index, both 0-based.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.rows + i]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.data[j * self.rows + i]
    }

    #[inline]
    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    #[inline]
    pub fn col_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    /// Flat column-major view (column j occupies `[j*rows, (j+1)*rows)`).
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Entrywise maximum absolute value. NaN entries propagate: the result
    /// is NaN if any entry is NaN.
    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for &v in &self.data {
            let a = v.abs();
            if a > m || a.is_nan() {
                m = a;
            }
        }
        m
    }

    /// Induced infinity norm: maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        let mut sums = vec![0.0f64; self.rows];
        for j in 0..self.cols {
            for (i, &v) in self.col(j).iter().enumerate() {
                sums[i] += v.abs();
            }
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Mat) -> f64 {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

/// Restriction of a fine-grid field to the nodes of a coarse grid whose
/// spacings are `ratio` times larger, for paired (h_x, h_xi) refinement.
///
/// Node conventions (see [`crate::grid`]): the coarse dendritic node `i`
/// coincides with fine node `i*ratio`; the coarse somatic node `j` (0-based,
/// i.e. `x = -l_x + (j+1) h_c`) coincides with fine node `(j+1)*ratio - 1`.
pub fn restrict_to_coarse(fine: &Mat, ratio: usize) -> Mat {
    assert!(ratio >= 1);
    assert_eq!((fine.rows() - 1) % ratio, 0, "dendritic intervals must divide");
    assert_eq!(fine.cols() % ratio, 0, "somatic nodes must divide");
    let rows = (fine.rows() - 1) / ratio + 1;
    let cols = fine.cols() / ratio;
    Mat::from_fn(rows, cols, |i, j| fine.at(i * ratio, (j + 1) * ratio - 1))
}
