//! Probability tables as elements of the simplex under Aitchison geometry.
//!
//! An `I x J` table of strictly positive cells summing to one is a point of
//! the simplex. Perturbation (cellwise product plus closure) and powering
//! (cellwise power plus closure) make the simplex a vector space, and the
//! centered log-ratio (clr) transform maps it isometrically onto the
//! hyperplane of zero-sum real tables, pulling the Euclidean metric back as
//! the Aitchison inner product, norm, and distance.
//!
//! Every product of cell probabilities here is evaluated in log space;
//! geometric means are the exponential of mean logs. Tables of even modest
//! size underflow `f64` otherwise.

use crate::error::TableError;

/// Absolute tolerance for the unit-sum invariant of a probability table.
pub const PROB_SUM_TOL: f64 = 1e-12;

/// Per-cell tolerance for the zero-sum invariant of a clr table; the check
/// scales it by the number of cells.
pub const CLR_SUM_TOL: f64 = 1e-9;

/// Shape of a table. Both sides must be at least two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dims {
    rows: usize,
    cols: usize,
}

impl Dims {
    pub fn new(rows: usize, cols: usize) -> Result<Self, TableError> {
        if rows < 2 || cols < 2 {
            return Err(TableError::DimsTooSmall { rows, cols });
        }
        Ok(Dims { rows, cols })
    }

    pub fn square(size: usize) -> Result<Self, TableError> {
        Dims::new(size, size)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Total number of cells.
    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub(crate) fn idx(&self, row: usize, col: usize) -> usize {
        debug_assert!(row < self.rows && col < self.cols);
        row * self.cols + col
    }

    pub(crate) fn require_square(&self) -> Result<(), TableError> {
        if !self.is_square() {
            return Err(TableError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(())
    }

    pub(crate) fn require_match(&self, other: &Dims) -> Result<(), TableError> {
        if self != other {
            return Err(TableError::DimMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            });
        }
        Ok(())
    }

    fn check_len(&self, len: usize) -> Result<(), TableError> {
        if len != self.len() {
            return Err(TableError::LengthMismatch {
                len,
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(())
    }
}

/// Raw observed frequencies of a contingency table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    dims: Dims,
    counts: Vec<u64>,
}

impl CountTable {
    pub fn new(dims: Dims, counts: Vec<u64>) -> Result<Self, TableError> {
        dims.check_len(counts.len())?;
        if counts.iter().all(|&c| c == 0) {
            return Err(TableError::EmptyCounts);
        }
        Ok(CountTable { dims, counts })
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.counts[self.dims.idx(row, col)]
    }

    /// Total number of observations.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Closure of a positive composition: scale to unit sum.
///
/// This is the vector form used for geometric margins; whole tables go
/// through [`ProbabilityTable::closure`].
pub fn closure_vector(raw: &[f64]) -> Result<Vec<f64>, TableError> {
    for (i, &v) in raw.iter().enumerate() {
        if !(v > 0.0) || !v.is_finite() {
            return Err(TableError::NonPositiveEntry {
                row: 0,
                col: i,
                value: v,
            });
        }
    }
    let sum: f64 = raw.iter().sum();
    Ok(raw.iter().map(|v| v / sum).collect())
}

/// A strictly positive table with unit sum: one point of the simplex.
///
/// Stored row-major. Construction always re-closes the input, so the unit
/// sum holds within [`PROB_SUM_TOL`] by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityTable {
    dims: Dims,
    probs: Vec<f64>,
}

impl ProbabilityTable {
    /// Closure operator: validate strict positivity and scale to unit sum.
    pub fn closure(dims: Dims, raw: &[f64]) -> Result<Self, TableError> {
        dims.check_len(raw.len())?;
        for (k, &v) in raw.iter().enumerate() {
            if !(v > 0.0) || !v.is_finite() {
                return Err(TableError::NonPositiveEntry {
                    row: k / dims.cols(),
                    col: k % dims.cols(),
                    value: v,
                });
            }
        }
        let sum: f64 = raw.iter().sum();
        let probs = raw.iter().map(|v| v / sum).collect();
        let table = ProbabilityTable { dims, probs };
        debug_assert!((table.probs.iter().sum::<f64>() - 1.0).abs() <= PROB_SUM_TOL);
        Ok(table)
    }

    /// The uniform table: the additive identity of the simplex.
    pub fn uniform(dims: Dims) -> Self {
        let p = 1.0 / dims.len() as f64;
        ProbabilityTable {
            dims,
            probs: vec![p; dims.len()],
        }
    }

    /// Build the table whose cells are proportional to `exp(logs)`.
    ///
    /// Shifts by the maximum before exponentiating, so any finite log
    /// weights are safe.
    pub(crate) fn from_logs(dims: Dims, logs: &[f64]) -> Self {
        debug_assert_eq!(logs.len(), dims.len());
        debug_assert!(logs.iter().all(|v| v.is_finite()));
        let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut probs: Vec<f64> = logs.iter().map(|&l| (l - max).exp()).collect();
        let sum: f64 = probs.iter().sum();
        for p in &mut probs {
            *p /= sum;
        }
        ProbabilityTable { dims, probs }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    /// Row-major cell probabilities.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.probs[self.dims.idx(row, col)]
    }

    /// Natural log of every cell, row-major.
    pub(crate) fn logs(&self) -> Vec<f64> {
        self.probs.iter().map(|p| p.ln()).collect()
    }

    /// Perturbation: the addition of Aitchison geometry.
    pub fn perturb(&self, other: &Self) -> Result<Self, TableError> {
        self.dims.require_match(&other.dims)?;
        let logs: Vec<f64> = self
            .logs()
            .iter()
            .zip(other.logs().iter())
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self::from_logs(self.dims, &logs))
    }

    /// Powering: the scalar multiplication of Aitchison geometry.
    pub fn power(&self, alpha: f64) -> Self {
        assert!(alpha.is_finite(), "powering exponent must be finite");
        let logs: Vec<f64> = self.logs().iter().map(|l| alpha * l).collect();
        Self::from_logs(self.dims, &logs)
    }

    /// Perturbation-difference: `self` perturbed by the inverse of `other`.
    pub fn ominus(&self, other: &Self) -> Result<Self, TableError> {
        self.dims.require_match(&other.dims)?;
        let logs: Vec<f64> = self
            .logs()
            .iter()
            .zip(other.logs().iter())
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self::from_logs(self.dims, &logs))
    }

    /// Transpose of a square table.
    pub fn transpose(&self) -> Result<Self, TableError> {
        self.dims.require_square()?;
        let n = self.dims.rows();
        let mut probs = vec![0.0; self.probs.len()];
        for i in 0..n {
            for j in 0..n {
                probs[self.dims.idx(i, j)] = self.probs[self.dims.idx(j, i)];
            }
        }
        Ok(ProbabilityTable {
            dims: self.dims,
            probs,
        })
    }

    /// Geometric mean of all cells.
    pub fn geometric_mean(&self) -> f64 {
        let logs = self.logs();
        (logs.iter().sum::<f64>() / logs.len() as f64).exp()
    }

    /// Mean log of each row; `exp` of these are the row geometric means.
    pub(crate) fn row_log_means(&self) -> Vec<f64> {
        let (rows, cols) = (self.dims.rows(), self.dims.cols());
        (0..rows)
            .map(|i| {
                (0..cols)
                    .map(|j| self.probs[self.dims.idx(i, j)].ln())
                    .sum::<f64>()
                    / cols as f64
            })
            .collect()
    }

    pub(crate) fn col_log_means(&self) -> Vec<f64> {
        let (rows, cols) = (self.dims.rows(), self.dims.cols());
        (0..cols)
            .map(|j| {
                (0..rows)
                    .map(|i| self.probs[self.dims.idx(i, j)].ln())
                    .sum::<f64>()
                    / rows as f64
            })
            .collect()
    }

    /// Geometric mean of each row.
    pub fn row_geomeans(&self) -> Vec<f64> {
        self.row_log_means().iter().map(|l| l.exp()).collect()
    }

    /// Geometric mean of each column.
    pub fn col_geomeans(&self) -> Vec<f64> {
        self.col_log_means().iter().map(|l| l.exp()).collect()
    }

    /// Row geometric margin: the closure of the row geometric means.
    pub fn row_margin(&self) -> Vec<f64> {
        closure_vector(&self.row_geomeans()).expect("geometric means of a valid table are positive")
    }

    /// Column geometric margin: the closure of the column geometric means.
    pub fn col_margin(&self) -> Vec<f64> {
        closure_vector(&self.col_geomeans()).expect("geometric means of a valid table are positive")
    }

    /// Centered log-ratio transform: `ln(p_ij / g(P))`.
    pub fn clr(&self) -> ClrTable {
        let logs = self.logs();
        let mean = logs.iter().sum::<f64>() / logs.len() as f64;
        ClrTable {
            dims: self.dims,
            values: logs.iter().map(|l| l - mean).collect(),
        }
    }

    /// Aitchison inner product: the Euclidean inner product of clr images.
    pub fn aitchison_inner(&self, other: &Self) -> Result<f64, TableError> {
        self.dims.require_match(&other.dims)?;
        Ok(self
            .clr()
            .values
            .iter()
            .zip(other.clr().values.iter())
            .map(|(a, b)| a * b)
            .sum())
    }

    /// Aitchison norm.
    pub fn aitchison_norm(&self) -> f64 {
        self.aitchison_norm_sq().sqrt()
    }

    /// Squared Aitchison norm: the sum of squared clr entries.
    pub fn aitchison_norm_sq(&self) -> f64 {
        self.clr().values.iter().map(|v| v * v).sum()
    }

    /// Aitchison distance, equal to the norm of the perturbation-difference.
    pub fn aitchison_distance(&self, other: &Self) -> Result<f64, TableError> {
        self.dims.require_match(&other.dims)?;
        let a = self.clr();
        let b = other.clr();
        Ok(a.values
            .iter()
            .zip(b.values.iter())
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt())
    }

    /// The e-geodesic `(1 - lambda) (.) self (+) lambda (.) other`, a
    /// straight line in clr coordinates.
    pub fn e_geodesic(&self, other: &Self, lambda: f64) -> Result<Self, TableError> {
        self.dims.require_match(&other.dims)?;
        if !(0.0..=1.0).contains(&lambda) {
            return Err(TableError::LambdaOutOfRange { lambda });
        }
        let logs: Vec<f64> = self
            .logs()
            .iter()
            .zip(other.logs().iter())
            .map(|(a, b)| (1.0 - lambda) * a + lambda * b)
            .collect();
        Ok(Self::from_logs(self.dims, &logs))
    }
}

/// Image of a probability table under the clr transform: a real table whose
/// entries sum to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ClrTable {
    dims: Dims,
    values: Vec<f64>,
}

impl ClrTable {
    /// Wrap zero-sum values, rejecting non-finite entries and sums beyond
    /// `CLR_SUM_TOL` per cell.
    pub fn new(dims: Dims, values: Vec<f64>) -> Result<Self, TableError> {
        dims.check_len(values.len())?;
        for (k, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(TableError::NonFiniteEntry {
                    row: k / dims.cols(),
                    col: k % dims.cols(),
                    value: v,
                });
            }
        }
        let sum: f64 = values.iter().sum();
        if sum.abs() > CLR_SUM_TOL * dims.len() as f64 {
            return Err(TableError::NotCentered { sum });
        }
        Ok(ClrTable { dims, values })
    }

    /// Wrap arbitrary finite values, centering them first. Closure absorbs
    /// any additive constant in log space, so centering is the only
    /// completion consistent with the inverse transform.
    pub fn from_uncentered(dims: Dims, values: &[f64]) -> Result<Self, TableError> {
        dims.check_len(values.len())?;
        for (k, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(TableError::NonFiniteEntry {
                    row: k / dims.cols(),
                    col: k % dims.cols(),
                    value: v,
                });
            }
        }
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        Ok(ClrTable {
            dims,
            values: values.iter().map(|v| v - mean).collect(),
        })
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[self.dims.idx(row, col)]
    }

    /// Inverse clr transform: closure of the componentwise exponential.
    pub fn inverse(&self) -> ProbabilityTable {
        ProbabilityTable::from_logs(self.dims, &self.values)
    }

    pub fn euclidean_inner(&self, other: &Self) -> Result<f64, TableError> {
        self.dims.require_match(&other.dims)?;
        Ok(self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| a * b)
            .sum())
    }

    pub fn euclidean_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}
