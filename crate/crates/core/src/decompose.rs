//! Orthogonal decompositions of probability tables.
//!
//! Two decompositions generate everything here: independence/interaction
//! (geometric-marginal projections and their orthogonal complement) and,
//! for square tables, symmetry/skew-symmetry. Intersecting the four
//! subspaces splits a square table into four mutually orthogonal parts
//! (`syind`, `skind`, `syint`, `skint`); regrouping them yields the closest
//! quasi-symmetric table (independent part plus symmetrized interaction)
//! and the closest geometric-marginal-homogeneous table (symmetrized
//! independent part plus interaction), each an orthogonal projection in the
//! Aitchison metric.
//!
//! Each projection is computed from its explicit cell formula in log space;
//! the equivalent perturbation composition is exercised by the test suite.

use crate::error::TableError;
use crate::table::ProbabilityTable;

/// Projection onto the row subspace: cell `(i, j)` is proportional to the
/// geometric mean of row `i`, constant across columns.
pub fn row_projection(p: &ProbabilityTable) -> ProbabilityTable {
    let dims = p.dims();
    let rlm = p.row_log_means();
    let mut logs = vec![0.0; dims.len()];
    for i in 0..dims.rows() {
        for j in 0..dims.cols() {
            logs[i * dims.cols() + j] = rlm[i];
        }
    }
    ProbabilityTable::from_logs(dims, &logs)
}

/// Projection onto the column subspace: cell `(i, j)` is proportional to
/// the geometric mean of column `j`, constant across rows.
pub fn col_projection(p: &ProbabilityTable) -> ProbabilityTable {
    let dims = p.dims();
    let clm = p.col_log_means();
    let mut logs = vec![0.0; dims.len()];
    for i in 0..dims.rows() {
        for j in 0..dims.cols() {
            logs[i * dims.cols() + j] = clm[j];
        }
    }
    ProbabilityTable::from_logs(dims, &logs)
}

/// Closest independent table: the perturbation of the row and column
/// projections, with cells proportional to `g(row_i) * g(col_j)`.
pub fn independent_part(p: &ProbabilityTable) -> ProbabilityTable {
    let dims = p.dims();
    let rlm = p.row_log_means();
    let clm = p.col_log_means();
    let mut logs = vec![0.0; dims.len()];
    for i in 0..dims.rows() {
        for j in 0..dims.cols() {
            logs[i * dims.cols() + j] = rlm[i] + clm[j];
        }
    }
    ProbabilityTable::from_logs(dims, &logs)
}

/// Interaction table orthogonal to the independent part; its geometric
/// margins are uniform.
pub fn interaction_part(p: &ProbabilityTable) -> ProbabilityTable {
    let dims = p.dims();
    let rlm = p.row_log_means();
    let clm = p.col_log_means();
    let logs: Vec<f64> = p
        .probs()
        .iter()
        .enumerate()
        .map(|(k, &v)| v.ln() - rlm[k / dims.cols()] - clm[k % dims.cols()])
        .collect();
    ProbabilityTable::from_logs(dims, &logs)
}

/// Closest symmetric table: cells proportional to `sqrt(p_ij * p_ji)`.
pub fn symmetric_part(p: &ProbabilityTable) -> Result<ProbabilityTable, TableError> {
    let dims = p.dims();
    dims.require_square()?;
    let logs_p = p.logs();
    let n = dims.rows();
    let mut logs = vec![0.0; dims.len()];
    for i in 0..n {
        for j in 0..n {
            logs[i * n + j] = 0.5 * (logs_p[i * n + j] + logs_p[j * n + i]);
        }
    }
    Ok(ProbabilityTable::from_logs(dims, &logs))
}

/// Skew-symmetric table orthogonal to the symmetric part: cells
/// proportional to `sqrt(p_ij / p_ji)`.
pub fn skew_part(p: &ProbabilityTable) -> Result<ProbabilityTable, TableError> {
    let dims = p.dims();
    dims.require_square()?;
    let logs_p = p.logs();
    let n = dims.rows();
    let mut logs = vec![0.0; dims.len()];
    for i in 0..n {
        for j in 0..n {
            logs[i * n + j] = 0.5 * (logs_p[i * n + j] - logs_p[j * n + i]);
        }
    }
    Ok(ProbabilityTable::from_logs(dims, &logs))
}

/// Closest quasi-symmetric table. Its interaction part is the symmetrized
/// interaction of `p`, and its geometric margins equal those of `p`.
pub fn qs_projection(p: &ProbabilityTable) -> Result<ProbabilityTable, TableError> {
    let dims = p.dims();
    dims.require_square()?;
    let logs_p = p.logs();
    let rlm = p.row_log_means();
    let clm = p.col_log_means();
    let n = dims.rows();
    let mut logs = vec![0.0; dims.len()];
    for i in 0..n {
        for j in 0..n {
            logs[i * n + j] = 0.5 * (logs_p[i * n + j] + logs_p[j * n + i])
                + 0.5 * (rlm[i] + clm[j] - rlm[j] - clm[i]);
        }
    }
    Ok(ProbabilityTable::from_logs(dims, &logs))
}

/// Skew-symmetric interaction part: the departure of `p` from its
/// quasi-symmetric projection. All its geometric margins are uniform.
pub fn skint_part(p: &ProbabilityTable) -> Result<ProbabilityTable, TableError> {
    let dims = p.dims();
    dims.require_square()?;
    let logs_p = p.logs();
    let rlm = p.row_log_means();
    let clm = p.col_log_means();
    let n = dims.rows();
    let mut logs = vec![0.0; dims.len()];
    for i in 0..n {
        for j in 0..n {
            logs[i * n + j] = 0.5 * (logs_p[i * n + j] - logs_p[j * n + i])
                + 0.5 * (rlm[j] + clm[i] - rlm[i] - clm[j]);
        }
    }
    Ok(ProbabilityTable::from_logs(dims, &logs))
}

/// Closest geometric-marginal-homogeneous table. Its interaction part
/// equals that of `p`, and its row and column geometric margins coincide.
pub fn gmh_projection(p: &ProbabilityTable) -> Result<ProbabilityTable, TableError> {
    let dims = p.dims();
    dims.require_square()?;
    let logs_p = p.logs();
    let rlm = p.row_log_means();
    let clm = p.col_log_means();
    let n = dims.rows();
    let mut logs = vec![0.0; dims.len()];
    for i in 0..n {
        for j in 0..n {
            logs[i * n + j] =
                logs_p[i * n + j] + 0.5 * (rlm[j] + clm[i] - rlm[i] - clm[j]);
        }
    }
    Ok(ProbabilityTable::from_logs(dims, &logs))
}

/// Skew-symmetric independent part: the departure of `p` from its
/// geometric-marginal-homogeneous projection.
pub fn skind_part(p: &ProbabilityTable) -> Result<ProbabilityTable, TableError> {
    let dims = p.dims();
    dims.require_square()?;
    let rlm = p.row_log_means();
    let clm = p.col_log_means();
    let n = dims.rows();
    let mut logs = vec![0.0; dims.len()];
    for i in 0..n {
        for j in 0..n {
            logs[i * n + j] = 0.5 * (rlm[i] + clm[j] - rlm[j] - clm[i]);
        }
    }
    Ok(ProbabilityTable::from_logs(dims, &logs))
}

/// The four orthogonal parts of a square table, plus the composites built
/// from them.
///
/// The parts reconstruct the source under perturbation, are pairwise
/// Aitchison-orthogonal, and `syind`/`syint` are symmetric while
/// `skind`/`skint` are skew-symmetric in clr coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionBundle {
    source: ProbabilityTable,
    syind: ProbabilityTable,
    skind: ProbabilityTable,
    syint: ProbabilityTable,
    skint: ProbabilityTable,
}

impl DecompositionBundle {
    pub fn new(p: &ProbabilityTable) -> Result<Self, TableError> {
        p.dims().require_square()?;
        let ind = independent_part(p);
        let int = interaction_part(p);
        let bundle = DecompositionBundle {
            source: p.clone(),
            syind: symmetric_part(&ind)?,
            skind: skew_part(&ind)?,
            syint: symmetric_part(&int)?,
            skint: skew_part(&int)?,
        };
        debug_assert!(bundle.reconstructs_source(1e-10));
        Ok(bundle)
    }

    pub fn source(&self) -> &ProbabilityTable {
        &self.source
    }

    /// Symmetric independent part.
    pub fn syind(&self) -> &ProbabilityTable {
        &self.syind
    }

    /// Skew-symmetric independent part.
    pub fn skind(&self) -> &ProbabilityTable {
        &self.skind
    }

    /// Symmetric interaction part.
    pub fn syint(&self) -> &ProbabilityTable {
        &self.syint
    }

    /// Skew-symmetric interaction part.
    pub fn skint(&self) -> &ProbabilityTable {
        &self.skint
    }

    fn join(a: &ProbabilityTable, b: &ProbabilityTable) -> ProbabilityTable {
        a.perturb(b).expect("bundle parts share the source dims")
    }

    /// Independent part: `syind (+) skind`.
    pub fn ind(&self) -> ProbabilityTable {
        Self::join(&self.syind, &self.skind)
    }

    /// Interaction part: `syint (+) skint`.
    pub fn int(&self) -> ProbabilityTable {
        Self::join(&self.syint, &self.skint)
    }

    /// Symmetric part: `syind (+) syint`.
    pub fn sym(&self) -> ProbabilityTable {
        Self::join(&self.syind, &self.syint)
    }

    /// Skew-symmetric part: `skind (+) skint`.
    pub fn skew(&self) -> ProbabilityTable {
        Self::join(&self.skind, &self.skint)
    }

    /// Quasi-symmetric projection: `ind (+) syint`.
    pub fn qs(&self) -> ProbabilityTable {
        Self::join(&self.ind(), &self.syint)
    }

    /// Geometric-marginal-homogeneous projection: `syind (+) int`.
    pub fn gmh(&self) -> ProbabilityTable {
        Self::join(&self.syind, &self.int())
    }

    fn reconstructs_source(&self, tol: f64) -> bool {
        let rebuilt = Self::join(&Self::join(&self.syind, &self.skind), &Self::join(&self.syint, &self.skint));
        rebuilt
            .probs()
            .iter()
            .zip(self.source.probs())
            .all(|(a, b)| (a - b).abs() <= tol)
    }
}

/// Compute the four-part orthogonal decomposition of a square table.
pub fn four_part(p: &ProbabilityTable) -> Result<DecompositionBundle, TableError> {
    DecompositionBundle::new(p)
}

/// Local odds ratios of the `(I-1) x (J-1)` grid of 2x2 subtables.
#[derive(Debug, Clone, PartialEq)]
pub struct OddsRatioMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl OddsRatioMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.cols + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Local odds ratio matrix of a table:
/// `theta_ij = p_ij p_(i+1)(j+1) / (p_i(j+1) p_(i+1)j)`.
pub fn local_odds_ratios(p: &ProbabilityTable) -> OddsRatioMatrix {
    let (rows, cols) = (p.dims().rows(), p.dims().cols());
    let mut values = Vec::with_capacity((rows - 1) * (cols - 1));
    for i in 0..rows - 1 {
        for j in 0..cols - 1 {
            values.push(
                p.get(i, j) * p.get(i + 1, j + 1) / (p.get(i, j + 1) * p.get(i + 1, j)),
            );
        }
    }
    OddsRatioMatrix {
        rows: rows - 1,
        cols: cols - 1,
        values,
    }
}

/// Whether all local odds ratios are symmetric within `tol`, compared on
/// the log scale so that `theta` and `1/theta` are treated alike. This is
/// the classical characterization of quasi-symmetry.
pub fn is_quasi_symmetric(p: &ProbabilityTable, tol: f64) -> Result<bool, TableError> {
    p.dims().require_square()?;
    let theta = local_odds_ratios(p);
    let n = theta.rows();
    for i in 0..n {
        for j in i + 1..n {
            if (theta.get(i, j).ln() - theta.get(j, i).ln()).abs() > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
