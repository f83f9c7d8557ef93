//! Scalar departure measures and per-cell contribution arrays.
//!
//! Each measure is the squared Aitchison norm of one orthogonal part:
//! simplicial deviance (interaction), simplicial skewness `E^2` (skew
//! part), simplicial quasi-skewness `Q^2` (skew interaction), and
//! geometric marginal heterogeneity `M^2` (skew independent part). The
//! skew part splits orthogonally, so `E^2 = Q^2 + M^2`.

use crate::decompose::{four_part, interaction_part, skew_part, skind_part, skint_part};
use crate::error::TableError;
use crate::table::ProbabilityTable;

/// Below this value a measure is treated as zero and its contribution
/// array is degenerate rather than a division by noise.
pub const DEGENERATE_MEASURE_FLOOR: f64 = 1e-14;

/// All scalar measures of one table, computed from a single four-part
/// decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureReport {
    /// Aitchison norm of the source table.
    pub norm_source: f64,
    /// Squared Aitchison norm of the source table.
    pub norm_source_sq: f64,
    /// Aitchison norm of the closest symmetric table.
    pub norm_sym: f64,
    /// Squared Aitchison norm of the closest symmetric table.
    pub norm_sym_sq: f64,
    /// Simplicial deviance: squared norm of the interaction part.
    pub deviance: f64,
    /// Simplicial skewness `E^2`: squared norm of the skew-symmetric part.
    pub skewness: f64,
    /// Simplicial quasi-skewness `Q^2`: squared norm of the skew
    /// interaction part.
    pub quasi_skewness: f64,
    /// Geometric marginal heterogeneity `M^2`: squared norm of the skew
    /// independent part.
    pub heterogeneity: f64,
}

/// Simplicial deviance: squared Aitchison norm of the interaction part.
/// Zero exactly when all local odds ratios are one.
pub fn simplicial_deviance(p: &ProbabilityTable) -> f64 {
    interaction_part(p).aitchison_norm_sq()
}

/// Simplicial skewness `E^2`: squared norm of the skew-symmetric part.
pub fn simplicial_skewness(p: &ProbabilityTable) -> Result<f64, TableError> {
    Ok(skew_part(p)?.aitchison_norm_sq())
}

/// Simplicial quasi-skewness `Q^2`: squared norm of the skew interaction
/// part. Zero exactly on quasi-symmetric tables.
pub fn simplicial_quasi_skewness(p: &ProbabilityTable) -> Result<f64, TableError> {
    Ok(skint_part(p)?.aitchison_norm_sq())
}

/// Geometric marginal heterogeneity `M^2`: squared norm of the skew
/// independent part. Zero exactly when row and column geometric margins
/// coincide.
pub fn geometric_marginal_heterogeneity(p: &ProbabilityTable) -> Result<f64, TableError> {
    Ok(skind_part(p)?.aitchison_norm_sq())
}

/// Which skew table a contribution array decomposes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArrayKind {
    /// Cellwise contributions to `E^2` from the skew-symmetric part.
    Skewness,
    /// Cellwise contributions to `Q^2` from the skew interaction part.
    QuasiSkewness,
    /// Cellwise contributions to `M^2` from the skew independent part.
    Heterogeneity,
}

impl ArrayKind {
    pub fn name(&self) -> &'static str {
        match self {
            ArrayKind::Skewness => "skewness",
            ArrayKind::QuasiSkewness => "quasi_skewness",
            ArrayKind::Heterogeneity => "heterogeneity",
        }
    }
}

/// Signed cellwise shares of one measure.
///
/// Entry `(i, j)` is `sgn(clr_ij) clr_ij^2 / measure` for the selected skew
/// table, so the diagonal is zero, the array is exactly antisymmetric, and
/// absolute values sum to one when the measure is positive. When the
/// measure is below [`DEGENERATE_MEASURE_FLOOR`] the array is all zeros and
/// flagged degenerate.
#[derive(Debug, Clone, PartialEq)]
pub struct ContributionArray {
    kind: ArrayKind,
    size: usize,
    values: Vec<f64>,
    degenerate: bool,
}

impl ContributionArray {
    pub fn kind(&self) -> ArrayKind {
        self.kind
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Signed fraction of the measure carried by cell `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.size + j]
    }

    /// Same cell as a signed percentage.
    pub fn percent(&self, i: usize, j: usize) -> f64 {
        100.0 * self.get(i, j)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }
}

/// Cell contribution array for the selected measure.
pub fn contribution_array(
    p: &ProbabilityTable,
    kind: ArrayKind,
) -> Result<ContributionArray, TableError> {
    let skew_table = match kind {
        ArrayKind::Skewness => skew_part(p)?,
        ArrayKind::QuasiSkewness => skint_part(p)?,
        ArrayKind::Heterogeneity => skind_part(p)?,
    };
    let clr = skew_table.clr();
    let n = p.dims().rows();
    let measure: f64 = clr.values().iter().map(|v| v * v).sum();

    let mut values = vec![0.0; n * n];
    let degenerate = measure < DEGENERATE_MEASURE_FLOOR;
    if !degenerate {
        // One computation per symmetric pair keeps the array exactly
        // antisymmetric even though the clr entries only cancel to
        // rounding error.
        for i in 0..n {
            for j in i + 1..n {
                let c = clr.get(i, j);
                let share = if c == 0.0 {
                    0.0
                } else {
                    c.signum() * c * c / measure
                };
                values[i * n + j] = share;
                values[j * n + i] = -share;
            }
        }
    }
    Ok(ContributionArray {
        kind,
        size: n,
        values,
        degenerate,
    })
}

/// Compute every scalar measure of a square table from one decomposition.
pub fn measure_report(p: &ProbabilityTable) -> Result<MeasureReport, TableError> {
    let bundle = four_part(p)?;
    let norm_source_sq = p.aitchison_norm_sq();
    let norm_sym_sq = bundle.sym().aitchison_norm_sq();
    let deviance = bundle.int().aitchison_norm_sq();
    let skewness = bundle.skew().aitchison_norm_sq();
    let quasi_skewness = bundle.skint().aitchison_norm_sq();
    let heterogeneity = bundle.skind().aitchison_norm_sq();
    assert!(
        (skewness - quasi_skewness - heterogeneity).abs() <= 1e-10,
        "skewness decomposition identity violated: E^2 = {skewness}, Q^2 + M^2 = {}",
        quasi_skewness + heterogeneity
    );
    Ok(MeasureReport {
        norm_source: norm_source_sq.sqrt(),
        norm_source_sq,
        norm_sym: norm_sym_sq.sqrt(),
        norm_sym_sq,
        deviance,
        skewness,
        quasi_skewness,
        heterogeneity,
    })
}
