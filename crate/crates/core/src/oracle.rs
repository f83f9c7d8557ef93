//! Independent verification machinery.
//!
//! The closed-form projections in [`crate::decompose`] are checked against
//! a numerically constructed oracle: spanning sets of each subspace's clr
//! image are built from elementary indicator tables, orthonormalized by
//! Gram-Schmidt (measuring the subspace dimension as a by-product), and
//! used for coordinate-wise orthogonal projection. A generative
//! construction of quasi-symmetric tables (`p_ij` proportional to
//! `alpha_i beta_j psi_ij` with symmetric `psi`) exercises the equivalence
//! with symmetric local odds ratios from the opposite direction.
//!
//! Everything here is deterministic given a seed; per-trial seeds are
//! derived from the root seed so independent trials stay reproducible.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::decompose::{
    gmh_projection, independent_part, local_odds_ratios, qs_projection, symmetric_part,
};
use crate::error::TableError;
use crate::measures::{
    geometric_marginal_heterogeneity, simplicial_quasi_skewness, simplicial_skewness,
};
use crate::table::{ClrTable, Dims, ProbabilityTable};

/// Residual-norm threshold below which a Gram-Schmidt candidate counts as
/// linearly dependent. Generators are small integers, so any true
/// dependency collapses far below this.
pub const RANK_TOL: f64 = 1e-9;

/// Slack added to the projection distance in minimality probes.
pub const MINIMALITY_SLACK: f64 = 1e-12;

/// Deterministic generator used by all stochastic oracle operations.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random strictly positive table: closure of `exp(z)` with standard
/// normal `z`. Deterministic for a given seed.
pub fn random_table(dims: Dims, seed: u64) -> ProbabilityTable {
    let mut rng = seeded_rng(seed);
    random_table_with(dims, &mut rng)
}

/// As [`random_table`], drawing from a caller-managed generator.
pub fn random_table_with<R: Rng>(dims: Dims, rng: &mut R) -> ProbabilityTable {
    let logs: Vec<f64> = (0..dims.len()).map(|_| rng.sample(StandardNormal)).collect();
    ProbabilityTable::from_logs(dims, &logs)
}

/// Parameters of the generative quasi-symmetry representation
/// `p_ij = alpha_i beta_j psi_ij` with exactly symmetric `psi`.
#[derive(Debug, Clone, PartialEq)]
pub struct QsGeneratorParams {
    alpha: Vec<f64>,
    beta: Vec<f64>,
    psi: Vec<f64>,
}

impl QsGeneratorParams {
    pub fn new(alpha: Vec<f64>, beta: Vec<f64>, psi: Vec<f64>) -> Result<Self, TableError> {
        let n = alpha.len();
        if n < 2 {
            return Err(TableError::InvalidParams(format!(
                "need at least 2 categories, got {n}"
            )));
        }
        if beta.len() != n || psi.len() != n * n {
            return Err(TableError::InvalidParams(format!(
                "inconsistent lengths: alpha {n}, beta {}, psi {}",
                beta.len(),
                psi.len()
            )));
        }
        for v in alpha.iter().chain(beta.iter()).chain(psi.iter()) {
            if !(*v > 0.0) || !v.is_finite() {
                return Err(TableError::InvalidParams(format!(
                    "parameters must be strictly positive and finite, got {v}"
                )));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if psi[i * n + j] != psi[j * n + i] {
                    return Err(TableError::InvalidParams(format!(
                        "psi must be exactly symmetric; psi[{i}][{j}] != psi[{j}][{i}]"
                    )));
                }
            }
        }
        Ok(QsGeneratorParams { alpha, beta, psi })
    }

    /// Random positive parameters; `psi` is symmetric by construction.
    /// Pass `marginally_homogeneous` to force `alpha == beta`, which makes
    /// the generated table symmetric.
    pub fn random(size: usize, seed: u64, marginally_homogeneous: bool) -> Result<Self, TableError> {
        let mut rng = seeded_rng(seed);
        let draw = |rng: &mut ChaCha8Rng| -> f64 {
            let z: f64 = rng.sample(StandardNormal);
            z.exp()
        };
        let alpha: Vec<f64> = (0..size).map(|_| draw(&mut rng)).collect();
        let beta: Vec<f64> = if marginally_homogeneous {
            alpha.clone()
        } else {
            (0..size).map(|_| draw(&mut rng)).collect()
        };
        let mut psi = vec![0.0; size * size];
        for i in 0..size {
            for j in i..size {
                let v = draw(&mut rng);
                psi[i * size + j] = v;
                psi[j * size + i] = v;
            }
        }
        QsGeneratorParams::new(alpha, beta, psi)
    }

    pub fn size(&self) -> usize {
        self.alpha.len()
    }
}

/// Build the quasi-symmetric table `closure(alpha_i beta_j psi_ij)`.
pub fn qs_generate(params: &QsGeneratorParams) -> Result<ProbabilityTable, TableError> {
    let n = params.size();
    let dims = Dims::square(n)?;
    let mut logs = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            logs[i * n + j] =
                params.alpha[i].ln() + params.beta[j].ln() + params.psi[i * n + j].ln();
        }
    }
    Ok(ProbabilityTable::from_logs(dims, &logs))
}

/// The ten clr subspaces of square tables tracked by the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubspaceKind {
    /// Independent tables.
    Ind,
    /// Interaction tables (uniform geometric margins).
    Int,
    /// Symmetric tables.
    Sym,
    /// Skew-symmetric tables.
    Skew,
    /// Symmetric independent tables.
    Syind,
    /// Skew-symmetric independent tables.
    Skind,
    /// Symmetric interaction tables.
    Syint,
    /// Skew-symmetric interaction tables.
    Skint,
    /// Quasi-symmetric tables: independent plus symmetric interaction.
    Qs,
    /// Geometric-marginal-homogeneous tables: symmetric independent plus
    /// interaction.
    Gmh,
}

impl SubspaceKind {
    pub const ALL: [SubspaceKind; 10] = [
        SubspaceKind::Ind,
        SubspaceKind::Int,
        SubspaceKind::Sym,
        SubspaceKind::Skew,
        SubspaceKind::Syind,
        SubspaceKind::Skind,
        SubspaceKind::Syint,
        SubspaceKind::Skint,
        SubspaceKind::Qs,
        SubspaceKind::Gmh,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SubspaceKind::Ind => "ind",
            SubspaceKind::Int => "int",
            SubspaceKind::Sym => "sym",
            SubspaceKind::Skew => "skew",
            SubspaceKind::Syind => "syind",
            SubspaceKind::Skind => "skind",
            SubspaceKind::Syint => "syint",
            SubspaceKind::Skint => "skint",
            SubspaceKind::Qs => "qs",
            SubspaceKind::Gmh => "gmh",
        }
    }

    /// Dimension of the subspace inside the simplex of `size x size`
    /// tables.
    pub fn expected_dim(&self, size: usize) -> usize {
        let n = size;
        match self {
            SubspaceKind::Ind => 2 * n - 2,
            SubspaceKind::Int => (n - 1) * (n - 1),
            SubspaceKind::Sym => (n - 1) * (n + 2) / 2,
            SubspaceKind::Skew => n * (n - 1) / 2,
            SubspaceKind::Syind => n - 1,
            SubspaceKind::Skind => n - 1,
            SubspaceKind::Syint => n * (n - 1) / 2,
            SubspaceKind::Skint => (n - 1) * (n - 2) / 2,
            SubspaceKind::Qs => (n - 1) * (n + 4) / 2,
            SubspaceKind::Gmh => n * (n - 1),
        }
    }
}

/// Subtract the overall mean: projection of a raw table onto the clr
/// plane.
fn center(m: &mut [f64]) {
    let mean = m.iter().sum::<f64>() / m.len() as f64;
    for v in m.iter_mut() {
        *v -= mean;
    }
}

/// Double-centering removes row and column means: the clr-plane projection
/// onto the interaction subspace.
fn double_center(m: &mut [f64], n: usize) {
    let row_means: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| m[i * n + j]).sum::<f64>() / n as f64)
        .collect();
    let col_means: Vec<f64> = (0..n)
        .map(|j| (0..n).map(|i| m[i * n + j]).sum::<f64>() / n as f64)
        .collect();
    let mean = row_means.iter().sum::<f64>() / n as f64;
    for i in 0..n {
        for j in 0..n {
            m[i * n + j] += mean - row_means[i] - col_means[j];
        }
    }
}

/// Raw (non-orthogonal) spanning set of the subspace's clr image.
///
/// The proofs only state dimensions, never bases; spanning sets are built
/// from elementary generators and the rank is measured afterwards.
fn generators(kind: SubspaceKind, n: usize) -> Vec<Vec<f64>> {
    let cell = |i: usize, j: usize| -> Vec<f64> {
        let mut m = vec![0.0; n * n];
        m[i * n + j] = 1.0;
        m
    };
    let row_indicator = |i: usize| -> Vec<f64> {
        let mut m = vec![0.0; n * n];
        for j in 0..n {
            m[i * n + j] = 1.0;
        }
        m
    };
    let col_indicator = |j: usize| -> Vec<f64> {
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            m[i * n + j] = 1.0;
        }
        m
    };
    let sym_pair = |i: usize, j: usize| -> Vec<f64> {
        let mut m = vec![0.0; n * n];
        m[i * n + j] += 1.0;
        m[j * n + i] += 1.0;
        m
    };
    let skew_pair = |i: usize, j: usize| -> Vec<f64> {
        let mut m = vec![0.0; n * n];
        m[i * n + j] = 1.0;
        m[j * n + i] = -1.0;
        m
    };

    let mut gens: Vec<Vec<f64>> = Vec::new();
    match kind {
        SubspaceKind::Ind => {
            for i in 0..n {
                gens.push(row_indicator(i));
            }
            for j in 0..n {
                gens.push(col_indicator(j));
            }
            gens.iter_mut().for_each(|m| center(m));
        }
        SubspaceKind::Int => {
            for i in 0..n {
                for j in 0..n {
                    gens.push(cell(i, j));
                }
            }
            gens.iter_mut().for_each(|m| double_center(m, n));
        }
        SubspaceKind::Sym => {
            for i in 0..n {
                gens.push(cell(i, i));
            }
            for i in 0..n {
                for j in i + 1..n {
                    gens.push(sym_pair(i, j));
                }
            }
            gens.iter_mut().for_each(|m| center(m));
        }
        SubspaceKind::Skew => {
            for i in 0..n {
                for j in i + 1..n {
                    gens.push(skew_pair(i, j));
                }
            }
        }
        SubspaceKind::Syind => {
            for i in 0..n {
                let mut m = row_indicator(i);
                for (v, c) in m.iter_mut().zip(col_indicator(i)) {
                    *v += c;
                }
                center(&mut m);
                gens.push(m);
            }
        }
        SubspaceKind::Skind => {
            for i in 0..n {
                let mut m = row_indicator(i);
                for (v, c) in m.iter_mut().zip(col_indicator(i)) {
                    *v -= c;
                }
                gens.push(m);
            }
        }
        SubspaceKind::Syint => {
            gens = generators(SubspaceKind::Sym, n);
            gens.iter_mut().for_each(|m| double_center(m, n));
        }
        SubspaceKind::Skint => {
            gens = generators(SubspaceKind::Skew, n);
            gens.iter_mut().for_each(|m| double_center(m, n));
        }
        SubspaceKind::Qs => {
            gens = generators(SubspaceKind::Ind, n);
            gens.extend(generators(SubspaceKind::Syint, n));
        }
        SubspaceKind::Gmh => {
            gens = generators(SubspaceKind::Syind, n);
            gens.extend(generators(SubspaceKind::Int, n));
        }
    }
    gens
}

/// Modified Gram-Schmidt with one reorthogonalization pass. Candidates
/// whose residual norm falls below `RANK_TOL` are dropped, so the output
/// length is the measured rank.
fn gram_schmidt(gens: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for mut v in gens {
        for _ in 0..2 {
            for b in &basis {
                let dot: f64 = v.iter().zip(b.iter()).map(|(a, c)| a * c).sum();
                for (x, c) in v.iter_mut().zip(b.iter()) {
                    *x -= dot * c;
                }
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm >= RANK_TOL {
            for x in v.iter_mut() {
                *x /= norm;
            }
            basis.push(v);
        }
    }
    basis
}

/// Orthonormal basis of the subspace's clr image. The number of vectors is
/// the measured dimension.
pub fn subspace_basis(kind: SubspaceKind, size: usize) -> Result<Vec<ClrTable>, TableError> {
    let dims = Dims::square(size)?;
    gram_schmidt(generators(kind, size))
        .into_iter()
        .map(|v| ClrTable::new(dims, v))
        .collect()
}

fn projection_coefficients(clr: &ClrTable, basis: &[ClrTable]) -> Vec<f64> {
    basis
        .iter()
        .map(|b| {
            clr.values()
                .iter()
                .zip(b.values())
                .map(|(a, c)| a * c)
                .sum()
        })
        .collect()
}

fn table_from_coefficients(
    dims: Dims,
    basis: &[ClrTable],
    coefficients: &[f64],
) -> Result<ProbabilityTable, TableError> {
    let mut acc = vec![0.0; dims.len()];
    for (b, &c) in basis.iter().zip(coefficients) {
        for (a, v) in acc.iter_mut().zip(b.values()) {
            *a += c * v;
        }
    }
    Ok(ClrTable::from_uncentered(dims, &acc)?.inverse())
}

/// Numerical orthogonal projection: expand `clr(p)` in the orthonormal
/// basis and map the partial sum back to the simplex.
pub fn basis_projection(
    p: &ProbabilityTable,
    kind: SubspaceKind,
) -> Result<ProbabilityTable, TableError> {
    let dims = p.dims();
    dims.require_square()?;
    let basis = subspace_basis(kind, dims.rows())?;
    let coefficients = projection_coefficients(&p.clr(), &basis);
    table_from_coefficients(dims, &basis, &coefficients)
}

/// Probe the minimality claim of a projection: no random member of the
/// subspace may be closer to `p` than the projection is.
///
/// Candidates mix coefficients drawn around the projection itself (which
/// approach the minimum arbitrarily closely) with coefficients drawn far
/// from it.
pub fn minimality_probe(
    p: &ProbabilityTable,
    kind: SubspaceKind,
    trials: usize,
    seed: u64,
) -> Result<bool, TableError> {
    let dims = p.dims();
    dims.require_square()?;
    let basis = subspace_basis(kind, dims.rows())?;
    let proj_coefficients = projection_coefficients(&p.clr(), &basis);
    let projection = table_from_coefficients(dims, &basis, &proj_coefficients)?;
    let proj_distance = p.aitchison_distance(&projection)?;

    for trial in 0..trials {
        let mut rng = seeded_rng(seed.wrapping_add(trial as u64));
        let scale = match trial % 4 {
            0 => 1e-3,
            1 => 0.1,
            2 => 1.0,
            _ => 5.0,
        };
        let around_projection = trial % 2 == 0;
        let coefficients: Vec<f64> = proj_coefficients
            .iter()
            .map(|&c| {
                let z: f64 = rng.sample(StandardNormal);
                if around_projection {
                    c + scale * z
                } else {
                    scale * z
                }
            })
            .collect();
        let candidate = table_from_coefficients(dims, &basis, &coefficients)?;
        if p.aitchison_distance(&candidate)? + MINIMALITY_SLACK < proj_distance {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Result of one verification check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        CheckOutcome {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

fn max_entry_deviation(a: &ProbabilityTable, b: &ProbabilityTable) -> f64 {
    a.probs()
        .iter()
        .zip(b.probs())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Run the full verification suite: dimension ledger, closed-form versus
/// basis-projection equivalence, projection minimality, the skewness
/// decomposition identity, and generator soundness.
pub fn run_verification(sizes: &[usize], trials: usize, seed: u64) -> Vec<CheckOutcome> {
    let mut outcomes = Vec::new();

    for &n in sizes {
        let dims = match Dims::square(n) {
            Ok(d) => d,
            Err(e) => {
                outcomes.push(CheckOutcome::new(
                    format!("dimension ledger {n}x{n}"),
                    false,
                    e.to_string(),
                ));
                continue;
            }
        };

        // Measured ranks against the dimension formulas, and the four
        // intersection dimensions must exhaust the simplex.
        {
            let mut passed = true;
            let mut parts = Vec::new();
            for kind in SubspaceKind::ALL {
                let rank = subspace_basis(kind, n).map(|b| b.len()).unwrap_or(usize::MAX);
                let expected = kind.expected_dim(n);
                if rank != expected {
                    passed = false;
                }
                parts.push(format!("{} {rank}/{expected}", kind.name()));
            }
            let four: usize = [
                SubspaceKind::Syind,
                SubspaceKind::Skind,
                SubspaceKind::Syint,
                SubspaceKind::Skint,
            ]
            .iter()
            .map(|k| k.expected_dim(n))
            .sum();
            if four != n * n - 1 {
                passed = false;
            }
            parts.push(format!("four-part sum {four}/{}", n * n - 1));
            outcomes.push(CheckOutcome::new(
                format!("dimension ledger {n}x{n}"),
                passed,
                parts.join(", "),
            ));
        }

        // Closed-form projections against the basis oracle.
        {
            let closed_forms: [(SubspaceKind, fn(&ProbabilityTable) -> Result<ProbabilityTable, TableError>); 4] = [
                (SubspaceKind::Sym, |p| symmetric_part(p)),
                (SubspaceKind::Ind, |p| Ok(independent_part(p))),
                (SubspaceKind::Qs, |p| qs_projection(p)),
                (SubspaceKind::Gmh, |p| gmh_projection(p)),
            ];
            let mut worst = 0.0_f64;
            let mut failure = None;
            'outer: for t in 0..100u64 {
                let p = random_table(dims, seed ^ (n as u64) << 32 | t);
                for (kind, closed) in &closed_forms {
                    let dev = match (basis_projection(&p, *kind), closed(&p)) {
                        (Ok(a), Ok(b)) => max_entry_deviation(&a, &b),
                        _ => {
                            failure = Some(format!("{} projection failed", kind.name()));
                            break 'outer;
                        }
                    };
                    worst = worst.max(dev);
                }
            }
            let passed = failure.is_none() && worst <= 1e-9;
            let detail = failure.unwrap_or(format!("max entrywise deviation {worst:.3e} over 100 tables"));
            outcomes.push(CheckOutcome::new(
                format!("oracle equivalence {n}x{n}"),
                passed,
                detail,
            ));
        }

        // Minimality of the two paper projections.
        for kind in [SubspaceKind::Qs, SubspaceKind::Gmh] {
            let p = random_table(dims, seed.wrapping_add(1000 + n as u64));
            let passed = minimality_probe(&p, kind, trials, seed.wrapping_add(n as u64))
                .unwrap_or(false);
            outcomes.push(CheckOutcome::new(
                format!("{} minimality {n}x{n}", kind.name()),
                passed,
                format!("{trials} random subspace members"),
            ));
        }

        // Skewness decomposition identity on random tables.
        {
            let mut worst = 0.0_f64;
            for t in 0..200u64 {
                let p = random_table(dims, seed.wrapping_add(2000 + 211 * n as u64 + t));
                let e2 = simplicial_skewness(&p).unwrap();
                let q2 = simplicial_quasi_skewness(&p).unwrap();
                let m2 = geometric_marginal_heterogeneity(&p).unwrap();
                worst = worst.max((e2 - q2 - m2).abs());
            }
            outcomes.push(CheckOutcome::new(
                format!("skewness decomposition {n}x{n}"),
                worst <= 1e-10,
                format!("max |E^2 - Q^2 - M^2| = {worst:.3e} over 200 tables"),
            ));
        }

        // Generator soundness: generated tables are quasi-symmetric, and
        // marginally homogeneous parameters give symmetric tables.
        {
            let mut worst_q2 = 0.0_f64;
            let mut worst_e2 = 0.0_f64;
            let mut worst_logodds = 0.0_f64;
            for t in 0..100u64 {
                let params =
                    QsGeneratorParams::random(n, seed.wrapping_add(3000 + 97 * n as u64 + t), false)
                        .unwrap();
                let table = qs_generate(&params).unwrap();
                worst_q2 = worst_q2.max(simplicial_quasi_skewness(&table).unwrap());
                let theta = local_odds_ratios(&table);
                for i in 0..n - 1 {
                    for j in i + 1..n - 1 {
                        worst_logodds = worst_logodds
                            .max((theta.get(i, j).ln() - theta.get(j, i).ln()).abs());
                    }
                }

                let sym_params =
                    QsGeneratorParams::random(n, seed.wrapping_add(4000 + 89 * n as u64 + t), true)
                        .unwrap();
                let sym_table = qs_generate(&sym_params).unwrap();
                worst_e2 = worst_e2.max(simplicial_skewness(&sym_table).unwrap());
            }
            let passed = worst_q2 < 1e-12 && worst_e2 < 1e-12 && worst_logodds <= 1e-9;
            outcomes.push(CheckOutcome::new(
                format!("qs generator {n}x{n}"),
                passed,
                format!(
                    "max Q^2 {worst_q2:.3e}, max symmetric E^2 {worst_e2:.3e}, max |log odds asymmetry| {worst_logodds:.3e}"
                ),
            ));
        }
    }

    outcomes
}
