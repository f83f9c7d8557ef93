//! Randomized invariants of the simplex vector space and its orthogonal
//! decompositions, quantified over seeded tables of every size from 2x2 to
//! 6x6.

use cotab_core::decompose::{
    four_part, gmh_projection, independent_part, interaction_part, is_quasi_symmetric,
    qs_projection, skind_part, skint_part, symmetric_part,
};
use cotab_core::measures::{
    geometric_marginal_heterogeneity, simplicial_quasi_skewness, simplicial_skewness,
};
use cotab_core::oracle::{qs_generate, random_table, seeded_rng, QsGeneratorParams};
use cotab_core::table::{Dims, ProbabilityTable};
use proptest::prelude::*;
use rand::Rng;

const SEEDS_PER_SIZE: u64 = 220; // 5 sizes x 220 = 1100 tables

fn max_dev(a: &ProbabilityTable, b: &ProbabilityTable) -> f64 {
    a.probs()
        .iter()
        .zip(b.probs())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn for_each_table(mut body: impl FnMut(u64, ProbabilityTable)) {
    for n in 2..=6usize {
        let dims = Dims::square(n).unwrap();
        for s in 0..SEEDS_PER_SIZE {
            let seed = (n as u64) * 10_000 + s;
            body(seed, random_table(dims, seed));
        }
    }
}

#[test]
fn vector_space_axioms() {
    for_each_table(|seed, p| {
        let mut rng = seeded_rng(seed ^ 0xA1);
        let q = cotab_core::oracle::random_table_with(p.dims(), &mut rng);
        let alpha: f64 = rng.random_range(-3.0..3.0);
        let beta: f64 = rng.random_range(-3.0..3.0);

        // (alpha + beta) (.) P = (alpha (.) P) (+) (beta (.) P)
        let lhs = p.power(alpha + beta);
        let rhs = p.power(alpha).perturb(&p.power(beta)).unwrap();
        assert!(max_dev(&lhs, &rhs) <= 1e-12, "scalar distributivity, seed {seed}");

        // alpha (.) (P (+) Q) = (alpha (.) P) (+) (alpha (.) Q)
        let lhs = p.perturb(&q).unwrap().power(alpha);
        let rhs = p.power(alpha).perturb(&q.power(alpha)).unwrap();
        assert!(max_dev(&lhs, &rhs) <= 1e-12, "vector distributivity, seed {seed}");

        // Commutativity and associativity of perturbation.
        assert!(max_dev(&p.perturb(&q).unwrap(), &q.perturb(&p).unwrap()) <= 1e-14);
    });
}

#[test]
fn clr_is_an_isometric_isomorphism() {
    for_each_table(|seed, p| {
        let mut rng = seeded_rng(seed ^ 0xB2);
        let q = cotab_core::oracle::random_table_with(p.dims(), &mut rng);
        let alpha: f64 = rng.random_range(-2.0..2.0);

        // clr(alpha (.) P (+) Q) = alpha clr(P) + clr(Q)
        let combined = p.power(alpha).perturb(&q).unwrap().clr();
        let cp = p.clr();
        let cq = q.clr();
        for ((c, a), b) in combined.values().iter().zip(cp.values()).zip(cq.values()) {
            assert!((c - (alpha * a + b)).abs() <= 1e-12, "clr linearity, seed {seed}");
        }

        // The inner product is pulled back from the clr plane.
        let inner = p.aitchison_inner(&q).unwrap();
        let clr_inner = cp.euclidean_inner(&cq).unwrap();
        assert!((inner - clr_inner).abs() <= 1e-12);

        // Round trip back to the simplex.
        assert!(max_dev(&cp.inverse(), &p) <= 1e-12, "clr round trip, seed {seed}");
    });
}

#[test]
fn transpose_commutes_with_clr() {
    for_each_table(|_seed, p| {
        let ct = p.transpose().unwrap().clr();
        let c = p.clr();
        let n = p.dims().rows();
        for i in 0..n {
            for j in 0..n {
                assert!((ct.get(i, j) - c.get(j, i)).abs() <= 1e-13);
            }
        }
    });
}

#[test]
fn four_part_reconstruction_orthogonality_pythagoras() {
    for_each_table(|seed, p| {
        let b = four_part(&p).unwrap();
        let rebuilt = b
            .syind()
            .perturb(b.skind())
            .unwrap()
            .perturb(b.syint())
            .unwrap()
            .perturb(b.skint())
            .unwrap();
        assert!(max_dev(&rebuilt, &p) <= 1e-10, "reconstruction, seed {seed}");

        let parts = [b.syind(), b.skind(), b.syint(), b.skint()];
        for i in 0..4 {
            for j in i + 1..4 {
                let inner = parts[i].aitchison_inner(parts[j]).unwrap();
                assert!(inner.abs() <= 1e-9, "orthogonality {i}/{j}, seed {seed}");
            }
        }

        let sum_sq: f64 = parts.iter().map(|t| t.aitchison_norm_sq()).sum();
        assert!(
            (p.aitchison_norm_sq() - sum_sq).abs() <= 1e-8,
            "pythagoras, seed {seed}"
        );
    });
}

#[test]
fn projections_are_idempotent() {
    for_each_table(|seed, p| {
        let qs = qs_projection(&p).unwrap();
        assert!(max_dev(&qs_projection(&qs).unwrap(), &qs) <= 1e-12, "qs, seed {seed}");
        let gmh = gmh_projection(&p).unwrap();
        assert!(max_dev(&gmh_projection(&gmh).unwrap(), &gmh) <= 1e-12, "gmh, seed {seed}");
        let sym = symmetric_part(&p).unwrap();
        assert!(max_dev(&symmetric_part(&sym).unwrap(), &sym) <= 1e-12, "sym, seed {seed}");
        let ind = independent_part(&p);
        assert!(max_dev(&independent_part(&ind), &ind) <= 1e-12, "ind, seed {seed}");
    });
}

#[test]
fn projections_are_linear() {
    type Projection = fn(&ProbabilityTable) -> ProbabilityTable;
    let projections: [(&str, Projection); 4] = [
        ("qs", |p| qs_projection(p).unwrap()),
        ("gmh", |p| gmh_projection(p).unwrap()),
        ("sym", |p| symmetric_part(p).unwrap()),
        ("ind", independent_part),
    ];
    for_each_table(|seed, p| {
        let mut rng = seeded_rng(seed ^ 0xC3);
        let q = cotab_core::oracle::random_table_with(p.dims(), &mut rng);
        let alpha: f64 = rng.random_range(-2.0..2.0);
        let combined = p.power(alpha).perturb(&q).unwrap();
        for (name, proj) in projections {
            let lhs = proj(&combined);
            let rhs = proj(&p).power(alpha).perturb(&proj(&q)).unwrap();
            assert!(max_dev(&lhs, &rhs) <= 1e-10, "{name} linearity, seed {seed}");
        }
    });
}

#[test]
fn qs_preserves_margins_and_gmh_preserves_interaction() {
    for_each_table(|seed, p| {
        let qs = qs_projection(&p).unwrap();
        for (a, b) in qs.row_margin().iter().zip(p.row_margin()) {
            assert!((a - b).abs() <= 1e-12, "qs row margin, seed {seed}");
        }
        for (a, b) in qs.col_margin().iter().zip(p.col_margin()) {
            assert!((a - b).abs() <= 1e-12, "qs col margin, seed {seed}");
        }

        let gmh = gmh_projection(&p).unwrap();
        assert!(
            max_dev(&interaction_part(&gmh), &interaction_part(&p)) <= 1e-12,
            "gmh interaction, seed {seed}"
        );
        for (a, b) in gmh.row_margin().iter().zip(gmh.col_margin()) {
            assert!((a - b).abs() <= 1e-12, "gmh margin homogeneity, seed {seed}");
        }
    });
}

#[test]
fn skew_parts_have_expected_structure() {
    for_each_table(|seed, p| {
        // skint: uniform geometric margins.
        let skint = skint_part(&p).unwrap();
        let n = p.dims().rows();
        for m in skint.row_margin().iter().chain(skint.col_margin().iter()) {
            assert!((m - 1.0 / n as f64).abs() <= 1e-12, "skint margins, seed {seed}");
        }
        // skind: clr entries are u_i - u_j.
        let c = skind_part(&p).unwrap().clr();
        let u: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| c.get(i, j)).sum::<f64>() / n as f64)
            .collect();
        for i in 0..n {
            for j in 0..n {
                assert!((c.get(i, j) - (u[i] - u[j])).abs() <= 1e-10, "skind structure, seed {seed}");
            }
        }
    });
}

#[test]
fn skewness_decomposition_identity() {
    for_each_table(|seed, p| {
        let e2 = simplicial_skewness(&p).unwrap();
        let q2 = simplicial_quasi_skewness(&p).unwrap();
        let m2 = geometric_marginal_heterogeneity(&p).unwrap();
        assert!((e2 - q2 - m2).abs() <= 1e-10, "identity, seed {seed}");
        assert!(e2 >= 0.0 && q2 >= 0.0 && m2 >= 0.0);

        // Executable quasi-symmetry equivalence on generic tables: odds
        // ratio asymmetry and Q^2 vanish together.
        let qs = is_quasi_symmetric(&p, 1e-9).unwrap();
        if qs {
            assert!(q2 <= 1e-12, "QS table with positive Q^2, seed {seed}");
        } else if p.dims().rows() > 2 {
            assert!(q2 > 1e-12, "non-QS table with zero Q^2, seed {seed}");
        }
    });
}

#[test]
fn two_by_two_tables_are_always_quasi_symmetric() {
    let dims = Dims::square(2).unwrap();
    for seed in 0..1000u64 {
        let p = random_table(dims, seed);
        assert!(simplicial_quasi_skewness(&p).unwrap() <= 1e-14, "seed {seed}");
        assert!(is_quasi_symmetric(&p, 1e-12).unwrap());
    }
}

#[test]
fn measures_vanish_exactly_on_their_null_structures() {
    for n in 2..=5usize {
        let dims = Dims::square(n).unwrap();
        for s in 0..50u64 {
            // Symmetric member: all three measures vanish.
            let r = random_table(dims, 31 * n as u64 + s);
            let sym = symmetric_part(&r).unwrap();
            assert!(simplicial_skewness(&sym).unwrap() <= 1e-14);
            assert!(simplicial_quasi_skewness(&sym).unwrap() <= 1e-14);
            assert!(geometric_marginal_heterogeneity(&sym).unwrap() <= 1e-14);

            // Quasi-symmetric member via the generative representation:
            // Q^2 vanishes, M^2 generically does not.
            let params = QsGeneratorParams::random(n, 77 * n as u64 + s, false).unwrap();
            let qs_member = qs_generate(&params).unwrap();
            assert!(simplicial_quasi_skewness(&qs_member).unwrap() <= 1e-12);

            // GMH member: M^2 vanishes, Q^2 generically does not.
            let gmh_member = gmh_projection(&r).unwrap();
            assert!(geometric_marginal_heterogeneity(&gmh_member).unwrap() <= 1e-12);

            // Perturbing a symmetric member off-diagonally breaks symmetry.
            let mut raw = sym.probs().to_vec();
            raw[1] *= 1.5;
            let perturbed = ProbabilityTable::closure(dims, &raw).unwrap();
            assert!(simplicial_skewness(&perturbed).unwrap() > 1e-6);
        }
    }
}

#[test]
fn caussinus_composition() {
    // Symmetry holds exactly when quasi-symmetry and geometric marginal
    // homogeneity hold together.
    const EPS: f64 = 1e-12;
    for n in 3..=5usize {
        let dims = Dims::square(n).unwrap();
        for s in 0..50u64 {
            let r = random_table(dims, 1234 + 7 * n as u64 + s);
            let cases = [
                symmetric_part(&r).unwrap(),
                qs_generate(&QsGeneratorParams::random(n, 5 * s + n as u64, false).unwrap())
                    .unwrap(),
                gmh_projection(&r).unwrap(),
                r.clone(),
            ];
            for p in &cases {
                let e2 = simplicial_skewness(p).unwrap();
                let q2 = simplicial_quasi_skewness(p).unwrap();
                let m2 = geometric_marginal_heterogeneity(p).unwrap();
                assert_eq!(e2 <= EPS, q2 <= EPS && m2 <= EPS, "E^2 {e2}, Q^2 {q2}, M^2 {m2}");
            }
        }
    }
}

#[test]
fn qs_projection_is_closest_among_generated_members() {
    // Distance from P to its projection never exceeds the distance to any
    // generated quasi-symmetric table, with equality forcing coincidence.
    let dims = Dims::square(4).unwrap();
    let p = random_table(dims, 99);
    let proj = qs_projection(&p).unwrap();
    let d_proj = p.aitchison_distance(&proj).unwrap();
    for s in 0..1000u64 {
        let q = qs_generate(&QsGeneratorParams::random(4, 400 + s, false).unwrap()).unwrap();
        let d_q = p.aitchison_distance(&q).unwrap();
        assert!(d_proj <= d_q + 1e-12, "seed {s}");
        if proj.aitchison_distance(&q).unwrap() > 1e-3 {
            assert!(d_q > d_proj, "strictness, seed {s}");
        }
    }
}

#[test]
fn e_geodesic_is_metrically_linear() {
    let dims = Dims::square(3).unwrap();
    for s in 0..200u64 {
        let p = random_table(dims, 2 * s);
        let q = random_table(dims, 2 * s + 1);
        let d = p.aitchison_distance(&q).unwrap();
        for lambda in [0.25, 0.5, 0.75] {
            let gamma = p.e_geodesic(&q, lambda).unwrap();
            let d_partial = p.aitchison_distance(&gamma).unwrap();
            assert!((d_partial - lambda * d).abs() <= 1e-10, "seed {s}, lambda {lambda}");
        }
    }
}

// Strategies over raw positive cells, exercising closure directly rather
// than through the lognormal generator.
fn raw_cells(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.001f64..1000.0, len)
}

proptest! {
    #[test]
    fn closure_is_scale_invariant(raw in raw_cells(12), c in 0.001f64..1000.0) {
        let dims = Dims::new(3, 4).unwrap();
        let a = ProbabilityTable::closure(dims, &raw).unwrap();
        let scaled: Vec<f64> = raw.iter().map(|v| v * c).collect();
        let b = ProbabilityTable::closure(dims, &scaled).unwrap();
        prop_assert!(max_dev(&a, &b) <= 1e-15);
    }

    #[test]
    fn perturbation_group_laws(x in raw_cells(9), y in raw_cells(9)) {
        let dims = Dims::square(3).unwrap();
        let p = ProbabilityTable::closure(dims, &x).unwrap();
        let q = ProbabilityTable::closure(dims, &y).unwrap();
        let back = p.perturb(&q).unwrap().ominus(&q).unwrap();
        prop_assert!(max_dev(&back, &p) <= 1e-14);
        let zero = p.ominus(&p).unwrap();
        prop_assert!(max_dev(&zero, &ProbabilityTable::uniform(dims)) <= 1e-15);
    }

    #[test]
    fn clr_round_trip_on_arbitrary_cells(raw in raw_cells(16)) {
        let dims = Dims::square(4).unwrap();
        let p = ProbabilityTable::closure(dims, &raw).unwrap();
        prop_assert!(max_dev(&p.clr().inverse(), &p) <= 1e-12);
    }

    #[test]
    fn distance_routes_agree(x in raw_cells(9), y in raw_cells(9)) {
        let dims = Dims::square(3).unwrap();
        let p = ProbabilityTable::closure(dims, &x).unwrap();
        let q = ProbabilityTable::closure(dims, &y).unwrap();
        let via_clr = p.aitchison_distance(&q).unwrap();
        let via_ominus = p.ominus(&q).unwrap().aitchison_norm();
        prop_assert!((via_clr - via_ominus).abs() <= 1e-12);
    }
}
