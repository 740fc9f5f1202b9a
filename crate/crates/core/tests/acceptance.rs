//! Acceptance suite: every release criterion as one test, each printing a
//! single pass line with its measured quantities. Tolerances are pinned
//! here, not configured.

use homsym::cartan_geometry::{connection_coefficients, curvature, identity_suite, FrameMetric};
use homsym::coordinate_realizations::{
    bind_params, check_structure, enlarged_algebra_check, killing_residual, random_pattern_h,
    realization, sample_chart_point,
};
use homsym::exact_algebra::{Mat, Rational, Scalar};
use homsym::gauge_reduction::{canonicalize, gauge_rank, numeric, transform_metric, FiniteTransform, Provenance};
use homsym::killing_closure::{closure_dimension, ClosureMode};
use homsym::lie_core::{catalog, BianchiType, CatalogEntry, StructureConstants};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

const SEED: u64 = 0xACCE;

fn all_variants() -> Vec<(BianchiType, Option<Scalar>, &'static str)> {
    vec![
        (BianchiType::I, None, "I"),
        (BianchiType::II, None, "II"),
        (BianchiType::III, None, "III"),
        (BianchiType::IV, None, "IV"),
        (BianchiType::V, None, "V"),
        (BianchiType::VI, Some(Scalar::from_int(-1)), "VI(q=-1)"),
        (BianchiType::VI, Some(Scalar::from_int(2)), "VI(q=2)"),
        (BianchiType::VI, Some(Scalar::from_ratio(1, 2)), "VI(q=1/2)"),
        (BianchiType::VII, Some(Scalar::from_int(0)), "VII(q=0)"),
        (BianchiType::VII, Some(Scalar::from_int(1)), "VII(q=1)"),
        (BianchiType::VIII, None, "VIII"),
        (BianchiType::IX, None, "IX"),
    ]
}

#[test]
fn criterion_1_catalog_integrity() {
    let start = Instant::now();
    for ty in BianchiType::ALL {
        let entry = catalog(ty, ty.sample_q()).unwrap();
        assert!(entry.constants().antisymmetry_ok(), "{ty}");
        entry
            .constants()
            .jacobi_check()
            .unwrap_or_else(|_| panic!("{ty} fails the Jacobi identity"));
    }
    let mut broken = catalog(BianchiType::IX, None).unwrap().constants().clone();
    broken.set_pair(1, 1, 2, Scalar::one());
    assert!(broken.jacobi_check().is_err(), "mutated IX must fail");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("criterion 1 (catalog integrity): PASS in {elapsed:?}");
}

#[test]
fn criterion_2_isometry_dimension_table() {
    let expected = |label: &str| -> usize {
        match label {
            "I" | "V" => 6,
            "II" | "III" => 4,
            _ => 3,
        }
    };
    let start = Instant::now();
    for (ty, q, label) in all_variants() {
        let entry = catalog(ty, q).unwrap();
        let h = FrameMetric::from_pattern(&entry);
        let res = closure_dimension(entry.constants(), &h, ClosureMode::Symbolic).unwrap();
        assert_eq!(res.d_total, expected(label), "{label} symbolic");
    }
    let symbolic_time = start.elapsed();
    assert!(
        symbolic_time.as_secs_f64() < 30.0,
        "symbolic table took {symbolic_time:?}"
    );

    let start = Instant::now();
    for (ty, q, label) in all_variants() {
        let entry = catalog(ty, q).unwrap();
        let h = FrameMetric::from_pattern(&entry);
        let res = closure_dimension(
            entry.constants(),
            &h,
            ClosureMode::Sampled {
                samples: 3,
                seed: SEED,
            },
        )
        .unwrap();
        assert_eq!(res.d_total, expected(label), "{label} sampled");
    }
    let sampled_time = start.elapsed();
    assert!(
        sampled_time.as_secs_f64() < 5.0,
        "sampled table took {sampled_time:?}"
    );
    println!(
        "criterion 2 (isometry dimension table): PASS \
         (symbolic {symbolic_time:?}, sampled {sampled_time:?})"
    );
}

#[test]
fn criterion_3_gauge_ranks_and_residuals() {
    let expected_rank = |ty: BianchiType| -> usize {
        match ty {
            BianchiType::I => 0,
            BianchiType::II | BianchiType::III => 2,
            _ => 3,
        }
    };
    for (ty, q, label) in all_variants() {
        let entry = catalog(ty, q).unwrap();
        let h = FrameMetric::generic(3);
        let (rank, residual) = gauge_rank(entry.constants(), &h).unwrap();
        assert_eq!(rank, expected_rank(ty), "{label} rank");
        assert_eq!(residual, 6 - rank, "{label} residual");
        // Residual parameter counts equal the free-entry counts of the
        // printed patterns; Type I carries the documented abelian
        // exception (pattern shows 3 eigenvalues, the inner orbit space
        // has all 6).
        if entry.expected().abelian_exception {
            assert_eq!(residual, 6);
            assert_eq!(entry.pattern().free_params(), 3);
        } else {
            assert_eq!(entry.pattern().free_params(), residual, "{label} pattern");
        }
    }
    println!("criterion 3 (gauge ranks and residual parameters): PASS");
}

fn random_pattern_metric(entry: &CatalogEntry, rng: &mut ChaCha8Rng) -> FrameMetric {
    loop {
        let mut by_name: std::collections::BTreeMap<&str, Scalar> = Default::default();
        for row in &entry.pattern().entries {
            for name in row.iter().flatten() {
                by_name
                    .entry(name)
                    .or_insert_with(|| Scalar::from_ratio(rng.gen_range(2..=20), 4));
            }
        }
        for (name, v) in by_name.iter_mut() {
            if name.as_bytes()[1] != name.as_bytes()[2] {
                *v = &*v * &Scalar::from_ratio(1, 4);
            }
        }
        let m = Mat::from_fn(3, 3, |i, j| match entry.pattern().entries[i][j] {
            None => Scalar::zero(),
            Some(name) => by_name[name].clone(),
        });
        let fm = FrameMetric::new(m).unwrap();
        if fm.is_positive_definite() == Some(true) {
            return fm;
        }
    }
}

fn scramble(entry: &CatalogEntry, h: &FrameMetric, rng: &mut ChaCha8Rng) -> FrameMetric {
    let mut hnum = [[0.0_f64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            hnum[i][j] = homsym::exact_algebra::rational_to_f64(
                h.get(i + 1, j + 1).as_rational().unwrap(),
            );
        }
    }
    let ads: Vec<[[f64; 3]; 3]> = (1..=3)
        .map(|k| {
            let ad = entry.constants().adjoint(k).unwrap();
            let mut out = [[0.0; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    out[i][j] = homsym::exact_algebra::rational_to_f64(
                        ad[(i, j)].as_rational().unwrap(),
                    );
                }
            }
            out
        })
        .collect();
    for _ in 0..4 {
        let k = rng.gen_range(0..3);
        let t = rng.gen_range(-0.8..0.8);
        let s = numeric::expm(&ads[k], t);
        hnum = numeric::congruence(&hnum, &s).unwrap();
    }
    let m = Mat::from_fn(3, 3, |i, j| {
        let v = 0.5 * (hnum[i][j] + hnum[j][i]);
        Scalar::rat(Rational::from_float(v).unwrap())
    });
    FrameMetric::new(m).unwrap()
}

#[test]
fn criterion_4_canonicalization() {
    // 20 random positive-definite metrics per type, drawn on the gauge
    // orbit of the printed pattern, must come back to the pattern with a
    // verified witness: structure-preservation residual structurally zero
    // on all-exact (nilpotent shear) paths and below 1e-10 numerically.
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    for ty in BianchiType::ALL {
        let entry = catalog(ty, ty.sample_q()).unwrap();
        for trial in 0..20 {
            let pattern = random_pattern_metric(&entry, &mut rng);
            let h = scramble(&entry, &pattern, &mut rng);
            let out = canonicalize(&entry, &h).unwrap();
            assert!(
                out.reached_pattern,
                "{ty} trial {trial}: {:?}",
                out.notes
            );
            if out.exact.is_some() {
                assert_eq!(
                    out.preservation_residual, 0.0,
                    "{ty} trial {trial}: exact path must verify structurally"
                );
            } else {
                assert!(
                    out.preservation_residual < 1e-10,
                    "{ty} trial {trial}: residual {}",
                    out.preservation_residual
                );
            }
            for (i, j) in entry.pattern().zero_positions() {
                assert!(
                    out.h_out[i - 1][j - 1].abs() < 1e-10,
                    "{ty} trial {trial}: h{i}{j} = {}",
                    out.h_out[i - 1][j - 1]
                );
            }
        }
    }
    println!("criterion 4 (canonicalization with verified witnesses): PASS");
}

#[test]
fn criterion_5_coordinate_oracle() {
    const TOL: f64 = 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let mut worst = 0.0_f64;
    for (ty, q, label) in all_variants() {
        let entry = catalog(ty, q).unwrap();
        let real = realization(&entry).unwrap();
        let h = random_pattern_h(&entry, &mut rng);
        let params = bind_params(&entry, &h).unwrap();
        let points: Vec<Vec<f64>> = (0..10)
            .map(|_| sample_chart_point(&real, &mut rng))
            .collect();
        let rep = check_structure(&entry, &real, &points, &params).unwrap();
        assert!(rep.max() < TOL, "{label}: {rep:?}");
        worst = worst.max(rep.max());
    }
    for ty in [
        BianchiType::I,
        BianchiType::II,
        BianchiType::III,
        BianchiType::V,
    ] {
        let entry = catalog(ty, None).unwrap();
        let real = realization(&entry).unwrap();
        let h = random_pattern_h(&entry, &mut rng);
        let params = bind_params(&entry, &h).unwrap();
        let points: Vec<Vec<f64>> = (0..10)
            .map(|_| sample_chart_point(&real, &mut rng))
            .collect();
        for p in &points {
            for z in &real.zetas {
                let r = killing_residual(&entry, &real, z, p, &params).unwrap();
                assert!(r < TOL, "{ty} extra-field residual {r}");
                worst = worst.max(r);
            }
        }
        let enlarged = enlarged_algebra_check(&real, &points, &params).unwrap();
        assert!(enlarged < TOL, "{ty} enlarged-table residual {enlarged}");
        worst = worst.max(enlarged);
    }
    println!("criterion 5 (coordinate oracle, all residuals < 1e-9): PASS (max {worst:.3e})");
}

#[test]
fn criterion_6_specialization_sensitivity() {
    // Oracle-derived values from the closure algorithm: three distinct
    // eigenvalues leave only homogeneity; exactly two equal eigenvalues
    // admit one induced rotation; the round case is maximal and is
    // cross-checked against the constant-curvature pattern.
    let entry = catalog(BianchiType::IX, None).unwrap();
    let d_of = |a: Scalar, b: Scalar, c: Scalar| {
        let h = FrameMetric::diag_rational(&[a, b, c]);
        closure_dimension(entry.constants(), &h, ClosureMode::Symbolic)
            .unwrap()
            .d_total
    };
    assert_eq!(
        d_of(Scalar::from_int(1), Scalar::from_int(2), Scalar::from_int(3)),
        3
    );
    for lambda in [2, 3, 4] {
        assert_eq!(
            d_of(
                Scalar::from_int(1),
                Scalar::from_int(1),
                Scalar::from_int(lambda)
            ),
            4,
            "diag(1,1,{lambda}) has exactly two equal eigenvalues"
        );
    }
    // A perturbed pair: still exactly two equal.
    assert_eq!(
        d_of(
            Scalar::from_ratio(101, 100),
            Scalar::from_ratio(101, 100),
            Scalar::from_int(1)
        ),
        4
    );
    assert_eq!(
        d_of(Scalar::one(), Scalar::one(), Scalar::one()),
        6,
        "the round case is maximal"
    );
    // Cross-check the maximal case with the curvature pattern.
    let h = FrameMetric::diag_rational(&[Scalar::one(), Scalar::one(), Scalar::one()]);
    let g = connection_coefficients(entry.constants(), &h).unwrap();
    let r = curvature(&g, entry.constants());
    assert!(r.constant_curvature_factor(&h).is_some());
    println!("criterion 6 (specialization sensitivity on type IX): PASS");
}

/// Exact rational inner transforms of a catalog algebra: nilpotent shear
/// exponentials, algebraic scaling subgroup points, rational rotations and
/// boosts. Every matrix is checked against the form-preservation
/// invariant.
fn exact_inner_transforms(ty: BianchiType, c: &StructureConstants) -> Vec<Mat> {
    let mk = |rows: [[(i64, i64); 3]; 3]| {
        Mat::from_fn(3, 3, |i, j| {
            let (n, d) = rows[i][j];
            Scalar::from_ratio(n, d)
        })
    };
    let id = |n: i64| (n, 1);
    let mut out: Vec<Mat> = Vec::new();
    // Nilpotent adjoint exponentials with rational parameters.
    for k in 1..=3 {
        let ad = c.adjoint(k).unwrap();
        if ad.is_zero() {
            continue;
        }
        if ad.mul(&ad).mul(&ad).is_zero() {
            let t = Scalar::from_ratio(2, 3);
            let half_t2 = &(&t * &t) * &Scalar::from_ratio(1, 2);
            let s = Mat::identity(3)
                .add(&ad.scale(&t))
                .add(&ad.mul(&ad).scale(&half_t2));
            out.push(s);
        }
    }
    match ty {
        BianchiType::III | BianchiType::V | BianchiType::VI => {
            // Scaling subgroup at a rational point.
            let u = Scalar::from_ratio(3, 2);
            let q = match ty {
                BianchiType::VI => c.get(2, 2, 3).clone(),
                BianchiType::V => Scalar::one(),
                _ => Scalar::zero(),
            };
            // diag(u, u^q, 1) needs integer q to stay rational.
            if let Some(qr) = q.as_rational() {
                if qr.denom() == &num::BigInt::from(1) {
                    let p: i64 = qr.numer().try_into().unwrap_or(0);
                    let mut uq = Scalar::one();
                    for _ in 0..p.unsigned_abs() {
                        uq = &uq * &u;
                    }
                    if p < 0 {
                        uq = uq.inverse().unwrap();
                    }
                    let mut s = Mat::identity(3);
                    s[(0, 0)] = u.clone();
                    s[(1, 1)] = uq;
                    out.push(s);
                }
            }
        }
        BianchiType::IX => {
            // Pythagorean rotations in each coordinate plane.
            out.push(mk([
                [id(1), id(0), id(0)],
                [id(0), (3, 5), (4, 5)],
                [id(0), (-4, 5), (3, 5)],
            ]));
            out.push(mk([
                [(3, 5), id(0), (-4, 5)],
                [id(0), id(1), id(0)],
                [(4, 5), id(0), (3, 5)],
            ]));
            out.push(mk([
                [(5, 13), (12, 13), id(0)],
                [(-12, 13), (5, 13), id(0)],
                [id(0), id(0), id(1)],
            ]));
        }
        BianchiType::VIII => {
            // A rational rotation in the compact plane and rational boosts.
            out.push(mk([
                [id(1), id(0), id(0)],
                [id(0), (3, 5), (4, 5)],
                [id(0), (-4, 5), (3, 5)],
            ]));
            out.push(mk([
                [(5, 4), id(0), (3, 4)],
                [id(0), id(1), id(0)],
                [(3, 4), id(0), (5, 4)],
            ]));
            out.push(mk([
                [(5, 3), (4, 3), id(0)],
                [(4, 3), (5, 3), id(0)],
                [id(0), id(0), id(1)],
            ]));
        }
        _ => {}
    }
    out.retain(|s| c.preserved_by(s));
    out
}

fn random_unimodular(rng: &mut ChaCha8Rng) -> Mat {
    // Product of integer shears: always invertible over the rationals.
    let mut s = Mat::identity(3);
    for _ in 0..4 {
        let i = rng.gen_range(0..3);
        let mut j = rng.gen_range(0..3);
        while j == i {
            j = rng.gen_range(0..3);
        }
        let mut shear = Mat::identity(3);
        shear[(i, j)] = Scalar::from_int(rng.gen_range(-2..=2));
        s = s.mul(&shear);
    }
    s
}

fn random_posdef(rng: &mut ChaCha8Rng) -> FrameMetric {
    loop {
        let a = Mat::from_fn(3, 3, |_, _| {
            Scalar::from_ratio(rng.gen_range(-6..=6), rng.gen_range(1..=4))
        });
        let mut h = a.transpose().mul(&a);
        for i in 0..3 {
            h[(i, i)] = &h[(i, i)] + &Scalar::from_ratio(1, 2);
        }
        let fm = FrameMetric::new(h).unwrap();
        if fm.is_positive_definite() == Some(true) {
            return fm;
        }
    }
}

#[test]
fn criterion_7_property_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let mode = ClosureMode::Sampled {
        samples: 3,
        seed: SEED,
    };
    for trial in 0..50 {
        let ty = BianchiType::ALL[trial % 9];
        let entry = catalog(ty, ty.sample_q()).unwrap();
        let s0 = random_unimodular(&mut rng);
        let c = entry.constants().conjugate(&s0).unwrap();
        c.jacobi_check().expect("conjugated constants stay consistent");
        let h = random_posdef(&mut rng);

        // Bounds on the isometry dimension.
        let res = closure_dimension(&c, &h, mode).unwrap();
        assert!(
            (3..=6).contains(&res.d_total),
            "trial {trial} ({ty}): d_total = {}",
            res.d_total
        );

        // Invariance under exact inner transforms (conjugated along).
        let s0inv = s0.inverse().unwrap();
        for t in exact_inner_transforms(ty, entry.constants()) {
            let tc = s0.mul(&t).mul(&s0inv);
            assert!(c.preserved_by(&tc), "conjugated transform must preserve C");
            let ft = FiniteTransform {
                s: tc,
                provenance: Provenance::Inner,
                factors: vec![],
            };
            let ht = transform_metric(&h, &ft).unwrap();
            let res_t = closure_dimension(&c, &ht, mode).unwrap();
            assert_eq!(
                res.d_total, res_t.d_total,
                "trial {trial} ({ty}): dimension moved under a gauge transform"
            );
        }

        // Mixed-index curvature is invariant under h -> c h; the identity
        // suite holds structurally.
        let g1 = connection_coefficients(&c, &h).unwrap();
        let r1 = curvature(&g1, &c);
        let suite = identity_suite(&r1, &g1, &h, &c);
        assert!(suite.pass(), "trial {trial} ({ty}): {suite:?}");
        let scale = Scalar::from_ratio(7, 3);
        let hs = h.scaled(&scale);
        let g2 = connection_coefficients(&c, &hs).unwrap();
        let r2 = curvature(&g2, &c);
        for a in 1..=3 {
            for b in 1..=3 {
                for m in 1..=3 {
                    for nn in 1..=3 {
                        assert_eq!(r1.get(a, b, m, nn), r2.get(a, b, m, nn));
                    }
                }
            }
        }
    }
    println!("criterion 7 (property suite over 50 conjugated catalog algebras): PASS");
}

#[test]
fn criterion_8_out_of_scope_documented() {
    let report = homsym::report::reproduce(
        ClosureMode::Sampled {
            samples: 3,
            seed: SEED,
        },
        SEED,
    )
    .unwrap();
    assert!(report.all_pass);
    assert!(
        report.out_of_scope.contains("not reproduced"),
        "the spacetime solution families must be flagged out of scope"
    );
    assert!(report.to_markdown().contains(&report.out_of_scope));
    println!("criterion 8 (spacetime solution families documented out of scope): PASS");
}
