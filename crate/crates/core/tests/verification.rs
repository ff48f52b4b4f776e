//! Randomized and exhaustive verification suites: grid structure over the
//! full parameter range, the Hessian identity grid, assembled-block ranks,
//! Gram-determinant positivity, and the shard-independence contract of every
//! sampling loop.

use tarry_core::criteria;
use tarry_core::lemmas::{self, DEFAULT_DELTA};
use tarry_core::shape::{ExponentVector, PolynomialShape};
use tarry_core::structure::{
    grid_block_checks, iterated_jacobi, prop3_rank_check, satisfies_block_conditions,
    singular_fraction, structure_decompose, two_var_matrix,
};

fn shape(r: usize, rows: &[&[u32]]) -> PolynomialShape {
    PolynomialShape::new(r, rows.iter().map(|r| r.to_vec()).collect()).unwrap()
}

#[test]
fn grid_structure_exhaustive_to_twelve() {
    for n in 1..=12u32 {
        for m in 1..=n {
            let report = lemmas::verify_lemma1(n, m).unwrap();
            assert!(
                report.pass,
                "grid ({n}, {m}) failed: {:?}",
                report.structure
            );
            let expected_rows = ((n + 1) * (m + 1) - 1) as usize;
            assert_eq!(report.rows, expected_rows);
            // Mixed blocks carry the positive closed-form determinants.
            let matrix = two_var_matrix(n, m).unwrap();
            let decomposition = structure_decompose(&matrix).unwrap();
            for block in grid_block_checks(n, m, &matrix, &decomposition) {
                assert!(block.ok);
            }
        }
    }
}

#[test]
fn block_conditions_hold_on_varied_shapes() {
    let shapes = vec![
        shape(1, &[&[1], &[2], &[3]]),
        shape(2, &[&[1, 1], &[2, 2], &[3, 3]]),
        shape(
            2,
            &[
                &[0, 1],
                &[1, 0],
                &[0, 2],
                &[1, 1],
                &[2, 0],
                &[0, 3],
                &[1, 2],
                &[2, 1],
                &[3, 0],
            ],
        ),
        shape(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]]),
        PolynomialShape::product_family(4, 4).unwrap(),
    ];
    for p in shapes {
        let matrix = p.exponent_matrix();
        let decomposition = structure_decompose(&matrix).unwrap();
        assert!(
            satisfies_block_conditions(&matrix, &decomposition),
            "conditions failed for {:?}",
            decomposition
        );
        assert_eq!(decomposition.blocks.iter().sum::<usize>(), p.n());
        assert!(decomposition
            .blocks
            .iter()
            .all(|&b| b <= decomposition.rank));
    }
}

#[test]
fn hessian_identity_grid_small() {
    // Smaller sweep than the acceptance run: r in 2..=4, exponents to 3.
    fn vectors(r: usize, max: u32) -> Vec<Vec<u32>> {
        let mut out = vec![vec![]];
        for _ in 0..r {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (1..=max).map(move |e| {
                        let mut w = v.clone();
                        w.push(e);
                        w
                    })
                })
                .collect();
        }
        out
    }
    for r in 2..=4usize {
        for exps in vectors(r, 3) {
            let kvec = ExponentVector::new(exps.clone()).unwrap();
            let res = lemmas::verify_lemma2(&kvec, 100, 17, DEFAULT_DELTA).unwrap();
            assert!(res.pass, "identity failed for {exps:?}: {res:?}");
        }
    }
}

#[test]
fn hessian_exact_mode_agrees_with_numeric() {
    for exps in [vec![1u32, 1], vec![2, 3], vec![1, 2, 3], vec![2, 2, 2]] {
        let kvec = ExponentVector::new(exps).unwrap();
        assert!(lemmas::verify_lemma2_exact(&kvec, 40, 23).unwrap());
    }
}

#[test]
fn assembled_blocks_reach_full_rank() {
    // Nine-pair set: q = 5 blocks of two columns each.
    let nine = shape(
        2,
        &[
            &[0, 1],
            &[1, 0],
            &[0, 2],
            &[1, 1],
            &[2, 0],
            &[0, 3],
            &[1, 2],
            &[2, 1],
            &[3, 0],
        ],
    );
    let report = prop3_rank_check(&nine, 120, 11).unwrap();
    assert_eq!(report.q, 5);
    assert!(report.fraction >= 0.99, "fraction {}", report.fraction);

    // Full-rank exponent matrix: a single block suffices.
    let p = shape(2, &[&[1, 0], &[0, 1]]);
    let report = prop3_rank_check(&p, 100, 3).unwrap();
    assert_eq!(report.q, 1);
    assert_eq!(report.fraction, 1.0);

    // Rank-one product shape: two blocks, rank two at generic points.
    let p = shape(2, &[&[1, 1], &[2, 2]]);
    let report = prop3_rank_check(&p, 120, 5).unwrap();
    assert_eq!(report.q, 2);
    assert!(report.fraction >= 0.99, "fraction {}", report.fraction);
}

#[test]
fn gram_determinants_nonnegative_and_generically_positive() {
    let p = PolynomialShape::product_family(2, 2).unwrap();
    let mut hits = 0usize;
    let trials = 200usize;
    for t in 0..trials {
        let mut rng = tarry_core::rng::shard_rng(31, t as u64);
        let points: Vec<Vec<f64>> = (0..4)
            .map(|_| {
                (0..2)
                    .map(|_| rand::Rng::gen_range(&mut rng, 1.0 / 16.0..=1.0))
                    .collect()
            })
            .collect();
        let phi = iterated_jacobi(&p, 2, 1, &points).unwrap().gram_det();
        assert!(phi >= -1e-12, "Gram determinant {phi} below zero");
        if phi > 1e-12 {
            hits += 1;
        }
    }
    assert!(
        hits as f64 / trials as f64 >= 0.99,
        "positive fraction {hits}/{trials}"
    );
}

#[test]
fn singular_region_tiny_for_product_shape() {
    // Total degree of the two-variable product shape is four, so the
    // regular-region floor applies to levels one through three.
    let p = PolynomialShape::product_family(2, 2).unwrap();
    let report = singular_fraction(&p, 2, 1e-12, 300, 9, 1.0 / 16.0).unwrap();
    assert_eq!(report.levels, vec![1, 2, 3]);
    assert!(report.fraction >= 0.99, "fraction {}", report.fraction);
}

#[test]
fn sampling_is_thread_count_independent() {
    let nine = shape(
        2,
        &[
            &[0, 1],
            &[1, 0],
            &[0, 2],
            &[1, 1],
            &[2, 0],
            &[0, 3],
            &[1, 2],
            &[2, 1],
            &[3, 0],
        ],
    );
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let quad = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap();

    let a = single.install(|| prop3_rank_check(&nine, 60, 77).unwrap());
    let b = quad.install(|| prop3_rank_check(&nine, 60, 77).unwrap());
    assert_eq!(a.passes, b.passes);
    assert_eq!(a.fraction.to_bits(), b.fraction.to_bits());

    let p = PolynomialShape::product_family(2, 2).unwrap();
    let a = single.install(|| singular_fraction(&p, 2, 1e-12, 80, 13, 1.0 / 16.0).unwrap());
    let b = quad.install(|| singular_fraction(&p, 2, 1e-12, 80, 13, 1.0 / 16.0).unwrap());
    assert_eq!(a.in_d_lambda, b.in_d_lambda);
}

#[test]
fn report_consistency_for_known_families() {
    // The product-family threshold is m(m+1)/2 + 1 for every r.
    for r in 1..=4usize {
        for m in 1..=4u32 {
            let p = PolynomialShape::product_family(r, m).unwrap();
            let report = criteria::convergence_report(&p).unwrap();
            let hi = report
                .gamma_high
                .expect("hypotheses hold for the product family");
            let expected_num = i64::from(m) * (i64::from(m) + 1) + 2;
            assert!(
                hi.equals(expected_num, 2),
                "threshold for r = {r}, m = {m}: {}/{}",
                hi.num,
                hi.den
            );
        }
    }
}

#[test]
fn certificates_never_overlap() {
    let shapes = vec![
        shape(1, &[&[1], &[2]]),
        shape(2, &[&[1, 1]]),
        shape(2, &[&[1, 1], &[2, 2]]),
        PolynomialShape::product_family(3, 3).unwrap(),
        shape(
            2,
            &[
                &[0, 1],
                &[1, 0],
                &[0, 2],
                &[1, 1],
                &[2, 0],
                &[0, 3],
                &[1, 2],
                &[2, 1],
                &[3, 0],
            ],
        ),
    ];
    for p in shapes {
        let report = criteria::convergence_report(&p).unwrap();
        if let (Some(max_div), Some(conv)) = (
            report.divergent.iter().map(|c| c.two_k).max(),
            &report.convergent,
        ) {
            assert!(max_div < conv.two_k, "overlap in {report:?}");
        }
        if let (Some(lo), Some(hi)) = (&report.gamma_low, &report.gamma_high) {
            assert!(
                lo.num * hi.den <= hi.num * lo.den,
                "bracket inverted in {report:?}"
            );
        }
    }
}
