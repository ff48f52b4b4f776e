//! Property suites for the monomial order, the product-of-supports law, and
//! exact rank, with an independent minor-enumeration oracle.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use proptest::prelude::*;
use tarry_core::linalg::rank_exact_i64;
use tarry_core::order::{high_member, nl_compare, nl_sort, support_product};
use tarry_core::shape::{ExponentVector, PolynomialShape};

fn vector(exps: &[u32]) -> ExponentVector {
    ExponentVector::new(exps.to_vec()).unwrap()
}

/// Independent rank oracle: the size of the largest square minor with a
/// nonzero determinant, determinants by Laplace expansion.
mod oracle {
    pub fn laplace_det(m: &[Vec<i128>]) -> i128 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        if n == 1 {
            return m[0][0];
        }
        let mut det = 0i128;
        for (j, &top) in m[0].iter().enumerate() {
            if top == 0 {
                continue;
            }
            let minor: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, &v)| v)
                        .collect()
                })
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            det += sign * top * laplace_det(&minor);
        }
        det
    }

    fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(0, n, k, &mut Vec::new(), &mut out);
        out
    }

    pub fn minor_rank(rows: &[Vec<i64>]) -> usize {
        let n = rows.len();
        if n == 0 {
            return 0;
        }
        let c = rows[0].len();
        for size in (1..=n.min(c)).rev() {
            for row_set in combinations(n, size) {
                for col_set in combinations(c, size) {
                    let minor: Vec<Vec<i128>> = row_set
                        .iter()
                        .map(|&i| col_set.iter().map(|&j| rows[i][j] as i128).collect())
                        .collect();
                    if laplace_det(&minor) != 0 {
                        return size;
                    }
                }
            }
        }
        0
    }
}

fn exponent_vec(r: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0u32..5, r).prop_filter("degree >= 1", |v| v.iter().any(|&e| e > 0))
}

fn small_shape() -> impl Strategy<Value = PolynomialShape> {
    (1usize..4).prop_flat_map(|r| {
        // One variable admits only four distinct vectors with entries below
        // five; keep the requested size below that.
        let max = if r == 1 { 4 } else { 6 };
        prop::collection::btree_set(exponent_vec(r), 1..=max)
            .prop_map(move |set| PolynomialShape::new(r, set.into_iter().collect()).unwrap())
    })
}

fn nl(a: &[u32], b: &[u32]) -> Ordering {
    nl_compare(&vector(a), &vector(b)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    /// Trichotomy and antisymmetry: the order is strict and total.
    #[test]
    fn order_is_strict_and_total((a, b) in (1usize..5).prop_flat_map(|r| (exponent_vec(r), exponent_vec(r)))) {
        let ab = nl(&a, &b);
        let ba = nl(&b, &a);
        prop_assert_eq!(ab, ba.reverse());
        prop_assert_eq!(ab == Ordering::Equal, a == b);
    }

    #[test]
    fn order_is_transitive((a, b, c) in (1usize..5).prop_flat_map(|r| (exponent_vec(r), exponent_vec(r), exponent_vec(r)))) {
        let mut sorted = [a, b, c];
        sorted.sort_by(|x, y| nl(x, y));
        prop_assert!(nl(&sorted[0], &sorted[1]) != Ordering::Greater);
        prop_assert!(nl(&sorted[1], &sorted[2]) != Ordering::Greater);
        prop_assert!(nl(&sorted[0], &sorted[2]) != Ordering::Greater);
    }

    /// Adding componentwise preserves strict order when both summand pairs
    /// are ordered (strict-strict and strict-equal variants).
    #[test]
    fn ordered_monoid_compatibility(
        (a, b, c, d) in (1usize..5).prop_flat_map(|r| {
            (exponent_vec(r), exponent_vec(r), exponent_vec(r), exponent_vec(r))
        })
    ) {
        let (lo1, hi1) = match nl(&a, &c) {
            Ordering::Less => (a, c),
            Ordering::Greater => (c, a),
            Ordering::Equal => return Ok(()),
        };
        // Strict-strict.
        if nl(&b, &d) == Ordering::Less {
            let left = vector(&lo1).sum(&vector(&b)).unwrap();
            let right = vector(&hi1).sum(&vector(&d)).unwrap();
            prop_assert_eq!(nl_compare(&left, &right).unwrap(), Ordering::Less);
        }
        // Strict-equal.
        let left = vector(&lo1).sum(&vector(&b)).unwrap();
        let right = vector(&hi1).sum(&vector(&b)).unwrap();
        prop_assert_eq!(nl_compare(&left, &right).unwrap(), Ordering::Less);
    }

    /// The high member of a product of supports is the sum of high members.
    #[test]
    fn product_high_member((p, q) in (1usize..4).prop_flat_map(|r| {
        let max = if r == 1 { 4 } else { 6 };
        let shape = move || prop::collection::btree_set(exponent_vec(r), 1..=max)
            .prop_map(move |s| PolynomialShape::new(r, s.into_iter().collect()).unwrap());
        (shape(), shape())
    })) {
        let product = support_product(&p, &q).unwrap();
        let expected = high_member(&p).sum(&high_member(&q)).unwrap();
        prop_assert_eq!(high_member(&product), expected);
    }

    /// The product support equals the set of all pairwise sums.
    #[test]
    fn product_support_oracle((p, q) in (1usize..4).prop_flat_map(|r| {
        let max = if r == 1 { 4 } else { 5 };
        let shape = move || prop::collection::btree_set(exponent_vec(r), 1..=max)
            .prop_map(move |s| PolynomialShape::new(r, s.into_iter().collect()).unwrap());
        (shape(), shape())
    })) {
        let product = support_product(&p, &q).unwrap();
        let got: BTreeSet<Vec<u32>> =
            product.monomials().iter().map(|m| m.exponents().to_vec()).collect();
        let mut expected = BTreeSet::new();
        for a in p.monomials() {
            for b in q.monomials() {
                expected.insert(a.sum(b).unwrap().exponents().to_vec());
            }
        }
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn sort_is_idempotent_permutation(p in small_shape()) {
        let sorted = nl_sort(&p);
        let again = nl_sort(&sorted);
        prop_assert_eq!(&sorted, &again);
        let mut a: Vec<Vec<u32>> = p.monomials().iter().map(|m| m.exponents().to_vec()).collect();
        let mut b: Vec<Vec<u32>> = sorted.monomials().iter().map(|m| m.exponents().to_vec()).collect();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
        // Strictly increasing in the n.-l. order.
        for w in sorted.monomials().windows(2) {
            prop_assert_eq!(nl_compare(&w[0], &w[1]).unwrap(), Ordering::Less);
        }
    }

    /// Parsing then reading the exponent matrix loses nothing.
    #[test]
    fn matrix_roundtrip_is_lossless(p in small_shape()) {
        let doc = serde_json::json!({
            "r": p.r(),
            "monomials": p.monomials().iter().map(|m| m.exponents().to_vec()).collect::<Vec<_>>(),
        });
        let parsed = PolynomialShape::from_json_str(&doc.to_string()).unwrap();
        let matrix = parsed.exponent_matrix();
        let rows: Vec<Vec<u32>> = matrix.rows().map(|r| r.to_vec()).collect();
        let original: Vec<Vec<u32>> = p.monomials().iter().map(|m| m.exponents().to_vec()).collect();
        prop_assert_eq!(rows, original);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    /// Exact rank agrees with exhaustive minor enumeration.
    #[test]
    fn rank_matches_minor_oracle(rows in prop::collection::vec(prop::collection::vec(-9i64..=9, 1..=5), 1..=5)) {
        let width = rows[0].len();
        let rows: Vec<Vec<i64>> = rows.into_iter().map(|mut r| { r.resize(width, 0); r }).collect();
        prop_assert_eq!(rank_exact_i64(&rows), oracle::minor_rank(&rows));
    }

    /// Rank is invariant under row/column permutation and nonzero row scaling.
    #[test]
    fn rank_invariances(
        rows in prop::collection::vec(prop::collection::vec(-9i64..=9, 4), 1..=5),
        row_keys in prop::collection::vec(0u64..1000, 5),
        col_keys in prop::collection::vec(0u64..1000, 4),
        scale in prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3]),
        scaled_row in 0usize..5,
    ) {
        let base = rank_exact_i64(&rows);

        let mut order: Vec<usize> = (0..rows.len()).collect();
        order.sort_by_key(|&i| row_keys[i]);
        let permuted: Vec<Vec<i64>> = order.iter().map(|&i| rows[i].clone()).collect();
        prop_assert_eq!(rank_exact_i64(&permuted), base);

        let mut cols: Vec<usize> = (0..4).collect();
        cols.sort_by_key(|&j| col_keys[j]);
        let col_permuted: Vec<Vec<i64>> =
            rows.iter().map(|r| cols.iter().map(|&j| r[j]).collect()).collect();
        prop_assert_eq!(rank_exact_i64(&col_permuted), base);

        let mut scaled = rows.clone();
        let idx = scaled_row % scaled.len();
        for v in &mut scaled[idx] {
            *v *= scale;
        }
        prop_assert_eq!(rank_exact_i64(&scaled), base);
    }
}

/// The nine-pair listing is reproduced from any input order; its matrix has
/// rank two by minor enumeration.
#[test]
fn nine_pair_listing_and_rank() {
    let reference: Vec<Vec<u32>> = vec![
        vec![0, 1],
        vec![1, 0],
        vec![0, 2],
        vec![1, 1],
        vec![2, 0],
        vec![0, 3],
        vec![1, 2],
        vec![2, 1],
        vec![3, 0],
    ];
    let scrambled: Vec<Vec<u32>> = [4, 0, 8, 3, 6, 1, 5, 7, 2]
        .iter()
        .map(|&i| reference[i].clone())
        .collect();
    let sorted = nl_sort(&PolynomialShape::new(2, scrambled).unwrap());
    let got: Vec<Vec<u32>> = sorted
        .monomials()
        .iter()
        .map(|m| m.exponents().to_vec())
        .collect();
    assert_eq!(got, reference);

    let rows: Vec<Vec<i64>> = reference
        .iter()
        .map(|r| r.iter().map(|&e| i64::from(e)).collect())
        .collect();
    assert_eq!(oracle::minor_rank(&rows), 2);
    assert_eq!(rank_exact_i64(&rows), 2);
}
