use ambig_core::array::{classical_vandermonde, LinearArray};
use ambig_core::tableaux::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

const TABLE: [(&[i64], usize); 26] = [
    (&[0, 2], 2),
    (&[0, 3], 3),
    (&[0, 4], 4),
    (&[0, 5], 5),
    (&[0, 1, 3], 3),
    (&[0, 1, 4], 6),
    (&[0, 1, 5], 10),
    (&[0, 2, 3], 3),
    (&[0, 2, 4], 8),
    (&[0, 2, 5], 15),
    (&[0, 3, 4], 6),
    (&[0, 3, 5], 15),
    (&[0, 4, 5], 10),
    (&[0, 1, 2, 4], 4),
    (&[0, 1, 2, 5], 10),
    (&[0, 1, 3, 4], 6),
    (&[0, 1, 3, 5], 20),
    (&[0, 1, 4, 5], 20),
    (&[0, 2, 3, 4], 4),
    (&[0, 2, 3, 5], 15),
    (&[0, 2, 4, 5], 20),
    (&[0, 3, 4, 5], 10),
    (&[0, 1, 2, 3, 5], 5),
    (&[0, 1, 2, 4, 5], 10),
    (&[0, 1, 3, 4, 5], 10),
    (&[0, 2, 3, 4, 5], 5),
];

/// Counts all fillings with entries `1..=m` by brute force and keeps the
/// semistandard ones.
fn brute_count(shape: &Shape, m: usize) -> usize {
    let rows = shape.row_lengths();
    let cells: usize = rows.iter().sum();
    let mut count = 0;
    let mut fill = vec![1u8; cells];
    loop {
        let mut it = fill.iter();
        let t = Tableau { rows: rows.iter().map(|&l| it.by_ref().take(l).copied().collect()).collect() };
        if t.is_semistandard(m) {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == cells {
                return count;
            }
            fill[i] += 1;
            if fill[i] as usize <= m {
                break;
            }
            fill[i] = 1;
            i += 1;
        }
    }
}

#[test]
fn table_counts() {
    let start = Instant::now();
    for (r, n) in TABLE {
        let ts = enumerate_ssyt(&Shape::from_positions(r), r.len());
        assert_eq!(ts.len(), n, "{r:?}");
        assert_eq!(ssyt_count_formula(r), n as u128, "{r:?}");
    }
    assert!(start.elapsed().as_secs_f64() < 1.0);
}

#[test]
fn counts_match_brute_force() {
    for (r, n) in TABLE.iter().filter(|(r, _)| r.len() <= 4) {
        assert_eq!(brute_count(&Shape::from_positions(r), r.len()), *n, "{r:?}");
    }
}

#[test]
fn ula_has_one_empty_tableau() {
    let ts = enumerate_ssyt(&Shape::from_positions(&[0, 1, 2, 3]), 4);
    assert_eq!(ts.len(), 1);
    assert_eq!(ts[0].weight(4), vec![0; 4]);
}

#[test]
fn column_shape_gives_pairs() {
    let ts = enumerate_ssyt(&Shape::new(vec![0, 0, 1, 1]), 4);
    let cols: Vec<Vec<u8>> = ts.iter().map(|t| t.rows.iter().filter(|r| !r.is_empty()).map(|r| r[0]).collect()).collect();
    let mut want = vec![];
    for a in 1..=4 {
        for b in a + 1..=4 {
            want.push(vec![a, b]);
        }
    }
    let mut got = cols.clone();
    got.sort();
    assert_eq!(got, want);
}

fn random_z(rng: &mut ChaCha8Rng, m: usize) -> Vec<Complex64> {
    (0..m).map(|_| Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5))).collect()
}

#[test]
fn schur_times_vandermonde_is_the_generalized_determinant() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (r, _) in TABLE {
        let a = LinearArray::with_unit_baseline(r).unwrap();
        let ts = enumerate_ssyt(&a.shape(), r.len());
        let w = WeightMatrix::from_tableaux(&ts, r.len());
        for _ in 0..20 {
            let z = random_z(&mut rng, r.len());
            let lhs = a.generalized_vandermonde_det(&z);
            let rhs = w.schur_eval(&z) * classical_vandermonde(&z);
            assert!((lhs - rhs).norm() <= 1e-9 * lhs.norm().max(1.0), "{r:?}");
        }
    }
}

#[test]
fn schur_closed_form_for_one_two_five() {
    let shape = Shape::new(vec![1, 1, 3]);
    let ts = enumerate_ssyt(&shape, 3);
    assert_eq!(ts.len(), 6);
    let w = WeightMatrix::from_tableaux(&ts, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let z = random_z(&mut rng, 3);
        let (a, b, c) = (z[0], z[1], z[2]);
        let want = a * b * c * (a * a + a * b + b * b + a * c + b * c + c * c);
        assert!((w.schur_eval(&z) - want).norm() <= 1e-10 * want.norm().max(1.0));
    }
}

#[test]
fn weight_permutation_exists_for_every_tau() {
    let ts = enumerate_ssyt(&Shape::new(vec![1, 1, 3]), 3);
    let w = WeightMatrix::from_tableaux(&ts, 3);
    for tau in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
        let g = w.permute_weight_rows(&tau);
        for (l, &k) in g.iter().enumerate() {
            for m in 0..3 {
                assert_eq!(w.get(tau[m], k), w.get(m, l));
            }
        }
    }
}

proptest! {
    #[test]
    fn weights_sum_to_box_count(mut r in proptest::collection::btree_set(0i64..9, 2..5)) {
        let r: Vec<i64> = std::mem::take(&mut r).into_iter().collect();
        let shape = Shape::from_positions(&r);
        let ts = enumerate_ssyt(&shape, r.len());
        prop_assert_eq!(ts.len() as u128, ssyt_count_formula(&r));
        for t in &ts {
            prop_assert!(t.is_semistandard(r.len()));
            prop_assert_eq!(t.weight(r.len()).iter().sum::<u32>() as usize, shape.boxes());
        }
    }
}
