use ambig_core::vansums::*;
use proptest::prelude::*;

fn ph(v: &[(i64, i64)]) -> Vec<Phase> {
    v.iter().map(|&(a, b)| Phase::new(a, b)).collect()
}

const BUDGET: u64 = 5_000_000;

#[test]
fn generator_matches_oracle_up_to_length_six() {
    for len in 2..=6 {
        let oracle = brute_force_minimal_sums(len, 30, BUDGET).unwrap();
        assert_eq!(generate_minimal_sums(len), oracle, "length {len}");
    }
}

#[test]
fn no_minimal_sums_of_length_four_up_to_order_210() {
    assert!(brute_force_minimal_sums(4, 210, BUDGET).unwrap().is_empty());
    assert!(generate_minimal_sums(4).is_empty());
    assert!(generate_minimal_sums(1).is_empty());
}

#[test]
fn oracle_reports_budget() {
    assert!(matches!(
        brute_force_minimal_sums(7, 210, BUDGET),
        Err(ambig_core::AmbigError::OracleBudget(_))
    ));
}

#[test]
fn embedded_catalog_matches_generator() {
    let cat = Catalog::embedded();
    assert_eq!(cat.max_length(), 12);
    assert!(cat.invalid_entries().is_empty());
    for len in 2..=10 {
        let mut stored: Vec<Vec<Phase>> =
            cat.sums_of_length(len).unwrap().iter().map(|s| s.canonical()).collect();
        stored.sort();
        assert_eq!(stored, generate_minimal_sums(len), "length {len}");
    }
    for len in 11..=12 {
        let sums = cat.sums_of_length(len).unwrap();
        assert!(!sums.is_empty());
        let canon: std::collections::BTreeSet<_> = sums.iter().map(|s| s.canonical()).collect();
        assert_eq!(canon.len(), sums.len(), "duplicate rotation class at length {len}");
    }
}

#[test]
fn nontrivial_length_six_sum() {
    let s = ph(&[(1, 6), (5, 6), (1, 5), (2, 5), (3, 5), (4, 5)]);
    assert!(is_vanishing(&s));
    assert!(is_minimal(&s));
    let cat = Catalog::embedded();
    let six = cat.sums_of_length(6).unwrap();
    assert_eq!(six.len(), 1);
    assert_eq!(six[0].canonical(), canonical_rotation(&s));
    assert_eq!(six[0].phases(), MinimalVanishingSum::new(s).phases());
}

#[test]
fn vanishing_examples() {
    assert!(is_vanishing(&ph(&[(0, 1), (1, 2)])));
    assert!(is_vanishing(&ph(&[(0, 1), (1, 3), (2, 3)])));
    assert!(!is_vanishing(&ph(&[(0, 1), (1, 3)])));
    assert!(!is_minimal(&ph(&[(0, 1), (1, 2), (1, 3), (5, 6)])));
}

#[test]
fn partitions_of_twelve() {
    let got: Vec<String> = restricted_partitions(12).iter().map(|p| p.to_string()).collect();
    let want = [
        "2+2+2+2+2+2", "2+2+2+3+3", "3+3+3+3", "2+2+3+5", "2+5+5", "2+2+2+6", "3+3+6", "6+6",
        "2+3+7", "5+7", "2+2+8", "3+9", "2+10", "12",
    ];
    assert_eq!(got, want);
}

#[test]
fn mann_bounds() {
    let b = |s: &str| mann_bound(&s.parse().unwrap());
    assert_eq!(b("2+2+2"), 2);
    assert_eq!(b("3+3"), 6);
    assert_eq!(b("6"), 30);
    for sum in Catalog::embedded().iter() {
        let bound = mann_bound(&RestrictedPartition::new(vec![sum.len()]).unwrap());
        assert_eq!(bound % normalized_order(sum), 0, "{sum}");
    }
}

proptest! {
    #[test]
    fn rotation_preserves_vanishing_and_minimality(idx in 0usize..40, num in 0i64..420) {
        let cat = Catalog::embedded();
        let all: Vec<_> = cat.iter().collect();
        let sum = all[idx % all.len()];
        let rot = Phase::new(num, 420);
        let rotated: Vec<Phase> = sum.phases().iter().map(|p| wrap_phase(*p + rot)).collect();
        prop_assert!(is_vanishing(&rotated));
        prop_assert!(is_minimal(&rotated));
        prop_assert_eq!(canonical_rotation(&rotated), sum.canonical());
    }

    #[test]
    fn canonical_rotation_is_idempotent(v in proptest::collection::vec(0i64..30, 1..7)) {
        let p: Vec<Phase> = v.iter().map(|&x| Phase::new(x, 30)).collect();
        let c = canonical_rotation(&p);
        prop_assert_eq!(canonical_rotation(&c), c.clone());
        prop_assert_eq!(c[0], Phase::from_integer(0));
    }
}
