use ambig_core::array::{turns_to_radians, LinearArray, DEFAULT_TOL};
use ambig_core::enumeration::*;
use ambig_core::exact::{qi, qr, Q};
use ambig_core::vansums::{Catalog, RestrictedPartition};
use ambig_core::AmbigError;
use std::collections::BTreeSet;

fn arr(pos: &[i64]) -> LinearArray {
    LinearArray::with_unit_baseline(pos).unwrap()
}

fn run(pos: &[i64], part: &str) -> PartitionResult {
    let p: RestrictedPartition = part.parse().unwrap();
    enumerate_partition(&arr(pos), &p, &Catalog::embedded(), &EnumerationOptions::default()).unwrap()
}

/// `-pi * [x_1, ..., x_M]` in turns, sorted.
fn neg_pi(xs: &[Q]) -> Vec<Q> {
    let mut v: Vec<Q> = xs.iter().map(|x| -x / qi(2)).collect();
    v.sort();
    v
}

fn in_some(r: &PartitionResult, p: &[Q]) -> bool {
    r.classes.iter().any(|c| c.contains(p))
}

#[test]
fn two_two_two_gives_the_two_line_classes() {
    let r = run(&[0, 1, 3, 4], "2+2+2");
    assert_eq!(r.families.len(), 2);
    assert!(r.classes.iter().all(|c| c.dim() == 1 && c.verified && c.samples >= 5));
    for k in 1..20 {
        let v = qr(k, 20);
        let a = neg_pi(&[qi(1), v.clone(), qi(0), -v.clone()]);
        let b = neg_pi(&[qi(1), qi(1) - &v, qi(1) - qi(2) * &v, -v.clone()]);
        if a == b {
            // both lines pass through the uniform point at v = 1/2
            assert_eq!(k, 10);
            continue;
        }
        let ia = r.classes.iter().position(|c| c.contains(&a)).unwrap();
        let ib = r.classes.iter().position(|c| c.contains(&b)).unwrap();
        assert_ne!(ia, ib);
    }
}

#[test]
fn three_three_contains_the_triple_class() {
    let r = run(&[0, 1, 3, 4], "3+3");
    for k in -19..20 {
        let v = qr(k, 20);
        let p = neg_pi(&[qi(1), qr(1, 3), qr(-1, 3), v]);
        assert!(in_some(&r, &p), "v = {k}/20");
    }
    // the rotation of that class which moves the free angle to -pi
    let p = vec![qr(-1, 2), qr(-1, 3), qi(0), qr(1, 3)];
    assert!(in_some(&r, &p));
    assert_eq!(r.families.len(), 2);
}

#[test]
fn partition_six_gives_the_eight_table_points() {
    let r = run(&[0, 1, 3, 4], "6");
    let rows = [
        (14, 8, -3),
        (14, 2, -9),
        (9, 8, -4),
        (9, -2, -14),
        (4, -2, -3),
        (4, -8, -9),
        (3, 2, -4),
        (3, -8, -14),
    ];
    let want: BTreeSet<Vec<Q>> =
        rows.iter().map(|&(a, b, c)| neg_pi(&[qi(1), qr(a, 15), qr(b, 15), qr(c, 15)])).collect();
    let got: BTreeSet<Vec<Q>> = r
        .classes
        .iter()
        .map(|c| {
            assert_eq!(c.kind, ClassKind::Discrete);
            c.piece.point(&[])
        })
        .collect();
    assert_eq!(got, want);
}

#[test]
fn ula_has_no_partitions() {
    let res = enumerate_all(&arr(&[0, 1, 2, 3]), &Catalog::embedded(), &EnumerationOptions::default()).unwrap();
    assert!(res.is_empty());
    assert!(uniform_ambiguities(&arr(&[0, 1, 2, 3])).is_empty());
}

#[test]
fn oversized_problem_is_rejected_before_partitioning() {
    let err = enumerate_all(&arr(&[0, 1, 3, 6, 7]), &Catalog::embedded(), &EnumerationOptions::default());
    assert!(matches!(err, Err(AmbigError::CatalogExhausted(315))));
}

#[test]
fn uniform_vectors_of_small_array() {
    let u = uniform_ambiguities(&arr(&[0, 1, 3, 4]));
    assert!(u.iter().any(|x| x.pair == (0, 4) && x.phi == vec![qr(-1, 2), qr(-1, 4), qi(0), qr(1, 4)]));
    let res = enumerate_all(&arr(&[0, 1, 3, 4]), &Catalog::embedded(), &EnumerationOptions::default()).unwrap();
    assert!(check_uniform_coverage(&arr(&[0, 1, 3, 4]), &res));
    let two = res.iter().find(|r| r.partition.to_string() == "2+2+2").unwrap();
    let line = two.classes.iter().find(|c| c.contains(&neg_pi(&[qi(1), qr(1, 3), qi(0), qr(-1, 3)]))).unwrap();
    assert!(line.contains(&neg_pi(&[qi(1), qr(1, 2), qi(0), qr(-1, 2)])));
}

#[test]
fn limitation_point_is_ambiguous_but_unclassified() {
    let a = arr(&[0, 1, 3, 4]);
    let s = 129f64.sqrt();
    let d1 = ((12.0 - s) / 3.0).sqrt();
    let d2 = ((12.0 + s) / 3.0).sqrt();
    let pi = std::f64::consts::PI;
    let phi = [2.0 * d1.atan() - pi, 2.0 * d2.atan() - pi, pi - 2.0 * d2.atan(), pi - 2.0 * d1.atan()];
    assert!(a.is_ambiguous(&phi, DEFAULT_TOL).is_ambiguous());
    let res = enumerate_all(&a, &Catalog::embedded(), &EnumerationOptions::default()).unwrap();
    let turns: Vec<f64> = phi.iter().map(|x| x / (2.0 * pi)).collect();
    for p in chart_rotations(a.baseline(), &turns) {
        assert!(!contains_point_approx(&res, &p, 1e-9));
    }
}

#[test]
fn large_array_six_six() {
    let pos: Vec<i64> = (0..=10).chain([12]).collect();
    let r = run(&pos, "6+6");
    assert!(r.complete);
    assert_eq!(r.config_count, Some(130));
    assert_eq!(r.families.len(), 6);
    assert!(r.classes.iter().all(|c| c.dim() == 1 && c.verified));
}

#[test]
fn large_array_uniform_in_two_six() {
    let pos: Vec<i64> = (0..=10).chain([12]).collect();
    let u = uniform_ambiguities(&arr(&pos));
    assert_eq!(u.len(), 1);
    assert_eq!(u[0].phi, (0..12).map(|c| qr(-1, 2) + qr(c, 12)).collect::<Vec<_>>());
    let r = run(&pos, "2+2+2+2+2+2");
    assert_eq!(r.classes.len(), 1);
    assert_eq!(r.classes[0].dim(), 5);
    assert!(r.classes[0].contains(&u[0].phi));
}

#[test]
fn pruning_keeps_the_class_set() {
    for part in ["2+2+2", "3+3", "6"] {
        let p: RestrictedPartition = part.parse().unwrap();
        let a = arr(&[0, 1, 3, 4]);
        let on = enumerate_partition(&a, &p, &Catalog::embedded(), &EnumerationOptions::default()).unwrap();
        let opts = EnumerationOptions { prune: false, ..Default::default() };
        let off = enumerate_partition(&a, &p, &Catalog::embedded(), &opts).unwrap();
        let key = |r: &PartitionResult| r.classes.iter().map(|c| c.affine_strings()).collect::<BTreeSet<_>>();
        assert_eq!(key(&on), key(&off), "{part}");
        assert_eq!(on.config_count, off.config_count, "{part}");
        assert!(on.leaves <= off.leaves);
    }
}

#[test]
fn reports_are_deterministic() {
    let a = arr(&[0, 1, 3, 4]);
    let go = || {
        let res = enumerate_all(&a, &Catalog::embedded(), &EnumerationOptions::default()).unwrap();
        serde_json::to_string(&EnumerationReport::new(&a, 6, &res, false)).unwrap()
    };
    assert_eq!(go(), go());
}

#[test]
fn corrupted_catalog_trips_verification() {
    let text = Catalog::embedded().to_text().replace("2 | 0 1/2", "2 | 0 1/3");
    let cat = Catalog::parse(&text).unwrap();
    assert!(!cat.invalid_entries().is_empty());
    let err = enumerate_all(&arr(&[0, 1, 3, 4]), &cat, &EnumerationOptions::default()).unwrap_err();
    assert!(matches!(err, AmbigError::Verification(_)), "{err}");
}

#[test]
fn baseline_below_one_keeps_classes_in_window() {
    let a = LinearArray::new(&[0, 1, 3, 4], qr(1, 2)).unwrap();
    let res = enumerate_all(&a, &Catalog::embedded(), &EnumerationOptions::default()).unwrap();
    for r in &res {
        for c in &r.classes {
            for p in sample_points(&c.piece) {
                let phi = c.piece.point(&p);
                assert_eq!(phi[0], qr(-1, 4));
                assert!(phi.windows(2).all(|w| w[0] < w[1]));
                assert!(*phi.last().unwrap() <= qr(1, 4));
                let rad: Vec<f64> = phi.iter().map(turns_to_radians).collect();
                assert!(a.is_ambiguous(&rad, DEFAULT_TOL).is_ambiguous());
            }
        }
    }
    assert!(check_uniform_coverage(&a, &res));
}

/// Table of the rotated length-6 vectors: offsets in units of pi and the
/// upper end of the parameter range.
fn f6_table() -> Vec<(Vec<Q>, Q)> {
    let rows: [([(i64, i64); 6], (i64, i64)); 6] = [
        ([(-1, 1), (-14, 15), (-4, 15), (-1, 5), (1, 5), (3, 5)], (2, 5)),
        ([(-1, 1), (-3, 5), (-8, 15), (2, 15), (1, 5), (3, 5)], (2, 5)),
        ([(-1, 1), (-3, 5), (-1, 5), (-2, 15), (8, 15), (3, 5)], (2, 5)),
        ([(-1, 1), (-3, 5), (-1, 5), (1, 5), (4, 15), (14, 15)], (1, 15)),
        // printed with -3/5 in second place, which does not vanish; -1/3 is
        // the only single-entry repair
        ([(-1, 1), (-1, 3), (-4, 15), (2, 15), (8, 15), (14, 15)], (1, 15)),
        ([(-1, 1), (-14, 15), (-8, 15), (-2, 15), (4, 15), (1, 3)], (2, 3)),
    ];
    rows.iter().map(|(o, h)| (o.iter().map(|&(a, b)| qr(a, b)).collect(), qr(h.0, h.1))).collect()
}

fn f6(row: &(Vec<Q>, Q), v: &Q) -> Vec<Q> {
    row.0.iter().map(|o| (v + o) / qi(2)).collect()
}

#[test]
fn six_six_classes_match_the_table_family() {
    let pos: Vec<i64> = (0..=10).chain([12]).collect();
    let r = run(&pos, "6+6");
    let table = f6_table();
    for k1 in &table {
        for k2 in &table {
            for j in 1..8 {
                let w = &k2.1 * qr(j, 8);
                let mut p = f6(k1, &qi(0));
                p.extend(f6(k2, &w));
                p.sort();
                if p.windows(2).any(|x| x[0] == x[1]) {
                    continue;
                }
                assert!(in_some(&r, &p), "{p:?}");
            }
        }
    }
    for c in &r.classes {
        for tau in sample_points(&c.piece) {
            let p = c.piece.point(&tau);
            let hit = table.iter().any(|k1| {
                let fixed = f6(k1, &qi(0));
                if !fixed.iter().all(|x| p.contains(x)) {
                    return false;
                }
                let rest: Vec<Q> = p.iter().filter(|x| !fixed.contains(x)).cloned().collect();
                let w = &rest[0] * qi(2) + qi(1);
                table.iter().any(|k2| {
                    let mut m = f6(k2, &w);
                    m.sort();
                    w > qi(0) && w < k2.1 && m == rest
                })
            });
            assert!(hit, "{p:?}");
        }
    }
}
