//! Uniform ambiguities from equipartitioning a sensor-pair spacing, and
//! membership of points in enumerated classes.

use super::{AmbiguityClass, PartitionResult};
use crate::array::LinearArray;
use crate::exact::{floor_q, qi, to_f64, Rel, Q};
use itertools::Itertools;
use num_traits::One;
use std::collections::BTreeSet;

/// A uniform ambiguity in turns, rotated so that its least angle is `-d/2`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct UniformAmbiguity {
    pub pair: (i64, i64),
    pub phi: Vec<Q>,
}

/// Every `M`-subset of `-d/2 + c / |r_i - r_j|`, `0 <= c < d |r_i - r_j|`.
pub fn uniform_ambiguities(array: &LinearArray) -> Vec<UniformAmbiguity> {
    let r = array.positions();
    let m = r.len();
    let d = array.baseline();
    let half = d / qi(2);
    let mut out = BTreeSet::new();
    for (i, j) in (0..m).tuple_combinations() {
        let span = (r[j] - r[i]).abs();
        let count = {
            let x = d * qi(span);
            let f = floor_q(&x);
            if x.is_integer() { f } else { f + 1 }
        };
        let count: usize = count.try_into().unwrap_or(0);
        if count < m {
            continue;
        }
        let grid: Vec<Q> = (0..count).map(|c| -&half + Q::new(c.into(), span.into())).collect();
        for sub in grid.iter().combinations(m) {
            let shift = -&half - sub[0];
            let phi = sub.iter().map(|x| *x + &shift).collect();
            out.insert(UniformAmbiguity { pair: (r[i], r[j]), phi });
        }
    }
    let mut seen = BTreeSet::new();
    out.into_iter().filter(|u| seen.insert(u.phi.clone())).collect()
}

pub(super) fn class_contains(class: &AmbiguityClass, p: &[Q]) -> bool {
    let piece = &class.piece;
    if p.len() != piece.rref.offset.len() {
        return false;
    }
    let tau: Vec<Q> = piece.rref.pivots.iter().map(|&i| p[i].clone()).collect();
    piece.point(&tau) == p && piece.domain.iter().all(|c| c.holds(&tau))
}

pub(super) fn class_contains_approx(class: &AmbiguityClass, p: &[f64], tol: f64) -> bool {
    let piece = &class.piece;
    if p.len() != piece.rref.offset.len() {
        return false;
    }
    let tau: Vec<f64> = piece.rref.pivots.iter().map(|&i| p[i]).collect();
    let on_hull = piece.rref.point_f64(&tau).iter().zip(p).all(|(a, b)| (a - b).abs() <= tol);
    on_hull
        && piece.domain.iter().all(|c| {
            let v = c.a.iter().zip(&tau).fold(to_f64(&c.b), |acc, (a, x)| acc + to_f64(a) * x);
            match c.rel {
                Rel::Eq => v.abs() <= tol,
                _ => v >= -tol,
            }
        })
}

/// Exact membership of a sorted point with first angle `-d/2`.
pub fn contains_point(results: &[PartitionResult], p: &[Q]) -> bool {
    results.iter().flat_map(|r| &r.classes).any(|c| class_contains(c, p))
}

pub fn contains_point_approx(results: &[PartitionResult], p: &[f64], tol: f64) -> bool {
    results.iter().flat_map(|r| &r.classes).any(|c| class_contains_approx(c, p, tol))
}

/// Placements of a point in the chart: with `d = 1` any angle may be moved to
/// `-1/2`; otherwise only the least one.
pub fn chart_rotations(d: &Q, p: &[f64]) -> Vec<Vec<f64>> {
    let half = to_f64(d) / 2.0;
    let mut sorted = p.to_vec();
    sorted.sort_by(f64::total_cmp);
    let firsts: Vec<f64> = if d.is_one() { sorted.clone() } else { vec![sorted[0]] };
    firsts
        .into_iter()
        .map(|f| {
            let mut v: Vec<f64> = sorted.iter().map(|x| (x - f).rem_euclid(1.0) - half).collect();
            v.sort_by(f64::total_cmp);
            v
        })
        .collect()
}

/// True iff every uniform ambiguity lies in some class.
pub fn check_uniform_coverage(array: &LinearArray, results: &[PartitionResult]) -> bool {
    uniform_ambiguities(array).iter().all(|u| contains_point(results, &u.phi))
}

