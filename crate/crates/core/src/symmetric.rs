//! Arrays symmetric about the origin: arc-length geometry of the array
//! manifold, characteristic points, and the reduction of ambiguities to the
//! real part of the steering matrix of the half array.

use crate::array::LinearArray;
use crate::error::{AmbigError, Result};
use crate::exact::{qi, to_f64, Q};
use itertools::Itertools;
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI};

/// Default number of scan intervals over `[0, l_m]`.
pub const DEFAULT_RESOLUTION: usize = 10_000;

const ROOT_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricArray {
    shift: Q,
    positions: Vec<Q>,
}

impl SymmetricArray {
    /// Positions after the centering shift, ascending.
    pub fn positions(&self) -> &[Q] {
        &self.positions
    }

    pub fn positions_f64(&self) -> Vec<f64> {
        self.positions.iter().map(to_f64).collect()
    }

    /// Centering shift relative to the input positions.
    pub fn shift(&self) -> &Q {
        &self.shift
    }

    pub fn num_elements(&self) -> usize {
        self.positions.len()
    }

    pub fn norm(&self) -> f64 {
        self.positions_f64().iter().map(|r| r * r).sum::<f64>().sqrt()
    }

    pub fn manifold_length(&self) -> f64 {
        2.0 * PI * self.norm()
    }

    /// Steering matrix `exp(-j pi cos(theta) r_k)` of the centered array.
    pub fn steering_matrix(&self, thetas: &[f64]) -> DMatrix<Complex64> {
        complex_steering(&self.positions_f64(), thetas)
    }
}

/// The centering shift is the mean; the multiset is symmetric iff all odd
/// power sums of `M r_i - sum r` vanish up to `2M - 1`.
pub fn detect_symmetry(array: &LinearArray) -> Option<SymmetricArray> {
    let r = array.positions();
    let m = r.len() as i64;
    let total: i64 = r.iter().sum();
    let scaled: Vec<BigInt> = r.iter().map(|&x| BigInt::from(m * x - total)).collect();
    for n in (1..2 * r.len() as u32).step_by(2) {
        let s: BigInt = scaled.iter().map(|x| x.pow(n)).sum();
        if !s.is_zero() {
            return None;
        }
    }
    let shift = Q::new(total.into(), m.into());
    let positions = r.iter().map(|&x| qi(x) - &shift).collect();
    Some(SymmetricArray { shift, positions })
}

/// `s(theta) = pi |r| (1 - cos theta)`.
pub fn arc_length(theta: f64, norm: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&theta) {
        return Err(AmbigError::Domain(format!("direction {theta} rad outside [0, pi]")));
    }
    let h = (theta / 2.0).sin();
    Ok(2.0 * PI * norm * h * h)
}

/// `theta(s) = arccos(1 - s / (pi |r|))`.
pub fn theta_of(s: f64, norm: f64) -> Result<f64> {
    if !(0.0..=2.0 * PI * norm).contains(&s) {
        return Err(AmbigError::Domain(format!("arc length {s} outside [0, {}]", 2.0 * PI * norm)));
    }
    Ok(2.0 * (s / (2.0 * PI * norm)).sqrt().clamp(0.0, 1.0).asin())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CharacteristicPoint {
    pub s: f64,
    pub order: u32,
    pub theta: f64,
}

/// Real part of `u^(n-1)(s)^H a(0)` up to a positive factor.
pub fn characteristic_value(array: &SymmetricArray, order: u32, s: f64) -> f64 {
    let norm = array.norm();
    array
        .positions_f64()
        .iter()
        .map(|&r| {
            let w = (r / norm).powi(order as i32);
            let x = r * s / norm;
            match order % 4 {
                0 => w * x.cos(),
                1 => -w * x.sin(),
                2 => -w * x.cos(),
                _ => w * x.sin(),
            }
        })
        .sum()
}

/// Roots in `[0, l_m]` of the order-`n` condition. The scan uses
/// `resolution` intervals with `pi |r|` on the grid; roots of even
/// multiplicity between grid points are not detected.
pub fn characteristic_points(array: &SymmetricArray, order: u32, resolution: usize) -> Result<Vec<CharacteristicPoint>> {
    if order == 0 {
        return Err(AmbigError::InvalidInput("order must be at least 1".into()));
    }
    if resolution < 2 {
        return Err(AmbigError::InvalidInput("resolution must be at least 2".into()));
    }
    let norm = array.norm();
    let half = resolution.div_ceil(2);
    let step = PI * norm / half as f64;
    let f = |s: f64| characteristic_value(array, order, s);
    let scale: f64 = array.positions_f64().iter().map(|r| (r / norm).abs().powi(order as i32)).sum();
    let zero = 1e-12 * scale;
    let grid: Vec<f64> = (0..=2 * half).map(|i| i as f64 * step).collect();
    let vals: Vec<f64> = grid.iter().map(|&s| f(s)).collect();
    let mut roots = Vec::new();
    for i in 0..grid.len() {
        if vals[i].abs() <= zero {
            roots.push(grid[i]);
            continue;
        }
        if i + 1 < grid.len() && vals[i + 1].abs() > zero && vals[i].signum() != vals[i + 1].signum() {
            roots.push(bisect(&f, grid[i], grid[i + 1]));
        }
    }
    roots.dedup_by(|a, b| (*a - *b).abs() <= ROOT_TOL);
    let lm = 2.0 * PI * norm;
    roots
        .into_iter()
        .map(|s| {
            let s = s.clamp(0.0, lm);
            Ok(CharacteristicPoint { s, order, theta: theta_of(s, norm)? })
        })
        .collect()
}

fn bisect(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    while b - a > ROOT_TOL {
        let c = 0.5 * (a + b);
        let fc = f(c);
        if fc == 0.0 {
            return c;
        }
        if fc.signum() == fa.signum() {
            a = c;
            fa = fc;
        } else {
            b = c;
        }
    }
    0.5 * (a + b)
}

/// Positive positions for even `M`, nonnegative ones for odd `M`.
pub fn reduced_array(array: &SymmetricArray) -> Vec<Q> {
    array.positions.iter().filter(|r| !r.is_negative()).cloned().collect()
}

/// Entries `cos(r_k pi cos(theta_i))`.
pub fn real_part_steering(reduced: &[f64], thetas: &[f64]) -> DMatrix<f64> {
    DMatrix::from_fn(reduced.len(), thetas.len(), |k, i| (reduced[k] * PI * thetas[i].cos()).cos())
}

fn complex_steering(positions: &[f64], thetas: &[f64]) -> DMatrix<Complex64> {
    DMatrix::from_fn(positions.len(), thetas.len(), |k, i| {
        Complex64::from_polar(1.0, -PI * thetas[i].cos() * positions[k])
    })
}

/// `(theta_1, ..., theta_h, pi - theta_h, ..., pi - theta_1)`.
pub fn mirrored(thetas: &[f64]) -> Vec<f64> {
    thetas.iter().copied().chain(thetas.iter().rev().map(|t| PI - t)).collect()
}

/// `[[A(t1), A(t2)], [J A(t2) J, J A(t1) J]]` with `A` the steering matrix of
/// the positive half, `t1 = thetas`, `t2 = (pi - theta_h, ..., pi - theta_1)`.
/// Rows follow `(r_1, ..., r_h, -r_h, ..., -r_1)`. Even `M` only.
pub fn block_steering(reduced: &[f64], thetas: &[f64]) -> DMatrix<Complex64> {
    let h = reduced.len();
    let w = thetas.len();
    let m = mirrored(thetas);
    let a1 = complex_steering(reduced, thetas);
    let a2 = complex_steering(reduced, &m[w..]);
    DMatrix::from_fn(2 * h, 2 * w, |i, j| match (i < h, j < w) {
        (true, true) => a1[(i, j)],
        (true, false) => a2[(i, j - w)],
        (false, true) => a2[(2 * h - 1 - i, w - 1 - j)],
        (false, false) => a1[(2 * h - 1 - i, 2 * w - 1 - j)],
    })
}

/// `sigma_min / sigma_max`.
pub fn relative_singular_value<T: nalgebra::ComplexField<RealField = f64>>(a: &DMatrix<T>) -> f64 {
    let sv = a.clone().singular_values();
    let max = sv.max();
    if max == 0.0 {
        return 0.0;
    }
    sv.min() / max
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Equivalence {
    /// `Re[A_r~]` at the given angles is rank deficient.
    pub lhs: bool,
    /// The full array is ambiguous at the mirrored angles.
    pub rhs: bool,
    /// Odd `M`: every `M`-subset of the `M + 1` mirrored angles is tested and
    /// the statement is only checked empirically.
    pub empirical: bool,
}

/// Both sides of the reduction for `ceil(M/2)` angles in `(0, pi/2)`.
pub fn real_part_ambiguity_equivalence(array: &SymmetricArray, thetas: &[f64], tol: f64) -> Result<Equivalence> {
    let red: Vec<f64> = reduced_array(array).iter().map(to_f64).collect();
    if thetas.len() != red.len() {
        return Err(AmbigError::InvalidInput(format!("expected {} angles, got {}", red.len(), thetas.len())));
    }
    if let Some(t) = thetas.iter().find(|t| !(**t > 0.0 && **t < FRAC_PI_2)) {
        return Err(AmbigError::Domain(format!("direction {t} rad outside (0, pi/2)")));
    }
    let lhs = relative_singular_value(&real_part_steering(&red, thetas)) < tol;
    let full = mirrored(thetas);
    let m = array.num_elements();
    let rhs = if m.is_multiple_of(2) {
        relative_singular_value(&array.steering_matrix(&full)) < tol
    } else {
        full.iter()
            .copied()
            .combinations(m)
            .all(|sub| relative_singular_value(&array.steering_matrix(&sub)) < tol)
    };
    Ok(Equivalence { lhs, rhs, empirical: m % 2 == 1 })
}

/// `det Re[A_r~(v1, v2)] / (cos(pi cos v2) - cos(pi cos v1))`, which removes
/// the trivial root `v2 = v1`.
fn reduced_det(red: &[f64], v1: f64, v2: f64) -> f64 {
    let c = |r: f64, v: f64| (r * PI * v.cos()).cos();
    let det = c(red[0], v1) * c(red[1], v2) - c(red[0], v2) * c(red[1], v1);
    let gap = (PI * v2.cos()).cos() - (PI * v1.cos()).cos();
    det / gap
}

/// Pairs `(v1, v2)` in `(0, pi/2)` with `v2 != v1` at which `Re[A_r~]` is
/// singular, for 4-element arrays; grid points without a root are omitted.
pub fn symmetric_ambiguity_family(array: &SymmetricArray, v1_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    if array.num_elements() != 4 {
        return Err(AmbigError::InvalidInput("the family solver needs a 4-element array".into()));
    }
    let red: Vec<f64> = reduced_array(array).iter().map(to_f64).collect();
    let n = DEFAULT_RESOLUTION;
    let mut out = Vec::new();
    for &v1 in v1_grid {
        if !(v1 > 0.0 && v1 < FRAC_PI_2) {
            return Err(AmbigError::Domain(format!("direction {v1} rad outside (0, pi/2)")));
        }
        let f = |v2: f64| reduced_det(&red, v1, v2);
        let usable = |v2: f64| (PI * v2.cos()).cos() - (PI * v1.cos()).cos() != 0.0 && (v2 - v1).abs() > 1e-9;
        let grid: Vec<f64> = (1..n).map(|i| FRAC_PI_2 * i as f64 / n as f64).filter(|&v| usable(v)).collect();
        for w in grid.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (fa, fb) = (f(a), f(b));
            if fa == 0.0 {
                out.push((v1, a));
            } else if fa.signum() != fb.signum() && fb != 0.0 {
                out.push((v1, bisect(&f, a, b)));
            }
        }
    }
    Ok(out)
}
