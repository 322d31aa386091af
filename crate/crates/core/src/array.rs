//! Integer linear arrays, electrical angles, steering matrices and the
//! numerical ambiguity test.

use crate::error::{AmbigError, Result};
use crate::exact::{fmt_q, qi, to_f64, Q};
use crate::tableaux::Shape;
use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Signed};
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt;

/// Relative singular value threshold below which a steering matrix is rank
/// deficient.
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearArray {
    positions: Vec<i64>,
    baseline: Q,
}

impl LinearArray {
    /// Positions are sorted and shifted so the first is 0. Baseline `d` is
    /// the minimal spacing in half wavelengths, `0 < d <= 1`.
    pub fn new(positions: &[i64], baseline: Q) -> Result<Self> {
        if positions.len() < 2 {
            return Err(AmbigError::InvalidArray("need at least two elements".into()));
        }
        let mut p = positions.to_vec();
        p.sort();
        if p.windows(2).any(|w| w[0] == w[1]) {
            return Err(AmbigError::InvalidArray("element positions must be distinct".into()));
        }
        if !baseline.is_positive() || baseline > Q::one() {
            return Err(AmbigError::InvalidArray(format!(
                "baseline must lie in (0, 1], got {}",
                fmt_q(&baseline)
            )));
        }
        let base = p[0];
        p.iter_mut().for_each(|x| *x -= base);
        Ok(LinearArray { positions: p, baseline })
    }

    pub fn with_unit_baseline(positions: &[i64]) -> Result<Self> {
        Self::new(positions, qi(1))
    }

    pub fn positions(&self) -> &[i64] {
        &self.positions
    }

    pub fn baseline(&self) -> &Q {
        &self.baseline
    }

    pub fn baseline_f64(&self) -> f64 {
        to_f64(&self.baseline)
    }

    pub fn num_elements(&self) -> usize {
        self.positions.len()
    }

    pub fn aperture(&self) -> i64 {
        *self.positions.last().unwrap()
    }

    pub fn shape(&self) -> Shape {
        Shape::from_positions(&self.positions)
    }

    /// `Phi = -pi d cos(theta)` for `theta` in `[0, pi]`.
    pub fn electrical_angle(&self, theta: f64) -> Result<f64> {
        if !(0.0..=PI).contains(&theta) {
            return Err(AmbigError::Domain(format!("direction {theta} rad outside [0, pi]")));
        }
        Ok(-PI * self.baseline_f64() * theta.cos())
    }

    /// Inverse of [`electrical_angle`](Self::electrical_angle).
    pub fn doa_of(&self, phi: f64) -> Result<f64> {
        let d = self.baseline_f64();
        let c = -phi / (PI * d);
        if !(-1.0 - 1e-12..=1.0 + 1e-12).contains(&c) {
            return Err(AmbigError::Domain(format!(
                "electrical angle {phi} rad outside [-pi d, pi d]"
            )));
        }
        Ok(c.clamp(-1.0, 1.0).acos())
    }

    pub fn steering_vector(&self, phi: f64) -> Vec<Complex64> {
        self.positions.iter().map(|&r| Complex64::from_polar(1.0, phi * r as f64)).collect()
    }

    /// `M x L` matrix with entries `exp(j Phi_l r_m)`.
    pub fn steering_matrix(&self, phis: &[f64]) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.positions.len(), phis.len(), |m, l| {
            Complex64::from_polar(1.0, phis[l] * self.positions[m] as f64)
        })
    }

    /// `det [z_k^{r_i}]` for `M` points.
    pub fn generalized_vandermonde_det(&self, z: &[Complex64]) -> Complex64 {
        assert_eq!(z.len(), self.positions.len());
        let a = DMatrix::from_fn(z.len(), z.len(), |i, k| z[k].powi(self.positions[i] as i32));
        a.determinant()
    }

    /// Ambiguity verdict for a list of electrical angles in radians.
    pub fn is_ambiguous(&self, phis: &[f64], tol: f64) -> Verdict {
        if has_repeats(phis) {
            return Verdict { kind: VerdictKind::Trivial, relative_singular_value: 0.0 };
        }
        let rel = self.relative_singular_value(phis);
        let kind = if rel < tol { VerdictKind::Ambiguous } else { VerdictKind::NotAmbiguous };
        Verdict { kind, relative_singular_value: rel }
    }

    /// `sigma_L / sigma_1` of the steering matrix; 0 when `L > M`.
    pub fn relative_singular_value(&self, phis: &[f64]) -> f64 {
        if phis.len() > self.positions.len() {
            return 0.0;
        }
        let sv = self.steering_matrix(phis).singular_values();
        let max = sv.max();
        if max == 0.0 {
            return 0.0;
        }
        sv.min() / max
    }

    pub fn rank_of_subset(&self, phis: &[f64], tol: f64) -> usize {
        let sv = self.steering_matrix(phis).singular_values();
        let max = sv.max();
        sv.iter().filter(|&&s| s > tol * max).count()
    }
}

impl fmt::Display for LinearArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.positions.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", p.join(","))?;
        if !self.baseline.is_one() {
            write!(f, " d={}", fmt_q(&self.baseline))?;
        }
        Ok(())
    }
}

/// `det [z_k^{i-1}] = prod_{i<j} (z_j - z_i)`.
pub fn classical_vandermonde(z: &[Complex64]) -> Complex64 {
    let mut v = Complex64::one();
    for j in 0..z.len() {
        for i in 0..j {
            v *= z[j] - z[i];
        }
    }
    v
}

/// Electrical angles are compared modulo `2 pi`: with integer positions,
/// `-pi` and `pi` give the same steering vector.
fn has_repeats(phis: &[f64]) -> bool {
    let close = |a: f64, b: f64| {
        let d = (a - b).rem_euclid(2.0 * PI);
        d.min(2.0 * PI - d) <= 1e-12
    };
    (0..phis.len()).any(|j| (0..j).any(|i| close(phis[i], phis[j])))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictKind {
    Ambiguous,
    NotAmbiguous,
    /// Two angles coincide; the rank loss carries no information.
    Trivial,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub relative_singular_value: f64,
}

impl Verdict {
    pub fn is_ambiguous(&self) -> bool {
        self.kind == VerdictKind::Ambiguous
    }
}

pub fn turns_to_radians(t: &Q) -> f64 {
    2.0 * PI * to_f64(t)
}

pub fn radians_to_turns(x: f64) -> f64 {
    x / (2.0 * PI)
}

/// Parses a comma separated list of positions such as `0,1,3,4`.
pub fn parse_positions(s: &str) -> Result<Vec<i64>> {
    s.trim()
        .trim_start_matches('(')
        .trim_end_matches(')')
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| AmbigError::InvalidArray(format!("bad position `{x}`")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_roundtrip_and_domain() {
        let a = LinearArray::with_unit_baseline(&[0, 1, 3, 4]).unwrap();
        let phi = a.electrical_angle(1.0).unwrap();
        assert!((a.doa_of(phi).unwrap() - 1.0).abs() < 1e-12);
        assert!(a.electrical_angle(-0.1).is_err());
        assert!(a.doa_of(4.0).is_err());
        assert!(LinearArray::with_unit_baseline(&[0, 1, 1]).is_err());
    }

    #[test]
    fn uniform_example_is_ambiguous() {
        let a = LinearArray::with_unit_baseline(&[0, 1, 3, 4]).unwrap();
        let phis = [-PI, -PI / 2.0, 0.0, PI / 2.0];
        assert!(a.is_ambiguous(&phis, DEFAULT_TOL).is_ambiguous());
        let generic = [-2.0, -0.7, 0.4, 1.9];
        assert_eq!(a.is_ambiguous(&generic, DEFAULT_TOL).kind, VerdictKind::NotAmbiguous);
        assert_eq!(a.is_ambiguous(&[0.1, 0.1, 1.0, 2.0], DEFAULT_TOL).kind, VerdictKind::Trivial);
        assert_eq!(a.is_ambiguous(&[-PI, 0.1, 1.0, PI], DEFAULT_TOL).kind, VerdictKind::Trivial);
    }
}
