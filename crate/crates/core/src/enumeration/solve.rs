//! Exact solution of one assignment of monomials to rotated minimal sums.
//!
//! Unknowns `y = (phi_2..phi_M, v_1..v_k)`. Monomial `l` placed on root
//! `u_{t,k}` of part `t` gives
//! `sum_{m>=2} alpha_{m l} phi_m - v_t = u_{t,k} + alpha_{1 l} d/2 (mod 1)`.

use super::cells::TorusFamily;
use super::problem::{Assignment, Problem, SumChoice};
use crate::error::{AmbigError, Result};
use crate::exact::{diagonalize, Q, Z};
use num_traits::{Signed, ToPrimitive, Zero};

/// Components beyond this count are reported as a budget problem.
const MAX_COMPONENTS: u64 = 1 << 20;

pub fn solve_assignment(prob: &Problem, choice: &SumChoice, asg: &Assignment) -> Result<Vec<TorusFamily>> {
    let m = prob.m;
    let k = choice.parts.len();
    let nv = m - 1 + k;
    let mut a: Vec<Vec<Z>> = Vec::with_capacity(prob.n);
    let mut b: Vec<Q> = Vec::with_capacity(prob.n);
    for (l, &(t, r)) in asg.iter().enumerate() {
        let mut row = vec![Z::zero(); nv];
        for mm in 1..m {
            row[mm - 1] = Z::from(prob.alpha[l][mm]);
        }
        row[m - 1 + t] = Z::from(-1);
        a.push(row);
        b.push(&choice.parts[t].phases[r] + Q::from_integer(Z::from(prob.alpha[l][0])) * &prob.half_d);
    }
    let dg = diagonalize(&a, &b, nv);
    let r = dg.diag.len();
    if dg.ub[r..].iter().any(|x| !x.is_integer()) {
        return Ok(Vec::new());
    }
    let count: u64 = dg.diag.iter().map(|d| d.to_u64().unwrap_or(u64::MAX)).fold(1u64, u64::saturating_mul);
    if count > MAX_COMPONENTS {
        return Err(AmbigError::OracleBudget(format!("{count} solution components")));
    }
    let f = nv - r;
    let w: Vec<Vec<Q>> = std::iter::once(vec![Q::zero(); f])
        .chain((0..m - 1).map(|i| (r..nv).map(|j| Q::from_integer(dg.v[i][j].clone())).collect()))
        .collect();
    let mut out = Vec::new();
    let mut ks = vec![0u64; r];
    loop {
        let psi: Vec<Q> = (0..r)
            .map(|i| (&dg.ub[i] + Q::from_integer(Z::from(ks[i]))) / Q::from_integer(dg.diag[i].clone()))
            .collect();
        let c: Vec<Q> = std::iter::once(-prob.half_d.clone())
            .chain((0..m - 1).map(|i| {
                (0..r).fold(Q::zero(), |acc, j| acc + Q::from_integer(dg.v[i][j].clone()) * &psi[j])
            }))
            .collect();
        out.push(TorusFamily { c, w: w.clone() });
        // odometer over the components
        let mut i = 0;
        loop {
            if i == r {
                return Ok(out);
            }
            ks[i] += 1;
            if Z::from(ks[i]) < dg.diag[i].abs() {
                break;
            }
            ks[i] = 0;
            i += 1;
        }
    }
}
