//! Counting of integer and binary configurations `(b, x, z)` of the
//! feasibility model that admit at least one feasible point.
//!
//! On a piece, an assignment `b` holds identically when every monomial of a
//! part shares one linear term and the constants agree with the roots modulo
//! one. The slacks `x` and `z` are piecewise constant; they only change where
//! some `s_l` or some rotation crosses an integer, so each open subcell of
//! those hyperplanes carries one configuration.

use super::cells::Piece;
use super::problem::{sum_choices, Problem, SumChoice};
use crate::error::Result;
use crate::exact::{feasible_point, floor_q, project_range, Constraint, Rel, Q, Z};
use crate::vansums::{Catalog, RestrictedPartition};
use num_traits::Zero;
use std::collections::HashSet;

/// `(length, copy label, sum index, root, x, z)` per monomial.
type Key = Vec<(usize, usize, usize, usize, Z, Z)>;

struct Affine {
    lin: Vec<Q>,
    c: Q,
}

impl Affine {
    fn at(&self, tau: &[Q]) -> Q {
        self.lin.iter().zip(tau).fold(self.c.clone(), |acc, (a, x)| acc + a * x)
    }
}

pub fn count_configurations(
    prob: &Problem,
    catalog: &Catalog,
    partition: &RestrictedPartition,
    pieces: &[&Piece],
) -> Result<u64> {
    let choices = sum_choices(catalog, partition, false)?;
    let mut keys: HashSet<Key> = HashSet::new();
    for piece in pieces {
        let s: Vec<Affine> = (0..prob.n)
            .map(|l| {
                let f = piece.dim();
                let mut lin = vec![Q::zero(); f];
                let mut c = Q::zero();
                for m in 0..prob.m {
                    let a = Q::from_integer(Z::from(prob.alpha[l][m]));
                    c += &a * &piece.rref.offset[m];
                    for (j, x) in lin.iter_mut().enumerate() {
                        *x += &a * &piece.rref.dirs[m][j];
                    }
                }
                Affine { lin, c }
            })
            .collect();
        for choice in &choices {
            let mut b = Bijection::new(choice, &s);
            b.run(0, &mut |asg| {
                for key in configurations(prob, choice, piece, &s, asg) {
                    keys.insert(key);
                }
            });
        }
    }
    Ok(keys.len() as u64)
}

struct Bijection<'a> {
    choice: &'a SumChoice,
    s: &'a [Affine],
    asg: Vec<(usize, usize)>,
    used: Vec<Vec<bool>>,
    anchor: Vec<Option<usize>>,
}

impl<'a> Bijection<'a> {
    fn new(choice: &'a SumChoice, s: &'a [Affine]) -> Self {
        Bijection {
            choice,
            s,
            asg: vec![(0, 0); s.len()],
            used: choice.parts.iter().map(|p| vec![false; p.len]).collect(),
            anchor: vec![None; choice.parts.len()],
        }
    }

    fn run(&mut self, l: usize, emit: &mut dyn FnMut(&[(usize, usize)])) {
        if l == self.s.len() {
            emit(&self.asg);
            return;
        }
        for t in 0..self.choice.parts.len() {
            let part = &self.choice.parts[t];
            // identical parts are opened in order
            if self.anchor[t].is_none()
                && t > 0
                && self.anchor[t - 1].is_none()
                && part.sum_index == self.choice.parts[t - 1].sum_index
                && part.len == self.choice.parts[t - 1].len
            {
                continue;
            }
            for r in 0..part.len {
                if self.used[t][r] {
                    continue;
                }
                if let Some(l0) = self.anchor[t] {
                    let r0 = self.asg[l0].1;
                    if self.s[l].lin != self.s[l0].lin {
                        continue;
                    }
                    let diff = (&self.s[l].c - &part.phases[r]) - (&self.s[l0].c - &part.phases[r0]);
                    if !diff.is_integer() {
                        continue;
                    }
                }
                let opened = self.anchor[t].is_none();
                if opened {
                    self.anchor[t] = Some(l);
                }
                self.used[t][r] = true;
                self.asg[l] = (t, r);
                self.run(l + 1, emit);
                self.used[t][r] = false;
                if opened {
                    self.anchor[t] = None;
                }
            }
        }
    }
}

/// Configurations of one identically valid assignment on a piece.
fn configurations(
    prob: &Problem,
    choice: &SumChoice,
    piece: &Piece,
    s: &[Affine],
    asg: &[(usize, usize)],
) -> Vec<Key> {
    let k = choice.parts.len();
    let mut anchor: Vec<Option<usize>> = vec![None; k];
    for (l, &(t, _)) in asg.iter().enumerate() {
        anchor[t].get_or_insert(l);
    }
    // rotation of part t: frac(s_anchor - u_anchor)
    let rot: Vec<Affine> = (0..k)
        .map(|t| {
            let l0 = anchor[t].unwrap();
            let u = &choice.parts[t].phases[asg[l0].1];
            Affine { lin: s[l0].lin.clone(), c: &s[l0].c - u }
        })
        .collect();
    let cuts: Vec<&Affine> = s.iter().chain(&rot).filter(|a| a.lin.iter().any(|x| !x.is_zero())).collect();
    let mut witnesses = Vec::new();
    split(piece.dim(), piece.domain.clone(), &cuts, 0, &mut witnesses, &piece.witness);
    let mut out = Vec::with_capacity(witnesses.len());
    for tau in &witnesses {
        let v: Vec<Q> = rot.iter().map(|r| {
            let x = r.at(tau);
            &x - Q::from_integer(floor_q(&x))
        }).collect();
        let mut label: Vec<Option<usize>> = vec![None; k];
        let mut next_label = std::collections::HashMap::new();
        let mut key: Key = Vec::with_capacity(prob.n);
        for (l, &(t, r)) in asg.iter().enumerate() {
            let part = &choice.parts[t];
            let lab = *label[t].get_or_insert_with(|| {
                let c = next_label.entry(part.len).or_insert(0usize);
                *c += 1;
                *c - 1
            });
            let x = floor_q(&s[l].at(tau));
            let z = floor_q(&(&v[t] + &part.phases[r]));
            key.push((part.len, lab, part.sum_index, r, x, z));
        }
        out.push(key);
    }
    out
}

/// Witnesses of the open cells cut from `domain` by `h = integer` for every
/// cut `h`.
fn split(dim: usize, domain: Vec<Constraint>, cuts: &[&Affine], from: usize, out: &mut Vec<Vec<Q>>, fallback: &[Q]) {
    if dim == 0 {
        out.push(fallback.to_vec());
        return;
    }
    for (i, h) in cuts.iter().enumerate().skip(from) {
        let (lo, hi) = project_range(&domain, dim, &h.lin);
        let lo = lo.map(|x| x + &h.c);
        let hi = hi.map(|x| x + &h.c);
        // the least integer strictly inside (lo, hi)
        let Some(lo) = lo else { continue };
        let cut: Z = floor_q(&lo) + 1;
        let cq = Q::from_integer(cut.clone());
        if hi.as_ref().is_some_and(|h| cq >= *h) {
            continue;
        }
        let below = with(&domain, Constraint::new(h.lin.iter().map(|x| -x).collect(), &cq - &h.c, Rel::Gt));
        let above = with(&domain, Constraint::new(h.lin.clone(), &h.c - &cq, Rel::Gt));
        split(dim, below, cuts, i, out, fallback);
        split(dim, above, cuts, i, out, fallback);
        return;
    }
    if let Some(p) = feasible_point(&domain, dim) {
        out.push(p);
    }
}

fn with(domain: &[Constraint], c: Constraint) -> Vec<Constraint> {
    let mut d = domain.to_vec();
    d.push(c);
    d
}
