//! Depth-first assignment of monomials to roots with symmetry pruning and
//! an incremental lattice consistency check.

use super::problem::{Assignment, Problem, SumChoice};
use crate::vansums::{wrap_phase, Phase};
use itertools::Itertools;
use num_integer::Integer;
use num_traits::ToPrimitive;
use std::ops::ControlFlow;
use std::time::Instant;

/// Echelon rows over `Z` with right-hand sides in `Z / D`.
#[derive(Clone)]
struct Lattice {
    rows: Vec<(usize, Vec<i128>, i128)>,
    den: i128,
    /// Overflowed once; no further pruning on this branch.
    blind: bool,
}

impl Lattice {
    /// False when the new congruence contradicts the previous ones.
    fn insert(&mut self, mut row: Vec<i128>, mut rhs: i128) -> bool {
        if self.blind {
            return true;
        }
        match self.try_insert(&mut row, &mut rhs) {
            Some(ok) => ok,
            None => {
                self.blind = true;
                true
            }
        }
    }

    fn try_insert(&mut self, row: &mut [i128], rhs: &mut i128) -> Option<bool> {
        let den = self.den;
        loop {
            let Some(c) = row.iter().position(|&x| x != 0) else {
                return Some(rhs.rem_euclid(den) == 0);
            };
            let Some(pi) = self.rows.iter().position(|(lc, _, _)| *lc == c) else {
                let pos = self.rows.iter().position(|(lc, _, _)| *lc > c).unwrap_or(self.rows.len());
                self.rows.insert(pos, (c, row.to_vec(), rhs.rem_euclid(den)));
                return Some(true);
            };
            let (_, prow, prhs) = &self.rows[pi];
            let a = prow[c];
            let b = row[c];
            let eg = a.extended_gcd(&b);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let (ag, bg) = (a / g, b / g);
            let mut new_p = vec![0i128; row.len()];
            let mut new_r = vec![0i128; row.len()];
            for j in 0..row.len() {
                new_p[j] = x.checked_mul(prow[j])?.checked_add(y.checked_mul(row[j])?)?;
                new_r[j] = ag.checked_mul(row[j])?.checked_sub(bg.checked_mul(prow[j])?)?;
            }
            let p_rhs = (x.checked_mul(*prhs)?.checked_add(y.checked_mul(*rhs)?)?).rem_euclid(den);
            let r_rhs = (ag.checked_mul(*rhs)?.checked_sub(bg.checked_mul(*prhs)?)?).rem_euclid(den);
            if new_p[c] < 0 {
                new_p.iter_mut().for_each(|v| *v = -*v);
                self.rows[pi] = (c, new_p, (-p_rhs).rem_euclid(den));
            } else {
                self.rows[pi] = (c, new_p, p_rhs);
            }
            row.copy_from_slice(&new_r);
            *rhs = r_rhs;
        }
    }
}

pub struct SearchConfig {
    pub prune: bool,
    pub node_budget: Option<u64>,
    pub deadline: Option<Instant>,
}

pub struct SearchStats {
    pub nodes: u64,
    pub leaves: u64,
    pub complete: bool,
}

enum Symmetry {
    None,
    /// Column maps for every permutation of elements `2..M`.
    Leaf(Vec<Vec<usize>>),
    /// Unit weight columns: the free monomials take increasing slots.
    Orderly { fixed: usize },
}

struct Dfs<'a> {
    prob: &'a Problem,
    choice: &'a SumChoice,
    cfg: &'a SearchConfig,
    order: Vec<usize>,
    base_rhs: Vec<i128>,
    root_rhs: Vec<Vec<i128>>,
    asg: Vec<Option<(usize, usize)>>,
    used: Vec<Vec<bool>>,
    opened: Vec<bool>,
    symmetry: Symmetry,
    last_free: Option<(usize, usize)>,
    stats: SearchStats,
}

/// Runs the search for one sum choice and hands every surviving leaf to
/// `visit`.
pub fn search(
    prob: &Problem,
    choice: &SumChoice,
    cfg: &SearchConfig,
    visit: &mut dyn FnMut(&Assignment) -> ControlFlow<()>,
) -> SearchStats {
    let m = prob.m;
    let k = choice.parts.len();
    let mut den: i128 = prob.half_d.denom().to_i128().unwrap();
    for p in &choice.parts {
        for q in &p.phases {
            den = den.lcm(&q.denom().to_i128().unwrap_or(1));
        }
    }
    let half_num = prob.half_d.numer().to_i128().unwrap() * (den / prob.half_d.denom().to_i128().unwrap());
    let base_rhs = prob.alpha.iter().map(|a| a[0] as i128 * half_num).collect();
    let root_rhs = choice
        .parts
        .iter()
        .map(|p| {
            p.phases
                .iter()
                .map(|q| q.numer().to_i128().unwrap() * (den / q.denom().to_i128().unwrap()))
                .collect()
        })
        .collect();
    let symmetry = if !cfg.prune {
        Symmetry::None
    } else if prob.weights.is_permutation_like() {
        let fixed = (0..prob.n).find(|&l| prob.alpha[l][0] == 1).unwrap_or(0);
        Symmetry::Orderly { fixed }
    } else if m <= 7 {
        let gammas = (1..m)
            .permutations(m - 1)
            .map(|p| {
                let tau: Vec<usize> = std::iter::once(0).chain(p).collect();
                prob.weights.permute_weight_rows(&tau)
            })
            .collect();
        Symmetry::Leaf(gammas)
    } else {
        Symmetry::None
    };
    let mut order: Vec<usize> = (0..prob.n).collect();
    if let Symmetry::Orderly { fixed } = symmetry {
        order.retain(|&l| l != fixed);
        order.insert(0, fixed);
    }
    let mut dfs = Dfs {
        prob,
        choice,
        cfg,
        order,
        base_rhs,
        root_rhs,
        asg: vec![None; prob.n],
        used: choice.parts.iter().map(|p| vec![false; p.len]).collect(),
        opened: vec![false; k],
        symmetry,
        last_free: None,
        stats: SearchStats { nodes: 0, leaves: 0, complete: true },
    };
    let lat = Lattice { rows: Vec::new(), den, blind: false };
    let _ = dfs.go(0, &lat, visit);
    dfs.stats
}

impl Dfs<'_> {
    fn go(&mut self, depth: usize, lat: &Lattice, visit: &mut dyn FnMut(&Assignment) -> ControlFlow<()>) -> ControlFlow<()> {
        self.stats.nodes += 1;
        if self.cfg.node_budget.is_some_and(|b| self.stats.nodes > b)
            || (self.stats.nodes.is_multiple_of(1024) && self.cfg.deadline.is_some_and(|d| Instant::now() > d))
        {
            self.stats.complete = false;
            return ControlFlow::Break(());
        }
        if depth == self.order.len() {
            let asg: Assignment = self.asg.iter().map(|x| x.unwrap()).collect();
            if let Symmetry::Leaf(gammas) = &self.symmetry {
                let own = self.code(&asg);
                for g in gammas {
                    let mut img = asg.clone();
                    for (l, &gl) in g.iter().enumerate() {
                        img[gl] = asg[l];
                    }
                    if self.code(&img) < own {
                        return ControlFlow::Continue(());
                    }
                }
            }
            self.stats.leaves += 1;
            return visit(&asg);
        }
        let l = self.order[depth];
        let m = self.prob.m;
        let nv = m - 1 + self.choice.parts.len();
        let orderly_free = matches!(self.symmetry, Symmetry::Orderly { fixed } if fixed != l);
        for t in 0..self.choice.parts.len() {
            let part = &self.choice.parts[t];
            if self.cfg.prune && !self.opened[t] && part.same_as_prev && !self.opened[t - 1] {
                continue;
            }
            for r in 0..part.len {
                if self.used[t][r] {
                    continue;
                }
                if self.cfg.prune {
                    let cls = part.phase_class[r];
                    if (0..r).any(|r2| part.phase_class[r2] == cls && !self.used[t][r2]) {
                        continue;
                    }
                    if !self.opened[t] && !part.opener[r] {
                        continue;
                    }
                    if orderly_free && self.last_free.is_some_and(|lf| (t, r) < lf) {
                        continue;
                    }
                }
                let mut row = vec![0i128; nv];
                for mm in 1..m {
                    row[mm - 1] = self.prob.alpha[l][mm] as i128;
                }
                row[m - 1 + t] = -1;
                let rhs = self.root_rhs[t][r] + self.base_rhs[l];
                let mut next = lat.clone();
                if !next.insert(row, rhs) {
                    continue;
                }
                let was_open = self.opened[t];
                let prev_free = self.last_free;
                self.opened[t] = true;
                self.used[t][r] = true;
                self.asg[l] = Some((t, r));
                if orderly_free {
                    self.last_free = Some((t, r));
                }
                let flow = self.go(depth + 1, &next, visit);
                self.asg[l] = None;
                self.used[t][r] = false;
                self.opened[t] = was_open;
                self.last_free = prev_free;
                flow?;
            }
        }
        ControlFlow::Continue(())
    }

    /// Normal form under relabeling identical parts, rotating a part by its
    /// stabilizer, and swapping roots with equal phase.
    fn code(&self, asg: &Assignment) -> Vec<(usize, usize)> {
        let parts = &self.choice.parts;
        let k = parts.len();
        let mut first: Vec<Option<usize>> = vec![None; k];
        for (l, &(t, _)) in asg.iter().enumerate() {
            if first[t].is_none() {
                first[t] = Some(l);
            }
        }
        // parts in the same identical block are ranked by first use
        let mut label = vec![0usize; k];
        let mut t = 0;
        while t < k {
            let mut end = t + 1;
            while end < k && parts[end].same_as_prev {
                end += 1;
            }
            let mut block: Vec<usize> = (t..end).collect();
            block.sort_by_key(|&x| first[x]);
            for (i, &x) in block.iter().enumerate() {
                label[x] = t + i;
            }
            t = end;
        }
        let rot: Vec<Phase> = (0..k)
            .map(|t| {
                let Some(l0) = first[t] else { return Phase::from_integer(0) };
                let p0 = parts[t].distinct[parts[t].phase_class[asg[l0].1]];
                *parts[t]
                    .stabilizer
                    .iter()
                    .min_by_key(|rho| wrap_phase(p0 + **rho))
                    .unwrap()
            })
            .collect();
        asg.iter()
            .map(|&(t, r)| {
                let p = wrap_phase(parts[t].distinct[parts[t].phase_class[r]] + rot[t]);
                (label[t], parts[t].distinct.iter().position(|x| *x == p).unwrap())
            })
            .collect()
    }
}
