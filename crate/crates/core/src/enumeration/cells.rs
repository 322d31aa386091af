//! Sorted pieces of a torus family of electrical angles.
//!
//! A family is `phi(t) = c + W t (mod 1)` with `phi_1 = -d/2` fixed. Its
//! points with pairwise distinct coordinates fall into open cells of the
//! coincidence arrangement; sorting a cell into the chart `[-d/2, 1 - d/2)`
//! gives a piece `Aff cap O`, identified by the RREF of its affine hull.
//! Pieces are explored breadth first by crossing facets.

use crate::exact::{affine_rref, feasible_point, floor_q, qi, qr, AffineRref, Constraint, Rel, Q};
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, VecDeque};

/// `phi(t) = c + W t`, `M` coordinates, `W` is `M x f` with full column rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusFamily {
    pub c: Vec<Q>,
    pub w: Vec<Vec<Q>>,
}

impl TorusFamily {
    pub fn dim(&self) -> usize {
        self.w.first().map_or(0, Vec::len)
    }

    fn value(&self, i: usize, t: &[Q]) -> Q {
        self.w[i].iter().zip(t).fold(self.c[i].clone(), |acc, (a, x)| acc + a * x)
    }

    /// Two coordinates coincide identically, or one sits on `phi_1`.
    pub fn is_degenerate(&self) -> bool {
        let m = self.c.len();
        (0..m).any(|j| {
            (0..j).any(|i| self.w[i] == self.w[j] && (&self.c[i] - &self.c[j]).is_integer())
        })
    }
}

/// One sorted piece: `psi = rref.offset + rref.dirs tau` over the open
/// polytope `domain` in the pivot coordinates `tau`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub rref: AffineRref,
    pub domain: Vec<Constraint>,
    pub witness: Vec<Q>,
}

impl Piece {
    pub fn dim(&self) -> usize {
        self.rref.dim()
    }

    pub fn point(&self, tau: &[Q]) -> Vec<Q> {
        self.rref.point(tau)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeKey {
    pub rref: AffineRref,
    pub markers: Vec<i8>,
}

#[derive(Clone, Debug)]
struct Node {
    /// Sorted, lifted coordinate functions of `t`.
    offs: Vec<Q>,
    dirs: Vec<Vec<Q>>,
    markers: Vec<i8>,
    point: Vec<Q>,
}

pub struct Chart {
    half_d: Q,
    /// `d < 1`: the window edge `d/2` is a separate marker.
    windowed: bool,
}

impl Chart {
    pub fn new(d: &Q) -> Self {
        Chart { half_d: d / qi(2), windowed: *d < Q::one() }
    }

    fn lift(&self, x: &Q) -> Q {
        let g = floor_q(&(x + &self.half_d));
        x - Q::from_integer(g)
    }

    fn node_at(&self, fam: &TorusFamily, t: &[Q]) -> Option<Node> {
        let m = fam.c.len();
        let vals: Vec<Q> = (0..m).map(|i| fam.value(i, t)).collect();
        let lifted: Vec<Q> = vals.iter().map(|v| self.lift(v)).collect();
        let mut idx: Vec<usize> = (0..m).collect();
        idx.sort_by(|&a, &b| lifted[a].cmp(&lifted[b]).then(a.cmp(&b)));
        if idx[0] != 0 || idx.windows(2).any(|p| lifted[p[0]] == lifted[p[1]]) {
            return None;
        }
        let mut markers = vec![0i8; m];
        for (j, &i) in idx.iter().enumerate() {
            if self.windowed && fam.w[i].iter().any(|x| !x.is_zero()) {
                markers[j] = match lifted[i].cmp(&self.half_d) {
                    std::cmp::Ordering::Less => -1,
                    std::cmp::Ordering::Greater => 1,
                    std::cmp::Ordering::Equal => return None,
                };
            }
        }
        let offs = idx.iter().map(|&i| &fam.c[i] + (&lifted[i] - &vals[i])).collect();
        let dirs = idx.iter().map(|&i| fam.w[i].clone()).collect();
        Some(Node { offs, dirs, markers, point: t.to_vec() })
    }

    fn key(&self, node: &Node) -> NodeKey {
        NodeKey { rref: affine_rref(&node.offs, &node.dirs), markers: node.markers.clone() }
    }

    fn in_window(&self, node: &Node) -> bool {
        let top = node.offs.len() - 1;
        if node.dirs[top].iter().all(Zero::is_zero) && node.offs[top] > self.half_d {
            return false;
        }
        node.markers.iter().all(|&s| s <= 0)
    }

    /// Open region of the node in `t`.
    fn region(&self, node: &Node) -> Vec<Constraint> {
        let m = node.offs.len();
        let f = node.point.len();
        let mut out = Vec::with_capacity(2 * m);
        let lin = |j: usize| (node.dirs[j].clone(), node.offs[j].clone());
        for j in 0..m - 1 {
            let (a1, b1) = lin(j + 1);
            let (a0, b0) = lin(j);
            out.push(Constraint::new(sub(&a1, &a0), b1 - b0, Rel::Gt));
        }
        let (a, b) = lin(m - 1);
        out.push(Constraint::new(neg(&a), Q::one() - &self.half_d - b, Rel::Gt));
        for (j, &s) in node.markers.iter().enumerate() {
            if s != 0 {
                let sq = qi(s as i64);
                let (a, b) = lin(j);
                out.push(Constraint::new(
                    a.iter().map(|x| x * &sq).collect(),
                    (b - &self.half_d) * &sq,
                    Rel::Gt,
                ));
            }
        }
        out.retain(|c| c.a.len() == f && c.a.iter().any(|x| !x.is_zero()));
        out
    }

    fn piece(&self, node: &Node) -> Piece {
        let rref = affine_rref(&node.offs, &node.dirs);
        let m = rref.offset.len();
        let lin = |j: usize| (rref.dirs[j].clone(), rref.offset[j].clone());
        let mut domain = Vec::new();
        for j in 0..m - 1 {
            let (a1, b1) = lin(j + 1);
            let (a0, b0) = lin(j);
            domain.push(Constraint::new(sub(&a1, &a0), b1 - b0, Rel::Gt));
        }
        let (a, b) = lin(m - 1);
        let top_rel = if self.windowed { Rel::Ge } else { Rel::Gt };
        domain.push(Constraint::new(neg(&a), &self.half_d - b, top_rel));
        domain.retain(|c| c.a.iter().any(|x| !x.is_zero()));
        domain.sort_by(|x, y| x.a.cmp(&y.a).then(x.b.cmp(&y.b)));
        domain.dedup();
        let witness: Vec<Q> = rref
            .pivots
            .iter()
            .map(|&p| {
                node.dirs[p].iter().zip(&node.point).fold(node.offs[p].clone(), |acc, (a, x)| acc + a * x)
            })
            .collect();
        Piece { rref, domain, witness }
    }

    fn neighbours(&self, fam: &TorusFamily, node: &Node) -> Vec<Node> {
        let region = self.region(node);
        let f = node.point.len();
        let mut out = Vec::new();
        let mut done: Vec<bool> = vec![false; region.len()];
        for h in 0..region.len() {
            if done[h] {
                continue;
            }
            let group: Vec<usize> =
                (0..region.len()).filter(|&g| proportional(&region[g], &region[h])).collect();
            for &g in &group {
                done[g] = true;
            }
            let mut sys: Vec<Constraint> = region
                .iter()
                .enumerate()
                .filter(|(g, _)| !group.contains(g))
                .map(|(_, c)| c.clone())
                .collect();
            sys.push(Constraint::new(region[h].a.clone(), region[h].b.clone(), Rel::Eq));
            let Some(tf) = feasible_point(&sys, f) else { continue };
            let dir = neg(&region[h].a);
            let mut eps = Q::one();
            for (g, c) in region.iter().enumerate() {
                if group.contains(&g) {
                    continue;
                }
                let rate: Q = c.a.iter().zip(&dir).map(|(x, y)| x * y).sum();
                if rate.is_negative() {
                    let cand = c.eval(&tf) / (-rate) / qi(2);
                    if cand < eps {
                        eps = cand;
                    }
                }
            }
            for _ in 0..64 {
                let tp: Vec<Q> = tf.iter().zip(&dir).map(|(x, y)| x + y * &eps).collect();
                if let Some(n) = self.node_at(fam, &tp) {
                    out.push(n);
                    break;
                }
                eps /= qi(2);
            }
        }
        out
    }

    fn start(&self, fam: &TorusFamily) -> Option<Node> {
        let f = fam.dim();
        for attempt in 0..200i64 {
            let t: Vec<Q> =
                (0..f as i64).map(|i| qr(17 * (i + 1) + 31 * attempt, 257 + 13 * attempt + 7 * i)).collect();
            if let Some(n) = self.node_at(fam, &t) {
                return Some(n);
            }
        }
        None
    }
}

fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn neg(a: &[Q]) -> Vec<Q> {
    a.iter().map(|x| -x).collect()
}

/// Same zero set and orientation.
fn proportional(x: &Constraint, y: &Constraint) -> bool {
    let Some(k) = y.a.iter().position(|v| !v.is_zero()) else { return false };
    if x.a[k].is_zero() {
        return false;
    }
    let s = &x.a[k] / &y.a[k];
    s.is_positive()
        && x.a.iter().zip(&y.a).all(|(p, q)| *p == q * &s)
        && x.b == &y.b * &s
}

/// Outcome of exploring one family.
pub struct Exploration {
    /// Every visited node, inside or outside the window.
    pub visited: Vec<NodeKey>,
    /// In-window pieces sorted by key.
    pub pieces: Vec<(NodeKey, Piece)>,
}

/// Visits all cells of a nondegenerate family. `known` short-circuits when
/// the start cell was already seen.
pub fn explore(
    chart: &Chart,
    fam: &TorusFamily,
    known: &dyn Fn(&NodeKey) -> bool,
) -> Option<Exploration> {
    if fam.is_degenerate() {
        return None;
    }
    let start = chart.start(fam)?;
    let k0 = chart.key(&start);
    if known(&k0) {
        return None;
    }
    let mut seen: BTreeMap<NodeKey, ()> = BTreeMap::new();
    let mut pieces = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(k0.clone(), ());
    queue.push_back((k0, start));
    while let Some((key, node)) = queue.pop_front() {
        if chart.in_window(&node) {
            pieces.push((key.clone(), chart.piece(&node)));
        }
        if fam.dim() == 0 {
            continue;
        }
        for nb in chart.neighbours(fam, &node) {
            let k = chart.key(&nb);
            if !seen.contains_key(&k) {
                seen.insert(k.clone(), ());
                queue.push_back((k, nb));
            }
        }
    }
    pieces.sort_by(|a, b| a.0.cmp(&b.0));
    Some(Exploration { visited: seen.into_keys().collect(), pieces })
}
