//! Exact rational helpers: parsing, floor/frac, Smith diagonalization,
//! Fourier-Motzkin feasibility with witnesses, and affine RREF.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

pub type Q = BigRational;
pub type Z = BigInt;

pub fn qi(n: i64) -> Q {
    Q::from_integer(Z::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(Z::from(n), Z::from(d))
}

/// Parses `p/q`, an integer, or a finite decimal such as `-0.25`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: Z = n.trim().parse().ok()?;
        let d: Z = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.trim_start().starts_with('-');
        let ip = ip.trim().trim_start_matches(['-', '+']);
        if !fp.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let ip: Z = if ip.is_empty() { Z::zero() } else { ip.parse().ok()? };
        let fz: Z = if fp.is_empty() { Z::zero() } else { fp.parse().ok()? };
        let den = num_traits::pow(Z::from(10), fp.len());
        let v = Q::new(ip * &den + fz, den);
        return Some(if neg { -v } else { v });
    }
    s.parse::<Z>().ok().map(Q::from_integer)
}

pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn floor_q(x: &Q) -> Z {
    x.numer().div_floor(x.denom())
}

/// Fractional part in `[0, 1)`.
pub fn frac_q(x: &Q) -> Q {
    x - Q::from_integer(floor_q(x))
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
    })
}

pub fn lcm_denoms<'a>(xs: impl IntoIterator<Item = &'a Q>) -> Z {
    xs.into_iter().fold(Z::one(), |acc, x| acc.lcm(x.denom()))
}

/// Result of a Smith-style diagonalization `U A V = diag(d_1..d_r, 0..)`.
#[derive(Clone, Debug)]
pub struct Diagonal {
    pub diag: Vec<Z>,
    /// `U b` for the right-hand side supplied.
    pub ub: Vec<Q>,
    /// Column transform, `cols x cols`, unimodular.
    pub v: Vec<Vec<Z>>,
}

/// Diagonalizes an integer matrix by unimodular row and column operations,
/// applying the row operations to `b` as well. Divisibility of the diagonal
/// is not enforced.
pub fn diagonalize(a: &[Vec<Z>], b: &[Q], cols: usize) -> Diagonal {
    let rows = a.len();
    let mut m: Vec<Vec<Z>> = a.to_vec();
    let mut ub: Vec<Q> = b.to_vec();
    let mut v: Vec<Vec<Z>> = (0..cols)
        .map(|i| (0..cols).map(|j| if i == j { Z::one() } else { Z::zero() }).collect())
        .collect();
    let mut diag = Vec::new();
    let mut p = 0;
    while p < rows.min(cols) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in p..rows {
            for j in p..cols {
                if !m[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(p, bi);
        ub.swap(p, bi);
        for row in m.iter_mut() {
            row.swap(p, bj);
        }
        for row in v.iter_mut() {
            row.swap(p, bj);
        }
        loop {
            let mut dirty = false;
            for i in p + 1..rows {
                if m[i][p].is_zero() {
                    continue;
                }
                let q = m[i][p].div_floor(&m[p][p]);
                for j in p..cols {
                    let t = &q * &m[p][j];
                    m[i][j] -= t;
                }
                let t = Q::from_integer(q) * &ub[p];
                ub[i] -= t;
                if !m[i][p].is_zero() {
                    dirty = true;
                }
            }
            for j in p + 1..cols {
                if m[p][j].is_zero() {
                    continue;
                }
                let q = m[p][j].div_floor(&m[p][p]);
                for i in p..rows {
                    let t = &q * &m[i][p];
                    m[i][j] -= t;
                }
                for row in v.iter_mut() {
                    let t = &q * &row[p];
                    row[j] -= t;
                }
                if !m[p][j].is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
            // move the smallest remaining entry of row/column p to the pivot
            let mut best = (p, p);
            for i in p + 1..rows {
                if !m[i][p].is_zero() && m[i][p].abs() < m[best.0][best.1].abs() {
                    best = (i, p);
                }
            }
            for j in p + 1..cols {
                if !m[p][j].is_zero() && m[p][j].abs() < m[best.0][best.1].abs() {
                    best = (p, j);
                }
            }
            if best.0 != p {
                m.swap(p, best.0);
                ub.swap(p, best.0);
            } else if best.1 != p {
                for row in m.iter_mut() {
                    row.swap(p, best.1);
                }
                for row in v.iter_mut() {
                    row.swap(p, best.1);
                }
            }
        }
        if m[p][p].is_negative() {
            for j in p..cols {
                m[p][j] = -&m[p][j];
            }
            ub[p] = -&ub[p];
        }
        diag.push(m[p][p].clone());
        p += 1;
    }
    Diagonal { diag, ub, v }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rel {
    /// `a.t + b > 0`
    Gt,
    /// `a.t + b >= 0`
    Ge,
    /// `a.t + b = 0`
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constraint {
    pub a: Vec<Q>,
    pub b: Q,
    pub rel: Rel,
}

impl Constraint {
    pub fn new(a: Vec<Q>, b: Q, rel: Rel) -> Self {
        Constraint { a, b, rel }
    }

    pub fn eval(&self, t: &[Q]) -> Q {
        self.a.iter().zip(t).fold(self.b.clone(), |acc, (x, y)| acc + x * y)
    }

    pub fn holds(&self, t: &[Q]) -> bool {
        let v = self.eval(t);
        match self.rel {
            Rel::Gt => v.is_positive(),
            Rel::Ge => !v.is_negative(),
            Rel::Eq => v.is_zero(),
        }
    }

    fn normalized(mut self) -> Self {
        let lead = self.a.iter().find(|x| !x.is_zero()).map(|x| x.abs());
        if let Some(s) = lead {
            for x in self.a.iter_mut() {
                *x = &*x / &s;
            }
            self.b = &self.b / &s;
        }
        self
    }
}

/// Finds a point satisfying all constraints, or `None` if infeasible.
/// Exact Fourier-Motzkin elimination with back substitution.
pub fn feasible_point(cons: &[Constraint], dim: usize) -> Option<Vec<Q>> {
    let mut level = split_eq(cons);
    let mut levels: Vec<Vec<Constraint>> = Vec::with_capacity(dim + 1);
    for k in (0..dim).rev() {
        let cur = dedup(level);
        level = eliminate(&cur, k);
        levels.push(cur);
    }
    for c in &level {
        let ok = match c.rel {
            Rel::Gt => c.b.is_positive(),
            _ => !c.b.is_negative(),
        };
        if !ok {
            return None;
        }
    }
    // back substitution: levels[dim-1-k] holds constraints over t_0..=t_k
    let mut t: Vec<Q> = vec![Q::zero(); dim];
    for k in 0..dim {
        let cur = &levels[dim - 1 - k];
        let mut lo: Option<(Q, bool)> = None;
        let mut hi: Option<(Q, bool)> = None;
        for c in cur {
            if c.a[k].is_zero() {
                continue;
            }
            let rest = c.a[..k].iter().zip(&t[..k]).fold(c.b.clone(), |acc, (x, y)| acc + x * y);
            let bound = -rest / &c.a[k];
            let strict = c.rel == Rel::Gt;
            if c.a[k].is_positive() {
                if lo.as_ref().is_none_or(|(l, s)| bound > *l || (bound == *l && strict && !s)) {
                    lo = Some((bound, strict));
                }
            } else if hi.as_ref().is_none_or(|(h, s)| bound < *h || (bound == *h && strict && !s)) {
                hi = Some((bound, strict));
            }
        }
        t[k] = match (lo, hi) {
            (None, None) => Q::zero(),
            (Some((l, _)), None) => l.floor() + Q::one(),
            (None, Some((h, _))) => h.ceil() - Q::one(),
            (Some((l, ls)), Some((h, hs))) => match l.cmp(&h) {
                Ordering::Less => simplest_between(&l, &h),
                Ordering::Equal if !ls && !hs => l,
                _ => return None,
            },
        };
    }
    Some(t)
}

/// A rational of small height strictly between `l < h`.
fn split_eq(cons: &[Constraint]) -> Vec<Constraint> {
    let mut out = Vec::with_capacity(cons.len());
    for c in cons {
        match c.rel {
            Rel::Eq => {
                out.push(Constraint::new(c.a.clone(), c.b.clone(), Rel::Ge));
                out.push(Constraint::new(c.a.iter().map(|x| -x).collect(), -&c.b, Rel::Ge));
            }
            _ => out.push(c.clone()),
        }
    }
    out
}

/// One Fourier-Motzkin step removing variable `k`.
fn eliminate(cur: &[Constraint], k: usize) -> Vec<Constraint> {
    let mut next = Vec::new();
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for c in cur {
        if c.a[k].is_positive() {
            pos.push(c);
        } else if c.a[k].is_negative() {
            neg.push(c);
        } else {
            next.push(c.clone());
        }
    }
    for p in &pos {
        for n in &neg {
            let sp = -&n.a[k];
            let sn = p.a[k].clone();
            let a: Vec<Q> = p.a.iter().zip(&n.a).map(|(x, y)| x * &sp + y * &sn).collect();
            let b = &p.b * &sp + &n.b * &sn;
            let rel = if p.rel == Rel::Gt || n.rel == Rel::Gt { Rel::Gt } else { Rel::Ge };
            next.push(Constraint::new(a, b, rel));
        }
    }
    next
}

/// Infimum and supremum of `dir . t` over the closure of a nonempty
/// polyhedron; `None` when unbounded.
pub fn project_range(cons: &[Constraint], dim: usize, dir: &[Q]) -> (Option<Q>, Option<Q>) {
    let mut level: Vec<Constraint> = split_eq(cons)
        .into_iter()
        .map(|c| {
            let mut a = vec![Q::zero()];
            a.extend(c.a);
            Constraint::new(a, c.b, c.rel)
        })
        .collect();
    let mut link = vec![-Q::one()];
    link.extend(dir.iter().cloned());
    level.push(Constraint::new(link, Q::zero(), Rel::Eq));
    let mut level = split_eq(&level);
    for k in (1..=dim).rev() {
        level = eliminate(&dedup(level), k);
    }
    let (mut lo, mut hi): (Option<Q>, Option<Q>) = (None, None);
    for c in &level {
        if c.a[0].is_zero() {
            continue;
        }
        let bound = -&c.b / &c.a[0];
        if c.a[0].is_positive() {
            if lo.as_ref().is_none_or(|l| bound > *l) {
                lo = Some(bound);
            }
        } else if hi.as_ref().is_none_or(|h| bound < *h) {
            hi = Some(bound);
        }
    }
    (lo, hi)
}

fn simplest_between(l: &Q, h: &Q) -> Q {
    let mid = (l + h) / qi(2);
    let width = h - l;
    let mut den = Z::one();
    loop {
        let dq = Q::from_integer(den.clone());
        let cand = Q::new(floor_q(&(&mid * &dq)), den.clone());
        if cand > *l && cand < *h && (&mid - &cand).abs() * qi(4) <= width {
            return cand;
        }
        den *= 2;
    }
}

fn dedup(cons: Vec<Constraint>) -> Vec<Constraint> {
    let mut out: Vec<Constraint> = cons
        .into_iter()
        .map(Constraint::normalized)
        .filter(|c| !(c.a.iter().all(Zero::is_zero) && c.rel != Rel::Eq && c.b.is_positive()))
        .collect();
    out.sort_by(|x, y| x.a.cmp(&y.a).then(x.b.cmp(&y.b)).then(x.rel.cmp(&y.rel)));
    // for equal normals keep only the tightest bound
    let mut kept: Vec<Constraint> = Vec::with_capacity(out.len());
    for c in out {
        if let Some(last) = kept.last() {
            if last.a == c.a && last.a.iter().any(|x| !x.is_zero()) {
                continue;
            }
        }
        kept.push(c);
    }
    kept
}

/// Affine set `{c + W t}` in reduced row echelon coordinates: the pivot
/// coordinates are the free parameters, `W[pivots] = I` and `c[pivots] = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineRref {
    pub pivots: Vec<usize>,
    pub offset: Vec<Q>,
    /// `n x f`, row-major.
    pub dirs: Vec<Vec<Q>>,
}

/// Computes the RREF form of `{c + W t}`; `w` is `n x f` with full column rank.
pub fn affine_rref(c: &[Q], w: &[Vec<Q>]) -> AffineRref {
    let n = c.len();
    let f = w.first().map_or(0, Vec::len);
    // choose pivot rows greedily and invert the pivot block by elimination
    let mut cols: Vec<Vec<Q>> = (0..f).map(|j| (0..n).map(|i| w[i][j].clone()).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    let mut used = 0;
    while used < f && row < n {
        if let Some(j) = (used..f).find(|&j| !cols[j][row].is_zero()) {
            cols.swap(used, j);
            let s = cols[used][row].clone();
            for x in cols[used].iter_mut() {
                *x = &*x / &s;
            }
            for j2 in 0..f {
                if j2 != used && !cols[j2][row].is_zero() {
                    let fct = cols[j2][row].clone();
                    let piv = cols[used].clone();
                    for (x, p) in cols[j2].iter_mut().zip(&piv) {
                        *x -= &fct * p;
                    }
                }
            }
            pivots.push(row);
            used += 1;
        }
        row += 1;
    }
    assert_eq!(used, f, "direction matrix must have full column rank");
    let mut offset = c.to_vec();
    for (j, &p) in pivots.iter().enumerate() {
        let s = offset[p].clone();
        if !s.is_zero() {
            for (o, x) in offset.iter_mut().zip(&cols[j]) {
                *o -= &s * x;
            }
        }
    }
    let dirs = (0..n).map(|i| (0..f).map(|j| cols[j][i].clone()).collect()).collect();
    AffineRref { pivots, offset, dirs }
}

impl AffineRref {
    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn point(&self, t: &[Q]) -> Vec<Q> {
        self.offset
            .iter()
            .zip(&self.dirs)
            .map(|(c, row)| row.iter().zip(t).fold(c.clone(), |acc, (a, x)| acc + a * x))
            .collect()
    }

    pub fn point_f64(&self, t: &[f64]) -> Vec<f64> {
        self.offset
            .iter()
            .zip(&self.dirs)
            .map(|(c, row)| row.iter().zip(t).fold(to_f64(c), |acc, (a, x)| acc + to_f64(a) * x))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zi(n: i64) -> Z {
        Z::from(n)
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_q("-3/6"), Some(qr(-1, 2)));
        assert_eq!(parse_q("0.25"), Some(qr(1, 4)));
        assert_eq!(parse_q("-.5"), Some(qr(-1, 2)));
        assert_eq!(parse_q("7"), Some(qi(7)));
        assert_eq!(parse_q("1/0"), None);
        assert_eq!(fmt_q(&qr(-2, 4)), "-1/2");
    }

    #[test]
    fn floor_and_frac() {
        assert_eq!(floor_q(&qr(-1, 3)), zi(-1));
        assert_eq!(frac_q(&qr(-1, 3)), qr(2, 3));
        assert_eq!(frac_q(&qi(2)), qi(0));
    }

    #[test]
    fn diagonalize_reconstructs() {
        let a = vec![vec![zi(2), zi(4), zi(4)], vec![zi(-6), zi(6), zi(12)], vec![zi(10), zi(-4), zi(-16)]];
        let b = vec![qi(1), qi(2), qi(3)];
        let d = diagonalize(&a, &b, 3);
        let prod: Z = d.diag.iter().product();
        // |det A| = 2*(6*-16+48) - 4*(96-120) + 4*(24-60) = -96+96-144 = -144
        assert_eq!(prod.abs(), zi(144));
    }

    #[test]
    fn fm_strict_and_equalities() {
        // 0 < t0 < 1, t1 = t0 + 1/2, t1 < 1
        let cons = vec![
            Constraint::new(vec![qi(1), qi(0)], qi(0), Rel::Gt),
            Constraint::new(vec![qi(-1), qi(0)], qi(1), Rel::Gt),
            Constraint::new(vec![qi(-1), qi(1)], qr(-1, 2), Rel::Eq),
            Constraint::new(vec![qi(0), qi(-1)], qi(1), Rel::Gt),
        ];
        let p = feasible_point(&cons, 2).unwrap();
        assert!(cons.iter().all(|c| c.holds(&p)));
        let bad = vec![
            Constraint::new(vec![qi(1)], qi(0), Rel::Gt),
            Constraint::new(vec![qi(-1)], qi(0), Rel::Ge),
        ];
        assert!(feasible_point(&bad, 1).is_none());
        let pt = vec![
            Constraint::new(vec![qi(1)], qi(0), Rel::Ge),
            Constraint::new(vec![qi(-1)], qi(0), Rel::Ge),
        ];
        assert_eq!(feasible_point(&pt, 1), Some(vec![qi(0)]));
    }

    #[test]
    fn rref_is_canonical() {
        // (1, v, 0, -v) and (1, 1-v, 0, v-1) describe the same line
        let c1 = vec![qi(1), qi(0), qi(0), qi(0)];
        let w1 = vec![vec![qi(0)], vec![qi(1)], vec![qi(0)], vec![qi(-1)]];
        let c2 = vec![qi(1), qi(1), qi(0), qi(-1)];
        let w2 = vec![vec![qi(0)], vec![qi(-1)], vec![qi(0)], vec![qi(1)]];
        assert_eq!(affine_rref(&c1, &w1), affine_rref(&c2, &w2));
    }
}
