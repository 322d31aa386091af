//! Exhaustive enumeration of ambiguity classes that arise from grouping the
//! Schur monomials into rotated minimal vanishing sums.

mod cells;
mod count;
mod problem;
mod report;
mod search;
mod solve;
mod uniform;

pub use cells::{NodeKey, Piece, TorusFamily};
pub use report::{ClassReport, EnumerationReport, MergedFamily, PartitionReport};
pub use uniform::{
    chart_rotations, check_uniform_coverage, contains_point, contains_point_approx, uniform_ambiguities,
    UniformAmbiguity,
};

use crate::array::{turns_to_radians, LinearArray, VerdictKind, DEFAULT_TOL};
use crate::error::{AmbigError, Result};
use crate::exact::{fmt_q, project_range, qi, qr, to_f64, Rel, Q};
use crate::vansums::{restricted_partitions, Catalog, RestrictedPartition};
use cells::{explore, Chart};
use num_traits::{Signed, Zero};
use problem::{sum_choices, Problem};
use search::{search, SearchConfig};
use std::collections::BTreeMap;
use std::ops::ControlFlow;
use std::time::{Duration, Instant};

#[derive(Clone, Debug)]
pub struct EnumerationOptions {
    /// Symmetry pruning; off enumerates every bijection.
    pub prune: bool,
    /// Run partitions concurrently (needs the `parallel` feature).
    pub parallel: bool,
    pub node_budget: Option<u64>,
    pub time_budget: Option<Duration>,
    /// Compute the solver-style configuration count per partition.
    pub count_configurations: bool,
    /// Relative singular value threshold for verification.
    pub tol: f64,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            prune: true,
            parallel: true,
            node_budget: None,
            time_budget: None,
            count_configurations: true,
            tol: DEFAULT_TOL,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassKind {
    Discrete,
    Parametric,
}

/// One sorted piece with its verification outcome.
#[derive(Clone, Debug)]
pub struct AmbiguityClass {
    pub kind: ClassKind,
    pub piece: Piece,
    pub verified: bool,
    pub samples: usize,
    pub max_relative_singular_value: f64,
}

impl AmbiguityClass {
    pub fn dim(&self) -> usize {
        self.piece.dim()
    }

    /// Exact membership of a sorted point in turns.
    pub fn contains(&self, p: &[Q]) -> bool {
        uniform::class_contains(self, p)
    }

    pub fn contains_approx(&self, p: &[f64], tol: f64) -> bool {
        uniform::class_contains_approx(self, p, tol)
    }

    /// Coordinates as `offset + sum_j coeff_j t_j` strings, in turns.
    pub fn affine_strings(&self) -> Vec<String> {
        let r = &self.piece.rref;
        r.offset
            .iter()
            .zip(&r.dirs)
            .map(|(c, row)| {
                let mut s = String::new();
                if !c.is_zero() || row.iter().all(Zero::is_zero) {
                    s.push_str(&fmt_q(c));
                }
                for (j, a) in row.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    let mag = a.abs();
                    let sign = if a.is_negative() { "-" } else { "+" };
                    let coef = if mag == qi(1) { String::new() } else { format!("{}*", fmt_q(&mag)) };
                    if s.is_empty() {
                        s = format!("{}{coef}t{}", if a.is_negative() { "-" } else { "" }, j + 1);
                    } else {
                        s = format!("{s} {sign} {coef}t{}", j + 1);
                    }
                }
                s
            })
            .collect()
    }

    /// Projection of the domain onto each parameter, as `(lower, upper)`.
    pub fn parameter_bounds(&self) -> Vec<(Option<Q>, Option<Q>)> {
        (0..self.dim()).map(|j| project_range(&self.piece.domain, self.dim(), &unit(self.dim(), j))).collect()
    }
}

fn unit(n: usize, j: usize) -> Vec<Q> {
    (0..n).map(|i| if i == j { qi(1) } else { qi(0) }).collect()
}

/// A connected family: the pieces reached from each other by facet
/// crossings, as indices into the partition's class list.
#[derive(Clone, Debug)]
pub struct AmbiguityFamily {
    pub classes: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct PartitionResult {
    pub partition: RestrictedPartition,
    pub classes: Vec<AmbiguityClass>,
    pub families: Vec<AmbiguityFamily>,
    pub config_count: Option<u64>,
    pub complete: bool,
    pub nodes: u64,
    pub leaves: u64,
    pub wall_time: Duration,
}

impl PartitionResult {
    pub fn family_pieces(&self, f: usize) -> impl Iterator<Item = &AmbiguityClass> {
        self.families[f].classes.iter().map(move |&i| &self.classes[i])
    }
}

/// Enumerates the classes of one partition of the tableau count.
pub fn enumerate_partition(
    array: &LinearArray,
    partition: &RestrictedPartition,
    catalog: &Catalog,
    opts: &EnumerationOptions,
) -> Result<PartitionResult> {
    let started = Instant::now();
    let prob = Problem::new(array);
    if partition.total() != prob.n {
        return Err(AmbigError::InvalidInput(format!(
            "partition {partition} does not sum to N = {}",
            prob.n
        )));
    }
    let choices = sum_choices(catalog, partition, opts.prune)?;
    let chart = Chart::new(&prob.d);
    let cfg = SearchConfig {
        prune: opts.prune,
        node_budget: opts.node_budget,
        deadline: opts.time_budget.map(|b| started + b),
    };
    let mut seen: BTreeMap<NodeKey, usize> = BTreeMap::new();
    let mut families: Vec<Vec<(NodeKey, Piece)>> = Vec::new();
    let mut failure: Option<AmbigError> = None;
    let (mut nodes, mut leaves, mut complete) = (0, 0, true);
    for choice in &choices {
        let mut visit = |asg: &problem::Assignment| {
            if cfg.deadline.is_some_and(|d| Instant::now() > d) {
                return ControlFlow::Break(());
            }
            let fams = match solve::solve_assignment(&prob, choice, asg) {
                Ok(f) => f,
                Err(e) => {
                    failure = Some(e);
                    return ControlFlow::Break(());
                }
            };
            for fam in fams {
                let Some(ex) = explore(&chart, &fam, &|k| seen.contains_key(k)) else { continue };
                let id = families.len();
                for k in ex.visited {
                    seen.insert(k, id);
                }
                families.push(ex.pieces);
            }
            ControlFlow::Continue(())
        };
        let stats = search(&prob, choice, &cfg, &mut visit);
        nodes += stats.nodes;
        leaves += stats.leaves;
        if let Some(e) = failure {
            return Err(e);
        }
        if !stats.complete || cfg.deadline.is_some_and(|d| Instant::now() > d) {
            complete = false;
            break;
        }
    }
    families.retain(|f| !f.is_empty());
    families.sort_by(|a, b| a[0].0.cmp(&b[0].0));
    let mut classes = Vec::new();
    let mut fam_out = Vec::new();
    for fam in &families {
        let mut idx = Vec::new();
        for (_, piece) in fam {
            idx.push(classes.len());
            classes.push(verify_piece(array, piece, opts.tol)?);
        }
        fam_out.push(AmbiguityFamily { classes: idx });
    }
    let config_count = if opts.count_configurations && complete {
        let pieces: Vec<&Piece> = classes.iter().map(|c| &c.piece).collect();
        Some(count::count_configurations(&prob, catalog, partition, &pieces)?)
    } else {
        None
    };
    Ok(PartitionResult {
        partition: partition.clone(),
        classes,
        families: fam_out,
        config_count,
        complete,
        nodes,
        leaves,
        wall_time: started.elapsed(),
    })
}

/// Sample points of a piece: the witness and points along each parameter
/// direction through it.
pub fn sample_points(piece: &Piece) -> Vec<Vec<Q>> {
    let f = piece.dim();
    let mut out = vec![piece.witness.clone()];
    for j in 0..f {
        let (lo, hi) = line_range(piece, j);
        for (a, b) in [(1, 6), (1, 3), (2, 3), (5, 6)] {
            let s = &lo + (&hi - &lo) * qr(a, b);
            let mut p = piece.witness.clone();
            p[j] += s;
            out.push(p);
        }
    }
    out
}

/// Range of `s` with `witness + s e_j` inside the domain.
fn line_range(piece: &Piece, j: usize) -> (Q, Q) {
    let mut lo: Option<Q> = None;
    let mut hi: Option<Q> = None;
    for c in &piece.domain {
        let a = &c.a[j];
        if a.is_zero() {
            continue;
        }
        let bound = -c.eval(&piece.witness) / a;
        if a.is_positive() {
            if lo.as_ref().is_none_or(|l| bound > *l) {
                lo = Some(bound);
            }
        } else if hi.as_ref().is_none_or(|h| bound < *h) {
            hi = Some(bound);
        }
    }
    (lo.unwrap_or_else(|| qi(-1)), hi.unwrap_or_else(|| qi(1)))
}

fn verify_piece(array: &LinearArray, piece: &Piece, tol: f64) -> Result<AmbiguityClass> {
    let pts = sample_points(piece);
    let mut worst: f64 = 0.0;
    for tau in &pts {
        debug_assert!(piece.domain.iter().all(|c| c.rel == Rel::Ge || c.holds(tau)));
        let phi: Vec<f64> = piece.point(tau).iter().map(turns_to_radians).collect();
        let v = array.is_ambiguous(&phi, tol);
        worst = worst.max(v.relative_singular_value);
        if v.kind != VerdictKind::Ambiguous {
            let turns: Vec<String> = piece.point(tau).iter().map(fmt_q).collect();
            return Err(AmbigError::Verification(format!(
                "array {array}: candidate [{}] (turns) has relative singular value {:.3e}",
                turns.join(", "),
                v.relative_singular_value
            )));
        }
    }
    Ok(AmbiguityClass {
        kind: if piece.dim() == 0 { ClassKind::Discrete } else { ClassKind::Parametric },
        piece: piece.clone(),
        verified: true,
        samples: pts.len(),
        max_relative_singular_value: worst,
    })
}

/// All partitions, concurrently when enabled.
pub fn enumerate_all(
    array: &LinearArray,
    catalog: &Catalog,
    opts: &EnumerationOptions,
) -> Result<Vec<PartitionResult>> {
    let n = Problem::new(array).n;
    if n > catalog.max_length() {
        return Err(AmbigError::CatalogExhausted(n));
    }
    let parts = restricted_partitions(n);
    run_partitions(array, &parts, catalog, opts)
}

pub fn run_partitions(
    array: &LinearArray,
    parts: &[RestrictedPartition],
    catalog: &Catalog,
    opts: &EnumerationOptions,
) -> Result<Vec<PartitionResult>> {
    #[cfg(feature = "parallel")]
    if opts.parallel {
        use rayon::prelude::*;
        return parts.par_iter().map(|p| enumerate_partition(array, p, catalog, opts)).collect();
    }
    parts.iter().map(|p| enumerate_partition(array, p, catalog, opts)).collect()
}

/// Electrical angles of a class point in radians.
pub fn to_radians(point: &[Q]) -> Vec<f64> {
    point.iter().map(|x| 2.0 * std::f64::consts::PI * to_f64(x)).collect()
}
