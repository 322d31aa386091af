use crate::array::LinearArray;
use crate::error::Result;
use crate::exact::{qi, Q};
use crate::tableaux::{enumerate_ssyt, WeightMatrix};
use crate::vansums::{Catalog, MinimalVanishingSum, Phase, RestrictedPartition};
use num_bigint::BigInt;
use std::collections::BTreeSet;

/// `(part, root)` per monomial, indexed by tableau.
pub type Assignment = Vec<(usize, usize)>;

pub struct Problem {
    pub m: usize,
    pub n: usize,
    /// `alpha[l][m]`.
    pub alpha: Vec<Vec<i64>>,
    pub d: Q,
    pub half_d: Q,
    pub weights: WeightMatrix,
}

impl Problem {
    pub fn new(array: &LinearArray) -> Self {
        let m = array.num_elements();
        let tableaux = enumerate_ssyt(&array.shape(), m);
        let weights = WeightMatrix::from_tableaux(&tableaux, m);
        let alpha = (0..tableaux.len())
            .map(|l| weights.column(l).iter().map(|&x| x as i64).collect())
            .collect();
        let d = array.baseline().clone();
        Problem { m, n: tableaux.len(), alpha, half_d: &d / qi(2), d, weights }
    }
}

pub struct Part {
    pub len: usize,
    pub sum_index: usize,
    pub phases: Vec<Q>,
    /// Index of the distinct phase of each root.
    pub phase_class: Vec<usize>,
    pub distinct: Vec<Phase>,
    /// Root may be the first one used in this part.
    pub opener: Vec<bool>,
    /// Rotations mapping the sum onto itself.
    pub stabilizer: Vec<Phase>,
    /// Same length and sum as the previous part.
    pub same_as_prev: bool,
}

pub struct SumChoice {
    pub parts: Vec<Part>,
}

fn to_q(p: &Phase) -> Q {
    Q::new(BigInt::from(*p.numer()), BigInt::from(*p.denom()))
}

fn build_part(len: usize, sum_index: usize, sum: &MinimalVanishingSum, same_as_prev: bool) -> Part {
    let ph = sum.phases();
    let distinct: Vec<Phase> = ph.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let phase_class: Vec<usize> =
        ph.iter().map(|p| distinct.iter().position(|x| x == p).unwrap()).collect();
    let stabilizer: Vec<Phase> = distinct
        .iter()
        .map(|x| *x - distinct[0])
        .filter(|rho| {
            let mut v: Vec<Phase> = ph.iter().map(|p| crate::vansums::wrap_phase(*p + rho)).collect();
            v.sort();
            v == ph
        })
        .collect();
    // a root opens the part if its phase is least in its stabilizer orbit
    // and it is the first root carrying that phase
    let opener = (0..ph.len())
        .map(|k| {
            let first = phase_class.iter().position(|&c| c == phase_class[k]) == Some(k);
            let least = stabilizer.iter().all(|rho| crate::vansums::wrap_phase(ph[k] + rho) >= ph[k]);
            first && least
        })
        .collect();
    Part {
        len,
        sum_index,
        phases: ph.iter().map(to_q).collect(),
        phase_class,
        distinct,
        opener,
        stabilizer,
        same_as_prev,
    }
}

/// Sum selections for the parts of a partition. With `prune`, identical
/// lengths get non-decreasing catalog indices; otherwise all tuples.
pub fn sum_choices(catalog: &Catalog, partition: &RestrictedPartition, prune: bool) -> Result<Vec<SumChoice>> {
    let parts = partition.parts();
    let mut lists = Vec::with_capacity(parts.len());
    for &len in parts {
        lists.push(catalog.sums_of_length(len)?);
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; parts.len()];
    fn rec(
        i: usize,
        parts: &[usize],
        lists: &[&[MinimalVanishingSum]],
        prune: bool,
        idx: &mut Vec<usize>,
        out: &mut Vec<SumChoice>,
    ) {
        if i == parts.len() {
            let built = (0..parts.len())
                .map(|j| {
                    let same = prune && j > 0 && parts[j] == parts[j - 1] && idx[j] == idx[j - 1];
                    build_part(parts[j], idx[j], &lists[j][idx[j]], same)
                })
                .collect();
            out.push(SumChoice { parts: built });
            return;
        }
        let start = if prune && i > 0 && parts[i] == parts[i - 1] { idx[i - 1] } else { 0 };
        for s in start..lists[i].len() {
            idx[i] = s;
            rec(i + 1, parts, lists, prune, idx, out);
        }
    }
    if lists.iter().all(|l| !l.is_empty()) {
        rec(0, parts, &lists, prune, &mut idx, &mut out);
    }
    Ok(out)
}
