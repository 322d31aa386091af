//! Serializable enumeration report.

use super::{AmbiguityClass, ClassKind, PartitionResult};
use crate::array::LinearArray;
use crate::exact::{fmt_q, Constraint, Q};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Debug, Serialize)]
pub struct ParameterReport {
    pub name: String,
    pub lower: Option<String>,
    pub upper: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassReport {
    pub kind: ClassKind,
    /// Electrical angles in turns as affine expressions of the parameters.
    pub phi_turns: Vec<String>,
    pub parameters: Vec<ParameterReport>,
    pub verified: bool,
    pub samples: usize,
    pub max_relative_singular_value: f64,
}

impl ClassReport {
    pub fn new(c: &AmbiguityClass) -> Self {
        let parameters = c
            .parameter_bounds()
            .into_iter()
            .enumerate()
            .map(|(j, (lo, hi))| ParameterReport {
                name: format!("t{}", j + 1),
                lower: lo.as_ref().map(fmt_q),
                upper: hi.as_ref().map(fmt_q),
            })
            .collect();
        ClassReport {
            kind: c.kind,
            phi_turns: c.affine_strings(),
            parameters,
            verified: c.verified,
            samples: c.samples,
            max_relative_singular_value: c.max_relative_singular_value,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionReport {
    pub partition: String,
    pub complete: bool,
    pub config_count: Option<u64>,
    pub nodes: u64,
    pub leaves: u64,
    /// Class indices per connected family.
    pub families: Vec<Vec<usize>>,
    pub classes: Vec<ClassReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_secs: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MergedFamily {
    pub class: ClassReport,
    pub partitions: Vec<String>,
    /// Discrete point already inside a parametric class of this list.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subsumed_by: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EnumerationReport {
    pub array: Vec<i64>,
    pub baseline: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub complete: bool,
    pub partitions: Vec<PartitionReport>,
    pub merged_classes: Vec<MergedFamily>,
}

impl EnumerationReport {
    pub fn new(array: &LinearArray, n: usize, results: &[PartitionResult], timings: bool) -> Self {
        let partitions = results
            .iter()
            .map(|r| PartitionReport {
                partition: r.partition.to_string(),
                complete: r.complete,
                config_count: r.config_count,
                nodes: r.nodes,
                leaves: r.leaves,
                families: r.families.iter().map(|f| f.classes.clone()).collect(),
                classes: r.classes.iter().map(ClassReport::new).collect(),
                wall_time_secs: timings.then_some(r.wall_time.as_secs_f64()),
            })
            .collect();
        EnumerationReport {
            array: array.positions().to_vec(),
            baseline: fmt_q(array.baseline()),
            n,
            complete: results.iter().all(|r| r.complete),
            partitions,
            merged_classes: merge(results),
        }
    }
}

/// Deduplicated classes over all partitions; identical pieces have equal
/// hulls and domains.
pub fn merge(results: &[PartitionResult]) -> Vec<MergedFamily> {
    type Key = (usize, Vec<Q>, Vec<Vec<Q>>, Vec<Constraint>);
    let mut map: BTreeMap<Key, (&AmbiguityClass, Vec<String>)> = BTreeMap::new();
    for r in results {
        for c in &r.classes {
            let p = &c.piece;
            let key = (p.dim(), p.rref.offset.clone(), p.rref.dirs.clone(), p.domain.clone());
            let entry = map.entry(key).or_insert((c, Vec::new()));
            let name = r.partition.to_string();
            if !entry.1.contains(&name) {
                entry.1.push(name);
            }
        }
    }
    let classes: Vec<(&AmbiguityClass, Vec<String>)> = map.into_values().collect();
    let parametric: Vec<(usize, &AmbiguityClass)> =
        classes.iter().enumerate().filter(|(_, (c, _))| c.dim() > 0).map(|(i, (c, _))| (i, *c)).collect();
    classes
        .iter()
        .map(|(c, parts)| {
            let subsumed_by = if c.dim() == 0 {
                let p = c.piece.point(&[]);
                parametric.iter().find(|(_, pc)| super::uniform::class_contains(pc, &p)).map(|(i, _)| *i)
            } else {
                None
            };
            MergedFamily { class: ClassReport::new(c), partitions: parts.clone(), subsumed_by }
        })
        .collect()
}
