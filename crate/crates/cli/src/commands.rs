use crate::output::{emit, num, Table};
use crate::{AngleArgs, ArrayArgs, EnumerateArgs, OutputArgs, Outcome, SymmetricCommand, VerifyArgs};
use ambig_core::array::{parse_positions, turns_to_radians, LinearArray, VerdictKind, DEFAULT_TOL};
use ambig_core::enumeration::{enumerate_all, run_partitions, EnumerationOptions, EnumerationReport};
use ambig_core::exact::{fmt_q, parse_q};
use ambig_core::symmetric::{self, SymmetricArray};
use ambig_core::tableaux::{enumerate_ssyt, WeightMatrix};
use ambig_core::vansums::{Catalog, RestrictedPartition};
use ambig_core::AmbigError;
use anyhow::Result;
use serde_json::json;
use std::f64::consts::PI;
use std::time::Duration;

fn invalid(msg: impl Into<String>) -> anyhow::Error {
    AmbigError::InvalidInput(msg.into()).into()
}

fn parse_array(a: &ArrayArgs) -> Result<LinearArray> {
    let d = parse_q(&a.baseline).ok_or_else(|| invalid(format!("bad baseline `{}`", a.baseline)))?;
    Ok(LinearArray::new(&parse_positions(&a.array)?, d)?)
}

/// `--tol`, else `AMBIG_TOL`, else the library default.
fn tolerance(flag: Option<f64>) -> Result<f64> {
    let tol = match (flag, std::env::var("AMBIG_TOL")) {
        (Some(t), _) => t,
        (None, Ok(s)) => s.trim().parse().map_err(|_| invalid(format!("bad AMBIG_TOL `{s}`")))?,
        (None, Err(_)) => DEFAULT_TOL,
    };
    if !(tol > 0.0 && tol < 1.0) {
        return Err(invalid(format!("tolerance {tol} outside (0, 1)")));
    }
    Ok(tol)
}

fn split_list(s: &str) -> Vec<&str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).collect()
}

fn parse_f64s(s: &str) -> Result<Vec<f64>> {
    split_list(s).into_iter().map(|x| x.parse().map_err(|_| invalid(format!("bad number `{x}`")))).collect()
}

/// Half a unit in the last printed decimal place; integers and fractions
/// count as exact.
fn rounding(s: &str) -> f64 {
    match s.split_once('.') {
        Some((_, frac)) if !frac.is_empty() => 0.5 * 10f64.powi(-(frac.len() as i32)),
        _ => 0.0,
    }
}

pub fn ssyt(a: &ArrayArgs, out: &OutputArgs) -> Result<Outcome> {
    let array = parse_array(a)?;
    let m = array.num_elements();
    let shape = array.shape();
    let ts = enumerate_ssyt(&shape, m);
    let w = WeightMatrix::from_tableaux(&ts, m);
    let rows: Vec<Vec<Vec<u8>>> =
        ts.iter().map(|t| t.rows.iter().filter(|r| !r.is_empty()).cloned().collect()).collect();
    let weights: Vec<&[u32]> = (0..w.cols()).map(|l| w.column(l)).collect();
    let value = json!({
        "array": array.positions(),
        "shape": shape.lambda(),
        "count": ts.len(),
        "tableaux": rows,
        "weights": weights,
    });
    emit(out, &value, || {
        let mut t = Table::new(vec!["index", "rows", "weight"]);
        for (l, r) in rows.iter().enumerate() {
            let rs: Vec<String> = r.iter().map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")).collect();
            let wt: Vec<String> = weights[l].iter().map(|x| x.to_string()).collect();
            t.push(vec![l.to_string(), rs.join("/"), wt.join(" ")]);
        }
        t
    })?;
    Ok(Outcome::Done)
}

pub fn enumerate(args: &EnumerateArgs) -> Result<Outcome> {
    let array = parse_array(&args.array)?;
    let catalog = Catalog::from_env()?;
    let mut opts = EnumerationOptions {
        prune: !args.no_prune,
        count_configurations: !args.no_count,
        node_budget: args.node_budget,
        tol: tolerance(args.tol)?,
        ..Default::default()
    };
    if let Some(secs) = args.time_budget {
        if !(secs > 0.0 && secs.is_finite()) {
            return Err(invalid(format!("bad time budget {secs}")));
        }
        opts.time_budget = Some(Duration::from_secs_f64(secs));
    }
    match args.jobs {
        Some(0) => return Err(invalid("--jobs must be at least 1")),
        Some(1) => opts.parallel = false,
        #[cfg(feature = "parallel")]
        Some(n) => {
            rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
        }
        _ => {}
    }
    let n = ambig_core::tableaux::ssyt_count_formula(array.positions()) as usize;
    let results = match &args.partition {
        Some(p) => {
            let p: RestrictedPartition = p.parse()?;
            if p.total() != n {
                return Err(invalid(format!("partition {p} does not sum to N = {n}")));
            }
            run_partitions(&array, &[p], &catalog, &opts)?
        }
        None => enumerate_all(&array, &catalog, &opts)?,
    };
    let report = EnumerationReport::new(&array, n, &results, args.timings);
    let value = serde_json::to_value(&report)?;
    emit(&args.out, &value, || {
        let mut t = Table::new(vec![
            "partition",
            "complete",
            "config_count",
            "family",
            "class",
            "kind",
            "phi_turns",
            "parameters",
            "verified",
            "samples",
            "max_relative_singular_value",
        ]);
        for p in &report.partitions {
            for (f, members) in p.families.iter().enumerate() {
                for &c in members {
                    let class = &p.classes[c];
                    let params: Vec<String> = class
                        .parameters
                        .iter()
                        .map(|q| {
                            let lo = q.lower.clone().unwrap_or_else(|| "-inf".into());
                            let hi = q.upper.clone().unwrap_or_else(|| "inf".into());
                            format!("{} in ({lo}, {hi})", q.name)
                        })
                        .collect();
                    t.push(vec![
                        p.partition.clone(),
                        p.complete.to_string(),
                        p.config_count.map(|x| x.to_string()).unwrap_or_default(),
                        f.to_string(),
                        c.to_string(),
                        serde_json::to_value(class.kind).unwrap().as_str().unwrap_or_default().to_string(),
                        class.phi_turns.join("; "),
                        params.join("; "),
                        class.verified.to_string(),
                        class.samples.to_string(),
                        num(class.max_relative_singular_value),
                    ]);
                }
            }
        }
        t
    })?;
    Ok(if report.complete { Outcome::Done } else { Outcome::Incomplete })
}

/// Electrical angles in radians and their worst-case rounding error.
fn electrical_angles(array: &LinearArray, angles: &AngleArgs) -> Result<(Vec<f64>, Vec<f64>)> {
    let d = array.baseline_f64();
    let (list, per_unit) = match (&angles.degrees, &angles.radians, &angles.turns) {
        (Some(s), _, _) => (s, PI / 180.0 * PI * d),
        (_, Some(s), _) => (s, PI * d),
        (_, _, Some(s)) => (s, 2.0 * PI),
        _ => return Err(invalid("no angles given")),
    };
    let mut phis = Vec::new();
    let mut errs = Vec::new();
    for x in split_list(list) {
        let phi = if angles.turns.is_some() {
            turns_to_radians(&parse_q(x).ok_or_else(|| invalid(format!("bad angle `{x}`")))?)
        } else {
            let v: f64 = x.parse().map_err(|_| invalid(format!("bad angle `{x}`")))?;
            let theta = if angles.degrees.is_some() { v.to_radians() } else { v };
            array.electrical_angle(theta)?
        };
        phis.push(phi);
        errs.push(rounding(x) * per_unit);
    }
    if phis.is_empty() {
        return Err(invalid("no angles given"));
    }
    Ok((phis, errs))
}

pub fn verify(args: &VerifyArgs) -> Result<Outcome> {
    let array = parse_array(&args.array)?;
    let tol = tolerance(args.tol)?;
    let (phis, errs) = electrical_angles(&array, &args.angles)?;
    // entries move by at most |r_m - c| dPhi_l; rows may be centered freely
    let c = array.aperture() as f64 / 2.0;
    let rnorm = array.positions().iter().map(|&r| (r as f64 - c).powi(2)).sum::<f64>().sqrt();
    let enorm = errs.iter().map(|e| e * e).sum::<f64>().sqrt();
    let smax = array.steering_matrix(&phis).singular_values().max();
    let rounding_bound = rnorm * enorm / smax;
    let used = tol.max(rounding_bound);
    let verdict = array.is_ambiguous(&phis, used);
    let kind = serde_json::to_value(verdict.kind)?;
    let value = json!({
        "array": array.positions(),
        "baseline": fmt_q(array.baseline()),
        "electrical_angles_rad": phis,
        "verdict": kind,
        "relative_singular_value": verdict.relative_singular_value,
        "tolerance": used,
        "rounding_bound": rounding_bound,
    });
    emit(&args.out, &value, || {
        let mut t = Table::new(vec!["verdict", "relative_singular_value", "tolerance", "rounding_bound"]);
        t.push(vec![
            kind.as_str().unwrap_or_default().to_string(),
            num(verdict.relative_singular_value),
            num(used),
            num(rounding_bound),
        ]);
        t
    })?;
    Ok(if verdict.kind == VerdictKind::Trivial { Outcome::Trivial } else { Outcome::Done })
}

fn require_symmetric(a: &ArrayArgs) -> Result<SymmetricArray> {
    let array = parse_array(a)?;
    symmetric::detect_symmetry(&array).ok_or_else(|| invalid(format!("array {array} is not symmetric about any center")))
}

pub fn symmetric(cmd: &SymmetricCommand) -> Result<Outcome> {
    match cmd {
        SymmetricCommand::Detect { array, out } => {
            let a = parse_array(array)?;
            let value = match symmetric::detect_symmetry(&a) {
                Some(s) => json!({
                    "symmetric": true,
                    "shift": fmt_q(s.shift()),
                    "positions": s.positions().iter().map(fmt_q).collect::<Vec<_>>(),
                    "norm": s.norm(),
                    "manifold_length": s.manifold_length(),
                    "reduced_array": symmetric::reduced_array(&s).iter().map(fmt_q).collect::<Vec<_>>(),
                }),
                None => json!({ "symmetric": false }),
            };
            emit(out, &value, || {
                let mut t = Table::new(vec!["symmetric", "shift", "positions", "norm", "reduced_array"]);
                let field = |k: &str| match &value[k] {
                    serde_json::Value::Null => String::new(),
                    serde_json::Value::Array(v) => v.iter().map(|x| x.as_str().unwrap_or_default()).collect::<Vec<_>>().join(" "),
                    serde_json::Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                t.push(vec![field("symmetric"), field("shift"), field("positions"), field("norm"), field("reduced_array")]);
                t
            })?;
        }
        SymmetricCommand::Charpoints { array, order, resolution, out } => {
            let s = require_symmetric(array)?;
            let pts = symmetric::characteristic_points(&s, *order, *resolution)?;
            let value = json!({
                "order": order,
                "norm": s.norm(),
                "manifold_length": s.manifold_length(),
                "points": pts.iter().map(|p| json!({
                    "s": p.s,
                    "theta_rad": p.theta,
                    "theta_deg": p.theta.to_degrees(),
                })).collect::<Vec<_>>(),
            });
            emit(out, &value, || {
                let mut t = Table::new(vec!["order", "s", "theta_rad", "theta_deg"]);
                for p in &pts {
                    t.push(vec![order.to_string(), num(p.s), num(p.theta), num(p.theta.to_degrees())]);
                }
                t
            })?;
        }
        SymmetricCommand::ReduceCheck { array, degrees, tol, out } => {
            let s = require_symmetric(array)?;
            let list = split_list(degrees);
            let thetas: Vec<f64> = parse_f64s(degrees)?.iter().map(|d| d.to_radians()).collect();
            let errs: Vec<f64> = list.iter().map(|x| rounding(x).to_radians()).collect();
            let used = tolerance(*tol)?.max(reduction_rounding(&s, &thetas, &errs));
            let e = symmetric::real_part_ambiguity_equivalence(&s, &thetas, used)?;
            let value = json!({
                "lhs": e.lhs,
                "rhs": e.rhs,
                "agree": e.lhs == e.rhs,
                "empirical": e.empirical,
                "tolerance": used,
            });
            emit(out, &value, || {
                let mut t = Table::new(vec!["lhs", "rhs", "agree", "empirical"]);
                t.push(vec![e.lhs.to_string(), e.rhs.to_string(), (e.lhs == e.rhs).to_string(), e.empirical.to_string()]);
                t
            })?;
        }
        SymmetricCommand::Family { array, degrees, out } => {
            let s = require_symmetric(array)?;
            let grid: Vec<f64> = match degrees {
                Some(d) => parse_f64s(d)?.iter().map(|x| x.to_radians()).collect(),
                None => (1..90).map(|i| (i as f64).to_radians()).collect(),
            };
            let pairs = symmetric::symmetric_ambiguity_family(&s, &grid)?;
            let value = json!({
                "pairs": pairs.iter().map(|(a, b)| json!({
                    "v1_deg": a.to_degrees(),
                    "v2_deg": b.to_degrees(),
                })).collect::<Vec<_>>(),
            });
            emit(out, &value, || {
                let mut t = Table::new(vec!["v1_deg", "v2_deg"]);
                for (a, b) in &pairs {
                    t.push(vec![num(a.to_degrees()), num(b.to_degrees())]);
                }
                t
            })?;
        }
    }
    Ok(Outcome::Done)
}

/// Relative rounding bound for both sides of the reduction; entries of
/// either matrix move by at most `pi |r_k| dtheta`.
fn reduction_rounding(s: &SymmetricArray, thetas: &[f64], errs: &[f64]) -> f64 {
    if thetas.len() != symmetric::reduced_array(s).len() {
        return 0.0;
    }
    let red: Vec<f64> = symmetric::reduced_array(s).iter().map(ambig_core::exact::to_f64).collect();
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let e = norm(errs);
    let lhs = PI * norm(&red) * e / symmetric::real_part_steering(&red, thetas).singular_values().max();
    let full = symmetric::mirrored(thetas);
    let rhs = PI * s.norm() * 2f64.sqrt() * e / s.steering_matrix(&full).singular_values().max();
    lhs.max(rhs)
}

pub fn catalog(text: bool, out: &OutputArgs) -> Result<Outcome> {
    let cat = Catalog::from_env()?;
    let invalid_entries: Vec<String> = cat
        .invalid_entries()
        .iter()
        .map(|s| s.phases().iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" "))
        .collect();
    if text {
        print!("{}", cat.to_text());
    } else {
        let counts: serde_json::Map<String, serde_json::Value> = (2..=cat.max_length())
            .map(|len| (len.to_string(), json!(cat.sums_of_length(len).map(|s| s.len()).unwrap_or(0))))
            .collect();
        let value = json!({
            "source": std::env::var("AMBIG_CATALOG").unwrap_or_else(|_| "embedded".into()),
            "max_length": cat.max_length(),
            "counts": counts,
            "invalid": invalid_entries,
        });
        emit(out, &value, || {
            let mut t = Table::new(vec!["length", "phases", "valid"]);
            for s in cat.iter() {
                let ph = s.phases().iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ");
                t.push(vec![s.len().to_string(), ph, s.is_valid().to_string()]);
            }
            t
        })?;
    }
    if !invalid_entries.is_empty() {
        return Err(AmbigError::Verification(format!("{} catalog entries are not minimal vanishing sums", invalid_entries.len())).into());
    }
    Ok(Outcome::Done)
}
