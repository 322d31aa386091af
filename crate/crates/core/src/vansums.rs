//! Minimal vanishing sums of roots of unity: exact tests, a structural
//! generator, a brute-force oracle, the embedded catalog, and restricted
//! partitions of the tableau count.

use crate::cyclotomic::CyclotomicField;
use crate::error::{AmbigError, Result};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

pub type Phase = Rational64;

const EMBEDDED: &str = include_str!("../data/minimal_vanishing_sums.txt");
const NUMERIC_TOL: f64 = 1e-7;

pub fn wrap_phase(x: Phase) -> Phase {
    x - Phase::from_integer(x.floor().to_integer())
}

pub fn order_of(phases: &[Phase]) -> u64 {
    phases.iter().fold(1i64, |acc, p| acc.lcm(p.denom())) as u64
}

fn exponents(phases: &[Phase], n: u64) -> Vec<u64> {
    phases
        .iter()
        .map(|p| {
            let w = wrap_phase(*p);
            (w.numer() * (n as i64 / w.denom())) as u64
        })
        .collect()
}

fn numeric_sum(phases: &[Phase]) -> Complex64 {
    phases
        .iter()
        .map(|p| Complex64::from_polar(1.0, TAU * (*p.numer() as f64) / (*p.denom() as f64)))
        .sum()
}

/// Exact test of `sum exp(2 pi i p) = 0`.
pub fn is_vanishing(phases: &[Phase]) -> bool {
    if phases.is_empty() {
        return true;
    }
    if numeric_sum(phases).norm() > NUMERIC_TOL * phases.len() as f64 {
        return false;
    }
    let n = order_of(phases);
    CyclotomicField::new(n).is_zero(exponents(phases, n))
}

/// Vanishing with no nonempty proper vanishing sub-multiset.
pub fn is_minimal(phases: &[Phase]) -> bool {
    let k = phases.len();
    if k == 0 || !is_vanishing(phases) {
        return false;
    }
    assert!(k < 32, "minimality check is exhaustive");
    let n = order_of(phases);
    let field = CyclotomicField::new(n);
    let exps = exponents(phases, n);
    let roots: Vec<Complex64> = exps
        .iter()
        .map(|&e| Complex64::from_polar(1.0, TAU * e as f64 / n as f64))
        .collect();
    for mask in 1u32..(1u32 << k) - 1 {
        let s: Complex64 = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| roots[i]).sum();
        if s.norm() < NUMERIC_TOL * k as f64
            && field.is_zero((0..k).filter(|i| mask >> i & 1 == 1).map(|i| exps[i]))
        {
            return false;
        }
    }
    true
}

/// Lexicographically least sorted phase vector among the rotations that
/// move one of the phases to 0.
pub fn canonical_rotation(phases: &[Phase]) -> Vec<Phase> {
    let distinct: BTreeSet<Phase> = phases.iter().map(|p| wrap_phase(*p)).collect();
    distinct
        .iter()
        .map(|x| {
            let mut v: Vec<Phase> = phases.iter().map(|p| wrap_phase(*p - x)).collect();
            v.sort();
            v
        })
        .min()
        .unwrap_or_default()
}

/// Number of rotations mapping the multiset onto itself.
pub fn stabilizer_order(phases: &[Phase]) -> usize {
    let mut base: Vec<Phase> = phases.iter().map(|p| wrap_phase(*p)).collect();
    base.sort();
    let Some(&x0) = base.first() else { return 1 };
    let distinct: BTreeSet<Phase> = base.iter().copied().collect();
    distinct
        .iter()
        .filter(|&&x| {
            let mut v: Vec<Phase> = base.iter().map(|p| wrap_phase(*p - (x - x0))).collect();
            v.sort();
            v == base
        })
        .count()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MinimalVanishingSum {
    phases: Vec<Phase>,
}

impl MinimalVanishingSum {
    /// Phases are wrapped into `[0, 1)` and sorted; no validation.
    pub fn new(phases: Vec<Phase>) -> Self {
        let mut phases: Vec<Phase> = phases.into_iter().map(wrap_phase).collect();
        phases.sort();
        MinimalVanishingSum { phases }
    }

    pub fn phases(&self) -> &[Phase] {
        &self.phases
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn order(&self) -> u64 {
        order_of(&self.phases)
    }

    pub fn canonical(&self) -> Vec<Phase> {
        canonical_rotation(&self.phases)
    }

    pub fn stabilizer_order(&self) -> usize {
        stabilizer_order(&self.phases)
    }

    pub fn is_valid(&self) -> bool {
        is_minimal(&self.phases)
    }
}

impl fmt::Display for MinimalVanishingSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.phases.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", s.join(", "))
    }
}

fn primes_upto(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| (2..k).take_while(|d| d * d <= k).all(|d| k % d != 0)).collect()
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// All minimal vanishing sums of the given length, up to rotation, in
/// canonical form and sorted.
///
/// Roots may be taken in `mu_N` with `N` the product of the primes up to
/// the length. For the largest prime `p | N`, `N = p m`, a sum splits over
/// the cosets `zeta_p^a mu_m`; it vanishes iff the coset parts have equal
/// values. Minimal sums either live in one coset or have all `p` parts
/// nonempty, zero-sum-free and equal.
pub fn generate_minimal_sums(length: usize) -> Vec<Vec<Phase>> {
    if length < 2 {
        return Vec::new();
    }
    let primes = primes_upto(length as u64);
    let n: u64 = primes.iter().product();
    let raw = generate_in(&primes, length);
    let mut out: BTreeSet<Vec<Phase>> = BTreeSet::new();
    for exps in raw {
        let phases: Vec<Phase> = exps.iter().map(|&e| Phase::new(e as i64, n as i64)).collect();
        out.insert(canonical_rotation(&phases));
    }
    out.into_iter().collect()
}

fn generate_in(primes: &[u64], w: usize) -> Vec<Vec<u64>> {
    let Some((&p, rest)) = primes.split_last() else {
        return Vec::new();
    };
    let m: u64 = rest.iter().product();
    let n = p * m;
    let mut found: BTreeSet<Vec<u64>> = BTreeSet::new();
    for e in generate_in(rest, w) {
        let mut v: Vec<u64> = e.iter().map(|x| x * p).collect();
        v.sort();
        found.insert(v);
    }
    if w >= p as usize {
        for e in coset_sums(p, m, w) {
            found.insert(e);
        }
    }
    let field = CyclotomicField::new(n);
    found
        .into_iter()
        .filter(|e| {
            debug_assert!(field.is_zero(e.iter().copied()));
            let phases: Vec<Phase> = e.iter().map(|&x| Phase::new(x as i64, n as i64)).collect();
            is_minimal(&phases)
        })
        .collect()
}

/// Sums with all `p` coset parts nonempty, zero-sum-free and of equal value.
fn coset_sums(p: u64, m: u64, w: usize) -> Vec<Vec<u64>> {
    let n = p * m;
    let field = CyclotomicField::new(m);
    let max_part = w - (p as usize - 1);
    let light = w / p as usize;

    // values reachable by light multisets bound the admissible classes
    let mut admissible: Vec<(Complex64, Vec<i64>)> = Vec::new();
    let mut seen = BTreeSet::new();
    multisets(m, light, &mut |ms: &[u64], s: Complex64| {
        if zero_sum_free(ms, m, &field) {
            let key = field.key(ms.iter().copied());
            if seen.insert(key.clone()) {
                admissible.push((s, key));
            }
        }
    });
    let mut groups: HashMap<Vec<i64>, Vec<Vec<u64>>> = HashMap::new();
    multisets(m, max_part, &mut |ms: &[u64], s: Complex64| {
        if admissible.iter().any(|(v, _)| (v - s).norm() < 1e-9) {
            let key = field.key(ms.iter().copied());
            if seen.contains(&key) && zero_sum_free(ms, m, &field) {
                groups.entry(key).or_default().push(ms.to_vec());
            }
        }
    });
    let mut out = Vec::new();
    let mut keys: Vec<&Vec<i64>> = groups.keys().collect();
    keys.sort();
    for key in keys {
        let members = &groups[key];
        let mut pick: Vec<usize> = Vec::with_capacity(p as usize);
        tuples(members, p as usize, w, &mut pick, &mut |sel: &[usize]| {
            let mut e: Vec<u64> = Vec::with_capacity(w);
            for (a, &i) in sel.iter().enumerate() {
                for &x in &members[i] {
                    e.push((a as u64 * m + x * p) % n);
                }
            }
            e.sort();
            out.push(e);
        });
    }
    out
}

fn tuples(
    members: &[Vec<u64>],
    p: usize,
    remaining: usize,
    pick: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    let left = p - pick.len();
    if left == 0 {
        if remaining == 0 {
            emit(pick);
        }
        return;
    }
    for (i, mem) in members.iter().enumerate() {
        let wgt = mem.len();
        if wgt + (left - 1) <= remaining {
            pick.push(i);
            tuples(members, p, remaining - wgt, pick, emit);
            pick.pop();
        }
    }
}

/// Visits every nonempty multiset of `mu_m` of weight at most `max_w`
/// with its numeric value.
fn multisets(m: u64, max_w: usize, visit: &mut dyn FnMut(&[u64], Complex64)) {
    fn rec(
        m: u64,
        start: u64,
        max_w: usize,
        cur: &mut Vec<u64>,
        s: Complex64,
        visit: &mut dyn FnMut(&[u64], Complex64),
    ) {
        if !cur.is_empty() {
            visit(cur, s);
        }
        if cur.len() == max_w {
            return;
        }
        for e in start..m {
            cur.push(e);
            let z = Complex64::from_polar(1.0, TAU * e as f64 / m as f64);
            rec(m, e, max_w, cur, s + z, visit);
            cur.pop();
        }
    }
    rec(m, 0, max_w, &mut Vec::new(), Complex64::zero(), visit);
}

fn zero_sum_free(ms: &[u64], m: u64, field: &CyclotomicField) -> bool {
    let k = ms.len();
    let roots: Vec<Complex64> =
        ms.iter().map(|&e| Complex64::from_polar(1.0, TAU * e as f64 / m as f64)).collect();
    for mask in 1u32..(1u32 << k) {
        let s: Complex64 = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| roots[i]).sum();
        if s.norm() < NUMERIC_TOL * k as f64
            && field.is_zero((0..k).filter(|i| mask >> i & 1 == 1).map(|i| ms[i]))
        {
            return false;
        }
    }
    true
}

/// Exhaustive search over multisets of `order`-th roots of unity with one
/// phase fixed to 0. Returns canonical forms, sorted.
pub fn brute_force_minimal_sums(length: usize, order: u64, budget: u64) -> Result<Vec<Vec<Phase>>> {
    if length == 0 || order == 0 {
        return Ok(Vec::new());
    }
    let count = binomial(order + length as u64 - 2, length as u64 - 1);
    if count.is_none_or(|c| c > budget) {
        return Err(AmbigError::OracleBudget(format!(
            "length {length} at order {order} needs more than {budget} multisets"
        )));
    }
    let roots: Vec<Complex64> =
        (0..order).map(|e| Complex64::from_polar(1.0, TAU * e as f64 / order as f64)).collect();
    let mut out: BTreeSet<Vec<Phase>> = BTreeSet::new();
    let mut cur = vec![0u64];
    fn rec(
        order: u64,
        length: usize,
        roots: &[Complex64],
        cur: &mut Vec<u64>,
        s: Complex64,
        out: &mut BTreeSet<Vec<Phase>>,
    ) {
        if cur.len() == length {
            if s.norm() < NUMERIC_TOL * length as f64 {
                let phases: Vec<Phase> =
                    cur.iter().map(|&e| Phase::new(e as i64, order as i64)).collect();
                if is_minimal(&phases) {
                    out.insert(canonical_rotation(&phases));
                }
            }
            return;
        }
        let start = *cur.last().unwrap_or(&0);
        for e in start..order {
            cur.push(e);
            rec(order, length, roots, cur, s + roots[e as usize], out);
            cur.pop();
        }
    }
    rec(order, length, &roots, &mut cur, roots[0], &mut out);
    Ok(out.into_iter().collect())
}

fn binomial(n: u64, k: u64) -> Option<u64> {
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
        if r > u64::MAX as u128 {
            return None;
        }
    }
    Some(r as u64)
}

/// Catalog of minimal vanishing sums keyed by length.
#[derive(Clone, Debug)]
pub struct Catalog {
    max_length: usize,
    entries: BTreeMap<usize, Vec<MinimalVanishingSum>>,
}

impl Catalog {
    pub fn embedded() -> Self {
        Self::parse(EMBEDDED).expect("embedded catalog parses")
    }

    /// Reads `AMBIG_CATALOG` if set, otherwise the embedded catalog.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os("AMBIG_CATALOG") {
            Some(path) => Self::parse(&std::fs::read_to_string(path)?),
            None => Ok(Self::embedded()),
        }
    }

    /// Format: `max-length K` once, then one `len | p/q p/q ...` per sum.
    /// `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut max_length = None;
        let mut entries: BTreeMap<usize, Vec<MinimalVanishingSum>> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| AmbigError::CatalogParse { line: i + 1, message };
            if let Some(k) = line.strip_prefix("max-length") {
                max_length = Some(k.trim().parse().map_err(|_| err("bad max-length".into()))?);
                continue;
            }
            let (len, body) = line.split_once('|').ok_or_else(|| err("expected `len | phases`".into()))?;
            let len: usize = len.trim().parse().map_err(|_| err("bad length".into()))?;
            let phases = body
                .split_whitespace()
                .map(|s| s.parse::<Phase>().map_err(|_| err(format!("bad phase `{s}`"))))
                .collect::<Result<Vec<_>>>()?;
            if phases.len() != len {
                return Err(err(format!("length {len} but {} phases", phases.len())));
            }
            entries.entry(len).or_default().push(MinimalVanishingSum::new(phases));
        }
        let max_length = max_length
            .or_else(|| entries.keys().max().copied())
            .unwrap_or(0);
        Ok(Catalog { max_length, entries })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("max-length {}\n", self.max_length);
        for (len, sums) in &self.entries {
            for sum in sums {
                let ph: Vec<String> = sum.phases.iter().map(|p| p.to_string()).collect();
                s.push_str(&format!("{len} | {}\n", ph.join(" ")));
            }
        }
        s
    }

    pub fn from_generator(max_length: usize) -> Self {
        let mut entries = BTreeMap::new();
        for len in 2..=max_length {
            let sums: Vec<MinimalVanishingSum> =
                generate_minimal_sums(len).into_iter().map(MinimalVanishingSum::new).collect();
            if !sums.is_empty() {
                entries.insert(len, sums);
            }
        }
        Catalog { max_length, entries }
    }

    pub fn max_length(&self) -> usize {
        self.max_length
    }

    pub fn sums_of_length(&self, len: usize) -> Result<&[MinimalVanishingSum]> {
        if len > self.max_length {
            return Err(AmbigError::CatalogExhausted(len));
        }
        Ok(self.entries.get(&len).map_or(&[], Vec::as_slice))
    }

    pub fn iter(&self) -> impl Iterator<Item = &MinimalVanishingSum> {
        self.entries.values().flatten()
    }

    /// Entries that fail the exact vanishing or minimality test.
    pub fn invalid_entries(&self) -> Vec<&MinimalVanishingSum> {
        self.iter().filter(|s| !s.is_valid()).collect()
    }
}

/// Partition of `n` into parts from `{2, 3, 5, 6, 7, ...}`, stored
/// non-increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RestrictedPartition {
    parts: Vec<usize>,
}

impl RestrictedPartition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.iter().any(|&p| p < 2 || p == 4) {
            return Err(AmbigError::InvalidInput(
                "partition parts must be at least 2 and not 4".into(),
            ));
        }
        parts.sort_by(|a, b| b.cmp(a));
        Ok(RestrictedPartition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    fn ascending(&self) -> Vec<usize> {
        self.parts.iter().rev().copied().collect()
    }
}

impl fmt::Display for RestrictedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.ascending().iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join("+"))
    }
}

impl FromStr for RestrictedPartition {
    type Err = AmbigError;

    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split('+')
            .map(|x| x.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| AmbigError::InvalidInput(format!("bad partition `{s}`")))?;
        Self::new(parts)
    }
}

/// All restricted partitions of `n`, ordered by largest part and then by
/// the ascending part list.
pub fn restricted_partitions(n: usize) -> Vec<RestrictedPartition> {
    fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (2..=max.min(n)).rev() {
            if p == 4 {
                continue;
            }
            cur.push(p);
            rec(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut raw = Vec::new();
    rec(n, n, &mut Vec::new(), &mut raw);
    let mut parts: Vec<RestrictedPartition> =
        raw.into_iter().map(|parts| RestrictedPartition { parts }).collect();
    parts.sort_by(|a, b| a.parts[0].cmp(&b.parts[0]).then_with(|| a.ascending().cmp(&b.ascending())));
    parts
}

/// Product of the primes up to the largest part: every minimal sum used by
/// the partition has rotation-normalized order dividing this bound.
pub fn mann_bound(partition: &RestrictedPartition) -> u64 {
    let max = partition.parts.first().copied().unwrap_or(1) as u64;
    primes_upto(max).iter().product::<u64>().max(1)
}

/// Order of the canonical rotation; always squarefree for minimal sums.
pub fn normalized_order(sum: &MinimalVanishingSum) -> u64 {
    let c = sum.canonical();
    let n = order_of(&c);
    debug_assert!(prime_factors(n).iter().product::<u64>() == n || n == 1 || !sum.is_valid());
    n
}
