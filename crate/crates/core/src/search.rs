//! Exhaustive search over crossing-change subsets of a fixed diagram.
//!
//! Changes at distinct crossings commute, so candidates are subsets, visited
//! by size and then lexicographically. A candidate is a witness when the
//! changed diagram passes the necessary conditions for C_k-triviality: all
//! μ of length at most k vanish and, for k >= 3, every component has v2 = 0.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use itertools::Itertools;
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::bounds::{linking_matrix, BoundsError};
use crate::diagram::{CrossingClass, DiagramError, LinkDiagram};
use crate::milnor::{milnor_table, v2, MilnorError, MilnorOptions};

/// Most witnesses kept in a report.
pub const WITNESS_CAP: usize = 16;
const CHUNK: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error(transparent)]
    Milnor(#[from] MilnorError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error("expected 2 components, found {0}")]
    WrongComponentCount(usize),
    #[error("linking number is {0}, expected 0")]
    NonzeroLinking(i64),
    #[error("cap refers to component {0}, which does not exist")]
    BadCap(usize),
    #[error("worker pool: {0}")]
    Pool(String),
}

impl SearchError {
    pub fn is_capacity(&self) -> bool {
        matches!(self, SearchError::Milnor(e) if e.is_capacity())
    }
}

/// How many crossings may change, overall and per crossing class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_changes: usize,
    pub k: usize,
    /// Cap on changes between components `i < j`.
    pub pair_caps: BTreeMap<(usize, usize), usize>,
    /// Cap on self-crossing changes of component `i`.
    pub self_caps: BTreeMap<usize, usize>,
}

impl SearchBudget {
    pub fn new(max_changes: usize, k: usize) -> Self {
        SearchBudget {
            max_changes,
            k,
            pair_caps: BTreeMap::new(),
            self_caps: BTreeMap::new(),
        }
    }

    pub fn with_pair_cap(mut self, i: usize, j: usize, cap: usize) -> Self {
        self.pair_caps.insert((i.min(j), i.max(j)), cap);
        self
    }

    pub fn with_self_cap(mut self, i: usize, cap: usize) -> Self {
        self.self_caps.insert(i, cap);
        self
    }

    fn cap(&self, class: CrossingClass) -> Option<usize> {
        match class {
            CrossingClass::SelfCrossing(i) => self.self_caps.get(&i).copied(),
            CrossingClass::Between(i, j) => self.pair_caps.get(&(i, j)).copied(),
        }
    }

    fn check(&self, d: &LinkDiagram) -> Result<(), SearchError> {
        let n = d.component_count();
        let comps = self
            .pair_caps
            .keys()
            .flat_map(|&(i, j)| [i, j])
            .chain(self.self_caps.keys().copied());
        for i in comps {
            if i == 0 || i > n {
                return Err(SearchError::BadCap(i));
            }
        }
        Ok(())
    }

    fn admits(&self, d: &LinkDiagram, set: &[usize]) -> bool {
        if self.pair_caps.is_empty() && self.self_caps.is_empty() {
            return true;
        }
        let mut used: BTreeMap<CrossingClass, usize> = BTreeMap::new();
        for &id in set {
            let class = d.crossing_class(&d.crossings()[id - 1]);
            let u = used.entry(class).or_default();
            *u += 1;
            if self.cap(class).is_some_and(|c| *u > c) {
                return false;
            }
        }
        true
    }
}

/// Admissible subsets of one size, lexicographically.
fn level<'a>(
    d: &'a LinkDiagram,
    b: &'a SearchBudget,
    size: usize,
) -> impl Iterator<Item = Vec<usize>> + 'a {
    (1..=d.crossings().len())
        .combinations(size)
        .filter(move |s| b.admits(d, s))
}

fn max_size(d: &LinkDiagram, b: &SearchBudget) -> usize {
    b.max_changes.min(d.crossings().len())
}

/// Every admissible subset of crossing ids, by size then lexicographically.
pub fn enumerate_change_sets<'a>(
    d: &'a LinkDiagram,
    b: &'a SearchBudget,
) -> impl Iterator<Item = BTreeSet<usize>> + 'a {
    (0..=max_size(d, b)).flat_map(move |s| level(d, b, s).map(|v| v.into_iter().collect()))
}

fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Number of subsets [`enumerate_change_sets`] yields, from the class sizes
/// alone: the coefficients up to `x^max` of the product over crossing
/// classes of the capped binomial polynomials.
pub fn subset_count(d: &LinkDiagram, b: &SearchBudget) -> u128 {
    let mut sizes: BTreeMap<CrossingClass, usize> = BTreeMap::new();
    for c in d.crossings() {
        *sizes.entry(d.crossing_class(c)).or_default() += 1;
    }
    let top = max_size(d, b);
    let mut poly = vec![0u128; top + 1];
    poly[0] = 1;
    for (class, n) in sizes {
        let cap = b.cap(class).unwrap_or(n).min(n);
        let mut next = vec![0u128; top + 1];
        for (deg, &coef) in poly.iter().enumerate() {
            for j in 0..=cap.min(top - deg) {
                next[deg + j] += coef * binomial(n, j);
            }
        }
        poly = next;
    }
    poly.iter().sum()
}

/// What a candidate achieves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Summary {
    pub mu_vanish: bool,
    pub v2: Vec<i64>,
}

impl Summary {
    /// Passes every necessary condition for C_k-triviality checked here.
    pub fn is_trivial(&self, k: usize) -> bool {
        self.mu_vanish && (k < 3 || self.v2.iter().all(|&v| v == 0))
    }
}

/// Applies `changes` and measures the result at length `k`.
pub fn evaluate(
    d: &LinkDiagram,
    changes: &BTreeSet<usize>,
    k: usize,
    opts: &MilnorOptions,
) -> Result<Summary, SearchError> {
    let changed = d.apply_changes(changes)?;
    let mu_vanish = if k >= 2 {
        milnor_table::<i64>(&changed, k, opts)?.all_vanish()
    } else {
        true
    };
    let v2 = (1..=changed.component_count())
        .map(|i| v2(&changed, i))
        .collect::<Result<_, _>>()?;
    Ok(Summary { mu_vanish, v2 })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub changes: BTreeSet<usize>,
    pub summary: Summary,
}

#[derive(Debug, Clone)]
pub struct SearchReport {
    pub k: usize,
    pub max_changes: usize,
    /// Every admissible subset within the budget was evaluated.
    pub exhausted: bool,
    pub min_witness_size: Option<usize>,
    pub witnesses: Vec<Witness>,
    pub examined: u64,
    pub wall_time: Duration,
}

impl SearchReport {
    /// Everything except the wall time; equal across worker counts.
    pub fn outcome(&self) -> (bool, Option<usize>, &[Witness], u64) {
        (
            self.exhausted,
            self.min_witness_size,
            &self.witnesses,
            self.examined,
        )
    }

    /// JSON form; `ms` is the wall time when `timing` is set and 0 otherwise,
    /// so untimed output is reproducible byte for byte.
    pub fn to_json(&self, timing: bool) -> Value {
        let witnesses: Vec<Value> = self
            .witnesses
            .iter()
            .map(|w| json!({ "changes": w.changes, "v2": w.summary.v2 }))
            .collect();
        let ms = if timing {
            self.wall_time.as_millis() as u64
        } else {
            0
        };
        json!({
            "k": self.k,
            "max_changes": self.max_changes,
            "certificate": "necessary-condition trivial",
            "exhausted": self.exhausted,
            "min_witness_size": self.min_witness_size,
            "witnesses": witnesses,
            "examined": self.examined,
            "ms": ms,
        })
    }
}

/// Worker count and Milnor settings for a search.
#[derive(Debug, Clone, Default)]
pub struct SearchOptions {
    /// Threads in the pool; rayon's default when `None`.
    pub workers: Option<usize>,
    pub milnor: MilnorOptions,
}

/// Searches level by level and stops after the first level that holds a
/// witness, keeping up to [`WITNESS_CAP`] witnesses of that size.
pub fn find_witness(
    d: &LinkDiagram,
    b: &SearchBudget,
    opts: &SearchOptions,
) -> Result<SearchReport, SearchError> {
    b.check(d)?;
    let start = Instant::now();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = opts.workers {
        builder = builder.num_threads(w.max(1));
    }
    let pool = builder.build().map_err(|e| SearchError::Pool(e.to_string()))?;
    let top = max_size(d, b);
    let mut examined = 0u64;
    let mut witnesses = Vec::new();
    let mut found_at = None;
    for size in 0..=top {
        let mut candidates = level(d, b, size).peekable();
        while candidates.peek().is_some() {
            let chunk: Vec<BTreeSet<usize>> = candidates
                .by_ref()
                .take(CHUNK)
                .map(|v| v.into_iter().collect())
                .collect();
            examined += chunk.len() as u64;
            let results: Vec<Result<Summary, SearchError>> = pool.install(|| {
                chunk
                    .par_iter()
                    .map(|s| evaluate(d, s, b.k, &opts.milnor))
                    .collect()
            });
            for (set, r) in chunk.into_iter().zip(results) {
                let summary = r?;
                if summary.is_trivial(b.k) && witnesses.len() < WITNESS_CAP {
                    witnesses.push(Witness {
                        changes: set,
                        summary,
                    });
                }
            }
        }
        if !witnesses.is_empty() {
            found_at = Some(size);
            break;
        }
    }
    Ok(SearchReport {
        k: b.k,
        max_changes: b.max_changes,
        exhausted: found_at.is_none() || found_at == Some(top),
        min_witness_size: found_at,
        witnesses,
        examined,
        wall_time: start.elapsed(),
    })
}

/// Smallest witness with at most `max_budget` changes at length `k`.
pub fn min_witness_size(
    d: &LinkDiagram,
    k: usize,
    max_budget: usize,
    opts: &SearchOptions,
) -> Result<SearchReport, SearchError> {
    find_witness(d, &SearchBudget::new(max_budget, k), opts)
}

/// For a two-component link with `lk = 0`: the change in `mu_1122` caused by
/// each single self-crossing change, in crossing order.
pub fn jin_delta_scan(
    d: &LinkDiagram,
    opts: &MilnorOptions,
) -> Result<Vec<(usize, i64)>, SearchError> {
    let n = d.component_count();
    if n != 2 {
        return Err(SearchError::WrongComponentCount(n));
    }
    let lk = linking_matrix(d)?.get(1, 2);
    if lk != 0 {
        return Err(SearchError::NonzeroLinking(lk));
    }
    let mu = |x: &LinkDiagram| -> Result<i64, SearchError> {
        let t = milnor_table::<i64>(x, 4, opts)?;
        Ok(t.get(&[1, 1, 2, 2]).expect("length 4 entry").mu)
    };
    let base = mu(d)?;
    let mut out = Vec::new();
    for c in d.crossings() {
        if matches!(d.crossing_class(c), CrossingClass::SelfCrossing(_)) {
            let flipped = d.apply_changes(&BTreeSet::from([c.id]))?;
            out.push((c.id, mu(&flipped)? - base));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;

    fn hopf() -> LinkDiagram {
        parse_pd("X(1,3,2,4)\nX(3,1,4,2)").unwrap()
    }

    fn sets(d: &LinkDiagram, b: &SearchBudget) -> Vec<Vec<usize>> {
        enumerate_change_sets(d, b)
            .map(|s| s.into_iter().collect())
            .collect()
    }

    #[test]
    fn budget_zero_is_empty_set_only() {
        assert_eq!(sets(&hopf(), &SearchBudget::new(0, 2)), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn hopf_budget_one() {
        assert_eq!(
            sets(&hopf(), &SearchBudget::new(1, 2)),
            vec![vec![], vec![1], vec![2]]
        );
        assert_eq!(subset_count(&hopf(), &SearchBudget::new(1, 2)), 3);
        assert_eq!(subset_count(&hopf(), &SearchBudget::new(5, 2)), 4);
    }

    #[test]
    fn self_caps_filter() {
        let trefoil = parse_pd("X(1,5,2,4)\nX(3,1,4,6)\nX(5,3,6,2)").unwrap();
        let b = SearchBudget::new(3, 3).with_self_cap(1, 1);
        let all = sets(&trefoil, &b);
        assert!(all.iter().all(|s| s.len() <= 1));
        assert_eq!(all.len() as u128, subset_count(&trefoil, &b));
    }

    #[test]
    fn hopf_search() {
        let r = find_witness(&hopf(), &SearchBudget::new(1, 2), &SearchOptions::default()).unwrap();
        assert_eq!(r.min_witness_size, Some(1));
        assert_eq!(r.witnesses.len(), 2);
        assert!(r.exhausted);
        assert_eq!(r.examined, 3);
    }

    #[test]
    fn unlink_search() {
        let r = min_witness_size(&LinkDiagram::unlink(3), 4, 2, &SearchOptions::default()).unwrap();
        assert_eq!(r.min_witness_size, Some(0));
        assert_eq!(r.examined, 1);
    }

    #[test]
    fn jin_errors() {
        let o = MilnorOptions::default();
        assert_eq!(jin_delta_scan(&LinkDiagram::unlink(2), &o), Ok(vec![]));
        assert_eq!(
            jin_delta_scan(&LinkDiagram::unlink(3), &o),
            Err(SearchError::WrongComponentCount(3))
        );
        assert_eq!(jin_delta_scan(&hopf(), &o), Err(SearchError::NonzeroLinking(1)));
    }

    #[test]
    fn bad_cap_component() {
        let b = SearchBudget::new(1, 2).with_self_cap(5, 1);
        assert_eq!(
            find_witness(&hopf(), &b, &SearchOptions::default()).unwrap_err(),
            SearchError::BadCap(5)
        );
    }
}
