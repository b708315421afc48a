//! Milnor invariants from a Wirtinger presentation, and the degree-2 knot
//! invariant of each component.
//!
//! Each arc of the diagram gets a Magnus series. Walking a component, passing
//! under an arc with series `S` at a crossing of sign `e` conjugates the
//! current arc: `next = P^-1 cur P` with `P = S^e`. Iterating these
//! relations to a fixpoint in the truncated algebra gives the images of the
//! Milnor approximants of the arcs; the longitude of a component is the
//! product of the `P`s met along it, corrected by its self-writhe.

use std::collections::HashMap;

use serde_json::{json, Value};
use thiserror::Error;

use crate::diagram::{CrossingClass, DiagramError, LinkDiagram};
use crate::magnus::{check_capacity, MagnusError, MagnusSeries, DEFAULT_CAPACITY};
use crate::scalar::IntCoefficient;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MilnorError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Magnus(#[from] MagnusError),
    #[error("arc relations did not stabilise after {0} sweeps")]
    NoConvergence(usize),
    #[error("bad index sequence: {0}")]
    BadIndexSequence(String),
    #[error("basepoint edge {edge} does not lie on component {component}")]
    BadBasepoint { component: usize, edge: u32 },
}

impl MilnorError {
    pub fn is_capacity(&self) -> bool {
        matches!(self, MilnorError::Magnus(MagnusError::CapacityExceeded { .. }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MilnorOptions {
    /// Monomial ceiling for a single series.
    pub capacity: usize,
    /// Starting edge per component (1-based index into the vector); the
    /// lowest edge label when absent.
    pub basepoints: Option<Vec<u32>>,
}

impl Default for MilnorOptions {
    fn default() -> Self {
        MilnorOptions {
            capacity: DEFAULT_CAPACITY,
            basepoints: None,
        }
    }
}

impl MilnorOptions {
    pub fn with_capacity(capacity: usize) -> Self {
        MilnorOptions {
            capacity,
            basepoints: None,
        }
    }

    fn basepoint(&self, d: &LinkDiagram, i: usize) -> Result<Option<u32>, MilnorError> {
        let edges = d.component_edges(i)?;
        if edges.is_empty() {
            return Ok(None);
        }
        let chosen = self
            .basepoints
            .as_ref()
            .and_then(|b| b.get(i - 1).copied())
            .unwrap_or(edges[0]);
        if !edges.contains(&chosen) {
            return Err(MilnorError::BadBasepoint {
                component: i,
                edge: chosen,
            });
        }
        Ok(Some(chosen))
    }
}

/// One arc: a maximal run of edges between two under-passes.
#[derive(Clone, PartialEq)]
pub struct Arc<T> {
    pub component: usize,
    pub edges: Vec<u32>,
    pub series: MagnusSeries<T>,
}

impl<T: IntCoefficient> std::fmt::Debug for Arc<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Arc")
            .field("component", &self.component)
            .field("edges", &self.edges)
            .field("series", &self.series)
            .finish()
    }
}

/// Stable arc series for a diagram at a fixed truncation degree.
#[derive(Clone, PartialEq)]
pub struct ArcAssignment<T> {
    pub degree: usize,
    pub arcs: Vec<Arc<T>>,
    arc_of_edge: HashMap<u32, usize>,
    sweeps: usize,
}

impl<T: IntCoefficient> std::fmt::Debug for ArcAssignment<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ArcAssignment")
            .field("degree", &self.degree)
            .field("arcs", &self.arcs)
            .finish()
    }
}

impl<T: IntCoefficient> ArcAssignment<T> {
    pub fn arc_of_edge(&self, e: u32) -> Option<&Arc<T>> {
        self.arc_of_edge.get(&e).map(|&a| &self.arcs[a])
    }

    /// Sweeps needed before nothing changed (the last one included).
    pub fn sweeps(&self) -> usize {
        self.sweeps
    }
}

/// Component and edges of each run.
type Runs = Vec<(usize, Vec<u32>)>;

/// Edge runs between under-passes, walking each component from its first edge.
fn split_arcs(d: &LinkDiagram) -> (Runs, HashMap<u32, usize>) {
    let mut arcs: Vec<(usize, Vec<u32>)> = Vec::new();
    let mut arc_of_edge = HashMap::new();
    let ends_arc = |e: u32| d.head(e).1 == 0;
    for i in 1..=d.component_count() {
        let edges = d.component_edges(i).expect("valid index");
        if edges.is_empty() {
            continue;
        }
        // start right after an under-pass so no arc wraps around
        let start = (0..edges.len())
            .find(|&j| ends_arc(edges[(j + edges.len() - 1) % edges.len()]))
            .unwrap_or(0);
        let mut current: Vec<u32> = Vec::new();
        for step in 0..edges.len() {
            let e = edges[(start + step) % edges.len()];
            current.push(e);
            if ends_arc(e) {
                for &x in &current {
                    arc_of_edge.insert(x, arcs.len());
                }
                arcs.push((i, std::mem::take(&mut current)));
            }
        }
        if !current.is_empty() {
            for &x in &current {
                arc_of_edge.insert(x, arcs.len());
            }
            arcs.push((i, current));
        }
    }
    (arcs, arc_of_edge)
}

/// Under-passes met walking component `i` once from `basepoint`: for each,
/// (over-arc edge, crossing sign, outgoing under edge).
fn under_passes(d: &LinkDiagram, basepoint: u32) -> Vec<(u32, i8, u32)> {
    let mut out = Vec::new();
    let mut e = basepoint;
    loop {
        let (c, slot) = d.head(e);
        let x = &d.crossings()[c];
        if slot == 0 {
            out.push((x.over_in(), x.sign, x.under_out()));
        }
        e = d.next_edge(e).expect("edge exists");
        if e == basepoint {
            break;
        }
    }
    out
}

fn meridian<T: IntCoefficient>(n: usize, degree: usize, comp: usize) -> MagnusSeries<T> {
    MagnusSeries::generator(n, degree, comp - 1).expect("component within range")
}

/// Iterates the Wirtinger relations until a full sweep changes nothing.
pub fn arc_fixpoint<T: IntCoefficient>(
    d: &LinkDiagram,
    degree: usize,
    opts: &MilnorOptions,
) -> Result<ArcAssignment<T>, MilnorError> {
    let degree = degree.max(1);
    let n = d.component_count();
    check_capacity(n, degree, opts.capacity)?;
    let (runs, arc_of_edge) = split_arcs(d);
    let mut series: Vec<MagnusSeries<T>> = runs
        .iter()
        .map(|(c, _)| meridian(n, degree, *c))
        .collect();
    let mut walks = Vec::new();
    for i in 1..=n {
        if let Some(b) = opts.basepoint(d, i)? {
            walks.push((b, under_passes(d, b)));
        }
    }
    let limit = degree + 2;
    for sweep in 1..=limit {
        let snapshot = series.clone();
        let mut next = series.clone();
        for (b, passes) in &walks {
            let home = arc_of_edge[b];
            let mut cur = next[home].clone();
            for &(over, sign, out) in passes {
                let target = arc_of_edge[&out];
                if target == home {
                    break;
                }
                let s = &snapshot[arc_of_edge[&over]];
                let (p, p_inv) = if sign > 0 {
                    (s.clone(), s.inverse()?)
                } else {
                    (s.inverse()?, s.clone())
                };
                cur = cur.conjugate(&p, &p_inv)?;
                next[target] = cur.clone();
            }
        }
        if next == series {
            let arcs = runs
                .into_iter()
                .zip(series)
                .map(|((component, edges), series)| Arc {
                    component,
                    edges,
                    series,
                })
                .collect();
            return Ok(ArcAssignment {
                degree,
                arcs,
                arc_of_edge,
                sweeps: sweep,
            });
        }
        series = next;
    }
    Err(MilnorError::NoConvergence(limit))
}

/// Longitude of component `i`, framed so its `X_i` coefficient vanishes.
pub fn longitude_series<T: IntCoefficient>(
    d: &LinkDiagram,
    i: usize,
    assignment: &ArcAssignment<T>,
    opts: &MilnorOptions,
) -> Result<MagnusSeries<T>, MilnorError> {
    let n = d.component_count();
    let k = assignment.degree;
    let Some(b) = opts.basepoint(d, i)? else {
        return Ok(MagnusSeries::one(n, k));
    };
    let mut acc = MagnusSeries::one(n, k);
    for (over, sign, _) in under_passes(d, b) {
        let s = &assignment
            .arc_of_edge(over)
            .expect("every edge lies on an arc")
            .series;
        let p = if sign > 0 { s.clone() } else { s.inverse()? };
        acc = acc.mul(&p)?;
    }
    let writhe = d.self_writhe(i)?;
    let framing = meridian::<T>(n, k, i).pow(-writhe)?;
    Ok(acc.mul(&framing)?)
}

/// One μ entry; `mu` is a residue in `[0, delta)` when `delta > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MilnorEntry<T> {
    pub index: Vec<usize>,
    pub mu: T,
    pub delta: T,
}

/// All μ with index length `2..=k`, ordered by length then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MilnorTable<T> {
    pub k: usize,
    pub n: usize,
    pub entries: Vec<MilnorEntry<T>>,
}

fn json_int<T: IntCoefficient>(v: &T) -> Value {
    match v.to_i64() {
        Some(x) => json!(x),
        None => json!(v.to_string()),
    }
}

impl<T: IntCoefficient> MilnorTable<T> {
    pub fn get(&self, index: &[usize]) -> Option<&MilnorEntry<T>> {
        // entries are sorted by (len, lex)
        self.entries
            .binary_search_by(|e| {
                (e.index.len(), e.index.as_slice()).cmp(&(index.len(), index))
            })
            .ok()
            .map(|p| &self.entries[p])
    }

    /// True when every entry vanishes (modulo its indeterminacy).
    pub fn all_vanish(&self) -> bool {
        self.entries.iter().all(|e| e.mu.is_zero())
    }

    /// Entries of the shortest length carrying a nonzero value.
    pub fn first_nonvanishing(&self) -> Vec<&MilnorEntry<T>> {
        let Some(len) = self
            .entries
            .iter()
            .find(|e| !e.mu.is_zero())
            .map(|e| e.index.len())
        else {
            return Vec::new();
        };
        self.entries
            .iter()
            .filter(|e| e.index.len() == len)
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                json!({
                    "I": e.index,
                    "mu": json_int(&e.mu),
                    "delta": json_int(&e.delta),
                })
            })
            .collect();
        json!({ "k": self.k, "entries": entries })
    }
}

/// Every sequence over `1..=n` of the given length, lexicographically.
fn sequences(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|s| {
                (1..=n).map(move |i| {
                    let mut t = s.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

/// Sequences obtained by deleting at least one index and cyclically
/// permuting what is left, keeping length at least 2.
fn reduced_sequences(index: &[usize]) -> Vec<Vec<usize>> {
    let m = index.len();
    let mut out = Vec::new();
    for mask in 1..(1u32 << m) - 1 {
        let kept: Vec<usize> = (0..m)
            .filter(|&j| mask & (1 << j) == 0)
            .map(|j| index[j])
            .collect();
        if kept.len() < 2 {
            continue;
        }
        for r in 0..kept.len() {
            let mut rot = kept.clone();
            rot.rotate_left(r);
            out.push(rot);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// μ tables with the index length range checked against `n`.
pub fn milnor_table<T: IntCoefficient>(
    d: &LinkDiagram,
    k: usize,
    opts: &MilnorOptions,
) -> Result<MilnorTable<T>, MilnorError> {
    if k < 2 {
        return Err(MilnorError::BadIndexSequence(format!(
            "length {k} is below 2"
        )));
    }
    let n = d.component_count();
    let degree = k - 1;
    check_capacity(n, degree, opts.capacity)?;
    let assignment = arc_fixpoint::<T>(d, degree, opts)?;
    let longitudes = (1..=n)
        .map(|i| longitude_series(d, i, &assignment, opts))
        .collect::<Result<Vec<_>, _>>()?;
    let mut raw: HashMap<Vec<usize>, T> = HashMap::new();
    let mut entries = Vec::new();
    for len in 2..=k {
        for index in sequences(n, len) {
            let word: Vec<usize> = index[..len - 1].iter().map(|i| i - 1).collect();
            let value = longitudes[index[len - 1] - 1].coeff(&word)?;
            let delta = reduced_sequences(&index)
                .iter()
                .fold(T::zero(), |g, j| g.gcd(&raw[j]));
            let mu = if delta.is_zero() {
                value.clone()
            } else {
                value.mod_floor(&delta)
            };
            raw.insert(index.clone(), value);
            entries.push(MilnorEntry { index, mu, delta });
        }
    }
    Ok(MilnorTable { k, n, entries })
}

/// A single μ with its indeterminacy.
pub fn milnor_mu<T: IntCoefficient>(
    d: &LinkDiagram,
    index: &[usize],
    opts: &MilnorOptions,
) -> Result<(T, T), MilnorError> {
    let n = d.component_count();
    if index.len() < 2 {
        return Err(MilnorError::BadIndexSequence(format!(
            "{index:?} is shorter than 2"
        )));
    }
    if let Some(bad) = index.iter().find(|&&i| i == 0 || i > n) {
        return Err(MilnorError::BadIndexSequence(format!(
            "index {bad} outside 1..={n}"
        )));
    }
    let table = milnor_table::<T>(d, index.len(), opts)?;
    let e = table.get(index).expect("table covers every sequence");
    Ok((e.mu.clone(), e.delta.clone()))
}

/// Whether every μ of length `2..=k` vanishes.
pub fn mu_trivial_to_length(
    d: &LinkDiagram,
    k: usize,
    opts: &MilnorOptions,
) -> Result<bool, MilnorError> {
    Ok(milnor_table::<i64>(d, k, opts)?.all_vanish())
}

/// The degree-2 Vassiliev invariant of component `i` by the Gauss-diagram
/// formula on its self-crossings, other components ignored.
pub fn v2(d: &LinkDiagram, i: usize) -> Result<i64, MilnorError> {
    let edges = d.component_edges(i)?;
    // positions of over- and under-passes along the based Gauss code
    let mut over_at: HashMap<usize, usize> = HashMap::new();
    let mut under_at: HashMap<usize, usize> = HashMap::new();
    let mut pos = 0;
    for &e in edges {
        let (c, slot) = d.head(e);
        let x = &d.crossings()[c];
        if d.crossing_class(x) != CrossingClass::SelfCrossing(i) {
            continue;
        }
        if slot == 0 {
            under_at.insert(c, pos);
        } else {
            over_at.insert(c, pos);
        }
        pos += 1;
    }
    let ids: Vec<usize> = over_at.keys().copied().collect();
    let mut total = 0i64;
    for &a in &ids {
        let (oa, ua) = (over_at[&a], under_at[&a]);
        if oa > ua {
            continue;
        }
        for &b in &ids {
            let (ob, ub) = (over_at[&b], under_at[&b]);
            if oa < ub && ub < ua && ua < ob {
                let s = d.crossings()[a].sign as i64 * d.crossings()[b].sign as i64;
                total += s;
            }
        }
    }
    Ok(total)
}
