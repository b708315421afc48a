//! Oriented link diagrams in PD notation.
//!
//! A crossing is a 4-tuple of edge labels listed counterclockwise, starting at
//! the incoming under-edge; the under-strand runs from slot 0 to slot 2. The
//! over-strand runs between slots 1 and 3 and its direction is recovered from
//! edge succession along its component. A crossing is positive when the
//! over-strand runs from slot 3 to slot 1, i.e. left to right as seen along
//! the under-strand.

mod faces;
mod morse;
mod pd;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

pub use faces::FaceMap;
pub use morse::PlanarBuilder;
pub use pd::{parse_pd, parse_pd_code, validate_pd, PdCode, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("crossing {crossing}: expected 4 edge labels, found {arity}")]
    MalformedTuple { crossing: usize, arity: usize },
    #[error("crossing {crossing}: edge label {label} is not a positive integer")]
    BadLabel { crossing: usize, label: i64 },
    #[error("edge {label} is used {count} times, expected exactly 2")]
    DuplicateEdgeUse { label: i64, count: usize },
    #[error("edges do not close up into oriented cycles: {0}")]
    BrokenTraversal(String),
    #[error("no crossing with id {0}")]
    UnknownCrossing(usize),
    #[error("no component with index {0}")]
    UnknownComponent(usize),
    #[error("no edge labelled {0}")]
    UnknownEdge(u32),
    #[error("edges {0} and {1} do not share a face with matching orientation")]
    IncompatibleBand(u32, u32),
    #[error("unsupported catalog spec: {0}")]
    UnsupportedSpec(String),
}

/// One crossing of an oriented diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crossing {
    /// 1-based position in the crossing list.
    pub id: usize,
    /// Edge labels counterclockwise from the incoming under-edge.
    pub pd: [u32; 4],
    over_in_slot: u8,
    pub sign: i8,
}

impl Crossing {
    fn new(id: usize, pd: [u32; 4], over_in_slot: u8) -> Self {
        debug_assert!(over_in_slot == 1 || over_in_slot == 3);
        let sign = if over_in_slot == 3 { 1 } else { -1 };
        Crossing {
            id,
            pd,
            over_in_slot,
            sign,
        }
    }

    pub fn under_in(&self) -> u32 {
        self.pd[0]
    }

    pub fn under_out(&self) -> u32 {
        self.pd[2]
    }

    pub fn over_in(&self) -> u32 {
        self.pd[self.over_in_slot as usize]
    }

    pub fn over_out(&self) -> u32 {
        self.pd[4 - self.over_in_slot as usize]
    }

    fn is_incoming_slot(&self, slot: u8) -> bool {
        slot == 0 || slot == self.over_in_slot
    }

    /// The same crossing with over and under exchanged.
    pub fn flipped(&self) -> Crossing {
        let s = self.over_in_slot as usize;
        let pd = [
            self.pd[s],
            self.pd[(s + 1) % 4],
            self.pd[(s + 2) % 4],
            self.pd[(s + 3) % 4],
        ];
        // the old under-in edge now sits at slot (4 - s) and runs over
        Crossing::new(self.id, pd, (4 - s) as u8)
    }
}

/// A validated, oriented link diagram.
///
/// Components with crossings are ordered by their lowest edge label;
/// zero-crossing components follow them.
#[derive(Clone, PartialEq, Eq)]
pub struct LinkDiagram {
    crossings: Vec<Crossing>,
    components: Vec<Vec<u32>>,
    unknots: usize,
    edge_comp: HashMap<u32, usize>,
    heads: HashMap<u32, (usize, u8)>,
    tails: HashMap<u32, (usize, u8)>,
}

impl fmt::Debug for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LinkDiagram")
            .field("crossings", &self.crossings)
            .field("components", &self.components)
            .field("unknots", &self.unknots)
            .finish()
    }
}

/// Which components the two strands of a crossing belong to (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CrossingClass {
    SelfCrossing(usize),
    Between(usize, usize),
}

impl LinkDiagram {
    /// The n-component unlink with no crossings.
    pub fn unlink(n: usize) -> Self {
        LinkDiagram {
            crossings: Vec::new(),
            components: Vec::new(),
            unknots: n,
            edge_comp: HashMap::new(),
            heads: HashMap::new(),
            tails: HashMap::new(),
        }
    }

    /// Assembles a diagram from tuples whose over-strand directions are known.
    /// Labels are kept as given; each component must be numbered consecutively
    /// along its orientation.
    pub(crate) fn from_oriented(
        tuples: Vec<[u32; 4]>,
        over_slots: Vec<u8>,
        unknots: usize,
    ) -> Result<Self, DiagramError> {
        let crossings: Vec<Crossing> = tuples
            .into_iter()
            .zip(over_slots)
            .enumerate()
            .map(|(i, (pd, s))| Crossing::new(i + 1, pd, s))
            .collect();
        let (heads, tails) = endpoints(&crossings)?;
        let components = trace_components(&crossings, &heads)?;
        for comp in &components {
            let lo = comp[0];
            for (j, &e) in comp.iter().enumerate() {
                if e != lo + j as u32 {
                    return Err(DiagramError::BrokenTraversal(format!(
                        "component starting at edge {lo} is not labelled consecutively (found {e} at step {j})"
                    )));
                }
            }
        }
        let mut edge_comp = HashMap::new();
        for (ci, comp) in components.iter().enumerate() {
            for &e in comp {
                edge_comp.insert(e, ci);
            }
        }
        Ok(LinkDiagram {
            crossings,
            components,
            unknots,
            edge_comp,
            heads,
            tails,
        })
    }

    /// Relabels edges 1.. consecutively along each component and rebuilds.
    /// Components are ordered, and each starts, by the smallest `key` of its
    /// edges.
    pub(crate) fn normalized<K>(
        tuples: Vec<[u32; 4]>,
        over_slots: Vec<u8>,
        unknots: usize,
        key: K,
    ) -> Result<Self, DiagramError>
    where
        K: Fn(u32) -> u32,
    {
        let crossings: Vec<Crossing> = tuples
            .iter()
            .zip(&over_slots)
            .enumerate()
            .map(|(i, (pd, &s))| Crossing::new(i + 1, *pd, s))
            .collect();
        let (heads, _) = endpoints(&crossings)?;
        let mut comps = trace_components(&crossings, &heads)?;
        for comp in comps.iter_mut() {
            let start = (0..comp.len()).min_by_key(|&j| key(comp[j])).unwrap_or(0);
            comp.rotate_left(start);
        }
        comps.sort_by_key(|c| key(c[0]));
        let mut relabel = HashMap::new();
        let mut next = 1u32;
        for comp in &comps {
            for &e in comp {
                relabel.insert(e, next);
                next += 1;
            }
        }
        let tuples = tuples
            .into_iter()
            .map(|t| t.map(|e| relabel[&e]))
            .collect();
        Self::from_oriented(tuples, over_slots, unknots)
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing(&self, id: usize) -> Result<&Crossing, DiagramError> {
        id.checked_sub(1)
            .and_then(|i| self.crossings.get(i))
            .ok_or(DiagramError::UnknownCrossing(id))
    }

    /// Total number of components, including zero-crossing ones.
    pub fn component_count(&self) -> usize {
        self.components.len() + self.unknots
    }

    /// Number of zero-crossing components.
    pub fn unknot_count(&self) -> usize {
        self.unknots
    }

    /// Edge sequence of component `i` (1-based); empty for unknots.
    pub fn component_edges(&self, i: usize) -> Result<&[u32], DiagramError> {
        if i == 0 || i > self.component_count() {
            return Err(DiagramError::UnknownComponent(i));
        }
        Ok(self
            .components
            .get(i - 1)
            .map(|c| c.as_slice())
            .unwrap_or(&[]))
    }

    /// 1-based component of an edge.
    pub fn component_of_edge(&self, e: u32) -> Result<usize, DiagramError> {
        self.edge_comp
            .get(&e)
            .map(|c| c + 1)
            .ok_or(DiagramError::UnknownEdge(e))
    }

    pub fn edge_count(&self) -> usize {
        self.edge_comp.len()
    }

    pub fn max_label(&self) -> u32 {
        self.edge_comp.keys().copied().max().unwrap_or(0)
    }

    /// Crossing index (0-based) and slot where edge `e` ends.
    pub(crate) fn head(&self, e: u32) -> (usize, u8) {
        self.heads[&e]
    }

    /// Crossing index (0-based) and slot where edge `e` starts.
    pub(crate) fn tail(&self, e: u32) -> (usize, u8) {
        self.tails[&e]
    }

    /// Edge following `e` along its component.
    pub fn next_edge(&self, e: u32) -> Result<u32, DiagramError> {
        let &(c, slot) = self.heads.get(&e).ok_or(DiagramError::UnknownEdge(e))?;
        Ok(self.crossings[c].pd[(slot as usize + 2) % 4])
    }

    pub fn crossing_class(&self, c: &Crossing) -> CrossingClass {
        let a = self.edge_comp[&c.under_in()] + 1;
        let b = self.edge_comp[&c.over_in()] + 1;
        if a == b {
            CrossingClass::SelfCrossing(a)
        } else {
            CrossingClass::Between(a.min(b), a.max(b))
        }
    }

    /// Component (1-based) of the under strand and of the over strand.
    pub fn strand_components(&self, c: &Crossing) -> (usize, usize) {
        (
            self.edge_comp[&c.under_in()] + 1,
            self.edge_comp[&c.over_in()] + 1,
        )
    }

    pub fn crossing_sign(&self, id: usize) -> Result<i8, DiagramError> {
        Ok(self.crossing(id)?.sign)
    }

    /// Sum of signs over crossings with both strands on component `i`.
    pub fn self_writhe(&self, i: usize) -> Result<i64, DiagramError> {
        self.component_edges(i)?;
        Ok(self
            .crossings
            .iter()
            .filter(|c| self.crossing_class(c) == CrossingClass::SelfCrossing(i))
            .map(|c| c.sign as i64)
            .sum())
    }

    /// Flips every listed crossing; the input is left untouched.
    pub fn apply_changes(&self, ids: &BTreeSet<usize>) -> Result<LinkDiagram, DiagramError> {
        for &id in ids {
            self.crossing(id)?;
        }
        let mut out = self.clone();
        for &id in ids {
            let flipped = out.crossings[id - 1].flipped();
            out.crossings[id - 1] = flipped;
        }
        // over/under slots moved, so endpoints must be recomputed
        let (heads, tails) = endpoints(&out.crossings)?;
        out.heads = heads;
        out.tails = tails;
        Ok(out)
    }

    /// Mirror image: every crossing flipped.
    pub fn mirror(&self) -> LinkDiagram {
        let all = (1..=self.crossings.len()).collect();
        self.apply_changes(&all).expect("all ids exist")
    }

    pub fn to_pd_code(&self) -> PdCode {
        PdCode {
            crossings: self
                .crossings
                .iter()
                .map(|c| c.pd.iter().map(|&e| e as i64).collect())
                .collect(),
            unknots: self.unknots,
        }
    }

    /// PD text, one statement per line.
    pub fn serialize(&self) -> String {
        self.to_pd_code().to_string()
    }

    /// Re-checks every diagram invariant; empty when the diagram is sound.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = validate_pd(&self.to_pd_code());
        if out.is_empty() {
            match parse_pd(&self.serialize()) {
                Ok(d) if d == *self => {}
                Ok(_) => out.push(Violation::BrokenTraversal(
                    "stored orientation disagrees with edge succession".into(),
                )),
                Err(e) => out.push(Violation::BrokenTraversal(e.to_string())),
            }
        }
        out
    }

    fn parts(&self) -> (Vec<[u32; 4]>, Vec<u8>) {
        (
            self.crossings.iter().map(|c| c.pd).collect(),
            self.crossings.iter().map(|c| c.over_in_slot).collect(),
        )
    }

    /// Places `other` beside `self`; its components come after the crossing
    /// components of `self`.
    pub fn disjoint_union(&self, other: &LinkDiagram) -> LinkDiagram {
        let shift = self.max_label();
        let (mut tuples, mut slots) = self.parts();
        let (t2, s2) = other.parts();
        tuples.extend(t2.into_iter().map(|t| t.map(|e| e + shift)));
        slots.extend(s2);
        Self::from_oriented(tuples, slots, self.unknots + other.unknots)
            .expect("union of valid diagrams is valid")
    }

    /// Reverses the orientation of component `i` (1-based).
    pub fn reverse_component(&self, i: usize) -> Result<LinkDiagram, DiagramError> {
        self.component_edges(i)?;
        if i > self.components.len() {
            return Ok(self.clone());
        }
        let comp = i - 1;
        let (mut tuples, mut slots) = self.parts();
        for (t, s) in tuples.iter_mut().zip(slots.iter_mut()) {
            let under_here = self.edge_comp[&t[0]] == comp;
            let over_here = self.edge_comp[&t[*s as usize]] == comp;
            if under_here {
                *t = [t[2], t[3], t[0], t[1]];
                *s = 4 - *s;
            }
            if over_here {
                *s = 4 - *s;
            }
        }
        Self::normalized(tuples, slots, self.unknots, |e| e)
    }

    /// Band sum joining edges `e` and `f` by an untwisted band with no new
    /// crossings: the strand leaving along `e` continues into the end of `f`
    /// and vice versa. The edges must lie in different split pieces or border
    /// a common face on the same side.
    pub fn band_sum(&self, e: u32, f: u32) -> Result<LinkDiagram, DiagramError> {
        for x in [e, f] {
            if !self.edge_comp.contains_key(&x) {
                return Err(DiagramError::UnknownEdge(x));
            }
        }
        if e == f {
            return Err(DiagramError::IncompatibleBand(e, f));
        }
        let faces = self.faces();
        let same_piece = faces.piece_of(e) == faces.piece_of(f);
        let same_side =
            faces.left(e) == faces.left(f) || faces.right(e) == faces.right(f);
        if same_piece && !same_side {
            return Err(DiagramError::IncompatibleBand(e, f));
        }
        let (mut tuples, slots) = self.parts();
        let fresh_e = self.max_label() + 1;
        let fresh_f = fresh_e + 1;
        let (te, tse) = self.tail(e);
        let (he, hse) = self.head(e);
        let (tf, tsf) = self.tail(f);
        let (hf, hsf) = self.head(f);
        tuples[te][tse as usize] = fresh_e;
        tuples[hf][hsf as usize] = fresh_e;
        tuples[tf][tsf as usize] = fresh_f;
        tuples[he][hse as usize] = fresh_f;
        let key = |x: u32| {
            if x == fresh_e {
                e
            } else if x == fresh_f {
                f
            } else {
                x
            }
        };
        let out = Self::normalized(tuples, slots, self.unknots, key)?;
        debug_assert!(out.faces().is_planar());
        Ok(out)
    }

    /// Connected sum of component `i` of `self` with component `j` of `other`.
    pub fn connected_sum(
        &self,
        i: usize,
        other: &LinkDiagram,
        j: usize,
    ) -> Result<LinkDiagram, DiagramError> {
        let mine = self.component_edges(i)?;
        let theirs = other.component_edges(j)?;
        if mine.is_empty() {
            return Err(DiagramError::UnsupportedSpec(format!(
                "connected sum into zero-crossing component {i}"
            )));
        }
        if theirs.is_empty() {
            // summing with a round unknot changes nothing
            let mut out = self.disjoint_union(other);
            out.unknots -= 1;
            return Ok(out);
        }
        let e = mine[0];
        let f = theirs[0] + self.max_label();
        self.disjoint_union(other).band_sum(e, f)
    }

    /// The sublink on the listed components (1-based, any order). Kept
    /// components retain their relative order; ones left without crossings
    /// become zero-crossing components at the end.
    pub fn sublink(&self, keep: &[usize]) -> Result<LinkDiagram, DiagramError> {
        for &i in keep {
            self.component_edges(i)?;
        }
        let kept: BTreeSet<usize> = keep.iter().map(|i| i - 1).collect();
        let kept_unknots = kept
            .iter()
            .filter(|&&c| c >= self.components.len())
            .count();
        // union-find over edges: a kept strand crossing a dropped one runs
        // straight through
        let mut parent: HashMap<u32, u32> = self.edge_comp.keys().map(|&e| (e, e)).collect();
        fn find(parent: &mut HashMap<u32, u32>, x: u32) -> u32 {
            let p = parent[&x];
            if p == x {
                return x;
            }
            let r = find(parent, p);
            parent.insert(x, r);
            r
        }
        let mut tuples = Vec::new();
        let mut slots = Vec::new();
        for c in &self.crossings {
            let (u, o) = self.strand_components(c);
            let (ku, ko) = (kept.contains(&(u - 1)), kept.contains(&(o - 1)));
            match (ku, ko) {
                (true, true) => {
                    tuples.push(c.pd);
                    slots.push(c.over_in_slot);
                }
                (true, false) => {
                    let (a, b) = (find(&mut parent, c.under_in()), find(&mut parent, c.under_out()));
                    parent.insert(b, a);
                }
                (false, true) => {
                    let (a, b) = (find(&mut parent, c.over_in()), find(&mut parent, c.over_out()));
                    parent.insert(b, a);
                }
                (false, false) => {}
            }
        }
        let tuples: Vec<[u32; 4]> = tuples
            .into_iter()
            .map(|t| t.map(|e| find(&mut parent, e)))
            .collect();
        let present: BTreeSet<usize> = tuples
            .iter()
            .flat_map(|t| t.iter().map(|e| self.edge_comp[e]))
            .collect();
        let emptied = kept
            .iter()
            .filter(|&&c| c < self.components.len() && !present.contains(&c))
            .count();
        Self::normalized(tuples, slots, kept_unknots + emptied, |e| e)
    }
}

/// Locates the head (incoming) and tail (outgoing) slot of every edge.
#[allow(clippy::type_complexity)]
fn endpoints(
    crossings: &[Crossing],
) -> Result<(HashMap<u32, (usize, u8)>, HashMap<u32, (usize, u8)>), DiagramError> {
    let mut heads = HashMap::new();
    let mut tails = HashMap::new();
    for (ci, c) in crossings.iter().enumerate() {
        for slot in 0..4u8 {
            let e = c.pd[slot as usize];
            let map = if c.is_incoming_slot(slot) {
                &mut heads
            } else {
                &mut tails
            };
            if map.insert(e, (ci, slot)).is_some() {
                return Err(DiagramError::BrokenTraversal(format!(
                    "edge {e} enters or leaves crossings twice"
                )));
            }
        }
    }
    for e in heads.keys() {
        if !tails.contains_key(e) {
            return Err(DiagramError::BrokenTraversal(format!("edge {e} never leaves a crossing")));
        }
    }
    for e in tails.keys() {
        if !heads.contains_key(e) {
            return Err(DiagramError::BrokenTraversal(format!("edge {e} never enters a crossing")));
        }
    }
    Ok((heads, tails))
}

/// Cycles of edges, each started at its smallest label, ordered by it.
fn trace_components(
    crossings: &[Crossing],
    heads: &HashMap<u32, (usize, u8)>,
) -> Result<Vec<Vec<u32>>, DiagramError> {
    let mut labels: Vec<u32> = heads.keys().copied().collect();
    labels.sort_unstable();
    let mut seen = std::collections::HashSet::new();
    let mut comps = Vec::new();
    for &start in &labels {
        if seen.contains(&start) {
            continue;
        }
        let mut comp = Vec::new();
        let mut e = start;
        loop {
            if !seen.insert(e) {
                return Err(DiagramError::BrokenTraversal(format!("edge {e} reached twice")));
            }
            comp.push(e);
            let (c, slot) = heads[&e];
            e = crossings[c].pd[(slot as usize + 2) % 4];
            if e == start {
                break;
            }
        }
        let lo = comp.iter().position(|&x| x == *comp.iter().min().unwrap()).unwrap();
        comp.rotate_left(lo);
        comps.push(comp);
    }
    comps.sort_by_key(|c| c[0]);
    Ok(comps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hopf() -> LinkDiagram {
        parse_pd("X(1,3,2,4)\nX(3,1,4,2)").unwrap()
    }

    fn set(ids: &[usize]) -> BTreeSet<usize> {
        ids.iter().copied().collect()
    }

    #[test]
    fn hopf_signs_positive() {
        let d = hopf();
        assert_eq!(d.crossing_sign(1).unwrap(), 1);
        assert_eq!(d.crossing_sign(2).unwrap(), 1);
        assert_eq!(d.crossing_sign(3), Err(DiagramError::UnknownCrossing(3)));
        assert_eq!(d.self_writhe(1).unwrap(), 0);
        assert_eq!(d.self_writhe(2).unwrap(), 0);
    }

    #[test]
    fn flip_negates_sign_and_is_involutive() {
        let d = hopf();
        let c = d.crossing(1).unwrap();
        let f = c.flipped();
        assert_eq!(f.sign, -c.sign);
        assert_eq!(f.flipped(), *c);
        assert_eq!(f.over_in(), c.under_in());
        assert_eq!(f.under_in(), c.over_in());
    }

    #[test]
    fn apply_changes_basics() {
        let d = hopf();
        assert_eq!(d.apply_changes(&set(&[])).unwrap(), d);
        let once = d.apply_changes(&set(&[1])).unwrap();
        assert_eq!(once.crossing_sign(1).unwrap(), -1);
        let inter: i64 = once.crossings().iter().map(|c| c.sign as i64).sum();
        assert_eq!(inter, 0);
        assert_eq!(once.apply_changes(&set(&[1])).unwrap(), d);
        assert_eq!(
            d.apply_changes(&set(&[7])),
            Err(DiagramError::UnknownCrossing(7))
        );
    }

    #[test]
    fn unknown_component() {
        let d = hopf();
        assert_eq!(d.self_writhe(3), Err(DiagramError::UnknownComponent(3)));
        assert_eq!(d.self_writhe(0), Err(DiagramError::UnknownComponent(0)));
    }

    #[test]
    fn unlink_components() {
        let d = LinkDiagram::unlink(3);
        assert_eq!(d.component_count(), 3);
        assert_eq!(d.self_writhe(2).unwrap(), 0);
        assert!(d.validate().is_empty());
    }

    #[test]
    fn reverse_component_keeps_self_signs() {
        let d = parse_pd("X(1,5,2,4)\nX(3,1,4,6)\nX(5,3,6,2)").unwrap();
        let r = d.reverse_component(1).unwrap();
        assert_eq!(r.self_writhe(1).unwrap(), d.self_writhe(1).unwrap());
        assert!(r.validate().is_empty());
    }

    #[test]
    fn reversing_one_hopf_component_negates_both_signs() {
        let r = hopf().reverse_component(2).unwrap();
        assert!(r.crossings().iter().all(|c| c.sign == -1));
        assert_eq!(r.reverse_component(2).unwrap(), hopf());
    }

    #[test]
    fn sublink_of_hopf_is_unknot() {
        let s = hopf().sublink(&[2]).unwrap();
        assert_eq!(s.component_count(), 1);
        assert_eq!(s.crossings().len(), 0);
    }
}
