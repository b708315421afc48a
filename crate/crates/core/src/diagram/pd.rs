//! PD text format and raw-code validation.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::{DiagramError, LinkDiagram};

/// Unvalidated PD data exactly as written.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PdCode {
    pub crossings: Vec<Vec<i64>>,
    pub unknots: usize,
}

impl fmt::Display for PdCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.crossings {
            let body: Vec<String> = t.iter().map(|e| e.to_string()).collect();
            writeln!(f, "X({})", body.join(","))?;
        }
        if self.unknots > 0 {
            writeln!(f, "unknots={}", self.unknots)?;
        }
        Ok(())
    }
}

/// A broken diagram invariant together with the offending element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    MalformedTuple { crossing: usize, arity: usize },
    BadLabel { crossing: usize, label: i64 },
    DuplicateEdgeUse { label: i64, count: usize },
    BrokenTraversal(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MalformedTuple { crossing, arity } => {
                write!(f, "MalformedTuple: crossing {crossing} has {arity} labels")
            }
            Violation::BadLabel { crossing, label } => {
                write!(f, "BadLabel: crossing {crossing} uses label {label}")
            }
            Violation::DuplicateEdgeUse { label, count } => {
                write!(f, "DuplicateEdgeUse: edge {label} used {count} times")
            }
            Violation::BrokenTraversal(msg) => write!(f, "BrokenTraversal: {msg}"),
        }
    }
}

impl From<Violation> for DiagramError {
    fn from(v: Violation) -> Self {
        match v {
            Violation::MalformedTuple { crossing, arity } => {
                DiagramError::MalformedTuple { crossing, arity }
            }
            Violation::BadLabel { crossing, label } => DiagramError::BadLabel { crossing, label },
            Violation::DuplicateEdgeUse { label, count } => {
                DiagramError::DuplicateEdgeUse { label, count }
            }
            Violation::BrokenTraversal(msg) => DiagramError::BrokenTraversal(msg),
        }
    }
}

/// Parses PD text into raw tuples without checking diagram invariants.
pub fn parse_pd_code(text: &str) -> Result<PdCode, DiagramError> {
    let mut code = PdCode::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let body = raw.split('#').next().unwrap_or("");
        let stmt: String = body.chars().filter(|c| !c.is_whitespace()).collect();
        if stmt.is_empty() {
            continue;
        }
        let syntax = |message: String| DiagramError::Syntax { line, message };
        if let Some(v) = stmt.strip_prefix("unknots=") {
            code.unknots = v
                .parse()
                .map_err(|_| syntax(format!("bad unknot count `{v}`")))?;
        } else if let Some(inner) = stmt.strip_prefix("X(").and_then(|s| s.strip_suffix(')')) {
            let labels = if inner.is_empty() {
                Vec::new()
            } else {
                inner
                    .split(',')
                    .map(|s| s.parse::<i64>().map_err(|_| syntax(format!("bad edge label `{s}`"))))
                    .collect::<Result<Vec<_>, _>>()?
            };
            code.crossings.push(labels);
        } else {
            return Err(syntax(format!("unrecognised statement `{stmt}`")));
        }
    }
    Ok(code)
}

/// Parses and validates PD text.
pub fn parse_pd(text: &str) -> Result<LinkDiagram, DiagramError> {
    LinkDiagram::try_from(&parse_pd_code(text)?)
}

/// All invariant violations of a raw code; empty iff it describes a diagram.
pub fn validate_pd(code: &PdCode) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
    for (i, t) in code.crossings.iter().enumerate() {
        if t.len() != 4 {
            out.push(Violation::MalformedTuple {
                crossing: i + 1,
                arity: t.len(),
            });
        }
        for &e in t {
            if e <= 0 || e > u32::MAX as i64 {
                out.push(Violation::BadLabel {
                    crossing: i + 1,
                    label: e,
                });
            }
            *counts.entry(e).or_default() += 1;
        }
    }
    for (&label, &count) in &counts {
        if count != 2 {
            out.push(Violation::DuplicateEdgeUse { label, count });
        }
    }
    if out.is_empty() {
        if let Err(msg) = orient(code).and_then(|(t, s)| {
            LinkDiagram::from_oriented(t, s, code.unknots).map_err(|e| e.to_string())
        }) {
            out.push(Violation::BrokenTraversal(msg));
        }
    }
    out
}

impl TryFrom<&PdCode> for LinkDiagram {
    type Error = DiagramError;

    fn try_from(code: &PdCode) -> Result<Self, DiagramError> {
        if let Some(v) = validate_pd(code).into_iter().next() {
            return Err(v.into());
        }
        let (tuples, slots) = orient(code).map_err(DiagramError::BrokenTraversal)?;
        LinkDiagram::from_oriented(tuples, slots, code.unknots)
    }
}

/// Recovers the incoming over-slot of each crossing from label succession.
/// Assumes arity and label multiplicities were already checked.
fn orient(code: &PdCode) -> Result<(Vec<[u32; 4]>, Vec<u8>), String> {
    let tuples: Vec<[u32; 4]> = code
        .crossings
        .iter()
        .map(|t| [t[0] as u32, t[1] as u32, t[2] as u32, t[3] as u32])
        .collect();

    // components as unions of the two strands at every crossing
    let mut parent: HashMap<u32, u32> = HashMap::new();
    fn find(p: &mut HashMap<u32, u32>, x: u32) -> u32 {
        let q = *p.entry(x).or_insert(x);
        if q == x {
            return x;
        }
        let r = find(p, q);
        p.insert(x, r);
        r
    }
    for t in &tuples {
        for (x, y) in [(t[0], t[2]), (t[1], t[3])] {
            let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
            parent.insert(rx, ry);
        }
    }
    let labels: Vec<u32> = parent.keys().copied().collect();
    let mut range: HashMap<u32, (u32, u32, usize)> = HashMap::new();
    for &e in &labels {
        let r = find(&mut parent, e);
        let entry = range.entry(r).or_insert((e, e, 0));
        entry.0 = entry.0.min(e);
        entry.1 = entry.1.max(e);
        entry.2 += 1;
    }
    for &(lo, hi, n) in range.values() {
        if (hi - lo + 1) as usize != n {
            return Err(format!(
                "component with edges {lo}..{hi} is not labelled consecutively"
            ));
        }
        if n == 1 {
            return Err(format!("edge {lo} closes up on itself through a single crossing"));
        }
    }
    let succ = |p: &mut HashMap<u32, u32>, e: u32| {
        let (lo, hi, _) = range[&find(p, e)];
        if e == hi {
            lo
        } else {
            e + 1
        }
    };

    let mut slots: Vec<Option<u8>> = vec![None; tuples.len()];
    for (i, t) in tuples.iter().enumerate() {
        if succ(&mut parent, t[0]) != t[2] {
            return Err(format!(
                "crossing {}: under-strand {} -> {} does not follow edge order",
                i + 1,
                t[0],
                t[2]
            ));
        }
        let fwd = succ(&mut parent, t[1]) == t[3];
        let bwd = succ(&mut parent, t[3]) == t[1];
        slots[i] = match (fwd, bwd) {
            (true, false) => Some(1),
            (false, true) => Some(3),
            (true, true) => None,
            (false, false) => {
                return Err(format!(
                    "crossing {}: over-strand {} / {} are not consecutive edges",
                    i + 1,
                    t[1],
                    t[3]
                ))
            }
        };
    }

    // Two-edge components: each of its two junctions is ambiguous on its own
    // but they must point opposite ways. Anchor on an under-passage if there
    // is one, otherwise on the first crossing in list order.
    let mut pending: BTreeMap<(u32, u32), Vec<usize>> = BTreeMap::new();
    for (i, t) in tuples.iter().enumerate() {
        if slots[i].is_none() {
            pending
                .entry((t[1].min(t[3]), t[1].max(t[3])))
                .or_default()
                .push(i);
        }
    }
    for ((p, q), xs) in pending {
        let under = tuples
            .iter()
            .position(|t| (t[0] == p && t[2] == q) || (t[0] == q && t[2] == p));
        // `p_into_q` is the crossing where edge p flows into edge q
        let (p_into_q, rest): (Option<usize>, Vec<usize>) = match under {
            Some(u) if tuples[u][0] == p => (None, xs),
            _ => (Some(xs[0]), xs[1..].to_vec()),
        };
        if let Some(c) = p_into_q {
            slots[c] = Some(if tuples[c][1] == p { 1 } else { 3 });
        }
        for c in rest {
            // at the remaining junction edge q flows into edge p
            slots[c] = Some(if tuples[c][1] == q { 1 } else { 3 });
        }
    }
    Ok((tuples, slots.into_iter().map(|s| s.expect("resolved")).collect()))
}
