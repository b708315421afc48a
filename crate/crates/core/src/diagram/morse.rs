//! Building planar diagrams from a top-to-bottom sequence of cups, caps and
//! crossings. Strand positions are counted from the left, starting at 0.

use std::collections::HashMap;

use super::{DiagramError, LinkDiagram};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    Cup(usize),
    Cap(usize),
    Cross { at: usize, left_over: bool },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Port {
    // corners: 0 = NW, 1 = NE, 2 = SE, 3 = SW
    Corner(usize, u8),
    Bend(usize, u8),
}

impl Port {
    fn through(self) -> Port {
        match self {
            Port::Corner(c, k) => Port::Corner(c, (k + 2) % 4),
            Port::Bend(b, s) => Port::Bend(b, 1 - s),
        }
    }
}

/// Counterclockwise successor of a corner.
fn ccw(k: u8) -> u8 {
    match k {
        1 => 0,
        0 => 3,
        3 => 2,
        _ => 1,
    }
}

/// Orientation sign read off the picture: positive when the over-strand
/// direction turns counterclockwise into the under-strand direction.
fn geometric_sign(over_from: u8, under_from: u8) -> i8 {
    let v = |k: u8| -> (i32, i32) {
        match k {
            0 => (-1, 1),
            1 => (1, 1),
            2 => (1, -1),
            _ => (-1, -1),
        }
    };
    let dir = |from: u8| {
        let (a, b) = (v(from), v((from + 2) % 4));
        (b.0 - a.0, b.1 - a.1)
    };
    let (o, u) = (dir(over_from), dir(under_from));
    (o.0 * u.1 - o.1 * u.0).signum() as i8
}

/// Accumulates a plane diagram one horizontal slice at a time.
///
/// Each cup opens a new loop; components are numbered in the order their
/// first cup appears and are oriented leaving that cup along its right end.
#[derive(Debug, Clone, Default)]
pub struct PlanarBuilder {
    ops: Vec<Op>,
    width: usize,
    reversed: Vec<usize>,
}

impl PlanarBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Current number of open strands.
    pub fn width(&self) -> usize {
        self.width
    }

    /// A new arc whose two ends sit at positions `at` and `at + 1`.
    pub fn cup(&mut self, at: usize) -> &mut Self {
        assert!(at <= self.width, "cup at {at} beyond width {}", self.width);
        self.ops.push(Op::Cup(at));
        self.width += 2;
        self
    }

    /// Joins strands `at` and `at + 1`.
    pub fn cap(&mut self, at: usize) -> &mut Self {
        assert!(at + 1 < self.width, "cap at {at} beyond width {}", self.width);
        self.ops.push(Op::Cap(at));
        self.width -= 2;
        self
    }

    /// Crosses strands `at` and `at + 1`; `left_over` puts the strand coming
    /// from the upper left on top.
    pub fn cross(&mut self, at: usize, left_over: bool) -> &mut Self {
        assert!(at + 1 < self.width, "crossing at {at} beyond width {}", self.width);
        self.ops.push(Op::Cross { at, left_over });
        self
    }

    /// A Reidemeister-I curl on the strand at position `at`.
    pub fn kink(&mut self, at: usize, left_over: bool) -> &mut Self {
        self.cup(at + 1).cross(at, left_over).cap(at + 1)
    }

    /// Reverses the orientation of the component numbered `i` (1-based).
    pub fn reverse(&mut self, i: usize) -> &mut Self {
        self.reversed.push(i);
        self
    }

    pub fn build(&self) -> Result<LinkDiagram, DiagramError> {
        let mut link: HashMap<Port, Port> = HashMap::new();
        let mut join = |a: Port, b: Port| {
            link.insert(a, b);
            link.insert(b, a);
        };
        let mut open: Vec<Port> = Vec::new();
        let (mut bends, mut crossings) = (0usize, 0usize);
        let mut cups = Vec::new();
        let mut over_nw = Vec::new();
        for op in &self.ops {
            match *op {
                Op::Cup(i) => {
                    open.insert(i, Port::Bend(bends, 1));
                    open.insert(i, Port::Bend(bends, 0));
                    cups.push(bends);
                    bends += 1;
                }
                Op::Cap(i) => {
                    join(open[i], Port::Bend(bends, 0));
                    join(open[i + 1], Port::Bend(bends, 1));
                    open.drain(i..i + 2);
                    bends += 1;
                }
                Op::Cross { at, left_over } => {
                    let c = crossings;
                    crossings += 1;
                    join(open[at], Port::Corner(c, 0));
                    join(open[at + 1], Port::Corner(c, 1));
                    open[at] = Port::Corner(c, 3);
                    open[at + 1] = Port::Corner(c, 2);
                    over_nw.push(left_over);
                }
            }
        }
        if !open.is_empty() {
            return Err(DiagramError::BrokenTraversal(format!(
                "{} strands left open at the bottom",
                open.len()
            )));
        }

        // trace loops; each pass is (crossing, entry corner, exit corner)
        let mut done = vec![false; bends];
        let mut loops: Vec<Vec<(usize, u8, u8)>> = Vec::new();
        for &b in &cups {
            if done[b] {
                continue;
            }
            let start = Port::Bend(b, 1);
            let mut p = start;
            let mut passes = Vec::new();
            loop {
                let q = link[&p];
                match q {
                    Port::Corner(c, k) => passes.push((c, k, (k + 2) % 4)),
                    Port::Bend(x, _) => done[x] = true,
                }
                p = q.through();
                if p == start {
                    break;
                }
            }
            done[b] = true;
            loops.push(passes);
        }
        let mut unknots = 0;
        let mut label_at: HashMap<(usize, u8), u32> = HashMap::new();
        let mut incoming: HashMap<(usize, u8), bool> = HashMap::new();
        let mut next_label = 1u32;
        for (li, passes) in loops.iter_mut().enumerate() {
            if self.reversed.contains(&(li + 1)) {
                passes.reverse();
                for p in passes.iter_mut() {
                    *p = (p.0, p.2, p.1);
                }
            }
            if passes.is_empty() {
                unknots += 1;
                continue;
            }
            let n = passes.len();
            for j in 0..n {
                let (c, _, out) = passes[j];
                let (c2, inn, _) = passes[(j + 1) % n];
                let e = next_label + j as u32;
                label_at.insert((c, out), e);
                label_at.insert((c2, inn), e);
                incoming.insert((c2, inn), true);
                incoming.insert((c, out), false);
            }
            next_label += n as u32;
        }

        let mut tuples = Vec::with_capacity(crossings);
        let mut slots = Vec::with_capacity(crossings);
        let mut pictured = Vec::with_capacity(crossings);
        for (c, &lo) in over_nw.iter().enumerate() {
            let over = |k: u8| k.is_multiple_of(2) == lo;
            let under_in = (0..4u8)
                .find(|&k| !over(k) && incoming[&(c, k)])
                .expect("every crossing has an incoming under corner");
            let mut ks = [under_in; 4];
            for j in 1..4 {
                ks[j] = ccw(ks[j - 1]);
            }
            let slot = (1..4u8)
                .find(|&j| over(ks[j as usize]) && incoming[&(c, ks[j as usize])])
                .expect("every crossing has an incoming over corner");
            tuples.push(ks.map(|k| label_at[&(c, k)]));
            slots.push(slot);
            pictured.push(geometric_sign(ks[slot as usize], under_in));
        }
        let d = LinkDiagram::from_oriented(tuples, slots, unknots)?;
        debug_assert!(d.crossings().iter().zip(&pictured).all(|(c, &s)| c.sign == s));
        Ok(d)
    }
}
