//! Faces of the diagram's underlying 4-valent plane graph.

use std::collections::HashMap;

use super::LinkDiagram;

/// Face incidence of every edge, plus connected pieces of the crossing graph.
#[derive(Debug, Clone)]
pub struct FaceMap {
    left: HashMap<u32, usize>,
    right: HashMap<u32, usize>,
    piece: HashMap<u32, usize>,
    faces: usize,
    pieces: usize,
    vertices: usize,
}

impl FaceMap {
    /// Face to the left of edge `e`, seen along its orientation.
    pub fn left(&self, e: u32) -> usize {
        self.left[&e]
    }

    pub fn right(&self, e: u32) -> usize {
        self.right[&e]
    }

    pub fn piece_of(&self, e: u32) -> usize {
        self.piece[&e]
    }

    pub fn face_count(&self) -> usize {
        self.faces
    }

    /// Euler check: a planar 4-valent graph with V vertices in P pieces has
    /// V + 2P faces when each piece is counted on its own sphere.
    pub fn is_planar(&self) -> bool {
        self.faces == self.vertices + 2 * self.pieces
    }

    /// Edges bordering face `f`.
    pub fn boundary(&self, f: usize) -> Vec<u32> {
        let mut out: Vec<u32> = self
            .left
            .iter()
            .chain(self.right.iter())
            .filter(|(_, &g)| g == f)
            .map(|(&e, _)| e)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

impl LinkDiagram {
    pub fn faces(&self) -> FaceMap {
        let cs = self.crossings();
        // where each label occurs: (crossing, slot) pairs
        let mut occ: HashMap<u32, Vec<(usize, u8)>> = HashMap::new();
        for (ci, c) in cs.iter().enumerate() {
            for s in 0..4u8 {
                occ.entry(c.pd[s as usize]).or_default().push((ci, s));
            }
        }
        let other = |ci: usize, s: u8| -> (usize, u8) {
            let e = cs[ci].pd[s as usize];
            let v = &occ[&e];
            if v[0] == (ci, s) {
                v[1]
            } else {
                v[0]
            }
        };
        // a dart (c, s) leaves crossing c along slot s; turning to the
        // clockwise neighbour on arrival keeps the face on the left
        let mut dart_face: HashMap<(usize, u8), usize> = HashMap::new();
        let mut faces = 0;
        for ci in 0..cs.len() {
            for s in 0..4u8 {
                if dart_face.contains_key(&(ci, s)) {
                    continue;
                }
                let mut d = (ci, s);
                while dart_face.insert(d, faces).is_none() {
                    let (y, q) = other(d.0, d.1);
                    d = (y, (q + 3) % 4);
                }
                faces += 1;
            }
        }
        let mut left = HashMap::new();
        let mut right = HashMap::new();
        for e in occ.keys() {
            let (tc, ts) = self.tail(*e);
            let (hc, hs) = self.head(*e);
            left.insert(*e, dart_face[&(tc, ts)]);
            right.insert(*e, dart_face[&(hc, hs)]);
        }

        // connected pieces over crossings
        let mut comp_of: Vec<usize> = (0..cs.len()).collect();
        fn root(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for v in occ.values() {
            let (a, b) = (root(&mut comp_of, v[0].0), root(&mut comp_of, v[1].0));
            comp_of[a] = b;
        }
        let mut ids = HashMap::new();
        let mut piece = HashMap::new();
        for (e, v) in &occ {
            let r = root(&mut comp_of, v[0].0);
            let n = ids.len();
            piece.insert(*e, *ids.entry(r).or_insert(n));
        }
        FaceMap {
            left,
            right,
            piece,
            faces,
            pieces: ids.len(),
            vertices: cs.len(),
        }
    }
}
