//! Independent reference computations used by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use linkforge::diagram::CrossingClass;
use linkforge::{catalog_link, CatalogSpec, LinkDiagram};

pub fn link(spec: &str) -> LinkDiagram {
    catalog_link(&spec.parse::<CatalogSpec>().unwrap()).unwrap()
}

pub fn catalog() -> Vec<(String, LinkDiagram)> {
    CatalogSpec::examples()
        .into_iter()
        .map(|s| (s.to_string(), catalog_link(&s).unwrap()))
        .collect()
}

/// Half the signed count of crossings between components `i` and `j`.
pub fn half_sum_lk(d: &LinkDiagram, i: usize, j: usize) -> i64 {
    let twice: i64 = d
        .crossings()
        .iter()
        .filter(|c| {
            let (a, b) = d.strand_components(c);
            (a, b) == (i, j) || (a, b) == (j, i)
        })
        .map(|c| c.sign as i64)
        .sum();
    assert_eq!(twice % 2, 0, "odd crossing count between {i} and {j}");
    twice / 2
}

pub fn mod8_brute(r: i64) -> bool {
    let r = r.rem_euclid(8);
    (0..8i64).any(|a| (0..8i64).any(|b| (a * a + b * b) % 8 == r || (a * a - b * b).rem_euclid(8) == r))
}

/// Free-group word: letter `g + 1` or `-(g + 1)` for generator `g`.
pub type Word = Vec<i32>;

pub fn reduce(w: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

pub fn invert(w: &[i32]) -> Word {
    w.iter().rev().map(|x| -x).collect()
}

pub fn concat(parts: &[&[i32]]) -> Word {
    reduce(&parts.concat())
}

/// Sparse truncated power series in non-commuting `X_g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sparse {
    pub degree: usize,
    pub terms: BTreeMap<Vec<u8>, i64>,
}

impl Sparse {
    pub fn one(degree: usize) -> Self {
        Sparse {
            degree,
            terms: BTreeMap::from([(Vec::new(), 1)]),
        }
    }

    pub fn mul(&self, rhs: &Sparse) -> Sparse {
        let mut terms = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                if a.len() + b.len() <= self.degree {
                    let mut w = a.clone();
                    w.extend_from_slice(b);
                    *terms.entry(w).or_insert(0) += x * y;
                }
            }
        }
        terms.retain(|_, v| *v != 0);
        Sparse {
            degree: self.degree,
            terms,
        }
    }

    /// Right multiplication by `(1 + X_g)` or its inverse `sum (-X_g)^j`.
    fn times_letter(&self, letter: i32) -> Sparse {
        let g = (letter.unsigned_abs() - 1) as u8;
        let mut terms = BTreeMap::new();
        for (w, &c) in &self.terms {
            let mut run = w.clone();
            let mut coef = c;
            *terms.entry(run.clone()).or_insert(0) += coef;
            while run.len() < self.degree {
                run.push(g);
                if letter < 0 {
                    coef = -coef;
                }
                *terms.entry(run.clone()).or_insert(0) += coef;
                if letter > 0 {
                    break;
                }
            }
        }
        terms.retain(|_, v| *v != 0);
        Sparse {
            degree: self.degree,
            terms,
        }
    }

    pub fn of_word(w: &[i32], degree: usize) -> Sparse {
        w.iter()
            .fold(Sparse::one(degree), |acc, &x| acc.times_letter(x))
    }

    pub fn coeff(&self, word: &[usize]) -> i64 {
        let key: Vec<u8> = word.iter().map(|&g| g as u8).collect();
        self.terms.get(&key).copied().unwrap_or(0)
    }
}

/// Longitude words of every component, from iterating the Wirtinger
/// relations on free-group words instead of series.
pub fn longitude_words(d: &LinkDiagram, iterations: usize) -> Vec<Word> {
    let n = d.component_count();
    // crossing where each edge passes under, if any
    let mut under_at: HashMap<u32, usize> = HashMap::new();
    for (idx, c) in d.crossings().iter().enumerate() {
        under_at.insert(c.under_in(), idx);
    }
    let mut arc_of: HashMap<u32, usize> = HashMap::new();
    let mut arc_comp: Vec<usize> = Vec::new();
    for i in 1..=n {
        let edges = d.component_edges(i).unwrap();
        if edges.is_empty() {
            continue;
        }
        let first = arc_comp.len();
        arc_comp.push(i);
        for (j, &e) in edges.iter().enumerate() {
            arc_of.insert(e, arc_comp.len() - 1);
            if under_at.contains_key(&e) && j + 1 < edges.len() {
                arc_comp.push(i);
            }
        }
        // the run after the last under-pass wraps onto the first arc
        if under_at.contains_key(edges.last().unwrap()) {
            continue;
        }
        let last = arc_comp.len() - 1;
        if last != first {
            for &e in edges {
                if arc_of[&e] == last {
                    arc_of.insert(e, first);
                }
            }
            arc_comp.pop();
        }
    }
    let mut words: Vec<Word> = arc_comp.iter().map(|&i| vec![i as i32]).collect();
    let passes = |i: usize| -> Vec<(usize, i8, u32)> {
        d.component_edges(i)
            .unwrap()
            .iter()
            .filter_map(|e| under_at.get(e))
            .map(|&c| {
                let x = &d.crossings()[c];
                (arc_of[&x.over_in()], x.sign, x.under_out())
            })
            .collect()
    };
    for _ in 0..iterations {
        let old = words.clone();
        for i in 1..=n {
            let edges = d.component_edges(i).unwrap();
            if edges.is_empty() {
                continue;
            }
            let home = arc_of[&edges[0]];
            let mut cur = old[home].clone();
            for (over, sign, out) in passes(i) {
                let target = arc_of[&out];
                if target == home {
                    break;
                }
                let p = if sign > 0 { old[over].clone() } else { invert(&old[over]) };
                cur = concat(&[&invert(&p), &cur, &p]);
                words[target] = cur.clone();
            }
        }
    }
    (1..=n)
        .map(|i| {
            let mut l: Word = Vec::new();
            for (over, sign, _) in passes(i) {
                let p = if sign > 0 { words[over].clone() } else { invert(&words[over]) };
                l = concat(&[&l, &p]);
            }
            let w = d.self_writhe(i).unwrap();
            let frame: Word = vec![if w > 0 { -(i as i32) } else { i as i32 }; w.unsigned_abs() as usize];
            concat(&[&l, &frame])
        })
        .collect()
}

/// Raw μ values of length `2..=k` read off the word longitudes.
pub fn word_milnor(d: &LinkDiagram, k: usize) -> BTreeMap<Vec<usize>, i64> {
    let n = d.component_count();
    let longitudes: Vec<Sparse> = longitude_words(d, k + 1)
        .iter()
        .map(|w| Sparse::of_word(w, k - 1))
        .collect();
    let mut out = BTreeMap::new();
    let mut seqs: Vec<Vec<usize>> = vec![vec![]];
    for len in 1..=k {
        seqs = seqs
            .into_iter()
            .flat_map(|s| {
                (1..=n).map(move |i| {
                    let mut t = s.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
        if len < 2 {
            continue;
        }
        for s in &seqs {
            let word: Vec<usize> = s[..len - 1].iter().map(|i| i - 1).collect();
            out.insert(s.clone(), longitudes[s[len - 1] - 1].coeff(&word));
        }
    }
    out
}

/// Laurent polynomial in `A`.
type Laurent = BTreeMap<i32, i64>;

fn add_term(p: &mut Laurent, e: i32, c: i64) {
    *p.entry(e).or_insert(0) += c;
    if p[&e] == 0 {
        p.remove(&e);
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Kauffman bracket of a PD code by the state sum, normalised so the
/// crossingless circle has bracket 1.
pub fn kauffman_bracket(pd: &[Vec<i64>], unknots: usize) -> Laurent {
    let labels: Vec<i64> = {
        let mut v: Vec<i64> = pd.iter().flatten().copied().collect();
        v.sort();
        v.dedup();
        v
    };
    let slot = |l: i64| labels.binary_search(&l).unwrap();
    let c = pd.len();
    let mut total = Laurent::new();
    for state in 0u64..(1u64 << c) {
        let mut parent: Vec<usize> = (0..labels.len()).collect();
        let mut a_count = 0i32;
        for (j, x) in pd.iter().enumerate() {
            let (p, q) = if state & (1 << j) == 0 {
                a_count += 1;
                ((x[0], x[1]), (x[2], x[3]))
            } else {
                ((x[0], x[3]), (x[1], x[2]))
            };
            for (u, v) in [p, q] {
                let (ru, rv) = (find(&mut parent, slot(u)), find(&mut parent, slot(v)));
                parent[ru] = rv;
            }
        }
        let loops = (0..labels.len())
            .filter(|&x| find(&mut parent, x) == x)
            .count()
            + unknots;
        let b_count = c as i32 - a_count;
        // (-A^2 - A^-2)^(loops - 1)
        let mut term = Laurent::from([(a_count - b_count, 1)]);
        for _ in 1..loops.max(1) {
            let mut next = Laurent::new();
            for (&e, &v) in &term {
                add_term(&mut next, e + 2, -v);
                add_term(&mut next, e - 2, -v);
            }
            term = next;
        }
        for (e, v) in term {
            add_term(&mut total, e, v);
        }
    }
    total
}

/// Jones polynomial of a knot as `exponent of t -> coefficient`.
pub fn jones(d: &LinkDiagram) -> BTreeMap<i32, i64> {
    assert_eq!(d.component_count(), 1);
    let pd = d.to_pd_code();
    let bracket = kauffman_bracket(&pd.crossings, pd.unknots);
    let w = d.self_writhe(1).unwrap() as i32;
    let sign = if w % 2 == 0 { 1 } else { -1 };
    let mut v = BTreeMap::new();
    for (e, c) in bracket {
        let a = e - 3 * w;
        assert_eq!(a % 4, 0, "exponent A^{a} is not a power of t");
        v.insert(-a / 4, sign * c);
    }
    v
}

/// Casson invariant of a knot: `-V''(1) / 6`.
pub fn v2_from_jones(d: &LinkDiagram) -> i64 {
    let second: i64 = jones(d)
        .iter()
        .map(|(&e, &c)| c * (e as i64) * (e as i64 - 1))
        .sum();
    assert_eq!(second % 6, 0);
    -second / 6
}

/// v2 of component `i` through the Jones polynomial of its sublink.
pub fn v2_oracle(d: &LinkDiagram, i: usize) -> i64 {
    let knot = d.sublink(&[i]).unwrap();
    if knot.crossings().is_empty() {
        return 0;
    }
    v2_from_jones(&knot)
}

pub fn is_self(d: &LinkDiagram, id: usize) -> bool {
    matches!(
        d.crossing_class(d.crossing(id).unwrap()),
        CrossingClass::SelfCrossing(_)
    )
}
