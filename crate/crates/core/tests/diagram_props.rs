mod common;

use std::collections::{BTreeSet, HashMap};

use common::{catalog, link};
use linkforge::{parse_pd, LinkDiagram};
use proptest::prelude::*;

fn catalog_index() -> impl Strategy<Value = usize> {
    0..catalog().len()
}

fn subset_of(d: &LinkDiagram, mask: &[bool]) -> BTreeSet<usize> {
    (1..=d.crossings().len())
        .filter(|&id| mask[(id - 1) % mask.len()])
        .collect()
}

/// PD text with every label of component `i` shifted `r` steps along it.
fn rotated_labels(d: &LinkDiagram, shifts: &[usize]) -> String {
    let mut map: HashMap<i64, i64> = HashMap::new();
    for i in 1..=d.component_count() {
        let edges = d.component_edges(i).unwrap();
        let m = edges.len();
        for (j, &e) in edges.iter().enumerate() {
            let r = shifts[(i - 1) % shifts.len()];
            map.insert(e as i64, edges[(j + r) % m.max(1)] as i64);
        }
    }
    let mut code = d.to_pd_code();
    for x in &mut code.crossings {
        for e in x.iter_mut() {
            *e = map[e];
        }
    }
    code.to_string()
}

#[test]
fn catalog_diagrams_validate() {
    for (name, d) in catalog() {
        assert!(d.validate().is_empty(), "{name}: {:?}", d.validate());
    }
}

#[test]
fn catalog_diagrams_are_planar() {
    for (name, d) in catalog() {
        let f = d.faces();
        assert!(f.is_planar(), "{name}");
        // Euler: V - E + F = 2 per piece, with E = 2V
        let v = d.crossings().len();
        if v > 0 && d.unknot_count() == 0 {
            assert!(f.face_count() >= v + 2, "{name}");
        }
    }
}

#[test]
fn trefoil_signs_and_writhe() {
    let d = parse_pd("X(1,5,2,4)\nX(3,1,4,6)\nX(5,3,6,2)").unwrap();
    assert_eq!(d.self_writhe(1).unwrap(), 3);
    assert_eq!(d.mirror().self_writhe(1).unwrap(), -3);
}

#[test]
fn round_trip_is_exact_on_catalog() {
    for (name, d) in catalog() {
        let back = parse_pd(&d.serialize()).unwrap();
        assert_eq!(back.serialize(), d.serialize(), "{name}");
        assert_eq!(back.component_count(), d.component_count(), "{name}");
    }
}

#[test]
fn sublink_of_borromean_pair_is_unlink() {
    let d = link("borromean");
    let s = d.sublink(&[1, 2]).unwrap();
    assert_eq!(s.component_count(), 2);
    assert_eq!(common::half_sum_lk(&s, 1, 2), 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn changes_are_involutive(idx in catalog_index(), mask in prop::collection::vec(any::<bool>(), 1..16)) {
        let (_, d) = &catalog()[idx];
        let s = subset_of(d, &mask);
        let twice = d.apply_changes(&s).unwrap().apply_changes(&s).unwrap();
        prop_assert_eq!(&twice, d);
    }

    #[test]
    fn changes_flip_exactly_the_chosen_signs(idx in catalog_index(), mask in prop::collection::vec(any::<bool>(), 1..16)) {
        let (_, d) = &catalog()[idx];
        let s = subset_of(d, &mask);
        let c = d.apply_changes(&s).unwrap();
        for id in 1..=d.crossings().len() {
            let expect = if s.contains(&id) { -d.crossing_sign(id).unwrap() } else { d.crossing_sign(id).unwrap() };
            prop_assert_eq!(c.crossing_sign(id).unwrap(), expect);
        }
    }

    #[test]
    fn round_trip_after_changes(idx in catalog_index(), mask in prop::collection::vec(any::<bool>(), 1..16)) {
        let (_, d) = &catalog()[idx];
        let c = d.apply_changes(&subset_of(d, &mask)).unwrap();
        let back = parse_pd(&c.serialize()).unwrap();
        prop_assert_eq!(back.component_count(), c.component_count());
        let signs = |x: &LinkDiagram| x.crossings().iter().map(|k| k.sign).collect::<Vec<_>>();
        prop_assert_eq!(signs(&back), signs(&c));
        prop_assert_eq!(back.serialize(), c.serialize());
    }

    #[test]
    fn signs_survive_cyclic_relabelling(idx in catalog_index(), shifts in prop::collection::vec(0usize..64, 1..4)) {
        let (_, d) = &catalog()[idx];
        let moved = parse_pd(&rotated_labels(d, &shifts)).unwrap();
        prop_assert_eq!(moved.crossings().len(), d.crossings().len());
        for id in 1..=d.crossings().len() {
            prop_assert_eq!(moved.crossing_sign(id).unwrap(), d.crossing_sign(id).unwrap());
        }
    }
}
