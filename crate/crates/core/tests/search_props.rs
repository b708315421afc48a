mod common;

use common::{is_self, link};
use linkforge::milnor::MilnorOptions;
use linkforge::search::*;
use linkforge::LinkDiagram;
use proptest::prelude::*;

fn opts(workers: usize) -> SearchOptions {
    SearchOptions {
        workers: Some(workers),
        milnor: MilnorOptions::default(),
    }
}

fn small_links() -> Vec<(&'static str, LinkDiagram)> {
    ["hopf(+)", "hopf4(-)", "whitehead", "borromean", "trefoil", "figure8"]
        .into_iter()
        .map(|s| (s, link(s)))
        .collect()
}

#[test]
fn hopf_needs_one_change() {
    let r = min_witness_size(&link("hopf(+)"), 4, 3, &opts(2)).unwrap();
    assert_eq!(r.min_witness_size, Some(1));
    // the search stops after the size-1 level: the empty set and two singletons
    assert_eq!(r.examined, 3);
    assert!(!r.exhausted);
    let ids: Vec<Vec<usize>> = r.witnesses.iter().map(|w| w.changes.iter().copied().collect()).collect();
    assert_eq!(ids, vec![vec![1], vec![2]]);
}

#[test]
fn borromean_levels() {
    let d = link("borromean");
    assert_eq!(min_witness_size(&d, 2, 2, &opts(2)).unwrap().min_witness_size, Some(0));
    assert_eq!(min_witness_size(&d, 3, 2, &opts(2)).unwrap().min_witness_size, Some(2));
}

#[test]
fn deterministic_across_worker_counts() {
    for (name, d) in small_links() {
        for k in [2, 3, 4] {
            let a = min_witness_size(&d, k, 2, &opts(1)).unwrap();
            let b = min_witness_size(&d, k, 2, &opts(8)).unwrap();
            assert_eq!(a.outcome(), b.outcome(), "{name} k={k}");
            assert_eq!(a.to_json(false), b.to_json(false), "{name} k={k}");
        }
    }
}

#[test]
fn witnesses_reevaluate_to_their_summaries() {
    for (name, d) in small_links() {
        for k in [2, 3, 4] {
            let r = min_witness_size(&d, k, 3, &opts(4)).unwrap();
            for w in &r.witnesses {
                let again = evaluate(&d, &w.changes, k, &MilnorOptions::default()).unwrap();
                assert_eq!(again, w.summary, "{name} k={k}");
                assert!(again.is_trivial(k));
            }
        }
    }
}

#[test]
fn min_size_is_monotone() {
    for (name, d) in small_links() {
        for k in [2, 3, 4] {
            let mut prev: Option<usize> = None;
            for budget in 0..=3 {
                let m = min_witness_size(&d, k, budget, &opts(4)).unwrap().min_witness_size;
                if let (Some(p), Some(now)) = (prev, m) {
                    assert!(now <= p, "{name} k={k} budget={budget}");
                }
                if prev.is_some() {
                    assert!(m.is_some(), "{name} k={k} witness lost at budget {budget}");
                }
                prev = m;
            }
        }
        for k in [2, 3] {
            let lo = min_witness_size(&d, k, 3, &opts(4)).unwrap().min_witness_size;
            let hi = min_witness_size(&d, k + 1, 3, &opts(4)).unwrap().min_witness_size;
            if let Some(h) = hi {
                assert!(lo.is_some_and(|l| l <= h), "{name} k={k}");
            }
        }
    }
}

#[test]
fn exhaustive_count_matches_closed_form() {
    let d = link("fig5a(m=6,k1=trefoil,k2=trefoil)");
    let b = SearchBudget::new(2, 4);
    let r = find_witness(&d, &b, &opts(8)).unwrap();
    assert!(r.min_witness_size.is_none());
    assert!(r.exhausted);
    let c = d.crossings().len() as u128;
    assert_eq!(subset_count(&d, &b), 1 + c + c * (c - 1) / 2);
    assert_eq!(r.examined as u128, subset_count(&d, &b));
}

#[test]
fn jin_scan_reports_only_squares() {
    for spec in ["whitehead", "whitehead-kinked", "fig5a(m=6,k1=trefoil,k2=trefoil)"] {
        let d = link(spec);
        let scan = jin_delta_scan(&d, &MilnorOptions::default()).unwrap();
        assert_eq!(scan.len(), (1..=d.crossings().len()).filter(|&i| is_self(&d, i)).count());
        for (id, delta) in scan {
            let r = (delta.abs() as f64).sqrt().round() as i64;
            assert_eq!(r * r, delta.abs(), "{spec} crossing {id}");
        }
    }
}

fn capped_budget() -> impl Strategy<Value = (usize, usize, usize, usize)> {
    (0usize..=4, 0usize..=3, 0usize..=3, 0usize..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumeration_matches_closed_form((max, pair, s1, s2) in capped_budget(), which in 0usize..3) {
        let spec = ["whitehead", "borromean", "fig5a(m=1,k1=trefoil,k2=unknot)"][which];
        let d = link(spec);
        let b = SearchBudget::new(max, 4)
            .with_pair_cap(1, 2, pair)
            .with_self_cap(1, s1)
            .with_self_cap(2, s2);
        let listed: Vec<_> = enumerate_change_sets(&d, &b).collect();
        prop_assert_eq!(listed.len() as u128, subset_count(&d, &b));
        let mut sorted = listed.clone();
        sorted.sort_by(|a, b| a.len().cmp(&b.len()).then(a.iter().cmp(b.iter())));
        prop_assert_eq!(sorted, listed);
    }
}
