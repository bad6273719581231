use std::time::Duration;

use quadfree::bounds::reiman_bound;
use quadfree::canon::canonical_graph;
use quadfree::graph6;
use quadfree::search::{
    brute_force_oracle, enumerate_extremal, max_edges_c4free, SearchConfig, DEFAULT_BUDGET,
};
use quadfree::{extremal_witness, Graph};

fn run(n: usize, workers: usize) -> quadfree::SearchResult {
    let mut cfg = SearchConfig::new(n);
    cfg.workers = workers;
    max_edges_c4free(&cfg).unwrap()
}

#[test]
fn matches_oracle_up_to_seven() {
    for n in 1..=7 {
        assert_eq!(run(n, 1).ex, brute_force_oracle(n).unwrap(), "n={n}");
    }
}

#[test]
fn values_are_monotone_and_below_reiman() {
    let values: Vec<u64> = (1..=16).map(|n| run(n, 1).ex).collect();
    for (i, w) in values.windows(2).enumerate() {
        assert!(w[0] <= w[1], "ex({}) > ex({})", i + 1, i + 2);
    }
    for (i, &v) in values.iter().enumerate() {
        assert!(v <= reiman_bound(i as u64 + 1));
    }
    assert_eq!(values[11], 21);
}

#[test]
fn worker_count_does_not_change_the_answer() {
    for n in [9, 12, 15] {
        let (a, b) = (run(n, 1), run(n, 4));
        assert_eq!(
            (a.ex, a.optimal, a.certified_by),
            (b.ex, b.optimal, b.certified_by),
            "n={n}"
        );
        assert!(b.witness.is_c4_free());
    }
}

#[test]
fn single_worker_is_deterministic() {
    let (a, b) = (run(13, 1), run(13, 1));
    assert_eq!(graph6::encode(&a.witness), graph6::encode(&b.witness));
    assert_eq!(a.nodes, b.nodes);
}

#[test]
fn extremal_lists_agree_across_workers() {
    let a = enumerate_extremal(10, 16, DEFAULT_BUDGET, 1).unwrap();
    let b = enumerate_extremal(10, 16, DEFAULT_BUDGET, 3).unwrap();
    let enc = |gs: &[Graph]| gs.iter().map(graph6::encode).collect::<Vec<_>>();
    assert_eq!(enc(&a), enc(&b));
}

#[test]
fn six_vertex_extremal_graphs() {
    let all = enumerate_extremal(6, 7, DEFAULT_BUDGET, 1).unwrap();
    assert!(all.len() >= 2);
    let witness = canonical_graph(&extremal_witness(2, true).unwrap()).unwrap();
    assert!(all.contains(&witness));
    for g in &all {
        assert!(g.is_c4_free() && g.edge_count() == 7);
    }
}

#[test]
fn all_extremal_flag_fills_the_list() {
    let mut cfg = SearchConfig::new(8);
    cfg.all_extremal = true;
    let r = max_edges_c4free(&cfg).unwrap();
    let list = r.extremal.unwrap();
    assert!(!list.is_empty());
    assert!(list.iter().all(|g| g.edge_count() as u64 == r.ex));
}

#[test]
fn twenty_vertex_extremal_graph_is_unique() {
    let all = enumerate_extremal(20, 46, Duration::from_secs(600), 2).unwrap();
    assert_eq!(all.len(), 1);
    let witness = canonical_graph(&extremal_witness(4, true).unwrap()).unwrap();
    assert_eq!(all[0], witness);
}
