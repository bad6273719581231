#![no_main]

use libfuzzer_sys::fuzz_target;
use quadfree::graph6;

// The bit-row 4-cycle check agrees with a plain common-neighbour scan, and
// the degree census balances.
fuzz_target!(|data: &[u8]| {
    let Ok(g) = graph6::decode(data) else { return };
    if g.n() > 300 {
        return;
    }
    let mut two_common = false;
    'scan: for u in 0..g.n() {
        for v in u + 1..g.n() {
            if g.common_neighbor_count(u, v).unwrap() >= 2 {
                two_common = true;
                break 'scan;
            }
        }
    }
    assert_eq!(g.is_c4_free(), !two_common);
    if let Some([u, a, v, b]) = g.c4_witness() {
        assert!(g.has_edge(u, a) && g.has_edge(a, v) && g.has_edge(v, b) && g.has_edge(b, u));
    }
    let q = (g.n() as f64).sqrt() as usize;
    assert!(g.degree_classes(q).is_consistent());
    if g.is_c4_free() {
        let n = g.n() as u64;
        assert!(g.count_2paths() <= n * n.saturating_sub(1) / 2);
    }
});
