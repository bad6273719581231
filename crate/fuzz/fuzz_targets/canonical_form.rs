#![no_main]

use libfuzzer_sys::fuzz_target;
use quadfree::canon::canonical_graph;
use quadfree::graph6;

// Canonical forms do not depend on vertex names. The trailing bytes after
// the first newline drive a relabelling.
fuzz_target!(|data: &[u8]| {
    let (record, rest) = match data.iter().position(|&b| b == b'\n') {
        Some(i) => (&data[..i], &data[i + 1..]),
        None => (data, &[][..]),
    };
    let Ok(g) = graph6::decode(record) else {
        return;
    };
    if g.n() > 64 {
        return;
    }
    let mut order: Vec<usize> = (0..g.n()).collect();
    for (i, &b) in rest.iter().enumerate() {
        if order.len() < 2 {
            break;
        }
        let j = i % order.len();
        let k = b as usize % order.len();
        order.swap(j, k);
    }
    let c = canonical_graph(&g).unwrap();
    assert_eq!(canonical_graph(&g.permuted(&order)).unwrap(), c);
    assert_eq!(c.edge_count(), g.edge_count());
});
