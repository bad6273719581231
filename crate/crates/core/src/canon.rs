//! Canonical labelling of small graphs (`n <= 64`, one `u64` row per vertex).
//!
//! Equitable partition refinement plus individualisation, exploring the
//! search tree and keeping the lexicographically largest relabelled
//! adjacency matrix. Automorphisms found at equal leaves prune siblings that
//! lie in the same orbit of the pointwise stabiliser of the current path.

use crate::graph::Graph;

/// A canonical labelling: `order[i]` is the vertex placed at position `i`,
/// and `form` is the adjacency matrix in that order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canonical {
    pub order: Vec<usize>,
    pub form: Vec<u64>,
}

#[inline]
fn bits(mut w: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if w == 0 {
            None
        } else {
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(b)
        }
    })
}

/// Relabels `rows` so that vertex `order[i]` becomes `i`.
pub fn relabel(rows: &[u64], order: &[usize]) -> Vec<u64> {
    let mut pos = [0u8; 64];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i as u8;
    }
    order
        .iter()
        .map(|&v| bits(rows[v]).fold(0u64, |acc, u| acc | 1 << pos[u]))
        .collect()
}

struct Labeller<'a> {
    rows: &'a [u64],
    first: Option<Canonical>,
    best: Option<Canonical>,
    generators: Vec<Vec<usize>>,
}

impl Labeller<'_> {
    /// Splits cells by neighbour counts into every cell until stable.
    /// Subcells are ordered by their count signature, so the result depends
    /// only on the graph and the input partition, never on vertex names.
    fn refine(&self, cells: &mut Vec<u64>) {
        loop {
            let mut next = Vec::with_capacity(self.rows.len());
            let mut split = false;
            for &cell in cells.iter() {
                if cell.count_ones() == 1 {
                    next.push(cell);
                    continue;
                }
                let mut keyed: Vec<(Vec<u8>, usize)> = bits(cell)
                    .map(|v| {
                        let sig = cells
                            .iter()
                            .map(|&c| (self.rows[v] & c).count_ones() as u8)
                            .collect();
                        (sig, v)
                    })
                    .collect();
                keyed.sort_unstable();
                let mut mask = 0u64;
                for i in 0..keyed.len() {
                    mask |= 1 << keyed[i].1;
                    if i + 1 == keyed.len() || keyed[i + 1].0 != keyed[i].0 {
                        next.push(mask);
                        split |= mask != cell;
                        mask = 0;
                    }
                }
            }
            *cells = next;
            if !split {
                break;
            }
        }
    }

    fn leaf(&mut self, cells: &[u64]) {
        let order: Vec<usize> = cells.iter().map(|c| c.trailing_zeros() as usize).collect();
        let form = relabel(self.rows, &order);
        let leaf = Canonical { order, form };
        match &self.first {
            None => {
                self.first = Some(leaf.clone());
                self.best = Some(leaf);
                return;
            }
            Some(first) if first.form == leaf.form => {
                self.generators
                    .push(automorphism(&first.order, &leaf.order));
                return;
            }
            _ => {}
        }
        let best = self.best.as_ref().expect("set with first");
        if leaf.form == best.form {
            self.generators.push(automorphism(&best.order, &leaf.order));
        } else if leaf.form > best.form {
            self.best = Some(leaf);
        }
    }

    fn visit(&mut self, mut cells: Vec<u64>, path: &mut Vec<usize>) {
        self.refine(&mut cells);
        let target = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.count_ones() > 1)
            .min_by_key(|(i, c)| (c.count_ones(), *i))
            .map(|(i, _)| i);
        let Some(target) = target else {
            self.leaf(&cells);
            return;
        };
        let cell = cells[target];
        let n = self.rows.len();
        let mut orbit: Vec<usize> = (0..n).collect();
        let mut applied = 0;
        let mut explored: Vec<usize> = Vec::new();
        for v in bits(cell) {
            // merge orbits of any newly found automorphisms fixing the path
            while applied < self.generators.len() {
                let g = &self.generators[applied];
                applied += 1;
                if path.iter().all(|&p| g[p] == p) {
                    for (x, &y) in g.iter().enumerate() {
                        union(&mut orbit, x, y);
                    }
                }
            }
            let root = find(&mut orbit, v);
            if explored.iter().any(|&w| find(&mut orbit, w) == root) {
                continue;
            }
            explored.push(v);
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..target]);
            child.push(1 << v);
            child.push(cell & !(1 << v));
            child.extend_from_slice(&cells[target + 1..]);
            path.push(v);
            self.visit(child, path);
            path.pop();
        }
    }
}

/// The permutation sending `from[i]` to `to[i]`.
fn automorphism(from: &[usize], to: &[usize]) -> Vec<usize> {
    let mut g = vec![0; from.len()];
    for (&a, &b) in from.iter().zip(to) {
        g[a] = b;
    }
    g
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

/// Canonical labelling of the graph given by single-word rows.
pub fn canonical_form(rows: &[u64]) -> Canonical {
    let n = rows.len();
    assert!(n <= 64, "canonical labelling supports at most 64 vertices");
    if n == 0 {
        return Canonical {
            order: Vec::new(),
            form: Vec::new(),
        };
    }
    let mut labeller = Labeller {
        rows,
        first: None,
        best: None,
        generators: Vec::new(),
    };
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    labeller.visit(vec![all], &mut Vec::new());
    labeller.best.expect("at least one leaf")
}

/// The canonically relabelled copy of `g`; `None` above 64 vertices.
pub fn canonical_graph(g: &Graph) -> Option<Graph> {
    let rows = g.small_rows()?;
    Some(Graph::from_small_rows(&canonical_form(&rows).form))
}

pub fn is_isomorphic(a: &Graph, b: &Graph) -> Option<bool> {
    if a.n() != b.n() || a.edge_count() != b.edge_count() {
        return Some(false);
    }
    Some(canonical_graph(a)? == canonical_graph(b)?)
}
