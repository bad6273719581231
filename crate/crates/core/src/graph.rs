//! Immutable simple graphs over packed bit rows.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge {0}-{1} listed twice")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("vertex {0} paired with itself")]
    SameVertex(usize),
    #[error("graph has no vertices")]
    EmptyGraph,
}

/// A simple undirected graph on vertices `0..n`.
///
/// Row `v` is a bitset of the neighbours of `v`, stored in `stride` words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    stride: usize,
    bits: Vec<u64>,
    edges: usize,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, e={}, ", self.n, self.edges)?;
        f.debug_list().entries(self.edges()).finish()?;
        write!(f, ")")
    }
}

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let stride = words_for(n);
        Graph {
            n,
            stride,
            bits: vec![0; n * stride],
            edges: 0,
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if g.has_edge(u, v) {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            g.set(u, v);
            g.set(v, u);
            g.edges += 1;
        }
        Ok(g)
    }

    /// Builds a graph from single-word rows (`n <= 64`). Rows must be
    /// symmetric, loop-free and zero above bit `n`.
    pub fn from_small_rows(rows: &[u64]) -> Self {
        let n = rows.len();
        assert!(n <= 64);
        let mut g = Graph::empty(n);
        let mut degree_sum = 0;
        for (v, &row) in rows.iter().enumerate() {
            debug_assert_eq!(row >> v & 1, 0);
            if n > 0 {
                g.bits[v] = row;
            }
            degree_sum += row.count_ones() as usize;
        }
        g.edges = degree_sum / 2;
        debug_assert!(g.is_symmetric());
        g
    }

    /// Single-word rows; `None` when `n > 64`.
    pub fn small_rows(&self) -> Option<Vec<u64>> {
        (self.n <= 64).then(|| {
            (0..self.n)
                .map(|v| self.row(v).first().copied().unwrap_or(0))
                .collect()
        })
    }

    #[inline]
    fn set(&mut self, u: usize, v: usize) {
        self.bits[u * self.stride + v / 64] |= 1 << (v % 64);
    }

    fn is_symmetric(&self) -> bool {
        (0..self.n).all(|u| !self.has_edge(u, u) && self.neighbors(u).all(|v| self.has_edge(v, u)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.bits[v * self.stride..(v + 1) * self.stride]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.stride + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        bit_iter(self.row(v))
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// `|N(u) ∩ N(v)|` by popcount over the row intersection.
    pub fn common_neighbor_count(&self, u: usize, v: usize) -> Result<usize, GraphError> {
        for w in [u, v] {
            if w >= self.n {
                return Err(GraphError::VertexOutOfRange {
                    vertex: w,
                    n: self.n,
                });
            }
        }
        if u == v {
            return Err(GraphError::SameVertex(u));
        }
        Ok(self
            .row(u)
            .iter()
            .zip(self.row(v))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum())
    }

    /// True iff no pair of vertices has two common neighbours.
    pub fn is_c4_free(&self) -> bool {
        // A vertex reached from u through two different neighbours closes a 4-cycle.
        let mut seen = vec![0u64; self.stride];
        for u in 0..self.n {
            seen.iter_mut().for_each(|w| *w = 0);
            for w in self.neighbors(u) {
                let row = self.row(w);
                for (i, (s, &r)) in seen.iter_mut().zip(row).enumerate() {
                    let r = if i == u / 64 { r & !(1 << (u % 64)) } else { r };
                    if *s & r != 0 {
                        return false;
                    }
                    *s |= r;
                }
            }
        }
        true
    }

    /// The lexicographically first 4-cycle, as `[u, a, v, b]` with `u < v`
    /// the first pair having two common neighbours and `a < b` the two
    /// smallest of them. `None` if the graph is C4-free.
    pub fn c4_witness(&self) -> Option<[usize; 4]> {
        if self.is_c4_free() {
            return None;
        }
        for u in 0..self.n {
            for v in u + 1..self.n {
                let common: Vec<u64> = self
                    .row(u)
                    .iter()
                    .zip(self.row(v))
                    .map(|(a, b)| a & b)
                    .collect();
                let mut it = bit_iter(&common);
                if let (Some(a), Some(b)) = (it.next(), it.next()) {
                    return Some([u, a, v, b]);
                }
            }
        }
        unreachable!("fast check found a 4-cycle the pair scan missed")
    }

    /// Number of paths with two edges, `Σ_v C(d(v), 2)`.
    pub fn count_2paths(&self) -> u64 {
        (0..self.n)
            .map(|v| {
                let d = self.degree(v) as u64;
                d * d.saturating_sub(1) / 2
            })
            .sum()
    }

    pub fn degree_classes(&self, q: usize) -> DegreeClassCounts {
        DegreeClassCounts::new(self, q)
    }

    pub fn min_degree(&self) -> Option<usize> {
        (0..self.n).map(|v| self.degree(v)).min()
    }

    /// The graph with vertex `v` removed; later vertices shift down by one.
    pub fn delete_vertex(&self, v: usize) -> Result<Graph, GraphError> {
        if v >= self.n {
            return Err(GraphError::VertexOutOfRange {
                vertex: v,
                n: self.n,
            });
        }
        let relabel = |w: usize| if w > v { w - 1 } else { w };
        let edges = self
            .edges()
            .filter(|&(a, b)| a != v && b != v)
            .map(|(a, b)| (relabel(a), relabel(b)));
        Ok(Graph::from_edges(self.n - 1, edges).expect("subgraph of a simple graph"))
    }

    /// Relabels so that old vertex `order[i]` becomes vertex `i`.
    pub fn permuted(&self, order: &[usize]) -> Graph {
        assert_eq!(order.len(), self.n);
        let mut position = vec![0; self.n];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        Graph::from_edges(
            self.n,
            self.edges().map(|(a, b)| (position[a], position[b])),
        )
        .expect("permutation of a simple graph")
    }
}

pub(crate) fn bit_iter(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(i * 64 + b)
        })
    })
}

/// Census of vertex degrees around a reference parameter `q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeClassCounts {
    pub q: usize,
    pub n: usize,
    pub edges: usize,
    /// Degree above `q+2`.
    pub above_q_plus_2: usize,
    pub q_plus_2: usize,
    pub q_plus_1: usize,
    pub q_exact: usize,
    pub q_minus_1: usize,
    pub q_minus_2: usize,
    /// Degree at most `q-3`.
    pub at_most_q_minus_3: usize,
    pub min_degree: usize,
    pub max_degree: usize,
    /// `histogram[k]` is the number of vertices of degree `k`.
    pub histogram: Vec<usize>,
}

impl DegreeClassCounts {
    fn new(g: &Graph, q: usize) -> Self {
        let degrees = g.degrees();
        let max_degree = degrees.iter().copied().max().unwrap_or(0);
        let min_degree = degrees.iter().copied().min().unwrap_or(0);
        let mut histogram = vec![0; max_degree + 1];
        for &d in &degrees {
            histogram[d] += 1;
        }
        let at = |k: i64| {
            if k < 0 {
                0
            } else {
                histogram.get(k as usize).copied().unwrap_or(0)
            }
        };
        let qi = q as i64;
        let low: usize = (0..=(qi - 3).max(-1)).map(at).sum();
        let high: usize = histogram.iter().skip(q + 3).sum();
        let c = DegreeClassCounts {
            q,
            n: g.n(),
            edges: g.edge_count(),
            above_q_plus_2: high,
            q_plus_2: at(qi + 2),
            q_plus_1: at(qi + 1),
            q_exact: at(qi),
            q_minus_1: at(qi - 1),
            q_minus_2: at(qi - 2),
            at_most_q_minus_3: low,
            min_degree,
            max_degree,
            histogram,
        };
        assert!(c.is_consistent(), "degree census does not balance: {c:?}");
        c
    }

    /// Class counts sum to `n` and the degree sum is `2e`.
    pub fn is_consistent(&self) -> bool {
        let classes = self.above_q_plus_2
            + self.q_plus_2
            + self.q_plus_1
            + self.q_exact
            + self.q_minus_1
            + self.q_minus_2
            + self.at_most_q_minus_3;
        let degree_sum: usize = self.histogram.iter().enumerate().map(|(k, c)| k * c).sum();
        classes == self.n
            && self.histogram.iter().sum::<usize>() == self.n
            && degree_sum == 2 * self.edges
    }
}
