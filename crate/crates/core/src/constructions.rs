//! Orthogonal polarity graphs and their minimum-degree vertex deletions.
//!
//! Every builder checks its own certificate (edge count, degree census,
//! C4-freeness) before handing the graph out.

use serde::Serialize;
use thiserror::Error;

use crate::bounds::e0;
use crate::galois::{Field, GaloisError};
use crate::graph::{Graph, GraphError};
use crate::projective::Plane;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Field(#[from] GaloisError),
    #[error("order {0} is odd; an even order was required")]
    OddQ(u64),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("certificate check failed: {0}")]
    Certificate(String),
}

/// Counts recorded for a polarity graph ER_q.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolarityGraphReport {
    pub q: u32,
    pub n: usize,
    pub edges: usize,
    pub degree_q_plus_1: usize,
    pub degree_q: usize,
    pub absolute_vertices: Vec<usize>,
    pub c4_free: bool,
}

#[derive(Debug, Clone)]
pub struct PolarityGraph {
    pub graph: Graph,
    pub report: PolarityGraphReport,
}

fn certify(ok: bool, msg: impl FnOnce() -> String) -> Result<(), ConstructionError> {
    if ok {
        Ok(())
    } else {
        Err(ConstructionError::Certificate(msg()))
    }
}

/// ER_q: points of PG(2,q), `x ~ y` iff `x` lies on the polar of `y`.
pub fn polarity_graph(field: &Field) -> Result<PolarityGraph, ConstructionError> {
    let plane = Plane::new(field.clone());
    let q = field.order();
    let points = plane.points();
    let n = points.len();
    let mut edges = Vec::new();
    for (i, x) in points.iter().enumerate() {
        let polar = plane.polar(x);
        for (j, y) in points.iter().enumerate().skip(i + 1) {
            if plane.incident(y, &polar).expect("same plane") {
                edges.push((i, j));
            }
        }
    }
    let graph = Graph::from_edges(n, edges)?;
    let absolute_vertices: Vec<usize> = plane
        .absolute_points()
        .iter()
        .map(|p| plane.index_of(p))
        .collect();
    let degrees = graph.degrees();
    let qu = q as usize;
    let report = PolarityGraphReport {
        q,
        n,
        edges: graph.edge_count(),
        degree_q_plus_1: degrees.iter().filter(|&&d| d == qu + 1).count(),
        degree_q: degrees.iter().filter(|&&d| d == qu).count(),
        absolute_vertices,
        c4_free: graph.is_c4_free(),
    };

    let qq = qu * qu;
    certify(report.edges * 2 == qu * (qu + 1) * (qu + 1), || {
        format!("ER_{q} has {} edges", report.edges)
    })?;
    certify(
        report.degree_q_plus_1 == qq && report.degree_q == qu + 1,
        || {
            format!(
                "ER_{q} degree census {}x(q+1), {}x(q)",
                report.degree_q_plus_1, report.degree_q
            )
        },
    )?;
    let low: Vec<usize> = (0..n).filter(|&v| degrees[v] == qu).collect();
    certify(low == report.absolute_vertices, || {
        format!("ER_{q} degree-q vertices are not the absolute points")
    })?;
    certify(report.c4_free, || format!("ER_{q} contains a 4-cycle"))?;
    Ok(PolarityGraph { graph, report })
}

/// Removes the lowest-indexed vertex of minimum degree.
pub fn delete_min_degree_vertex(g: &Graph) -> Result<Graph, ConstructionError> {
    let min = g.min_degree().ok_or(GraphError::EmptyGraph)?;
    let v = (0..g.n())
        .find(|&v| g.degree(v) == min)
        .expect("minimum is attained");
    let h = g.delete_vertex(v)?;
    if g.is_c4_free() {
        certify(h.is_c4_free(), || {
            "vertex deletion created a 4-cycle".into()
        })?;
    }
    Ok(h)
}

/// ER_q minus a vertex of degree q: `q^2+q` vertices and `E0(q)` edges.
pub fn extremal_witness(q: u64, require_even: bool) -> Result<Graph, ConstructionError> {
    let field = Field::new(q)?;
    if require_even && !field.is_even() {
        return Err(ConstructionError::OddQ(q));
    }
    let er = polarity_graph(&field)?;
    let g = delete_min_degree_vertex(&er.graph)?;
    let qu = q as usize;
    certify(g.n() == qu * qu + qu, || {
        format!("witness has {} vertices", g.n())
    })?;
    certify(g.edge_count() as u64 == e0(q), || {
        format!("witness has {} edges, expected {}", g.edge_count(), e0(q))
    })?;
    certify(g.is_c4_free(), || "witness contains a 4-cycle".into())?;
    if field.is_even() {
        let c = g.degree_classes(qu);
        // first degree-sequence family at z = 0
        let expected = (qu * qu - qu, 2 * qu, 0, 0);
        let found = (
            c.q_plus_1,
            c.q_exact,
            c.q_minus_1,
            c.q_minus_2 + c.at_most_q_minus_3,
        );
        certify(
            found == expected && c.q_plus_2 + c.above_q_plus_2 == 0,
            || format!("witness census {found:?}, expected {expected:?}"),
        )?;
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn er(q: u64) -> PolarityGraph {
        polarity_graph(&Field::new(q).unwrap()).unwrap()
    }

    #[test]
    fn polarity_graph_examples() {
        let g2 = er(2);
        assert_eq!((g2.report.n, g2.report.edges), (7, 9));
        let g4 = er(4);
        assert_eq!((g4.report.n, g4.report.edges), (21, 50));
        assert_eq!((g4.report.degree_q_plus_1, g4.report.degree_q), (16, 5));
        let g8 = er(8);
        assert_eq!(
            (g8.report.n, g8.report.edges, g8.report.c4_free),
            (73, 324, true)
        );
    }

    #[test]
    fn er2_structure() {
        let g = er(2).graph;
        assert_eq!(g.count_2paths(), 15);
        for u in 0..7 {
            for v in u + 1..7 {
                assert!(g.common_neighbor_count(u, v).unwrap() <= 1);
            }
        }
        let c = g.degree_classes(2);
        assert_eq!((c.q_plus_1, c.q_exact), (4, 3));
    }

    #[test]
    fn deletion_examples() {
        let d2 = delete_min_degree_vertex(&er(2).graph).unwrap();
        assert_eq!((d2.n(), d2.edge_count()), (6, 7));
        let d4 = delete_min_degree_vertex(&er(4).graph).unwrap();
        assert_eq!((d4.n(), d4.edge_count()), (20, 46));
        let c = d4.degree_classes(4);
        assert_eq!(
            (c.q_plus_1, c.q_exact, c.q_minus_1, c.q_minus_2),
            (12, 8, 0, 0)
        );
        let d8 = delete_min_degree_vertex(&er(8).graph).unwrap();
        assert_eq!((d8.n(), d8.edge_count(), d8.is_c4_free()), (72, 316, true));
        assert!(matches!(
            delete_min_degree_vertex(&Graph::empty(0)),
            Err(ConstructionError::Graph(GraphError::EmptyGraph))
        ));
    }

    #[test]
    fn deletion_tie_break_is_lowest_index() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 1)]).unwrap();
        // vertex 0 is the unique minimum
        assert_eq!(delete_min_degree_vertex(&g).unwrap().edge_count(), 3);
        let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let h = delete_min_degree_vertex(&path).unwrap();
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn witness_examples() {
        let w2 = extremal_witness(2, true).unwrap();
        assert_eq!((w2.n(), w2.edge_count()), (6, 7));
        let w16 = extremal_witness(16, true).unwrap();
        assert_eq!((w16.n(), w16.edge_count()), (272, 2296));
        assert_eq!(
            extremal_witness(6, false).unwrap_err(),
            ConstructionError::Field(GaloisError::NotPrimePower(6))
        );
        assert_eq!(
            extremal_witness(3, true).unwrap_err(),
            ConstructionError::OddQ(3)
        );
        let w3 = extremal_witness(3, false).unwrap();
        assert_eq!((w3.n(), w3.edge_count()), (12, 21));
    }

    #[test]
    fn even_order_absolute_points_are_independent() {
        for q in [2, 4, 8, 16] {
            let er = er(q);
            let abs = &er.report.absolute_vertices;
            for &a in abs {
                for &b in abs {
                    assert!(!er.graph.has_edge(a, b));
                }
            }
        }
    }
}
