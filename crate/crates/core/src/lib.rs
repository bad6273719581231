//! C4-free graphs from orthogonal polarities: finite fields, the projective
//! plane, polarity graphs, exact extremal bounds and an exhaustive search for
//! small orders.

pub mod bounds;
pub mod canon;
pub mod constructions;
pub mod galois;
pub mod graph;
pub mod graph6;
pub mod projective;
pub mod search;

pub use constructions::{delete_min_degree_vertex, extremal_witness, polarity_graph};
pub use galois::{Field, FieldElement, GaloisError};
pub use graph::{DegreeClassCounts, Graph, GraphError};
pub use graph6::MalformedGraph6;
pub use projective::{Plane, ProjLine, ProjPoint};
pub use search::{SearchConfig, SearchError, SearchResult};
