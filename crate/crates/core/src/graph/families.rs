//! Small named graphs used as fixtures.

use super::Graph;
use crate::Vertex;

fn build(edges: &[(Vertex, Vertex)]) -> Graph {
    Graph::from_edges(edges.iter().copied()).expect("fixture edges are simple")
}

pub fn triangle() -> Graph {
    build(&[(1, 2), (2, 3), (1, 3)])
}

/// The triangular prism (Desargues' graph in the rigidity literature):
/// triangles 1-2-3 and 4-5-6 joined by the rungs 1-4, 2-5, 3-6.
pub fn prism() -> Graph {
    build(&[(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6), (1, 4), (2, 5), (3, 6)])
}

/// `K_n` on labels `1..=n`.
pub fn complete(n: Vertex) -> Graph {
    let mut g = Graph::new();
    for v in 1..=n {
        g.add_vertex(v);
    }
    for u in 1..=n {
        for v in u + 1..=n {
            g.add_edge(u, v).expect("fresh edge");
        }
    }
    g
}

/// `K_{a,b}` with sides `1..=a` and `a+1..=a+b`.
pub fn complete_bipartite(a: Vertex, b: Vertex) -> Graph {
    let mut g = Graph::new();
    for u in 1..=a {
        for v in a + 1..=a + b {
            g.add_edge(u, v).expect("fresh edge");
        }
    }
    g
}

/// `K_4` minus the edge `{3,4}`.
pub fn k4_minus_edge() -> Graph {
    build(&[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4)])
}

/// Octahedron: `K_6` minus the perfect matching 1-6, 2-5, 3-4.
pub fn octahedron() -> Graph {
    let k6 = complete(6);
    Graph::from_edges(k6.edges().filter(|e| ![(1, 6), (2, 5), (3, 4)].contains(e)))
        .expect("subgraph of K6")
}

pub fn path(n: Vertex) -> Graph {
    build(&(1..n).map(|v| (v, v + 1)).collect::<Vec<_>>())
}
