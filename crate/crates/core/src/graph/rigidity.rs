//! Maxwell counting and, for the plane, the (2,3) pebble game.

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::{check_dimension, Result, Vertex};

/// Largest vertex count for which the subgraph inequality is checked by
/// enumerating vertex subsets when `d >= 3`.
pub const MAX_SUBSET_VERTICES: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub dimension: u32,
    pub vertex_count: usize,
    pub edge_count: usize,
    /// `d|V| - C(d+1, 2)`.
    pub required_edges: i64,
    pub count_ok: bool,
    /// `None` when the subgraph inequality was not checked (too many vertices).
    pub sparse: Option<bool>,
    pub global_ok: bool,
    /// Vertex set of a subgraph with too many edges, when one was found.
    pub violating_subgraph: Option<Vec<Vertex>>,
    /// True for `d >= 3`: the count is necessary but not sufficient there.
    pub necessary_only: bool,
}

pub fn maxwell_edge_count(n: usize, d: u32) -> i64 {
    let d = d as i64;
    d * n as i64 - d * (d + 1) / 2
}

/// Checks Maxwell's counting condition; an exact Laman test when `d == 2`.
pub fn maxwell_check(g: &Graph, d: u32) -> Result<RigidityReport> {
    check_dimension(d)?;
    let required = maxwell_edge_count(g.vertex_count(), d);
    let count_ok = g.edge_count() as i64 == required;
    let (sparse, violating) = if d == 2 {
        let violation = pebble_game(g);
        (Some(violation.is_none()), violation)
    } else if g.vertex_count() <= MAX_SUBSET_VERTICES {
        let violation = dense_subgraph(g, d);
        (Some(violation.is_none()), violation)
    } else {
        (None, None)
    };
    Ok(RigidityReport {
        dimension: d,
        vertex_count: g.vertex_count(),
        edge_count: g.edge_count(),
        required_edges: required,
        count_ok,
        sparse,
        global_ok: count_ok && sparse != Some(false),
        violating_subgraph: violating,
        necessary_only: d != 2,
    })
}

/// (2,3)-pebble game. Returns the vertex set spanning a subgraph with more
/// than `2|V'| - 3` edges, or `None` when the graph is (2,3)-sparse.
fn pebble_game(g: &Graph) -> Option<Vec<Vertex>> {
    let index = g.index_map();
    let labels: Vec<Vertex> = g.vertices().collect();
    let n = labels.len();
    let mut pebbles = vec![2u8; n];
    // out[v] lists heads of edges directed out of v
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];

    for (a, b) in g.edges() {
        let (u, v) = (index[&a], index[&b]);
        while pebbles[u] + pebbles[v] < 4 {
            let moved = (pebbles[u] < 2 && fetch_pebble(u, v, &mut pebbles, &mut out))
                || (pebbles[v] < 2 && fetch_pebble(v, u, &mut pebbles, &mut out));
            if !moved {
                let mut reach = reachable(&[u, v], &out);
                reach.sort_unstable();
                return Some(reach.into_iter().map(|i| labels[i]).collect());
            }
        }
        pebbles[u] -= 1;
        out[u].push(v);
    }
    None
}

/// Searches from `root` (never through `blocked`) for a free pebble and
/// reverses the path so the pebble ends on `root`.
fn fetch_pebble(root: usize, blocked: usize, pebbles: &mut [u8], out: &mut [Vec<usize>]) -> bool {
    let n = pebbles.len();
    let mut parent = vec![usize::MAX; n];
    parent[root] = root;
    parent[blocked] = blocked;
    let mut stack = vec![root];
    let mut found = None;
    while let Some(x) = stack.pop() {
        if x != root && pebbles[x] > 0 {
            found = Some(x);
            break;
        }
        for &y in &out[x] {
            if parent[y] == usize::MAX {
                parent[y] = x;
                stack.push(y);
            }
        }
    }
    let Some(mut x) = found else {
        return false;
    };
    pebbles[x] -= 1;
    while x != root {
        let p = parent[x];
        let pos = out[p].iter().position(|&y| y == x).expect("tree edge exists");
        out[p].swap_remove(pos);
        out[x].push(p);
        x = p;
    }
    pebbles[root] += 1;
    true
}

fn reachable(roots: &[usize], out: &[Vec<usize>]) -> Vec<usize> {
    let mut seen = vec![false; out.len()];
    let mut stack: Vec<usize> = roots.to_vec();
    for &r in roots {
        seen[r] = true;
    }
    let mut all = roots.to_vec();
    while let Some(x) = stack.pop() {
        for &y in &out[x] {
            if !seen[y] {
                seen[y] = true;
                all.push(y);
                stack.push(y);
            }
        }
    }
    all
}

/// Gray-code walk over vertex subsets; first subset with `>= d` vertices
/// and more than `d|V'| - C(d+1,2)` induced edges.
fn dense_subgraph(g: &Graph, d: u32) -> Option<Vec<Vertex>> {
    let index = g.index_map();
    let labels: Vec<Vertex> = g.vertices().collect();
    let n = labels.len();
    let mut adj = vec![0u32; n];
    for (a, b) in g.edges() {
        let (u, v) = (index[&a], index[&b]);
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    let mut mask = 0u32;
    let mut edges = 0i64;
    for k in 1u64..(1u64 << n) {
        let bit = k.trailing_zeros() as usize;
        let touching = (adj[bit] & mask).count_ones() as i64;
        mask ^= 1 << bit;
        if mask & (1 << bit) != 0 {
            edges += touching;
        } else {
            edges -= touching;
        }
        let size = mask.count_ones() as usize;
        if size >= d as usize && edges > maxwell_edge_count(size, d) {
            return Some((0..n).filter(|i| mask & (1 << i) != 0).map(|i| labels[i]).collect());
        }
    }
    None
}
