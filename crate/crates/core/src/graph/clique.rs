use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::{check_dimension, Error, Result, Vertex};

/// Sorted list of pairwise adjacent vertices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Clique(Vec<Vertex>);

impl Clique {
    /// Validates that `members` are distinct vertices of `g`, pairwise adjacent.
    pub fn new(g: &Graph, members: &[Vertex]) -> Result<Self> {
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let valid = sorted.len() == members.len()
            && !sorted.is_empty()
            && sorted.iter().all(|&v| g.contains_vertex(v))
            && sorted
                .iter()
                .enumerate()
                .all(|(i, &u)| sorted[i + 1..].iter().all(|&v| g.has_edge(u, v)));
        if valid {
            Ok(Self(sorted))
        } else {
            Err(Error::NotAClique(members.to_vec()))
        }
    }

    pub fn members(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }
}

/// All `d`-cliques of `g`, in lexicographic order of their member lists.
pub fn find_cliques(g: &Graph, d: u32) -> Result<Vec<Clique>> {
    check_dimension(d)?;
    let adj = g.adjacency();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(d as usize);
    let candidates: Vec<Vertex> = g.vertices().collect();
    extend(&adj, &candidates, d as usize, &mut current, &mut out);
    Ok(out)
}

fn extend(
    adj: &BTreeMap<Vertex, BTreeSet<Vertex>>,
    candidates: &[Vertex],
    size: usize,
    current: &mut Vec<Vertex>,
    out: &mut Vec<Clique>,
) {
    if current.len() == size {
        out.push(Clique(current.clone()));
        return;
    }
    let needed = size - current.len();
    for (i, &v) in candidates.iter().enumerate() {
        if candidates.len() - i < needed {
            break;
        }
        let next: Vec<Vertex> = candidates[i + 1..]
            .iter()
            .copied()
            .filter(|w| adj[&v].contains(w))
            .collect();
        if next.len() + 1 < needed {
            continue;
        }
        current.push(v);
        extend(adj, &next, size, current, out);
        current.pop();
    }
}
