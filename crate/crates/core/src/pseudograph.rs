//! Pseudographs: vertices, normal edges (two endpoints) and hanging edges
//! (one endpoint, always directed out of it).

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::bct::{block_cut_tree_of, BlockCutTree};
use crate::{Clique, Error, Graph, Result, Vertex};

/// Total degree `p` (normal + hanging) and hanging degree `h` of a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ExtendedDegree {
    pub p: u32,
    pub h: u32,
}

impl ExtendedDegree {
    pub fn new(p: u32, h: u32) -> Self {
        debug_assert!(p >= h);
        Self { p, h }
    }

    pub fn normal(self) -> u32 {
        self.p - self.h
    }
}

impl std::fmt::Display for ExtendedDegree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.p, self.h)
    }
}

/// Normal edges are a sorted multiset of `(min, max)` pairs; the hanging map
/// only stores nonzero counts.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pseudograph {
    vertices: BTreeSet<Vertex>,
    normal: Vec<(Vertex, Vertex)>,
    hanging: BTreeMap<Vertex, u32>,
}

impl Pseudograph {
    pub fn new<V, F, H>(vertices: V, normal: F, hanging: H) -> Result<Self>
    where
        V: IntoIterator<Item = Vertex>,
        F: IntoIterator<Item = (Vertex, Vertex)>,
        H: IntoIterator<Item = (Vertex, u32)>,
    {
        let vertices: BTreeSet<Vertex> = vertices.into_iter().collect();
        let mut normal_edges = Vec::new();
        for (u, v) in normal {
            if u == v {
                return Err(Error::InvalidPseudograph(format!("normal edge ({u},{v}) is a loop")));
            }
            for w in [u, v] {
                if !vertices.contains(&w) {
                    return Err(Error::InvalidPseudograph(format!("normal edge endpoint {w} not in U")));
                }
            }
            normal_edges.push((u.min(v), u.max(v)));
        }
        normal_edges.sort_unstable();
        let mut hanging_map = BTreeMap::new();
        for (v, c) in hanging {
            if !vertices.contains(&v) {
                return Err(Error::InvalidPseudograph(format!("hanging edge at {v} not in U")));
            }
            if c > 0 {
                *hanging_map.entry(v).or_insert(0) += c;
            }
        }
        Ok(Self { vertices, normal: normal_edges, hanging: hanging_map })
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.vertices.iter().copied()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    pub fn normal_edges(&self) -> &[(Vertex, Vertex)] {
        &self.normal
    }

    /// Nonzero hanging counts by vertex.
    pub fn hanging_edges(&self) -> &BTreeMap<Vertex, u32> {
        &self.hanging
    }

    pub fn hanging(&self, v: Vertex) -> u32 {
        self.hanging.get(&v).copied().unwrap_or(0)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn normal_count(&self) -> usize {
        self.normal.len()
    }

    /// Total number of hanging edges, `k`.
    pub fn hanging_count(&self) -> u64 {
        self.hanging.values().map(|&c| c as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn normal_degree(&self, v: Vertex) -> u32 {
        self.normal.iter().filter(|&&(a, b)| a == v || b == v).count() as u32
    }

    pub fn extended_degree(&self, v: Vertex) -> Result<ExtendedDegree> {
        if !self.contains(v) {
            return Err(Error::UnknownVertex(v));
        }
        let h = self.hanging(v);
        Ok(ExtendedDegree::new(self.normal_degree(v) + h, h))
    }

    pub fn extended_degrees(&self) -> BTreeMap<Vertex, ExtendedDegree> {
        let mut normal: BTreeMap<Vertex, u32> = self.vertices.iter().map(|&v| (v, 0)).collect();
        for &(a, b) in &self.normal {
            *normal.get_mut(&a).expect("endpoint in U") += 1;
            *normal.get_mut(&b).expect("endpoint in U") += 1;
        }
        normal
            .into_iter()
            .map(|(v, nd)| {
                let h = self.hanging(v);
                (v, ExtendedDegree::new(nd + h, h))
            })
            .collect()
    }

    /// Normal-edge neighbours of `v`, with multiplicity, ascending.
    pub fn neighbors(&self, v: Vertex) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = self
            .normal
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// `|F| + |H| == d|U|`, necessary for an orientation with outdegree `d`.
    pub fn is_balanced(&self, d: u32) -> bool {
        self.normal.len() as u64 + self.hanging_count() == d as u64 * self.vertices.len() as u64
    }

    /// Connected normal subgraph; the empty pseudograph is not connected.
    pub fn is_connected(&self) -> bool {
        !self.vertices.is_empty() && self.component_labels().len() == 1
    }

    /// Connected with `|F| = |U| - 1`.
    pub fn normal_is_tree(&self) -> bool {
        self.is_connected() && self.normal.len() + 1 == self.vertices.len()
    }

    pub fn components(&self) -> Vec<Pseudograph> {
        self.component_labels()
            .into_iter()
            .map(|set| self.restrict(&set))
            .collect()
    }

    pub fn block_cut_tree(&self) -> Result<BlockCutTree> {
        let vertices: Vec<Vertex> = self.vertices().collect();
        block_cut_tree_of(&vertices, &self.normal)
    }

    /// Vertex sets of the connected components, ordered by smallest label.
    fn component_labels(&self) -> Vec<BTreeSet<Vertex>> {
        let mut parent: BTreeMap<Vertex, Vertex> = self.vertices.iter().map(|&v| (v, v)).collect();
        fn find(p: &mut BTreeMap<Vertex, Vertex>, x: Vertex) -> Vertex {
            let mut r = x;
            while p[&r] != r {
                r = p[&r];
            }
            p.insert(x, r);
            r
        }
        for &(a, b) in &self.normal {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                let (lo, hi) = (ra.min(rb), ra.max(rb));
                parent.insert(hi, lo);
            }
        }
        let mut groups: BTreeMap<Vertex, BTreeSet<Vertex>> = BTreeMap::new();
        for &v in &self.vertices {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().insert(v);
        }
        let mut out: Vec<BTreeSet<Vertex>> = groups.into_values().collect();
        out.sort_by_key(|s| *s.iter().next().expect("nonempty"));
        out
    }

    fn restrict(&self, set: &BTreeSet<Vertex>) -> Pseudograph {
        Pseudograph {
            vertices: set.clone(),
            normal: self.normal.iter().copied().filter(|(a, _)| set.contains(a)).collect(),
            hanging: self
                .hanging
                .iter()
                .filter(|(v, _)| set.contains(v))
                .map(|(&v, &c)| (v, c))
                .collect(),
        }
    }

    pub(crate) fn remove_vertex(&mut self, v: Vertex) {
        self.vertices.remove(&v);
        self.hanging.remove(&v);
        self.normal.retain(|&(a, b)| a != v && b != v);
    }

    /// Removes one copy of the normal edge `{u, v}`.
    pub(crate) fn remove_normal(&mut self, u: Vertex, v: Vertex) -> bool {
        let e = (u.min(v), u.max(v));
        match self.normal.iter().position(|&x| x == e) {
            Some(i) => {
                self.normal.remove(i);
                true
            }
            None => false,
        }
    }

    pub(crate) fn add_hanging(&mut self, v: Vertex, count: u32) {
        if count > 0 {
            *self.hanging.entry(v).or_insert(0) += count;
        }
    }
}

/// Removes the clique's vertices: edges among the rest stay normal, edges
/// from a remaining vertex to a clique vertex hang off the remaining vertex.
pub fn build_pseudograph(g: &Graph, k: &Clique) -> Result<Pseudograph> {
    Clique::new(g, k.members())?;
    let mut hanging: BTreeMap<Vertex, u32> = BTreeMap::new();
    let mut normal = Vec::new();
    for (u, v) in g.edges() {
        match (k.contains(u), k.contains(v)) {
            (false, false) => normal.push((u, v)),
            (true, false) => *hanging.entry(v).or_default() += 1,
            (false, true) => *hanging.entry(u).or_default() += 1,
            (true, true) => {}
        }
    }
    Pseudograph::new(g.vertices().filter(|&v| !k.contains(v)), normal, hanging)
}

/// Components of the normal subgraph, ordered by smallest label.
pub fn connected_components(l: &Pseudograph) -> Vec<Pseudograph> {
    l.components()
}

pub fn extended_degree(l: &Pseudograph, v: Vertex) -> Result<ExtendedDegree> {
    l.extended_degree(v)
}
