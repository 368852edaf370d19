//! Biconnected components and the block-cut tree.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::{Error, Graph, Result, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum BctNode {
    /// Sorted vertex set of one biconnected component.
    Block(Vec<Vertex>),
    CutVertex(Vertex),
}

/// Block nodes come first (ordered by member list), then cut vertices in
/// label order. Every edge is `(block index, cut-vertex index)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockCutTree {
    pub nodes: Vec<BctNode>,
    pub edges: Vec<(usize, usize)>,
}

impl BlockCutTree {
    pub fn blocks(&self) -> impl Iterator<Item = &[Vertex]> + '_ {
        self.nodes.iter().filter_map(|n| match n {
            BctNode::Block(b) => Some(b.as_slice()),
            BctNode::CutVertex(_) => None,
        })
    }

    pub fn cut_vertices(&self) -> BTreeSet<Vertex> {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                BctNode::CutVertex(v) => Some(*v),
                BctNode::Block(_) => None,
            })
            .collect()
    }

    pub fn node_degree(&self, node: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == node || b == node).count()
    }

    /// Blocks with at most one incident tree edge, in node order.
    pub fn leaf_blocks(&self) -> Vec<&[Vertex]> {
        self.nodes
            .iter()
            .enumerate()
            .filter_map(|(i, n)| match n {
                BctNode::Block(b) if self.node_degree(i) <= 1 => Some(b.as_slice()),
                _ => None,
            })
            .collect()
    }

    /// Connected and acyclic.
    pub fn is_tree(&self) -> bool {
        let n = self.nodes.len();
        if n == 0 {
            return true;
        }
        if self.edges.len() != n - 1 {
            return false;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    }
}

/// Block-cut tree of a connected simple graph.
pub fn block_cut_tree(g: &Graph) -> Result<BlockCutTree> {
    let vertices: Vec<Vertex> = g.vertices().collect();
    let edges: Vec<(Vertex, Vertex)> = g.edges().collect();
    block_cut_tree_of(&vertices, &edges)
}

/// Block-cut tree of a connected multigraph given by labels and an edge list.
pub(crate) fn block_cut_tree_of(vertices: &[Vertex], edges: &[(Vertex, Vertex)]) -> Result<BlockCutTree> {
    let index: BTreeMap<Vertex, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let dense: Vec<(usize, usize)> = edges.iter().map(|(u, v)| (index[u], index[v])).collect();
    let blocks = biconnected_components(vertices.len(), &dense)?;

    let mut labelled: Vec<Vec<Vertex>> = blocks
        .into_iter()
        .map(|b| {
            let mut l: Vec<Vertex> = b.into_iter().map(|i| vertices[i]).collect();
            l.sort_unstable();
            l
        })
        .collect();
    labelled.sort();

    let mut membership: BTreeMap<Vertex, usize> = BTreeMap::new();
    for b in &labelled {
        for &v in b {
            *membership.entry(v).or_default() += 1;
        }
    }
    let cuts: Vec<Vertex> = membership.iter().filter(|&(_, &c)| c > 1).map(|(&v, _)| v).collect();

    let mut edges_out = Vec::new();
    for (bi, b) in labelled.iter().enumerate() {
        for (ci, c) in cuts.iter().enumerate() {
            if b.binary_search(c).is_ok() {
                edges_out.push((bi, labelled.len() + ci));
            }
        }
    }
    let mut nodes: Vec<BctNode> = labelled.into_iter().map(BctNode::Block).collect();
    nodes.extend(cuts.into_iter().map(BctNode::CutVertex));
    Ok(BlockCutTree { nodes, edges: edges_out })
}

/// Hopcroft-Tarjan lowpoint search with an explicit edge stack. Parallel
/// edges are told apart by edge id. Returns vertex sets of the blocks.
fn biconnected_components(n: usize, edges: &[(usize, usize)]) -> Result<Vec<Vec<usize>>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut inc: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (id, &(u, v)) in edges.iter().enumerate() {
        inc[u].push((v, id));
        inc[v].push((u, id));
    }
    const UNSEEN: usize = usize::MAX;
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut timer = 0;
    let mut edge_stack: Vec<usize> = Vec::new();
    let mut blocks = Vec::new();

    let root = 0;
    disc[root] = timer;
    low[root] = timer;
    timer += 1;
    if inc[root].is_empty() {
        blocks.push(vec![root]);
    }
    // frame: (vertex, id of the tree edge into it, next incidence position)
    let mut frames: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
    while let Some(frame) = frames.last_mut() {
        let (v, parent_edge, pos) = *frame;
        if pos < inc[v].len() {
            frame.2 += 1;
            let (w, id) = inc[v][pos];
            if id == parent_edge {
                continue;
            }
            if disc[w] == UNSEEN {
                edge_stack.push(id);
                disc[w] = timer;
                low[w] = timer;
                timer += 1;
                frames.push((w, id, 0));
            } else if disc[w] < disc[v] {
                edge_stack.push(id);
                low[v] = low[v].min(disc[w]);
            }
        } else {
            frames.pop();
            if let Some(&(u, _, _)) = frames.last() {
                low[u] = low[u].min(low[v]);
                if low[v] >= disc[u] {
                    let mut members = BTreeSet::new();
                    while let Some(id) = edge_stack.pop() {
                        members.insert(edges[id].0);
                        members.insert(edges[id].1);
                        if id == parent_edge {
                            break;
                        }
                    }
                    blocks.push(members.into_iter().collect());
                }
            }
        }
    }
    if disc.contains(&UNSEEN) {
        return Err(Error::Disconnected);
    }
    Ok(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{families, henneberg1_generate};

    fn tree_of(edges: &[(Vertex, Vertex)]) -> BlockCutTree {
        block_cut_tree(&Graph::from_edges(edges.iter().copied()).unwrap()).unwrap()
    }

    #[test]
    fn path_of_three() {
        let t = tree_of(&[(1, 2), (2, 3)]);
        assert_eq!(
            t.nodes,
            vec![BctNode::Block(vec![1, 2]), BctNode::Block(vec![2, 3]), BctNode::CutVertex(2)]
        );
        assert_eq!(t.edges, vec![(0, 2), (1, 2)]);
        assert!(t.is_tree());
    }

    #[test]
    fn triangle_is_one_block() {
        let t = block_cut_tree(&families::triangle()).unwrap();
        assert_eq!(t.nodes, vec![BctNode::Block(vec![1, 2, 3])]);
        assert!(t.edges.is_empty());
        assert_eq!(t.leaf_blocks().len(), 1);
    }

    #[test]
    fn bowtie() {
        let t = tree_of(&[(1, 2), (2, 3), (1, 3), (3, 4), (4, 5), (3, 5)]);
        assert_eq!(t.blocks().count(), 2);
        assert_eq!(t.cut_vertices(), BTreeSet::from([3]));
        assert_eq!(t.edges.len(), 2);
    }

    #[test]
    fn single_vertex_and_disconnected() {
        let mut g = Graph::new();
        g.add_vertex(7);
        assert_eq!(block_cut_tree(&g).unwrap().nodes, vec![BctNode::Block(vec![7])]);
        let g = Graph::from_edges([(1, 2), (3, 4)]).unwrap();
        assert_eq!(block_cut_tree(&g), Err(Error::Disconnected));
    }

    #[test]
    fn parallel_edges_form_a_block() {
        let t = block_cut_tree_of(&[1, 2, 3], &[(1, 2), (1, 2), (2, 3)]).unwrap();
        assert_eq!(t.cut_vertices(), BTreeSet::from([2]));
        assert_eq!(t.blocks().collect::<Vec<_>>(), vec![&[1, 2][..], &[2, 3][..]]);
    }

    fn brute_cut_vertices(g: &Graph) -> BTreeSet<Vertex> {
        g.vertices()
            .filter(|&v| {
                let rest = Graph::from_edges(g.edges().filter(|&(a, b)| a != v && b != v)).unwrap();
                let mut rest = rest;
                for w in g.vertices().filter(|&w| w != v) {
                    rest.add_vertex(w);
                }
                !rest.is_connected()
            })
            .collect()
    }

    #[test]
    fn cut_vertices_match_removal_test() {
        // sparse random connected graphs: Henneberg graphs with edges dropped
        for seed in 0..60u64 {
            let g = henneberg1_generate(10, 2, seed).unwrap();
            let kept: Vec<_> = g.edges().enumerate().filter(|(i, _)| !(i + seed as usize).is_multiple_of(3)).map(|(_, e)| e).collect();
            let mut h = Graph::from_edges(kept).unwrap();
            for v in g.vertices() {
                h.add_vertex(v);
            }
            if !h.is_connected() {
                continue;
            }
            let t = block_cut_tree(&h).unwrap();
            assert!(t.is_tree());
            assert_eq!(t.cut_vertices(), brute_cut_vertices(&h), "seed {seed}");
            assert!(t.leaf_blocks().iter().all(|b| !b.is_empty()));
            for (a, b) in &t.edges {
                assert!(matches!(t.nodes[*a], BctNode::Block(_)));
                assert!(matches!(t.nodes[*b], BctNode::CutVertex(_)));
            }
            for (i, n) in t.nodes.iter().enumerate() {
                if t.node_degree(i) == 1 {
                    assert!(matches!(n, BctNode::Block(_)));
                }
            }
        }
    }
}
