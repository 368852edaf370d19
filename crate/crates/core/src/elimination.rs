//! Iterative elimination of vertices and paths from a connected pseudograph.
//!
//! Each step removes `d` edges per eliminated vertex; the cost of a step is
//! the number of ways to choose them, and the product of the costs bounds
//! the number of orientations with outdegree `d`. Only one canonical
//! successor is followed, so a trace is a per-instance certificate that is
//! checked against exact counts in the test-suite; [`formula_bound`] is the
//! bound that holds for every connected pseudograph with `n` vertices and
//! `k` hanging edges.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::bounds::AlphaBeta;
use crate::orient::count_valid_orientations;
use crate::util::binomial;
use crate::{check_dimension, Error, ExtendedDegree, Pseudograph, Result, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepKind {
    Vertex { vertex: Vertex, degree: ExtendedDegree },
    /// Consecutive vertices of extended degree `(d+1, d-1)`.
    Path { vertices: Vec<Vertex> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationStep {
    #[serde(flatten)]
    pub kind: StepKind,
    #[serde(with = "crate::util::decimal")]
    pub cost: BigUint,
    /// Change in the number of hanging edges.
    pub equilibrium: i64,
}

impl EliminationStep {
    pub fn vertex(vertex: Vertex, degree: ExtendedDegree, d: u32) -> Result<Self> {
        let (cost, equilibrium) = step_cost_equilibrium(degree.p, degree.h, d)?;
        Ok(Self { kind: StepKind::Vertex { vertex, degree }, cost, equilibrium })
    }

    pub fn path(vertices: Vec<Vertex>, d: u32) -> Self {
        let equilibrium = 1 - (d as i64 - 1) * vertices.len() as i64;
        Self { kind: StepKind::Path { vertices }, cost: BigUint::from(2u32), equilibrium }
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        match &self.kind {
            StepKind::Vertex { vertex, .. } => vec![*vertex],
            StepKind::Path { vertices } => vertices.clone(),
        }
    }
}

/// Cost `C(p-h, d-h)` and equilibrium `p-h-d` of eliminating one vertex.
pub fn step_cost_equilibrium(p: u32, h: u32, d: u32) -> Result<(BigUint, i64)> {
    check_dimension(d)?;
    if p < d || h > d || h > p {
        return Err(Error::NoOrientation { p, h, d });
    }
    if p == d + 1 && h == d - 1 {
        return Err(Error::ForbiddenStep { p, h });
    }
    Ok(cost_equilibrium_formula(p, h, d))
}

/// The unchecked formula behind [`step_cost_equilibrium`], also defined for
/// the `(d+1, d-1)` vertices of a path.
pub fn cost_equilibrium_formula(p: u32, h: u32, d: u32) -> (BigUint, i64) {
    let cost = binomial((p - h) as u64, (d - h) as u64);
    (cost, p as i64 - h as i64 - d as i64)
}

/// Why a pseudograph has no orientation with outdegree `d`, if a local
/// degree check or the global edge count already rules it out.
pub fn zero_reason(l: &Pseudograph, d: u32) -> Option<String> {
    for (v, e) in l.extended_degrees() {
        if e.p < d || e.h > d {
            return Some(format!("vertex {v} has extended degree {e}"));
        }
    }
    if !l.is_balanced(d) {
        return Some(format!(
            "|F| + |H| = {} differs from d|U| = {}",
            l.normal_count() as u64 + l.hanging_count(),
            d as u64 * l.vertex_count() as u64
        ));
    }
    None
}

/// Picks the next step for a connected pseudograph that is not a base case.
///
/// Vertex steps on non-cut vertices come first (minimum cost, then smallest
/// label). When every non-cut vertex has extended degree `(d+1, d-1)`, the
/// step is the lexicographically smallest maximal path of such vertices in
/// the first leaf block of the block-cut tree that has one.
pub fn select_step(l: &Pseudograph, d: u32) -> Result<EliminationStep> {
    check_dimension(d)?;
    if !l.is_connected() {
        return Err(Error::Structural("pseudograph is not connected".into()));
    }
    if l.normal_is_tree() {
        return Err(Error::Structural("normal subgraph is a tree (base case)".into()));
    }
    let degrees = l.extended_degrees();
    if let Some((_, e)) = degrees.iter().find(|(_, e)| e.p < d || e.h > d) {
        return Err(Error::NoOrientation { p: e.p, h: e.h, d });
    }
    let path_degree = ExtendedDegree::new(d + 1, d - 1);
    let bct = l.block_cut_tree()?;
    let cuts = bct.cut_vertices();

    let mut best: Option<EliminationStep> = None;
    for (&v, &e) in &degrees {
        if cuts.contains(&v) || e == path_degree {
            continue;
        }
        let step = EliminationStep::vertex(v, e, d)?;
        if best.as_ref().is_none_or(|b| step.cost < b.cost) {
            best = Some(step);
        }
    }
    if let Some(step) = best {
        return Ok(step);
    }

    for block in bct.leaf_blocks() {
        let members: Vec<Vertex> = block
            .iter()
            .copied()
            .filter(|v| !cuts.contains(v) && degrees[v] == path_degree)
            .collect();
        if let Some(path) = smallest_maximal_path(l, &members) {
            return Ok(EliminationStep::path(path, d));
        }
    }
    Err(Error::Structural("no vertex or path step keeps the pseudograph connected".into()))
}

/// Among `members` (normal degree 2 each), the lexicographically smallest
/// maximal path of length at least 2 that leaves some vertex of `l` behind.
fn smallest_maximal_path(l: &Pseudograph, members: &[Vertex]) -> Option<Vec<Vertex>> {
    let inside = |v: &Vertex| members.binary_search(v).is_ok();
    let adj: BTreeMap<Vertex, Vec<Vertex>> = members
        .iter()
        .map(|&v| (v, l.neighbors(v).into_iter().filter(inside).collect()))
        .collect();
    let mut candidates: Vec<Vec<Vertex>> = Vec::new();
    let walk = |start: Vertex, first: Vertex, limit: usize| -> Vec<Vertex> {
        let mut path = vec![start, first];
        while path.len() < limit {
            let (prev, cur) = (path[path.len() - 2], path[path.len() - 1]);
            match adj[&cur].iter().find(|&&w| w != prev) {
                Some(&next) if !path.contains(&next) => path.push(next),
                _ => break,
            }
        }
        path
    };

    for &v in members {
        match adj[&v].len() {
            // path endpoint inside the run
            1 => candidates.push(walk(v, adj[&v][0], usize::MAX)),
            // on a cycle made entirely of members: drop one vertex
            2 if adj[&v][0] != adj[&v][1] => {
                let cycle = walk(v, adj[&v][0], usize::MAX);
                let closes = cycle.len() >= 3 && adj[&cycle[cycle.len() - 1]].contains(&v);
                if closes && cycle.len() == l.vertex_count() {
                    for first in adj[&v].clone() {
                        candidates.push(walk(v, first, cycle.len() - 1));
                    }
                }
            }
            _ => {}
        }
    }
    candidates
        .into_iter()
        .filter(|p| p.len() >= 2 && p.len() < l.vertex_count())
        .min()
}

/// Applies `step` and returns the canonical successor.
///
/// A vertex step drops the `d - h` normal edges toward the smallest-labelled
/// neighbours; the other normal edges hang off their surviving endpoint. A
/// path step keeps the end edge whose outside endpoint has the smaller label
/// (the first end on ties) as a hanging edge.
pub fn apply_step(l: &Pseudograph, step: &EliminationStep, d: u32) -> Result<Pseudograph> {
    Ok(successors(l, step, d)?.swap_remove(0))
}

/// Every successor of `step`, one per choice counted by its cost, with the
/// canonical successor first. The orientations of `l` split into classes,
/// one per successor, so their counts sum to the count of `l`.
pub fn successors(l: &Pseudograph, step: &EliminationStep, d: u32) -> Result<Vec<Pseudograph>> {
    check_dimension(d)?;
    match &step.kind {
        StepKind::Vertex { vertex, degree } => vertex_successors(l, *vertex, *degree, d),
        StepKind::Path { vertices } => path_successors(l, vertices, d),
    }
}

fn vertex_successors(l: &Pseudograph, v: Vertex, recorded: ExtendedDegree, d: u32) -> Result<Vec<Pseudograph>> {
    let e = l.extended_degree(v).map_err(|_| Error::IllegalStep(format!("vertex {v} not in pseudograph")))?;
    if e != recorded {
        return Err(Error::IllegalStep(format!("vertex {v} has degree {e}, step recorded {recorded}")));
    }
    step_cost_equilibrium(e.p, e.h, d).map_err(|err| Error::IllegalStep(err.to_string()))?;
    let neighbors = l.neighbors(v);
    let mut base = l.clone();
    base.remove_vertex(v);
    let mut out = Vec::new();
    for removed in combinations(neighbors.len(), (d - e.h) as usize) {
        let mut next = base.clone();
        let mut removed = removed.into_iter().peekable();
        for (i, &w) in neighbors.iter().enumerate() {
            if removed.next_if_eq(&i).is_none() {
                next.add_hanging(w, 1);
            }
        }
        out.push(next);
    }
    Ok(out)
}

/// `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else { return out };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn path_successors(l: &Pseudograph, path: &[Vertex], d: u32) -> Result<Vec<Pseudograph>> {
    let illegal = |msg: String| Error::IllegalStep(msg);
    if path.len() < 2 {
        return Err(illegal("path needs at least two vertices".into()));
    }
    if path.len() >= l.vertex_count() {
        return Err(illegal("path covers the whole pseudograph".into()));
    }
    let mut sorted = path.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != path.len() {
        return Err(illegal("path repeats a vertex".into()));
    }
    let target = ExtendedDegree::new(d + 1, d - 1);
    for &v in path {
        let e = l.extended_degree(v).map_err(|_| illegal(format!("vertex {v} not in pseudograph")))?;
        if e != target {
            return Err(illegal(format!("path vertex {v} has degree {e}, need {target}")));
        }
    }
    let on_path = |v: &Vertex| path.contains(v);
    let mut next = l.clone();
    for pair in path.windows(2) {
        if !next.remove_normal(pair[0], pair[1]) {
            return Err(illegal(format!("no normal edge between {} and {}", pair[0], pair[1])));
        }
    }
    let outside = |v: Vertex| -> Result<Vertex> {
        let out: Vec<Vertex> = next.neighbors(v).into_iter().filter(|w| !on_path(w)).collect();
        match out.as_slice() {
            [w] => Ok(*w),
            _ => Err(illegal(format!("path end {v} does not have exactly one outside neighbour"))),
        }
    };
    let first = outside(path[0])?;
    let last = outside(path[path.len() - 1])?;
    for &v in path {
        next.remove_vertex(v);
    }
    let ends = if last < first { [last, first] } else { [first, last] };
    Ok(ends
        .into_iter()
        .map(|w| {
            let mut s = next.clone();
            s.add_hanging(w, 1);
            s
        })
        .collect())
}

/// Which successor a trace follows.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuccessorRule {
    /// The successor built by [`apply_step`].
    #[default]
    Canonical,
    /// The successor with the most orientations (first on ties). The product
    /// of costs then bounds the count of the input by induction.
    MaxCount,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    /// Index into the connected components of the input.
    pub component: usize,
    #[serde(flatten)]
    pub step: EliminationStep,
    #[serde(with = "crate::util::decimal")]
    pub running_product: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Terminal {
    Empty,
    /// One vertex carrying exactly `d` hanging edges.
    SingleVertex { component: usize, vertex: Vertex },
    /// Normal subgraph is a tree; such a pseudograph has 0 or 1 orientations.
    Tree { component: usize, vertices: usize, hanging: u64, orientations: u8 },
    NoOrientation { component: usize, reason: String },
    Stuck { component: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationTrace {
    pub steps: Vec<TraceStep>,
    #[serde(with = "crate::util::decimal")]
    pub product_bound: BigUint,
    pub terminals: Vec<Terminal>,
    /// Set when some component provably has no orientation.
    pub zero_count: bool,
    pub rule: SuccessorRule,
}

impl EliminationTrace {
    /// 0 when a component has no orientation, else the product of costs.
    pub fn bound(&self) -> BigUint {
        if self.zero_count {
            BigUint::default()
        } else {
            self.product_bound.clone()
        }
    }

    pub fn is_complete(&self) -> bool {
        !self.terminals.iter().any(|t| matches!(t, Terminal::Stuck { .. }))
    }
}

/// Runs the elimination on every component and multiplies the costs.
pub fn eliminate(l: &Pseudograph, d: u32) -> EliminationTrace {
    eliminate_with(l, d, SuccessorRule::Canonical)
}

pub fn eliminate_with(l: &Pseudograph, d: u32, rule: SuccessorRule) -> EliminationTrace {
    let mut trace = EliminationTrace {
        steps: Vec::new(),
        product_bound: BigUint::one(),
        terminals: Vec::new(),
        zero_count: false,
        rule,
    };
    if l.is_empty() {
        trace.terminals.push(Terminal::Empty);
        return trace;
    }
    for (component, comp) in l.components().into_iter().enumerate() {
        let mut current = comp;
        loop {
            if let Some(reason) = zero_reason(&current, d) {
                trace.zero_count = true;
                trace.terminals.push(Terminal::NoOrientation { component, reason });
                break;
            }
            if current.vertex_count() == 1 {
                let vertex = current.vertices().next().expect("one vertex");
                trace.terminals.push(Terminal::SingleVertex { component, vertex });
                break;
            }
            if current.normal_is_tree() {
                let orientations = u8::from(tree_orientable(&current, d));
                trace.zero_count |= orientations == 0;
                trace.terminals.push(Terminal::Tree {
                    component,
                    vertices: current.vertex_count(),
                    hanging: current.hanging_count(),
                    orientations,
                });
                break;
            }
            let next = select_step(&current, d).and_then(|s| follow(&current, &s, d, rule).map(|n| (s, n)));
            match next {
                Ok((step, successor)) => {
                    trace.product_bound *= &step.cost;
                    trace.steps.push(TraceStep {
                        component,
                        step,
                        running_product: trace.product_bound.clone(),
                    });
                    current = successor;
                }
                Err(err) => {
                    trace.terminals.push(Terminal::Stuck { component, reason: err.to_string() });
                    break;
                }
            }
        }
    }
    trace
}

fn follow(l: &Pseudograph, step: &EliminationStep, d: u32, rule: SuccessorRule) -> Result<Pseudograph> {
    match rule {
        SuccessorRule::Canonical => apply_step(l, step, d),
        SuccessorRule::MaxCount => {
            let mut best: Option<(BigUint, Pseudograph)> = None;
            for s in successors(l, step, d)? {
                let count = count_valid_orientations(&s, d).count;
                if best.as_ref().is_none_or(|(c, _)| count > *c) {
                    best = Some((count, s));
                }
            }
            best.map(|b| b.1).ok_or_else(|| Error::IllegalStep("step has no successor".into()))
        }
    }
}

/// Peels leaves: each leaf's single normal edge is forced by its residual
/// outdegree.
fn tree_orientable(l: &Pseudograph, d: u32) -> bool {
    let mut need: BTreeMap<Vertex, i64> = l.vertices().map(|v| (v, d as i64 - l.hanging(v) as i64)).collect();
    let mut adj: BTreeMap<Vertex, Vec<Vertex>> = l.vertices().map(|v| (v, l.neighbors(v))).collect();
    let mut leaves: Vec<Vertex> = adj.iter().filter(|(_, n)| n.len() == 1).map(|(&v, _)| v).collect();
    while let Some(v) = leaves.pop() {
        let Some(&u) = adj[&v].first() else { continue };
        match need[&v] {
            1 => {}
            0 => *need.get_mut(&u).expect("in tree") -= 1,
            _ => return false,
        }
        need.insert(v, 0);
        adj.get_mut(&v).expect("in tree").clear();
        let nu = adj.get_mut(&u).expect("in tree");
        let pos = nu.iter().position(|&w| w == v).expect("symmetric");
        nu.remove(pos);
        if nu.len() == 1 {
            leaves.push(u);
        }
    }
    need.values().all(|&r| r == 0)
}

/// `alpha_d^n * beta_d^(k-1)`, evaluated in log space.
pub fn formula_bound(n: u64, k: u64, ab: &AlphaBeta) -> f64 {
    (n as f64 * ab.alpha.ln() + (k as f64 - 1.0) * ab.beta.ln()).exp()
}
