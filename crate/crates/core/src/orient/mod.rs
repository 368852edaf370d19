//! Exact counts of outdegree-constrained pseudograph orientations.
//!
//! Two independent routes: backtracking over the normal edges
//! ([`count_valid_orientations`]) and the permanent of the replicated
//! incidence matrix ([`incidence_permanent`], [`b_from_permanent`]).

mod backtrack;
mod permanent;

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::pseudograph::build_pseudograph;
use crate::{check_dimension, Clique, Error, Graph, Pseudograph, Result, Vertex};
use backtrack::{Control, Instance};

pub use permanent::{
    b_from_permanent, incidence_matrix, incidence_permanent, incidence_permanent_with, permanent,
    MAX_RYSER_SIDE,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMethod {
    Backtracking,
    Permanent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientationCount {
    #[serde(with = "crate::util::decimal")]
    pub count: BigUint,
    pub method: CountMethod,
}

/// Required outdegree of every pseudograph vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutdegreeProfile(BTreeMap<Vertex, u32>);

impl OutdegreeProfile {
    pub fn uniform(l: &Pseudograph, d: u32) -> Self {
        Self(l.vertices().map(|v| (v, d)).collect())
    }

    pub fn from_map(map: BTreeMap<Vertex, u32>) -> Self {
        Self(map)
    }

    pub fn get(&self, v: Vertex) -> Option<u32> {
        self.0.get(&v).copied()
    }

    pub fn set(&mut self, v: Vertex, outdegree: u32) {
        self.0.insert(v, outdegree);
    }

    pub fn total(&self) -> u64 {
        self.0.values().map(|&x| x as u64).sum()
    }

    pub fn as_map(&self) -> &BTreeMap<Vertex, u32> {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CountOptions {
    pub deadline: Option<Instant>,
    /// Split the top of the search tree across the rayon pool.
    pub parallel: bool,
}

/// Orientations of the normal edges giving every vertex outdegree `d`
/// (hanging edges included).
pub fn count_valid_orientations(l: &Pseudograph, d: u32) -> OrientationCount {
    count_valid_orientations_with(l, d, &CountOptions::default())
        .expect("no deadline, no profile mismatch")
}

pub fn count_valid_orientations_with(l: &Pseudograph, d: u32, opts: &CountOptions) -> Result<OrientationCount> {
    count_with_profile_with(l, &OutdegreeProfile::uniform(l, d), opts)
}

pub fn count_with_profile(l: &Pseudograph, profile: &OutdegreeProfile) -> Result<OrientationCount> {
    count_with_profile_with(l, profile, &CountOptions::default())
}

/// Counts per connected component and multiplies.
pub fn count_with_profile_with(
    l: &Pseudograph,
    profile: &OutdegreeProfile,
    opts: &CountOptions,
) -> Result<OrientationCount> {
    let covered: BTreeSet<Vertex> = profile.0.keys().copied().collect();
    let vertices: BTreeSet<Vertex> = l.vertices().collect();
    if let Some(v) = vertices.difference(&covered).next() {
        return Err(Error::InvalidProfile(format!("no outdegree given for vertex {v}")));
    }
    if let Some(v) = covered.difference(&vertices).next() {
        return Err(Error::InvalidProfile(format!("vertex {v} is not in the pseudograph")));
    }
    let zero = OrientationCount { count: BigUint::default(), method: CountMethod::Backtracking };
    if profile.total() != l.normal_count() as u64 + l.hanging_count() {
        return Ok(zero);
    }
    let degrees = l.extended_degrees();
    if degrees.iter().any(|(v, e)| {
        let want = profile.0[v];
        e.p < want || e.h > want
    }) {
        return Ok(zero);
    }

    let ctl = Control { deadline: opts.deadline, parallel: opts.parallel };
    let mut total = BigUint::one();
    for comp in l.components() {
        let c = count_component(&comp, profile, ctl)?;
        if c == 0 {
            return Ok(zero);
        }
        total *= c;
    }
    Ok(OrientationCount { count: total, method: CountMethod::Backtracking })
}

fn count_component(comp: &Pseudograph, profile: &OutdegreeProfile, ctl: Control) -> Result<u128> {
    let index: BTreeMap<Vertex, usize> = comp.vertices().enumerate().map(|(i, v)| (v, i)).collect();
    let need: Vec<i64> = comp
        .vertices()
        .map(|v| profile.0[&v] as i64 - comp.hanging(v) as i64)
        .collect();
    if need.iter().sum::<i64>() != comp.normal_count() as i64 {
        return Ok(0);
    }
    let ends = comp.normal_edges().iter().map(|(a, b)| (index[a], index[b])).collect();
    Instance::new(index.len(), ends).count(need, ctl)
}

/// Fixing used when a rigid graph in 3-space has no triangle: the endpoints
/// of `fixed` are pinned, `partial` keeps two degrees of freedom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PartialFixing {
    pub fixed: (Vertex, Vertex),
    pub partial: Vertex,
}

/// Every (edge, third vertex) choice, edges in lexicographic order.
pub fn partial_fixings(g: &Graph) -> Vec<PartialFixing> {
    g.edges()
        .flat_map(|(a, b)| {
            g.vertices()
                .filter(move |&w| w != a && w != b)
                .map(move |w| PartialFixing { fixed: (a, b), partial: w })
        })
        .collect()
}

/// Pseudograph and outdegree profile for a partial fixing in dimension 3:
/// the fixed pair is removed as a 2-clique, the partially fixed vertex must
/// reach outdegree 2 and every other vertex outdegree 3.
pub fn partially_fixed_instance(g: &Graph, fixing: PartialFixing) -> Result<(Pseudograph, OutdegreeProfile)> {
    let (a, b) = fixing.fixed;
    let clique = Clique::new(g, &[a, b])?;
    let l = build_pseudograph(g, &clique)?;
    if !l.contains(fixing.partial) {
        return Err(Error::UnknownVertex(fixing.partial));
    }
    let mut profile = OutdegreeProfile::uniform(&l, 3);
    profile.set(fixing.partial, 2);
    Ok((l, profile))
}

/// `2^(|V|-d) * B(G, K_d)`.
pub fn embedding_bound_orientations(g: &Graph, k: &Clique, d: u32) -> Result<BigUint> {
    check_dimension(d)?;
    if k.len() != d as usize {
        return Err(Error::InvalidSize(format!("clique has {} vertices, dimension is {d}", k.len())));
    }
    let l = build_pseudograph(g, k)?;
    let b = count_valid_orientations(&l, d).count;
    Ok(b << (g.vertex_count() - d as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{families, find_cliques, henneberg1_generate};

    /// Enumerates all 2^|F| direction assignments.
    fn brute_force(l: &Pseudograph, profile: &OutdegreeProfile) -> u64 {
        let edges = l.normal_edges();
        assert!(edges.len() <= 22);
        (0u64..1 << edges.len())
            .filter(|mask| {
                let mut out: BTreeMap<Vertex, u32> = l.vertices().map(|v| (v, l.hanging(v))).collect();
                for (i, &(a, b)) in edges.iter().enumerate() {
                    let tail = if mask & (1 << i) != 0 { a } else { b };
                    *out.get_mut(&tail).unwrap() += 1;
                }
                out.iter().all(|(v, &o)| profile.get(*v) == Some(o))
            })
            .count() as u64
    }

    fn prism_l() -> Pseudograph {
        let g = families::prism();
        build_pseudograph(&g, &Clique::new(&g, &[1, 2]).unwrap()).unwrap()
    }

    #[test]
    fn prism_has_two() {
        assert_eq!(count_valid_orientations(&prism_l(), 2).count, BigUint::from(2u32));
    }

    #[test]
    fn single_vertex_cases() {
        let one = Pseudograph::new([3], [], [(3, 2)]).unwrap();
        assert_eq!(count_valid_orientations(&one, 2).count, BigUint::one());
        let over = Pseudograph::new([3], [], [(3, 3)]).unwrap();
        assert_eq!(count_valid_orientations(&over, 2).count, BigUint::default());
        let profile = OutdegreeProfile::from_map(BTreeMap::from([(3, 2)]));
        assert_eq!(count_with_profile(&one, &profile).unwrap().count, BigUint::one());
    }

    #[test]
    fn k4_minus_edge_is_forced() {
        let g = families::k4_minus_edge();
        let l = build_pseudograph(&g, &Clique::new(&g, &[1, 2]).unwrap()).unwrap();
        assert_eq!(count_valid_orientations(&l, 2).count, BigUint::one());
    }

    #[test]
    fn profile_must_cover_exactly_u() {
        let l = prism_l();
        let partial = OutdegreeProfile::from_map(BTreeMap::from([(3, 2)]));
        assert!(matches!(count_with_profile(&l, &partial), Err(Error::InvalidProfile(_))));
        let mut extra = OutdegreeProfile::uniform(&l, 2);
        extra.set(99, 1);
        assert!(matches!(count_with_profile(&l, &extra), Err(Error::InvalidProfile(_))));
    }

    #[test]
    fn uniform_profile_matches_valid_count() {
        let l = prism_l();
        assert_eq!(
            count_with_profile(&l, &OutdegreeProfile::uniform(&l, 2)).unwrap().count,
            count_valid_orientations(&l, 2).count
        );
    }

    #[test]
    fn embedding_bounds() {
        let g = families::prism();
        let k = Clique::new(&g, &[1, 2]).unwrap();
        assert_eq!(embedding_bound_orientations(&g, &k, 2).unwrap(), BigUint::from(32u32));
        let t = families::triangle();
        let k = Clique::new(&t, &[1, 2]).unwrap();
        assert_eq!(embedding_bound_orientations(&t, &k, 2).unwrap(), BigUint::from(2u32));
        assert!(embedding_bound_orientations(&t, &k, 3).is_err());
    }

    #[test]
    fn octahedron_count() {
        let g = families::octahedron();
        let k = Clique::new(&g, &[1, 2, 3]).unwrap();
        let l = build_pseudograph(&g, &k).unwrap();
        let b = brute_force(&l, &OutdegreeProfile::uniform(&l, 3));
        assert!(b > 0);
        assert_eq!(embedding_bound_orientations(&g, &k, 3).unwrap(), BigUint::from(8 * b));
    }

    #[test]
    fn backtracking_matches_brute_force() {
        for d in [2u32, 3] {
            for seed in 0..25 {
                let n = if d == 2 { 10 } else { 8 };
                let g = henneberg1_generate(n, d, seed).unwrap();
                for k in find_cliques(&g, d).unwrap().into_iter().take(4) {
                    let l = build_pseudograph(&g, &k).unwrap();
                    let expect = brute_force(&l, &OutdegreeProfile::uniform(&l, d));
                    let got = count_valid_orientations(&l, d).count;
                    assert_eq!(got, BigUint::from(expect), "d={d} seed={seed} k={k:?}");
                    let par = count_valid_orientations_with(&l, d, &CountOptions { parallel: true, deadline: None })
                        .unwrap()
                        .count;
                    assert_eq!(par, got);
                }
            }
        }
    }

    #[test]
    fn partial_fixing_on_bipartite_graph() {
        let g = families::complete_bipartite(6, 4);
        assert!(find_cliques(&g, 3).unwrap().is_empty());
        let fixing = PartialFixing { fixed: (1, 7), partial: 2 };
        let (l, profile) = partially_fixed_instance(&g, fixing).unwrap();
        assert_eq!(profile.total(), l.normal_count() as u64 + l.hanging_count());
        let b = count_with_profile(&l, &profile).unwrap().count;
        assert!(b > BigUint::default());
        assert_eq!(b, BigUint::from(K64_PARTIAL_FIXING_COUNT));
        assert_eq!(partial_fixings(&g).len(), 24 * 8);
    }

    /// Recorded from the backtracking count and cross-checked by the
    /// brute-force enumeration in `partial_fixing_matches_brute_force`.
    const K64_PARTIAL_FIXING_COUNT: u64 = 36;

    #[test]
    fn partial_fixing_matches_brute_force() {
        let g = families::complete_bipartite(6, 4);
        let (l, profile) = partially_fixed_instance(&g, PartialFixing { fixed: (1, 7), partial: 2 }).unwrap();
        assert_eq!(count_with_profile(&l, &profile).unwrap().count, BigUint::from(brute_force(&l, &profile)));
    }
}
