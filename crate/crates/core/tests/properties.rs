use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use proptest::prelude::*;
use rigibound_core::analysis::{analyze, AnalysisConfig, BoundReport, CliquePolicy};
use rigibound_core::bct::block_cut_tree;
use rigibound_core::bounds::{alpha_beta, c_factor};
use rigibound_core::elimination::{
    apply_step, eliminate, eliminate_with, formula_bound, select_step, successors, SuccessorRule,
};
use rigibound_core::graph::{find_cliques, henneberg1_generate, maxwell_check, parse_graph, to_edge_list};
use rigibound_core::orient::{
    b_from_permanent, count_valid_orientations, count_valid_orientations_with, incidence_permanent, CountOptions,
};
use rigibound_core::pseudograph::build_pseudograph;
use rigibound_core::{Graph, Pseudograph, Vertex};

fn henneberg() -> impl Strategy<Value = (Graph, u32)> {
    (prop_oneof![Just(2u32), Just(3u32)], 0usize..=6, any::<u64>())
        .prop_map(|(d, extra, seed)| (henneberg1_generate(d as usize + 1 + extra, d, seed).unwrap(), d))
}

fn random_graph() -> impl Strategy<Value = Graph> {
    (2u64..12, proptest::collection::vec((1u64..12, 1u64..12), 0..30)).prop_map(|(n, pairs)| {
        let mut g = Graph::new();
        for v in 1..=n {
            g.add_vertex(v);
        }
        for (a, b) in pairs {
            let (a, b) = (a.min(n), b.min(n));
            if a != b && !g.has_edge(a, b) {
                g.add_edge(a, b).unwrap();
            }
        }
        g
    })
}

fn relabel(g: &Graph, shift: Vertex, reverse: bool) -> (Graph, impl Fn(Vertex) -> Vertex) {
    let n = g.vertex_count() as Vertex;
    let map = move |v: Vertex| if reverse { n + 1 - v + shift } else { v + shift };
    let mut h = Graph::new();
    for v in g.vertices() {
        h.add_vertex(map(v));
    }
    for (a, b) in g.edges() {
        h.add_edge(map(a), map(b)).unwrap();
    }
    (h, map)
}

/// Follows the canonical trace of one component by hand.
fn check_steps(l: &Pseudograph, d: u32) -> Result<(), TestCaseError> {
    let mut cur = l.clone();
    while cur.vertex_count() > 1 && !cur.normal_is_tree() {
        let Ok(step) = select_step(&cur, d) else { break };
        for s in successors(&cur, &step, d).unwrap() {
            prop_assert!(s.is_connected());
            prop_assert_eq!(s.hanging_count() as i64 - cur.hanging_count() as i64, step.equilibrium);
            prop_assert!(s.is_balanced(d) || !cur.is_balanced(d));
        }
        cur = apply_step(&cur, &step, d).unwrap();
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn edge_list_round_trip(g in random_graph()) {
        let text = to_edge_list(&g);
        prop_assert_eq!(parse_graph(&text).unwrap(), g);
    }

    #[test]
    fn henneberg_graphs_pass_maxwell((g, d) in henneberg()) {
        let r = maxwell_check(&g, d).unwrap();
        prop_assert!(r.count_ok);
        prop_assert_eq!(r.sparse, Some(true));
    }

    #[test]
    fn block_cut_tree_is_a_tree(g in random_graph()) {
        if g.is_connected() {
            let t = block_cut_tree(&g).unwrap();
            prop_assert!(t.is_tree());
            let covered: usize = t.blocks().map(|b| b.len()).sum();
            prop_assert!(covered >= g.vertex_count());
        } else {
            prop_assert!(block_cut_tree(&g).is_err());
        }
    }

    #[test]
    fn pseudographs_are_balanced((g, d) in henneberg()) {
        for k in find_cliques(&g, d).unwrap() {
            let l = build_pseudograph(&g, &k).unwrap();
            prop_assert!(l.is_balanced(d));
            prop_assert_eq!(l.vertex_count(), g.vertex_count() - d as usize);
        }
    }

    #[test]
    fn permanent_matches_backtracking((g, d) in henneberg()) {
        let n = g.vertex_count();
        for k in find_cliques(&g, d).unwrap() {
            let l = build_pseudograph(&g, &k).unwrap();
            let exact = count_valid_orientations(&l, d).count;
            let per = incidence_permanent(&g, &k, d).unwrap();
            prop_assert_eq!(b_from_permanent(&per, n, d), BigRational::from_integer(exact.into()));
        }
    }

    #[test]
    fn count_ignores_labels_and_threads((g, d) in henneberg(), shift in 0u64..50, reverse: bool) {
        let (h, map) = relabel(&g, shift, reverse);
        for k in find_cliques(&g, d).unwrap() {
            let l = build_pseudograph(&g, &k).unwrap();
            let members: Vec<Vertex> = k.members().iter().map(|&v| map(v)).collect();
            let k2 = rigidity_clique(&h, &members);
            let l2 = build_pseudograph(&h, &k2).unwrap();
            let a = count_valid_orientations(&l, d).count;
            prop_assert_eq!(&a, &count_valid_orientations(&l2, d).count);
            let serial = CountOptions { deadline: None, parallel: false };
            prop_assert_eq!(&a, &count_valid_orientations_with(&l, d, &serial).unwrap().count);
        }
    }

    #[test]
    fn elimination_steps_keep_connectivity_and_balance((g, d) in henneberg()) {
        for k in find_cliques(&g, d).unwrap() {
            let l = build_pseudograph(&g, &k).unwrap();
            for comp in l.components() {
                check_steps(&comp, d)?;
            }
        }
    }

    #[test]
    fn successor_counts_sum_to_count((g, d) in henneberg()) {
        for k in find_cliques(&g, d).unwrap() {
            let l = build_pseudograph(&g, &k).unwrap();
            for comp in l.components() {
                if comp.vertex_count() < 2 || comp.normal_is_tree() {
                    continue;
                }
                let step = select_step(&comp, d).unwrap();
                let sum: BigUint = successors(&comp, &step, d)
                    .unwrap()
                    .iter()
                    .map(|s| count_valid_orientations(s, d).count)
                    .sum();
                prop_assert_eq!(sum, count_valid_orientations(&comp, d).count);
            }
        }
    }

    #[test]
    fn max_count_elimination_and_formula_dominate((g, d) in henneberg()) {
        let ab = alpha_beta(d).unwrap();
        for k in find_cliques(&g, d).unwrap() {
            let l = build_pseudograph(&g, &k).unwrap();
            let exact = count_valid_orientations(&l, d).count;
            let t = eliminate_with(&l, d, SuccessorRule::MaxCount);
            prop_assert!(t.is_complete());
            prop_assert!(t.bound() >= exact);
            for comp in l.components() {
                let e: f64 = count_valid_orientations(&comp, d).count.to_string().parse().unwrap();
                let f = formula_bound(comp.vertex_count() as u64, comp.hanging_count(), &ab);
                prop_assert!(e <= f * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn trace_product_is_product_of_costs((g, d) in henneberg()) {
        for k in find_cliques(&g, d).unwrap() {
            let t = eliminate(&build_pseudograph(&g, &k).unwrap(), d);
            let product: BigUint = t.steps.iter().map(|s| s.step.cost.clone()).product();
            prop_assert_eq!(&product, &t.product_bound);
            if let Some(last) = t.steps.last() {
                prop_assert_eq!(&last.running_product, &t.product_bound);
            }
        }
    }

    #[test]
    fn c_factor_at_most_one(d in 2u32..=12, p_off in 0u32..40, h in 0u32..=12) {
        let h = h.min(d);
        let p = (d + p_off).max(h);
        prop_assume!(!(p == d + 1 && h == d - 1) && !(p == d && h == d));
        let ab = alpha_beta(d).unwrap();
        prop_assert!(c_factor(p, h, d, &ab) <= 1.0 + 1e-12);
    }

    #[test]
    fn report_json_round_trip((g, d) in henneberg()) {
        let mut cfg = AnalysisConfig::new(d);
        cfg.policy = CliquePolicy::All;
        let r = analyze("g", &g, &cfg).unwrap();
        let back: BoundReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        prop_assert_eq!(back, r);
    }
}

fn rigidity_clique(g: &Graph, members: &[Vertex]) -> rigibound_core::Clique {
    rigibound_core::Clique::new(g, members).unwrap()
}

#[test]
fn profile_sizes_are_consistent() {
    let g = henneberg1_generate(9, 2, 3).unwrap();
    let sizes: BTreeMap<usize, usize> = find_cliques(&g, 2)
        .unwrap()
        .iter()
        .map(|k| (k.len(), build_pseudograph(&g, k).unwrap().vertex_count()))
        .collect();
    assert_eq!(sizes, BTreeMap::from([(2, 7)]));
}
