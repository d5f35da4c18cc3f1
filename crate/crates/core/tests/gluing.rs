//! Random inputs for the general gluing step: a graph whose vertices outside
//! a shared set `S` fall into up to three parts with no edges between parts.

use std::collections::BTreeMap;

use pdim_core::exact::{encode_small, greedy_equivalence_encode, SearchBudget};
use pdim_core::graph::{degeneracy_ordering, greedy_coloring};
use pdim_core::treewidth::{amalgamate_general, GeneralAmalgamationPlan};
use pdim_core::{verify_encoding, Graph, Vertex};
use proptest::prelude::*;

fn instance() -> impl Strategy<Value = (Graph, Vec<Vertex>, Vec<Vec<Vertex>>)> {
    (0usize..4, proptest::collection::vec(1usize..5, 1..4))
        .prop_flat_map(|(s_len, part_lens)| {
            let n = s_len + part_lens.iter().sum::<usize>();
            let bits = n * (n - 1) / 2;
            (
                Just(s_len),
                Just(part_lens),
                proptest::collection::vec(any::<bool>(), bits),
            )
        })
        .prop_map(|(s_len, part_lens, bits)| {
            let n = s_len + part_lens.iter().sum::<usize>();
            let s: Vec<Vertex> = (0..s_len as Vertex).collect();
            let mut parts = Vec::new();
            let mut next = s_len as Vertex;
            for len in part_lens {
                parts.push((next..next + len as Vertex).collect::<Vec<_>>());
                next += len as Vertex;
            }
            let part_of = |v: Vertex| parts.iter().position(|p| p.contains(&v));
            let mut edges = Vec::new();
            let mut b = 0;
            for u in 0..n as Vertex {
                for v in u + 1..n as Vertex {
                    let (pu, pv) = (part_of(u), part_of(v));
                    let allowed = pu.is_none() || pv.is_none() || pu == pv;
                    if allowed && bits[b] {
                        edges.push((u, v));
                    }
                    b += 1;
                }
            }
            (Graph::new(n, edges).unwrap(), s, parts)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn glued_encoding_is_valid((g, s, parts) in instance(), exact_pieces in any::<bool>()) {
        let pieces: Vec<(Graph, _)> = parts
            .iter()
            .map(|p| {
                let mut verts = p.clone();
                verts.extend_from_slice(&s);
                let h = g.induced_subgraph(&verts).unwrap().with_clique(&s).unwrap();
                let e = if exact_pieces {
                    encode_small(&h, SearchBudget::for_graph(&h)).encoding
                } else {
                    greedy_equivalence_encode(&h)
                };
                (h, e)
            })
            .collect();
        let outside: Vec<Vertex> = parts.iter().flatten().copied().collect();
        let rest = g.induced_subgraph(&outside).unwrap();
        let (order, _) = degeneracy_ordering(&rest);
        let colors = greedy_coloring(&rest, &order);
        let coloring: BTreeMap<Vertex, usize> =
            colors.iter().enumerate().map(|(i, &c)| (rest.id(i), c)).collect();
        let s_graph = g.induced_subgraph(&s).unwrap();
        let plan = GeneralAmalgamationPlan {
            s: s.clone(),
            pieces,
            coloring,
            phi_s: encode_small(&s_graph, SearchBudget::for_graph(&s_graph)).encoding,
        };
        let e = amalgamate_general(&plan).unwrap();
        let report = verify_encoding(&g, &e).unwrap();
        prop_assert!(report.valid, "{:?}", report.violations);
        let prefix = plan.pieces.iter().map(|p| p.1.dimension()).max().unwrap();
        prop_assert_eq!(e.dimension(), prefix + plan.m_pad());
    }
}
