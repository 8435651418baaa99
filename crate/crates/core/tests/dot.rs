use std::path::Path;

use enginemap::export::{emit_file_dot, read_file_dot};
use enginemap::FileGraph;
use proptest::prelude::*;

fn node_name() -> impl Strategy<Value = String> {
    prop_oneof![
        "/[a-z]{1,8}(/[A-Za-z0-9_.]{1,10}){0,4}\\.(h|cpp|hpp|inl)",
        "[a-z0-9 _./-]{1,20}",
        "[\"\\\\a-z ;{}=\\[\\]#-]{1,12}",
        "\\PC{1,8}",
    ]
}

fn file_graph() -> impl Strategy<Value = FileGraph> {
    prop::collection::btree_set(node_name(), 0..=200).prop_flat_map(|nodes| {
        let nodes: Vec<String> = nodes.into_iter().collect();
        let n = nodes.len().max(1);
        let edges = prop::collection::vec((0..n, 0..n), 0..(3 * n));
        (Just(nodes), edges).prop_map(|(nodes, edges)| {
            let mut g = FileGraph::new();
            for node in &nodes {
                g.add_node(node.clone());
            }
            if !nodes.is_empty() {
                for (a, b) in edges {
                    g.add_edge(nodes[a].clone(), nodes[b].clone());
                }
            }
            g
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn read_of_emit_is_identity(g in file_graph()) {
        let text = emit_file_dot(&g);
        let back = read_file_dot(&text).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn emit_is_deterministic(g in file_graph()) {
        prop_assert_eq!(emit_file_dot(&g), emit_file_dot(&g.clone()));
    }
}

#[test]
fn include_graph_script_output_is_readable() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/dot/alpha.include.dot");
    let g = read_file_dot(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(g.edges().len(), 32);
    assert_eq!(g.nodes().len(), 22);
    assert!(g.contains_edge("ui/Button.cpp", "platform/Platform.h"));
    assert!(!g.nodes().iter().any(|n| n == "overlap" || n == "clusterrank"));
}

#[test]
fn undirected_graphs_are_rejected() {
    assert!(read_file_dot("graph g { a -- b }").is_err());
    assert!(read_file_dot("digraph g { a -- b }").is_err());
}
