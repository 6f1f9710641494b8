//! Deterministic graph corpora for cross-checking invariants.
//!
//! Two sources: an exhaustive enumeration of every small normalized
//! multigraph up to isomorphism, and the full sweep of built-in family
//! constructions. Both are used by the claim-verification suite and the
//! integration tests to exercise properties over many graphs at once.

use crate::error::Result;
use crate::families::{build_example, build_pi, build_qi, build_sn, build_xn, build_yn};
use crate::graph::TopoGraph;
use crate::iso::graphs_isomorphic;

/// Every connected multigraph with at most `max_edges` edges that is stable
/// under normalization, listed up to isomorphism in a deterministic order.
///
/// Stability means the graph is its own normal form: either the one-vertex
/// loop (the circle's normal form) or a graph with no order-2 vertices.
/// Loop reversals and parallel-edge swaps are invisible to this enumeration
/// since it works up to isomorphism.
pub fn small_graph_corpus(max_edges: usize) -> Vec<TopoGraph> {
    let mut kept: Vec<TopoGraph> = Vec::new();
    for edges in 1..=max_edges {
        for vertices in 1..=edges + 1 {
            enumerate_multigraphs(vertices, edges, &mut kept);
        }
    }
    kept
}

/// Append all qualifying multisets of `edges` vertex pairs over `vertices`
/// labels, deduplicated against everything already kept.
fn enumerate_multigraphs(vertices: usize, edges: usize, kept: &mut Vec<TopoGraph>) {
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..vertices {
        for j in i..vertices {
            pairs.push((i, j));
        }
    }
    let mut choice = vec![0usize; edges];
    loop {
        if let Some(g) = build_candidate(vertices, &choice, &pairs) {
            if !kept.iter().any(|h| graphs_isomorphic(&g, h)) {
                kept.push(g);
            }
        }
        // Advance the non-decreasing index vector (multiset enumeration).
        let mut k = edges;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            if choice[k] + 1 < pairs.len() {
                choice[k] += 1;
                for i in k + 1..edges {
                    choice[i] = choice[k];
                }
                break;
            }
        }
    }
}

fn build_candidate(
    vertices: usize,
    choice: &[usize],
    pairs: &[(usize, usize)],
) -> Option<TopoGraph> {
    let mut used = vec![false; vertices];
    let mut order = vec![0u32; vertices];
    for &c in choice {
        let (i, j) = pairs[c];
        used[i] = true;
        used[j] = true;
        if i == j {
            order[i] += 2;
        } else {
            order[i] += 1;
            order[j] += 1;
        }
    }
    if !used.iter().all(|&u| u) {
        return None;
    }
    let circle = vertices == 1 && choice.len() == 1;
    if !circle && order.iter().any(|&o| o == 2) {
        return None;
    }
    let names: Vec<String> = (0..vertices).map(|i| format!("v{i}")).collect();
    let edge_list: Vec<(String, String, String)> = choice
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            let (i, j) = pairs[c];
            (format!("e{k}"), names[i].clone(), names[j].clone())
        })
        .collect();
    // Connectivity is enforced by the constructor.
    TopoGraph::new(&names, &edge_list).ok()
}

/// All built-in family graphs, labeled, in a deterministic order: the
/// two-branch example, stars, looped paths and their decorated variants,
/// and both recursive chains.
pub fn family_corpus() -> Result<Vec<(String, TopoGraph)>> {
    let mut out = Vec::new();
    out.push(("example".to_string(), build_example()?.graph));
    for n in 3..=5 {
        out.push((format!("sn {n}"), build_sn(n)?.graph));
    }
    for i in 1..=5 {
        out.push((format!("pi {i}"), build_pi(i)?.graph));
    }
    for i in 1..=5 {
        out.push((format!("qi {i}"), build_qi(i)?.graph));
    }
    for n in 1..=20 {
        out.push((format!("xn {n}"), build_xn(n)?.graph));
    }
    for n in 1..=14 {
        out.push((format!("yn {n}"), build_yn(n)?.graph));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{normalize, Shape};

    #[test]
    fn tiny_corpus_is_the_expected_list() {
        let one = small_graph_corpus(1);
        assert_eq!(one.len(), 2); // circle and arc
        assert_eq!(one[0].shape(), Shape::Circle);
        assert_eq!(one[1].shape(), Shape::Arc);
        let two = small_graph_corpus(2);
        // adds the two-loop rose and the loop-plus-pendant graph
        assert_eq!(two.len(), 4);
    }

    #[test]
    fn three_edge_graphs_are_complete() {
        let three = small_graph_corpus(3);
        // New at three edges: three-loop rose, two loops plus a pendant,
        // loop plus two pendants, dumbbell, theta, and the triod.
        assert_eq!(three.len(), 10);
        for g in &three {
            let ng = normalize(g).unwrap();
            assert_eq!(
                ng.graph().vertex_count(),
                g.vertex_count(),
                "corpus graph not normalization-stable: {}",
                g.serialize()
            );
            assert_eq!(ng.graph().edge_count(), g.edge_count());
        }
    }

    #[test]
    fn corpus_members_are_pairwise_nonisomorphic() {
        let all = small_graph_corpus(4);
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                assert!(!graphs_isomorphic(a, b));
            }
        }
    }

    #[test]
    fn family_corpus_has_all_entries() {
        let fams = family_corpus().unwrap();
        assert_eq!(fams.len(), 1 + 3 + 5 + 5 + 20 + 14);
        assert!(fams.iter().all(|(_, g)| g.vertex_count() >= 1));
    }
}
