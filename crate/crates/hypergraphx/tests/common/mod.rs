//! Shared generators for the integration-test targets: deterministic
//! construction of connected multigraphs and of subcontinua grown around
//! a chosen point, both driven by plain data so that any test harness
//! (property-based or seeded) can supply the randomness.
#![allow(dead_code)]

use std::collections::BTreeSet;

use hypergraphx::{frac, End, PointRef, Stub, SubcontinuumRepr, TopoGraph};

/// Build a connected multigraph on `n` vertices: a random spanning tree
/// described by `parents` (entry `i` attaches vertex `i + 1` to one of the
/// earlier vertices) plus arbitrary `extras` edges, which may be loops or
/// parallels. With no edges at all the result degenerates to a single loop
/// so the graph is never a bare point.
pub fn build_connected_multigraph(
    n: usize,
    parents: &[u32],
    extras: &[(usize, usize)],
) -> TopoGraph {
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut edges: Vec<(String, String, String)> = Vec::new();
    for i in 1..n {
        let parent = parents[i - 1] as usize % i;
        edges.push((
            format!("e{}", edges.len()),
            names[parent].clone(),
            names[i].clone(),
        ));
    }
    for &(a, b) in extras {
        edges.push((
            format!("e{}", edges.len()),
            names[a % n].clone(),
            names[b % n].clone(),
        ));
    }
    if edges.is_empty() {
        edges.push(("e0".to_string(), names[0].clone(), names[0].clone()));
    }
    TopoGraph::new(&names, &edges).expect("construction is connected by design")
}

/// A cursor over a decision tape; an empty tape yields zeros forever.
struct Tape<'a> {
    data: &'a [u8],
    i: usize,
}

impl Tape<'_> {
    fn next(&mut self) -> u8 {
        if self.data.is_empty() {
            return 0;
        }
        let b = self.data[self.i % self.data.len()];
        self.i += 1;
        b
    }
}

/// Grow a valid subcontinuum of `g` containing `p`, shaped by the decision
/// tape: the tape picks the seed form (an in-edge interval, a covering
/// stub, or a full seed edge) and then drives a few rounds of frontier
/// expansion that add full edges or partial stubs.
pub fn grow_subcontinuum(g: &TopoGraph, p: &PointRef, decisions: &[u8]) -> SubcontinuumRepr {
    let mut tape = Tape {
        data: decisions,
        i: 0,
    };
    let mut vertices: BTreeSet<String> = BTreeSet::new();
    let mut full_edges: BTreeSet<String> = BTreeSet::new();
    let mut stubs: Vec<Stub> = Vec::new();

    match p {
        PointRef::Vertex(v) => {
            vertices.insert(v.clone());
        }
        PointRef::EdgeInterior(e, t) => {
            let (u, v) = g.edge_endpoints(e).expect("point was validated");
            let half = frac(1, 2);
            match tape.next() % 4 {
                0 => {
                    // A closed interval strictly inside the edge around t.
                    return SubcontinuumRepr::WithinEdge {
                        edge: e.clone(),
                        lo: *t * half,
                        hi: (*t + frac(1, 1)) * half,
                    };
                }
                1 => {
                    // Stub from the first endpoint, long enough to cover t.
                    vertices.insert(u.to_string());
                    stubs.push(Stub {
                        edge: e.clone(),
                        end: End::U,
                        len: (*t + frac(1, 1)) * half,
                    });
                }
                2 => {
                    // Stub from the second endpoint covering t.
                    vertices.insert(v.to_string());
                    stubs.push(Stub {
                        edge: e.clone(),
                        end: End::V,
                        len: frac(1, 1) - *t * half,
                    });
                }
                _ => {
                    vertices.insert(u.to_string());
                    vertices.insert(v.to_string());
                    full_edges.insert(e.clone());
                }
            }
        }
    }

    let rounds = 1 + (tape.next() % 3) as usize;
    for _ in 0..rounds {
        let frontier: Vec<String> = g
            .edge_ids()
            .filter(|e| !full_edges.contains(*e))
            .filter(|e| {
                let (u, v) = g.edge_endpoints(e).unwrap();
                vertices.contains(u) || vertices.contains(v)
            })
            .map(|s| s.to_string())
            .collect();
        for e in frontier {
            let (u, v) = {
                let (a, b) = g.edge_endpoints(&e).unwrap();
                (a.to_string(), b.to_string())
            };
            match tape.next() % 4 {
                0 => {}
                2 => {
                    let end = if vertices.contains(&u) { End::U } else { End::V };
                    let taken: hypergraphx::Frac = stubs
                        .iter()
                        .filter(|s| s.edge == e)
                        .map(|s| s.len)
                        .sum();
                    let already = stubs.iter().any(|s| s.edge == e && s.end == end);
                    if !already && taken + frac(1, 3) < frac(1, 1) {
                        stubs.push(Stub {
                            edge: e.clone(),
                            end,
                            len: frac(1, 3),
                        });
                    }
                }
                _ => {
                    if !stubs.iter().any(|s| s.edge == e) {
                        vertices.insert(u);
                        vertices.insert(v);
                        full_edges.insert(e);
                    }
                }
            }
        }
    }

    SubcontinuumRepr::Spanning {
        vertices,
        full_edges,
        stubs,
    }
}
