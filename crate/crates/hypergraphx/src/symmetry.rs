//! Self-homeomorphism symmetry of a graph: the automorphism group of its
//! normalized form, orbits of canonical point representatives, and the
//! degree of homogeneity (number of orbits of the homeomorphism action).
//!
//! Every self-homeomorphism of a graph with ramification points restricts to
//! a permutation of the normalized vertices and edges, so symmetry is a
//! finite combinatorial computation.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::{NormalizedGraph, PointRef, Shape, TopoGraph};
use crate::iso::{exists_iso, vertex_bijections, ColoredGraph};

/// Whether an automorphism traverses an edge in declaration direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Orientation {
    Preserved,
    Reversed,
}

/// A combinatorial automorphism: a vertex bijection plus an edge bijection
/// with a traversal direction per edge. Two automorphisms that permute the
/// same vertices but differ on parallel edges or loop directions are
/// distinct group elements.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GraphAutomorphism {
    pub vertex_map: BTreeMap<String, String>,
    pub edge_map: BTreeMap<String, (String, Orientation)>,
}

impl GraphAutomorphism {
    pub fn identity(g: &TopoGraph) -> Self {
        GraphAutomorphism {
            vertex_map: g.vertex_ids().map(|v| (v.to_string(), v.to_string())).collect(),
            edge_map: g
                .edge_ids()
                .map(|e| (e.to_string(), (e.to_string(), Orientation::Preserved)))
                .collect(),
        }
    }

    /// `self` after `other`: apply `other` first.
    pub fn compose(&self, other: &GraphAutomorphism) -> GraphAutomorphism {
        let vertex_map = other
            .vertex_map
            .iter()
            .map(|(a, b)| (a.clone(), self.vertex_map[b].clone()))
            .collect();
        let edge_map = other
            .edge_map
            .iter()
            .map(|(a, (b, o1))| {
                let (c, o2) = &self.edge_map[b];
                let o = if o1 == o2 {
                    Orientation::Preserved
                } else {
                    Orientation::Reversed
                };
                (a.clone(), (c.clone(), o))
            })
            .collect();
        GraphAutomorphism {
            vertex_map,
            edge_map,
        }
    }

    pub fn inverse(&self) -> GraphAutomorphism {
        let vertex_map = self
            .vertex_map
            .iter()
            .map(|(a, b)| (b.clone(), a.clone()))
            .collect();
        let edge_map = self
            .edge_map
            .iter()
            .map(|(a, (b, o))| (b.clone(), (a.clone(), *o)))
            .collect();
        GraphAutomorphism {
            vertex_map,
            edge_map,
        }
    }

    /// Check structural validity against a graph: bijections that respect
    /// incidence, with orientation flags consistent with the vertex map.
    pub fn is_valid_for(&self, g: &TopoGraph) -> bool {
        if self.vertex_map.len() != g.vertex_count() || self.edge_map.len() != g.edge_count() {
            return false;
        }
        let mut seen_v = std::collections::BTreeSet::new();
        for (a, b) in &self.vertex_map {
            if !g.has_vertex(a) || !g.has_vertex(b) || !seen_v.insert(b.clone()) {
                return false;
            }
        }
        let mut seen_e = std::collections::BTreeSet::new();
        for (e, (f, orient)) in &self.edge_map {
            let (Some((eu, ev)), Some((fu, fv))) = (g.edge_endpoints(e), g.edge_endpoints(f))
            else {
                return false;
            };
            if !seen_e.insert(f.clone()) {
                return false;
            }
            let (ieu, iev) = (&self.vertex_map[eu], &self.vertex_map[ev]);
            let ok = match orient {
                Orientation::Preserved => ieu == fu && iev == fv,
                Orientation::Reversed => ieu == fv && iev == fu,
            };
            if !ok {
                return false;
            }
        }
        true
    }

    /// Image of a point under the automorphism.
    pub fn apply_point(&self, g: &TopoGraph, p: &PointRef) -> Result<PointRef> {
        g.check_point(p)?;
        Ok(match p {
            PointRef::Vertex(v) => PointRef::Vertex(self.vertex_map[v].clone()),
            PointRef::EdgeInterior(e, t) => {
                let (f, orient) = &self.edge_map[e];
                let t = match orient {
                    Orientation::Preserved => *t,
                    Orientation::Reversed => crate::graph::Frac::from_integer(1) - *t,
                };
                PointRef::EdgeInterior(f.clone(), t)
            }
        })
    }
}

/// Every parallel class of a graph: non-loop classes keyed by unordered
/// endpoint pair, loop classes keyed by vertex.
fn parallel_classes(g: &TopoGraph) -> BTreeMap<(String, String), Vec<String>> {
    let mut classes: BTreeMap<(String, String), Vec<String>> = BTreeMap::new();
    for e in g.edge_ids() {
        let (u, v) = g.edge_endpoints(e).unwrap();
        let key = if u <= v {
            (u.to_string(), v.to_string())
        } else {
            (v.to_string(), u.to_string())
        };
        classes.entry(key).or_default().push(e.to_string());
    }
    for members in classes.values_mut() {
        members.sort();
    }
    classes
}

fn factorial(n: usize) -> usize {
    (1..=n).product::<usize>().max(1)
}

/// Expand one vertex bijection into every full automorphism over it.
fn expand_edge_maps(
    g: &TopoGraph,
    vmap: &BTreeMap<String, String>,
    out: &mut Vec<GraphAutomorphism>,
) {
    let classes = parallel_classes(g);
    // For each class, the list of (source edges, target edges, is_loop).
    let mut tasks: Vec<(Vec<String>, Vec<String>, bool)> = Vec::new();
    for ((u, v), members) in &classes {
        let (iu, iv) = (vmap[u].clone(), vmap[v].clone());
        let tkey = if iu <= iv { (iu, iv) } else { (iv, iu) };
        let targets = classes.get(&tkey).expect("image class exists").clone();
        debug_assert_eq!(members.len(), targets.len());
        tasks.push((members.clone(), targets, u == v));
    }

    let mut partial: BTreeMap<String, (String, Orientation)> = BTreeMap::new();
    fn rec(
        g: &TopoGraph,
        vmap: &BTreeMap<String, String>,
        tasks: &[(Vec<String>, Vec<String>, bool)],
        ti: usize,
        partial: &mut BTreeMap<String, (String, Orientation)>,
        out: &mut Vec<GraphAutomorphism>,
    ) {
        if ti == tasks.len() {
            out.push(GraphAutomorphism {
                vertex_map: vmap.clone(),
                edge_map: partial.clone(),
            });
            return;
        }
        let (sources, targets, is_loop) = &tasks[ti];
        let k = sources.len();
        for perm in targets.iter().permutations(k) {
            if *is_loop {
                // Each loop can be traversed either way.
                for flags in 0..(1usize << k) {
                    for (i, src) in sources.iter().enumerate() {
                        let orient = if flags >> i & 1 == 0 {
                            Orientation::Preserved
                        } else {
                            Orientation::Reversed
                        };
                        partial.insert(src.clone(), (perm[i].clone(), orient));
                    }
                    rec(g, vmap, tasks, ti + 1, partial, out);
                }
            } else {
                for (i, src) in sources.iter().enumerate() {
                    let (su, _) = g.edge_endpoints(src).unwrap();
                    let (tu, _) = g.edge_endpoints(perm[i]).unwrap();
                    let orient = if vmap[su] == tu {
                        Orientation::Preserved
                    } else {
                        Orientation::Reversed
                    };
                    partial.insert(src.clone(), (perm[i].clone(), orient));
                }
                rec(g, vmap, tasks, ti + 1, partial, out);
            }
            for src in sources {
                partial.remove(src);
            }
        }
    }
    rec(g, vmap, &tasks, 0, &mut partial, out);
}

/// The full automorphism group of a normalized graph, as an explicit list.
///
/// Uses refinement-pruned backtracking over vertex images, then expands the
/// edge bijections class by class. Fails with `BudgetExceeded` if the group
/// would be larger than the budget allows.
pub fn automorphisms(ng: &NormalizedGraph, budget: &Budget) -> Result<Vec<GraphAutomorphism>> {
    let g = ng.graph();
    let cg = ColoredGraph::from_graph(g, &BTreeMap::new());
    // Per-bijection expansion factor is independent of the bijection.
    let mut factor = 1usize;
    for ((u, v), members) in parallel_classes(g) {
        let k = members.len();
        factor = factor.saturating_mul(factorial(k));
        if u == v {
            factor = factor.saturating_mul(1usize << k);
        }
    }
    let max_bijections = budget.max_group_size / factor.max(1) + 1;
    let bijections = vertex_bijections(&cg, &cg, Some(max_bijections + 1));
    if bijections.len().saturating_mul(factor) > budget.max_group_size {
        return Err(Error::BudgetExceeded(format!(
            "automorphism group larger than {} elements",
            budget.max_group_size
        )));
    }
    let mut out = Vec::new();
    for bij in bijections {
        let vmap: BTreeMap<String, String> = bij
            .iter()
            .enumerate()
            .map(|(i, &j)| (cg.names[i].clone(), cg.names[j].clone()))
            .collect();
        expand_edge_maps(g, &vmap, &mut out);
    }
    out.sort();
    Ok(out)
}

/// Exhaustive automorphism oracle: tries every vertex permutation and every
/// compatible edge matching. Independent of the refined search; only for
/// small graphs.
pub fn brute_force_automorphisms(
    ng: &NormalizedGraph,
    budget: &Budget,
) -> Result<Vec<GraphAutomorphism>> {
    let g = ng.graph();
    let n = g.vertex_count();
    let m = g.edge_count();
    if n > budget.max_bruteforce_vertices || m > budget.max_bruteforce_edges {
        return Err(Error::BudgetExceeded(format!(
            "brute force limited to {} vertices and {} edges",
            budget.max_bruteforce_vertices, budget.max_bruteforce_edges
        )));
    }
    let names: Vec<String> = g.vertex_ids().map(|s| s.to_string()).collect();
    let edge_ids: Vec<String> = g.edge_ids().map(|s| s.to_string()).collect();
    let mut out = Vec::new();
    for perm in (0..n).permutations(n) {
        let vmap: BTreeMap<String, String> = (0..n)
            .map(|i| (names[i].clone(), names[perm[i]].clone()))
            .collect();
        // Assign every edge an image edge with matching endpoints, one at a
        // time, trying both directions for loops.
        fn assign(
            g: &TopoGraph,
            edge_ids: &[String],
            vmap: &BTreeMap<String, String>,
            idx: usize,
            used: &mut Vec<bool>,
            partial: &mut BTreeMap<String, (String, Orientation)>,
            out: &mut Vec<GraphAutomorphism>,
        ) {
            if idx == edge_ids.len() {
                out.push(GraphAutomorphism {
                    vertex_map: vmap.clone(),
                    edge_map: partial.clone(),
                });
                return;
            }
            let e = &edge_ids[idx];
            let (eu, ev) = g.edge_endpoints(e).unwrap();
            let (iu, iv) = (vmap[eu].clone(), vmap[ev].clone());
            for (fi, f) in edge_ids.iter().enumerate() {
                if used[fi] {
                    continue;
                }
                let (fu, fv) = g.edge_endpoints(f).unwrap();
                let orients: Vec<Orientation> = if fu == fv {
                    if iu == fu && iv == fv {
                        vec![Orientation::Preserved, Orientation::Reversed]
                    } else {
                        vec![]
                    }
                } else if iu == fu && iv == fv {
                    vec![Orientation::Preserved]
                } else if iu == fv && iv == fu {
                    vec![Orientation::Reversed]
                } else {
                    vec![]
                };
                for orient in orients {
                    used[fi] = true;
                    partial.insert(e.clone(), (f.clone(), orient));
                    assign(g, edge_ids, vmap, idx + 1, used, partial, out);
                    partial.remove(e);
                    used[fi] = false;
                }
            }
        }
        let mut used = vec![false; m];
        let mut partial = BTreeMap::new();
        assign(g, &edge_ids, &vmap, 0, &mut used, &mut partial, &mut out);
        if out.len() > budget.max_group_size {
            return Err(Error::BudgetExceeded(format!(
                "automorphism group larger than {} elements",
                budget.max_group_size
            )));
        }
    }
    out.sort();
    Ok(out)
}

/// Canonical representative of a point orbit: a vertex, or the midpoint of
/// a normalized edge.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Repr {
    Vertex(String),
    EdgeMid(String),
}

impl Repr {
    pub fn to_point(&self) -> PointRef {
        match self {
            Repr::Vertex(v) => PointRef::Vertex(v.clone()),
            Repr::EdgeMid(e) => PointRef::midpoint(e),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Repr::Vertex(v) => format!("vertex:{v}"),
            Repr::EdgeMid(e) => format!("edge:{e}"),
        }
    }
}

impl std::fmt::Display for Repr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitKind {
    Vertex,
    EdgeInterior,
    /// Only on a circle, where the anchor vertex and the loop interior are
    /// equivalent points.
    Mixed,
}

#[derive(Debug, Clone)]
pub struct Orbit {
    pub members: Vec<Repr>,
    pub kind: OrbitKind,
}

/// Orbits of the canonical representatives (all vertices, one interior
/// point per normalized edge) under self-homeomorphisms.
#[derive(Debug, Clone)]
pub struct OrbitPartition {
    pub orbits: Vec<Orbit>,
}

impl OrbitPartition {
    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    /// Index of the orbit containing a representative.
    pub fn orbit_of(&self, r: &Repr) -> Option<usize> {
        self.orbits.iter().position(|o| o.members.contains(r))
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, i: usize) -> usize {
        if self.0[i] != i {
            let r = self.find(self.0[i]);
            self.0[i] = r;
        }
        self.0[i]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Whether some self-homeomorphism carries vertex `a` to vertex `b`.
fn vertices_equivalent(g: &TopoGraph, a: &str, b: &str) -> bool {
    let mut ma = BTreeMap::new();
    ma.insert(a.to_string(), 1u64);
    let mut mb = BTreeMap::new();
    mb.insert(b.to_string(), 1u64);
    exists_iso(
        &ColoredGraph::from_graph(g, &ma),
        &ColoredGraph::from_graph(g, &mb),
    )
}

/// Graph with an extra marked vertex splitting the named edge.
fn split_edge_marked(g: &TopoGraph, edge: &str) -> (TopoGraph, String) {
    let mark = g.fresh_id("zz_mark");
    let (u, v) = g.edge_endpoints(edge).unwrap();
    let mut vertices: Vec<String> = g.vertex_ids().map(|s| s.to_string()).collect();
    vertices.push(mark.clone());
    let mut edges: Vec<(String, String, String)> = Vec::new();
    for e in g.edge_ids() {
        if e == edge {
            continue;
        }
        let (a, b) = g.edge_endpoints(e).unwrap();
        edges.push((e.to_string(), a.to_string(), b.to_string()));
    }
    let half_a = g.fresh_id(&format!("{edge}_ha"));
    let mut half_b = g.fresh_id(&format!("{edge}_hb"));
    if half_b == half_a {
        half_b.push('x');
    }
    edges.push((half_a, u.to_string(), mark.clone()));
    edges.push((half_b, mark.clone(), v.to_string()));
    let graph = TopoGraph::new(&vertices, &edges).expect("split keeps the graph valid");
    (graph, mark)
}

/// Whether some self-homeomorphism carries the interior of edge `a` onto the
/// interior of edge `b`.
fn edges_equivalent(g: &TopoGraph, a: &str, b: &str) -> bool {
    if a == b {
        return true;
    }
    let (ga, mark_a) = split_edge_marked(g, a);
    let (gb, mark_b) = split_edge_marked(g, b);
    let mut ma = BTreeMap::new();
    ma.insert(mark_a, 1u64);
    let mut mb = BTreeMap::new();
    mb.insert(mark_b, 1u64);
    exists_iso(
        &ColoredGraph::from_graph(&ga, &ma),
        &ColoredGraph::from_graph(&gb, &mb),
    )
}

/// Orbits of canonical point representatives under self-homeomorphisms.
///
/// Orbits are computed by pairwise equivalence tests on marked graphs, so
/// the group itself is never materialized; families with many interchangeable
/// pendant edges stay cheap even though their groups are astronomically
/// large.
pub fn point_orbits(ng: &NormalizedGraph, _budget: &Budget) -> Result<OrbitPartition> {
    let g = ng.graph();
    match ng.shape() {
        Shape::Circle => {
            // Any point maps to any other; include both representatives.
            let v = g.vertex_ids().next().unwrap().to_string();
            let e = g.edge_ids().next().unwrap().to_string();
            Ok(OrbitPartition {
                orbits: vec![Orbit {
                    members: vec![Repr::Vertex(v), Repr::EdgeMid(e)],
                    kind: OrbitKind::Mixed,
                }],
            })
        }
        Shape::Arc => {
            let mut vs: Vec<Repr> = g.vertex_ids().map(|v| Repr::Vertex(v.to_string())).collect();
            vs.sort();
            let e = g.edge_ids().next().unwrap().to_string();
            Ok(OrbitPartition {
                orbits: vec![
                    Orbit {
                        members: vs,
                        kind: OrbitKind::Vertex,
                    },
                    Orbit {
                        members: vec![Repr::EdgeMid(e)],
                        kind: OrbitKind::EdgeInterior,
                    },
                ],
            })
        }
        Shape::General => {
            // Vertex orbits: bucket by class (end vs ramification and order),
            // then decide pairs inside each bucket.
            let vnames: Vec<String> = g.vertex_ids().map(|s| s.to_string()).collect();
            let n = vnames.len();
            let mut uf = UnionFind::new(n);
            let mut buckets: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
            for (i, v) in vnames.iter().enumerate() {
                buckets.entry(g.vertex_order(v).unwrap()).or_default().push(i);
            }
            for bucket in buckets.values() {
                for ai in 0..bucket.len() {
                    for bi in ai + 1..bucket.len() {
                        let (i, j) = (bucket[ai], bucket[bi]);
                        if uf.find(i) != uf.find(j)
                            && vertices_equivalent(g, &vnames[i], &vnames[j])
                        {
                            uf.union(i, j);
                        }
                    }
                }
            }
            let mut vertex_orbits: BTreeMap<usize, Vec<Repr>> = BTreeMap::new();
            for i in 0..n {
                let r = uf.find(i);
                vertex_orbits
                    .entry(r)
                    .or_default()
                    .push(Repr::Vertex(vnames[i].clone()));
            }

            // Edge orbits: all members of a parallel class are equivalent
            // (swapping two parallel edges or reversing a loop is a
            // self-homeomorphism); classes are compared pairwise.
            let classes: Vec<(bool, usize, Vec<String>)> = parallel_classes(g)
                .into_iter()
                .map(|((u, v), members)| (u == v, members.len(), members))
                .collect();
            let mut cuf = UnionFind::new(classes.len());
            for i in 0..classes.len() {
                for j in i + 1..classes.len() {
                    let (la, sa, ma) = &classes[i];
                    let (lb, sb, mb) = &classes[j];
                    if la == lb
                        && sa == sb
                        && cuf.find(i) != cuf.find(j)
                        && edges_equivalent(g, &ma[0], &mb[0])
                    {
                        cuf.union(i, j);
                    }
                }
            }
            let mut edge_orbits: BTreeMap<usize, Vec<Repr>> = BTreeMap::new();
            for (i, (_, _, members)) in classes.iter().enumerate() {
                let r = cuf.find(i);
                let entry = edge_orbits.entry(r).or_default();
                for e in members {
                    entry.push(Repr::EdgeMid(e.clone()));
                }
            }

            let mut orbits: Vec<Orbit> = Vec::new();
            for (_, mut members) in vertex_orbits {
                members.sort();
                orbits.push(Orbit {
                    members,
                    kind: OrbitKind::Vertex,
                });
            }
            for (_, mut members) in edge_orbits {
                members.sort();
                orbits.push(Orbit {
                    members,
                    kind: OrbitKind::EdgeInterior,
                });
            }
            orbits.sort_by_key(|o| o.members[0].clone());
            Ok(OrbitPartition { orbits })
        }
    }
}

/// Degree of homogeneity: the number of orbits of the self-homeomorphism
/// action. A graph is 1/n-homogeneous when this returns n.
pub fn homogeneity_degree(ng: &NormalizedGraph, budget: &Budget) -> Result<usize> {
    Ok(point_orbits(ng, budget)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{normalize, parse_graph, point_class, point_order, sigma, PointClass};

    fn ng(text: &str) -> NormalizedGraph {
        normalize(&parse_graph(text).unwrap()).unwrap()
    }

    #[test]
    fn triod_has_six_automorphisms() {
        let t = ng("vertex c\nvertex t1\nvertex t2\nvertex t3\nedge l1 c t1\nedge l2 c t2\nedge l3 c t3\n");
        let auts = automorphisms(&t, &Budget::default()).unwrap();
        assert_eq!(auts.len(), 6);
        let brute = brute_force_automorphisms(&t, &Budget::default()).unwrap();
        assert_eq!(auts, brute);
    }

    #[test]
    fn arc_has_two_automorphisms() {
        let a = ng("vertex a\nvertex b\nedge e a b\n");
        assert_eq!(brute_force_automorphisms(&a, &Budget::default()).unwrap().len(), 2);
        assert_eq!(automorphisms(&a, &Budget::default()).unwrap().len(), 2);
    }

    #[test]
    fn asymmetric_graph_has_only_identity() {
        // Smallest possible case: loops and parallel edges always admit a
        // reversal or swap, and every suppressed-order-2-free graph on up to
        // seven vertices has a nontrivial symmetry, so eight vertices and
        // ten edges is the minimum footprint (exhaustive search).
        let g = ng("vertex a\nvertex b\nvertex c\nvertex d\nvertex e\nvertex ta\nvertex tc\nvertex td\n\
                    edge ab a b\nedge ae a e\nedge bc b c\nedge bd b d\nedge be b e\n\
                    edge cd c d\nedge de d e\nedge pa a ta\nedge pc c tc\nedge pd d td\n");
        let auts = automorphisms(&g, &Budget::default()).unwrap();
        assert_eq!(auts.len(), 1);
        assert_eq!(auts, brute_force_automorphisms(&g, &Budget::default()).unwrap());
    }

    #[test]
    fn theta_has_twelve_automorphisms() {
        // Two vertices joined by three parallel edges: 2 vertex swaps times
        // 3! edge matchings.
        let t = ng("vertex a\nvertex b\nedge e1 a b\nedge e2 a b\nedge e3 a b\n");
        let auts = automorphisms(&t, &Budget::default()).unwrap();
        assert_eq!(auts.len(), 12);
        assert_eq!(auts, brute_force_automorphisms(&t, &Budget::default()).unwrap());
    }

    #[test]
    fn edge_with_two_loops_has_eight_automorphisms() {
        // Pendant edge plus two loops at the same vertex: swap the loops and
        // reverse each independently.
        let g = ng("vertex a1\nvertex a2\nedge i a1 a2\nedge c2 a2 a2\nedge c a2 a2\n");
        let auts = automorphisms(&g, &Budget::default()).unwrap();
        assert_eq!(auts.len(), 8);
        assert_eq!(auts, brute_force_automorphisms(&g, &Budget::default()).unwrap());
    }

    #[test]
    fn group_axioms_hold() {
        let t = ng("vertex a\nvertex b\nedge e1 a b\nedge e2 a b\nedge c a a\n");
        let auts = automorphisms(&t, &Budget::default()).unwrap();
        let set: std::collections::BTreeSet<_> = auts.iter().cloned().collect();
        assert!(set.contains(&GraphAutomorphism::identity(t.graph())));
        for x in &auts {
            assert!(x.is_valid_for(t.graph()));
            assert!(set.contains(&x.inverse()));
            for y in &auts {
                assert!(set.contains(&x.compose(y)));
            }
        }
    }

    #[test]
    fn automorphisms_preserve_invariants() {
        let g = parse_graph(
            "vertex a1\nvertex a2\nvertex t1\nvertex t2\nvertex t3\nedge i a1 a2\nedge c2 a2 a2\nedge c a2 a2\nedge l1 a1 t1\nedge l2 a1 t2\nedge l3 a1 t3\n",
        )
        .unwrap();
        let ng = normalize(&g).unwrap();
        let auts = automorphisms(&ng, &Budget::default()).unwrap();
        let mut points: Vec<PointRef> = ng
            .graph()
            .vertex_ids()
            .map(PointRef::vertex)
            .collect();
        points.extend(ng.graph().edge_ids().map(PointRef::midpoint));
        for aut in &auts {
            for p in &points {
                let q = aut.apply_point(ng.graph(), p).unwrap();
                assert_eq!(
                    point_order(ng.graph(), p).unwrap(),
                    point_order(ng.graph(), &q).unwrap()
                );
                assert_eq!(
                    point_class(ng.graph(), p).unwrap(),
                    point_class(ng.graph(), &q).unwrap()
                );
                if point_class(ng.graph(), p).unwrap() == PointClass::Ordinary {
                    assert_eq!(sigma(ng.graph(), p).unwrap(), sigma(ng.graph(), &q).unwrap());
                }
            }
        }
    }

    #[test]
    fn orbit_counts_for_basic_shapes() {
        let circle = ng("vertex a\nedge c a a\n");
        assert_eq!(point_orbits(&circle, &Budget::default()).unwrap().len(), 1);
        let arc = ng("vertex a\nvertex b\nedge e a b\n");
        assert_eq!(point_orbits(&arc, &Budget::default()).unwrap().len(), 2);
        let triod =
            ng("vertex c\nvertex t1\nvertex t2\nvertex t3\nedge l1 c t1\nedge l2 c t2\nedge l3 c t3\n");
        assert_eq!(point_orbits(&triod, &Budget::default()).unwrap().len(), 3);
    }

    #[test]
    fn orbits_join_interchangeable_pieces() {
        // Pendant edge plus two loops: the two loops form one orbit.
        let g = ng("vertex a1\nvertex a2\nedge i a1 a2\nedge c2 a2 a2\nedge c a2 a2\n");
        let orbits = point_orbits(&g, &Budget::default()).unwrap();
        assert_eq!(orbits.len(), 4);
        let loop_orbit = orbits
            .orbits
            .iter()
            .find(|o| o.members.contains(&Repr::EdgeMid("c".into())))
            .unwrap();
        assert_eq!(loop_orbit.members.len(), 2);
        assert!(loop_orbit.members.contains(&Repr::EdgeMid("c2".into())));
    }

    #[test]
    fn brute_force_respects_budget() {
        let mut text = String::from("vertex c\n");
        for i in 1..=9 {
            text.push_str(&format!("vertex t{i}\nedge l{i} c t{i}\n"));
        }
        let big = ng(&text);
        assert!(matches!(
            brute_force_automorphisms(&big, &Budget::default()),
            Err(Error::BudgetExceeded(_))
        ));
    }
}
