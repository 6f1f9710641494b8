//! Built-in graph families with named landmark points.
//!
//! Every builder returns a [`FamilyGraph`]: a combinatorial graph plus a map
//! of named landmarks (attachment vertices, leg tips, and the distinguished
//! points of the decorated variants). The families are:
//!
//! * [`build_example`] — a circle, a segment, and two pendant arcs in a row;
//! * [`build_sn`] — a looped star: segment, loop, and `2n` pendant legs;
//! * [`build_pi`] — looped-path graphs: a segment ending in two loops, with
//!   optional extra loops and legs;
//! * [`build_qi`] — the looped-path graphs with both terminal loops split by
//!   a new vertex, one carrying a loop and the other two pendant legs;
//! * [`build_xn`], [`build_yn`] — recursive chains that grow from the small
//!   cases by attaching ever-larger looped stars at the rightmost vertex.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{PointRef, TopoGraph};

/// A graph together with named landmark points.
#[derive(Debug, Clone)]
pub struct FamilyGraph {
    pub graph: TopoGraph,
    /// Landmark name to point; every point is checked to exist in `graph`.
    pub landmarks: BTreeMap<String, PointRef>,
}

impl FamilyGraph {
    /// The point a landmark resolves to, if the landmark exists.
    pub fn landmark(&self, name: &str) -> Option<&PointRef> {
        self.landmarks.get(name)
    }

    /// The vertex id a landmark names, if it is a vertex landmark.
    pub fn landmark_vertex(&self, name: &str) -> Option<&str> {
        match self.landmarks.get(name) {
            Some(PointRef::Vertex(v)) => Some(v.as_str()),
            _ => None,
        }
    }

    /// Serialize to the graph text format followed by a landmark comment
    /// block, one `# landmark <name> = ...` line per landmark.
    ///
    /// The comment block is ignored by [`crate::graph::parse_graph`], so the
    /// output round-trips as a plain graph.
    pub fn serialize_with_landmarks(&self) -> String {
        let mut out = self.graph.serialize();
        for (name, point) in &self.landmarks {
            match point {
                PointRef::Vertex(v) => {
                    out.push_str(&format!("# landmark {name} = vertex {v}\n"));
                }
                PointRef::EdgeInterior(edge, t) => {
                    out.push_str(&format!("# landmark {name} = edge {edge} {t}\n"));
                }
            }
        }
        out
    }
}

/// Incremental list-based construction; the graph is validated once at the
/// end so builders can add vertices and edges in any convenient order.
struct Builder {
    vertices: Vec<String>,
    edges: Vec<(String, String, String)>,
    landmarks: BTreeMap<String, PointRef>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            vertices: Vec::new(),
            edges: Vec::new(),
            landmarks: BTreeMap::new(),
        }
    }

    /// Re-open an already built family graph for further additions.
    fn from_family(fg: &FamilyGraph) -> Self {
        let vertices = fg.graph.vertex_ids().map(str::to_string).collect();
        let edges = fg
            .graph
            .edge_ids()
            .map(|e| {
                let (u, v) = fg.graph.edge_endpoints(e).expect("edge listed by graph");
                (e.to_string(), u.to_string(), v.to_string())
            })
            .collect();
        Builder {
            vertices,
            edges,
            landmarks: fg.landmarks.clone(),
        }
    }

    fn vertex(&mut self, id: &str) {
        self.vertices.push(id.to_string());
    }

    /// Add a vertex and a landmark of the same name pointing at it.
    fn landmark_vertex(&mut self, id: &str) {
        self.vertex(id);
        self.landmarks
            .insert(id.to_string(), PointRef::vertex(id));
    }

    fn edge(&mut self, id: &str, u: &str, v: &str) {
        self.edges
            .push((id.to_string(), u.to_string(), v.to_string()));
    }

    fn finish(self) -> Result<FamilyGraph> {
        let graph = TopoGraph::new(&self.vertices, &self.edges)?;
        for (name, point) in &self.landmarks {
            graph.check_point(point).map_err(|_| {
                Error::InternalInvariant(format!(
                    "landmark `{name}` does not resolve to a point of the graph"
                ))
            })?;
        }
        Ok(FamilyGraph {
            graph,
            landmarks: self.landmarks,
        })
    }
}

fn bad_param(family: &str, param: impl ToString) -> Error {
    Error::FamilyParameter {
        family: family.to_string(),
        param: param.to_string(),
    }
}

/// A circle joined by a segment to a point with two pendant arcs.
///
/// Loop `s` at vertex `a`, edge `l` from `a` to `q`, and pendant edges `j1`,
/// `j2` from `q` to the tips `e1`, `e2`. Landmarks: `a`, `q`, `e1`, `e2`.
pub fn build_example() -> Result<FamilyGraph> {
    let mut b = Builder::new();
    b.landmark_vertex("a");
    b.landmark_vertex("q");
    b.landmark_vertex("e1");
    b.landmark_vertex("e2");
    b.edge("s", "a", "a");
    b.edge("l", "a", "q");
    b.edge("j1", "q", "e1");
    b.edge("j2", "q", "e2");
    b.finish()
}

/// Append the looped star of level `m` to `b`, attached at the existing
/// vertex `anchor`: edge `i{m}` from the anchor to a new vertex `a{m}`, loop
/// `c{m}` at `a{m}`, and `2m` pendant legs `l{m}_i` ending in tips `t{m}_i`.
fn add_star(b: &mut Builder, m: u32, anchor: &str) {
    let center = format!("a{m}");
    b.landmark_vertex(&center);
    b.edge(&format!("i{m}"), anchor, &center);
    b.edge(&format!("c{m}"), &center, &center);
    for i in 1..=2 * m {
        let tip = format!("t{m}_{i}");
        b.landmark_vertex(&tip);
        b.edge(&format!("l{m}_{i}"), &center, &tip);
    }
}

/// The standalone looped star of level `n ≥ 3`.
///
/// Vertices `a{n-1}` and `a{n}` joined by edge `i{n}`, a loop `c{n}` at
/// `a{n}`, and `2n` pendant legs at `a{n}`; the center has order `2n + 3`.
pub fn build_sn(n: u32) -> Result<FamilyGraph> {
    if n < 3 {
        return Err(bad_param("sn", n));
    }
    let mut b = Builder::new();
    b.landmark_vertex(&format!("a{}", n - 1));
    add_star(&mut b, n, &format!("a{}", n - 1));
    b.finish()
}

/// Extra loops and legs that distinguish the five looped-path variants.
/// Variant 1 adds nothing; 2 adds a loop at `a1`; 3 adds three legs at `a1`;
/// 4 adds a loop and one leg at `a1`; 5 adds two legs at each of `a1`, `a2`.
fn add_variant_decorations(b: &mut Builder, i: u32) {
    let leg = |b: &mut Builder, at: &str, level: u32, idx: u32| {
        let tip = format!("t{level}_{idx}");
        b.landmark_vertex(&tip);
        b.edge(&format!("l{level}_{idx}"), at, &tip);
    };
    match i {
        1 => {}
        2 => b.edge("c1", "a1", "a1"),
        3 => {
            for idx in 1..=3 {
                leg(b, "a1", 1, idx);
            }
        }
        4 => {
            b.edge("c1", "a1", "a1");
            leg(b, "a1", 1, 1);
        }
        5 => {
            for idx in 1..=2 {
                leg(b, "a1", 1, idx);
            }
            for idx in 1..=2 {
                leg(b, "a2", 2, idx);
            }
        }
        _ => unreachable!("variant index is validated by the caller"),
    }
}

/// Looped-path graph `i ∈ 1..=5`: edge `i2` from `a1` to `a2`, two loops
/// `c2` and `c` at `a2`, plus the variant decorations at `a1`/`a2`.
pub fn build_pi(i: u32) -> Result<FamilyGraph> {
    if !(1..=5).contains(&i) {
        return Err(bad_param("pi", i));
    }
    let mut b = Builder::new();
    b.landmark_vertex("a1");
    b.landmark_vertex("a2");
    b.edge("i2", "a1", "a2");
    b.edge("c2", "a2", "a2");
    b.edge("c", "a2", "a2");
    add_variant_decorations(&mut b, i);
    b.finish()
}

/// Decorated looped-path graph `i ∈ 1..=5`.
///
/// Starts from the looped-path graph of the same index, splits loop `c2` at
/// a new vertex `p` (edges `c2a`, `c2b` from `a2` to `p`) and loop `c` at a
/// new vertex `q` (edges `ca`, `cb` from `a2` to `q`), then attaches a loop
/// `d` at `p` and two pendant edges `j1`, `j2` from `q` to tips `b1`, `b2`.
/// Both `p` and `q` have order 4.
pub fn build_qi(i: u32) -> Result<FamilyGraph> {
    if !(1..=5).contains(&i) {
        return Err(bad_param("qi", i));
    }
    let mut b = Builder::new();
    b.landmark_vertex("a1");
    b.landmark_vertex("a2");
    b.landmark_vertex("p");
    b.landmark_vertex("q");
    b.landmark_vertex("b1");
    b.landmark_vertex("b2");
    b.edge("i2", "a1", "a2");
    b.edge("c2a", "a2", "p");
    b.edge("c2b", "a2", "p");
    b.edge("ca", "a2", "q");
    b.edge("cb", "a2", "q");
    b.edge("d", "p", "p");
    b.edge("j1", "q", "b1");
    b.edge("j2", "q", "b2");
    add_variant_decorations(&mut b, i);
    b.finish()
}

/// Star level attached when growing a chain graph to size `n ≥ 9`: the chain
/// of size `n` is the chain of size `n - 5` with a level-`m` looped star
/// attached at its rightmost vertex `a{m-1}`.
fn star_level(n: u32) -> u32 {
    (n - 3).div_ceil(5) + 1
}

/// Attach the level-`m` looped star to an already built chain graph at its
/// landmark vertex `a{m-1}`.
fn attach_star(host: FamilyGraph, m: u32) -> Result<FamilyGraph> {
    let anchor = host
        .landmark_vertex(&format!("a{}", m - 1))
        .ok_or_else(|| {
            Error::InternalInvariant(format!(
                "chain host is missing its attachment landmark `a{}`",
                m - 1
            ))
        })?
        .to_string();
    let mut b = Builder::from_family(&host);
    add_star(&mut b, m, &anchor);
    b.finish()
}

/// First recursive chain. Small cases: `1` a circle, `2` an arc, `3` a simple
/// triod, `4..=8` the looped-path graphs; for `n ≥ 9` a level-`m` looped star
/// is attached to the chain of size `n - 5` at its rightmost vertex.
pub fn build_xn(n: u32) -> Result<FamilyGraph> {
    match n {
        0 => Err(bad_param("xn", n)),
        1 => {
            let mut b = Builder::new();
            b.landmark_vertex("a1");
            b.edge("c1", "a1", "a1");
            b.finish()
        }
        2 => {
            let mut b = Builder::new();
            b.landmark_vertex("a1");
            b.landmark_vertex("a2");
            b.edge("i2", "a1", "a2");
            b.finish()
        }
        3 => {
            let mut b = Builder::new();
            b.landmark_vertex("a1");
            for idx in 1..=3 {
                let tip = format!("t1_{idx}");
                b.landmark_vertex(&tip);
                b.edge(&format!("l1_{idx}"), "a1", &tip);
            }
            b.finish()
        }
        4..=8 => build_pi(n - 3),
        _ => attach_star(build_xn(n - 5)?, star_level(n)),
    }
}

/// Second recursive chain. Small cases: `1` a looped path with two tips, `2`
/// and `3` its stretched versions with parallel edge pairs, `4..=8` the
/// decorated looped-path graphs; the recursion for `n ≥ 9` matches
/// [`build_xn`].
pub fn build_yn(n: u32) -> Result<FamilyGraph> {
    match n {
        0 => Err(bad_param("yn", n)),
        1 => {
            let mut b = Builder::new();
            b.landmark_vertex("u");
            b.landmark_vertex("w");
            b.landmark_vertex("t1");
            b.landmark_vertex("t2");
            b.edge("i", "u", "w");
            b.edge("c", "w", "w");
            b.edge("j1", "u", "t1");
            b.edge("j2", "u", "t2");
            b.finish()
        }
        2 => {
            let mut b = Builder::new();
            b.landmark_vertex("u");
            b.landmark_vertex("m1");
            b.landmark_vertex("w");
            b.landmark_vertex("t1");
            b.landmark_vertex("t2");
            b.edge("g1", "u", "m1");
            b.edge("g2", "u", "m1");
            b.edge("h1", "m1", "w");
            b.edge("h2", "m1", "w");
            b.edge("c", "w", "w");
            b.edge("j1", "u", "t1");
            b.edge("j2", "u", "t2");
            b.finish()
        }
        3 => {
            let mut b = Builder::new();
            b.landmark_vertex("u");
            b.landmark_vertex("v1");
            b.landmark_vertex("v2");
            b.landmark_vertex("w");
            b.landmark_vertex("t1");
            b.landmark_vertex("t2");
            b.edge("g1", "u", "v1");
            b.edge("g2", "u", "v1");
            b.edge("i", "v1", "v2");
            b.edge("h1", "v2", "w");
            b.edge("h2", "v2", "w");
            b.edge("c", "w", "w");
            b.edge("j1", "u", "t1");
            b.edge("j2", "u", "t2");
            b.finish()
        }
        4..=8 => build_qi(n - 3),
        _ => attach_star(build_yn(n - 5)?, star_level(n)),
    }
}

/// Dispatch a family by command-line name. `example` takes no parameter; the
/// parametric families (`sn`, `pi`, `qi`, `xn`, `yn`) require one.
pub fn build_family(name: &str, param: Option<u32>) -> Result<FamilyGraph> {
    match (name, param) {
        ("example", None) => build_example(),
        ("example", Some(p)) => Err(bad_param("example", p)),
        ("sn", Some(p)) => build_sn(p),
        ("pi", Some(p)) => build_pi(p),
        ("qi", Some(p)) => build_qi(p),
        ("xn", Some(p)) => build_xn(p),
        ("yn", Some(p)) => build_yn(p),
        ("sn" | "pi" | "qi" | "xn" | "yn", None) => Err(bad_param(name, "missing")),
        _ => Err(bad_param(name, param.map_or("none".to_string(), |p| p.to_string()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{normalize, parse_graph, point_order, Shape};
    use crate::symmetry::point_orbits;
    use crate::Budget;

    fn ord(fg: &FamilyGraph, v: &str) -> u32 {
        point_order(&fg.graph, &PointRef::vertex(v)).expect("vertex exists")
    }

    #[test]
    fn example_orders_and_degree() {
        let fg = build_example().unwrap();
        assert_eq!(fg.graph.vertex_count(), 4);
        assert_eq!(fg.graph.edge_count(), 4);
        assert_eq!(ord(&fg, "a"), 3);
        assert_eq!(ord(&fg, "q"), 3);
        assert_eq!(ord(&fg, "e1"), 1);
        let ng = normalize(&fg.graph).unwrap();
        let orbits = point_orbits(&ng, &Budget::default()).unwrap();
        assert_eq!(orbits.len(), 6);
    }

    #[test]
    fn star_family_orders_and_counts() {
        let s3 = build_sn(3).unwrap();
        assert_eq!(ord(&s3, "a3"), 9);
        assert_eq!(ord(&s3, "a2"), 1);
        assert_eq!(s3.graph.vertex_count(), 8);
        assert_eq!(s3.graph.edge_count(), 8);

        let s4 = build_sn(4).unwrap();
        let legs = s4.graph.edge_ids().filter(|e| e.starts_with("l4_")).count();
        assert_eq!(legs, 8);
        assert_eq!(ord(&s4, "a4"), 11);

        assert!(matches!(
            build_sn(2),
            Err(Error::FamilyParameter { .. })
        ));
    }

    #[test]
    fn looped_path_orders() {
        let p1 = build_pi(1).unwrap();
        assert_eq!(ord(&p1, "a2"), 5);
        assert_eq!(ord(&p1, "a1"), 1);

        let p2 = build_pi(2).unwrap();
        assert_eq!(ord(&p2, "a1"), 3);

        let p3 = build_pi(3).unwrap();
        assert_eq!(ord(&p3, "a1"), 4);

        let p4 = build_pi(4).unwrap();
        assert_eq!(ord(&p4, "a1"), 4);

        let p5 = build_pi(5).unwrap();
        assert_eq!(ord(&p5, "a2"), 7);
        assert_eq!(ord(&p5, "a1"), 3);

        assert!(matches!(build_pi(0), Err(Error::FamilyParameter { .. })));
        assert!(matches!(build_pi(6), Err(Error::FamilyParameter { .. })));
    }

    #[test]
    fn decorated_orders() {
        let q1 = build_qi(1).unwrap();
        assert_eq!(ord(&q1, "p"), 4);
        assert_eq!(ord(&q1, "q"), 4);
        assert_eq!(ord(&q1, "a2"), 5);

        let q3 = build_qi(3).unwrap();
        assert_eq!(ord(&q3, "a1"), 4);
        let tips = q3.graph.vertex_ids().filter(|v| v.starts_with("t1_")).count();
        assert_eq!(tips, 3);

        assert!(matches!(build_qi(6), Err(Error::FamilyParameter { .. })));
    }

    #[test]
    fn decorated_fifth_variant_orbit_count() {
        let q5 = build_qi(5).unwrap();
        let ng = normalize(&q5.graph).unwrap();
        let orbits = point_orbits(&ng, &Budget::default()).unwrap();
        assert_eq!(orbits.len(), 14);
    }

    #[test]
    fn chain_base_cases() {
        assert!(matches!(build_xn(0), Err(Error::FamilyParameter { .. })));
        let x1 = build_xn(1).unwrap();
        assert_eq!(normalize(&x1.graph).unwrap().shape(), Shape::Circle);
        let x2 = build_xn(2).unwrap();
        assert_eq!(normalize(&x2.graph).unwrap().shape(), Shape::Arc);
        let x3 = build_xn(3).unwrap();
        assert_eq!(ord(&x3, "a1"), 3);
        assert_eq!(x3.graph.edge_count(), 3);
        for i in 1..=5 {
            let xi = build_xn(i + 3).unwrap();
            let pi = build_pi(i).unwrap();
            assert_eq!(xi.graph.serialize(), pi.graph.serialize());
        }
    }

    #[test]
    fn chain_recursion_orders() {
        let x9 = build_xn(9).unwrap();
        assert_eq!(ord(&x9, "a2"), 6);
        assert_eq!(ord(&x9, "a3"), 9);
        assert_eq!(x9.graph.vertex_count(), 9);
        assert_eq!(x9.graph.edge_count(), 11);

        let x14 = build_xn(14).unwrap();
        assert_eq!(ord(&x14, "a3"), 10);
        assert_eq!(ord(&x14, "a4"), 11);
        assert!(x14.graph.has_vertex("t4_8"));

        let x20 = build_xn(20).unwrap();
        assert_eq!(ord(&x20, "a3"), 10);
        assert_eq!(ord(&x20, "a4"), 12);
        assert_eq!(ord(&x20, "a5"), 13);
        assert_eq!(ord(&x20, "a2"), 6);
    }

    #[test]
    fn second_chain_cases() {
        assert!(matches!(build_yn(0), Err(Error::FamilyParameter { .. })));
        let y1 = build_yn(1).unwrap();
        assert_eq!(ord(&y1, "u"), 3);
        assert_eq!(ord(&y1, "w"), 3);
        let ng = normalize(&y1.graph).unwrap();
        assert_eq!(point_orbits(&ng, &Budget::default()).unwrap().len(), 6);

        let y2 = build_yn(2).unwrap();
        assert_eq!(ord(&y2, "u"), 4);
        assert_eq!(ord(&y2, "m1"), 4);
        assert_eq!(ord(&y2, "w"), 4);

        let y3 = build_yn(3).unwrap();
        assert_eq!(ord(&y3, "v1"), 3);
        assert_eq!(ord(&y3, "v2"), 3);
        assert_eq!(ord(&y3, "w"), 4);

        let y4 = build_yn(4).unwrap();
        let q1 = build_qi(1).unwrap();
        assert_eq!(y4.graph.serialize(), q1.graph.serialize());

        let y9 = build_yn(9).unwrap();
        assert_eq!(y9.graph.vertex_count(), 13);
        assert_eq!(y9.graph.edge_count(), 16);
        assert_eq!(ord(&y9, "a2"), 6);
        assert_eq!(ord(&y9, "a3"), 9);
    }

    #[test]
    fn family_dispatch() {
        assert!(build_family("example", None).is_ok());
        assert!(build_family("xn", Some(7)).is_ok());
        assert!(matches!(
            build_family("example", Some(1)),
            Err(Error::FamilyParameter { .. })
        ));
        assert!(matches!(
            build_family("sn", None),
            Err(Error::FamilyParameter { .. })
        ));
        assert!(matches!(
            build_family("nope", Some(3)),
            Err(Error::FamilyParameter { .. })
        ));
    }

    #[test]
    fn landmark_serialization_round_trips() {
        for fg in [
            build_example().unwrap(),
            build_sn(3).unwrap(),
            build_qi(2).unwrap(),
            build_xn(9).unwrap(),
            build_yn(10).unwrap(),
        ] {
            let text = fg.serialize_with_landmarks();
            assert!(text.contains("# landmark"));
            let parsed = parse_graph(&text).unwrap();
            assert_eq!(parsed.serialize(), fg.graph.serialize());
        }
    }
}
