//! Finite topological graphs: a connected multigraph (loops and parallel
//! edges allowed) viewed as a one-dimensional continuum. Every edge is a
//! copy of the unit interval; interior points are addressed by an exact
//! rational parameter, so no floating point is involved anywhere.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::rational::Rational64;
use num::{One, Zero};

use crate::error::{Error, Result};

/// Exact edge parameter in `[0, 1]`.
pub type Frac = Rational64;

/// Convenience constructor for a reduced fraction.
pub fn frac(num: i64, den: i64) -> Frac {
    Rational64::new(num, den)
}

/// Which end of an edge, in declaration order `edge <id> <u> <v>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum End {
    U,
    V,
}

impl End {
    pub fn opposite(self) -> End {
        match self {
            End::U => End::V,
            End::V => End::U,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct EdgeRec {
    pub id: String,
    pub u: usize,
    pub v: usize,
}

/// A point of the graph: a vertex, or an interior point of an edge at an
/// exact parameter strictly between 0 and 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum PointRef {
    Vertex(String),
    EdgeInterior(String, Frac),
}

impl PointRef {
    pub fn vertex(id: &str) -> Self {
        PointRef::Vertex(id.to_string())
    }

    pub fn interior(edge: &str, t: Frac) -> Self {
        PointRef::EdgeInterior(edge.to_string(), t)
    }

    /// Interior point at parameter 1/2, the canonical representative of an
    /// edge's interior.
    pub fn midpoint(edge: &str) -> Self {
        PointRef::EdgeInterior(edge.to_string(), frac(1, 2))
    }
}

impl fmt::Display for PointRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointRef::Vertex(v) => write!(f, "vertex {v}"),
            PointRef::EdgeInterior(e, t) => write!(f, "edge {e} @ {t}"),
        }
    }
}

/// Topological type of a point, determined by its order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PointClass {
    /// Order 1.
    End,
    /// Order 2.
    Ordinary,
    /// Order at least 3.
    Ramification,
}

impl fmt::Display for PointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PointClass::End => "end",
            PointClass::Ordinary => "ordinary",
            PointClass::Ramification => "ramification",
        };
        write!(f, "{s}")
    }
}

/// Global shape of a graph after forgetting inessential vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    /// Every point has order 2: a simple closed curve.
    Circle,
    /// Two points of order 1, everything else order 2: an arc.
    Arc,
    /// Anything else: at least one ramification point.
    General,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Shape::Circle => "circle",
            Shape::Arc => "arc",
            Shape::General => "general",
        };
        write!(f, "{s}")
    }
}

fn valid_identifier(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

/// A connected finite multigraph with named vertices and edges.
///
/// Construction validates all structural rules: identifiers are unique and
/// well formed, endpoints exist, at least one edge is present, and the graph
/// is connected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopoGraph {
    vertices: Vec<String>,
    edges: Vec<EdgeRec>,
    vmap: BTreeMap<String, usize>,
    emap: BTreeMap<String, usize>,
    /// Edge ends incident to each vertex, in declaration order.
    incidence: Vec<Vec<(usize, End)>>,
}

impl TopoGraph {
    /// Build a graph from vertex names and `(edge, u, v)` triples.
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[(S, S, S)]) -> Result<Self> {
        let mut g = TopoGraph {
            vertices: Vec::new(),
            edges: Vec::new(),
            vmap: BTreeMap::new(),
            emap: BTreeMap::new(),
            incidence: Vec::new(),
        };
        for v in vertices {
            g.push_vertex(v.as_ref())?;
        }
        for (id, u, v) in edges {
            g.push_edge(id.as_ref(), u.as_ref(), v.as_ref())?;
        }
        g.validate()?;
        Ok(g)
    }

    fn push_vertex(&mut self, id: &str) -> Result<()> {
        if !valid_identifier(id) {
            return Err(Error::Syntax {
                line: 0,
                col: 0,
                msg: format!("invalid identifier `{id}`"),
            });
        }
        if self.vmap.contains_key(id) || self.emap.contains_key(id) {
            return Err(Error::DuplicateIdentifier { id: id.to_string() });
        }
        self.vmap.insert(id.to_string(), self.vertices.len());
        self.vertices.push(id.to_string());
        self.incidence.push(Vec::new());
        Ok(())
    }

    fn push_edge(&mut self, id: &str, u: &str, v: &str) -> Result<()> {
        if !valid_identifier(id) {
            return Err(Error::Syntax {
                line: 0,
                col: 0,
                msg: format!("invalid identifier `{id}`"),
            });
        }
        if self.emap.contains_key(id) || self.vmap.contains_key(id) {
            return Err(Error::DuplicateIdentifier { id: id.to_string() });
        }
        let ui = *self.vmap.get(u).ok_or_else(|| Error::DanglingEndpoint {
            edge: id.to_string(),
            vertex: u.to_string(),
        })?;
        let vi = *self.vmap.get(v).ok_or_else(|| Error::DanglingEndpoint {
            edge: id.to_string(),
            vertex: v.to_string(),
        })?;
        let ei = self.edges.len();
        self.emap.insert(id.to_string(), ei);
        self.edges.push(EdgeRec {
            id: id.to_string(),
            u: ui,
            v: vi,
        });
        self.incidence[ui].push((ei, End::U));
        self.incidence[vi].push((ei, End::V));
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        if self.edges.is_empty() {
            return Err(Error::NoEdges);
        }
        // Connectivity over vertices; every edge has both endpoints, so a
        // traversal over vertex adjacency suffices.
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &(ei, _) in &self.incidence[x] {
                let e = &self.edges[ei];
                for w in [e.u, e.v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Disconnected);
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = &str> {
        self.vertices.iter().map(|s| s.as_str())
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = &str> {
        self.edges.iter().map(|e| e.id.as_str())
    }

    pub fn has_vertex(&self, id: &str) -> bool {
        self.vmap.contains_key(id)
    }

    pub fn has_edge(&self, id: &str) -> bool {
        self.emap.contains_key(id)
    }

    /// Endpoint vertex names `(u, v)` of an edge.
    pub fn edge_endpoints(&self, id: &str) -> Option<(&str, &str)> {
        let e = &self.edges[*self.emap.get(id)?];
        Some((&self.vertices[e.u], &self.vertices[e.v]))
    }

    pub fn is_loop(&self, id: &str) -> bool {
        self.emap
            .get(id)
            .map(|&i| self.edges[i].u == self.edges[i].v)
            .unwrap_or(false)
    }

    pub(crate) fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vmap.get(id).copied()
    }

    pub(crate) fn vertex_name(&self, i: usize) -> &str {
        &self.vertices[i]
    }

    pub(crate) fn edge_rec(&self, i: usize) -> &EdgeRec {
        &self.edges[i]
    }

    pub(crate) fn incident_ends(&self, vi: usize) -> &[(usize, End)] {
        &self.incidence[vi]
    }

    /// Number of edge ends meeting a vertex; a loop counts twice.
    pub fn vertex_order(&self, id: &str) -> Option<u32> {
        let vi = self.vmap.get(id)?;
        Some(self.incidence[*vi].len() as u32)
    }

    /// Check that a point reference is valid for this graph.
    pub fn check_point(&self, p: &PointRef) -> Result<()> {
        match p {
            PointRef::Vertex(v) => {
                if !self.has_vertex(v) {
                    return Err(Error::UnknownPoint {
                        point: p.to_string(),
                    });
                }
            }
            PointRef::EdgeInterior(e, t) => {
                if !self.has_edge(e) {
                    return Err(Error::UnknownPoint {
                        point: p.to_string(),
                    });
                }
                if *t <= Frac::zero() || *t >= Frac::one() {
                    return Err(Error::ParameterOutOfRange {
                        edge: e.clone(),
                        t: t.to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Shape of the graph as a topological space.
    pub fn shape(&self) -> Shape {
        let orders: Vec<u32> = (0..self.vertices.len())
            .map(|i| self.incidence[i].len() as u32)
            .collect();
        if orders.iter().all(|&o| o == 2) {
            Shape::Circle
        } else if orders.iter().filter(|&&o| o == 1).count() == 2
            && orders.iter().all(|&o| o == 1 || o == 2)
        {
            Shape::Arc
        } else {
            Shape::General
        }
    }

    /// Rename every identifier through the two maps. Used by tests to check
    /// invariance of the analysis under renaming.
    pub fn renamed(
        &self,
        vf: &dyn Fn(&str) -> String,
        ef: &dyn Fn(&str) -> String,
    ) -> Result<TopoGraph> {
        let vertices: Vec<String> = self.vertices.iter().map(|v| vf(v)).collect();
        let edges: Vec<(String, String, String)> = self
            .edges
            .iter()
            .map(|e| {
                (
                    ef(&e.id),
                    vf(&self.vertices[e.u]),
                    vf(&self.vertices[e.v]),
                )
            })
            .collect();
        TopoGraph::new(&vertices, &edges)
    }

    /// Serialize to the text format understood by [`parse_graph`].
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            out.push_str("vertex ");
            out.push_str(v);
            out.push('\n');
        }
        for e in &self.edges {
            out.push_str("edge ");
            out.push_str(&e.id);
            out.push(' ');
            out.push_str(&self.vertices[e.u]);
            out.push(' ');
            out.push_str(&self.vertices[e.v]);
            out.push('\n');
        }
        out
    }

    /// A fresh identifier not used by any vertex or edge, derived from `base`.
    pub(crate) fn fresh_id(&self, base: &str) -> String {
        let mut id = base.to_string();
        while self.vmap.contains_key(&id) || self.emap.contains_key(&id) {
            id.push('x');
        }
        id
    }
}

/// Parse the plain text graph format.
///
/// Lines are `vertex <id>` or `edge <id> <u> <v>`; `#` starts a comment that
/// runs to the end of the line; blank lines are ignored. Identifiers match
/// `[A-Za-z0-9_]+`.
pub fn parse_graph(text: &str) -> Result<TopoGraph> {
    let mut g = TopoGraph {
        vertices: Vec::new(),
        edges: Vec::new(),
        vmap: BTreeMap::new(),
        emap: BTreeMap::new(),
        incidence: Vec::new(),
    };
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let mut toks = Vec::new();
        let mut col_of = Vec::new();
        let mut col = 0;
        for piece in content.split_inclusive(char::is_whitespace) {
            let trimmed = piece.trim_end_matches(char::is_whitespace);
            if !trimmed.is_empty() {
                toks.push(trimmed);
                col_of.push(col + 1);
            }
            col += piece.chars().count();
        }
        if toks.is_empty() {
            continue;
        }
        let syntax = |col: usize, msg: String| Error::Syntax { line, col, msg };
        match toks[0] {
            "vertex" => {
                if toks.len() != 2 {
                    return Err(syntax(
                        col_of[0],
                        format!("expected `vertex <id>`, got {} token(s)", toks.len()),
                    ));
                }
                if !valid_identifier(toks[1]) {
                    return Err(syntax(col_of[1], format!("invalid identifier `{}`", toks[1])));
                }
                if g.vmap.contains_key(toks[1]) || g.emap.contains_key(toks[1]) {
                    return Err(Error::DuplicateIdentifier {
                        id: toks[1].to_string(),
                    });
                }
                g.push_vertex(toks[1])?;
            }
            "edge" => {
                if toks.len() != 4 {
                    return Err(syntax(
                        col_of[0],
                        format!("expected `edge <id> <u> <v>`, got {} token(s)", toks.len()),
                    ));
                }
                for t in &toks[1..] {
                    if !valid_identifier(t) {
                        return Err(syntax(col_of[1], format!("invalid identifier `{t}`")));
                    }
                }
                if g.emap.contains_key(toks[1]) || g.vmap.contains_key(toks[1]) {
                    return Err(Error::DuplicateIdentifier {
                        id: toks[1].to_string(),
                    });
                }
                g.push_edge(toks[1], toks[2], toks[3])?;
            }
            other => {
                return Err(syntax(
                    col_of[0],
                    format!("unknown directive `{other}` (expected `vertex` or `edge`)"),
                ));
            }
        }
    }
    g.validate()?;
    Ok(g)
}

/// Order of a point: the number of directions the graph leaves it in.
///
/// An edge-interior point always has order 2; a vertex has one direction per
/// incident edge end (a loop contributes two).
pub fn point_order(g: &TopoGraph, p: &PointRef) -> Result<u32> {
    g.check_point(p)?;
    Ok(match p {
        PointRef::Vertex(v) => g.vertex_order(v).unwrap(),
        PointRef::EdgeInterior(..) => 2,
    })
}

/// Classify a point as end, ordinary, or ramification by its order.
pub fn point_class(g: &TopoGraph, p: &PointRef) -> Result<PointClass> {
    let o = point_order(g, p)?;
    Ok(match o {
        1 => PointClass::End,
        2 => PointClass::Ordinary,
        _ => PointClass::Ramification,
    })
}

/// Where an original vertex went during normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
enum VertexImage {
    Kept,
    /// Absorbed into the interior of a normalized edge at the given parameter.
    Inside { edge: String, at: Frac },
}

/// Position of an original edge inside a normalized edge.
#[derive(Debug, Clone, PartialEq, Eq)]
struct EdgeImage {
    edge: String,
    /// 0-based index along the chain of constituent edges.
    index: usize,
    /// Total number of constituents of the normalized edge.
    count: usize,
    /// Whether the original `u -> v` direction agrees with the chain direction.
    forward: bool,
}

/// A graph together with the normalization that produced it: vertices of
/// order 2 are absorbed into longer edges, and a point mapping carries any
/// point of the original graph to the homeomorphic image.
#[derive(Debug, Clone)]
pub struct NormalizedGraph {
    graph: TopoGraph,
    shape: Shape,
    vertex_images: BTreeMap<String, VertexImage>,
    edge_images: BTreeMap<String, EdgeImage>,
}

impl NormalizedGraph {
    pub fn graph(&self) -> &TopoGraph {
        &self.graph
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    /// Image of an original-graph point in the normalized graph.
    pub fn map_point(&self, p: &PointRef) -> Result<PointRef> {
        match p {
            PointRef::Vertex(v) => match self.vertex_images.get(v) {
                Some(VertexImage::Kept) => Ok(PointRef::Vertex(v.clone())),
                Some(VertexImage::Inside { edge, at }) => {
                    Ok(PointRef::EdgeInterior(edge.clone(), *at))
                }
                None => Err(Error::UnknownPoint {
                    point: p.to_string(),
                }),
            },
            PointRef::EdgeInterior(e, t) => {
                let img = self.edge_images.get(e).ok_or_else(|| Error::UnknownPoint {
                    point: p.to_string(),
                })?;
                let local = if img.forward { *t } else { Frac::one() - *t };
                let par = (Frac::from_integer(img.index as i64) + local)
                    / Frac::from_integer(img.count as i64);
                Ok(PointRef::EdgeInterior(img.edge.clone(), par))
            }
        }
    }
}

/// Normalize a graph: suppress order-2 vertices, keeping any vertex listed in
/// `keep` as an explicit (marked) vertex even if its order is 2.
///
/// On a simple closed curve with an empty keep set, the smallest vertex is
/// kept as an anchor so the result is representable (a vertex with a loop).
pub(crate) fn normalize_marked(g: &TopoGraph, keep: &BTreeSet<String>) -> Result<NormalizedGraph> {
    let shape = g.shape();
    let n = g.vertex_count();
    let mut anchor = vec![false; n];
    let mut have_anchor = false;
    for i in 0..n {
        let name = g.vertex_name(i);
        if g.incident_ends(i).len() != 2 || keep.contains(name) {
            anchor[i] = true;
            have_anchor = true;
        }
    }
    if !have_anchor {
        // Simple closed curve: anchor the smallest vertex name.
        let i = (0..n)
            .min_by_key(|&i| g.vertex_name(i).to_string())
            .expect("graph has at least one vertex");
        anchor[i] = true;
    }

    let mut vertex_images = BTreeMap::new();
    let mut edge_images = BTreeMap::new();
    let mut norm_vertices: Vec<String> = Vec::new();
    for i in 0..n {
        if anchor[i] {
            norm_vertices.push(g.vertex_name(i).to_string());
            vertex_images.insert(g.vertex_name(i).to_string(), VertexImage::Kept);
        }
    }
    norm_vertices.sort();

    // Walk maximal chains of edges whose interior vertices are unanchored.
    let mut consumed = vec![false; g.edge_count()];
    let mut norm_edges: Vec<(String, String, String)> = Vec::new();
    let mut anchors_sorted: Vec<usize> = (0..n).filter(|&i| anchor[i]).collect();
    anchors_sorted.sort_by_key(|&i| g.vertex_name(i).to_string());

    for &start in &anchors_sorted {
        // Deterministic scan of incident ends: by edge id, then end tag.
        let mut ends: Vec<(usize, End)> = g.incident_ends(start).to_vec();
        ends.sort_by_key(|&(ei, end)| (g.edge_rec(ei).id.clone(), end));
        for (ei0, end0) in ends {
            if consumed[ei0] {
                continue;
            }
            // Walk away from `start` through unanchored vertices.
            let mut chain: Vec<(usize, bool)> = Vec::new(); // (edge index, forward?)
            let mut interior: Vec<usize> = Vec::new();
            let mut cur_edge = ei0;
            let mut forward = end0 == End::U; // entering at u means traversing u -> v
            loop {
                consumed[cur_edge] = true;
                chain.push((cur_edge, forward));
                let rec = g.edge_rec(cur_edge);
                let far = if forward { rec.v } else { rec.u };
                if anchor[far] {
                    break;
                }
                interior.push(far);
                // The far vertex has exactly two ends; pick the one that is
                // not the end we arrived through.
                let arrived = (cur_edge, if forward { End::V } else { End::U });
                let next = g
                    .incident_ends(far)
                    .iter()
                    .copied()
                    .find(|&(e, tag)| (e, tag) != arrived)
                    .expect("order-2 vertex has a second edge end");
                cur_edge = next.0;
                forward = next.1 == End::U;
            }
            let last = chain.last().unwrap();
            let rec = g.edge_rec(last.0);
            let end_vertex = if last.1 { rec.v } else { rec.u };
            let count = chain.len();
            let norm_id = chain
                .iter()
                .map(|&(e, _)| g.edge_rec(e).id.clone())
                .min()
                .unwrap();
            for (idx, &(e, fwd)) in chain.iter().enumerate() {
                edge_images.insert(
                    g.edge_rec(e).id.clone(),
                    EdgeImage {
                        edge: norm_id.clone(),
                        index: idx,
                        count,
                        forward: fwd,
                    },
                );
            }
            for (j, &vi) in interior.iter().enumerate() {
                vertex_images.insert(
                    g.vertex_name(vi).to_string(),
                    VertexImage::Inside {
                        edge: norm_id.clone(),
                        at: frac((j + 1) as i64, count as i64),
                    },
                );
            }
            norm_edges.push((
                norm_id,
                g.vertex_name(start).to_string(),
                g.vertex_name(end_vertex).to_string(),
            ));
        }
    }
    debug_assert!(consumed.iter().all(|&c| c), "all edges absorbed into chains");
    norm_edges.sort();

    let graph = TopoGraph::new(&norm_vertices, &norm_edges)?;
    Ok(NormalizedGraph {
        graph,
        shape,
        vertex_images,
        edge_images,
    })
}

/// Suppress all order-2 vertices of a graph.
///
/// The result is homeomorphic to the input. For `General` shapes every
/// remaining vertex has order 1 or at least 3; a circle is anchored at one
/// vertex (which keeps order 2) and an arc keeps its two end vertices.
pub fn normalize(g: &TopoGraph) -> Result<NormalizedGraph> {
    normalize_marked(g, &BTreeSet::new())
}

/// A subdivided graph plus the mapping of original points into it.
#[derive(Debug, Clone)]
pub struct Subdivision {
    graph: TopoGraph,
    /// `edge id -> (chain vertex names, chain edge names)`; chains run u -> v.
    chains: BTreeMap<String, (Vec<String>, Vec<String>)>,
}

impl Subdivision {
    pub fn graph(&self) -> &TopoGraph {
        &self.graph
    }

    /// Image of an original point in the subdivided graph.
    pub fn map_point(&self, p: &PointRef) -> Result<PointRef> {
        match p {
            PointRef::Vertex(v) => {
                if self.graph.has_vertex(v) {
                    Ok(p.clone())
                } else {
                    Err(Error::UnknownPoint {
                        point: p.to_string(),
                    })
                }
            }
            PointRef::EdgeInterior(e, t) => {
                let (mids, pieces) = self.chains.get(e).ok_or_else(|| Error::UnknownPoint {
                    point: p.to_string(),
                })?;
                let k = pieces.len() as i64;
                let scaled = *t * Frac::from_integer(k);
                let idx = scaled.floor().to_integer();
                if scaled.is_integer() {
                    // Falls exactly on a subdivision vertex.
                    Ok(PointRef::Vertex(mids[(idx - 1) as usize].clone()))
                } else {
                    let local = scaled - Frac::from_integer(idx);
                    Ok(PointRef::EdgeInterior(pieces[idx as usize].clone(), local))
                }
            }
        }
    }

    /// The sub-edges an original edge was divided into, in u -> v order.
    pub fn pieces_of(&self, edge: &str) -> Option<&[String]> {
        self.chains.get(edge).map(|(_, p)| p.as_slice())
    }

    /// For a vertex introduced by the subdivision, the original edge it sits
    /// on and its position along that edge. `None` for original vertices.
    pub fn vertex_position(&self, name: &str) -> Option<(&str, Frac)> {
        for (edge, (mids, pieces)) in &self.chains {
            if let Some(i) = mids.iter().position(|m| m == name) {
                return Some((edge, frac((i + 1) as i64, pieces.len() as i64)));
            }
        }
        None
    }

    /// For a sub-edge, the original edge and the interval it covers.
    pub fn piece_span(&self, name: &str) -> Option<(&str, Frac, Frac)> {
        for (edge, (_, pieces)) in &self.chains {
            if let Some(i) = pieces.iter().position(|p| p == name) {
                let k = pieces.len() as i64;
                return Some((edge, frac(i as i64, k), frac(i as i64 + 1, k)));
            }
        }
        None
    }
}

/// Replace every edge by a chain of `k` edges. The result is homeomorphic to
/// the input; `map_point` carries points across.
pub fn subdivide(g: &TopoGraph, k: u32) -> Result<Subdivision> {
    if k == 0 {
        return Err(Error::InternalInvariant(
            "subdivision factor must be positive".into(),
        ));
    }
    let k = k as usize;
    let mut vertices: Vec<String> = g.vertex_ids().map(|s| s.to_string()).collect();
    let mut edges: Vec<(String, String, String)> = Vec::new();
    let mut chains = BTreeMap::new();
    let mut used: BTreeSet<String> = vertices.iter().cloned().collect();
    used.extend(g.edge_ids().map(|s| s.to_string()));
    let fresh = |base: String, used: &mut BTreeSet<String>| -> String {
        let mut id = base;
        while used.contains(&id) {
            id.push('x');
        }
        used.insert(id.clone());
        id
    };
    for eid in g.edge_ids() {
        let (u, v) = g.edge_endpoints(eid).unwrap();
        let mut mids = Vec::new();
        for i in 1..k {
            let m = fresh(format!("{eid}_m{i}"), &mut used);
            vertices.push(m.clone());
            mids.push(m);
        }
        let mut pieces = Vec::new();
        for i in 0..k {
            let a = if i == 0 { u.to_string() } else { mids[i - 1].clone() };
            let b = if i == k - 1 {
                v.to_string()
            } else {
                mids[i].clone()
            };
            let pid = fresh(format!("{eid}_s{}", i + 1), &mut used);
            edges.push((pid.clone(), a, b));
            pieces.push(pid);
        }
        chains.insert(eid.to_string(), (mids, pieces));
    }
    let graph = TopoGraph::new(&vertices, &edges)?;
    Ok(Subdivision { graph, chains })
}

/// For an end point, the nearest vertex that is not ordinary: walk from the
/// end point through order-2 points until the first point of order != 2.
/// Returns that point and its order.
///
/// Undefined on an arc (the walk would end at the opposite end point without
/// meeting a ramification point).
pub fn neighbor_vertex(g: &TopoGraph, p: &PointRef) -> Result<(PointRef, u32)> {
    if point_class(g, p)? != PointClass::End {
        return Err(Error::NotAnEndpoint {
            point: p.to_string(),
        });
    }
    if g.shape() == Shape::Arc {
        return Err(Error::ArcGraph);
    }
    let ng = normalize(g)?;
    // After normalization the end point keeps its identity and its unique
    // edge leads directly to the neighbor.
    let PointRef::Vertex(v) = ng.map_point(p)? else {
        unreachable!("an order-1 vertex is never suppressed")
    };
    let vi = ng.graph().vertex_index(&v).unwrap();
    let &(ei, end) = ng
        .graph()
        .incident_ends(vi)
        .first()
        .expect("end point has one incident edge");
    let rec = ng.graph().edge_rec(ei);
    let other = match end {
        End::U => rec.v,
        End::V => rec.u,
    };
    let name = ng.graph().vertex_name(other).to_string();
    let order = ng.graph().vertex_order(&name).unwrap();
    Ok((PointRef::Vertex(name), order))
}

/// Orders of the two endpoints of the normalized edge containing an ordinary
/// point, plus whether that edge is a loop.
fn normalized_edge_orders(g: &TopoGraph, p: &PointRef) -> Result<(u32, u32, bool)> {
    if point_class(g, p)? != PointClass::Ordinary {
        return Err(Error::NotOrdinary {
            point: p.to_string(),
        });
    }
    if g.shape() == Shape::Circle {
        return Err(Error::CircleGraph);
    }
    let ng = normalize(g)?;
    let PointRef::EdgeInterior(e, _) = ng.map_point(p)? else {
        unreachable!("an ordinary point is interior to a normalized edge")
    };
    let (u, v) = ng.graph().edge_endpoints(&e).unwrap();
    let ou = ng.graph().vertex_order(u).unwrap();
    let ov = ng.graph().vertex_order(v).unwrap();
    Ok((ou, ov, u == v))
}

/// For an ordinary point, the sum of the orders of the endpoints of the
/// normalized edge containing it, together with a flag telling whether that
/// edge is a loop (in which case the single endpoint is counted once).
///
/// Undefined on a circle, which has no distinguished vertices at all.
pub fn sigma(g: &TopoGraph, p: &PointRef) -> Result<(u32, bool)> {
    let (ou, ov, looped) = normalized_edge_orders(g, p)?;
    if looped {
        Ok((ou, true))
    } else {
        Ok((ou + ov, false))
    }
}

/// For an ordinary point on a non-loop normalized edge, the smaller of the
/// two endpoint orders; `None` when the edge is a loop. Together with
/// [`sigma`] this determines the unordered pair of endpoint orders.
///
/// Undefined on a circle, like [`sigma`].
pub fn sigma_min_order(g: &TopoGraph, p: &PointRef) -> Result<Option<u32>> {
    let (ou, ov, looped) = normalized_edge_orders(g, p)?;
    Ok(if looped { None } else { Some(ou.min(ov)) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triod() -> TopoGraph {
        TopoGraph::new(
            &["c", "t1", "t2", "t3"],
            &[("l1", "c", "t1"), ("l2", "c", "t2"), ("l3", "c", "t3")],
        )
        .unwrap()
    }

    /// Independent order oracle: degree of the point's image in a 2-fold
    /// subdivision, where loops no longer wrap.
    fn order_by_subdivision(g: &TopoGraph, p: &PointRef) -> u32 {
        let sub = subdivide(g, 2).unwrap();
        match sub.map_point(p).unwrap() {
            PointRef::Vertex(v) => sub.graph().vertex_order(&v).unwrap(),
            PointRef::EdgeInterior(..) => 2,
        }
    }

    #[test]
    fn parses_vertices_edges_and_comments() {
        let g = parse_graph("# a triod\nvertex c\nvertex t1\nvertex t2\nvertex t3\nedge l1 c t1 # leg\nedge l2 c t2\nedge l3 c t3\n").unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.vertex_order("c"), Some(3));
    }

    #[test]
    fn syntax_error_reports_position() {
        let err = parse_graph("vertex a\nedgy e a a\n").unwrap_err();
        match err {
            Error::Syntax { line, col, .. } => {
                assert_eq!(line, 2);
                assert_eq!(col, 1);
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn dangling_endpoint_rejected() {
        let err = parse_graph("vertex a\nedge e a b\n").unwrap_err();
        assert_eq!(
            err,
            Error::DanglingEndpoint {
                edge: "e".into(),
                vertex: "b".into()
            }
        );
    }

    #[test]
    fn duplicate_identifier_rejected() {
        let err = parse_graph("vertex a\nvertex a\n").unwrap_err();
        assert_eq!(err, Error::DuplicateIdentifier { id: "a".into() });
        let err = parse_graph("vertex a\nvertex b\nedge e a b\nedge e b a\n").unwrap_err();
        assert_eq!(err, Error::DuplicateIdentifier { id: "e".into() });
    }

    #[test]
    fn disconnected_rejected() {
        let err = parse_graph("vertex a\nvertex b\nvertex c\nvertex d\nedge e a b\nedge f c d\n")
            .unwrap_err();
        assert_eq!(err, Error::Disconnected);
    }

    #[test]
    fn zero_edges_rejected() {
        assert_eq!(parse_graph("vertex a\n").unwrap_err(), Error::NoEdges);
    }

    #[test]
    fn serialize_round_trips() {
        let text = "vertex a\nvertex b\nedge e a b\nedge f a a\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.serialize(), text);
        assert_eq!(parse_graph(&g.serialize()).unwrap(), g);
    }

    #[test]
    fn loop_counts_twice_in_order() {
        let g = parse_graph("vertex a\nvertex b\nedge e a b\nedge c a a\n").unwrap();
        assert_eq!(point_order(&g, &PointRef::vertex("a")).unwrap(), 3);
        assert_eq!(point_order(&g, &PointRef::vertex("b")).unwrap(), 1);
        assert_eq!(
            point_order(&g, &PointRef::midpoint("c")).unwrap(),
            2
        );
        assert_eq!(order_by_subdivision(&g, &PointRef::vertex("a")), 3);
    }

    #[test]
    fn point_classes() {
        let g = triod();
        assert_eq!(
            point_class(&g, &PointRef::vertex("c")).unwrap(),
            PointClass::Ramification
        );
        assert_eq!(
            point_class(&g, &PointRef::vertex("t1")).unwrap(),
            PointClass::End
        );
        assert_eq!(
            point_class(&g, &PointRef::midpoint("l1")).unwrap(),
            PointClass::Ordinary
        );
    }

    #[test]
    fn shape_detection() {
        assert_eq!(parse_graph("vertex a\nedge c a a\n").unwrap().shape(), Shape::Circle);
        let cycle =
            parse_graph("vertex a\nvertex b\nvertex c\nedge e1 a b\nedge e2 b c\nedge e3 c a\n")
                .unwrap();
        assert_eq!(cycle.shape(), Shape::Circle);
        let path = parse_graph("vertex a\nvertex b\nvertex c\nedge e1 a b\nedge e2 b c\n").unwrap();
        assert_eq!(path.shape(), Shape::Arc);
        assert_eq!(triod().shape(), Shape::General);
    }

    #[test]
    fn normalize_path_to_single_edge() {
        let path =
            parse_graph("vertex a\nvertex b\nvertex c\nedge e1 a b\nedge e2 b c\n").unwrap();
        let ng = normalize(&path).unwrap();
        assert_eq!(ng.shape(), Shape::Arc);
        assert_eq!(ng.graph().vertex_count(), 2);
        assert_eq!(ng.graph().edge_count(), 1);
        assert_eq!(ng.graph().edge_endpoints("e1"), Some(("a", "c")));
        // b sits halfway along the merged edge.
        assert_eq!(
            ng.map_point(&PointRef::vertex("b")).unwrap(),
            PointRef::interior("e1", frac(1, 2))
        );
        // An interior point of the second constituent maps past the middle.
        assert_eq!(
            ng.map_point(&PointRef::interior("e2", frac(1, 3))).unwrap(),
            PointRef::interior("e1", frac(2, 3))
        );
    }

    #[test]
    fn normalize_cycle_to_anchored_loop() {
        let cycle =
            parse_graph("vertex a\nvertex b\nvertex c\nedge e1 a b\nedge e2 b c\nedge e3 c a\n")
                .unwrap();
        let ng = normalize(&cycle).unwrap();
        assert_eq!(ng.shape(), Shape::Circle);
        assert_eq!(ng.graph().vertex_count(), 1);
        assert!(ng.graph().is_loop("e1"));
        assert_eq!(
            ng.map_point(&PointRef::vertex("b")).unwrap(),
            PointRef::interior("e1", frac(1, 3))
        );
    }

    #[test]
    fn normalize_preserves_point_order() {
        let g = parse_graph(
            "vertex a\nvertex b\nvertex c\nvertex t\nedge e1 a b\nedge e2 b c\nedge e3 c a\nedge p a t\n",
        )
        .unwrap();
        let ng = normalize(&g).unwrap();
        assert_eq!(ng.shape(), Shape::General);
        for v in ["a", "b", "c", "t"] {
            let p = PointRef::vertex(v);
            let img = ng.map_point(&p).unwrap();
            assert_eq!(
                point_order(&g, &p).unwrap(),
                point_order(ng.graph(), &img).unwrap(),
                "order preserved for {v}"
            );
        }
    }

    #[test]
    fn normalize_is_idempotent() {
        let g = parse_graph(
            "vertex a\nvertex b\nvertex c\nvertex t\nedge e1 a b\nedge e2 b c\nedge e3 c a\nedge p a t\n",
        )
        .unwrap();
        let once = normalize(&g).unwrap();
        let twice = normalize(once.graph()).unwrap();
        assert_eq!(once.graph(), twice.graph());
    }

    #[test]
    fn subdivide_triod() {
        let g = triod();
        let sub = subdivide(&g, 3).unwrap();
        assert_eq!(sub.graph().edge_count(), 9);
        assert_eq!(sub.graph().vertex_count(), 4 + 3 * 2);
        assert_eq!(sub.graph().vertex_order("c"), Some(3));
        // Parameter mapping: 1/2 of a leg lands inside the middle piece.
        let img = sub.map_point(&PointRef::midpoint("l1")).unwrap();
        assert_eq!(img, PointRef::interior("l1_s2", frac(1, 2)));
        // Parameter 1/3 lands exactly on the first subdivision vertex.
        let img = sub.map_point(&PointRef::interior("l1", frac(1, 3))).unwrap();
        assert_eq!(img, PointRef::vertex("l1_m1"));
    }

    #[test]
    fn subdivision_preserves_order() {
        let g = parse_graph("vertex a\nvertex b\nedge e a b\nedge c a a\nedge d a b\n").unwrap();
        let sub = subdivide(&g, 2).unwrap();
        for v in ["a", "b"] {
            let p = PointRef::vertex(v);
            let img = sub.map_point(&p).unwrap();
            assert_eq!(
                point_order(&g, &p).unwrap(),
                point_order(sub.graph(), &img).unwrap()
            );
        }
    }

    #[test]
    fn neighbor_of_end_point() {
        // Path of two edges hanging off a ramification vertex: walking from
        // the tip passes through the ordinary joint.
        let g = parse_graph(
            "vertex r\nvertex j\nvertex tip\nvertex s1\nvertex s2\nedge a r j\nedge b j tip\nedge p1 r s1\nedge p2 r s2\n",
        )
        .unwrap();
        let (v, order) = neighbor_vertex(&g, &PointRef::vertex("tip")).unwrap();
        assert_eq!(v, PointRef::vertex("r"));
        assert_eq!(order, 3);
    }

    #[test]
    fn neighbor_rejects_arc_and_non_ends() {
        let path = parse_graph("vertex a\nvertex b\nedge e a b\n").unwrap();
        assert_eq!(
            neighbor_vertex(&path, &PointRef::vertex("a")).unwrap_err(),
            Error::ArcGraph
        );
        let g = triod();
        assert!(matches!(
            neighbor_vertex(&g, &PointRef::vertex("c")).unwrap_err(),
            Error::NotAnEndpoint { .. }
        ));
    }

    #[test]
    fn sigma_on_arc_interior() {
        let path = parse_graph("vertex a\nvertex b\nedge e a b\n").unwrap();
        assert_eq!(sigma(&path, &PointRef::midpoint("e")).unwrap(), (2, false));
    }

    #[test]
    fn sigma_rejects_circle_and_non_ordinary() {
        let circle = parse_graph("vertex a\nedge c a a\n").unwrap();
        assert_eq!(
            sigma(&circle, &PointRef::midpoint("c")).unwrap_err(),
            Error::CircleGraph
        );
        let g = triod();
        assert!(matches!(
            sigma(&g, &PointRef::vertex("c")).unwrap_err(),
            Error::NotOrdinary { .. }
        ));
    }

    #[test]
    fn sigma_counts_loop_endpoint_once() {
        // A vertex with a loop and a pendant edge: order 3.
        let g = parse_graph("vertex a\nvertex b\nedge e a b\nedge c a a\n").unwrap();
        assert_eq!(sigma(&g, &PointRef::midpoint("c")).unwrap(), (3, true));
        assert_eq!(sigma(&g, &PointRef::midpoint("e")).unwrap(), (4, false));
    }

    #[test]
    fn sigma_sees_through_suppressed_vertices() {
        // tip - j - r: the ordinary joint j lies on the normalized edge
        // tip..r, so its sigma is 1 + 3.
        let g = parse_graph(
            "vertex r\nvertex j\nvertex tip\nvertex s1\nvertex s2\nedge a r j\nedge b j tip\nedge p1 r s1\nedge p2 r s2\n",
        )
        .unwrap();
        assert_eq!(sigma(&g, &PointRef::vertex("j")).unwrap(), (4, false));
    }
}
