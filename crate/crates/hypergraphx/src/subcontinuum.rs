//! Subcontinua of a graph: representation, membership, complement
//! components, decomposition of a subcontinuum at one of its points, the
//! guaranteed local cell dimension in the hyperspace, and the maximal
//! branching number kappa attainable by cutting the graph along a
//! subcontinuum through a given point.

use std::collections::{BTreeMap, BTreeSet};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::{
    frac, point_class, point_order, subdivide, End, Frac, PointClass, PointRef, Subdivision,
    TopoGraph,
};

const ZERO: Frac = Frac::new_raw(0, 1);
const ONE: Frac = Frac::new_raw(1, 1);

fn half() -> Frac {
    frac(1, 2)
}

/// A partial edge segment anchored at one endpoint of its edge: it covers
/// the initial `len` of the edge measured from that endpoint.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Stub {
    pub edge: String,
    pub end: End,
    pub len: Frac,
}

/// A closed connected subset of a graph.
///
/// Two forms cover everything: a closed interval inside a single edge, or a
/// connected subgraph (core vertices plus fully contained edges) decorated
/// with partial stubs hanging off edge endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubcontinuumRepr {
    WithinEdge {
        edge: String,
        lo: Frac,
        hi: Frac,
    },
    Spanning {
        vertices: BTreeSet<String>,
        full_edges: BTreeSet<String>,
        stubs: Vec<Stub>,
    },
}

impl SubcontinuumRepr {
    /// The one-point subcontinuum `{p}`.
    pub fn single_point(p: &PointRef) -> Self {
        match p {
            PointRef::Vertex(v) => SubcontinuumRepr::Spanning {
                vertices: [v.clone()].into_iter().collect(),
                full_edges: BTreeSet::new(),
                stubs: Vec::new(),
            },
            PointRef::EdgeInterior(e, t) => SubcontinuumRepr::WithinEdge {
                edge: e.clone(),
                lo: *t,
                hi: *t,
            },
        }
    }

    /// The whole graph as a subcontinuum.
    pub fn whole(g: &TopoGraph) -> Self {
        SubcontinuumRepr::Spanning {
            vertices: g.vertex_ids().map(|s| s.to_string()).collect(),
            full_edges: g.edge_ids().map(|s| s.to_string()).collect(),
            stubs: Vec::new(),
        }
    }

    /// Structural validity against a host graph.
    pub fn validate(&self, g: &TopoGraph) -> Result<()> {
        match self {
            SubcontinuumRepr::WithinEdge { edge, lo, hi } => {
                if !g.has_edge(edge) {
                    return Err(Error::InvalidSubcontinuum(format!(
                        "unknown edge `{edge}`"
                    )));
                }
                if *lo < ZERO || *hi > ONE || lo > hi {
                    return Err(Error::InvalidSubcontinuum(format!(
                        "interval [{lo}, {hi}] is not within [0, 1]"
                    )));
                }
                Ok(())
            }
            SubcontinuumRepr::Spanning {
                vertices,
                full_edges,
                stubs,
            } => {
                if vertices.is_empty() {
                    return Err(Error::InvalidSubcontinuum(
                        "spanning form needs at least one vertex".into(),
                    ));
                }
                for v in vertices {
                    if !g.has_vertex(v) {
                        return Err(Error::InvalidSubcontinuum(format!(
                            "unknown vertex `{v}`"
                        )));
                    }
                }
                for e in full_edges {
                    let Some((u, v)) = g.edge_endpoints(e) else {
                        return Err(Error::InvalidSubcontinuum(format!("unknown edge `{e}`")));
                    };
                    if !vertices.contains(u) || !vertices.contains(v) {
                        return Err(Error::InvalidSubcontinuum(format!(
                            "full edge `{e}` has an endpoint outside the core"
                        )));
                    }
                }
                let mut seen: BTreeSet<(String, End)> = BTreeSet::new();
                for s in stubs {
                    let Some((u, v)) = g.edge_endpoints(&s.edge) else {
                        return Err(Error::InvalidSubcontinuum(format!(
                            "unknown edge `{}`",
                            s.edge
                        )));
                    };
                    if full_edges.contains(&s.edge) {
                        return Err(Error::InvalidSubcontinuum(format!(
                            "edge `{}` is both full and stubbed",
                            s.edge
                        )));
                    }
                    if s.len <= ZERO || s.len >= ONE {
                        return Err(Error::InvalidSubcontinuum(format!(
                            "stub length {} on `{}` is not strictly between 0 and 1",
                            s.len, s.edge
                        )));
                    }
                    let anchor = match s.end {
                        End::U => u,
                        End::V => v,
                    };
                    if !vertices.contains(anchor) {
                        return Err(Error::InvalidSubcontinuum(format!(
                            "stub on `{}` is anchored at `{anchor}`, which is not a core vertex",
                            s.edge
                        )));
                    }
                    if !seen.insert((s.edge.clone(), s.end)) {
                        return Err(Error::InvalidSubcontinuum(format!(
                            "two stubs on the same end of edge `{}`",
                            s.edge
                        )));
                    }
                }
                for s in stubs {
                    if s.end == End::U {
                        if let Some(other) = stubs
                            .iter()
                            .find(|o| o.edge == s.edge && o.end == End::V)
                        {
                            if s.len + other.len >= ONE {
                                return Err(Error::InvalidSubcontinuum(format!(
                                    "stubs on edge `{}` overlap: lengths {} + {} >= 1",
                                    s.edge, s.len, other.len
                                )));
                            }
                        }
                    }
                }
                // The core must be connected through full edges alone.
                let verts: Vec<&String> = vertices.iter().collect();
                let idx: BTreeMap<&String, usize> =
                    verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
                let mut uf = UnionFind::new(verts.len());
                for e in full_edges {
                    let (u, v) = g.edge_endpoints(e).unwrap();
                    uf.union(idx[&u.to_string()], idx[&v.to_string()]);
                }
                let root = uf.find(0);
                for i in 1..verts.len() {
                    if uf.find(i) != root {
                        return Err(Error::InvalidSubcontinuum(format!(
                            "core vertex `{}` is not connected to `{}` by full edges",
                            verts[i], verts[0]
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    /// The set of graph vertices contained in the subcontinuum.
    fn vertex_set(&self, g: &TopoGraph) -> BTreeSet<String> {
        match self {
            SubcontinuumRepr::WithinEdge { edge, lo, hi } => {
                let (u, v) = g.edge_endpoints(edge).unwrap();
                let mut out = BTreeSet::new();
                if *lo == ZERO {
                    out.insert(u.to_string());
                }
                if *hi == ONE {
                    out.insert(v.to_string());
                }
                out
            }
            SubcontinuumRepr::Spanning { vertices, .. } => vertices.clone(),
        }
    }

    /// Closed intervals (in edge coordinates) covered on each edge, merged
    /// and sorted.
    fn footprint(&self, g: &TopoGraph) -> BTreeMap<String, Vec<(Frac, Frac)>> {
        let mut raw: BTreeMap<String, Vec<(Frac, Frac)>> = BTreeMap::new();
        match self {
            SubcontinuumRepr::WithinEdge { edge, lo, hi } => {
                raw.entry(edge.clone()).or_default().push((*lo, *hi));
            }
            SubcontinuumRepr::Spanning {
                full_edges, stubs, ..
            } => {
                for e in full_edges {
                    raw.entry(e.clone()).or_default().push((ZERO, ONE));
                }
                for s in stubs {
                    let iv = match s.end {
                        End::U => (ZERO, s.len),
                        End::V => (ONE - s.len, ONE),
                    };
                    raw.entry(s.edge.clone()).or_default().push(iv);
                }
                let _ = g;
            }
        }
        for ivs in raw.values_mut() {
            ivs.sort();
            let mut merged: Vec<(Frac, Frac)> = Vec::new();
            for (lo, hi) in ivs.drain(..) {
                match merged.last_mut() {
                    Some((_, phi)) if lo <= *phi => {
                        if hi > *phi {
                            *phi = hi;
                        }
                    }
                    _ => merged.push((lo, hi)),
                }
            }
            *ivs = merged;
        }
        raw
    }
}

/// Exact membership test for a point in a subcontinuum.
pub fn contains_point(g: &TopoGraph, a: &SubcontinuumRepr, p: &PointRef) -> Result<bool> {
    a.validate(g)?;
    g.check_point(p)?;
    Ok(match (a, p) {
        (SubcontinuumRepr::WithinEdge { edge, lo, hi }, PointRef::Vertex(w)) => {
            let (u, v) = g.edge_endpoints(edge).unwrap();
            (*lo == ZERO && u == w) || (*hi == ONE && v == w)
        }
        (SubcontinuumRepr::WithinEdge { edge, lo, hi }, PointRef::EdgeInterior(e, t)) => {
            edge == e && lo <= t && t <= hi
        }
        (SubcontinuumRepr::Spanning { vertices, .. }, PointRef::Vertex(w)) => {
            vertices.contains(w)
        }
        (
            SubcontinuumRepr::Spanning {
                full_edges, stubs, ..
            },
            PointRef::EdgeInterior(e, t),
        ) => {
            full_edges.contains(e)
                || stubs.iter().any(|s| {
                    s.edge == *e
                        && match s.end {
                            End::U => *t <= s.len,
                            End::V => *t >= ONE - s.len,
                        }
                })
        }
    })
}

/// An open sub-interval of an edge, given in edge coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OpenSegment {
    pub edge: String,
    pub lo: Frac,
    pub hi: Frac,
}

/// One connected component of the complement of a subcontinuum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplementComponent {
    pub vertices: BTreeSet<String>,
    pub segments: Vec<OpenSegment>,
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

/// Connected components of the open set `X - A`.
///
/// Each component is a union of open edge segments and vertices not in `A`;
/// a segment joins a vertex exactly when it reaches that vertex's end of
/// the edge and the vertex itself lies outside `A`.
pub fn complement_components(
    g: &TopoGraph,
    a: &SubcontinuumRepr,
) -> Result<Vec<ComplementComponent>> {
    a.validate(g)?;
    let va = a.vertex_set(g);
    let fp = a.footprint(g);

    // Nodes: one per complement gap, one per vertex outside A.
    enum Node {
        Gap(OpenSegment),
        FreeVertex(String),
    }
    let mut nodes: Vec<Node> = Vec::new();
    let mut vnode: BTreeMap<String, usize> = BTreeMap::new();
    for v in g.vertex_ids() {
        if !va.contains(v) {
            vnode.insert(v.to_string(), nodes.len());
            nodes.push(Node::FreeVertex(v.to_string()));
        }
    }
    let mut links: Vec<(usize, usize)> = Vec::new();
    for e in g.edge_ids() {
        let (u, v) = g.edge_endpoints(e).unwrap();
        let covered = fp.get(e).cloned().unwrap_or_default();
        let mut cursor = ZERO;
        let mut gaps: Vec<(Frac, Frac)> = Vec::new();
        for (lo, hi) in covered {
            if cursor < lo {
                gaps.push((cursor, lo));
            }
            if hi > cursor {
                cursor = hi;
            }
        }
        if cursor < ONE {
            gaps.push((cursor, ONE));
        }
        for (lo, hi) in gaps {
            let id = nodes.len();
            nodes.push(Node::Gap(OpenSegment {
                edge: e.to_string(),
                lo,
                hi,
            }));
            if lo == ZERO {
                if let Some(&vn) = vnode.get(u) {
                    links.push((id, vn));
                }
            }
            if hi == ONE {
                if let Some(&vn) = vnode.get(v) {
                    links.push((id, vn));
                }
            }
        }
    }
    let mut uf = UnionFind::new(nodes.len());
    for (a, b) in links {
        uf.union(a, b);
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..nodes.len() {
        groups.entry(uf.find(i)).or_default().push(i);
    }
    let mut out = Vec::new();
    for (_, members) in groups {
        let mut comp = ComplementComponent {
            vertices: BTreeSet::new(),
            segments: Vec::new(),
        };
        for i in members {
            match &nodes[i] {
                Node::Gap(seg) => comp.segments.push(seg.clone()),
                Node::FreeVertex(v) => {
                    comp.vertices.insert(v.clone());
                }
            }
        }
        comp.segments.sort();
        out.push(comp);
    }
    Ok(out)
}

/// A germ direction at a point: one way of leaving the point along an edge.
/// At a vertex, `end` names which end of the edge is attached there (loops
/// contribute both). At an interior point, `U` is the direction of
/// decreasing edge coordinate and `V` of increasing.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Direction {
    pub edge: String,
    pub end: End,
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let side = match self.end {
            End::U => "u-end",
            End::V => "v-end",
        };
        write!(f, "{} ({side})", self.edge)
    }
}

/// How a component of `A - {p}` is attached to `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttachKind {
    /// The component occupies at least two germ directions at `p`; `p` is an
    /// ordinary or ramification point of the component together with `p`.
    Branch,
    /// The component leaves `p` along exactly one direction; `p` is an end
    /// point of the component together with `p`.
    Pendant,
}

/// One component of `A - {p}` with the directions along which it meets `p`.
#[derive(Debug, Clone)]
pub struct AttachedComponent {
    pub directions: Vec<Direction>,
    pub kind: AttachKind,
}

/// The decomposition of a subcontinuum `A` at one of its points `p`.
///
/// Every germ direction at `p` is either used by some component of
/// `A - {p}` or free, so
/// `branch_directions + pendant_count + free_directions = ord(p)`.
/// Each branch component uses at least two directions, giving
/// `branch_directions >= 2 * branch_count`.
#[derive(Debug, Clone)]
pub struct PointDecomposition {
    pub components: Vec<AttachedComponent>,
    /// Number of components attached along two or more directions.
    pub branch_count: usize,
    /// Total directions used by those components.
    pub branch_directions: usize,
    /// Number of components attached along exactly one direction.
    pub pendant_count: usize,
    /// Directions at `p` not used by `A` at all.
    pub free_directions: usize,
    pub point_order: u32,
}

/// Decompose `A` at `p`: group `A - {p}` into connected components and
/// classify each by how many germ directions it occupies at `p`.
pub fn decompose_at_point(
    g: &TopoGraph,
    p: &PointRef,
    a: &SubcontinuumRepr,
) -> Result<PointDecomposition> {
    a.validate(g)?;
    g.check_point(p)?;
    if !contains_point(g, a, p)? {
        return Err(Error::PointNotInSubcontinuum {
            point: p.to_string(),
        });
    }
    let va = a.vertex_set(g);
    let fp = a.footprint(g);
    let p_vertex = match p {
        PointRef::Vertex(v) => Some(v.clone()),
        PointRef::EdgeInterior(..) => None,
    };

    // Nodes of A - {p}: vertices of A other than p, and per-edge interval
    // pieces with p removed.
    let mut node_count = 0usize;
    let mut vnode: BTreeMap<String, usize> = BTreeMap::new();
    for v in &va {
        if Some(v) != p_vertex.as_ref() {
            vnode.insert(v.clone(), node_count);
            node_count += 1;
        }
    }
    struct Piece {
        edge: String,
        lo: Frac,
        hi: Frac,
        /// Piece still contains the parameter-0 point of its edge.
        has_lo_end: bool,
        has_hi_end: bool,
        node: usize,
    }
    let mut pieces: Vec<Piece> = Vec::new();
    for (e, ivs) in &fp {
        let (u, v) = g.edge_endpoints(e).unwrap();
        for &(lo, hi) in ivs {
            // Split or trim the interval at p.
            let mut parts: Vec<(Frac, Frac, bool, bool)> = Vec::new();
            match p {
                PointRef::EdgeInterior(pe, t) if pe == e && lo <= *t && *t <= hi => {
                    if lo < *t {
                        parts.push((lo, *t, true, false));
                    }
                    if *t < hi {
                        parts.push((*t, hi, false, true));
                    }
                }
                _ => {
                    let cut_lo = lo == ZERO && p_vertex.as_deref() == Some(u);
                    let cut_hi = hi == ONE && p_vertex.as_deref() == Some(v);
                    if lo == hi && (cut_lo || cut_hi) {
                        // The interval was exactly {p}.
                    } else {
                        parts.push((lo, hi, !cut_lo, !cut_hi));
                    }
                }
            }
            for (plo, phi, incl_lo, incl_hi) in parts {
                let node = node_count;
                node_count += 1;
                pieces.push(Piece {
                    edge: e.clone(),
                    lo: plo,
                    hi: phi,
                    has_lo_end: plo == ZERO && incl_lo,
                    has_hi_end: phi == ONE && incl_hi,
                    node,
                });
            }
        }
    }
    let mut uf = UnionFind::new(node_count);
    for piece in &pieces {
        let (u, v) = g.edge_endpoints(&piece.edge).unwrap();
        if piece.has_lo_end {
            uf.union(piece.node, vnode[u]);
        }
        if piece.has_hi_end {
            uf.union(piece.node, vnode[v]);
        }
    }

    // Germ directions at p, each resolved to the piece that realizes it.
    let n = point_order(g, p)?;
    let mut germs: Vec<(Direction, usize)> = Vec::new();
    match p {
        PointRef::Vertex(w) => {
            let wi = g.vertex_index(w).unwrap();
            for &(ei, end) in g.incident_ends(wi) {
                let e = g.edge_rec(ei).id.clone();
                let hit = pieces.iter().find(|pc| {
                    pc.edge == e
                        && match end {
                            End::U => pc.lo == ZERO && pc.hi > ZERO,
                            End::V => pc.hi == ONE && pc.lo < ONE,
                        }
                });
                if let Some(pc) = hit {
                    germs.push((Direction { edge: e, end }, pc.node));
                }
            }
        }
        PointRef::EdgeInterior(e, t) => {
            for (end, hit) in [
                (
                    End::U,
                    pieces
                        .iter()
                        .find(|pc| pc.edge == *e && pc.hi == *t && pc.lo < *t),
                ),
                (
                    End::V,
                    pieces
                        .iter()
                        .find(|pc| pc.edge == *e && pc.lo == *t && pc.hi > *t),
                ),
            ] {
                if let Some(pc) = hit {
                    germs.push((
                        Direction {
                            edge: e.clone(),
                            end,
                        },
                        pc.node,
                    ));
                }
            }
        }
    }

    let mut by_component: BTreeMap<usize, Vec<Direction>> = BTreeMap::new();
    for (dir, node) in germs {
        by_component.entry(uf.find(node)).or_default().push(dir);
    }
    // Every component of A - {p} must reach p through some germ, or A would
    // be disconnected.
    let mut roots: BTreeSet<usize> = BTreeSet::new();
    for i in 0..node_count {
        roots.insert(uf.find(i));
    }
    if roots.len() != by_component.len() {
        return Err(Error::InternalInvariant(
            "a component of the subcontinuum does not reach the decomposition point".into(),
        ));
    }

    let mut components: Vec<AttachedComponent> = Vec::new();
    for (_, mut dirs) in by_component {
        dirs.sort();
        let kind = if dirs.len() >= 2 {
            AttachKind::Branch
        } else {
            AttachKind::Pendant
        };
        components.push(AttachedComponent {
            directions: dirs,
            kind,
        });
    }
    components.sort_by(|a, b| a.directions.cmp(&b.directions));

    let branch_count = components
        .iter()
        .filter(|c| c.kind == AttachKind::Branch)
        .count();
    let branch_directions: usize = components
        .iter()
        .filter(|c| c.kind == AttachKind::Branch)
        .map(|c| c.directions.len())
        .sum();
    let pendant_count = components.len() - branch_count;
    let used = branch_directions + pendant_count;
    if used > n as usize {
        return Err(Error::InternalInvariant(format!(
            "decomposition uses {used} directions but the point has order {n}"
        )));
    }
    Ok(PointDecomposition {
        components,
        branch_count,
        branch_directions,
        pendant_count,
        free_directions: n as usize - used,
        point_order: n,
    })
}

/// Dimension of a cell that is guaranteed to exist arbitrarily close to `A`
/// inside the hyperspace of subcontinua containing `p`.
///
/// This is a certificate, not the exact local dimension: 1 at an end point,
/// 2 at an ordinary point, and `2m - l + k + r` at a ramification point,
/// where `(l, m, k, r)` is the decomposition of `A` at `p`. In the
/// ramification case the value is always at least `ord(p)`.
pub fn cell_dimension_at(g: &TopoGraph, p: &PointRef, a: &SubcontinuumRepr) -> Result<u32> {
    match point_class(g, p)? {
        PointClass::End => {
            if !contains_point(g, a, p)? {
                return Err(Error::PointNotInSubcontinuum {
                    point: p.to_string(),
                });
            }
            Ok(1)
        }
        PointClass::Ordinary => {
            if !contains_point(g, a, p)? {
                return Err(Error::PointNotInSubcontinuum {
                    point: p.to_string(),
                });
            }
            Ok(2)
        }
        PointClass::Ramification => {
            let d = decompose_at_point(g, p, a)?;
            let dim = 2 * d.branch_directions as i64 - d.branch_count as i64
                + d.pendant_count as i64
                + d.free_directions as i64;
            Ok(dim as u32)
        }
    }
}

/// The result of the branching-number search: the maximum number of
/// complement components over all subcontinua through the point, and one
/// subcontinuum attaining it.
#[derive(Debug, Clone)]
pub struct KodCore {
    pub value: u32,
    pub witness: SubcontinuumRepr,
}

/// Maximum over subcontinua `M` containing `p` of the number of components
/// of `X - M`, with a witness. Equivalently, the largest `k` such that the
/// hyperspace of subcontinua through `p` contains a `k`-cell.
pub fn kod_core_number(g: &TopoGraph, p: &PointRef, budget: &Budget) -> Result<KodCore> {
    kod_core_number_with_level(g, p, budget, 3)
}

/// Same search on a `level`-fold subdivision. Any level >= 3 yields the same
/// value; exposing the level allows cross-checking that stability.
pub fn kod_core_number_with_level(
    g: &TopoGraph,
    p: &PointRef,
    budget: &Budget,
    level: u32,
) -> Result<KodCore> {
    g.check_point(p)?;
    let ne = g.edge_count();
    if level as usize * ne > budget.max_subdivided_edges {
        return Err(Error::BudgetExceeded(format!(
            "subdivided graph would have {} edges (cap {})",
            level as usize * ne,
            budget.max_subdivided_edges
        )));
    }

    // Move an interior point to the midpoint of its edge; a
    // self-homeomorphism supported inside the edge makes this lossless.
    // `shift` remembers the original coordinate so the witness can be
    // mapped back.
    let (cp, shift) = match p {
        PointRef::Vertex(_) => (p.clone(), None),
        PointRef::EdgeInterior(e, t) => (
            PointRef::midpoint(e),
            if *t == half() {
                None
            } else {
                Some((e.clone(), *t))
            },
        ),
    };

    let sub = subdivide(g, level)?;
    let s = sub.graph();
    let ne_s = s.edge_count();
    let nv_s = s.vertex_count();
    if ne_s > 64 {
        return Err(Error::BudgetExceeded(format!(
            "subdivision has {ne_s} edges; the subcomplex search is limited to 64"
        )));
    }
    let vnames: Vec<String> = s.vertex_ids().map(|x| x.to_string()).collect();
    let enames: Vec<String> = s.edge_ids().map(|x| x.to_string()).collect();
    let vidx: BTreeMap<&str, usize> = vnames
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    let ends: Vec<(usize, usize)> = enames
        .iter()
        .map(|e| {
            let (u, v) = s.edge_endpoints(e).unwrap();
            (vidx[u], vidx[v])
        })
        .collect();
    let mut inc: Vec<Vec<usize>> = vec![Vec::new(); nv_s];
    for (ei, &(u, v)) in ends.iter().enumerate() {
        inc[u].push(ei);
        if v != u {
            inc[v].push(ei);
        }
    }

    enum Witness {
        Pattern(SubcontinuumRepr),
        Complex { edges: u64, singleton: Option<usize> },
    }
    let mut best_value: i64 = -1;
    let mut best: Option<Witness> = None;

    // Connected subsets within the edge of an interior point: the point
    // alone and the two half-intervals reaching an endpoint.
    if let PointRef::EdgeInterior(e, _) = &cp {
        let patterns = [
            (half(), half()),
            (ZERO, half()),
            (half(), ONE),
        ];
        for (lo, hi) in patterns {
            let repr = SubcontinuumRepr::WithinEdge {
                edge: e.clone(),
                lo,
                hi,
            };
            let count = complement_components(g, &repr)?.len() as i64;
            if count > best_value {
                best_value = count;
                best = Some(Witness::Pattern(repr));
            }
        }
    }

    let count_for = |included: u64, singleton: Option<usize>| -> usize {
        let mut vin = vec![false; nv_s];
        if let Some(w) = singleton {
            vin[w] = true;
        }
        for (ei, &(u, v)) in ends.iter().enumerate() {
            if included >> ei & 1 == 1 {
                vin[u] = true;
                vin[v] = true;
            }
        }
        let mut uf = UnionFind::new(ne_s + nv_s);
        for (ei, &(u, v)) in ends.iter().enumerate() {
            if included >> ei & 1 == 0 {
                if !vin[u] {
                    uf.union(ei, ne_s + u);
                }
                if !vin[v] {
                    uf.union(ei, ne_s + v);
                }
            }
        }
        let mut roots = BTreeSet::new();
        for ei in 0..ne_s {
            if included >> ei & 1 == 0 {
                roots.insert(uf.find(ei));
            }
        }
        for (w, used) in vin.iter().enumerate() {
            if !used {
                roots.insert(uf.find(ne_s + w));
            }
        }
        roots.len()
    };

    // Enumerate connected edge subsets of the subdivision that contain the
    // image of p, via include/forbid branching along a growing frontier.
    // Deterministic order makes the returned witness reproducible.
    fn enumerate(
        ends: &[(usize, usize)],
        inc: &[Vec<usize>],
        included: u64,
        forbidden: u64,
        frontier: &[usize],
        pos: usize,
        emit: &mut dyn FnMut(u64),
    ) {
        let mut i = pos;
        while i < frontier.len() && (included | forbidden) >> frontier[i] & 1 == 1 {
            i += 1;
        }
        if i == frontier.len() {
            emit(included);
            return;
        }
        let e = frontier[i];
        enumerate(
            ends,
            inc,
            included,
            forbidden | 1 << e,
            frontier,
            i + 1,
            emit,
        );
        let mut grown = frontier.to_vec();
        let (u, v) = ends[e];
        for w in [u, v] {
            for &f in &inc[w] {
                if (included | forbidden) >> f & 1 == 0 && f != e {
                    grown.push(f);
                }
            }
        }
        enumerate(ends, inc, included | 1 << e, forbidden, &grown, i + 1, emit);
    }

    let image = sub.map_point(&cp)?;
    let mut singleton_of: Option<usize> = None;
    let seed_frontier: Vec<usize>;
    let seed_included: u64;
    match &image {
        PointRef::Vertex(w) => {
            let wi = vidx[w.as_str()];
            singleton_of = Some(wi);
            // The point alone.
            let count = count_for(0, Some(wi)) as i64;
            if count > best_value {
                best_value = count;
                best = Some(Witness::Complex {
                    edges: 0,
                    singleton: Some(wi),
                });
            }
            seed_frontier = inc[wi].clone();
            seed_included = 0;
        }
        PointRef::EdgeInterior(piece, _) => {
            let pi = enames.iter().position(|n| n == piece).unwrap();
            let (u, v) = ends[pi];
            let mut fr: Vec<usize> = Vec::new();
            for w in [u, v] {
                for &f in &inc[w] {
                    if f != pi {
                        fr.push(f);
                    }
                }
            }
            seed_frontier = fr;
            seed_included = 1 << pi;
        }
    }
    {
        let mut emit = |mask: u64| {
            if mask == 0 {
                return; // the bare singleton was already scored
            }
            let count = count_for(mask, None) as i64;
            if count > best_value {
                best_value = count;
                best = Some(Witness::Complex {
                    edges: mask,
                    singleton: None,
                });
            }
        };
        enumerate(
            &ends,
            &inc,
            seed_included,
            0,
            &seed_frontier,
            0,
            &mut emit,
        );
    }
    let _ = singleton_of;

    let witness = match best.expect("at least one candidate was scored") {
        Witness::Pattern(r) => r,
        Witness::Complex { edges, singleton } => {
            complex_to_repr(g, &sub, &enames, &vnames, edges, singleton)?
        }
    };
    let witness = match shift {
        Some((e, t)) => shift_witness(witness, &e, t),
        None => witness,
    };
    witness.validate(g).map_err(|err| {
        Error::InternalInvariant(format!("branching witness failed validation: {err}"))
    })?;
    Ok(KodCore {
        value: best_value as u32,
        witness,
    })
}

/// Translate a connected subcomplex of the subdivision back into a
/// subcontinuum of the original graph.
fn complex_to_repr(
    g: &TopoGraph,
    sub: &Subdivision,
    enames: &[String],
    vnames: &[String],
    edges: u64,
    singleton: Option<usize>,
) -> Result<SubcontinuumRepr> {
    if edges == 0 {
        let w = &vnames[singleton.ok_or_else(|| {
            Error::InternalInvariant("empty subcomplex without a singleton vertex".into())
        })?];
        if g.has_vertex(w) {
            return Ok(SubcontinuumRepr::Spanning {
                vertices: [w.clone()].into_iter().collect(),
                full_edges: BTreeSet::new(),
                stubs: Vec::new(),
            });
        }
        let (e, t) = sub.vertex_position(w).ok_or_else(|| {
            Error::InternalInvariant(format!("vertex `{w}` not found in the subdivision"))
        })?;
        return Ok(SubcontinuumRepr::WithinEdge {
            edge: e.to_string(),
            lo: t,
            hi: t,
        });
    }

    // Runs of consecutive pieces per original edge.
    let mut runs: BTreeMap<String, Vec<(Frac, Frac)>> = BTreeMap::new();
    let mut core: BTreeSet<String> = BTreeSet::new();
    for (ei, name) in enames.iter().enumerate() {
        if edges >> ei & 1 == 0 {
            continue;
        }
        let (orig, lo, hi) = sub.piece_span(name).ok_or_else(|| {
            Error::InternalInvariant(format!("edge `{name}` not found in the subdivision"))
        })?;
        let entry = runs.entry(orig.to_string()).or_default();
        match entry.last_mut() {
            Some((_, phi)) if *phi == lo => *phi = hi,
            _ => entry.push((lo, hi)),
        }
        let (u, v) = sub.graph().edge_endpoints(name).unwrap();
        for w in [u, v] {
            if g.has_vertex(w) {
                core.insert(w.to_string());
            }
        }
    }

    if core.is_empty() {
        // All pieces sit strictly inside one original edge.
        let (edge, ivs) = runs.into_iter().next().unwrap();
        let (lo, hi) = (ivs[0].0, ivs.last().unwrap().1);
        return Ok(SubcontinuumRepr::WithinEdge { edge, lo, hi });
    }

    let mut full_edges = BTreeSet::new();
    let mut stubs = Vec::new();
    for (edge, ivs) in runs {
        for (lo, hi) in ivs {
            if lo == ZERO && hi == ONE {
                full_edges.insert(edge.clone());
            } else if lo == ZERO {
                stubs.push(Stub {
                    edge: edge.clone(),
                    end: End::U,
                    len: hi,
                });
            } else if hi == ONE {
                stubs.push(Stub {
                    edge: edge.clone(),
                    end: End::V,
                    len: ONE - lo,
                });
            } else {
                return Err(Error::InternalInvariant(format!(
                    "disconnected middle run on edge `{edge}` in a branching witness"
                )));
            }
        }
    }
    stubs.sort();
    Ok(SubcontinuumRepr::Spanning {
        vertices: core,
        full_edges,
        stubs,
    })
}

/// Push a witness found for the edge midpoint through the edge-supported
/// self-homeomorphism that carries the midpoint to coordinate `t`.
fn shift_witness(w: SubcontinuumRepr, edge: &str, t: Frac) -> SubcontinuumRepr {
    let phi = |x: Frac| -> Frac {
        if x <= half() {
            Frac::from_integer(2) * t * x
        } else {
            t + (x - half()) * Frac::from_integer(2) * (ONE - t)
        }
    };
    match w {
        SubcontinuumRepr::WithinEdge { edge: e, lo, hi } if e == edge => {
            SubcontinuumRepr::WithinEdge {
                edge: e,
                lo: phi(lo),
                hi: phi(hi),
            }
        }
        SubcontinuumRepr::Spanning {
            vertices,
            full_edges,
            stubs,
        } => SubcontinuumRepr::Spanning {
            vertices,
            full_edges,
            stubs: stubs
                .into_iter()
                .map(|s| {
                    if s.edge == edge {
                        let len = match s.end {
                            End::U => phi(s.len),
                            End::V => ONE - phi(ONE - s.len),
                        };
                        Stub { len, ..s }
                    } else {
                        s
                    }
                })
                .collect(),
        },
        other => other,
    }
}
