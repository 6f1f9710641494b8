//! Lower and upper bounds for the number of distinct hyperspace types of a
//! graph.
//!
//! Each point `x` of a graph `X` determines the hyperspace `C(x, X)` of
//! subcontinua containing it, and points are grouped by the homeomorphism
//! type of that hyperspace. No known finite invariant list decides the
//! grouping in general, so this module brackets its size from both sides:
//!
//! * **Lower bound** — necessary conditions. Points whose invariant
//!   signatures differ ([`PointSignature`]: class, order, neighbor order,
//!   edge order sum, loop membership, k-od core number) have distinguishable
//!   hyperspaces, so the number of distinct signatures among orbit
//!   representatives bounds the count from below.
//! * **Upper bound** — sufficient conditions. Points in one orbit of the
//!   self-homeomorphism group share a hyperspace type, and a gluing rule
//!   merges further pairs across symmetric decompositions of the graph. The
//!   class count after merging bounds from above.
//!
//! [`kx_size`] reports both bounds, the witnesses behind every merge, and
//! exactness when the bounds meet.

use std::collections::{BTreeMap, BTreeSet};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::{
    frac, neighbor_vertex, normalize, point_class, point_order, sigma, sigma_min_order, Frac,
    NormalizedGraph, PointClass, PointRef, Shape, TopoGraph,
};
use crate::iso::{vertex_bijections, ColoredGraph};
use crate::subcontinuum::kod_core_number;
use crate::symmetry::{point_orbits, OrbitPartition, Repr};

/// Which separations the lower bound may rely on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RuleSet {
    /// Only invariants with a full supporting proof; conservative bounds.
    Paper,
    /// Additionally uses two conjectured invariants of ordinary points (loop
    /// membership of the edge and its smaller endpoint order, labeled as
    /// such in reports) and the swap extension of the gluing rule.
    Extended,
}

/// Configuration for signature computation and merging.
#[derive(Debug, Clone)]
pub struct RulesConfig {
    pub rules: RuleSet,
    /// Enable the swap extension of the gluing rule (see [`gluing_merges`]).
    pub gluing_extension: bool,
    /// Include the k-od core number in signatures (expensive; skipped with a
    /// budget-dependent `None` when the graph is too large).
    pub kappa: bool,
    pub budget: Budget,
}

impl RulesConfig {
    /// Default mode: conjectured invariants and the swap extension are on.
    pub fn extended() -> Self {
        RulesConfig {
            rules: RuleSet::Extended,
            gluing_extension: true,
            kappa: false,
            budget: Budget::default(),
        }
    }

    /// Audit mode: only fully proved invariants and merge rules.
    pub fn paper() -> Self {
        RulesConfig {
            rules: RuleSet::Paper,
            gluing_extension: false,
            kappa: false,
            budget: Budget::default(),
        }
    }
}

impl Default for RulesConfig {
    fn default() -> Self {
        RulesConfig::extended()
    }
}

/// Invariant vector of a point. Distinct vectors certify distinguishable
/// hyperspaces; the `loop_flag` component is conjectural and participates in
/// comparisons only under [`RuleSet::Extended`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSignature {
    pub class: PointClass,
    pub order: u32,
    /// Order of the nearest branching vertex; end points only, absent on an
    /// arc (which has no branching vertex).
    pub neighbor_order: Option<u32>,
    /// Sum of the endpoint orders of the maximal free arc through the point;
    /// ordinary points only, absent on a circle.
    pub sigma_value: Option<u32>,
    /// Whether the maximal free arc through the point closes into a loop;
    /// ordinary points only, absent on a circle. Conjectured invariant.
    pub loop_flag: Option<bool>,
    /// Smaller endpoint order of the maximal free arc through the point;
    /// ordinary points on non-loop arcs only. With `sigma_value` this gives
    /// the unordered endpoint-order pair. Conjectured invariant (the sum
    /// alone cannot tell an internal arc between orders 4 and 6 from a
    /// pendant arc under order 9, yet their hyperspaces differ in their
    /// local-dimension profiles).
    pub sigma_split: Option<u32>,
    /// k-od core number; computed only on request and within budget.
    pub kappa: Option<u32>,
}

/// Comparison key for signatures. The final two components hold the
/// conjectured fields (loop flag, smaller endpoint order) and are `None`
/// under the conservative rule set.
pub type SignatureKey = (
    PointClass,
    u32,
    Option<u32>,
    Option<u32>,
    Option<u32>,
    Option<bool>,
    Option<u32>,
);

impl PointSignature {
    /// Key over fully proved invariants only.
    pub fn strict_key(&self) -> SignatureKey {
        (
            self.class,
            self.order,
            self.neighbor_order,
            self.sigma_value,
            self.kappa,
            None,
            None,
        )
    }

    /// Key including the conjectured fields.
    pub fn extended_key(&self) -> SignatureKey {
        (
            self.class,
            self.order,
            self.neighbor_order,
            self.sigma_value,
            self.kappa,
            self.loop_flag,
            self.sigma_split,
        )
    }

    /// Key for the configured rule set.
    pub fn key(&self, rules: RuleSet) -> SignatureKey {
        match rules {
            RuleSet::Paper => self.strict_key(),
            RuleSet::Extended => self.extended_key(),
        }
    }
}

/// The invariant vector of a point.
pub fn signature(g: &TopoGraph, p: &PointRef, config: &RulesConfig) -> Result<PointSignature> {
    let class = point_class(g, p)?;
    let order = point_order(g, p)?;
    let shape = g.shape();
    let neighbor_order = if class == PointClass::End && shape != Shape::Arc {
        Some(neighbor_vertex(g, p)?.1)
    } else {
        None
    };
    let (sigma_value, loop_flag, sigma_split) =
        if class == PointClass::Ordinary && shape != Shape::Circle {
            let (s, looped) = sigma(g, p)?;
            (Some(s), Some(looped), sigma_min_order(g, p)?)
        } else {
            (None, None, None)
        };
    let kappa = if config.kappa {
        match kod_core_number(g, p, &config.budget) {
            Ok(k) => Some(k.value),
            Err(Error::BudgetExceeded(_)) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    Ok(PointSignature {
        class,
        order,
        neighbor_order,
        sigma_value,
        loop_flag,
        sigma_split,
        kappa,
    })
}

/// Orbit representatives grouped by signature equality under the configured
/// rule set. The group count is the certified lower bound.
pub fn signature_partition(
    g: &TopoGraph,
    config: &RulesConfig,
) -> Result<Vec<(PointSignature, Vec<Repr>)>> {
    let ng = normalize(g)?;
    let orbits = point_orbits(&ng, &config.budget)?;
    let annotated = annotate_representatives(&ng, &orbits, config)?;
    Ok(group_by_key(&annotated, config.rules))
}

fn annotate_representatives(
    ng: &NormalizedGraph,
    orbits: &OrbitPartition,
    config: &RulesConfig,
) -> Result<Vec<(Repr, PointSignature)>> {
    orbits
        .orbits
        .iter()
        .map(|o| {
            let rep = o.members[0].clone();
            let sig = signature(ng.graph(), &rep.to_point(), config)?;
            Ok((rep, sig))
        })
        .collect()
}

fn group_by_key(
    annotated: &[(Repr, PointSignature)],
    rules: RuleSet,
) -> Vec<(PointSignature, Vec<Repr>)> {
    let mut groups: BTreeMap<SignatureKey, Vec<usize>> = BTreeMap::new();
    for (i, (_, sig)) in annotated.iter().enumerate() {
        groups.entry(sig.key(rules)).or_default().push(i);
    }
    groups
        .into_values()
        .map(|idxs| {
            let sig = annotated[idxs[0]].1.clone();
            let reps = idxs.into_iter().map(|i| annotated[i].0.clone()).collect();
            (sig, reps)
        })
        .collect()
}

/// How a pointed-subgraph pair was certified to have matching attachment
/// hyperspaces (with basepoint and whole-space correspondence).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatalogCertificate {
    /// A homeomorphism of the subgraphs carrying basepoint to basepoint.
    RootedIsomorphism,
    /// The built-in pair: a circle rooted anywhere versus an arc rooted at an
    /// interior point — both attachment hyperspaces are 2-cells with
    /// corresponding distinguished elements.
    CircleArcPair,
}

/// Certify that the pointed graphs `(left, p)` and `(right, q)` have
/// homeomorphic hyperspaces with `{p} -> {q}` and whole-space correspondence,
/// or return `None` when no rule applies.
pub fn catalog_lookup(
    left: &TopoGraph,
    p: &PointRef,
    right: &TopoGraph,
    q: &PointRef,
) -> Result<Option<CatalogCertificate>> {
    left.check_point(p)?;
    right.check_point(q)?;
    if marked_equivalence(left, &[(p.clone(), 1)], right, &[(q.clone(), 1)])?.is_some() {
        return Ok(Some(CatalogCertificate::RootedIsomorphism));
    }
    let circle_vs_arc_interior = |c: &TopoGraph, a: &TopoGraph, ap: &PointRef| -> Result<bool> {
        Ok(c.shape() == Shape::Circle
            && a.shape() == Shape::Arc
            && point_class(a, ap)? == PointClass::Ordinary)
    };
    if circle_vs_arc_interior(left, right, q)? || circle_vs_arc_interior(right, left, p)? {
        return Ok(Some(CatalogCertificate::CircleArcPair));
    }
    Ok(None)
}

/// Rule that joined two hyperspace classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MergeRule {
    /// The points lie in one orbit of the self-homeomorphism group.
    SameOrbit,
    /// Symmetric decomposition: certified side pair plus a middle
    /// self-homeomorphism carrying one attachment point to the other.
    GluingTheorem,
    /// Swap extension: a middle self-homeomorphism exchanging the attachment
    /// points carries one merged point to the other. Not a proved rule; only
    /// active when [`RulesConfig::gluing_extension`] is set.
    GluingExtension,
}

/// Decomposition data behind a gluing merge.
#[derive(Debug, Clone)]
pub struct GluingDetail {
    /// The two attachment vertices of the decomposition.
    pub cut_pair: (String, String),
    /// Edges of the side attached at the first cut vertex.
    pub left_edges: Vec<String>,
    /// Edges of the middle part containing both cut vertices.
    pub middle_edges: Vec<String>,
    /// Edges of the side attached at the second cut vertex.
    pub right_edges: Vec<String>,
    /// How the two sides were certified to match.
    pub certificate: CatalogCertificate,
    /// Vertex map of a middle self-homeomorphism realizing the merge, in the
    /// marked subdivision used for the search (`zz_mk<color>` vertices are
    /// the marked points).
    pub middle_map: Vec<(String, String)>,
}

/// One merge event: the points joined and the rule that joined them.
#[derive(Debug, Clone)]
pub struct MergeWitness {
    pub rule: MergeRule,
    /// The joined points. Orbit merges list the whole orbit; gluing merges
    /// list the two orbit representatives.
    pub pair: Vec<Repr>,
    /// Present on gluing merges.
    pub detail: Option<GluingDetail>,
}

/// The two-sided size report for the family of hyperspace types of a graph.
#[derive(Debug, Clone)]
pub struct SizeReport {
    /// Number of distinct signatures among orbit representatives.
    pub lower: usize,
    /// Number of orbit classes after sufficient merges.
    pub upper: usize,
    /// Whether the bounds meet.
    pub exact: bool,
    /// Representatives grouped by signature (the lower-bound classes).
    pub classes_lower: Vec<Vec<Repr>>,
    /// Representatives grouped by merged orbits (the upper-bound classes).
    pub classes_upper: Vec<Vec<Repr>>,
    /// Every merge applied to reach the upper bound.
    pub merges: Vec<MergeWitness>,
    /// Groups of representatives whose separation relies on the conjectured
    /// loop membership field; empty under the conservative rule set.
    pub conjectured_separations: Vec<Vec<Repr>>,
    /// Signature of every orbit representative.
    pub signatures: Vec<(Repr, PointSignature)>,
    pub config: RulesConfig,
}

/// Bracket the number of hyperspace classes of `g` between a signature-based
/// lower bound and a merge-based upper bound.
pub fn kx_size(g: &TopoGraph, config: &RulesConfig) -> Result<SizeReport> {
    let ng = normalize(g)?;
    let orbits = point_orbits(&ng, &config.budget)?;
    let annotated = annotate_representatives(&ng, &orbits, config)?;

    let classes_lower: Vec<Vec<Repr>> = group_by_key(&annotated, config.rules)
        .into_iter()
        .map(|(_, reps)| reps)
        .collect();
    let lower = classes_lower.len();

    let mut conjectured_separations = Vec::new();
    if config.rules == RuleSet::Extended {
        let mut strict_groups: BTreeMap<SignatureKey, Vec<usize>> = BTreeMap::new();
        for (i, (_, sig)) in annotated.iter().enumerate() {
            strict_groups.entry(sig.strict_key()).or_default().push(i);
        }
        for idxs in strict_groups.values() {
            let distinct: BTreeSet<SignatureKey> = idxs
                .iter()
                .map(|&i| annotated[i].1.extended_key())
                .collect();
            if distinct.len() > 1 {
                conjectured_separations
                    .push(idxs.iter().map(|&i| annotated[i].0.clone()).collect());
            }
        }
    }

    let mut merges: Vec<MergeWitness> = orbits
        .orbits
        .iter()
        .filter(|o| o.members.len() > 1)
        .map(|o| MergeWitness {
            rule: MergeRule::SameOrbit,
            pair: o.members.clone(),
            detail: None,
        })
        .collect();
    let gluing = gluing_merges_on(&ng, &orbits, config)?;

    // Replay the gluing merges over the orbit partition.
    let rep_orbit: BTreeMap<Repr, usize> = orbits
        .orbits
        .iter()
        .enumerate()
        .map(|(i, o)| (o.members[0].clone(), i))
        .collect();
    let rep_sig: BTreeMap<Repr, &PointSignature> =
        annotated.iter().map(|(r, s)| (r.clone(), s)).collect();
    let mut uf = UnionFind::new(orbits.orbits.len());
    for w in &gluing {
        let keys: BTreeSet<SignatureKey> = w
            .pair
            .iter()
            .map(|r| {
                rep_sig
                    .get(r)
                    .map(|s| s.strict_key())
                    .ok_or_else(|| merge_invariant_error(w, "an unknown representative"))
            })
            .collect::<Result<_>>()?;
        if keys.len() != 1 {
            return Err(merge_invariant_error(
                w,
                "representatives with different required signatures",
            ));
        }
        let idxs: Vec<usize> = w.pair.iter().map(|r| rep_orbit[r]).collect();
        for win in idxs.windows(2) {
            uf.union(win[0], win[1]);
        }
    }
    merges.extend(gluing);

    let mut class_of_root: BTreeMap<usize, Vec<Repr>> = BTreeMap::new();
    for (i, (rep, _)) in annotated.iter().enumerate() {
        class_of_root
            .entry(uf.find(i))
            .or_default()
            .push(rep.clone());
    }
    let mut classes_upper: Vec<(usize, Vec<Repr>)> = class_of_root.into_iter().collect();
    classes_upper.sort_by_key(|(root, _)| *root);
    let classes_upper: Vec<Vec<Repr>> = classes_upper.into_iter().map(|(_, c)| c).collect();
    let upper = classes_upper.len();

    if lower > upper {
        return Err(Error::InternalInvariant(format!(
            "signature lower bound {lower} exceeds merged upper bound {upper}"
        )));
    }

    Ok(SizeReport {
        lower,
        upper,
        exact: lower == upper,
        classes_lower,
        classes_upper,
        merges,
        conjectured_separations,
        signatures: annotated,
        config: config.clone(),
    })
}

fn merge_invariant_error(w: &MergeWitness, what: &str) -> Error {
    let pair: Vec<String> = w.pair.iter().map(Repr::label).collect();
    Error::InternalInvariant(format!(
        "merge {:?} of [{}] joins {what}",
        w.rule,
        pair.join(", ")
    ))
}

/// Merges licensed by symmetric decompositions of the graph.
///
/// For each vertex pair `p`, `q`, the graph splits into a left side (the
/// closed-up components of the complement of `p` avoiding `q`), a right side
/// (likewise at `q`, avoiding `p`) and the connected middle containing both.
/// When the side pair is certified by [`catalog_lookup`] and the middle has a
/// self-homeomorphism carrying `p` to `q`, the hyperspaces of `p` and `q`
/// match. With the swap extension enabled, a middle self-homeomorphism
/// exchanging `p` and `q` additionally merges the middle points it pairs up.
pub fn gluing_merges(g: &TopoGraph, config: &RulesConfig) -> Result<Vec<MergeWitness>> {
    let ng = normalize(g)?;
    let orbits = point_orbits(&ng, &config.budget)?;
    gluing_merges_on(&ng, &orbits, config)
}

struct Decomposition {
    p: String,
    q: String,
    middle: TopoGraph,
    detail: GluingDetail,
}

fn gluing_merges_on(
    ng: &NormalizedGraph,
    orbits: &OrbitPartition,
    config: &RulesConfig,
) -> Result<Vec<MergeWitness>> {
    if ng.shape() != Shape::General {
        return Ok(Vec::new());
    }
    let g = ng.graph();
    let rep_orbit: BTreeMap<Repr, usize> = orbits
        .orbits
        .iter()
        .enumerate()
        .flat_map(|(i, o)| o.members.iter().map(move |m| (m.clone(), i)))
        .collect();
    let reps: Vec<Repr> = orbits.orbits.iter().map(|o| o.members[0].clone()).collect();

    let mut uf = UnionFind::new(orbits.orbits.len());
    let mut witnesses = Vec::new();
    let mut decompositions = Vec::new();

    let vertices: Vec<String> = g.vertex_ids().map(str::to_string).collect();
    for (i, p) in vertices.iter().enumerate() {
        for q in &vertices[i + 1..] {
            if g.vertex_order(p) != g.vertex_order(q) {
                continue;
            }
            let left_parts: Vec<Piece> = pieces_at(g, p)
                .into_iter()
                .filter(|piece| !piece.vertices.contains(q))
                .collect();
            let right_parts: Vec<Piece> = pieces_at(g, q)
                .into_iter()
                .filter(|piece| !piece.vertices.contains(p))
                .collect();
            if left_parts.is_empty() || right_parts.is_empty() {
                // Nothing hangs off one of the points: either the pair is
                // covered by plain orbit equivalence or no decomposition
                // certificate is possible.
                continue;
            }
            let left = piece_subgraph(g, p, &left_parts)?;
            let right = piece_subgraph(g, q, &right_parts)?;
            let middle = middle_subgraph(g, p, q, &left_parts, &right_parts)?;
            let Some(cert) =
                catalog_lookup(&left, &PointRef::vertex(p), &right, &PointRef::vertex(q))?
            else {
                continue;
            };
            let Some(middle_map) = marked_equivalence(
                &middle,
                &[(PointRef::vertex(p), 1)],
                &middle,
                &[(PointRef::vertex(q), 1)],
            )?
            else {
                continue;
            };
            let detail = GluingDetail {
                cut_pair: (p.clone(), q.clone()),
                left_edges: left.edge_ids().map(str::to_string).collect(),
                middle_edges: middle.edge_ids().map(str::to_string).collect(),
                right_edges: right.edge_ids().map(str::to_string).collect(),
                certificate: cert,
                middle_map,
            };
            let (op, oq) = (
                rep_orbit[&Repr::Vertex(p.clone())],
                rep_orbit[&Repr::Vertex(q.clone())],
            );
            if uf.union(op, oq) {
                witnesses.push(MergeWitness {
                    rule: MergeRule::GluingTheorem,
                    pair: vec![reps[op].clone(), reps[oq].clone()],
                    detail: Some(detail.clone()),
                });
            }
            decompositions.push(Decomposition {
                p: p.clone(),
                q: q.clone(),
                middle,
                detail,
            });
        }
    }

    if config.gluing_extension {
        for d in &decompositions {
            let candidates: Vec<(usize, Repr, PointRef)> = reps
                .iter()
                .enumerate()
                .filter_map(|(oi, rep)| match rep {
                    Repr::Vertex(v) => {
                        (d.middle.has_vertex(v) && v != &d.p && v != &d.q)
                            .then(|| (oi, rep.clone(), PointRef::vertex(v)))
                    }
                    Repr::EdgeMid(e) => d
                        .middle
                        .has_edge(e)
                        .then(|| (oi, rep.clone(), PointRef::midpoint(e))),
                })
                .collect();
            for (ai, (oa, ra, pa)) in candidates.iter().enumerate() {
                for (ob, rb, pb) in &candidates[ai + 1..] {
                    if uf.find(*oa) == uf.find(*ob) {
                        continue;
                    }
                    let swap = marked_equivalence(
                        &d.middle,
                        &[
                            (PointRef::vertex(&d.p), 1),
                            (PointRef::vertex(&d.q), 2),
                            (pa.clone(), 3),
                        ],
                        &d.middle,
                        &[
                            (PointRef::vertex(&d.q), 1),
                            (PointRef::vertex(&d.p), 2),
                            (pb.clone(), 3),
                        ],
                    )?;
                    if let Some(map) = swap {
                        uf.union(*oa, *ob);
                        witnesses.push(MergeWitness {
                            rule: MergeRule::GluingExtension,
                            pair: vec![ra.clone(), rb.clone()],
                            detail: Some(GluingDetail {
                                middle_map: map,
                                ..d.detail.clone()
                            }),
                        });
                    }
                }
            }
        }
    }
    Ok(witnesses)
}

/// One closed-up component of the complement of a cut vertex: its vertices
/// (the cut vertex excluded) and its edges.
#[derive(Debug, Clone)]
struct Piece {
    vertices: BTreeSet<String>,
    edges: BTreeSet<String>,
}

fn pieces_at(g: &TopoGraph, cut: &str) -> Vec<Piece> {
    let names: Vec<String> = g.vertex_ids().map(str::to_string).collect();
    let index: BTreeMap<&str, usize> = names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    let mut uf = UnionFind::new(names.len());
    for e in g.edge_ids() {
        let (u, v) = g.edge_endpoints(e).unwrap();
        if u != cut && v != cut {
            uf.union(index[u], index[v]);
        }
    }
    let mut order: Vec<usize> = Vec::new();
    let mut group: BTreeMap<usize, Piece> = BTreeMap::new();
    for (i, name) in names.iter().enumerate() {
        if name == cut {
            continue;
        }
        let root = uf.find(i);
        group.entry(root).or_insert_with(|| {
            order.push(root);
            Piece {
                vertices: BTreeSet::new(),
                edges: BTreeSet::new(),
            }
        });
        group.get_mut(&root).unwrap().vertices.insert(name.clone());
    }
    let mut loops = Vec::new();
    for e in g.edge_ids() {
        let (u, v) = g.edge_endpoints(e).unwrap();
        if u == cut && v == cut {
            loops.push(Piece {
                vertices: BTreeSet::new(),
                edges: BTreeSet::from([e.to_string()]),
            });
        } else {
            let anchor = if u == cut { v } else { u };
            let root = uf.find(index[anchor]);
            group.get_mut(&root).unwrap().edges.insert(e.to_string());
        }
    }
    let mut pieces: Vec<Piece> = order.into_iter().map(|r| group.remove(&r).unwrap()).collect();
    pieces.extend(loops);
    pieces
}

/// The union of `parts` closed up with the cut vertex, as a graph.
fn piece_subgraph(g: &TopoGraph, cut: &str, parts: &[Piece]) -> Result<TopoGraph> {
    let mut vs: BTreeSet<&str> = BTreeSet::from([cut]);
    let mut es: BTreeSet<&str> = BTreeSet::new();
    for piece in parts {
        vs.extend(piece.vertices.iter().map(String::as_str));
        es.extend(piece.edges.iter().map(String::as_str));
    }
    subgraph(g, &vs, &es)
}

/// The part of the graph left when both side unions are removed; contains
/// both cut vertices.
fn middle_subgraph(
    g: &TopoGraph,
    p: &str,
    q: &str,
    left: &[Piece],
    right: &[Piece],
) -> Result<TopoGraph> {
    let mut drop_v: BTreeSet<&str> = BTreeSet::new();
    let mut drop_e: BTreeSet<&str> = BTreeSet::new();
    for piece in left.iter().chain(right) {
        drop_v.extend(piece.vertices.iter().map(String::as_str));
        drop_e.extend(piece.edges.iter().map(String::as_str));
    }
    drop_v.remove(p);
    drop_v.remove(q);
    let vs: BTreeSet<&str> = g.vertex_ids().filter(|v| !drop_v.contains(v)).collect();
    let es: BTreeSet<&str> = g.edge_ids().filter(|e| !drop_e.contains(e)).collect();
    subgraph(g, &vs, &es)
}

fn subgraph(g: &TopoGraph, vs: &BTreeSet<&str>, es: &BTreeSet<&str>) -> Result<TopoGraph> {
    let vertices: Vec<&str> = g.vertex_ids().filter(|v| vs.contains(v)).collect();
    let edges: Vec<(&str, &str, &str)> = g
        .edge_ids()
        .filter(|e| es.contains(e))
        .map(|e| {
            let (u, v) = g.edge_endpoints(e).unwrap();
            (e, u, v)
        })
        .collect();
    TopoGraph::new(&vertices, &edges)
}

/// Whether a homeomorphism `ga -> gb` exists carrying every marked point of
/// `ma` to the equally colored marked point of `mb`. On success returns the
/// vertex map of one such homeomorphism over the marked subdivisions (marked
/// points appear as `zz_mk<color>` vertices).
fn marked_equivalence(
    ga: &TopoGraph,
    ma: &[(PointRef, u64)],
    gb: &TopoGraph,
    mb: &[(PointRef, u64)],
) -> Result<Option<Vec<(String, String)>>> {
    let na = normalize(ga)?;
    let nb = normalize(gb)?;
    if na.shape() != nb.shape() {
        return Ok(None);
    }
    let map_marks = |n: &NormalizedGraph, marks: &[(PointRef, u64)]| -> Result<Vec<(PointRef, u64)>> {
        marks
            .iter()
            .map(|(p, c)| Ok((n.map_point(p)?, *c)))
            .collect()
    };
    let mapped_a = map_marks(&na, ma)?;
    let mapped_b = map_marks(&nb, mb)?;
    if na.shape() == Shape::Circle {
        return circle_equivalence(&mapped_a, &mapped_b);
    }
    let (sa, ca) = split_at_marks(na.graph(), &mapped_a)?;
    let (sb, cb) = split_at_marks(nb.graph(), &mapped_b)?;
    let colored_a = ColoredGraph::from_graph(&sa, &ca);
    let colored_b = ColoredGraph::from_graph(&sb, &cb);
    Ok(first_bijection(&colored_a, &colored_b))
}

/// Marked-point equivalence of two circles: only the cyclic color order
/// matters, so compare cycle graphs built from the marks alone. The order-2
/// anchor vertex of a normalized circle is not a topological feature and is
/// deliberately dropped.
fn circle_equivalence(
    ma: &[(PointRef, u64)],
    mb: &[(PointRef, u64)],
) -> Result<Option<Vec<(String, String)>>> {
    if ma.is_empty() && mb.is_empty() {
        return Ok(Some(Vec::new()));
    }
    let (ca, cb) = (circle_cycle(ma)?, circle_cycle(mb)?);
    Ok(first_bijection(&ca, &cb))
}

fn circle_cycle(marks: &[(PointRef, u64)]) -> Result<ColoredGraph> {
    let mut pts: Vec<(Frac, u64)> = marks
        .iter()
        .map(|(p, c)| match p {
            PointRef::Vertex(_) => (frac(0, 1), *c),
            PointRef::EdgeInterior(_, t) => (*t, *c),
        })
        .collect();
    pts.sort();
    if pts.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::InternalInvariant(
            "coincident marked points on a circle".to_string(),
        ));
    }
    let k = pts.len();
    let vertices: Vec<String> = (0..k).map(|i| format!("zz_mk{}", pts[i].1)).collect();
    let mut uniq = vertices.clone();
    for i in 0..uniq.len() {
        while uniq[..i].contains(&uniq[i]) {
            uniq[i].push('x');
        }
    }
    let edges: Vec<(String, String, String)> = (0..k)
        .map(|i| (format!("s{i}"), uniq[i].clone(), uniq[(i + 1) % k].clone()))
        .collect();
    let g = TopoGraph::new(&uniq, &edges)?;
    let colors: BTreeMap<String, u64> = uniq
        .iter()
        .zip(&pts)
        .map(|(n, (_, c))| (n.clone(), *c))
        .collect();
    Ok(ColoredGraph::from_graph(&g, &colors))
}

fn first_bijection(a: &ColoredGraph, b: &ColoredGraph) -> Option<Vec<(String, String)>> {
    let maps = vertex_bijections(a, b, Some(1));
    maps.first().map(|m| {
        m.iter()
            .enumerate()
            .map(|(i, &j)| (a.names[i].clone(), b.names[j].clone()))
            .collect()
    })
}

/// Subdivide `g` so that every interior mark becomes a vertex, and return the
/// graph with its vertex color map. Vertex marks color existing vertices.
fn split_at_marks(
    g: &TopoGraph,
    marks: &[(PointRef, u64)],
) -> Result<(TopoGraph, BTreeMap<String, u64>)> {
    let mut colors: BTreeMap<String, u64> = BTreeMap::new();
    let mut by_edge: BTreeMap<String, Vec<(Frac, u64)>> = BTreeMap::new();
    for (p, c) in marks {
        match p {
            PointRef::Vertex(v) => {
                if colors.insert(v.clone(), *c).is_some() {
                    return Err(Error::InternalInvariant(format!(
                        "vertex `{v}` marked twice"
                    )));
                }
            }
            PointRef::EdgeInterior(e, t) => by_edge.entry(e.clone()).or_default().push((*t, *c)),
        }
    }
    let mut taken: BTreeSet<String> = g.vertex_ids().map(str::to_string).collect();
    taken.extend(g.edge_ids().map(str::to_string));
    let fresh = |base: &str, taken: &mut BTreeSet<String>| {
        let mut id = base.to_string();
        while taken.contains(&id) {
            id.push('x');
        }
        taken.insert(id.clone());
        id
    };
    let mut vertices: Vec<String> = g.vertex_ids().map(str::to_string).collect();
    let mut edges: Vec<(String, String, String)> = Vec::new();
    for e in g.edge_ids() {
        let (u, v) = g.edge_endpoints(e).unwrap();
        match by_edge.get_mut(e) {
            None => edges.push((e.to_string(), u.to_string(), v.to_string())),
            Some(list) => {
                list.sort();
                if list.windows(2).any(|w| w[0].0 == w[1].0) {
                    return Err(Error::InternalInvariant(format!(
                        "coincident marked points on edge `{e}`"
                    )));
                }
                let mut prev = u.to_string();
                for (i, (_, c)) in list.iter().enumerate() {
                    let mv = fresh(&format!("zz_mk{c}"), &mut taken);
                    vertices.push(mv.clone());
                    colors.insert(mv.clone(), *c);
                    edges.push((fresh(&format!("{e}_sg{i}"), &mut taken), prev, mv.clone()));
                    prev = mv;
                }
                edges.push((
                    fresh(&format!("{e}_sg{}", list.len()), &mut taken),
                    prev,
                    v.to_string(),
                ));
            }
        }
    }
    let split = TopoGraph::new(&vertices, &edges)?;
    Ok((split, colors))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, i: usize) -> usize {
        if self.parent[i] != i {
            let root = self.find(self.parent[i]);
            self.parent[i] = root;
        }
        self.parent[i]
    }

    /// Join the classes; true when they were distinct.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_example, build_pi, build_xn, build_yn};
    use crate::graph::{frac, subdivide};

    fn triod() -> TopoGraph {
        TopoGraph::new(
            &["c", "t1", "t2", "t3"],
            &[("l1", "c", "t1"), ("l2", "c", "t2"), ("l3", "c", "t3")],
        )
        .unwrap()
    }

    fn circle() -> TopoGraph {
        TopoGraph::new(&["a"], &[("c", "a", "a")]).unwrap()
    }

    fn arc() -> TopoGraph {
        TopoGraph::new(&["u", "v"], &[("e", "u", "v")]).unwrap()
    }

    #[test]
    fn signatures_of_reference_points() {
        let cfg = RulesConfig::extended();
        let t = triod();
        let tip = signature(&t, &PointRef::vertex("t1"), &cfg).unwrap();
        assert_eq!(tip.class, PointClass::End);
        assert_eq!(tip.order, 1);
        assert_eq!(tip.neighbor_order, Some(3));
        assert_eq!(tip.sigma_value, None);

        let ex = build_example().unwrap();
        let mid = signature(&ex.graph, &PointRef::midpoint("l"), &cfg).unwrap();
        assert_eq!(mid.class, PointClass::Ordinary);
        assert_eq!(mid.sigma_value, Some(6));
        assert_eq!(mid.loop_flag, Some(false));
        assert_eq!(mid.sigma_split, Some(3));

        let p1 = build_pi(1).unwrap();
        let loop_mid = signature(&p1.graph, &PointRef::midpoint("c2"), &cfg).unwrap();
        assert_eq!(loop_mid.sigma_value, Some(5));
        assert_eq!(loop_mid.loop_flag, Some(true));
        assert_eq!(loop_mid.sigma_split, None);

        let on_circle = signature(&circle(), &PointRef::midpoint("c"), &cfg).unwrap();
        assert_eq!(on_circle.sigma_value, None);
        assert_eq!(on_circle.loop_flag, None);

        let arc_end = signature(&arc(), &PointRef::vertex("u"), &cfg).unwrap();
        assert_eq!(arc_end.class, PointClass::End);
        assert_eq!(arc_end.neighbor_order, None);
    }

    #[test]
    fn partition_counts_for_small_graphs() {
        assert_eq!(
            signature_partition(&triod(), &RulesConfig::extended())
                .unwrap()
                .len(),
            3
        );
        assert_eq!(
            signature_partition(&circle(), &RulesConfig::extended())
                .unwrap()
                .len(),
            1
        );
        let x6 = build_xn(6).unwrap();
        assert_eq!(
            signature_partition(&x6.graph, &RulesConfig::paper())
                .unwrap()
                .len(),
            5
        );
        assert_eq!(
            signature_partition(&x6.graph, &RulesConfig::extended())
                .unwrap()
                .len(),
            6
        );
        // The endpoint-order sum alone cannot tell the internal arc between
        // orders 4 and 6 from a pendant arc under order 9 (both sums are
        // 10); the smaller endpoint order separates them.
        let x11 = build_xn(11).unwrap();
        assert_eq!(
            signature_partition(&x11.graph, &RulesConfig::paper())
                .unwrap()
                .len(),
            10
        );
        assert_eq!(
            signature_partition(&x11.graph, &RulesConfig::extended())
                .unwrap()
                .len(),
            11
        );
    }

    #[test]
    fn catalog_certifies_expected_pairs() {
        // Arc with an interior basepoint, as a two-edge path.
        let path = TopoGraph::new(
            &["a", "m", "b"],
            &[("e1", "a", "m"), ("e2", "m", "b")],
        )
        .unwrap();
        let cert = catalog_lookup(
            &circle(),
            &PointRef::midpoint("c"),
            &path,
            &PointRef::vertex("m"),
        )
        .unwrap();
        assert_eq!(cert, Some(CatalogCertificate::CircleArcPair));

        let t1 = triod();
        let t2 = triod();
        let cert = catalog_lookup(
            &t1,
            &PointRef::vertex("t1"),
            &t2,
            &PointRef::vertex("t3"),
        )
        .unwrap();
        assert_eq!(cert, Some(CatalogCertificate::RootedIsomorphism));

        let cert = catalog_lookup(
            &circle(),
            &PointRef::midpoint("c"),
            &arc(),
            &PointRef::vertex("u"),
        )
        .unwrap();
        assert_eq!(cert, None);
    }

    #[test]
    fn rooted_equivalence_handles_positions_and_loops() {
        // Interior basepoints of one arc at different positions.
        let a = arc();
        assert!(marked_equivalence(
            &a,
            &[(PointRef::interior("e", frac(1, 3)), 1)],
            &a,
            &[(PointRef::interior("e", frac(3, 4)), 1)],
        )
        .unwrap()
        .is_some());
        // A circle rooted at its vertex versus rooted inside its loop edge.
        let c = circle();
        assert!(marked_equivalence(
            &c,
            &[(PointRef::vertex("a"), 1)],
            &c,
            &[(PointRef::midpoint("c"), 1)],
        )
        .unwrap()
        .is_some());
        // Swapping two marks across a circle needs matching cyclic order.
        assert!(marked_equivalence(
            &c,
            &[
                (PointRef::interior("c", frac(1, 4)), 1),
                (PointRef::interior("c", frac(1, 2)), 2)
            ],
            &c,
            &[
                (PointRef::interior("c", frac(1, 2)), 2),
                (PointRef::interior("c", frac(3, 4)), 1)
            ],
        )
        .unwrap()
        .is_some());
    }

    #[test]
    fn example_merges_its_two_branch_vertices() {
        let ex = build_example().unwrap();
        let merges = gluing_merges(&ex.graph, &RulesConfig::extended()).unwrap();
        assert_eq!(merges.len(), 1);
        let w = &merges[0];
        assert_eq!(w.rule, MergeRule::GluingTheorem);
        assert_eq!(
            w.pair,
            vec![
                Repr::Vertex("a".to_string()),
                Repr::Vertex("q".to_string())
            ]
        );
        let d = w.detail.as_ref().unwrap();
        assert_eq!(d.cut_pair, ("a".to_string(), "q".to_string()));
        assert_eq!(d.left_edges, vec!["s".to_string()]);
        assert_eq!(d.middle_edges, vec!["l".to_string()]);
        assert_eq!(d.right_edges, vec!["j1".to_string(), "j2".to_string()]);
        assert_eq!(d.certificate, CatalogCertificate::CircleArcPair);
    }

    #[test]
    fn no_merges_on_asymmetric_graphs() {
        assert!(gluing_merges(&triod(), &RulesConfig::extended())
            .unwrap()
            .is_empty());
        let x6 = build_xn(6).unwrap();
        assert!(gluing_merges(&x6.graph, &RulesConfig::extended())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn sizes_of_reference_graphs() {
        let cfg = RulesConfig::extended();
        let ex = kx_size(&build_example().unwrap().graph, &cfg).unwrap();
        assert!(ex.exact);
        assert_eq!(ex.lower, 5);
        assert_eq!(ex.upper, 5);

        let c = kx_size(&circle(), &cfg).unwrap();
        assert!(c.exact);
        assert_eq!(c.lower, 1);

        let a = kx_size(&arc(), &cfg).unwrap();
        assert!(a.exact);
        assert_eq!(a.lower, 2);

        let x6 = kx_size(&build_xn(6).unwrap().graph, &cfg).unwrap();
        assert!(x6.exact);
        assert_eq!(x6.upper, 6);
        assert_eq!(x6.conjectured_separations.len(), 1);

        let x6_paper = kx_size(&build_xn(6).unwrap().graph, &RulesConfig::paper()).unwrap();
        assert!(!x6_paper.exact);
        assert_eq!(x6_paper.lower, 5);
        assert_eq!(x6_paper.upper, 6);
        assert!(x6_paper.conjectured_separations.is_empty());
    }

    #[test]
    fn second_chain_bounds() {
        let cfg = RulesConfig::extended();
        let y2 = kx_size(&build_yn(2).unwrap().graph, &cfg).unwrap();
        assert_eq!((y2.lower, y2.upper), (5, 6));
        assert!(!y2.exact);

        let y4 = kx_size(&build_yn(4).unwrap().graph, &cfg).unwrap();
        assert!(y4.exact);
        assert_eq!(y4.upper, 8);
        assert!(y4
            .merges
            .iter()
            .any(|w| w.rule == MergeRule::GluingExtension));

        let y4_paper = kx_size(&build_yn(4).unwrap().graph, &RulesConfig::paper()).unwrap();
        assert_eq!((y4_paper.lower, y4_paper.upper), (8, 9));
    }

    #[test]
    fn bounds_are_subdivision_invariant() {
        let cfg = RulesConfig::extended();
        let x6 = build_xn(6).unwrap();
        let base = kx_size(&x6.graph, &cfg).unwrap();
        let sub = subdivide(&x6.graph, 2).unwrap();
        let refined = kx_size(sub.graph(), &cfg).unwrap();
        assert_eq!(base.lower, refined.lower);
        assert_eq!(base.upper, refined.upper);
        assert_eq!(base.exact, refined.exact);
    }

    #[test]
    fn upper_bound_never_exceeds_orbit_count() {
        let cfg = RulesConfig::extended();
        for g in [triod(), circle(), arc(), build_yn(3).unwrap().graph] {
            let ng = normalize(&g).unwrap();
            let degree = point_orbits(&ng, &cfg.budget).unwrap().len();
            let report = kx_size(&g, &cfg).unwrap();
            assert!(report.lower <= report.upper);
            assert!(report.upper <= degree);
        }
    }
}
