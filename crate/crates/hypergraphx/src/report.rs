//! Human- and machine-readable reports for a full graph analysis.
//!
//! [`analyze`] bundles everything the library computes about one graph —
//! shape, orbit partition, homogeneity degree, per-representative
//! signatures, hyperspace-count bounds, and an optional k-od core table —
//! into an [`AnalysisReport`]. Rendering to JSON or text is deterministic:
//! equal inputs and configuration produce byte-identical output.

use serde_json::{json, Value};

use crate::classifier::{kx_size, MergeRule, MergeWitness, PointSignature, RuleSet, SizeReport};
use crate::error::{Error, Result};
use crate::graph::{normalize, Shape, TopoGraph};
use crate::subcontinuum::kod_core_number;
use crate::symmetry::{point_orbits, Orbit, OrbitKind, Repr};

pub use crate::classifier::RulesConfig;

/// Everything computed about one graph.
#[derive(Debug, Clone)]
pub struct AnalysisReport {
    pub vertices: usize,
    pub edges: usize,
    pub shape: Shape,
    pub orbits: Vec<Orbit>,
    /// Number of orbits: the homogeneity degree of the graph.
    pub degree: usize,
    pub size: SizeReport,
    /// k-od core numbers per representative, present when requested;
    /// entries are `None` where the budget was exceeded.
    pub kappa_table: Option<Vec<(Repr, Option<u32>)>>,
}

/// Run the full analysis pipeline on one graph.
pub fn analyze(g: &TopoGraph, config: &RulesConfig) -> Result<AnalysisReport> {
    let ng = normalize(g)?;
    let orbits = point_orbits(&ng, &config.budget)?;
    let size = kx_size(g, config)?;
    let kappa_table = if config.kappa {
        let mut table = Vec::new();
        for orbit in &orbits.orbits {
            let rep = orbit.members[0].clone();
            let value = match kod_core_number(ng.graph(), &rep.to_point(), &config.budget) {
                Ok(k) => Some(k.value),
                Err(Error::BudgetExceeded(_)) => None,
                Err(e) => return Err(e),
            };
            table.push((rep, value));
        }
        Some(table)
    } else {
        None
    };
    Ok(AnalysisReport {
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        shape: g.shape(),
        degree: orbits.len(),
        orbits: orbits.orbits,
        size,
        kappa_table,
    })
}

fn labels(reps: &[Repr]) -> Value {
    Value::Array(reps.iter().map(|r| Value::String(r.label())).collect())
}

fn opt_u32(v: Option<u32>) -> Value {
    v.map_or(Value::Null, |x| json!(x))
}

fn orbit_kind_str(kind: OrbitKind) -> &'static str {
    match kind {
        OrbitKind::Vertex => "vertex",
        OrbitKind::EdgeInterior => "edge_interior",
        OrbitKind::Mixed => "mixed",
    }
}

fn rule_str(rule: MergeRule) -> &'static str {
    match rule {
        MergeRule::SameOrbit => "same_orbit",
        MergeRule::GluingTheorem => "gluing_theorem",
        MergeRule::GluingExtension => "gluing_extension",
    }
}

fn rules_str(rules: RuleSet) -> &'static str {
    match rules {
        RuleSet::Paper => "paper",
        RuleSet::Extended => "extended",
    }
}

fn signature_json(sig: &PointSignature) -> Value {
    json!({
        "class": sig.class.to_string(),
        "order": sig.order,
        "neighbor_order": opt_u32(sig.neighbor_order),
        "sigma_value": opt_u32(sig.sigma_value),
        "loop_flag": sig.loop_flag.map_or(Value::Null, Value::Bool),
        "sigma_split": opt_u32(sig.sigma_split),
        "kappa": opt_u32(sig.kappa),
    })
}

fn merge_json(w: &MergeWitness) -> Value {
    let witness = w.detail.as_ref().map_or(Value::Null, |d| {
        json!({
            "cut_pair": [d.cut_pair.0, d.cut_pair.1],
            "left_edges": d.left_edges,
            "middle_edges": d.middle_edges,
            "right_edges": d.right_edges,
            "certificate": match d.certificate {
                crate::classifier::CatalogCertificate::RootedIsomorphism => "rooted_isomorphism",
                crate::classifier::CatalogCertificate::CircleArcPair => "circle_arc_pair",
            },
            "middle_map": d.middle_map.iter()
                .map(|(a, b)| json!([a, b]))
                .collect::<Vec<_>>(),
        })
    });
    json!({
        "rule": rule_str(w.rule),
        "pair": labels(&w.pair),
        "witness": witness,
    })
}

/// JSON form of a size report, stable across runs.
pub fn size_report_json(r: &SizeReport) -> Value {
    json!({
        "lower": r.lower,
        "upper": r.upper,
        "exact": r.exact,
        "config": {
            "rules": rules_str(r.config.rules),
            "gluing_extension": r.config.gluing_extension,
            "kappa": r.config.kappa,
            "budget": {
                "max_bruteforce_vertices": r.config.budget.max_bruteforce_vertices,
                "max_bruteforce_edges": r.config.budget.max_bruteforce_edges,
                "max_group_size": r.config.budget.max_group_size,
                "max_subdivided_edges": r.config.budget.max_subdivided_edges,
            },
        },
        "classes_lower": r.classes_lower.iter().map(|c| labels(c)).collect::<Vec<_>>(),
        "classes_upper": r.classes_upper.iter().map(|c| labels(c)).collect::<Vec<_>>(),
        "merges": r.merges.iter().map(merge_json).collect::<Vec<_>>(),
        "conjectured_separations": r.conjectured_separations.iter().map(|c| labels(c)).collect::<Vec<_>>(),
    })
}

/// JSON form of a full analysis report.
pub fn analysis_json(r: &AnalysisReport) -> Value {
    json!({
        "graph": {
            "vertices": r.vertices,
            "edges": r.edges,
            "shape": r.shape.to_string(),
        },
        "degree": r.degree,
        "orbits": r.orbits.iter().map(|o| json!({
            "kind": orbit_kind_str(o.kind),
            "representatives": labels(&o.members),
        })).collect::<Vec<_>>(),
        "signatures": r.size.signatures.iter().map(|(rep, sig)| {
            let mut obj = signature_json(sig);
            obj.as_object_mut()
                .unwrap()
                .insert("representative".to_string(), json!(rep.label()));
            obj
        }).collect::<Vec<_>>(),
        "size": size_report_json(&r.size),
        "kappa_table": r.kappa_table.as_ref().map_or(Value::Null, |t| {
            json!(t.iter().map(|(rep, v)| json!({
                "representative": rep.label(),
                "kappa": opt_u32(*v),
            })).collect::<Vec<_>>())
        }),
    })
}

fn signature_text(sig: &PointSignature) -> String {
    let mut s = format!("class={} order={}", sig.class, sig.order);
    if let Some(n) = sig.neighbor_order {
        s.push_str(&format!(" neighbor_order={n}"));
    }
    if let Some(v) = sig.sigma_value {
        s.push_str(&format!(" sigma={v}"));
    }
    if let Some(l) = sig.loop_flag {
        s.push_str(&format!(" loop={l}"));
    }
    if let Some(m) = sig.sigma_split {
        s.push_str(&format!(" min_end_order={m}"));
    }
    if let Some(k) = sig.kappa {
        s.push_str(&format!(" kappa={k}"));
    }
    s
}

fn class_list(classes: &[Vec<Repr>]) -> String {
    classes
        .iter()
        .map(|c| {
            let inner = c.iter().map(Repr::label).collect::<Vec<_>>().join(", ");
            format!("{{{inner}}}")
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Text form of a full analysis report.
pub fn analysis_text(r: &AnalysisReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "graph: {} vertices, {} edges, shape {}\n",
        r.vertices, r.edges, r.shape
    ));
    out.push_str(&format!("homogeneity degree: {}\n", r.degree));
    out.push_str(&format!("orbits ({}):\n", r.orbits.len()));
    for o in &r.orbits {
        out.push_str(&format!(
            "  [{}] {}\n",
            orbit_kind_str(o.kind),
            o.members.iter().map(Repr::label).collect::<Vec<_>>().join(", ")
        ));
    }
    out.push_str("signatures of orbit representatives:\n");
    for (rep, sig) in &r.size.signatures {
        out.push_str(&format!("  {:<24} {}\n", rep.label(), signature_text(sig)));
    }
    let s = &r.size;
    if s.exact {
        out.push_str(&format!(
            "hyperspace classes: exactly {} (rules: {})\n",
            s.lower,
            rules_str(s.config.rules)
        ));
    } else {
        out.push_str(&format!(
            "hyperspace classes: between {} and {} (rules: {})\n",
            s.lower,
            s.upper,
            rules_str(s.config.rules)
        ));
    }
    out.push_str(&format!("  lower-bound classes: {}\n", class_list(&s.classes_lower)));
    out.push_str(&format!("  upper-bound classes: {}\n", class_list(&s.classes_upper)));
    if s.merges.is_empty() {
        out.push_str("  merges: none\n");
    } else {
        out.push_str("  merges:\n");
        for w in &s.merges {
            let pair = w.pair.iter().map(Repr::label).collect::<Vec<_>>().join(", ");
            match &w.detail {
                None => out.push_str(&format!("    {} [{}]\n", rule_str(w.rule), pair)),
                Some(d) => out.push_str(&format!(
                    "    {} [{}] cut=({},{}) certificate={}\n",
                    rule_str(w.rule),
                    pair,
                    d.cut_pair.0,
                    d.cut_pair.1,
                    match d.certificate {
                        crate::classifier::CatalogCertificate::RootedIsomorphism =>
                            "rooted_isomorphism",
                        crate::classifier::CatalogCertificate::CircleArcPair => "circle_arc_pair",
                    }
                )),
            }
        }
    }
    if !s.conjectured_separations.is_empty() {
        out.push_str(&format!(
            "  separations relying on conjectured invariants: {}\n",
            class_list(&s.conjectured_separations)
        ));
    }
    if let Some(table) = &r.kappa_table {
        out.push_str("k-od core numbers:\n");
        for (rep, v) in table {
            match v {
                Some(k) => out.push_str(&format!("  {:<24} {}\n", rep.label(), k)),
                None => out.push_str(&format!("  {:<24} (budget exceeded)\n", rep.label())),
            }
        }
    }
    out
}
