//! Analysis of finite topological graphs as one-dimensional continua.
//!
//! For a finite graph `X` and a point `p`, the hyperspace `C(p, X)` of
//! subcontinua of `X` containing `p` is a topological invariant of the pair.
//! This crate computes combinatorial invariants that distinguish such
//! hyperspaces (point order and class, neighbor orders, edge order sums,
//! k-od core numbers), the degree of homogeneity of `X` (orbits of the
//! self-homeomorphism action), and certified lower/upper bounds for the
//! number of distinct hyperspace types `{C(x, X) : x in X}`.

pub mod budget;
pub mod classifier;
pub mod corpus;
pub mod error;
pub mod families;
pub mod graph;
mod iso;
pub mod report;
pub mod subcontinuum;
pub mod verify;
pub mod symmetry;

pub use budget::Budget;
pub use classifier::{
    catalog_lookup, gluing_merges, kx_size, signature, signature_partition, CatalogCertificate,
    GluingDetail, MergeRule, MergeWitness, PointSignature, RuleSet, RulesConfig, SignatureKey,
    SizeReport,
};
pub use corpus::{family_corpus, small_graph_corpus};
pub use error::{Error, Result};
pub use families::{
    build_example, build_family, build_pi, build_qi, build_sn, build_xn, build_yn, FamilyGraph,
};
pub use graph::{
    frac, neighbor_vertex, normalize, parse_graph, point_class, point_order, sigma,
    sigma_min_order, subdivide, Frac, NormalizedGraph, PointClass, PointRef, Shape, Subdivision,
    TopoGraph,
};
pub use graph::End;
pub use iso::graphs_isomorphic;
pub use report::{analysis_json, analysis_text, analyze, size_report_json, AnalysisReport};
pub use subcontinuum::{
    cell_dimension_at, complement_components, contains_point, decompose_at_point, kod_core_number,
    kod_core_number_with_level, AttachKind, AttachedComponent, ComplementComponent, Direction,
    KodCore, OpenSegment, PointDecomposition, Stub, SubcontinuumRepr,
};
pub use symmetry::{
    automorphisms, brute_force_automorphisms, homogeneity_degree, point_orbits, GraphAutomorphism,
    Orbit, OrbitKind, OrbitPartition, Orientation, Repr,
};
pub use verify::{
    verification_json, verification_text, verify_claims, Claim, ClaimStatus, VerificationReport,
};
