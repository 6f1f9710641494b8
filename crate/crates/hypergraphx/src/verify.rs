//! Reference-claim verification suite.
//!
//! Runs every quantitative claim the library is built to reproduce — chain
//! family sizes and degrees, the two-branch example, the circle
//! characterization, second-chain bounds, and the universal bound
//! inequality — and reports per-claim status. Claim mismatches are data
//! (they surface known soft spots and are never fatal); internal
//! consistency failures are collected separately and make the run fail.

use serde_json::{json, Value};

use crate::classifier::kx_size;
use crate::corpus::{family_corpus, small_graph_corpus};
use crate::error::Result;
use crate::families::{build_example, build_xn, build_yn};
use crate::graph::{normalize, Shape, TopoGraph};
use crate::report::RulesConfig;
use crate::symmetry::point_orbits;

/// Outcome of comparing a computed value against a reference claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClaimStatus {
    /// Computed value equals the claimed value.
    Match,
    /// Computed value contradicts the claimed value.
    Mismatch,
    /// The claim is not decided exactly, but lies inside the computed
    /// bounds.
    BoundContains,
}

impl ClaimStatus {
    fn as_str(self) -> &'static str {
        match self {
            ClaimStatus::Match => "match",
            ClaimStatus::Mismatch => "mismatch",
            ClaimStatus::BoundContains => "bound-contains",
        }
    }
}

/// One verified claim: what was expected, what was computed, how they
/// compare.
#[derive(Debug, Clone)]
pub struct Claim {
    pub name: String,
    pub expected: String,
    pub computed: String,
    pub status: ClaimStatus,
}

/// The full suite outcome.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub claims: Vec<Claim>,
    /// Failures of the library's own invariants (not claim mismatches).
    /// Any entry here makes the suite fail.
    pub internal_errors: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.internal_errors.is_empty()
    }
}

fn size_summary(r: &crate::classifier::SizeReport) -> String {
    if r.exact {
        format!("{} (exact)", r.lower)
    } else {
        format!("[{}, {}]", r.lower, r.upper)
    }
}

/// Run the whole claim suite under one configuration.
pub fn verify_claims(config: &RulesConfig) -> VerificationReport {
    let mut claims = Vec::new();
    let mut internal_errors = Vec::new();

    let mut record = |claims: &mut Vec<Claim>, name: String, expected: String, body: Result<(String, ClaimStatus)>| match body {
        Ok((computed, status)) => claims.push(Claim {
            name,
            expected,
            computed,
            status,
        }),
        Err(e) => internal_errors.push(format!("{name}: {e}")),
    };

    // The two-branch example: five hyperspace classes, six orbits.
    record(
        &mut claims,
        "example size".to_string(),
        "5 (exact)".to_string(),
        (|| {
            let g = build_example()?.graph;
            let r = kx_size(&g, config)?;
            let status = if r.exact && r.lower == 5 {
                ClaimStatus::Match
            } else if r.lower <= 5 && 5 <= r.upper {
                ClaimStatus::BoundContains
            } else {
                ClaimStatus::Mismatch
            };
            Ok((size_summary(&r), status))
        })(),
    );
    record(
        &mut claims,
        "example degree".to_string(),
        "6".to_string(),
        (|| {
            let g = build_example()?.graph;
            let d = point_orbits(&normalize(&g)?, &config.budget)?.len();
            let status = if d == 6 {
                ClaimStatus::Match
            } else {
                ClaimStatus::Mismatch
            };
            Ok((d.to_string(), status))
        })(),
    );

    // Chain family: size and degree both equal the index.
    for n in 1..=20u32 {
        record(
            &mut claims,
            format!("X{n} size"),
            format!("{n} (exact)"),
            (|| {
                let g = build_xn(n)?.graph;
                let r = kx_size(&g, config)?;
                let want = n as usize;
                let status = if r.exact && r.lower == want {
                    ClaimStatus::Match
                } else if r.lower <= want && want <= r.upper {
                    ClaimStatus::BoundContains
                } else {
                    ClaimStatus::Mismatch
                };
                Ok((size_summary(&r), status))
            })(),
        );
    }
    for n in 1..=20u32 {
        record(
            &mut claims,
            format!("X{n} degree"),
            n.to_string(),
            (|| {
                let g = build_xn(n)?.graph;
                let d = point_orbits(&normalize(&g)?, &config.budget)?.len();
                let status = if d == n as usize {
                    ClaimStatus::Match
                } else {
                    ClaimStatus::Mismatch
                };
                Ok((d.to_string(), status))
            })(),
        );
    }

    // One shared sweep over the exhaustive small-graph corpus plus every
    // family graph, feeding two claims: the circle characterization and the
    // universal bound inequality.
    let sweep = (|| -> Result<(usize, Vec<String>, Vec<String>)> {
        let mut graphs: Vec<(String, TopoGraph)> = small_graph_corpus(5)
            .into_iter()
            .enumerate()
            .map(|(i, g)| (format!("corpus[{i}]"), g))
            .collect();
        graphs.extend(family_corpus()?);
        let mut bad_circle = Vec::new();
        let mut bad_bounds = Vec::new();
        for (name, g) in &graphs {
            let r = kx_size(g, config)?;
            let d = point_orbits(&normalize(g)?, &config.budget)?.len();
            let is_circle = g.shape() == Shape::Circle;
            let exactly_one = r.exact && r.lower == 1;
            if exactly_one != is_circle {
                bad_circle.push(name.clone());
            }
            if !(r.lower <= r.upper && r.upper <= d) {
                bad_bounds.push(format!("{name} ({}/{}/{d})", r.lower, r.upper));
            }
        }
        Ok((graphs.len(), bad_circle, bad_bounds))
    })();
    let (sweep_circle, sweep_bounds) = match sweep {
        Ok((total, bad_circle, bad_bounds)) => {
            let verdict = |bad: Vec<String>| {
                if bad.is_empty() {
                    (format!("holds on all {total} graphs"), ClaimStatus::Match)
                } else {
                    (format!("fails on {}", bad.join(", ")), ClaimStatus::Mismatch)
                }
            };
            (Ok(verdict(bad_circle)), Ok(verdict(bad_bounds)))
        }
        Err(e) => (Err(e.clone()), Err(e)),
    };
    record(
        &mut claims,
        "size 1 characterizes the circle".to_string(),
        "exact 1 iff shape circle".to_string(),
        sweep_circle,
    );

    // Second chain: claimed size index+4; degrees claimed index+5 are
    // reported against the computed orbit count.
    for n in 1..=14u32 {
        record(
            &mut claims,
            format!("Y{n} size"),
            format!("{}", n + 4),
            (|| {
                let g = build_yn(n)?.graph;
                let r = kx_size(&g, config)?;
                let want = (n + 4) as usize;
                let status = if r.exact && r.lower == want {
                    ClaimStatus::Match
                } else if r.lower <= want && want <= r.upper {
                    ClaimStatus::BoundContains
                } else {
                    ClaimStatus::Mismatch
                };
                Ok((size_summary(&r), status))
            })(),
        );
    }
    for n in 1..=14u32 {
        record(
            &mut claims,
            format!("Y{n} degree"),
            format!("{}", n + 5),
            (|| {
                let g = build_yn(n)?.graph;
                let d = point_orbits(&normalize(&g)?, &config.budget)?.len();
                let status = if d == (n + 5) as usize {
                    ClaimStatus::Match
                } else {
                    ClaimStatus::Mismatch
                };
                Ok((d.to_string(), status))
            })(),
        );
    }

    // Universal inequality: lower <= upper <= degree on every graph the
    // suite generates (same sweep as the characterization above).
    record(
        &mut claims,
        "bounds vs degree inequality".to_string(),
        "lower <= upper <= degree everywhere".to_string(),
        sweep_bounds,
    );

    VerificationReport {
        claims,
        internal_errors,
    }
}

/// JSON form of the verification report.
pub fn verification_json(r: &VerificationReport) -> Value {
    json!({
        "claims": r.claims.iter().map(|c| json!({
            "name": c.name,
            "expected": c.expected,
            "computed": c.computed,
            "status": c.status.as_str(),
        })).collect::<Vec<_>>(),
        "internal_errors": r.internal_errors,
        "passed": r.passed(),
    })
}

/// Text form of the verification report: an aligned table plus a summary.
pub fn verification_text(r: &VerificationReport) -> String {
    let name_w = r
        .claims
        .iter()
        .map(|c| c.name.len())
        .max()
        .unwrap_or(4)
        .max("claim".len());
    let exp_w = r
        .claims
        .iter()
        .map(|c| c.expected.len())
        .max()
        .unwrap_or(8)
        .max("expected".len());
    let comp_w = r
        .claims
        .iter()
        .map(|c| c.computed.len())
        .max()
        .unwrap_or(8)
        .max("computed".len());
    let mut out = String::new();
    out.push_str(&format!(
        "{:<name_w$}  {:<exp_w$}  {:<comp_w$}  status\n",
        "claim", "expected", "computed"
    ));
    for c in &r.claims {
        out.push_str(&format!(
            "{:<name_w$}  {:<exp_w$}  {:<comp_w$}  {}\n",
            c.name,
            c.expected,
            c.computed,
            c.status.as_str()
        ));
    }
    let matches = r
        .claims
        .iter()
        .filter(|c| c.status == ClaimStatus::Match)
        .count();
    let mismatches = r
        .claims
        .iter()
        .filter(|c| c.status == ClaimStatus::Mismatch)
        .count();
    let contained = r
        .claims
        .iter()
        .filter(|c| c.status == ClaimStatus::BoundContains)
        .count();
    out.push_str(&format!(
        "\n{} claims: {} match, {} mismatch, {} bound-contains\n",
        r.claims.len(),
        matches,
        mismatches,
        contained
    ));
    if r.internal_errors.is_empty() {
        out.push_str("internal consistency: ok\n");
    } else {
        out.push_str(&format!(
            "internal consistency: {} error(s)\n",
            r.internal_errors.len()
        ));
        for e in &r.internal_errors {
            out.push_str(&format!("  {e}\n"));
        }
    }
    out
}
