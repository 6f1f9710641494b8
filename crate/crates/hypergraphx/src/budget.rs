//! Search caps for the exhaustive parts of the analysis.

/// Limits guarding brute-force searches. All limits are inclusive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budget {
    /// Vertex cap for the exhaustive automorphism oracle.
    pub max_bruteforce_vertices: usize,
    /// Edge cap for the exhaustive automorphism oracle.
    pub max_bruteforce_edges: usize,
    /// Cap on the number of automorphisms materialized as an explicit list.
    pub max_group_size: usize,
    /// Cap on the edge count of the subdivided graph enumerated for k-od
    /// core numbers.
    pub max_subdivided_edges: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_bruteforce_vertices: 8,
            max_bruteforce_edges: 10,
            max_group_size: 1 << 20,
            max_subdivided_edges: 24,
        }
    }
}

impl Budget {
    /// Budget with the subdivided-edge cap replaced, as set by the CLI.
    pub fn with_subdivided_edge_cap(cap: usize) -> Self {
        Budget {
            max_subdivided_edges: cap,
            ..Budget::default()
        }
    }
}
