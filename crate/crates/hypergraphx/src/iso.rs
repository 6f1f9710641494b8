//! Colored multigraph isomorphism by iterative refinement plus backtracking.
//!
//! Works on a dense multiplicity matrix, which is fine at the sizes this
//! crate deals with (a few dozen vertices). Vertex colors express marked
//! points: an isomorphism must preserve colors, so marking a vertex with a
//! color unique to its role pins its image.

use std::collections::BTreeMap;

use crate::graph::TopoGraph;

/// A multigraph reduced to what isomorphism cares about: vertex colors,
/// non-loop multiplicities and loop counts.
#[derive(Debug, Clone)]
pub(crate) struct ColoredGraph {
    pub n: usize,
    pub colors: Vec<u64>,
    /// Symmetric matrix of non-loop edge multiplicities.
    pub mult: Vec<Vec<u32>>,
    /// Loop multiplicity per vertex.
    pub loops: Vec<u32>,
    /// Vertex names in index order, for translating results back.
    pub names: Vec<String>,
}

impl ColoredGraph {
    /// Build from a graph; `marks` assigns nonzero colors to chosen vertices.
    pub fn from_graph(g: &TopoGraph, marks: &BTreeMap<String, u64>) -> Self {
        let n = g.vertex_count();
        let names: Vec<String> = g.vertex_ids().map(|s| s.to_string()).collect();
        let mut colors = vec![0u64; n];
        for (name, &c) in marks {
            if let Some(i) = g.vertex_index(name) {
                colors[i] = c;
            }
        }
        let mut mult = vec![vec![0u32; n]; n];
        let mut loops = vec![0u32; n];
        for eid in g.edge_ids() {
            let (u, v) = g.edge_endpoints(eid).unwrap();
            let ui = g.vertex_index(u).unwrap();
            let vi = g.vertex_index(v).unwrap();
            if ui == vi {
                loops[ui] += 1;
            } else {
                mult[ui][vi] += 1;
                mult[vi][ui] += 1;
            }
        }
        ColoredGraph {
            n,
            colors,
            mult,
            loops,
            names,
        }
    }
}

/// Jointly refine the colors of two graphs until stable. Returns refined
/// color vectors, or `None` if the color class profiles diverge (no
/// isomorphism can exist).
fn refine(a: &ColoredGraph, b: &ColoredGraph) -> Option<(Vec<u64>, Vec<u64>)> {
    let mut ca = a.colors.clone();
    let mut cb = b.colors.clone();
    loop {
        let key = |g: &ColoredGraph, c: &[u64], v: usize| {
            let mut neigh: Vec<(u32, u64)> = (0..g.n)
                .filter(|&w| g.mult[v][w] > 0)
                .map(|w| (g.mult[v][w], c[w]))
                .collect();
            neigh.sort();
            (c[v], g.loops[v], neigh)
        };
        let mut dict: BTreeMap<(u64, u32, Vec<(u32, u64)>), u64> = BTreeMap::new();
        let mut next = 0u64;
        let mut assign = |k: (u64, u32, Vec<(u32, u64)>)| -> u64 {
            *dict.entry(k).or_insert_with(|| {
                next += 1;
                next
            })
        };
        let na: Vec<u64> = (0..a.n).map(|v| assign(key(a, &ca, v))).collect();
        let nb: Vec<u64> = (0..b.n).map(|v| assign(key(b, &cb, v))).collect();
        // Compare class sizes per color.
        let mut ha: BTreeMap<u64, usize> = BTreeMap::new();
        let mut hb: BTreeMap<u64, usize> = BTreeMap::new();
        for &c in &na {
            *ha.entry(c).or_default() += 1;
        }
        for &c in &nb {
            *hb.entry(c).or_default() += 1;
        }
        if ha != hb {
            return None;
        }
        let stable = {
            // Refinement is stable when the new partition does not split any
            // old class further.
            let classes = |old: &[u64], new: &[u64]| {
                let mut m: BTreeMap<u64, u64> = BTreeMap::new();
                for (o, n) in old.iter().zip(new) {
                    if let Some(prev) = m.insert(*o, *n) {
                        if prev != *n {
                            return false;
                        }
                    }
                }
                true
            };
            classes(&ca, &na) && classes(&cb, &nb)
        };
        ca = na;
        cb = nb;
        if stable {
            return Some((ca, cb));
        }
    }
}

/// Enumerate color-preserving vertex bijections from `a` to `b` that respect
/// multiplicities and loop counts. Stops after `limit` results if given.
pub(crate) fn vertex_bijections(
    a: &ColoredGraph,
    b: &ColoredGraph,
    limit: Option<usize>,
) -> Vec<Vec<usize>> {
    if a.n != b.n {
        return Vec::new();
    }
    let Some((ca, cb)) = refine(a, b) else {
        return Vec::new();
    };
    // Candidate targets per vertex of a: vertices of b with the same refined
    // color. Process vertices in order of fewest candidates.
    let mut order: Vec<usize> = (0..a.n).collect();
    let cand_count = |v: usize| cb.iter().filter(|&&c| c == ca[v]).count();
    order.sort_by_key(|&v| (cand_count(v), v));

    let mut result = Vec::new();
    let mut map = vec![usize::MAX; a.n];
    let mut used = vec![false; b.n];

    fn backtrack(
        a: &ColoredGraph,
        b: &ColoredGraph,
        ca: &[u64],
        cb: &[u64],
        order: &[usize],
        depth: usize,
        map: &mut [usize],
        used: &mut [bool],
        result: &mut Vec<Vec<usize>>,
        limit: Option<usize>,
    ) {
        if let Some(l) = limit {
            if result.len() >= l {
                return;
            }
        }
        if depth == order.len() {
            result.push(map.to_vec());
            return;
        }
        let u = order[depth];
        'cand: for w in 0..b.n {
            if used[w] || cb[w] != ca[u] || a.loops[u] != b.loops[w] {
                continue;
            }
            for &x in &order[..depth] {
                if a.mult[u][x] != b.mult[w][map[x]] {
                    continue 'cand;
                }
            }
            map[u] = w;
            used[w] = true;
            backtrack(a, b, ca, cb, order, depth + 1, map, used, result, limit);
            map[u] = usize::MAX;
            used[w] = false;
        }
    }

    backtrack(
        a, b, &ca, &cb, &order, 0, &mut map, &mut used, &mut result, limit,
    );
    result
}

/// Whether a color-preserving isomorphism exists.
pub(crate) fn exists_iso(a: &ColoredGraph, b: &ColoredGraph) -> bool {
    !vertex_bijections(a, b, Some(1)).is_empty()
}

/// Whether two plain graphs are isomorphic as multigraphs.
pub fn graphs_isomorphic(a: &TopoGraph, b: &TopoGraph) -> bool {
    let ca = ColoredGraph::from_graph(a, &BTreeMap::new());
    let cb = ColoredGraph::from_graph(b, &BTreeMap::new());
    exists_iso(&ca, &cb)
}
