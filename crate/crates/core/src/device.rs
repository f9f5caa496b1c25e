//! Coupling graphs and fidelity profiles.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::DeviceError;

/// Undirected coupling edge, stored with the endpoints as given.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub p: usize,
    pub q: usize,
}

impl Edge {
    pub fn touches(self, node: usize) -> bool {
        self.p == node || self.q == node
    }

    pub fn shares_node(self, other: Edge) -> bool {
        self.touches(other.p) || self.touches(other.q)
    }

    /// The endpoint across from `node`, if `node` is an endpoint.
    pub fn other(self, node: usize) -> Option<usize> {
        if self.p == node {
            Some(self.q)
        } else if self.q == node {
            Some(self.p)
        } else {
            None
        }
    }
}

pub const DEFAULT_MEASURE_FIDELITY: f64 = 0.99;
pub const DEFAULT_SINGLE_FIDELITY: f64 = 0.99;
pub const DEFAULT_TWO_FIDELITY: f64 = 0.98;

#[derive(Debug, Clone, PartialEq)]
pub struct FidelityProfile {
    /// Per-node measurement fidelity.
    pub measure: Vec<f64>,
    /// Per-node single-qubit gate fidelity.
    pub single: Vec<f64>,
    /// Per-edge two-qubit gate fidelity.
    pub two: Vec<f64>,
}

impl FidelityProfile {
    pub fn uniform(num_nodes: usize, num_edges: usize, measure: f64, single: f64, two: f64) -> Self {
        FidelityProfile {
            measure: vec![measure; num_nodes],
            single: vec![single; num_nodes],
            two: vec![two; num_edges],
        }
    }

    pub fn default_for(num_nodes: usize, num_edges: usize) -> Self {
        Self::uniform(
            num_nodes,
            num_edges,
            DEFAULT_MEASURE_FIDELITY,
            DEFAULT_SINGLE_FIDELITY,
            DEFAULT_TWO_FIDELITY,
        )
    }

    pub fn is_uniform(&self) -> bool {
        fn flat(v: &[f64]) -> bool {
            v.windows(2).all(|w| w[0] == w[1])
        }
        flat(&self.measure) && flat(&self.single) && flat(&self.two)
    }
}

/// `round(1000 * ln f)`, ties away from zero.
pub fn scaled_log_fidelity(f: f64) -> Result<i64, DeviceError> {
    if !(f > 0.0 && f <= 1.0) {
        return Err(DeviceError::FidelityOutOfRange {
            what: "gate",
            value: f,
        });
    }
    Ok(libm::round(1000.0 * libm::log(f)) as i64)
}

/// A coupling graph with its derived overlap and incidence structure.
#[derive(Debug, Clone, PartialEq)]
pub struct Device {
    num_nodes: usize,
    edges: Vec<Edge>,
    overlaps: Vec<(usize, usize)>,
    incident: Vec<Vec<usize>>,
    fidelity: FidelityProfile,
    scaled_measure: Vec<i64>,
    scaled_single: Vec<i64>,
    scaled_two: Vec<i64>,
}

impl Device {
    /// Builds a device; a missing profile becomes the default uniform one.
    pub fn new(
        num_nodes: usize,
        edges: &[(usize, usize)],
        fidelity: Option<FidelityProfile>,
    ) -> Result<Self, DeviceError> {
        let mut list: Vec<Edge> = Vec::with_capacity(edges.len());
        for &(p, q) in edges {
            if p == q {
                return Err(DeviceError::SelfLoop(p, q));
            }
            if p >= num_nodes || q >= num_nodes {
                return Err(DeviceError::NodeOutOfRange { p, q, num_nodes });
            }
            let edge = Edge { p, q };
            if list.iter().any(|e| e.touches(p) && e.touches(q)) {
                return Err(DeviceError::DuplicateEdge(p, q));
            }
            list.push(edge);
        }
        let fidelity =
            fidelity.unwrap_or_else(|| FidelityProfile::default_for(num_nodes, list.len()));
        for (what, values, expected) in [
            ("measure", &fidelity.measure, num_nodes),
            ("single", &fidelity.single, num_nodes),
            ("two", &fidelity.two, list.len()),
        ] {
            if values.len() != expected {
                return Err(DeviceError::FidelityLength {
                    what,
                    found: values.len(),
                    expected,
                });
            }
            if let Some(&value) = values.iter().find(|&&f| !(f > 0.0 && f <= 1.0)) {
                return Err(DeviceError::FidelityOutOfRange { what, value });
            }
        }
        let scale = |v: &[f64]| -> Vec<i64> {
            v.iter()
                .map(|&f| scaled_log_fidelity(f).expect("checked above"))
                .collect()
        };
        let scaled_measure = scale(&fidelity.measure);
        let scaled_single = scale(&fidelity.single);
        let scaled_two = scale(&fidelity.two);

        let mut overlaps = Vec::new();
        for (i, a) in list.iter().enumerate() {
            for (j, b) in list.iter().enumerate().skip(i + 1) {
                if a.shares_node(*b) {
                    overlaps.push((i, j));
                }
            }
        }
        let mut incident = vec![Vec::new(); num_nodes];
        for (k, e) in list.iter().enumerate() {
            incident[e.p].push(k);
            incident[e.q].push(k);
        }

        Ok(Device {
            num_nodes,
            edges: list,
            overlaps,
            incident,
            fidelity,
            scaled_measure,
            scaled_single,
            scaled_two,
        })
    }

    /// `rows x cols` grid, nodes numbered row-major.
    pub fn grid(rows: usize, cols: usize) -> Self {
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let n = r * cols + c;
                if c + 1 < cols {
                    edges.push((n, n + 1));
                }
                if r + 1 < rows {
                    edges.push((n, n + cols));
                }
            }
        }
        Device::new(rows * cols, &edges, None).expect("grid edges are valid")
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Device::new(n, &edges, None).expect("path edges are valid")
    }

    pub fn with_fidelity(self, fidelity: FidelityProfile) -> Result<Self, DeviceError> {
        let edges: Vec<_> = self.edges.iter().map(|e| (e.p, e.q)).collect();
        Device::new(self.num_nodes, &edges, Some(fidelity))
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, k: usize) -> Edge {
        self.edges[k]
    }

    /// Unordered pairs `(k, k')`, `k < k'`, of distinct edges sharing a node.
    pub fn overlapping_pairs(&self) -> &[(usize, usize)] {
        &self.overlaps
    }

    /// Edges overlapping edge `k`, ascending.
    pub fn overlapping_with(&self, k: usize) -> impl Iterator<Item = usize> + '_ {
        self.overlaps.iter().filter_map(move |&(a, b)| {
            if a == k {
                Some(b)
            } else if b == k {
                Some(a)
            } else {
                None
            }
        })
    }

    pub fn incident_edges(&self, node: usize) -> Result<&[usize], DeviceError> {
        self.incident
            .get(node)
            .map(Vec::as_slice)
            .ok_or(DeviceError::UnknownNode {
                node,
                num_nodes: self.num_nodes,
            })
    }

    pub fn edge_between(&self, p: usize, q: usize) -> Option<usize> {
        self.incident
            .get(p)?
            .iter()
            .copied()
            .find(|&k| self.edges[k].touches(q) && p != q)
    }

    pub fn fidelity(&self) -> &FidelityProfile {
        &self.fidelity
    }

    pub fn scaled_measure(&self, node: usize) -> i64 {
        self.scaled_measure[node]
    }

    pub fn scaled_single(&self, node: usize) -> i64 {
        self.scaled_single[node]
    }

    pub fn scaled_two(&self, edge: usize) -> i64 {
        self.scaled_two[edge]
    }

    /// A SWAP is three two-qubit gates on the same edge.
    pub fn swap_log_fidelity(&self, edge: usize) -> i64 {
        3 * self.scaled_two[edge]
    }

    /// Node permutations preserving edges and the scaled fidelities, or
    /// `None` once more than `limit` exist.
    pub fn automorphisms(&self, limit: usize) -> Option<Vec<Vec<usize>>> {
        let n = self.num_nodes;
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            order.push(root);
            let mut i = order.len() - 1;
            while i < order.len() {
                let p = order[i];
                for &k in &self.incident[p] {
                    let q = self.edges[k].other(p).expect("incident edge");
                    if !seen[q] {
                        seen[q] = true;
                        order.push(q);
                    }
                }
                i += 1;
            }
        }
        let mut image = vec![usize::MAX; n];
        let mut used = vec![false; n];
        let mut out = Vec::new();
        if self.extend_automorphism(&order, 0, &mut image, &mut used, &mut out, limit) {
            Some(out)
        } else {
            None
        }
    }

    fn extend_automorphism(
        &self,
        order: &[usize],
        depth: usize,
        image: &mut [usize],
        used: &mut [bool],
        out: &mut Vec<Vec<usize>>,
        limit: usize,
    ) -> bool {
        if depth == order.len() {
            out.push(image.to_vec());
            return out.len() <= limit;
        }
        let p = order[depth];
        for cand in 0..self.num_nodes {
            if used[cand]
                || self.incident[cand].len() != self.incident[p].len()
                || self.scaled_measure[cand] != self.scaled_measure[p]
                || self.scaled_single[cand] != self.scaled_single[p]
            {
                continue;
            }
            let consistent = order[..depth].iter().all(|&q| {
                match (self.edge_between(p, q), self.edge_between(cand, image[q])) {
                    (None, None) => true,
                    (Some(a), Some(b)) => self.scaled_two[a] == self.scaled_two[b],
                    _ => false,
                }
            });
            if !consistent {
                continue;
            }
            image[p] = cand;
            used[cand] = true;
            let ok = self.extend_automorphism(order, depth + 1, image, used, out, limit);
            used[cand] = false;
            image[p] = usize::MAX;
            if !ok {
                return false;
            }
        }
        true
    }

    pub fn is_connected(&self) -> bool {
        if self.num_nodes == 0 {
            return true;
        }
        let mut seen = vec![false; self.num_nodes];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(p) = stack.pop() {
            for &k in &self.incident[p] {
                let q = self.edges[k].other(p).expect("incident edge");
                if !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}
