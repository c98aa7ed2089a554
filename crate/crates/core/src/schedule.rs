//! Layering gate lists into rounds of qudit-disjoint gates.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::synth::{GateList, Leg};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub depth: usize,
    /// Gate indices per layer, ascending within each layer.
    pub layers: Vec<Vec<usize>>,
}

/// Repeated greedy passes in ascending gate order: each pass takes every remaining
/// gate that shares no qudit with a gate already in the layer.
pub fn greedy_schedule(gl: &GateList) -> Schedule {
    let qudits: Vec<Vec<Leg>> = gl.gates.iter().map(|g| g.qudits()).collect();
    let mut remaining: Vec<usize> = (0..gl.gates.len()).collect();
    let mut layers = Vec::new();
    while !remaining.is_empty() {
        let mut busy: HashSet<Leg> = HashSet::new();
        let mut layer = Vec::new();
        remaining.retain(|&g| {
            if qudits[g].iter().any(|q| busy.contains(q)) {
                return true;
            }
            busy.extend(qudits[g].iter().copied());
            layer.push(g);
            false
        });
        layers.push(layer);
    }
    Schedule {
        depth: layers.len(),
        layers,
    }
}

/// Maximum number of other gates any gate shares a qudit with.
pub fn conflict_degree(gl: &GateList) -> usize {
    conflict_graph(gl).iter().map(Vec::len).max().unwrap_or(0)
}

/// Adjacency lists of the conflict graph (gates sharing a qudit).
pub fn conflict_graph(gl: &GateList) -> Vec<Vec<usize>> {
    let mut by_qudit: HashMap<Leg, Vec<usize>> = HashMap::new();
    for (i, g) in gl.gates.iter().enumerate() {
        for q in g.qudits() {
            by_qudit.entry(q).or_default().push(i);
        }
    }
    let mut adj: Vec<HashSet<usize>> = vec![HashSet::new(); gl.gates.len()];
    for gates in by_qudit.values() {
        for &a in gates {
            for &b in gates {
                if a != b {
                    adj[a].insert(b);
                }
            }
        }
    }
    adj.into_iter()
        .map(|s| {
            let mut v: Vec<usize> = s.into_iter().collect();
            v.sort_unstable();
            v
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScheduleReport {
    pub disjoint: bool,
    pub partition: bool,
    pub depth_consistent: bool,
    pub detail: Vec<String>,
}

impl ScheduleReport {
    pub fn passed(&self) -> bool {
        self.disjoint && self.partition && self.depth_consistent
    }
}

/// Re-checks layer disjointness and that the layers partition the gate list.
pub fn validate_schedule(gl: &GateList, s: &Schedule) -> ScheduleReport {
    let mut detail = Vec::new();
    let mut disjoint = true;
    let mut seen = vec![0usize; gl.gates.len()];
    let mut in_range = true;
    for (li, layer) in s.layers.iter().enumerate() {
        let mut busy: HashMap<Leg, usize> = HashMap::new();
        for &g in layer {
            let Some(gate) = gl.gates.get(g) else {
                in_range = false;
                detail.push(format!("layer {li} names gate {g}, which does not exist"));
                continue;
            };
            seen[g] += 1;
            for q in gate.qudits() {
                if let Some(prev) = busy.insert(q, g) {
                    disjoint = false;
                    detail.push(format!(
                        "layer {li}: gates {prev} and {g} share block {} place {}",
                        q.block, q.place
                    ));
                }
            }
        }
    }
    for (g, &n) in seen.iter().enumerate() {
        if n != 1 {
            detail.push(format!("gate {g} appears in {n} layers"));
        }
    }
    let partition = in_range && seen.iter().all(|&n| n == 1);
    let depth_consistent = s.depth == s.layers.len();
    if !depth_consistent {
        detail.push(format!("depth {} but {} layers", s.depth, s.layers.len()));
    }
    ScheduleReport {
        disjoint,
        partition,
        depth_consistent,
        detail,
    }
}
