//! Capacity-respecting star coverings of a bipartite graph.
//!
//! Given an independent side `I` with capacities `φ` and an ordered other
//! side `U`, a *well subgraph* attaches every `u ∈ U` to exactly one
//! neighbor `x ∈ I` so that no `x` receives more than `φ(x)` leaves. We build
//! one incrementally: each new `u` takes a non-tight neighbor if it has one,
//! otherwise an alternating path (non-forest edge into `I`, forest edge back
//! into `U`, ...) ending at a non-tight `x` is flipped.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::report::Report;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WellError {
    #[error("malformed instance: {0}")]
    Malformed(String),
    #[error("edge {0}-{1} is not in the bipartite graph")]
    EdgeNotInH(usize, usize),
    #[error(
        "no augmenting path for U-vertex {blocked}; reachable I-side {reachable_iside:?}, \
         reachable U-side {reachable_u:?}"
    )]
    NoAugmentingPath {
        blocked: usize,
        reachable_iside: Vec<usize>,
        reachable_u: Vec<usize>,
    },
}

/// One instance: the bipartite graph `H = G[I, U]`, the order of `U`, the
/// capacities, and the edges of the ambient graph inside `U`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WellInstance {
    pub iside: Vec<usize>,
    pub uorder: Vec<usize>,
    pub phi: BTreeMap<usize, u64>,
    /// Edges of `H`, each as `(x, u)` with `x ∈ I`, `u ∈ U`.
    pub edges: Vec<(usize, usize)>,
    #[serde(default)]
    pub uedges: Vec<(usize, usize)>,
}

impl WellInstance {
    /// Cuts an instance out of an ambient graph.
    pub fn from_graph(
        g: &Graph,
        iside: &[usize],
        uorder: &[usize],
        phi: impl Fn(usize) -> u64,
    ) -> Result<Self, WellError> {
        let iset: BTreeSet<usize> = iside.iter().copied().collect();
        let uset: BTreeSet<usize> = uorder.iter().copied().collect();
        if let Some(v) = iset.intersection(&uset).next() {
            return Err(WellError::Malformed(format!("vertex {v} on both sides")));
        }
        if let Some(&v) = iset.iter().chain(uset.iter()).find(|&&v| v >= g.n()) {
            return Err(WellError::Malformed(format!("unknown vertex {v}")));
        }
        let mut edges = Vec::new();
        let mut uedges = Vec::new();
        for &(a, b) in g.edges() {
            match (
                iset.contains(&a),
                uset.contains(&a),
                iset.contains(&b),
                uset.contains(&b),
            ) {
                (true, _, _, true) => edges.push((a, b)),
                (_, true, true, _) => edges.push((b, a)),
                (_, true, _, true) => uedges.push((a, b)),
                _ => {}
            }
        }
        edges.sort_unstable();
        let phi = iset
            .iter()
            .chain(uset.iter())
            .map(|&v| (v, phi(v)))
            .collect();
        Ok(WellInstance {
            iside: iset.into_iter().collect(),
            uorder: uorder.to_vec(),
            phi,
            edges,
            uedges,
        })
    }

    /// Structural sanity: disjoint sides, no repeated U-vertex, capacities
    /// defined, and every edge running between the declared sides.
    pub fn validate(&self) -> Result<(), WellError> {
        let iset: HashSet<usize> = self.iside.iter().copied().collect();
        let mut uset = HashSet::new();
        for &u in &self.uorder {
            if !uset.insert(u) {
                return Err(WellError::Malformed(format!("U-vertex {u} listed twice")));
            }
            if iset.contains(&u) {
                return Err(WellError::Malformed(format!("vertex {u} on both sides")));
            }
        }
        for v in self.iside.iter().chain(&self.uorder) {
            if !self.phi.contains_key(v) {
                return Err(WellError::Malformed(format!("no capacity for vertex {v}")));
            }
        }
        for &(x, u) in &self.edges {
            if !iset.contains(&x) || !uset.contains(&u) {
                return Err(WellError::Malformed(format!(
                    "edge {x}-{u} does not run from I to U"
                )));
            }
        }
        for &(a, b) in &self.uedges {
            if !uset.contains(&a) || !uset.contains(&b) {
                return Err(WellError::Malformed(format!("U-edge {a}-{b} leaves U")));
            }
        }
        Ok(())
    }

    fn iside_neighbors(&self) -> HashMap<usize, Vec<usize>> {
        let mut out: HashMap<usize, Vec<usize>> = HashMap::new();
        for &(x, u) in &self.edges {
            out.entry(u).or_default().push(x);
        }
        for list in out.values_mut() {
            list.sort_unstable();
            list.dedup();
        }
        out
    }
}

/// A set of `(x, u)` edges, sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarForest {
    pub edges: Vec<(usize, usize)>,
}

impl StarForest {
    pub fn degree(&self, x: usize) -> usize {
        self.edges.iter().filter(|&&(y, _)| y == x).count()
    }

    pub fn center_of(&self, u: usize) -> Option<usize> {
        self.edges.iter().find(|&&(_, v)| v == u).map(|&(x, _)| x)
    }
}

/// For each `u_k` (in order): at most `φ(u_k) − 1` neighbors among the later
/// U-vertices, and every constrained capacity is at least one.
pub fn check_preconditions(inst: &WellInstance) -> Report {
    let mut report = Report::new();
    let pos: HashMap<usize, usize> = inst
        .uorder
        .iter()
        .enumerate()
        .map(|(k, &u)| (u, k))
        .collect();
    let mut later = vec![0u64; inst.uorder.len()];
    for &(a, b) in &inst.uedges {
        if let (Some(&ka), Some(&kb)) = (pos.get(&a), pos.get(&b)) {
            later[ka.min(kb)] += 1;
        }
    }
    let mut bad_phi = Vec::new();
    for v in inst.iside.iter().chain(&inst.uorder) {
        match inst.phi.get(v) {
            Some(&p) if p >= 1 => {}
            other => bad_phi.push(format!("vertex {v}: capacity {other:?}")),
        }
    }
    report.record("capacities at least one", bad_phi);
    for (k, &u) in inst.uorder.iter().enumerate() {
        let cap = inst.phi.get(&u).copied().unwrap_or(0);
        let mut bad = Vec::new();
        if later[k] + 1 > cap {
            bad.push(format!(
                "u[{k}] = {u} has {} later U-neighbors, allowed {}",
                later[k],
                cap.saturating_sub(1)
            ));
        }
        report.record(format!("u {u}: later neighbors below capacity"), bad);
    }
    report
}

/// Builds a well subgraph by incremental insertion with breadth-first
/// alternating-path augmentation.
pub fn find_well_subgraph(inst: &WellInstance) -> Result<StarForest, WellError> {
    inst.validate()?;
    let nbrs = inst.iside_neighbors();
    let cap = |x: usize| inst.phi[&x];
    let mut center: HashMap<usize, usize> = HashMap::new();
    let mut leaves: HashMap<usize, BTreeSet<usize>> = HashMap::new();
    let load = |leaves: &HashMap<usize, BTreeSet<usize>>, x: usize| {
        leaves.get(&x).map_or(0, |s| s.len() as u64)
    };
    let empty = Vec::new();

    for &u in &inst.uorder {
        let near = nbrs.get(&u).unwrap_or(&empty);
        if let Some(&x) = near.iter().find(|&&x| load(&leaves, x) < cap(x)) {
            center.insert(u, x);
            leaves.entry(x).or_default().insert(u);
            continue;
        }

        // breadth-first over alternating paths, I-vertices in id order
        let mut came_from: HashMap<usize, usize> = HashMap::new();
        let mut seen_u: BTreeSet<usize> = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen_u.insert(u);
        for &x in near {
            came_from.insert(x, u);
            queue.push_back(x);
        }
        let mut end = None;
        while let Some(x) = queue.pop_front() {
            if load(&leaves, x) < cap(x) {
                end = Some(x);
                break;
            }
            let attached: Vec<usize> = leaves
                .get(&x)
                .map(|s| s.iter().copied().collect())
                .unwrap_or_default();
            for y in attached {
                if !seen_u.insert(y) {
                    continue;
                }
                for &x2 in nbrs.get(&y).unwrap_or(&empty) {
                    if let std::collections::hash_map::Entry::Vacant(e) = came_from.entry(x2) {
                        e.insert(y);
                        queue.push_back(x2);
                    }
                }
            }
        }

        let Some(mut cur) = end else {
            let mut reachable_iside: Vec<usize> = came_from.keys().copied().collect();
            reachable_iside.sort_unstable();
            return Err(WellError::NoAugmentingPath {
                blocked: u,
                reachable_iside,
                reachable_u: seen_u.into_iter().collect(),
            });
        };
        // flip: every U-vertex on the path moves one step toward the free end
        let mut y = came_from[&cur];
        while y != u {
            let prev = center[&y];
            leaves
                .get_mut(&prev)
                .expect("y is attached to prev")
                .remove(&y);
            leaves.entry(cur).or_default().insert(y);
            center.insert(y, cur);
            cur = prev;
            y = came_from[&cur];
        }
        center.insert(u, cur);
        leaves.entry(cur).or_default().insert(u);
    }

    let mut edges: Vec<(usize, usize)> = center.into_iter().map(|(u, x)| (x, u)).collect();
    edges.sort_unstable();
    Ok(StarForest { edges })
}

/// Every U-vertex covered exactly once and every I-vertex within capacity.
/// Errors if `f` uses an edge outside `H`.
pub fn verify_well(inst: &WellInstance, f: &StarForest) -> Result<bool, WellError> {
    let h: HashSet<(usize, usize)> = inst.edges.iter().copied().collect();
    if let Some(&(x, u)) = f.edges.iter().find(|e| !h.contains(e)) {
        return Err(WellError::EdgeNotInH(x, u));
    }
    let mut cover: HashMap<usize, usize> = HashMap::new();
    let mut deg: HashMap<usize, u64> = HashMap::new();
    for &(x, u) in &f.edges {
        *cover.entry(u).or_default() += 1;
        *deg.entry(x).or_default() += 1;
    }
    let covered =
        inst.uorder.iter().all(|u| cover.get(u) == Some(&1)) && cover.len() == inst.uorder.len();
    let within = deg
        .iter()
        .all(|(x, &d)| inst.phi.get(x).is_some_and(|&p| d <= p));
    Ok(covered && within)
}
