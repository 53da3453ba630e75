//! Target-value decomposition of the vertex set.
//!
//! Each vertex `v` may finish at any value of its target progression
//! `S_v = { σ0(v) + j·a : 0 ≤ j ≤ d(v)+1 }`. The union of all progressions,
//! sorted ascending, gives the targets `q_1 < … < q_ξ`. Levels are processed
//! in that order: level `i` considers the vertices whose progression contains
//! `q_i` and that are not yet placed, gives each the demand
//! `φ_i(v) = (q_i − σ0(v)) / a`, and places a `φ_i`-maximum independent set
//! `I_i` of them at target `q_i`. Every vertex ends up in exactly one `I_i`.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{induced, weighted_degree, BaseWeighting, Graph, GraphError};
use crate::mwis::{self, MwisError};
use crate::rational::Rational;
use crate::report::Report;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LevelError {
    #[error("span must be positive, got {0}")]
    NonPositiveSpan(Rational),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Mwis(#[from] MwisError),
    #[error("internal invariant violated while building levels: {0}")]
    Internal(String),
}

/// One target level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelRecord {
    pub q: Rational,
    /// `I_i`, ascending.
    pub members: Vec<usize>,
    /// `V(G_i)`: vertices with `q_i ∈ S_v` not placed at a lower level.
    pub carrier: Vec<usize>,
    /// `φ_i` on the carrier.
    pub phi: BTreeMap<usize, u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelDecomposition {
    pub span: Rational,
    /// `q_1 < … < q_ξ` (index 0 holds `q_1`).
    pub targets: Vec<Rational>,
    pub levels: Vec<LevelRecord>,
    /// Index of the last level with a nonempty `I`.
    pub last: usize,
    /// Level index holding each vertex.
    pub level_of: Vec<usize>,
    /// `σ0(v)` for every vertex.
    #[serde(skip)]
    pub base_degree: Vec<Rational>,
    /// `reach[v][j]` is the level index of `σ0(v) + j·a`.
    #[serde(skip)]
    pub reach: Vec<Vec<usize>>,
}

impl LevelDecomposition {
    pub fn target_of(&self, v: usize) -> &Rational {
        &self.targets[self.level_of[v]]
    }

    /// `φ_i(v)` when `q_i ∈ S_v`, otherwise `None`. Defined for every vertex,
    /// not only for the carrier of level `i`.
    pub fn demand(&self, v: usize, level: usize) -> Option<u64> {
        self.reach[v].binary_search(&level).ok().map(|j| j as u64)
    }

    /// Demand of `v` at its own level.
    pub fn own_demand(&self, v: usize) -> u64 {
        self.demand(v, self.level_of[v])
            .expect("a vertex's own level is in its progression")
    }

    /// `I⁺_{i,k} = { v ∈ I_i : φ_i(v) ≥ k }`.
    pub fn members_with_demand_at_least(&self, level: usize, k: u64) -> Vec<usize> {
        let rec = &self.levels[level];
        rec.members
            .iter()
            .copied()
            .filter(|v| rec.phi[v] >= k)
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("decomposition serializes")
    }
}

/// `S_v`, ascending.
pub fn target_set(
    g: &Graph,
    w0: &BaseWeighting,
    a: &Rational,
    v: usize,
) -> Result<Vec<Rational>, LevelError> {
    if !a.is_positive() {
        return Err(LevelError::NonPositiveSpan(a.clone()));
    }
    let sigma = weighted_degree(g, w0, v)?;
    Ok(progression(&sigma, a, g.degree(v)))
}

fn progression(sigma: &Rational, a: &Rational, degree: usize) -> Vec<Rational> {
    (0..=degree as u64 + 1)
        .map(|j| sigma + &a.times(j))
        .collect()
}

pub fn build_levels(
    g: &Graph,
    w0: &BaseWeighting,
    a: &Rational,
) -> Result<LevelDecomposition, LevelError> {
    build_levels_within(g, w0, a, None)
}

/// [`build_levels`] with an optional deadline for the independent-set searches.
pub fn build_levels_within(
    g: &Graph,
    w0: &BaseWeighting,
    a: &Rational,
    deadline: Option<Instant>,
) -> Result<LevelDecomposition, LevelError> {
    if !a.is_positive() {
        return Err(LevelError::NonPositiveSpan(a.clone()));
    }
    w0.check_shape(g)?;
    let n = g.n();
    let base_degree: Vec<Rational> = g
        .vertices()
        .map(|v| weighted_degree(g, w0, v))
        .collect::<Result<_, _>>()?;
    let sets: Vec<Vec<Rational>> = g
        .vertices()
        .map(|v| progression(&base_degree[v], a, g.degree(v)))
        .collect();

    let mut targets: Vec<Rational> = sets.iter().flatten().cloned().collect();
    targets.sort();
    targets.dedup();

    let reach: Vec<Vec<usize>> = sets
        .iter()
        .map(|s| {
            s.iter()
                .map(|x| targets.binary_search(x).expect("target collected above"))
                .collect()
        })
        .collect();
    let mut at_level: Vec<Vec<(usize, u64)>> = vec![Vec::new(); targets.len()];
    for v in g.vertices() {
        for (j, &lvl) in reach[v].iter().enumerate() {
            at_level[lvl].push((v, j as u64));
        }
    }

    let mut placed = vec![false; n];
    let mut level_of = vec![usize::MAX; n];
    let mut levels = Vec::with_capacity(targets.len());
    for (i, q) in targets.iter().enumerate() {
        let carrier: Vec<(usize, u64)> = at_level[i]
            .iter()
            .copied()
            .filter(|&(v, _)| !placed[v])
            .collect();
        let ids: Vec<usize> = carrier.iter().map(|&(v, _)| v).collect();
        let members = if carrier.is_empty() {
            Vec::new()
        } else {
            let sub = induced(g, &ids)?;
            let local = if i == 0 {
                // lowest level: every demand is 0, so take a maximum
                // cardinality set, which is dominating automatically
                let ones = vec![1u64; ids.len()];
                let base = mwis::mwis_exact_within(&sub.graph, &ones, deadline)?;
                mwis::extend_to_dominating(&sub.graph, &base)
            } else {
                let phi: Vec<u64> = carrier.iter().map(|&(_, j)| j).collect();
                mwis::phi_maximum_set_within(&sub.graph, &phi, deadline)?
            };
            local
                .into_iter()
                .map(|x| sub.to_parent[x])
                .collect::<Vec<_>>()
        };
        for &v in &members {
            placed[v] = true;
            level_of[v] = i;
        }
        levels.push(LevelRecord {
            q: q.clone(),
            members,
            carrier: ids,
            phi: carrier.into_iter().collect(),
        });
    }

    if let Some(v) = g.vertices().find(|&v| !placed[v]) {
        return Err(LevelError::Internal(format!("vertex {v} was never placed")));
    }
    let last = levels
        .iter()
        .rposition(|r| !r.members.is_empty())
        .unwrap_or(0);

    Ok(LevelDecomposition {
        span: a.clone(),
        targets,
        levels,
        last,
        level_of,
        base_degree,
        reach,
    })
}

/// Re-derives every structural property of `dec` from scratch.
pub fn validate_levels(
    g: &Graph,
    w0: &BaseWeighting,
    a: &Rational,
    dec: &LevelDecomposition,
) -> Report {
    let mut report = Report::new();
    let n = g.n();

    let mut bad = Vec::new();
    if !a.is_positive() || &dec.span != a {
        bad.push(format!("span {} (expected positive {a})", dec.span));
    }
    report.record("span", bad);

    let sigma: Vec<Rational> = match g
        .vertices()
        .map(|v| weighted_degree(g, w0, v))
        .collect::<Result<Vec<_>, _>>()
    {
        Ok(s) => s,
        Err(e) => {
            report.record("base weighting", vec![e.to_string()]);
            return report;
        }
    };

    let unsorted: Vec<String> = dec
        .targets
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] >= w[1])
        .map(|(i, w)| format!("q[{i}] = {} is not below q[{}] = {}", w[0], i + 1, w[1]))
        .collect();
    report.record("targets strictly increasing", unsorted);

    // targets equal the union of the progressions
    let mut union: Vec<Rational> = g
        .vertices()
        .flat_map(|v| progression(&sigma[v], a, g.degree(v)))
        .collect();
    union.sort();
    union.dedup();
    let mut listed = dec.targets.clone();
    listed.sort();
    listed.dedup();
    let mut bad = Vec::new();
    if listed != union || listed.len() != dec.targets.len() {
        bad.push(format!(
            "targets {:?} differ from the union of progressions {:?}",
            dec.targets, union
        ));
    }
    report.record("targets equal union of target sets", bad);
    if dec.levels.len() != dec.targets.len() {
        report.record(
            "one record per target",
            vec![format!(
                "{} records for {} targets",
                dec.levels.len(),
                dec.targets.len()
            )],
        );
        return report;
    }

    // exact demand: (q - σ0)/a as an integer in [0, d+1]
    let demand = |v: usize, q: &Rational| -> Option<u64> {
        let k = (q - &sigma[v]) / a.clone();
        k.to_i64()
            .filter(|&k| k >= 0 && k as usize <= g.degree(v) + 1)
            .map(|k| k as u64)
    };

    let mut owner: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, rec) in dec.levels.iter().enumerate() {
        for &v in &rec.members {
            if v < n {
                owner[v].push(i);
            }
        }
    }
    let mut bad = Vec::new();
    for (v, levels) in owner.iter().enumerate() {
        match levels.as_slice() {
            [i] => {
                if dec.level_of.get(v) != Some(i) {
                    bad.push(format!(
                        "vertex {v} sits in level {i} but level_of says {:?}",
                        dec.level_of.get(v)
                    ));
                }
            }
            [] => bad.push(format!("vertex {v} is in no level")),
            many => bad.push(format!("vertex {v} is in levels {many:?}")),
        }
    }
    for rec in &dec.levels {
        if let Some(&v) = rec.members.iter().find(|&&v| v >= n) {
            bad.push(format!("unknown vertex {v} in a level"));
        }
    }
    report.record("partition of V", bad);

    let mut bad = Vec::new();
    for (i, rec) in dec.levels.iter().enumerate() {
        for &(u, v) in g.edges() {
            if rec.members.contains(&u) && rec.members.contains(&v) {
                bad.push(format!("level {i}: edge {u}-{v} inside I"));
            }
        }
    }
    report.record("levels independent", bad);

    // carriers, demands, maximality
    let mut placed = vec![false; n];
    let mut bad_carrier = Vec::new();
    let mut bad_phi = Vec::new();
    let mut bad_max = Vec::new();
    let mut bad_lower = Vec::new();
    for (i, rec) in dec.levels.iter().enumerate() {
        let expected: Vec<usize> = (0..n)
            .filter(|&v| !placed[v] && demand(v, &rec.q).is_some())
            .collect();
        if rec.carrier != expected {
            bad_carrier.push(format!(
                "level {i}: carrier {:?}, expected {expected:?}",
                rec.carrier
            ));
        }
        if let Some(&v) = rec.members.iter().find(|v| !rec.carrier.contains(v)) {
            bad_carrier.push(format!("level {i}: member {v} outside the carrier"));
        }
        for &v in &expected {
            let want = demand(v, &rec.q).unwrap();
            match rec.phi.get(&v) {
                Some(&got) if got == want => {}
                got => bad_phi.push(format!(
                    "level {i}, vertex {v}: phi {got:?}, expected {want}"
                )),
            }
        }
        for (&v, _) in rec.phi.iter().filter(|(v, _)| !expected.contains(v)) {
            bad_phi.push(format!("level {i}: phi given for non-carrier vertex {v}"));
        }

        if !expected.is_empty() {
            if let Ok(sub) = induced(g, &expected) {
                let loc = sub.to_local();
                let local_members: Vec<usize> = rec
                    .members
                    .iter()
                    .filter_map(|v| loc.get(v).copied())
                    .collect();
                let phi: Vec<u64> = expected
                    .iter()
                    .map(|&v| demand(v, &rec.q).unwrap())
                    .collect();
                if !mwis::is_dominating(&sub.graph, &local_members) {
                    bad_max.push(format!("level {i}: I does not dominate G_i"));
                }
                let best = if sub.graph.n() <= mwis::BRUTE_FORCE_LIMIT {
                    mwis::mwis_bruteforce(&sub.graph, &phi).map(|r| r.0).ok()
                } else {
                    Some(mwis::phi_weight(&phi, &mwis::mwis_exact(&sub.graph, &phi)))
                };
                let have = mwis::phi_weight(&phi, &local_members);
                if best != Some(have) {
                    bad_max.push(format!("level {i}: I weighs {have}, optimum {best:?}"));
                }
            }
        }

        // every carrier vertex sees each of its lower levels
        for &v in &expected {
            let lower: Vec<usize> = (0..i)
                .filter(|&j| demand(v, &dec.levels[j].q).is_some())
                .collect();
            let want = demand(v, &rec.q).unwrap() as usize;
            if lower.len() != want {
                bad_lower.push(format!(
                    "level {i}, vertex {v}: {} lower levels in S_v but phi = {want}",
                    lower.len()
                ));
            }
            for j in lower {
                if !g
                    .neighbors(v)
                    .iter()
                    .any(|u| dec.levels[j].members.contains(u))
                {
                    bad_lower.push(format!(
                        "level {i}, vertex {v}: no neighbor in I at level {j}"
                    ));
                }
            }
        }
        for &v in &rec.members {
            if v < n {
                placed[v] = true;
            }
        }
    }
    report.record("carriers", bad_carrier);
    report.record("demands", bad_phi);
    report.record("levels phi-maximum", bad_max);
    report.record("lower-level neighbors", bad_lower);

    let mut bad = Vec::new();
    for i in 0..dec.levels.len().min(2) {
        for &v in &dec.levels[i].members {
            if dec.levels[i].phi.get(&v).copied().unwrap_or(0) >= 2 {
                bad.push(format!("level {i}: vertex {v} has demand >= 2"));
            }
        }
    }
    report.record("no demand above one in the first two levels", bad);

    let mut bad = Vec::new();
    let last = dec
        .levels
        .iter()
        .rposition(|r| !r.members.is_empty())
        .unwrap_or(0);
    if last != dec.last {
        bad.push(format!(
            "last nonempty level is {last}, recorded {}",
            dec.last
        ));
    }
    report.record("last level index", bad);

    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn complete(n: usize) -> Graph {
        let e: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Graph::new(n, &e).unwrap()
    }

    #[test]
    fn target_set_examples() {
        let p3 = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let w0 = BaseWeighting::zero(&p3);
        assert_eq!(
            target_set(&p3, &w0, &r(1), 1).unwrap(),
            vec![r(0), r(1), r(2), r(3)]
        );

        let k2 = complete(2);
        let mut w0 = BaseWeighting::zero(&k2);
        w0.vertex[0] = Rational::new(1, 2);
        assert_eq!(
            target_set(&k2, &w0, &Rational::new(1, 3), 0).unwrap(),
            vec![
                Rational::new(1, 2),
                Rational::new(5, 6),
                Rational::new(7, 6)
            ]
        );

        let iso = Graph::empty(1);
        let mut w0 = BaseWeighting::zero(&iso);
        w0.vertex[0] = Rational::new(-2, 3);
        assert_eq!(
            target_set(&iso, &w0, &r(4), 0).unwrap(),
            vec![Rational::new(-2, 3), Rational::new(10, 3)]
        );
        assert!(matches!(
            target_set(&iso, &w0, &r(0), 0),
            Err(LevelError::NonPositiveSpan(_))
        ));
    }

    #[test]
    fn k2_levels() {
        let g = complete(2);
        let w0 = BaseWeighting::zero(&g);
        let dec = build_levels(&g, &w0, &r(1)).unwrap();
        assert_eq!(dec.targets, vec![r(0), r(1), r(2)]);
        assert_eq!(dec.levels[0].members, vec![0]);
        assert_eq!(dec.levels[1].members, vec![1]);
        assert_eq!(dec.levels[1].phi[&1], 1);
        assert!(dec.levels[2].members.is_empty());
        assert_eq!(dec.last, 1);
        assert!(validate_levels(&g, &w0, &r(1), &dec).overall());
    }

    #[test]
    fn k3_levels() {
        let g = complete(3);
        let w0 = BaseWeighting::zero(&g);
        let dec = build_levels(&g, &w0, &r(1)).unwrap();
        assert_eq!(dec.targets, vec![r(0), r(1), r(2), r(3)]);
        let members: Vec<_> = dec.levels.iter().map(|l| l.members.clone()).collect();
        assert_eq!(members, vec![vec![0], vec![1], vec![2], vec![]]);
        assert_eq!(dec.levels[1].phi[&1], 1);
        assert_eq!(dec.levels[2].phi[&2], 2);
        assert_eq!(dec.last, 2);
        assert!(validate_levels(&g, &w0, &r(1), &dec).overall());
    }

    #[test]
    fn edgeless_levels() {
        let g = Graph::empty(2);
        let w0 = BaseWeighting::zero(&g);
        let dec = build_levels(&g, &w0, &r(1)).unwrap();
        assert_eq!(dec.targets, vec![r(0), r(1)]);
        assert_eq!(dec.levels[0].members, vec![0, 1]);
        assert_eq!(dec.last, 0);
        assert!(validate_levels(&g, &w0, &r(1), &dec).overall());
    }

    #[test]
    fn validator_catches_moved_vertex() {
        let g = complete(3);
        let w0 = BaseWeighting::zero(&g);
        let mut dec = build_levels(&g, &w0, &r(1)).unwrap();
        dec.levels[2].members.clear();
        dec.levels[1].members.push(2);
        dec.level_of[2] = 1;
        let rep = validate_levels(&g, &w0, &r(1), &dec);
        assert!(!rep.overall());
        assert!(!rep.check("levels independent").unwrap().passed);
    }

    #[test]
    fn validator_catches_unsorted_targets() {
        let g = complete(3);
        let w0 = BaseWeighting::zero(&g);
        let mut dec = build_levels(&g, &w0, &r(1)).unwrap();
        dec.targets.swap(0, 1);
        let rep = validate_levels(&g, &w0, &r(1), &dec);
        assert!(!rep.check("targets strictly increasing").unwrap().passed);
    }

    #[test]
    fn validator_catches_dropped_vertex() {
        let g = complete(3);
        let w0 = BaseWeighting::zero(&g);
        let mut dec = build_levels(&g, &w0, &r(1)).unwrap();
        dec.levels[2].members.clear();
        let rep = validate_levels(&g, &w0, &r(1), &dec);
        assert!(!rep.check("partition of V").unwrap().passed);
    }

    #[test]
    fn demand_lookup_covers_lower_vertices() {
        let g = complete(3);
        let w0 = BaseWeighting::zero(&g);
        let dec = build_levels(&g, &w0, &r(1)).unwrap();
        // vertex 2 lives at level 2 but q_1 is also in its progression
        assert_eq!(dec.demand(2, 1), Some(1));
        assert_eq!(dec.own_demand(2), 2);
        assert_eq!(dec.members_with_demand_at_least(2, 2), vec![2]);
    }

    #[test]
    fn serializes_targets_as_strings() {
        let g = complete(2);
        let dec = build_levels(&g, &BaseWeighting::zero(&g), &Rational::new(1, 2)).unwrap();
        let json = dec.to_json();
        assert_eq!(json["targets"][1], "1/2");
        assert_eq!(json["levels"][1]["members"][0], 1);
    }
}
