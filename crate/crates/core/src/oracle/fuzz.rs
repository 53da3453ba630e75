//! Seeded fuzz campaigns with shrinking.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::formats::weighting_to_json;
use crate::graph::{BaseWeighting, Graph, TotalWeighting};
use crate::rational::Rational;
use crate::verify::verify_offsets;
use crate::weighting::{replay_trace, solve_offsets};

use super::exhaustive::{exhaustive_offsets, oracle_accepts, EXHAUSTIVE_LIMIT};
use super::generate::{gen_random, pick};

/// A graph with base weights and a span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub base: BaseWeighting,
    pub span: Rational,
}

impl Instance {
    /// Edge-list text plus the base weighting in the weighting file format.
    pub fn to_json(&self) -> Value {
        json!({
            "edge_list": self.graph.to_edge_list(),
            "base": weighting_to_json(&self.graph, Some(&self.span), &self.base),
        })
    }

    pub fn without_edge(&self, e: usize) -> Instance {
        let mut edges = self.graph.edges().to_vec();
        edges.remove(e);
        let mut edge_w = self.base.edge.clone();
        edge_w.remove(e);
        Instance {
            graph: Graph::new(self.graph.n(), &edges).expect("subgraph of a valid graph"),
            base: TotalWeighting {
                vertex: self.base.vertex.clone(),
                edge: edge_w,
            },
            span: self.span.clone(),
        }
    }

    /// Deletes vertex `v` and its edges; higher ids shift down by one.
    pub fn without_vertex(&self, v: usize) -> Instance {
        let shift = |x: usize| if x > v { x - 1 } else { x };
        let mut kept: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
        for (i, &(a, b)) in self.graph.edges().iter().enumerate() {
            if a != v && b != v {
                kept.insert((shift(a), shift(b)), self.base.edge[i].clone());
            }
        }
        let edges: Vec<_> = kept.keys().copied().collect();
        let mut vertex_w = self.base.vertex.clone();
        vertex_w.remove(v);
        Instance {
            graph: Graph::new(self.graph.n() - 1, &edges).expect("subgraph of a valid graph"),
            base: TotalWeighting {
                vertex: vertex_w,
                edge: kept.into_values().collect(),
            },
            span: self.span.clone(),
        }
    }
}

/// Greedy shrinking: drop edges while the failure persists, then vertices,
/// repeating until nothing more can be removed.
pub fn shrink(inst: &Instance, fails: impl Fn(&Instance) -> bool) -> Instance {
    let mut cur = inst.clone();
    loop {
        let mut changed = false;
        let mut e = 0;
        while e < cur.graph.m() {
            let smaller = cur.without_edge(e);
            if fails(&smaller) {
                cur = smaller;
                changed = true;
            } else {
                e += 1;
            }
        }
        let mut v = 0;
        while v < cur.graph.n() {
            let smaller = cur.without_vertex(v);
            if fails(&smaller) {
                cur = smaller;
                changed = true;
            } else {
                v += 1;
            }
        }
        if !changed {
            return cur;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzConfig {
    pub count: usize,
    pub seed: u64,
    pub nmax: usize,
    pub pset: Vec<Rational>,
    pub spans: Vec<Rational>,
    pub base_pool: Vec<Rational>,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            count: 500,
            seed: 0,
            nmax: 6,
            pset: vec![
                Rational::new(1, 4),
                Rational::new(1, 2),
                Rational::new(3, 4),
            ],
            spans: vec![Rational::one(), Rational::new(1, 3), Rational::new(5, 2)],
            base_pool: vec![
                Rational::zero(),
                Rational::one(),
                Rational::new(1, 2),
                Rational::new(-2, 3),
            ],
        }
    }
}

impl FuzzConfig {
    /// Instance number `index` of the campaign; independent of every other
    /// index.
    pub fn instance(&self, index: usize) -> Instance {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        let n = rng.gen_range(1..=self.nmax.max(1));
        let p = pick(&mut rng, &self.pset).clone();
        let graph = gen_random(n, &p, rng.gen()).expect("probabilities validated");
        let mut draw = || pick(&mut rng, &self.base_pool).clone();
        let vertex = (0..graph.n()).map(|_| draw()).collect();
        let edge = (0..graph.m()).map(|_| draw()).collect();
        let span = pick(&mut rng, &self.spans).clone();
        Instance {
            graph,
            base: TotalWeighting { vertex, edge },
            span,
        }
    }

    fn validate(&self) -> Result<(), String> {
        if self.count > 0
            && (self.pset.is_empty() || self.spans.is_empty() || self.base_pool.is_empty())
        {
            return Err("empty parameter pool".into());
        }
        if self
            .pset
            .iter()
            .any(|p| *p < Rational::zero() || *p > Rational::one())
        {
            return Err("probability outside [0, 1]".into());
        }
        if self.spans.iter().any(|a| !a.is_positive()) {
            return Err("non-positive span".into());
        }
        Ok(())
    }
}

/// What one instance checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Checked {
    pub oracle: bool,
}

/// Solver, verifier, trace replay and, within the size limit, the
/// exhaustive oracle on one instance.
pub fn check_instance(inst: &Instance) -> Result<Checked, String> {
    let (g, w0, a) = (&inst.graph, &inst.base, &inst.span);
    let sol = solve_offsets(g, w0, a).map_err(|e| format!("solver: {e}"))?;
    let report = verify_offsets(g, w0, a, &sol.offsets.values(), &sol.levels);
    if let Some(c) = report.failures().next() {
        return Err(format!("verify: {} {:?}", c.name, c.witnesses));
    }
    let replayed = replay_trace(g, &sol.levels, &sol.trace).map_err(|e| format!("replay: {e}"))?;
    if replayed != sol.offsets {
        return Err("replay: trace does not reproduce the offsets".into());
    }
    if g.element_count() > EXHAUSTIVE_LIMIT {
        return Ok(Checked { oracle: false });
    }
    let ex = exhaustive_offsets(g, w0, a).map_err(|e| format!("oracle: {e}"))?;
    if !ex.feasible() {
        return Err("oracle: no proper assignment".into());
    }
    if !oracle_accepts(g, w0, a, &sol.offsets).map_err(|e| format!("oracle: {e}"))? {
        return Err("oracle: solver output is not proper".into());
    }
    Ok(Checked { oracle: true })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FuzzFailure {
    pub index: usize,
    pub reason: String,
    pub instance: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FuzzReport {
    pub seed: u64,
    pub count: usize,
    pub passed: usize,
    pub failed: usize,
    pub oracle_checked: usize,
    pub failures: Vec<FuzzFailure>,
    /// The first failure after shrinking.
    pub minimal: Option<Value>,
}

impl FuzzReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Runs `cfg.count` instances in parallel; the report is ordered by index.
pub fn fuzz_campaign(cfg: &FuzzConfig) -> Result<FuzzReport, String> {
    fuzz_campaign_with(cfg, check_instance)
}

/// [`fuzz_campaign`] with a custom per-instance check.
pub fn fuzz_campaign_with(
    cfg: &FuzzConfig,
    check: impl Fn(&Instance) -> Result<Checked, String> + Sync,
) -> Result<FuzzReport, String> {
    cfg.validate()?;
    let outcomes: Vec<(Instance, Result<Checked, String>)> = (0..cfg.count)
        .into_par_iter()
        .map(|i| {
            let inst = cfg.instance(i);
            let out = check(&inst);
            (inst, out)
        })
        .collect();
    let mut report = FuzzReport {
        seed: cfg.seed,
        count: cfg.count,
        passed: 0,
        failed: 0,
        oracle_checked: 0,
        failures: Vec::new(),
        minimal: None,
    };
    for (index, (inst, out)) in outcomes.into_iter().enumerate() {
        match out {
            Ok(c) => {
                report.passed += 1;
                report.oracle_checked += c.oracle as usize;
            }
            Err(reason) => {
                report.failed += 1;
                if report.minimal.is_none() {
                    let small = shrink(&inst, |x| check(x).is_err());
                    report.minimal = Some(small.to_json());
                }
                report.failures.push(FuzzFailure {
                    index,
                    reason,
                    instance: inst.to_json(),
                });
            }
        }
    }
    Ok(report)
}
