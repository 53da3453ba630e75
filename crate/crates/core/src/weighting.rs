//! The level-by-level `{0, a}` correction.
//!
//! Starting from a base weighting `w0` and a span `a > 0`, the solver finds
//! offsets `w(z) ∈ {0, a}` such that every vertex `v` ends exactly at the
//! target of its level, `σ_{w0+w}(v) = q_{level(v)}`. Adjacent vertices never
//! share a level, so `w0 + w` is proper.
//!
//! Levels are processed from `last − 1` down to `0`. At level `i` the
//! vertices placed above `i` whose target progression contains `q_i` are
//! topped up: first greedily along the light edges among them, then on the
//! vertices themselves; those still short of their target are then served
//! through a star covering into `I_i` (see [`crate::wellgraph`]), after which
//! the members of `I_i` take their own vertex weight if needed.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{BaseWeighting, Element, Graph, GraphError, TotalWeighting};
use crate::levels::{build_levels_within, LevelDecomposition, LevelError};
use crate::rational::Rational;
use crate::verify;
use crate::wellgraph::{check_preconditions, find_well_subgraph, WellInstance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Levels(#[from] LevelError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("internal invariant violated: {message}")]
    InternalInvariantViolation {
        message: String,
        trace: Box<RunTrace>,
    },
    #[error("lists of {first} and {second} have different spans ({first_span} vs {second_span})")]
    NonUniformSpan {
        first: Element,
        second: Element,
        first_span: Box<Rational>,
        second_span: Box<Rational>,
    },
    #[error("list of {0} has two equal values")]
    DegenerateList(Element),
    #[error("no list given for {0}")]
    MissingList(Element),
    #[error("list given for {0}, which is not in the graph")]
    ForeignList(Element),
}

/// Light/heavy flags for every element; heavy elements carry the span.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OffsetWeighting {
    pub span: Rational,
    pub vertex: Vec<bool>,
    pub edge: Vec<bool>,
}

impl OffsetWeighting {
    pub fn light(g: &Graph, span: &Rational) -> Self {
        OffsetWeighting {
            span: span.clone(),
            vertex: vec![false; g.n()],
            edge: vec![false; g.m()],
        }
    }

    pub fn is_heavy(&self, g: &Graph, z: Element) -> bool {
        match z {
            Element::Vertex(v) => self.vertex[v],
            Element::Edge(u, v) => g.edge_index(u, v).is_some_and(|e| self.edge[e]),
        }
    }

    /// Heavy elements in the closed star of `v`.
    pub fn heavy_around(&self, g: &Graph, v: usize) -> u64 {
        self.vertex[v] as u64
            + g.incident_edges(v)
                .iter()
                .filter(|&&e| self.edge[e])
                .count() as u64
    }

    /// The offsets as values `0` or `a`.
    pub fn values(&self) -> TotalWeighting {
        let pick = |h: &bool| {
            if *h {
                self.span.clone()
            } else {
                Rational::zero()
            }
        };
        TotalWeighting {
            vertex: self.vertex.iter().map(pick).collect(),
            edge: self.edge.iter().map(pick).collect(),
        }
    }

    /// `w0 + w`.
    pub fn apply(&self, w0: &BaseWeighting) -> TotalWeighting {
        let add = |base: &Rational, h: &bool| {
            if *h {
                base + &self.span
            } else {
                base.clone()
            }
        };
        TotalWeighting {
            vertex: w0
                .vertex
                .iter()
                .zip(&self.vertex)
                .map(|(b, h)| add(b, h))
                .collect(),
            edge: w0
                .edge
                .iter()
                .zip(&self.edge)
                .map(|(b, h)| add(b, h))
                .collect(),
        }
    }

    /// Compact light/heavy pattern, `0`/`1` per element in element order.
    pub fn pattern(&self) -> String {
        self.vertex
            .iter()
            .chain(&self.edge)
            .map(|&h| if h { '1' } else { '0' })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VertexStatus {
    Hungry,
    Full,
    /// Above target; never observable in a correct run.
    Overfull,
}

impl VertexStatus {
    pub fn is_good(self) -> bool {
        self != VertexStatus::Overfull
    }
}

impl fmt::Display for VertexStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VertexStatus::Hungry => "hungry",
            VertexStatus::Full => "full",
            VertexStatus::Overfull => "overfull",
        })
    }
}

/// A partially built correction with the running weighted degrees.
#[derive(Debug, Clone)]
pub struct RunState<'a> {
    pub graph: &'a Graph,
    pub levels: &'a LevelDecomposition,
    pub offsets: OffsetWeighting,
    pub sigma: Vec<Rational>,
}

impl<'a> RunState<'a> {
    /// All-light state.
    pub fn new(graph: &'a Graph, levels: &'a LevelDecomposition) -> Self {
        RunState {
            graph,
            levels,
            offsets: OffsetWeighting::light(graph, &levels.span),
            sigma: levels.base_degree.clone(),
        }
    }

    fn status(&self, v: usize) -> VertexStatus {
        vertex_status(self, v)
    }

    fn hungry(&self, v: usize) -> bool {
        self.status(v) == VertexStatus::Hungry
    }

    /// Sets an element heavy. Returns `false` if it already was.
    fn make_heavy(&mut self, z: Element) -> bool {
        let a = &self.levels.span;
        match z {
            Element::Vertex(v) => {
                if self.offsets.vertex[v] {
                    return false;
                }
                self.offsets.vertex[v] = true;
                self.sigma[v] += a;
            }
            Element::Edge(u, v) => {
                let e = self.graph.edge_index(u, v).expect("edge of the graph");
                if self.offsets.edge[e] {
                    return false;
                }
                self.offsets.edge[e] = true;
                self.sigma[u] += a;
                self.sigma[v] += a;
            }
        }
        true
    }

    fn first_overfull(&self, z: Element) -> Option<usize> {
        let ends = match z {
            Element::Vertex(v) => vec![v],
            Element::Edge(u, v) => vec![u, v],
        };
        ends.into_iter().find(|&v| !self.status(v).is_good())
    }
}

/// Hungry, full or overfull, by exact comparison with the level target.
pub fn vertex_status(state: &RunState<'_>, v: usize) -> VertexStatus {
    match state.sigma[v].cmp(state.levels.target_of(v)) {
        std::cmp::Ordering::Less => VertexStatus::Hungry,
        std::cmp::Ordering::Equal => VertexStatus::Full,
        std::cmp::Ordering::Greater => VertexStatus::Overfull,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDecision {
    pub edge: (usize, usize),
    pub weighted: bool,
}

/// Everything one level iteration did, in execution order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub level: usize,
    /// Light edges among the upper vertices, in the order considered.
    pub greedy: Vec<EdgeDecision>,
    /// Upper vertices whose own weight was set heavy.
    pub topped_up: Vec<usize>,
    /// Vertices still hungry after the greedy pass, in covering order.
    pub unfilled: Vec<usize>,
    /// Star-covering edges `(x, u)` set heavy, `x` in this level.
    pub star: Vec<(usize, usize)>,
    /// Members of this level whose own weight was set heavy.
    pub level_vertices: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunTrace {
    pub iterations: Vec<IterationRecord>,
}

impl RunTrace {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("trace serializes")
    }
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub offsets: OffsetWeighting,
    pub levels: LevelDecomposition,
    pub trace: RunTrace,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolveOptions {
    /// Abort the independent-set searches after this instant.
    pub deadline: Option<Instant>,
}

pub fn solve_offsets(g: &Graph, w0: &BaseWeighting, a: &Rational) -> Result<Solution, SolveError> {
    solve_offsets_with(g, w0, a, SolveOptions::default())
}

pub fn solve_offsets_with(
    g: &Graph,
    w0: &BaseWeighting,
    a: &Rational,
    opts: SolveOptions,
) -> Result<Solution, SolveError> {
    let levels = build_levels_within(g, w0, a, opts.deadline)?;
    let mut trace = RunTrace::default();
    let offsets = {
        let mut state = RunState::new(g, &levels);
        if let Err(message) = run(&mut state, &mut trace) {
            return Err(SolveError::InternalInvariantViolation {
                message,
                trace: Box::new(trace),
            });
        }
        state.offsets
    };

    let report = verify::verify_offsets(g, w0, a, &offsets.values(), &levels);
    if !report.overall() {
        return Err(SolveError::InternalInvariantViolation {
            message: format!("final verification failed:\n{report}"),
            trace: Box::new(trace),
        });
    }
    Ok(Solution {
        offsets,
        levels,
        trace,
    })
}

fn run(state: &mut RunState<'_>, trace: &mut RunTrace) -> Result<(), String> {
    let g = state.graph;
    let dec = state.levels;

    for i in (0..dec.last).rev() {
        check_entry_conditions(state, i)?;
        let mut rec = IterationRecord {
            level: i,
            ..Default::default()
        };
        let upper: Vec<usize> = g
            .vertices()
            .filter(|&v| dec.level_of[v] > i && dec.demand(v, i).is_some())
            .collect();
        let mut in_upper = vec![false; g.n()];
        for &v in &upper {
            in_upper[v] = true;
        }

        // greedy pass over light edges among the upper vertices
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            if !(in_upper[u] && in_upper[v]) || state.offsets.edge[e] {
                continue;
            }
            let weighted = state.hungry(u) && state.hungry(v);
            if weighted {
                state.make_heavy(Element::Edge(u, v));
                if let Some(bad) = state.first_overfull(Element::Edge(u, v)) {
                    trace.iterations.push(rec);
                    return Err(format!("vertex {bad} overshot its target at edge {u}-{v}"));
                }
            }
            rec.greedy.push(EdgeDecision {
                edge: (u, v),
                weighted,
            });
        }
        for &v in &upper {
            if state.hungry(v) && state.make_heavy(Element::Vertex(v)) {
                rec.topped_up.push(v);
            }
        }

        let mut unfilled: Vec<usize> = upper.iter().copied().filter(|&v| state.hungry(v)).collect();
        unfilled.sort_by_key(|&v| (dec.level_of[v], v));
        rec.unfilled = unfilled.clone();

        if !unfilled.is_empty() {
            let iside = dec.members_with_demand_at_least(i, 1);
            let inst = WellInstance::from_graph(g, &iside, &unfilled, |v| {
                dec.demand(v, i)
                    .expect("both sides lie in this level's vertex set")
            })
            .map_err(|e| e.to_string())?;
            let pre = check_preconditions(&inst);
            if !pre.overall() {
                trace.iterations.push(rec);
                return Err(format!(
                    "star-covering preconditions fail at level {i}:\n{pre}"
                ));
            }
            let forest = match find_well_subgraph(&inst) {
                Ok(f) => f,
                Err(e) => {
                    trace.iterations.push(rec);
                    return Err(format!("level {i}: {e}"));
                }
            };
            for &(x, u) in &forest.edges {
                if !state.make_heavy(Element::edge(x, u)) {
                    trace.iterations.push(rec);
                    return Err(format!("covering edge {x}-{u} was already heavy"));
                }
                rec.star.push((x, u));
                if let Some(bad) = state.first_overfull(Element::edge(x, u)) {
                    trace.iterations.push(rec);
                    return Err(format!("vertex {bad} overshot its target at edge {x}-{u}"));
                }
            }
        }

        for &v in &dec.levels[i].members {
            if state.hungry(v) && state.make_heavy(Element::Vertex(v)) {
                rec.level_vertices.push(v);
                if state.first_overfull(Element::Vertex(v)).is_some() {
                    trace.iterations.push(rec);
                    return Err(format!("vertex {v} overshot its target"));
                }
            }
        }
        trace.iterations.push(rec);
    }

    let hungry: Vec<String> = g
        .vertices()
        .filter(|&v| state.status(v) != VertexStatus::Full)
        .map(|v| format!("{v} ({})", state.status(v)))
        .collect();
    if !hungry.is_empty() {
        return Err(format!(
            "vertices not full at termination: {}",
            hungry.join(", ")
        ));
    }
    Ok(())
}

/// The three invariants that hold on entry to iteration `i`: every vertex
/// good; everything around vertices below level `i` light; and every upper
/// vertex of `V_i` either full or joined by a heavy edge to each
/// intermediate level in its progression.
fn check_entry_conditions(state: &RunState<'_>, i: usize) -> Result<(), String> {
    let g = state.graph;
    let dec = state.levels;
    if let Some(v) = g.vertices().find(|&v| !state.status(v).is_good()) {
        return Err(format!("entering level {i}: vertex {v} is over its target"));
    }
    for v in g.vertices().filter(|&v| dec.level_of[v] < i) {
        if state.offsets.heavy_around(g, v) != 0 {
            return Err(format!(
                "entering level {i}: heavy element around lower vertex {v}"
            ));
        }
    }
    for v in g.vertices() {
        let t = dec.level_of[v];
        if t < i + 2 || dec.demand(v, i).is_none() || state.status(v) == VertexStatus::Full {
            continue;
        }
        for r in i + 1..t {
            if dec.demand(v, r).is_none() {
                continue;
            }
            let linked = g
                .neighbors(v)
                .iter()
                .zip(g.incident_edges(v))
                .any(|(&u, &e)| dec.level_of[u] == r && state.offsets.edge[e]);
            if !linked {
                return Err(format!(
                    "entering level {i}: hungry vertex {v} (level {t}) has no heavy edge into level {r}"
                ));
            }
        }
    }
    Ok(())
}

/// A violation found while replaying a trace.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("replay step {step} ({element}): {message}")]
pub struct ReplayViolation {
    pub step: usize,
    pub element: Element,
    pub message: String,
}

/// Re-applies a trace from the all-light state, checking after every
/// elementary assignment that the element was light before (monotone
/// writes) and that no vertex exceeds its target. Greedy decisions are also
/// re-derived: an edge is weighted exactly when both ends were hungry.
pub fn replay_trace(
    g: &Graph,
    dec: &LevelDecomposition,
    trace: &RunTrace,
) -> Result<OffsetWeighting, ReplayViolation> {
    let mut off = OffsetWeighting::light(g, &dec.span);
    let mut heavy_count = vec![0u64; g.n()];
    let mut step = 0usize;
    let demand: Vec<u64> = g.vertices().map(|v| dec.own_demand(v)).collect();

    let assign =
        |off: &mut OffsetWeighting, heavy_count: &mut Vec<u64>, z: Element, step: usize| {
            let fail = |message: String| ReplayViolation {
                step,
                element: z,
                message,
            };
            let ends = match z {
                Element::Vertex(v) => {
                    if v >= g.n() || off.vertex[v] {
                        return Err(fail("element not light before assignment".into()));
                    }
                    off.vertex[v] = true;
                    vec![v]
                }
                Element::Edge(u, v) => {
                    let e = g
                        .edge_index(u, v)
                        .ok_or_else(|| fail("edge not in graph".into()))?;
                    if off.edge[e] {
                        return Err(fail("element not light before assignment".into()));
                    }
                    off.edge[e] = true;
                    vec![u, v]
                }
            };
            for v in ends {
                heavy_count[v] += 1;
            }
            // goodness, over all vertices
            if let Some(v) = g.vertices().find(|&v| heavy_count[v] > demand[v]) {
                return Err(fail(format!("vertex {v} exceeds its target")));
            }
            Ok(())
        };

    for rec in &trace.iterations {
        for d in &rec.greedy {
            let (u, v) = d.edge;
            let both_hungry = heavy_count[u] < demand[u] && heavy_count[v] < demand[v];
            if both_hungry != d.weighted {
                return Err(ReplayViolation {
                    step,
                    element: Element::edge(u, v),
                    message: format!(
                        "greedy decision {} disagrees with the hunger of its ends",
                        d.weighted
                    ),
                });
            }
            if d.weighted {
                assign(&mut off, &mut heavy_count, Element::edge(u, v), step)?;
                step += 1;
            }
        }
        let rest = rec
            .topped_up
            .iter()
            .map(|&v| Element::Vertex(v))
            .chain(rec.star.iter().map(|&(x, u)| Element::edge(x, u)))
            .chain(rec.level_vertices.iter().map(|&v| Element::Vertex(v)));
        for z in rest {
            assign(&mut off, &mut heavy_count, z, step)?;
            step += 1;
        }
    }
    Ok(off)
}

/// Two-element lists for every element; `(low, high)` after normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListAssignment {
    pub vertex: Vec<(Rational, Rational)>,
    pub edge: Vec<(Rational, Rational)>,
}

impl ListAssignment {
    /// The same list on every element.
    pub fn uniform(g: &Graph, x: &Rational, y: &Rational) -> Self {
        let pair = (x.clone().min(y.clone()), x.clone().max(y.clone()));
        ListAssignment {
            vertex: vec![pair.clone(); g.n()],
            edge: vec![pair; g.m()],
        }
    }

    /// From an element-keyed map of unordered pairs.
    pub fn from_elements(
        g: &Graph,
        map: &BTreeMap<Element, (Rational, Rational)>,
    ) -> Result<Self, SolveError> {
        if let Some(z) = map.keys().find(|z| !g.contains_element(**z)) {
            return Err(SolveError::ForeignList(*z));
        }
        let get = |z: Element| {
            map.get(&z)
                .map(|(x, y)| (x.clone().min(y.clone()), x.clone().max(y.clone())))
                .ok_or(SolveError::MissingList(z))
        };
        Ok(ListAssignment {
            vertex: g
                .vertices()
                .map(|v| get(Element::Vertex(v)))
                .collect::<Result<_, _>>()?,
            edge: g
                .edges()
                .iter()
                .map(|&(u, v)| get(Element::Edge(u, v)))
                .collect::<Result<_, _>>()?,
        })
    }

    pub fn get(&self, g: &Graph, z: Element) -> Option<&(Rational, Rational)> {
        match z {
            Element::Vertex(v) => self.vertex.get(v),
            Element::Edge(u, v) => g.edge_index(u, v).and_then(|e| self.edge.get(e)),
        }
    }

    /// The common span, or the first pair of elements that disagree.
    pub fn common_span(&self, g: &Graph) -> Result<Option<Rational>, SolveError> {
        if self.vertex.len() != g.n() || self.edge.len() != g.m() {
            let z = if self.vertex.len() < g.n() {
                Element::Vertex(self.vertex.len())
            } else {
                let (u, v) = g.edge(self.edge.len().min(g.m().saturating_sub(1)));
                Element::Edge(u, v)
            };
            return Err(SolveError::MissingList(z));
        }
        let mut first: Option<(Element, Rational)> = None;
        for (z, (lo, hi)) in g.elements().zip(self.vertex.iter().chain(&self.edge)) {
            let span = hi - lo;
            if span.is_zero() {
                return Err(SolveError::DegenerateList(z));
            }
            match &first {
                None => first = Some((z, span)),
                Some((z0, s0)) if *s0 != span => {
                    return Err(SolveError::NonUniformSpan {
                        first: *z0,
                        second: z,
                        first_span: Box::new(s0.clone()),
                        second_span: Box::new(span),
                    })
                }
                _ => {}
            }
        }
        Ok(first.map(|(_, s)| s))
    }

    pub fn lows(&self) -> BaseWeighting {
        TotalWeighting {
            vertex: self.vertex.iter().map(|p| p.0.clone()).collect(),
            edge: self.edge.iter().map(|p| p.0.clone()).collect(),
        }
    }
}

/// A proper total weighting choosing from every list, for lists that all
/// share one span.
pub fn solve_lists(g: &Graph, lists: &ListAssignment) -> Result<TotalWeighting, SolveError> {
    solve_lists_with(g, lists, SolveOptions::default()).map(|(w, _)| w)
}

/// [`solve_lists`], also returning the underlying offset solution (absent
/// for the empty graph).
pub fn solve_lists_with(
    g: &Graph,
    lists: &ListAssignment,
    opts: SolveOptions,
) -> Result<(TotalWeighting, Option<Solution>), SolveError> {
    let Some(span) = lists.common_span(g)? else {
        return Ok((TotalWeighting::zero(g), None));
    };
    let base = lists.lows();
    let sol = solve_offsets_with(g, &base, &span, opts)?;
    Ok((sol.offsets.apply(&base), Some(sol)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::weighted_degree;
    use crate::levels::build_levels;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn complete(n: usize) -> Graph {
        let e: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Graph::new(n, &e).unwrap()
    }

    fn sigmas(g: &Graph, w: &TotalWeighting) -> Vec<Rational> {
        g.vertices()
            .map(|v| weighted_degree(g, w, v).unwrap())
            .collect()
    }

    #[test]
    fn k2_offsets() {
        let g = complete(2);
        let w0 = BaseWeighting::zero(&g);
        let sol = solve_offsets(&g, &w0, &r(1)).unwrap();
        assert_eq!(sol.offsets.vertex, vec![false, true]);
        assert_eq!(sol.offsets.edge, vec![false]);
        assert_eq!(sigmas(&g, &sol.offsets.apply(&w0)), vec![r(0), r(1)]);
    }

    #[test]
    fn k3_offsets() {
        let g = complete(3);
        let w0 = BaseWeighting::zero(&g);
        let sol = solve_offsets(&g, &w0, &r(1)).unwrap();
        assert_eq!(sol.offsets.vertex, vec![false, false, true]);
        // edges: 0-1, 0-2, 1-2
        assert_eq!(sol.offsets.edge, vec![false, false, true]);
        assert_eq!(sigmas(&g, &sol.offsets.apply(&w0)), vec![r(0), r(1), r(2)]);
        let level2 = &sol.trace.iterations[0];
        assert_eq!(level2.level, 1);
        assert_eq!(level2.topped_up, vec![2]);
        assert_eq!(level2.unfilled, vec![2]);
        assert_eq!(level2.star, vec![(1, 2)]);
    }

    #[test]
    fn edgeless_stays_light() {
        let g = Graph::empty(3);
        let mut w0 = BaseWeighting::zero(&g);
        w0.vertex = vec![r(4), Rational::new(-1, 2), r(4)];
        let sol = solve_offsets(&g, &w0, &Rational::new(7, 3)).unwrap();
        assert_eq!(sol.offsets.pattern(), "000");
        assert!(sol
            .trace
            .iterations
            .iter()
            .all(|it| it.greedy.is_empty() && it.star.is_empty() && it.topped_up.is_empty()));
    }

    #[test]
    fn rejects_non_positive_span() {
        let g = complete(2);
        let w0 = BaseWeighting::zero(&g);
        assert!(matches!(
            solve_offsets(&g, &w0, &r(-1)),
            Err(SolveError::Levels(LevelError::NonPositiveSpan(_)))
        ));
    }

    #[test]
    fn status_of_fresh_state() {
        let g = complete(3);
        let w0 = BaseWeighting::zero(&g);
        let dec = build_levels(&g, &w0, &r(1)).unwrap();
        let mut st = RunState::new(&g, &dec);
        assert_eq!(vertex_status(&st, 0), VertexStatus::Full);
        assert_eq!(vertex_status(&st, 2), VertexStatus::Hungry);
        st.make_heavy(Element::Vertex(2));
        // one unit short of q = 2
        assert_eq!(vertex_status(&st, 2), VertexStatus::Hungry);
        st.make_heavy(Element::Edge(1, 2));
        assert_eq!(vertex_status(&st, 2), VertexStatus::Full);
        st.make_heavy(Element::Edge(0, 2));
        assert_eq!(vertex_status(&st, 2), VertexStatus::Overfull);
        assert!(!st.make_heavy(Element::Vertex(2)));
    }

    #[test]
    fn trace_replays_to_the_same_offsets() {
        let g = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 2)]).unwrap();
        let w0 = BaseWeighting::zero(&g);
        let sol = solve_offsets(&g, &w0, &r(1)).unwrap();
        assert_eq!(
            replay_trace(&g, &sol.levels, &sol.trace).unwrap(),
            sol.offsets
        );
    }

    #[test]
    fn replay_flags_double_write() {
        let g = complete(3);
        let w0 = BaseWeighting::zero(&g);
        let sol = solve_offsets(&g, &w0, &r(1)).unwrap();
        let mut trace = sol.trace.clone();
        trace.iterations[0].level_vertices.push(2);
        let err = replay_trace(&g, &sol.levels, &trace).unwrap_err();
        assert!(err.message.contains("not light"));
    }

    #[test]
    fn replay_flags_overshoot() {
        let g = complete(3);
        let w0 = BaseWeighting::zero(&g);
        let sol = solve_offsets(&g, &w0, &r(1)).unwrap();
        let mut trace = sol.trace.clone();
        trace.iterations[0].star.push((0, 2));
        let err = replay_trace(&g, &sol.levels, &trace).unwrap_err();
        assert!(err.message.contains("exceeds"), "{err}");
    }

    #[test]
    fn lists_k2_one_two() {
        let g = complete(2);
        let lists = ListAssignment::uniform(&g, &r(1), &r(2));
        let w = solve_lists(&g, &lists).unwrap();
        for x in w.values() {
            assert!(*x == r(1) || *x == r(2));
        }
        let s = sigmas(&g, &w);
        assert_ne!(s[0], s[1]);
    }

    #[test]
    fn lists_single_vertex_takes_low() {
        let g = Graph::empty(1);
        let lists = ListAssignment::uniform(&g, &r(7), &r(3));
        assert_eq!(solve_lists(&g, &lists).unwrap().vertex, vec![r(3)]);
    }

    #[test]
    fn lists_errors() {
        let g = complete(2);
        let mut map = BTreeMap::new();
        map.insert(Element::Vertex(0), (r(0), r(1)));
        map.insert(Element::Vertex(1), (r(0), r(2)));
        map.insert(Element::Edge(0, 1), (r(0), r(1)));
        let lists = ListAssignment::from_elements(&g, &map).unwrap();
        assert!(matches!(
            solve_lists(&g, &lists),
            Err(SolveError::NonUniformSpan {
                first: Element::Vertex(0),
                second: Element::Vertex(1),
                ..
            })
        ));

        map.insert(Element::Vertex(1), (r(5), r(5)));
        let lists = ListAssignment::from_elements(&g, &map).unwrap();
        assert_eq!(
            solve_lists(&g, &lists),
            Err(SolveError::DegenerateList(Element::Vertex(1)))
        );

        map.remove(&Element::Edge(0, 1));
        assert_eq!(
            ListAssignment::from_elements(&g, &map),
            Err(SolveError::MissingList(Element::Edge(0, 1)))
        );
    }
}
