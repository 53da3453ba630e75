//! Independent checkers for solver output.
//!
//! Weighted degrees are recomputed here from the raw edge list rather than
//! taken from the solver's running sums.

use crate::graph::{Element, Graph, GraphError, TotalWeighting};
use crate::levels::LevelDecomposition;
use crate::rational::Rational;
use crate::report::Report;
use crate::weighting::ListAssignment;

fn degrees(g: &Graph, w: &TotalWeighting) -> Vec<Rational> {
    let mut sigma = w.vertex.clone();
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        sigma[u] += &w.edge[i];
        sigma[v] += &w.edge[i];
    }
    sigma
}

/// Adjacent vertices must have different weighted degrees.
pub fn verify_proper(g: &Graph, w: &TotalWeighting) -> Result<Report, GraphError> {
    w.check_shape(g)?;
    let sigma = degrees(g, w);
    let clashes = g
        .edges()
        .iter()
        .filter(|&&(u, v)| sigma[u] == sigma[v])
        .map(|&(u, v)| format!("edge {u}-{v}: sigma({u}) = {} = sigma({v})", sigma[u]))
        .collect();
    let mut report = Report::new();
    report.record("proper", clashes);
    Ok(report)
}

/// Checks offsets against the decomposition: every offset is `0` or `a`,
/// every vertex lands on its level target, and `w0 + off` is proper.
pub fn verify_offsets(
    g: &Graph,
    w0: &TotalWeighting,
    a: &Rational,
    off: &TotalWeighting,
    dec: &LevelDecomposition,
) -> Report {
    let mut report = Report::new();
    if let Err(e) = w0.check_shape(g).and_then(|_| off.check_shape(g)) {
        report.record("shape", vec![e.to_string()]);
        return report;
    }
    let zero = Rational::zero();
    let out_of_range = g
        .elements()
        .zip(off.values())
        .filter(|(_, x)| **x != zero && *x != a)
        .map(|(z, x)| format!("element {z}: offset {x} not in {{0, {a}}}"))
        .collect();
    report.record("offset range", out_of_range);

    let total = TotalWeighting {
        vertex: w0
            .vertex
            .iter()
            .zip(&off.vertex)
            .map(|(x, y)| x + y)
            .collect(),
        edge: w0.edge.iter().zip(&off.edge).map(|(x, y)| x + y).collect(),
    };
    let sigma = degrees(g, &total);
    let mut missed = Vec::new();
    for v in g.vertices() {
        match dec.level_of.get(v).and_then(|&l| dec.targets.get(l)) {
            Some(q) if *q == sigma[v] => {}
            Some(q) => missed.push(format!("vertex {v}: sigma {} but target {q}", sigma[v])),
            None => missed.push(format!("vertex {v}: no level")),
        }
    }
    report.record("targets reached", missed);

    match verify_proper(g, &total) {
        Ok(r) => report.merge(r),
        Err(e) => report.record("proper", vec![e.to_string()]),
    }
    report
}

/// Every element's weight is one of its two list values.
pub fn verify_list_membership(
    g: &Graph,
    lists: &ListAssignment,
    w: &TotalWeighting,
) -> Result<Report, GraphError> {
    w.check_shape(g)?;
    if lists.vertex.len() != g.n() {
        return Err(GraphError::UndefinedWeight(Element::Vertex(
            lists.vertex.len().min(g.n()),
        )));
    }
    if lists.edge.len() != g.m() {
        let (u, v) = g.edge(lists.edge.len().min(g.m().saturating_sub(1)));
        return Err(GraphError::UndefinedWeight(Element::Edge(u, v)));
    }
    let outside = g
        .elements()
        .zip(w.values())
        .zip(lists.vertex.iter().chain(&lists.edge))
        .filter(|((_, x), (lo, hi))| *x != lo && *x != hi)
        .map(|((z, x), (lo, hi))| format!("element {z}: {x} not in {{{lo}, {hi}}}"))
        .collect();
    let mut report = Report::new();
    report.record("list membership", outside);
    Ok(report)
}
