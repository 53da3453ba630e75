//! Exhaustive search over all `{0, a}` offset assignments.
//!
//! Values are scaled to integers by a common denominator, and assignments
//! are visited in Gray-code order so each step changes one element and at
//! most two weighted degrees.

use num_traits::ToPrimitive;

use crate::graph::{BaseWeighting, Graph};
use crate::rational::Rational;
use crate::weighting::OffsetWeighting;

use super::OracleError;

pub const EXHAUSTIVE_LIMIT: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exhaustive {
    /// Lexicographically first proper assignment, element 0 most significant
    /// and light before heavy.
    pub first: Option<OffsetWeighting>,
    /// Number of proper assignments.
    pub count: u64,
}

impl Exhaustive {
    pub fn feasible(&self) -> bool {
        self.count > 0
    }
}

struct Scaled {
    base_sigma: Vec<i128>,
    span: i128,
}

fn scale(g: &Graph, w0: &BaseWeighting, a: &Rational) -> Result<Scaled, OracleError> {
    w0.check_shape(g)?;
    if !a.is_positive() {
        return Err(OracleError::InvalidParams(format!(
            "span {a} is not positive"
        )));
    }
    let d = Rational::common_denominator(w0.values().chain(std::iter::once(a)));
    let bound = 1i128 << 90;
    let int = |r: &Rational| -> Result<i128, OracleError> {
        r.scaled(&d)
            .and_then(|x| x.to_i128())
            .filter(|x| x.abs() < bound)
            .ok_or_else(|| OracleError::InvalidParams(format!("value {r} too large to enumerate")))
    };
    let mut base_sigma = w0.vertex.iter().map(int).collect::<Result<Vec<_>, _>>()?;
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        let x = int(&w0.edge[i])?;
        base_sigma[u] += x;
        base_sigma[v] += x;
    }
    Ok(Scaled {
        base_sigma,
        span: int(a)?,
    })
}

/// Enumerates all `2^(|V|+|E|)` assignments.
pub fn exhaustive_offsets(
    g: &Graph,
    w0: &BaseWeighting,
    a: &Rational,
) -> Result<Exhaustive, OracleError> {
    let total = g.element_count();
    if total > EXHAUSTIVE_LIMIT {
        return Err(OracleError::TooLarge {
            elements: total,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let Scaled {
        mut base_sigma,
        span,
    } = scale(g, w0, a)?;
    let sigma = &mut base_sigma;
    let n = g.n();
    let edges = g.edges();
    // element i sits at bit total-1-i, so the mask compares lexicographically
    let ends: Vec<(usize, Option<usize>)> = (0..total)
        .map(|i| {
            if i < n {
                (i, None)
            } else {
                (edges[i - n].0, Some(edges[i - n].1))
            }
        })
        .collect();

    let clash = |sigma: &[i128], e: usize| sigma[edges[e].0] == sigma[edges[e].1];
    let mut clashes = (0..edges.len()).filter(|&e| clash(sigma, e)).count();
    let mut mask: u64 = 0;
    let mut count = 0u64;
    let mut best: Option<u64> = None;
    let mut note = |mask: u64, clashes: usize, count: &mut u64| {
        if clashes == 0 {
            *count += 1;
            if best.is_none_or(|b| mask < b) {
                best = Some(mask);
            }
        }
    };
    note(mask, clashes, &mut count);

    let mut touched: Vec<usize> = Vec::with_capacity(8);
    for step in 1u64..(1u64 << total) {
        let bit = step.trailing_zeros() as usize;
        let elem = total - 1 - bit;
        mask ^= 1 << bit;
        let delta = if mask & (1 << bit) != 0 { span } else { -span };
        let (u, v) = ends[elem];

        touched.clear();
        touched.extend_from_slice(g.incident_edges(u));
        if let Some(v) = v {
            touched.extend(g.incident_edges(v).iter().filter(|&&e| edges[e] != (u, v)));
        }
        for &e in &touched {
            clashes -= clash(sigma, e) as usize;
        }
        sigma[u] += delta;
        if let Some(v) = v {
            sigma[v] += delta;
        }
        for &e in &touched {
            clashes += clash(sigma, e) as usize;
        }
        note(mask, clashes, &mut count);
    }

    let first = best.map(|m| {
        let heavy = |i: usize| m >> (total - 1 - i) & 1 == 1;
        OffsetWeighting {
            span: a.clone(),
            vertex: (0..n).map(heavy).collect(),
            edge: (n..total).map(heavy).collect(),
        }
    });
    Ok(Exhaustive { first, count })
}

/// Membership in the oracle's feasible set: whether `w0 + off` is proper,
/// computed with the oracle's integer arithmetic.
pub fn oracle_accepts(
    g: &Graph,
    w0: &BaseWeighting,
    a: &Rational,
    off: &OffsetWeighting,
) -> Result<bool, OracleError> {
    if off.vertex.len() != g.n() || off.edge.len() != g.m() {
        return Err(OracleError::InvalidParams(
            "offsets do not match the graph".into(),
        ));
    }
    let Scaled {
        mut base_sigma,
        span,
    } = scale(g, w0, a)?;
    for v in g.vertices() {
        if off.vertex[v] {
            base_sigma[v] += span;
        }
    }
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        if off.edge[i] {
            base_sigma[u] += span;
            base_sigma[v] += span;
        }
    }
    Ok(g.edges()
        .iter()
        .all(|&(u, v)| base_sigma[u] != base_sigma[v]))
}
