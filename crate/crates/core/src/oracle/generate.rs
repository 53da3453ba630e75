//! Graph families and seeded random graphs.
//!
//! Numbering per family:
//! - `path n`: `i – i+1`
//! - `cycle n`: `i – i+1 mod n`, `n ≥ 3`
//! - `complete n`: all pairs
//! - `complete_bipartite p q`: sides `0..p` and `p..p+q`
//! - `star k`: center `0`, leaves `1..=k`
//! - `petersen`: outer cycle `0..5`, spokes `i – i+5`, inner pentagram `i+5 – (i+2 mod 5)+5`
//! - `hypercube d`: `0..2^d`, edges between labels differing in one bit

use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;
use crate::rational::Rational;

use super::OracleError;

pub const NAMED_FAMILIES: [&str; 7] = [
    "path",
    "cycle",
    "complete",
    "complete_bipartite",
    "star",
    "petersen",
    "hypercube",
];

fn arity(name: &str, params: &[usize], want: usize) -> Result<(), OracleError> {
    if params.len() != want {
        return Err(OracleError::InvalidParams(format!(
            "{name} takes {want} parameter(s), got {}",
            params.len()
        )));
    }
    Ok(())
}

pub fn gen_named(name: &str, params: &[usize]) -> Result<Graph, OracleError> {
    let mut edges = Vec::new();
    let n = match name {
        "path" => {
            arity(name, params, 1)?;
            let n = params[0];
            edges.extend((1..n).map(|i| (i - 1, i)));
            n
        }
        "cycle" => {
            arity(name, params, 1)?;
            let n = params[0];
            if n < 3 {
                return Err(OracleError::InvalidParams(format!(
                    "cycle needs n >= 3, got {n}"
                )));
            }
            edges.extend((0..n).map(|i| (i, (i + 1) % n)));
            n
        }
        "complete" => {
            arity(name, params, 1)?;
            let n = params[0];
            edges.extend((0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))));
            n
        }
        "complete_bipartite" => {
            arity(name, params, 2)?;
            let (p, q) = (params[0], params[1]);
            edges.extend((0..p).flat_map(|u| (p..p + q).map(move |v| (u, v))));
            p + q
        }
        "star" => {
            arity(name, params, 1)?;
            edges.extend((1..=params[0]).map(|v| (0, v)));
            params[0] + 1
        }
        "petersen" => {
            arity(name, params, 0)?;
            for i in 0..5 {
                edges.push((i, (i + 1) % 5));
                edges.push((i, i + 5));
                edges.push((i + 5, (i + 2) % 5 + 5));
            }
            10
        }
        "hypercube" => {
            arity(name, params, 1)?;
            let d = params[0];
            if d > 20 {
                return Err(OracleError::InvalidParams(format!(
                    "hypercube dimension {d} too large"
                )));
            }
            let n = 1usize << d;
            for x in 0..n {
                for b in 0..d {
                    let y = x ^ (1 << b);
                    if x < y {
                        edges.push((x, y));
                    }
                }
            }
            n
        }
        _ => return Err(OracleError::UnknownFamily(name.to_string())),
    };
    Ok(Graph::new(n, &edges)?)
}

/// `G(n, p)`: each pair, in lexicographic order, is an edge with probability `p`.
pub fn gen_random(n: usize, p: &Rational, seed: u64) -> Result<Graph, OracleError> {
    if *p < Rational::zero() || *p > Rational::one() {
        return Err(OracleError::InvalidParams(format!(
            "probability {p} outside [0, 1]"
        )));
    }
    let num = p.numer().to_u64();
    let den = p.denom().to_u64();
    let (Some(num), Some(den)) = (num, den) else {
        return Err(OracleError::InvalidParams(format!(
            "probability {p} too fine"
        )));
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_range(0..den) < num {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::new(n, &edges)?)
}

const REGULAR_RESTARTS: usize = 10_000;

/// A `d`-regular graph from the pairing model, restarting on loops or
/// repeated pairs.
pub fn gen_regular(n: usize, d: usize, seed: u64) -> Result<Graph, OracleError> {
    if (n > 0 && d >= n) || !(n * d).is_multiple_of(2) {
        return Err(OracleError::InvalidParams(format!(
            "no {d}-regular graph on {n} vertices"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    'attempt: for _ in 0..REGULAR_RESTARTS {
        points.shuffle(&mut rng);
        let mut edges: Vec<(usize, usize)> = points
            .chunks_exact(2)
            .map(|c| (c[0].min(c[1]), c[0].max(c[1])))
            .collect();
        edges.sort_unstable();
        for w in edges.windows(2) {
            if w[0] == w[1] {
                continue 'attempt;
            }
        }
        if edges.iter().any(|&(u, v)| u == v) {
            continue;
        }
        return Ok(Graph::new(n, &edges)?);
    }
    Err(OracleError::InvalidParams(format!(
        "pairing failed {REGULAR_RESTARTS} times for n={n}, d={d}"
    )))
}

/// A uniformly random element of `pool`.
pub(crate) fn pick<'a, T>(rng: &mut ChaCha8Rng, pool: &'a [T]) -> &'a T {
    &pool[rng.gen_range(0..pool.len())]
}
