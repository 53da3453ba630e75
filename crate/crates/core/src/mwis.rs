//! Exact maximum-weight independent sets for nonnegative integer weights.
//!
//! Every solver here returns the *lexicographically smallest* optimal
//! witness, comparing sorted id sequences (so `{0} < {0, 2} < {1}`). The
//! brute-force enumerator and the branch-and-bound solver share that rule,
//! which makes their witnesses directly comparable.

use std::time::Instant;

use thiserror::Error;

use crate::graph::Graph;

/// Vertex weights `φ`, indexed by vertex id.
pub type PhiColoring = [u64];

/// Largest graph the enumerator accepts.
pub const BRUTE_FORCE_LIMIT: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MwisError {
    #[error("graph has {0} vertices; brute force is limited to {BRUTE_FORCE_LIMIT}")]
    TooLarge(usize),
    #[error("weight vector has length {got}, graph has {n} vertices")]
    WeightLength { got: usize, n: usize },
    #[error("independent-set search exceeded its time budget")]
    Budget,
}

fn check_len(g: &Graph, phi: &PhiColoring) -> Result<(), MwisError> {
    if phi.len() != g.n() {
        return Err(MwisError::WeightLength {
            got: phi.len(),
            n: g.n(),
        });
    }
    Ok(())
}

pub fn is_independent(g: &Graph, set: &[usize]) -> bool {
    let mut inside = vec![false; g.n()];
    for &v in set {
        inside[v] = true;
    }
    g.edges().iter().all(|&(u, v)| !(inside[u] && inside[v]))
}

/// Every vertex outside `set` has a neighbor inside it.
pub fn is_dominating(g: &Graph, set: &[usize]) -> bool {
    let mut inside = vec![false; g.n()];
    for &v in set {
        inside[v] = true;
    }
    g.vertices()
        .all(|v| inside[v] || g.neighbors(v).iter().any(|&u| inside[u]))
}

pub fn phi_weight(phi: &PhiColoring, set: &[usize]) -> u64 {
    set.iter().map(|&v| phi[v]).sum()
}

// `a < b` in the sorted-sequence lexicographic order, for sets given as masks.
fn mask_lex_less(a: u32, b: u32) -> bool {
    let diff = a ^ b;
    if diff == 0 {
        return false;
    }
    let d = diff.trailing_zeros();
    let above = |m: u32| d < 31 && (m >> (d + 1)) != 0;
    if a & (1 << d) != 0 {
        // a continues with d; b continues with something larger or stops
        above(b)
    } else {
        !above(a)
    }
}

/// Exhaustive search over all `2^n` subsets.
pub fn mwis_bruteforce(g: &Graph, phi: &PhiColoring) -> Result<(u64, Vec<usize>), MwisError> {
    check_len(g, phi)?;
    let n = g.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(MwisError::TooLarge(n));
    }
    let adj: Vec<u32> = g
        .vertices()
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | (1 << u)))
        .collect();
    let mut best_w = 0u64;
    let mut best_mask = 0u32;
    for mask in 0u32..(1u32 << n) {
        let mut w = 0u64;
        let mut ok = true;
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if adj[v] & mask != 0 {
                ok = false;
                break;
            }
            w += phi[v];
        }
        if !ok {
            continue;
        }
        if w > best_w || (w == best_w && mask_lex_less(mask, best_mask)) {
            best_w = w;
            best_mask = mask;
        }
    }
    let witness = (0..n).filter(|&v| best_mask & (1 << v) != 0).collect();
    Ok((best_w, witness))
}

#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn full(n: usize) -> Self {
        let mut b = Self::empty(n);
        for v in 0..n {
            b.insert(v);
        }
        b
    }

    fn insert(&mut self, v: usize) {
        self.0[v / 64] |= 1 << (v % 64);
    }

    fn remove(&mut self, v: usize) {
        self.0[v / 64] &= !(1 << (v % 64));
    }

    fn contains(&self, v: usize) -> bool {
        self.0[v / 64] >> (v % 64) & 1 == 1
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn and_not(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & !b).collect())
    }

    fn count_and(&self, other: &Bits) -> u32 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }
}

struct BranchAndBound<'a> {
    n: usize,
    phi: &'a PhiColoring,
    adj: Vec<Bits>,
    deadline: Option<Instant>,
    nodes: u64,
}

struct Search {
    best: i128,
    goal: i128,
    timed_out: bool,
}

impl<'a> BranchAndBound<'a> {
    fn new(g: &Graph, phi: &'a PhiColoring, deadline: Option<Instant>) -> Self {
        let n = g.n();
        let adj = g
            .vertices()
            .map(|v| {
                let mut b = Bits::empty(n);
                for &u in g.neighbors(v) {
                    b.insert(u);
                }
                b
            })
            .collect();
        BranchAndBound {
            n,
            phi,
            adj,
            deadline,
            nodes: 0,
        }
    }

    /// Greedy weighted clique cover: an independent set meets each clique at
    /// most once, so the sum of per-clique maxima bounds its weight.
    fn clique_cover_bound(&self, cand: &Bits) -> u64 {
        let mut order: Vec<usize> = cand.iter().collect();
        order.sort_by(|&a, &b| self.phi[b].cmp(&self.phi[a]).then(a.cmp(&b)));
        let mut cliques: Vec<Bits> = Vec::new();
        let mut bound = 0;
        for v in order {
            match cliques.iter_mut().find(|common| common.contains(v)) {
                Some(common) => *common = common.and(&self.adj[v]),
                None => {
                    cliques.push(self.adj[v].and(cand));
                    bound += self.phi[v];
                }
            }
        }
        bound
    }

    fn search(&mut self, cand: Bits, acc: u64, st: &mut Search) {
        if st.timed_out || st.best >= st.goal {
            return;
        }
        self.nodes += 1;
        if self.nodes % 1024 == 1 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    st.timed_out = true;
                    return;
                }
            }
        }
        // pick the vertex of largest degree inside cand; isolated ones are free
        let mut acc = acc;
        let mut cand = cand;
        let mut pivot: Option<(u32, usize)> = None;
        let members: Vec<usize> = cand.iter().collect();
        for v in members {
            let d = self.adj[v].count_and(&cand);
            if d == 0 {
                acc += self.phi[v];
                cand.remove(v);
            } else if pivot.is_none_or(|(bd, _)| d > bd) {
                pivot = Some((d, v));
            }
        }
        let Some((_, v)) = pivot else {
            st.best = st.best.max(acc as i128);
            return;
        };
        if (acc + self.clique_cover_bound(&cand)) as i128 <= st.best {
            return;
        }
        let mut with = cand.and_not(&self.adj[v]);
        with.remove(v);
        self.search(with, acc + self.phi[v], st);
        let mut without = cand;
        without.remove(v);
        self.search(without, acc, st);
    }

    fn max_weight(&mut self, cand: &Bits) -> Result<u64, MwisError> {
        let mut st = Search {
            best: -1,
            goal: i128::MAX,
            timed_out: false,
        };
        self.search(cand.clone(), 0, &mut st);
        if st.timed_out {
            return Err(MwisError::Budget);
        }
        Ok(st.best as u64)
    }

    /// Whether some independent subset of `cand` weighs at least `target`.
    fn reaches(&mut self, cand: &Bits, target: u64) -> Result<bool, MwisError> {
        if target == 0 {
            return Ok(true);
        }
        let total: u64 = cand.iter().map(|v| self.phi[v]).sum();
        if total < target {
            return Ok(false);
        }
        let mut st = Search {
            best: target as i128 - 1,
            goal: target as i128,
            timed_out: false,
        };
        self.search(cand.clone(), 0, &mut st);
        if st.timed_out {
            return Err(MwisError::Budget);
        }
        Ok(st.best >= target as i128)
    }

    /// Lexicographically smallest optimal witness, built one element at a time:
    /// extend the prefix by the smallest vertex that still admits an optimal
    /// completion, and stop as soon as the prefix itself is optimal.
    fn lex_min_optimal(&mut self) -> Result<Vec<usize>, MwisError> {
        let all = Bits::full(self.n);
        let mut remaining = self.max_weight(&all)?;
        let mut allowed = all;
        let mut chosen = Vec::new();
        while remaining > 0 {
            let mut picked = None;
            let cands: Vec<usize> = allowed.iter().collect();
            for v in cands {
                if self.phi[v] > remaining {
                    continue;
                }
                let mut rest = allowed.and_not(&self.adj[v]);
                for u in 0..=v {
                    rest.remove(u);
                }
                if self.reaches(&rest, remaining - self.phi[v])? {
                    picked = Some((v, rest));
                    break;
                }
            }
            let (v, rest) = picked.expect("an optimal completion always exists");
            remaining -= self.phi[v];
            chosen.push(v);
            allowed = rest;
        }
        Ok(chosen)
    }
}

/// Maximum `φ`-weight independent set by branch and bound.
pub fn mwis_exact(g: &Graph, phi: &PhiColoring) -> Vec<usize> {
    mwis_exact_within(g, phi, None).expect("no deadline was set")
}

/// [`mwis_exact`] with an optional wall-clock deadline.
pub fn mwis_exact_within(
    g: &Graph,
    phi: &PhiColoring,
    deadline: Option<Instant>,
) -> Result<Vec<usize>, MwisError> {
    check_len(g, phi)?;
    BranchAndBound::new(g, phi, deadline).lex_min_optimal()
}

/// Adds, in increasing id order, every vertex with no neighbor in `set`.
/// The result is independent and dominating.
pub fn extend_to_dominating(g: &Graph, set: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; g.n()];
    for &v in set {
        inside[v] = true;
    }
    for v in g.vertices() {
        if !inside[v] && g.neighbors(v).iter().all(|&u| !inside[u]) {
            inside[v] = true;
        }
    }
    g.vertices().filter(|&v| inside[v]).collect()
}

/// A `φ`-maximum independent set: maximum weight and dominating.
pub fn phi_maximum_set(g: &Graph, phi: &PhiColoring) -> Vec<usize> {
    phi_maximum_set_within(g, phi, None).expect("no deadline was set")
}

pub fn phi_maximum_set_within(
    g: &Graph,
    phi: &PhiColoring,
    deadline: Option<Instant>,
) -> Result<Vec<usize>, MwisError> {
    let base = mwis_exact_within(g, phi, deadline)?;
    Ok(extend_to_dominating(g, &base))
}
