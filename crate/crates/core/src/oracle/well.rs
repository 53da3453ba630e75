//! Brute-force feasibility for star coverings.

use std::collections::BTreeMap;

use crate::wellgraph::{StarForest, WellInstance};

use super::OracleError;

pub const WELL_BRUTE_LIMIT: usize = 12;

/// Searches all ways of attaching each U-vertex to one I-side neighbor and
/// returns the first (in U order, smallest neighbor first) that respects
/// every capacity.
pub fn well_bruteforce(inst: &WellInstance) -> Result<Option<StarForest>, OracleError> {
    if inst.uorder.len() > WELL_BRUTE_LIMIT {
        return Err(OracleError::TooLarge {
            elements: inst.uorder.len(),
            limit: WELL_BRUTE_LIMIT,
        });
    }
    let mut nbrs: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(x, u) in &inst.edges {
        nbrs.entry(u).or_default().push(x);
    }
    for list in nbrs.values_mut() {
        list.sort_unstable();
        list.dedup();
    }
    let mut load: BTreeMap<usize, u64> = BTreeMap::new();
    let mut chosen = Vec::with_capacity(inst.uorder.len());
    if place(inst, &nbrs, 0, &mut load, &mut chosen) {
        let mut edges: Vec<(usize, usize)> = chosen;
        edges.sort_unstable();
        Ok(Some(StarForest { edges }))
    } else {
        Ok(None)
    }
}

fn place(
    inst: &WellInstance,
    nbrs: &BTreeMap<usize, Vec<usize>>,
    k: usize,
    load: &mut BTreeMap<usize, u64>,
    chosen: &mut Vec<(usize, usize)>,
) -> bool {
    let Some(&u) = inst.uorder.get(k) else {
        return true;
    };
    for &x in nbrs.get(&u).map(Vec::as_slice).unwrap_or(&[]) {
        let cap = inst.phi.get(&x).copied().unwrap_or(0);
        let used = load.entry(x).or_insert(0);
        if *used >= cap {
            continue;
        }
        *used += 1;
        chosen.push((x, u));
        if place(inst, nbrs, k + 1, load, chosen) {
            return true;
        }
        chosen.pop();
        *load.get_mut(&x).unwrap() -= 1;
    }
    false
}

/// Hall-type condition: every subset `U'` of U has total neighbor capacity
/// at least `|U'|`.
pub fn hall_condition(inst: &WellInstance) -> Result<bool, OracleError> {
    let p = inst.uorder.len();
    if p > WELL_BRUTE_LIMIT {
        return Err(OracleError::TooLarge {
            elements: p,
            limit: WELL_BRUTE_LIMIT,
        });
    }
    let index: BTreeMap<usize, usize> = inst
        .uorder
        .iter()
        .enumerate()
        .map(|(i, &u)| (u, i))
        .collect();
    let mut reach: BTreeMap<usize, u32> = BTreeMap::new();
    for &(x, u) in &inst.edges {
        if let Some(&i) = index.get(&u) {
            *reach.entry(x).or_insert(0) |= 1 << i;
        }
    }
    Ok((1u32..1 << p).all(|sub| {
        let cap: u64 = reach
            .iter()
            .filter(|(_, m)| *m & sub != 0)
            .map(|(x, _)| inst.phi.get(x).copied().unwrap_or(0))
            .sum();
        cap >= sub.count_ones() as u64
    }))
}
