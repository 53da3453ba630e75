//! Acceptance suite: one PASS/FAIL line per criterion.

use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use spanweight::formats::weighting_to_json;
use spanweight::graph::{weighted_degree, BaseWeighting, Graph};
use spanweight::mwis::{mwis_bruteforce, mwis_exact, phi_maximum_set};
use spanweight::oracle::{
    check_instance, gen_named, gen_random, gen_regular, hall_condition, well_bruteforce, FuzzConfig,
};
use spanweight::rational::Rational;
use spanweight::verify::{verify_list_membership, verify_offsets, verify_proper};
use spanweight::weighting::{replay_trace, solve_lists, solve_offsets, ListAssignment};
use spanweight::wellgraph::{
    check_preconditions, find_well_subgraph, verify_well, WellError, WellInstance,
};

type Outcome = Result<String, String>;

fn within(limit: Duration, start: Instant, out: Outcome) -> Outcome {
    let took = start.elapsed();
    match out {
        Ok(s) if took <= limit => Ok(format!("{s}; {:.2}s", took.as_secs_f64())),
        Ok(_) => Err(format!(
            "took {:.2}s, limit {}s",
            took.as_secs_f64(),
            limit.as_secs()
        )),
        err => err,
    }
}

fn all_labeled_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    (0u32..1 << pairs.len()).map(move |mask| {
        let edges: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        Graph::new(n, &edges).unwrap()
    })
}

/// Every labeled graph on at most five vertices, `w0 = 0`, `a = 1`.
fn small_graphs() -> (Outcome, String) {
    let graphs: Vec<Graph> = (0..=5).flat_map(all_labeled_graphs).collect();
    let one = Rational::one();
    let results: Vec<Result<String, String>> = graphs
        .par_iter()
        .map(|g| {
            let w0 = BaseWeighting::zero(g);
            let sol = solve_offsets(g, &w0, &one).map_err(|e| format!("{g:?}: {e}"))?;
            let rep = verify_offsets(g, &w0, &one, &sol.offsets.values(), &sol.levels);
            if !rep.overall() {
                return Err(format!("{g:?}: {rep}"));
            }
            Ok(sol.offsets.pattern())
        })
        .collect();
    let mut out = String::new();
    let mut failures = Vec::new();
    for (g, r) in graphs.iter().zip(&results) {
        match r {
            Ok(p) => writeln!(out, "{} {p}", g.to_edge_list().replace('\n', ";")).unwrap(),
            Err(e) => failures.push(e.clone()),
        }
    }
    let verdict = if failures.is_empty() {
        Ok(format!("{} graphs solved and verified", graphs.len()))
    } else {
        Err(format!(
            "{} failures, first: {}",
            failures.len(),
            failures[0]
        ))
    };
    (verdict, out)
}

/// Solver output agrees with exhaustive search on seeded random instances.
fn oracle_agreement() -> (Outcome, String) {
    let cfg = FuzzConfig {
        count: 500,
        seed: 20_240_601,
        ..FuzzConfig::default()
    };
    let results: Vec<(String, Result<bool, String>)> = (0..cfg.count)
        .into_par_iter()
        .map(|i| {
            let inst = cfg.instance(i);
            let pattern = solve_offsets(&inst.graph, &inst.base, &inst.span)
                .map(|s| s.offsets.pattern())
                .unwrap_or_default();
            let line = format!(
                "{i} n={} m={} a={} {pattern}",
                inst.graph.n(),
                inst.graph.m(),
                inst.span
            );
            (line, check_instance(&inst).map(|c| c.oracle))
        })
        .collect();
    let mut out = String::new();
    let mut failures = Vec::new();
    for (i, (line, r)) in results.iter().enumerate() {
        writeln!(out, "{line}").unwrap();
        match r {
            Ok(true) => {}
            Ok(false) => failures.push(format!("instance {i} exceeded the oracle limit")),
            Err(e) => failures.push(format!("instance {i}: {e}")),
        }
    }
    let verdict = if failures.is_empty() {
        Ok(format!(
            "{} instances, all in the oracle's feasible set",
            cfg.count
        ))
    } else {
        Err(format!(
            "{} failures, first: {}",
            failures.len(),
            failures[0]
        ))
    };
    (verdict, out)
}

/// Lists `{1, 2}` on the Petersen graph and on seeded cubic graphs.
fn cubic_lists() -> (Outcome, String) {
    let mut graphs = vec![gen_named("petersen", &[]).unwrap()];
    for k in 0..50u64 {
        let n = 4 + 2 * (k as usize % 6);
        graphs.push(gen_regular(n, 3, 1000 + k).unwrap());
    }
    let one = Rational::one();
    let two = Rational::from_integer(2);
    let mut out = String::new();
    let mut failures = Vec::new();
    for (k, g) in graphs.iter().enumerate() {
        let lists = ListAssignment::uniform(g, &one, &two);
        let w = match solve_lists(g, &lists) {
            Ok(w) => w,
            Err(e) => {
                failures.push(format!("graph {k}: {e}"));
                continue;
            }
        };
        let members = verify_list_membership(g, &lists, &w).unwrap();
        let proper = verify_proper(g, &w).unwrap();
        if !members.overall() || !proper.overall() {
            failures.push(format!("graph {k}: {members}{proper}"));
        }
        writeln!(out, "{k} {}", weighting_to_json(g, None, &w)).unwrap();
    }
    let verdict = if failures.is_empty() {
        Ok(format!(
            "{} graphs, weights in {{1,2}} and proper",
            graphs.len()
        ))
    } else {
        Err(format!(
            "{} failures, first: {}",
            failures.len(),
            failures[0]
        ))
    };
    (verdict, out)
}

/// An order of `U` in which each vertex has fewer later neighbors than its
/// capacity, if one exists.
fn precondition_order(g: &Graph, uset: &[usize], phi: &[u64]) -> Option<Vec<usize>> {
    let mut left: Vec<usize> = uset.to_vec();
    let mut order = Vec::new();
    while !left.is_empty() {
        let pos = left.iter().position(|&u| {
            let later = left.iter().filter(|&&w| w != u && g.has_edge(u, w)).count() as u64;
            later < phi[u]
        })?;
        order.push(left.remove(pos));
    }
    Some(order)
}

/// Star coverings on φ-maximum instances, and pigeonhole instances that
/// must fail exactly when brute force finds nothing.
fn star_coverings() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut failures = Vec::new();
    let mut built = 0;
    let mut draws = 0;
    while built < 300 {
        draws += 1;
        if draws > 100_000 {
            return Err(format!("only {built} instances after {draws} draws"));
        }
        let n = rng.gen_range(2..=11);
        let p = Rational::new(rng.gen_range(1..=3), 4);
        let g = gen_random(n, &p, rng.gen()).unwrap();
        let phi: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=5)).collect();
        let iside = phi_maximum_set(&g, &phi);
        let uset: Vec<usize> = g.vertices().filter(|v| !iside.contains(v)).collect();
        if uset.is_empty() {
            continue;
        }
        let Some(order) = precondition_order(&g, &uset, &phi) else {
            continue;
        };
        built += 1;
        let inst = WellInstance::from_graph(&g, &iside, &order, |v| phi[v]).unwrap();
        let pre = check_preconditions(&inst);
        if !pre.overall() {
            failures.push(format!("preconditions: {pre}"));
            continue;
        }
        match find_well_subgraph(&inst) {
            Ok(f) if verify_well(&inst, &f) == Ok(true) => {
                if order.len() <= 10 && well_bruteforce(&inst).unwrap().is_none() {
                    failures.push(format!("brute force finds no covering for {inst:?}"));
                }
            }
            Ok(f) => failures.push(format!("invalid forest {:?} for {inst:?}", f.edges)),
            Err(e) => failures.push(format!("{e} on {inst:?}")),
        }
    }

    for k in 0..100 {
        let xs = rng.gen_range(1..=3);
        let caps: Vec<u64> = (0..xs).map(|_| rng.gen_range(1..=3)).collect();
        let total: u64 = caps.iter().sum();
        let p = (total as usize + rng.gen_range(1..=3)).min(10);
        let (iside, uorder): (Vec<usize>, Vec<usize>) = ((0..xs).collect(), (xs..xs + p).collect());
        let mut edges = Vec::new();
        for &u in &uorder {
            let mut any = false;
            for &x in &iside {
                if rng.gen_bool(0.6) {
                    edges.push((x, u));
                    any = true;
                }
            }
            if !any {
                edges.push((rng.gen_range(0..xs), u));
            }
        }
        edges.sort_unstable();
        let phi = iside
            .iter()
            .map(|&x| (x, caps[x]))
            .chain(uorder.iter().map(|&u| (u, 1)))
            .collect();
        let inst = WellInstance {
            iside,
            uorder,
            phi,
            edges,
            uedges: vec![],
        };
        let brute = well_bruteforce(&inst).unwrap();
        let hall = hall_condition(&inst).unwrap();
        let fast = find_well_subgraph(&inst);
        let agrees = match (&fast, &brute) {
            (Err(WellError::NoAugmentingPath { .. }), None) => !hall,
            _ => false,
        };
        if !agrees {
            failures.push(format!(
                "adversarial {k}: {fast:?} vs brute force {brute:?}"
            ));
        }
    }
    if failures.is_empty() {
        Ok(format!(
            "300 coverings found and verified; 100 pigeonhole instances rejected ({draws} draws)"
        ))
    } else {
        Err(format!(
            "{} mismatches, first: {}",
            failures.len(),
            failures[0]
        ))
    }
}

/// Branch and bound against brute force, weight and witness.
fn mwis_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = Vec::new();
    for k in 0..200 {
        let n = rng.gen_range(1..=16);
        let p = Rational::new(rng.gen_range(1..=4), 5);
        let g = gen_random(n, &p, rng.gen()).unwrap();
        let phi: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=5)).collect();
        let (best, witness) = mwis_bruteforce(&g, &phi).unwrap();
        let fast = mwis_exact(&g, &phi);
        let weight: u64 = fast.iter().map(|&v| phi[v]).sum();
        if weight != best || fast != witness {
            failures.push(format!(
                "graph {k}: {fast:?} ({weight}) vs {witness:?} ({best})"
            ));
        }
    }
    if failures.is_empty() {
        Ok("200 graphs, identical weights and witnesses".into())
    } else {
        Err(format!(
            "{} mismatches, first: {}",
            failures.len(),
            failures[0]
        ))
    }
}

/// Scaling `(w0, a)` and translating vertex weights leave the pattern alone.
fn metamorphic() -> Outcome {
    let cfg = FuzzConfig {
        count: 100,
        seed: 31,
        nmax: 9,
        ..FuzzConfig::default()
    };
    let t = Rational::new(7, 5);
    let scales = [Rational::from_integer(2), Rational::new(1, 3)];
    let mut failures = Vec::new();
    for i in 0..cfg.count {
        let inst = cfg.instance(i);
        let (g, w0, a) = (&inst.graph, &inst.base, &inst.span);
        let base = match solve_offsets(g, w0, a) {
            Ok(s) => s,
            Err(e) => {
                failures.push(format!("instance {i}: {e}"));
                continue;
            }
        };
        for c in &scales {
            match solve_offsets(g, &w0.scale(c), &(a * c)) {
                Ok(s)
                    if s.offsets.vertex == base.offsets.vertex
                        && s.offsets.edge == base.offsets.edge => {}
                Ok(_) => failures.push(format!("instance {i}: scaling by {c} changed the pattern")),
                Err(e) => failures.push(format!("instance {i}: scaled by {c}: {e}")),
            }
        }
        let moved = w0.shift_vertices(&t);
        match solve_offsets(g, &moved, a) {
            Ok(s) if s.offsets.pattern() == base.offsets.pattern() => {
                let before = base.offsets.apply(w0);
                let after = s.offsets.apply(&moved);
                for v in g.vertices() {
                    let x = weighted_degree(g, &before, v).unwrap();
                    let y = weighted_degree(g, &after, v).unwrap();
                    if y != &x + &t {
                        failures.push(format!("instance {i}: vertex {v} moved from {x} to {y}"));
                    }
                }
            }
            Ok(_) => failures.push(format!("instance {i}: translation changed the pattern")),
            Err(e) => failures.push(format!("instance {i}: translated: {e}")),
        }
    }
    if failures.is_empty() {
        Ok("100 instances, patterns preserved under x2, x1/3 and +7/5".into())
    } else {
        Err(format!(
            "{} violations, first: {}",
            failures.len(),
            failures[0]
        ))
    }
}

/// Trace replay: goodness after every write, writes only light to heavy.
fn replay() -> Outcome {
    // half with mixed base weights, half with w0 = 0 where levels interact most
    let mixed = FuzzConfig {
        count: 50,
        seed: 4242,
        nmax: 10,
        ..FuzzConfig::default()
    };
    let uniform = FuzzConfig {
        count: 50,
        seed: 4243,
        nmax: 12,
        base_pool: vec![Rational::zero()],
        spans: vec![Rational::one()],
        ..FuzzConfig::default()
    };
    let mut failures = Vec::new();
    let mut writes = 0;
    for i in 0..100 {
        let inst = if i < 50 {
            mixed.instance(i)
        } else {
            uniform.instance(i - 50)
        };
        let sol = match solve_offsets(&inst.graph, &inst.base, &inst.span) {
            Ok(s) => s,
            Err(e) => {
                failures.push(format!("instance {i}: {e}"));
                continue;
            }
        };
        match replay_trace(&inst.graph, &sol.levels, &sol.trace) {
            Ok(off) if off == sol.offsets => {
                writes += off.vertex.iter().chain(&off.edge).filter(|h| **h).count();
            }
            Ok(_) => failures.push(format!("instance {i}: replay disagrees with the output")),
            Err(e) => failures.push(format!("instance {i}: {e}")),
        }
    }
    if failures.is_empty() {
        Ok(format!("100 traces, {writes} heavy writes replayed"))
    } else {
        Err(format!(
            "{} violations, first: {}",
            failures.len(),
            failures[0]
        ))
    }
}

fn main() -> ExitCode {
    let mut lines: Vec<(&str, Outcome)> = Vec::new();

    let start = Instant::now();
    let (c1, out1) = small_graphs();
    lines.push((
        "1 all graphs on at most 5 vertices",
        within(Duration::from_secs(60), start, c1),
    ));

    let start = Instant::now();
    let (c2, out2) = oracle_agreement();
    lines.push((
        "2 agreement with exhaustive search",
        within(Duration::from_secs(300), start, c2),
    ));

    let start = Instant::now();
    let (c3, out3) = cubic_lists();
    lines.push((
        "3 lists {1,2} on cubic graphs",
        within(Duration::from_secs(30), start, c3),
    ));

    lines.push(("4 star coverings", star_coverings()));

    let start = Instant::now();
    lines.push((
        "5 exact independent sets",
        within(Duration::from_secs(60), start, mwis_agreement()),
    ));

    lines.push(("6 scaling and translation", metamorphic()));
    lines.push(("7 trace replay", replay()));

    let again = [small_graphs().1, oracle_agreement().1, cubic_lists().1];
    let c8 = if [&out1, &out2, &out3]
        .iter()
        .zip(&again)
        .all(|(a, b)| *a == b)
    {
        Ok(format!(
            "criteria 1-3 repeated byte for byte ({} bytes)",
            out1.len() + out2.len() + out3.len()
        ))
    } else {
        Err("repeated run differs".into())
    };
    lines.push(("8 determinism", c8));

    let mut ok = true;
    for (name, out) in &lines {
        match out {
            Ok(s) => println!("PASS criterion {name}: {s}"),
            Err(s) => {
                ok = false;
                println!("FAIL criterion {name}: {s}");
            }
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
