//! Shared test helpers: a breadth-first reachability oracle that works on
//! names only (no interning, no index tuples, no decision diagrams) and
//! loaders for the built-in models.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::path::PathBuf;

use lpn_mdd::bench::generate::{generate, Family};
use lpn_mdd::bench::modelfile::read_model;
use lpn_mdd::expr::{eval_bool, eval_num, Valuation};
use lpn_mdd::model::LpnSystem;

/// Marked places as `module/place` plus the global valuation.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct NamedState {
    pub marked: BTreeSet<String>,
    pub values: BTreeMap<String, i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleCount {
    pub states: usize,
    /// Sum over reachable states of their enabled transitions.
    pub edges: u64,
}

fn valuation(values: &BTreeMap<String, i64>) -> Valuation {
    Valuation::new(values.iter().map(|(k, v)| (k.clone(), *v)))
}

fn initial(system: &LpnSystem) -> NamedState {
    let mut marked = BTreeSet::new();
    let mut values = BTreeMap::new();
    for m in system.modules() {
        for &p in m.initial_marking() {
            marked.insert(format!("{}/{}", m.name(), m.places()[p as usize]));
        }
        for (name, v) in m.variables() {
            values.insert(name.clone(), *v);
        }
    }
    NamedState { marked, values }
}

/// All successors of `s`, one per enabled transition.
pub fn successors(system: &LpnSystem, s: &NamedState) -> Vec<NamedState> {
    let env = valuation(&s.values);
    let mut out = Vec::new();
    for m in system.modules() {
        let place = |p: &u32| format!("{}/{}", m.name(), m.places()[*p as usize]);
        for t in m.transitions() {
            if !t.preset.iter().all(|p| s.marked.contains(&place(p))) {
                continue;
            }
            if !eval_bool(&t.guard, &env).expect("guard evaluates") {
                continue;
            }
            let writes: Vec<(String, i64)> =
                t.assignments.iter().map(|(v, e)| (v.clone(), eval_num(e, &env).expect("assignment evaluates"))).collect();
            let mut next = s.clone();
            for p in &t.preset {
                next.marked.remove(&place(p));
            }
            for p in &t.postset {
                next.marked.insert(place(p));
            }
            for (v, x) in writes {
                next.values.insert(v, x);
            }
            out.push(next);
        }
    }
    out
}

pub fn bfs_count(system: &LpnSystem) -> OracleCount {
    let start = initial(system);
    let mut seen: HashSet<NamedState> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    let mut edges = 0u64;
    while let Some(s) = queue.pop_front() {
        for next in successors(system, &s) {
            edges += 1;
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    OracleCount { states: seen.len(), edges }
}

pub fn model_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("models").join(name)
}

pub fn fig1() -> LpnSystem {
    read_model(&model_path("fig1_circuit.lpn")).expect("shipped model parses")
}

/// Models covered by the reachability oracle suite.
pub fn oracle_models() -> Vec<(String, LpnSystem)> {
    let mut out = vec![("fig1_circuit".to_string(), fig1())];
    let ranges = [(Family::ToggleChain, 1..=8), (Family::Philosophers, 2..=5), (Family::RingArbiter, 1..=4)];
    for (family, range) in ranges {
        for n in range {
            out.push((format!("{family}_{n}"), generate(family, n).unwrap()));
        }
    }
    out
}
