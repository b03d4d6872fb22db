//! Depth-first reachability over an [`LpnSystem`].
//!
//! Each stack frame holds a state and the enabled transitions not yet fired
//! from it, computed once when the state is pushed. Transitions fire in
//! ascending `(module, declaration index)` order. A successor is stored and
//! pushed only if the store did not already hold it.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::model::{LpnSystem, ModelError, TransitionId};
use crate::state::{GlobalState, StateTables};
use crate::store::{MemoryReport, StateStore};

/// Firings between clock reads.
const CLOCK_STRIDE: u64 = 1024;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Limits {
    /// Stop before storing more than this many states.
    pub max_states: Option<usize>,
    pub time_limit: Option<Duration>,
    /// Stop once the store's estimated peak exceeds this many bytes.
    pub memory_limit: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Completed,
    StateCap,
    Timeout,
    MemoryCap,
}

impl Termination {
    pub fn name(self) -> &'static str {
        match self {
            Termination::Completed => "completed",
            Termination::StateCap => "state_cap",
            Termination::Timeout => "timeout",
            Termination::MemoryCap => "memory_cap",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReachReport {
    pub states: usize,
    pub firings: u64,
    pub termination: Termination,
    pub memory: MemoryReport,
    pub local_states: usize,
    pub local_state_bytes: u64,
    pub elapsed: Duration,
    pub union_calls: u64,
    pub flushes: u64,
}

#[derive(Debug)]
pub struct Reachability {
    pub report: ReachReport,
    pub tables: StateTables,
}

struct Frame {
    state: GlobalState,
    /// Remaining transitions, last element fires next.
    pending: Vec<TransitionId>,
}

fn frame(system: &LpnSystem, tables: &StateTables, state: GlobalState) -> Result<Frame, ModelError> {
    let mut pending = tables.enabled(system, &state)?;
    pending.reverse();
    Ok(Frame { state, pending })
}

/// Explores every state reachable from the initial one, or stops at a limit.
/// The store's final flush runs in every case, so the reported memory and
/// union counts include it.
pub fn dfs_reach(system: &LpnSystem, store: &mut dyn StateStore, limits: Limits) -> Result<Reachability, ModelError> {
    let start = Instant::now();
    let mut tables = StateTables::new(system);
    let mut firings = 0u64;
    let mut termination = Termination::Completed;

    let s0 = tables.initial_global(system);
    store.add_if_new(&s0);
    let mut stack = vec![frame(system, &tables, s0)?];

    'search: while let Some(top) = stack.last_mut() {
        let Some(t) = top.pending.pop() else {
            stack.pop();
            continue;
        };
        let next = tables.successor(system, &top.state, t)?;
        firings += 1;
        if firings % CLOCK_STRIDE == 0 && limits.time_limit.is_some_and(|l| start.elapsed() >= l) {
            termination = Termination::Timeout;
            break 'search;
        }
        if limits.max_states.is_some_and(|cap| store.len() >= cap) {
            if store.contains(&next) {
                continue;
            }
            termination = Termination::StateCap;
            break 'search;
        }
        if !store.add_if_new(&next) {
            continue;
        }
        if limits.memory_limit.is_some_and(|cap| store.memory().peak_bytes > cap) {
            termination = Termination::MemoryCap;
            break 'search;
        }
        stack.push(frame(system, &tables, next)?);
    }

    store.finish();
    let report = ReachReport {
        states: store.len(),
        firings,
        termination,
        memory: store.memory(),
        local_states: tables.total(),
        local_state_bytes: tables.estimated_bytes(),
        elapsed: start.elapsed(),
        union_calls: store.union_calls(),
        flushes: store.flushes(),
    };
    Ok(Reachability { report, tables })
}
