//! Local-state interning.
//!
//! Each module's distinct `(marking, valuation)` pairs are stored once and
//! numbered densely in first-seen order. A global state is then just the tuple
//! of those numbers, which is what every state store keys on.

use std::fmt;
use std::io::{self, Write};

use indexmap::IndexSet;

use crate::model::{Configuration, LpnSystem, ModelError, TransitionId};

/// A module's marking (sorted place indices) and its copy of its variables,
/// in slot order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocalState {
    pub marking: Box<[u32]>,
    pub values: Box<[i64]>,
}

/// Tuple of per-module local-state indices.
pub type GlobalState = Box<[u32]>;

/// Bijection between one module's local states and `0..len`.
#[derive(Debug, Default, Clone)]
pub struct LocalStateTable {
    states: IndexSet<LocalState, hashbrown::DefaultHashBuilder>,
}

impl LocalStateTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Index of `ls`, assigning the next one if it is new.
    pub fn intern(&mut self, ls: LocalState) -> u32 {
        let (idx, _) = self.states.insert_full(ls);
        u32::try_from(idx).expect("more than 2^32 local states in one module")
    }

    pub fn index_of(&self, ls: &LocalState) -> Option<u32> {
        self.states.get_index_of(ls).map(|i| i as u32)
    }

    pub fn get(&self, idx: u32) -> &LocalState {
        &self.states[idx as usize]
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &LocalState> {
        self.states.iter()
    }
}

/// One table per module of a system.
#[derive(Debug, Clone)]
pub struct StateTables {
    tables: Vec<LocalStateTable>,
}

impl StateTables {
    pub fn new(system: &LpnSystem) -> Self {
        StateTables { tables: vec![LocalStateTable::new(); system.len()] }
    }

    pub fn table(&self, module: usize) -> &LocalStateTable {
        &self.tables[module]
    }

    pub fn local(&self, module: usize, idx: u32) -> &LocalState {
        self.tables[module].get(idx)
    }

    pub fn intern(&mut self, module: usize, ls: LocalState) -> u32 {
        self.tables[module].intern(ls)
    }

    /// Total interned local states over all modules.
    pub fn total(&self) -> usize {
        self.tables.iter().map(LocalStateTable::len).sum()
    }

    /// Estimated table size: `8 * |values| + 4 * |marking| + 32` per local
    /// state.
    pub fn estimated_bytes(&self) -> u64 {
        self.tables
            .iter()
            .flat_map(LocalStateTable::iter)
            .map(|ls| 8 * ls.values.len() as u64 + 4 * ls.marking.len() as u64 + 32)
            .sum()
    }

    /// Interns the initial local state of every module. On fresh tables the
    /// result is all zeros.
    pub fn initial_global(&mut self, system: &LpnSystem) -> GlobalState {
        system
            .modules()
            .iter()
            .enumerate()
            .map(|(i, m)| self.intern(i, m.initial_local()))
            .collect()
    }

    pub fn configuration(&self, g: &[u32]) -> Configuration {
        Configuration { locals: g.iter().enumerate().map(|(m, &i)| self.local(m, i).clone()).collect() }
    }

    /// Enabled transitions of `g` in firing order.
    pub fn enabled(&self, system: &LpnSystem, g: &[u32]) -> Result<Vec<TransitionId>, ModelError> {
        let mut out = Vec::new();
        for (module, m) in system.modules().iter().enumerate() {
            m.enabled_into(self.local(module, g[module]), |index| out.push(TransitionId { module, index }))?;
        }
        Ok(out)
    }

    /// Fires enabled `t` in `g`. Modules whose local state is unchanged keep
    /// their index.
    pub fn successor(&mut self, system: &LpnSystem, g: &[u32], t: TransitionId) -> Result<GlobalState, ModelError> {
        let delta = system.fire_delta(t, |k| self.tables[k].get(g[k]))?;
        let mut next: GlobalState = g.into();
        for (k, ls) in delta {
            next[k] = self.intern(k, ls);
        }
        Ok(next)
    }

    /// Deterministic listing `module/index -> (marking, valuation)`.
    pub fn dump(&self, system: &LpnSystem, w: &mut dyn Write) -> io::Result<()> {
        for (m, table) in system.modules().iter().zip(&self.tables) {
            for (idx, ls) in table.iter().enumerate() {
                writeln!(w, "{}/{} -> {}", m.name(), idx, DisplayLocal { module: m, ls })?;
            }
        }
        Ok(())
    }
}

struct DisplayLocal<'a> {
    module: &'a crate::model::LpnModule,
    ls: &'a LocalState,
}

impl fmt::Display for DisplayLocal<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let places = self.module.places();
        f.write_str("({")?;
        for (i, p) in self.ls.marking.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(&places[*p as usize])?;
        }
        f.write_str("}, {")?;
        for (i, ((name, _), v)) in self.module.variables().iter().zip(self.ls.values.iter()).enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{name}={v}")?;
        }
        f.write_str("})")
    }
}
