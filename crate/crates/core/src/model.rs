//! Labeled Petri net modules and their parallel composition.
//!
//! Places are one-safe, so a marking is a set of places. Modules communicate
//! only through shared variables: every module that declares a variable keeps
//! its own copy, and firing a transition that assigns it updates all copies.

use std::collections::{BTreeMap, BTreeSet};

use crate::expr::{eval_bool, eval_num, BoolExpr, EvalError, NumExpr, Valuation};
use crate::state::LocalState;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("no modules")]
    NoModules,
    #[error("duplicate module `{0}`")]
    DuplicateModule(String),
    #[error("module `{module}`: duplicate place `{place}`")]
    DuplicatePlace { module: String, place: String },
    #[error("place `{place}` is declared in both `{first}` and `{second}`")]
    SharedPlace { place: String, first: String, second: String },
    #[error("module `{module}`: duplicate variable `{var}`")]
    DuplicateVariable { module: String, var: String },
    #[error("variable `{var}` starts at {first_value} in `{first}` but at {second_value} in `{second}`")]
    InconsistentInitialValue {
        var: String,
        first: String,
        first_value: i64,
        second: String,
        second_value: i64,
    },
    #[error("module `{module}`: duplicate transition `{transition}`")]
    DuplicateTransition { module: String, transition: String },
    #[error("transition `{transition}`: unknown place `{place}`")]
    UnknownPlace { transition: String, place: String },
    #[error("transition `{transition}`: unknown variable `{var}`")]
    UnknownVariable { transition: String, var: String },
    #[error("transition `{transition}`: empty {which}")]
    EmptyArcSet { transition: String, which: &'static str },
    #[error("transition `{transition}`: `{var}` is assigned twice")]
    DuplicateAssignment { transition: String, var: String },
    #[error("transition `{transition}`: {source}")]
    Eval {
        transition: String,
        #[source]
        source: EvalError,
    },
    #[error("transition `{0}` fired while disabled")]
    NotEnabled(String),
}

/// A transition of one module. Place and variable references are resolved to
/// module-local indices; the name-level guard and assignments are kept for
/// printing and for independent re-evaluation.
#[derive(Debug, Clone)]
pub struct Transition {
    pub name: String,
    /// Sorted, deduplicated place indices.
    pub preset: Vec<u32>,
    pub postset: Vec<u32>,
    pub guard: BoolExpr,
    pub assignments: Vec<(String, NumExpr)>,
    guard_slots: BoolExpr<usize>,
    assign_slots: Vec<(usize, NumExpr<usize>)>,
}

impl Transition {
    /// Variable slots written by this transition.
    pub fn assigned_slots(&self) -> impl Iterator<Item = usize> + '_ {
        self.assign_slots.iter().map(|(slot, _)| *slot)
    }
}

#[derive(Debug, Clone)]
pub struct LpnModule {
    name: String,
    variables: Vec<(String, i64)>,
    places: Vec<String>,
    initial_marking: Vec<u32>,
    transitions: Vec<Transition>,
}

impl LpnModule {
    pub fn new(name: impl Into<String>) -> Self {
        LpnModule {
            name: name.into(),
            variables: Vec::new(),
            places: Vec::new(),
            initial_marking: Vec::new(),
            transitions: Vec::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Declared variables with their initial values, in slot order.
    pub fn variables(&self) -> &[(String, i64)] {
        &self.variables
    }

    pub fn places(&self) -> &[String] {
        &self.places
    }

    pub fn initial_marking(&self) -> &[u32] {
        &self.initial_marking
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn var_slot(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|(v, _)| v == name)
    }

    pub fn place_index(&self, name: &str) -> Option<u32> {
        self.places.iter().position(|p| p == name).map(|i| i as u32)
    }

    pub fn qualified(&self, transition: &str) -> String {
        format!("{}.{}", self.name, transition)
    }

    pub fn add_variable(&mut self, name: impl Into<String>, initial: i64) -> Result<usize, ModelError> {
        let name = name.into();
        if self.var_slot(&name).is_some() {
            return Err(ModelError::DuplicateVariable { module: self.name.clone(), var: name });
        }
        self.variables.push((name, initial));
        Ok(self.variables.len() - 1)
    }

    pub fn add_place(&mut self, name: impl Into<String>, marked: bool) -> Result<u32, ModelError> {
        let name = name.into();
        if self.place_index(&name).is_some() {
            return Err(ModelError::DuplicatePlace { module: self.name.clone(), place: name });
        }
        let idx = self.places.len() as u32;
        self.places.push(name);
        if marked {
            self.initial_marking.push(idx);
        }
        Ok(idx)
    }

    /// Adds a transition. Places and variables must already be declared.
    /// A missing guard means `true`.
    pub fn add_transition(
        &mut self,
        name: impl Into<String>,
        preset: &[&str],
        postset: &[&str],
        guard: Option<BoolExpr>,
        assignments: Vec<(String, NumExpr)>,
    ) -> Result<usize, ModelError> {
        let name = name.into();
        let qualified = self.qualified(&name);
        if self.transitions.iter().any(|t| t.name == name) {
            return Err(ModelError::DuplicateTransition { module: self.name.clone(), transition: name });
        }
        let resolve_places = |names: &[&str], which| -> Result<Vec<u32>, ModelError> {
            if names.is_empty() {
                return Err(ModelError::EmptyArcSet { transition: qualified.clone(), which });
            }
            let set = names
                .iter()
                .map(|p| {
                    self.place_index(p).ok_or_else(|| ModelError::UnknownPlace {
                        transition: qualified.clone(),
                        place: p.to_string(),
                    })
                })
                .collect::<Result<BTreeSet<_>, _>>()?;
            Ok(set.into_iter().collect())
        };
        let preset = resolve_places(preset, "preset")?;
        let postset = resolve_places(postset, "postset")?;

        let mut slot_of = |v: &String| {
            self.var_slot(v)
                .ok_or_else(|| ModelError::UnknownVariable { transition: qualified.clone(), var: v.clone() })
        };
        let guard = guard.unwrap_or(BoolExpr::True);
        let guard_slots = guard.try_map_vars(&mut slot_of)?;
        let mut assign_slots = Vec::with_capacity(assignments.len());
        for (target, rhs) in &assignments {
            let slot = slot_of(target)?;
            if assign_slots.iter().any(|(s, _)| *s == slot) {
                return Err(ModelError::DuplicateAssignment { transition: qualified.clone(), var: target.clone() });
            }
            assign_slots.push((slot, rhs.try_map_vars(&mut slot_of)?));
        }
        self.transitions.push(Transition { name, preset, postset, guard, assignments, guard_slots, assign_slots });
        Ok(self.transitions.len() - 1)
    }

    pub fn initial_local(&self) -> LocalState {
        LocalState {
            marking: self.initial_marking.clone().into_boxed_slice(),
            values: self.variables.iter().map(|(_, v)| *v).collect(),
        }
    }

    fn eval_error(&self, t: &Transition, source: EvalError) -> ModelError {
        ModelError::Eval { transition: self.qualified(&t.name), source }
    }

    /// Whether transition `t` may fire: its preset is marked and its guard
    /// holds.
    pub fn is_enabled(&self, t: usize, local: &LocalState) -> Result<bool, ModelError> {
        let tr = &self.transitions[t];
        if !is_subset(&tr.preset, &local.marking) {
            return Ok(false);
        }
        eval_bool(&tr.guard_slots, &local.values[..]).map_err(|e| self.eval_error(tr, e))
    }

    /// Indices of the transitions enabled in `local`, in declaration order.
    pub fn enabled_local(&self, local: &LocalState) -> Result<Vec<usize>, ModelError> {
        let mut out = Vec::new();
        self.enabled_into(local, |t| out.push(t))?;
        Ok(out)
    }

    pub(crate) fn enabled_into(&self, local: &LocalState, mut sink: impl FnMut(usize)) -> Result<(), ModelError> {
        for t in 0..self.transitions.len() {
            if self.is_enabled(t, local)? {
                sink(t);
            }
        }
        Ok(())
    }

    /// Fires `t` on this module's local state alone. Returns the new local
    /// state and the `(slot, value)` pairs written, all computed from the
    /// pre-fire values.
    fn fire_local(&self, t: usize, local: &LocalState) -> Result<(LocalState, Writes), ModelError> {
        let tr = &self.transitions[t];
        let writes = tr
            .assign_slots
            .iter()
            .map(|(slot, rhs)| Ok((*slot, eval_num(rhs, &local.values[..])?)))
            .collect::<Result<Writes, EvalError>>()
            .map_err(|e| self.eval_error(tr, e))?;
        let mut values = local.values.clone();
        for &(slot, v) in &writes {
            values[slot] = v;
        }
        let marking = fire_marking(&local.marking, &tr.preset, &tr.postset);
        Ok((LocalState { marking, values }, writes))
    }
}

type Writes = smallvec::SmallVec<[(usize, i64); 4]>;

fn is_subset(small: &[u32], big: &[u32]) -> bool {
    let mut it = big.iter();
    small.iter().all(|p| it.any(|q| q == p))
}

/// `(marking \ preset) ∪ postset` over sorted slices.
fn fire_marking(marking: &[u32], preset: &[u32], postset: &[u32]) -> Box<[u32]> {
    let mut out: Vec<u32> = Vec::with_capacity(marking.len() + postset.len());
    out.extend(marking.iter().copied().filter(|p| preset.binary_search(p).is_err()));
    out.extend_from_slice(postset);
    out.sort_unstable();
    out.dedup();
    out.into_boxed_slice()
}

/// Identifies a transition by owning module and declaration index. The
/// derived ordering is the search's firing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TransitionId {
    pub module: usize,
    pub index: usize,
}

/// Parallel composition of modules sharing variables by name.
#[derive(Debug, Clone)]
pub struct LpnSystem {
    modules: Vec<LpnModule>,
    /// Global variable name → initial value, sorted by name.
    variables: BTreeMap<String, i64>,
    /// For each module and slot, the other `(module, slot)` copies of the
    /// same variable.
    peers: Vec<Vec<Vec<(usize, usize)>>>,
}

/// Per-module local states of a whole system.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub locals: Vec<LocalState>,
}

impl LpnSystem {
    /// Composes modules, checking that places are disjoint and that shared
    /// variables agree on their initial value.
    pub fn compose(modules: Vec<LpnModule>) -> Result<Self, ModelError> {
        if modules.is_empty() {
            return Err(ModelError::NoModules);
        }
        let mut module_names = BTreeSet::new();
        let mut place_owner: BTreeMap<&str, &str> = BTreeMap::new();
        let mut var_first: BTreeMap<&str, (&str, i64)> = BTreeMap::new();
        for m in &modules {
            if !module_names.insert(m.name.as_str()) {
                return Err(ModelError::DuplicateModule(m.name.clone()));
            }
            for p in &m.places {
                if let Some(first) = place_owner.insert(p, &m.name) {
                    return Err(ModelError::SharedPlace {
                        place: p.clone(),
                        first: first.to_string(),
                        second: m.name.clone(),
                    });
                }
            }
            for (v, init) in &m.variables {
                match var_first.get(v.as_str()) {
                    Some(&(first, first_value)) if first_value != *init => {
                        return Err(ModelError::InconsistentInitialValue {
                            var: v.clone(),
                            first: first.to_string(),
                            first_value,
                            second: m.name.clone(),
                            second_value: *init,
                        });
                    }
                    Some(_) => {}
                    None => {
                        var_first.insert(v, (&m.name, *init));
                    }
                }
            }
        }
        let variables = var_first.iter().map(|(k, (_, v))| (k.to_string(), *v)).collect();

        let mut owners: BTreeMap<&str, Vec<(usize, usize)>> = BTreeMap::new();
        for (mi, m) in modules.iter().enumerate() {
            for (slot, (v, _)) in m.variables.iter().enumerate() {
                owners.entry(v).or_default().push((mi, slot));
            }
        }
        let peers = modules
            .iter()
            .enumerate()
            .map(|(mi, m)| {
                m.variables
                    .iter()
                    .map(|(v, _)| owners[v.as_str()].iter().copied().filter(|&(k, _)| k != mi).collect())
                    .collect()
            })
            .collect();
        Ok(LpnSystem { modules, variables, peers })
    }

    pub fn modules(&self) -> &[LpnModule] {
        &self.modules
    }

    pub fn module(&self, i: usize) -> &LpnModule {
        &self.modules[i]
    }

    pub fn len(&self) -> usize {
        self.modules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modules.is_empty()
    }

    pub fn transition(&self, id: TransitionId) -> &Transition {
        &self.modules[id.module].transitions[id.index]
    }

    pub fn transition_name(&self, id: TransitionId) -> String {
        self.modules[id.module].qualified(&self.transition(id).name)
    }

    pub fn transition_count(&self) -> usize {
        self.modules.iter().map(|m| m.transitions.len()).sum()
    }

    pub fn place_count(&self) -> usize {
        self.modules.iter().map(|m| m.places.len()).sum()
    }

    /// Every transition in firing order.
    pub fn transition_ids(&self) -> impl Iterator<Item = TransitionId> + '_ {
        self.modules
            .iter()
            .enumerate()
            .flat_map(|(module, m)| (0..m.transitions.len()).map(move |index| TransitionId { module, index }))
    }

    /// Variables shared by more than one module.
    pub fn shared_variables(&self) -> BTreeMap<&str, BTreeSet<usize>> {
        let mut out: BTreeMap<&str, BTreeSet<usize>> = BTreeMap::new();
        for (mi, m) in self.modules.iter().enumerate() {
            for (v, _) in &m.variables {
                out.entry(v).or_default().insert(mi);
            }
        }
        out.retain(|_, owners| owners.len() > 1);
        out
    }

    pub fn initial_valuation(&self) -> Valuation {
        Valuation::new(self.variables.iter().map(|(k, v)| (k.clone(), *v)))
    }

    pub fn initial_configuration(&self) -> Configuration {
        Configuration { locals: self.modules.iter().map(LpnModule::initial_local).collect() }
    }

    /// Global valuation assembled from the per-module copies.
    pub fn valuation(&self, config: &Configuration) -> Valuation {
        let mut out = self.initial_valuation();
        for (m, local) in self.modules.iter().zip(&config.locals) {
            for ((name, _), v) in m.variables.iter().zip(local.values.iter()) {
                out.set(name, *v);
            }
        }
        out
    }

    /// All enabled transitions of a configuration, in firing order.
    pub fn enabled(&self, config: &Configuration) -> Result<Vec<TransitionId>, ModelError> {
        let mut out = Vec::new();
        for (module, (m, local)) in self.modules.iter().zip(&config.locals).enumerate() {
            m.enabled_into(local, |index| out.push(TransitionId { module, index }))?;
        }
        Ok(out)
    }

    /// Fires `t` and returns only the modules whose local state changed.
    /// `local(k)` gives module `k`'s current local state. The caller
    /// guarantees that `t` is enabled.
    pub(crate) fn fire_delta<'a>(
        &self,
        t: TransitionId,
        local: impl Fn(usize) -> &'a LocalState,
    ) -> Result<Vec<(usize, LocalState)>, ModelError> {
        let owner = local(t.module);
        let (next, writes) = self.modules[t.module].fire_local(t.index, owner)?;
        let mut changed: Vec<(usize, LocalState)> = Vec::new();
        if next != *owner {
            changed.push((t.module, next));
        }
        for (slot, value) in writes {
            for &(k, peer_slot) in &self.peers[t.module][slot] {
                let pos = match changed.iter().position(|(m, _)| *m == k) {
                    Some(pos) => pos,
                    None => {
                        let current = local(k);
                        if current.values[peer_slot] == value {
                            continue;
                        }
                        changed.push((k, current.clone()));
                        changed.len() - 1
                    }
                };
                changed[pos].1.values[peer_slot] = value;
            }
        }
        Ok(changed)
    }

    /// Fires an enabled transition, returning the successor configuration.
    pub fn fire(&self, t: TransitionId, config: &Configuration) -> Result<Configuration, ModelError> {
        if !self.modules[t.module].is_enabled(t.index, &config.locals[t.module])? {
            return Err(ModelError::NotEnabled(self.transition_name(t)));
        }
        let mut next = config.clone();
        for (k, ls) in self.fire_delta(t, |k| &config.locals[k])? {
            next.locals[k] = ls;
        }
        Ok(next)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_boolean, parse_numeric};

    fn assign(pairs: &[(&str, &str)]) -> Vec<(String, NumExpr)> {
        pairs.iter().map(|(v, e)| (v.to_string(), parse_numeric(e).unwrap())).collect()
    }

    fn counter() -> LpnSystem {
        let mut m = LpnModule::new("C");
        m.add_variable("x", 0).unwrap();
        m.add_place("p0", true).unwrap();
        m.add_place("p1", false).unwrap();
        m.add_transition("inc", &["p0"], &["p0"], None, assign(&[("x", "x + 1")])).unwrap();
        m.add_transition("move", &["p0"], &["p1"], None, vec![]).unwrap();
        m.add_transition("never", &["p0"], &["p1"], Some(BoolExpr::False), vec![]).unwrap();
        m.add_transition("blocked", &["p1"], &["p0"], None, vec![]).unwrap();
        LpnSystem::compose(vec![m]).unwrap()
    }

    const INC: TransitionId = TransitionId { module: 0, index: 0 };
    const MOVE: TransitionId = TransitionId { module: 0, index: 1 };

    #[test]
    fn self_loop_increment_keeps_marking() {
        let sys = counter();
        let c0 = sys.initial_configuration();
        let c1 = sys.fire(INC, &c0).unwrap();
        assert_eq!(c1.locals[0].values[..], [1]);
        assert_eq!(c1.locals[0].marking, c0.locals[0].marking);
        assert_eq!(sys.valuation(&c1).get("x"), Some(1));
    }

    #[test]
    fn marking_moves_from_preset_to_postset() {
        let sys = counter();
        let c1 = sys.fire(MOVE, &sys.initial_configuration()).unwrap();
        assert_eq!(c1.locals[0].marking[..], [1]);
    }

    #[test]
    fn enabledness_needs_marked_preset_and_true_guard() {
        let sys = counter();
        let c0 = sys.initial_configuration();
        let names: Vec<_> = sys.enabled(&c0).unwrap().into_iter().map(|t| sys.transition_name(t)).collect();
        assert_eq!(names, ["C.inc", "C.move"]);
        let c1 = sys.fire(MOVE, &c0).unwrap();
        let names: Vec<_> = sys.enabled(&c1).unwrap().into_iter().map(|t| sys.transition_name(t)).collect();
        assert_eq!(names, ["C.blocked"]);
        assert_eq!(sys.fire(INC, &c1), Err(ModelError::NotEnabled("C.inc".into())));
    }

    #[test]
    fn assignments_read_pre_fire_values() {
        let mut m = LpnModule::new("S");
        m.add_variable("a", 1).unwrap();
        m.add_variable("b", 2).unwrap();
        m.add_place("p", true).unwrap();
        m.add_transition("swap", &["p"], &["p"], None, assign(&[("a", "b"), ("b", "a")])).unwrap();
        let sys = LpnSystem::compose(vec![m]).unwrap();
        let c = sys.fire(TransitionId { module: 0, index: 0 }, &sys.initial_configuration()).unwrap();
        assert_eq!(c.locals[0].values[..], [2, 1]);
    }

    #[test]
    fn shared_assignment_updates_every_copy() {
        let mut a = LpnModule::new("A");
        a.add_variable("s", 0).unwrap();
        a.add_place("a0", true).unwrap();
        a.add_transition("set", &["a0"], &["a0"], Some(parse_boolean("s == 0").unwrap()), assign(&[("s", "1")]))
            .unwrap();
        let mut b = LpnModule::new("B");
        b.add_variable("t", 5).unwrap();
        b.add_variable("s", 0).unwrap();
        b.add_place("b0", true).unwrap();
        b.add_transition("wait", &["b0"], &["b0"], Some(parse_boolean("s").unwrap()), vec![]).unwrap();
        let sys = LpnSystem::compose(vec![a, b]).unwrap();
        assert_eq!(sys.shared_variables()["s"], BTreeSet::from([0, 1]));
        let c0 = sys.initial_configuration();
        assert_eq!(sys.enabled(&c0).unwrap(), [TransitionId { module: 0, index: 0 }]);
        let c1 = sys.fire(TransitionId { module: 0, index: 0 }, &c0).unwrap();
        assert_eq!(c1.locals[1].values[..], [5, 1]);
        assert_eq!(sys.enabled(&c1).unwrap(), [TransitionId { module: 1, index: 0 }]);
    }

    #[test]
    fn delta_reports_only_changed_modules() {
        let mut a = LpnModule::new("A");
        a.add_variable("s", 0).unwrap();
        a.add_place("a0", true).unwrap();
        a.add_transition("noop", &["a0"], &["a0"], None, vec![]).unwrap();
        a.add_transition("keep", &["a0"], &["a0"], None, assign(&[("s", "s")])).unwrap();
        let b = {
            let mut b = LpnModule::new("B");
            b.add_variable("s", 0).unwrap();
            b.add_place("b0", true).unwrap();
            b
        };
        let sys = LpnSystem::compose(vec![a, b]).unwrap();
        let c0 = sys.initial_configuration();
        for index in 0..2 {
            let delta = sys.fire_delta(TransitionId { module: 0, index }, |k| &c0.locals[k]).unwrap();
            assert!(delta.is_empty());
        }
    }

    #[test]
    fn marking_update_identity() {
        let marking = [0u32, 2, 3, 5];
        let preset = [2u32, 5];
        let postset = [1u32, 5, 7];
        let next = fire_marking(&marking, &preset, &postset);
        for p in 0..9u32 {
            let expected = (marking.contains(&p) && !preset.contains(&p)) || postset.contains(&p);
            assert_eq!(next.contains(&p), expected, "place {p}");
        }
    }

    #[test]
    fn composition_errors() {
        let mk = |name: &str, place: &str, init: i64| {
            let mut m = LpnModule::new(name);
            m.add_variable("v", init).unwrap();
            m.add_place(place, true).unwrap();
            m
        };
        assert!(matches!(
            LpnSystem::compose(vec![mk("A", "p0", 0), mk("B", "p0", 0)]),
            Err(ModelError::SharedPlace { .. })
        ));
        assert!(matches!(
            LpnSystem::compose(vec![mk("A", "p0", 0), mk("B", "p1", 1)]),
            Err(ModelError::InconsistentInitialValue { .. })
        ));
        assert!(matches!(
            LpnSystem::compose(vec![mk("A", "p0", 0), mk("A", "p1", 0)]),
            Err(ModelError::DuplicateModule(_))
        ));
        assert!(matches!(LpnSystem::compose(vec![]), Err(ModelError::NoModules)));
        let single = LpnSystem::compose(vec![mk("A", "p0", 3)]).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single.initial_valuation().get("v"), Some(3));
    }

    #[test]
    fn transition_validation() {
        let mut m = LpnModule::new("M");
        m.add_variable("x", 0).unwrap();
        m.add_place("p", true).unwrap();
        assert!(matches!(
            m.add_transition("t", &[], &["p"], None, vec![]),
            Err(ModelError::EmptyArcSet { which: "preset", .. })
        ));
        assert!(matches!(m.add_transition("t", &["q"], &["p"], None, vec![]), Err(ModelError::UnknownPlace { .. })));
        assert!(matches!(
            m.add_transition("t", &["p"], &["p"], Some(parse_boolean("y > 0").unwrap()), vec![]),
            Err(ModelError::UnknownVariable { .. })
        ));
        assert!(matches!(
            m.add_transition("t", &["p"], &["p"], None, assign(&[("x", "1"), ("x", "2")])),
            Err(ModelError::DuplicateAssignment { .. })
        ));
        m.add_transition("t", &["p"], &["p"], None, vec![]).unwrap();
        assert!(matches!(
            m.add_transition("t", &["p"], &["p"], None, vec![]),
            Err(ModelError::DuplicateTransition { .. })
        ));
        assert!(matches!(m.add_place("p", false), Err(ModelError::DuplicatePlace { .. })));
        assert!(matches!(m.add_variable("x", 1), Err(ModelError::DuplicateVariable { .. })));
    }

    #[test]
    fn evaluation_error_names_transition() {
        let mut m = LpnModule::new("M");
        m.add_variable("x", 0).unwrap();
        m.add_place("p", true).unwrap();
        m.add_transition("div", &["p"], &["p"], None, assign(&[("x", "1 / x")])).unwrap();
        let sys = LpnSystem::compose(vec![m]).unwrap();
        let err = sys.fire(TransitionId { module: 0, index: 0 }, &sys.initial_configuration()).unwrap_err();
        assert_eq!(err.to_string(), "transition `M.div`: division by zero");
    }
}
