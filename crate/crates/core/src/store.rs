//! Reachable-state stores.
//!
//! Four interchangeable backends keep the set of visited global states:
//! a hash set, a decision tree, a decision diagram updated once per state,
//! and a hybrid that buffers states in a tree and merges the buffer into a
//! diagram whenever it holds `threshold` states.
//!
//! Memory is reported as structure counts plus an estimate in bytes:
//!
//! | structure        | cost                        |
//! |------------------|-----------------------------|
//! | hash entry       | `4 * arity + 24`            |
//! | tree node / edge | `32` / `16`                 |
//! | diagram node / edge | `40` / `8`               |
//!
//! Every store tracks the peak of its estimate, sampled after each add and,
//! for the hybrid, in the middle of a flush when the old and new diagrams
//! coexist.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use serde::Serialize;

use crate::mdd::{Mdd, MddManager};
use crate::mdt::Mdt;

pub const HASH_ENTRY_BYTES: u64 = 24;
pub const HASH_LABEL_BYTES: u64 = 4;
pub const MDT_NODE_BYTES: u64 = 32;
pub const MDT_EDGE_BYTES: u64 = 16;
pub const MDD_NODE_BYTES: u64 = 40;
pub const MDD_EDGE_BYTES: u64 = 8;

/// Default hybrid buffer size, in states.
pub const DEFAULT_THRESHOLD: usize = 65_536;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Hash,
    Mdt,
    Mdd,
    Hybrid,
}

impl Backend {
    pub const ALL: [Backend; 4] = [Backend::Hash, Backend::Mdt, Backend::Mdd, Backend::Hybrid];

    pub fn name(self) -> &'static str {
        match self {
            Backend::Hash => "hash",
            Backend::Mdt => "mdt",
            Backend::Mdd => "mdd",
            Backend::Hybrid => "hybrid",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Backend {
    type Err = StoreError;

    fn from_str(s: &str) -> Result<Self, StoreError> {
        Backend::ALL.into_iter().find(|b| b.name() == s).ok_or_else(|| StoreError::UnknownBackend(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StoreError {
    #[error("unknown backend `{0}` (expected hash, mdt, mdd or hybrid)")]
    UnknownBackend(String),
    #[error("hybrid threshold must be positive")]
    ZeroThreshold,
    #[error("arity must be positive")]
    ZeroArity,
}

/// Structure counts of a store. Fields that do not apply to a backend are 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct MemoryReport {
    pub hash_entries: usize,
    pub tree_nodes: usize,
    pub tree_edges: usize,
    pub dd_nodes: usize,
    pub dd_edges: usize,
    pub estimated_bytes: u64,
    pub peak_bytes: u64,
}

pub trait StateStore {
    fn backend(&self) -> Backend;

    /// Inserts `state`; true iff it was not present.
    fn add_if_new(&mut self, state: &[u32]) -> bool;

    fn contains(&self, state: &[u32]) -> bool;

    /// Distinct states added so far.
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Completes pending work (the hybrid's final flush).
    fn finish(&mut self) {}

    fn memory(&self) -> MemoryReport;

    /// Top-level diagram unions performed.
    fn union_calls(&self) -> u64 {
        0
    }

    fn flushes(&self) -> u64 {
        0
    }

    /// Deterministic listing of the stored set.
    fn dump(&self, w: &mut dyn Write) -> io::Result<()>;
}

pub fn make_store(backend: Backend, arity: usize, threshold: usize) -> Result<Box<dyn StateStore>, StoreError> {
    if arity == 0 {
        return Err(StoreError::ZeroArity);
    }
    Ok(match backend {
        Backend::Hash => Box::new(HashStore::new(arity)),
        Backend::Mdt => Box::new(MdtStore::new(arity)),
        Backend::Mdd => Box::new(MddStore::new(arity)),
        Backend::Hybrid => Box::new(HybridStore::new(arity, threshold)?),
    })
}

fn tree_bytes(t: &Mdt) -> u64 {
    t.node_count() as u64 * MDT_NODE_BYTES + t.edge_count() as u64 * MDT_EDGE_BYTES
}

fn dd_bytes(m: &MddManager) -> u64 {
    m.live_nodes() as u64 * MDD_NODE_BYTES + m.live_edges() as u64 * MDD_EDGE_BYTES
}

#[derive(Debug)]
pub struct HashStore {
    arity: usize,
    set: hashbrown::HashSet<Box<[u32]>>,
}

impl HashStore {
    pub fn new(arity: usize) -> Self {
        HashStore { arity, set: hashbrown::HashSet::new() }
    }

    fn bytes(&self) -> u64 {
        self.set.len() as u64 * (HASH_LABEL_BYTES * self.arity as u64 + HASH_ENTRY_BYTES)
    }
}

impl StateStore for HashStore {
    fn backend(&self) -> Backend {
        Backend::Hash
    }

    fn add_if_new(&mut self, state: &[u32]) -> bool {
        assert_eq!(state.len(), self.arity, "state arity");
        if self.set.contains(state) {
            return false;
        }
        self.set.insert(state.into())
    }

    fn contains(&self, state: &[u32]) -> bool {
        self.set.contains(state)
    }

    fn len(&self) -> usize {
        self.set.len()
    }

    fn memory(&self) -> MemoryReport {
        // the set only grows, so the current size is the peak
        let bytes = self.bytes();
        MemoryReport { hash_entries: self.set.len(), estimated_bytes: bytes, peak_bytes: bytes, ..Default::default() }
    }

    fn dump(&self, w: &mut dyn Write) -> io::Result<()> {
        let mut states: Vec<&Box<[u32]>> = self.set.iter().collect();
        states.sort();
        writeln!(w, "hash arity={} entries={}", self.arity, states.len())?;
        for s in states {
            let labels: Vec<String> = s.iter().map(u32::to_string).collect();
            writeln!(w, "{}", labels.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Debug)]
pub struct MdtStore {
    tree: Mdt,
}

impl MdtStore {
    pub fn new(arity: usize) -> Self {
        MdtStore { tree: Mdt::new(arity) }
    }
}

impl StateStore for MdtStore {
    fn backend(&self) -> Backend {
        Backend::Mdt
    }

    fn add_if_new(&mut self, state: &[u32]) -> bool {
        self.tree.add(state).expect("state arity")
    }

    fn contains(&self, state: &[u32]) -> bool {
        self.tree.contains(state).expect("state arity")
    }

    fn len(&self) -> usize {
        self.tree.len()
    }

    fn memory(&self) -> MemoryReport {
        let bytes = tree_bytes(&self.tree);
        MemoryReport {
            tree_nodes: self.tree.node_count(),
            tree_edges: self.tree.edge_count(),
            estimated_bytes: bytes,
            peak_bytes: bytes,
            ..Default::default()
        }
    }

    fn dump(&self, w: &mut dyn Write) -> io::Result<()> {
        self.tree.dump(w)
    }
}

/// One diagram, updated with a union for every new state.
#[derive(Debug)]
pub struct MddStore {
    mgr: MddManager,
    main: Option<Mdd>,
    len: usize,
    peak: u64,
}

impl MddStore {
    pub fn new(arity: usize) -> Self {
        let mgr = MddManager::new(arity);
        let main = Some(mgr.empty());
        MddStore { mgr, main, len: 0, peak: 0 }
    }

    pub fn manager(&self) -> &MddManager {
        &self.mgr
    }

    pub fn diagram(&self) -> &Mdd {
        self.main.as_ref().expect("main diagram present between calls")
    }
}

impl StateStore for MddStore {
    fn backend(&self) -> Backend {
        Backend::Mdd
    }

    fn add_if_new(&mut self, state: &[u32]) -> bool {
        if self.contains(state) {
            return false;
        }
        let path = self.mgr.create(state).expect("state arity");
        let old = self.main.take().expect("main diagram present between calls");
        let new = self.mgr.union(&old, &path);
        self.peak = self.peak.max(dd_bytes(&self.mgr));
        self.mgr.remove(old);
        self.mgr.remove(path);
        self.main = Some(new);
        self.len += 1;
        true
    }

    fn contains(&self, state: &[u32]) -> bool {
        self.mgr.contains(self.diagram(), state).expect("state arity")
    }

    fn len(&self) -> usize {
        self.len
    }

    fn memory(&self) -> MemoryReport {
        let bytes = dd_bytes(&self.mgr);
        MemoryReport {
            dd_nodes: self.mgr.live_nodes(),
            dd_edges: self.mgr.live_edges(),
            estimated_bytes: bytes,
            peak_bytes: self.peak.max(bytes),
            ..Default::default()
        }
    }

    fn union_calls(&self) -> u64 {
        self.mgr.union_calls()
    }

    fn dump(&self, w: &mut dyn Write) -> io::Result<()> {
        self.mgr.dump(self.diagram(), w)
    }
}

/// Tree buffer merged into a diagram once it holds `threshold` states.
#[derive(Debug)]
pub struct HybridStore {
    mgr: MddManager,
    main: Option<Mdd>,
    buffer: Mdt,
    threshold: usize,
    len: usize,
    flushes: u64,
    peak: u64,
}

impl HybridStore {
    pub fn new(arity: usize, threshold: usize) -> Result<Self, StoreError> {
        if threshold == 0 {
            return Err(StoreError::ZeroThreshold);
        }
        let mgr = MddManager::new(arity);
        let main = Some(mgr.empty());
        Ok(HybridStore { mgr, main, buffer: Mdt::new(arity), threshold, len: 0, flushes: 0, peak: 0 })
    }

    pub fn manager(&self) -> &MddManager {
        &self.mgr
    }

    pub fn diagram(&self) -> &Mdd {
        self.main.as_ref().expect("main diagram present between calls")
    }

    pub fn buffered(&self) -> usize {
        self.buffer.len()
    }

    fn bytes(&self) -> u64 {
        dd_bytes(&self.mgr) + tree_bytes(&self.buffer)
    }

    /// Merges the buffer into the main diagram. No-op on an empty buffer.
    pub fn flush(&mut self) {
        if self.buffer.is_empty() {
            return;
        }
        let compressed = self.mgr.compress(&self.buffer);
        let old = self.main.take().expect("main diagram present between calls");
        let merged = self.mgr.union(&old, &compressed);
        self.peak = self.peak.max(self.bytes());
        self.mgr.remove(old);
        self.mgr.remove(compressed);
        self.main = Some(merged);
        self.buffer.clear();
        self.flushes += 1;
    }
}

impl StateStore for HybridStore {
    fn backend(&self) -> Backend {
        Backend::Hybrid
    }

    fn add_if_new(&mut self, state: &[u32]) -> bool {
        if self.mgr.contains(self.diagram(), state).expect("state arity") || !self.buffer.add(state).expect("state arity") {
            return false;
        }
        self.len += 1;
        self.peak = self.peak.max(self.bytes());
        if self.buffer.len() >= self.threshold {
            self.flush();
        }
        true
    }

    fn contains(&self, state: &[u32]) -> bool {
        self.buffer.contains(state).expect("state arity") || self.mgr.contains(self.diagram(), state).expect("state arity")
    }

    fn len(&self) -> usize {
        self.len
    }

    fn finish(&mut self) {
        self.flush();
    }

    fn memory(&self) -> MemoryReport {
        let bytes = self.bytes();
        MemoryReport {
            tree_nodes: self.buffer.node_count(),
            tree_edges: self.buffer.edge_count(),
            dd_nodes: self.mgr.live_nodes(),
            dd_edges: self.mgr.live_edges(),
            estimated_bytes: bytes,
            peak_bytes: self.peak.max(bytes),
            ..Default::default()
        }
    }

    fn union_calls(&self) -> u64 {
        self.mgr.union_calls()
    }

    fn flushes(&self) -> u64 {
        self.flushes
    }

    fn dump(&self, w: &mut dyn Write) -> io::Result<()> {
        writeln!(w, "buffer")?;
        self.buffer.dump(w)?;
        writeln!(w, "main")?;
        self.mgr.dump(self.diagram(), w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    #[test]
    fn backend_names_round_trip() {
        for b in Backend::ALL {
            assert_eq!(b.name().parse::<Backend>().unwrap(), b);
        }
        assert_eq!("bogus".parse::<Backend>(), Err(StoreError::UnknownBackend("bogus".into())));
    }

    #[test]
    fn make_store_validates() {
        assert!(matches!(make_store(Backend::Hybrid, 3, 0), Err(StoreError::ZeroThreshold)));
        assert!(matches!(make_store(Backend::Hash, 0, 1), Err(StoreError::ZeroArity)));
        for b in Backend::ALL {
            assert_eq!(make_store(b, 2, 4).unwrap().backend(), b);
        }
    }

    #[test]
    fn duplicate_add_is_rejected_everywhere() {
        for b in Backend::ALL {
            let mut s = make_store(b, 3, 2).unwrap();
            assert!(s.add_if_new(&[1, 2, 3]));
            assert!(!s.add_if_new(&[1, 2, 3]));
            s.finish();
            assert_eq!(s.len(), 1, "{b}");
            assert!(s.contains(&[1, 2, 3]));
            assert!(!s.contains(&[1, 2, 4]));
        }
    }

    #[test]
    fn mdd_store_unions_once_per_new_state() {
        let mut s = MddStore::new(2);
        for i in 0..10 {
            s.add_if_new(&[i % 3, i]);
            s.add_if_new(&[i % 3, i]);
        }
        assert_eq!(s.union_calls(), 10);
    }

    #[test]
    fn empty_flush_keeps_main() {
        let mut s = HybridStore::new(2, 100).unwrap();
        s.add_if_new(&[0, 1]);
        s.flush();
        let root = s.diagram().root();
        s.flush();
        assert_eq!(s.diagram().root(), root);
        assert_eq!(s.flushes(), 1);
    }

    #[test]
    fn flush_moves_buffer_into_main() {
        let mut s = HybridStore::new(3, 1000).unwrap();
        for i in 0..37u32 {
            s.add_if_new(&[i % 2, i % 5, i]);
        }
        assert_eq!(s.buffered(), 37);
        s.finish();
        assert_eq!(s.buffered(), 0);
        assert_eq!(s.manager().path_count(s.diagram()), 37);
    }

    #[test]
    fn hybrid_flush_bound() {
        let theta = 16;
        let mut s = HybridStore::new(2, theta).unwrap();
        let k = 1000u32;
        for i in 0..k {
            s.add_if_new(&[i / 32, i % 32]);
        }
        s.finish();
        assert!(s.flushes() <= k as u64 / theta as u64 + 1);
        assert_eq!(s.union_calls(), s.flushes());
    }

    #[test]
    fn dumps_are_sorted() {
        let mut s = HashStore::new(2);
        s.add_if_new(&[1, 0]);
        s.add_if_new(&[0, 5]);
        let mut out = Vec::new();
        s.dump(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "hash arity=2 entries=2\n0 5\n1 0\n");
    }

    #[test]
    fn byte_estimates_follow_formula() {
        let mut h = HashStore::new(3);
        h.add_if_new(&[0, 0, 0]);
        assert_eq!(h.memory().estimated_bytes, 36);
        let mut t = MdtStore::new(3);
        t.add_if_new(&[0, 0, 0]);
        assert_eq!(t.memory().estimated_bytes, 3 * 32 + 3 * 16);
        let mut d = MddStore::new(3);
        d.add_if_new(&[0, 0, 0]);
        assert_eq!(d.memory().estimated_bytes, 3 * 40 + 3 * 8);
    }

    proptest! {
        #[test]
        fn hybrid_matches_hash_oracle(
            ops in prop::collection::vec((prop::collection::vec(0u32..4, 3), any::<bool>()), 0..300),
            theta in 1usize..40,
        ) {
            let mut hybrid = HybridStore::new(3, theta).unwrap();
            let mut oracle = HashSet::new();
            for (state, flush) in &ops {
                prop_assert_eq!(hybrid.add_if_new(state), oracle.insert(state.clone()));
                if *flush {
                    hybrid.flush();
                }
            }
            hybrid.finish();
            prop_assert_eq!(hybrid.len(), oracle.len());
            for a in 0..4 {
                for b in 0..4 {
                    for c in 0..4 {
                        let t = [a, b, c];
                        prop_assert_eq!(hybrid.contains(&t), oracle.contains(&t.to_vec()));
                    }
                }
            }
            hybrid.manager().verify(&[hybrid.diagram()]).map_err(TestCaseError::fail)?;
        }
    }
}
