//! Multi-value decision diagrams over fixed-arity `u32` tuples.
//!
//! All diagrams of one [`MddManager`] share a unique table, so two live nodes
//! never have the same level and outgoing edges. Children are canonical before
//! their parent is built, which makes node equivalence plain structural
//! equality of `(level, edges)` and set equality of two diagrams the same as
//! equality of their root ids.
//!
//! Levels are strict: a node at level `k` only points to nodes at level `k+1`,
//! and only level `arity - 1` points to the terminal. Every path therefore has
//! exactly `arity` edges.
//!
//! Reference counts cover incoming edges from live nodes plus [`Mdd`] handles.
//! A handle is released with [`MddManager::remove`]; dropping it without doing
//! so leaks its nodes until the manager is dropped.

use hashbrown::HashMap;
use std::hash::BuildHasher;
use std::io::{self, Write};

use hashbrown::{DefaultHashBuilder, HashTable};

use crate::mdt::{check_arity, ArityMismatch, Mdt, TreeRef};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(u32);

impl NodeId {
    /// Root of the diagram with no paths.
    pub const EMPTY: NodeId = NodeId(u32::MAX);
    pub const TERMINAL: NodeId = NodeId(u32::MAX - 1);

    fn is_inner(self) -> bool {
        self.0 < NodeId::TERMINAL.0
    }

    pub fn index(self) -> u32 {
        self.0
    }
}

type Edge = (u32, NodeId);

#[derive(Debug, Clone)]
struct Node {
    level: u32,
    edges: Box<[Edge]>,
    refs: u32,
}

/// Owned handle to a diagram. Not `Clone`: use [`MddManager::share`] to take
/// another reference.
#[derive(Debug, PartialEq, Eq)]
#[must_use = "diagrams hold references until passed to `MddManager::remove`"]
pub struct Mdd {
    root: NodeId,
}

impl Mdd {
    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn is_empty(&self) -> bool {
        self.root == NodeId::EMPTY
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MddStats {
    /// Nodes currently in the unique table (all diagrams).
    pub live_nodes: usize,
    /// Non-terminal nodes reachable from this diagram's root.
    pub reachable_nodes: usize,
    pub reachable_edges: usize,
    pub paths: u128,
}

pub struct MddManager {
    arity: usize,
    nodes: Vec<Node>,
    free: Vec<u32>,
    unique: HashTable<u32>,
    hasher: DefaultHashBuilder,
    live_nodes: usize,
    live_edges: usize,
    union_calls: u64,
    cache_enabled: bool,
    cache: HashMap<(NodeId, NodeId), NodeId>,
    cache_hits: u64,
}

impl std::fmt::Debug for MddManager {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MddManager")
            .field("arity", &self.arity)
            .field("live_nodes", &self.live_nodes)
            .field("live_edges", &self.live_edges)
            .field("union_calls", &self.union_calls)
            .finish()
    }
}

impl MddManager {
    pub fn new(arity: usize) -> Self {
        assert!(arity > 0, "decision diagrams need arity >= 1");
        MddManager {
            arity,
            nodes: Vec::new(),
            free: Vec::new(),
            unique: HashTable::new(),
            hasher: DefaultHashBuilder::default(),
            live_nodes: 0,
            live_edges: 0,
            union_calls: 0,
            cache_enabled: true,
            cache: HashMap::new(),
            cache_hits: 0,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn live_nodes(&self) -> usize {
        self.live_nodes
    }

    pub fn live_edges(&self) -> usize {
        self.live_edges
    }

    /// Top-level `union` calls so far.
    pub fn union_calls(&self) -> u64 {
        self.union_calls
    }

    pub fn cache_hits(&self) -> u64 {
        self.cache_hits
    }

    /// Turns the union memo cache on or off. Results are identical either
    /// way; only the amount of recomputation differs.
    pub fn set_union_cache(&mut self, enabled: bool) {
        self.cache_enabled = enabled;
    }

    pub fn empty(&self) -> Mdd {
        Mdd { root: NodeId::EMPTY }
    }

    /// Reference count of a live node.
    pub fn refcount(&self, id: NodeId) -> Option<u32> {
        self.node(id).map(|n| n.refs)
    }

    fn node(&self, id: NodeId) -> Option<&Node> {
        if !id.is_inner() {
            return None;
        }
        self.nodes.get(id.0 as usize).filter(|n| n.refs > 0)
    }

    fn hash_key(hasher: &DefaultHashBuilder, level: u32, edges: &[Edge]) -> u64 {
        hasher.hash_one((level, edges))
    }

    fn retain(&mut self, id: NodeId) {
        if id.is_inner() {
            self.nodes[id.0 as usize].refs += 1;
        }
    }

    /// Drops one reference; nodes reaching zero leave the unique table and
    /// release their children.
    fn release(&mut self, id: NodeId) {
        let mut stack = vec![id];
        while let Some(id) = stack.pop() {
            if !id.is_inner() {
                continue;
            }
            let node = &mut self.nodes[id.0 as usize];
            assert!(node.refs > 0, "node {} released while dead (diagram removed twice?)", id.0);
            node.refs -= 1;
            if node.refs > 0 {
                continue;
            }
            let level = node.level;
            let edges = std::mem::take(&mut node.edges);
            let hash = Self::hash_key(&self.hasher, level, &edges);
            match self.unique.find_entry(hash, |&slot| slot == id.0) {
                Ok(entry) => {
                    entry.remove();
                }
                Err(_) => unreachable!("live node {} missing from unique table", id.0),
            }
            self.live_nodes -= 1;
            self.live_edges -= edges.len();
            self.free.push(id.0);
            stack.extend(edges.iter().map(|&(_, child)| child));
        }
    }

    /// Canonical node for `(level, edges)`. Takes ownership of one reference
    /// per child and returns one owned reference to the result.
    fn make_node(&mut self, level: u32, edges: Vec<Edge>) -> NodeId {
        if edges.is_empty() {
            return NodeId::EMPTY;
        }
        debug_assert!(edges.windows(2).all(|w| w[0].0 < w[1].0));
        let hash = Self::hash_key(&self.hasher, level, &edges);
        let nodes = &self.nodes;
        let found = self
            .unique
            .find(hash, |&slot| {
                let n = &nodes[slot as usize];
                n.level == level && *n.edges == *edges
            })
            .copied();
        if let Some(slot) = found {
            self.nodes[slot as usize].refs += 1;
            for (_, child) in edges {
                self.release(child);
            }
            return NodeId(slot);
        }
        self.live_nodes += 1;
        self.live_edges += edges.len();
        let node = Node { level, edges: edges.into_boxed_slice(), refs: 1 };
        let slot = match self.free.pop() {
            Some(slot) => {
                self.nodes[slot as usize] = node;
                slot
            }
            None => {
                let slot = u32::try_from(self.nodes.len()).ok().filter(|&s| s < NodeId::TERMINAL.0);
                self.nodes.push(node);
                slot.expect("node arena exhausted")
            }
        };
        let (nodes, hasher) = (&self.nodes, &self.hasher);
        self.unique.insert_unique(hash, slot, |&s| {
            let n = &nodes[s as usize];
            Self::hash_key(hasher, n.level, &n.edges)
        });
        NodeId(slot)
    }

    /// Another owned handle to the same diagram.
    pub fn share(&mut self, d: &Mdd) -> Mdd {
        self.retain(d.root);
        Mdd { root: d.root }
    }

    /// Releases a diagram. Nodes still used by other diagrams survive.
    pub fn remove(&mut self, d: Mdd) {
        self.release(d.root);
    }

    /// Diagram with the single path `tuple`.
    pub fn create(&mut self, tuple: &[u32]) -> Result<Mdd, ArityMismatch> {
        check_arity(self.arity, tuple)?;
        let mut child = NodeId::TERMINAL;
        for (level, &label) in tuple.iter().enumerate().rev() {
            child = self.make_node(level as u32, vec![(label, child)]);
        }
        Ok(Mdd { root: child })
    }

    pub fn contains(&self, d: &Mdd, tuple: &[u32]) -> Result<bool, ArityMismatch> {
        check_arity(self.arity, tuple)?;
        let mut id = d.root;
        for &label in tuple {
            let Some(node) = self.node(id) else { return Ok(false) };
            match node.edges.binary_search_by_key(&label, |&(l, _)| l) {
                Ok(i) => id = node.edges[i].1,
                Err(_) => return Ok(false),
            }
        }
        Ok(id == NodeId::TERMINAL)
    }

    /// Diagram of all paths in `a` or `b`. Inputs are left untouched.
    pub fn union(&mut self, a: &Mdd, b: &Mdd) -> Mdd {
        self.union_calls += 1;
        self.cache.clear();
        let root = self.union_rec(a.root, b.root);
        self.cache.clear();
        Mdd { root }
    }

    fn union_rec(&mut self, x: NodeId, y: NodeId) -> NodeId {
        if x == NodeId::EMPTY || x == y {
            self.retain(y);
            return y;
        }
        if y == NodeId::EMPTY {
            self.retain(x);
            return x;
        }
        debug_assert!(x.is_inner() && y.is_inner(), "union of terminal with inner node");
        let key = if x < y { (x, y) } else { (y, x) };
        if self.cache_enabled {
            if let Some(&hit) = self.cache.get(&key) {
                self.cache_hits += 1;
                self.retain(hit);
                return hit;
            }
        }
        let level = self.nodes[x.0 as usize].level;
        let (nx, ny) = (self.nodes[x.0 as usize].edges.len(), self.nodes[y.0 as usize].edges.len());
        let mut edges = Vec::with_capacity(nx.max(ny));
        let (mut i, mut j) = (0, 0);
        while i < nx || j < ny {
            let ex = (i < nx).then(|| self.nodes[x.0 as usize].edges[i]);
            let ey = (j < ny).then(|| self.nodes[y.0 as usize].edges[j]);
            let edge = match (ex, ey) {
                (Some((lx, cx)), Some((ly, cy))) if lx == ly => {
                    i += 1;
                    j += 1;
                    (lx, self.union_rec(cx, cy))
                }
                (Some((lx, cx)), Some((ly, _))) if lx < ly => {
                    i += 1;
                    self.retain(cx);
                    (lx, cx)
                }
                (Some((lx, cx)), None) => {
                    i += 1;
                    self.retain(cx);
                    (lx, cx)
                }
                (_, Some((ly, cy))) => {
                    j += 1;
                    self.retain(cy);
                    (ly, cy)
                }
                (None, None) => unreachable!(),
            };
            edges.push(edge);
        }
        let result = self.make_node(level, edges);
        if self.cache_enabled {
            self.cache.insert(key, result);
        }
        result
    }

    /// Converts a decision tree into a canonical diagram, merging equivalent
    /// subtrees bottom-up through the unique table.
    pub fn compress(&mut self, tree: &Mdt) -> Mdd {
        assert_eq!(tree.arity(), self.arity, "tree arity differs from manager arity");
        let root = self.compress_node(tree, tree.root(), 0);
        Mdd { root }
    }

    fn compress_node(&mut self, tree: &Mdt, node: u32, level: u32) -> NodeId {
        let edges = tree
            .children(node)
            .iter()
            .map(|&(label, child)| match child {
                TreeRef::Terminal => (label, NodeId::TERMINAL),
                TreeRef::Node(c) => (label, self.compress_node(tree, c, level + 1)),
            })
            .collect();
        self.make_node(level, edges)
    }

    fn for_each_reachable(&self, root: NodeId, mut f: impl FnMut(NodeId, &Node)) {
        let mut seen = hashbrown::HashSet::new();
        let mut stack = vec![root];
        while let Some(id) = stack.pop() {
            let Some(node) = self.node(id) else { continue };
            if !seen.insert(id) {
                continue;
            }
            f(id, node);
            stack.extend(node.edges.iter().map(|&(_, c)| c));
        }
    }

    pub fn path_count(&self, d: &Mdd) -> u128 {
        fn count(m: &MddManager, id: NodeId, memo: &mut HashMap<NodeId, u128>) -> u128 {
            if id == NodeId::TERMINAL {
                return 1;
            }
            let Some(node) = m.node(id) else { return 0 };
            if let Some(&c) = memo.get(&id) {
                return c;
            }
            let c = node.edges.iter().map(|&(_, child)| count(m, child, memo)).fold(0u128, u128::saturating_add);
            memo.insert(id, c);
            c
        }
        count(self, d.root, &mut HashMap::new())
    }

    pub fn stats(&self, d: &Mdd) -> MddStats {
        let (mut nodes, mut edges) = (0, 0);
        self.for_each_reachable(d.root, |_, n| {
            nodes += 1;
            edges += n.edges.len();
        });
        MddStats { live_nodes: self.live_nodes, reachable_nodes: nodes, reachable_edges: edges, paths: self.path_count(d) }
    }

    /// All paths in lexicographic order.
    pub fn tuples(&self, d: &Mdd) -> Vec<Vec<u32>> {
        fn walk(m: &MddManager, id: NodeId, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if id == NodeId::TERMINAL {
                out.push(prefix.clone());
                return;
            }
            let Some(node) = m.node(id) else { return };
            for &(label, child) in node.edges.iter() {
                prefix.push(label);
                walk(m, child, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        walk(self, d.root, &mut Vec::with_capacity(self.arity), &mut out);
        out
    }

    /// Deterministic listing of a diagram. Nodes are renumbered breadth-first
    /// from the root, children in label order, so the text depends only on
    /// the represented set.
    pub fn dump(&self, d: &Mdd, w: &mut dyn Write) -> io::Result<()> {
        let stats = self.stats(d);
        writeln!(w, "mdd arity={} nodes={} edges={} paths={}", self.arity, stats.reachable_nodes, stats.reachable_edges, stats.paths)?;
        let mut numbering: HashMap<NodeId, usize> = HashMap::new();
        let mut queue = std::collections::VecDeque::new();
        if self.node(d.root).is_some() {
            numbering.insert(d.root, 0);
            queue.push_back(d.root);
        }
        while let Some(id) = queue.pop_front() {
            let node = self.node(id).expect("reachable node is live");
            write!(w, "L{} n{}:", node.level, numbering[&id])?;
            for &(label, child) in node.edges.iter() {
                if child == NodeId::TERMINAL {
                    write!(w, " {label}->T")?;
                    continue;
                }
                let next = numbering.len();
                let n = *numbering.entry(child).or_insert_with(|| {
                    queue.push_back(child);
                    next
                });
                write!(w, " {label}->n{n}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    /// Checks level discipline, canonicity and that every reference count
    /// equals incoming edges plus the number of times the node appears in
    /// `roots`.
    pub fn verify(&self, roots: &[&Mdd]) -> Result<(), String> {
        let mut expected: HashMap<NodeId, u32> = HashMap::new();
        let mut keys = HashMap::new();
        let mut live = 0;
        for (i, n) in self.nodes.iter().enumerate() {
            if n.refs == 0 {
                continue;
            }
            live += 1;
            let id = NodeId(i as u32);
            if keys.insert((n.level, n.edges.clone()), id).is_some() {
                return Err(format!("duplicate node for key of n{i}"));
            }
            if n.edges.is_empty() || !n.edges.windows(2).all(|w| w[0].0 < w[1].0) {
                return Err(format!("n{i} has empty or unsorted edges"));
            }
            for &(_, c) in n.edges.iter() {
                let ok = if n.level as usize + 1 == self.arity {
                    c == NodeId::TERMINAL
                } else {
                    self.node(c).is_some_and(|cn| cn.level == n.level + 1)
                };
                if !ok {
                    return Err(format!("n{i} at level {} has a bad child", n.level));
                }
                if c.is_inner() {
                    *expected.entry(c).or_default() += 1;
                }
            }
        }
        if live != self.live_nodes || live != self.unique.len() {
            return Err(format!("live count {live} vs counter {} vs table {}", self.live_nodes, self.unique.len()));
        }
        for d in roots {
            if d.root.is_inner() {
                if self.node(d.root).is_some_and(|n| n.level != 0) {
                    return Err("root not at level 0".into());
                }
                *expected.entry(d.root).or_default() += 1;
            }
        }
        for (i, n) in self.nodes.iter().enumerate() {
            let want = expected.get(&NodeId(i as u32)).copied().unwrap_or(0);
            if n.refs != want {
                return Err(format!("n{i} has refcount {} but {want} references", n.refs));
            }
        }
        Ok(())
    }
}
