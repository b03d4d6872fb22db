//! Multi-value decision tree: a trie over fixed-arity `u32` tuples.
//!
//! Every non-terminal node has exactly one parent, so inserting is a single
//! walk down from the root. All complete paths end in one shared terminal.

use std::cell::Cell;

use smallvec::SmallVec;

/// Tuple length differs from the structure's arity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("expected a tuple of length {expected}, got {found}")]
pub struct ArityMismatch {
    pub expected: usize,
    pub found: usize,
}

pub(crate) fn check_arity(expected: usize, tuple: &[u32]) -> Result<(), ArityMismatch> {
    if tuple.len() == expected {
        Ok(())
    } else {
        Err(ArityMismatch { expected, found: tuple.len() })
    }
}

/// Edge target inside a tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeRef {
    Node(u32),
    Terminal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MdtStats {
    /// Non-terminal nodes plus the terminal.
    pub nodes: usize,
    pub edges: usize,
    pub paths: usize,
}

type Children = SmallVec<[(u32, TreeRef); 2]>;

fn find(children: &[(u32, TreeRef)], label: u32) -> Result<usize, usize> {
    children.binary_search_by_key(&label, |&(l, _)| l)
}

#[derive(Debug, Clone)]
pub struct Mdt {
    arity: usize,
    // nodes[0] is the root; children sorted by label
    nodes: Vec<Children>,
    edges: usize,
    paths: usize,
    visits: Cell<usize>,
}

impl Mdt {
    pub fn new(arity: usize) -> Self {
        assert!(arity > 0, "decision trees need arity >= 1");
        Mdt { arity, nodes: vec![Children::new()], edges: 0, paths: 0, visits: Cell::new(0) }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of stored tuples.
    pub fn len(&self) -> usize {
        self.paths
    }

    pub fn is_empty(&self) -> bool {
        self.paths == 0
    }

    /// Non-terminal nodes, root included.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn stats(&self) -> MdtStats {
        MdtStats { nodes: self.nodes.len() + 1, edges: self.edges, paths: self.paths }
    }

    /// Nodes touched by the last `add` or `contains`.
    pub fn last_visits(&self) -> usize {
        self.visits.get()
    }

    /// Adds `tuple`; returns whether an edge had to be created.
    pub fn add(&mut self, tuple: &[u32]) -> Result<bool, ArityMismatch> {
        check_arity(self.arity, tuple)?;
        let last = self.arity - 1;
        let mut node = 0usize;
        let mut visits = 1;
        for (level, &label) in tuple.iter().enumerate() {
            let next = match find(&self.nodes[node], label) {
                Ok(i) => match self.nodes[node][i].1 {
                    TreeRef::Node(child) => child as usize,
                    TreeRef::Terminal => {
                        self.visits.set(visits);
                        return Ok(false);
                    }
                },
                Err(i) if level == last => {
                    self.nodes[node].insert(i, (label, TreeRef::Terminal));
                    self.edges += 1;
                    self.paths += 1;
                    self.visits.set(visits);
                    return Ok(true);
                }
                Err(i) => {
                    let child = self.nodes.len();
                    self.nodes.push(Children::new());
                    self.nodes[node].insert(i, (label, TreeRef::Node(child as u32)));
                    self.edges += 1;
                    child
                }
            };
            node = next;
            visits += 1;
        }
        unreachable!("walk of a full-length tuple ends at the terminal")
    }

    pub fn contains(&self, tuple: &[u32]) -> Result<bool, ArityMismatch> {
        check_arity(self.arity, tuple)?;
        let mut node = 0usize;
        let mut visits = 1;
        for &label in tuple {
            match find(&self.nodes[node], label).map(|i| self.nodes[node][i].1) {
                Ok(TreeRef::Node(child)) => node = child as usize,
                Ok(TreeRef::Terminal) => {
                    self.visits.set(visits);
                    return Ok(true);
                }
                Err(_) => {
                    self.visits.set(visits);
                    return Ok(false);
                }
            }
            visits += 1;
        }
        unreachable!("walk of a full-length tuple ends at the terminal")
    }

    /// Drops every tuple, keeping the arity.
    pub fn clear(&mut self) {
        self.nodes.clear();
        self.nodes.push(Children::new());
        self.edges = 0;
        self.paths = 0;
    }

    pub fn root(&self) -> u32 {
        0
    }

    /// Outgoing edges of a node, ordered by label.
    pub fn children(&self, node: u32) -> &[(u32, TreeRef)] {
        &self.nodes[node as usize]
    }

    /// Stored tuples in lexicographic order.
    pub fn tuples(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::with_capacity(self.paths);
        let mut prefix = Vec::with_capacity(self.arity);
        self.collect(0, &mut prefix, &mut out);
        out
    }

    fn collect(&self, node: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        for &(label, child) in &self.nodes[node as usize] {
            prefix.push(label);
            match child {
                TreeRef::Terminal => out.push(prefix.clone()),
                TreeRef::Node(c) => self.collect(c, prefix, out),
            }
            prefix.pop();
        }
    }

    /// Indented listing of the tree, one edge per line, children in label
    /// order.
    pub fn dump(&self, w: &mut dyn std::io::Write) -> std::io::Result<()> {
        writeln!(w, "mdt arity={} nodes={} edges={} paths={}", self.arity, self.nodes.len(), self.edges, self.paths)?;
        let mut stack: Vec<(usize, u32, TreeRef)> = Vec::new();
        for &(label, child) in self.nodes[0].iter().rev() {
            stack.push((0, label, child));
        }
        while let Some((depth, label, child)) = stack.pop() {
            let indent = "  ".repeat(depth);
            match child {
                TreeRef::Terminal => writeln!(w, "{indent}{label} -> T")?,
                TreeRef::Node(c) => {
                    writeln!(w, "{indent}{label}")?;
                    for &(l, cc) in self.nodes[c as usize].iter().rev() {
                        stack.push((depth + 1, l, cc));
                    }
                }
            }
        }
        Ok(())
    }
}
