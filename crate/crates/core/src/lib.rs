//! Explicit-state reachability for labeled Petri nets with interchangeable
//! state stores: hash set, decision tree, decision diagram, and a
//! tree-buffered diagram.

pub mod bench;
pub mod expr;
pub mod mdd;
pub mod mdt;
pub mod model;
pub mod reach;
pub mod state;
pub mod store;
