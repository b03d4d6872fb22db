//! Run reports and their JSON, CSV and text encodings.
//!
//! `ss` is states per second of wall-clock time. `ssd` is states per MB
//! (2^20 bytes) of `memory_bytes`, the store's peak estimate plus the
//! local-state tables. Only `elapsed_seconds` and `ss` depend on timing.

use std::io::{self, Write};

use serde::Serialize;

use crate::model::LpnSystem;
use crate::reach::{ReachReport, Termination};
use crate::store::Backend;

pub const BYTES_PER_MB: f64 = 1_048_576.0;

/// Column order of the CSV encoding; the header row is exactly these names.
pub const CSV_HEADER: [&str; 24] = [
    "model",
    "backend",
    "threshold",
    "modules",
    "places",
    "transitions",
    "states",
    "firings",
    "termination",
    "elapsed_seconds",
    "local_states",
    "hash_entries",
    "tree_nodes",
    "tree_edges",
    "dd_nodes",
    "dd_edges",
    "store_bytes",
    "peak_bytes",
    "local_state_bytes",
    "memory_bytes",
    "union_calls",
    "flushes",
    "ss",
    "ssd",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub model: String,
    pub backend: Backend,
    /// Buffer size of hybrid runs.
    pub threshold: Option<usize>,
    pub modules: usize,
    pub places: usize,
    pub transitions: usize,
    pub states: usize,
    pub firings: u64,
    pub termination: Termination,
    pub elapsed_seconds: f64,
    pub local_states: usize,
    pub hash_entries: usize,
    pub tree_nodes: usize,
    pub tree_edges: usize,
    pub dd_nodes: usize,
    pub dd_edges: usize,
    /// Store estimate at the end of the run.
    pub store_bytes: u64,
    /// Largest store estimate seen during the run.
    pub peak_bytes: u64,
    pub local_state_bytes: u64,
    pub memory_bytes: u64,
    pub union_calls: u64,
    pub flushes: u64,
    pub ss: f64,
    pub ssd: f64,
}

pub fn states_per_second(states: usize, elapsed_seconds: f64) -> f64 {
    states as f64 / elapsed_seconds.max(1e-9)
}

pub fn states_per_mb(states: usize, bytes: u64) -> f64 {
    if bytes == 0 {
        return 0.0;
    }
    states as f64 / (bytes as f64 / BYTES_PER_MB)
}

impl RunReport {
    pub fn new(model: &str, system: &LpnSystem, backend: Backend, threshold: usize, r: &ReachReport) -> Self {
        let elapsed_seconds = r.elapsed.as_secs_f64();
        let memory_bytes = r.memory.peak_bytes + r.local_state_bytes;
        RunReport {
            model: model.to_string(),
            backend,
            threshold: (backend == Backend::Hybrid).then_some(threshold),
            modules: system.len(),
            places: system.place_count(),
            transitions: system.transition_count(),
            states: r.states,
            firings: r.firings,
            termination: r.termination,
            elapsed_seconds,
            local_states: r.local_states,
            hash_entries: r.memory.hash_entries,
            tree_nodes: r.memory.tree_nodes,
            tree_edges: r.memory.tree_edges,
            dd_nodes: r.memory.dd_nodes,
            dd_edges: r.memory.dd_edges,
            store_bytes: r.memory.estimated_bytes,
            peak_bytes: r.memory.peak_bytes,
            local_state_bytes: r.local_state_bytes,
            memory_bytes,
            union_calls: r.union_calls,
            flushes: r.flushes,
            ss: states_per_second(r.states, elapsed_seconds),
            ssd: states_per_mb(r.states, memory_bytes),
        }
    }

    /// Copy with the timing-dependent fields zeroed.
    pub fn without_timing(&self) -> Self {
        RunReport { elapsed_seconds: 0.0, ss: 0.0, ..self.clone() }
    }
}

pub fn write_json(reports: &[RunReport], agree: Option<bool>, w: &mut dyn Write) -> io::Result<()> {
    let value = match (reports, agree) {
        ([single], None) => serde_json::to_value(single),
        _ => serde_json::to_value(serde_json::json!({ "runs": reports, "agree": agree })),
    }
    .map_err(io::Error::other)?;
    serde_json::to_writer_pretty(&mut *w, &value).map_err(io::Error::other)?;
    writeln!(w)
}

pub fn write_csv(reports: &[RunReport], w: &mut dyn Write) -> io::Result<()> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    out.write_record(CSV_HEADER).map_err(io::Error::other)?;
    for r in reports {
        out.serialize(r).map_err(io::Error::other)?;
    }
    out.flush()
}

pub fn write_text(reports: &[RunReport], agree: Option<bool>, w: &mut dyn Write) -> io::Result<()> {
    for (i, r) in reports.iter().enumerate() {
        if i > 0 {
            writeln!(w)?;
        }
        writeln!(w, "model            {}", r.model)?;
        match r.threshold {
            Some(t) => writeln!(w, "backend          {} (threshold {t})", r.backend)?,
            None => writeln!(w, "backend          {}", r.backend)?,
        }
        writeln!(w, "net              {} modules, {} places, {} transitions", r.modules, r.places, r.transitions)?;
        writeln!(w, "termination      {}", r.termination.name())?;
        writeln!(w, "states           {}", r.states)?;
        writeln!(w, "firings          {}", r.firings)?;
        writeln!(w, "local states     {}", r.local_states)?;
        writeln!(w, "elapsed          {:.3} s", r.elapsed_seconds)?;
        match r.backend {
            Backend::Hash => writeln!(w, "entries          {}", r.hash_entries)?,
            Backend::Mdt => writeln!(w, "tree             {} nodes, {} edges", r.tree_nodes, r.tree_edges)?,
            Backend::Mdd => writeln!(w, "diagram          {} nodes, {} edges", r.dd_nodes, r.dd_edges)?,
            Backend::Hybrid => {
                writeln!(w, "diagram          {} nodes, {} edges", r.dd_nodes, r.dd_edges)?;
                writeln!(w, "flushes          {}", r.flushes)?;
            }
        }
        writeln!(w, "union calls      {}", r.union_calls)?;
        writeln!(w, "memory (est.)    {} bytes peak store + {} bytes local states", r.peak_bytes, r.local_state_bytes)?;
        writeln!(w, "SS               {:.1} states/s", r.ss)?;
        writeln!(w, "SSD              {:.1} states/MB", r.ssd)?;
    }
    if let Some(agree) = agree {
        writeln!(w)?;
        writeln!(w, "agreement        {}", if agree { "yes" } else { "NO" })?;
    }
    Ok(())
}
