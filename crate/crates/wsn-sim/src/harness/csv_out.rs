//! Per-round CSV emission.
//!
//! Fixed 8-column schema, one row per round, floats in exponent notation
//! with 9 significant digits. Rendering is pure so callers can diff runs
//! without touching the filesystem.

use std::fmt::Write as _;
use std::path::Path;

use crate::engine::SimulationResult;
use crate::error::{Error, Result};

pub const CSV_HEADER: &str =
    "round,alive,asleep,heads,packets_to_sink,residual_total_j,e_th_j,savings_total_j";

/// Renders the full CSV document: header plus one row per round,
/// newline-terminated.
pub fn render_round_csv(result: &SimulationResult) -> String {
    let mut out = String::with_capacity(64 * (result.per_round.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for m in &result.per_round {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{:.8e},{:.8e},{:.8e}",
            m.round,
            m.alive,
            m.asleep,
            m.heads,
            m.packets_to_sink,
            m.residual_total,
            m.e_th,
            m.savings_total,
        );
    }
    out
}

/// Writes [`render_round_csv`] to `path`, surfacing the path on failure.
pub fn write_round_csv(result: &SimulationResult, path: &Path) -> Result<()> {
    std::fs::write(path, render_round_csv(result)).map_err(|e| Error::io(path, e))
}
