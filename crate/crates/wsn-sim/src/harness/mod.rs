//! Experiment orchestration: resolve a spec from file + CLI, run every
//! seed (both overlay arms in compare mode), and persist per-round CSVs
//! plus a key=value summary. All output is byte-deterministic: rerunning
//! the same spec rewrites identical files.

pub mod config_file;
pub mod csv_out;

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use crate::config::SimConfig;
use crate::engine::{
    self, compare_paired, summarize_batch, BatchSummary, PairedSummary, SimulationResult, Stats,
    WinRecord,
};
use crate::error::{Error, Result};

pub use config_file::{parse_config, Overrides};

/// A fully resolved experiment: the per-run configuration template plus
/// the seeds to sweep and where the artifacts go.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    /// Per-run configuration; `field.rng_seed` and (in compare mode)
    /// `ehorm` are overwritten per run.
    pub base: SimConfig,
    pub seeds: Vec<u64>,
    /// Run both overlay arms for every seed and report paired win rates.
    pub compare: bool,
    pub output_dir: PathBuf,
}

/// Everything an experiment produced, for callers that want more than the
/// files on disk.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutcome {
    /// One aggregate per arm, in run order (base arm first in compare mode).
    pub summaries: Vec<BatchSummary>,
    /// Variant-versus-base win tallies; compare mode only.
    pub paired: Option<PairedSummary>,
    /// The rendered contents of summary.txt.
    pub summary_text: String,
    /// Paths written, CSVs first, summary last.
    pub files: Vec<PathBuf>,
}

/// Runs every seed of the spec, writing `{label}_seed{seed}.csv` per run
/// and a `summary.txt` with batch statistics (plus paired win rates in
/// compare mode).
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutcome> {
    spec.base.validate()?;
    if spec.seeds.is_empty() {
        return Err(Error::config("seeds: need at least one seed"));
    }
    fs::create_dir_all(&spec.output_dir).map_err(|e| Error::io(&spec.output_dir, e))?;

    let arms: &[bool] = if spec.compare {
        &[false, true]
    } else {
        std::slice::from_ref(&spec.base.ehorm)
    };
    let mut results_per_arm: Vec<Vec<SimulationResult>> = Vec::with_capacity(arms.len());
    let mut files = Vec::new();
    for &ehorm in arms {
        let mut arm_results = Vec::with_capacity(spec.seeds.len());
        for &seed in &spec.seeds {
            let mut config = spec.base.clone();
            config.ehorm = ehorm;
            config.field.rng_seed = seed;
            let result = engine::run(config)?;
            let path = spec
                .output_dir
                .join(format!("{}_seed{}.csv", result.config.label(), seed));
            csv_out::write_round_csv(&result, &path)?;
            files.push(path);
            arm_results.push(result);
        }
        results_per_arm.push(arm_results);
    }

    let summaries = results_per_arm
        .iter()
        .map(|arm| summarize_batch(arm))
        .collect::<Result<Vec<_>>>()?;
    let paired = if spec.compare {
        Some(compare_paired(&results_per_arm[1], &results_per_arm[0])?)
    } else {
        None
    };

    let summary_text = render_summary(spec, &summaries, paired.as_ref());
    let summary_path = spec.output_dir.join("summary.txt");
    fs::write(&summary_path, &summary_text).map_err(|e| Error::io(&summary_path, e))?;
    files.push(summary_path);

    Ok(ExperimentOutcome {
        summaries,
        paired,
        summary_text,
        files,
    })
}

fn write_stats(out: &mut String, prefix: &str, metric: &str, stats: &Stats) {
    let _ = writeln!(out, "{prefix}.{metric}.mean = {}", stats.mean);
    let _ = writeln!(out, "{prefix}.{metric}.median = {}", stats.median);
    let _ = writeln!(out, "{prefix}.{metric}.min = {}", stats.min);
    let _ = writeln!(out, "{prefix}.{metric}.max = {}", stats.max);
}

fn write_wins(out: &mut String, metric: &str, record: &WinRecord) {
    let _ = writeln!(out, "paired.{metric}.wins = {}", record.wins);
    let _ = writeln!(out, "paired.{metric}.ties = {}", record.ties);
    let _ = writeln!(out, "paired.{metric}.losses = {}", record.losses);
    let _ = writeln!(
        out,
        "paired.{metric}.at_least_rate = {}",
        record.at_least_rate()
    );
}

fn render_summary(
    spec: &ExperimentSpec,
    summaries: &[BatchSummary],
    paired: Option<&PairedSummary>,
) -> String {
    let mut out = String::new();
    let seeds = spec
        .seeds
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(",");
    let _ = writeln!(out, "config.protocol = {}", spec.base.protocol.kind.name());
    let _ = writeln!(out, "config.compare = {}", spec.compare);
    let _ = writeln!(out, "config.ehorm = {}", spec.base.ehorm);
    let _ = writeln!(out, "config.seeds = {seeds}");
    let _ = writeln!(out, "config.nodes = {}", spec.base.field.node_count);
    let _ = writeln!(out, "config.max_rounds = {}", spec.base.max_rounds);
    for summary in summaries {
        let label = &summary.label;
        let _ = writeln!(out, "{label}.runs = {}", summary.runs);
        write_stats(&mut out, label, "stability", &summary.stability);
        let _ = writeln!(
            out,
            "{label}.stability.censored = {}",
            summary.stability_censored
        );
        write_stats(&mut out, label, "lifetime", &summary.lifetime);
        let _ = writeln!(
            out,
            "{label}.lifetime.censored = {}",
            summary.lifetime_censored
        );
        write_stats(&mut out, label, "packets", &summary.packets);
    }
    if let Some(p) = paired {
        let _ = writeln!(out, "paired.variant = {}", p.variant_label);
        let _ = writeln!(out, "paired.base = {}", p.base_label);
        let _ = writeln!(out, "paired.pairs = {}", p.pairs);
        write_wins(&mut out, "stability", &p.stability);
        write_wins(&mut out, "lifetime", &p.lifetime);
        write_wins(&mut out, "packets", &p.packets);
    }
    out
}
