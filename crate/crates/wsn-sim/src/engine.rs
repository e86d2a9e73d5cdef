//! Round-loop orchestration and batch statistics.
//!
//! A [`Simulation`] owns one run: the deployed nodes, the protocol
//! strategy, and the run's named RNG streams. Each round executes a fixed
//! phase order — sleep threshold, sleep classification, election, cluster
//! formation, report gating, energy accounting, savings bookkeeping,
//! metrics snapshot. With the overlay disabled the sleep phases are
//! skipped entirely and every alive node stays awake.

use std::collections::BTreeSet;

use rand_chacha::ChaCha8Rng;

use crate::config::SimConfig;
use crate::ehorm;
use crate::error::{Error, Result};
use crate::network::{
    alive_count, deploy, distance, total_residual_energy, NodeId, NodeState, Role,
};
use crate::protocols::{
    account_round, apply_election, elect_heads, form_clusters, registry, ClusterAssignment,
    ClusterProtocol,
};
use crate::radio::RadioParams;
use crate::rng::{stream_rng, STREAM_ELECTION, STREAM_SENSING};

/// End-of-round snapshot. `packets_to_sink`, `savings_total`, and
/// `consumed_total` are cumulative since round 0; the rest describe the
/// round itself.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundMetrics {
    pub round: u64,
    pub alive: usize,
    pub asleep: usize,
    pub heads: usize,
    pub packets_to_sink: u64,
    pub residual_total: f64,
    /// Sleep threshold used this round; zero when the overlay is off.
    pub e_th: f64,
    /// Cumulative counterfactual savings; zero when the overlay is off.
    pub savings_total: f64,
    pub consumed_total: f64,
    /// This round's cluster-traffic energy (heads plus their members).
    pub e_total_ch: f64,
    /// `e_total_ch` averaged over the `cluster_node_count` nodes in clusters.
    pub e_average_ch: f64,
    pub cluster_node_count: usize,
}

/// How one node's run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeOutcome {
    pub id: NodeId,
    pub is_advanced: bool,
    /// Round during which the node died; `None` if it outlived the run.
    pub death_round: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationResult {
    /// The fully resolved configuration that produced this run.
    pub config: SimConfig,
    pub per_round: Vec<RoundMetrics>,
    /// Round of the first node death; `None` if nothing died.
    pub stability_period: Option<u64>,
    /// Round of the last node death; `None` while any node survives
    /// (a run stopped by max_rounds is censored, not finished).
    pub network_lifetime: Option<u64>,
    pub total_packets: u64,
    pub node_outcomes: Vec<NodeOutcome>,
}

/// One in-progress run.
pub struct Simulation {
    config: SimConfig,
    radio: RadioParams,
    protocol: Box<dyn ClusterProtocol>,
    nodes: Vec<NodeState>,
    election_rng: ChaCha8Rng,
    sensing_rng: ChaCha8Rng,
    round: u64,
    initial_energy: f64,
    consumed_total: f64,
    packets_total: u64,
    savings: ehorm::SavingsLedger,
    first_death_round: Option<u64>,
    last_death_round: Option<u64>,
    death_rounds: Vec<Option<u64>>,
    last_assignment: Option<ClusterAssignment>,
    last_reporters: Option<BTreeSet<NodeId>>,
}

impl Simulation {
    pub fn new(config: SimConfig) -> Result<Self> {
        config.validate()?;
        let radio = config.radio()?;
        let protocol = registry::create(config.protocol.kind.name(), &config.protocol, &config.field)?;
        let nodes = deploy(&config.field);
        let seed = config.field.rng_seed;
        let initial_energy = total_residual_energy(&nodes);
        let death_rounds = vec![None; nodes.len()];
        Ok(Simulation {
            election_rng: stream_rng(seed, STREAM_ELECTION),
            sensing_rng: stream_rng(seed, STREAM_SENSING),
            config,
            radio,
            protocol,
            nodes,
            round: 0,
            initial_energy,
            consumed_total: 0.0,
            packets_total: 0,
            savings: ehorm::SavingsLedger::default(),
            first_death_round: None,
            last_death_round: None,
            death_rounds,
            last_assignment: None,
            last_reporters: None,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn nodes(&self) -> &[NodeState] {
        &self.nodes
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn initial_energy(&self) -> f64 {
        self.initial_energy
    }

    pub fn consumed_total(&self) -> f64 {
        self.consumed_total
    }

    /// Cluster topology of the most recent round.
    pub fn last_assignment(&self) -> Option<&ClusterAssignment> {
        self.last_assignment.as_ref()
    }

    /// Reporting set of the most recent round (`None` = everyone reported).
    pub fn last_reporters(&self) -> Option<&BTreeSet<NodeId>> {
        self.last_reporters.as_ref()
    }

    /// Executes one round and returns its metrics, or `None` once no node
    /// is alive (the run-complete signal).
    pub fn step_round(&mut self) -> Result<Option<RoundMetrics>> {
        if alive_count(&self.nodes) == 0 {
            return Ok(None);
        }
        let round = self.round;
        let sink = self.config.field.sink_position;

        for node in self.nodes.iter_mut() {
            node.asleep = false;
            if node.alive {
                node.role = Role::Member;
            }
        }

        let mut e_th = 0.0;
        let mut asleep_count = 0usize;
        if self.config.ehorm {
            let state = ehorm::threshold_state(&self.nodes, &self.radio, sink)?
                .expect("an alive node exists");
            e_th = state.e_th;
            let (_, asleep) = ehorm::classify_sleep(&mut self.nodes, e_th);
            asleep_count = asleep.len();
        }

        let heads = elect_heads(&self.nodes, self.protocol.as_ref(), round, &mut self.election_rng);
        apply_election(&mut self.nodes, &heads, round);
        let assignment = form_clusters(&self.nodes, &heads);
        for &id in &assignment.direct_transmitters {
            self.nodes[id].role = Role::Direct;
        }
        #[cfg(debug_assertions)]
        assignment.validate_partition(&self.nodes)?;

        let reporters =
            self.protocol
                .select_reporters(&self.nodes, &assignment, &mut self.sensing_rng);

        let ledger = if self.config.freeze_energy {
            // price the round against a scratch copy so residuals stay put
            let mut scratch = self.nodes.clone();
            account_round(&mut scratch, &assignment, reporters.as_ref(), &self.radio, sink)?
        } else {
            account_round(
                &mut self.nodes,
                &assignment,
                reporters.as_ref(),
                &self.radio,
                sink,
            )?
        };
        self.packets_total += ledger.packets_delivered;
        if !self.config.freeze_energy {
            self.consumed_total += ledger.spent_total();
            for &id in &ledger.deaths {
                self.death_rounds[id] = Some(round);
            }
            if !ledger.deaths.is_empty() {
                if self.first_death_round.is_none() {
                    self.first_death_round = Some(round);
                }
                if alive_count(&self.nodes) == 0 {
                    self.last_death_round = Some(round);
                }
            }
        }

        if self.config.ehorm {
            let roles: Vec<ehorm::WouldBeRole> = self
                .nodes
                .iter()
                .filter(|n| n.alive && n.asleep)
                .map(|n| {
                    let tx_distance = assignment
                        .heads
                        .iter()
                        .map(|&h| distance(n.position, self.nodes[h].position))
                        .fold(f64::INFINITY, f64::min);
                    ehorm::WouldBeRole::Member {
                        tx_distance: if assignment.heads.is_empty() {
                            distance(n.position, sink)
                        } else {
                            tx_distance
                        },
                    }
                })
                .collect();
            ehorm::record_savings(&roles, &self.radio, &mut self.savings)?;
        }

        let metrics = RoundMetrics {
            round,
            alive: alive_count(&self.nodes),
            asleep: asleep_count,
            heads: heads.len(),
            packets_to_sink: self.packets_total,
            residual_total: total_residual_energy(&self.nodes),
            e_th,
            savings_total: self.savings.cumulative_total,
            consumed_total: self.consumed_total,
            e_total_ch: ledger.e_total_ch,
            e_average_ch: ledger.e_average_ch,
            cluster_node_count: ledger.cluster_node_count,
        };
        self.last_assignment = Some(assignment);
        self.last_reporters = reporters;
        self.round += 1;
        Ok(Some(metrics))
    }

    pub fn into_result(self, per_round: Vec<RoundMetrics>) -> SimulationResult {
        SimulationResult {
            node_outcomes: self
                .nodes
                .iter()
                .map(|n| NodeOutcome {
                    id: n.id,
                    is_advanced: n.is_advanced,
                    death_round: self.death_rounds[n.id],
                })
                .collect(),
            config: self.config,
            per_round,
            stability_period: self.first_death_round,
            network_lifetime: self.last_death_round,
            total_packets: self.packets_total,
        }
    }
}

/// Deploys and runs to completion: until every node is dead or
/// `max_rounds` rounds have executed. Deterministic per seed.
pub fn run(config: SimConfig) -> Result<SimulationResult> {
    let mut sim = Simulation::new(config)?;
    let max_rounds = sim.config.max_rounds;
    let mut per_round = Vec::with_capacity(max_rounds.min(16_384) as usize);
    while sim.round < max_rounds {
        match sim.step_round()? {
            Some(metrics) => per_round.push(metrics),
            None => break,
        }
    }
    Ok(sim.into_result(per_round))
}

/// Mean/median/min/max of one batch metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stats {
    pub mean: f64,
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

fn stats(values: &[f64]) -> Stats {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite metric"));
    let n = sorted.len();
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    };
    Stats {
        mean: sorted.iter().sum::<f64>() / n as f64,
        median,
        min: sorted[0],
        max: sorted[n - 1],
    }
}

/// Multi-seed aggregate of one experiment arm. Runs whose first or last
/// death never happened are censored at `max_rounds` and counted.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchSummary {
    pub label: String,
    pub runs: usize,
    pub max_rounds: u64,
    pub stability: Stats,
    pub lifetime: Stats,
    pub packets: Stats,
    /// Runs in which no node ever died.
    pub stability_censored: usize,
    /// Runs in which some node outlived max_rounds.
    pub lifetime_censored: usize,
}

fn config_ignoring_seed(config: &SimConfig) -> SimConfig {
    let mut config = config.clone();
    config.field.rng_seed = 0;
    config
}

/// Aggregates runs that differ only in seed; mixed configurations are an
/// argument error.
pub fn summarize_batch(results: &[SimulationResult]) -> Result<BatchSummary> {
    let first = results
        .first()
        .ok_or_else(|| Error::invalid("results: need at least one run"))?;
    let reference = config_ignoring_seed(&first.config);
    for r in results {
        if config_ignoring_seed(&r.config) != reference {
            return Err(Error::invalid(
                "results: runs come from different configurations",
            ));
        }
    }
    let max_rounds = first.config.max_rounds;
    let censor = |round: Option<u64>| round.unwrap_or(max_rounds) as f64;
    let stability_values: Vec<f64> = results.iter().map(|r| censor(r.stability_period)).collect();
    let lifetime_values: Vec<f64> = results.iter().map(|r| censor(r.network_lifetime)).collect();
    let packet_values: Vec<f64> = results.iter().map(|r| r.total_packets as f64).collect();
    Ok(BatchSummary {
        label: first.config.label(),
        runs: results.len(),
        max_rounds,
        stability: stats(&stability_values),
        lifetime: stats(&lifetime_values),
        packets: stats(&packet_values),
        stability_censored: results.iter().filter(|r| r.stability_period.is_none()).count(),
        lifetime_censored: results.iter().filter(|r| r.network_lifetime.is_none()).count(),
    })
}

/// Win/tie/loss tally for one metric, variant versus base ("higher is
/// better" for stability, lifetime, and packets alike).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WinRecord {
    pub wins: usize,
    pub ties: usize,
    pub losses: usize,
}

impl WinRecord {
    fn tally(&mut self, variant: f64, base: f64) {
        if variant > base {
            self.wins += 1;
        } else if variant < base {
            self.losses += 1;
        } else {
            self.ties += 1;
        }
    }

    pub fn pairs(&self) -> usize {
        self.wins + self.ties + self.losses
    }

    /// Fraction of pairs where the variant was at least as good as the base.
    pub fn at_least_rate(&self) -> f64 {
        (self.wins + self.ties) as f64 / self.pairs() as f64
    }
}

/// Seed-paired comparison of two experiment arms.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedSummary {
    pub variant_label: String,
    pub base_label: String,
    pub pairs: usize,
    pub stability: WinRecord,
    pub lifetime: WinRecord,
    pub packets: WinRecord,
}

/// Tallies per-seed wins of `variant` over `base`. The lists must be the
/// same length with matching seeds pair by pair.
pub fn compare_paired(
    variant: &[SimulationResult],
    base: &[SimulationResult],
) -> Result<PairedSummary> {
    if variant.is_empty() || variant.len() != base.len() {
        return Err(Error::invalid(format!(
            "paired comparison needs equal non-empty result lists, got {} vs {}",
            variant.len(),
            base.len()
        )));
    }
    let mut summary = PairedSummary {
        variant_label: variant[0].config.label(),
        base_label: base[0].config.label(),
        pairs: variant.len(),
        stability: WinRecord::default(),
        lifetime: WinRecord::default(),
        packets: WinRecord::default(),
    };
    for (v, b) in variant.iter().zip(base) {
        if v.config.field.rng_seed != b.config.field.rng_seed {
            return Err(Error::invalid(format!(
                "paired results must share seeds, got {} vs {}",
                v.config.field.rng_seed, b.config.field.rng_seed
            )));
        }
        let censor_v = |r: Option<u64>| r.unwrap_or(v.config.max_rounds) as f64;
        let censor_b = |r: Option<u64>| r.unwrap_or(b.config.max_rounds) as f64;
        summary
            .stability
            .tally(censor_v(v.stability_period), censor_b(b.stability_period));
        summary
            .lifetime
            .tally(censor_v(v.network_lifetime), censor_b(b.network_lifetime));
        summary
            .packets
            .tally(v.total_packets as f64, b.total_packets as f64);
    }
    Ok(summary)
}
