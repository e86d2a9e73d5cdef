//! Cluster-head election, cluster formation, and per-round energy
//! accounting.
//!
//! Each protocol variant (LEACH, TEEN, SEP, DEEC) implements the
//! [`ClusterProtocol`] trait and is registered by name in
//! [`registry`]; the engine selects one at runtime from the
//! configuration. The shared operations here are protocol-agnostic:
//! they take the trait object where behavior differs.

mod deec;
mod leach;
pub mod registry;
mod sep;
mod teen;

pub use deec::Deec;
pub use leach::Leach;
pub use sep::Sep;
pub use teen::{teen_should_report, Teen};

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::network::{distance, NodeId, NodeState, Position, Role};
use crate::radio::{ch_round_energy, tx_energy, RadioParams};

/// The protocol families selectable at runtime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProtocolKind {
    Leach,
    Teen,
    Sep,
    Deec,
}

impl ProtocolKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "leach" => Some(ProtocolKind::Leach),
            "teen" => Some(ProtocolKind::Teen),
            "sep" => Some(ProtocolKind::Sep),
            "deec" => Some(ProtocolKind::Deec),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ProtocolKind::Leach => "leach",
            ProtocolKind::Teen => "teen",
            ProtocolKind::Sep => "sep",
            ProtocolKind::Deec => "deec",
        }
    }
}

/// Per-protocol election parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolConfig {
    pub kind: ProtocolKind,
    /// Desired cluster-head probability per round.
    pub p: f64,
    /// TEEN: sensed values below this are never reported.
    pub teen_hard_threshold: f64,
    /// TEEN: minimum change versus the last report that triggers a new one.
    pub teen_soft_threshold: f64,
    /// TEEN: synthetic sensed values are drawn uniformly from this range.
    pub teen_sense_min: f64,
    pub teen_sense_max: f64,
    /// DEEC: reference probability; defaults to `p`.
    pub deec_p_opt: f64,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        ProtocolConfig {
            kind: ProtocolKind::Leach,
            p: 0.1,
            teen_hard_threshold: 100.0,
            teen_soft_threshold: 2.0,
            teen_sense_min: 0.0,
            teen_sense_max: 200.0,
            deec_p_opt: 0.1,
        }
    }
}

impl ProtocolConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(Error::config(format!("p: must be in (0, 1), got {}", self.p)));
        }
        if !(self.deec_p_opt > 0.0 && self.deec_p_opt < 1.0) {
            return Err(Error::config(format!(
                "deec_p_opt: must be in (0, 1), got {}",
                self.deec_p_opt
            )));
        }
        if !self.teen_hard_threshold.is_finite() {
            return Err(Error::config(format!(
                "teen_hard: must be finite, got {}",
                self.teen_hard_threshold
            )));
        }
        if self.teen_soft_threshold.is_nan() || self.teen_soft_threshold < 0.0 {
            return Err(Error::config(format!(
                "teen_soft: must be >= 0, got {}",
                self.teen_soft_threshold
            )));
        }
        if !self.teen_sense_min.is_finite()
            || !self.teen_sense_max.is_finite()
            || self.teen_sense_min >= self.teen_sense_max
        {
            return Err(Error::config(format!(
                "teen_sense_min/teen_sense_max: need min < max, got {}..{}",
                self.teen_sense_min, self.teen_sense_max
            )));
        }
        Ok(())
    }
}

/// A protocol variant: how nodes decide to elect themselves cluster head,
/// and which awake nodes report data in a round.
pub trait ClusterProtocol: std::fmt::Debug {
    fn name(&self) -> &'static str;

    /// The election threshold T(n) for this node this round: the node
    /// becomes head when a uniform draw falls below it. `mean_alive_energy`
    /// is the mean residual energy over all alive nodes (sleeping included).
    fn election_threshold(&self, node: &NodeState, round: u64, mean_alive_energy: f64) -> f64;

    /// Which awake nodes transmit a data report this round. `None` means
    /// every assigned transmitter reports (the non-reactive protocols).
    /// Reactive protocols draw sensed values from `rng` and may suppress
    /// members and direct transmitters; cluster heads always forward.
    fn select_reporters(
        &mut self,
        nodes: &[NodeState],
        assignment: &ClusterAssignment,
        rng: &mut ChaCha8Rng,
    ) -> Option<BTreeSet<NodeId>> {
        let _ = (nodes, assignment, rng);
        None
    }
}

/// Rotating-threshold election shared by LEACH, TEEN, and SEP:
/// `T = p / (1 - p * (round mod epoch))` for nodes that have not served as
/// head in the current epoch (of `ceil(1/p)` rounds), zero otherwise.
pub(crate) fn rotating_threshold(p: f64, round: u64, last_head_round: Option<u64>) -> f64 {
    let epoch = (1.0 / p).ceil() as u64;
    let epoch_start = round - round % epoch;
    if last_head_round.is_some_and(|r| r >= epoch_start) {
        return 0.0;
    }
    let r_mod = (round % epoch) as f64;
    p / (1.0 - p * r_mod)
}

/// One round's cluster topology over the awake alive population.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ClusterAssignment {
    pub heads: BTreeSet<NodeId>,
    /// member id -> head id, for awake non-head nodes.
    pub membership: BTreeMap<NodeId, NodeId>,
    /// Awake nodes transmitting straight to the sink (rounds with no heads).
    pub direct_transmitters: BTreeSet<NodeId>,
}

impl ClusterAssignment {
    /// Checks that heads, members, and direct transmitters are disjoint and
    /// together cover exactly the awake alive population.
    pub fn validate_partition(&self, nodes: &[NodeState]) -> Result<()> {
        let mut seen: BTreeSet<NodeId> = BTreeSet::new();
        for &id in self
            .heads
            .iter()
            .chain(self.membership.keys())
            .chain(self.direct_transmitters.iter())
        {
            if !seen.insert(id) {
                return Err(Error::invalid(format!(
                    "node {id} appears in more than one assignment class"
                )));
            }
        }
        let awake: BTreeSet<NodeId> = nodes
            .iter()
            .filter(|n| n.alive && !n.asleep)
            .map(|n| n.id)
            .collect();
        if seen != awake {
            return Err(Error::invalid(format!(
                "assignment covers {} nodes, awake alive population is {}",
                seen.len(),
                awake.len()
            )));
        }
        Ok(())
    }
}

/// Runs one round of head election over the awake alive population: each
/// candidate, in id order, draws once from `rng` and becomes head when the
/// draw falls below its protocol threshold (clamped to [0, 1]).
pub fn elect_heads<R: Rng>(
    nodes: &[NodeState],
    protocol: &dyn ClusterProtocol,
    round: u64,
    rng: &mut R,
) -> BTreeSet<NodeId> {
    let mut alive = 0usize;
    let mut energy_sum = 0.0;
    for node in nodes.iter().filter(|n| n.alive) {
        alive += 1;
        energy_sum += node.residual_energy;
    }
    if alive == 0 {
        return BTreeSet::new();
    }
    let mean_alive_energy = energy_sum / alive as f64;

    let mut heads = BTreeSet::new();
    for node in nodes.iter().filter(|n| n.alive && !n.asleep) {
        let t = protocol
            .election_threshold(node, round, mean_alive_energy)
            .clamp(0.0, 1.0);
        if rng.gen::<f64>() < t {
            heads.insert(node.id);
        }
    }
    heads
}

/// Records an election outcome on the nodes: head roles and the headship
/// round that drives epoch eligibility.
pub fn apply_election(nodes: &mut [NodeState], heads: &BTreeSet<NodeId>, round: u64) {
    for &id in heads {
        nodes[id].role = Role::ClusterHead;
        nodes[id].last_head_round = Some(round);
    }
}

/// Assigns every awake non-head node to its nearest head (ties to the
/// smaller head id). With no heads, all awake nodes transmit direct.
pub fn form_clusters(nodes: &[NodeState], heads: &BTreeSet<NodeId>) -> ClusterAssignment {
    let mut assignment = ClusterAssignment {
        heads: heads.clone(),
        ..ClusterAssignment::default()
    };
    for node in nodes.iter().filter(|n| n.alive && !n.asleep) {
        if heads.contains(&node.id) {
            continue;
        }
        // ascending-id iteration plus strict < keeps the smaller id on ties
        let mut nearest: Option<(NodeId, f64)> = None;
        for &head in heads.iter() {
            let d = distance(node.position, nodes[head].position);
            if nearest.is_none_or(|(_, bd)| d < bd) {
                nearest = Some((head, d));
            }
        }
        match nearest {
            Some((head, _)) => {
                assignment.membership.insert(node.id, head);
            }
            None => {
                assignment.direct_transmitters.insert(node.id);
            }
        }
    }
    assignment
}

/// Result of one round of energy accounting.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundLedger {
    /// Joules deducted from each node this round, indexed by id.
    pub spent_by_node: Vec<f64>,
    /// Packets that reached the sink: head transmissions plus direct
    /// transmissions whose sender could afford the full cost.
    pub packets_delivered: u64,
    /// Total cluster-traffic energy: every head's bill plus its members'.
    pub e_total_ch: f64,
    /// `e_total_ch` averaged over the nodes in clusters.
    pub e_average_ch: f64,
    /// Heads plus assigned members this round.
    pub cluster_node_count: usize,
    /// Nodes that died during this round's accounting, in processing order.
    pub deaths: Vec<NodeId>,
}

impl RoundLedger {
    /// Sum of all per-node deductions.
    pub fn spent_total(&self) -> f64 {
        self.spent_by_node.iter().sum()
    }
}

/// Charges every transmitter for the round and counts sink deliveries.
///
/// Members pay the transmit cost to their head; heads pay the full
/// receive + aggregate + forward bill sized by how many of their members
/// reported; direct transmitters pay the transmit cost to the sink. A node
/// that cannot afford its bill spends what it has and dies, and its packet
/// is not delivered. `reporters` restricts which members and direct
/// transmitters send (`None` = all of them); heads always transmit.
pub fn account_round(
    nodes: &mut [NodeState],
    assignment: &ClusterAssignment,
    reporters: Option<&BTreeSet<NodeId>>,
    radio: &RadioParams,
    sink: Position,
) -> Result<RoundLedger> {
    let mut ledger = RoundLedger {
        spent_by_node: vec![0.0; nodes.len()],
        packets_delivered: 0,
        e_total_ch: 0.0,
        e_average_ch: 0.0,
        cluster_node_count: assignment.heads.len() + assignment.membership.len(),
        deaths: Vec::new(),
    };
    let reports = |id: NodeId| reporters.is_none_or(|set| set.contains(&id));

    let mut member_spend_by_head: BTreeMap<NodeId, f64> =
        assignment.heads.iter().map(|&h| (h, 0.0)).collect();
    let mut reporter_count_by_head: BTreeMap<NodeId, u64> =
        assignment.heads.iter().map(|&h| (h, 0)).collect();

    for (&member, &head) in &assignment.membership {
        if !reports(member) {
            continue;
        }
        let d = distance(nodes[member].position, nodes[head].position);
        let cost = tx_energy(radio, radio.packet_bits, d)?;
        let spent = nodes[member].deduct_energy(cost);
        ledger.spent_by_node[member] += spent;
        *member_spend_by_head.get_mut(&head).expect("head is registered") += spent;
        *reporter_count_by_head.get_mut(&head).expect("head is registered") += 1;
        if !nodes[member].alive {
            ledger.deaths.push(member);
        }
    }

    for &head in &assignment.heads {
        let d = distance(nodes[head].position, sink);
        let cost = ch_round_energy(radio, reporter_count_by_head[&head], d)?;
        let sufficient = nodes[head].residual_energy >= cost;
        let spent = nodes[head].deduct_energy(cost);
        ledger.spent_by_node[head] += spent;
        ledger.e_total_ch += spent + member_spend_by_head[&head];
        if sufficient {
            ledger.packets_delivered += 1;
        }
        if !nodes[head].alive {
            ledger.deaths.push(head);
        }
    }

    for &id in &assignment.direct_transmitters {
        if !reports(id) {
            continue;
        }
        let d = distance(nodes[id].position, sink);
        let cost = tx_energy(radio, radio.packet_bits, d)?;
        let sufficient = nodes[id].residual_energy >= cost;
        let spent = nodes[id].deduct_energy(cost);
        ledger.spent_by_node[id] += spent;
        if sufficient {
            ledger.packets_delivered += 1;
        }
        if !nodes[id].alive {
            ledger.deaths.push(id);
        }
    }

    if !assignment.heads.is_empty() {
        ledger.e_average_ch = ledger.e_total_ch / ledger.cluster_node_count as f64;
    }
    Ok(ledger)
}
