//! Threshold-based sleep/awake overlay.
//!
//! Each round, the energy a worst-placed cluster head would need to serve
//! the farthest alive node sets a floor `e_th`; alive nodes whose residual
//! energy falls below the floor sleep the round out instead of joining a
//! cluster. A savings ledger tracks the energy those sleepers would have
//! spent had they participated.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::network::{max_distance_alive_node, NodeId, NodeState, Position};
use crate::radio::{ch_round_energy, tx_energy, RadioParams};

/// Minimum energy a node must hold to stay awake: the cost of receiving
/// and aggregating one packet plus amplifying one over `max_distance`
/// (quartic, since the farthest node is the worst case the head must reach).
pub fn compute_threshold(radio: &RadioParams, max_distance: f64) -> Result<f64> {
    if !max_distance.is_finite() || max_distance < 0.0 {
        return Err(Error::invalid(format!(
            "max_distance: must be finite and >= 0, got {max_distance}"
        )));
    }
    let bits = radio.packet_bits as f64;
    Ok((radio.e_elec + radio.e_da) * bits + radio.e_mp * bits * max_distance.powi(4))
}

/// One round's sleep threshold and the node that set it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdState {
    pub e_th: f64,
    /// Alive node (sleeping included) farthest from the sink.
    pub max_node_id: NodeId,
    pub max_distance: f64,
}

/// Computes the round's threshold from the farthest alive node, or `None`
/// once the whole population is dead.
pub fn threshold_state(
    nodes: &[NodeState],
    radio: &RadioParams,
    sink: Position,
) -> Result<Option<ThresholdState>> {
    match max_distance_alive_node(nodes, sink) {
        Some((max_node_id, max_distance)) => Ok(Some(ThresholdState {
            e_th: compute_threshold(radio, max_distance)?,
            max_node_id,
            max_distance,
        })),
        None => Ok(None),
    }
}

/// Marks alive nodes below the threshold asleep for the round and returns
/// the `(awake, asleep)` id sets. A node holding exactly `e_th` stays
/// awake. Dead nodes are untouched and belong to neither set. The
/// classification is from scratch each call — sleep is never sticky.
pub fn classify_sleep(
    nodes: &mut [NodeState],
    e_th: f64,
) -> (BTreeSet<NodeId>, BTreeSet<NodeId>) {
    let mut awake = BTreeSet::new();
    let mut asleep = BTreeSet::new();
    for node in nodes.iter_mut().filter(|n| n.alive) {
        node.asleep = node.residual_energy < e_th;
        if node.asleep {
            asleep.insert(node.id);
        } else {
            awake.insert(node.id);
        }
    }
    (awake, asleep)
}

/// The duty a sleeping node was excused from, priced counterfactually.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WouldBeRole {
    /// Would have transmitted one packet over `tx_distance` (to its nearest
    /// head, or the sink when no heads formed).
    Member { tx_distance: f64 },
    /// Would have served as head: received and aggregated its members'
    /// packets and forwarded to the sink.
    ClusterHead {
        member_count: u64,
        distance_to_sink: f64,
    },
}

/// Running account of energy not spent thanks to sleeping.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SavingsLedger {
    /// This round's savings from would-be cluster members.
    pub per_round_normal: f64,
    /// This round's savings from would-be cluster heads.
    pub per_round_ch_equivalent: f64,
    /// Savings accumulated over all rounds.
    pub cumulative_total: f64,
}

impl SavingsLedger {
    pub fn per_round_total(&self) -> f64 {
        self.per_round_normal + self.per_round_ch_equivalent
    }
}

/// Prices each sleeper's would-be duty against the radio model and folds it
/// into the ledger; returns this round's total. Savings are bookkeeping
/// only — no node's residual energy changes.
pub fn record_savings(
    roles: &[WouldBeRole],
    radio: &RadioParams,
    ledger: &mut SavingsLedger,
) -> Result<f64> {
    ledger.per_round_normal = 0.0;
    ledger.per_round_ch_equivalent = 0.0;
    for role in roles {
        match *role {
            WouldBeRole::Member { tx_distance } => {
                ledger.per_round_normal += tx_energy(radio, radio.packet_bits, tx_distance)?;
            }
            WouldBeRole::ClusterHead {
                member_count,
                distance_to_sink,
            } => {
                ledger.per_round_ch_equivalent +=
                    ch_round_energy(radio, member_count, distance_to_sink)?;
            }
        }
    }
    let round_total = ledger.per_round_total();
    ledger.cumulative_total += round_total;
    Ok(round_total)
}
