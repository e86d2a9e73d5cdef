use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{rotating_threshold, ClusterAssignment, ClusterProtocol, ProtocolConfig};
use crate::network::{NodeId, NodeState};

/// Decides whether a sensed value warrants a transmission: it must exceed
/// the hard threshold, and differ from the node's last reported value by at
/// least the soft threshold (a first reading only needs the hard test).
pub fn teen_should_report(sensed: f64, last_reported: Option<f64>, config: &ProtocolConfig) -> bool {
    sensed > config.teen_hard_threshold
        && last_reported.is_none_or(|last| (sensed - last).abs() >= config.teen_soft_threshold)
}

/// Reactive variant of the rotating-threshold protocol: election is
/// unchanged, but members and direct transmitters only send when their
/// sensed value clears the hard/soft thresholds. Heads always forward the
/// round's aggregate.
#[derive(Debug, Clone)]
pub struct Teen {
    config: ProtocolConfig,
    /// Last value each node actually reported, indexed by id.
    last_reported: Vec<Option<f64>>,
}

impl Teen {
    pub fn new(config: ProtocolConfig) -> Self {
        Teen {
            config,
            last_reported: Vec::new(),
        }
    }
}

impl ClusterProtocol for Teen {
    fn name(&self) -> &'static str {
        "teen"
    }

    fn election_threshold(&self, node: &NodeState, round: u64, _mean_alive_energy: f64) -> f64 {
        rotating_threshold(self.config.p, round, node.last_head_round)
    }

    fn select_reporters(
        &mut self,
        nodes: &[NodeState],
        assignment: &ClusterAssignment,
        rng: &mut ChaCha8Rng,
    ) -> Option<BTreeSet<NodeId>> {
        if self.last_reported.len() < nodes.len() {
            self.last_reported.resize(nodes.len(), None);
        }
        let span = self.config.teen_sense_max - self.config.teen_sense_min;
        let mut reporters = BTreeSet::new();
        // one sensed draw per awake node in id order, regardless of role,
        // so the sensing stream does not depend on the election outcome
        for node in nodes.iter().filter(|n| n.alive && !n.asleep) {
            let sensed = self.config.teen_sense_min + rng.gen::<f64>() * span;
            if assignment.heads.contains(&node.id)
                || teen_should_report(sensed, self.last_reported[node.id], &self.config)
            {
                self.last_reported[node.id] = Some(sensed);
                reporters.insert(node.id);
            }
        }
        Some(reporters)
    }
}
