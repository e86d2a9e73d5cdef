use super::{rotating_threshold, ClusterProtocol};
use crate::network::NodeState;

/// Classic rotating-threshold election: every alive node volunteers with
/// probability rising over the epoch so that each serves as head about once
/// per `ceil(1/p)` rounds.
#[derive(Debug, Clone)]
pub struct Leach {
    p: f64,
}

impl Leach {
    pub fn new(p: f64) -> Self {
        Leach { p }
    }
}

impl ClusterProtocol for Leach {
    fn name(&self) -> &'static str {
        "leach"
    }

    fn election_threshold(&self, node: &NodeState, round: u64, _mean_alive_energy: f64) -> f64 {
        rotating_threshold(self.p, round, node.last_head_round)
    }
}
