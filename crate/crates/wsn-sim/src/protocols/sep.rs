use super::{rotating_threshold, ClusterProtocol};
use crate::network::NodeState;

/// Heterogeneity-aware rotating election: advanced nodes (extra initial
/// energy) volunteer with a weighted probability so they serve as head more
/// often, each class rotating on its own epoch.
#[derive(Debug, Clone)]
pub struct Sep {
    p_normal: f64,
    p_advanced: f64,
}

impl Sep {
    /// `fraction` of nodes carry `1 + alpha` times the normal initial
    /// energy. Weighted probabilities keep the expected head count at
    /// `n * p`: normal nodes use `p / (1 + alpha * fraction)`, advanced
    /// nodes `p * (1 + alpha) / (1 + alpha * fraction)`.
    pub fn new(p: f64, fraction: f64, alpha: f64) -> Self {
        let denom = 1.0 + alpha * fraction;
        Sep {
            p_normal: p / denom,
            p_advanced: p * (1.0 + alpha) / denom,
        }
    }

    pub fn p_normal(&self) -> f64 {
        self.p_normal
    }

    pub fn p_advanced(&self) -> f64 {
        self.p_advanced
    }
}

impl ClusterProtocol for Sep {
    fn name(&self) -> &'static str {
        "sep"
    }

    fn election_threshold(&self, node: &NodeState, round: u64, _mean_alive_energy: f64) -> f64 {
        let p = if node.is_advanced {
            self.p_advanced
        } else {
            self.p_normal
        };
        rotating_threshold(p, round, node.last_head_round)
    }
}
