use super::ClusterProtocol;
use crate::network::NodeState;

/// Energy-proportional election: a node's chance of becoming head scales
/// with its residual energy relative to the current population mean, so
/// well-charged nodes shoulder more headship duty as the network drains.
#[derive(Debug, Clone)]
pub struct Deec {
    p_opt: f64,
}

impl Deec {
    pub fn new(p_opt: f64) -> Self {
        Deec { p_opt }
    }
}

impl ClusterProtocol for Deec {
    fn name(&self) -> &'static str {
        "deec"
    }

    fn election_threshold(&self, node: &NodeState, _round: u64, mean_alive_energy: f64) -> f64 {
        if mean_alive_energy <= 0.0 {
            return 0.0;
        }
        (self.p_opt * node.residual_energy / mean_alive_energy).clamp(0.0, 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{deploy, FieldConfig};
    use crate::protocols::elect_heads;
    use crate::rng::{stream_rng, STREAM_ELECTION};

    fn node_with_energy(e: f64) -> NodeState {
        let mut nodes = deploy(&FieldConfig {
            node_count: 1,
            hetero_fraction: 0.0,
            ..FieldConfig::default()
        });
        nodes[0].residual_energy = e;
        nodes.remove(0)
    }

    #[test]
    fn threshold_is_p_opt_at_mean_energy() {
        let deec = Deec::new(0.1);
        let node = node_with_energy(0.5);
        assert!((deec.election_threshold(&node, 0, 0.5) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn threshold_scales_with_residual_energy() {
        let deec = Deec::new(0.1);
        let rich = node_with_energy(1.0);
        let poor = node_with_energy(0.25);
        let t_rich = deec.election_threshold(&rich, 0, 0.5);
        let t_poor = deec.election_threshold(&poor, 0, 0.5);
        assert!((t_rich - 0.2).abs() < 1e-15);
        assert!((t_poor - 0.05).abs() < 1e-15);
    }

    #[test]
    fn threshold_caps_at_one() {
        let deec = Deec::new(0.5);
        let node = node_with_energy(10.0);
        assert_eq!(deec.election_threshold(&node, 0, 0.5), 1.0);
    }

    #[test]
    fn drained_population_elects_no_heads() {
        let deec = Deec::new(0.1);
        let node = node_with_energy(0.0);
        assert_eq!(deec.election_threshold(&node, 0, 0.0), 0.0);
    }

    #[test]
    fn rich_nodes_head_more_often() {
        let mut nodes = deploy(&FieldConfig {
            node_count: 100,
            hetero_fraction: 0.0,
            ..FieldConfig::default()
        });
        // give the top half of ids double energy
        for node in nodes.iter_mut().skip(50) {
            node.residual_energy = 1.0;
        }
        let deec = Deec::new(0.1);
        let mut rng = stream_rng(13, STREAM_ELECTION);
        let mut low = 0usize;
        let mut high = 0usize;
        for round in 0..2000 {
            for &h in &elect_heads(&nodes, &deec, round, &mut rng) {
                if h < 50 {
                    low += 1;
                } else {
                    high += 1;
                }
            }
        }
        assert!(
            high as f64 > 1.5 * low as f64,
            "high-energy heads {high} vs low-energy {low}"
        );
    }
}
