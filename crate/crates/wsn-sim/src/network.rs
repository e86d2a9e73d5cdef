//! Node and field representation: random deployment, heterogeneity
//! classes, distances, and liveness bookkeeping.

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::{stream_rng, STREAM_DEPLOY};

pub type NodeId = usize;

/// A point in the field, meters.
pub type Position = (f64, f64);

/// Field geometry, population, and energy endowment for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldConfig {
    pub width: f64,
    pub height: f64,
    pub node_count: usize,
    /// Defaults to the field center.
    pub sink_position: Position,
    /// Initial energy of a normal node, joules.
    pub initial_energy: f64,
    /// Fraction of nodes holding extra energy (advanced nodes), in [0, 1].
    pub hetero_fraction: f64,
    /// Advanced nodes start with `initial_energy * (1 + hetero_alpha)`.
    pub hetero_alpha: f64,
    pub rng_seed: u64,
}

impl Default for FieldConfig {
    fn default() -> Self {
        FieldConfig {
            width: 100.0,
            height: 100.0,
            node_count: 100,
            sink_position: (50.0, 50.0),
            initial_energy: 0.5,
            hetero_fraction: 0.1,
            hetero_alpha: 1.0,
            rng_seed: 1,
        }
    }
}

impl FieldConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.width.is_finite() || self.width <= 0.0 {
            return Err(Error::config(format!("width: must be > 0, got {}", self.width)));
        }
        if !self.height.is_finite() || self.height <= 0.0 {
            return Err(Error::config(format!("height: must be > 0, got {}", self.height)));
        }
        if self.node_count < 1 {
            return Err(Error::config("nodes: must be >= 1".to_string()));
        }
        if !self.initial_energy.is_finite() || self.initial_energy <= 0.0 {
            return Err(Error::config(format!(
                "initial_energy: must be > 0, got {}",
                self.initial_energy
            )));
        }
        if !(0.0..=1.0).contains(&self.hetero_fraction) {
            return Err(Error::config(format!(
                "hetero_fraction: must be in [0, 1], got {}",
                self.hetero_fraction
            )));
        }
        if !self.hetero_alpha.is_finite() || self.hetero_alpha < 0.0 {
            return Err(Error::config(format!(
                "hetero_alpha: must be >= 0, got {}",
                self.hetero_alpha
            )));
        }
        Ok(())
    }

    /// Number of advanced nodes: `round(hetero_fraction * node_count)`.
    pub fn advanced_count(&self) -> usize {
        (self.hetero_fraction * self.node_count as f64).round() as usize
    }
}

/// Per-round role of a node in the cluster topology.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Member,
    ClusterHead,
    /// Transmits straight to the sink in a round with no elected heads.
    Direct,
}

/// State of a single sensor node.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeState {
    pub id: NodeId,
    /// Fixed after deployment.
    pub position: Position,
    pub residual_energy: f64,
    pub is_advanced: bool,
    pub alive: bool,
    /// Set each round by the sleep classification; sleepers transmit nothing.
    pub asleep: bool,
    pub role: Role,
    /// Round in which this node last served as cluster head, if ever.
    /// Drives the rotating-election eligibility window.
    pub last_head_round: Option<u64>,
}

impl NodeState {
    /// Deducts up to `cost` joules, clamping at zero. A node whose residual
    /// reaches zero is dead. Returns the amount actually spent.
    pub fn deduct_energy(&mut self, cost: f64) -> f64 {
        debug_assert!(cost >= 0.0);
        let spent = cost.min(self.residual_energy);
        self.residual_energy -= spent;
        if self.residual_energy <= 0.0 {
            self.residual_energy = 0.0;
            self.alive = false;
        }
        spent
    }

    /// Rounds since this node last served as head (`None` if never).
    pub fn rounds_since_headship(&self, round: u64) -> Option<u64> {
        self.last_head_round.map(|r| round.saturating_sub(r))
    }
}

/// Places `node_count` nodes uniformly at random over the field, drawing
/// from the run's deployment stream. The first `round(m * n)` node ids are
/// the advanced class and start with `(1 + alpha)` times the normal energy.
/// Deterministic for a fixed seed.
pub fn deploy(config: &FieldConfig) -> Vec<NodeState> {
    let mut rng = stream_rng(config.rng_seed, STREAM_DEPLOY);
    let advanced = config.advanced_count();
    (0..config.node_count)
        .map(|id| {
            let x = rng.gen::<f64>() * config.width;
            let y = rng.gen::<f64>() * config.height;
            let is_advanced = id < advanced;
            let energy = if is_advanced {
                config.initial_energy * (1.0 + config.hetero_alpha)
            } else {
                config.initial_energy
            };
            NodeState {
                id,
                position: (x, y),
                residual_energy: energy,
                is_advanced,
                alive: true,
                asleep: false,
                role: Role::Member,
                last_head_round: None,
            }
        })
        .collect()
}

/// Euclidean distance between two positions.
pub fn distance(a: Position, b: Position) -> f64 {
    let dx = a.0 - b.0;
    let dy = a.1 - b.1;
    (dx * dx + dy * dy).sqrt()
}

/// The alive node (sleeping or awake) farthest from the sink, with its
/// distance. Ties go to the smaller id. `None` when the network is dead.
pub fn max_distance_alive_node(nodes: &[NodeState], sink: Position) -> Option<(NodeId, f64)> {
    let mut best: Option<(NodeId, f64)> = None;
    for node in nodes.iter().filter(|n| n.alive) {
        let d = distance(node.position, sink);
        match best {
            Some((_, bd)) if d <= bd => {}
            _ => best = Some((node.id, d)),
        }
    }
    best
}

/// Sum of residual energy over all nodes (dead nodes contribute zero).
pub fn total_residual_energy(nodes: &[NodeState]) -> f64 {
    nodes.iter().map(|n| n.residual_energy).sum()
}

pub fn alive_count(nodes: &[NodeState]) -> usize {
    nodes.iter().filter(|n| n.alive).count()
}
