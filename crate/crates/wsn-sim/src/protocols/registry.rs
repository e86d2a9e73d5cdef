//! Name-based protocol registry. The engine and CLI construct protocol
//! strategies exclusively through [`create`], so adding a variant means
//! implementing [`ClusterProtocol`] and adding one table row here.

use super::{ClusterProtocol, Deec, Leach, ProtocolConfig, Sep, Teen};
use crate::error::{Error, Result};
use crate::network::FieldConfig;

type Factory = fn(&ProtocolConfig, &FieldConfig) -> Box<dyn ClusterProtocol>;

const REGISTRY: &[(&str, Factory)] = &[
    ("leach", |p, _| Box::new(Leach::new(p.p))),
    ("teen", |p, _| Box::new(Teen::new(p.clone()))),
    ("sep", |p, f| {
        Box::new(Sep::new(p.p, f.hetero_fraction, f.hetero_alpha))
    }),
    ("deec", |p, _| Box::new(Deec::new(p.deec_p_opt))),
];

/// All registered protocol names, in registration order.
pub fn names() -> Vec<&'static str> {
    REGISTRY.iter().map(|(name, _)| *name).collect()
}

/// Builds the named protocol. SEP reads the heterogeneity parameters from
/// the field configuration so its weighted probabilities match deployment.
pub fn create(
    name: &str,
    protocol: &ProtocolConfig,
    field: &FieldConfig,
) -> Result<Box<dyn ClusterProtocol>> {
    REGISTRY
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, factory)| factory(protocol, field))
        .ok_or_else(|| {
            Error::config(format!(
                "protocol: unknown name {name:?}, expected one of {}",
                names().join(", ")
            ))
        })
}
