//! Full configuration of one simulation run.

use crate::error::Result;
use crate::network::FieldConfig;
use crate::protocols::ProtocolConfig;
use crate::radio::{D0Mode, RadioParams};

/// Everything one run needs: field, protocol, radio, and engine options.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub field: FieldConfig,
    pub protocol: ProtocolConfig,
    pub e_elec: f64,
    pub e_fs: f64,
    pub e_mp: f64,
    pub e_da: f64,
    pub packet_bits: u64,
    pub d0_mode: D0Mode,
    /// Run the threshold sleep/awake overlay on top of the base protocol.
    pub ehorm: bool,
    /// Hard stop; a network still alive here is censored, not finished.
    pub max_rounds: u64,
    /// Calibration mode: rounds execute and packets are counted, but no
    /// energy is deducted, so the population never decays.
    pub freeze_energy: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            field: FieldConfig::default(),
            protocol: ProtocolConfig::default(),
            e_elec: RadioParams::DEFAULT_E_ELEC,
            e_fs: RadioParams::DEFAULT_E_FS,
            e_mp: RadioParams::DEFAULT_E_MP,
            e_da: RadioParams::DEFAULT_E_DA,
            packet_bits: RadioParams::DEFAULT_PACKET_BITS,
            d0_mode: D0Mode::Derived,
            ehorm: false,
            max_rounds: 10_000,
            freeze_energy: false,
        }
    }
}

impl SimConfig {
    /// Resolves the radio coefficients (and the crossover distance) into a
    /// validated parameter set.
    pub fn radio(&self) -> Result<RadioParams> {
        RadioParams::new(
            self.e_elec,
            self.e_fs,
            self.e_mp,
            self.e_da,
            self.d0_mode,
            self.packet_bits,
        )
    }

    pub fn validate(&self) -> Result<()> {
        self.field.validate()?;
        self.protocol.validate()?;
        self.radio()?;
        Ok(())
    }

    /// Display label for this arm: the protocol name, `i`-prefixed when the
    /// sleep overlay is on (`leach` vs `ileach`).
    pub fn label(&self) -> String {
        if self.ehorm {
            format!("i{}", self.protocol.kind.name())
        } else {
            self.protocol.kind.name().to_string()
        }
    }
}
