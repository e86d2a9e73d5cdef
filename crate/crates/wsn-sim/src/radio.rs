//! First-order radio energy model.
//!
//! Transmitting `k` bits over distance `d` costs the transceiver
//! electronics `k * e_elec` plus an amplifier term that scales as `d^2`
//! (free-space, below the crossover distance `d0`) or `d^4` (multipath,
//! at or above `d0`). Receiving costs electronics only; aggregation at a
//! cluster head costs `e_da` per bit.
//!
//! All functions are pure; energies are joules, distances meters.

use crate::error::{Error, Result};

/// How the free-space/multipath crossover distance is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum D0Mode {
    /// `d0 = sqrt(e_fs / e_mp)`, which makes `tx_energy` continuous at the
    /// branch switch. This is the default.
    Derived,
    /// A literal crossover distance in meters.
    Fixed(f64),
}

/// Energy coefficients of the radio plus the packet length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioParams {
    /// Electronics cost, joules per bit (applies to both TX and RX).
    pub e_elec: f64,
    /// Free-space amplifier coefficient, joules per bit per m^2.
    pub e_fs: f64,
    /// Multipath amplifier coefficient, joules per bit per m^4.
    pub e_mp: f64,
    /// Aggregation cost at a cluster head, joules per bit.
    pub e_da: f64,
    /// Crossover distance between the amplifier branches, meters.
    pub d0: f64,
    /// Data packet length in bits.
    pub packet_bits: u64,
}

impl RadioParams {
    pub const DEFAULT_E_ELEC: f64 = 50e-9;
    pub const DEFAULT_E_FS: f64 = 10e-12;
    pub const DEFAULT_E_MP: f64 = 0.0013e-12;
    pub const DEFAULT_E_DA: f64 = 5e-9;
    pub const DEFAULT_PACKET_BITS: u64 = 4000;

    /// Builds a parameter set, resolving `d0` from the requested mode.
    pub fn new(
        e_elec: f64,
        e_fs: f64,
        e_mp: f64,
        e_da: f64,
        d0_mode: D0Mode,
        packet_bits: u64,
    ) -> Result<Self> {
        let params = RadioParams {
            e_elec,
            e_fs,
            e_mp,
            e_da,
            d0: match d0_mode {
                D0Mode::Derived => (e_fs / e_mp).sqrt(),
                D0Mode::Fixed(d0) => d0,
            },
            packet_bits,
        };
        params.validate()?;
        Ok(params)
    }

    /// The default radio: 50 nJ/bit electronics, 10 pJ/bit/m^2 free-space,
    /// 0.0013 pJ/bit/m^4 multipath, 5 nJ/bit aggregation, derived d0
    /// (~87.7 m), 4000-bit packets.
    pub fn defaults() -> Self {
        RadioParams::new(
            Self::DEFAULT_E_ELEC,
            Self::DEFAULT_E_FS,
            Self::DEFAULT_E_MP,
            Self::DEFAULT_E_DA,
            D0Mode::Derived,
            Self::DEFAULT_PACKET_BITS,
        )
        .expect("default radio parameters are valid")
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("e_elec", self.e_elec),
            ("e_fs", self.e_fs),
            ("e_mp", self.e_mp),
            ("e_da", self.e_da),
            ("d0", self.d0),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::config(format!(
                    "{name}: must be strictly positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// True when `d0` matches `sqrt(e_fs / e_mp)` to relative 1e-6, i.e.
    /// the amplifier branches meet continuously at the crossover.
    pub fn d0_is_derived(&self) -> bool {
        let derived = (self.e_fs / self.e_mp).sqrt();
        (self.d0 - derived).abs() <= 1e-6 * derived
    }
}

fn check_distance(d: f64) -> Result<()> {
    // NaN is rejected along with negatives
    if d.is_nan() || d < 0.0 {
        return Err(Error::invalid(format!(
            "distance must be non-negative, got {d}"
        )));
    }
    Ok(())
}

/// Energy to transmit `bits` over distance `d`.
///
/// `bits * e_elec + bits * e_fs * d^2` below the crossover,
/// `bits * e_elec + bits * e_mp * d^4` at or above it.
pub fn tx_energy(params: &RadioParams, bits: u64, d: f64) -> Result<f64> {
    check_distance(d)?;
    let bits = bits as f64;
    let amp = if d < params.d0 {
        params.e_fs * d * d
    } else {
        params.e_mp * d * d * d * d
    };
    Ok(bits * params.e_elec + bits * amp)
}

/// Energy to receive `bits`: electronics only.
pub fn rx_energy(params: &RadioParams, bits: u64) -> f64 {
    bits as f64 * params.e_elec
}

/// Energy to aggregate `bits` at a cluster head.
pub fn aggregation_energy(params: &RadioParams, bits: u64) -> f64 {
    bits as f64 * params.e_da
}

/// Full per-round energy bill of a cluster head serving `member_count`
/// reporting members: receive one packet from each member, aggregate the
/// members' packets plus its own, and transmit a single aggregated packet
/// to the sink. Exactly the sum of the three constituent operations.
pub fn ch_round_energy(params: &RadioParams, member_count: u64, d_to_sink: f64) -> Result<f64> {
    let d = params.packet_bits;
    let rx = rx_energy(params, member_count * d);
    let agg = aggregation_energy(params, (member_count + 1) * d);
    let tx = tx_energy(params, d, d_to_sink)?;
    Ok(rx + agg + tx)
}
