//! Flat key=value configuration files and CLI overrides.
//!
//! Precedence: built-in defaults, then file values, then CLI flags. Every
//! parse error names the offending key and line. Unknown keys are errors,
//! not warnings — a typo must not silently fall back to a default.

use std::path::PathBuf;

use super::ExperimentSpec;
use crate::config::SimConfig;
use crate::error::{Error, Result};
use crate::protocols::ProtocolKind;
use crate::radio::D0Mode;

/// Values supplied on the command line; `None` means "not given".
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub protocol: Option<String>,
    pub ehorm: Option<bool>,
    /// Flags can only assert; absence leaves the file value in force.
    pub compare: bool,
    pub seeds: Option<Vec<u64>>,
    pub rounds: Option<u64>,
    pub nodes: Option<usize>,
    /// Field dimensions (width, height) in meters.
    pub field: Option<(f64, f64)>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Default)]
struct RawConfig {
    protocol: Option<String>,
    ehorm: Option<bool>,
    compare: Option<bool>,
    seeds: Option<Vec<u64>>,
    max_rounds: Option<u64>,
    nodes: Option<usize>,
    width: Option<f64>,
    height: Option<f64>,
    sink_x: Option<f64>,
    sink_y: Option<f64>,
    initial_energy: Option<f64>,
    hetero_fraction: Option<f64>,
    hetero_alpha: Option<f64>,
    p: Option<f64>,
    teen_hard: Option<f64>,
    teen_soft: Option<f64>,
    teen_sense_min: Option<f64>,
    teen_sense_max: Option<f64>,
    deec_p_opt: Option<f64>,
    e_elec: Option<f64>,
    e_fs: Option<f64>,
    e_mp: Option<f64>,
    e_da: Option<f64>,
    d0_mode: Option<String>,
    d0: Option<f64>,
    packet_bits: Option<u64>,
    freeze_energy: Option<bool>,
    out: Option<PathBuf>,
}

/// "true"/"false" plus the usual aliases; `None` for anything else.
pub fn parse_bool_value(value: &str) -> Option<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "on" | "1" | "yes" => Some(true),
        "false" | "off" | "0" | "no" => Some(false),
        _ => None,
    }
}

/// Comma-separated seeds with half-open ranges: `1,2,10..13` is seeds
/// 1, 2, 10, 11, 12.
pub fn parse_seed_list(text: &str) -> Result<Vec<u64>> {
    let mut seeds = Vec::new();
    for item in text.split(',') {
        let item = item.trim();
        if item.is_empty() {
            return Err(Error::config(format!("seeds: empty entry in {text:?}")));
        }
        if let Some((start, end)) = item.split_once("..") {
            let start: u64 = start
                .trim()
                .parse()
                .map_err(|_| Error::config(format!("seeds: unparsable range start {item:?}")))?;
            let end: u64 = end
                .trim()
                .parse()
                .map_err(|_| Error::config(format!("seeds: unparsable range end {item:?}")))?;
            if end <= start {
                return Err(Error::config(format!("seeds: empty range {item:?}")));
            }
            seeds.extend(start..end);
        } else {
            seeds.push(
                item.parse()
                    .map_err(|_| Error::config(format!("seeds: unparsable seed {item:?}")))?,
            );
        }
    }
    Ok(seeds)
}

/// `WxH` in meters, e.g. `100x100`.
pub fn parse_field_dims(text: &str) -> Result<(f64, f64)> {
    let (w, h) = text
        .split_once(['x', 'X'])
        .ok_or_else(|| Error::config(format!("field: expected WxH, got {text:?}")))?;
    let width: f64 = w
        .trim()
        .parse()
        .map_err(|_| Error::config(format!("field: unparsable width in {text:?}")))?;
    let height: f64 = h
        .trim()
        .parse()
        .map_err(|_| Error::config(format!("field: unparsable height in {text:?}")))?;
    Ok((width, height))
}

fn parse_num<T: std::str::FromStr>(key: &str, line: usize, value: &str) -> Result<T> {
    value.parse().map_err(|_| {
        Error::config(format!("{key}: unparsable value {value:?} on line {line}"))
    })
}

fn parse_bool(key: &str, line: usize, value: &str) -> Result<bool> {
    parse_bool_value(value).ok_or_else(|| {
        Error::config(format!(
            "{key}: expected true/false (or on/off, 1/0), got {value:?} on line {line}"
        ))
    })
}

fn parse_file(text: &str) -> Result<RawConfig> {
    let mut raw = RawConfig::default();
    for (idx, full_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = full_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| {
            Error::config(format!("line {line}: expected key=value, got {content:?}"))
        })?;
        let key = key.trim();
        let value = value.trim();
        if value.is_empty() {
            return Err(Error::config(format!("{key}: empty value on line {line}")));
        }
        match key {
            "protocol" => raw.protocol = Some(value.to_string()),
            "ehorm" => raw.ehorm = Some(parse_bool(key, line, value)?),
            "compare" => raw.compare = Some(parse_bool(key, line, value)?),
            "freeze_energy" => raw.freeze_energy = Some(parse_bool(key, line, value)?),
            "seeds" => {
                raw.seeds = Some(parse_seed_list(value).map_err(|e| {
                    Error::config(format!("{e} (line {line})"))
                })?)
            }
            "max_rounds" => raw.max_rounds = Some(parse_num(key, line, value)?),
            "nodes" => raw.nodes = Some(parse_num(key, line, value)?),
            "packet_bits" => raw.packet_bits = Some(parse_num(key, line, value)?),
            "width" => raw.width = Some(parse_num(key, line, value)?),
            "height" => raw.height = Some(parse_num(key, line, value)?),
            "sink_x" => raw.sink_x = Some(parse_num(key, line, value)?),
            "sink_y" => raw.sink_y = Some(parse_num(key, line, value)?),
            "initial_energy" => raw.initial_energy = Some(parse_num(key, line, value)?),
            "hetero_fraction" => raw.hetero_fraction = Some(parse_num(key, line, value)?),
            "hetero_alpha" => raw.hetero_alpha = Some(parse_num(key, line, value)?),
            "p" => raw.p = Some(parse_num(key, line, value)?),
            "teen_hard" => raw.teen_hard = Some(parse_num(key, line, value)?),
            "teen_soft" => raw.teen_soft = Some(parse_num(key, line, value)?),
            "teen_sense_min" => raw.teen_sense_min = Some(parse_num(key, line, value)?),
            "teen_sense_max" => raw.teen_sense_max = Some(parse_num(key, line, value)?),
            "deec_p_opt" => raw.deec_p_opt = Some(parse_num(key, line, value)?),
            "e_elec" => raw.e_elec = Some(parse_num(key, line, value)?),
            "e_fs" => raw.e_fs = Some(parse_num(key, line, value)?),
            "e_mp" => raw.e_mp = Some(parse_num(key, line, value)?),
            "e_da" => raw.e_da = Some(parse_num(key, line, value)?),
            "d0" => raw.d0 = Some(parse_num(key, line, value)?),
            "d0_mode" => match value {
                "derived" | "fixed" => raw.d0_mode = Some(value.to_string()),
                _ => {
                    return Err(Error::config(format!(
                        "d0_mode: expected derived or fixed, got {value:?} on line {line}"
                    )))
                }
            },
            "out" => raw.out = Some(PathBuf::from(value)),
            _ => {
                return Err(Error::config(format!(
                    "unknown key {key:?} on line {line}"
                )))
            }
        }
    }
    Ok(raw)
}

/// Resolves file text and CLI overrides into a runnable experiment:
/// defaults, then file, then flags; sink defaults to the field center;
/// `deec_p_opt` defaults to `p`; validation names the offending field.
pub fn parse_config(file_text: &str, overrides: &Overrides) -> Result<ExperimentSpec> {
    let raw = parse_file(file_text)?;
    let mut cfg = SimConfig::default();

    if let Some(v) = raw.nodes {
        cfg.field.node_count = v;
    }
    if let Some(v) = raw.width {
        cfg.field.width = v;
    }
    if let Some(v) = raw.height {
        cfg.field.height = v;
    }
    if let Some(v) = raw.initial_energy {
        cfg.field.initial_energy = v;
    }
    if let Some(v) = raw.hetero_fraction {
        cfg.field.hetero_fraction = v;
    }
    if let Some(v) = raw.hetero_alpha {
        cfg.field.hetero_alpha = v;
    }
    if let Some(v) = overrides.nodes {
        cfg.field.node_count = v;
    }
    if let Some((w, h)) = overrides.field {
        cfg.field.width = w;
        cfg.field.height = h;
    }
    // the sink default tracks the final field dimensions
    cfg.field.sink_position = (
        raw.sink_x.unwrap_or(cfg.field.width / 2.0),
        raw.sink_y.unwrap_or(cfg.field.height / 2.0),
    );

    let kind_name = overrides
        .protocol
        .clone()
        .or(raw.protocol)
        .unwrap_or_else(|| "leach".to_string());
    cfg.protocol.kind = ProtocolKind::parse(&kind_name).ok_or_else(|| {
        Error::config(format!(
            "protocol: unknown name {kind_name:?}, expected leach, teen, sep, or deec"
        ))
    })?;
    if let Some(v) = raw.p {
        cfg.protocol.p = v;
    }
    cfg.protocol.deec_p_opt = raw.deec_p_opt.unwrap_or(cfg.protocol.p);
    if let Some(v) = raw.teen_hard {
        cfg.protocol.teen_hard_threshold = v;
    }
    if let Some(v) = raw.teen_soft {
        cfg.protocol.teen_soft_threshold = v;
    }
    if let Some(v) = raw.teen_sense_min {
        cfg.protocol.teen_sense_min = v;
    }
    if let Some(v) = raw.teen_sense_max {
        cfg.protocol.teen_sense_max = v;
    }

    if let Some(v) = raw.e_elec {
        cfg.e_elec = v;
    }
    if let Some(v) = raw.e_fs {
        cfg.e_fs = v;
    }
    if let Some(v) = raw.e_mp {
        cfg.e_mp = v;
    }
    if let Some(v) = raw.e_da {
        cfg.e_da = v;
    }
    if let Some(v) = raw.packet_bits {
        cfg.packet_bits = v;
    }
    cfg.d0_mode = match raw.d0_mode.as_deref() {
        Some("fixed") => D0Mode::Fixed(raw.d0.unwrap_or(87.0)),
        _ => {
            if raw.d0.is_some() {
                return Err(Error::config(
                    "d0: only meaningful with d0_mode=fixed".to_string(),
                ));
            }
            D0Mode::Derived
        }
    };

    if let Some(v) = raw.max_rounds {
        cfg.max_rounds = v;
    }
    if let Some(v) = overrides.rounds {
        cfg.max_rounds = v;
    }
    if let Some(v) = raw.ehorm {
        cfg.ehorm = v;
    }
    if let Some(v) = overrides.ehorm {
        cfg.ehorm = v;
    }
    if let Some(v) = raw.freeze_energy {
        cfg.freeze_energy = v;
    }

    let compare = overrides.compare || raw.compare.unwrap_or(false);
    let seeds = overrides
        .seeds
        .clone()
        .or(raw.seeds)
        .unwrap_or_else(|| vec![1]);
    if seeds.is_empty() {
        return Err(Error::config("seeds: need at least one seed"));
    }
    let output_dir = overrides
        .out
        .clone()
        .or(raw.out)
        .unwrap_or_else(|| PathBuf::from("out"));

    let spec = ExperimentSpec {
        base: cfg,
        seeds,
        compare,
        output_dir,
    };
    spec.base.validate()?;
    Ok(spec)
}
