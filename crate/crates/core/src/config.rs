//! JSON configuration files.
//!
//! ```json
//! {"N": 20, "gamma": 0.8, "g0": 0.5, "h": 0.0,
//!  "tau_r": 10.0, "tau_f": 0.0, "U_base": 0.5, "r0": 1.0, "U0": 0.5,
//!  "initial": {"count": 0}, "t_max": 10000.0, "dt": "auto",
//!  "record_stride": null, "block_size": null, "renormalize": false}
//! ```
//!
//! Unknown keys are rejected. `h`, `tau_r`, `tau_f` default to 0, `U_base` to
//! 0.5, `r0` to 1, `U0` to `U_base`; the remaining optional keys take the
//! [`SimulationConfig::new`] defaults.

use serde::{Deserialize, Serialize};

use crate::dynamics::{InitialState, SimulationConfig, TimeStep};
use crate::error::{Error, Result};
use crate::hamiltonian::LmgParams;
use crate::plasticity::PlasticityParams;

/// Scalar keys accepted by [`set_scalar`].
pub const SCALAR_KEYS: [&str; 13] = [
    "N",
    "gamma",
    "g0",
    "h",
    "tau_r",
    "tau_f",
    "U_base",
    "r0",
    "U0",
    "t_max",
    "dt",
    "record_stride",
    "block_size",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum InitialFile {
    Count(usize),
    Fraction(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum DtFile {
    Fixed(f64),
    Keyword(String),
}

fn default_u_base() -> f64 {
    0.5
}

fn default_one() -> f64 {
    1.0
}

fn default_dt() -> DtFile {
    DtFile::Keyword("auto".into())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(rename = "N")]
    n: usize,
    gamma: f64,
    g0: f64,
    #[serde(default)]
    h: f64,
    #[serde(default)]
    tau_r: f64,
    #[serde(default)]
    tau_f: f64,
    #[serde(rename = "U_base", default = "default_u_base")]
    u_base: f64,
    #[serde(default = "default_one")]
    r0: f64,
    #[serde(rename = "U0", default)]
    u0: Option<f64>,
    initial: InitialFile,
    t_max: f64,
    #[serde(default = "default_dt")]
    dt: DtFile,
    #[serde(default)]
    record_stride: Option<usize>,
    #[serde(default)]
    block_size: Option<usize>,
    #[serde(default)]
    renormalize: bool,
}

impl ConfigFile {
    fn into_config(self) -> Result<SimulationConfig> {
        let dt = match self.dt {
            DtFile::Fixed(v) => TimeStep::Fixed(v),
            DtFile::Keyword(k) if k == "auto" => TimeStep::Auto,
            DtFile::Keyword(k) => return Err(Error::config("dt", format!("\"{k}\" is neither a number nor \"auto\""))),
        };
        let plasticity = PlasticityParams {
            tau_r: self.tau_r,
            tau_f: self.tau_f,
            u_base: self.u_base,
            r0: self.r0,
            u0: self.u0.unwrap_or(self.u_base),
        };
        let initial = match self.initial {
            InitialFile::Count(n) => InitialState::Count(n),
            InitialFile::Fraction(f) => InitialState::Fraction(f),
        };
        let lmg = LmgParams {
            g0: self.g0,
            gamma: self.gamma,
            h: self.h,
        };
        let mut config = SimulationConfig::new(self.n, lmg, plasticity, initial, self.t_max);
        config.dt = dt;
        config.record_stride = self.record_stride;
        config.block_size = self.block_size;
        config.renormalize = self.renormalize;
        Ok(config)
    }

    fn from_config(c: &SimulationConfig) -> Self {
        Self {
            n: c.qubits,
            gamma: c.lmg.gamma,
            g0: c.lmg.g0,
            h: c.lmg.h,
            tau_r: c.plasticity.tau_r,
            tau_f: c.plasticity.tau_f,
            u_base: c.plasticity.u_base,
            r0: c.plasticity.r0,
            u0: Some(c.plasticity.u0),
            initial: match c.initial {
                InitialState::Count(n) => InitialFile::Count(n),
                InitialState::Fraction(f) => InitialFile::Fraction(f),
            },
            t_max: c.t_max,
            dt: match c.dt {
                TimeStep::Auto => default_dt(),
                TimeStep::Fixed(v) => DtFile::Fixed(v),
            },
            record_stride: c.record_stride,
            block_size: c.block_size,
            renormalize: c.renormalize,
        }
    }
}

/// Parses and validates a configuration. Errors name the offending key.
pub fn from_json(text: &str) -> Result<SimulationConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: ConfigFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let msg = inner.to_string();
        // missing keys are reported against the enclosing object
        let key = extract_quoted(&msg)
            .filter(|_| msg.starts_with("missing field"))
            .map(|k| if path == "." { k } else { format!("{path}.{k}") })
            .unwrap_or(path);
        Error::config(key, msg)
    })?;
    let config = file.into_config()?;
    config.validate()?;
    Ok(config)
}

fn extract_quoted(msg: &str) -> Option<String> {
    let start = msg.find('`')? + 1;
    let len = msg[start..].find('`')?;
    Some(msg[start..start + len].to_string())
}

/// Serializes with every key present, so that [`from_json`] reproduces the
/// configuration exactly.
pub fn to_json(config: &SimulationConfig) -> String {
    serde_json::to_string_pretty(&ConfigFile::from_config(config)).expect("config serializes") + "\n"
}

/// Sets one scalar key from its textual value, as used by sweeps.
pub fn set_scalar(config: &mut SimulationConfig, key: &str, value: &str) -> Result<()> {
    let real = || {
        value
            .parse::<f64>()
            .map_err(|_| Error::config(key, format!("'{value}' is not a number")))
    };
    let int = || {
        value
            .parse::<usize>()
            .map_err(|_| Error::config(key, format!("'{value}' is not a non-negative integer")))
    };
    match key {
        "N" => config.qubits = int()?,
        "gamma" => config.lmg.gamma = real()?,
        "g0" => config.lmg.g0 = real()?,
        "h" => config.lmg.h = real()?,
        "tau_r" => config.plasticity.tau_r = real()?,
        "tau_f" => config.plasticity.tau_f = real()?,
        "U_base" => config.plasticity.u_base = real()?,
        "r0" => config.plasticity.r0 = real()?,
        "U0" => config.plasticity.u0 = real()?,
        "t_max" => config.t_max = real()?,
        "dt" if value == "auto" => config.dt = TimeStep::Auto,
        "dt" => config.dt = TimeStep::Fixed(real()?),
        "record_stride" => config.record_stride = Some(int()?),
        "block_size" => config.block_size = Some(int()?),
        _ => {
            return Err(Error::config(
                key,
                format!("not a scalar key; expected one of {}", SCALAR_KEYS.join(", ")),
            ))
        }
    }
    Ok(())
}
