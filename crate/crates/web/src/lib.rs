//! wasm-bindgen surface for the static page in `www/`.
//!
//! Three operations: run a simulation (custom parameters or a preset), take
//! the power spectrum of one of its columns, and show the block weights of a
//! Dicke state. Each exported function is a thin wrapper over a plain Rust
//! function so the logic can be tested natively.

use lmgbrain::analysis::{self, Window};
use lmgbrain::dynamics::{simulate, InitialState, SimulationConfig, Trajectory};
use lmgbrain::hamiltonian::LmgParams;
use lmgbrain::observables::{block_entropy, block_linear_entropy, block_probabilities};
use lmgbrain::plasticity::PlasticityParams;
use lmgbrain::presets;
use lmgbrain::spin::{dicke_state, SpinSector};
use wasm_bindgen::prelude::*;

/// Records handed to the page; the plot does not need more.
pub const MAX_RECORDS: usize = 4000;

/// A finished run.
#[wasm_bindgen]
pub struct Series {
    traj: Trajectory,
}

#[wasm_bindgen]
impl Series {
    pub fn len(&self) -> usize {
        self.traj.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traj.records.is_empty()
    }

    /// Time between records.
    pub fn sample_interval(&self) -> f64 {
        self.traj.sample_interval()
    }

    /// One of `t, E, r, U, fidelity, S_block, S_linear, energy, norm`; empty if unknown.
    pub fn column(&self, name: &str) -> Vec<f64> {
        self.traj.column(name).unwrap_or_default()
    }

    pub fn spectrum(&self, column: &str, hann: bool) -> Result<SpectrumView, JsError> {
        self.spectrum_of(column, hann).map_err(js)
    }
}

impl Series {
    pub fn trajectory(&self) -> &Trajectory {
        &self.traj
    }

    pub fn spectrum_of(&self, column: &str, hann: bool) -> lmgbrain::Result<SpectrumView> {
        let values = self.traj.column(column).ok_or_else(|| lmgbrain::Error::Config {
            key: "column".into(),
            reason: format!("unknown column '{column}'"),
        })?;
        let window = if hann { Window::Hann } else { Window::Rectangular };
        let spec = analysis::periodogram(&values, self.traj.sample_interval(), window)?;
        let peak = analysis::dominant_frequency(&spec)?;
        Ok(SpectrumView {
            frequencies: spec.frequencies,
            power: spec.power,
            dominant: peak.frequency,
        })
    }
}

#[wasm_bindgen]
pub struct SpectrumView {
    frequencies: Vec<f64>,
    power: Vec<f64>,
    dominant: f64,
}

#[wasm_bindgen]
impl SpectrumView {
    pub fn frequencies(&self) -> Vec<f64> {
        self.frequencies.clone()
    }

    pub fn power(&self) -> Vec<f64> {
        self.power.clone()
    }

    pub fn dominant(&self) -> f64 {
        self.dominant
    }
}

fn js(e: lmgbrain::Error) -> JsError {
    JsError::new(&e.to_string())
}

fn limit_records(config: &mut SimulationConfig) {
    if config.record_stride.is_none() {
        let dt = lmgbrain::dynamics::resolve_dt(config).unwrap_or(config.t_max);
        let steps = (config.t_max / dt).ceil() as usize;
        config.record_stride = Some(steps.div_ceil(MAX_RECORDS).max(1));
    }
}

#[allow(clippy::too_many_arguments)]
pub fn run_custom(
    qubits: usize,
    gamma: f64,
    g0: f64,
    tau_r: f64,
    tau_f: f64,
    u_base: f64,
    excited: usize,
    t_max: f64,
) -> lmgbrain::Result<Series> {
    let p = PlasticityParams {
        tau_r,
        tau_f,
        u_base,
        r0: 1.0,
        u0: u_base,
    };
    let mut config = SimulationConfig::new(
        qubits,
        LmgParams::new(g0, gamma),
        p,
        InitialState::Count(excited),
        t_max,
    );
    config.validate()?;
    limit_records(&mut config);
    Ok(Series {
        traj: simulate(&config)?,
    })
}

/// A preset, optionally with a shorter window (`t_max <= 0` keeps the preset's).
pub fn run_preset(name: &str, t_max: f64) -> lmgbrain::Result<Series> {
    let mut config = presets::preset_config(name)?;
    if t_max > 0.0 {
        config.t_max = t_max;
    }
    limit_records(&mut config);
    Ok(Series {
        traj: simulate(&config)?,
    })
}

/// Weights `p_k` of `k` excitations in a block of `block` qubits, for the
/// Dicke state with `excited` of `qubits` excited.
pub fn dicke_block_weights(qubits: usize, excited: usize, block: usize) -> lmgbrain::Result<Vec<f64>> {
    let psi = dicke_state(SpinSector::new(qubits)?, excited)?;
    Ok(block_probabilities(&psi, block)?.probabilities().to_vec())
}

#[allow(clippy::too_many_arguments)]
#[wasm_bindgen]
pub fn simulate_custom(
    qubits: usize,
    gamma: f64,
    g0: f64,
    tau_r: f64,
    tau_f: f64,
    u_base: f64,
    excited: usize,
    t_max: f64,
) -> Result<Series, JsError> {
    run_custom(qubits, gamma, g0, tau_r, tau_f, u_base, excited, t_max).map_err(js)
}

#[wasm_bindgen]
pub fn simulate_preset(name: &str, t_max: f64) -> Result<Series, JsError> {
    run_preset(name, t_max).map_err(js)
}

/// Preset names, one per line.
#[wasm_bindgen]
pub fn preset_names() -> String {
    presets::names().join("\n")
}

#[wasm_bindgen]
pub fn block_weights(qubits: usize, excited: usize, block: usize) -> Result<Vec<f64>, JsError> {
    dicke_block_weights(qubits, excited, block).map_err(js)
}

/// `[S_block in bits, S_linear]` for the same state as [`block_weights`].
#[wasm_bindgen]
pub fn block_entropies(qubits: usize, excited: usize, block: usize) -> Result<Vec<f64>, JsError> {
    let psi = dicke_state(SpinSector::new(qubits).map_err(js)?, excited).map_err(js)?;
    let dist = block_probabilities(&psi, block).map_err(js)?;
    Ok(vec![block_entropy(&dist), block_linear_entropy(&dist)])
}
