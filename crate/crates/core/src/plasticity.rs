//! Short-term synaptic plasticity acting on the collective coupling.
//!
//! The efficacy `r` depresses with activity and recovers on `tau_r`; the
//! release probability `U` facilitates with activity and relaxes back to the
//! baseline on `tau_f`. A time constant `<= 0` freezes that channel.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack allowed on the excitation fraction before it is treated as invalid input.
pub const EXCITATION_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlasticityParams {
    /// Depression recovery time; `<= 0` pins `r` at `r0`.
    pub tau_r: f64,
    /// Facilitation time constant; `<= 0` pins `U` at its initial value.
    pub tau_f: f64,
    /// Baseline release probability.
    pub u_base: f64,
    pub r0: f64,
    pub u0: f64,
}

impl PlasticityParams {
    /// Bare LMG dynamics: both channels frozen with `r = 1`.
    pub fn frozen(u_base: f64) -> Self {
        Self {
            tau_r: 0.0,
            tau_f: 0.0,
            u_base,
            r0: 1.0,
            u0: u_base,
        }
    }

    pub fn depression_active(&self) -> bool {
        self.tau_r > 0.0
    }

    pub fn facilitation_active(&self) -> bool {
        self.tau_f > 0.0
    }

    pub fn is_frozen(&self) -> bool {
        !self.depression_active() && !self.facilitation_active()
    }

    pub fn initial_state(&self) -> SynapseState {
        SynapseState { r: self.r0, u: self.u0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.u_base > 0.0 && self.u_base <= 1.0) {
            return Err(Error::config("U_base", format!("{} not in (0, 1]", self.u_base)));
        }
        if !(0.0..=1.0).contains(&self.r0) {
            return Err(Error::config("r0", format!("{} not in [0, 1]", self.r0)));
        }
        if !(0.0..=1.0).contains(&self.u0) {
            return Err(Error::config("U0", format!("{} not in [0, 1]", self.u0)));
        }
        for (key, v) in [("tau_r", self.tau_r), ("tau_f", self.tau_f)] {
            if !v.is_finite() {
                return Err(Error::config(key, "must be finite"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynapseState {
    /// Synaptic efficacy.
    pub r: f64,
    /// Release probability.
    pub u: f64,
}

/// `(dr/dt, dU/dt)` for excitation fraction `e`.
pub fn plasticity_derivatives(state: SynapseState, e: f64, params: &PlasticityParams) -> (f64, f64) {
    let SynapseState { r, u } = state;
    let dr = if params.depression_active() {
        (1.0 - r) / params.tau_r - u * r * e
    } else {
        0.0
    };
    let du = if params.facilitation_active() {
        (params.u_base - u) / params.tau_f + params.u_base * (1.0 - u) * e
    } else {
        0.0
    };
    (dr, du)
}

/// `g(t) = g0 r(t)`.
pub fn effective_coupling(g0: f64, r: f64) -> f64 {
    g0 * r
}
