//! Named configurations, one per figure panel.

use crate::dynamics::{InitialState, SimulationConfig};
use crate::error::{Error, Result};
use crate::hamiltonian::LmgParams;
use crate::plasticity::PlasticityParams;

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: String,
    pub config: SimulationConfig,
    /// Which figure panel the preset reproduces.
    pub note: String,
}

const FIG1_FRACTIONS: [(&str, f64); 4] = [("p100", 1.0), ("p80", 0.8), ("p60", 0.6), ("p53", 0.53)];
const FIG4_TAUS: [(&str, f64); 3] = [("0.1", 0.1), ("10", 10.0), ("20", 20.0)];
const FIG6_SIZES: [(usize, f64); 3] = [(2, 0.125), (10, 1.43), (20, 30.0)];
const FIG6_TAU_F: [f64; 4] = [1.0, 10.0, 100.0, 1000.0];

/// Window long enough to resolve the slow collective band of the N=20 runs.
pub const SPECTRAL_T_MAX: f64 = 100_000.0;

fn depression(tau_r: f64, u_base: f64) -> PlasticityParams {
    PlasticityParams {
        tau_r,
        tau_f: 0.0,
        u_base,
        r0: 1.0,
        u0: u_base,
    }
}

fn preset(
    name: String,
    note: String,
    qubits: usize,
    lmg: LmgParams,
    p: PlasticityParams,
    init: InitialState,
    t_max: f64,
) -> Preset {
    Preset {
        name,
        config: SimulationConfig::new(qubits, lmg, p, init, t_max),
        note,
    }
}

fn start_label(n: usize, count: usize) -> &'static str {
    match count {
        0 => "none",
        c if c == n => "allup",
        _ => "half",
    }
}

fn build_catalog() -> Vec<Preset> {
    let mut out = Vec::new();

    for (gamma, panel) in [(1.0, "A"), (0.9, "B")] {
        for (label, frac) in FIG1_FRACTIONS {
            out.push(preset(
                format!("fig1-gamma{gamma}-{label}"),
                format!(
                    "Fig. 1{panel}: bare LMG, N=40, g0=2, gamma={gamma}, {}% excited",
                    (frac * 100.0).round()
                ),
                40,
                LmgParams::new(2.0, gamma),
                PlasticityParams::frozen(0.5),
                InitialState::Fraction(frac),
                4000.0,
            ));
        }
    }

    let depressed_small = |fig: u32, n: usize, count: usize, side: &str| {
        let t_max = if n == 10 { 4000.0 } else { 10_000.0 };
        preset(
            format!("fig{fig}-N{n}-{}", start_label(n, count)),
            format!("Fig. {fig} ({side}): N={n}, gamma=1, g0=0.05, tau_r=1, n0={count}"),
            n,
            LmgParams::new(0.05, 1.0),
            depression(1.0, 0.5),
            InitialState::Count(count),
            t_max,
        )
    };
    for (n, side) in [(10, "left"), (80, "right")] {
        out.push(depressed_small(2, n, n / 2 - 1, side));
    }
    for (n, side) in [(10, "left"), (80, "right")] {
        out.push(depressed_small(3, n, 0, side));
        out.push(depressed_small(3, n, n, side));
    }

    for kind in ["fidelity", "entropy"] {
        for (count, side) in [(0, "left"), (80, "left"), (39, "right")] {
            let mut p = depressed_small(2, 80, count, side);
            p.name = format!("{kind}-N80-{}", start_label(80, count));
            p.note = format!("{kind} figure ({side}): N=80, gamma=1, g0=0.05, tau_r=1, r0=1, U=0.5, n0={count}");
            out.push(p);
        }
    }

    for (tau_label, tau) in FIG4_TAUS {
        for (count, panel) in [(0, "A"), (9, "B"), (20, "C")] {
            out.push(preset(
                format!("fig4-tau{tau_label}-{}", start_label(20, count)),
                format!("Fig. 4{panel}: N=20, gamma=0.8, g0=0.5, tau_r={tau_label}, U pinned at 0.5, n0={count}"),
                20,
                LmgParams::new(0.5, 0.8),
                depression(tau, 0.5),
                InitialState::Count(count),
                SPECTRAL_T_MAX,
            ));
        }
    }

    for (tau_label, tau) in FIG4_TAUS {
        out.push(preset(
            format!("fig5-tau{tau_label}"),
            format!("Fig. 5: block entropy series, histogram and spectrum at tau_r={tau_label} (N=20, gamma=0.8, g0=0.5, n0=0)"),
            20,
            LmgParams::new(0.5, 0.8),
            depression(tau, 0.5),
            InitialState::Count(0),
            SPECTRAL_T_MAX,
        ));
    }

    for ((n, g0), panel) in FIG6_SIZES.into_iter().zip(["A", "B", "C"]) {
        for tau_f in FIG6_TAU_F {
            out.push(preset(
                format!("fig6-N{n}-tauf{tau_f}"),
                format!(
                    "Fig. 6{panel}: facilitation, N={n}, g0={g0}, gamma=0.8, tau_r=100, U_base=0.02, tau_f={tau_f}"
                ),
                n,
                LmgParams::new(g0, 0.8),
                PlasticityParams {
                    tau_r: 100.0,
                    tau_f,
                    u_base: 0.02,
                    r0: 1.0,
                    u0: 0.02,
                },
                InitialState::Count(0),
                10_000.0,
            ));
        }
    }
    out
}

pub fn catalog() -> Vec<Preset> {
    build_catalog()
}

pub fn names() -> Vec<String> {
    build_catalog().into_iter().map(|p| p.name).collect()
}

pub fn lookup(name: &str) -> Result<Preset> {
    build_catalog()
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::UnknownPreset {
            name: name.to_string(),
            catalog: names().join(", "),
        })
}

pub fn preset_config(name: &str) -> Result<SimulationConfig> {
    lookup(name).map(|p| p.config)
}
