//! Coupled evolution of the collective state and the synaptic variables.
//!
//! The state vector obeys `d psi/dt = -i H(t) psi` with `H(t) = g0 r(t) K + h M`,
//! while `(r, U)` follow the plasticity equations driven by the excitation
//! fraction of the same stage state. Both are advanced together by a
//! fixed-step classical Runge-Kutta scheme.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonian::{build_parts, HamiltonianParts, LmgParams};
use crate::observables::{block_entropy, block_linear_entropy, excitation_fraction_raw, BlockWeights};
use crate::plasticity::{plasticity_derivatives, PlasticityParams, SynapseState};
use crate::spin::{dicke_state, excitation_count_for_fraction, DickeVector, SpinSector};

/// Step-size safety factor of the rate-limited step.
pub const AUTO_DT_SAFETY: f64 = 0.05;
/// Floor applied to plasticity time constants in the rate-limited step.
pub const AUTO_DT_TAU_FLOOR: f64 = 1e-6;
/// Relative energy drift allowed for static Hamiltonians (both channels frozen).
pub const ENERGY_TOLERANCE: f64 = 1e-8;
/// Default cap on the number of stored records.
pub const DEFAULT_MAX_RECORDS: usize = 100_000;
/// Synaptic variables may overshoot `[0, 1]` by this much before the step is rejected.
pub const SYNAPSE_BOUND_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialState {
    /// Dicke state with this many excited qubits.
    Count(usize),
    /// Fraction of excited qubits, rounded half-up to a count.
    Fraction(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeStep {
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub qubits: usize,
    pub lmg: LmgParams,
    pub plasticity: PlasticityParams,
    pub initial: InitialState,
    pub t_max: f64,
    pub dt: TimeStep,
    /// Record every k-th step; `None` picks a stride giving at most
    /// [`DEFAULT_MAX_RECORDS`] records.
    pub record_stride: Option<usize>,
    /// Block size for the bipartite entropies; `None` means `floor(N/2)`.
    pub block_size: Option<usize>,
    pub renormalize: bool,
    pub norm_tolerance: f64,
}

impl SimulationConfig {
    pub fn new(qubits: usize, lmg: LmgParams, plasticity: PlasticityParams, initial: InitialState, t_max: f64) -> Self {
        Self {
            qubits,
            lmg,
            plasticity,
            initial,
            t_max,
            dt: TimeStep::Auto,
            record_stride: None,
            block_size: None,
            renormalize: false,
            norm_tolerance: 1e-6,
        }
    }

    pub fn sector(&self) -> Result<SpinSector> {
        SpinSector::new(self.qubits).map_err(|_| Error::config("N", "must be >= 2"))
    }

    pub fn resolved_block_size(&self) -> usize {
        self.block_size.unwrap_or(self.qubits / 2)
    }

    pub fn initial_count(&self) -> Result<usize> {
        let sector = self.sector()?;
        match self.initial {
            InitialState::Count(n) if n <= self.qubits => Ok(n),
            InitialState::Count(n) => Err(Error::config(
                "initial.count",
                format!("{n} outside 0..={}", self.qubits),
            )),
            InitialState::Fraction(f) => excitation_count_for_fraction(sector, f)
                .map_err(|_| Error::config("initial.fraction", format!("{f} outside [0, 1]"))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.qubits < 2 {
            return Err(Error::config(
                "N",
                format!("{} < 2; need a proper bipartition", self.qubits),
            ));
        }
        for (key, v) in [("g0", self.lmg.g0), ("gamma", self.lmg.gamma), ("h", self.lmg.h)] {
            if !v.is_finite() {
                return Err(Error::config(key, "must be finite"));
            }
        }
        self.plasticity.validate()?;
        self.initial_count()?;
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return Err(Error::config("t_max", format!("{} must be positive", self.t_max)));
        }
        if let TimeStep::Fixed(dt) = self.dt {
            if !(dt.is_finite() && dt > 0.0) {
                return Err(Error::config("dt", format!("{dt} must be positive or \"auto\"")));
            }
        }
        if self.record_stride == Some(0) {
            return Err(Error::config("record_stride", "must be >= 1"));
        }
        let l = self.resolved_block_size();
        if l == 0 || l >= self.qubits {
            return Err(Error::config(
                "block_size",
                format!("{l} outside 1..={}", self.qubits - 1),
            ));
        }
        if !(self.norm_tolerance.is_finite() && self.norm_tolerance > 0.0) {
            return Err(Error::config("norm_tolerance", "must be positive"));
        }
        Ok(())
    }
}

/// Joint quantum/classical state.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledState {
    pub psi: DickeVector,
    pub synapse: SynapseState,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoupledDerivative {
    pub dpsi: Vec<Complex64>,
    pub dr: f64,
    pub du: f64,
}

/// Right-hand side of the coupled system at `state`.
pub fn coupled_derivative(
    state: &CoupledState,
    parts: &HamiltonianParts,
    lmg: &LmgParams,
    plasticity: &PlasticityParams,
) -> Result<CoupledDerivative> {
    let dim = parts.sector().dim();
    if state.psi.amplitudes().len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: state.psi.amplitudes().len(),
        });
    }
    let stepper = Stepper::new(parts, *lmg, *plasticity).without_spectral_shift();
    let mut dpsi = vec![Complex64::new(0.0, 0.0); dim];
    let (dr, du) = stepper.derivative(state.psi.amplitudes(), state.synapse, &mut dpsi);
    Ok(CoupledDerivative { dpsi, dr, du })
}

/// Fixed-step RK4 for the coupled system, with preallocated stage buffers.
#[derive(Debug, Clone)]
pub struct Stepper<'a> {
    parts: &'a HamiltonianParts,
    lmg: LmgParams,
    plasticity: PlasticityParams,
    /// Constant subtracted from `K` while integrating (a global phase only),
    /// centring its spectrum to minimise the RK4 amplitude error.
    shift: f64,
    k1: Vec<Complex64>,
    k2: Vec<Complex64>,
    k3: Vec<Complex64>,
    k4: Vec<Complex64>,
    stage: Vec<Complex64>,
}

impl<'a> Stepper<'a> {
    pub fn new(parts: &'a HamiltonianParts, lmg: LmgParams, plasticity: PlasticityParams) -> Self {
        let (lo, hi) = parts.k_spectral_bounds();
        let dim = parts.sector().dim();
        let zeros = vec![Complex64::new(0.0, 0.0); dim];
        Self {
            parts,
            lmg,
            plasticity,
            shift: 0.5 * (lo + hi),
            k1: zeros.clone(),
            k2: zeros.clone(),
            k3: zeros.clone(),
            k4: zeros.clone(),
            stage: zeros,
        }
    }

    /// Integrate the Hamiltonian exactly as written, including its global phase.
    pub fn without_spectral_shift(mut self) -> Self {
        self.shift = 0.0;
        self
    }

    fn derivative(&self, psi: &[Complex64], syn: SynapseState, out: &mut [Complex64]) -> (f64, f64) {
        let kappa = self.lmg.g0 * syn.r;
        self.parts.apply_raw(kappa, self.shift, self.lmg.h, psi, out);
        for z in out.iter_mut() {
            // -i z
            *z = Complex64::new(z.im, -z.re);
        }
        let e = excitation_fraction_raw(self.parts.sector(), psi);
        plasticity_derivatives(syn, e, &self.plasticity)
    }

    /// One RK4 step of size `dt` (negative values integrate backwards).
    ///
    /// Does not check norm or bounds; see [`rk4_step`].
    pub fn step(&mut self, state: &mut CoupledState, dt: f64) {
        let psi = state.psi.amplitudes_mut();
        let s0 = state.synapse;
        let half = 0.5 * dt;

        let mut k1 = std::mem::take(&mut self.k1);
        let mut k2 = std::mem::take(&mut self.k2);
        let mut k3 = std::mem::take(&mut self.k3);
        let mut k4 = std::mem::take(&mut self.k4);
        let mut stage = std::mem::take(&mut self.stage);

        let d1 = self.derivative(psi, s0, &mut k1);
        for ((s, p), k) in stage.iter_mut().zip(psi.iter()).zip(&k1) {
            *s = p + k * half;
        }
        let s1 = SynapseState {
            r: s0.r + half * d1.0,
            u: s0.u + half * d1.1,
        };
        let d2 = self.derivative(&stage, s1, &mut k2);
        for ((s, p), k) in stage.iter_mut().zip(psi.iter()).zip(&k2) {
            *s = p + k * half;
        }
        let s2 = SynapseState {
            r: s0.r + half * d2.0,
            u: s0.u + half * d2.1,
        };
        let d3 = self.derivative(&stage, s2, &mut k3);
        for ((s, p), k) in stage.iter_mut().zip(psi.iter()).zip(&k3) {
            *s = p + k * dt;
        }
        let s3 = SynapseState {
            r: s0.r + dt * d3.0,
            u: s0.u + dt * d3.1,
        };
        let d4 = self.derivative(&stage, s3, &mut k4);

        let w = dt / 6.0;
        for (i, p) in psi.iter_mut().enumerate() {
            *p += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * w;
        }
        state.synapse = SynapseState {
            r: s0.r + w * (d1.0 + 2.0 * (d2.0 + d3.0) + d4.0),
            u: s0.u + w * (d1.1 + 2.0 * (d2.1 + d3.1) + d4.1),
        };
        state.t += dt;

        self.k1 = k1;
        self.k2 = k2;
        self.k3 = k3;
        self.k4 = k4;
        self.stage = stage;
    }
}

/// RK4 step with the run-time checks: optional renormalization, norm drift
/// against `norm_tolerance`, and synaptic bounds.
pub fn rk4_step(
    state: &mut CoupledState,
    dt: f64,
    stepper: &mut Stepper<'_>,
    renormalize: bool,
    norm_tolerance: f64,
) -> Result<()> {
    if !(dt.is_finite() && dt != 0.0) {
        return Err(Error::config("dt", format!("{dt} must be finite and non-zero")));
    }
    stepper.step(state, dt);
    check_state(state, renormalize, norm_tolerance)
}

fn check_state(state: &mut CoupledState, renormalize: bool, norm_tolerance: f64) -> Result<()> {
    let norm = state.psi.norm_sqr();
    if renormalize {
        state.psi.normalize();
    } else {
        let drift = (norm - 1.0).abs();
        if drift.is_nan() || drift > norm_tolerance {
            return Err(Error::NormDrift {
                t: state.t,
                drift,
                tolerance: norm_tolerance,
            });
        }
    }
    let lo = -SYNAPSE_BOUND_SLACK;
    let hi = 1.0 + SYNAPSE_BOUND_SLACK;
    for (var, value) in [("r", state.synapse.r), ("U", state.synapse.u)] {
        if !(value >= lo && value <= hi) {
            return Err(Error::SynapseBounds { t: state.t, var, value });
        }
    }
    Ok(())
}

/// The step bounded by the coupling scale and plasticity rates:
/// `c / (|g0|(N+2)/4 + |h|N/2 + 1/tau_r + 1/tau_f)`, frozen channels
/// contributing zero and the divisor floored at 1.
pub fn rate_limited_dt(config: &SimulationConfig) -> f64 {
    let n = config.qubits as f64;
    let p = &config.plasticity;
    let mut rate = config.lmg.g0.abs() * (n + 2.0) / 4.0 + config.lmg.h.abs() * n / 2.0;
    if p.depression_active() {
        rate += 1.0 / p.tau_r.max(AUTO_DT_TAU_FLOOR);
    }
    if p.facilitation_active() {
        rate += 1.0 / p.tau_f.max(AUTO_DT_TAU_FLOOR);
    }
    AUTO_DT_SAFETY / rate.max(1.0)
}

/// The step keeping the accumulated RK4 amplitude loss within budget.
///
/// For `y' = -i x y` one RK4 step multiplies `|y|^2` by `1 - x^6/72 + O(x^8)`,
/// so over `t_max/dt` steps the loss is at most `t_max L^6 dt^5 / 72` with `L`
/// the spectral radius of the (centred) generator. The budget is a quarter of
/// `norm_tolerance`; with both plasticity channels frozen the Hamiltonian is
/// static and the budget also covers [`ENERGY_TOLERANCE`].
pub fn accuracy_limited_dt(config: &SimulationConfig, parts: &HamiltonianParts) -> Result<f64> {
    let n = config.qubits as f64;
    let (lo, hi) = parts.k_spectral_bounds();
    let r_max = config.plasticity.r0.max(1.0);
    let g = config.lmg.g0.abs() * r_max;
    let field = config.lmg.h.abs() * n / 2.0;
    let radius = g * 0.5 * (hi - lo) + field;
    if radius == 0.0 {
        return Ok(f64::INFINITY);
    }
    let mut budget = config.norm_tolerance / 4.0;
    if config.plasticity.is_frozen() {
        let scale = g * lo.abs().max(hi.abs()) + field;
        budget = budget.min(ENERGY_TOLERANCE / (4.0 * scale));
    }
    Ok((72.0 * budget / (config.t_max * radius.powi(6))).powf(0.2))
}

/// Requested step size: the fixed value, or for `Auto` the smaller of the
/// rate- and accuracy-limited steps.
pub fn resolve_dt(config: &SimulationConfig) -> Result<f64> {
    match config.dt {
        TimeStep::Fixed(dt) => Ok(dt),
        TimeStep::Auto => {
            let parts = build_parts(config.sector()?, config.lmg.gamma);
            Ok(rate_limited_dt(config).min(accuracy_limited_dt(config, &parts)?))
        }
    }
}

/// One row of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Record {
    pub t: f64,
    /// Excitation fraction `1/2 + <Jz>/N`.
    pub e: f64,
    pub r: f64,
    pub u: f64,
    pub fidelity: f64,
    /// Von Neumann block entropy (bits).
    pub s_block: f64,
    /// Linear block entropy `1 - sum p_k^2`.
    pub s_linear: f64,
    pub energy: f64,
    /// Squared norm `<psi|psi>`.
    pub norm: f64,
}

pub const TRAJECTORY_COLUMNS: [&str; 9] = ["t", "E", "r", "U", "fidelity", "S_block", "S_linear", "energy", "norm"];

impl Record {
    pub fn values(&self) -> [f64; 9] {
        [
            self.t,
            self.e,
            self.r,
            self.u,
            self.fidelity,
            self.s_block,
            self.s_linear,
            self.energy,
            self.norm,
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub config: SimulationConfig,
    /// Step size actually used (divides `t_max` exactly).
    pub dt: f64,
    pub record_stride: usize,
    pub records: Vec<Record>,
}

impl Trajectory {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = TRAJECTORY_COLUMNS.iter().position(|&c| c == name)?;
        Some(self.records.iter().map(|r| r.values()[idx]).collect())
    }

    /// Time between consecutive records.
    pub fn sample_interval(&self) -> f64 {
        self.dt * self.record_stride as f64
    }
}

/// Computes record columns for states of one sector.
pub(crate) struct Recorder {
    weights: BlockWeights,
    initial: DickeVector,
}

impl Recorder {
    pub(crate) fn new(initial: DickeVector, block_size: usize) -> Result<Self> {
        Ok(Self {
            weights: BlockWeights::new(initial.sector(), block_size)?,
            initial,
        })
    }

    /// `energy` is passed in because the full-space oracle computes it in its own basis.
    pub(crate) fn record(
        &self,
        t: f64,
        amplitudes: &[Complex64],
        overlap: Complex64,
        synapse: SynapseState,
        energy: f64,
        norm: f64,
    ) -> Record {
        let dist = self.weights.distribution_raw(amplitudes);
        Record {
            t,
            e: excitation_fraction_raw(self.initial.sector(), amplitudes),
            r: synapse.r,
            u: synapse.u,
            fidelity: overlap.norm_sqr(),
            s_block: block_entropy(&dist),
            s_linear: block_linear_entropy(&dist),
            energy,
            norm,
        }
    }

    fn overlap(&self, amplitudes: &[Complex64]) -> Complex64 {
        self.initial
            .amplitudes()
            .iter()
            .zip(amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Number of steps and effective step: `steps` is a multiple of `stride` and
/// `t_max / steps <= dt_requested`.
pub(crate) fn step_plan(t_max: f64, dt_requested: f64, stride: Option<usize>) -> (usize, usize, f64) {
    let raw = (t_max / dt_requested * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    let stride = stride.unwrap_or_else(|| raw.div_ceil(DEFAULT_MAX_RECORDS).max(1));
    let steps = raw.div_ceil(stride) * stride;
    (steps, stride, t_max / steps as f64)
}

pub fn simulate(config: &SimulationConfig) -> Result<Trajectory> {
    config.validate()?;
    let sector = config.sector()?;
    let parts = build_parts(sector, config.lmg.gamma);
    let dt_requested = match config.dt {
        TimeStep::Fixed(dt) => dt,
        TimeStep::Auto => rate_limited_dt(config).min(accuracy_limited_dt(config, &parts)?),
    };
    let (steps, stride, dt) = step_plan(config.t_max, dt_requested, config.record_stride);

    let psi0 = dicke_state(sector, config.initial_count()?)?;
    let recorder = Recorder::new(psi0.clone(), config.resolved_block_size())?;
    let mut state = CoupledState {
        psi: psi0,
        synapse: config.plasticity.initial_state(),
        t: 0.0,
    };
    let mut stepper = Stepper::new(&parts, config.lmg, config.plasticity);

    let record = |state: &CoupledState| {
        let amps = state.psi.amplitudes();
        let energy = parts.energy_raw(config.lmg.g0 * state.synapse.r, config.lmg.h, amps);
        recorder.record(
            state.t,
            amps,
            recorder.overlap(amps),
            state.synapse,
            energy,
            state.psi.norm_sqr(),
        )
    };

    let mut records = Vec::with_capacity(steps / stride + 1);
    records.push(record(&state));
    for step in 1..=steps {
        stepper.step(&mut state, dt);
        state.t = step as f64 * dt;
        check_state(&mut state, config.renormalize, config.norm_tolerance)?;
        if step % stride == 0 {
            records.push(record(&state));
        }
    }

    Ok(Trajectory {
        config: config.clone(),
        dt,
        record_stride: stride,
        records,
    })
}
