//! Brute-force reference: the same coupled dynamics in the full `2^N`
//! tensor-product space, starting from the qubit-level Hamiltonian
//!
//! `H' = (eps/N) sum_i Z_i + sum_{i<j} [gx X_i X_j + gy Y_i Y_j] / (N(N-1))`
//!
//! with `eps = -h N/2`, `gx = -g (N-1)(1+gamma)/2`, `gy = -g (N-1)(1-gamma)/2`
//! and `g = g0 r(t)`. Bit `i` set means qubit `i` is excited (`Z_i = +1`).
//! `H'` equals the collective Hamiltonian plus the zero-point constant `g/2`,
//! which is removed so that energies are directly comparable.

use num_complex::Complex64;

use crate::dynamics::{resolve_dt, step_plan, Record, Recorder, SimulationConfig, Trajectory};
use crate::error::{Error, Result};
use crate::plasticity::{plasticity_derivatives, PlasticityParams, SynapseState};
use crate::spin::{DickeVector, SpinSector};

pub const MAX_FULL_SPACE_QUBITS: usize = 12;
/// Largest tolerated weight outside the symmetric sector.
pub const SECTOR_LEAK_TOLERANCE: f64 = 1e-8;

/// `H'(g) - g/2 = g C + F` on the full space (`C` includes the `-1/2` offset).
#[derive(Debug, Clone)]
pub struct FullSpaceHamiltonian {
    qubits: usize,
    /// Pair-flip masks `(1 << i) | (1 << j)` for `i < j`, with the bit positions.
    pairs: Vec<(usize, usize, usize)>,
    /// Flip amplitude per unit `g` when bits `i` and `j` agree / differ.
    amp_equal: f64,
    amp_differ: f64,
    /// `-h Jz` on each basis state.
    field: Vec<f64>,
}

impl FullSpaceHamiltonian {
    pub fn new(qubits: usize, gamma: f64, h: f64) -> Result<Self> {
        if qubits > MAX_FULL_SPACE_QUBITS {
            return Err(Error::SystemTooLarge {
                n: qubits,
                max: MAX_FULL_SPACE_QUBITS,
            });
        }
        if qubits == 0 {
            return Err(Error::domain("N", 0, "N >= 1"));
        }
        let n = qubits as f64;
        // Per unit g: gx/(N(N-1)) and gy/(N(N-1)).
        let cx = -(1.0 + gamma) / (2.0 * n);
        let cy = -(1.0 - gamma) / (2.0 * n);
        let mut pairs = Vec::new();
        for i in 0..qubits {
            for j in i + 1..qubits {
                pairs.push(((1 << i) | (1 << j), i, j));
            }
        }
        let eps = -h * n / 2.0;
        let field = (0..1usize << qubits)
            .map(|x| {
                let up = x.count_ones() as f64;
                eps / n * (2.0 * up - n)
            })
            .collect();
        Ok(Self {
            qubits,
            pairs,
            // Y_i Y_j contributes -1 on equal bits, +1 on differing bits
            amp_equal: cx - cy,
            amp_differ: cx + cy,
            field,
        })
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits
    }

    /// `out = (g C + F) psi`.
    pub fn apply(&self, g: f64, psi: &[Complex64], out: &mut [Complex64]) {
        for (x, o) in out.iter_mut().enumerate() {
            let mut acc = psi[x] * (self.field[x] - 0.5 * g);
            for &(mask, i, j) in &self.pairs {
                let same = ((x >> i) & 1) == ((x >> j) & 1);
                let amp = if same { self.amp_equal } else { self.amp_differ };
                acc += psi[x ^ mask] * (g * amp);
            }
            *o = acc;
        }
    }

    pub fn energy(&self, g: f64, psi: &[Complex64]) -> f64 {
        let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
        self.apply(g, psi, &mut out);
        psi.iter().zip(&out).map(|(a, b)| (a.conj() * b).re).sum()
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Embed a symmetric-sector state into the full space.
pub fn embed(psi: &DickeVector) -> Vec<Complex64> {
    let n = psi.sector().qubits();
    let norms: Vec<f64> = (0..=n).map(|k| binomial(n, k).sqrt()).collect();
    (0..1usize << n)
        .map(|x| {
            let k = x.count_ones() as usize;
            psi.amplitudes()[k] / norms[k]
        })
        .collect()
}

/// Projection onto the symmetric sector: `c_n = <D_n|psi>`.
pub fn project(qubits: usize, full: &[Complex64]) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(0.0, 0.0); qubits + 1];
    for (x, a) in full.iter().enumerate() {
        c[x.count_ones() as usize] += a;
    }
    for (k, ck) in c.iter_mut().enumerate() {
        *ck /= binomial(qubits, k).sqrt();
    }
    c
}

/// Reduced density matrix of qubits `0..block` (row-major, `2^block` square).
pub fn reduced_density_matrix(qubits: usize, full: &[Complex64], block: usize) -> Vec<Complex64> {
    let da = 1usize << block;
    let db = 1usize << (qubits - block);
    let mut rho = vec![Complex64::new(0.0, 0.0); da * da];
    for a in 0..da {
        for a2 in 0..da {
            let mut acc = Complex64::new(0.0, 0.0);
            for b in 0..db {
                acc += full[a | (b << block)] * full[a2 | (b << block)].conj();
            }
            rho[a * da + a2] = acc;
        }
    }
    rho
}

fn jz_full(qubits: usize, psi: &[Complex64]) -> f64 {
    let half = qubits as f64 / 2.0;
    psi.iter()
        .enumerate()
        .map(|(x, a)| (x.count_ones() as f64 - half) * a.norm_sqr())
        .sum()
}

struct FullStepper<'a> {
    ham: &'a FullSpaceHamiltonian,
    g0: f64,
    /// Same global-phase shift of `K` as the sector stepper, so both runs
    /// apply an identical RK4 map on the sector.
    shift: f64,
    plasticity: PlasticityParams,
    k: [Vec<Complex64>; 4],
    stage: Vec<Complex64>,
}

impl FullStepper<'_> {
    fn derivative(&self, psi: &[Complex64], syn: SynapseState, out: &mut [Complex64]) -> (f64, f64) {
        let g = self.g0 * syn.r;
        self.ham.apply(g, psi, out);
        let offset = g * self.shift;
        for (z, p) in out.iter_mut().zip(psi) {
            let z0 = *z - p * offset;
            *z = Complex64::new(z0.im, -z0.re);
        }
        let e = 0.5 + jz_full(self.ham.qubits, psi) / self.ham.qubits as f64;
        plasticity_derivatives(syn, e, &self.plasticity)
    }

    fn step(&mut self, psi: &mut [Complex64], syn: &mut SynapseState, dt: f64) {
        let s0 = *syn;
        let half = 0.5 * dt;
        let mut k = std::mem::take(&mut self.k);
        let mut stage = std::mem::take(&mut self.stage);

        let d1 = self.derivative(psi, s0, &mut k[0]);
        for x in 0..psi.len() {
            stage[x] = psi[x] + k[0][x] * half;
        }
        let s1 = SynapseState {
            r: s0.r + half * d1.0,
            u: s0.u + half * d1.1,
        };
        let d2 = self.derivative(&stage, s1, &mut k[1]);
        for x in 0..psi.len() {
            stage[x] = psi[x] + k[1][x] * half;
        }
        let s2 = SynapseState {
            r: s0.r + half * d2.0,
            u: s0.u + half * d2.1,
        };
        let d3 = self.derivative(&stage, s2, &mut k[2]);
        for x in 0..psi.len() {
            stage[x] = psi[x] + k[2][x] * dt;
        }
        let s3 = SynapseState {
            r: s0.r + dt * d3.0,
            u: s0.u + dt * d3.1,
        };
        let d4 = self.derivative(&stage, s3, &mut k[3]);

        let w = dt / 6.0;
        for x in 0..psi.len() {
            psi[x] += (k[0][x] + (k[1][x] + k[2][x]) * 2.0 + k[3][x]) * w;
        }
        *syn = SynapseState {
            r: s0.r + w * (d1.0 + 2.0 * (d2.0 + d3.0) + d4.0),
            u: s0.u + w * (d1.1 + 2.0 * (d2.1 + d3.1) + d4.1),
        };
        self.k = k;
        self.stage = stage;
    }
}

/// Run `config` in the full `2^N` space with the same integrator and step plan
/// as [`crate::dynamics::simulate`].
///
/// Entropies are taken from the symmetric-sector projection; the run fails if
/// the state leaks out of the sector by more than [`SECTOR_LEAK_TOLERANCE`].
pub fn full_space_simulate(config: &SimulationConfig) -> Result<Trajectory> {
    config.validate()?;
    let n = config.qubits;
    let ham = FullSpaceHamiltonian::new(n, config.lmg.gamma, config.lmg.h)?;
    let sector = SpinSector::new(n)?;
    let (steps, stride, dt) = step_plan(config.t_max, resolve_dt(config)?, config.record_stride);

    let psi0_sector = crate::spin::dicke_state(sector, config.initial_count()?)?;
    let psi0 = embed(&psi0_sector);
    let recorder = Recorder::new(psi0_sector, config.resolved_block_size())?;
    let mut psi = psi0.clone();
    let mut syn = config.plasticity.initial_state();
    let dim = ham.dim();
    let mut stepper = FullStepper {
        ham: &ham,
        g0: config.lmg.g0,
        shift: {
            let (lo, hi) = crate::hamiltonian::build_parts(sector, config.lmg.gamma).k_spectral_bounds();
            0.5 * (lo + hi)
        },
        plasticity: config.plasticity,
        k: std::array::from_fn(|_| vec![Complex64::new(0.0, 0.0); dim]),
        stage: vec![Complex64::new(0.0, 0.0); dim],
    };

    let record = |t: f64, psi: &[Complex64], syn: SynapseState| -> Result<Record> {
        let sector_amps = project(n, psi);
        let norm: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
        let inside: f64 = sector_amps.iter().map(|a| a.norm_sqr()).sum();
        let leak = norm - inside;
        if leak > SECTOR_LEAK_TOLERANCE {
            return Err(Error::SectorLeak { t, leak });
        }
        let overlap: Complex64 = psi0.iter().zip(psi).map(|(a, b)| a.conj() * b).sum();
        let mut rec = recorder.record(
            t,
            &sector_amps,
            overlap,
            syn,
            ham.energy(config.lmg.g0 * syn.r, psi),
            norm,
        );
        rec.e = 0.5 + jz_full(n, psi) / n as f64;
        Ok(rec)
    };

    let mut records = vec![record(0.0, &psi, syn)?];
    for step in 1..=steps {
        stepper.step(&mut psi, &mut syn, dt);
        let t = step as f64 * dt;
        let norm: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
        if config.renormalize {
            let s = norm.sqrt();
            psi.iter_mut().for_each(|a| *a /= s);
        } else if norm.is_nan() || (norm - 1.0).abs() > config.norm_tolerance {
            return Err(Error::NormDrift {
                t,
                drift: (norm - 1.0).abs(),
                tolerance: config.norm_tolerance,
            });
        }
        if step % stride == 0 {
            records.push(record(t, &psi, syn)?);
        }
    }

    Ok(Trajectory {
        config: config.clone(),
        dt,
        record_stride: stride,
        records,
    })
}
