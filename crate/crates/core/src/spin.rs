//! Symmetric (j = N/2) collective-spin sector in the Dicke basis.
//!
//! States are indexed by the excitation number `n = 0..=N`; the magnetic
//! quantum number is derived as `m = n - j`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// The maximally symmetric sector of `N` spin-1/2 qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinSector {
    qubits: usize,
}

impl SpinSector {
    pub fn new(qubits: usize) -> Result<Self> {
        if qubits == 0 {
            return Err(Error::domain("N", qubits, "N >= 1"));
        }
        Ok(Self { qubits })
    }

    /// Number of qubits `N`.
    pub fn qubits(&self) -> usize {
        self.qubits
    }

    /// Total angular momentum `j = N/2` (exact: N is small and even/odd halves are representable).
    pub fn j(&self) -> f64 {
        self.qubits as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.qubits + 1
    }

    /// Magnetic quantum number of the basis state with `n` excitations.
    pub fn m(&self, n: usize) -> f64 {
        n as f64 - self.j()
    }

    /// `(-j, -j+1, ..., j)` in index order.
    pub fn m_values(&self) -> Vec<f64> {
        (0..self.dim()).map(|n| self.m(n)).collect()
    }
}

/// A pure state of the symmetric sector, stored densely over `n = 0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct DickeVector {
    sector: SpinSector,
    amplitudes: Vec<Complex64>,
}

impl DickeVector {
    pub fn from_amplitudes(sector: SpinSector, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != sector.dim() {
            return Err(Error::DimensionMismatch {
                expected: sector.dim(),
                got: amplitudes.len(),
            });
        }
        Ok(Self { sector, amplitudes })
    }

    pub fn zeros(sector: SpinSector) -> Self {
        Self {
            sector,
            amplitudes: vec![Complex64::new(0.0, 0.0); sector.dim()],
        }
    }

    pub fn sector(&self) -> SpinSector {
        self.sector
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Occupation probabilities `|c_n|^2`.
    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn normalize(&mut self) {
        let norm = self.norm_sqr().sqrt();
        if norm > 0.0 {
            self.amplitudes.iter_mut().for_each(|c| *c /= norm);
        }
    }

    /// Image under the parity `m -> -m`, i.e. `n -> N - n`.
    pub fn parity_flipped(&self) -> Self {
        let mut amplitudes = self.amplitudes.clone();
        amplitudes.reverse();
        Self {
            sector: self.sector,
            amplitudes,
        }
    }

    pub(crate) fn check_same_sector(&self, other: &Self) -> Result<()> {
        if self.sector != other.sector {
            return Err(Error::SectorMismatch {
                left: self.sector.qubits(),
                right: other.sector.qubits(),
            });
        }
        Ok(())
    }
}

/// Basis state with exactly `n_excited` excited qubits.
pub fn dicke_state(sector: SpinSector, n_excited: usize) -> Result<DickeVector> {
    if n_excited > sector.qubits() {
        return Err(Error::domain(
            "n_excited",
            n_excited,
            format!("0..={}", sector.qubits()),
        ));
    }
    let mut psi = DickeVector::zeros(sector);
    psi.amplitudes[n_excited] = Complex64::new(1.0, 0.0);
    Ok(psi)
}

/// Excitation count for a fraction of `N`, rounding half-up.
pub fn excitation_count_for_fraction(sector: SpinSector, fraction: f64) -> Result<usize> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::domain("fraction", fraction, "[0, 1]"));
    }
    // floor(x + 1/2) is half-up for the non-negative values reachable here.
    let count = (fraction * sector.qubits() as f64 + 0.5).floor() as usize;
    Ok(count.min(sector.qubits()))
}

pub fn dicke_state_fraction(sector: SpinSector, fraction: f64) -> Result<DickeVector> {
    dicke_state(sector, excitation_count_for_fraction(sector, fraction)?)
}

fn check_m(j: f64, m: f64) -> Result<()> {
    // m must lie on the ladder -j, -j+1, ..., j
    let steps = m + j;
    if !(m >= -j && m <= j) || (steps - steps.round()).abs() > 1e-9 {
        return Err(Error::domain("m", m, format!("[-{j}, {j}] in integer steps")));
    }
    Ok(())
}

/// `sqrt(j(j+1) - m(m+1))`, the matrix element of `J+` from `|j, m>`.
pub fn ladder_plus_coeff(j: f64, m: f64) -> Result<f64> {
    check_m(j, m)?;
    Ok((j * (j + 1.0) - m * (m + 1.0)).max(0.0).sqrt())
}

/// `sqrt(j(j+1) - m(m-1))`, the matrix element of `J-` from `|j, m>`.
pub fn ladder_minus_coeff(j: f64, m: f64) -> Result<f64> {
    check_m(j, m)?;
    Ok((j * (j + 1.0) - m * (m - 1.0)).max(0.0).sqrt())
}

pub fn inner_product(a: &DickeVector, b: &DickeVector) -> Result<Complex64> {
    a.check_same_sector(b)?;
    Ok(a.amplitudes.iter().zip(&b.amplitudes).map(|(x, y)| x.conj() * y).sum())
}

/// `<J_z> = sum_n m(n) |c_n|^2` (not divided by the norm).
pub fn expectation_jz(psi: &DickeVector) -> f64 {
    jz_moment(psi.sector, &psi.amplitudes)
}

pub(crate) fn jz_moment(sector: SpinSector, amplitudes: &[Complex64]) -> f64 {
    let j = sector.j();
    amplitudes
        .iter()
        .enumerate()
        .map(|(n, c)| (n as f64 - j) * c.norm_sqr())
        .sum()
}
