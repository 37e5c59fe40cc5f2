//! Scalar diagnostics of a symmetric-sector state.
//!
//! The reduced state of an `L`-qubit block of a symmetric state is diagonal in
//! the block's Dicke basis, with hypergeometric weights
//! `p_k = sum_n |c_n|^2 C(L,k) C(N-L,n-k) / C(N,n)`.

use crate::error::{Error, Result};
use crate::spin::{expectation_jz, inner_product, jz_moment, DickeVector, SpinSector};
use num_complex::Complex64;

/// Probabilities below this are treated as exactly zero.
const PROBABILITY_FLOOR: f64 = 1e-300;

/// `1/2 + <Jz>/N`: the fraction of excited qubits.
pub fn excitation_fraction(psi: &DickeVector) -> f64 {
    0.5 + expectation_jz(psi) / psi.sector().qubits() as f64
}

pub(crate) fn excitation_fraction_raw(sector: SpinSector, amplitudes: &[Complex64]) -> f64 {
    0.5 + jz_moment(sector, amplitudes) / sector.qubits() as f64
}

/// Survival probability `|<psi0|psi_t>|^2`.
pub fn fidelity(psi0: &DickeVector, psi_t: &DickeVector) -> Result<f64> {
    Ok(inner_product(psi0, psi_t)?.norm_sqr())
}

/// `(sum |c_n|^2)^2`; equal to 1 for a normalized pure state.
pub fn purity(psi: &DickeVector) -> f64 {
    let n = psi.norm_sqr();
    n * n
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockDistribution {
    block_size: usize,
    probabilities: Vec<f64>,
}

impl BlockDistribution {
    pub fn new(probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::domain("block distribution length", 0, ">= 1"));
        }
        Ok(Self {
            block_size: probabilities.len() - 1,
            probabilities,
        })
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }
}

fn ln_factorials(n: usize) -> Vec<f64> {
    let mut table = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    table.push(0.0);
    for i in 1..=n {
        acc += (i as f64).ln();
        table.push(acc);
    }
    table
}

/// Precomputed hypergeometric weights for one `(N, L)` bipartition.
#[derive(Debug, Clone)]
pub struct BlockWeights {
    qubits: usize,
    block_size: usize,
    /// For each `n`: first admissible `k` and the weights for `k = k_lo..=k_hi`.
    rows: Vec<(usize, Vec<f64>)>,
}

impl BlockWeights {
    pub fn new(sector: SpinSector, block_size: usize) -> Result<Self> {
        let n_total = sector.qubits();
        if block_size == 0 || block_size >= n_total {
            return Err(Error::domain(
                "block size L",
                block_size,
                format!("1..={}", n_total.saturating_sub(1)),
            ));
        }
        let lf = ln_factorials(n_total);
        let ln_binom = |a: usize, b: usize| lf[a] - lf[b] - lf[a - b];
        let rest = n_total - block_size;
        let rows = (0..=n_total)
            .map(|n| {
                let k_lo = n.saturating_sub(rest);
                let k_hi = n.min(block_size);
                let ln_norm = ln_binom(n_total, n);
                let w = (k_lo..=k_hi)
                    .map(|k| (ln_binom(block_size, k) + ln_binom(rest, n - k) - ln_norm).exp())
                    .collect();
                (k_lo, w)
            })
            .collect();
        Ok(Self {
            qubits: n_total,
            block_size,
            rows,
        })
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub(crate) fn distribution_raw(&self, amplitudes: &[Complex64]) -> BlockDistribution {
        let mut sums = vec![NeumaierSum::default(); self.block_size + 1];
        for (c, (k_lo, w)) in amplitudes.iter().zip(&self.rows) {
            let pop = c.norm_sqr();
            if pop == 0.0 {
                continue;
            }
            for (i, &wk) in w.iter().enumerate() {
                sums[k_lo + i].add(pop * wk);
            }
        }
        let probabilities = sums
            .iter()
            .map(|s| {
                let p = s.value();
                if p < PROBABILITY_FLOOR {
                    0.0
                } else {
                    p
                }
            })
            .collect();
        BlockDistribution {
            block_size: self.block_size,
            probabilities,
        }
    }

    pub fn distribution(&self, psi: &DickeVector) -> Result<BlockDistribution> {
        if psi.sector().qubits() != self.qubits {
            return Err(Error::SectorMismatch {
                left: self.qubits,
                right: psi.sector().qubits(),
            });
        }
        Ok(self.distribution_raw(psi.amplitudes()))
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Eigenvalues of the reduced state of the first `L` qubits.
pub fn block_probabilities(psi: &DickeVector, block_size: usize) -> Result<BlockDistribution> {
    BlockWeights::new(psi.sector(), block_size)?.distribution(psi)
}

/// Von Neumann entropy of the block, in bits.
pub fn block_entropy(dist: &BlockDistribution) -> f64 {
    let s: f64 = dist
        .probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum();
    // -0.0 reads badly in output
    s.max(0.0)
}

/// `1 - sum p_k^2`.
pub fn block_linear_entropy(dist: &BlockDistribution) -> f64 {
    1.0 - dist.probabilities.iter().map(|p| p * p).sum::<f64>()
}
