//! Banded LMG Hamiltonian on the symmetric sector.
//!
//! `H(t) = g0 r(t) K + h M` with
//! `K = -(1/N) [(J^2 - Jz^2) + (gamma/2)(J+^2 + J-^2)]` and `M = -Jz`.
//! `K` is real symmetric with non-zero bands only at offsets `0` and `+-2`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spin::{DickeVector, SpinSector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LmgParams {
    /// Maximum coupling constant.
    pub g0: f64,
    /// Anisotropy between the `Jx^2` and `Jy^2` terms.
    pub gamma: f64,
    /// External field along z. Zero for every bundled preset.
    pub h: f64,
}

impl LmgParams {
    pub fn new(g0: f64, gamma: f64) -> Self {
        Self { g0, gamma, h: 0.0 }
    }
}

/// Cached `K` (bands) and `M` (diagonal) for one `(sector, gamma)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianParts {
    sector: SpinSector,
    gamma: f64,
    /// `K[n, n]`
    diag: Vec<f64>,
    /// `K[n, n + 2] == K[n + 2, n]`, length `max(dim - 2, 0)`
    band2: Vec<f64>,
    /// `M[n] = -(n - N/2)`
    field: Vec<f64>,
}

pub fn build_parts(sector: SpinSector, gamma: f64) -> HamiltonianParts {
    let n_qubits = sector.qubits() as f64;
    let j = sector.j();
    let casimir = j * (j + 1.0);
    let dim = sector.dim();

    let diag = (0..dim)
        .map(|n| {
            let m = sector.m(n);
            -(casimir - m * m) / n_qubits
        })
        .collect();
    let band2 = (0..dim.saturating_sub(2))
        .map(|n| {
            let m = sector.m(n);
            // c+(m) c+(m+1) under one square root keeps exact products exact
            let a = casimir - m * (m + 1.0);
            let b = casimir - (m + 1.0) * (m + 2.0);
            -gamma / (2.0 * n_qubits) * (a * b).max(0.0).sqrt()
        })
        .collect();
    let field = (0..dim).map(|n| -sector.m(n)).collect();

    HamiltonianParts {
        sector,
        gamma,
        diag,
        band2,
        field,
    }
}

impl HamiltonianParts {
    pub fn sector(&self) -> SpinSector {
        self.sector
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn k_diagonal(&self) -> &[f64] {
        &self.diag
    }

    pub fn k_band2(&self) -> &[f64] {
        &self.band2
    }

    pub fn field_diagonal(&self) -> &[f64] {
        &self.field
    }

    /// Dense `K`, row-major. Intended for checks on small sectors.
    pub fn dense_k(&self) -> Vec<Vec<f64>> {
        let dim = self.sector.dim();
        let mut k = vec![vec![0.0; dim]; dim];
        for (n, &d) in self.diag.iter().enumerate() {
            k[n][n] = d;
        }
        for (n, &v) in self.band2.iter().enumerate() {
            k[n][n + 2] = v;
            k[n + 2][n] = v;
        }
        k
    }

    /// `out = (kappa (K - shift) + h M) psi` on raw amplitude slices.
    ///
    /// `shift` only changes the global phase of the evolved state.
    #[inline]
    pub(crate) fn apply_raw(&self, kappa: f64, shift: f64, h: f64, psi: &[Complex64], out: &mut [Complex64]) {
        let dim = psi.len();
        for n in 0..dim {
            let mut acc = psi[n] * (kappa * (self.diag[n] - shift) + h * self.field[n]);
            if n >= 2 {
                acc += psi[n - 2] * (kappa * self.band2[n - 2]);
            }
            if n + 2 < dim {
                acc += psi[n + 2] * (kappa * self.band2[n]);
            }
            out[n] = acc;
        }
    }

    fn check_dim(&self, psi: &DickeVector) -> Result<()> {
        if psi.amplitudes().len() != self.sector.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.sector.dim(),
                got: psi.amplitudes().len(),
            });
        }
        Ok(())
    }

    /// Smallest and largest eigenvalue of `K`.
    ///
    /// `K` splits into two tridiagonal blocks (even and odd `n`), so Sturm
    /// bisection on each block gives the extremes without a full eigensolve.
    pub fn k_spectral_bounds(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for parity in 0..2 {
            let d: Vec<f64> = self.diag.iter().skip(parity).step_by(2).copied().collect();
            if d.is_empty() {
                continue;
            }
            let e: Vec<f64> = self.band2.iter().skip(parity).step_by(2).copied().collect();
            let (a, b) = tridiagonal_extremes(&d, &e[..d.len() - 1]);
            lo = lo.min(a);
            hi = hi.max(b);
        }
        (lo, hi)
    }
}

/// Number of eigenvalues strictly below `x` of the symmetric tridiagonal matrix (d, e).
fn sturm_count(d: &[f64], e: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..d.len() {
        let coupling = if i == 0 { 0.0 } else { e[i - 1] * e[i - 1] / q };
        q = d[i] - x - coupling;
        if q == 0.0 {
            q = -f64::EPSILON * (d[i].abs() + x.abs() + 1.0);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn tridiagonal_extremes(d: &[f64], e: &[f64]) -> (f64, f64) {
    let n = d.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { e[i - 1].abs() } else { 0.0 } + if i < n - 1 { e[i].abs() } else { 0.0 };
        lo = lo.min(d[i] - r);
        hi = hi.max(d[i] + r);
    }
    let pad = 1e-12 * (lo.abs() + hi.abs() + 1.0);
    let (lo, hi) = (lo - pad, hi + pad);
    let bisect = |target: usize| {
        // smallest x with count(x) >= target
        let (mut a, mut b) = (lo, hi);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if sturm_count(d, e, mid) >= target {
                b = mid;
            } else {
                a = mid;
            }
            if b - a <= 4.0 * f64::EPSILON * (a.abs() + b.abs()) {
                break;
            }
        }
        0.5 * (a + b)
    };
    (bisect(1), bisect(n))
}

/// `(g0 r K + h M) psi`, computed from the three bands in O(N).
pub fn apply_hamiltonian(parts: &HamiltonianParts, g0: f64, h: f64, r: f64, psi: &DickeVector) -> Result<DickeVector> {
    parts.check_dim(psi)?;
    let mut out = DickeVector::zeros(parts.sector);
    parts.apply_raw(g0 * r, 0.0, h, psi.amplitudes(), out.amplitudes_mut());
    Ok(out)
}

/// `<psi|H(t)|psi>` (real part; the imaginary part vanishes for Hermitian `H`).
pub fn energy_expectation(parts: &HamiltonianParts, g0: f64, h: f64, r: f64, psi: &DickeVector) -> Result<f64> {
    parts.check_dim(psi)?;
    Ok(parts.energy_raw(g0 * r, h, psi.amplitudes()))
}

impl HamiltonianParts {
    pub(crate) fn energy_raw(&self, kappa: f64, h: f64, psi: &[Complex64]) -> f64 {
        let dim = psi.len();
        let mut acc = 0.0;
        for (n, c) in psi.iter().enumerate() {
            acc += c.norm_sqr() * (kappa * self.diag[n] + h * self.field[n]);
        }
        for n in 0..dim.saturating_sub(2) {
            // 2 Re(conj(c_n) c_{n+2}) K[n, n+2]
            acc += 2.0 * kappa * self.band2[n] * (psi[n].conj() * psi[n + 2]).re;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::{dicke_state, inner_product, ladder_plus_coeff};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn random_state(sector: SpinSector, seed: &[f64]) -> DickeVector {
        let amps = (0..sector.dim())
            .map(|n| Complex64::new(seed[2 * n % seed.len()], seed[(2 * n + 1) % seed.len()]))
            .collect();
        let mut psi = DickeVector::from_amplitudes(sector, amps).unwrap();
        psi.normalize();
        psi
    }

    #[test]
    fn two_qubit_matrix() {
        let parts = build_parts(SpinSector::new(2).unwrap(), 1.0);
        let k = parts.dense_k();
        let expected = [[-0.5, 0.0, -0.5], [0.0, -1.0, 0.0], [-0.5, 0.0, -0.5]];
        for (row, exp) in k.iter().zip(expected.iter()) {
            for (a, b) in row.iter().zip(exp.iter()) {
                assert_relative_eq!(*a, *b, epsilon = 1e-15);
            }
        }
        let iso = build_parts(SpinSector::new(2).unwrap(), 0.0);
        assert!(iso.k_band2().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn field_diagonal_top_entry() {
        for n in [1usize, 2, 7, 80] {
            let parts = build_parts(SpinSector::new(n).unwrap(), 0.8);
            assert_eq!(*parts.field_diagonal().last().unwrap(), -(n as f64) / 2.0);
        }
    }

    #[test]
    fn apply_examples() {
        let s = SpinSector::new(2).unwrap();
        let parts = build_parts(s, 1.0);
        let psi = dicke_state(s, 1).unwrap();
        let out = apply_hamiltonian(&parts, 1.0, 0.0, 1.0, &psi).unwrap();
        assert_eq!(out.amplitudes()[1], Complex64::new(-1.0, 0.0));
        assert_eq!(out.amplitudes()[0], Complex64::new(0.0, 0.0));

        let psi0 = dicke_state(s, 0).unwrap();
        let out = apply_hamiltonian(&parts, 1.0, 0.0, 1.0, &psi0).unwrap();
        let re: Vec<f64> = out.amplitudes().iter().map(|c| c.re).collect();
        assert_eq!(re, vec![-0.5, 0.0, -0.5]);

        let zero = apply_hamiltonian(&parts, 3.0, 0.0, 0.0, &psi0).unwrap();
        assert!(zero.amplitudes().iter().all(|c| c.norm() == 0.0));

        let wrong = dicke_state(SpinSector::new(3).unwrap(), 0).unwrap();
        assert!(apply_hamiltonian(&parts, 1.0, 0.0, 1.0, &wrong).is_err());
    }

    #[test]
    fn energy_examples() {
        let s = SpinSector::new(2).unwrap();
        let parts = build_parts(s, 1.0);
        let psi = dicke_state(s, 1).unwrap();
        assert_eq!(energy_expectation(&parts, 1.0, 0.0, 1.0, &psi).unwrap(), -1.0);

        // (|0> - |2>)/sqrt 2 is an eigenvector of K with eigenvalue 0,
        // (|0> + |2>)/sqrt 2 has eigenvalue -1.
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = DickeVector::from_amplitudes(
            s,
            vec![Complex64::new(h, 0.0), Complex64::new(0.0, 0.0), Complex64::new(h, 0.0)],
        )
        .unwrap();
        assert_relative_eq!(
            energy_expectation(&parts, 1.0, 0.0, 1.0, &plus).unwrap(),
            -1.0,
            epsilon = 1e-15
        );

        let big = build_parts(SpinSector::new(12).unwrap(), 0.7);
        let psi = random_state(big.sector(), &[0.3, -0.2, 0.9, 0.1, -0.5, 0.4, 0.05]);
        let e1 = energy_expectation(&big, 0.4, 0.0, 0.8, &psi).unwrap();
        let e3 = energy_expectation(&big, 0.4, 0.0, 2.4, &psi).unwrap();
        assert_relative_eq!(e3, 3.0 * e1, max_relative = 1e-13);
    }

    #[test]
    fn spectral_bounds_match_dense() {
        use nalgebra::DMatrix;
        for (n, gamma) in [(1usize, 0.5), (2, 1.0), (7, 0.8), (20, 0.8), (40, 1.0), (33, -0.3)] {
            let parts = build_parts(SpinSector::new(n).unwrap(), gamma);
            let dense = parts.dense_k();
            let dim = dense.len();
            let m = DMatrix::from_fn(dim, dim, |i, j| dense[i][j]);
            let eig = m.symmetric_eigenvalues();
            let (lo, hi) = parts.k_spectral_bounds();
            assert_relative_eq!(lo, eig.min(), epsilon = 1e-9);
            assert_relative_eq!(hi, eig.max(), epsilon = 1e-9);
        }
    }

    /// Dense `(1+g) Jx^2 + (1-g) Jy^2` built from ladder matrices with complex arithmetic.
    fn direct_xy_form(sector: SpinSector, gamma: f64) -> nalgebra::DMatrix<Complex64> {
        use nalgebra::DMatrix;
        let dim = sector.dim();
        let j = sector.j();
        let mut jp = DMatrix::<Complex64>::zeros(dim, dim);
        for n in 0..dim - 1 {
            jp[(n + 1, n)] = Complex64::new(ladder_plus_coeff(j, sector.m(n)).unwrap(), 0.0);
        }
        let jm = jp.adjoint();
        let half = Complex64::new(0.5, 0.0);
        let jx = (&jp + &jm) * half;
        let jy = (&jp - &jm) * Complex64::new(0.0, -0.5);
        let jx2 = &jx * &jx;
        let jy2 = &jy * &jy;
        jx2 * Complex64::new(1.0 + gamma, 0.0) + jy2 * Complex64::new(1.0 - gamma, 0.0)
    }

    #[test]
    fn ladder_identity_reproduces_xy_form() {
        use nalgebra::DMatrix;
        for n in 1..=10 {
            for gamma in [1.0, 0.8, 0.3] {
                let s = SpinSector::new(n).unwrap();
                let parts = build_parts(s, gamma);
                let dense = parts.dense_k();
                let dim = s.dim();
                let k = DMatrix::from_fn(dim, dim, |a, b| dense[a][b]);
                let direct = direct_xy_form(s, gamma) * Complex64::new(-1.0 / n as f64, 0.0);
                for a in 0..dim {
                    for b in 0..dim {
                        assert!((direct[(a, b)] - Complex64::new(k[(a, b)], 0.0)).norm() < 1e-10);
                    }
                }
                let ours = k.symmetric_eigenvalues();
                let theirs = direct.symmetric_eigenvalues();
                let mut x: Vec<f64> = ours.iter().copied().collect();
                let mut y: Vec<f64> = theirs.iter().copied().collect();
                x.sort_by(f64::total_cmp);
                y.sort_by(f64::total_cmp);
                for (a, b) in x.iter().zip(&y) {
                    assert!((a - b).abs() < 1e-10, "N={n} gamma={gamma}: {a} vs {b}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn hermitian(seed in proptest::collection::vec(-1.0f64..1.0, 16), n in 1usize..30, g in 0.0f64..1.5, hf in -1.0f64..1.0) {
            let s = SpinSector::new(n).unwrap();
            let parts = build_parts(s, g);
            let a = random_state(s, &seed);
            let mut rev = seed.clone();
            rev.reverse();
            let b = random_state(s, &rev);
            let ha = apply_hamiltonian(&parts, 0.7, hf, 0.9, &a).unwrap();
            let hb = apply_hamiltonian(&parts, 0.7, hf, 0.9, &b).unwrap();
            let lhs = inner_product(&a, &hb).unwrap();
            let rhs = inner_product(&b, &ha).unwrap().conj();
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }

        #[test]
        fn commutes_with_parity(seed in proptest::collection::vec(-1.0f64..1.0, 16), n in 1usize..40, g in -1.0f64..1.5) {
            let s = SpinSector::new(n).unwrap();
            let parts = build_parts(s, g);
            let psi = random_state(s, &seed);
            let hp = apply_hamiltonian(&parts, 1.3, 0.0, 1.0, &psi.parity_flipped()).unwrap();
            let ph = apply_hamiltonian(&parts, 1.3, 0.0, 1.0, &psi).unwrap().parity_flipped();
            let diff: f64 = hp.amplitudes().iter().zip(ph.amplitudes()).map(|(x, y)| (x - y).norm_sqr()).sum();
            prop_assert!(diff.sqrt() <= 1e-12);
        }

        #[test]
        fn banded_matches_dense(seed in proptest::collection::vec(-1.0f64..1.0, 16), n in 1usize..=20, g in -1.0f64..1.5, hf in -1.0f64..1.0, r in 0.0f64..1.0) {
            let s = SpinSector::new(n).unwrap();
            let parts = build_parts(s, g);
            let psi = random_state(s, &seed);
            let got = apply_hamiltonian(&parts, 0.9, hf, r, &psi).unwrap();
            let dense = parts.dense_k();
            for (row, k) in dense.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (col, &v) in k.iter().enumerate() {
                    acc += psi.amplitudes()[col] * (0.9 * r * v);
                }
                acc += psi.amplitudes()[row] * (hf * parts.field_diagonal()[row]);
                prop_assert!((acc - got.amplitudes()[row]).norm() < 1e-12);
            }
        }
    }
}
