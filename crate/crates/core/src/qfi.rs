//! Quantum Fisher information of pure and mixed states, and numerical
//! differentiation of parameter-to-state pipelines.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lindblad::DensityMatrix;
use crate::linalg::{eigh, inner, ComplexMatrix, StateVector};

/// Negative QFI values above this are rounding noise and clamp to zero.
const NEGATIVE_TOL: f64 = -1e-9;
/// Below this determinant the qubit formula hands over to the spectral one.
pub const NEAR_PURE_DET: f64 = 1e-10;
/// Eigenvalue pairs with `λ_i + λ_j` at or below this are dropped.
const SLD_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QfiMethod {
    Pure,
    QubitClosedForm,
    SldSpectral,
}

impl QfiMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            QfiMethod::Pure => "pure",
            QfiMethod::QubitClosedForm => "qubit-closed-form",
            QfiMethod::SldSpectral => "sld-spectral",
        }
    }
}

impl fmt::Display for QfiMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QfiResult {
    pub value: f64,
    pub method: QfiMethod,
    /// Finite-difference step in `B_z`, when the derivative was numerical.
    pub fd_step: Option<f64>,
}

impl QfiResult {
    fn checked(value: f64, method: QfiMethod) -> Result<Self> {
        if !value.is_finite() || value < NEGATIVE_TOL {
            return Err(Error::NumericalFailure(format!("QFI evaluated to {value} ({method})")));
        }
        Ok(Self { value: value.max(0.0), method, fd_step: None })
    }

    pub fn with_fd_step(mut self, h: f64) -> Self {
        self.fd_step = Some(h);
        self
    }
}

/// `4(⟨∂ψ|∂ψ⟩ − |⟨∂ψ|ψ⟩|²)`.
pub fn qfi_pure(psi: &StateVector, dpsi: &[Complex64]) -> Result<QfiResult> {
    if dpsi.len() != psi.dim() {
        return Err(Error::DimensionMismatch { expected: psi.dim(), found: dpsi.len() });
    }
    let norm = inner(dpsi, dpsi).re;
    let overlap = inner(dpsi, psi.amplitudes()).norm_sqr();
    QfiResult::checked(4.0 * (norm - overlap), QfiMethod::Pure)
}

/// Qubit formula `Tr[(∂ρ)²] + Tr[(ρ∂ρ)²]/det ρ`. Nearly pure states
/// (`det ρ < 1e-10`) are routed to [`qfi_sld`].
pub fn qfi_qubit(rho: &DensityMatrix, drho: &ComplexMatrix) -> Result<QfiResult> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: rho.dim() });
    }
    if drho.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: drho.dim() });
    }
    let r = rho.matrix();
    let det = (r[(0, 0)] * r[(1, 1)] - r[(0, 1)] * r[(1, 0)]).re;
    if det < NEAR_PURE_DET {
        return qfi_sld(rho, drho);
    }
    let d2 = (drho * drho).trace().re;
    let rd = r * drho;
    let rd2 = (&rd * &rd).trace().re;
    QfiResult::checked(d2 + rd2 / det, QfiMethod::QubitClosedForm)
}

/// Spectral SLD formula `2 Σ_{λ_i+λ_j>ε} |⟨i|∂ρ|j⟩|² / (λ_i + λ_j)`.
pub fn qfi_sld(rho: &DensityMatrix, drho: &ComplexMatrix) -> Result<QfiResult> {
    if drho.dim() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: drho.dim() });
    }
    let es = eigh(rho.matrix())?;
    let v = &es.eigenvectors;
    let d = &(&v.dagger() * drho) * v;
    let n = rho.dim();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            let denom = es.eigenvalues[i] + es.eigenvalues[j];
            if denom > SLD_EPS {
                total += d[(i, j)].norm_sqr() / denom;
            }
        }
    }
    QfiResult::checked(2.0 * total, QfiMethod::SldSpectral)
}

/// A density matrix depending on one real parameter, evaluated around a
/// nominal value. Implementations must be re-entrant.
pub trait StateFamily: Sync {
    fn nominal(&self) -> f64;
    fn evaluate(&self, b: f64) -> Result<DensityMatrix>;
}

/// A normalized pure state depending on one real parameter.
pub trait PureStateFamily: Sync {
    fn nominal(&self) -> f64;
    fn evaluate(&self, b: f64) -> Result<StateVector>;
}

/// [`StateFamily`] backed by a closure.
pub struct FnFamily<F> {
    nominal: f64,
    f: F,
}

impl<F> FnFamily<F>
where
    F: Fn(f64) -> Result<DensityMatrix> + Sync,
{
    pub fn new(nominal: f64, f: F) -> Self {
        Self { nominal, f }
    }
}

impl<F> StateFamily for FnFamily<F>
where
    F: Fn(f64) -> Result<DensityMatrix> + Sync,
{
    fn nominal(&self) -> f64 {
        self.nominal
    }

    fn evaluate(&self, b: f64) -> Result<DensityMatrix> {
        (self.f)(b)
    }
}

/// [`PureStateFamily`] backed by a closure.
pub struct FnPureFamily<F> {
    nominal: f64,
    f: F,
}

impl<F> FnPureFamily<F>
where
    F: Fn(f64) -> Result<StateVector> + Sync,
{
    pub fn new(nominal: f64, f: F) -> Self {
        Self { nominal, f }
    }
}

impl<F> PureStateFamily for FnPureFamily<F>
where
    F: Fn(f64) -> Result<StateVector> + Sync,
{
    fn nominal(&self) -> f64 {
        self.nominal
    }

    fn evaluate(&self, b: f64) -> Result<StateVector> {
        (self.f)(b)
    }
}

/// Default central-difference step `1e-5·max(1, |b₀|)`.
pub fn default_step(b0: f64) -> f64 {
    1e-5 * b0.abs().max(1.0)
}

/// Richardson-extrapolated central difference: with `D_h` the central
/// difference at step `h`, returns `(4 D_{h/2} − D_h)/3`.
/// `eval` receives the offset from the nominal parameter value.
fn richardson<T>(
    h: f64,
    mut eval: impl FnMut(f64) -> Result<T>,
    combine: impl Fn(&T, &T, f64) -> T,
    extrapolate: impl Fn(&T, &T) -> T,
) -> Result<T> {
    let (p1, m1) = (eval(h)?, eval(-h)?);
    let (p2, m2) = (eval(h / 2.0)?, eval(-h / 2.0)?);
    let coarse = combine(&p1, &m1, 2.0 * h);
    let fine = combine(&p2, &m2, h);
    Ok(extrapolate(&fine, &coarse))
}

/// `∂ρ/∂b` at the family's nominal value, symmetrized.
pub fn differentiate_state(family: &dyn StateFamily) -> Result<ComplexMatrix> {
    let b0 = family.nominal();
    differentiate_state_with_step(family, default_step(b0))
}

pub fn differentiate_state_with_step(family: &dyn StateFamily, h: f64) -> Result<ComplexMatrix> {
    let b0 = family.nominal();
    let d = richardson(
        h,
        |offset| family.evaluate(b0 + offset).map(DensityMatrix::into_matrix),
        |plus, minus, width| (plus - minus).scale_real(1.0 / width),
        |fine, coarse| (&fine.scale_real(4.0) - coarse).scale_real(1.0 / 3.0),
    )?;
    Ok(ComplexMatrix::hermitian_part(&d))
}

/// `(ψ(b₀), ∂ψ/∂b)` with `ψ(b₀ ± h)` phase-aligned to `ψ(b₀)` so that their
/// overlap is real and positive before differencing.
pub fn differentiate_pure_state(family: &dyn PureStateFamily) -> Result<(StateVector, Vec<Complex64>)> {
    let b0 = family.nominal();
    let psi0 = family.evaluate(b0)?;
    let align = |b: f64| -> Result<Vec<Complex64>> {
        let psi = family.evaluate(b)?;
        let overlap = inner(psi0.amplitudes(), psi.amplitudes());
        if overlap.norm() < 1e-6 {
            return Err(Error::NumericalFailure(format!(
                "state at b = {b} is nearly orthogonal to the nominal state; step too large or level crossing"
            )));
        }
        let phase = overlap.conj() / overlap.norm();
        Ok(psi.amplitudes().iter().map(|z| z * phase).collect())
    };
    let diff = |a: &Vec<Complex64>, b: &Vec<Complex64>, width: f64| -> Vec<Complex64> {
        a.iter().zip(b).map(|(x, y)| (x - y) / width).collect()
    };
    let d = richardson(
        default_step(b0),
        |offset| align(b0 + offset),
        diff,
        |fine, coarse| fine.iter().zip(coarse).map(|(f, c)| (f * 4.0 - c) / 3.0).collect(),
    )?;
    Ok((psi0, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{pauli, Axis};

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn pure_qfi_of_constant_state_is_zero() {
        let psi = StateVector::basis(2, 0);
        assert_eq!(qfi_pure(&psi, &[c(0.0), c(0.0)]).unwrap().value, 0.0);
    }

    #[test]
    fn phase_encoded_qubit() {
        // ψ = (e^{-ibt}|0⟩ + e^{ibt}|1⟩)/√2, ∂ψ = (−it, it)ψ ⇒ 4t²
        let t = 1.7;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = StateVector::new(vec![c(s), c(s)]).unwrap();
        let dpsi = [Complex64::new(0.0, -t * s), Complex64::new(0.0, t * s)];
        let q = qfi_pure(&psi, &dpsi).unwrap();
        assert!((q.value - 4.0 * t * t).abs() < 1e-12);
        assert_eq!(q.method, QfiMethod::Pure);
    }

    #[test]
    fn maximally_mixed_static_family() {
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        let zero = ComplexMatrix::zeros(2);
        assert_eq!(qfi_qubit(&rho, &zero).unwrap().value, 0.0);
        assert_eq!(qfi_sld(&rho, &zero).unwrap().value, 0.0);
    }

    #[test]
    fn binary_classical_fisher_information() {
        let rho = DensityMatrix::new(ComplexMatrix::diag(&[c(0.5), c(0.5)])).unwrap();
        let drho = ComplexMatrix::diag(&[c(1.0), c(-1.0)]);
        let q = qfi_qubit(&rho, &drho).unwrap();
        assert!((q.value - 4.0).abs() < 1e-14);
        assert_eq!(q.method, QfiMethod::QubitClosedForm);
        assert!((qfi_sld(&rho, &drho).unwrap().value - 4.0).abs() < 1e-14);
    }

    #[test]
    fn near_pure_qubit_falls_back_to_spectral() {
        let rho = DensityMatrix::new(ComplexMatrix::diag(&[c(1.0), c(0.0)])).unwrap();
        let drho = pauli(Axis::X).scale_real(0.3);
        let q = qfi_qubit(&rho, &drho).unwrap();
        assert_eq!(q.method, QfiMethod::SldSpectral);
        // 2·(2·0.09/1) = 0.36
        assert!((q.value - 0.36).abs() < 1e-14);
    }

    #[test]
    fn qubit_formula_rejects_two_spin_states() {
        let rho = DensityMatrix::maximally_mixed(4).unwrap();
        assert!(matches!(
            qfi_qubit(&rho, &ComplexMatrix::zeros(4)),
            Err(Error::DimensionMismatch { expected: 2, found: 4 })
        ));
    }

    #[test]
    fn constant_family_has_zero_derivative() {
        let fam = FnFamily::new(0.3, |_b| DensityMatrix::maximally_mixed(2));
        assert!(differentiate_state(&fam).unwrap().max_abs() < 1e-10);
    }

    #[test]
    fn dephased_phase_family_derivative() {
        // ρ_01 = e^{−ηT} e^{−2ibT}/2 ⇒ |∂ρ_01| = T e^{−ηT}
        let (eta, t) = (0.5f64, 1.0f64);
        let fam = FnFamily::new(0.1, move |b| {
            let off = Complex64::from_polar(0.5 * (-eta * t).exp(), -2.0 * b * t);
            DensityMatrix::new(ComplexMatrix::from_rows([[c(0.5), off], [off.conj(), c(0.5)]]))
        });
        let d = differentiate_state(&fam).unwrap();
        assert!((d[(0, 1)].norm() - t * (-eta * t).exp()).abs() < 1e-9);
        assert!((d[(0, 1)].norm() - 0.606531).abs() < 1e-6);
    }

    #[test]
    fn pure_family_derivative_survives_random_gauge() {
        // eigenvector phases flip arbitrarily between evaluations
        let fam = FnPureFamily::new(0.4, |b: f64| {
            let phase = Complex64::from_polar(1.0, 1000.0 * b);
            StateVector::new(vec![c((b / 2.0).cos()) * phase, c((b / 2.0).sin()) * phase])
        });
        let (psi, d) = differentiate_pure_state(&fam).unwrap();
        // rotation by angle b/2 ⇒ QFI = 4·(1/2)² = 1
        assert!((qfi_pure(&psi, &d).unwrap().value - 1.0).abs() < 1e-8);
    }
}
