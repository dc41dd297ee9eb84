//! Markovian master equations
//! `ρ̇ = −i[H, ρ] + Σ_k γ_k (L_k ρ L_k† − ½{L_k† L_k, ρ})`
//! with time-independent generators.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{eigh, expm, tensor, ComplexMatrix, StateVector};

const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;
/// Padé exponentials leave negative eigenvalues of order 1e-13 behind.
const POSITIVITY_TOL: f64 = -1e-9;

/// Trace-one Hermitian positive-semidefinite state of dimension 2 or 4.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    /// Validates `m` against the state invariants.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let dim = m.dim();
        if dim != 2 && dim != 4 {
            return Err(Error::InvalidState(format!("density matrix dimension {dim} is not 2 or 4")));
        }
        if !m.is_finite() {
            return Err(Error::InvalidState("non-finite entries".into()));
        }
        let herm = m.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (error {herm:.3e})")));
        }
        let trace = m.trace();
        if (trace - 1.0).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {trace} differs from 1")));
        }
        let min_eig = eigh(&m)?.eigenvalues[0];
        if min_eig < POSITIVITY_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min_eig:.3e}")));
        }
        Ok(Self(m))
    }

    /// Symmetrizes `(m + m†)/2` before validating.
    pub fn from_hermitized(m: &ComplexMatrix) -> Result<Self> {
        Self::new(ComplexMatrix::hermitian_part(m))
    }

    pub fn pure(psi: &StateVector) -> Result<Self> {
        Self::new(ComplexMatrix::hermitian_part(&psi.projector()))
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Self::new(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn purity(&self) -> f64 {
        (&self.0 * &self.0).trace().re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        eigh(&self.0).map(|es| es.eigenvalues[0]).unwrap_or(f64::NAN)
    }
}

/// One dissipative channel `γ·D[L]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LindbladChannel {
    rate: f64,
    jump: ComplexMatrix,
}

impl LindbladChannel {
    pub fn new(rate: f64, jump: ComplexMatrix) -> Result<Self> {
        if !(rate >= 0.0 && rate.is_finite()) {
            return Err(Error::InvalidModel(format!("channel rate {rate} must be finite and ≥ 0")));
        }
        Ok(Self { rate, jump })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn jump(&self) -> &ComplexMatrix {
        &self.jump
    }
}

/// Hamiltonian plus dissipative channels. The Liouvillian is built once on
/// first use and shared by later propagations.
#[derive(Debug)]
pub struct LindbladModel {
    hamiltonian: ComplexMatrix,
    channels: Vec<LindbladChannel>,
    liouvillian: OnceLock<ComplexMatrix>,
}

impl Clone for LindbladModel {
    fn clone(&self) -> Self {
        Self {
            hamiltonian: self.hamiltonian.clone(),
            channels: self.channels.clone(),
            liouvillian: self.liouvillian.clone(),
        }
    }
}

impl LindbladModel {
    pub fn new(hamiltonian: ComplexMatrix, channels: Vec<LindbladChannel>) -> Result<Self> {
        let herm = hamiltonian.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidModel(format!("Hamiltonian is not Hermitian (error {herm:.3e})")));
        }
        let dim = hamiltonian.dim();
        for (k, ch) in channels.iter().enumerate() {
            if ch.jump.dim() != dim {
                return Err(Error::InvalidModel(format!(
                    "channel {k} has dimension {} but the Hamiltonian has {dim}",
                    ch.jump.dim()
                )));
            }
        }
        Ok(Self { hamiltonian, channels, liouvillian: OnceLock::new() })
    }

    pub fn unitary(hamiltonian: ComplexMatrix) -> Result<Self> {
        Self::new(hamiltonian, Vec::new())
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.hamiltonian
    }

    pub fn channels(&self) -> &[LindbladChannel] {
        &self.channels
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    /// Cached Liouvillian, see [`liouvillian`].
    pub fn liouvillian(&self) -> &ComplexMatrix {
        self.liouvillian.get_or_init(|| build_liouvillian(self))
    }

    /// Right-hand side of the master equation in matrix form.
    pub fn rhs(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = self.hamiltonian.commutator(rho).scale(Complex64::new(0.0, -1.0));
        for ch in &self.channels {
            if ch.rate == 0.0 {
                continue;
            }
            let l = &ch.jump;
            let ld = l.dagger();
            let ldl = &ld * l;
            let jump = &(l * rho) * &ld;
            let anti = &(&ldl * rho) + &(rho * &ldl);
            out += &(&jump - &anti.scale_real(0.5)).scale_real(ch.rate);
        }
        out
    }
}

/// Superoperator `L` with `d/dt vec(ρ) = L·vec(ρ)` under column stacking,
/// using `vec(AρB) = (Bᵀ ⊗ A) vec(ρ)`.
pub fn liouvillian(model: &LindbladModel) -> ComplexMatrix {
    model.liouvillian().clone()
}

fn build_liouvillian(model: &LindbladModel) -> ComplexMatrix {
    let d = model.dim();
    let id = ComplexMatrix::identity(d);
    let h = &model.hamiltonian;
    let minus_i = Complex64::new(0.0, -1.0);
    let mut out = (&tensor(&id, h) - &tensor(&h.transpose(), &id)).scale(minus_i);
    for ch in &model.channels {
        if ch.rate == 0.0 {
            continue;
        }
        let l = &ch.jump;
        let ldl = &l.dagger() * l;
        let jump = tensor(&l.conj(), l);
        let anti = &tensor(&id, &ldl) + &tensor(&ldl.transpose(), &id);
        out += &(&jump - &anti.scale_real(0.5)).scale_real(ch.rate);
    }
    out
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("evolution time {t} must be finite and ≥ 0")));
    }
    Ok(())
}

fn check_dims(model: &LindbladModel, rho0: &DensityMatrix) -> Result<()> {
    if model.dim() != rho0.dim() {
        return Err(Error::DimensionMismatch { expected: model.dim(), found: rho0.dim() });
    }
    Ok(())
}

fn finish(raw: &ComplexMatrix) -> Result<DensityMatrix> {
    DensityMatrix::from_hermitized(raw)
        .map_err(|e| Error::NumericalFailure(format!("propagated state is invalid: {e}")))
}

/// `ρ(t) = unvec(exp(L t)·vec(ρ₀))`, re-Hermitized and validated.
pub fn propagate(model: &LindbladModel, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    check_time(t)?;
    check_dims(model, rho0)?;
    if t == 0.0 {
        return Ok(rho0.clone());
    }
    let generator = model.liouvillian().scale_real(t);
    let propagator = expm(&generator);
    let v = propagator.mul_vec(&rho0.matrix().vec_columns());
    finish(&ComplexMatrix::unvec_columns(&v)?)
}

/// Fixed-step classical RK4 on the matrix form of the master equation.
/// Used as an independent cross-check of [`propagate`].
pub fn propagate_rk4(
    model: &LindbladModel,
    rho0: &DensityMatrix,
    t: f64,
    steps: usize,
) -> Result<DensityMatrix> {
    check_time(t)?;
    check_dims(model, rho0)?;
    if steps == 0 {
        return Err(Error::InvalidArgument("RK4 needs at least one step".into()));
    }
    if t == 0.0 {
        return Ok(rho0.clone());
    }
    let dt = t / steps as f64;
    let mut rho = rho0.matrix().clone();
    for _ in 0..steps {
        let k1 = model.rhs(&rho);
        let k2 = model.rhs(&(&rho + &k1.scale_real(dt / 2.0)));
        let k3 = model.rhs(&(&rho + &k2.scale_real(dt / 2.0)));
        let k4 = model.rhs(&(&rho + &k3.scale_real(dt)));
        let mut incr = &k1 + &k4;
        incr += &(&k2 + &k3).scale_real(2.0);
        rho += &incr.scale_real(dt / 6.0);
    }
    finish(&rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{pauli, Axis};

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    /// |0⟩⟨1|: moves population from |1⟩ to |0⟩.
    fn lower_1_to_0() -> ComplexMatrix {
        ComplexMatrix::from_real_rows([[0.0, 1.0], [0.0, 0.0]])
    }

    fn excited() -> DensityMatrix {
        DensityMatrix::new(ComplexMatrix::diag(&[c(0.0), c(1.0)])).unwrap()
    }

    #[test]
    fn empty_model_has_zero_generator() {
        let m = LindbladModel::unitary(ComplexMatrix::zeros(2)).unwrap();
        assert_eq!(liouvillian(&m), ComplexMatrix::zeros(4));
    }

    #[test]
    fn amplitude_damping_population_entry() {
        let gamma = 0.7;
        let ch = LindbladChannel::new(gamma, lower_1_to_0()).unwrap();
        let m = LindbladModel::new(ComplexMatrix::zeros(2), vec![ch]).unwrap();
        let l = liouvillian(&m);
        // ρ_11 sits at vec index 1·2 + 1 = 3; ρ_00 at 0
        assert_eq!(l[(3, 3)], c(-gamma));
        assert_eq!(l[(0, 3)], c(gamma));
        // coherence ρ_01 (index 2) decays at γ/2
        assert_eq!(l[(2, 2)], c(-gamma / 2.0));
    }

    #[test]
    fn pure_hamiltonian_generator_is_diagonal() {
        let bz = 0.3;
        let m = LindbladModel::unitary(pauli(Axis::Z).scale_real(bz)).unwrap();
        let l = liouvillian(&m);
        let allowed = [c(0.0), Complex64::new(0.0, 2.0 * bz), Complex64::new(0.0, -2.0 * bz)];
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert_eq!(l[(i, j)], c(0.0));
                }
            }
            assert!(allowed.iter().any(|a| (a - l[(i, i)]).norm() < 1e-15));
        }
        // d/dt ρ_01 = −i(H_00 − H_11) ρ_01 = −2i B_z ρ_01, ρ_01 at vec index 2
        assert!((l[(2, 2)] - Complex64::new(0.0, -2.0 * bz)).norm() < 1e-15);
    }

    #[test]
    fn liouvillian_matches_rhs() {
        let h = &pauli(Axis::Z).scale_real(0.4) + &pauli(Axis::X).scale_real(0.25);
        let chs = vec![
            LindbladChannel::new(0.3, lower_1_to_0()).unwrap(),
            LindbladChannel::new(0.2, pauli(Axis::Y)).unwrap(),
        ];
        let m = LindbladModel::new(h, chs).unwrap();
        let rho = ComplexMatrix::from_rows([
            [c(0.6), Complex64::new(0.1, 0.2)],
            [Complex64::new(0.1, -0.2), c(0.4)],
        ]);
        let via_super =
            ComplexMatrix::unvec_columns(&m.liouvillian().mul_vec(&rho.vec_columns())).unwrap();
        assert!(via_super.max_abs_diff(&m.rhs(&rho)) < 1e-15);
    }

    #[test]
    fn zero_time_is_identity() {
        let ch = LindbladChannel::new(0.5, lower_1_to_0()).unwrap();
        let m = LindbladModel::new(pauli(Axis::Z).scale_real(0.1), vec![ch]).unwrap();
        let rho0 = excited();
        assert_eq!(propagate(&m, &rho0, 0.0).unwrap(), rho0);
        assert_eq!(propagate_rk4(&m, &rho0, 0.0, 10).unwrap(), rho0);
    }

    #[test]
    fn excited_population_decays_exponentially() {
        let ch = LindbladChannel::new(0.5, lower_1_to_0()).unwrap();
        let m = LindbladModel::new(pauli(Axis::Z).scale_real(0.1), vec![ch]).unwrap();
        for t in [0.3, 1.0, 4.0] {
            let rho = propagate(&m, &excited(), t).unwrap();
            assert!((rho.matrix()[(1, 1)].re - (-0.5 * t).exp()).abs() < 1e-13);
        }
    }

    #[test]
    fn rk4_agrees_with_exponential() {
        let ch = LindbladChannel::new(0.5, lower_1_to_0()).unwrap();
        let m = LindbladModel::new(pauli(Axis::Z).scale_real(0.1), vec![ch]).unwrap();
        let plus = DensityMatrix::new(ComplexMatrix::from_real_rows([[0.5, 0.5], [0.5, 0.5]])).unwrap();
        let a = propagate(&m, &plus, 1.0).unwrap();
        let b = propagate_rk4(&m, &plus, 1.0, 10_000).unwrap();
        assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-8);
    }

    #[test]
    fn unitary_rk4_conserves_purity() {
        let h = &pauli(Axis::Z).scale_real(0.8) + &pauli(Axis::X).scale_real(0.3);
        let m = LindbladModel::unitary(h).unwrap();
        let plus = DensityMatrix::new(ComplexMatrix::from_real_rows([[0.5, 0.5], [0.5, 0.5]])).unwrap();
        let rho = propagate_rk4(&m, &plus, 3.0, 2000).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(LindbladChannel::new(-0.1, pauli(Axis::Z)).is_err());
        let ch = LindbladChannel::new(0.1, ComplexMatrix::identity(4)).unwrap();
        assert!(matches!(
            LindbladModel::new(pauli(Axis::Z), vec![ch]),
            Err(Error::InvalidModel(_))
        ));
        let m = LindbladModel::unitary(pauli(Axis::Z)).unwrap();
        assert!(propagate(&m, &excited(), -1.0).is_err());
        assert!(propagate_rk4(&m, &excited(), 1.0, 0).is_err());
        let four = DensityMatrix::maximally_mixed(4).unwrap();
        assert!(matches!(propagate(&m, &four, 1.0), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(ComplexMatrix::identity(2)).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::diag(&[c(1.5), c(-0.5)])).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::identity(3).scale_real(1.0 / 3.0)).is_err());
        assert!(DensityMatrix::maximally_mixed(2).is_ok());
    }
}
