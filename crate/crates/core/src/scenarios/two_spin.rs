//! Two coupled spins near the critical point `B_z = 1`.

use crate::error::{Error, Result};
use crate::linalg::{eigh, pauli, tensor, Axis, ComplexMatrix, StateVector, DEGENERACY_TOL};
use crate::qfi::{differentiate_pure_state, qfi_pure, FnPureFamily};

/// Reservoir-induced decays `(i, j)`: `|E_i⟩ → |E_j⟩`, levels numbered from
/// 1 in ascending energy.
pub const TWO_SPIN_DECAY_CHANNELS: [(usize, usize); 4] = [(4, 3), (4, 2), (3, 2), (3, 1)];

/// `σ_z¹σ_z² + B_z(σ_z¹ + σ_z²) + B_x(σ_x¹ + σ_x²)`.
pub fn two_spin_hamiltonian(b_z: f64, b_x: f64) -> ComplexMatrix {
    let id = ComplexMatrix::identity(2);
    let (z, x) = (pauli(Axis::Z), pauli(Axis::X));
    let z1 = tensor(&z, &id);
    let z2 = tensor(&id, &z);
    let x1 = tensor(&x, &id);
    let x2 = tensor(&id, &x);
    let mut h = &z1 * &z2;
    h += &(&z1 + &z2).scale_real(b_z);
    h += &(&x1 + &x2).scale_real(b_x);
    h
}

/// Ground-state QFI of the two-level effective model
/// `−|B_z| I + (1 − |B_z|)σ_z + √2 B_x σ_x`: `2B_x²/(2B_x² + (B_z − 1)²)²`.
pub fn effective_two_spin_ground_qfi(b_z: f64, b_x: f64) -> f64 {
    let denom = 2.0 * b_x * b_x + (b_z - 1.0).powi(2);
    2.0 * b_x * b_x / (denom * denom)
}

/// Ground-state QFI of the full two-spin Hamiltonian, from the phase-aligned
/// finite-difference derivative of the ground eigenvector.
pub fn exact_two_spin_ground_qfi(b_z: f64, b_x: f64) -> Result<f64> {
    if b_x.is_nan() || b_x <= 0.0 {
        return Err(Error::InvalidArgument(format!("b_x = {b_x} must be positive")));
    }
    let family = FnPureFamily::new(b_z, move |b| {
        let es = eigh(&two_spin_hamiltonian(b, b_x))?;
        if es.eigenvalues[1] - es.eigenvalues[0] < DEGENERACY_TOL {
            return Err(Error::Degenerate(format!("ground level is degenerate at b_z = {b}")));
        }
        StateVector::normalized(es.vector(0))
    });
    let (psi, dpsi) = differentiate_pure_state(&family)?;
    Ok(qfi_pure(&psi, &dpsi)?.value)
}

/// Width `W` of the region where the effective ground-state QFI exceeds
/// `16T²`, given the peak value `F_max`:
/// `W²/4 = (1/√F_max)(1/(4T) − 1/√F_max)`, valid for `F_max > 16T²`.
pub fn tradeoff_width(f_max: f64, t: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("probe time {t} must be positive")));
    }
    if f_max.is_nan() || f_max <= 16.0 * t * t {
        return Err(Error::OutOfRegime(format!(
            "F_max = {f_max} does not exceed the two-spin Heisenberg limit 16T² = {}",
            16.0 * t * t
        )));
    }
    let inv = 1.0 / f_max.sqrt();
    Ok(2.0 * (inv * (0.25 / t - inv)).sqrt())
}

/// A point on the peak-QFI versus region-width trade-off curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeoffPoint {
    pub f_max: f64,
    pub width: f64,
    pub t: f64,
}

impl TradeoffPoint {
    pub fn new(f_max: f64, t: f64) -> Result<Self> {
        Ok(Self { f_max, width: tradeoff_width(f_max, t)?, t })
    }

    /// Point reached with transverse control `b_x`, whose effective peak is
    /// `F_max = 1/(2B_x²)`.
    pub fn from_control(b_x: f64, t: f64) -> Result<Self> {
        Self::new(1.0 / (2.0 * b_x * b_x), t)
    }

    /// `W²/4 − (1/√F_max)(1/(4T) − 1/√F_max)`.
    pub fn residual(&self) -> f64 {
        let inv = 1.0 / self.f_max.sqrt();
        self.width * self.width / 4.0 - inv * (0.25 / self.t - inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn effective_formula_values() {
        assert!((effective_two_spin_ground_qfi(1.0, 0.1) - 50.0).abs() < 1e-12);
        let v = effective_two_spin_ground_qfi(0.89, 0.1);
        assert!((v - 0.02 / (0.0321f64 * 0.0321)).abs() < 1e-12);
        assert!((v - 19.41).abs() < 0.01);
        assert!(effective_two_spin_ground_qfi(1e6, 0.1) < 1e-20);
        assert!(effective_two_spin_ground_qfi(-1e6, 0.1) < 1e-20);
    }

    #[test]
    fn effective_formula_symmetric_about_critical_point() {
        for bz in [0.5, 0.8, 0.95, 1.2] {
            let a = effective_two_spin_ground_qfi(bz, 0.1);
            let b = effective_two_spin_ground_qfi(2.0 - bz, 0.1);
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn exact_ground_qfi_near_effective_model() {
        let peak = exact_two_spin_ground_qfi(1.0, 0.1).unwrap();
        assert!((peak / 50.0 - 1.0).abs() < 0.1, "{peak}");
        let far = exact_two_spin_ground_qfi(5.0, 0.1).unwrap();
        assert!(far < 0.01, "{far}");
    }

    #[test]
    fn exact_ground_qfi_needs_transverse_field() {
        assert!(exact_two_spin_ground_qfi(1.0, 0.0).is_err());
    }

    #[test]
    fn tradeoff_values() {
        assert!((tradeoff_width(50.0, 1.0).unwrap() - 0.247833).abs() < 1e-6);
        assert!(tradeoff_width(16.0 + 1e-12, 1.0).unwrap() < 1e-5);
        assert!(matches!(tradeoff_width(16.0, 1.0), Err(Error::OutOfRegime(_))));
        assert!(tradeoff_width(50.0, 0.0).is_err());
    }

    #[test]
    fn tradeoff_point_satisfies_relation() {
        let p = TradeoffPoint::from_control(0.1, 1.0).unwrap();
        assert!((p.f_max - 50.0).abs() < 1e-12);
        assert!(p.residual().abs() < 1e-12);
    }
}
