//! Fixtures shared by the criterion benchmarks.

use coopmetro_core::scenarios::two_spin_hamiltonian;
use coopmetro_core::{ComplexMatrix, Complex64, ScenarioKind, ScenarioSpec};

/// Single-spin cooperative spontaneous emission with `B_z = B_x = 0.1`, `γ = 0.5`.
pub fn coop_spont() -> ScenarioSpec {
    ScenarioSpec::new(ScenarioKind::CoopSpont, 0.1).with_b_x(0.1).with_gamma(0.5)
}

/// Two-spin cooperative scheme near the critical point.
pub fn two_spin() -> ScenarioSpec {
    ScenarioSpec::new(ScenarioKind::TwoSpinCoop, 1.0).with_b_x(0.1).with_dipole(10.0)
}

/// `−i·H·t` for the two-spin Hamiltonian lifted to a 16×16 generator
/// `−i(I⊗H − Hᵀ⊗I)`.
pub fn two_spin_generator(t: f64) -> ComplexMatrix {
    let h = two_spin_hamiltonian(1.0, 0.1);
    let id = ComplexMatrix::identity(4);
    let l = &coopmetro_core::linalg::tensor(&id, &h) - &coopmetro_core::linalg::tensor(&h.transpose(), &id);
    l.scale(Complex64::new(0.0, -t))
}
