//! Closed-form references for the single-spin schemes.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::controlled_hamiltonian;
use crate::error::{Error, Result};
use crate::lindblad::DensityMatrix;
use crate::linalg::{eigh, ComplexMatrix, StateVector};
use crate::qfi::{differentiate_pure_state, qfi_pure, FnPureFamily};

/// Field angle `θ = arctan(B_x/B_z)` taken in `[0, π]` and field strength
/// `Δ = √(B_z² + B_x²)`.
fn angle_and_strength(b_z: f64, b_x: f64) -> (f64, f64) {
    (b_x.atan2(b_z), b_z.hypot(b_x))
}

fn check_field(b_z: f64, b_x: f64) -> Result<()> {
    if b_z == 0.0 && b_x == 0.0 {
        return Err(Error::InvalidArgument("field (b_z, b_x) must be nonzero".into()));
    }
    Ok(())
}

/// Excited and ground states of `B_zσ_z + B_xσ_x`:
/// `|e⟩ = cos(θ/2)|0⟩ + sin(θ/2)|1⟩`, `|g⟩ = −sin(θ/2)|0⟩ + cos(θ/2)|1⟩`.
fn eigenbasis(theta: f64) -> ([f64; 2], [f64; 2]) {
    let (s, c) = (theta / 2.0).sin_cos();
    ([c, s], [-s, c])
}

/// Closed-form state of the cooperative spontaneous-emission scheme after
/// time `t`, starting from `(|0⟩+|1⟩)/√2`.
///
/// In the `(|e⟩, |g⟩)` basis
/// `ρ_ee = ½(1+sin θ)e^{−γt}` and `ρ_eg = ½cos θ e^{−(γ/2 + 2iΔ)t}`.
pub fn analytic_coop_spont_state(b_z: f64, b_x: f64, gamma: f64, t: f64) -> Result<DensityMatrix> {
    check_field(b_z, b_x)?;
    let (theta, delta) = angle_and_strength(b_z, b_x);
    let pop_e = 0.5 * (1.0 + theta.sin()) * (-gamma * t).exp();
    let coh = Complex64::from_polar(0.5 * theta.cos() * (-0.5 * gamma * t).exp(), -2.0 * delta * t);
    let (e, g) = eigenbasis(theta);
    let m = ComplexMatrix::from_fn(2, |i, j| {
        Complex64::new(pop_e * e[i] * e[j] + (1.0 - pop_e) * g[i] * g[j], 0.0)
            + coh * (e[i] * g[j])
            + coh.conj() * (g[i] * e[j])
    });
    DensityMatrix::from_hermitized(&m)
}

/// Closed-form QFI of [`analytic_coop_spont_state`] with respect to `B_z`.
pub fn analytic_coop_spont_qfi(b_z: f64, b_x: f64, gamma: f64, t: f64) -> Result<f64> {
    check_field(b_z, b_x)?;
    let (th, d) = angle_and_strength(b_z, b_x);
    let (s, c) = th.sin_cos();
    let gt = gamma * t;
    let dt = d * t;
    let d2t2 = dt * dt;
    let half_decay = (-0.5 * gt).exp();
    let bracket = -24.0 * s + 8.0 * (3.0 * th).sin()
        + 8.0 * (2.0 * th).cos() * (4.0 * d2t2 + 1.0)
        + (4.0 * th).cos() * (8.0 * d2t2 - 1.0)
        + 24.0 * d2t2
        + 64.0 * dt * s * c * c * half_decay * (2.0 * dt).sin() * (s - gt.exp() + 1.0)
        + 32.0 * s * s * half_decay * (2.0 * dt).cos() * (s * gt.exp_m1() - 1.0)
        - 16.0 * (s + 2.0) * s.powi(3) * gt.sinh()
        - 8.0 * s * s * (-4.0 * s + (2.0 * th).cos() - 5.0) * gt.cosh()
        + 2.0 * (2.0 * th).sin().powi(2) * (4.0 * dt).cos()
        - 7.0;
    Ok((-gt).exp() * bracket / (16.0 * d * d))
}

/// First and second time derivatives of [`analytic_coop_spont_qfi`] at
/// `t = 0`: `γ sin²θ cos²θ/Δ²` and `(γ² sin²θ/(2Δ²))(6 sin²θ + 4 sin θ − 1) + 8`.
pub fn taylor_coefficients(b_z: f64, b_x: f64, gamma: f64) -> Result<(f64, f64)> {
    check_field(b_z, b_x)?;
    let (th, d) = angle_and_strength(b_z, b_x);
    let (s, c) = th.sin_cos();
    let fdot = gamma * s * s * c * c / (d * d);
    let fddot = gamma * gamma * s * s / (2.0 * d * d) * (6.0 * s * s + 4.0 * s - 1.0) + 8.0;
    Ok((fdot, fddot))
}

/// Noise type of a standard (uncontrolled) scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardNoise {
    Spont,
    Deph,
}

impl fmt::Display for StandardNoise {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StandardNoise::Spont => "spont",
            StandardNoise::Deph => "deph",
        })
    }
}

impl FromStr for StandardNoise {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spont" | "std-spont" => Ok(StandardNoise::Spont),
            "deph" | "std-deph" => Ok(StandardNoise::Deph),
            other => Err(Error::InvalidArgument(format!("unknown standard noise kind `{other}`"))),
        }
    }
}

/// Maximal QFI of the standard scheme: `4e^{−γt}t²` under spontaneous
/// emission, `4e^{−2ηt}t²` under dephasing.
pub fn standard_limit_formulas(kind: StandardNoise, rate: f64, t: f64) -> Result<f64> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::InvalidArgument(format!("time {t} must be ≥ 0")));
    }
    let decay = match kind {
        StandardNoise::Spont => rate * t,
        StandardNoise::Deph => 2.0 * rate * t,
    };
    Ok(4.0 * (-decay).exp() * t * t)
}

/// Noiseless optimum `4N²t²`.
pub fn heisenberg_limit(n_spins: u32, t: f64) -> f64 {
    let n = f64::from(n_spins);
    4.0 * n * n * t * t
}

/// QFI of the ground state of `B_zσ_z + B_xσ_x`: `B_x²/(B_x²+B_z²)²`.
pub fn single_spin_ground_qfi(b_z: f64, b_x: f64) -> f64 {
    let r2 = b_x * b_x + b_z * b_z;
    b_x * b_x / (r2 * r2)
}

/// Ground-state QFI of `B_zσ_z + B_xσ_x` from the numerically
/// differentiated eigenvector.
pub fn exact_single_spin_ground_qfi(b_z: f64, b_x: f64) -> Result<f64> {
    check_field(b_z, b_x)?;
    let family = FnPureFamily::new(b_z, move |b| {
        let es = eigh(&controlled_hamiltonian(b, b_x))?;
        StateVector::normalized(es.vector(0))
    });
    let (psi, dpsi) = differentiate_pure_state(&family)?;
    Ok(qfi_pure(&psi, &dpsi)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_state_initial_and_late() {
        let rho0 = analytic_coop_spont_state(0.1, 0.1, 0.5, 0.0).unwrap();
        let plus = ComplexMatrix::from_real_rows([[0.5, 0.5], [0.5, 0.5]]);
        assert!(rho0.matrix().max_abs_diff(&plus) < 1e-15);

        let (_, g) = eigenbasis(0.1f64.atan2(0.1));
        let g = [Complex64::new(g[0], 0.0), Complex64::new(g[1], 0.0)];
        let ground = ComplexMatrix::outer(&g, &g);
        // coherences decay at γ/2: ½cos θ e^{−15} ≈ 1.1e-7 at γt = 30
        let late = analytic_coop_spont_state(0.1, 0.1, 0.5, 60.0).unwrap();
        assert!(late.matrix().max_abs_diff(&ground) < 1e-6);
        let later = analytic_coop_spont_state(0.1, 0.1, 0.5, 100.0).unwrap();
        assert!(later.matrix().max_abs_diff(&ground) < 1e-10);
    }

    #[test]
    fn closed_form_excited_population() {
        let rho = analytic_coop_spont_state(0.1, 0.1, 0.5, 1.0).unwrap();
        let (e, _) = eigenbasis(std::f64::consts::FRAC_PI_4);
        let e = [Complex64::new(e[0], 0.0), Complex64::new(e[1], 0.0)];
        let pop = crate::linalg::inner(&e, &rho.matrix().mul_vec(&e)).re;
        // ½(1 + 1/√2)e^{−1/2}
        assert!((pop - 0.517706).abs() < 1e-6, "{pop}");
    }

    #[test]
    fn closed_form_qfi_limits() {
        assert!(analytic_coop_spont_qfi(0.1, 0.1, 0.5, 0.0).unwrap().abs() < 1e-12);
        let late = analytic_coop_spont_qfi(0.1, 0.1, 0.5, 200.0).unwrap();
        assert!((late - 25.0).abs() < 1e-9);
    }

    #[test]
    fn closed_form_small_time_slope() {
        let h = 1e-3;
        let slope = analytic_coop_spont_qfi(0.1, 0.1, 0.5, h).unwrap() / h;
        assert!((slope / 6.25 - 1.0).abs() < 0.01);
    }

    #[test]
    fn taylor_values() {
        let (fdot, _) = taylor_coefficients(0.1, 0.1, 0.5).unwrap();
        assert!((fdot - 6.25).abs() < 1e-12);
        assert_eq!(taylor_coefficients(0.1, 0.1, 0.0).unwrap(), (0.0, 8.0));
    }

    #[test]
    fn taylor_second_order_alternative_form() {
        // γ²(16 sin³θ − 10 cos 2θ + 3 cos 4θ + 7)/(8Δ²) + 8
        for (bz, bx, g) in [(0.1, 0.1, 0.5), (0.3, 0.05, 1.2), (-0.2, 0.4, 0.8)] {
            let (th, d) = angle_and_strength(bz, bx);
            let alt = g * g
                * (16.0 * th.sin().powi(3) - 10.0 * (2.0 * th).cos() + 3.0 * (4.0 * th).cos() + 7.0)
                / (8.0 * d * d)
                + 8.0;
            let (_, fddot) = taylor_coefficients(bz, bx, g).unwrap();
            assert!((alt - fddot).abs() < 1e-10 * fddot.abs());
        }
    }

    #[test]
    fn standard_formulas() {
        let spont = standard_limit_formulas(StandardNoise::Spont, 0.5, 1.0).unwrap();
        assert!((spont - 2.426123).abs() < 1e-6);
        let deph = standard_limit_formulas(StandardNoise::Deph, 0.5, 1.0).unwrap();
        assert!((deph - 1.471518).abs() < 1e-6);
        assert_eq!(standard_limit_formulas(StandardNoise::Spont, 0.0, 1.5).unwrap(), 9.0);
        assert!("thermal".parse::<StandardNoise>().is_err());
        assert!(standard_limit_formulas(StandardNoise::Deph, 0.5, -1.0).is_err());
    }

    #[test]
    fn heisenberg_values() {
        assert_eq!(heisenberg_limit(1, 1.0), 4.0);
        assert_eq!(heisenberg_limit(2, 1.0), 16.0);
        assert_eq!(heisenberg_limit(1, 0.0), 0.0);
    }

    #[test]
    fn ground_state_qfi_closed_form_and_numeric() {
        assert!((single_spin_ground_qfi(0.1, 0.1) - 25.0).abs() < 1e-12);
        assert!((single_spin_ground_qfi(0.3, 0.1) - 1.0).abs() < 1e-12);
        for (bz, bx) in [(0.1, 0.1), (0.3, 0.1), (-0.2, 0.05)] {
            let exact = exact_single_spin_ground_qfi(bz, bx).unwrap();
            let closed = single_spin_ground_qfi(bz, bx);
            assert!((exact - closed).abs() < 1e-6 * closed.max(1.0), "{bz}: {exact} vs {closed}");
        }
    }
}
