//! The physical setups: standard and cooperative single-spin schemes under
//! spontaneous emission, dephasing and a thermal bath, the two-spin
//! critical-point scheme, and the noiseless baselines.

mod analytic;
mod two_spin;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lindblad::{propagate, DensityMatrix, LindbladChannel, LindbladModel};
use crate::linalg::{eigh, pauli, Axis, ComplexMatrix, DEGENERACY_TOL};
use crate::qfi::{
    default_step, differentiate_state, qfi_qubit, qfi_sld, FnFamily, QfiResult, StateFamily,
};

pub use analytic::{
    analytic_coop_spont_qfi, analytic_coop_spont_state, exact_single_spin_ground_qfi,
    heisenberg_limit, single_spin_ground_qfi, standard_limit_formulas, taylor_coefficients,
    StandardNoise,
};
pub use two_spin::{
    effective_two_spin_ground_qfi, exact_two_spin_ground_qfi, tradeoff_width,
    two_spin_hamiltonian, TradeoffPoint, TWO_SPIN_DECAY_CHANNELS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioKind {
    /// `B_zσ_z` with fixed `|0⟩⟨1|` decay.
    StdSpont,
    /// Decay between the eigenstates of `B_zσ_z + B_xσ_x`.
    CoopSpont,
    /// `B_zσ_z` with `σ_z` dephasing.
    StdDeph,
    /// Dephasing along the total field direction.
    CoopDeph,
    /// Eigenbasis decay and excitation with field-dependent thermal rates.
    CoopThermal,
    /// Coupled spins with transverse control and a cool reservoir.
    TwoSpinCoop,
    /// Noiseless evolution under the field alone.
    UnitaryBaseline,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 7] = [
        ScenarioKind::StdSpont,
        ScenarioKind::CoopSpont,
        ScenarioKind::StdDeph,
        ScenarioKind::CoopDeph,
        ScenarioKind::CoopThermal,
        ScenarioKind::TwoSpinCoop,
        ScenarioKind::UnitaryBaseline,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::StdSpont => "std-spont",
            ScenarioKind::CoopSpont => "coop-spont",
            ScenarioKind::StdDeph => "std-deph",
            ScenarioKind::CoopDeph => "coop-deph",
            ScenarioKind::CoopThermal => "coop-thermal",
            ScenarioKind::TwoSpinCoop => "two-spin-coop",
            ScenarioKind::UnitaryBaseline => "unitary-baseline",
        }
    }

    pub fn is_cooperative(self) -> bool {
        matches!(
            self,
            ScenarioKind::CoopSpont
                | ScenarioKind::CoopDeph
                | ScenarioKind::CoopThermal
                | ScenarioKind::TwoSpinCoop
        )
    }

    /// Number of spins implied by the kind; `None` when it is a free choice.
    pub fn fixed_spins(self) -> Option<u8> {
        match self {
            ScenarioKind::TwoSpinCoop => Some(2),
            ScenarioKind::UnitaryBaseline => None,
            _ => Some(1),
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScenarioKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidScenario(format!("unknown scenario kind `{s}`")))
    }
}

/// Parameters of one setup. Only the fields relevant to `kind` are read.
///
/// Units: `ħ = k_B = 1`; fields and rates share one inverse-time unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioSpec {
    pub kind: ScenarioKind,
    pub b_z: f64,
    pub b_x: f64,
    /// Spontaneous-emission rate.
    pub gamma: f64,
    /// Dephasing rate.
    pub eta: f64,
    /// Dipole magnitude `|d|` setting thermal and reservoir decay rates.
    pub dipole: f64,
    /// Environment temperature.
    pub t_e: f64,
    pub n_spins: u8,
}

impl ScenarioSpec {
    pub fn new(kind: ScenarioKind, b_z: f64) -> Self {
        Self {
            kind,
            b_z,
            b_x: 0.0,
            gamma: 0.0,
            eta: 0.0,
            dipole: 0.0,
            t_e: 0.0,
            n_spins: kind.fixed_spins().unwrap_or(1),
        }
    }

    pub fn with_b_x(mut self, b_x: f64) -> Self {
        self.b_x = b_x;
        self
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    pub fn with_dipole(mut self, dipole: f64) -> Self {
        self.dipole = dipole;
        self
    }

    pub fn with_t_e(mut self, t_e: f64) -> Self {
        self.t_e = t_e;
        self
    }

    pub fn with_spins(mut self, n_spins: u8) -> Self {
        self.n_spins = n_spins;
        self
    }

    pub fn with_b_z(mut self, b_z: f64) -> Self {
        self.b_z = b_z;
        self
    }

    pub fn dim(&self) -> usize {
        1 << self.n_spins
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidScenario(format!("{}: {msg}", self.kind)));
        if !self.b_z.is_finite() {
            return fail(format!("b_z = {} is not finite", self.b_z));
        }
        for (name, value) in [
            ("b_x", self.b_x),
            ("gamma", self.gamma),
            ("eta", self.eta),
            ("dipole", self.dipole),
            ("t_e", self.t_e),
        ] {
            if !(value >= 0.0 && value.is_finite()) {
                return fail(format!("{name} = {value} must be finite and ≥ 0"));
            }
        }
        match self.kind.fixed_spins() {
            Some(n) if n != self.n_spins => {
                return fail(format!("n_spins = {} but this kind uses {n}", self.n_spins))
            }
            None if !(1..=2).contains(&self.n_spins) => {
                return fail(format!("n_spins = {} must be 1 or 2", self.n_spins))
            }
            _ => {}
        }
        if self.kind.is_cooperative() && self.b_z == 0.0 {
            return fail("b_z must be nonzero for cooperative schemes".into());
        }
        if self.kind == ScenarioKind::TwoSpinCoop && self.b_x <= 0.0 {
            return fail("b_x must be positive (levels E2, E3 are degenerate at b_x = 0)".into());
        }
        Ok(())
    }
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `B_zσ_z + B_xσ_x`.
pub fn controlled_hamiltonian(b_z: f64, b_x: f64) -> ComplexMatrix {
    &pauli(Axis::Z).scale_real(b_z) + &pauli(Axis::X).scale_real(b_x)
}

/// Ground and excited eigenvectors of a two-level Hamiltonian.
fn two_level_basis(h: &ComplexMatrix) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let es = eigh(h)?;
    if es.eigenvalues[1] - es.eigenvalues[0] < DEGENERACY_TOL {
        return Err(Error::Degenerate("two-level Hamiltonian has a vanishing gap".into()));
    }
    Ok((es.vector(0), es.vector(1)))
}

/// Energy gap, zero-temperature rate and thermal occupation of the
/// thermal-bath scheme: `ω = 2√(B_z²+B_x²)`, `γ₀ = 4ω³|d|²/3`,
/// `N = 1/(e^{ω/T_e} − 1)` (exactly 0 at `T_e = 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalRates {
    pub omega: f64,
    pub gamma0: f64,
    pub occupation: f64,
}

impl ThermalRates {
    pub fn new(b_z: f64, b_x: f64, dipole: f64, t_e: f64) -> Self {
        let omega = 2.0 * b_z.hypot(b_x);
        let gamma0 = 4.0 * omega.powi(3) * dipole * dipole / 3.0;
        let occupation = if t_e == 0.0 { 0.0 } else { 1.0 / (omega / t_e).exp_m1() };
        Self { omega, gamma0, occupation }
    }

    /// Rate of `|e⟩⟨g|` excitations.
    pub fn up(&self) -> f64 {
        self.gamma0 * self.occupation
    }

    /// Rate of `|g⟩⟨e|` decays.
    pub fn down(&self) -> f64 {
        self.gamma0 * (self.occupation + 1.0)
    }
}

/// Master-equation model of a scenario.
pub fn build_model(spec: &ScenarioSpec) -> Result<LindbladModel> {
    spec.validate()?;
    let ch = LindbladChannel::new;
    match spec.kind {
        ScenarioKind::UnitaryBaseline => {
            let h = if spec.n_spins == 1 {
                pauli(Axis::Z).scale_real(spec.b_z)
            } else {
                two_spin_hamiltonian(spec.b_z, 0.0)
            };
            LindbladModel::unitary(h)
        }
        ScenarioKind::StdSpont => {
            let lower = ComplexMatrix::from_real_rows([[0.0, 1.0], [0.0, 0.0]]);
            LindbladModel::new(pauli(Axis::Z).scale_real(spec.b_z), vec![ch(spec.gamma, lower)?])
        }
        ScenarioKind::StdDeph => LindbladModel::new(
            pauli(Axis::Z).scale_real(spec.b_z),
            vec![ch(spec.eta / 2.0, pauli(Axis::Z))?],
        ),
        ScenarioKind::CoopSpont => {
            let h = controlled_hamiltonian(spec.b_z, spec.b_x);
            let (g, e) = two_level_basis(&h)?;
            LindbladModel::new(h, vec![ch(spec.gamma, ComplexMatrix::outer(&g, &e))?])
        }
        ScenarioKind::CoopDeph => {
            let h = controlled_hamiltonian(spec.b_z, spec.b_x);
            let axis = h.scale_real(1.0 / spec.b_z.hypot(spec.b_x));
            LindbladModel::new(h, vec![ch(spec.eta / 2.0, axis)?])
        }
        ScenarioKind::CoopThermal => {
            let h = controlled_hamiltonian(spec.b_z, spec.b_x);
            let (g, e) = two_level_basis(&h)?;
            let rates = ThermalRates::new(spec.b_z, spec.b_x, spec.dipole, spec.t_e);
            let mut channels = Vec::with_capacity(2);
            if rates.up() > 0.0 {
                channels.push(ch(rates.up(), ComplexMatrix::outer(&e, &g))?);
            }
            channels.push(ch(rates.down(), ComplexMatrix::outer(&g, &e))?);
            LindbladModel::new(h, channels)
        }
        ScenarioKind::TwoSpinCoop => {
            let h = two_spin_hamiltonian(spec.b_z, spec.b_x);
            let es = eigh(&h)?;
            if let Some(k) = es.eigenvalues.windows(2).position(|w| w[1] - w[0] < DEGENERACY_TOL) {
                return Err(Error::Degenerate(format!(
                    "levels E{} and E{} coincide at b_z = {}, b_x = {}",
                    k + 1,
                    k + 2,
                    spec.b_z,
                    spec.b_x
                )));
            }
            let channels = TWO_SPIN_DECAY_CHANNELS
                .iter()
                .map(|&(from, to)| {
                    let (i, j) = (from - 1, to - 1);
                    let omega = es.eigenvalues[i] - es.eigenvalues[j];
                    let rate = 4.0 * omega.powi(3) * spec.dipole * spec.dipole / 3.0;
                    ch(rate, ComplexMatrix::outer(&es.vector(j), &es.vector(i)))
                })
                .collect::<Result<Vec<_>>>()?;
            LindbladModel::new(h, channels)
        }
    }
}

/// `(|0⟩+|1⟩)/√2` for one spin, `(|00⟩+|11⟩)/√2` for two.
pub fn probe_state(spec: &ScenarioSpec) -> DensityMatrix {
    let m = if spec.n_spins == 2 {
        let mut m = ComplexMatrix::zeros(4);
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            m[(i, j)] = c(0.5);
        }
        m
    } else {
        ComplexMatrix::from_real_rows([[0.5, 0.5], [0.5, 0.5]])
    };
    DensityMatrix::new(m).expect("probe states are valid density matrices")
}

/// Final state after evolving the probe for time `t`.
pub fn evolve_probe(spec: &ScenarioSpec, t: f64) -> Result<DensityMatrix> {
    propagate(&build_model(spec)?, &probe_state(spec), t)
}

/// QFI with respect to `B_z` of the probe evolved for time `t`; the whole
/// pipeline (Hamiltonian, eigenbasis, rates) is differentiated numerically.
pub fn qfi_at(spec: &ScenarioSpec, t: f64) -> Result<QfiResult> {
    spec.validate()?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("evolution time {t} must be finite and ≥ 0")));
    }
    let family = FnFamily::new(spec.b_z, |b| evolve_probe(&spec.with_b_z(b), t));
    let rho = family.evaluate(spec.b_z)?;
    let drho = differentiate_state(&family)?;
    let result = if rho.dim() == 2 { qfi_qubit(&rho, &drho)? } else { qfi_sld(&rho, &drho)? };
    Ok(result.with_fd_step(default_step(spec.b_z)))
}

/// One representative operating point per scheme: cooperative and standard
/// single-spin schemes, the thermal scheme at zero and finite bath
/// temperature, two spins at the critical point, and the one- and two-spin
/// noiseless baselines.
pub fn reference_scenarios() -> Vec<ScenarioSpec> {
    use ScenarioKind::*;
    vec![
        ScenarioSpec::new(CoopSpont, 0.1).with_b_x(0.1).with_gamma(0.5),
        ScenarioSpec::new(StdSpont, 0.1).with_gamma(0.5),
        ScenarioSpec::new(CoopDeph, 0.1).with_b_x(0.1).with_eta(0.5),
        ScenarioSpec::new(StdDeph, 0.1).with_eta(0.5),
        ScenarioSpec::new(CoopThermal, 0.3).with_b_x(0.1).with_dipole(2.0),
        ScenarioSpec::new(CoopThermal, 0.3).with_b_x(0.1).with_dipole(2.0).with_t_e(0.5),
        ScenarioSpec::new(TwoSpinCoop, 1.0).with_b_x(0.1).with_dipole(10.0),
        ScenarioSpec::new(UnitaryBaseline, 0.1),
        ScenarioSpec::new(UnitaryBaseline, 0.1).with_spins(2),
    ]
}
