//! Coupling of two edge modes `a` and `b`:
//! `H_int = (e²/2)(n_a - 1)² + (e²/2)(n_b - 1)² + H_λ`, with
//! `H_λ = λ Σ_σ (a†_σ b_σ + b†_σ a_σ)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{
    build_observable, creation_matrix, inner_product, normalize, HermitianOperator, Mode, ModeSet, Observable, Spin,
    StateVector,
};
use crate::linalg::{self, CMatrix};
use crate::measure::{SpinLabel, SpinMeasurement};

/// Beyond this `λ/e²` the perturbative statements are not expected to hold.
pub const PERTURBATIVE_RATIO: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CouplingParams {
    pub e2: f64,
    pub lambda: f64,
}

impl CouplingParams {
    pub fn new(e2: f64, lambda: f64) -> Result<Self> {
        if !(e2.is_finite() && e2 >= 0.0) {
            return Err(Error::InvalidCoupling(format!("e2 must be finite and >= 0 (got {e2})")));
        }
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::InvalidCoupling(format!("lambda must be finite and >= 0 (got {lambda})")));
        }
        Ok(Self { e2, lambda })
    }

    pub fn is_cold_atom(&self) -> bool {
        self.e2 == 0.0
    }

    /// Regime warnings; exact diagonalization is valid regardless.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.e2 > 0.0 && self.lambda / self.e2 > PERTURBATIVE_RATIO {
            out.push(format!(
                "lambda/e2 = {} exceeds {PERTURBATIVE_RATIO}; second-order energies are unreliable",
                self.lambda / self.e2
            ));
        }
        out
    }
}

fn require_ab(modes: &ModeSet) -> Result<()> {
    modes.check_wires(&['a', 'b'])
}

pub fn build_h_lambda(lambda: f64, modes: &ModeSet) -> Result<HermitianOperator> {
    require_ab(modes)?;
    let d = modes.dim();
    let mut h = CMatrix::zeros(d, d);
    for spin in Spin::BOTH {
        let a = creation_matrix(modes, modes.index('a', spin)?);
        let b = creation_matrix(modes, modes.index('b', spin)?);
        h += (&a * b.adjoint() + &b * a.adjoint()) * Complex64::new(lambda, 0.0);
    }
    HermitianOperator::new("H_lambda", modes, h)
}

pub fn build_h_int(params: &CouplingParams, modes: &ModeSet) -> Result<HermitianOperator> {
    require_ab(modes)?;
    let half_e2 = Complex64::new(params.e2 / 2.0, 0.0);
    let mut h = build_h_lambda(params.lambda, modes)?.matrix().clone();
    for w in ['a', 'b'] {
        let q = build_observable(modes, &Observable::Charge(vec![w]))?;
        h += q.matrix() * q.matrix() * half_e2;
    }
    HermitianOperator::new("H_int", modes, h)
}

/// Joint `(charge, J, J_z)` sector of a wire subset.
#[derive(Debug, Clone, PartialEq)]
pub struct Sector {
    pub wires: Vec<char>,
    pub charge: i32,
    pub spin: SpinLabel,
}

impl Sector {
    pub fn neutral(wires: &[char], spin: SpinLabel) -> Self {
        Self { wires: wires.to_vec(), charge: 0, spin }
    }

    pub fn projector(&self, modes: &ModeSet) -> Result<CMatrix> {
        let q = build_observable(modes, &Observable::Charge(self.wires.clone()))?;
        let pq = linalg::real_diag(q.matrix().diagonal().iter().map(|z| {
            if (z.re - self.charge as f64).abs() < 0.5 {
                1.0
            } else {
                0.0
            }
        }));
        let spin = SpinMeasurement::new(modes, &self.wires)?;
        match spin.projector(self.spin) {
            Some(p) => Ok(pq * p),
            None => Err(Error::EmptySector),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    pub energy: f64,
    /// Orthonormal basis of the ground space.
    pub basis: Vec<StateVector>,
    pub degenerate: bool,
}

impl GroundState {
    pub fn state(&self) -> &StateVector {
        &self.basis[0]
    }
}

/// Lowest level of `h`, optionally restricted to a symmetry sector. Levels
/// within `1e-9·max(|h|_max, 1)` of the minimum count as degenerate.
pub fn ground_state(h: &HermitianOperator, sector: Option<&Sector>) -> Result<GroundState> {
    let modes = h.modes();
    let basis = match sector {
        Some(s) => linalg::projector_range(&s.projector(modes)?),
        None => CMatrix::identity(modes.dim(), modes.dim()),
    };
    if basis.ncols() == 0 {
        return Err(Error::EmptySector);
    }
    let (values, vectors) = linalg::eigh(&linalg::restrict(h.matrix(), &basis));
    let tol = 1e-9 * linalg::max_abs(h.matrix()).max(1.0);
    let energy = values[0];
    let ground: Vec<StateVector> = values
        .iter()
        .enumerate()
        .take_while(|(_, &v)| v - energy <= tol)
        .map(|(i, _)| {
            let v = &basis * vectors.column(i);
            fix_phase(StateVector::from_amplitudes(modes, v).expect("dimension matches"))
        })
        .collect();
    Ok(GroundState { energy, degenerate: ground.len() > 1, basis: ground })
}

/// Makes the coefficient of `a↑†b↓†|0>` or `a↑†a↓†|0>` real positive,
/// whichever is larger in magnitude (ties go to `a↑†a↓†`, as in the
/// ground state of `H_λ` alone). Falls back to the first nonzero amplitude.
fn fix_phase(v: StateVector) -> StateVector {
    let modes = v.modes().clone();
    let mut reference = None;
    if modes.check_wires(&['a', 'b']).is_ok() {
        let coeff = |ops: [Mode; 2]| {
            let r = StateVector::created(&modes, &ops).expect("a and b present");
            inner_product(&r, &v).expect("same modes")
        };
        let ab = coeff([Mode::up('a'), Mode::down('b')]);
        let aa = coeff([Mode::up('a'), Mode::down('a')]);
        let c = if aa.norm() >= ab.norm() - 1e-8 { aa } else { ab };
        if c.norm() > 1e-8 {
            reference = Some(c);
        }
    }
    let reference = reference.or_else(|| v.amplitudes().iter().find(|z| z.norm() > 1e-8).copied());
    match reference {
        Some(c) => v.scale(c.conj() / c.norm()),
        None => v,
    }
}

/// `(a↑†b↓† + b↑†a↓†)|0>/√2`.
pub fn singlet(modes: &ModeSet) -> Result<StateVector> {
    let x = StateVector::created(modes, &[Mode::up('a'), Mode::down('b')])?;
    let y = StateVector::created(modes, &[Mode::up('b'), Mode::down('a')])?;
    normalize(&x.add(&y)?)
}

/// `½(a↑† - b↑†)(a↓† - b↓†)|0>`, the ground state of `H_λ` alone.
pub fn bonding_pair(modes: &ModeSet) -> Result<StateVector> {
    let mut acc = StateVector::zero(modes);
    for (first, s1) in [('a', 1.0), ('b', -1.0)] {
        for (second, s2) in [('a', 1.0), ('b', -1.0)] {
            let term = StateVector::created(modes, &[Mode::up(first), Mode::down(second)])?;
            acc = acc.add(&term.scale(Complex64::new(0.5 * s1 * s2, 0.0)))?;
        }
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerturbativeCheck {
    pub e0_exact: f64,
    pub e0_perturbative: f64,
    pub deviation: f64,
}

fn ab_modes() -> ModeSet {
    ModeSet::from_wires(&['a', 'b']).expect("two wires")
}

/// Exact ground energy on the 16-dimensional `a`-`b` space against the
/// second-order value `-4λ²/e²`.
pub fn perturbative_check(params: &CouplingParams) -> Result<PerturbativeCheck> {
    if params.e2 == 0.0 {
        return Err(Error::InvalidCoupling("perturbative check needs e2 > 0".into()));
    }
    let h = build_h_int(params, &ab_modes())?;
    let e0_exact = ground_state(&h, None)?.energy;
    let e0_perturbative = -4.0 * params.lambda * params.lambda / params.e2;
    Ok(PerturbativeCheck { e0_exact, e0_perturbative, deviation: (e0_exact - e0_perturbative).abs() })
}

/// Largest `deviation·e⁶/λ⁴` over a λ sweep, i.e. the constant `C` in
/// `deviation ≤ C·λ⁴/e⁶`.
pub fn quartic_coefficient(e2: f64, lambdas: &[f64]) -> Result<f64> {
    let mut c: f64 = 0.0;
    for &l in lambdas.iter().filter(|&&l| l > 0.0) {
        let check = perturbative_check(&CouplingParams::new(e2, l)?)?;
        c = c.max(check.deviation * e2.powi(3) / l.powi(4));
    }
    Ok(c)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HubbardReport {
    pub e2: f64,
    pub lambda: f64,
    #[serde(rename = "E0_exact")]
    pub e0_exact: f64,
    /// `None` when `e2 = 0`, where second-order theory does not apply.
    #[serde(rename = "E0_perturbative")]
    pub e0_perturbative: Option<f64>,
    pub singlet_overlap: f64,
    pub triplet_gap: f64,
}

pub fn report(params: &CouplingParams) -> Result<HubbardReport> {
    let modes = ab_modes();
    let h = build_h_int(params, &modes)?;
    let ground = ground_state(&h, Some(&Sector::neutral(&['a', 'b'], SpinLabel::ints(0, 0))))?;
    let triplet = ground_state(&h, Some(&Sector::neutral(&['a', 'b'], SpinLabel::ints(1, 1))))?;
    let e0_exact = ground_state(&h, None)?.energy;
    let singlet_overlap = inner_product(&singlet(&modes)?, ground.state())?.norm();
    Ok(HubbardReport {
        e2: params.e2,
        lambda: params.lambda,
        e0_exact,
        e0_perturbative: (params.e2 > 0.0).then(|| -4.0 * params.lambda.powi(2) / params.e2),
        singlet_overlap,
        triplet_gap: triplet.energy - e0_exact,
    })
}
