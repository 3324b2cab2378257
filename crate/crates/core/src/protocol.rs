//! Teleportation of an electron spin from wire `c` to the edge mode of wire
//! `b`, using the `a`-`b` singlet as the entangled resource.
//!
//! Alice holds `c` and `a`, Bob holds `b`. Alice applies CNOT(c→a) and a
//! Hadamard on `c`, measures `(J, J_z)` of `c`-`a`, and sends the two
//! labels to Bob, who applies the matching correction to `b`.
//!
//! The cold-atom variant starts from the ground state of `H_λ` alone, which
//! contains doubly occupied edge modes. Alice first measures whether `c`-`a`
//! has integer or half-odd-integer spin; on the latter the `a`-`b` pair is
//! relaxed back to the ground state of `H_λ` and the measurement repeats.
//! The mixed variant does the same starting from a density matrix on the
//! neutral spin-zero span of `a`-`b`.

use std::collections::BTreeMap;

use nalgebra::Matrix3;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{apply_creation, DensityMatrix, Mode, ModeSet, Spin, StateVector};
use crate::gates::{gate_unitary, Gate};
use crate::hubbard::{bonding_pair, build_h_lambda, singlet};
use crate::linalg::{self, CMatrix, Sparse, ONE, ZERO};
use crate::measure::{SpinClass, SpinLabel, SpinMeasurement};
use crate::relax::Relaxation;

pub const DEFAULT_MAX_ROUNDS: u32 = 64;

/// Spin state `g1 |↑> + g2 |↓>` to be teleported.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinAmplitudes {
    g1: Complex64,
    g2: Complex64,
}

impl SpinAmplitudes {
    /// Requires `|g1|² + |g2|² = 1` within 1e-12.
    pub fn new(g1: Complex64, g2: Complex64) -> Result<Self> {
        Self::with_tolerance(g1, g2, 1e-12)
    }

    /// Accepts and renormalizes amplitudes within `tol` of unit norm.
    pub fn with_tolerance(g1: Complex64, g2: Complex64, tol: f64) -> Result<Self> {
        let n2 = g1.norm_sqr() + g2.norm_sqr();
        if !n2.is_finite() || (n2 - 1.0).abs() > tol {
            return Err(Error::NotNormalized(n2));
        }
        let s = 1.0 / n2.sqrt();
        Ok(Self { g1: g1 * s, g2: g2 * s })
    }

    /// Uniform on the Bloch sphere.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let mut z = || Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal));
            let (g1, g2) = (z(), z());
            let n = (g1.norm_sqr() + g2.norm_sqr()).sqrt();
            if n > 1e-8 {
                return Self { g1: g1 / n, g2: g2 / n };
            }
        }
    }

    pub fn g1(&self) -> Complex64 {
        self.g1
    }

    pub fn g2(&self) -> Complex64 {
        self.g2
    }

    /// `(g1 w↑† + g2 w↓†)` applied to `state`.
    pub fn create_on(&self, wire: char, state: &StateVector) -> Result<StateVector> {
        let modes = state.modes();
        let up = apply_creation(state, modes.index(wire, Spin::Up)?)?;
        let dn = apply_creation(state, modes.index(wire, Spin::Down)?)?;
        up.scale(self.g1).add(&dn.scale(self.g2))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Electronic,
    #[serde(rename = "coldatom")]
    ColdAtom,
    Mixed,
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "electronic" => Ok(Variant::Electronic),
            "coldatom" => Ok(Variant::ColdAtom),
            "mixed" => Ok(Variant::Mixed),
            _ => Err(format!("unknown variant '{s}'")),
        }
    }
}

/// Initial pure state: `(g1 c↑† + g2 c↓†)(a↑†b↓† + b↑†a↓†)|0>/√2` for the
/// electronic variant, `½(g1 c↑† + g2 c↓†)(a↑† - b↑†)(a↓† - b↓†)|0>` for the
/// cold-atom one. The mixed variant has no pure initial state.
pub fn prepare_initial(g: &SpinAmplitudes, variant: Variant) -> Result<StateVector> {
    let modes = ModeSet::teleport();
    let resource = match variant {
        Variant::Electronic => singlet(&modes)?,
        Variant::ColdAtom => bonding_pair(&modes)?,
        Variant::Mixed => return Err(Error::UselessResource),
    };
    g.create_on('c', &resource)
}

/// Gates Bob applies to `b`, in order.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionStep(pub Vec<Gate>);

pub fn bob_correction(label: SpinLabel) -> Result<CorrectionStep> {
    let gates = match (label.j.twice(), label.m.twice()) {
        (2, 2) => vec![Gate::IY('b')],
        (2, 0) => vec![Gate::Hadamard('b'), Gate::IY('b')],
        (2, -2) => vec![],
        (0, 0) => vec![Gate::Hadamard('b')],
        _ => return Err(Error::NoCorrection { j: label.j.to_string(), m: label.m.to_string() }),
    };
    Ok(CorrectionStep(gates))
}

/// Two-electron resource on the neutral spin-zero span of `a`-`b`, in the
/// basis `(a↑†a↓†|0>, b↑†b↓†|0>, (a↑†b↓† + b↑†a↓†)|0>/√2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedResource(Matrix3<Complex64>);

impl MixedResource {
    pub fn new(rho: Matrix3<Complex64>) -> Result<Self> {
        let m = CMatrix::from_iterator(3, 3, rho.iter().copied());
        if linalg::hermiticity_defect(&m) > 1e-12 {
            return Err(Error::InvalidDensityMatrix("resource not Hermitian".into()));
        }
        if (m.trace().re - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDensityMatrix("resource trace is not 1".into()));
        }
        if linalg::eigh(&m).0[0] < -1e-12 {
            return Err(Error::InvalidDensityMatrix("resource not positive".into()));
        }
        if rho[(2, 2)].re <= 1e-12 {
            return Err(Error::UselessResource);
        }
        Ok(Self(rho))
    }

    pub fn pure_singlet() -> Self {
        let mut m = Matrix3::zeros();
        m[(2, 2)] = ONE;
        Self(m)
    }

    /// ½ singlet + ¼ a-doublon + ¼ b-doublon, diagonal.
    pub fn half_singlet() -> Self {
        Self(Matrix3::from_diagonal(&nalgebra::Vector3::new(
            Complex64::new(0.25, 0.0),
            Complex64::new(0.25, 0.0),
            Complex64::new(0.5, 0.0),
        )))
    }

    /// Random density matrix with singlet weight at least `min_weight`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, min_weight: f64) -> Self {
        loop {
            let a = Matrix3::from_fn(|_, _| {
                Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
            });
            let rho = a * a.adjoint();
            let rho = rho / rho.trace();
            if rho[(2, 2)].re >= min_weight {
                return Self::new(rho).expect("Wishart sample is a density matrix");
            }
        }
    }

    pub fn singlet_weight(&self) -> f64 {
        self.0[(2, 2)].re
    }

    pub fn matrix(&self) -> &Matrix3<Complex64> {
        &self.0
    }

    /// Full six-mode density matrix with wire `c` in the state `g`.
    pub fn with_spin(&self, g: &SpinAmplitudes) -> Result<DensityMatrix> {
        let modes = ModeSet::teleport();
        let basis = [
            StateVector::created(&modes, &[Mode::up('a'), Mode::down('a')])?,
            StateVector::created(&modes, &[Mode::up('b'), Mode::down('b')])?,
            singlet(&modes)?,
        ];
        let kets: Vec<StateVector> = basis.iter().map(|b| g.create_on('c', b)).collect::<Result<_>>()?;
        let d = modes.dim();
        let mut rho = CMatrix::zeros(d, d);
        for i in 0..3 {
            for j in 0..3 {
                rho += kets[i].amplitudes() * kets[j].amplitudes().adjoint() * self.0[(i, j)];
            }
        }
        DensityMatrix::new(&modes, rho)
    }
}

/// One completed teleportation.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub branch: SpinLabel,
    /// Number of spin-class measurements (1 for the electronic variant).
    pub rounds: u32,
    pub relaxations: u32,
    /// Bob's single-electron spin state in the basis `(b↑, b↓)`.
    pub bob_state: CMatrix,
    pub fidelity: f64,
}

/// Precomputed operators for the six-mode protocol.
#[derive(Debug, Clone)]
pub struct Teleporter {
    modes: ModeSet,
    /// Hadamard on `c` after CNOT(c→a).
    alice_unitary: CMatrix,
    corrections: Vec<(SpinLabel, CMatrix)>,
    alice_sparse: Sparse,
    corrections_sparse: Vec<Sparse>,
    alice: SpinMeasurement,
    relax: Relaxation,
    max_rounds: u32,
}

impl Teleporter {
    pub fn new() -> Result<Self> {
        let modes = ModeSet::teleport();
        let cnot = gate_unitary(&Gate::Cnot { control: 'c', target: 'a' }, &modes)?;
        let alice_unitary = gate_unitary(&Gate::Hadamard('c'), &modes)? * cnot;
        let mut corrections = Vec::new();
        for label in BRANCHES {
            let mut u = CMatrix::identity(modes.dim(), modes.dim());
            for gate in bob_correction(label)?.0 {
                u = gate_unitary(&gate, &modes)? * u;
            }
            corrections.push((label, u));
        }
        Ok(Self {
            alice_sparse: Sparse::from_dense(&alice_unitary),
            corrections_sparse: corrections.iter().map(|(_, u)| Sparse::from_dense(u)).collect(),
            alice_unitary,
            corrections,
            alice: SpinMeasurement::new(&modes, &['c', 'a'])?,
            relax: Relaxation::new(&build_h_lambda(1.0, &modes)?, &['a', 'b'])?,
            max_rounds: DEFAULT_MAX_ROUNDS,
            modes,
        })
    }

    pub fn with_max_rounds(mut self, max_rounds: u32) -> Self {
        self.max_rounds = max_rounds;
        self
    }

    pub fn modes(&self) -> &ModeSet {
        &self.modes
    }

    pub fn alice_measurement(&self) -> &SpinMeasurement {
        &self.alice
    }

    /// CNOT(c→a) followed by the Hadamard on `c`.
    pub fn alice_gates(&self, state: &StateVector) -> StateVector {
        state.apply(&self.alice_unitary)
    }

    fn correction_unitary(&self, label: SpinLabel) -> Result<&CMatrix> {
        match self.corrections.iter().find(|(l, _)| *l == label) {
            Some((_, u)) => Ok(u),
            None => Err(bob_correction(label).expect_err("every correctable branch is cached")),
        }
    }

    /// Bob's side: only the two classical labels are read.
    pub fn bob_corrects(&self, label: SpinLabel, state: &StateVector) -> Result<StateVector> {
        Ok(state.apply(self.correction_unitary(label)?))
    }

    /// Electronic protocol from a state of the form `(g c†)|g>`.
    pub fn teleport_from<R: Rng + ?Sized>(
        &self,
        g: &SpinAmplitudes,
        state: &StateVector,
        rng: &mut R,
    ) -> Result<(SpinLabel, StateVector, TrialOutcome)> {
        let outcome = self.alice.measure(&self.alice_gates(state), rng)?;
        let label = outcome.label;
        let final_state = self.bob_corrects(label, &outcome.post_state)?;
        let bob_state = bob_spin_state(&final_state.to_density())?;
        let fidelity = spin_fidelity(g, &bob_state);
        let trial = TrialOutcome { branch: label, rounds: 1, relaxations: 0, bob_state, fidelity };
        Ok((label, final_state, trial))
    }

    pub fn run_once<R: Rng + ?Sized>(&self, g: &SpinAmplitudes, variant: Variant, rng: &mut R) -> Result<TrialOutcome> {
        match variant {
            Variant::Electronic => {
                let psi = prepare_initial(g, Variant::Electronic)?;
                Ok(self.teleport_from(g, &psi, rng)?.2)
            }
            Variant::ColdAtom => {
                let mut state = prepare_initial(g, Variant::ColdAtom)?;
                let mut rounds = 0;
                loop {
                    rounds += 1;
                    if rounds > self.max_rounds {
                        return Err(Error::RoundCapExceeded(self.max_rounds));
                    }
                    let (class, post) = self.alice.measure_class(&state, rng)?;
                    if class == SpinClass::Integer {
                        state = post;
                        break;
                    }
                    state = self.relax.relax(&post)?;
                }
                let (_, _, mut trial) = self.teleport_from(g, &state, rng)?;
                trial.rounds = rounds;
                trial.relaxations = rounds - 1;
                Ok(trial)
            }
            Variant::Mixed => self.run_mixed(g, &MixedResource::half_singlet(), rng),
        }
    }

    pub fn run_mixed<R: Rng + ?Sized>(
        &self,
        g: &SpinAmplitudes,
        resource: &MixedResource,
        rng: &mut R,
    ) -> Result<TrialOutcome> {
        let mut rho = resource.with_spin(g)?;
        let mut rounds = 0;
        loop {
            rounds += 1;
            if rounds > self.max_rounds {
                return Err(Error::RoundCapExceeded(self.max_rounds));
            }
            let outcome = self.alice.measure_class_density(&rho, rng)?;
            if outcome.label == SpinClass::Integer {
                rho = outcome.post_state;
                break;
            }
            rho = self.relax.relax_density(&outcome.post_state)?;
        }
        let rho = DensityMatrix::from_raw(&self.modes, self.alice_sparse.sandwich(rho.entries()));
        let measured = self.alice.measure_density(&rho, rng)?;
        let label = measured.label;
        let fix = match self.corrections.iter().position(|(l, _)| *l == label) {
            Some(i) => &self.corrections_sparse[i],
            None => return Err(bob_correction(label).expect_err("every correctable branch is cached")),
        };
        let rho = DensityMatrix::from_raw(&self.modes, fix.sandwich(measured.post_state.entries()));
        let bob_state = bob_spin_state(&rho)?;
        Ok(TrialOutcome {
            branch: label,
            rounds,
            relaxations: rounds - 1,
            fidelity: spin_fidelity(g, &bob_state),
            bob_state,
        })
    }
}

/// Bob's reduced single-electron spin state, `(b↑, b↓)` block of the
/// reduced density matrix of wire `b`.
pub fn bob_spin_state(rho: &DensityMatrix) -> Result<CMatrix> {
    let rb = rho.reduced(&['b'])?;
    // local basis of wire b: bit 0 = b↑, bit 1 = b↓
    Ok(CMatrix::from_fn(2, 2, |r, c| rb[(r + 1, c + 1)]))
}

/// `sqrt(<g|ρ|g>)`, which is `|<g|φ>|` for a pure `ρ = |φ><φ|`.
pub fn spin_fidelity(g: &SpinAmplitudes, bob: &CMatrix) -> f64 {
    let t = [g.g1, g.g2];
    let mut v = ZERO;
    for r in 0..2 {
        for c in 0..2 {
            v += t[r].conj() * bob[(r, c)] * t[c];
        }
    }
    v.re.max(0.0).sqrt()
}

pub fn run_teleport_once<R: Rng + ?Sized>(g: &SpinAmplitudes, variant: Variant, rng: &mut R) -> Result<TrialOutcome> {
    Teleporter::new()?.run_once(g, variant, rng)
}

pub fn run_teleport_mixed<R: Rng + ?Sized>(
    g: &SpinAmplitudes,
    resource: &MixedResource,
    rng: &mut R,
) -> Result<TrialOutcome> {
    Teleporter::new()?.run_mixed(g, resource, rng)
}

/// Generator for trial `index` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(index))
}

/// Aggregate statistics; serialized with a fixed key order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TeleportReport {
    pub variant: Variant,
    pub g1: [f64; 2],
    pub g2: [f64; 2],
    pub trials: u64,
    pub seed: u64,
    /// Keyed by `"J,J_z"`.
    pub branch_counts: BTreeMap<String, u64>,
    pub rounds_histogram: BTreeMap<u32, u64>,
    pub mean_rounds: f64,
    pub relaxations: u64,
    pub min_fidelity: f64,
    pub mean_fidelity: f64,
}

impl TeleportReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn branch_count(&self, label: SpinLabel) -> u64 {
        self.branch_counts.get(&label.to_string()).copied().unwrap_or(0)
    }

    /// Fraction of trials that needed more than `n` rounds.
    pub fn failure_fraction(&self, n: u32) -> f64 {
        let failed: u64 = self.rounds_histogram.range(n + 1..).map(|(_, c)| c).sum();
        failed as f64 / self.trials as f64
    }
}

pub const BRANCHES: [SpinLabel; 4] = [
    SpinLabel { j: crate::HalfInt::int(1), m: crate::HalfInt::int(1) },
    SpinLabel { j: crate::HalfInt::int(1), m: crate::HalfInt::int(0) },
    SpinLabel { j: crate::HalfInt::int(1), m: crate::HalfInt::int(-1) },
    SpinLabel { j: crate::HalfInt::int(0), m: crate::HalfInt::int(0) },
];

/// `n` independent trials; trial `i` uses the generator seeded with
/// `seed + i`, so the report is the same however the trials are scheduled.
pub fn run_trials(
    teleporter: &Teleporter,
    g: &SpinAmplitudes,
    variant: Variant,
    n: u64,
    seed: u64,
) -> Result<TeleportReport> {
    if n == 0 {
        return Err(Error::NoTrials);
    }
    let outcomes: Vec<TrialOutcome> = (0..n)
        .into_par_iter()
        .map(|i| teleporter.run_once(g, variant, &mut trial_rng(seed, i)))
        .collect::<Result<_>>()?;

    let mut branch_counts: BTreeMap<String, u64> = BRANCHES.iter().map(|b| (b.to_string(), 0)).collect();
    let mut rounds_histogram = BTreeMap::new();
    let (mut min_fidelity, mut fid_sum, mut round_sum, mut relaxations) = (f64::INFINITY, 0.0, 0u64, 0u64);
    for o in &outcomes {
        *branch_counts.entry(o.branch.to_string()).or_insert(0) += 1;
        *rounds_histogram.entry(o.rounds).or_insert(0) += 1;
        min_fidelity = min_fidelity.min(o.fidelity);
        fid_sum += o.fidelity;
        round_sum += o.rounds as u64;
        relaxations += o.relaxations as u64;
    }
    Ok(TeleportReport {
        variant,
        g1: [g.g1.re, g.g1.im],
        g2: [g.g2.re, g.g2.im],
        trials: n,
        seed,
        branch_counts,
        rounds_histogram,
        mean_rounds: round_sum as f64 / n as f64,
        relaxations,
        min_fidelity,
        mean_fidelity: fid_sum / n as f64,
    })
}
