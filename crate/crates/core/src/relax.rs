//! Complete dissipative relaxation of a wire subset toward the ground state
//! of a Hamiltonian, sector by sector in `(charge, J, J_z)` of that subset.
//!
//! For pure states every sector component is projected onto the ground space
//! of `h` inside the sector and rescaled to its original weight, which keeps
//! the component's phase. Density matrices go through the trace-and-prepare
//! channel with Kraus operators `|g_k><e_i| / √d` per sector, where `e_i`
//! spans the sector and `g_k` its `d`-dimensional ground space.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{build_observable, DensityMatrix, HermitianOperator, ModeSet, Observable, StateVector};
use crate::linalg::{self, CMatrix, Sparse};
use crate::measure::{SpinLabel, SpinMeasurement};

const LOCALITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
struct SectorGround {
    charge: i32,
    spin: SpinLabel,
    energy: f64,
    projector: CMatrix,
    ground_projector: CMatrix,
    kraus: Vec<Sparse>,
}

/// Precomputed relaxation map for one Hamiltonian and wire subset.
#[derive(Debug, Clone)]
pub struct Relaxation {
    modes: ModeSet,
    wires: Vec<char>,
    sectors: Vec<SectorGround>,
}

impl Relaxation {
    /// Fails with [`Error::NotLocal`] when `h` touches modes outside `wires`.
    pub fn new(h: &HermitianOperator, wires: &[char]) -> Result<Self> {
        let modes = h.modes().clone();
        let h_local = modes.restrict_to(wires, h.matrix())?;
        let scale = linalg::max_abs(h.matrix()).max(1.0);
        if linalg::max_abs(&(modes.embed(wires, &h_local)? - h.matrix())) > LOCALITY_TOL * scale {
            return Err(Error::NotLocal(h.label().to_string()));
        }

        let local = modes.subset(wires)?;
        let charge = build_observable(&local, &Observable::Charge(wires.to_vec()))?;
        let charges: Vec<i32> = charge.matrix().diagonal().iter().map(|z| z.re.round() as i32).collect();
        let mut distinct = charges.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let spin = SpinMeasurement::new(&local, wires)?;
        let tol = 1e-9 * scale;

        let mut sectors = Vec::new();
        for &q in &distinct {
            let pq = linalg::real_diag(charges.iter().map(|&c| if c == q { 1.0 } else { 0.0 }));
            for (label, ps) in spin.sectors() {
                let basis = linalg::projector_range(&(&pq * ps));
                if basis.ncols() == 0 {
                    continue;
                }
                let (values, vectors) = linalg::eigh(&linalg::restrict(&h_local, &basis));
                let d = values.iter().take_while(|&&v| v - values[0] <= tol).count();
                let ground = &basis * vectors.columns(0, d);
                let norm = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
                let mut kraus = Vec::with_capacity(basis.ncols() * d);
                for i in 0..basis.ncols() {
                    for k in 0..d {
                        let op = ground.column(k) * basis.column(i).adjoint() * norm;
                        kraus.push(Sparse::from_dense(&modes.embed(wires, &op)?));
                    }
                }
                sectors.push(SectorGround {
                    charge: q,
                    spin: *label,
                    energy: values[0],
                    projector: modes.embed(wires, &(&basis * basis.adjoint()))?,
                    ground_projector: modes.embed(wires, &(&ground * ground.adjoint()))?,
                    kraus,
                });
            }
        }
        Ok(Self { modes, wires: wires.to_vec(), sectors })
    }

    pub fn wires(&self) -> &[char] {
        &self.wires
    }

    /// `(charge, (J, J_z), lowest energy)` for every nonempty sector.
    pub fn sector_energies(&self) -> Vec<(i32, SpinLabel, f64)> {
        self.sectors.iter().map(|s| (s.charge, s.spin, s.energy)).collect()
    }

    pub fn relax(&self, state: &StateVector) -> Result<StateVector> {
        if state.modes() != &self.modes {
            return Err(Error::ModeSetMismatch);
        }
        let mut out = StateVector::zero(&self.modes);
        for s in &self.sectors {
            let weight = state.apply(&s.projector).norm();
            if weight < 1e-12 {
                continue;
            }
            let projected = state.apply(&s.ground_projector);
            let kept = projected.norm();
            if kept < 1e-10 * weight {
                return Err(Error::RelaxationUndefined);
            }
            out = out.add(&projected.scale(Complex64::new(weight / kept, 0.0)))?;
        }
        let n = out.norm();
        if n < 1e-12 {
            return Err(Error::RelaxationVanished);
        }
        Ok(out.scale(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn relax_density(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.modes() != &self.modes {
            return Err(Error::ModeSetMismatch);
        }
        let d = self.modes.dim();
        let mut out = CMatrix::zeros(d, d);
        for s in &self.sectors {
            for k in &s.kraus {
                k.sandwich_into(rho.entries(), &mut out);
            }
        }
        let tr = out.trace().re;
        if tr < 1e-12 {
            return Err(Error::RelaxationVanished);
        }
        Ok(DensityMatrix::from_raw(&self.modes, out * Complex64::new(1.0 / tr, 0.0)))
    }
}

pub fn relax_to_ground(state: &StateVector, h: &HermitianOperator, wires: &[char]) -> Result<StateVector> {
    Relaxation::new(h, wires)?.relax(state)
}
