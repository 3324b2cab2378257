//! Spin gates on edge-mode electrons, lifted to the Fock space.
//!
//! A single-wire gate is a 2×2 unitary `u` acting on the wire's creation
//! operators, `f†_s ↦ Σ_s' u[s'][s] f†_s'`. Its Fock-space lift substitutes
//! this into every basis monomial in place, so a doubly occupied wire picks
//! up `det(u)` and all fermionic signs come out of the expansion.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{apply_creation, FockBasisState, ModeSet, Spin, StateVector};
use crate::linalg::{CMatrix, CVector, ONE, ZERO};

pub type SpinMatrix = [[Complex64; 2]; 2];

const fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub const HADAMARD: SpinMatrix = [[re(FRAC_1_SQRT_2), re(FRAC_1_SQRT_2)], [re(FRAC_1_SQRT_2), re(-FRAC_1_SQRT_2)]];
/// `(f↑†, f↓†) ↦ (f↓†, -f↑†)`.
pub const IY: SpinMatrix = [[re(0.0), re(-1.0)], [re(1.0), re(0.0)]];
pub const FLIP: SpinMatrix = [[re(0.0), re(1.0)], [re(1.0), re(0.0)]];

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    /// Flips the target wire's spin on branches where the control wire holds
    /// a single spin-down electron; identity on every other branch.
    Cnot {
        control: char,
        target: char,
    },
    Hadamard(char),
    IY(char),
    SpinRotation {
        wire: char,
        matrix: SpinMatrix,
    },
}

impl Gate {
    pub fn wires(&self) -> Vec<char> {
        match self {
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::Hadamard(w) | Gate::IY(w) | Gate::SpinRotation { wire: w, .. } => vec![*w],
        }
    }

    fn validate(&self, modes: &ModeSet) -> Result<()> {
        modes.check_wires(&self.wires())?;
        match self {
            Gate::Cnot { control, target } if control == target => Err(Error::SameWire(*control)),
            Gate::SpinRotation { matrix, .. } if !is_unitary(matrix) => Err(Error::NotUnitary),
            _ => Ok(()),
        }
    }
}

fn is_unitary(u: &SpinMatrix) -> bool {
    let mut defect: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let dot: Complex64 = (0..2).map(|k| u[k][i].conj() * u[k][j]).sum();
            let target = if i == j { ONE } else { ZERO };
            defect = defect.max((dot - target).norm());
        }
    }
    defect <= 1e-12
}

/// Image of the basis monomial `x` under the single-wire substitution.
fn lift_column(modes: &ModeSet, wire: char, u: &SpinMatrix, x: FockBasisState) -> Result<CVector> {
    let up = modes.index(wire, Spin::Up)?;
    let dn = modes.index(wire, Spin::Down)?;
    let mut state = StateVector::vacuum(modes);
    for mode in (0..modes.len()).rev().filter(|&i| x.occupied(i)) {
        state = if mode == up || mode == dn {
            let col = usize::from(mode == dn);
            let to_up = apply_creation(&state, up)?.scale(u[0][col]);
            let to_dn = apply_creation(&state, dn)?.scale(u[1][col]);
            to_up.add(&to_dn)?
        } else {
            apply_creation(&state, mode)?
        };
    }
    Ok(state.amplitudes().clone())
}

fn single_wire_unitary(modes: &ModeSet, wire: char, u: &SpinMatrix) -> Result<CMatrix> {
    let d = modes.dim();
    let mut m = CMatrix::zeros(d, d);
    for x in 0..d {
        m.set_column(x, &lift_column(modes, wire, u, FockBasisState(x))?);
    }
    Ok(m)
}

/// Full `2^M × 2^M` unitary of `gate`.
pub fn gate_unitary(gate: &Gate, modes: &ModeSet) -> Result<CMatrix> {
    gate.validate(modes)?;
    match gate {
        Gate::Hadamard(w) => single_wire_unitary(modes, *w, &HADAMARD),
        Gate::IY(w) => single_wire_unitary(modes, *w, &IY),
        Gate::SpinRotation { wire, matrix } => single_wire_unitary(modes, *wire, matrix),
        Gate::Cnot { control, target } => {
            let cu = modes.index(*control, Spin::Up)?;
            let cd = modes.index(*control, Spin::Down)?;
            let d = modes.dim();
            let mut m = CMatrix::zeros(d, d);
            for x in 0..d {
                let b = FockBasisState(x);
                if b.occupied(cd) && !b.occupied(cu) {
                    m.set_column(x, &lift_column(modes, *target, &FLIP, b)?);
                } else {
                    m[(x, x)] = ONE;
                }
            }
            Ok(m)
        }
    }
}

pub fn apply_gate(gate: &Gate, state: &StateVector) -> Result<StateVector> {
    Ok(state.apply(&gate_unitary(gate, state.modes())?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{build_observable, normalize, Mode, Observable};
    use crate::linalg::{commutator, max_abs};

    fn modes() -> ModeSet {
        ModeSet::teleport()
    }

    fn st(ops: &[Mode]) -> StateVector {
        StateVector::created(&modes(), ops).unwrap()
    }

    fn sum(a: StateVector, b: StateVector) -> StateVector {
        a.add(&b).unwrap()
    }

    fn close(a: &StateVector, b: &StateVector) -> bool {
        (a.amplitudes() - b.amplitudes()).norm() < 1e-12
    }

    fn all_gates() -> Vec<Gate> {
        let theta: f64 = 0.37;
        let rot = [
            [Complex64::new(theta.cos(), 0.0), Complex64::new(0.0, theta.sin())],
            [Complex64::new(0.0, theta.sin()), Complex64::new(theta.cos(), 0.0)],
        ];
        vec![
            Gate::Cnot { control: 'c', target: 'a' },
            Gate::Cnot { control: 'a', target: 'b' },
            Gate::Hadamard('c'),
            Gate::Hadamard('b'),
            Gate::IY('b'),
            Gate::IY('a'),
            Gate::SpinRotation { wire: 'a', matrix: rot },
        ]
    }

    #[test]
    fn cnot_leaves_control_up_terms() {
        let s = sum(
            st(&[Mode::up('c'), Mode::up('a'), Mode::down('b')]),
            st(&[Mode::up('c'), Mode::up('b'), Mode::down('a')]),
        );
        let out = apply_gate(&Gate::Cnot { control: 'c', target: 'a' }, &s).unwrap();
        assert!(close(&out, &s));
    }

    #[test]
    fn cnot_swaps_target_spins_under_control_down() {
        let s = sum(
            st(&[Mode::down('c'), Mode::up('a'), Mode::down('b')]),
            st(&[Mode::down('c'), Mode::up('b'), Mode::down('a')]),
        );
        let expected = sum(
            st(&[Mode::down('c'), Mode::down('a'), Mode::down('b')]),
            st(&[Mode::down('c'), Mode::up('b'), Mode::up('a')]),
        );
        let out = apply_gate(&Gate::Cnot { control: 'c', target: 'a' }, &s).unwrap();
        assert!(close(&out, &expected));
    }

    #[test]
    fn cnot_identity_outside_single_down_control() {
        let g = Gate::Cnot { control: 'c', target: 'a' };
        for s in [st(&[Mode::up('a')]), st(&[Mode::up('c'), Mode::down('c'), Mode::up('a')])] {
            assert!(close(&apply_gate(&g, &s).unwrap(), &s));
        }
    }

    #[test]
    fn flip_of_doubly_occupied_target_is_minus_one() {
        let s = st(&[Mode::down('c'), Mode::up('a'), Mode::down('a')]);
        let out = apply_gate(&Gate::Cnot { control: 'c', target: 'a' }, &s).unwrap();
        assert!(close(&out, &s.scale(-ONE)));
    }

    #[test]
    fn hadamard_and_iy_substitution_rules() {
        let h = apply_gate(&Gate::Hadamard('c'), &st(&[Mode::up('c')])).unwrap();
        let expected = sum(st(&[Mode::up('c')]), st(&[Mode::down('c')])).scale(re(FRAC_1_SQRT_2));
        assert!(close(&h, &expected));
        let h = apply_gate(&Gate::Hadamard('c'), &st(&[Mode::down('c')])).unwrap();
        let expected = sum(st(&[Mode::up('c')]), st(&[Mode::down('c')]).scale(-ONE)).scale(re(FRAC_1_SQRT_2));
        assert!(close(&h, &expected));
        let y = apply_gate(&Gate::IY('b'), &st(&[Mode::down('b')])).unwrap();
        assert!(close(&y, &st(&[Mode::up('b')]).scale(-ONE)));
        let y = apply_gate(&Gate::IY('b'), &st(&[Mode::up('b')])).unwrap();
        assert!(close(&y, &st(&[Mode::down('b')])));
    }

    #[test]
    fn unitaries_respect_superselection_and_locality() {
        let m = modes();
        let q = build_observable(&m, &Observable::Charge(vec!['c', 'a', 'b'])).unwrap();
        let p = build_observable(&m, &Observable::Parity).unwrap();
        let numbers: Vec<_> =
            ['c', 'a', 'b'].iter().map(|&w| build_observable(&m, &Observable::Number(w)).unwrap()).collect();
        let id = CMatrix::identity(64, 64);
        for g in all_gates() {
            let u = gate_unitary(&g, &m).unwrap();
            assert!(max_abs(&(u.adjoint() * &u - &id)) < 1e-12, "{g:?}");
            assert!(max_abs(&commutator(&u, q.matrix())) < 1e-12);
            assert!(max_abs(&commutator(&u, p.matrix())) < 1e-12);
            for n in &numbers {
                assert!(max_abs(&commutator(&u, n.matrix())) < 1e-12);
            }
            // no matrix element changes an uninvolved wire's occupation
            let involved = m.indices_of(&g.wires());
            let mask: usize = (0..6).filter(|i| !involved.contains(i)).map(|i| 1 << i).sum();
            for x in 0..64 {
                for y in 0..64 {
                    if (x & mask) != (y & mask) {
                        assert_eq!(u[(y, x)], ZERO);
                    }
                }
            }
        }
    }

    #[test]
    fn uninvolved_wire_content_does_not_change_local_action() {
        // same local matrix element with b empty and with b singly occupied
        let m = modes();
        let u = gate_unitary(&Gate::Hadamard('c'), &m).unwrap();
        let c_up = 1 << 0;
        let c_dn = 1 << 1;
        let b_up = 1 << 4;
        for extra in [0, b_up] {
            assert!((u[(c_dn | extra, c_up | extra)] - re(FRAC_1_SQRT_2)).norm() < 1e-15);
        }
    }

    #[test]
    fn hadamard_is_an_involution() {
        let u = gate_unitary(&Gate::Hadamard('a'), &modes()).unwrap();
        assert!(max_abs(&(&u * &u - CMatrix::identity(64, 64))) < 1e-12);
    }

    #[test]
    fn invalid_specs() {
        let m = modes();
        assert_eq!(gate_unitary(&Gate::Hadamard('z'), &m), Err(Error::UnknownWire('z')));
        assert_eq!(gate_unitary(&Gate::Cnot { control: 'a', target: 'a' }, &m), Err(Error::SameWire('a')));
        let bad = [[ONE, ONE], [ZERO, ONE]];
        assert_eq!(gate_unitary(&Gate::SpinRotation { wire: 'a', matrix: bad }, &m), Err(Error::NotUnitary));
    }

    /// `up b↑†|0> + dn b↓†|0>`
    fn bob(up: Complex64, dn: Complex64) -> StateVector {
        sum(st(&[Mode::up('b')]).scale(up), st(&[Mode::down('b')]).scale(dn))
    }

    #[test]
    fn bob_correction_identities() {
        let r = 0.5f64.sqrt();
        let cases = [
            (Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)),
            (Complex64::new(0.3, -0.4), Complex64::new(0.5, FRAC_1_SQRT_2)),
        ];
        for (g1, g2) in cases {
            let n = (g1.norm_sqr() + g2.norm_sqr()).sqrt();
            let (g1, g2) = (g1 / n, g2 / n);
            let target = bob(g1, g2);
            let iy = Gate::IY('b');
            let h = Gate::Hadamard('b');

            // J = 1, Jz = 1 branch: g1 b↓† - g2 b↑†
            let s = bob(-g2, g1);
            let out = apply_gate(&iy, &s).unwrap();
            assert!(close(&out, &target.scale(-ONE)));

            // J = 1, Jz = 0 branch: g1 (b↑†-b↓†)/√2 - g2 (b↑†+b↓†)/√2
            let s = bob((g1 - g2) * r, (-g1 - g2) * r);
            let out = apply_gate(&iy, &apply_gate(&h, &s).unwrap()).unwrap();
            assert!(close(&out, &target.scale(-ONE)));

            // J = 0 branch: g1 (b↑†+b↓†)/√2 + g2 (b↑†-b↓†)/√2
            let s = bob((g1 + g2) * r, (g1 - g2) * r);
            let out = apply_gate(&h, &s).unwrap();
            assert!(close(&out, &target));
            assert!((normalize(&out).unwrap().norm() - 1.0).abs() < 1e-12);
        }
    }
}
