//! Second-quantized spin-½ fermion modes over a handful of wires.
//!
//! A [`ModeSet`] fixes an ordering of `(wire, spin)` modes. Basis state `x`
//! of the `2^M`-dimensional Fock space has bit `i` set when mode `i` is
//! occupied, and stands for `f†_{i1} f†_{i2} ... f†_{ik} |0>` with
//! `i1 < i2 < ... < ik`. Creating mode `i` therefore picks up
//! `(-1)^(occupied modes below i)`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, ONE, ZERO};

pub const MAX_MODES: usize = 16;
const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub const BOTH: [Spin; 2] = [Spin::Up, Spin::Down];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mode {
    pub wire: char,
    pub spin: Spin,
}

impl Mode {
    pub fn up(wire: char) -> Self {
        Self { wire, spin: Spin::Up }
    }

    pub fn down(wire: char) -> Self {
        Self { wire, spin: Spin::Down }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.spin {
            Spin::Up => "up",
            Spin::Down => "dn",
        };
        write!(f, "{}_{}", self.wire, s)
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Serialization(format!("bad mode label '{s}'"));
        let (w, sp) = s.split_once('_').ok_or_else(bad)?;
        let mut chars = w.chars();
        let wire = chars.next().ok_or_else(bad)?;
        if chars.next().is_some() {
            return Err(bad());
        }
        let spin = match sp {
            "up" => Spin::Up,
            "dn" => Spin::Down,
            _ => return Err(bad()),
        };
        Ok(Mode { wire, spin })
    }
}

/// Ordered list of fermion modes; the order defines every fermionic sign.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModeSet {
    modes: Vec<Mode>,
}

impl ModeSet {
    pub fn new(modes: Vec<Mode>) -> Result<Self> {
        if modes.len() > MAX_MODES {
            return Err(Error::TooManyModes { got: modes.len(), max: MAX_MODES });
        }
        for (i, m) in modes.iter().enumerate() {
            if modes[..i].contains(m) {
                return Err(Error::DuplicateMode(m.to_string()));
            }
        }
        Ok(Self { modes })
    }

    /// `(w↑, w↓)` for each wire in the given order.
    pub fn from_wires(wires: &[char]) -> Result<Self> {
        Self::new(wires.iter().flat_map(|&w| [Mode::up(w), Mode::down(w)]).collect())
    }

    /// Canonical teleportation ordering `(c↑, c↓, a↑, a↓, b↑, b↓)`.
    pub fn teleport() -> Self {
        Self::from_wires(&['c', 'a', 'b']).expect("six distinct modes")
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Fock-space dimension `2^M`.
    pub fn dim(&self) -> usize {
        1 << self.modes.len()
    }

    pub fn index(&self, wire: char, spin: Spin) -> Result<usize> {
        self.modes.iter().position(|m| m.wire == wire && m.spin == spin).ok_or(Error::UnknownWire(wire))
    }

    pub fn has_wire(&self, wire: char) -> bool {
        self.modes.iter().any(|m| m.wire == wire)
    }

    /// Distinct wire labels in order of first appearance.
    pub fn wires(&self) -> Vec<char> {
        let mut out = Vec::new();
        for m in &self.modes {
            if !out.contains(&m.wire) {
                out.push(m.wire);
            }
        }
        out
    }

    pub fn check_wires(&self, wires: &[char]) -> Result<()> {
        match wires.iter().find(|w| !self.has_wire(**w)) {
            Some(&w) => Err(Error::UnknownWire(w)),
            None => Ok(()),
        }
    }

    /// Indices of every mode belonging to one of `wires`, ascending.
    pub fn indices_of(&self, wires: &[char]) -> Vec<usize> {
        (0..self.len()).filter(|&i| wires.contains(&self.modes[i].wire)).collect()
    }

    /// The sub-mode-set of `wires`, keeping this set's relative order.
    pub fn subset(&self, wires: &[char]) -> Result<ModeSet> {
        self.check_wires(wires)?;
        ModeSet::new(self.indices_of(wires).into_iter().map(|i| self.modes[i]).collect())
    }

    pub fn labels(&self) -> Vec<String> {
        self.modes.iter().map(|m| m.to_string()).collect()
    }
}

/// Occupation bitstring over a [`ModeSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockBasisState(pub usize);

impl FockBasisState {
    pub fn occupied(self, mode: usize) -> bool {
        self.0 >> mode & 1 == 1
    }

    pub fn count(self) -> u32 {
        self.0.count_ones()
    }

    /// `(-1)^(occupied modes with index < mode)`.
    pub fn sign_below(self, mode: usize) -> f64 {
        if (self.0 & ((1 << mode) - 1)).count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    /// Result of `f†_mode` on this basis state, if nonzero.
    pub fn create(self, mode: usize) -> Option<(f64, FockBasisState)> {
        (!self.occupied(mode)).then(|| (self.sign_below(mode), FockBasisState(self.0 | 1 << mode)))
    }

    pub fn annihilate(self, mode: usize) -> Option<(f64, FockBasisState)> {
        self.occupied(mode).then(|| (self.sign_below(mode), FockBasisState(self.0 & !(1 << mode))))
    }
}

// --- split representation -------------------------------------------------
//
// Moving the modes of a chosen wire subset to the end of the ordering turns
// an even operator on that subset into `I ⊗ O`. `split` returns the basis
// index of the remaining modes, the local index of the subset modes and the
// reordering sign.

fn split(x: usize, local: &[usize], rest: &[usize]) -> (usize, usize, f64) {
    let mut li = 0;
    let mut ri = 0;
    let mut swaps = 0u32;
    for (k, &m) in local.iter().enumerate() {
        if x >> m & 1 == 1 {
            li |= 1 << k;
            swaps += rest.iter().filter(|&&r| r > m && x >> r & 1 == 1).count() as u32;
        }
    }
    for (k, &m) in rest.iter().enumerate() {
        if x >> m & 1 == 1 {
            ri |= 1 << k;
        }
    }
    (ri, li, if swaps.is_multiple_of(2) { 1.0 } else { -1.0 })
}

fn join(ri: usize, li: usize, local: &[usize], rest: &[usize]) -> usize {
    let mut x = 0;
    for (k, &m) in local.iter().enumerate() {
        if li >> k & 1 == 1 {
            x |= 1 << m;
        }
    }
    for (k, &m) in rest.iter().enumerate() {
        if ri >> k & 1 == 1 {
            x |= 1 << m;
        }
    }
    x
}

impl ModeSet {
    fn local_rest(&self, wires: &[char]) -> Result<(Vec<usize>, Vec<usize>)> {
        self.check_wires(wires)?;
        let local = self.indices_of(wires);
        let rest = (0..self.len()).filter(|i| !local.contains(i)).collect();
        Ok((local, rest))
    }

    /// Lifts an operator on the modes of `wires` (in the basis of
    /// `self.subset(wires)`) to the full Fock space. The operator must be
    /// parity-even.
    pub fn embed(&self, wires: &[char], op: &CMatrix) -> Result<CMatrix> {
        let (local, rest) = self.local_rest(wires)?;
        let ld = 1 << local.len();
        if op.nrows() != ld || op.ncols() != ld {
            return Err(Error::DimensionMismatch { expected: ld, got: op.nrows() });
        }
        let dim = self.dim();
        let mut out = CMatrix::zeros(dim, dim);
        for x in 0..dim {
            let (ri, lx, sx) = split(x, &local, &rest);
            for ly in 0..ld {
                let v = op[(ly, lx)];
                if v == ZERO {
                    continue;
                }
                let y = join(ri, ly, &local, &rest);
                let (_, _, sy) = split(y, &local, &rest);
                out[(y, x)] = v * (sx * sy);
            }
        }
        Ok(out)
    }

    /// Matrix of a full-space operator between states whose non-`wires`
    /// modes are empty, in the basis of `self.subset(wires)`.
    pub fn restrict_to(&self, wires: &[char], op: &CMatrix) -> Result<CMatrix> {
        let (local, rest) = self.local_rest(wires)?;
        let ld = 1 << local.len();
        Ok(CMatrix::from_fn(ld, ld, |ly, lx| {
            let x = join(0, lx, &local, &rest);
            let y = join(0, ly, &local, &rest);
            // no rest modes occupied, so both reordering signs are +1
            op[(y, x)]
        }))
    }
}

/// Matrix of `f†_mode` on the Fock space of `modes`.
pub fn creation_matrix(modes: &ModeSet, mode: usize) -> CMatrix {
    let dim = modes.dim();
    let mut m = CMatrix::zeros(dim, dim);
    for x in 0..dim {
        if let Some((s, y)) = FockBasisState(x).create(mode) {
            m[(y.0, x)] = Complex64::new(s, 0.0);
        }
    }
    m
}

pub fn annihilation_matrix(modes: &ModeSet, mode: usize) -> CMatrix {
    creation_matrix(modes, mode).adjoint()
}

pub fn number_matrix(modes: &ModeSet, mode: usize) -> CMatrix {
    linalg::real_diag((0..modes.dim()).map(|x| if x >> mode & 1 == 1 { 1.0 } else { 0.0 }))
}

/// Pure state over the Fock space of a [`ModeSet`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    modes: ModeSet,
    amplitudes: CVector,
}

impl StateVector {
    pub fn vacuum(modes: &ModeSet) -> Self {
        Self::basis(modes, FockBasisState(0))
    }

    pub fn basis(modes: &ModeSet, x: FockBasisState) -> Self {
        let mut amplitudes = CVector::zeros(modes.dim());
        amplitudes[x.0] = ONE;
        Self { modes: modes.clone(), amplitudes }
    }

    pub fn zero(modes: &ModeSet) -> Self {
        Self { modes: modes.clone(), amplitudes: CVector::zeros(modes.dim()) }
    }

    pub fn from_amplitudes(modes: &ModeSet, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != modes.dim() {
            return Err(Error::DimensionMismatch { expected: modes.dim(), got: amplitudes.len() });
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Serialization("non-finite amplitude".into()));
        }
        Ok(Self { modes: modes.clone(), amplitudes })
    }

    /// `f†_{m1} f†_{m2} ... f†_{mk} |0>`, with the rightmost operator applied
    /// first, exactly as the product is written.
    pub fn created(modes: &ModeSet, ops: &[Mode]) -> Result<Self> {
        let mut s = Self::vacuum(modes);
        for m in ops.iter().rev() {
            s = apply_creation(&s, modes.index(m.wire, m.spin)?)?;
        }
        Ok(s)
    }

    pub fn modes(&self) -> &ModeSet {
        &self.modes
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn amplitude(&self, x: FockBasisState) -> Complex64 {
        self.amplitudes[x.0]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { modes: self.modes.clone(), amplitudes: &self.amplitudes * c }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_modes(&self.modes, &other.modes)?;
        Ok(Self { modes: self.modes.clone(), amplitudes: &self.amplitudes + &other.amplitudes })
    }

    /// Applies a full-space matrix.
    pub fn apply(&self, op: &CMatrix) -> Self {
        Self { modes: self.modes.clone(), amplitudes: op * &self.amplitudes }
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix { modes: self.modes.clone(), entries: &self.amplitudes * self.amplitudes.adjoint() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&StateJson::from(self)).expect("plain data serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: StateJson = serde_json::from_str(s).map_err(|e| Error::Serialization(e.to_string()))?;
        let modes = ModeSet::new(raw.modes.iter().map(|l| l.parse()).collect::<Result<Vec<Mode>>>()?)?;
        let amps = CVector::from_iterator(
            raw.amplitudes.len(),
            raw.amplitudes.iter().map(|[re, im]| Complex64::new(*re, *im)),
        );
        Self::from_amplitudes(&modes, amps)
    }
}

#[derive(Serialize, Deserialize)]
struct StateJson {
    modes: Vec<String>,
    amplitudes: Vec<[f64; 2]>,
}

impl From<&StateVector> for StateJson {
    fn from(s: &StateVector) -> Self {
        Self { modes: s.modes.labels(), amplitudes: s.amplitudes.iter().map(|z| [z.re, z.im]).collect() }
    }
}

fn same_modes(a: &ModeSet, b: &ModeSet) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::ModeSetMismatch)
    }
}

fn check_mode(state: &StateVector, mode: usize) -> Result<()> {
    if mode >= state.modes.len() {
        return Err(Error::ModeOutOfRange { index: mode, count: state.modes.len() });
    }
    Ok(())
}

pub fn apply_creation(state: &StateVector, mode: usize) -> Result<StateVector> {
    check_mode(state, mode)?;
    let mut out = CVector::zeros(state.amplitudes.len());
    for (x, &a) in state.amplitudes.iter().enumerate() {
        if a == ZERO {
            continue;
        }
        if let Some((s, y)) = FockBasisState(x).create(mode) {
            out[y.0] += a * s;
        }
    }
    Ok(StateVector { modes: state.modes.clone(), amplitudes: out })
}

pub fn apply_annihilation(state: &StateVector, mode: usize) -> Result<StateVector> {
    check_mode(state, mode)?;
    let mut out = CVector::zeros(state.amplitudes.len());
    for (x, &a) in state.amplitudes.iter().enumerate() {
        if a == ZERO {
            continue;
        }
        if let Some((s, y)) = FockBasisState(x).annihilate(mode) {
            out[y.0] += a * s;
        }
    }
    Ok(StateVector { modes: state.modes.clone(), amplitudes: out })
}

/// `<x|y>`, conjugate-linear in `x`.
pub fn inner_product(x: &StateVector, y: &StateVector) -> Result<Complex64> {
    same_modes(&x.modes, &y.modes)?;
    Ok(x.amplitudes.dotc(&y.amplitudes))
}

pub fn normalize(x: &StateVector) -> Result<StateVector> {
    let n = x.norm();
    if n == 0.0 || !n.is_finite() {
        return Err(Error::ZeroVector);
    }
    Ok(x.scale(Complex64::new(1.0 / n, 0.0)))
}

/// `|<x|y>|` for normalized states; insensitive to global phase.
pub fn overlap(x: &StateVector, y: &StateVector) -> Result<f64> {
    Ok(inner_product(x, y)?.norm())
}

/// Density matrix over the Fock space of a [`ModeSet`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    modes: ModeSet,
    entries: CMatrix,
}

impl DensityMatrix {
    /// Checks Hermiticity, unit trace and positivity, all at 1e-12.
    pub fn new(modes: &ModeSet, entries: CMatrix) -> Result<Self> {
        let d = modes.dim();
        if entries.nrows() != d || entries.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, got: entries.nrows() });
        }
        if linalg::hermiticity_defect(&entries) > HERMITIAN_TOL {
            return Err(Error::InvalidDensityMatrix("not Hermitian".into()));
        }
        let tr = entries.trace();
        if (tr.re - 1.0).abs() > HERMITIAN_TOL || tr.im.abs() > HERMITIAN_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr}")));
        }
        let (vals, _) = linalg::eigh(&entries);
        if vals.first().is_some_and(|&v| v < -HERMITIAN_TOL) {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {}", vals[0])));
        }
        Ok(Self { modes: modes.clone(), entries })
    }

    pub(crate) fn from_raw(modes: &ModeSet, entries: CMatrix) -> Self {
        Self { modes: modes.clone(), entries }
    }

    pub fn modes(&self) -> &ModeSet {
        &self.modes
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace().re
    }

    pub fn purity(&self) -> f64 {
        (&self.entries * &self.entries).trace().re
    }

    pub fn expectation(&self, op: &HermitianOperator) -> Result<f64> {
        same_modes(&self.modes, &op.modes)?;
        Ok((&self.entries * &op.matrix).trace().re)
    }

    /// `U ρ U†`.
    pub fn conjugate(&self, u: &CMatrix) -> Self {
        Self { modes: self.modes.clone(), entries: u * &self.entries * u.adjoint() }
    }

    /// Reduced state of the modes of `wires`, in the basis of
    /// `modes.subset(wires)`.
    pub fn reduced(&self, wires: &[char]) -> Result<CMatrix> {
        let (local, rest) = self.modes.local_rest(wires)?;
        let ld = 1 << local.len();
        let mut out = CMatrix::zeros(ld, ld);
        let dim = self.modes.dim();
        for x in 0..dim {
            let (rx, lx, sx) = split(x, &local, &rest);
            for ly in 0..ld {
                let y = join(rx, ly, &local, &rest);
                let (_, _, sy) = split(y, &local, &rest);
                out[(lx, ly)] += self.entries[(x, y)] * (sx * sy);
            }
        }
        Ok(out)
    }
}

/// A Hermitian operator on the full Fock space of a [`ModeSet`].
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    label: String,
    modes: ModeSet,
    matrix: CMatrix,
}

impl HermitianOperator {
    pub fn new(label: impl Into<String>, modes: &ModeSet, matrix: CMatrix) -> Result<Self> {
        let label = label.into();
        if matrix.nrows() != modes.dim() || matrix.ncols() != modes.dim() {
            return Err(Error::DimensionMismatch { expected: modes.dim(), got: matrix.nrows() });
        }
        let scale = linalg::max_abs(&matrix).max(1.0);
        if linalg::hermiticity_defect(&matrix) > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian(label));
        }
        Ok(Self { label, modes: modes.clone(), matrix })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn modes(&self) -> &ModeSet {
        &self.modes
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        same_modes(&self.modes, &state.modes)?;
        Ok(state.apply(&self.matrix))
    }
}

/// Symmetry observables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Observable {
    Number(char),
    /// `Σ_w (n_w↑ + n_w↓ - 1)`; the `-1` is the ionic background.
    Charge(Vec<char>),
    /// `(-1)^(total occupation)`.
    Parity,
    SpinZ(Vec<char>),
    /// `(Σ_w S_w)²`.
    SpinSquared(Vec<char>),
}

struct SpinComponents {
    z: CMatrix,
    plus: CMatrix,
    minus: CMatrix,
}

fn total_spin(modes: &ModeSet, wires: &[char]) -> Result<SpinComponents> {
    modes.check_wires(wires)?;
    let d = modes.dim();
    let mut s = SpinComponents { z: CMatrix::zeros(d, d), plus: CMatrix::zeros(d, d), minus: CMatrix::zeros(d, d) };
    for &w in wires {
        let up = modes.index(w, Spin::Up)?;
        let dn = modes.index(w, Spin::Down)?;
        let (cu, cd) = (creation_matrix(modes, up), creation_matrix(modes, dn));
        s.z += (number_matrix(modes, up) - number_matrix(modes, dn)) * Complex64::new(0.5, 0.0);
        s.plus += &cu * cd.adjoint();
        s.minus += &cd * cu.adjoint();
    }
    Ok(s)
}

pub fn build_observable(modes: &ModeSet, kind: &Observable) -> Result<HermitianOperator> {
    let d = modes.dim();
    let (label, matrix) = match kind {
        Observable::Number(w) => {
            modes.check_wires(&[*w])?;
            let m = modes.indices_of(&[*w]).into_iter().map(|i| number_matrix(modes, i)).sum();
            (format!("N({w})"), m)
        }
        Observable::Charge(wires) => {
            modes.check_wires(wires)?;
            let idx = modes.indices_of(wires);
            let vals = (0..d).map(|x| idx.iter().filter(|&&i| x >> i & 1 == 1).count() as f64 - wires.len() as f64);
            (format!("Q({})", wire_list(wires)), linalg::real_diag(vals))
        }
        Observable::Parity => {
            let vals = (0..d).map(|x| if x.count_ones() % 2 == 0 { 1.0 } else { -1.0 });
            ("P".to_string(), linalg::real_diag(vals))
        }
        Observable::SpinZ(wires) => (format!("Jz({})", wire_list(wires)), total_spin(modes, wires)?.z),
        Observable::SpinSquared(wires) => {
            let s = total_spin(modes, wires)?;
            let m = &s.z * &s.z + (&s.plus * &s.minus + &s.minus * &s.plus) * Complex64::new(0.5, 0.0);
            (format!("J2({})", wire_list(wires)), m)
        }
    };
    HermitianOperator::new(label, modes, matrix)
}

fn wire_list(wires: &[char]) -> String {
    wires.iter().collect()
}

pub fn expectation(op: &HermitianOperator, state: &StateVector) -> Result<f64> {
    same_modes(&op.modes, &state.modes)?;
    Ok(state.amplitudes.dotc(&(&op.matrix * &state.amplitudes)).re)
}
