//! Projective total-spin measurements on a subset of wires.
//!
//! Sectors are found by diagonalizing `J²`, snapping each eigenvalue to the
//! nearest `j(j+1)`, then diagonalizing `J_z` inside every `J²` eigenspace.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fock::{build_observable, DensityMatrix, ModeSet, Observable, StateVector};
use crate::linalg::{self, CMatrix, Sparse};

const SNAP_TOL: f64 = 1e-6;
const DROP_BELOW: f64 = 1e-14;

/// A half-integer stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const fn from_twice(twice: i32) -> Self {
        Self(twice)
    }

    pub const fn int(n: i32) -> Self {
        Self(2 * n)
    }

    pub fn twice(self) -> i32 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Joint `(J, J_z)` label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SpinLabel {
    pub j: HalfInt,
    pub m: HalfInt,
}

impl SpinLabel {
    pub fn new(j: HalfInt, m: HalfInt) -> Self {
        Self { j, m }
    }

    pub fn ints(j: i32, m: i32) -> Self {
        Self { j: HalfInt::int(j), m: HalfInt::int(m) }
    }
}

impl fmt::Display for SpinLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.j, self.m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SpinClass {
    Integer,
    HalfOddInteger,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOutcome {
    pub label: SpinLabel,
    pub probability: f64,
    pub post_state: StateVector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityOutcome<L> {
    pub label: L,
    pub probability: f64,
    pub post_state: DensityMatrix,
}

fn snap_j(value: f64) -> Result<HalfInt> {
    let two_j = ((4.0 * value.max(0.0) + 1.0).sqrt() - 1.0).round();
    let j = two_j / 2.0;
    if (j * (j + 1.0) - value).abs() > SNAP_TOL {
        return Err(Error::SectorAssignment { observable: "J^2", value });
    }
    Ok(HalfInt::from_twice(two_j as i32))
}

fn snap_m(value: f64) -> Result<HalfInt> {
    let two_m = (2.0 * value).round();
    if (two_m / 2.0 - value).abs() > SNAP_TOL {
        return Err(Error::SectorAssignment { observable: "J_z", value });
    }
    Ok(HalfInt::from_twice(two_m as i32))
}

/// Groups ascending `values` into runs whose labels agree.
fn group_by_label<T: PartialEq + Copy>(labels: &[T]) -> Vec<(T, Vec<usize>)> {
    let mut groups: Vec<(T, Vec<usize>)> = Vec::new();
    for (i, l) in labels.iter().enumerate() {
        match groups.iter_mut().find(|(g, _)| g == l) {
            Some((_, idx)) => idx.push(i),
            None => groups.push((*l, vec![i])),
        }
    }
    groups
}

fn columns(m: &CMatrix, cols: &[usize]) -> CMatrix {
    CMatrix::from_fn(m.nrows(), cols.len(), |r, c| m[(r, cols[c])])
}

/// Precomputed `(J, J_z)` projectors for one wire subset.
#[derive(Debug, Clone)]
pub struct SpinMeasurement {
    modes: ModeSet,
    wires: Vec<char>,
    sectors: Vec<(SpinLabel, CMatrix)>,
    /// Integer and half-odd-integer class projectors, in that order.
    classes: [CMatrix; 2],
    sparse_sectors: Vec<Sparse>,
    sparse_classes: [Sparse; 2],
}

impl SpinMeasurement {
    pub fn new(modes: &ModeSet, wires: &[char]) -> Result<Self> {
        let j2 = build_observable(modes, &Observable::SpinSquared(wires.to_vec()))?;
        let jz = build_observable(modes, &Observable::SpinZ(wires.to_vec()))?;
        let (values, vectors) = linalg::eigh(j2.matrix());
        let j_labels = values.iter().map(|&v| snap_j(v)).collect::<Result<Vec<_>>>()?;

        let mut sectors = Vec::new();
        for (j, idx) in group_by_label(&j_labels) {
            let basis = columns(&vectors, &idx);
            let (mvals, mvecs) = linalg::eigh(&linalg::restrict(jz.matrix(), &basis));
            let m_labels = mvals.iter().map(|&v| snap_m(v)).collect::<Result<Vec<_>>>()?;
            for (m, midx) in group_by_label(&m_labels) {
                if m.twice().abs() > j.twice() {
                    return Err(Error::SectorAssignment { observable: "J_z", value: m.value() });
                }
                let w = &basis * columns(&mvecs, &midx);
                sectors.push((SpinLabel::new(j, m), &w * w.adjoint()));
            }
        }
        sectors.sort_by_key(|s| std::cmp::Reverse(s.0));
        let class_sum = |integer: bool| {
            sectors
                .iter()
                .filter(|(l, _)| l.j.is_integer() == integer)
                .fold(CMatrix::zeros(modes.dim(), modes.dim()), |acc, (_, p)| acc + p)
        };
        let classes = [class_sum(true), class_sum(false)];
        let sparse_sectors = sectors.iter().map(|(_, p)| Sparse::from_dense(p)).collect();
        let sparse_classes = [Sparse::from_dense(&classes[0]), Sparse::from_dense(&classes[1])];
        Ok(Self { modes: modes.clone(), wires: wires.to_vec(), sectors, classes, sparse_sectors, sparse_classes })
    }

    pub fn wires(&self) -> &[char] {
        &self.wires
    }

    /// `(label, projector)` pairs ordered by descending `(J, J_z)`.
    pub fn sectors(&self) -> &[(SpinLabel, CMatrix)] {
        &self.sectors
    }

    pub fn projector(&self, label: SpinLabel) -> Option<&CMatrix> {
        self.sectors.iter().find(|(l, _)| *l == label).map(|(_, p)| p)
    }

    pub fn class_projector(&self, class: SpinClass) -> &CMatrix {
        match class {
            SpinClass::Integer => &self.classes[0],
            SpinClass::HalfOddInteger => &self.classes[1],
        }
    }

    fn check(&self, modes: &ModeSet) -> Result<()> {
        if modes != &self.modes {
            return Err(Error::ModeSetMismatch);
        }
        Ok(())
    }

    /// Born decomposition of `state`; outcomes below 1e-14 are dropped.
    pub fn outcomes(&self, state: &StateVector) -> Result<Vec<MeasurementOutcome>> {
        self.check(state.modes())?;
        let mut out = Vec::new();
        for (label, p) in &self.sectors {
            let projected = state.apply(p);
            let prob = projected.norm().powi(2);
            if prob < DROP_BELOW {
                continue;
            }
            let post = projected.scale(Complex64::new(1.0 / prob.sqrt(), 0.0));
            out.push(MeasurementOutcome { label: *label, probability: prob, post_state: post });
        }
        Ok(out)
    }

    pub fn outcomes_density(&self, rho: &DensityMatrix) -> Result<Vec<DensityOutcome<SpinLabel>>> {
        self.check(rho.modes())?;
        Ok(self
            .sectors
            .iter()
            .zip(&self.sparse_sectors)
            .filter_map(|((label, _), p)| {
                project_density(rho, p).map(|(prob, post)| DensityOutcome {
                    label: *label,
                    probability: prob,
                    post_state: post,
                })
            })
            .collect())
    }

    pub fn measure<R: Rng + ?Sized>(&self, state: &StateVector, rng: &mut R) -> Result<MeasurementOutcome> {
        let outcomes = self.outcomes(state)?;
        let i = sample(outcomes.iter().map(|o| o.probability), rng);
        Ok(outcomes.into_iter().nth(i).expect("sampled index in range"))
    }

    pub fn measure_density<R: Rng + ?Sized>(
        &self,
        rho: &DensityMatrix,
        rng: &mut R,
    ) -> Result<DensityOutcome<SpinLabel>> {
        let outcomes = self.outcomes_density(rho)?;
        let i = sample(outcomes.iter().map(|o| o.probability), rng);
        Ok(outcomes.into_iter().nth(i).expect("sampled index in range"))
    }

    /// Integer versus half-odd-integer `J`, with the normalized post-state.
    pub fn class_outcomes(&self, state: &StateVector) -> Result<Vec<(SpinClass, f64, StateVector)>> {
        self.check(state.modes())?;
        let mut out = Vec::new();
        for class in [SpinClass::Integer, SpinClass::HalfOddInteger] {
            let projected = state.apply(self.class_projector(class));
            let prob = projected.norm().powi(2);
            if prob >= DROP_BELOW {
                out.push((class, prob, projected.scale(Complex64::new(1.0 / prob.sqrt(), 0.0))));
            }
        }
        Ok(out)
    }

    pub fn measure_class<R: Rng + ?Sized>(&self, state: &StateVector, rng: &mut R) -> Result<(SpinClass, StateVector)> {
        let outcomes = self.class_outcomes(state)?;
        let i = sample(outcomes.iter().map(|o| o.1), rng);
        let (class, _, post) = outcomes.into_iter().nth(i).expect("sampled index in range");
        Ok((class, post))
    }

    pub fn class_outcomes_density(&self, rho: &DensityMatrix) -> Result<Vec<DensityOutcome<SpinClass>>> {
        self.check(rho.modes())?;
        Ok([SpinClass::Integer, SpinClass::HalfOddInteger]
            .into_iter()
            .zip(&self.sparse_classes)
            .filter_map(|(class, p)| {
                project_density(rho, p).map(|(prob, post)| DensityOutcome {
                    label: class,
                    probability: prob,
                    post_state: post,
                })
            })
            .collect())
    }

    pub fn measure_class_density<R: Rng + ?Sized>(
        &self,
        rho: &DensityMatrix,
        rng: &mut R,
    ) -> Result<DensityOutcome<SpinClass>> {
        let outcomes = self.class_outcomes_density(rho)?;
        let i = sample(outcomes.iter().map(|o| o.probability), rng);
        Ok(outcomes.into_iter().nth(i).expect("sampled index in range"))
    }
}

fn project_density(rho: &DensityMatrix, p: &Sparse) -> Option<(f64, DensityMatrix)> {
    let projected = p.sandwich(rho.entries());
    let prob = projected.trace().re;
    (prob >= DROP_BELOW)
        .then(|| (prob, DensityMatrix::from_raw(rho.modes(), projected * Complex64::new(1.0 / prob, 0.0))))
}

/// Index drawn with the given (approximately normalized) weights.
fn sample<R: Rng + ?Sized>(weights: impl Iterator<Item = f64>, rng: &mut R) -> usize {
    let weights: Vec<f64> = weights.collect();
    let total: f64 = weights.iter().sum();
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    weights.len() - 1
}

pub fn spin_sectors(state: &StateVector, wires: &[char]) -> Result<Vec<MeasurementOutcome>> {
    SpinMeasurement::new(state.modes(), wires)?.outcomes(state)
}

pub fn measure_spin<R: Rng + ?Sized>(state: &StateVector, wires: &[char], rng: &mut R) -> Result<MeasurementOutcome> {
    SpinMeasurement::new(state.modes(), wires)?.measure(state, rng)
}

pub fn measure_spin_class<R: Rng + ?Sized>(
    state: &StateVector,
    wires: &[char],
    rng: &mut R,
) -> Result<(SpinClass, StateVector)> {
    SpinMeasurement::new(state.modes(), wires)?.measure_class(state, rng)
}
