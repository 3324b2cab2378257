//! Single-particle tight-binding problem of the odd-site dimerized chain.
//!
//! Sites are numbered `1..=2L+1`. The bond between sites `2m-1` and `2m`
//! carries `t'` and the bond between `2m` and `2m+1` carries `t`. The
//! Hamiltonian is spin independent, so one spinless matrix is stored and
//! every level is two-fold degenerate in spin.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Spin degeneracy of every single-particle level.
pub const SPIN_DEGENERACY: usize = 2;

/// Chain geometry and hopping amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WireParams {
    num_sites: usize,
    t: f64,
    t_prime: f64,
}

impl WireParams {
    pub fn new(num_sites: usize, t: f64, t_prime: f64) -> Result<Self> {
        if num_sites.is_multiple_of(2) {
            return Err(Error::EvenSites(num_sites));
        }
        if num_sites < 3 {
            return Err(Error::TooFewSites(num_sites));
        }
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::InvalidHopping(format!("t must be finite and > 0 (got {t})")));
        }
        if !(t_prime.is_finite() && t_prime >= 0.0) {
            return Err(Error::InvalidHopping(format!("t' must be finite and >= 0 (got {t_prime})")));
        }
        Ok(Self { num_sites, t, t_prime })
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    /// `L` in `num_sites = 2L + 1`.
    pub fn half_length(&self) -> usize {
        (self.num_sites - 1) / 2
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn t_prime(&self) -> f64 {
        self.t_prime
    }

    pub fn gap_closed(&self) -> bool {
        self.t == self.t_prime
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BandLabel {
    Valence(usize),
    ZeroMode,
    Conduction(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingleParticleLevel {
    pub energy: f64,
    /// Site amplitudes, index 0 is site 1. The Hamiltonian is real, so real
    /// amplitudes suffice.
    pub amplitudes: Vec<f64>,
    pub band: BandLabel,
}

impl SingleParticleLevel {
    pub fn density(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a * a).collect()
    }
}

/// The zero mode plus a flag raised when `t == t'` and the mode is no
/// longer localized at an edge.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroMode {
    pub level: SingleParticleLevel,
    pub delocalized: bool,
}

pub fn build_hamiltonian(params: &WireParams) -> DMatrix<f64> {
    let n = params.num_sites;
    let mut h = DMatrix::zeros(n, n);
    // zero-based index i joins site i+1 and site i+2
    for i in 0..n - 1 {
        let hop = if (i + 1) % 2 == 1 { params.t_prime } else { params.t };
        h[(i, i + 1)] = hop;
        h[(i + 1, i)] = hop;
    }
    h
}

/// Closed-form band energy for momentum label `k` in `1..=L` (positive branch).
pub fn band_energy(params: &WireParams, k: usize) -> f64 {
    let (t, tp) = (params.t, params.t_prime);
    let l = params.half_length() as f64;
    let c = (PI * k as f64 / (2.0 * l + 2.0)).cos();
    ((t - tp).powi(2) + 4.0 * t * tp * c * c).sqrt()
}

/// All `2L+1` energies from the closed form, ascending.
pub fn analytic_spectrum(params: &WireParams) -> Vec<f64> {
    let l = params.half_length();
    let mut out = Vec::with_capacity(params.num_sites);
    out.extend((1..=l).map(|k| -band_energy(params, k)));
    out.push(0.0);
    out.extend((1..=l).rev().map(|k| band_energy(params, k)));
    out.sort_by(f64::total_cmp);
    out
}

/// Smallest nonzero |ε| of the finite chain. Approaches `|t - t'|` (half the
/// bulk gap) from above as `L` grows.
pub fn band_gap(params: &WireParams) -> f64 {
    (1..=params.half_length()).map(|k| band_energy(params, k)).fold(f64::INFINITY, f64::min)
}

/// Eigenvalues of the dense Hamiltonian, ascending.
pub fn numerical_spectrum(params: &WireParams) -> Vec<f64> {
    let mut vals: Vec<f64> = SymmetricEigen::new(build_hamiltonian(params)).eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Numerically diagonalized levels, ascending in energy; near-degenerate
/// levels are ordered by ascending site-1 amplitude. Each eigenvector's sign
/// is fixed so its first non-negligible amplitude is positive.
pub fn numerical_levels(params: &WireParams) -> Vec<SingleParticleLevel> {
    let h = build_hamiltonian(params);
    let scale = h.amax().max(1.0);
    let eig = SymmetricEigen::new(h);
    let n = params.num_sites;
    let mut levels: Vec<(f64, Vec<f64>)> = (0..n)
        .map(|c| {
            let mut v: Vec<f64> = eig.eigenvectors.column(c).iter().copied().collect();
            if let Some(first) = v.iter().find(|x| x.abs() > 1e-12).copied() {
                if first < 0.0 {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
            }
            (eig.eigenvalues[c], v)
        })
        .collect();
    levels.sort_by(|a, b| a.0.total_cmp(&b.0));

    let tol = 1e-10 * scale;
    let mut start = 0;
    while start < levels.len() {
        let mut end = start + 1;
        while end < levels.len() && levels[end].0 - levels[end - 1].0 <= tol {
            end += 1;
        }
        levels[start..end].sort_by(|a, b| a.1[0].total_cmp(&b.1[0]));
        start = end;
    }

    let l = params.half_length();
    levels
        .into_iter()
        .enumerate()
        .map(|(i, (energy, amplitudes))| {
            let band = match i.cmp(&l) {
                std::cmp::Ordering::Less => BandLabel::Valence(i + 1),
                std::cmp::Ordering::Equal => BandLabel::ZeroMode,
                std::cmp::Ordering::Greater => BandLabel::Conduction(2 * l + 1 - i),
            };
            SingleParticleLevel { energy, amplitudes, band }
        })
        .collect()
}

/// Closed-form zero mode: zero on even sites, `(-t'/t)^n` on site `2n+1`.
pub fn zero_mode(params: &WireParams) -> ZeroMode {
    let l = params.half_length();
    let r = params.t_prime / params.t;
    let mut amplitudes = vec![0.0; params.num_sites];
    for n in 0..=l {
        let density = if r == 1.0 {
            1.0 / (l as f64 + 1.0)
        } else if r < 1.0 {
            r.powi(2 * n as i32) * (1.0 - r * r) / (1.0 - r.powi(2 * l as i32 + 2))
        } else {
            // rewritten in 1/r so large chains with t' > t do not overflow
            let s = 1.0 / r;
            s.powi(2 * (l - n) as i32) * (1.0 - s * s) / (1.0 - s.powi(2 * l as i32 + 2))
        };
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        amplitudes[2 * n] = sign * density.sqrt();
    }
    ZeroMode {
        level: SingleParticleLevel { energy: 0.0, amplitudes, band: BandLabel::ZeroMode },
        delocalized: params.gap_closed(),
    }
}
