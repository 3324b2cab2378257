//! Edge modes of odd-site dimerized chains and spin teleportation between
//! them, computed exactly in small Fock spaces.
//!
//! * [`lattice`] builds the single-particle chain and its mid-gap zero mode.
//! * [`fock`] is the occupation-number engine for the edge modes.
//! * [`hubbard`] couples two edge modes and finds the singlet ground state.
//! * [`gates`], [`measure`] and [`relax`] are the operations the protocol uses.
//! * [`protocol`] runs teleportation in its electronic, cold-atom and
//!   mixed-resource forms.

pub mod csv;
pub mod error;
pub mod fock;
pub mod gates;
pub mod hubbard;
pub mod lattice;
pub mod linalg;
pub mod measure;
pub mod protocol;
pub mod relax;

pub use error::{Error, Result};
pub use fock::{DensityMatrix, HermitianOperator, Mode, ModeSet, Observable, Spin, StateVector};
pub use lattice::WireParams;
pub use measure::{HalfInt, SpinClass, SpinLabel};
pub use num_complex::Complex64;
pub use protocol::{MixedResource, SpinAmplitudes, TeleportReport, Teleporter, TrialOutcome, Variant};
