//! Rotation sets and localized entropy for potentials over one-sided
//! subshifts of finite type.
//!
//! The crate is `no_std` (it needs `alloc`). Everything is pure computation:
//! file formats, reports and the command line live in the `rotset` crate.
//!
//! Layout:
//! - [`sft`]: shift spaces, words, recoding to higher block presentations,
//!   elementary periodic orbits, invariant subgraphs.
//! - [`potential`]: locally constant potentials, oracle potentials with a
//!   modulus of continuity and their locally constant approximations.
//! - [`perron`]: Perron–Frobenius eigendata with Collatz–Wielandt enclosures.
//! - [`thermo`]: transfer matrices, Markov equilibrium states, entropy and
//!   pressure.
//! - [`hull`] and [`rotation`]: convex hulls and rotation polytopes.
//! - [`entropy`]: the sandwich algorithm for the localized entropy `H(w)`.
//! - [`boundary`]: the four-symbol example whose localized entropy jumps at
//!   an exposed boundary point.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod boundary;
pub mod cycles;
pub mod entropy;
mod error;
pub mod hull;
pub mod linalg;
pub(crate) mod math;
pub mod oracles;
pub mod perron;
pub mod potential;
pub mod rotation;
pub mod sft;
pub mod thermo;

pub use error::{Error, Result};
pub use linalg::SparseMatrix;
pub use perron::{perron, PerronData};
pub use potential::{LcPotential, OracleValue, PotentialOracle};
pub use rotation::RotationPolytope;
pub use sft::{Limits, PeriodicOrbit, Ratio, Sft, Symbol, Word, WordSet};
pub use thermo::{Enclosure, EquilibriumRecord, MarkovMeasure};
