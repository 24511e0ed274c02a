//! Certification of single-photon sources from auto-correlation click data.
//!
//! A source is sent onto a beamsplitter followed by two click/no-click
//! detectors. From the four outcome probabilities (or counts) this crate
//! derives:
//!
//! * lower bounds on the single-photon weight `P₁` ([`benchmark`]),
//! * witnesses and lower bounds on the Wigner negativity ([`wigner`]),
//! * Hoeffding confidence intervals and p-values for finite data ([`stats`]).
//!
//! The exact forward model of the apparatus ([`detection`]) acts both as a
//! data generator and as the reference the bounds are checked against.
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the
//! command-line front end live in the `photon-certify` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
mod fmath;

pub mod benchmark;
pub mod detection;
pub mod quadrature;
pub mod state;
pub mod stats;
pub mod timetag;
pub mod wigner;

pub use benchmark::{ApparatusBounds, PolytopePoint};
pub use detection::{ApparatusParams, ClickCounts, ClickProbabilities, EffectiveParams};
pub use error::{Error, Result};
pub use state::{MultimodeProductState, PhotonNumberDistribution, DEFAULT_N_MAX};
pub use stats::{ConfidenceQuery, StatReport};
pub use timetag::{Channel, IngestConfig, TimeTagEvent};
pub use wigner::NegativityBound;
