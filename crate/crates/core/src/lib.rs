//! Link-level DVB-S2 physical-layer simulator.
//!
//! The crate models a complete transmit → impairment → channel → receive chain
//! for short (16200-bit) DVB-S2 frames and measures how oscillator discipline
//! (a GPS-disciplined reference versus free-running internal oscillators)
//! changes data-aided synchronization performance over an emulated LEO link.
//!
//! The building blocks are:
//!
//! - [`framing`]: bit bursts, constellation mapping, physical-layer scrambling,
//!   PLHEADER/pilot insertion and root-raised-cosine pulse shaping.
//! - [`impairments`]: oscillator model, carrier/sampling offsets, phase noise,
//!   AWGN, band-limited interferer and GPSDO discipline.
//! - [`channel`]: geometric Doppler, NTN-TDL-C tapped delay line with a Rician
//!   LOS tap, shadowing and SNR bookkeeping.
//! - [`receiver`]: the two-stage data-aided synchronization chain (AGC, matched
//!   filter, Gardner timing loop, SOF frame sync, coarse CFO + FLL, pilot-based
//!   fine frequency/phase, descrambling, hard demapping).
//! - [`metrics`]: BER, FER, SNR estimation, normalized performance gain.
//! - [`harness`]: Monte Carlo scenario runner and report emission.
//!
//! Runnable walkthroughs of each capability live in the crate's `examples/`
//! directory; `dvbs2-sim run` drives the full scenario matrix.

pub mod channel;
pub mod dsp;
pub mod error;
pub mod framing;
pub mod harness;
pub mod impairments;
pub mod iq;
pub mod metrics;
pub mod receiver;

pub use error::{Error, Result};
pub use iq::IqBlock;
pub use num_complex::Complex64;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
