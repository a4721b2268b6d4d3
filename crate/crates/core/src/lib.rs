//! Block error rate analysis of short-packet two-way amplify-and-forward
//! relaying with two-slot and three-slot exchange schedules.
//!
//! * [`specfun`]: Q-function, `K1`, Lambert W, adaptive quadrature, Bessel moments.
//! * [`channel`]: geometry, average SNRs, per-endpoint SNR parameters.
//! * [`fbl`]: finite-blocklength error kernel and its linear surrogate.
//! * [`analytic`]: average BLER, high-SNR optimisation, scheme selection.
//! * [`mc`]: seeded Monte Carlo reference estimates.

// `!(x > 0.0)` is used deliberately so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod channel;
mod error;
pub mod exec;
pub mod fbl;
pub mod mc;
pub mod specfun;

pub use analytic::{BlerReport, Method};
pub use channel::{AvgLinkSnr, Endpoint, PowerSplit, ScenarioConfig, Scheme, SchemeParams, SnrForm};
pub use error::{Error, Result};
pub use exec::Execution;
pub use fbl::PacketConfig;
pub use mc::{McEstimate, McSettings};
