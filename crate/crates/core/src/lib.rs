//! Security-reliability trade-off of relay selection in cognitive radio.
//!
//! A secondary transmitter sends to a secondary destination over a licensed
//! band that spectrum sensing declared idle, optionally through decode-and-
//! forward relays, while an eavesdropper listens. This crate computes the
//! outage probability (OP) and intercept probability (IP) of direct
//! transmission, single-relay selection (SRS) and multi-relay selection
//! (MRS) in closed form ([`analytic`]), estimates them by Monte Carlo
//! ([`sim`], which also covers an artificial-noise baseline), and sweeps the
//! transmit SNR to trace IP-versus-OP curves ([`experiment`]).
//!
//! The numeric modules are generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the scalar to `f64`, which is what the sweep and CLI
//! layers use.

pub mod analytic;
pub mod error;
pub mod experiment;
pub mod model;
mod scalar;
pub mod sim;
pub mod special;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use model::Scheme;

pub type SystemParams = model::SystemParams<f64>;
pub type LinkVariances = model::LinkVariances<f64>;
pub type SensingPosterior = model::SensingPosterior<f64>;
pub type Thresholds = model::Thresholds<f64>;
pub type AnalyticResult = analytic::AnalyticResult<f64>;
pub type ChannelRealization = sim::ChannelRealization<f64>;
pub type SimResult = sim::SimResult<f64>;

pub type SystemParamsF32 = model::SystemParams<f32>;
pub type AnalyticResultF32 = analytic::AnalyticResult<f32>;
