//! Millimeter-wave acoustic filter toolkit.
//!
//! Resonators follow a modified Butterworth-Van Dyke (MBVD) circuit with
//! routing parasitics ([`mbvd`]). They are cascaded into series/shunt
//! ladders ([`network`]), scored ([`metrics`]), fitted to measured
//! admittance ([`fitting`]) and tuned against targets ([`synthesis`]).
//! [`io`] holds the file formats.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curve;
pub mod error;
pub mod fitting;
pub mod io;
pub mod mbvd;
pub mod metrics;
pub mod network;
pub mod optimize;
pub mod synthesis;

pub use curve::ComplexCurve;
pub use error::{Error, Result};
pub use mbvd::MbvdParams;
pub use metrics::FilterMetrics;
pub use network::{LadderDesign, SParameterBlock};
