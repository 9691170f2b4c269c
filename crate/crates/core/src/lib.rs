//! Meta-analysis of estimates of the economic impact of climate change.
//!
//! The crate takes a catalogue of published comparative-static impact
//! estimates and
//!
//! * fits eight parametric impact functions by study-weighted least squares
//!   and averages them by their likelihood ([`fit`]),
//! * completes sectoral breakdowns and downscales totals to countries
//!   ([`sector`], [`regional`]),
//! * translates level impacts into growth effects and accumulates empirical
//!   growth responses along a warming path ([`growth`]),
//! * prices all of these as a social cost of carbon ([`scc`]).
//!
//! Impacts are in percent of GDP throughout, negative for a loss, and
//! warming is in °C above pre-industrial.
//!
//! ```
//! use climeta::{data, fit::fit_all};
//!
//! let catalogue = data::catalogue();
//! let average = fit_all(&catalogue)?;
//! assert!(average.evaluate(2.5) < 0.0);
//! # Ok::<(), climeta::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod climate;
pub mod damage;
pub mod data;
pub mod error;
pub mod estimates;
pub mod fit;
pub mod growth;
pub mod optimize;
pub mod regional;
pub mod scc;
pub mod scenario;
pub mod sector;

pub use damage::{DamageCurve, DamageForm, DamageFunction};
pub use error::{Error, Result};
pub use estimates::{EstimateCatalogue, Method, PrimaryEstimate};
