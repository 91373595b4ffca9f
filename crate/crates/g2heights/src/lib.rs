//! Arithmetic of the quintic genus-2 family `y^2 = x^5 + a2 x^3 + a3 x^2 + a4 x + a5`.
//!
//! The crate is organised bottom-up:
//!
//! * [`family`] – curves, discriminants, complex roots and the distinguished root pair;
//! * [`points`] – sieved rational point search;
//! * [`kummer`] – exact Kummer-surface coordinates, duplication and `P ± Q`;
//! * [`heights`] – naive heights, canonical heights by telescoping, pairings;
//! * [`analytic`] – periods, Siegel reduction, theta functions and local heights;
//! * [`gap`] – the small/medium/large partition and gap-principle audits;
//! * [`packing`] – Kabatiansky–Levenshtein exponents and their optimisation.
//!
//! Data-parallel work (family enumeration, point search, corpora) goes through
//! [`exec::Execution`], which uses rayon when the `parallel` feature is on and
//! degrades to plain iteration otherwise.

pub mod analytic;
pub mod calibration;
pub mod constants;
pub mod error;
pub mod exec;
pub mod factor;
pub mod family;
pub mod gap;
pub mod heights;
pub mod interval;
pub mod kummer;
pub mod packing;
pub mod points;

pub use error::{Error, Result};
pub use exec::Execution;
pub use family::QuinticCurve;
pub use kummer::KummerCoords;
pub use points::CurvePoint;
