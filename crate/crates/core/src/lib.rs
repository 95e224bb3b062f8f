//! Plug-in entropy estimation for discrete distributions with finite-sample
//! error certificates.
//!
//! The plug-in estimate `H(μ̂_n)` of a distribution on the positive integers can
//! carry no data-driven accuracy guarantee without prior assumptions. Under an
//! information-moment assumption `H_α(μ) = Σ μ(i)|log μ(i)|^α ≤ h` for some
//! `α > 1`, the deviation `|H(μ) − H(μ̂_n)|` is controlled by the `ℓ1` distance
//! between `μ` and `μ̂_n`, which in turn has a fully empirical high-probability
//! bound. This crate assembles that certificate and the surrounding toolkit:
//!
//! - [`dist`]: distributions, sampling, norms, divergences and entropies;
//! - [`moments`]: information moments `H_α` and their extremal values;
//! - [`bounds`]: deviation bounds, expected-rate curves, minimax envelopes and
//!   the adversarial constructions behind the lower bounds;
//! - [`certify`]: end-to-end certificates from sample or count files;
//! - [`lab`]: the experiment harness behind the `entcert` command-line tool.
//!
//! ```
//! use entcert::certify::{certificate, plug_in_entropy};
//! use entcert::dist::EmpiricalMeasure;
//!
//! let emp = EmpiricalMeasure::from_counts([(1, 60), (2, 30), (3, 10)]).unwrap();
//! let cert = certificate(&emp, 2.0, 3.0, 0.05).unwrap();
//! assert_eq!(cert.estimate, plug_in_entropy(&emp));
//! assert!(cert.radius > 0.0);
//! ```

#![forbid(unsafe_code)]

#[cfg(test)]
macro_rules! assert_close {
    ($a:expr, $b:expr, $tol:expr) => {{
        let (a, b): (f64, f64) = ($a, $b);
        assert!((a - b).abs() <= $tol, "{} vs {} (tol {})", a, b, $tol);
    }};
}

pub mod bounds;
pub mod certify;
pub mod dist;
mod error;
pub mod lab;
pub mod moments;
pub mod numfmt;
mod optimize;

pub use error::{Error, Result};
