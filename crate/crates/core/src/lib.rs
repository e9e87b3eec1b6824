//! Localizing an ideal point from random paired comparisons.
//!
//! A user is modelled as a point `x` in `R^n`. Each comparison shows the
//! user two items `p`, `q` and records which one is closer to `x`. That bit
//! is the side of the perpendicular bisector of `(p, q)` on which `x` lies,
//! so a batch of comparisons is a set of one-bit measurements of `x`
//! against random affine hyperplanes.
//!
//! The crate is organised the way the problem is:
//!
//! - [`model`]: landmark pairs, normalized comparison frames, sign vectors.
//! - [`noise`]: pre-quantization Gaussian noise and flip models.
//! - [`estimators`]: the min-norm feasibility program and the homogeneous
//!   ν-SVM relaxation, with their own QP and LP solvers.
//! - [`adaptive`]: multi-stage re-centering, including the fixed-catalog
//!   variant.
//! - [`bounds`]: closed-form sample-complexity and error bounds.
//! - [`oracles`]: Monte Carlo ground truth for the probability bounds.
//! - [`harness`]: experiment configuration, trial orchestration and CSV
//!   output used by the `pairloc` binary.
//!
//! ```
//! use pairloc::model::{generate_frame, observe};
//! use pairloc::estimators::estimate_noise_free;
//!
//! let x = [0.3, -0.4];
//! let frame = generate_frame(400, 2, &[0.0, 0.0], 1.0, 7).unwrap();
//! let signs = observe(&x, &frame).unwrap();
//! let est = estimate_noise_free(&frame, &signs, 1.0, 1e-8).unwrap();
//! let err = pairloc::linalg::distance(&est.x_hat, &x);
//! assert!(err < 0.05);
//! ```

pub mod adaptive;
pub mod bounds;
pub mod error;
pub mod estimators;
pub mod harness;
pub mod linalg;
pub mod model;
pub mod noise;
pub mod oracles;
pub mod seed;

pub use error::{Error, Result};
