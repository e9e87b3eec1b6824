//! The guide under `book/` is rendered by mdbook, which cannot build
//! listings that depend on a local crate. Each chapter is included here as
//! the docs of an empty module instead, so `cargo test --doc` compiles and
//! runs every listing against the real library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/comparisons.md")]
pub mod comparisons {}

#[doc = include_str!("../../../book/src/estimators.md")]
pub mod estimators {}

#[doc = include_str!("../../../book/src/noise.md")]
pub mod noise {}

#[doc = include_str!("../../../book/src/adaptive.md")]
pub mod adaptive {}

#[doc = include_str!("../../../book/src/bounds.md")]
pub mod bounds {}

#[doc = include_str!("../../../book/src/experiments.md")]
pub mod experiments {}

#[doc = include_str!("../../../book/src/configuration.md")]
pub mod configuration {}
