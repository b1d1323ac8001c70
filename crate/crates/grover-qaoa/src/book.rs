//! Doc-tests for the guide: every fenced Rust block in `book/src` runs as
//! part of `cargo test`, so the book can never drift from the API.

#[doc = include_str!("../../../book/src/introduction.md")]
mod introduction {}

#[doc = include_str!("../../../book/src/characteristic-functions.md")]
mod characteristic_functions {}

#[doc = include_str!("../../../book/src/ensemble-expectation.md")]
mod ensemble_expectation {}

#[doc = include_str!("../../../book/src/problems.md")]
mod problems {}

#[doc = include_str!("../../../book/src/simulator.md")]
mod simulator {}

#[doc = include_str!("../../../book/src/optimization.md")]
mod optimization {}

#[doc = include_str!("../../../book/src/experiments.md")]
mod experiments {}
