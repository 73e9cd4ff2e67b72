// Copyright 2026 The hsmetro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Squeezed-probe homodyne estimation of a parameter spread over a passive
//! linear interferometer.
//!
//! The pipeline is: single-mode squeezed vacuum -> fixed stage `V_in` ->
//! parametrized network `U(phi)` -> stage `V_out` -> homodyne detection on
//! output mode 1. One of the two stages is adapted from a coarse estimate so
//! that nearly all photons reach the detector.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod adaptive;
pub mod cli;
pub mod config;
pub mod error;
pub mod estimator;
pub mod example;
pub mod gaussian;
pub mod metrology;
pub mod netdsl;
pub mod report;
pub mod rng;
pub mod unitary;

pub use error::{Error, Result};
