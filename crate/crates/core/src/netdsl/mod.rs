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

//! Text format for passive networks whose elements depend on a parameter.
//!
//! ```text
//! # two-mode example
//! modes 2
//! bs 1 2 0.7*phi     # beam splitter on modes 1,2 with angle 0.7 phi
//! ps 1 0.3*phi       # phase shift on mode 1
//! ps 2 0.1*phi
//! ```
//!
//! Elements are listed in propagation order; mode indices are 1-based in the
//! text and 0-based in [`Element`].

mod expr;
mod parser;

use std::fmt;

use num_complex::Complex64;

pub use expr::{BinOp, Expr, Func};
pub use parser::parse_expr;

use crate::error::{Error, Result};
use crate::unitary::UnitaryMatrix;

#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    PhaseShifter { mode: usize, angle: Expr },
    BeamSplitter { modes: (usize, usize), angle: Expr },
}

impl Element {
    fn angle(&self) -> &Expr {
        match self {
            Element::PhaseShifter { angle, .. } | Element::BeamSplitter { angle, .. } => angle,
        }
    }

    fn matrix(&self, dim: usize, phi: f64) -> Result<UnitaryMatrix> {
        match self {
            Element::PhaseShifter { mode, angle } => {
                UnitaryMatrix::phase_shifter(dim, *mode, angle.eval(phi)?)
            }
            Element::BeamSplitter {
                modes: (a, b),
                angle,
            } => UnitaryMatrix::beam_splitter(dim, *a, *b, angle.eval(phi)?),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSpec {
    pub modes: usize,
    pub elements: Vec<Element>,
}

pub fn parse(source: &str) -> Result<NetworkSpec> {
    parser::parse_network(source)
}

/// Step used for central differences at `phi`.
pub fn derivative_step(phi: f64) -> f64 {
    1e-6f64.max(1e-6 * phi.abs())
}

impl NetworkSpec {
    pub fn depends_on_phi(&self) -> bool {
        self.elements.iter().any(|e| e.angle().depends_on_phi())
    }

    /// Network unitary at `phi`; each new element multiplies on the left.
    pub fn evaluate(&self, phi: f64) -> Result<UnitaryMatrix> {
        self.elements
            .iter()
            .try_fold(UnitaryMatrix::identity(self.modes)?, |acc, el| {
                el.matrix(self.modes, phi)?.multiply(&acc)
            })
    }

    /// Evaluates a network that must not depend on `phi` (fixed stages).
    pub fn evaluate_fixed(&self) -> Result<UnitaryMatrix> {
        if self.depends_on_phi() {
            return Err(Error::InvalidArgument(
                "fixed stage must not depend on phi".into(),
            ));
        }
        self.evaluate(0.0)
    }

    /// Central-difference derivative of entry `(row, col)` (0-based) with the
    /// default step.
    pub fn entry_derivative(&self, phi: f64, row: usize, col: usize) -> Result<Complex64> {
        self.entry_derivative_with_step(phi, row, col, derivative_step(phi))
    }

    pub fn entry_derivative_with_step(
        &self,
        phi: f64,
        row: usize,
        col: usize,
        h: f64,
    ) -> Result<Complex64> {
        if row >= self.modes || col >= self.modes {
            return Err(Error::InvalidArgument(format!(
                "entry ({row}, {col}) outside a {0}x{0} matrix",
                self.modes
            )));
        }
        if !(h > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "step must be positive, got {h}"
            )));
        }
        let plus = self.evaluate(phi + h)?.entry(row, col);
        let minus = self.evaluate(phi - h)?.entry(row, col);
        Ok((plus - minus) / (2.0 * h))
    }
}

impl fmt::Display for NetworkSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "modes {}", self.modes)?;
        for el in &self.elements {
            match el {
                Element::PhaseShifter { mode, angle } => writeln!(f, "ps {} {angle}", mode + 1)?,
                Element::BeamSplitter {
                    modes: (a, b),
                    angle,
                } => writeln!(f, "bs {} {} {angle}", a + 1, b + 1)?,
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for NetworkSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}
