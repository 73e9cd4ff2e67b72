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

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Asin,
    Exp,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 6] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Asin,
        Func::Exp,
        Func::Sqrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Asin => "asin",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    fn apply(self, x: f64) -> Result<f64> {
        match self {
            Func::Sin => Ok(x.sin()),
            Func::Cos => Ok(x.cos()),
            Func::Tan => Ok(x.tan()),
            Func::Asin if (-1.0..=1.0).contains(&x) => Ok(x.asin()),
            Func::Asin => Err(Error::Domain(format!("asin({x}) outside [-1, 1]"))),
            Func::Exp => Ok(x.exp()),
            Func::Sqrt if x >= 0.0 => Ok(x.sqrt()),
            Func::Sqrt => Err(Error::Domain(format!("sqrt({x}) of a negative number"))),
        }
    }
}

/// Real-valued scalar expression in the network parameter `phi`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Phi,
    Pi,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn eval(&self, phi: f64) -> Result<f64> {
        let v = match self {
            Expr::Num(x) => *x,
            Expr::Phi => phi,
            Expr::Pi => std::f64::consts::PI,
            Expr::Neg(e) => -e.eval(phi)?,
            Expr::Binary(op, a, b) => {
                let (x, y) = (a.eval(phi)?, b.eval(phi)?);
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div if y == 0.0 => {
                        return Err(Error::Domain(format!("division by zero at phi = {phi}")))
                    }
                    BinOp::Div => x / y,
                }
            }
            Expr::Call(f, e) => f.apply(e.eval(phi)?)?,
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Domain(format!(
                "non-finite value in `{self}` at phi = {phi}"
            )))
        }
    }

    pub fn depends_on_phi(&self) -> bool {
        match self {
            Expr::Phi => true,
            Expr::Num(_) | Expr::Pi => false,
            Expr::Neg(e) | Expr::Call(_, e) => e.depends_on_phi(),
            Expr::Binary(_, a, b) => a.depends_on_phi() || b.depends_on_phi(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(op, ..) => op.precedence(),
            Expr::Neg(_) => 3,
            Expr::Num(x) if x.is_sign_negative() => 0,
            _ => 4,
        }
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // shortest representation that parses back to the same f64
            Expr::Num(x) if x.is_sign_negative() => write!(f, "(-{})", -x),
            Expr::Num(x) => write!(f, "{x}"),
            Expr::Phi => f.write_str("phi"),
            Expr::Pi => f.write_str("pi"),
            Expr::Neg(e) => {
                f.write_str("-")?;
                write_child(f, e, e.precedence() < 3)
            }
            Expr::Binary(op, a, b) => {
                let p = op.precedence();
                write_child(f, a, a.precedence() < p)?;
                write!(f, " {} ", op.symbol())?;
                // operators are left-associative
                write_child(f, b, b.precedence() <= p)
            }
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_errors() {
        let div = Expr::binary(BinOp::Div, Expr::Num(1.0), Expr::Phi);
        assert!(matches!(div.eval(0.0), Err(Error::Domain(_))));
        assert_eq!(div.eval(4.0).unwrap(), 0.25);
        let root = Expr::Call(Func::Sqrt, Box::new(Expr::Phi));
        assert!(root.eval(-1.0).is_err());
        let asin = Expr::Call(Func::Asin, Box::new(Expr::Phi));
        assert!(asin.eval(1.5).is_err());
        let blowup = Expr::Call(Func::Exp, Box::new(Expr::Phi));
        assert!(blowup.eval(1e4).is_err());
    }

    #[test]
    fn printing_respects_precedence() {
        let e = Expr::binary(
            BinOp::Sub,
            Expr::Phi,
            Expr::binary(BinOp::Sub, Expr::Num(1.0), Expr::Pi),
        );
        assert_eq!(e.to_string(), "phi - (1 - pi)");
        let e = Expr::Neg(Box::new(Expr::binary(
            BinOp::Mul,
            Expr::Num(2.0),
            Expr::Phi,
        )));
        assert_eq!(e.to_string(), "-(2 * phi)");
    }
}
