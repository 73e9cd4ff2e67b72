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

//! Line-oriented network parser with a recursive-descent expression grammar:
//!
//! ```text
//! expr    := term (("+" | "-") term)*
//! term    := unary (("*" | "/") unary)*
//! unary   := "-" unary | primary
//! primary := number | "phi" | "pi" | func "(" expr ")" | "(" expr ")"
//! ```

use super::expr::{BinOp, Expr, Func};
use super::{Element, NetworkSpec};
use crate::error::{Error, Result};
use crate::unitary::MAX_MODES;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str, line: usize) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        let column = i + 1;
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() || ch == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let s: String = chars[start..i].iter().collect();
            let v = s
                .parse::<f64>()
                .map_err(|_| syntax(line, column, format!("malformed number `{s}`")))?;
            out.push(Token {
                tok: Tok::Num(v),
                column,
            });
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                column,
            });
        } else {
            let tok = match ch {
                '+' | '-' | '*' | '/' => Tok::Op(ch),
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => return Err(syntax(line, column, format!("unexpected character `{ch}`"))),
            };
            out.push(Token { tok, column });
            i += 1;
        }
    }
    Ok(out)
}

struct ExprParser<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    end_column: usize,
}

impl<'a> ExprParser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn column(&self) -> usize {
        self.toks
            .get(self.pos)
            .map_or(self.end_column, |t| t.column)
    }

    fn err(&self, message: impl Into<String>) -> Error {
        syntax(self.line, self.column(), message)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek() {
            let op = if *c == '+' { BinOp::Add } else { BinOp::Sub };
            self.pos += 1;
            lhs = Expr::binary(op, lhs, self.term()?);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek() {
            let op = if *c == '*' { BinOp::Mul } else { BinOp::Div };
            self.pos += 1;
            lhs = Expr::binary(op, lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if let Some(Tok::Op('-')) = self.peek() {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr> {
        let tok = self
            .peek()
            .cloned()
            .ok_or_else(|| self.err("expected an expression"))?;
        match tok {
            Tok::Num(v) => {
                self.pos += 1;
                Ok(Expr::Num(v))
            }
            Tok::LParen => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_rparen()?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let at = self.column();
                self.pos += 1;
                match name.as_str() {
                    "phi" => Ok(Expr::Phi),
                    "pi" => Ok(Expr::Pi),
                    _ => {
                        let func = Func::from_name(&name).ok_or_else(|| {
                            syntax(self.line, at, format!("unknown identifier `{name}`"))
                        })?;
                        if self.peek() != Some(&Tok::LParen) {
                            return Err(self.err(format!("expected `(` after `{name}`")));
                        }
                        self.pos += 1;
                        let arg = self.expr()?;
                        self.expect_rparen()?;
                        Ok(Expr::Call(func, Box::new(arg)))
                    }
                }
            }
            Tok::Op(c) => Err(self.err(format!("unexpected operator `{c}`"))),
            Tok::RParen => Err(self.err("unexpected `)`")),
        }
    }

    fn expect_rparen(&mut self) -> Result<()> {
        if self.peek() == Some(&Tok::RParen) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err("expected `)`"))
        }
    }
}

/// Parses a standalone expression (used for single-line inputs and tests).
pub fn parse_expr(text: &str) -> Result<Expr> {
    let toks = lex(text, 1)?;
    parse_expr_tokens(&toks, 1, text.chars().count() + 1)
}

fn parse_expr_tokens(toks: &[Token], line: usize, end_column: usize) -> Result<Expr> {
    let mut p = ExprParser {
        toks,
        pos: 0,
        line,
        end_column,
    };
    let e = p.expr()?;
    if p.pos != toks.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

fn mode_index(tok: Option<&Token>, line: usize, end: usize, modes: usize) -> Result<usize> {
    let tok = tok.ok_or_else(|| syntax(line, end, "expected a mode index"))?;
    match tok.tok {
        Tok::Num(v) if v.fract() == 0.0 && v >= 0.0 => {
            let mode = v as usize;
            if mode < 1 || mode > modes {
                Err(Error::ModeOutOfRange { line, mode, modes })
            } else {
                Ok(mode - 1)
            }
        }
        _ => Err(syntax(
            line,
            tok.column,
            "mode index must be a positive integer",
        )),
    }
}

pub(super) fn parse_network(source: &str) -> Result<NetworkSpec> {
    let mut modes: Option<usize> = None;
    let mut elements = Vec::new();

    for (idx, raw) in source.lines().enumerate() {
        let line = idx + 1;
        let text = raw.split('#').next().unwrap_or("");
        let toks = lex(text, line)?;
        let Some(first) = toks.first() else { continue };
        let end = text.chars().count() + 1;

        let keyword = match &first.tok {
            Tok::Ident(k) => k.as_str(),
            _ => return Err(syntax(line, first.column, "expected `modes`, `ps` or `bs`")),
        };

        match (keyword, modes) {
            ("modes", None) => {
                let m = match toks.get(1).map(|t| &t.tok) {
                    Some(Tok::Num(v)) if v.fract() == 0.0 && *v >= 1.0 => *v as usize,
                    _ => {
                        let col = toks.get(1).map_or(end, |t| t.column);
                        return Err(syntax(line, col, "`modes` expects a positive integer"));
                    }
                };
                if m > MAX_MODES {
                    return Err(syntax(
                        line,
                        toks[1].column,
                        format!("at most {MAX_MODES} modes"),
                    ));
                }
                if let Some(extra) = toks.get(2) {
                    return Err(syntax(line, extra.column, "unexpected trailing input"));
                }
                modes = Some(m);
            }
            ("modes", Some(_)) => {
                return Err(syntax(line, first.column, "duplicate `modes` header"));
            }
            ("ps" | "bs", None) => return Err(Error::MissingModes),
            ("ps", Some(m)) => {
                let mode = mode_index(toks.get(1), line, end, m)?;
                let angle = parse_expr_tokens(&toks[2..], line, end)?;
                elements.push(Element::PhaseShifter { mode, angle });
            }
            ("bs", Some(m)) => {
                let a = mode_index(toks.get(1), line, end, m)?;
                let b = mode_index(toks.get(2), line, end, m)?;
                if a == b {
                    return Err(syntax(
                        line,
                        toks[2].column,
                        "beam splitter must couple two distinct modes",
                    ));
                }
                let angle = parse_expr_tokens(&toks[3.min(toks.len())..], line, end)?;
                elements.push(Element::BeamSplitter {
                    modes: (a, b),
                    angle,
                });
            }
            (other, _) => {
                return Err(syntax(
                    line,
                    first.column,
                    format!("unknown element `{other}`"),
                ));
            }
        }
    }

    let modes = modes.ok_or(Error::MissingModes)?;
    Ok(NetworkSpec { modes, elements })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_unary_minus() {
        let e = parse_expr("-2*3 + 4/2 - 1").unwrap();
        assert_eq!(e.eval(0.0).unwrap(), -6.0 + 2.0 - 1.0);
        let e = parse_expr("2 - 3 - 4").unwrap();
        assert_eq!(e.eval(0.0).unwrap(), -5.0);
        let e = parse_expr("8 / 4 / 2").unwrap();
        assert_eq!(e.eval(0.0).unwrap(), 1.0);
        let e = parse_expr("--phi").unwrap();
        assert_eq!(e.eval(1.5).unwrap(), 1.5);
    }

    #[test]
    fn functions_and_constants() {
        let e = parse_expr("sin(pi/2) + cos(0) + sqrt(4) + exp(0) + asin(1) + tan(0)").unwrap();
        let expected = 1.0 + 1.0 + 2.0 + 1.0 + std::f64::consts::FRAC_PI_2;
        assert!((e.eval(0.0).unwrap() - expected).abs() < 1e-15);
        assert_eq!(parse_expr("1.5e-3").unwrap(), Expr::Num(1.5e-3));
    }

    #[test]
    fn expression_error_positions() {
        match parse_expr("1 + * 2") {
            Err(Error::Syntax {
                line: 1, column: 5, ..
            }) => {}
            other => panic!("{other:?}"),
        }
        match parse_expr("sin(phi") {
            Err(Error::Syntax { column: 8, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_expr("foo(1)"),
            Err(Error::Syntax { column: 1, .. })
        ));
        assert!(matches!(
            parse_expr("1 2"),
            Err(Error::Syntax { column: 3, .. })
        ));
        assert!(matches!(
            parse_expr("1 $ 2"),
            Err(Error::Syntax { column: 3, .. })
        ));
    }

    #[test]
    fn network_errors() {
        assert_eq!(parse_network("bs 1 2 0.1"), Err(Error::MissingModes));
        assert_eq!(parse_network("# nothing\n"), Err(Error::MissingModes));
        assert_eq!(
            parse_network("modes 2\nps 3 0.1"),
            Err(Error::ModeOutOfRange {
                line: 2,
                mode: 3,
                modes: 2
            })
        );
        assert!(matches!(
            parse_network("modes 2\nbs 1 1 0.1"),
            Err(Error::Syntax {
                line: 2,
                column: 6,
                ..
            })
        ));
        assert!(matches!(
            parse_network("modes 2\nbs 1 2"),
            Err(Error::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_network("modes 2\nmirror 1"),
            Err(Error::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_network("modes 2\nmodes 3"),
            Err(Error::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_network("modes 0"),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_network("modes 2\nps 1.5 phi"),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn comments_and_blank_lines() {
        let spec = parse_network("# header\n\nmodes 3  # three\nps 2 phi # shift\n").unwrap();
        assert_eq!(spec.modes, 3);
        assert_eq!(spec.elements.len(), 1);
    }
}
