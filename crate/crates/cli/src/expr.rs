//! Rational-map expression grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := base ('^' uint)?
//! base   := '-' base | literal | 'z' | '(' expr ')'
//! ```
//!
//! Literals are real or imaginary numbers (`3`, `-2.5`, `i`, `2i`,
//! `1.5e-3`); a full complex constant like `3+2i` parses through the
//! ordinary binary operators. Implicit multiplication is not supported.

use num_complex::Complex64;
use std::fmt;

use halfplane_iso_core::ratfunc::{Polynomial, RationalMap};
use halfplane_iso_core::{Config, Error as CoreError};

/// Syntax or lowering error with the byte position it was detected at.
#[derive(Clone, Debug)]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at byte {}: {}", self.pos, self.message)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(Complex64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq)]
enum TokenKind {
    Number { value: f64, imaginary: bool, integral: bool },
    Var,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    kind: TokenKind,
    pos: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0usize;
    while i < bytes.len() {
        let b = bytes[i];
        let pos = i;
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'+' => tokens.push(Token { kind: TokenKind::Plus, pos }),
            b'-' => tokens.push(Token { kind: TokenKind::Minus, pos }),
            b'*' => tokens.push(Token { kind: TokenKind::Star, pos }),
            b'/' => tokens.push(Token { kind: TokenKind::Slash, pos }),
            b'^' => tokens.push(Token { kind: TokenKind::Caret, pos }),
            b'(' => tokens.push(Token { kind: TokenKind::LParen, pos }),
            b')' => tokens.push(Token { kind: TokenKind::RParen, pos }),
            b'z' => tokens.push(Token { kind: TokenKind::Var, pos }),
            b'i' => tokens.push(Token {
                kind: TokenKind::Number { value: 1.0, imaginary: true, integral: false },
                pos,
            }),
            b'0'..=b'9' | b'.' => {
                let start = i;
                let mut integral = true;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    integral = false;
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        integral = false;
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let raw = &text[start..i];
                let value: f64 = raw.parse().map_err(|_| ParseError {
                    pos: start,
                    message: format!("malformed number `{raw}`"),
                })?;
                let imaginary = i < bytes.len() && bytes[i] == b'i';
                if imaginary {
                    i += 1;
                }
                tokens.push(Token {
                    kind: TokenKind::Number { value, imaginary, integral },
                    pos: start,
                });
                continue;
            }
            other => {
                return Err(ParseError {
                    pos,
                    message: format!("unexpected character `{}`", other as char),
                })
            }
        }
        i += 1;
    }
    tokens.push(Token { kind: TokenKind::End, pos: bytes.len() });
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    cursor: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.cursor]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.cursor].clone();
        if self.cursor + 1 < self.tokens.len() {
            self.cursor += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().kind {
                TokenKind::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                TokenKind::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek().kind {
                TokenKind::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                TokenKind::Slash => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.base()?;
        if self.peek().kind == TokenKind::Caret {
            self.bump();
            let tok = self.bump();
            match tok.kind {
                TokenKind::Number { value, imaginary: false, integral: true } if value >= 0.0 => {
                    Ok(Expr::Pow(Box::new(base), value as u32))
                }
                _ => Err(ParseError {
                    pos: tok.pos,
                    message: "exponent must be a non-negative integer literal".into(),
                }),
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        let tok = self.bump();
        match tok.kind {
            TokenKind::Minus => Ok(Expr::Neg(Box::new(self.base()?))),
            TokenKind::Number { value, imaginary, .. } => Ok(Expr::Const(if imaginary {
                Complex64::new(0.0, value)
            } else {
                Complex64::new(value, 0.0)
            })),
            TokenKind::Var => Ok(Expr::Var),
            TokenKind::LParen => {
                let inner = self.expr()?;
                let close = self.bump();
                if close.kind != TokenKind::RParen {
                    return Err(ParseError {
                        pos: close.pos,
                        message: "expected `)`".into(),
                    });
                }
                Ok(inner)
            }
            other => Err(ParseError {
                pos: tok.pos,
                message: format!("expected a value, found {other:?}"),
            }),
        }
    }
}

/// Parses the expression grammar into an AST.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    if text.trim().is_empty() {
        return Err(ParseError {
            pos: 0,
            message: "empty expression".into(),
        });
    }
    if text.len() > 64 * 1024 {
        return Err(ParseError {
            pos: 0,
            message: "expression exceeds 64 KiB".into(),
        });
    }
    let mut parser = Parser {
        tokens: tokenize(text)?,
        cursor: 0,
    };
    let ast = parser.expr()?;
    let trailing = parser.peek();
    if trailing.kind != TokenKind::End {
        return Err(ParseError {
            pos: trailing.pos,
            message: "trailing input after expression".into(),
        });
    }
    Ok(ast)
}

/// Lowering failure: division by the zero map or a degree overflow, with
/// the core error retained for exit-code mapping.
#[derive(Debug)]
pub enum LowerError {
    DivisionByZeroMap,
    Core(CoreError),
}

impl fmt::Display for LowerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LowerError::DivisionByZeroMap => write!(f, "division by the zero map"),
            LowerError::Core(e) => write!(f, "{e}"),
        }
    }
}

/// Numerator/denominator pair with exact polynomial arithmetic; coprime
/// normalization happens once, at the end of lowering.
type RawPair = (Polynomial, Polynomial);

fn check_cap(pair: &RawPair, cfg: &Config) -> Result<(), LowerError> {
    let degree = pair.0.degree().max(pair.1.degree());
    if degree > cfg.degree_cap {
        return Err(LowerError::Core(CoreError::DegreeCap {
            degree,
            cap: cfg.degree_cap,
        }));
    }
    Ok(())
}

fn lower_raw(ast: &Expr, cfg: &Config) -> Result<RawPair, LowerError> {
    let pair: RawPair = match ast {
        Expr::Const(c) => (Polynomial::constant(*c), Polynomial::one()),
        Expr::Var => (Polynomial::variable(), Polynomial::one()),
        Expr::Neg(e) => {
            let (n, d) = lower_raw(e, cfg)?;
            (-&n, d)
        }
        Expr::Add(a, b) => {
            let (n1, d1) = lower_raw(a, cfg)?;
            let (n2, d2) = lower_raw(b, cfg)?;
            (&(&n1 * &d2) + &(&n2 * &d1), &d1 * &d2)
        }
        Expr::Sub(a, b) => {
            let (n1, d1) = lower_raw(a, cfg)?;
            let (n2, d2) = lower_raw(b, cfg)?;
            (&(&n1 * &d2) - &(&n2 * &d1), &d1 * &d2)
        }
        Expr::Mul(a, b) => {
            let (n1, d1) = lower_raw(a, cfg)?;
            let (n2, d2) = lower_raw(b, cfg)?;
            (&n1 * &n2, &d1 * &d2)
        }
        Expr::Div(a, b) => {
            let (n1, d1) = lower_raw(a, cfg)?;
            let (n2, d2) = lower_raw(b, cfg)?;
            if n2.is_zero() {
                return Err(LowerError::DivisionByZeroMap);
            }
            (&n1 * &d2, &d1 * &n2)
        }
        Expr::Pow(e, k) => {
            let (n, d) = lower_raw(e, cfg)?;
            let mut acc: RawPair = (Polynomial::one(), Polynomial::one());
            for _ in 0..*k {
                acc = (&acc.0 * &n, &acc.1 * &d);
                check_cap(&acc, cfg)?;
            }
            acc
        }
    };
    check_cap(&pair, cfg)?;
    Ok(pair)
}

/// Lowers an AST to a canonical rational map.
pub fn lower(ast: &Expr, cfg: &Config) -> Result<RationalMap, LowerError> {
    let (num, den) = lower_raw(ast, cfg)?;
    RationalMap::with_config(num, den, cfg).map_err(LowerError::Core)
}

/// Prints a map in a form `parse_expr` + `lower` reproduce up to
/// normalization.
pub fn print_map(r: &RationalMap) -> String {
    if r.den().is_one() {
        format!("{}", r.num())
    } else {
        format!("({}) / ({})", r.num(), r.den())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> Config {
        Config::default()
    }

    fn lower_str(text: &str) -> RationalMap {
        lower(&parse_expr(text).unwrap(), &cfg()).unwrap()
    }

    #[test]
    fn parses_inner_map() {
        let r = lower_str("z - 1/z");
        assert_eq!(r.num().degree(), 2);
        assert_eq!(r.den().degree(), 1);
        let coeffs: Vec<f64> = r.num().coeffs().iter().map(|c| c.re).collect();
        assert_eq!(coeffs, vec![-1.0, 0.0, 1.0]);
    }

    #[test]
    fn parses_quotient_of_polynomials() {
        let r = lower_str("(z^2+1)/z");
        assert_eq!(r.num().degree(), 2);
        assert_eq!(r.den().degree(), 1);
    }

    #[test]
    fn negative_exponent_is_a_syntax_error() {
        let err = parse_expr("z^-1").unwrap_err();
        assert!(err.message.contains("non-negative integer"));
        assert!(parse_expr("z^2.5").is_err());
        assert!(parse_expr("z^i").is_err());
    }

    #[test]
    fn complex_literals() {
        let r = lower_str("3+2i");
        let v = r.evaluate(Complex64::new(0.0, 0.0)).finite().unwrap();
        assert_eq!(v, Complex64::new(3.0, 2.0));

        let r = lower_str("-2.5*z + i");
        let v = r.evaluate(Complex64::new(1.0, 0.0)).finite().unwrap();
        assert_eq!(v, Complex64::new(-2.5, 1.0));
    }

    #[test]
    fn common_denominator_arithmetic() {
        // 1/(z - i) + 1/(z + i) = 2z/(z² + 1)
        let r = lower_str("1/(z - i) + 1/(z + i)");
        assert_eq!(r.num().degree(), 1);
        assert_eq!(r.den().degree(), 2);
        assert!((r.num().coeff(1) - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        assert!((r.den().coeff(0) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn zero_over_zero_is_an_error() {
        match lower(&parse_expr("(z-z)/(z-z)").unwrap(), &cfg()) {
            Err(LowerError::DivisionByZeroMap) => {}
            other => panic!("expected division error, got {other:?}"),
        }
    }

    #[test]
    fn degree_cap_enforced_during_lowering() {
        let mut small = cfg();
        small.degree_cap = 8;
        match lower(&parse_expr("z^9").unwrap(), &small) {
            Err(LowerError::Core(CoreError::DegreeCap { .. })) => {}
            other => panic!("expected degree cap error, got {other:?}"),
        }
    }

    #[test]
    fn position_annotated_errors() {
        let err = parse_expr("z + $").unwrap_err();
        assert_eq!(err.pos, 4);
        let err = parse_expr("(z + 1").unwrap_err();
        assert_eq!(err.pos, 6);
    }

    #[test]
    fn print_parse_round_trip() {
        let maps = vec![
            lower_str("z - 1/z"),
            lower_str("(z^2+1)/z"),
            lower_str("1/(z - i) + 1/(z + i)"),
            lower_str("-2.5*z + i"),
            lower_str("(3+2i)*z^2 - 1/(z-4)"),
        ];
        for r in maps {
            let printed = print_map(&r);
            let back = lower(&parse_expr(&printed).unwrap(), &cfg())
                .unwrap_or_else(|e| panic!("reparse of `{printed}` failed: {e}"));
            assert_eq!(back.num().degree(), r.num().degree());
            assert_eq!(back.den().degree(), r.den().degree());
            for k in 0..=r.num().degree() {
                assert!(
                    (back.num().coeff(k) - r.num().coeff(k)).norm() < 1e-10,
                    "num coeff {k} of `{printed}`"
                );
            }
            for k in 0..=r.den().degree() {
                assert!(
                    (back.den().coeff(k) - r.den().coeff(k)).norm() < 1e-10,
                    "den coeff {k} of `{printed}`"
                );
            }
        }
    }

    #[test]
    fn whitespace_is_insignificant() {
        let a = lower_str("z-1/z");
        let b = lower_str("  z   -   1 / z ");
        assert_eq!(a.num().coeffs(), b.num().coeffs());
    }
}
