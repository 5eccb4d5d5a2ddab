//! Tangle expressions and their text syntax.
//!
//! ```text
//! input      := montesinos | expr
//! montesinos := "M(" fraction ("," fraction)* ")"
//! fraction   := int ["/" int]
//! expr       := term (("*" | "|") term)*      left associative
//! term       := "(" expr ")" | "[[" int ("," int)* "]]"
//!             | "[" int "]" | "[1/" int "]" | "[" int "/" int "]"
//!             | "[inf]" | "[∞]"
//! ```
//!
//! `*` is horizontal composition (the first operand on the left) and `|`
//! is vertical composition (the first operand on top).

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::TangleError;
use crate::montesinos::MontesinosSpec;
use crate::rational::{cf_expand, ContinuedFraction, Fraction, RationalError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TangleExpr {
    /// `[0]`: two horizontal strands, `nw-ne` and `sw-se`.
    Zero,
    /// `[∞]`: two vertical strands, `nw-sw` and `ne-se`.
    Infinity,
    /// `[1]` (positive) or `[-1]`.
    Crossing {
        positive: bool,
    },
    Horizontal(Box<TangleExpr>, Box<TangleExpr>),
    Vertical(Box<TangleExpr>, Box<TangleExpr>),
}

impl TangleExpr {
    pub fn horizontal(self, rhs: TangleExpr) -> TangleExpr {
        TangleExpr::Horizontal(Box::new(self), Box::new(rhs))
    }

    pub fn vertical(self, rhs: TangleExpr) -> TangleExpr {
        TangleExpr::Vertical(Box::new(self), Box::new(rhs))
    }

    /// `[k]`: `|k|` copies of `[+-1]` composed horizontally.
    pub fn integer(k: i64) -> TangleExpr {
        Self::twist(k, TangleExpr::Zero, TangleExpr::horizontal)
    }

    /// `[1/k]`: `|k|` copies of `[+-1]` composed vertically.
    pub fn vertical_twist(k: i64) -> TangleExpr {
        Self::twist(k, TangleExpr::Infinity, TangleExpr::vertical)
    }

    fn twist(
        k: i64,
        empty: TangleExpr,
        join: fn(TangleExpr, TangleExpr) -> TangleExpr,
    ) -> TangleExpr {
        let unit = TangleExpr::Crossing { positive: k > 0 };
        let mut acc: Option<TangleExpr> = None;
        for _ in 0..k.unsigned_abs() {
            acc = Some(match acc {
                None => unit.clone(),
                Some(t) => join(t, unit.clone()),
            });
        }
        acc.unwrap_or(empty)
    }

    /// `[k_1] | [1/k_2] * [k_3] | [1/k_4] ...` read left to right.
    pub fn rational(ks: &ContinuedFraction) -> TangleExpr {
        let mut acc = TangleExpr::integer(ks.terms()[0]);
        for (i, &k) in ks.terms().iter().enumerate().skip(1) {
            acc = if i % 2 == 1 {
                acc.vertical(TangleExpr::vertical_twist(k))
            } else {
                acc.horizontal(TangleExpr::integer(k))
            };
        }
        acc
    }

    pub fn crossing_count(&self) -> usize {
        match self {
            TangleExpr::Zero | TangleExpr::Infinity => 0,
            TangleExpr::Crossing { .. } => 1,
            TangleExpr::Horizontal(a, b) | TangleExpr::Vertical(a, b) => {
                a.crossing_count() + b.crossing_count()
            }
        }
    }

    /// The fraction of a rational tangle as a projective pair `(p, q)`,
    /// `q = 0` for `[∞]`.
    ///
    /// Horizontal composition adds fractions and vertical composition adds
    /// reciprocals; the result is rational only if one operand of every
    /// horizontal (vertical) composition is an integer (reciprocal integer)
    /// tangle, otherwise [`TangleError::NotRational`].
    pub fn fraction(&self) -> Result<(i64, i64), TangleError> {
        match self {
            TangleExpr::Zero => Ok((0, 1)),
            TangleExpr::Infinity => Ok((1, 0)),
            TangleExpr::Crossing { positive } => Ok((if *positive { 1 } else { -1 }, 1)),
            TangleExpr::Horizontal(a, b) => {
                let (p1, q1) = a.fraction()?;
                let (p2, q2) = b.fraction()?;
                if q1.abs() != 1 && q2.abs() != 1 {
                    return Err(TangleError::NotRational);
                }
                projective(
                    p1 as i128 * q2 as i128 + p2 as i128 * q1 as i128,
                    q1 as i128 * q2 as i128,
                )
            }
            TangleExpr::Vertical(a, b) => {
                let (p1, q1) = a.fraction()?;
                let (p2, q2) = b.fraction()?;
                if p1.abs() != 1 && p2.abs() != 1 {
                    return Err(TangleError::NotRational);
                }
                projective(
                    p1 as i128 * p2 as i128,
                    p1 as i128 * q2 as i128 + p2 as i128 * q1 as i128,
                )
            }
        }
    }
}

fn projective(p: i128, q: i128) -> Result<(i64, i64), TangleError> {
    if p == 0 && q == 0 {
        return Err(TangleError::NotRational);
    }
    let mut a = p.abs();
    let mut b = q.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    let (p, q) = (p / a, q / a);
    let (p, q) = if q < 0 || (q == 0 && p < 0) {
        (-p, -q)
    } else {
        (p, q)
    };
    let narrow =
        |x: i128| i64::try_from(x).map_err(|_| TangleError::Rational(RationalError::Overflow));
    Ok((narrow(p)?, narrow(q)?))
}

impl fmt::Display for TangleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TangleExpr::Zero => f.write_str("[0]"),
            TangleExpr::Infinity => f.write_str("[inf]"),
            TangleExpr::Crossing { positive: true } => f.write_str("[1]"),
            TangleExpr::Crossing { positive: false } => f.write_str("[-1]"),
            TangleExpr::Horizontal(a, b) => write!(f, "({} * {})", a, b),
            TangleExpr::Vertical(a, b) => write!(f, "({} | {})", a, b),
        }
    }
}

/// Result of [`parse_tangle`].
#[derive(Clone, Debug, PartialEq)]
pub enum Parsed {
    Expr(TangleExpr),
    /// A single `[[k_1,...]]` or `[p/q]` term, kept with its expansion.
    Rational(ContinuedFraction),
    Montesinos(MontesinosSpec),
}

pub fn parse_tangle(text: &str) -> Result<Parsed, TangleError> {
    let mut parser = Parser {
        chars: text.chars().collect(),
        pos: 0,
    };
    parser.skip_ws();
    let out = if parser.peek() == Some('M') {
        parser.pos += 1;
        Parsed::Montesinos(parser.montesinos()?)
    } else {
        let (expr, single) = parser.expr()?;
        match single {
            Some(ks) => Parsed::Rational(ks),
            None => Parsed::Expr(expr),
        }
    };
    parser.skip_ws();
    if parser.pos != parser.chars.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(out)
}

/// Parses `M(p_1/q_1,...)` only.
pub fn parse_montesinos(text: &str) -> Result<MontesinosSpec, TangleError> {
    match parse_tangle(text)? {
        Parsed::Montesinos(spec) => Ok(spec),
        _ => Err(TangleError::Parse {
            pos: 0,
            message: "expected a Montesinos link M(p1/q1,...,pr/qr)".to_string(),
        }),
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, message: &str) -> TangleError {
        TangleError::Parse {
            pos: self.pos,
            message: message.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), TangleError> {
        if self.eat(c) {
            Ok(())
        } else {
            let mut msg = String::from("expected '");
            msg.push(c);
            msg.push('\'');
            Err(self.error(&msg))
        }
    }

    fn int(&mut self) -> Result<i64, TangleError> {
        self.skip_ws();
        let start = self.pos;
        let mut negative = false;
        if matches!(self.peek(), Some('-') | Some('\u{2212}')) {
            negative = true;
            self.pos += 1;
        } else if self.peek() == Some('+') {
            self.pos += 1;
        }
        let digits_start = self.pos;
        let mut value: i64 = 0;
        while let Some(d) = self.peek().and_then(|c| c.to_digit(10)) {
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(d as i64))
                .ok_or_else(|| self.error("integer out of range"))?;
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return Err(self.error("expected an integer"));
        }
        Ok(if negative { -value } else { value })
    }

    fn montesinos(&mut self) -> Result<MontesinosSpec, TangleError> {
        self.expect('(')?;
        let mut fractions = Vec::new();
        loop {
            let p = self.int()?;
            let q = if self.eat('/') { self.int()? } else { 1 };
            let f = Fraction::tangle(p, q).map_err(TangleError::Rational)?;
            fractions.push(f);
            if self.eat(')') {
                break;
            }
            self.expect(',')?;
        }
        MontesinosSpec::new(fractions).map_err(TangleError::Rational)
    }

    /// Returns the expression and, when it is a single rational term, its
    /// expansion.
    fn expr(&mut self) -> Result<(TangleExpr, Option<ContinuedFraction>), TangleError> {
        let (mut acc, mut single) = self.term()?;
        loop {
            if self.eat('*') {
                let (rhs, _) = self.term()?;
                acc = acc.horizontal(rhs);
            } else if self.eat('|') {
                let (rhs, _) = self.term()?;
                acc = acc.vertical(rhs);
            } else {
                break;
            }
            single = None;
        }
        Ok((acc, single))
    }

    fn term(&mut self) -> Result<(TangleExpr, Option<ContinuedFraction>), TangleError> {
        if self.eat('(') {
            let (e, single) = self.expr()?;
            self.expect(')')?;
            return Ok((e, single));
        }
        self.expect('[')?;
        if self.eat('[') {
            let mut ks = Vec::new();
            loop {
                ks.push(self.int()?);
                if self.eat(']') {
                    break;
                }
                self.expect(',')?;
            }
            self.expect(']')?;
            let cf = ContinuedFraction::new(ks).map_err(TangleError::Rational)?;
            return Ok((TangleExpr::rational(&cf), Some(cf)));
        }
        self.skip_ws();
        if self.peek() == Some('\u{221e}') {
            self.pos += 1;
            self.expect(']')?;
            return Ok((TangleExpr::Infinity, None));
        }
        if self.chars[self.pos..].starts_with(&['i', 'n', 'f']) {
            self.pos += 3;
            self.expect(']')?;
            return Ok((TangleExpr::Infinity, None));
        }
        let p = self.int()?;
        if self.eat('/') {
            let q = self.int()?;
            self.expect(']')?;
            if p == 1 {
                return Ok((TangleExpr::vertical_twist(q), None));
            }
            let f = Fraction::pair(p, q).map_err(TangleError::Rational)?;
            let cf = cf_expand(&f).map_err(TangleError::Rational)?;
            return Ok((TangleExpr::rational(&cf), Some(cf)));
        }
        self.expect(']')?;
        Ok((TangleExpr::integer(p), None))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn parses_montesinos() {
        match parse_tangle("M(2/1,3/1,7/1)").unwrap() {
            Parsed::Montesinos(spec) => assert_eq!(spec.len(), 3),
            other => panic!("{:?}", other),
        }
        let spec = parse_montesinos(" M( 3, 3/1 , 3/-2 ) ").unwrap();
        assert_eq!(spec.fractions()[2].denom(), -2);
    }

    #[test]
    fn montesinos_normalizes_sign_into_q() {
        let spec = parse_montesinos("M(-3/2)").unwrap();
        assert_eq!(
            (spec.fractions()[0].numer(), spec.fractions()[0].denom()),
            (3, -2)
        );
    }

    #[test]
    fn rejects_zero_entries() {
        assert!(matches!(
            parse_tangle("M(2/0,3/1)"),
            Err(TangleError::Rational(RationalError::InvalidFraction(2, 0)))
        ));
        assert!(matches!(
            parse_tangle("M(0/1)"),
            Err(TangleError::Rational(RationalError::InvalidFraction(0, 1)))
        ));
    }

    #[test]
    fn parses_rational_term() {
        match parse_tangle("[[2,3]]").unwrap() {
            Parsed::Rational(ks) => {
                assert_eq!(ks.terms(), &[2, 3]);
                let (p, q) = TangleExpr::rational(&ks).fraction().unwrap();
                assert_eq!((p, q), (2, 7));
            }
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn parses_compositions() {
        let Parsed::Expr(e) = parse_tangle("[2] | [1/3] * ([1] | [-1])").unwrap() else {
            panic!()
        };
        assert_eq!(e.crossing_count(), 7);
        // ([2] | [1/3]) is rational with 2/7; the right operand is not integral
        assert_eq!(e.fraction(), Err(TangleError::NotRational));

        let Parsed::Expr(e) = parse_tangle("[2] | [1/3] * [4]").unwrap() else {
            panic!()
        };
        assert_eq!(e.fraction().unwrap(), (2 + 4 * 7, 7));
    }

    #[test]
    fn basic_tangles() {
        let Parsed::Expr(e) = parse_tangle("[0]").unwrap() else {
            panic!()
        };
        assert_eq!(e, TangleExpr::Zero);
        assert_eq!(e.fraction().unwrap(), (0, 1));
        let Parsed::Expr(e) = parse_tangle("[inf]").unwrap() else {
            panic!()
        };
        assert_eq!(e.fraction().unwrap(), (1, 0));
        let Parsed::Expr(e) = parse_tangle("[\u{221e}]").unwrap() else {
            panic!()
        };
        assert_eq!(e, TangleExpr::Infinity);
        let Parsed::Expr(e) = parse_tangle("[\u{2212}1]").unwrap() else {
            panic!()
        };
        assert_eq!(e, TangleExpr::Crossing { positive: false });
    }

    #[test]
    fn rational_expression_matches_tangle_fraction() {
        for ks in [
            vec![3],
            vec![2, 3],
            vec![1, 1, 1],
            vec![2, -3, 4],
            vec![-1, 2, 2, -3],
        ] {
            let cf = ContinuedFraction::new(ks).unwrap();
            let f = crate::rational::tangle_fraction(&cf).unwrap();
            let (p, q) = TangleExpr::rational(&cf).fraction().unwrap();
            assert_eq!(Fraction::new(p, q).unwrap(), f);
        }
    }

    #[test]
    fn parse_errors_carry_position() {
        match parse_tangle("[[2,]]") {
            Err(TangleError::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{:?}", other),
        }
        assert!(matches!(
            parse_tangle("[2] *"),
            Err(TangleError::Parse { .. })
        ));
        assert!(matches!(
            parse_tangle("[2]]"),
            Err(TangleError::Parse { .. })
        ));
        assert!(matches!(
            parse_tangle("M(1/2"),
            Err(TangleError::Parse { .. })
        ));
    }
}
