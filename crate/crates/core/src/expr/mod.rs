//! Hurst-function expressions in the variable `t`.
//!
//! Grammar (lowest to highest precedence):
//!
//! ```text
//! expr    := cmp
//! cmp     := sum (("<" | "<=" | ">" | ">=") sum)*
//! sum     := product (("+" | "-") product)*
//! product := unary (("*" | "/") unary)*
//! unary   := "-" unary | power
//! power   := atom ("^" unary)?          right associative
//! atom    := number | "t" | "pi" | func "(" args ")" | "(" expr ")"
//! func    := sin | cos | exp | abs | min | max | ifelse
//! ```
//!
//! Comparisons evaluate to 1 or 0; `ifelse(c, a, b)` picks `a` when `c` is nonzero.

mod parser;

use std::fmt;

use crate::error::{Error, Result};
use crate::sim::HurstSpec;

pub use parser::parse;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Lt,
    Le,
    Gt,
    Ge,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
        }
    }

    fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            BinOp::Add => a + b,
            BinOp::Sub => a - b,
            BinOp::Mul => a * b,
            BinOp::Div => a / b,
            BinOp::Pow => a.powf(b),
            BinOp::Lt => (a < b) as u8 as f64,
            BinOp::Le => (a <= b) as u8 as f64,
            BinOp::Gt => (a > b) as u8 as f64,
            BinOp::Ge => (a >= b) as u8 as f64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Abs,
    Min,
    Max,
    IfElse,
}

impl Func {
    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "abs" => Func::Abs,
            "min" => Func::Min,
            "max" => Func::Max,
            "ifelse" => Func::IfElse,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Abs => "abs",
            Func::Min => "min",
            Func::Max => "max",
            Func::IfElse => "ifelse",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Func::Sin | Func::Cos | Func::Exp | Func::Abs => 1,
            Func::Min | Func::Max => 2,
            Func::IfElse => 3,
        }
    }
}

/// Expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Pi,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

impl Expr {
    /// Whether the expression refers to the variable `t`.
    pub fn uses_t(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Pi => false,
            Expr::Var => true,
            Expr::Neg(e) => e.uses_t(),
            Expr::Binary(_, a, b) => a.uses_t() || b.uses_t(),
            Expr::Call(_, args) => args.iter().any(Expr::uses_t),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Var => t,
            Expr::Pi => std::f64::consts::PI,
            Expr::Neg(e) => -e.eval(t),
            Expr::Binary(op, a, b) => op.apply(a.eval(t), b.eval(t)),
            Expr::Call(f, args) => match f {
                Func::Sin => args[0].eval(t).sin(),
                Func::Cos => args[0].eval(t).cos(),
                Func::Exp => args[0].eval(t).exp(),
                Func::Abs => args[0].eval(t).abs(),
                Func::Min => args[0].eval(t).min(args[1].eval(t)),
                Func::Max => args[0].eval(t).max(args[1].eval(t)),
                Func::IfElse => {
                    let c = args[0].eval(t);
                    if c != 0.0 && !c.is_nan() {
                        args[1].eval(t)
                    } else {
                        args[2].eval(t)
                    }
                }
            },
        }
    }
}

/// Fully parenthesized rendering; parsing it yields the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) if *c < 0.0 => write!(f, "(-{})", -c),
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var => f.write_str("t"),
            Expr::Pi => f.write_str("pi"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// A parsed Hurst-function expression together with its source text.
#[derive(Debug, Clone, PartialEq)]
pub struct HurstExpr {
    source: String,
    ast: Expr,
}

/// Parse `source` into a [`HurstExpr`].
pub fn parse_hurst_expr(source: &str) -> Result<HurstExpr> {
    Ok(HurstExpr {
        source: source.to_string(),
        ast: parse(source)?,
    })
}

impl HurstExpr {
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn ast(&self) -> &Expr {
        &self.ast
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.ast.eval(t)
    }

    /// The value of an expression that does not depend on `t`.
    pub fn constant_value(&self) -> Option<f64> {
        (!self.ast.uses_t()).then(|| self.ast.eval(0.0))
    }

    /// Level-independent Hurst specification; values are clamped into (0, 1).
    pub fn to_hurst_spec(&self) -> HurstSpec {
        let ast = self.ast.clone();
        HurstSpec::from_fn(self.source.clone(), move |t| ast.eval(t))
    }

    /// Evaluate on a uniform grid of [0, 1] and reject expressions that are non-finite
    /// somewhere or outside (0, 1) everywhere. Returns the number of points needing a clamp.
    pub fn validate(&self, points: usize) -> Result<usize> {
        let n = points.max(2);
        let mut outside = 0;
        for i in 0..n {
            let t = i as f64 / (n - 1) as f64;
            let h = self.eval(t);
            if !h.is_finite() {
                return Err(Error::domain(format!(
                    "Hurst expression `{}` is not finite at t = {t}",
                    self.source
                )));
            }
            if !(h > 0.0 && h < 1.0) {
                outside += 1;
            }
        }
        if outside == n {
            return Err(Error::domain(format!(
                "Hurst expression `{}` lies outside (0, 1) on all of [0, 1]",
                self.source
            )));
        }
        Ok(outside)
    }
}

impl fmt::Display for HurstExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.ast.fmt(f)
    }
}

impl std::str::FromStr for HurstExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_hurst_expr(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::HURST_EPS;

    fn eval(src: &str, t: f64) -> f64 {
        parse_hurst_expr(src).unwrap().eval(t)
    }

    #[test]
    fn worked_examples() {
        assert_eq!(eval("0.3", 0.42), 0.3);
        assert_eq!(eval("0.8 - 0.55*t", 0.0), 0.8);
        assert!((eval("0.4 - 0.25*sin(6*pi*t)", 0.25) - 0.65).abs() < 1e-15);
    }

    #[test]
    fn precedence() {
        assert_eq!(eval("-2^2", 0.0), -4.0);
        assert_eq!(eval("2^3^2", 0.0), 512.0);
        assert_eq!(eval("2^-1", 0.0), 0.5);
        assert_eq!(eval("1 + 2 * 3", 0.0), 7.0);
        assert_eq!(eval("(1 + 2) * 3", 0.0), 9.0);
        assert_eq!(eval("8 / 4 / 2", 0.0), 1.0);
        assert_eq!(eval("1 - 1 - 1", 0.0), -1.0);
        assert_eq!(eval("1 + 1 < 3", 0.0), 1.0);
        assert_eq!(eval("t >= 0.5", 0.5), 1.0);
        assert_eq!(eval("t ≤ 0.5", 0.7), 0.0);
        assert_eq!(eval("--t", 0.25), 0.25);
        assert_eq!(eval("1.5e1 + .5", 0.0), 15.5);
    }

    #[test]
    fn functions() {
        assert_eq!(eval("max(t, 0.2)", 0.1), 0.2);
        assert_eq!(eval("min(t, 0.2)", 0.1), 0.1);
        assert_eq!(eval("abs(-t)", 0.3), 0.3);
        assert_eq!(eval("exp(0)", 0.3), 1.0);
        assert_eq!(eval("cos(0)", 0.3), 1.0);
        assert_eq!(eval("ifelse(t <= 0.5, 0.2, 0.8)", 0.6), 0.8);
        assert_eq!(eval("ifelse(t <= 0.5, 0.2, 0.8)", 0.5), 0.2);
    }

    #[test]
    fn hurst_spec_conversion() {
        let h = parse_hurst_expr("0.3").unwrap().to_hurst_spec();
        assert_eq!(h.eval(5, 0.7), 0.3);
        let h = parse_hurst_expr("t").unwrap().to_hurst_spec();
        assert_eq!(h.eval(0, 0.0), HURST_EPS);
        let h = parse_hurst_expr("ifelse(t <= 0.5, 0.2, 0.8)")
            .unwrap()
            .to_hurst_spec();
        assert_eq!(h.eval(3, 0.6), 0.8);
    }

    #[test]
    fn errors_carry_offsets() {
        let cases = [
            ("", 0),
            ("0.3 +", 5),
            ("0.3 * foo(t)", 6),
            ("s", 0),
            ("sin(t", 5),
            ("sin(t, t)", 5),
            ("(0.3", 4),
            ("0.3 )", 4),
            ("0.3 $ 1", 4),
            ("1e999", 0),
            ("max(1)", 5),
        ];
        for (src, offset) in cases {
            match parse_hurst_expr(src) {
                Err(Error::Parse { offset: o, .. }) => assert_eq!(o, offset, "`{src}`"),
                other => panic!("`{src}`: expected parse error, got {other:?}"),
            }
        }
    }

    #[test]
    fn validation() {
        assert_eq!(parse_hurst_expr("t").unwrap().validate(101).unwrap(), 2);
        assert!(parse_hurst_expr("1.5").unwrap().validate(101).is_err());
        assert!(parse_hurst_expr("1/t").unwrap().validate(101).is_err());
        assert_eq!(parse_hurst_expr("0.3").unwrap().validate(101).unwrap(), 0);
    }

    #[test]
    fn display_round_trips() {
        for src in [
            "0.4 - 0.25*sin(6*pi*t)",
            "-2^-t",
            "ifelse(t > 0.5, max(t, 0.1), min(0.3, abs(t - 1)))",
            "1 < 2 >= 0",
            "0.0000001 * 1e20",
        ] {
            let e = parse(src).unwrap();
            assert_eq!(parse(&e.to_string()).unwrap(), e, "{src} -> {e}");
        }
    }
}
