//! Expression trees for real functions of one real variable.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;
use core::ops;

use crate::error::{Error, Result};

/// Closed interval `[a, b]` with finite endpoints and `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a.is_finite() && b.is_finite() && a < b {
            Ok(Interval { a, b })
        } else {
            Err(Error::InvalidInterval { a, b })
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.a <= x && x <= self.b
    }

    /// `n` evenly spaced points including both endpoints (`n >= 2`).
    pub fn grid(&self, n: usize) -> Vec<f64> {
        linspace(self.a, self.b, n)
    }
}

/// `n` evenly spaced points from `lo` to `hi` inclusive. Endpoints are exact.
pub(crate) fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => alloc::vec![lo],
        _ => {
            let last = n - 1;
            (0..n)
                .map(|i| {
                    if i == last {
                        hi
                    } else {
                        let t = i as f64 / last as f64;
                        lo + (hi - lo) * t
                    }
                })
                .collect()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Abs,
    Exp,
    Ln,
    Sqrt,
}

impl UnaryOp {
    fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Abs => "abs",
            UnaryOp::Exp => "exp",
            UnaryOp::Ln => "ln",
            UnaryOp::Sqrt => "sqrt",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Pow => "^",
        }
    }
}

/// One branch of a piecewise definition. The guard is `[lo, hi)` unless
/// `closed`, in which case it is `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub closed: bool,
    pub body: Expr,
}

impl Piece {
    fn covers(&self, x: f64) -> bool {
        self.lo <= x && (x < self.hi || (self.closed && x == self.hi))
    }
}

/// Expression node.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Piecewise(Vec<Piece>),
}

impl Expr {
    fn eval(&self, x: f64) -> Result<f64> {
        let v = match self {
            Expr::Const(c) => *c,
            Expr::Var => x,
            Expr::Unary(op, arg) => {
                let u = arg.eval(x)?;
                match op {
                    UnaryOp::Neg => -u,
                    UnaryOp::Abs => libm::fabs(u),
                    UnaryOp::Exp => libm::exp(u),
                    UnaryOp::Ln if u <= 0.0 => return Err(Error::NonFiniteValue { x }),
                    UnaryOp::Ln => libm::log(u),
                    UnaryOp::Sqrt if u < 0.0 => return Err(Error::NonFiniteValue { x }),
                    UnaryOp::Sqrt => libm::sqrt(u),
                }
            }
            Expr::Binary(op, lhs, rhs) => {
                let l = lhs.eval(x)?;
                let r = rhs.eval(x)?;
                match op {
                    BinaryOp::Add => l + r,
                    BinaryOp::Sub => l - r,
                    BinaryOp::Mul => l * r,
                    BinaryOp::Div if r == 0.0 => return Err(Error::NonFiniteValue { x }),
                    BinaryOp::Div => l / r,
                    BinaryOp::Pow => power(l, r),
                }
            }
            Expr::Piecewise(pieces) => match pieces.iter().find(|p| p.covers(x)) {
                Some(p) => p.body.eval(x)?,
                None => return Err(Error::OutOfDomain { x }),
            },
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteValue { x })
        }
    }

    fn has_var(&self) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var => true,
            Expr::Unary(_, a) => a.has_var(),
            Expr::Binary(_, l, r) => l.has_var() || r.has_var(),
            Expr::Piecewise(_) => true,
        }
    }
}

/// Integer exponents go through exact repeated squaring so that `x^2` is
/// `x*x`; everything else defers to `pow`, whose NaN for a negative base
/// becomes `NonFiniteValue` upstream.
fn power(base: f64, exp: f64) -> f64 {
    if exp == libm::trunc(exp) && libm::fabs(exp) <= 64.0 {
        let n = exp as i32;
        let mut acc = 1.0;
        let mut sq = base;
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc *= sq;
            }
            sq *= sq;
            k >>= 1;
        }
        if n < 0 {
            1.0 / acc
        } else {
            acc
        }
    } else {
        libm::pow(base, exp)
    }
}

/// A parsed real function of one variable. Immutable; evaluation is pure.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionExpr {
    root: Expr,
}

impl FunctionExpr {
    /// Wraps a node, validating piecewise guards.
    pub fn new(root: Expr) -> Result<Self> {
        validate(&root)?;
        Ok(FunctionExpr { root })
    }

    pub fn parse(text: &str) -> Result<Self> {
        crate::parse::parse(text)
    }

    pub fn root(&self) -> &Expr {
        &self.root
    }

    pub fn constant(c: f64) -> Self {
        FunctionExpr {
            root: Expr::Const(c),
        }
    }

    /// The identity function `x`.
    pub fn var() -> Self {
        FunctionExpr { root: Expr::Var }
    }

    pub fn evaluate(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::NonFiniteValue { x });
        }
        self.root.eval(x)
    }

    /// `true` when the expression does not depend on `x`.
    pub fn is_constant(&self) -> bool {
        !self.root.has_var()
    }

    /// `alpha * self` as a new tree.
    pub fn scaled(&self, alpha: f64) -> Self {
        FunctionExpr::constant(alpha) * self.clone()
    }

    fn binary(op: BinaryOp, lhs: FunctionExpr, rhs: FunctionExpr) -> Self {
        FunctionExpr {
            root: Expr::Binary(op, Box::new(lhs.root), Box::new(rhs.root)),
        }
    }
}

fn validate(e: &Expr) -> Result<()> {
    match e {
        Expr::Const(_) | Expr::Var => Ok(()),
        Expr::Unary(_, a) => validate(a),
        Expr::Binary(_, l, r) => {
            validate(l)?;
            validate(r)
        }
        Expr::Piecewise(pieces) => {
            let bad = |msg: &'static str| Err(Error::InvalidConfig(msg));
            if pieces.is_empty() {
                return bad("piecewise needs at least one branch");
            }
            for (i, p) in pieces.iter().enumerate() {
                if !(p.lo.is_finite() && p.hi.is_finite() && p.lo < p.hi) {
                    return bad("piecewise guard needs finite lo < hi");
                }
                let last = i + 1 == pieces.len();
                if p.closed != last {
                    return bad("only the last piecewise guard may be closed");
                }
                if !last && pieces[i + 1].lo != p.hi {
                    return bad("piecewise guards must be contiguous and increasing");
                }
                validate(&p.body)?;
            }
            Ok(())
        }
    }
}

impl ops::Add for FunctionExpr {
    type Output = FunctionExpr;
    fn add(self, rhs: FunctionExpr) -> FunctionExpr {
        FunctionExpr::binary(BinaryOp::Add, self, rhs)
    }
}

impl ops::Sub for FunctionExpr {
    type Output = FunctionExpr;
    fn sub(self, rhs: FunctionExpr) -> FunctionExpr {
        FunctionExpr::binary(BinaryOp::Sub, self, rhs)
    }
}

impl ops::Mul for FunctionExpr {
    type Output = FunctionExpr;
    fn mul(self, rhs: FunctionExpr) -> FunctionExpr {
        FunctionExpr::binary(BinaryOp::Mul, self, rhs)
    }
}

impl ops::Div for FunctionExpr {
    type Output = FunctionExpr;
    fn div(self, rhs: FunctionExpr) -> FunctionExpr {
        FunctionExpr::binary(BinaryOp::Div, self, rhs)
    }
}

impl ops::Neg for FunctionExpr {
    type Output = FunctionExpr;
    fn neg(self) -> FunctionExpr {
        FunctionExpr {
            root: Expr::Unary(UnaryOp::Neg, Box::new(self.root)),
        }
    }
}

impl fmt::Display for FunctionExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.root, f)
    }
}

// Printing is fully parenthesized so that re-parsing reproduces the tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) if c.is_sign_negative() => write!(f, "(-{})", -c),
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var => f.write_str("x"),
            Expr::Unary(UnaryOp::Neg, a) => write!(f, "(-{a})"),
            Expr::Unary(op, a) => write!(f, "{}({a})", op.name()),
            Expr::Binary(op, l, r) => write!(f, "({l} {} {r})", op.symbol()),
            Expr::Piecewise(pieces) => {
                f.write_str("piecewise{ ")?;
                for (i, p) in pieces.iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    let close = if p.closed { ']' } else { ')' };
                    write!(
                        f,
                        "[{},{}{close}: {}",
                        Expr::Const(p.lo),
                        Expr::Const(p.hi),
                        p.body
                    )?;
                }
                f.write_str(" }")
            }
        }
    }
}
