//! Named fixture functions with their canonical domains.

use alloc::string::ToString;

use crate::error::{Error, Result};
use crate::expr::{FunctionExpr, Interval};

/// A catalog entry. The shape flags describe the function on its canonical
/// domain and drive which class checks tests expect to pass.
#[derive(Debug, Clone, Copy)]
pub struct Fixture {
    pub name: &'static str,
    pub text: &'static str,
    pub a: f64,
    pub b: f64,
    pub nonnegative: bool,
    pub convex: bool,
    pub monotone: bool,
}

impl Fixture {
    pub fn expr(&self) -> FunctionExpr {
        FunctionExpr::parse(self.text).expect("catalog expressions parse")
    }

    pub fn interval(&self) -> Interval {
        Interval::new(self.a, self.b).expect("catalog intervals are valid")
    }
}

const fn fx(
    name: &'static str,
    text: &'static str,
    a: f64,
    b: f64,
    nonnegative: bool,
    convex: bool,
    monotone: bool,
) -> Fixture {
    Fixture {
        name,
        text,
        a,
        b,
        nonnegative,
        convex,
        monotone,
    }
}

/// Value of the `const_c` fixture.
pub const CONST_C: f64 = 2.0;

pub const FIXTURES: &[Fixture] = &[
    fx("square", "x^2", 0.0, 1.0, true, true, true),
    fx("shifted_abs", "1 - abs(x)", -1.0, 1.0, true, false, false),
    fx("recip", "1/x", 0.1, 1.0, true, true, true),
    fx("const_c", "2", 0.0, 1.0, true, true, true),
    fx("expx", "exp(x)", 0.0, 1.0, true, true, true),
    fx("line_neg", "x", -1.0, 1.0, false, true, true),
    fx("cube", "x^3", 0.0, 1.0, true, true, true),
    fx("quartic", "x^4", -1.0, 1.0, true, true, false),
    fx("abs_x", "abs(x)", -1.0, 1.0, true, true, false),
    fx("exp_neg", "exp(-x)", 0.0, 1.0, true, true, true),
    fx("shifted_square", "(x - 0.5)^2", 0.0, 1.0, true, true, false),
    fx(
        "cosh",
        "(exp(x) + exp(-x)) / 2",
        -1.0,
        1.0,
        true,
        true,
        false,
    ),
    fx("neg_log", "-ln(x)", 0.1, 1.0, true, true, true),
    fx("xlogx_shift", "x*ln(x) + 1", 0.1, 1.0, true, true, false),
    fx("square_plus_one", "x^2 + 1", -1.0, 1.0, true, true, false),
    fx(
        "ramp",
        "piecewise{ [0, 0.5): 0; [0.5, 1]: x - 0.5 }",
        0.0,
        1.0,
        true,
        true,
        true,
    ),
    fx("sqrt_x", "sqrt(x)", 0.0, 1.0, true, false, true),
];

pub fn fixture(name: &str) -> Result<&'static Fixture> {
    FIXTURES
        .iter()
        .find(|f| f.name == name)
        .ok_or_else(|| Error::UnknownFixture(name.to_string()))
}

/// Looks up a fixture by name.
pub fn catalog(name: &str) -> Result<(FunctionExpr, Interval)> {
    let f = fixture(name)?;
    Ok((f.expr(), f.interval()))
}
