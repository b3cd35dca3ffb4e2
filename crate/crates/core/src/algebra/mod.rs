//! Exact arithmetic over the parameter ring `S = Z[r_1^±1, .., r_n^±1]` and
//! polynomials in `x_1..x_d` over it.

mod coeff;
mod xpoly;

pub use coeff::CoeffElem;
pub use xpoly::{XMonomial, XPolynomial};

use serde::{Deserialize, Serialize};

/// Which ring a value belongs to. Additive values model cohomology (only
/// nonnegative powers of the `r_i`); multiplicative values model K-theory,
/// where the `r_i` are units.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Additive,
    Multiplicative,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Additive => "additive",
            Mode::Multiplicative => "multiplicative",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "additive" | "add" | "cohomology" => Ok(Mode::Additive),
            "multiplicative" | "mult" | "k-theory" => Ok(Mode::Multiplicative),
            other => Err(format!("unknown mode '{other}' (expected additive or multiplicative)")),
        }
    }
}
