//! Slow reference computations used to cross-check the fast paths.
//!
//! None of this shares series code with `afe` or `incgamma`: sums are taken
//! term by term in ball arithmetic with their own error bounds.

mod em;
mod naive;
mod product;
mod ramanujan;
mod recurrences;

use std::time::Duration;

use crate::afe::LValue;
use crate::numcore::Ball;

pub use em::{hurwitz_em, l_em, zeta_em};
pub use naive::incgamma_naive;
pub use product::zeta_euler_product;
pub use ramanujan::{ramanujan_zeta_half, ramanujan_zeta_half_with};
pub use recurrences::{bernoulli_recurrence, bernoulli_table, euler_recurrence, euler_table};

/// Which reference method produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    EulerMaclaurin,
    EulerProduct,
    Ramanujan,
    NaiveSeries,
}

impl OracleMethod {
    pub fn tag(&self) -> &'static str {
        match self {
            OracleMethod::EulerMaclaurin => "em",
            OracleMethod::EulerProduct => "ep",
            OracleMethod::Ramanujan => "ramanujan",
            OracleMethod::NaiveSeries => "naive",
        }
    }
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub value: LValue,
    pub method: OracleMethod,
    /// Number of series terms (or primes) used.
    pub terms: u64,
    pub elapsed: Duration,
}

impl OracleResult {
    /// The value as a real ball; panics for complex values.
    pub fn ball(&self) -> &Ball {
        self.value.real().expect("real oracle value")
    }
}
