//! Real and complex ball arithmetic on top of MPFR.

mod ball;
mod complex;
pub mod decimal;
mod elementary;
mod mag;

pub use ball::Ball;
pub use complex::ComplexBall;
pub use decimal::{parse_decimal, parse_rational, to_decimal};
pub use elementary::{const_euler, const_pi, elem_eval, Elementary};
pub use mag::{Mag, MAG_PREC};

#[allow(unused_imports)]
pub(crate) use ball::round_to;
#[allow(unused_imports)]
pub(crate) use mag::{down, up};
