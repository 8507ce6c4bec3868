use std::fmt;

use super::ball::Ball;
use crate::Result;

/// Rectangular complex enclosure `re + i·im`.
#[derive(Clone)]
pub struct ComplexBall {
    pub re: Ball,
    pub im: Ball,
}

impl ComplexBall {
    pub fn new(re: Ball, im: Ball) -> Self {
        ComplexBall { re, im }
    }

    pub fn from_real(re: Ball) -> Self {
        ComplexBall {
            re,
            im: Ball::zero(),
        }
    }

    pub fn zero() -> Self {
        ComplexBall::from_real(Ball::zero())
    }

    pub fn one() -> Self {
        ComplexBall::from_real(Ball::one())
    }

    pub fn i() -> Self {
        ComplexBall::new(Ball::zero(), Ball::one())
    }

    pub fn is_real(&self) -> bool {
        self.im.is_exact() && self.im.mid().is_zero()
    }

    pub fn add(&self, o: &ComplexBall, prec: u32) -> ComplexBall {
        ComplexBall::new(self.re.add(&o.re, prec), self.im.add(&o.im, prec))
    }

    pub fn sub(&self, o: &ComplexBall, prec: u32) -> ComplexBall {
        ComplexBall::new(self.re.sub(&o.re, prec), self.im.sub(&o.im, prec))
    }

    pub fn neg(&self) -> ComplexBall {
        ComplexBall::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> ComplexBall {
        ComplexBall::new(self.re.clone(), self.im.neg())
    }

    pub fn mul(&self, o: &ComplexBall, prec: u32) -> ComplexBall {
        if o.is_real() {
            return self.mul_real(&o.re, prec);
        }
        if self.is_real() {
            return o.mul_real(&self.re, prec);
        }
        let wp = prec + 4;
        let re = self
            .re
            .mul(&o.re, wp)
            .sub(&self.im.mul(&o.im, wp), prec);
        let im = self
            .re
            .mul(&o.im, wp)
            .add(&self.im.mul(&o.re, wp), prec);
        ComplexBall::new(re, im)
    }

    pub fn mul_real(&self, x: &Ball, prec: u32) -> ComplexBall {
        let im = if self.is_real() {
            Ball::zero()
        } else {
            self.im.mul(x, prec)
        };
        ComplexBall::new(self.re.mul(x, prec), im)
    }

    pub fn div_real(&self, x: &Ball, prec: u32) -> Result<ComplexBall> {
        let im = if self.is_real() {
            Ball::zero()
        } else {
            self.im.div(x, prec)?
        };
        Ok(ComplexBall::new(self.re.div(x, prec)?, im))
    }

    /// Multiplication by `i^k`.
    pub fn mul_i_pow(&self, k: u32) -> ComplexBall {
        match k % 4 {
            0 => self.clone(),
            1 => ComplexBall::new(self.im.neg(), self.re.clone()),
            2 => self.neg(),
            _ => ComplexBall::new(self.im.clone(), self.re.neg()),
        }
    }

    /// `|z|²`.
    pub fn norm_sqr(&self, prec: u32) -> Ball {
        self.re.sqr(prec + 2).add(&self.im.sqr(prec + 2), prec)
    }

    pub fn overlaps(&self, o: &ComplexBall) -> bool {
        self.re.overlaps(&o.re) && self.im.overlaps(&o.im)
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }
}

impl fmt::Debug for ComplexBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) + i·({:?})", self.re, self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    #[test]
    fn i_squared_is_minus_one() {
        let m = ComplexBall::i().mul(&ComplexBall::i(), 64);
        assert!(m.re.contains_rational(&Rational::from(-1)));
        assert!(m.im.contains_zero());
        assert!(ComplexBall::one().mul_i_pow(2).re.contains_rational(&Rational::from(-1)));
    }
}
