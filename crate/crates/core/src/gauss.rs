//! Gaussian integers in `i128` with overflow detection, for hot loops.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct G(pub i128, pub i128);

impl G {
    pub const ZERO: G = G(0, 0);

    pub fn from_i64(n: i64) -> G {
        G(n as i128, 0)
    }

    /// `None` unless both parts are integers fitting in `i128`.
    pub fn from_scalar(s: &Scalar) -> Option<G> {
        if !s.re().is_integer() || !s.im().is_integer() {
            return None;
        }
        Some(G(s.re().to_integer().to_i128()?, s.im().to_integer().to_i128()?))
    }

    pub fn to_scalar(self) -> Scalar {
        Scalar::new(BigRational::from_integer(self.0.into()), BigRational::from_integer(self.1.into()))
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0 && self.1 == 0
    }

    pub fn mul(self, o: G) -> Option<G> {
        let re = self.0.checked_mul(o.0)?.checked_sub(self.1.checked_mul(o.1)?)?;
        let im = self.0.checked_mul(o.1)?.checked_add(self.1.checked_mul(o.0)?)?;
        Some(G(re, im))
    }

    pub fn add(self, o: G) -> Option<G> {
        Some(G(self.0.checked_add(o.0)?, self.1.checked_add(o.1)?))
    }

    pub fn sub(self, o: G) -> Option<G> {
        Some(G(self.0.checked_sub(o.0)?, self.1.checked_sub(o.1)?))
    }
}

/// Least common denominator of the real and imaginary parts.
pub(crate) fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Scalar>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |d, c| d.lcm(c.re().denom()).lcm(c.im().denom()))
}
