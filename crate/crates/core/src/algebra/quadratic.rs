//! Arithmetic in `Q[α]/(α² − pα + q)`.
//!
//! `α` and `β = p − α` are the two roots of `x² − px + q`, so `α + β = p`
//! and `αβ = q` hold by construction even when the polynomial is reducible.

use std::fmt;

use num_traits::{One, Zero};

use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticContext {
    pub p: Rational,
    pub q: Rational,
}

impl QuadraticContext {
    pub fn new(p: Rational, q: Rational) -> Self {
        Self { p, q }
    }

    pub fn element(&self, c0: Rational, c1: Rational) -> QuadraticRingElement {
        QuadraticRingElement { c0, c1, ctx: self.clone() }
    }

    pub fn from_rational(&self, c: Rational) -> QuadraticRingElement {
        self.element(c, Rational::zero())
    }

    pub fn zero(&self) -> QuadraticRingElement {
        self.from_rational(Rational::zero())
    }

    pub fn one(&self) -> QuadraticRingElement {
        self.from_rational(Rational::one())
    }

    pub fn alpha(&self) -> QuadraticRingElement {
        self.element(Rational::zero(), Rational::one())
    }

    pub fn beta(&self) -> QuadraticRingElement {
        self.element(self.p.clone(), -Rational::one())
    }
}

/// `c0 + c1·α`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticRingElement {
    pub c0: Rational,
    pub c1: Rational,
    ctx: QuadraticContext,
}

impl QuadraticRingElement {
    pub fn context(&self) -> &QuadraticContext {
        &self.ctx
    }

    pub fn is_rational(&self) -> bool {
        self.c1.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.ctx.element(&self.c0 + &other.c0, &self.c1 + &other.c1))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.ctx.element(&self.c0 - &other.c0, &self.c1 - &other.c1))
    }

    pub fn neg(&self) -> Self {
        self.ctx.element(-&self.c0, -&self.c1)
    }

    /// `(a + bα)(c + dα) = (ac − q·bd) + (ad + bc + p·bd)α`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let bd = &self.c1 * &other.c1;
        let c0 = &self.c0 * &other.c0 - &self.ctx.q * &bd;
        let c1 = &self.c0 * &other.c1 + &self.c1 * &other.c0 + &self.ctx.p * &bd;
        Ok(self.ctx.element(c0, c1))
    }

    /// Square-and-multiply.
    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.ctx.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base).expect("shared context");
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base).expect("shared context");
            }
        }
        acc
    }

    /// Image under `α ↦ β`.
    pub fn conjugate(&self) -> Self {
        self.ctx
            .element(&self.c0 + &self.ctx.p * &self.c1, -&self.c1)
    }

    /// `c0² + p·c0·c1 + q·c1²`.
    pub fn norm(&self) -> Rational {
        &self.c0 * &self.c0 + &self.ctx.p * &self.c0 * &self.c1 + &self.ctx.q * &self.c1 * &self.c1
    }
}

impl fmt::Display for QuadraticRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}·α", self.c0, self.c1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use proptest::prelude::*;

    fn fib() -> QuadraticContext {
        QuadraticContext::new(rat(1), rat(-1))
    }

    #[test]
    fn vieta() {
        for (p, q) in [(1, -1), (2, 4), (-3, 7)] {
            let ctx = QuadraticContext::new(rat(p), rat(q));
            let (a, b) = (ctx.alpha(), ctx.beta());
            assert_eq!(a.mul(&b).unwrap(), ctx.from_rational(rat(q)));
            assert_eq!(a.add(&b).unwrap(), ctx.from_rational(rat(p)));
            assert_eq!(a.conjugate(), b);
        }
    }

    #[test]
    fn golden_powers() {
        let a5 = fib().alpha().pow(5);
        assert_eq!((a5.c0.clone(), a5.c1.clone()), (rat(3), rat(5)));
        assert_eq!(fib().alpha().pow(0), fib().one());
        // α^n = F_{n−1} + F_n α
        let (mut f0, mut f1) = (0i64, 1i64);
        for n in 1..30u64 {
            let e = fib().alpha().pow(n);
            assert_eq!(e.c0, rat(f0));
            assert_eq!(e.c1, rat(f1));
            (f0, f1) = (f1, f0 + f1);
        }
    }

    #[test]
    fn mismatched_contexts() {
        let other = QuadraticContext::new(rat(2), rat(3));
        assert_eq!(fib().alpha().mul(&other.alpha()), Err(Error::ContextMismatch));
        assert_eq!(fib().alpha().add(&other.alpha()), Err(Error::ContextMismatch));
    }

    proptest! {
        #[test]
        fn norm_is_product_with_conjugate(p in -5i64..6, q in -5i64..6, a in -9i64..10, b in -9i64..10) {
            let ctx = QuadraticContext::new(rat(p), rat(q));
            let x = ctx.element(rat(a), rat(b));
            let n = x.mul(&x.conjugate()).unwrap();
            prop_assert!(n.is_rational());
            prop_assert_eq!(n.c0, x.norm());
        }

        #[test]
        fn pow_matches_repeated_mul(p in -3i64..4, q in -3i64..4, a in -3i64..4, b in -3i64..4, k in 0u64..12) {
            let ctx = QuadraticContext::new(rat(p), rat(q));
            let x = ctx.element(rat(a), rat(b));
            let mut acc = ctx.one();
            for _ in 0..k {
                acc = acc.mul(&x).unwrap();
            }
            prop_assert_eq!(x.pow(k), acc);
        }
    }
}
