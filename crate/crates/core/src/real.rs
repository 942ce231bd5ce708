//! High-precision real arithmetic for the ultra-discretization harnesses.
//!
//! A thin wrapper over `astro-float` keeping the working precision and the
//! constants cache in one place. Everything exact stays in [`crate::rational`];
//! this layer only appears where exponentials of `-X/eps` must be evaluated.

use std::cell::RefCell;
use std::cmp::Ordering;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num::bigint::BigInt;
use num::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rat;

/// A real number carried at the working precision of its [`RealCtx`].
#[derive(Debug, Clone)]
pub struct Real(BigFloat);

/// Arithmetic context: precision in bits plus the constants cache.
pub struct RealCtx {
    bits: usize,
    rm: RoundingMode,
    consts: RefCell<Consts>,
}

impl RealCtx {
    /// A context with roughly `digits` significant decimal digits.
    pub fn with_digits(digits: usize) -> Self {
        let bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 32;
        RealCtx {
            bits,
            rm: RoundingMode::ToEven,
            consts: RefCell::new(Consts::new().expect("constants cache")),
        }
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn from_i64(&self, v: i64) -> Real {
        Real(BigFloat::from_i64(v, self.bits))
    }

    pub fn from_f64(&self, v: f64) -> Real {
        Real(BigFloat::from_f64(v, self.bits))
    }

    fn from_bigint(&self, v: &BigInt) -> Real {
        let mut cc = self.consts.borrow_mut();
        Real(BigFloat::parse(
            &v.to_string(),
            Radix::Dec,
            self.bits + 64,
            self.rm,
            &mut cc,
        ))
    }

    /// Rounds an exact rational into the context precision.
    pub fn from_rat(&self, r: &Rat) -> Real {
        let n = self.from_bigint(r.numer());
        let d = self.from_bigint(r.denom());
        Real(n.0.div(&d.0, self.bits, self.rm))
    }

    pub fn zero(&self) -> Real {
        self.from_i64(0)
    }

    pub fn one(&self) -> Real {
        self.from_i64(1)
    }

    pub fn add(&self, a: &Real, b: &Real) -> Real {
        Real(a.0.add(&b.0, self.bits, self.rm))
    }

    pub fn sub(&self, a: &Real, b: &Real) -> Real {
        Real(a.0.sub(&b.0, self.bits, self.rm))
    }

    pub fn mul(&self, a: &Real, b: &Real) -> Real {
        Real(a.0.mul(&b.0, self.bits, self.rm))
    }

    pub fn div(&self, a: &Real, b: &Real) -> Real {
        Real(a.0.div(&b.0, self.bits, self.rm))
    }

    pub fn neg(&self, a: &Real) -> Real {
        Real(a.0.neg())
    }

    pub fn abs(&self, a: &Real) -> Real {
        Real(a.0.abs())
    }

    pub fn exp(&self, a: &Real) -> Real {
        let mut cc = self.consts.borrow_mut();
        Real(a.0.exp(self.bits, self.rm, &mut cc))
    }

    /// Natural logarithm; the argument must be positive.
    pub fn ln(&self, a: &Real) -> Result<Real> {
        if !a.is_positive() {
            return Err(Error::NonPositive(format!("ln({})", a.to_decimal_string())));
        }
        let mut cc = self.consts.borrow_mut();
        Ok(Real(a.0.ln(self.bits, self.rm, &mut cc)))
    }

    pub fn sqrt(&self, a: &Real) -> Result<Real> {
        if a.is_negative() {
            return Err(Error::NonPositive(format!(
                "sqrt({})",
                a.to_decimal_string()
            )));
        }
        Ok(Real(a.0.sqrt(self.bits, self.rm)))
    }

    pub fn pi(&self) -> Real {
        let mut cc = self.consts.borrow_mut();
        Real(cc.pi(self.bits, self.rm))
    }

    pub fn sinh(&self, a: &Real) -> Real {
        let mut cc = self.consts.borrow_mut();
        Real(a.0.sinh(self.bits, self.rm, &mut cc))
    }

    pub fn cosh(&self, a: &Real) -> Real {
        let mut cc = self.consts.borrow_mut();
        Real(a.0.cosh(self.bits, self.rm, &mut cc))
    }

    pub fn tanh(&self, a: &Real) -> Real {
        let mut cc = self.consts.borrow_mut();
        Real(a.0.tanh(self.bits, self.rm, &mut cc))
    }
}

impl Real {
    pub fn is_positive(&self) -> bool {
        self.0.is_positive() && !self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative() && !self.0.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn cmp(&self, other: &Real) -> Ordering {
        self.0.partial_cmp(&other.0).expect("no NaN in harness")
    }

    /// The exact dyadic rational this float represents.
    pub fn to_rat(&self) -> Rat {
        if self.0.is_zero() {
            return Rat::zero();
        }
        let (words, _n, sign, exp, _inexact) = self.0.as_raw_parts().expect("finite number");
        let mut mant = BigInt::zero();
        for w in words.iter().rev() {
            mant = (mant << 64) + BigInt::from(*w);
        }
        if sign == Sign::Neg {
            mant = -mant;
        }
        let shift = exp as i64 - (words.len() as i64) * 64;
        let mant = Rat::from_integer(mant);
        if shift >= 0 {
            mant * Rat::from_integer(BigInt::one() << (shift as usize))
        } else {
            mant / Rat::from_integer(BigInt::one() << ((-shift) as usize))
        }
    }

    /// Lossy conversion for reports and tolerance checks.
    pub fn to_f64(&self) -> f64 {
        if self.0.is_zero() {
            return 0.0;
        }
        let (words, _n, sign, exp, _inexact) = match self.0.as_raw_parts() {
            Some(p) => p,
            None => return f64::NAN,
        };
        let top = *words.last().expect("nonempty mantissa");
        let mut v = top as f64 / 2f64.powi(64);
        if words.len() > 1 {
            v += words[words.len() - 2] as f64 / 2f64.powi(128);
        }
        let r = v * 2f64.powi(exp);
        if sign == Sign::Neg {
            -r
        } else {
            r
        }
    }

    pub fn to_decimal_string(&self) -> String {
        self.0.to_string()
    }
}
