//! Exact rational coefficients, p-adic valuations, and generalized
//! binomial coefficients for dyadic exponents.
//!
//! Every coefficient in this crate is a [`Rat`]. All divisibility and
//! congruence statements are decided by exact valuation of rationals,
//! never by approximation.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{CoreError, Result};

/// Exact rational number in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Rat(BigRational);

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rat(BigRational::from_integer(n))
    }

    /// `num / den`; panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "Rat::new: zero denominator");
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "Rat::from_big: zero denominator");
        Rat(BigRational::new(num, den))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// Multiplicative inverse; panics on zero.
    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "Rat::recip: division by zero");
        Rat(self.0.recip())
    }

    pub fn pow(&self, e: i32) -> Self {
        if e == 0 {
            return Rat::one();
        }
        if e < 0 {
            return self.recip().pow(-e);
        }
        Rat(self.0.pow(e))
    }

    pub fn as_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    /// Canonical string form: `"n"` for integers, `"n/d"` otherwise.
    pub fn to_decimal_string(&self) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    /// Parses `"n"` or `"n/d"`.
    pub fn parse(s: &str) -> Result<Self> {
        let err = || CoreError::InvalidParameter(format!("bad rational literal: {s:?}"));
        match s.split_once('/') {
            None => {
                let n = BigInt::from_str(s.trim()).map_err(|_| err())?;
                Ok(Rat::from_bigint(n))
            }
            Some((n, d)) => {
                let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
                let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
                if d.is_zero() {
                    return Err(err());
                }
                Ok(Rat::from_big(n, d))
            }
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_string())
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div for &Rat {
    type Output = Rat;
    fn div(self, rhs: &Rat) -> Rat {
        assert!(!rhs.is_zero(), "Rat: division by zero");
        Rat(&self.0 / &rhs.0)
    }
}

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        (&self).div(&rhs)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        self.0 *= &rhs.0;
    }
}

/// p-adic valuation: either a finite integer or +infinity (for zero).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn is_at_least(&self, bound: i64) -> bool {
        match self {
            Valuation::Finite(v) => *v >= bound,
            Valuation::Infinite => true,
        }
    }

    pub fn finite(&self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(*v),
            Valuation::Infinite => None,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
            (Valuation::Infinite, _) => Ordering::Greater,
            (_, Valuation::Infinite) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

fn int_valuation(n: &BigInt, p: &BigInt) -> i64 {
    debug_assert!(!n.is_zero());
    let mut v: i64 = 0;
    let mut cur = n.clone();
    loop {
        let (q, r) = num_integer::Integer::div_rem(&cur, p);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        cur = q;
    }
}

/// p-adic valuation of a rational. `vp(0) = +inf`.
pub fn vp(x: &Rat, p: u32) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let pb = BigInt::from(p);
    Valuation::Finite(int_valuation(x.numer(), &pb) - int_valuation(x.denom(), &pb))
}

/// Generalized binomial coefficient `a(a-1)...(a-i+1) / i!`.
pub fn gen_binom(a: &Rat, i: u64) -> Rat {
    let mut acc = Rat::one();
    for k in 0..i {
        let factor = a - &Rat::from_int(k as i64);
        acc = acc * factor / Rat::from_int((k + 1) as i64);
    }
    acc
}

/// Rational whose denominator is a power of two. These are the only
/// exponents the q-number and q-power constructions accept: they are
/// p-integral for every odd prime p.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Dyadic(Rat);

impl Dyadic {
    pub fn new(r: Rat) -> Result<Self> {
        let d = r.denom();
        // power of two <=> exactly one set bit in |d|
        let mag = d.magnitude();
        if mag.count_ones() != 1 {
            return Err(CoreError::InvalidParameter(format!(
                "not a dyadic rational: {r}"
            )));
        }
        Ok(Dyadic(r))
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic(Rat::from_int(n))
    }

    /// `n/2`.
    pub fn half_int(n: i64) -> Self {
        Dyadic(Rat::new(n, 2))
    }

    pub fn half() -> Self {
        Self::half_int(1)
    }

    pub fn value(&self) -> &Rat {
        &self.0
    }

    pub fn add_int(&self, n: i64) -> Self {
        Dyadic(&self.0 + &Rat::from_int(n))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// True for zero and negative integers, the excluded q-number bases.
    pub fn is_nonpositive_integer(&self) -> bool {
        self.0.is_integer() && !self.0.numer().is_positive()
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn vp_examples() {
        assert_eq!(vp(&Rat::zero(), 5), Valuation::Infinite);
        assert_eq!(vp(&Rat::from_int(5), 5), Valuation::Finite(1));
        assert_eq!(vp(&Rat::new(1, 2), 5), Valuation::Finite(0));
        assert_eq!(vp(&Rat::new(9, 5), 3), Valuation::Finite(2));
        assert_eq!(vp(&Rat::new(5, 27), 3), Valuation::Finite(-3));
    }

    #[test]
    fn gen_binom_examples() {
        let half = Rat::new(1, 2);
        assert_eq!(gen_binom(&half, 0), Rat::one());
        assert_eq!(gen_binom(&Rat::from_int(3), 2), Rat::from_int(3));
        assert_eq!(gen_binom(&half, 2), Rat::new(-1, 8));
        // (1/2)(-1/2)(-3/2)/6 = 1/16
        assert_eq!(gen_binom(&half, 3), Rat::new(1, 16));
    }

    #[test]
    fn dyadic_rejects_odd_denominators() {
        assert!(Dyadic::new(Rat::new(1, 2)).is_ok());
        assert!(Dyadic::new(Rat::new(3, 8)).is_ok());
        assert!(Dyadic::new(Rat::new(1, 3)).is_err());
        assert!(Dyadic::new(Rat::new(5, 6)).is_err());
    }

    #[test]
    fn rat_string_round_trip() {
        for s in ["0", "-7", "3/8", "-22/7"] {
            let r = Rat::parse(s).unwrap();
            assert_eq!(r.to_decimal_string(), s);
        }
    }

    fn arb_rat() -> impl Strategy<Value = Rat> {
        (-40i64..40, 1i64..30).prop_map(|(n, d)| Rat::new(n, d))
    }

    fn arb_dyadic() -> impl Strategy<Value = Dyadic> {
        (-20i64..20, 0u32..4).prop_map(|(n, k)| Dyadic(Rat::new(n, 1 << k)))
    }

    proptest! {
        #[test]
        fn vp_multiplicative(x in arb_rat(), y in arb_rat()) {
            prop_assume!(!x.is_zero() && !y.is_zero());
            for p in [3u32, 5, 7] {
                let vx = vp(&x, p).finite().unwrap();
                let vy = vp(&y, p).finite().unwrap();
                prop_assert_eq!(vp(&(&x * &y), p), Valuation::Finite(vx + vy));
            }
        }

        #[test]
        fn vp_ultrametric(x in arb_rat(), y in arb_rat()) {
            for p in [3u32, 5, 7] {
                let vs = vp(&(&x + &y), p);
                let m = vp(&x, p).min(vp(&y, p));
                prop_assert!(vs >= m);
                if vp(&x, p) != vp(&y, p) {
                    prop_assert_eq!(vs, m);
                }
            }
        }

        #[test]
        fn pascal_identity(a in arb_dyadic(), i in 1u64..8) {
            let am1 = a.add_int(-1);
            let lhs = gen_binom(a.value(), i);
            let rhs = &gen_binom(am1.value(), i) + &gen_binom(am1.value(), i - 1);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
