//! Exact rationals with an inline machine-word fast path.
//!
//! Values whose reduced numerator and denominator fit in an `i64` are kept
//! inline; everything else spills to a boxed `BigInt` pair. The
//! representation is canonical, so derived equality and hashing are exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// Reduced, `d > 0`, `n != i64::MIN`.
    Small(i64, i64),
    /// Reduced, `d > 0`, never representable as `Small`.
    Big(Box<(BigInt, BigInt)>),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rat(Repr);

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRatError(pub String);

fn fits(x: i128) -> bool {
    x > i64::MIN as i128 && x <= i64::MAX as i128
}

impl Rat {
    pub const fn zero() -> Rat {
        Rat(Repr::Small(0, 1))
    }

    pub const fn one() -> Rat {
        Rat(Repr::Small(1, 1))
    }

    pub fn from_int(n: i64) -> Rat {
        if n == i64::MIN {
            Rat::from_big(BigInt::from(n), BigInt::one())
        } else {
            Rat(Repr::Small(n, 1))
        }
    }

    /// `n / d`; panics when `d == 0`.
    pub fn new(n: i64, d: i64) -> Rat {
        assert!(d != 0, "zero denominator");
        Rat::from_i128(n as i128, d as i128)
    }

    fn from_i128(mut n: i128, mut d: i128) -> Rat {
        if d < 0 {
            n = -n;
            d = -d;
        }
        let g = (n.unsigned_abs()).gcd(&(d as u128));
        if g > 1 {
            n /= g as i128;
            d /= g as i128;
        }
        if fits(n) && fits(d) {
            Rat(Repr::Small(n as i64, d as i64))
        } else {
            Rat::from_big_reduced(BigInt::from(n), BigInt::from(d))
        }
    }

    pub fn from_big(n: BigInt, d: BigInt) -> Rat {
        assert!(!d.is_zero(), "zero denominator");
        let g = n.gcd(&d);
        let (mut n, mut d) = if g.is_one() { (n, d) } else { (n / &g, d / &g) };
        if d.is_negative() {
            n = -n;
            d = -d;
        }
        Rat::from_big_reduced(n, d)
    }

    fn from_big_reduced(n: BigInt, d: BigInt) -> Rat {
        if let (Some(a), Some(b)) = (n.to_i64(), d.to_i64()) {
            if a != i64::MIN {
                return Rat(Repr::Small(a, b));
            }
        }
        Rat(Repr::Big(Box::new((n, d))))
    }

    fn big_parts(&self) -> (BigInt, BigInt) {
        match &self.0 {
            Repr::Small(n, d) => (BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(b) => (b.0.clone(), b.1.clone()),
        }
    }

    pub fn numer(&self) -> BigInt {
        self.big_parts().0
    }

    pub fn denom(&self) -> BigInt {
        self.big_parts().1
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }

    pub fn is_integer(&self) -> bool {
        matches!(self.0, Repr::Small(_, 1))
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(n, _) => n.signum() as i32,
            Repr::Big(b) => {
                if b.0.is_negative() {
                    -1
                } else if b.0.is_zero() {
                    0
                } else {
                    1
                }
            }
        }
    }

    pub fn abs(&self) -> Rat {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn recip(&self) -> Rat {
        match &self.0 {
            Repr::Small(n, d) => {
                assert!(*n != 0, "inverse of zero");
                if *n < 0 {
                    Rat(Repr::Small(-*d, -*n))
                } else {
                    Rat(Repr::Small(*d, *n))
                }
            }
            Repr::Big(b) => Rat::from_big(b.1.clone(), b.0.clone()),
        }
    }

    pub fn pow(&self, e: i32) -> Rat {
        let mut base = if e < 0 { self.recip() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Rat::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(n, d) => *n as f64 / *d as f64,
            Repr::Big(b) => b.0.to_f64().unwrap_or(f64::NAN) / b.1.to_f64().unwrap_or(f64::NAN),
        }
    }

    fn add_impl(&self, o: &Rat, negate: bool) -> Rat {
        match (&self.0, &o.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                let c = if negate { -(*c as i128) } else { *c as i128 };
                if b == d {
                    if *b == 1 {
                        let s = *a as i128 + c;
                        if fits(s) {
                            return Rat(Repr::Small(s as i64, 1));
                        }
                    }
                    return Rat::from_i128(*a as i128 + c, *b as i128);
                }
                let n = *a as i128 * *d as i128 + c * *b as i128;
                let den = *b as i128 * *d as i128;
                Rat::from_i128(n, den)
            }
            _ => {
                let (a, b) = self.big_parts();
                let (mut c, d) = o.big_parts();
                if negate {
                    c = -c;
                }
                Rat::from_big(a * &d + c * &b, b * d)
            }
        }
    }
}

impl Default for Rat {
    fn default() -> Self {
        Rat::zero()
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

impl From<i32> for Rat {
    fn from(n: i32) -> Self {
        Rat::from_int(n as i64)
    }
}

impl<'a> Add<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn add(self, o: &Rat) -> Rat {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        self.add_impl(o, false)
    }
}

impl<'a> Sub<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn sub(self, o: &Rat) -> Rat {
        if o.is_zero() {
            return self.clone();
        }
        self.add_impl(o, true)
    }
}

impl<'a> Mul<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn mul(self, o: &Rat) -> Rat {
        match (&self.0, &o.0) {
            (Repr::Small(0, _), _) | (_, Repr::Small(0, _)) => Rat::zero(),
            (Repr::Small(a, 1), Repr::Small(c, 1)) => {
                let p = *a as i128 * *c as i128;
                if fits(p) {
                    Rat(Repr::Small(p as i64, 1))
                } else {
                    Rat::from_i128(p, 1)
                }
            }
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                let g1 = a.unsigned_abs().gcd(&(*d as u64)) as i128;
                let g2 = c.unsigned_abs().gcd(&(*b as u64)) as i128;
                let n = (*a as i128 / g1) * (*c as i128 / g2);
                let den = (*b as i128 / g2) * (*d as i128 / g1);
                if fits(n) && fits(den) {
                    Rat(Repr::Small(n as i64, den as i64))
                } else {
                    Rat::from_big_reduced(BigInt::from(n), BigInt::from(den))
                }
            }
            _ => {
                let (a, b) = self.big_parts();
                let (c, d) = o.big_parts();
                Rat::from_big(a * c, b * d)
            }
        }
    }
}

impl<'a> Div<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn div(self, o: &Rat) -> Rat {
        self * &o.recip()
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        match &self.0 {
            Repr::Small(n, d) => Rat(Repr::Small(-*n, *d)),
            Repr::Big(b) => Rat::from_big_reduced(-b.0.clone(), b.1.clone()),
        }
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $m(self, o: Rat) -> Rat {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Rat> for Rat {
            type Output = Rat;
            fn $m(self, o: &Rat) -> Rat {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<Rat> for &'a Rat {
            type Output = Rat;
            fn $m(self, o: Rat) -> Rat {
                self.$m(&o)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, o: &Rat) {
        *self = &*self + o;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, o: &Rat) {
        *self = &*self - o;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, o: &Rat) {
        *self = &*self * o;
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, o: &Rat) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Rat {
    fn cmp(&self, o: &Rat) -> Ordering {
        match (&self.0, &o.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => {
                let (a, b) = self.big_parts();
                let (c, d) = o.big_parts();
                (a * d).cmp(&(c * b))
            }
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(b) if b.1.is_one() => write!(f, "{}", b.0),
            Repr::Big(b) => write!(f, "{}/{}", b.0, b.1),
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = ParseRatError;
    fn from_str(s: &str) -> Result<Rat, ParseRatError> {
        let err = || ParseRatError(s.to_string());
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let ok = |p: &str| {
            let digits = p.strip_prefix('-').or_else(|| p.strip_prefix('+')).unwrap_or(p);
            !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
        };
        if !ok(n) || !ok(d) {
            return Err(err());
        }
        let n: BigInt = n.parse().map_err(|_| err())?;
        let d: BigInt = d.parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        Ok(Rat::from_big(n, d))
    }
}

/// Shorthand for literals in tests and tables.
pub fn q(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big_oracle(a: &Rat, b: &Rat, op: char) -> Rat {
        let (an, ad) = a.big_parts();
        let (bn, bd) = b.big_parts();
        match op {
            '+' => Rat::from_big(an * &bd + bn * &ad, ad * bd),
            '-' => Rat::from_big(an * &bd - bn * &ad, ad * bd),
            '*' => Rat::from_big(an * bn, ad * bd),
            _ => Rat::from_big(an * bd, ad * bn),
        }
    }

    #[test]
    fn parse_and_print() {
        assert_eq!("3/6".parse::<Rat>().unwrap().to_string(), "1/2");
        assert_eq!("-4/2".parse::<Rat>().unwrap().to_string(), "-2");
        assert_eq!("7".parse::<Rat>().unwrap(), Rat::from_int(7));
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
        assert!("1.5".parse::<Rat>().is_err());
        let huge = "123456789012345678901234567891/1024";
        assert_eq!(huge.parse::<Rat>().unwrap().to_string(), huge);
    }

    #[test]
    fn overflow_spills_and_returns() {
        let a = Rat::from_int(i64::MAX);
        let b = &a + &a;
        assert_eq!(b.to_string(), "18446744073709551614");
        let c = &b - &a;
        assert_eq!(c, a);
        assert!(matches!(c.0, Repr::Small(..)));
        let m = Rat::from_int(i64::MIN);
        assert!(matches!(m.0, Repr::Big(..)));
        assert_eq!(-(-m.clone()), m);
    }

    fn arb_rat() -> impl Strategy<Value = Rat> {
        prop_oneof![
            (-1000i64..1000, 1i64..1000).prop_map(|(n, d)| Rat::new(n, d)),
            (any::<i64>(), 1i64..i64::MAX).prop_map(|(n, d)| Rat::new(n, d)),
        ]
    }

    proptest! {
        #[test]
        fn ops_match_bigint(a in arb_rat(), b in arb_rat()) {
            prop_assert_eq!(&a + &b, big_oracle(&a, &b, '+'));
            prop_assert_eq!(&a - &b, big_oracle(&a, &b, '-'));
            prop_assert_eq!(&a * &b, big_oracle(&a, &b, '*'));
            if !b.is_zero() {
                prop_assert_eq!(&a / &b, big_oracle(&a, &b, '/'));
            }
            let s = a.to_string();
            prop_assert_eq!(s.parse::<Rat>().unwrap(), a.clone());
            prop_assert_eq!((&a - &b).signum(), a.cmp(&b) as i32);
        }
    }
}
