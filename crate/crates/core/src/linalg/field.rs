//! Scalar fields for the sparse layer: the rationals and prime fields.

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::rat::Rat;

pub trait Field: Clone + PartialEq + Eq + Hash + Default + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn fadd(&self, o: &Self) -> Self;
    fn fsub(&self, o: &Self) -> Self;
    fn fmul(&self, o: &Self) -> Self;
    fn fneg(&self) -> Self;
    /// Inverse of a nonzero element.
    fn finv(&self) -> Self;
    fn fadd_assign(&mut self, o: &Self);
    /// Image of a rational; `None` when the denominator is not invertible.
    fn from_rat(r: &Rat) -> Option<Self>;
}

impl Field for Rat {
    fn zero() -> Self {
        Rat::zero()
    }
    fn one() -> Self {
        Rat::one()
    }
    fn is_zero(&self) -> bool {
        Rat::is_zero(self)
    }
    fn is_one(&self) -> bool {
        Rat::is_one(self)
    }
    fn fadd(&self, o: &Self) -> Self {
        self + o
    }
    fn fsub(&self, o: &Self) -> Self {
        self - o
    }
    fn fmul(&self, o: &Self) -> Self {
        self * o
    }
    fn fneg(&self) -> Self {
        -self
    }
    fn finv(&self) -> Self {
        self.recip()
    }
    fn fadd_assign(&mut self, o: &Self) {
        *self += o;
    }
    fn from_rat(r: &Rat) -> Option<Self> {
        Some(r.clone())
    }
}

/// Integers modulo a prime `P < 2^63`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub const MODULUS: u64 = P;

    pub fn new(x: u64) -> Self {
        Fp(x % P)
    }

    pub fn from_i64(x: i64) -> Self {
        let r = x.rem_euclid(P as i64);
        Fp(r as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut b = self;
        let mut r = Fp(1);
        while e > 0 {
            if e & 1 == 1 {
                r = r.fmul(&b);
            }
            b = b.fmul(&b);
            e >>= 1;
        }
        r
    }

    fn from_big(n: &BigInt) -> Self {
        let p = BigInt::from(P);
        let r = ((n % &p) + &p) % &p;
        Fp(r.to_u64().expect("reduced residue fits"))
    }
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Field for Fp<P> {
    #[inline]
    fn zero() -> Self {
        Fp(0)
    }
    #[inline]
    fn one() -> Self {
        Fp(1)
    }
    #[inline]
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    #[inline]
    fn is_one(&self) -> bool {
        self.0 == 1
    }
    #[inline]
    fn fadd(&self, o: &Self) -> Self {
        let s = self.0 + o.0;
        Fp(if s >= P { s - P } else { s })
    }
    #[inline]
    fn fsub(&self, o: &Self) -> Self {
        Fp(if self.0 >= o.0 { self.0 - o.0 } else { self.0 + P - o.0 })
    }
    #[inline]
    fn fmul(&self, o: &Self) -> Self {
        Fp(((self.0 as u128 * o.0 as u128) % P as u128) as u64)
    }
    #[inline]
    fn fneg(&self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
    fn finv(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero");
        self.pow(P - 2)
    }
    #[inline]
    fn fadd_assign(&mut self, o: &Self) {
        *self = self.fadd(o);
    }
    fn from_rat(r: &Rat) -> Option<Self> {
        let d = Self::from_big(&r.denom());
        if d.is_zero() {
            return None;
        }
        Some(Self::from_big(&r.numer()).fmul(&d.finv()))
    }
}

/// Primes just below `2^62` used for modular runs.
pub const PRIMES: [u64; 6] = [
    4611686018427387847,
    4611686018427387817,
    4611686018427387787,
    4611686018427387761,
    4611686018427387751,
    4611686018427387737,
];

/// Chinese remaindering of residues `r_i mod p_i` into `[0, prod p_i)`.
pub fn crt(residues: &[u64], primes: &[u64]) -> (BigInt, BigInt) {
    let mut x = BigInt::from(0);
    let mut m = BigInt::from(1);
    for (&r, &p) in residues.iter().zip(primes) {
        let pb = BigInt::from(p);
        // x + m t = r (mod p)
        let xm = ((&x % &pb) + &pb) % &pb;
        let mm = (&m % &pb).to_u64().unwrap();
        let diff = (r as i128 - xm.to_i128().unwrap()).rem_euclid(p as i128) as u64;
        let inv = modpow(mm, p - 2, p);
        let t = (diff as u128 * inv as u128 % p as u128) as u64;
        x += &m * BigInt::from(t);
        m *= pb;
    }
    (x, m)
}

fn modpow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    r
}

/// Rational reconstruction of `x mod m`: the unique `n/d` with
/// `|n|, d <= sqrt(m/2)` congruent to `x`, if one exists.
pub fn rational_reconstruction(x: &BigInt, m: &BigInt) -> Option<Rat> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), ((x % m) + m) % m);
    let (mut t0, mut t1) = (BigInt::from(0), BigInt::from(1));
    while r1 > bound {
        let qt = &r0 / &r1;
        let r2 = &r0 - &qt * &r1;
        let t2 = &t0 - &qt * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    let (n, d) = if t1.is_negative() { (-r1, -t1) } else { (r1, t1) };
    // Reject if not actually congruent (gcd(d, m) != 1).
    let back = (&n - x * &d) % m;
    if back != BigInt::from(0) {
        return None;
    }
    Some(Rat::from_big(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat::q;

    type F = Fp<{ PRIMES[0] }>;

    #[test]
    fn field_identities() {
        let a = F::from_i64(-5);
        let b = F::new(12345);
        assert_eq!(a.fadd(&a.fneg()), F::zero());
        assert_eq!(b.fmul(&b.finv()), F::one());
        assert_eq!(F::from_rat(&q(1, 2)).unwrap().fmul(&F::new(2)), F::one());
    }

    #[test]
    fn reconstruct_small_fractions() {
        for (n, d) in [(3, 32), (-7, 9), (0, 1), (1, 1), (-135, 2048)] {
            let r = q(n, d);
            let res: Vec<u64> = PRIMES[..2]
                .iter()
                .map(|&p| {
                    let pb = BigInt::from(p);
                    let num = ((r.numer() % &pb) + &pb) % &pb;
                    let den = ((r.denom() % &pb) + &pb) % &pb;
                    let den = modpow(den.to_u64().unwrap(), p - 2, p);
                    (num.to_u64().unwrap() as u128 * den as u128 % p as u128) as u64
                })
                .collect();
            let (x, m) = crt(&res, &PRIMES[..2]);
            assert_eq!(rational_reconstruction(&x, &m), Some(r));
        }
    }
}
