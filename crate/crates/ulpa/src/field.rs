//! Exact coefficient fields.
//!
//! Every scalar in this crate is exact: arbitrary-precision rationals or a
//! prime field. There is no floating point anywhere. The field object
//! carries whatever context the element representation needs (for a prime
//! field, the modulus), in the usual ring-object style: elements are plain
//! data and all arithmetic goes through the field value.

use std::fmt;

use num::{BigInt, BigRational, One, Zero};

/// An exact field of scalars.
// The conversions take &self: the field value carries context (a prime
// field needs its modulus).
#[allow(clippy::wrong_self_convention)]
pub trait Field: Clone + PartialEq + fmt::Debug {
    /// Element representation. `Ord` is required so elements can key
    /// deterministic containers.
    type Elem: Clone + Eq + Ord + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn from_i64(&self, n: i64) -> Self::Elem;

    /// The fraction `num/den`; `None` when `den` maps to zero in the field.
    fn from_ratio(&self, num: i64, den: i64) -> Option<Self::Elem>;

    fn render(&self, a: &Self::Elem) -> String;

    /// Sign-split rendering for printers that place the sign themselves:
    /// `(negative, magnitude)`. Fields without a meaningful sign render
    /// everything as non-negative.
    fn render_signed(&self, a: &Self::Elem) -> (bool, String) {
        (false, self.render(a))
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// All roots of the polynomial `sum coeffs[i] t^i` in this field, when
    /// the field can enumerate them exactly. `None` means "unsupported";
    /// callers fall back to treating irreducibility as asserted.
    fn roots_of_poly(&self, _coeffs: &[Self::Elem]) -> Option<Vec<Self::Elem>> {
        None
    }
}

/// The rational numbers, with arbitrary-precision arithmetic.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }

    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_ratio(&self, num: i64, den: i64) -> Option<BigRational> {
        if den == 0 {
            None
        } else {
            Some(BigRational::new(BigInt::from(num), BigInt::from(den)))
        }
    }

    fn render(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn render_signed(&self, a: &BigRational) -> (bool, String) {
        use num::Signed;
        (a.is_negative(), self.render(&a.abs()))
    }

    fn roots_of_poly(&self, coeffs: &[BigRational]) -> Option<Vec<BigRational>> {
        rational_roots(coeffs)
    }
}

/// Rational-root search: clear denominators, enumerate divisors of the
/// trailing and leading integer coefficients. Gives up (returns `None`)
/// when the integers involved do not fit in `i128`.
fn rational_roots(coeffs: &[BigRational]) -> Option<Vec<BigRational>> {
    let deg = coeffs.iter().rposition(|c| !c.is_zero())?;
    if deg == 0 {
        return Some(Vec::new());
    }
    let mut denom_lcm = BigInt::one();
    for c in &coeffs[..=deg] {
        denom_lcm = num::integer::lcm(denom_lcm, c.denom().clone());
    }
    let ints: Vec<BigInt> = coeffs[..=deg]
        .iter()
        .map(|c| (c * BigRational::from_integer(denom_lcm.clone())).to_integer())
        .collect();
    // Strip powers of t so the trailing coefficient is nonzero; t = 0 is a
    // root exactly when the original trailing coefficient vanished.
    let val = ints.iter().position(|c| !c.is_zero())?;
    let mut roots = Vec::new();
    if val > 0 {
        roots.push(BigRational::zero());
    }
    let body = &ints[val..];
    if body.len() < 2 {
        return Some(roots);
    }
    let lead: i128 = big_to_i128(body.last().unwrap())?;
    let trail: i128 = big_to_i128(&body[0])?;
    for p in divisors(trail.unsigned_abs()) {
        for q in divisors(lead.unsigned_abs()) {
            for sign in [1i128, -1] {
                let cand = BigRational::new(BigInt::from(sign * p as i128), BigInt::from(q as i128));
                let mut acc = BigRational::zero();
                for c in body.iter().rev() {
                    acc = acc * &cand + BigRational::from_integer(c.clone());
                }
                if acc.is_zero() && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    Some(roots)
}

fn big_to_i128(n: &BigInt) -> Option<i128> {
    use num::ToPrimitive;
    n.to_i128()
}

fn divisors(n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d = 1u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            out.push(n / d);
        }
        d += 1;
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// The field of integers modulo a prime `p`, `p < 2^31`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, PrimeFieldError> {
        if !(2..(1 << 31)).contains(&p) {
            return Err(PrimeFieldError::OutOfRange(p));
        }
        let mut d = 2;
        while d * d <= p {
            if p.is_multiple_of(d) {
                return Err(PrimeFieldError::Composite(p));
            }
            d += 1;
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PrimeFieldError {
    #[error("modulus {0} out of supported range [2, 2^31)")]
    OutOfRange(u64),
    #[error("modulus {0} is not prime")]
    Composite(u64),
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.p
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }

    fn neg(&self, a: &u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if a.is_multiple_of(self.p) {
            None
        } else {
            Some(self.pow(*a, self.p - 2))
        }
    }

    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    fn from_ratio(&self, num: i64, den: i64) -> Option<u64> {
        let d = self.from_i64(den);
        let n = self.from_i64(num);
        self.inv(&d).map(|di| self.mul(&n, &di))
    }

    fn render(&self, a: &u64) -> String {
        (a % self.p).to_string()
    }

    fn roots_of_poly(&self, coeffs: &[u64]) -> Option<Vec<u64>> {
        let deg = coeffs.iter().rposition(|c| *c != 0)?;
        let mut roots = Vec::new();
        for cand in 0..self.p {
            let mut acc = 0u64;
            for c in coeffs[..=deg].iter().rev() {
                acc = (acc * cand + c) % self.p;
            }
            if acc == 0 {
                roots.push(cand);
            }
        }
        Some(roots)
    }
}
