//! Coefficient fields.
//!
//! All algebra in this crate is generic over an exact [`Field`]. Gradings are
//! always arbitrary-precision rationals regardless of the coefficient type.

use std::cell::Cell;
use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ParseError;

/// Arbitrary-precision rational numbers.
pub type Rational = BigRational;

/// An exact field.
///
/// Implementations must be exact: equality with zero is decided without
/// rounding, which is what makes Gröbner verdicts meaningful. Every verdict
/// the pipeline reports is computed over [`Rational`]; [`Zp`] only steers
/// the search for certificates that are then checked over the rationals.
pub trait Field:
    Clone
    + Debug
    + Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    /// Exact conversion from a rational; `None` when not representable.
    fn from_rational(q: &Rational) -> Option<Self>;

    fn to_rational(&self) -> Rational;

    fn from_i64(n: i64) -> Self;

    /// Multiplicative inverse. Panics on zero.
    fn inverse(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        Self::one() / self
    }
}

impl Field for BigRational {
    fn from_rational(q: &Rational) -> Option<Self> {
        Some(q.clone())
    }

    fn to_rational(&self) -> Rational {
        self.clone()
    }

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

/// Machine-word rationals. Arithmetic panics on overflow, so this is only
/// suitable for small experiments; everything the CLI does runs on
/// [`Rational`].
impl Field for Ratio<i64> {
    fn from_rational(q: &Rational) -> Option<Self> {
        let n = q.numer().to_i64()?;
        let d = q.denom().to_i64()?;
        Some(Ratio::new(n, d))
    }

    fn to_rational(&self) -> Rational {
        BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }

    fn from_i64(n: i64) -> Self {
        Ratio::from_integer(n)
    }
}

thread_local! {
    static MODULUS: Cell<u64> = const { Cell::new(2_147_483_647) };
}

/// Residues modulo a prime below `2^31` chosen per thread with
/// [`with_modulus`].
///
/// Values carry no modulus of their own: mixing residues created under
/// different moduli is meaningless, so they must not escape the closure.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Zp(u64);

/// Runs `f` with the `Zp` modulus set to the prime `p < 2^31`.
pub fn with_modulus<R>(p: u64, f: impl FnOnce() -> R) -> R {
    assert!(p > 2 && p < (1 << 31), "modulus out of range");
    let old = MODULUS.with(|m| m.replace(p));
    let out = f();
    MODULUS.with(|m| m.set(old));
    out
}

/// Primes below `2^31` in decreasing order.
pub fn large_primes() -> impl Iterator<Item = u64> {
    let is_prime = |n: u64| n % 2 == 1 && (3..).step_by(2).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
    (1u64 << 20..(1 << 31)).rev().filter(move |&n| is_prime(n))
}

impl Zp {
    pub fn modulus() -> u64 {
        MODULUS.with(|m| m.get())
    }

    pub fn new(n: u64) -> Self {
        Zp(n % Self::modulus())
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn from_bigint(n: &BigInt) -> Self {
        let r = n.mod_floor(&BigInt::from(Self::modulus()));
        Zp(r.to_u64().expect("residue fits"))
    }
}

impl Debug for Zp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Display for Zp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Zero for Zp {
    fn zero() -> Self {
        Zp(0)
    }

    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl One for Zp {
    fn one() -> Self {
        Zp(1)
    }
}

impl Neg for Zp {
    type Output = Zp;

    fn neg(self) -> Zp {
        if self.0 == 0 {
            self
        } else {
            Zp(Self::modulus() - self.0)
        }
    }
}

impl Add for Zp {
    type Output = Zp;

    fn add(self, o: Zp) -> Zp {
        let p = Self::modulus();
        let s = self.0 + o.0;
        Zp(if s >= p { s - p } else { s })
    }
}

impl Sub for Zp {
    type Output = Zp;

    fn sub(self, o: Zp) -> Zp {
        let p = Self::modulus();
        Zp(if self.0 >= o.0 { self.0 - o.0 } else { self.0 + p - o.0 })
    }
}

impl Mul for Zp {
    type Output = Zp;

    fn mul(self, o: Zp) -> Zp {
        Zp(self.0 * o.0 % Self::modulus())
    }
}

impl Div for Zp {
    type Output = Zp;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Zp) -> Zp {
        self * o.inverse()
    }
}

macro_rules! zp_by_ref {
    ($($tr:ident $m:ident),*) => {$(
        impl<'a> $tr<&'a Zp> for Zp {
            type Output = Zp;

            fn $m(self, o: &'a Zp) -> Zp {
                $tr::$m(self, *o)
            }
        }
    )*};
}

zp_by_ref!(Add add, Sub sub, Mul mul, Div div);

impl Field for Zp {
    /// `None` when the modulus divides the denominator.
    fn from_rational(q: &Rational) -> Option<Self> {
        let d = Self::from_bigint(q.denom());
        (!d.is_zero()).then(|| Self::from_bigint(q.numer()) / d)
    }

    /// The least nonnegative representative; not a rational reconstruction.
    fn to_rational(&self) -> Rational {
        BigRational::from_integer(BigInt::from(self.0))
    }

    fn from_i64(n: i64) -> Self {
        Self::from_bigint(&BigInt::from(n))
    }

    fn inverse(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero");
        let p = Self::modulus() as i64;
        let (mut r0, mut r1, mut s0, mut s1) = (p, self.0 as i64, 0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        Zp(s0.rem_euclid(p) as u64)
    }
}

/// The unique `n/d` with `|n|, d ≤ sqrt(m/2)` congruent to `a` modulo `m`,
/// if there is one.
pub fn rational_reconstruction(a: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m >> 1u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let (q, r) = r0.div_rem(&r1);
        (r0, r1) = (r1, r);
        let t = &t0 - &q * &t1;
        (t0, t1) = (t1, t);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `p`, `-p` or `p/q` (whitespace around `/` allowed).
pub fn parse_rational(src: &str) -> Result<Rational, ParseError> {
    let s = src.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let bad = || ParseError::BadNumber(s.to_string());
    let n = BigInt::from_str(num).map_err(|_| bad())?;
    let d = match den {
        Some(d) => BigInt::from_str(d).map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(ParseError::ZeroDenominator(s.to_string()));
    }
    Ok(BigRational::new(n, d))
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Smallest integer `>= q`.
pub fn ceil_to_u32(q: &Rational) -> u32 {
    if q.is_negative() {
        return 0;
    }
    q.ceil().to_integer().to_u32().unwrap_or(u32::MAX)
}
