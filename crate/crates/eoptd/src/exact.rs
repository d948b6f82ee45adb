//! Exact scalar arithmetic: arbitrary-precision rationals plus quadratic
//! surds `a + b·√d`.
//!
//! Every optimal quantity in this crate is rational, but two places force a
//! square root into the algebra: the paired eigenvalues `(1 + c + (k-1)b ± √D)/2`
//! of a symmetric information matrix, and the ball vertex coordinates `±1/√k`.
//! [`Exact`] keeps both cases closed under the ring operations as long as all
//! operands share the same radicand, and collapses to a plain rational
//! whenever `d` happens to be a perfect square (it is at the optima).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.
pub type Rat = BigRational;

/// Shorthand for `numer/denom` as a [`Rat`].
pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

/// Integer as a [`Rat`].
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `r^e` with the convention `r^0 = 1` for every `r` (including zero).
pub fn rat_pow(r: &Rat, e: usize) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..e {
        acc *= r;
    }
    acc
}

/// Lossy conversion to `f64`.
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Renders `p/q`, or just `p` for integers.
pub fn format_rat(r: &Rat) -> String {
    r.to_string()
}

/// Parses `p/q`, an integer, or a plain decimal such as `0.3` (which becomes
/// the exact rational `3/10`).
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    if let Some(dot) = s.find('.') {
        let (int_part, frac_part) = (&s[..dot], &s[dot + 1..]);
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("invalid decimal literal `{s}`")));
        }
        let negative = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        let int_val: BigInt = if int_digits.is_empty() {
            BigInt::zero()
        } else {
            int_digits
                .parse()
                .map_err(|_| Error::Parse(format!("invalid decimal literal `{s}`")))?
        };
        let frac_val: BigInt = frac_part
            .parse()
            .map_err(|_| Error::Parse(format!("invalid decimal literal `{s}`")))?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let mut value = Rat::new(int_val * &scale + frac_val, scale);
        if negative {
            value = -value;
        }
        Ok(value)
    } else {
        s.parse()
            .map_err(|_| Error::Parse(format!("invalid rational literal `{s}`")))
    }
}

/// Exact square root: `Some(s)` with `s ≥ 0` and `s·s = r`, or `None` when
/// `r` is not the square of a rational.
pub fn sqrt_exact(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    if r.is_zero() {
        return Some(Rat::zero());
    }
    let ns = r.numer().sqrt();
    let ds = r.denom().sqrt();
    if &(&ns * &ns) == r.numer() && &(&ds * &ds) == r.denom() {
        Some(Rat::new(ns, ds))
    } else {
        None
    }
}

/// A real number of the form `a + b·√d` with rational `a`, `b`, `d`.
///
/// Invariant for the `Surd` variant: `b ≠ 0`, `d > 0` and `d` is not the
/// square of a rational (the smart constructor [`Exact::surd`] collapses
/// those cases to `Rational`). Values from *different* quadratic extensions
/// (distinct irrational radicands) cannot be mixed; arithmetic and
/// comparisons panic on such operands. All constructors in this crate keep
/// the radicand fixed within one design or one spectrum, so the situation
/// does not arise in practice.
#[derive(Clone, Debug)]
pub enum Exact {
    Rational(Rat),
    Surd { a: Rat, b: Rat, d: Rat },
}

impl Exact {
    pub fn from_rat(r: Rat) -> Self {
        Exact::Rational(r)
    }

    pub fn from_int(n: i64) -> Self {
        Exact::Rational(rat_int(n))
    }

    /// `a + b·√d`, normalized.
    pub fn surd(a: Rat, b: Rat, d: Rat) -> Self {
        if b.is_zero() || d.is_zero() {
            return Exact::Rational(a);
        }
        assert!(
            d.is_positive(),
            "quadratic surd requires a positive radicand, got {d}"
        );
        match sqrt_exact(&d) {
            Some(s) => Exact::Rational(a + b * s),
            None => Exact::Surd { a, b, d },
        }
    }

    /// `sign/√k`: a ball vertex coordinate. Collapses to a rational when `k`
    /// is a perfect square.
    pub fn inv_sqrt(sign: i8, k: usize) -> Self {
        assert!(k >= 1 && (sign == 1 || sign == -1));
        Exact::surd(Rat::zero(), rat_int(sign as i64), rat(1, k as i64))
    }

    pub fn zero() -> Self {
        Exact::Rational(Rat::zero())
    }

    pub fn one() -> Self {
        Exact::Rational(Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Exact::Rational(r) if r.is_zero())
    }

    /// The rational value, if this number is rational.
    pub fn as_rational(&self) -> Option<&Rat> {
        match self {
            Exact::Rational(r) => Some(r),
            Exact::Surd { .. } => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Exact::Rational(r) => rat_to_f64(r),
            Exact::Surd { a, b, d } => rat_to_f64(a) + rat_to_f64(b) * rat_to_f64(d).sqrt(),
        }
    }

    /// Sign of the value: `Ordering::Greater` for positive, etc.
    pub fn sign(&self) -> Ordering {
        match self {
            Exact::Rational(r) => r.cmp(&Rat::zero()),
            Exact::Surd { a, b, d } => {
                // a + b√d with b ≠ 0 and d not a perfect square is never 0.
                if b.is_positive() {
                    if !a.is_negative() {
                        Ordering::Greater
                    } else {
                        (b * b * d).cmp(&(a * a))
                    }
                } else if !a.is_positive() {
                    Ordering::Less
                } else {
                    (a * a).cmp(&(b * b * d))
                }
            }
        }
    }

    pub fn abs(&self) -> Exact {
        if self.sign() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    pub fn pow(&self, e: usize) -> Exact {
        let mut acc = Exact::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn mul_rat(&self, r: &Rat) -> Exact {
        match self {
            Exact::Rational(a) => Exact::Rational(a * r),
            Exact::Surd { a, b, d } => Exact::surd(a * r, b * r, d.clone()),
        }
    }

    fn parts(&self) -> (Rat, Rat, Option<&Rat>) {
        match self {
            Exact::Rational(r) => (r.clone(), Rat::zero(), None),
            Exact::Surd { a, b, d } => (a.clone(), b.clone(), Some(d)),
        }
    }

    fn common_radicand<'a>(x: Option<&'a Rat>, y: Option<&'a Rat>) -> Option<&'a Rat> {
        match (x, y) {
            (None, None) => None,
            (Some(d), None) | (None, Some(d)) => Some(d),
            (Some(d1), Some(d2)) => {
                assert!(
                    d1 == d2,
                    "cannot combine surds over different radicands ({d1} vs {d2})"
                );
                Some(d1)
            }
        }
    }
}

impl PartialEq for Exact {
    fn eq(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }
}

impl Eq for Exact {}

impl PartialOrd for Exact {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Exact {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).sign()
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exact::Rational(r) => write!(f, "{r}"),
            Exact::Surd { a, b, d } => {
                if a.is_zero() {
                    write!(f, "{b}*sqrt({d})")
                } else {
                    write!(f, "{a} + {b}*sqrt({d})")
                }
            }
        }
    }
}

impl Add for &Exact {
    type Output = Exact;
    fn add(self, rhs: &Exact) -> Exact {
        let (a1, b1, d1) = self.parts();
        let (a2, b2, d2) = rhs.parts();
        match Exact::common_radicand(d1, d2) {
            None => Exact::Rational(a1 + a2),
            Some(d) => Exact::surd(a1 + a2, b1 + b2, d.clone()),
        }
    }
}

impl Sub for &Exact {
    type Output = Exact;
    fn sub(self, rhs: &Exact) -> Exact {
        self + &(-rhs)
    }
}

impl Neg for &Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        match self {
            Exact::Rational(r) => Exact::Rational(-r),
            Exact::Surd { a, b, d } => Exact::Surd {
                a: -a,
                b: -b,
                d: d.clone(),
            },
        }
    }
}

impl Mul for &Exact {
    type Output = Exact;
    fn mul(self, rhs: &Exact) -> Exact {
        let (a1, b1, d1) = self.parts();
        let (a2, b2, d2) = rhs.parts();
        match Exact::common_radicand(d1, d2) {
            None => Exact::Rational(a1 * a2),
            Some(d) => Exact::surd(&a1 * &a2 + &b1 * &b2 * d, a1 * b2 + a2 * b1, d.clone()),
        }
    }
}

macro_rules! owned_ops {
    ($($trait:ident :: $method:ident),*) => {$(
        impl $trait for Exact {
            type Output = Exact;
            fn $method(self, rhs: Exact) -> Exact {
                (&self).$method(&rhs)
            }
        }
    )*};
}
owned_ops!(Add::add, Sub::sub, Mul::mul);

impl Neg for Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        -&self
    }
}

impl num_traits::Zero for Exact {
    fn zero() -> Self {
        Exact::zero()
    }
    fn is_zero(&self) -> bool {
        Exact::is_zero(self)
    }
}

impl num_traits::One for Exact {
    fn one() -> Self {
        Exact::one()
    }
}

impl From<Rat> for Exact {
    fn from(r: Rat) -> Self {
        Exact::Rational(r)
    }
}

impl From<i64> for Exact {
    fn from(n: i64) -> Self {
        Exact::from_int(n)
    }
}

/// `f64` as an exact rational (used when ingesting float coordinates).
pub fn rat_from_f64(x: f64) -> Result<Rat> {
    Rat::from_f64(x).ok_or_else(|| Error::Parse(format!("non-finite value {x}")))
}
