//! Exact scalars with an involution: rationals (trivial involution) and
//! Gaussian rationals (complex conjugation).
//!
//! String grammar, shared by both fields:
//!
//! ```text
//! rational := ["-"] digits ["/" digits]
//! gaussian := rational
//!           | [rational] ("+" | "-") [unsigned-rational] "i"
//!           | ["-"] [unsigned-rational] "i"
//! ```
//!
//! `5/3i` means `(5/3)·i`. Formatting is canonical (reduced fractions,
//! positive denominators, unit coefficients omitted), so `format ∘ parse`
//! is the identity on canonical strings.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An exact field with an involutive anti-automorphism `⋆`.
pub trait Scalar:
    Clone + PartialEq + Eq + std::hash::Hash + fmt::Debug + fmt::Display + FromStr<Err = Error>
{
    const FIELD: Field;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `None` for zero.
    fn inv(&self) -> Option<Self>;
    /// The involution `⋆`.
    fn star(&self) -> Self;

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }

    /// The real symmetric matrix of the quadratic form `x ↦ (x, x)` over
    /// the underlying ℚ-vector space.
    fn realify(gram: &[Vec<Self>]) -> Vec<Vec<Rational>>;

    /// A random element with integer parts in `-range..=range`.
    fn random<R: Rng + ?Sized>(rng: &mut R, range: i64) -> Self;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    /// ℚ with the identity involution.
    #[serde(rename = "Q")]
    Rational,
    /// ℚ(i) with complex conjugation.
    #[serde(rename = "Qi")]
    Gaussian,
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Q" => Ok(Field::Rational),
            "Qi" => Ok(Field::Gaussian),
            _ => Err(Error::InvalidParams(format!(
                "unknown field `{s}` (expected Q or Qi)"
            ))),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(pub BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }
}

fn parse_unsigned_rational(s: &str) -> Option<BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    if !digits(num) || den.is_some_and(|d| !digits(d)) {
        return None;
    }
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = match den {
        Some(d) => d.parse().ok()?,
        None => BigInt::one(),
    };
    (!den.is_zero()).then(|| BigRational::new(num, den))
}

fn parse_signed_rational(s: &str) -> Option<BigRational> {
    match s.strip_prefix('-') {
        Some(rest) => parse_unsigned_rational(rest).map(|r| -r),
        None => parse_unsigned_rational(s),
    }
}

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_rational(&self.0, f)
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_signed_rational(s)
            .map(Rational)
            .ok_or_else(|| Error::ScalarParse(s.to_string()))
    }
}

impl Scalar for Rational {
    const FIELD: Field = Field::Rational;

    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn one() -> Self {
        Rational(BigRational::one())
    }
    fn from_i64(v: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(v)))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        Rational(&self.0 + &other.0)
    }
    fn sub(&self, other: &Self) -> Self {
        Rational(&self.0 - &other.0)
    }
    fn mul(&self, other: &Self) -> Self {
        Rational(&self.0 * &other.0)
    }
    fn neg(&self) -> Self {
        Rational(-&self.0)
    }
    fn inv(&self) -> Option<Self> {
        (!self.0.is_zero()).then(|| Rational(self.0.recip()))
    }
    fn star(&self) -> Self {
        self.clone()
    }
    fn realify(gram: &[Vec<Self>]) -> Vec<Vec<Rational>> {
        gram.to_vec()
    }
    fn random<R: Rng + ?Sized>(rng: &mut R, range: i64) -> Self {
        Rational::from_i64(rng.random_range(-range..=range))
    }
}

/// `re + im·i` with rational parts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gaussian {
    pub re: BigRational,
    pub im: BigRational,
}

impl Gaussian {
    pub fn new(re: Rational, im: Rational) -> Self {
        Gaussian { re: re.0, im: im.0 }
    }

    pub fn i() -> Self {
        Gaussian {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    /// `|z|² = re² + im²`.
    pub fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl fmt::Display for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return fmt_rational(&self.re, f);
        }
        if !self.re.is_zero() {
            fmt_rational(&self.re, f)?;
            if self.im.is_positive() {
                f.write_str("+")?;
            }
        }
        if self.im == -BigRational::one() {
            f.write_str("-")?;
        } else if !self.im.is_one() {
            fmt_rational(&self.im, f)?;
        }
        f.write_str("i")
    }
}

impl fmt::Debug for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Gaussian {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ScalarParse(s.to_string());
        let Some(body) = s.strip_suffix('i') else {
            return Ok(Gaussian {
                re: parse_signed_rational(s).ok_or_else(bad)?,
                im: BigRational::zero(),
            });
        };
        // split before the last sign that is not leading
        let split = body
            .char_indices()
            .rev()
            .find(|&(k, c)| k > 0 && (c == '+' || c == '-'))
            .map(|(k, _)| k);
        let (re, coef) = match split {
            Some(k) => (parse_signed_rational(&body[..k]).ok_or_else(bad)?, &body[k..]),
            None => (BigRational::zero(), body),
        };
        let (negative, magnitude) = match coef.as_bytes().first() {
            Some(b'-') => (true, &coef[1..]),
            Some(b'+') if split.is_some() => (false, &coef[1..]),
            _ => (false, coef),
        };
        let im = if magnitude.is_empty() {
            BigRational::one()
        } else {
            parse_unsigned_rational(magnitude).ok_or_else(bad)?
        };
        Ok(Gaussian {
            re,
            im: if negative { -im } else { im },
        })
    }
}

impl Scalar for Gaussian {
    const FIELD: Field = Field::Gaussian;

    fn zero() -> Self {
        Gaussian {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }
    fn one() -> Self {
        Gaussian {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }
    fn from_i64(v: i64) -> Self {
        Gaussian {
            re: BigRational::from_integer(BigInt::from(v)),
            im: BigRational::zero(),
        }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        Gaussian {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }
    fn sub(&self, o: &Self) -> Self {
        Gaussian {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
    fn mul(&self, o: &Self) -> Self {
        Gaussian {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
    fn neg(&self) -> Self {
        Gaussian {
            re: -&self.re,
            im: -&self.im,
        }
    }
    fn inv(&self) -> Option<Self> {
        let n = self.norm_sq();
        (!n.is_zero()).then(|| Gaussian {
            re: &self.re / &n,
            im: -&self.im / &n,
        })
    }
    fn star(&self) -> Self {
        Gaussian {
            re: self.re.clone(),
            im: -&self.im,
        }
    }
    /// With `g = A + iB` and `x = u + iv`, `(x, x) = [u v] M [u v]ᵀ` for
    /// `M = [[A, B], [-B, A]]`, which is symmetric since `A` is symmetric and
    /// `B` antisymmetric.
    fn realify(gram: &[Vec<Self>]) -> Vec<Vec<Rational>> {
        let n = gram.len();
        let mut m = vec![vec![Rational::zero(); 2 * n]; 2 * n];
        for i in 0..n {
            for j in 0..n {
                let a = Rational(gram[i][j].re.clone());
                let b = Rational(gram[i][j].im.clone());
                m[i][j] = a.clone();
                m[n + i][n + j] = a;
                m[i][n + j] = b.clone();
                m[n + i][j] = b.neg();
            }
        }
        m
    }
    fn random<R: Rng + ?Sized>(rng: &mut R, range: i64) -> Self {
        Gaussian {
            re: BigRational::from_integer(BigInt::from(rng.random_range(-range..=range))),
            im: BigRational::from_integer(BigInt::from(rng.random_range(-range..=range))),
        }
    }
}
