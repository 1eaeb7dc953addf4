//! Scalars: the exact Gaussian rationals and the float complex backend.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Relative rank tolerance of the float backend.
pub const FLOAT_TOL: f64 = 1e-9;

/// Field operations shared by the exact and the float backend.
///
/// The `*_ref` methods exist so that big-number code does not clone on every
/// operation.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True for exact arithmetic (no tolerances anywhere).
    const EXACT: bool;

    fn i() -> Self;
    fn conj(&self) -> Self;
    fn is_real(&self) -> bool;
    /// Absolute value as a float, used for pivoting and tolerances.
    fn magnitude(&self) -> f64;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_rational(q: &BigRational) -> Self;
    fn from_parts(re: &BigRational, im: &BigRational) -> Self;
    /// Real value from a float; exact backends store the float's exact binary value.
    fn from_f64(x: f64) -> Self;
    fn to_complex64(&self) -> Complex64;

    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    fn div_ref(&self, o: &Self) -> Self;

    /// `self += a * b`
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        let p = a.mul_ref(b);
        *self = self.add_ref(&p);
    }
    /// `self -= a * b`
    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        let p = a.mul_ref(b);
        *self = self.sub_ref(&p);
    }

    /// Zero up to the backend tolerance, relative to `scale`.
    fn is_negligible(&self, scale: f64) -> bool;
    /// Equality up to the backend tolerance.
    fn approx_eq(&self, other: &Self) -> bool;

    fn from_i64(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }
}

/// Exact complex number with rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussRat {
    re: BigRational,
    im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussRat { re, im: BigRational::zero() }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    /// Squared modulus, exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> GaussRat {
        assert!(!self.is_zero(), "division by zero");
        if self.im.is_zero() {
            return GaussRat::real(self.re.recip());
        }
        let n = self.norm_sqr();
        GaussRat { re: &self.re / &n, im: -(&self.im / &n) }
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}*i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}{}*i", self.re, self.im)
        } else {
            write!(f, "{}+{}*i", self.re, self.im)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed scalar {0:?}")]
pub struct ScalarParseError(pub String);

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.strip_prefix('+').unwrap_or(s);
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

impl FromStr for GaussRat {
    type Err = ScalarParseError;

    /// Accepts `a`, `a/b`, `a/b+c/d*i`, `a/b-c/d*i`, `c/d*i`, `-c/d*i`, `i`, `-i`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = || ScalarParseError(text.to_string());
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err());
        }
        let Some(body) = s.strip_suffix('i') else {
            return parse_rational(&s).map(GaussRat::real).ok_or_else(err);
        };
        let body = body.strip_suffix('*').unwrap_or(body);
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(k, _)| k)
            .last();
        let (re_txt, im_txt) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let re = parse_rational(re_txt).ok_or_else(err)?;
        let im = match im_txt {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            t => parse_rational(t).ok_or_else(err)?,
        };
        Ok(GaussRat { re, im })
    }
}

impl Zero for GaussRat {
    fn zero() -> Self {
        GaussRat { re: BigRational::zero(), im: BigRational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussRat {
    fn one() -> Self {
        GaussRat::real(BigRational::one())
    }
}

impl Add for GaussRat {
    type Output = GaussRat;
    fn add(self, o: GaussRat) -> GaussRat {
        self.add_ref(&o)
    }
}

impl Sub for GaussRat {
    type Output = GaussRat;
    fn sub(self, o: GaussRat) -> GaussRat {
        self.sub_ref(&o)
    }
}

impl Mul for GaussRat {
    type Output = GaussRat;
    fn mul(self, o: GaussRat) -> GaussRat {
        self.mul_ref(&o)
    }
}

impl Div for GaussRat {
    type Output = GaussRat;
    fn div(self, o: GaussRat) -> GaussRat {
        self.div_ref(&o)
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat { re: -self.re, im: -self.im }
    }
}

fn big_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

impl Scalar for GaussRat {
    const EXACT: bool = true;

    fn i() -> Self {
        GaussRat { re: BigRational::zero(), im: BigRational::one() }
    }
    fn conj(&self) -> Self {
        GaussRat { re: self.re.clone(), im: -self.im.clone() }
    }
    fn is_real(&self) -> bool {
        self.im.is_zero()
    }
    fn magnitude(&self) -> f64 {
        big_to_f64(&self.re).hypot(big_to_f64(&self.im))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        GaussRat::real(BigRational::new(num.into(), den.into()))
    }
    fn from_rational(q: &BigRational) -> Self {
        GaussRat::real(q.clone())
    }
    fn from_parts(re: &BigRational, im: &BigRational) -> Self {
        GaussRat { re: re.clone(), im: im.clone() }
    }
    fn from_f64(x: f64) -> Self {
        GaussRat::real(BigRational::from_float(x).unwrap_or_else(BigRational::zero))
    }
    fn to_complex64(&self) -> Complex64 {
        Complex64::new(big_to_f64(&self.re), big_to_f64(&self.im))
    }

    fn add_ref(&self, o: &Self) -> Self {
        let im = if self.im.is_zero() {
            o.im.clone()
        } else if o.im.is_zero() {
            self.im.clone()
        } else {
            &self.im + &o.im
        };
        GaussRat { re: &self.re + &o.re, im }
    }
    fn sub_ref(&self, o: &Self) -> Self {
        let im = if o.im.is_zero() {
            self.im.clone()
        } else {
            &self.im - &o.im
        };
        GaussRat { re: &self.re - &o.re, im }
    }
    fn mul_ref(&self, o: &Self) -> Self {
        match (self.im.is_zero(), o.im.is_zero()) {
            (true, true) => GaussRat::real(&self.re * &o.re),
            (true, false) => GaussRat { re: &self.re * &o.re, im: &self.re * &o.im },
            (false, true) => GaussRat { re: &self.re * &o.re, im: &self.im * &o.re },
            (false, false) => GaussRat {
                re: &self.re * &o.re - &self.im * &o.im,
                im: &self.re * &o.im + &self.im * &o.re,
            },
        }
    }
    fn div_ref(&self, o: &Self) -> Self {
        if o.im.is_zero() {
            assert!(!o.re.is_zero(), "division by zero");
            return GaussRat { re: &self.re / &o.re, im: &self.im / &o.re };
        }
        self.mul_ref(&o.inv())
    }
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let p = a.mul_ref(b);
        self.re += p.re;
        if !p.im.is_zero() {
            self.im += p.im;
        }
    }
    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let p = a.mul_ref(b);
        self.re -= p.re;
        if !p.im.is_zero() {
            self.im -= p.im;
        }
    }
    fn is_negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }
    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn i() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn is_real(&self) -> bool {
        self.im.abs() <= FLOAT_TOL * self.re.abs().max(1.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn from_rational(q: &BigRational) -> Self {
        Complex64::new(big_to_f64(q), 0.0)
    }
    fn from_parts(re: &BigRational, im: &BigRational) -> Self {
        Complex64::new(big_to_f64(re), big_to_f64(im))
    }
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn to_complex64(&self) -> Complex64 {
        *self
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn div_ref(&self, o: &Self) -> Self {
        self / o
    }
    fn is_negligible(&self, scale: f64) -> bool {
        self.norm() <= FLOAT_TOL * scale
    }
    fn approx_eq(&self, other: &Self) -> bool {
        (self - other).norm() <= FLOAT_TOL * self.norm().max(other.norm()).max(1.0)
    }
}

/// Shorthand for an exact scalar from a ratio.
pub fn q(num: i64, den: i64) -> GaussRat {
    GaussRat::from_ratio(num, den)
}

/// Shorthand for an exact scalar `a + b i` with integer parts.
pub fn gi(a: i64, b: i64) -> GaussRat {
    GaussRat::new(BigRational::from_integer(a.into()), BigRational::from_integer(b.into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        let x: GaussRat = "1/2+1/3*i".parse().unwrap();
        assert_eq!(x, GaussRat::new(BigRational::new(1.into(), 2.into()), BigRational::new(1.into(), 3.into())));
        assert_eq!("-1/3*i".parse::<GaussRat>().unwrap(), GaussRat::new(BigRational::zero(), BigRational::new((-1).into(), 3.into())));
        assert_eq!("i".parse::<GaussRat>().unwrap(), gi(0, 1));
        assert_eq!("-i".parse::<GaussRat>().unwrap(), gi(0, -1));
        assert_eq!("3-2*i".parse::<GaussRat>().unwrap(), gi(3, -2));
        assert_eq!("-4".parse::<GaussRat>().unwrap(), gi(-4, 0));
        assert!("1/0".parse::<GaussRat>().is_err());
        assert!("abc".parse::<GaussRat>().is_err());
        assert!("".parse::<GaussRat>().is_err());
    }

    #[test]
    fn display_round_trip() {
        for s in ["0", "1/2", "-3", "1/2+1/3*i", "-1/3*i", "2-1*i", "1*i"] {
            let x: GaussRat = s.parse().unwrap();
            assert_eq!(x.to_string(), s);
            assert_eq!(x.to_string().parse::<GaussRat>().unwrap(), x);
        }
    }

    #[test]
    fn arithmetic() {
        let a = gi(1, 1);
        let b = gi(1, -1);
        assert_eq!(a.mul_ref(&b), gi(2, 0));
        assert_eq!(a.div_ref(&a), GaussRat::one());
        assert_eq!(a.conj(), b);
        assert_eq!(GaussRat::i().mul_ref(&GaussRat::i()), gi(-1, 0));
        let mut c = gi(0, 0);
        c.add_mul_assign(&a, &a);
        assert_eq!(c, gi(0, 2));
    }
}
