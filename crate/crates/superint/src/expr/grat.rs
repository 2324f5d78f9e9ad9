//! Gaussian-rational coefficient field: a + b·i with a, b exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GRat {
    pub fn zero() -> Self {
        GRat { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        GRat { re: BigRational::one(), im: BigRational::zero() }
    }

    pub fn i() -> Self {
        GRat { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn from_int(n: i64) -> Self {
        GRat { re: BigRational::from_integer(BigInt::from(n)), im: BigRational::zero() }
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        GRat {
            re: BigRational::new(BigInt::from(p), BigInt::from(q)),
            im: BigRational::zero(),
        }
    }

    pub fn from_rational(r: BigRational) -> Self {
        GRat { re: r, im: BigRational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Purely imaginary with no real part (and nonzero).
    pub fn is_imaginary(&self) -> bool {
        self.re.is_zero() && !self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GRat { re: self.re.clone(), im: -self.im.clone() }
    }

    /// |z|² = a² + b², a rational.
    pub fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero");
        let n = self.norm_sq();
        GRat { re: &self.re / &n, im: -(&self.im / &n) }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = GRat::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }
}

impl Add for &GRat {
    type Output = GRat;
    fn add(self, rhs: &GRat) -> GRat {
        GRat { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl AddAssign<&GRat> for GRat {
    fn add_assign(&mut self, rhs: &GRat) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl Sub for &GRat {
    type Output = GRat;
    fn sub(self, rhs: &GRat) -> GRat {
        GRat { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul for &GRat {
    type Output = GRat;
    fn mul(self, rhs: &GRat) -> GRat {
        GRat {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Div for &GRat {
    type Output = GRat;
    fn div(self, rhs: &GRat) -> GRat {
        self * &rhs.inv()
    }
}

impl Neg for &GRat {
    type Output = GRat;
    fn neg(self) -> GRat {
        GRat { re: -self.re.clone(), im: -self.im.clone() }
    }
}

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            fmt_rational(&self.re, f)
        } else if self.re.is_zero() {
            fmt_rational(&self.im, f)?;
            write!(f, "*i")
        } else {
            write!(f, "(")?;
            fmt_rational(&self.re, f)?;
            if self.im.is_positive() {
                write!(f, "+")?;
            }
            fmt_rational(&self.im, f)?;
            write!(f, "*i)")
        }
    }
}

impl fmt::Debug for GRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
