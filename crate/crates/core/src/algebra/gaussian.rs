use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ring::{Ring, Scalar};

/// Complex number with exact rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_i64(n: i64) -> Self {
        GaussianRational::real(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn real(re: BigRational) -> Self {
        GaussianRational { re, im: BigRational::zero() }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        GaussianRational::real(BigRational::new(num.into(), den.into()))
    }

    pub fn complex(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        GaussianRational {
            re: BigRational::new(re_num.into(), re_den.into()),
            im: BigRational::new(im_num.into(), im_den.into()),
        }
    }

    pub fn i() -> Self {
        GaussianRational { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn from_bigint(n: BigInt) -> Self {
        GaussianRational::real(BigRational::from_integer(n))
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        GaussianRational { re: &self.re * r, im: &self.im * r }
    }

    /// Exact conversion of a finite double (binary fractions are rationals).
    pub fn from_c64(z: Complex64) -> Option<Self> {
        Some(GaussianRational {
            re: BigRational::from_float(z.re)?,
            im: BigRational::from_float(z.im)?,
        })
    }

    /// Parse a decimal or fraction literal like `12`, `-3/4`, `0.125`, `1e-3`.
    pub fn parse_real(text: &str) -> Option<BigRational> {
        let t = text.trim();
        if t.is_empty() {
            return None;
        }
        if let Some((a, b)) = t.split_once('/') {
            let n = Self::parse_real(a)?;
            let d = Self::parse_real(b)?;
            if d.is_zero() {
                return None;
            }
            return Some(n / d);
        }
        let (neg, body) = match t.as_bytes()[0] {
            b'-' => (true, &t[1..]),
            b'+' => (false, &t[1..]),
            _ => (false, t),
        };
        let (mant, exp) = match body.find(['e', 'E']) {
            Some(pos) => (&body[..pos], body[pos + 1..].parse::<i32>().ok()?),
            None => (body, 0),
        };
        let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits = format!("{int_part}{frac_part}");
        let mut value = BigRational::from_integer(digits.parse::<BigInt>().ok()?);
        let shift = exp - frac_part.len() as i32;
        let ten = BigRational::from_integer(BigInt::from(10));
        if shift >= 0 {
            value *= num_traits::pow(ten, shift as usize);
        } else {
            value /= num_traits::pow(ten, (-shift) as usize);
        }
        Some(if neg { -value } else { value })
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rational(&self.re));
        }
        let im_abs = self.im.abs();
        let im_txt = if im_abs.is_one() { String::new() } else { fmt_rational(&im_abs) };
        let im_txt = if im_txt.contains('/') { format!("({im_txt})") } else { im_txt };
        if self.re.is_zero() {
            let sign = if self.im.is_negative() { "-" } else { "" };
            return write!(f, "{sign}{im_txt}{}", if im_txt.is_empty() { "i" } else { "*i" });
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        let unit = if im_txt.is_empty() { "i" } else { "*i" };
        write!(f, "{}{}{}{}", fmt_rational(&self.re), sign, im_txt, unit)
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        GaussianRational { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        GaussianRational { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        &self * &o
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussianRational::real(&self.re * &o.re);
        }
        GaussianRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Div for GaussianRational {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        assert!(!Ring::is_zero(&o), "division by zero Gaussian rational");
        if o.im.is_zero() {
            return GaussianRational { re: self.re / &o.re, im: self.im / &o.re };
        }
        let n = o.norm_sqr();
        let c = Scalar::conj(&o);
        let p = self * c;
        GaussianRational { re: p.re / &n, im: p.im / n }
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        GaussianRational { re: -self.re, im: -self.im }
    }
}

impl Ring for GaussianRational {
    fn zero() -> Self {
        GaussianRational::default()
    }
    fn one() -> Self {
        GaussianRational::from_i64(1)
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn from_gaussian(c: &GaussianRational) -> Self {
        c.clone()
    }
    fn from_i64(n: i64) -> Self {
        GaussianRational::from_i64(n)
    }
}

impl Scalar for GaussianRational {
    fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
    fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -self.im.clone() }
    }
}
