//! Coefficient fields.
//!
//! Every algebraic routine in the crate is generic over [`Scalar`]. Two
//! families implement it: exact Gaussian rationals and IEEE complex floats.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// Exact complex rational `p/q + (r/s) i`.
pub type GaussRat = Complex<BigRational>;
/// Double precision complex number.
pub type C64 = Complex<f64>;
/// Single precision complex number.
pub type C32 = Complex<f32>;

/// A complex coefficient field, exact or floating.
pub trait Scalar: Num + Neg<Output = Self> + Clone + Debug + PartialEq + Send + Sync + 'static {
    /// True for exact arithmetic.
    const EXACT: bool;
    /// Short mode name used in reports.
    const MODE: &'static str;

    fn from_i64(n: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    /// Converts a float; exact fields take the binary value exactly.
    fn from_c64(z: C64) -> Self;
    fn imag_unit() -> Self;
    fn to_c64(&self) -> C64;

    /// Exact zero test for exact fields, `|z| <= tol` for floats.
    fn is_small(&self, tol: f64) -> bool;

    /// A square root in the field, when one exists.
    fn try_sqrt(&self) -> Option<Self>;

    /// Parses an unsigned decimal literal such as `0.25` or `12`.
    fn parse_decimal(text: &str) -> Option<Self>;

    /// Real and imaginary parts as report strings.
    fn to_parts(&self) -> (String, String);
    fn from_parts(re: &str, im: &str) -> Option<Self>;

    fn abs_f64(&self) -> f64 {
        self.to_c64().norm()
    }

    /// The value as a small real rational `(p, q)`, if it is one.
    fn as_small_rational(&self, tol: f64) -> Option<(i64, i64)>;

    fn pow_u32(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc * self.clone();
        }
        acc
    }
}

fn big_ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

fn rational_to_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn rational_from_str(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

fn decimal_to_rational(text: &str) -> Option<BigRational> {
    let (int_part, frac_part) = match text.split_once('.') {
        Some((a, b)) => (a, b),
        None => (text, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let all_digits = |s: &str| s.chars().all(|c| c.is_ascii_digit());
    if !all_digits(int_part) || !all_digits(frac_part) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    Some(BigRational::new(numer, denom))
}

/// Best rational approximation with bounded denominator (continued fractions).
fn approximate_rational(x: f64, max_den: i64, tol: f64) -> Option<(i64, i64)> {
    if !x.is_finite() || x.abs() > 1e12 {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut r = x;
    for _ in 0..40 {
        let a = r.floor();
        let ai = a as i64;
        let p2 = ai.checked_mul(p1)?.checked_add(p0)?;
        let q2 = ai.checked_mul(q1)?.checked_add(q0)?;
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        if (x - p1 as f64 / q1 as f64).abs() <= tol * x.abs().max(1.0) {
            return Some((p1, q1));
        }
        let frac = r - a;
        if frac.abs() < 1e-300 {
            break;
        }
        r = 1.0 / frac;
    }
    if q1 != 0 && (x - p1 as f64 / q1 as f64).abs() <= tol * x.abs().max(1.0) {
        Some((p1, q1))
    } else {
        None
    }
}

impl Scalar for GaussRat {
    const EXACT: bool = true;
    const MODE: &'static str = "exact";

    fn from_i64(n: i64) -> Self {
        Complex::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(big_ratio(num, den), BigRational::zero())
    }

    fn from_c64(z: C64) -> Self {
        let conv = |v: f64| BigRational::from_float(v).unwrap_or_else(BigRational::zero);
        Complex::new(conv(z.re), conv(z.im))
    }

    fn imag_unit() -> Self {
        Complex::new(BigRational::zero(), BigRational::one())
    }

    fn to_c64(&self) -> C64 {
        let conv = |q: &BigRational| q.to_f64().unwrap_or(f64::NAN);
        Complex::new(conv(&self.re), conv(&self.im))
    }

    fn is_small(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn try_sqrt(&self) -> Option<Self> {
        let zero = BigRational::zero();
        if self.im.is_zero() {
            return if self.re.is_negative() {
                rational_sqrt(&-self.re.clone()).map(|s| Complex::new(zero, s))
            } else {
                rational_sqrt(&self.re).map(|s| Complex::new(s, zero))
            };
        }
        let modulus = rational_sqrt(&(&self.re * &self.re + &self.im * &self.im))?;
        let two = BigRational::from_integer(2.into());
        let c = rational_sqrt(&((&self.re + &modulus) / &two))?;
        if c.is_zero() {
            return None;
        }
        let d = &self.im / (&two * &c);
        let root = Complex::new(c, d);
        (&root * &root == *self).then_some(root)
    }

    fn parse_decimal(text: &str) -> Option<Self> {
        decimal_to_rational(text).map(|q| Complex::new(q, BigRational::zero()))
    }

    fn to_parts(&self) -> (String, String) {
        (rational_to_string(&self.re), rational_to_string(&self.im))
    }

    fn from_parts(re: &str, im: &str) -> Option<Self> {
        Some(Complex::new(rational_from_str(re)?, rational_from_str(im)?))
    }

    fn as_small_rational(&self, _tol: f64) -> Option<(i64, i64)> {
        if !self.im.is_zero() {
            return None;
        }
        let p = self.re.numer().to_i64()?;
        let q = self.re.denom().to_i64()?;
        Some((p, q))
    }
}

macro_rules! float_scalar {
    ($t:ty, $f:ty, $mode:expr) => {
        impl Scalar for $t {
            const EXACT: bool = false;
            const MODE: &'static str = $mode;

            fn from_i64(n: i64) -> Self {
                Complex::new(n as $f, 0.0)
            }

            fn from_ratio(num: i64, den: i64) -> Self {
                Complex::new(num as $f / den as $f, 0.0)
            }

            fn from_c64(z: C64) -> Self {
                Complex::new(z.re as $f, z.im as $f)
            }

            fn imag_unit() -> Self {
                Complex::new(0.0, 1.0)
            }

            fn to_c64(&self) -> C64 {
                Complex::new(self.re as f64, self.im as f64)
            }

            fn is_small(&self, tol: f64) -> bool {
                (self.norm() as f64) <= tol
            }

            fn try_sqrt(&self) -> Option<Self> {
                Some(self.sqrt())
            }

            fn parse_decimal(text: &str) -> Option<Self> {
                let ok = !text.is_empty() && text.chars().all(|c| c.is_ascii_digit() || c == '.');
                if !ok {
                    return None;
                }
                text.parse::<$f>().ok().map(|v| Complex::new(v, 0.0))
            }

            fn to_parts(&self) -> (String, String) {
                (format!("{:?}", self.re), format!("{:?}", self.im))
            }

            fn from_parts(re: &str, im: &str) -> Option<Self> {
                Some(Complex::new(re.trim().parse().ok()?, im.trim().parse().ok()?))
            }

            fn as_small_rational(&self, tol: f64) -> Option<(i64, i64)> {
                let tol = tol.max(<$f>::EPSILON as f64 * 64.0);
                if (self.im as f64).abs() > tol * (self.re as f64).abs().max(1.0) {
                    return None;
                }
                approximate_rational(self.re as f64, 10_000, tol)
            }
        }
    };
}

float_scalar!(C64, f64, "float");
float_scalar!(C32, f32, "float32");

/// Human-readable rendering, e.g. `3/2-1/4*i`.
pub fn format_scalar<S: Scalar>(z: &S) -> String {
    let (re, im) = z.to_parts();
    let zero = |s: &str| s == "0" || s == "0.0" || s == "-0.0";
    match (zero(&re), zero(&im)) {
        (_, true) => re,
        (true, false) => format!("{im}*i"),
        (false, false) => {
            if let Some(rest) = im.strip_prefix('-') {
                format!("{re}-{rest}*i")
            } else {
                format!("{re}+{im}*i")
            }
        }
    }
}

/// Sign of a nonzero real value, used by constructors that record signs.
pub fn real_sign<S: Scalar>(z: &S) -> Option<i32> {
    let c = z.to_c64();
    if c.im != 0.0 || c.re == 0.0 {
        return None;
    }
    Some(if c.re > 0.0 { 1 } else { -1 })
}
