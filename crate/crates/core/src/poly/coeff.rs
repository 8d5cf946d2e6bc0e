//! Exact arithmetic in the Gaussian rationals ℚ(i).

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::PolyError;

/// An element `re + im·i` of ℚ(i).
///
/// Both parts are kept as reduced fractions with positive denominators, so
/// structural equality is field equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussRat {
    re: BigRational,
    im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        GaussRat::from(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        GaussRat::from(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussRat { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Integer value when the element is a rational integer.
    pub fn to_integer(&self) -> Option<BigInt> {
        (self.is_real() && self.re.is_integer()).then(|| self.re.to_integer())
    }

    pub fn conj(&self) -> Self {
        GaussRat { re: self.re.clone(), im: -&self.im }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.is_real() {
            return Some(GaussRat::from(self.re.recip()));
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Some(GaussRat { re: &self.re / &norm, im: -(&self.im / &norm) })
    }

    /// True when the element is a real number `< 0`. Used for sign-aware printing.
    pub fn is_negative_real(&self) -> bool {
        self.is_real() && self.re.is_negative()
    }
}

impl From<BigRational> for GaussRat {
    fn from(re: BigRational) -> Self {
        GaussRat { re, im: BigRational::zero() }
    }
}

impl From<i64> for GaussRat {
    fn from(n: i64) -> Self {
        GaussRat::from_int(n)
    }
}

impl From<BigInt> for GaussRat {
    fn from(n: BigInt) -> Self {
        GaussRat::from(BigRational::from_integer(n))
    }
}

impl Zero for GaussRat {
    fn zero() -> Self {
        GaussRat::default()
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussRat {
    fn one() -> Self {
        GaussRat::from_int(1)
    }
    fn is_one(&self) -> bool {
        self.im.is_zero() && self.re.is_one()
    }
}

impl<'a> Add<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Sub<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a> Mul<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: &GaussRat) -> GaussRat {
        // real × real is by far the common case
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussRat::from(&self.re * &rhs.re);
        }
        GaussRat {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl<'a> Div<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    /// Panics on division by zero, like the underlying rationals.
    fn div(self, rhs: &GaussRat) -> GaussRat {
        self * &rhs.inv().expect("division by zero in ℚ(i)")
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<GaussRat> for GaussRat {
            type Output = GaussRat;
            fn $m(self, rhs: GaussRat) -> GaussRat { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a GaussRat> for GaussRat {
            type Output = GaussRat;
            fn $m(self, rhs: &GaussRat) -> GaussRat { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&GaussRat> for GaussRat {
    fn add_assign(&mut self, rhs: &GaussRat) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussRat> for GaussRat {
    fn sub_assign(&mut self, rhs: &GaussRat) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussRat> for GaussRat {
    fn mul_assign(&mut self, rhs: &GaussRat) {
        *self = &*self * rhs;
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat { re: -self.re, im: -self.im }
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat { re: -&self.re, im: -&self.im }
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Imaginary part as it appears in text: `i`, `-i`, `3*i`, `-1/2*i`.
fn fmt_imag(q: &BigRational) -> String {
    if q.is_one() {
        "i".to_string()
    } else if (-q).is_one() {
        "-i".to_string()
    } else {
        format!("{}*i", fmt_rational(q))
    }
}

/// Canonical text: `p/q` for reals, `(p/q+r/s*i)` otherwise (the real part
/// is dropped when zero, e.g. `(-i)`).
impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return f.write_str(&fmt_rational(&self.re));
        }
        if self.re.is_zero() {
            return write!(f, "({})", fmt_imag(&self.im));
        }
        let im = fmt_imag(&self.im);
        let sep = if im.starts_with('-') { "" } else { "+" };
        write!(f, "({}{}{})", fmt_rational(&self.re), sep, im)
    }
}

impl FromStr for GaussRat {
    type Err = PolyError;

    /// Accepts anything the polynomial parser accepts as long as it is constant,
    /// which covers every string produced by `Display`.
    fn from_str(s: &str) -> Result<Self, PolyError> {
        let p = super::parse::parse_poly(s)?;
        p.constant_value().ok_or_else(|| PolyError::Parse {
            pos: 0,
            msg: format!("coefficient `{s}` is not a constant"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_squared_is_minus_one() {
        let i = GaussRat::i();
        assert_eq!(&i * &i, GaussRat::from_int(-1));
    }

    #[test]
    fn inverse_of_gaussian() {
        let z = GaussRat::new(
            BigRational::from_integer(3.into()),
            BigRational::from_integer(4.into()),
        );
        let w = z.inv().unwrap();
        assert!((&z * &w).is_one());
        assert_eq!(w, GaussRat::new(
            BigRational::new(3.into(), 25.into()),
            BigRational::new((-4).into(), 25.into()),
        ));
        assert!(GaussRat::zero().inv().is_none());
    }

    #[test]
    fn display_forms() {
        assert_eq!(GaussRat::from_frac(-3, 6).to_string(), "-1/2");
        assert_eq!(GaussRat::from_int(7).to_string(), "7");
        assert_eq!(GaussRat::i().to_string(), "(i)");
        assert_eq!((-GaussRat::i()).to_string(), "(-i)");
        let z = GaussRat::from_frac(1, 2) - GaussRat::i() * GaussRat::from_frac(3, 4);
        assert_eq!(z.to_string(), "(1/2-3/4*i)");
        assert_eq!(z.to_string().parse::<GaussRat>().unwrap(), z);
    }

    #[test]
    fn lowest_terms_make_equality_structural() {
        assert_eq!(GaussRat::from_frac(2, 4), GaussRat::from_frac(-1, -2));
        assert_eq!(GaussRat::from_frac(2, 4).re().denom(), &BigInt::from(2));
    }
}
