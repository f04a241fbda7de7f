//! The number field Q(√2, √3).
//!
//! Elements are stored in the basis {1, √2, √3, √6} with arbitrary-precision
//! rational coordinates, so every prefactor that shows up in the teleportation
//! algebra (1/√2, 1/2, 1/(2√2), 1/√12, 1/√3, ...) is represented exactly.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

const SQRT2: f64 = std::f64::consts::SQRT_2;
const SQRT3: f64 = 1.732_050_807_568_877_2;
const SQRT6: f64 = 2.449_489_742_783_178;

/// `a + b√2 + c√3 + d√6` with rational `a, b, c, d`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QRoot {
    coords: [BigRational; 4],
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl QRoot {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Self {
        QRoot {
            coords: [a, b, c, d],
        }
    }

    /// Builds `a + b√2 + c√3 + d√6` from `(numerator, denominator)` pairs.
    pub fn from_fracs(parts: [(i64, i64); 4]) -> Self {
        QRoot {
            coords: parts.map(|(n, d)| rat(n, d)),
        }
    }

    pub fn from_rational(r: BigRational) -> Self {
        QRoot::new(r, Zero::zero(), Zero::zero(), Zero::zero())
    }

    pub fn from_int(n: i64) -> Self {
        QRoot::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        QRoot::from_rational(rat(n, d))
    }

    pub fn zero() -> Self {
        QRoot::default()
    }

    pub fn one() -> Self {
        QRoot::from_int(1)
    }

    pub fn sqrt2() -> Self {
        QRoot::from_fracs([(0, 1), (1, 1), (0, 1), (0, 1)])
    }

    pub fn sqrt3() -> Self {
        QRoot::from_fracs([(0, 1), (0, 1), (1, 1), (0, 1)])
    }

    pub fn sqrt6() -> Self {
        QRoot::from_fracs([(0, 1), (0, 1), (0, 1), (1, 1)])
    }

    /// 1/√2
    pub fn frac_1_sqrt2() -> Self {
        QRoot::from_fracs([(0, 1), (1, 2), (0, 1), (0, 1)])
    }

    pub fn coords(&self) -> &[BigRational; 4] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the radical parts vanish.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coords[1..].iter().all(Zero::is_zero) {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        QRoot {
            coords: [
                &self.coords[0] * r,
                &self.coords[1] * r,
                &self.coords[2] * r,
                &self.coords[3] * r,
            ],
        }
    }

    // Galois conjugates: flip the sign of √2 (resp. √3); √6 flips with either.
    fn conj_sqrt2(&self) -> Self {
        let [a, b, c, d] = &self.coords;
        QRoot::new(a.clone(), -b, c.clone(), -d)
    }

    fn conj_sqrt3(&self) -> Self {
        let [a, b, c, d] = &self.coords;
        QRoot::new(a.clone(), b.clone(), -c, -d)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // x·σ₂(x) lies in Q(√3); multiplying by its √3-conjugate lands in Q.
        let c2 = self.conj_sqrt2();
        let half = self * &c2;
        let c3 = half.conj_sqrt3();
        let norm = &half * &c3;
        let denom = norm.as_rational().expect("field norm is rational").clone();
        Ok((&c2 * &c3).scale(&denom.recip()))
    }

    /// Exact square root, available when the argument is a non-negative
    /// rational whose square-free part divides 6.
    pub fn sqrt(&self) -> Result<Self> {
        let r = self
            .as_rational()
            .ok_or_else(|| Error::NoSquareRoot(self.to_string()))?;
        if r.is_negative() {
            return Err(Error::NoSquareRoot(self.to_string()));
        }
        if r.is_zero() {
            return Ok(QRoot::zero());
        }
        // √(n/d) = √(n·d)/d, then pull 2s and 3s out of n·d.
        let mut m = r.numer() * r.denom();
        let mut outside = BigInt::one();
        let mut radical = [false, false];
        for (idx, p) in [2u32, 3].into_iter().enumerate() {
            let p = BigInt::from(p);
            let mut exp = 0u32;
            while m.is_multiple_of(&p) {
                m /= &p;
                exp += 1;
            }
            outside *= p.pow(exp / 2);
            radical[idx] = exp % 2 == 1;
        }
        let root = m.sqrt();
        if &root * &root != m {
            return Err(Error::NoSquareRoot(self.to_string()));
        }
        outside *= root;
        let coef = BigRational::new(outside, r.denom().clone());
        let slot = match radical {
            [false, false] => 0,
            [true, false] => 1,
            [false, true] => 2,
            [true, true] => 3,
        };
        let mut coords: [BigRational; 4] = Default::default();
        coords[slot] = coef;
        Ok(QRoot { coords })
    }

    pub fn to_f64(&self) -> f64 {
        let f = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN);
        let [a, b, c, d] = &self.coords;
        f(a) + f(b) * SQRT2 + f(c) * SQRT3 + f(d) * SQRT6
    }

    pub fn is_negative(&self) -> bool {
        self.to_f64() < 0.0
    }

    /// Rendered as one signed term per nonzero coordinate, e.g. `√3/6` or
    /// `1/2 - √2`. A leading sign is included only when negative.
    fn terms(&self) -> Vec<(bool, String)> {
        const RADICALS: [&str; 4] = ["", "√2", "√3", "√6"];
        let mut out = Vec::new();
        for (coef, radical) in self.coords.iter().zip(RADICALS) {
            if coef.is_zero() {
                continue;
            }
            let neg = coef.is_negative();
            let num = coef.numer().abs();
            let den = coef.denom();
            let mut s = if radical.is_empty() {
                num.to_string()
            } else if num.is_one() {
                radical.to_string()
            } else {
                format!("{num}{radical}")
            };
            if !den.is_one() {
                s = format!("{s}/{den}");
            }
            out.push((neg, s));
        }
        out
    }

    /// Number of nonzero coordinates.
    pub fn term_count(&self) -> usize {
        self.coords.iter().filter(|c| !c.is_zero()).count()
    }
}

impl fmt::Display for QRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (neg, s)) in terms.iter().enumerate() {
            match (i, neg) {
                (0, true) => write!(f, "-{s}")?,
                (0, false) => write!(f, "{s}")?,
                (_, true) => write!(f, " - {s}")?,
                (_, false) => write!(f, " + {s}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QRoot({self})")
    }
}

impl From<i64> for QRoot {
    fn from(n: i64) -> Self {
        QRoot::from_int(n)
    }
}

impl<'a> Add<&'a QRoot> for &'a QRoot {
    type Output = QRoot;
    fn add(self, rhs: &QRoot) -> QRoot {
        QRoot {
            coords: [
                &self.coords[0] + &rhs.coords[0],
                &self.coords[1] + &rhs.coords[1],
                &self.coords[2] + &rhs.coords[2],
                &self.coords[3] + &rhs.coords[3],
            ],
        }
    }
}

impl Add for QRoot {
    type Output = QRoot;
    fn add(self, rhs: QRoot) -> QRoot {
        &self + &rhs
    }
}

impl AddAssign<&QRoot> for QRoot {
    fn add_assign(&mut self, rhs: &QRoot) {
        for (l, r) in self.coords.iter_mut().zip(&rhs.coords) {
            *l += r;
        }
    }
}

impl Neg for &QRoot {
    type Output = QRoot;
    fn neg(self) -> QRoot {
        QRoot {
            coords: [
                -&self.coords[0],
                -&self.coords[1],
                -&self.coords[2],
                -&self.coords[3],
            ],
        }
    }
}

impl Neg for QRoot {
    type Output = QRoot;
    fn neg(self) -> QRoot {
        -&self
    }
}

impl<'a> Sub<&'a QRoot> for &'a QRoot {
    type Output = QRoot;
    fn sub(self, rhs: &QRoot) -> QRoot {
        self + &(-rhs)
    }
}

impl Sub for QRoot {
    type Output = QRoot;
    fn sub(self, rhs: QRoot) -> QRoot {
        &self - &rhs
    }
}

impl<'a> Mul<&'a QRoot> for &'a QRoot {
    type Output = QRoot;
    fn mul(self, rhs: &QRoot) -> QRoot {
        let [a, b, c, d] = &self.coords;
        let [e, f, g, h] = &rhs.coords;
        let two = rat(2, 1);
        let three = rat(3, 1);
        let six = rat(6, 1);
        // √2·√3 = √6, √2·√6 = 2√3, √3·√6 = 3√2, √6·√6 = 6
        QRoot {
            coords: [
                a * e + &two * (b * f) + &three * (c * g) + &six * (d * h),
                a * f + b * e + &three * (c * h + d * g),
                a * g + c * e + &two * (b * h + d * f),
                a * h + d * e + b * g + c * f,
            ],
        }
    }
}

impl Mul for QRoot {
    type Output = QRoot;
    fn mul(self, rhs: QRoot) -> QRoot {
        &self * &rhs
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for &QRoot {
    type Output = Result<QRoot>;
    fn div(self, rhs: &QRoot) -> Result<QRoot> {
        Ok(self * &rhs.inv()?)
    }
}

impl std::iter::Sum for QRoot {
    fn sum<I: Iterator<Item = QRoot>>(iter: I) -> QRoot {
        iter.fold(QRoot::zero(), |acc, x| acc + x)
    }
}
