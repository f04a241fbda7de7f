//! Polynomials in α, β, α*, β* over Q(√2, √3).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use itertools::Itertools;
use num_complex::Complex64;

use super::qroot::QRoot;
use crate::error::{Error, Result};

/// Tolerance used to accept a numeric `(α, β)` as normalized.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Exponents of `α, β, α*, β*`, in that order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(pub [u8; 4]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; 4]);
    pub const ALPHA: Monomial = Monomial([1, 0, 0, 0]);
    pub const BETA: Monomial = Monomial([0, 1, 0, 0]);
    pub const ALPHA_CONJ: Monomial = Monomial([0, 0, 1, 0]);
    pub const BETA_CONJ: Monomial = Monomial([0, 0, 0, 1]);

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| u32::from(e)).sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0 == [0; 4]
    }

    fn mul(self, other: Monomial) -> Monomial {
        let mut e = self.0;
        for (l, r) in e.iter_mut().zip(other.0) {
            *l += r;
        }
        Monomial(e)
    }

    fn conj(self) -> Monomial {
        let [a, b, ac, bc] = self.0;
        Monomial([ac, bc, a, b])
    }

    fn eval(&self, alpha: Complex64, beta: Complex64) -> Complex64 {
        let [a, b, ac, bc] = self.0;
        alpha.powu(a.into())
            * beta.powu(b.into())
            * alpha.conj().powu(ac.into())
            * beta.conj().powu(bc.into())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 4] = ["α", "β", "α*", "β*"];
        let mut first = true;
        for (name, &e) in NAMES.iter().zip(&self.0) {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial amplitude. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Amp {
    terms: BTreeMap<Monomial, QRoot>,
}

impl Amp {
    pub fn zero() -> Self {
        Amp::default()
    }

    pub fn one() -> Self {
        Amp::constant(QRoot::one())
    }

    pub fn constant(c: QRoot) -> Self {
        Amp::term(Monomial::ONE, c)
    }

    pub fn term(m: Monomial, c: QRoot) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Amp { terms }
    }

    pub fn alpha() -> Self {
        Amp::term(Monomial::ALPHA, QRoot::one())
    }

    pub fn beta() -> Self {
        Amp::term(Monomial::BETA, QRoot::one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &QRoot)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> QRoot {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// The value of a constant polynomial.
    pub fn as_constant(&self) -> Option<QRoot> {
        match self.terms.len() {
            0 => Some(QRoot::zero()),
            1 => self.terms.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, m: Monomial, c: &QRoot) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c.clone());
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &QRoot) -> Amp {
        if c.is_zero() {
            return Amp::zero();
        }
        Amp {
            terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect(),
        }
    }

    /// Complex conjugation: swaps α ↔ α* and β ↔ β*. Coefficients are real.
    pub fn conj(&self) -> Amp {
        Amp {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.conj(), c.clone()))
                .collect(),
        }
    }

    /// Canonical representative modulo `α·α* + β·β* − 1`, obtained by
    /// rewriting every `α·α*` as `1 − β·β*` until none remain.
    pub fn reduce(&self) -> Amp {
        let mut out = Amp::zero();
        let mut work: Vec<(Monomial, QRoot)> =
            self.terms.iter().map(|(m, c)| (*m, c.clone())).collect();
        while let Some((m, c)) = work.pop() {
            let [a, b, ac, bc] = m.0;
            if a > 0 && ac > 0 {
                let stripped = Monomial([a - 1, b, ac - 1, bc]);
                work.push((stripped, c.clone()));
                work.push((Monomial([a - 1, b + 1, ac - 1, bc + 1]), -c));
            } else {
                out.add_term(m, &c);
            }
        }
        out
    }

    pub fn is_reduced(&self) -> bool {
        self.terms.keys().all(|m| m.0[0] == 0 || m.0[2] == 0)
    }

    pub fn eval(&self, alpha: Complex64, beta: Complex64) -> Result<Complex64> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized);
        }
        Ok(self.eval_unchecked(alpha, beta))
    }

    /// Substitution without the normalization check.
    pub fn eval_unchecked(&self, alpha: Complex64, beta: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(m, c)| m.eval(alpha, beta) * c.to_f64())
            .sum()
    }
}

impl fmt::Display for Amp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Constants first, then by degree with α before β before conjugates.
        let ordered = self
            .terms
            .iter()
            .sorted_by_key(|(m, _)| (m.degree(), std::cmp::Reverse(m.0)));
        for (i, (m, c)) in ordered.enumerate() {
            let neg = c.term_count() == 1 && c.is_negative();
            let mag = if neg { -c } else { c.clone() };
            let coef = if m.is_constant() {
                mag.to_string()
            } else if mag.is_one() {
                String::new()
            } else if mag.term_count() > 1 {
                format!("({mag})·")
            } else {
                format!("{mag}·")
            };
            let body = if m.is_constant() {
                coef
            } else {
                format!("{coef}{m}")
            };
            match (i, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Amp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Amp({self})")
    }
}

impl From<QRoot> for Amp {
    fn from(c: QRoot) -> Self {
        Amp::constant(c)
    }
}

impl<'a> Add<&'a Amp> for &'a Amp {
    type Output = Amp;
    fn add(self, rhs: &Amp) -> Amp {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c);
        }
        out
    }
}

impl Add for Amp {
    type Output = Amp;
    fn add(mut self, rhs: Amp) -> Amp {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c);
        }
        self
    }
}

impl Neg for &Amp {
    type Output = Amp;
    fn neg(self) -> Amp {
        Amp {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for Amp {
    type Output = Amp;
    fn neg(self) -> Amp {
        -&self
    }
}

impl<'a> Sub<&'a Amp> for &'a Amp {
    type Output = Amp;
    fn sub(self, rhs: &Amp) -> Amp {
        self + &(-rhs)
    }
}

impl Sub for Amp {
    type Output = Amp;
    fn sub(self, rhs: Amp) -> Amp {
        &self - &rhs
    }
}

impl<'a> Mul<&'a Amp> for &'a Amp {
    type Output = Amp;
    fn mul(self, rhs: &Amp) -> Amp {
        let mut out = Amp::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(*m2), &(c1 * c2));
            }
        }
        out
    }
}

impl Mul for Amp {
    type Output = Amp;
    fn mul(self, rhs: Amp) -> Amp {
        &self * &rhs
    }
}

impl std::iter::Sum for Amp {
    fn sum<I: Iterator<Item = Amp>>(iter: I) -> Amp {
        iter.fold(Amp::zero(), |acc, x| acc + x)
    }
}
