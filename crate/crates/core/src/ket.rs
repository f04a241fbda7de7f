//! Sparse multi-particle states over polarization ⊗ location labels.
//!
//! Kets are first-quantized: slot `i` of a [`BasisKet`] holds the label of
//! particle `i`. Identical-particle statistics enter only through
//! [`State::symmetrize`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_complex::Complex64;

use crate::amplitude::{Amp, QRoot};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A spatial mode. Distinct symbols are orthogonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Location(char);

impl Location {
    pub const A: Location = Location('A');
    pub const B: Location = Location('B');
    pub const C: Location = Location('C');

    pub fn new(symbol: char) -> Result<Self> {
        if symbol.is_ascii_uppercase() {
            Ok(Location(symbol))
        } else {
            Err(Error::InvalidLocation(symbol))
        }
    }

    pub fn symbol(&self) -> char {
        self.0
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Single-particle basis label `|p, L⟩`. Polarization-only labels (no
/// spatial degree of freedom) carry `loc = None`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParticleLabel {
    pub pol: u8,
    pub loc: Option<Location>,
}

impl ParticleLabel {
    pub fn new(pol: u8, loc: Location) -> Self {
        debug_assert!(pol < 2);
        ParticleLabel {
            pol,
            loc: Some(loc),
        }
    }

    pub fn pol_only(pol: u8) -> Self {
        debug_assert!(pol < 2);
        ParticleLabel { pol, loc: None }
    }
}

impl fmt::Display for ParticleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.loc {
            Some(loc) => write!(f, "{}{}", self.pol, loc),
            None => write!(f, "{}", self.pol),
        }
    }
}

impl FromStr for ParticleLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut chars = s.trim().chars();
        let pol = match chars.next() {
            Some('0') => 0,
            Some('1') => 1,
            Some(c) => return Err(Error::InvalidLocation(c)),
            None => return Err(Error::InvalidLocation(' ')),
        };
        let loc = chars.next().map(Location::new).transpose()?;
        if let Some(extra) = chars.next() {
            return Err(Error::InvalidLocation(extra));
        }
        Ok(ParticleLabel { pol, loc })
    }
}

/// Product ket; slot `i` is particle `i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BasisKet(pub Vec<ParticleLabel>);

impl BasisKet {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn labels(&self) -> &[ParticleLabel] {
        &self.0
    }

    /// Slots occupied at `loc`.
    pub fn slots_at(&self, loc: Location) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, l)| l.loc == Some(loc))
            .map(|(i, _)| i)
            .collect()
    }

    fn permuted(&self, perm: &[usize]) -> BasisKet {
        BasisKet(perm.iter().map(|&p| self.0[p]).collect())
    }
}

impl fmt::Display for BasisKet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.iter().join(","))
    }
}

impl FromStr for BasisKet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Ok(BasisKet::default());
        }
        s.split(',')
            .map(str::parse)
            .collect::<Result<Vec<_>>>()
            .map(BasisKet)
    }
}

/// Checks that `perm` is a bijection on `0..n`.
pub fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::InvalidPermutation(perm.to_vec()));
    }
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidPermutation(perm.to_vec()));
        }
        seen[p] = true;
    }
    Ok(())
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    (0..n).permutations(n).collect()
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

/// Sparse state vector. No zero amplitudes are stored.
#[derive(Clone, PartialEq)]
pub struct State<S> {
    particles: usize,
    terms: BTreeMap<BasisKet, S>,
}

pub type ExactState = State<Amp>;
pub type NumericState = State<Complex64>;

impl<S: Scalar> State<S> {
    pub fn zero(particles: usize) -> Self {
        State {
            particles,
            terms: BTreeMap::new(),
        }
    }

    /// The 0-particle state with unit amplitude; identity for [`State::tensor`].
    pub fn vacuum() -> Self {
        State::basis(BasisKet::default())
    }

    pub fn basis(ket: BasisKet) -> Self {
        State::single(ket, S::one())
    }

    pub fn single(ket: BasisKet, amp: S) -> Self {
        let mut s = State::zero(ket.len());
        s.add_term(ket, amp);
        s
    }

    /// Builds a state from `(ket, amplitude)` pairs; repeated kets add up.
    pub fn from_terms(
        particles: usize,
        terms: impl IntoIterator<Item = (BasisKet, S)>,
    ) -> Result<Self> {
        let mut s = State::zero(particles);
        for (ket, amp) in terms {
            if ket.len() != particles {
                return Err(Error::ParticleCountMismatch {
                    left: particles,
                    right: ket.len(),
                });
            }
            s.add_term(ket, amp);
        }
        Ok(s)
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisKet, &S)> {
        self.terms.iter()
    }

    pub fn kets(&self) -> impl Iterator<Item = &BasisKet> {
        self.terms.keys()
    }

    pub fn amplitude(&self, ket: &BasisKet) -> S {
        self.terms.get(ket).cloned().unwrap_or_else(S::zero)
    }

    pub fn add_term(&mut self, ket: BasisKet, amp: S) {
        assert_eq!(
            ket.len(),
            self.particles,
            "ket {ket} has wrong particle count"
        );
        use std::collections::btree_map::Entry;
        match self.terms.entry(ket) {
            Entry::Vacant(v) => {
                if !amp.is_zero() {
                    v.insert(amp);
                }
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().clone() + amp;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = State::zero(self.particles);
        for (k, a) in &self.terms {
            out.add_term(k.clone(), c.clone() * a.clone());
        }
        out
    }

    pub fn scale_field(&self, c: &QRoot) -> Self {
        self.scale(&S::from_field(c))
    }

    /// Applies `f` to every amplitude, dropping entries that become zero.
    pub fn map_amplitudes(&self, f: impl Fn(&S) -> S) -> Self {
        let mut out = State::zero(self.particles);
        for (k, a) in &self.terms {
            out.add_term(k.clone(), f(a));
        }
        out
    }

    pub fn reduced(&self) -> Self {
        self.map_amplitudes(S::reduce)
    }

    /// Sum of two states with the same particle count.
    ///
    /// Panics on a particle-count mismatch.
    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!(
            self.particles, other.particles,
            "adding states of different particle counts"
        );
        let mut out = self.clone();
        for (k, a) in &other.terms {
            out.add_term(k.clone(), a.clone());
        }
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scale(&-S::one()))
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut out = State::zero(self.particles + other.particles);
        for (k1, a1) in &self.terms {
            for (k2, a2) in &other.terms {
                let mut labels = k1.0.clone();
                labels.extend_from_slice(&k2.0);
                out.add_term(BasisKet(labels), a1.clone() * a2.clone());
            }
        }
        out
    }

    /// `⟨self|other⟩`, reduced modulo the input normalization.
    pub fn inner(&self, other: &Self) -> Result<S> {
        if self.particles != other.particles {
            return Err(Error::ParticleCountMismatch {
                left: self.particles,
                right: other.particles,
            });
        }
        let (small, large, flip) = if self.len() <= other.len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let mut acc = S::zero();
        for (k, a) in &small.terms {
            if let Some(b) = large.terms.get(k) {
                acc = if flip {
                    acc + b.conj() * a.clone()
                } else {
                    acc + a.conj() * b.clone()
                };
            }
        }
        Ok(acc.reduce())
    }

    pub fn norm_sq(&self) -> S {
        self.inner(self).expect("same particle count")
    }

    /// Reorders slots: slot `i` of the result holds slot `perm[i]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.particles)?;
        Ok(State {
            particles: self.particles,
            terms: self
                .terms
                .iter()
                .map(|(k, a)| (k.permuted(perm), a.clone()))
                .collect(),
        })
    }

    /// Swaps slots `i` and `j`.
    pub fn swap(&self, i: usize, j: usize) -> Result<Self> {
        for s in [i, j] {
            if s >= self.particles {
                return Err(Error::SlotOutOfRange {
                    slot: s,
                    particles: self.particles,
                });
            }
        }
        let mut perm: Vec<usize> = (0..self.particles).collect();
        perm.swap(i, j);
        self.permute(&perm)
    }

    /// The symmetrizer projector `(1/N!) Σ_π P_π` applied to `self`,
    /// without renormalization.
    pub fn symmetric_projection(&self) -> Self {
        let mut out = State::zero(self.particles);
        for perm in permutations(self.particles) {
            for (k, a) in &self.terms {
                out.add_term(k.permuted(&perm), a.clone());
            }
        }
        out.scale_field(&QRoot::frac(1, factorial(self.particles)))
    }

    /// Totally symmetric, unit-norm part of `self`.
    pub fn symmetrize(&self) -> Result<Self> {
        let projected = self.symmetric_projection();
        if projected.is_zero() {
            return Err(Error::NoSymmetricComponent);
        }
        projected.normalize()
    }

    pub fn normalize(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroNorm);
        }
        let factor = self.norm_sq().inv_sqrt()?;
        Ok(self.scale(&factor))
    }

    /// Invariant under every slot permutation.
    pub fn is_totally_symmetric(&self) -> bool {
        permutations(self.particles)
            .iter()
            .all(|p| self.permute(p).map(|x| x.approx_eq(self)).unwrap_or(false))
    }

    /// Amplitude-wise comparison through [`Scalar::approx_eq`].
    pub fn approx_eq(&self, other: &Self) -> bool {
        if self.particles != other.particles {
            return false;
        }
        let keys: std::collections::BTreeSet<&BasisKet> =
            self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter()
            .all(|k| self.amplitude(k).approx_eq(&other.amplitude(k)))
    }

    /// True iff `self = c·other` for a unit-modulus constant `c`.
    pub fn equal_up_to_phase(&self, other: &Self) -> bool {
        if self.particles != other.particles || self.len() != other.len() {
            return false;
        }
        let Some((k0, a0)) = self.terms.iter().next() else {
            return other.is_zero();
        };
        let Some(b0) = other.terms.get(k0) else {
            return false;
        };
        let Some(c) = a0.ratio(b0) else {
            return false;
        };
        if !c.is_unit_modulus() {
            return false;
        }
        self.terms.iter().all(|(k, a)| match other.terms.get(k) {
            Some(b) => a.approx_eq(&(c.clone() * b.clone())),
            None => false,
        })
    }

    /// Part of the state whose slot `slot` sits at `loc`.
    pub fn restrict(&self, slot: usize, loc: Location) -> Self {
        State {
            particles: self.particles,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.0[slot].loc == Some(loc))
                .map(|(k, a)| (k.clone(), a.clone()))
                .collect(),
        }
    }

    /// Places `part` on `slots` and `rest` on the remaining slots in order.
    pub fn embed(part: &Self, slots: &[usize], rest: &Self) -> Result<Self> {
        let n = part.particles + rest.particles;
        if slots.len() != part.particles {
            return Err(Error::ParticleCountMismatch {
                left: slots.len(),
                right: part.particles,
            });
        }
        let others = complement(slots, n)?;
        let mut perm = vec![0; n];
        for (src, &dst) in slots.iter().chain(&others).enumerate() {
            perm[dst] = src;
        }
        part.tensor(rest).permute(&perm)
    }

    /// Contracts `bra` against `self` on `slots`; the result lives on the
    /// remaining slots in increasing order.
    pub fn partial_inner(&self, bra: &Self, slots: &[usize]) -> Result<Self> {
        if slots.len() != bra.particles {
            return Err(Error::ParticleCountMismatch {
                left: slots.len(),
                right: bra.particles,
            });
        }
        let others = complement(slots, self.particles)?;
        let mut out = State::zero(others.len());
        for (k, a) in &self.terms {
            let sub = BasisKet(slots.iter().map(|&s| k.0[s]).collect());
            if let Some(b) = bra.terms.get(&sub) {
                let residual = BasisKet(others.iter().map(|&s| k.0[s]).collect());
                out.add_term(residual, b.conj() * a.clone());
            }
        }
        Ok(out)
    }

    /// Canonical listing `(ket, amplitude)` sorted by the ket string.
    pub fn listing(&self) -> Vec<(String, String)> {
        let mut rows: Vec<(String, String)> = self
            .terms
            .iter()
            .map(|(k, a)| (k.to_string(), a.render()))
            .collect();
        rows.sort();
        rows
    }

    /// Substitutes numeric input amplitudes.
    pub fn to_numeric(&self, alpha: Complex64, beta: Complex64) -> NumericState {
        let mut out = State::zero(self.particles);
        for (k, a) in &self.terms {
            out.add_term(k.clone(), a.to_complex(alpha, beta));
        }
        out
    }
}

fn complement(slots: &[usize], n: usize) -> Result<Vec<usize>> {
    for &s in slots {
        if s >= n {
            return Err(Error::SlotOutOfRange {
                slot: s,
                particles: n,
            });
        }
    }
    if slots.iter().unique().count() != slots.len() {
        return Err(Error::InvalidPermutation(slots.to_vec()));
    }
    Ok((0..n).filter(|i| !slots.contains(i)).collect())
}

impl<S: Scalar> fmt::Display for State<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let body = self
            .listing()
            .into_iter()
            .map(|(k, a)| format!("({a})|{k}⟩"))
            .join(" + ");
        write!(f, "{body}")
    }
}

impl<S: fmt::Debug> fmt::Debug for State<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "State[{}]", self.particles)?;
        f.debug_map()
            .entries(self.terms.iter().map(|(k, a)| (k.to_string(), a)))
            .finish()
    }
}

/// Shorthand for a basis ket parsed from `"0A,1B"`-style text.
///
/// Panics on malformed input; intended for constants and tests.
pub fn ket(s: &str) -> BasisKet {
    s.parse().unwrap_or_else(|e| panic!("bad ket {s:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplitude::Amp;

    fn input() -> ExactState {
        State::from_terms(1, [(ket("0A"), Amp::alpha()), (ket("1A"), Amp::beta())]).unwrap()
    }

    fn c(x: i64) -> Amp {
        Amp::constant(QRoot::from_int(x))
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(ket("0A,1B,1C").to_string(), "0A,1B,1C");
        assert_eq!(ket("0,1").to_string(), "0,1");
        assert!("2A".parse::<BasisKet>().is_err());
        assert!("0a".parse::<BasisKet>().is_err());
    }

    #[test]
    fn tensor_identity_and_products() {
        let x = input();
        assert_eq!(x.tensor(&State::vacuum()), x);
        let y: ExactState = State::basis(ket("0A")).tensor(&State::basis(ket("1B")));
        assert_eq!(y, State::basis(ket("0A,1B")));
    }

    #[test]
    fn inner_products() {
        let x = input();
        assert_eq!(x.norm_sq(), Amp::one());
        let a: ExactState = State::basis(ket("0A,1B"));
        let b: ExactState = State::basis(ket("1B,0A"));
        assert_eq!(a.inner(&b).unwrap(), Amp::zero());
        assert!(a.inner(&x).is_err());
    }

    #[test]
    fn permute_examples() {
        let a: ExactState = State::basis(ket("0A,1B"));
        assert_eq!(a.permute(&[1, 0]).unwrap(), State::basis(ket("1B,0A")));
        assert_eq!(a.permute(&[0, 1]).unwrap(), a);
        assert!(a.permute(&[0, 0]).is_err());
        assert!(a.permute(&[0]).is_err());
    }

    #[test]
    fn symmetrize_examples() {
        let s: ExactState = State::basis(ket("0A,0A,0A"));
        assert_eq!(s.symmetrize().unwrap(), s);
        let singlet_same_place: ExactState =
            State::from_terms(2, [(ket("0A,1A"), c(1)), (ket("1A,0A"), c(-1))]).unwrap();
        assert_eq!(
            singlet_same_place.symmetrize(),
            Err(Error::NoSymmetricComponent)
        );
    }

    #[test]
    fn normalize_examples() {
        let x: ExactState = State::single(ket("0A"), c(2));
        assert_eq!(x.normalize().unwrap(), State::basis(ket("0A")));
        let y: ExactState =
            State::from_terms(2, [(ket("0A,1B"), c(1)), (ket("1B,0A"), c(-1))]).unwrap();
        let n = y.normalize().unwrap();
        assert_eq!(
            n.amplitude(&ket("0A,1B")),
            Amp::constant(QRoot::frac_1_sqrt2())
        );
        assert_eq!(ExactState::zero(1).normalize(), Err(Error::ZeroNorm));
        assert!(matches!(
            State::single(ket("0A"), Amp::alpha()).normalize(),
            Err(Error::NormDependsOnSymbols(_))
        ));
    }

    #[test]
    fn phase_equality() {
        let target: ExactState =
            State::from_terms(1, [(ket("0C"), Amp::alpha()), (ket("1C"), Amp::beta())]).unwrap();
        let flipped = target.scale(&c(-1));
        assert!(flipped.equal_up_to_phase(&target));
        let a: ExactState = State::basis(ket("0A"));
        let b: ExactState = State::basis(ket("1A"));
        assert!(!a.equal_up_to_phase(&b));
        assert!(!target.scale(&c(2)).equal_up_to_phase(&target));
    }

    #[test]
    fn embed_and_partial_inner_are_inverse() {
        let pair: ExactState = State::basis(ket("0A,1B"));
        let rest: ExactState = State::basis(ket("1C"));
        let placed = State::embed(&pair, &[0, 2], &rest).unwrap();
        assert_eq!(placed, State::basis(ket("0A,1C,1B")));
        let back = placed.partial_inner(&pair, &[0, 2]).unwrap();
        assert_eq!(back, rest);
    }

    #[test]
    fn restrict_selects_slot_location() {
        let x: ExactState =
            State::from_terms(2, [(ket("0A,1C"), c(1)), (ket("0C,1A"), c(1))]).unwrap();
        assert_eq!(x.restrict(1, Location::C), State::basis(ket("0A,1C")));
    }

    #[test]
    fn listing_is_sorted() {
        let x: ExactState =
            State::from_terms(2, [(ket("1B,0A"), c(1)), (ket("0A,1B"), c(-1))]).unwrap();
        assert_eq!(
            x.listing(),
            vec![
                ("0A,1B".to_string(), "-1".to_string()),
                ("1B,0A".to_string(), "1".to_string())
            ]
        );
    }
}
