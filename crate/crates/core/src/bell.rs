//! Bell bases and pair decompositions.
//!
//! The extended Bell vectors combine a polarization Bell state with a
//! two-location spatial factor. Their [`Exchange`] subscript is the *total*
//! exchange symmetry of the pair: `ψ⁻_S` is a singlet times an antisymmetric
//! spatial part, while `ψ⁻_A` is a singlet times a symmetric one.

use std::collections::BTreeMap;
use std::fmt;

use crate::amplitude::QRoot;
use crate::error::{Error, Result};
use crate::ket::{BasisKet, Location, ParticleLabel, State};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PhiPlus,
        BellKind::PhiMinus,
        BellKind::PsiPlus,
        BellKind::PsiMinus,
    ];

    /// Polarization terms `(p₁, p₂, sign)`.
    fn pol_terms(self) -> [(u8, u8, i64); 2] {
        match self {
            BellKind::PhiPlus => [(0, 0, 1), (1, 1, 1)],
            BellKind::PhiMinus => [(0, 0, 1), (1, 1, -1)],
            BellKind::PsiPlus => [(0, 1, 1), (1, 0, 1)],
            BellKind::PsiMinus => [(0, 1, 1), (1, 0, -1)],
        }
    }

    /// Exchange parity of the polarization part; only the singlet is odd.
    pub fn pol_parity(self) -> i64 {
        match self {
            BellKind::PsiMinus => -1,
            _ => 1,
        }
    }
}

impl fmt::Display for BellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BellKind::PhiPlus => "φ+",
            BellKind::PhiMinus => "φ-",
            BellKind::PsiPlus => "ψ+",
            BellKind::PsiMinus => "ψ-",
        };
        write!(f, "{s}")
    }
}

/// Total exchange symmetry of an extended Bell vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Exchange {
    Symmetric,
    Antisymmetric,
}

impl Exchange {
    pub fn parity(self) -> i64 {
        match self {
            Exchange::Symmetric => 1,
            Exchange::Antisymmetric => -1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BellLabel {
    pub kind: BellKind,
    /// `None` for the polarization-only basis.
    pub exchange: Option<Exchange>,
}

impl BellLabel {
    pub fn pol(kind: BellKind) -> Self {
        BellLabel {
            kind,
            exchange: None,
        }
    }

    pub fn extended(kind: BellKind, exchange: Exchange) -> Self {
        BellLabel {
            kind,
            exchange: Some(exchange),
        }
    }

    /// The eight extended labels: the four symmetric ones, then the four
    /// antisymmetric ones.
    pub fn all_extended() -> Vec<BellLabel> {
        [Exchange::Symmetric, Exchange::Antisymmetric]
            .into_iter()
            .flat_map(|e| {
                BellKind::ALL
                    .into_iter()
                    .map(move |k| BellLabel::extended(k, e))
            })
            .collect()
    }

    /// Exchange parity of the spatial factor, for extended labels.
    pub fn spatial_parity(&self) -> Option<i64> {
        self.exchange.map(|e| e.parity() * self.kind.pol_parity())
    }

    /// Spatially antisymmetric pairs leave a balanced beamsplitter through
    /// different outputs.
    pub fn is_spatially_antisymmetric(&self) -> bool {
        self.spatial_parity() == Some(-1)
    }
}

impl fmt::Display for BellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exchange {
            None => write!(f, "{}", self.kind),
            Some(Exchange::Symmetric) => write!(f, "{}_S", self.kind),
            Some(Exchange::Antisymmetric) => write!(f, "{}_A", self.kind),
        }
    }
}

/// Polarization-only Bell state on two particles.
pub fn bell_pol<S: Scalar>(kind: BellKind) -> State<S> {
    let h = QRoot::frac_1_sqrt2();
    let mut out = State::zero(2);
    for (p1, p2, sign) in kind.pol_terms() {
        let ket = BasisKet(vec![
            ParticleLabel::pol_only(p1),
            ParticleLabel::pol_only(p2),
        ]);
        out.add_term(ket, S::from_field(&(&h * &QRoot::from_int(sign))));
    }
    out
}

/// `½ (polarization Bell terms) ⊗ (|xy⟩ ± |yx⟩)` with the spatial sign fixed
/// by the requested total exchange symmetry.
pub fn bell_extended<S: Scalar>(
    kind: BellKind,
    exchange: Exchange,
    x: Location,
    y: Location,
) -> Result<State<S>> {
    if x == y {
        return Err(Error::IdenticalLocations(x.symbol()));
    }
    let spatial_sign = exchange.parity() * kind.pol_parity();
    let mut out = State::zero(2);
    for (p1, p2, pol_sign) in kind.pol_terms() {
        for (l1, l2, s) in [(x, y, 1), (y, x, spatial_sign)] {
            let ket = BasisKet(vec![ParticleLabel::new(p1, l1), ParticleLabel::new(p2, l2)]);
            out.add_term(ket, S::from_field(&QRoot::frac(pol_sign * s, 2)));
        }
    }
    Ok(out)
}

pub fn bell_vector<S: Scalar>(label: BellLabel, x: Location, y: Location) -> Result<State<S>> {
    match label.exchange {
        None => Ok(bell_pol(label.kind)),
        Some(e) => bell_extended(label.kind, e, x, y),
    }
}

/// Expansion of a state over the extended Bell vectors on one slot pair.
#[derive(Clone, Debug, PartialEq)]
pub struct PairDecomposition<S> {
    pub slots: (usize, usize),
    pub locations: (Location, Location),
    pub particles: usize,
    /// Residual state on the remaining slots for each label; zero residuals
    /// are omitted.
    pub residuals: BTreeMap<BellLabel, State<S>>,
}

impl<S: Scalar> PairDecomposition<S> {
    pub fn residual(&self, label: BellLabel) -> State<S> {
        self.residuals
            .get(&label)
            .cloned()
            .unwrap_or_else(|| State::zero(self.particles - 2))
    }

    /// `Σ_label bell(label) ⊗ residual(label)`, placed back on the pair slots.
    pub fn recombine(&self) -> Result<State<S>> {
        let (i, j) = self.slots;
        let (x, y) = self.locations;
        let mut out = State::zero(self.particles);
        for (label, residual) in &self.residuals {
            let v = bell_vector(*label, x, y)?;
            out = out.plus(&State::embed(&v, &[i, j], residual)?);
        }
        Ok(out)
    }
}

/// Decomposes slots `(i, j)` over the extended Bell vectors at locations A, B.
pub fn decompose_pair<S: Scalar>(x: &State<S>, i: usize, j: usize) -> Result<PairDecomposition<S>> {
    decompose_pair_at(x, i, j, Location::A, Location::B)
}

pub fn decompose_pair_at<S: Scalar>(
    x: &State<S>,
    i: usize,
    j: usize,
    l1: Location,
    l2: Location,
) -> Result<PairDecomposition<S>> {
    let n = x.particles();
    for s in [i, j] {
        if s >= n {
            return Err(Error::SlotOutOfRange {
                slot: s,
                particles: n,
            });
        }
    }
    if i == j {
        return Err(Error::InvalidPermutation(vec![i, j]));
    }
    if l1 == l2 {
        return Err(Error::IdenticalLocations(l1.symbol()));
    }
    let offending: Vec<String> = x
        .kets()
        .filter(|k| {
            let pair = (k.0[i].loc, k.0[j].loc);
            pair != (Some(l1), Some(l2)) && pair != (Some(l2), Some(l1))
        })
        .map(|k| k.to_string())
        .collect();
    if !offending.is_empty() {
        return Err(Error::SectorViolation {
            i,
            j,
            kets: offending,
        });
    }
    let mut residuals = BTreeMap::new();
    for label in BellLabel::all_extended() {
        let v = bell_vector(label, l1, l2)?;
        let r = x.partial_inner(&v, &[i, j])?.reduced();
        if !r.is_zero() {
            residuals.insert(label, r);
        }
    }
    Ok(PairDecomposition {
        slots: (i, j),
        locations: (l1, l2),
        particles: n,
        residuals,
    })
}

/// Orthogonal projector onto the span of a list of vectors.
///
/// Internally holds an orthogonal (not normalized) basis together with the
/// inverse squared norms, so construction never needs a square root.
#[derive(Clone, Debug)]
pub struct Projector<S> {
    particles: usize,
    basis: Vec<(State<S>, S)>,
}

pub fn subspace_projector<S: Scalar>(vectors: &[State<S>]) -> Result<Projector<S>> {
    let first = vectors.first().ok_or(Error::EmptySpan)?;
    let particles = first.particles();
    let mut basis: Vec<(State<S>, S)> = Vec::new();
    for v in vectors {
        if v.particles() != particles {
            return Err(Error::ParticleCountMismatch {
                left: particles,
                right: v.particles(),
            });
        }
        let mut u = v.clone();
        for (b, inv_norm) in &basis {
            let coef = b.inner(&u)? * inv_norm.clone();
            u = u.minus(&b.scale(&coef)).reduced();
        }
        let norm = u.norm_sq();
        if norm.is_null_norm() {
            continue;
        }
        let inv = norm.inv()?;
        basis.push((u, inv));
    }
    Ok(Projector { particles, basis })
}

impl<S: Scalar> Projector<S> {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn apply(&self, x: &State<S>) -> Result<State<S>> {
        if x.particles() != self.particles {
            return Err(Error::ParticleCountMismatch {
                left: self.particles,
                right: x.particles(),
            });
        }
        let mut out = State::zero(self.particles);
        for (b, inv_norm) in &self.basis {
            let coef = (b.inner(x)? * inv_norm.clone()).reduce();
            out = out.plus(&b.scale(&coef));
        }
        Ok(out.reduced())
    }

    /// `(1 − P) x`
    pub fn apply_complement(&self, x: &State<S>) -> Result<State<S>> {
        Ok(x.minus(&self.apply(x)?).reduced())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplitude::Amp;
    use crate::ket::{ket, ExactState};

    fn half(sign: i64) -> Amp {
        Amp::constant(QRoot::frac(sign, 2))
    }

    #[test]
    fn singlet_polarization() {
        let s: ExactState = bell_pol(BellKind::PsiMinus);
        let h = QRoot::frac_1_sqrt2();
        let expected = State::from_terms(
            2,
            [
                (ket("0,1"), Amp::constant(h.clone())),
                (ket("1,0"), Amp::constant(-h)),
            ],
        )
        .unwrap();
        assert_eq!(s, expected);
    }

    #[test]
    fn polarization_bell_orthonormal() {
        for a in BellKind::ALL {
            for b in BellKind::ALL {
                let va: ExactState = bell_pol(a);
                let vb: ExactState = bell_pol(b);
                let want = if a == b { Amp::one() } else { Amp::zero() };
                assert_eq!(va.inner(&vb).unwrap(), want, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn phi_plus_numeric() {
        let v: crate::ket::NumericState = bell_pol(BellKind::PhiPlus);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let amps: Vec<f64> = ["0,0", "0,1", "1,0", "1,1"]
            .iter()
            .map(|k| v.amplitude(&ket(k)).re)
            .collect();
        for (got, want) in amps.iter().zip([h, 0.0, 0.0, h]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn psi_minus_symmetric_matches_listing() {
        let v: ExactState = bell_extended(
            BellKind::PsiMinus,
            Exchange::Symmetric,
            Location::A,
            Location::B,
        )
        .unwrap();
        let expected = State::from_terms(
            2,
            [
                (ket("0A,1B"), half(1)),
                (ket("0B,1A"), half(-1)),
                (ket("1A,0B"), half(-1)),
                (ket("1B,0A"), half(1)),
            ],
        )
        .unwrap();
        assert_eq!(v, expected);
        assert_eq!(v.swap(0, 1).unwrap(), v);
    }

    #[test]
    fn phi_plus_antisymmetric() {
        let v: ExactState = bell_extended(
            BellKind::PhiPlus,
            Exchange::Antisymmetric,
            Location::A,
            Location::B,
        )
        .unwrap();
        let expected = State::from_terms(
            2,
            [
                (ket("0A,0B"), half(1)),
                (ket("0B,0A"), half(-1)),
                (ket("1A,1B"), half(1)),
                (ket("1B,1A"), half(-1)),
            ],
        )
        .unwrap();
        assert_eq!(v, expected);
        assert_eq!(
            v.swap(0, 1).unwrap(),
            v.scale(&Amp::constant(QRoot::from_int(-1)))
        );
    }

    #[test]
    fn identical_locations_rejected() {
        let r: Result<ExactState> = bell_extended(
            BellKind::PhiPlus,
            Exchange::Symmetric,
            Location::A,
            Location::A,
        );
        assert_eq!(r, Err(Error::IdenticalLocations('A')));
    }

    #[test]
    fn spatially_antisymmetric_labels() {
        let labels: Vec<String> = BellLabel::all_extended()
            .into_iter()
            .filter(BellLabel::is_spatially_antisymmetric)
            .map(|l| l.to_string())
            .collect();
        assert_eq!(labels, ["ψ-_S", "φ+_A", "φ-_A", "ψ+_A"]);
    }

    #[test]
    fn decompose_product_ket() {
        let x: ExactState = State::basis(ket("0A,0B"));
        let d = decompose_pair(&x, 0, 1).unwrap();
        let mut got: Vec<(String, Amp)> = d
            .residuals
            .iter()
            .map(|(l, r)| (l.to_string(), r.amplitude(&BasisKet::default())))
            .collect();
        got.sort_by(|a, b| a.0.cmp(&b.0));
        let mut want = vec![
            ("φ+_S".to_string(), half(1)),
            ("φ-_S".to_string(), half(1)),
            ("φ+_A".to_string(), half(1)),
            ("φ-_A".to_string(), half(1)),
        ];
        want.sort_by(|a, b| a.0.cmp(&b.0));
        assert_eq!(got, want);
        assert_eq!(d.recombine().unwrap(), x);
    }

    #[test]
    fn decompose_rejects_out_of_sector() {
        let x: ExactState = State::basis(ket("0A,0A"));
        assert!(matches!(
            decompose_pair(&x, 0, 1),
            Err(Error::SectorViolation { .. })
        ));
    }

    #[test]
    fn projector_single_vector() {
        let p = subspace_projector(&[State::<Amp>::basis(ket("0A"))]).unwrap();
        let x = State::from_terms(1, [(ket("0A"), Amp::one()), (ket("1B"), Amp::one())]).unwrap();
        assert_eq!(p.apply(&x).unwrap(), State::basis(ket("0A")));
    }

    #[test]
    fn projector_drops_dependent_vectors() {
        let v: ExactState =
            State::from_terms(1, [(ket("0A"), Amp::one()), (ket("1A"), Amp::one())]).unwrap();
        let p = subspace_projector(&[v.clone(), v.scale_field(&QRoot::from_int(2))]).unwrap();
        assert_eq!(p.rank(), 1);
        assert_eq!(p.apply(&v).unwrap(), v);
    }

    #[test]
    fn projector_needs_vectors() {
        assert_eq!(
            subspace_projector::<Amp>(&[]).map(|p| p.rank()),
            Err(Error::EmptySpan)
        );
    }
}
