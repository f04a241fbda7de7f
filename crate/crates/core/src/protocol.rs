//! Scenario builders and measurement drivers.
//!
//! Three treatments of the same teleportation experiment:
//!
//! * [`bennett_run`]: distinguishable particles, polarization only, full
//!   Bell measurement on particles 1 and 2.
//! * [`run_naive`]: spatial modes added, the channel pair symmetrized but
//!   particle 1 kept distinguishable.
//! * [`run_symmetric`]: all three photons symmetrized over polarization and
//!   location.
//!
//! The beamsplitter is a projective dichotomy on the spatial exchange
//! symmetry of the pair occupying its two input ports: a spatially
//! antisymmetric pair exits through different outputs (a coincidence), a
//! symmetric one bunches.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_complex::Complex64;

use crate::amplitude::{Amp, QRoot, NORMALIZATION_TOL};
use crate::bell::{
    bell_extended, bell_pol, decompose_pair_at, subspace_projector, BellKind, BellLabel, Exchange,
    PairDecomposition,
};
use crate::error::{Error, Result};
use crate::ket::{BasisKet, Location, ParticleLabel, State};
use crate::scalar::Scalar;

/// Amplitudes of the polarization state to be teleported.
#[derive(Clone, Debug, PartialEq)]
pub struct Input<S> {
    pub alpha: S,
    pub beta: S,
}

impl Input<Amp> {
    pub fn symbolic() -> Self {
        Input {
            alpha: Amp::alpha(),
            beta: Amp::beta(),
        }
    }
}

impl Input<Complex64> {
    pub fn numeric(alpha: Complex64, beta: Complex64) -> Result<Self> {
        if (alpha.norm_sqr() + beta.norm_sqr() - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized);
        }
        Ok(Input { alpha, beta })
    }
}

impl<S: Scalar> Input<S> {
    /// `α|0⟩ + β|1⟩` on a single particle at `loc` (or without location).
    pub fn polarization_state(&self, loc: Option<Location>) -> State<S> {
        let mut out = State::zero(1);
        for (pol, amp) in [(0, &self.alpha), (1, &self.beta)] {
            out.add_term(BasisKet(vec![ParticleLabel { pol, loc }]), amp.clone());
        }
        out
    }
}

/// `(α|0⟩ + β|1⟩)|A⟩` as a one-particle state.
pub fn make_input<S: Scalar>(input: &Input<S>) -> State<S> {
    input.polarization_state(Some(Location::A))
}

/// `½(|01⟩ − |10⟩)(|BC⟩ − |CB⟩)`: a polarization singlet with an
/// antisymmetric spatial part, hence exchange symmetric overall.
pub fn make_channel<S: Scalar>() -> State<S> {
    let mut out = State::zero(2);
    for (p1, p2, pol_sign) in [(0, 1, 1), (1, 0, -1)] {
        for (l1, l2, loc_sign) in [
            (Location::B, Location::C, 1),
            (Location::C, Location::B, -1),
        ] {
            let ket = BasisKet(vec![ParticleLabel::new(p1, l1), ParticleLabel::new(p2, l2)]);
            out.add_term(ket, S::from_field(&QRoot::frac(pol_sign * loc_sign, 2)));
        }
    }
    out
}

/// Pauli correction applied by the receiver, up to a global phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Correction {
    Identity,
    X,
    Z,
    /// `Z·X`: X first, then Z.
    ZX,
}

impl Correction {
    pub fn for_outcome(kind: BellKind) -> Self {
        match kind {
            BellKind::PhiPlus => Correction::ZX,
            BellKind::PhiMinus => Correction::X,
            BellKind::PsiPlus => Correction::Z,
            BellKind::PsiMinus => Correction::Identity,
        }
    }

    /// Applies the correction to `slot` of `x`.
    pub fn apply<S: Scalar>(self, x: &State<S>, slot: usize) -> Result<State<S>> {
        if slot >= x.particles() {
            return Err(Error::SlotOutOfRange {
                slot,
                particles: x.particles(),
            });
        }
        let (flip, phase) = match self {
            Correction::Identity => (false, false),
            Correction::X => (true, false),
            Correction::Z => (false, true),
            Correction::ZX => (true, true),
        };
        let mut out = State::zero(x.particles());
        for (k, a) in x.terms() {
            let mut k = k.clone();
            if flip {
                k.0[slot].pol ^= 1;
            }
            let a = if phase && k.0[slot].pol == 1 {
                -a.clone()
            } else {
                a.clone()
            };
            out.add_term(k, a);
        }
        Ok(out)
    }
}

impl fmt::Display for Correction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Correction::Identity => "I",
            Correction::X => "X",
            Correction::Z => "Z",
            Correction::ZX => "ZX",
        };
        write!(f, "{s}")
    }
}

/// One branch of a Bell measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome<S> {
    pub label: BellLabel,
    pub probability: S,
    /// Normalized state of the receiver's particle.
    pub post_state: State<S>,
    pub correction: Correction,
    pub corrected: State<S>,
    /// Whether the corrected state equals the input up to a global phase.
    pub recovered: bool,
}

fn require_constant<S: Scalar>(p: S) -> Result<S> {
    let p = p.reduce();
    if p.is_constant() {
        Ok(p)
    } else {
        Err(Error::NonConstantProbability(p.render()))
    }
}

/// Original scheme with distinguishable particles: `(α|0⟩+β|1⟩)₁ ⊗ ψ⁻₂₃`,
/// full Bell measurement on particles 1, 2.
pub fn bennett_run<S: Scalar>(input: &Input<S>) -> Result<Vec<Outcome<S>>> {
    let psi = input.polarization_state(None);
    let state = psi.tensor(&bell_pol(BellKind::PsiMinus));
    let mut outcomes = Vec::with_capacity(4);
    for kind in BellKind::ALL {
        let residual = state.partial_inner(&bell_pol(kind), &[0, 1])?;
        let probability = require_constant(residual.norm_sq())?;
        let post_state = residual.normalize()?;
        let correction = Correction::for_outcome(kind);
        let corrected = correction.apply(&post_state, 0)?;
        let recovered = corrected.equal_up_to_phase(&psi);
        outcomes.push(Outcome {
            label: BellLabel::pol(kind),
            probability,
            post_state,
            correction,
            corrected,
            recovered,
        });
    }
    Ok(outcomes)
}

/// `|ψ⟩₁ ⊗ |φ⟩₂₃` with particle 1 left distinguishable.
pub fn build_naive<S: Scalar>(input: &Input<S>) -> State<S> {
    make_input(input).tensor(&make_channel())
}

/// Total symmetrization of [`build_naive`] over all three photons.
pub fn build_symmetric<S: Scalar>(input: &Input<S>) -> Result<State<S>> {
    build_naive(input).symmetrize()
}

/// Pairwise Bell expansion of a three-particle state: for each slot `k`
/// sitting at `spectator`, the other two slots are decomposed over the
/// extended Bell vectors at locations A, B.
pub fn pairwise_expansion<S: Scalar>(
    x: &State<S>,
    spectator: Location,
) -> Result<Vec<PairDecomposition<S>>> {
    let n = x.particles();
    let mut out = Vec::new();
    for k in 0..n {
        let part = x.restrict(k, spectator);
        if part.is_zero() {
            continue;
        }
        let pair: Vec<usize> = (0..n).filter(|&s| s != k).collect();
        if pair.len() != 2 {
            return Err(Error::ParticleCountMismatch { left: 3, right: n });
        }
        out.push(decompose_pair_at(
            &part,
            pair[0],
            pair[1],
            Location::A,
            Location::B,
        )?);
    }
    Ok(out)
}

/// Result of a coincidence detection behind the beamsplitter.
#[derive(Clone, Debug, PartialEq)]
pub struct Coincidence<S> {
    pub probability: S,
    pub collapsed: State<S>,
    /// `‖(1 − P) x‖²`
    pub rejected_weight: S,
    pub rank: usize,
    /// Bell labels spanning the coincidence subspace on each pair.
    pub labels: Vec<BellLabel>,
    /// True when totally antisymmetric (unphysical for photons) vectors had
    /// to be included because the input is not totally symmetric.
    pub includes_nonphysical: bool,
}

/// Single-particle labels found outside `in1`, `in2`.
fn spectator_labels<S: Scalar>(x: &State<S>, in1: Location, in2: Location) -> Vec<ParticleLabel> {
    let locs: BTreeSet<Location> = x
        .kets()
        .flat_map(|k| k.labels().iter().filter_map(|l| l.loc))
        .filter(|&l| l != in1 && l != in2)
        .collect();
    locs.into_iter()
        .flat_map(|loc| [0, 1].map(|p| ParticleLabel::new(p, loc)))
        .collect()
}

fn product_basis(labels: &[ParticleLabel], slots: usize) -> Vec<BasisKet> {
    let mut out = vec![BasisKet::default()];
    for _ in 0..slots {
        out = out
            .into_iter()
            .flat_map(|k| {
                labels.iter().map(move |l| {
                    let mut v = k.0.clone();
                    v.push(*l);
                    BasisKet(v)
                })
            })
            .collect();
    }
    out
}

/// Projects `x` onto the coincidence subspace of a beamsplitter fed at
/// `in1`, `in2`: the span of spatially antisymmetric extended Bell vectors
/// on every slot pair, tensored with a basis of the remaining slots.
///
/// For a totally symmetric input only `ψ⁻_S` contributes; otherwise the
/// totally antisymmetric `φ±_A`, `ψ⁺_A` vectors are included as well.
pub fn coincidence_measure<S: Scalar>(
    x: &State<S>,
    in1: Location,
    in2: Location,
) -> Result<Coincidence<S>> {
    if in1 == in2 {
        return Err(Error::IdenticalLocations(in1.symbol()));
    }
    let n = x.particles();
    let offending: Vec<String> = x
        .kets()
        .filter(|k| n < 2 || k.slots_at(in1).len() != 1 || k.slots_at(in2).len() != 1)
        .map(|k| k.to_string())
        .collect();
    if !offending.is_empty() {
        return Err(Error::MeasurementPrecondition(offending));
    }
    if x.is_zero() {
        return Err(Error::ZeroNorm);
    }

    let symmetric = x.is_totally_symmetric();
    let labels: Vec<BellLabel> = if symmetric {
        vec![BellLabel::extended(BellKind::PsiMinus, Exchange::Symmetric)]
    } else {
        BellLabel::all_extended()
            .into_iter()
            .filter(BellLabel::is_spatially_antisymmetric)
            .collect()
    };
    let rest = product_basis(&spectator_labels(x, in1, in2), n - 2);

    let mut vectors = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for label in &labels {
                let exchange = label.exchange.expect("extended label");
                let pair: State<S> = bell_extended(label.kind, exchange, in1, in2)?;
                for r in &rest {
                    vectors.push(State::embed(&pair, &[i, j], &State::basis(r.clone()))?);
                }
            }
        }
    }
    let projector = subspace_projector(&vectors)?;
    let projected = projector.apply(x)?;
    let probability = require_constant(projected.norm_sq())?;
    if probability.is_null_norm() {
        return Err(Error::OutcomeImpossible);
    }
    let rejected_weight = require_constant(projector.apply_complement(x)?.norm_sq())?;
    let collapsed = projected.normalize()?;
    Ok(Coincidence {
        probability,
        collapsed,
        rejected_weight,
        rank: projector.rank(),
        labels,
        includes_nonphysical: !symmetric,
    })
}

/// Conditional 2×2 polarization state of whichever particle sits at a
/// location.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix2<S> {
    pub entries: [[S; 2]; 2],
}

impl<S: Scalar> DensityMatrix2<S> {
    pub fn pure(chi: &Input<S>) -> Self {
        let v = [chi.alpha.clone(), chi.beta.clone()];
        let entries = [0, 1].map(|p| [0, 1].map(|q| (v[p].clone() * v[q].conj()).reduce()));
        DensityMatrix2 { entries }
    }

    pub fn maximally_mixed() -> Self {
        let h = S::from_field(&QRoot::frac(1, 2));
        DensityMatrix2 {
            entries: [[h.clone(), S::zero()], [S::zero(), h]],
        }
    }

    pub fn trace(&self) -> S {
        (self.entries[0][0].clone() + self.entries[1][1].clone()).reduce()
    }

    pub fn is_hermitian(&self) -> bool {
        self.entries[1][0].approx_eq(&self.entries[0][1].conj())
            && self.entries[0][0].approx_eq(&self.entries[0][0].conj())
            && self.entries[1][1].approx_eq(&self.entries[1][1].conj())
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        (0..2).all(|p| (0..2).all(|q| self.entries[p][q].approx_eq(&other.entries[p][q])))
    }

    pub fn to_numeric(&self, alpha: Complex64, beta: Complex64) -> DensityMatrix2<Complex64> {
        DensityMatrix2 {
            entries: [0, 1].map(|p| [0, 1].map(|q| self.entries[p][q].to_complex(alpha, beta))),
        }
    }
}

/// Reduced polarization state of the particle at `loc`: kets agreeing on
/// every other slot (including which slot sits at `loc`) are traced out.
pub fn conditional_at<S: Scalar>(x: &State<S>, loc: Location) -> Result<DensityMatrix2<S>> {
    let offending: Vec<String> = x
        .kets()
        .filter(|k| k.slots_at(loc).len() != 1)
        .map(|k| k.to_string())
        .collect();
    if !offending.is_empty() {
        return Err(Error::LocationOccupancy {
            loc: loc.symbol(),
            kets: offending,
        });
    }
    let mut env: BTreeMap<BasisKet, [S; 2]> = BTreeMap::new();
    for (k, a) in x.terms() {
        let slot = k.slots_at(loc)[0];
        let pol = usize::from(k.0[slot].pol);
        let mut key = k.clone();
        key.0[slot].pol = 0;
        let entry = env.entry(key).or_insert_with(|| [S::zero(), S::zero()]);
        entry[pol] = entry[pol].clone() + a.clone();
    }
    let mut entries = [[S::zero(), S::zero()], [S::zero(), S::zero()]];
    for c in env.values() {
        for p in 0..2 {
            for q in 0..2 {
                entries[p][q] = entries[p][q].clone() + c[p].clone() * c[q].conj();
            }
        }
    }
    let rho = DensityMatrix2 {
        entries: entries.map(|row| row.map(|e| e.reduce())),
    };
    let trace = rho.trace();
    if trace.is_null_norm() {
        return Err(Error::ZeroNorm);
    }
    let inv = trace.inv()?;
    Ok(DensityMatrix2 {
        entries: rho
            .entries
            .map(|row| row.map(|e| (e * inv.clone()).reduce())),
    })
}

/// `⟨χ|ρ|χ⟩` with `χ = α|0⟩ + β|1⟩`.
pub fn fidelity<S: Scalar>(rho: &DensityMatrix2<S>, chi: &Input<S>) -> S {
    let v = [chi.alpha.clone(), chi.beta.clone()];
    let mut acc = S::zero();
    for p in 0..2 {
        for q in 0..2 {
            acc = acc + v[p].conj() * rho.entries[p][q].clone() * v[q].clone();
        }
    }
    acc.reduce()
}

/// `(1/√3) Σ_(i,j) ψ⁻_S(i,j) ⊗ (α|0C⟩ + β|1C⟩)_k` summed over the three
/// spectator slots `k`.
pub fn teleported_manifold<S: Scalar>(input: &Input<S>) -> Result<State<S>> {
    let pair: State<S> = bell_extended(
        BellKind::PsiMinus,
        Exchange::Symmetric,
        Location::A,
        Location::B,
    )?;
    let chi = input.polarization_state(Some(Location::C));
    let mut out = State::zero(3);
    for k in 0..3 {
        let slots: Vec<usize> = (0..3).filter(|&s| s != k).collect();
        out = out.plus(&State::embed(&pair, &slots, &chi)?);
    }
    out.reduced().normalize()
}

/// Everything computed for one of the two spatial scenarios.
#[derive(Clone, Debug)]
pub struct ScenarioRun<S> {
    pub initial: State<S>,
    pub expansion: Vec<PairDecomposition<S>>,
    pub coincidence: Coincidence<S>,
    pub collapsed_expansion: Vec<PairDecomposition<S>>,
    pub conditional: DensityMatrix2<S>,
    pub fidelity: S,
}

fn run_scenario<S: Scalar>(initial: State<S>, input: &Input<S>) -> Result<ScenarioRun<S>> {
    let expansion = pairwise_expansion(&initial, Location::C)?;
    let coincidence = coincidence_measure(&initial, Location::A, Location::B)?;
    let collapsed_expansion = pairwise_expansion(&coincidence.collapsed, Location::C)?;
    let conditional = conditional_at(&coincidence.collapsed, Location::C)?;
    let fidelity = fidelity(&conditional, input);
    Ok(ScenarioRun {
        initial,
        expansion,
        coincidence,
        collapsed_expansion,
        conditional,
        fidelity,
    })
}

/// Partially symmetrized treatment (particle 1 distinguishable).
pub fn run_naive<S: Scalar>(input: &Input<S>) -> Result<ScenarioRun<S>> {
    run_scenario(build_naive(input), input)
}

/// Fully symmetrized treatment.
pub fn run_symmetric<S: Scalar>(input: &Input<S>) -> Result<ScenarioRun<S>> {
    run_scenario(build_symmetric(input)?, input)
}
