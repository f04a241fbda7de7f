//! Scenario reports: every computed probability, fidelity and state, plus
//! the pass/fail checks that compare them with the expected forms.

use std::fmt::{self, Display, Write as _};

use num_complex::Complex64;
use serde::Serialize;

use crate::amplitude::{Amp, QRoot};
use crate::bell::{bell_vector, BellKind, BellLabel, Exchange, PairDecomposition};
use crate::error::Result;
use crate::ket::{ket, BasisKet, Location, State};
use crate::protocol::{
    bennett_run, build_naive, pairwise_expansion, run_naive, run_symmetric, teleported_manifold,
    DensityMatrix2, Input, ScenarioRun,
};
use crate::sampling::sweep_input;
use crate::scalar::Scalar;

pub const SCHEMA_VERSION: u32 = 1;
/// Bound on `|exact − numeric|` for every scalar compared in a sweep.
pub const SWEEP_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub paper_ref: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalarEntry {
    pub name: String,
    pub exact: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StateEntry {
    pub name: String,
    pub terms: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecompositionRow {
    pub state: String,
    /// 1-based particle indices of the decomposed pair.
    pub pair: [usize; 2],
    pub label: String,
    pub residual: String,
    pub nonphysical: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub scenario: String,
    pub backend: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<[String; 2]>,
    pub probabilities: Vec<ScalarEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fidelity: Option<ScalarEntry>,
    pub checks: Vec<Check>,
    pub states: Vec<StateEntry>,
    pub decompositions: Vec<DecompositionRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub discrepancies: Vec<ScalarEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_discrepancy: Option<f64>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(scenario: &str, backend: &str, seed: u64) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            scenario: scenario.to_string(),
            backend: backend.to_string(),
            seed,
            samples: None,
            input: None,
            probabilities: Vec::new(),
            fidelity: None,
            checks: Vec::new(),
            states: Vec::new(),
            decompositions: Vec::new(),
            discrepancies: Vec::new(),
            max_discrepancy: None,
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push_check(
        &mut self,
        name: &str,
        paper_ref: &str,
        expected: impl Display,
        actual: impl Display,
        pass: bool,
    ) {
        self.checks.push(Check {
            name: name.to_string(),
            paper_ref: paper_ref.to_string(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            pass,
        });
    }

    fn push_state<S: Scalar>(&mut self, name: &str, x: &State<S>) {
        self.states.push(StateEntry {
            name: name.to_string(),
            terms: x.listing(),
        });
    }

    fn push_decompositions<S: Scalar>(&mut self, state: &str, parts: &[PairDecomposition<S>]) {
        for d in parts {
            for (label, residual) in &d.residuals {
                self.decompositions.push(DecompositionRow {
                    state: state.to_string(),
                    pair: [d.slots.0 + 1, d.slots.1 + 1],
                    label: label.to_string(),
                    residual: residual.to_string(),
                    nonphysical: label.exchange == Some(Exchange::Antisymmetric),
                });
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "scenario: {} (backend {}, seed {})",
            self.scenario, self.backend, self.seed
        );
        if let Some(n) = self.samples {
            let _ = writeln!(out, "samples: {n}");
        }
        if let Some([a, b]) = &self.input {
            let _ = writeln!(out, "input: α = {a}, β = {b}");
        }
        for p in &self.probabilities {
            let _ = writeln!(out, "P[{}] = {} ≈ {:.15}", p.name, p.exact, p.value);
        }
        if let Some(f) = &self.fidelity {
            let _ = writeln!(out, "F[{}] = {} ≈ {:.15}", f.name, f.exact, f.value);
        }
        for d in &self.discrepancies {
            let _ = writeln!(out, "max |exact − numeric| [{}] = {:e}", d.name, d.value);
        }
        if let Some(m) = self.max_discrepancy {
            let _ = writeln!(out, "max discrepancy overall = {m:e}");
        }
        for s in &self.states {
            let _ = writeln!(out, "state {}:", s.name);
            for (k, a) in &s.terms {
                let _ = writeln!(out, "    |{k}⟩  {a}");
            }
        }
        if !self.decompositions.is_empty() {
            let _ = writeln!(out, "bell expansions:");
            for d in &self.decompositions {
                let tag = if d.nonphysical { "  (nonphysical)" } else { "" };
                let _ = writeln!(
                    out,
                    "    {} pair ({},{}) {:<5} ⊗ {}{}",
                    d.state, d.pair[0], d.pair[1], d.label, d.residual, tag
                );
            }
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        for c in &self.checks {
            let mark = if c.pass { "PASS" } else { "FAIL" };
            let _ = writeln!(
                out,
                "[{mark}] {} ({}): expected {}, got {}",
                c.name, c.paper_ref, c.expected, c.actual
            );
        }
        let passed = self.checks.iter().filter(|c| c.pass).count();
        let _ = writeln!(out, "{passed}/{} checks passed", self.checks.len());
        out
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Scalars in reports are shown exactly and as the real part of their value
/// at `at` (any normalized input for constants).
fn scalar_entry<S: Scalar>(name: &str, x: &S, at: &Input<Complex64>) -> ScalarEntry {
    ScalarEntry {
        name: name.to_string(),
        exact: x.render(),
        value: x.to_complex(at.alpha, at.beta).re,
    }
}

fn constant<S: Scalar>(n: i64, d: i64) -> S {
    S::from_field(&QRoot::frac(n, d))
}

/// Residual left on the receiver's particle after a Bell outcome `kind`,
/// before any correction:
/// `φ⁺ → −β|0⟩+α|1⟩`, `φ⁻ → β|0⟩+α|1⟩`, `ψ⁺ → −α|0⟩+β|1⟩`, `ψ⁻ → −α|0⟩−β|1⟩`.
pub fn outcome_pattern<S: Scalar>(
    kind: BellKind,
    input: &Input<S>,
    loc: Option<Location>,
) -> State<S> {
    let (a, b) = (input.alpha.clone(), input.beta.clone());
    let (c0, c1) = match kind {
        BellKind::PhiPlus => (-b, a),
        BellKind::PhiMinus => (b, a),
        BellKind::PsiPlus => (-a, b),
        BellKind::PsiMinus => (-a, -b),
    };
    let mut out = State::zero(1);
    for (pol, c) in [(0, c0), (1, c1)] {
        out.add_term(BasisKet(vec![crate::ket::ParticleLabel { pol, loc }]), c);
    }
    out
}

/// Compares a pairwise expansion against `coef · outcome_pattern(kind)` for
/// every label in `labels` and zero elsewhere.
fn expansion_matches<S: Scalar>(
    parts: &[PairDecomposition<S>],
    expected_pairs: &[(usize, usize)],
    labels: &[BellLabel],
    coef: &QRoot,
    input: &Input<S>,
) -> (bool, usize) {
    let mut count = 0;
    let pairs: Vec<(usize, usize)> = parts.iter().map(|d| d.slots).collect();
    if pairs != expected_pairs {
        return (false, 0);
    }
    for d in parts {
        for label in BellLabel::all_extended() {
            let got = d.residual(label);
            let want = if labels.contains(&label) {
                outcome_pattern(label.kind, input, Some(Location::C)).scale_field(coef)
            } else {
                State::zero(1)
            };
            if !got.approx_eq(&want) {
                return (false, count);
            }
            if !got.is_zero() {
                count += 1;
            }
        }
    }
    (true, count)
}

fn input_strings(input: &Input<Complex64>) -> [String; 2] {
    [input.alpha.render(), input.beta.render()]
}

/// Evaluation point for exact constants.
fn unit_input() -> Input<Complex64> {
    Input {
        alpha: Complex64::new(1.0, 0.0),
        beta: Complex64::new(0.0, 0.0),
    }
}

pub fn bennett_report<S: Scalar>(
    report: &mut Report,
    input: &Input<S>,
    at: &Input<Complex64>,
) -> Result<()> {
    let outcomes = bennett_run(input)?;
    let quarter: S = constant(1, 4);
    let mut total = S::zero();
    for o in &outcomes {
        let kind = o.label.kind;
        report
            .probabilities
            .push(scalar_entry(&o.label.to_string(), &o.probability, at));
        total = total + o.probability.clone();
        report.push_check(
            &format!("bennett {} probability", o.label),
            "four equiprobable Bell outcomes",
            quarter.render(),
            o.probability.render(),
            o.probability.approx_eq(&quarter),
        );
        let want = outcome_pattern(kind, input, None);
        report.push_check(
            &format!("bennett {} post-state", o.label),
            "receiver state per Bell outcome",
            &want,
            &o.post_state,
            o.post_state.approx_eq(&want),
        );
        report.push_check(
            &format!(
                "bennett {} correction {} recovers input",
                o.label, o.correction
            ),
            "receiver reconstructs the input by a unitary",
            "true",
            o.recovered,
            o.recovered,
        );
        report.push_state(
            &format!("post-state {} (correction {})", o.label, o.correction),
            &o.post_state,
        );
    }
    let total = total.reduce();
    report.push_check(
        "bennett probabilities sum to 1",
        "four equiprobable Bell outcomes",
        "1",
        total.render(),
        total.approx_eq(&S::one()),
    );
    Ok(())
}

fn common_run_checks<S: Scalar>(
    report: &mut Report,
    tag: &str,
    run: &ScenarioRun<S>,
    expected_probability: &S,
    provenance: &str,
) {
    let c = &run.coincidence;
    let total = (c.probability.clone() + c.rejected_weight.clone()).reduce();
    report.push_check(
        &format!("{tag} coincidence probability"),
        provenance,
        expected_probability.render(),
        c.probability.render(),
        c.probability.approx_eq(expected_probability),
    );
    report.push_check(
        &format!("{tag} projective completeness"),
        "p + ‖(1−P)x‖² = ‖x‖²",
        "1",
        total.render(),
        total.approx_eq(&S::one()),
    );
    report.push_check(
        &format!("{tag} conditional state at C is Hermitian with unit trace"),
        "conditional polarization state at C",
        "true",
        run.conditional.is_hermitian(),
        run.conditional.is_hermitian() && run.conditional.trace().approx_eq(&S::one()),
    );
}

pub fn naive_report<S: Scalar>(
    report: &mut Report,
    input: &Input<S>,
    at: &Input<Complex64>,
    exact_counts: bool,
) -> Result<()> {
    let run = run_naive(input)?;
    let x = &run.initial;
    report.push_state("initial (particle 1 distinguishable)", x);
    if exact_counts {
        report.push_check(
            "naive initial state has 8 terms",
            "initial three-photon state",
            8,
            x.len(),
            x.len() == 8,
        );
    }
    let swapped = x.swap(1, 2)?;
    report.push_check(
        "naive initial state invariant under exchange of particles 2, 3",
        "channel pair exchange symmetric",
        "true",
        swapped.approx_eq(x),
        swapped.approx_eq(x),
    );
    let norm = x.norm_sq();
    report.push_check(
        "naive initial state normalized",
        "initial three-photon state",
        "1",
        norm.render(),
        norm.approx_eq(&S::one()),
    );

    let quarter = QRoot::frac(1, 4);
    let all = BellLabel::all_extended();
    let (ok, n) = expansion_matches(&run.expansion, &[(0, 2), (0, 1)], &all, &quarter, input);
    report.push_check(
        "naive bell expansion: 16 terms (1/4)·[X_S + X_A]⊗pattern on pairs (1,3),(1,2)",
        "rearrangement in symmetric + antisymmetric Bell vectors",
        "16 matching terms",
        format!("{n} matching terms"),
        ok && n == 16,
    );
    report.push_decompositions("initial", &run.expansion);

    let half: S = constant(1, 2);
    common_run_checks(
        report,
        "naive",
        &run,
        &half,
        "coincidence on the partially symmetrized state",
    );
    report.probabilities.push(scalar_entry(
        "coincidence",
        &run.coincidence.probability,
        at,
    ));

    let retained: Vec<BellLabel> = all
        .iter()
        .copied()
        .filter(BellLabel::is_spatially_antisymmetric)
        .collect();
    let coef = QRoot::frac_1_sqrt2() * QRoot::frac(1, 2);
    let (ok, n) = expansion_matches(
        &run.collapsed_expansion,
        &[(0, 2), (0, 1)],
        &retained,
        &coef,
        input,
    );
    report.push_check(
        "naive collapse keeps only spatially antisymmetric pair kets, coefficient 1/(2√2)",
        "collapse after a coincidence, partially symmetrized",
        "8 matching terms",
        format!("{n} matching terms"),
        ok && n == 8,
    );
    report.push_check(
        "naive coincidence subspace includes totally antisymmetric vectors",
        "totally antisymmetric Bell vectors are nonphysical",
        "true",
        run.coincidence.includes_nonphysical,
        run.coincidence.includes_nonphysical,
    );
    report.push_decompositions("collapsed", &run.collapsed_expansion);
    report.push_state("collapsed after coincidence", &run.coincidence.collapsed);

    let mixed = DensityMatrix2::<S>::maximally_mixed();
    report.push_check(
        "naive conditional state at C is maximally mixed",
        "no conclusion about the polarization in C",
        "I/2",
        render_rho(&run.conditional),
        run.conditional.approx_eq(&mixed),
    );
    let f_max = 0.95;
    let f_value = run.fidelity.to_complex(at.alpha, at.beta).re;
    report.push_check(
        "naive fidelity at C is 1/2",
        "no conclusion about the polarization in C",
        half.render(),
        run.fidelity.render(),
        run.fidelity.approx_eq(&half) && f_value <= f_max,
    );
    report.fidelity = Some(scalar_entry("C", &run.fidelity, at));
    report.notes.push(
        "the coincidence subspace of a non-symmetric input includes the totally antisymmetric φ±_A, ψ+_A pair vectors; they are not valid photon states and are flagged nonphysical"
            .to_string(),
    );
    Ok(())
}

pub fn symmetric_report<S: Scalar>(
    report: &mut Report,
    input: &Input<S>,
    at: &Input<Complex64>,
    exact_counts: bool,
) -> Result<()> {
    let run = run_symmetric(input)?;
    let x = &run.initial;
    report.push_state("initial (fully symmetrized)", x);
    let symmetric = x.is_totally_symmetric();
    report.push_check(
        "symmetrized state invariant under all permutations of 3 photons",
        "complete symmetrization",
        "true",
        symmetric,
        symmetric,
    );
    if exact_counts {
        report.push_check(
            "symmetrized state has 24 basis kets",
            "complete symmetrization",
            24,
            x.len(),
            x.len() == 24,
        );
    }
    let norm = x.norm_sq();
    report.push_check(
        "symmetrized state normalized",
        "complete symmetrization",
        "1",
        norm.render(),
        norm.approx_eq(&S::one()),
    );

    let coef = QRoot::sqrt3() * QRoot::frac(1, 6);
    let sym: Vec<BellLabel> = BellKind::ALL
        .into_iter()
        .map(|k| BellLabel::extended(k, Exchange::Symmetric))
        .collect();
    let (ok, n) = expansion_matches(
        &run.expansion,
        &[(1, 2), (0, 2), (0, 1)],
        &sym,
        &coef,
        input,
    );
    report.push_check(
        "symmetric bell expansion: 12 terms of magnitude 1/√12 with the teleportation sign pattern",
        "expansion of the symmetrized state in symmetric Bell vectors",
        "12 matching terms",
        format!("{n} matching terms"),
        ok && n == 12,
    );
    report.push_decompositions("initial", &run.expansion);

    let quarter: S = constant(1, 4);
    common_run_checks(
        report,
        "symmetric",
        &run,
        &quarter,
        "coincidence occurs in exactly 1/4 of the cases",
    );
    report.probabilities.push(scalar_entry(
        "coincidence",
        &run.coincidence.probability,
        at,
    ));

    let manifold = teleported_manifold(input)?;
    let minus = manifold.scale(&-S::one());
    report.push_check(
        "symmetric collapse equals −(1/√3) Σ ψ-_S ⊗ (α|0C⟩+β|1C⟩)",
        "collapse onto the three-pair manifold",
        "exact equality",
        if run.coincidence.collapsed.approx_eq(&minus) {
            "equal"
        } else {
            "different"
        },
        run.coincidence.collapsed.approx_eq(&minus),
    );
    let phase = run.coincidence.collapsed.equal_up_to_phase(&manifold);
    report.push_check(
        "symmetric collapse equals the three-pair manifold up to global phase",
        "collapse onto the three-pair manifold",
        "true",
        phase,
        phase,
    );
    report.push_decompositions("collapsed", &run.collapsed_expansion);
    report.push_state("collapsed after coincidence", &run.coincidence.collapsed);

    let pure = DensityMatrix2::pure(input);
    report.push_check(
        "symmetric conditional state at C is the pure input projector",
        "photon in C carries the input polarization",
        render_rho(&pure),
        render_rho(&run.conditional),
        run.conditional.approx_eq(&pure),
    );
    report.push_check(
        "symmetric fidelity at C",
        "photon in C carries the input polarization",
        "1",
        run.fidelity.render(),
        run.fidelity.approx_eq(&S::one()),
    );
    report.fidelity = Some(scalar_entry("C", &run.fidelity, at));
    report.notes.push(
        "the commonly printed form of the symmetric Bell expansion lists φ+_S for pairs (1,3) and (2,3) in its φ-_S row; the computed coefficients (1/√12)(α|1C⟩+β|0C⟩) belong to φ-_S(1,3) and φ-_S(2,3)"
            .to_string(),
    );
    report.notes.push(
        "the collapsed state carries a global sign −1 relative to the commonly printed three-pair form; the two agree up to global phase"
            .to_string(),
    );
    Ok(())
}

/// `c₁·v₁ + c₂·v₂ − …` with leading minus signs folded into the operator.
fn signed_sum(terms: impl Iterator<Item = (String, String)>) -> String {
    let mut out = String::new();
    for (c, v) in terms {
        let (neg, c) = match c.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, c),
        };
        match (out.is_empty(), neg) {
            (true, false) => {}
            (true, true) => out.push('-'),
            (false, false) => out.push_str(" + "),
            (false, true) => out.push_str(" - "),
        }
        let _ = write!(out, "{c}·{v}");
    }
    out
}

fn render_rho<S: Scalar>(rho: &DensityMatrix2<S>) -> String {
    let e = &rho.entries;
    format!(
        "[[{}, {}], [{}, {}]]",
        e[0][0].render(),
        e[0][1].render(),
        e[1][0].render(),
        e[1][1].render()
    )
}

/// `(label, coefficient)` expansions of the four two-photon product kets at
/// A, B in the eight extended Bell vectors.
pub fn product_ket_expansions() -> Vec<(&'static str, Vec<(BellLabel, i64)>)> {
    use BellKind::*;
    use Exchange::*;
    let l = BellLabel::extended;
    vec![
        (
            "0A,0B",
            vec![
                (l(PhiPlus, Symmetric), 1),
                (l(PhiMinus, Symmetric), 1),
                (l(PhiPlus, Antisymmetric), 1),
                (l(PhiMinus, Antisymmetric), 1),
            ],
        ),
        (
            "0A,1B",
            vec![
                (l(PsiPlus, Symmetric), 1),
                (l(PsiMinus, Symmetric), 1),
                (l(PsiPlus, Antisymmetric), 1),
                (l(PsiMinus, Antisymmetric), 1),
            ],
        ),
        (
            "1A,0B",
            vec![
                (l(PsiPlus, Symmetric), 1),
                (l(PsiMinus, Symmetric), -1),
                (l(PsiPlus, Antisymmetric), 1),
                (l(PsiMinus, Antisymmetric), -1),
            ],
        ),
        (
            "1A,1B",
            vec![
                (l(PhiPlus, Symmetric), 1),
                (l(PhiMinus, Symmetric), -1),
                (l(PhiPlus, Antisymmetric), 1),
                (l(PhiMinus, Antisymmetric), -1),
            ],
        ),
    ]
}

pub fn bases_report<S: Scalar>(report: &mut Report) -> Result<()> {
    let labels = BellLabel::all_extended();
    let vectors: Vec<State<S>> = labels
        .iter()
        .map(|l| bell_vector(*l, Location::A, Location::B))
        .collect::<Result<_>>()?;
    let mut identity = true;
    let mut rows = Vec::new();
    for u in &vectors {
        let mut row = Vec::new();
        for v in &vectors {
            row.push(u.inner(v)?);
        }
        rows.push(row);
    }
    for (i, row) in rows.iter().enumerate() {
        for (j, g) in row.iter().enumerate() {
            let want = if i == j { S::one() } else { S::zero() };
            identity &= g.approx_eq(&want);
        }
    }
    let gram = rows
        .iter()
        .map(|r| r.iter().map(Scalar::render).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("; ");
    report.push_check(
        "extended Bell vectors: 8×8 Gram matrix is the identity",
        "symmetric and antisymmetric extended Bell vectors",
        "identity",
        gram,
        identity,
    );
    for (label, v) in labels.iter().zip(&vectors) {
        let swapped = v.swap(0, 1)?;
        let parity = label.exchange.map(Exchange::parity).unwrap_or(1);
        let want = v.scale_field(&QRoot::from_int(parity));
        report.push_check(
            &format!("{label} is an exchange eigenstate with eigenvalue {parity:+}"),
            "overall exchange symmetry of extended Bell vectors",
            parity,
            if swapped.approx_eq(&want) { parity } else { 0 },
            swapped.approx_eq(&want),
        );
        report.push_state(&label.to_string(), v);
    }
    for (k, expansion) in product_ket_expansions() {
        let x: State<S> = State::basis(ket(k));
        let d = crate::bell::decompose_pair(&x, 0, 1)?;
        let mut ok = d.residuals.len() == expansion.len();
        for (label, sign) in &expansion {
            let want = S::from_field(&QRoot::frac(*sign, 2));
            ok &= d
                .residual(*label)
                .amplitude(&BasisKet::default())
                .approx_eq(&want);
        }
        let actual = signed_sum(
            d.residuals
                .iter()
                .map(|(l, r)| (r.amplitude(&BasisKet::default()).render(), l.to_string())),
        );
        let mut sorted = expansion.clone();
        sorted.sort();
        let expected = signed_sum(
            sorted
                .iter()
                .map(|(l, s)| (QRoot::frac(*s, 2).to_string(), l.to_string())),
        );
        report.push_check(
            &format!("|{k}⟩ in the extended Bell basis"),
            "product kets in terms of definite-symmetry Bell vectors",
            expected,
            actual,
            ok && d.recombine()?.approx_eq(&x),
        );
    }
    let naive = build_naive(&Input::<Amp>::symbolic());
    let parts = pairwise_expansion(&naive, Location::C)?;
    let mut rebuilt = State::zero(3);
    for d in &parts {
        rebuilt = rebuilt.plus(&d.recombine()?);
    }
    let exact = rebuilt == naive;
    report.push_check(
        "decompose/recombine round trip on the initial three-photon state",
        "completeness of the extended Bell basis",
        "exact",
        if exact { "exact" } else { "mismatch" },
        exact,
    );
    Ok(())
}

/// Runs a scenario on the exact backend.
pub fn exact_report(scenario: &str, seed: u64) -> Result<Report> {
    let mut report = Report::new(scenario, "exact", seed);
    let input = Input::<Amp>::symbolic();
    let at = unit_input();
    match scenario {
        "bennett" => bennett_report(&mut report, &input, &at)?,
        "naive" => naive_report(&mut report, &input, &at, true)?,
        "symmetric" => symmetric_report(&mut report, &input, &at, true)?,
        "verify-bases" => bases_report::<Amp>(&mut report)?,
        other => panic!("unknown scenario {other}"),
    }
    Ok(report)
}

/// Runs a scenario on the numeric backend with the seed's first sweep input.
pub fn numeric_report(scenario: &str, seed: u64) -> Result<Report> {
    let mut report = Report::new(scenario, "numeric", seed);
    let input = sweep_input(seed, 0);
    report.input = Some(input_strings(&input));
    match scenario {
        "bennett" => bennett_report(&mut report, &input, &input)?,
        "naive" => naive_report(&mut report, &input, &input, true)?,
        "symmetric" => symmetric_report(&mut report, &input, &input, true)?,
        "verify-bases" => bases_report::<Complex64>(&mut report)?,
        other => panic!("unknown scenario {other}"),
    }
    Ok(report)
}

/// Largest `|exact(α,β) − numeric|` per compared quantity.
#[derive(Clone, Debug, Default)]
pub struct Discrepancy {
    pub entries: Vec<(String, f64)>,
}

impl Discrepancy {
    fn record(&mut self, name: &str, d: f64) {
        match self.entries.iter_mut().find(|(n, _)| n == name) {
            Some((_, m)) => *m = m.max(d),
            None => self.entries.push((name.to_string(), d)),
        }
    }

    fn scalar(&mut self, name: &str, exact: &Amp, numeric: Complex64, at: &Input<Complex64>) {
        let d = (exact.to_complex(at.alpha, at.beta) - numeric).norm();
        self.record(name, d);
    }

    fn state(
        &mut self,
        name: &str,
        exact: &State<Amp>,
        numeric: &State<Complex64>,
        at: &Input<Complex64>,
    ) {
        let e = exact.to_numeric(at.alpha, at.beta);
        let kets: std::collections::BTreeSet<&BasisKet> = e.kets().chain(numeric.kets()).collect();
        let d = kets
            .into_iter()
            .map(|k| (e.amplitude(k) - numeric.amplitude(k)).norm())
            .fold(0.0, f64::max);
        self.record(name, d);
    }

    fn rho(
        &mut self,
        name: &str,
        exact: &DensityMatrix2<Amp>,
        numeric: &DensityMatrix2<Complex64>,
        at: &Input<Complex64>,
    ) {
        let e = exact.to_numeric(at.alpha, at.beta);
        let d = (0..2)
            .flat_map(|p| (0..2).map(move |q| (p, q)))
            .map(|(p, q)| (e.entries[p][q] - numeric.entries[p][q]).norm())
            .fold(0.0, f64::max);
        self.record(name, d);
    }

    pub fn max(&self) -> f64 {
        self.entries.iter().map(|(_, d)| *d).fold(0.0, f64::max)
    }
}

/// Exact pipeline results, computed once and evaluated per sample.
struct ExactResults {
    bennett: Vec<crate::protocol::Outcome<Amp>>,
    naive: ScenarioRun<Amp>,
    symmetric: ScenarioRun<Amp>,
    manifold: State<Amp>,
    overlap: Amp,
}

impl ExactResults {
    fn compute() -> Result<Self> {
        let input = Input::<Amp>::symbolic();
        let naive = run_naive(&input)?;
        let symmetric = run_symmetric(&input)?;
        let manifold = teleported_manifold(&input)?;
        let overlap = naive.initial.inner(&symmetric.initial)?;
        Ok(ExactResults {
            bennett: bennett_run(&input)?,
            naive,
            symmetric,
            manifold,
            overlap,
        })
    }
}

/// Compares every exact scalar and state with the numeric pipeline at one
/// input. Returns the projector ranks `(exact, numeric)` that disagree.
fn compare_sample(
    exact: &ExactResults,
    at: &Input<Complex64>,
    acc: &mut Discrepancy,
) -> Result<Vec<(String, usize, usize)>> {
    let mut rank_mismatch = Vec::new();
    let bennett = bennett_run(at)?;
    for (e, n) in exact.bennett.iter().zip(&bennett) {
        acc.scalar("bennett probabilities", &e.probability, n.probability, at);
        acc.state("bennett post-states", &e.post_state, &n.post_state, at);
    }
    let naive = run_naive(at)?;
    let symmetric = run_symmetric(at)?;
    for (tag, e, n) in [
        ("naive", &exact.naive, &naive),
        ("symmetric", &exact.symmetric, &symmetric),
    ] {
        acc.state(&format!("{tag} initial state"), &e.initial, &n.initial, at);
        acc.scalar(
            &format!("{tag} coincidence probability"),
            &e.coincidence.probability,
            n.coincidence.probability,
            at,
        );
        acc.scalar(
            &format!("{tag} rejected weight"),
            &e.coincidence.rejected_weight,
            n.coincidence.rejected_weight,
            at,
        );
        acc.state(
            &format!("{tag} collapsed state"),
            &e.coincidence.collapsed,
            &n.coincidence.collapsed,
            at,
        );
        acc.rho(
            &format!("{tag} conditional state"),
            &e.conditional,
            &n.conditional,
            at,
        );
        acc.scalar(&format!("{tag} fidelity"), &e.fidelity, n.fidelity, at);
        for (de, dn) in e.expansion.iter().zip(&n.expansion) {
            for label in BellLabel::all_extended() {
                acc.state(
                    &format!("{tag} bell expansion"),
                    &de.residual(label),
                    &dn.residual(label),
                    at,
                );
            }
        }
        if e.coincidence.rank != n.coincidence.rank {
            rank_mismatch.push((tag.to_string(), e.coincidence.rank, n.coincidence.rank));
        }
    }
    let manifold = teleported_manifold(at)?;
    acc.state("teleported manifold", &exact.manifold, &manifold, at);
    let overlap = naive.initial.inner(&symmetric.initial)?;
    acc.scalar("inner products", &exact.overlap, overlap, at);
    let m = manifold.inner(&symmetric.coincidence.collapsed)?;
    let me = exact
        .manifold
        .inner(&exact.symmetric.coincidence.collapsed)?;
    acc.scalar("inner products", &me, m, at);
    Ok(rank_mismatch)
}

/// Exact-vs-numeric agreement over `samples` Haar-random inputs.
pub fn sweep_report(seed: u64, samples: usize) -> Result<Report> {
    let mut report = Report::new("sweep", "numeric", seed);
    report.samples = Some(samples);
    let exact = ExactResults::compute()?;
    let mut acc = Discrepancy::default();
    let mut mismatches = Vec::new();
    for i in 0..samples {
        let at = sweep_input(seed, i as u64);
        mismatches.extend(compare_sample(&exact, &at, &mut acc)?);
    }
    let max = acc.max();
    for (name, d) in &acc.entries {
        report.discrepancies.push(ScalarEntry {
            name: name.clone(),
            exact: format!("{d:e}"),
            value: *d,
        });
    }
    report.max_discrepancy = Some(max);
    report.push_check(
        "max |exact − numeric| over all reported scalars and states",
        "exact and numeric backends agree",
        format!("< {SWEEP_TOL:e}"),
        format!("{max:e}"),
        max < SWEEP_TOL,
    );
    report.push_check(
        "coincidence projector ranks agree between backends",
        "exact and numeric backends agree",
        "0 mismatches",
        format!("{} mismatches", mismatches.len()),
        mismatches.is_empty(),
    );
    Ok(report)
}
