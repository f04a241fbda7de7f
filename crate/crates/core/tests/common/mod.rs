//! Test-side oracles and property suites, shared by the integration targets.
//!
//! The oracles work on plain `f64` vectors keyed by `(pol, location)` tuples
//! and never call the library's state algebra.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use teleport_core::amplitude::{Amp, Monomial, QRoot};
use teleport_core::bell::{bell_extended, subspace_projector, BellKind, BellLabel, Exchange};
use teleport_core::ket::{permutations, BasisKet, Location, ParticleLabel, State};
use teleport_core::protocol::{conditional_at, Input};
use teleport_core::scalar::Scalar;

pub type Key = Vec<(u8, char)>;
pub type Vector = BTreeMap<Key, Complex64>;

pub const TOL: f64 = 1e-12;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn vector_of(x: &State<Complex64>) -> Vector {
    x.terms()
        .map(|(k, a)| {
            let key =
                k.0.iter()
                    .map(|l| (l.pol, l.loc.map_or('-', |l| l.symbol())))
                    .collect();
            (key, *a)
        })
        .collect()
}

pub fn add(v: &mut Vector, key: Key, a: Complex64) {
    *v.entry(key).or_insert(c(0.0)) += a;
}

pub fn norm_sq(v: &Vector) -> f64 {
    v.values().map(|a| a.norm_sqr()).sum()
}

pub fn max_diff(u: &Vector, v: &Vector) -> f64 {
    u.keys()
        .chain(v.keys())
        .map(|k| {
            let a = u.get(k).copied().unwrap_or_default();
            let b = v.get(k).copied().unwrap_or_default();
            (a - b).norm()
        })
        .fold(0.0, f64::max)
}

/// Three-photon state with the input photon at A and the singlet pair
/// `½(|01⟩−|10⟩)(|BC⟩−|CB⟩)`, written out term by term.
pub fn naive_oracle(alpha: Complex64, beta: Complex64) -> Vector {
    let mut v = Vector::new();
    for (p, amp) in [(0u8, alpha), (1u8, beta)] {
        for (q1, q2, s1) in [(0u8, 1u8, 1.0), (1, 0, -1.0)] {
            for (l1, l2, s2) in [('B', 'C', 1.0), ('C', 'B', -1.0)] {
                add(
                    &mut v,
                    vec![(p, 'A'), (q1, l1), (q2, l2)],
                    amp * (0.5 * s1 * s2),
                );
            }
        }
    }
    v
}

/// `(1/N!) Σ_π π x` by explicit enumeration of slot permutations.
pub fn symmetrize_oracle(v: &Vector) -> Vector {
    let n = v.keys().next().map_or(0, Vec::len);
    let perms = all_perms(n);
    let mut out = Vector::new();
    for (k, a) in v {
        for p in &perms {
            let key: Key = p.iter().map(|&i| k[i]).collect();
            add(&mut out, key, a / perms.len() as f64);
        }
    }
    out.retain(|_, a| a.norm() > 1e-15);
    out
}

fn all_perms(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in all_perms(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

pub fn normalized(v: &Vector) -> Vector {
    let n = norm_sq(v).sqrt();
    v.iter().map(|(k, a)| (k.clone(), a / n)).collect()
}

/// Coincidence projection as the spatially antisymmetric part of the pair at
/// A, B: `(x − Lx)/2`, where `L` swaps the locations A and B while every
/// particle keeps its polarization and slot.
pub fn coincidence_oracle(v: &Vector) -> Vector {
    let mut out = Vector::new();
    for (k, a) in v {
        let swapped: Key = k
            .iter()
            .map(|&(p, l)| match l {
                'A' => (p, 'B'),
                'B' => (p, 'A'),
                other => (p, other),
            })
            .collect();
        add(&mut out, k.clone(), a * 0.5);
        add(&mut out, swapped, -a * 0.5);
    }
    out.retain(|_, a| a.norm() > 1e-15);
    out
}

/// Reduced polarization density matrix of the particle at C, normalized.
pub fn conditional_oracle(v: &Vector) -> [[Complex64; 2]; 2] {
    let mut env: BTreeMap<Key, [Complex64; 2]> = BTreeMap::new();
    for (k, a) in v {
        let slot = k
            .iter()
            .position(|&(_, l)| l == 'C')
            .expect("one particle at C");
        let mut rest = k.clone();
        let pol = usize::from(rest[slot].0);
        rest[slot].0 = 9;
        env.entry(rest).or_default()[pol] += a;
    }
    let mut rho = [[c(0.0); 2]; 2];
    for w in env.values() {
        for p in 0..2 {
            for q in 0..2 {
                rho[p][q] += w[p] * w[q].conj();
            }
        }
    }
    let tr = rho[0][0] + rho[1][1];
    rho.map(|row| row.map(|e| e / tr))
}

pub fn fidelity_oracle(rho: &[[Complex64; 2]; 2], alpha: Complex64, beta: Complex64) -> f64 {
    let v = [alpha, beta];
    let mut acc = c(0.0);
    for p in 0..2 {
        for q in 0..2 {
            acc += v[p].conj() * rho[p][q] * v[q];
        }
    }
    acc.re
}

/// Numerical rank of a set of vectors via Gaussian elimination with partial
/// pivoting on their coordinate matrix.
pub fn rank_oracle(vectors: &[Vector]) -> usize {
    let keys: Vec<&Key> = {
        let mut ks: Vec<&Key> = vectors.iter().flat_map(|v| v.keys()).collect();
        ks.sort();
        ks.dedup();
        ks
    };
    let mut m: Vec<Vec<Complex64>> = vectors
        .iter()
        .map(|v| {
            keys.iter()
                .map(|k| v.get(*k).copied().unwrap_or_default())
                .collect()
        })
        .collect();
    let (rows, cols) = (m.len(), keys.len());
    let mut rank = 0;
    for col in 0..cols {
        let pivot = (rank..rows).max_by(|&a, &b| m[a][col].norm().total_cmp(&m[b][col].norm()));
        let Some(p) = pivot else { break };
        if m[p][col].norm() < 1e-9 {
            continue;
        }
        m.swap(rank, p);
        for r in 0..rows {
            if r != rank {
                let f = m[r][col] / m[rank][col];
                for k in col..cols {
                    let sub = f * m[rank][k];
                    m[r][k] -= sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Pair vectors spanning a coincidence subspace on three slots: each label
/// on each slot pair, with the third slot at C in either polarization.
pub fn coincidence_vectors<S: Scalar>(labels: &[BellLabel]) -> Vec<State<S>> {
    let mut out = Vec::new();
    for slots in [[0, 1], [0, 2], [1, 2]] {
        for label in labels {
            let pair: State<S> = bell_extended(
                label.kind,
                label.exchange.unwrap(),
                Location::A,
                Location::B,
            )
            .unwrap();
            for pol in 0..2 {
                let rest = State::basis(BasisKet(vec![ParticleLabel::new(pol, Location::C)]));
                out.push(State::embed(&pair, &slots, &rest).unwrap());
            }
        }
    }
    out
}

pub fn antisymmetric_spatial_labels() -> Vec<BellLabel> {
    BellLabel::all_extended()
        .into_iter()
        .filter(BellLabel::is_spatially_antisymmetric)
        .collect()
}

pub fn psi_minus_s() -> Vec<BellLabel> {
    vec![BellLabel::extended(BellKind::PsiMinus, Exchange::Symmetric)]
}

// ---------------------------------------------------------------------------
// Strategies

pub fn rational() -> impl Strategy<Value = BigRational> {
    (-30i64..=30, 1i64..=12).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

pub fn qroot() -> impl Strategy<Value = QRoot> {
    [rational(), rational(), rational(), rational()].prop_map(|[a, b, c, d]| QRoot::new(a, b, c, d))
}

/// Sparse QRoot with at most two nonzero coordinates, keeping products cheap.
pub fn small_qroot() -> impl Strategy<Value = QRoot> {
    (
        0usize..4,
        -6i64..=6,
        1i64..=4,
        0usize..4,
        -6i64..=6,
        1i64..=4,
    )
        .prop_map(|(i, n1, d1, j, n2, d2)| {
            let mut parts = [(0, 1); 4];
            parts[i] = (n1, d1);
            parts[j] = (parts[j].0 * d2 + n2 * parts[j].1, parts[j].1 * d2);
            QRoot::from_fracs(parts)
        })
}

pub fn monomial() -> impl Strategy<Value = Monomial> {
    [0u8..=2, 0u8..=2, 0u8..=2, 0u8..=2].prop_map(Monomial)
}

pub fn amp() -> impl Strategy<Value = Amp> {
    prop::collection::vec((monomial(), small_qroot()), 0..4).prop_map(|terms| {
        terms
            .into_iter()
            .fold(Amp::zero(), |acc, (m, c)| acc + Amp::term(m, c))
    })
}

pub fn label() -> impl Strategy<Value = ParticleLabel> {
    (0u8..2, prop::sample::select(vec!['A', 'B', 'C']))
        .prop_map(|(p, l)| ParticleLabel::new(p, Location::new(l).unwrap()))
}

pub fn basis_ket(n: usize) -> impl Strategy<Value = BasisKet> {
    prop::collection::vec(label(), n).prop_map(BasisKet)
}

fn nonzero<S: Scalar>(x: State<S>, n: usize) -> State<S> {
    if x.is_zero() {
        State::basis(BasisKet(vec![ParticleLabel::new(0, Location::A); n]))
    } else {
        x
    }
}

/// Three-photon state with symbolic amplitudes.
pub fn exact_state() -> impl Strategy<Value = State<Amp>> {
    prop::collection::vec((basis_ket(3), amp()), 1..6)
        .prop_map(|terms| nonzero(State::from_terms(3, terms).unwrap().reduced(), 3))
}

/// Three-photon state with constant field amplitudes.
pub fn constant_state() -> impl Strategy<Value = State<Amp>> {
    prop::collection::vec((basis_ket(3), small_qroot()), 1..6).prop_map(|terms| {
        let t = terms.into_iter().map(|(k, q)| (k, Amp::constant(q)));
        nonzero(State::from_terms(3, t).unwrap(), 3)
    })
}

/// Three photons with exactly one each at A, B and C.
pub fn occupancy_state() -> impl Strategy<Value = State<Amp>> {
    let ket = (
        prop::sample::select(permutations(3)),
        [0u8..2, 0u8..2, 0u8..2],
    )
        .prop_map(|(perm, pols)| {
            let locs = [Location::A, Location::B, Location::C];
            BasisKet(
                (0..3)
                    .map(|s| ParticleLabel::new(pols[s], locs[perm[s]]))
                    .collect(),
            )
        });
    prop::collection::vec((ket, small_qroot()), 1..6).prop_map(|terms| {
        let t = terms.into_iter().map(|(k, q)| (k, Amp::constant(q)));
        let x = State::from_terms(3, t).unwrap();
        if x.is_zero() {
            State::basis(teleport_core::ket::ket("0A,0B,0C"))
        } else {
            x
        }
    })
}

pub fn numeric_input() -> impl Strategy<Value = Input<Complex64>> {
    any::<u64>().prop_map(|s| teleport_core::sampling::sweep_input(s, 0))
}

// ---------------------------------------------------------------------------
// Property suites. Each runs `cases` random cases and reports the first
// failure, if any.

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

fn ensure(cond: bool, what: impl Into<String>) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(what.into()))
    }
}

fn report<T: std::fmt::Debug>(
    r: Result<(), proptest::test_runner::TestError<T>>,
) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

pub fn field_axioms(cases: u32) -> Result<(), String> {
    report(
        runner(cases).run(&(qroot(), qroot(), qroot()), |(a, b, c)| {
            ensure(&a + &b == &b + &a, "add commutes")?;
            ensure(&a * &b == &b * &a, "mul commutes")?;
            ensure(&(&a + &b) + &c == &a + &(&b + &c), "add associates")?;
            ensure(&(&a * &b) * &c == &a * &(&b * &c), "mul associates")?;
            ensure(&a * &(&b + &c) == &(&a * &b) + &(&a * &c), "distributes")?;
            ensure(
                &a + &QRoot::zero() == a && &a * &QRoot::one() == a,
                "identities",
            )?;
            ensure(
                (&a + &(-&a)).is_zero() && &(&a + &b) - &b == a,
                "additive inverse",
            )?;
            if !a.is_zero() {
                let inv = a.inv().map_err(|e| TestCaseError::fail(e.to_string()))?;
                ensure((&a * &inv).is_one(), "multiplicative inverse")?;
                let q = (&b / &a).map_err(|e| TestCaseError::fail(e.to_string()))?;
                ensure(&q * &a == b, "division")?;
            }
            let f = (&a * &b).to_f64() - a.to_f64() * b.to_f64();
            ensure(
                f.abs() <= 1e-9 * (1.0 + (a.to_f64() * b.to_f64()).abs()),
                "embedding is a homomorphism",
            )
        }),
    )
}

pub fn reduce_laws(cases: u32) -> Result<(), String> {
    report(
        runner(cases).run(&(amp(), amp(), numeric_input()), |(a, b, at)| {
            let r = a.reduce();
            ensure(r.is_reduced() && r.reduce() == r, "idempotent")?;
            let before = a.eval_unchecked(at.alpha, at.beta);
            let after = r
                .eval(at.alpha, at.beta)
                .map_err(|e| TestCaseError::fail(e.to_string()))?;
            ensure(
                (before - after).norm() <= 1e-9 * (1.0 + before.norm()),
                "respects evaluation",
            )?;
            ensure(
                a.conj().reduce() == r.conj().reduce(),
                "commutes with conjugation",
            )?;
            ensure(
                (&a * &b).reduce() == (&r * &b.reduce()).reduce(),
                "compatible with products",
            )
        }),
    )
}

pub fn symmetrizer_laws(cases: u32) -> Result<(), String> {
    report(runner(cases).run(&exact_state(), |x| {
        let p = x.symmetric_projection();
        ensure(p.symmetric_projection() == p, "idempotent")?;
        for perm in permutations(3) {
            let moved = x.permute(&perm).unwrap();
            ensure(
                moved.symmetric_projection() == p,
                "invariant under input permutation",
            )?;
            ensure(
                p.permute(&perm).unwrap() == p,
                "output permutation invariant",
            )?;
        }
        ensure(p.is_totally_symmetric(), "totally symmetric")
    }))
}

pub fn projector_laws(cases: u32) -> Result<(), String> {
    let naive: Vec<State<Amp>> = coincidence_vectors(&antisymmetric_spatial_labels());
    let naive = subspace_projector(&naive).map_err(|e| e.to_string())?;
    report(runner(cases).run(
        &(
            constant_state(),
            constant_state(),
            prop::collection::vec(constant_state(), 1..4),
            occupancy_state(),
        ),
        |(x, y, span, z)| {
            let p = subspace_projector(&span).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let px = p.apply(&x).unwrap();
            ensure(p.apply(&px).unwrap() == px, "idempotent")?;
            let lhs = y.inner(&px).unwrap();
            let rhs = p.apply(&y).unwrap().inner(&x).unwrap();
            ensure(lhs == rhs, "self-adjoint")?;
            let q = p.apply_complement(&x).unwrap();
            ensure(px.plus(&q).reduced() == x.reduced(), "complement completes")?;
            for v in &span {
                ensure(p.apply(v).unwrap() == v.reduced(), "fixes its span")?;
            }
            let pz = naive.apply(&z).unwrap();
            ensure(
                naive.apply(&pz).unwrap() == pz,
                "coincidence projector idempotent",
            )?;
            let lhs = z
                .inner(&naive.apply(&z.swap(0, 2).unwrap()).unwrap())
                .unwrap();
            let rhs = naive
                .apply(&z)
                .unwrap()
                .inner(&z.swap(0, 2).unwrap())
                .unwrap();
            ensure(lhs == rhs, "coincidence projector self-adjoint")
        },
    ))
}

pub fn inner_laws(cases: u32) -> Result<(), String> {
    report(
        runner(cases).run(&(exact_state(), exact_state()), |(x, y)| {
            let xy = x.inner(&y).unwrap();
            ensure(
                xy == y.inner(&x).unwrap().conj().reduce(),
                "conjugate symmetric",
            )?;
            for perm in permutations(3) {
                let moved = x
                    .permute(&perm)
                    .unwrap()
                    .inner(&y.permute(&perm).unwrap())
                    .unwrap();
                ensure(moved == xy, "permutations are unitary")?;
            }
            Ok(())
        }),
    )
}

pub fn conditional_order_independence(cases: u32) -> Result<(), String> {
    report(runner(cases).run(&occupancy_state(), |x| {
        let rho = conditional_at(&x, Location::C).unwrap();
        for perm in permutations(3) {
            let moved = conditional_at(&x.permute(&perm).unwrap(), Location::C).unwrap();
            ensure(moved == rho, "basis-order independent")?;
        }
        Ok(())
    }))
}
