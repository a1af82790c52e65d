//! The built-in scenario corpus: Bell states, Werner states, product
//! states, two-copy states, dice and random pure states.

use num_complex::Complex64;

use crate::config::Tolerances;
use crate::error::Result;
use crate::linalg::ComplexMatrix;
use crate::relations::baselines::{pure_state_vector, schmidt_decomposition};
use crate::scenario::{
    BasisSpec, ContextPairSpec, Dims, MatchingSpec, ModeSpec, ScenarioSpec, StateSpec, SCHEMA_VERSION,
};

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    pub name: String,
    pub family: &'static str,
    pub spec: ScenarioSpec,
}

fn named(names: &[&str]) -> Vec<BasisSpec> {
    names.iter().map(|n| BasisSpec::Named((*n).to_string())).collect()
}

fn pair(a: &str, b: &str) -> ContextPairSpec {
    ContextPairSpec {
        a: a.into(),
        b: b.into(),
        matching: MatchingSpec::default(),
    }
}

/// Two-qubit scenario over Z/X graphs with pairs (z, z) and (x, x).
fn qubits(state: StateSpec) -> ScenarioSpec {
    ScenarioSpec {
        schema_version: SCHEMA_VERSION.into(),
        dims: Dims::Bipartite([2, 2]),
        state: Some(state),
        bases: vec![],
        graph: None,
        bases_a: named(&["z", "x"]),
        bases_b: named(&["z", "x"]),
        context_pairs: vec![pair("z", "z"), pair("x", "x")],
        mode: ModeSpec::Designated,
        tolerances: None,
        sampling: None,
    }
}

fn dice(state: StateSpec) -> ScenarioSpec {
    ScenarioSpec {
        dims: Dims::Bipartite([6, 6]),
        bases_a: named(&["face"]),
        bases_b: named(&["face"]),
        context_pairs: vec![pair("face", "face")],
        ..qubits(state)
    }
}

fn product(a: StateSpec, b: StateSpec) -> StateSpec {
    StateSpec::Product {
        a: Box::new(a),
        b: Box::new(b),
    }
}

/// The 22-entry corpus.
pub fn corpus() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    let mut push = |name: String, family: &'static str, spec: ScenarioSpec| {
        out.push(CorpusEntry { name, family, spec })
    };
    for (name, s) in [
        ("bell_phi_plus", StateSpec::BellPhiPlus),
        ("bell_phi_minus", StateSpec::BellPhiMinus),
        ("bell_psi_plus", StateSpec::BellPsiPlus),
        ("bell_psi_minus", StateSpec::BellPsiMinus),
    ] {
        push(name.into(), "bell", qubits(s));
    }
    for v in [0.2, 0.5, 0.9] {
        push(format!("werner_{v}"), "werner", qubits(StateSpec::Werner { visibility: v }));
    }
    push("product_zero_zero".into(), "product", qubits(product(StateSpec::Zero, StateSpec::Zero)));
    push("product_zero_plus".into(), "product", qubits(product(StateSpec::Zero, StateSpec::Plus)));
    push("product_plus_i_minus".into(), "product", qubits(product(StateSpec::PlusI, StateSpec::Minus)));
    push(
        "product_mixed_one".into(),
        "product",
        qubits(product(StateSpec::MaximallyMixed { dim: 2 }, StateSpec::One)),
    );
    push(
        "product_random_mixed".into(),
        "product",
        qubits(product(
            StateSpec::RandomMixed { dim: 2, seed: 1 },
            StateSpec::RandomMixed { dim: 2, seed: 2 },
        )),
    );
    for (name, of) in [
        ("copies_random_mixed_11", StateSpec::RandomMixed { dim: 2, seed: 11 }),
        ("copies_random_mixed_12", StateSpec::RandomMixed { dim: 2, seed: 12 }),
        ("copies_plus", StateSpec::Plus),
    ] {
        push(name.into(), "copies", qubits(StateSpec::Copies { of: Box::new(of) }));
    }
    push("fair_dice".into(), "dice", dice(StateSpec::FairDice { faces: 6 }));
    push("glued_dice".into(), "dice", dice(StateSpec::GluedDice { faces: 6 }));
    for seed in 101..=105 {
        push(
            format!("random_pure_{seed}"),
            "random_pure",
            qubits(StateSpec::RandomPure { dim: 4, seed }),
        );
    }
    out
}

fn explicit(name: &str, m: &ComplexMatrix) -> BasisSpec {
    BasisSpec::Explicit {
        name: name.into(),
        vectors: (0..m.cols())
            .map(|k| m.column(k).iter().map(|z| [z.re, z.im]).collect())
            .collect(),
    }
}

fn fourier_matrix(d: usize) -> ComplexMatrix {
    let mut f = ComplexMatrix::zeros(d, d);
    let w = std::f64::consts::TAU / d as f64;
    for r in 0..d {
        for c in 0..d {
            f[(r, c)] = Complex64::from_polar(1.0 / (d as f64).sqrt(), w * (r * c) as f64);
        }
    }
    f
}

/// For a pure joint state, the same scenario with local graphs generated by
/// the Schmidt bases and their Fourier rotations, and the single pair
/// (schmidt, schmidt) matched term by term. `None` for mixed states.
pub fn schmidt_variant(spec: &ScenarioSpec, tol: &Tolerances) -> Result<Option<ScenarioSpec>> {
    let Dims::Bipartite([da, db]) = spec.dims else {
        return Ok(None);
    };
    let rho = spec.build_state(tol)?;
    let Some(psi) = pure_state_vector(&rho, tol)? else {
        return Ok(None);
    };
    let (_, u, v) = schmidt_decomposition(&psi, (da, db), tol)?;
    let ua = &u * &fourier_matrix(da);
    let vb = &v * &fourier_matrix(db);
    Ok(Some(ScenarioSpec {
        bases_a: vec![explicit("schmidt", &u), explicit("schmidt_f", &ua)],
        bases_b: vec![explicit("schmidt", &v), explicit("schmidt_f", &vb)],
        context_pairs: vec![pair("schmidt", "schmidt")],
        mode: ModeSpec::Designated,
        ..spec.clone()
    }))
}
