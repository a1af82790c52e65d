//! Scenario files: a JSON description of a state, the local bases that
//! generate each power graph, and the designated context pairs.
//!
//! ```json
//! {
//!   "schema_version": "1.0",
//!   "dims": [2, 2],
//!   "state": { "type": "bell_phi_plus" },
//!   "bases_a": ["z", "x"],
//!   "bases_b": ["z", "x"],
//!   "context_pairs": [
//!     { "a": "z", "b": "z" },
//!     { "a": "x", "b": "x", "matching": "identity" }
//!   ],
//!   "mode": "designated"
//! }
//! ```
//!
//! Complex numbers are always `[re, im]` arrays.

pub mod presets;

use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{tensor_density, ComplexMatrix, DensityMatrix};
use crate::powers::bases::{self, Basis};
use crate::powers::{generate_graph_from_bases, PowerGraph};
use crate::relations::{ContextPair, JointScenario, RelationMode};

pub const SCHEMA_VERSION: &str = "1.0";

pub type ComplexPair = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Dims {
    Single(usize),
    Bipartite([usize; 2]),
}

impl Dims {
    pub fn total(self) -> usize {
        match self {
            Dims::Single(d) => d,
            Dims::Bipartite([a, b]) => a * b,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    BellPhiPlus,
    BellPhiMinus,
    BellPsiPlus,
    BellPsiMinus,
    /// v |Ψ−⟩⟨Ψ−| + (1 − v) I/4
    Werner { visibility: f64 },
    /// Two independent fair dice (or one, for a single-system spec).
    FairDice {
        #[serde(default = "six")]
        faces: usize,
    },
    GluedDice {
        #[serde(default = "six")]
        faces: usize,
    },
    Product { a: Box<StateSpec>, b: Box<StateSpec> },
    /// ρ ⊗ ρ
    Copies { of: Box<StateSpec> },
    Zero,
    One,
    Plus,
    Minus,
    PlusI,
    MinusI,
    MaximallyMixed { dim: usize },
    Ket { amplitudes: Vec<ComplexPair> },
    Matrix { entries: Vec<Vec<ComplexPair>> },
    RandomPure { dim: usize, seed: u64 },
    RandomMixed { dim: usize, seed: u64 },
}

fn six() -> usize {
    6
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BasisSpec {
    /// `z`, `x`, `y` (qubits), `computational` / `face`, `fourier`, or
    /// `mubK` (K-th mutually unbiased basis, prime dimensions).
    Named(String),
    Explicit { name: String, vectors: Vec<Vec<ComplexPair>> },
}

impl BasisSpec {
    pub fn name(&self) -> &str {
        match self {
            BasisSpec::Named(n) => n,
            BasisSpec::Explicit { name, .. } => name,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchingName {
    Identity,
    Reversed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatchingSpec {
    Named(MatchingName),
    Permutation(Vec<usize>),
}

impl Default for MatchingSpec {
    fn default() -> Self {
        MatchingSpec::Named(MatchingName::Identity)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextPairSpec {
    pub a: String,
    pub b: String,
    #[serde(default)]
    pub matching: MatchingSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeSpec {
    #[default]
    Designated,
    AllMatched,
}

impl From<ModeSpec> for RelationMode {
    fn from(m: ModeSpec) -> Self {
        match m {
            ModeSpec::Designated => RelationMode::DesignatedPairs,
            ModeSpec::AllMatched => RelationMode::AllMatchedContexts,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphPreset {
    Cabello18,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingSpec {
    pub shots: u64,
    pub seed: u64,
    #[serde(default = "default_stat_threshold")]
    pub stat_threshold: f64,
}

pub fn default_stat_threshold() -> f64 {
    0.01
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub schema_version: String,
    pub dims: Dims,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<StateSpec>,
    /// Bases of a single-system graph (`graph` / `ks` commands).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bases: Vec<BasisSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphPreset>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bases_a: Vec<BasisSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bases_b: Vec<BasisSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub context_pairs: Vec<ContextPairSpec>,
    #[serde(default)]
    pub mode: ModeSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampling: Option<SamplingSpec>,
}

/// Reads and validates a scenario file.
pub fn parse_scenario(path: impl AsRef<Path>) -> Result<ScenarioSpec> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes).map_err(|_| Error::Schema {
        field: "<file>".into(),
        reason: format!("{} is not valid UTF-8", path.display()),
    })?;
    parse_scenario_str(&text)
}

/// Parses and validates scenario JSON.
pub fn parse_scenario_str(text: &str) -> Result<ScenarioSpec> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let spec: ScenarioSpec = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        Error::Schema {
            field: if path.is_empty() || path == "." { "<root>".into() } else { path },
            reason: format!("{inner}"),
        }
    })?;
    spec.validate()?;
    Ok(spec)
}

fn complex(p: &ComplexPair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

fn schema(field: &str, reason: impl Into<String>) -> Error {
    Error::Schema {
        field: field.into(),
        reason: reason.into(),
    }
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(schema(
                "schema_version",
                format!("unsupported version {:?}, expected {SCHEMA_VERSION:?}", self.schema_version),
            ));
        }
        let tol = self.tolerances();
        match self.dims {
            Dims::Single(0) | Dims::Bipartite([0, _]) | Dims::Bipartite([_, 0]) => {
                return Err(schema("dims", "dimensions must be positive"));
            }
            _ => {}
        }
        if self.dims.total() > tol.max_dim {
            return Err(schema("dims", format!("total dimension exceeds max_dim {}", tol.max_dim)));
        }
        if let Some(s) = &self.sampling {
            if s.shots == 0 {
                return Err(schema("sampling.shots", "must be at least 1"));
            }
            if !(0.0..1.0).contains(&s.stat_threshold) {
                return Err(schema("sampling.stat_threshold", "must lie in [0, 1)"));
            }
        }
        if self.state.is_some() {
            self.build_state(&tol)?;
        }
        if let Dims::Bipartite(_) = self.dims {
            if self.state.is_some() {
                self.build_joint(&tol)?;
            }
        } else if self.graph.is_some() || !self.bases.is_empty() {
            self.build_graph(&tol)?;
        }
        Ok(())
    }

    /// Tolerances from the file (or defaults) with environment overrides.
    pub fn tolerances(&self) -> Tolerances {
        self.tolerances.unwrap_or_default().with_env_overrides()
    }

    pub fn build_state(&self, tol: &Tolerances) -> Result<DensityMatrix> {
        let spec = self.state.as_ref().ok_or_else(|| schema("state", "missing"))?;
        let rho = build_state_spec(spec, Some(self.dims), tol).map_err(|e| match e {
            Error::Validation(m) => Error::Validation(m),
            Error::Numerical(m) | Error::InvalidState(m) => Error::Validation(m),
            other => other,
        })?;
        if rho.dim() != self.dims.total() {
            return Err(Error::Validation(format!(
                "state has dimension {}, dims require {}",
                rho.dim(),
                self.dims.total()
            )));
        }
        Ok(rho)
    }

    fn local_dims(&self) -> Result<(usize, usize)> {
        match self.dims {
            Dims::Bipartite([a, b]) => Ok((a, b)),
            Dims::Single(_) => Err(schema("dims", "a bipartite scenario needs dims [dA, dB]")),
        }
    }

    /// Single-system graph for the `graph` and `ks` commands.
    pub fn build_graph(&self, tol: &Tolerances) -> Result<PowerGraph> {
        if let Some(GraphPreset::Cabello18) = self.graph {
            if self.dims != Dims::Single(4) {
                return Err(schema("dims", "cabello18 lives in dimension 4"));
            }
            return generate_graph_from_bases(&bases::cabello_bases(), tol);
        }
        let d = match self.dims {
            Dims::Single(d) => d,
            Dims::Bipartite(_) => return Err(schema("dims", "graph specs use a single dimension")),
        };
        if self.bases.is_empty() {
            return Err(schema("bases", "a graph spec needs `graph` or `bases`"));
        }
        let bases = resolve_bases(&self.bases, d, "bases")?;
        generate_graph_from_bases(&bases, tol)
    }

    /// The two local graphs of a bipartite spec.
    pub fn build_local_graphs(&self, tol: &Tolerances) -> Result<(PowerGraph, PowerGraph)> {
        let (da, db) = self.local_dims()?;
        if self.bases_a.is_empty() || self.bases_b.is_empty() {
            return Err(schema("bases_a", "bipartite specs need bases_a and bases_b"));
        }
        let a = generate_graph_from_bases(&resolve_bases(&self.bases_a, da, "bases_a")?, tol)?;
        let b = generate_graph_from_bases(&resolve_bases(&self.bases_b, db, "bases_b")?, tol)?;
        Ok((a, b))
    }

    /// Builds the joint scenario, optionally overriding the file's mode.
    pub fn build_joint_with_mode(&self, tol: &Tolerances, mode: Option<RelationMode>) -> Result<JointScenario> {
        let dims = self.local_dims()?;
        let rho = self.build_state(tol)?;
        let (ga, gb) = self.build_local_graphs(tol)?;
        let mut pairs = Vec::with_capacity(self.context_pairs.len());
        for (k, p) in self.context_pairs.iter().enumerate() {
            let a = ga
                .named_context(&p.a)
                .ok_or_else(|| schema(&format!("context_pairs[{k}].a"), format!("unknown basis {:?}", p.a)))?
                .clone();
            let b = gb
                .named_context(&p.b)
                .ok_or_else(|| schema(&format!("context_pairs[{k}].b"), format!("unknown basis {:?}", p.b)))?
                .clone();
            let matching = match &p.matching {
                MatchingSpec::Named(MatchingName::Identity) => (0..a.len()).map(|i| i.min(b.len() - 1)).collect(),
                MatchingSpec::Named(MatchingName::Reversed) => {
                    (0..a.len()).map(|i| (b.len() - 1).saturating_sub(i)).collect()
                }
                MatchingSpec::Permutation(perm) => perm.clone(),
            };
            pairs.push(ContextPair { a, b, matching });
        }
        let mode = mode.unwrap_or_else(|| self.mode.into());
        JointScenario::new(rho, dims, Arc::new(ga), Arc::new(gb), pairs, mode)
    }

    pub fn build_joint(&self, tol: &Tolerances) -> Result<JointScenario> {
        self.build_joint_with_mode(tol, None)
    }
}

fn resolve_bases(specs: &[BasisSpec], d: usize, field: &str) -> Result<Vec<Basis>> {
    specs
        .iter()
        .enumerate()
        .map(|(k, s)| resolve_basis(s, d).map_err(|reason| schema(&format!("{field}[{k}]"), reason)))
        .collect()
}

fn resolve_basis(spec: &BasisSpec, d: usize) -> std::result::Result<Basis, String> {
    match spec {
        BasisSpec::Explicit { name, vectors } => {
            if vectors.len() != d || vectors.iter().any(|v| v.len() != d) {
                return Err(format!("explicit basis {name:?} must hold {d} vectors of length {d}"));
            }
            Ok(Basis::new(name.clone(), vectors.iter().map(|v| v.iter().map(complex).collect()).collect()))
        }
        BasisSpec::Named(name) => {
            let mut b = match name.as_str() {
                "z" | "computational" | "face" => bases::computational(name, d),
                "x" if d == 2 => bases::qubit_x(),
                "y" if d == 2 => bases::qubit_y(),
                "fourier" => bases::fourier(name, d),
                n if n.starts_with("mub") => {
                    let k: usize = n[3..].parse().map_err(|_| format!("bad MUB index in {n:?}"))?;
                    let all = bases::mutually_unbiased(d)
                        .ok_or_else(|| format!("no built-in MUBs for dimension {d}"))?;
                    all.into_iter().nth(k).ok_or_else(|| format!("dimension {d} has only {} MUBs", d + 1))?
                }
                other => return Err(format!("unknown basis {other:?} for dimension {d}")),
            };
            b.name = name.clone();
            Ok(b)
        }
    }
}

fn local_dim(spec: &StateSpec) -> Option<usize> {
    match spec {
        StateSpec::Zero | StateSpec::One | StateSpec::Plus | StateSpec::Minus | StateSpec::PlusI | StateSpec::MinusI => {
            Some(2)
        }
        StateSpec::BellPhiPlus | StateSpec::BellPhiMinus | StateSpec::BellPsiPlus | StateSpec::BellPsiMinus | StateSpec::Werner { .. } => {
            Some(4)
        }
        StateSpec::GluedDice { faces } => Some(faces * faces),
        StateSpec::MaximallyMixed { dim } | StateSpec::RandomPure { dim, .. } | StateSpec::RandomMixed { dim, .. } => {
            Some(*dim)
        }
        StateSpec::Ket { amplitudes } => Some(amplitudes.len()),
        StateSpec::Matrix { entries } => Some(entries.len()),
        StateSpec::Product { a, b } => Some(local_dim(a)? * local_dim(b)?),
        StateSpec::Copies { of } => local_dim(of).map(|d| d * d),
        StateSpec::FairDice { .. } => None,
    }
}

/// Builds the density matrix of a state spec. `dims` disambiguates the
/// fair-dice preset (one die or a pair).
pub fn build_state_spec(spec: &StateSpec, dims: Option<Dims>, tol: &Tolerances) -> Result<DensityMatrix> {
    let pure = |psi: Vec<Complex64>| DensityMatrix::pure(&psi, tol);
    match spec {
        StateSpec::BellPhiPlus => pure(presets::bell_phi_plus()),
        StateSpec::BellPhiMinus => pure(presets::bell_phi_minus()),
        StateSpec::BellPsiPlus => pure(presets::bell_psi_plus()),
        StateSpec::BellPsiMinus => pure(presets::bell_psi_minus()),
        StateSpec::Werner { visibility } => presets::werner(*visibility, tol),
        StateSpec::FairDice { faces } => match dims {
            Some(Dims::Single(_)) => Ok(DensityMatrix::maximally_mixed(*faces)),
            _ => {
                if faces * faces > tol.max_dim {
                    return Err(Error::Dimension(format!("{faces}x{faces} dice exceed max_dim")));
                }
                Ok(DensityMatrix::maximally_mixed(faces * faces))
            }
        },
        StateSpec::GluedDice { faces } => presets::glued_dice(*faces, tol),
        StateSpec::Product { a, b } => {
            let ra = build_state_spec(a, None, tol)?;
            let rb = build_state_spec(b, None, tol)?;
            tensor_density(&ra, &rb, tol)
        }
        StateSpec::Copies { of } => {
            let r = build_state_spec(of, None, tol)?;
            tensor_density(&r, &r, tol)
        }
        StateSpec::Zero => pure(presets::qubit_ket("zero").expect("known")),
        StateSpec::One => pure(presets::qubit_ket("one").expect("known")),
        StateSpec::Plus => pure(presets::qubit_ket("plus").expect("known")),
        StateSpec::Minus => pure(presets::qubit_ket("minus").expect("known")),
        StateSpec::PlusI => pure(presets::qubit_ket("plus_i").expect("known")),
        StateSpec::MinusI => pure(presets::qubit_ket("minus_i").expect("known")),
        StateSpec::MaximallyMixed { dim } => {
            if *dim == 0 || *dim > tol.max_dim {
                return Err(Error::Dimension(format!("maximally_mixed dim {dim} out of range")));
            }
            Ok(DensityMatrix::maximally_mixed(*dim))
        }
        StateSpec::Ket { amplitudes } => {
            let psi: Vec<Complex64> = amplitudes.iter().map(complex).collect();
            let norm_sq: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
            if (norm_sq - 1.0).abs() > tol.num {
                return Err(Error::Validation(format!(
                    "ket is not normalized: norm_defect={}",
                    crate::report::fmt_sig((norm_sq - 1.0).abs())
                )));
            }
            pure(psi)
        }
        StateSpec::Matrix { entries } => {
            let rows: Vec<Vec<Complex64>> = entries.iter().map(|r| r.iter().map(complex).collect()).collect();
            DensityMatrix::from_matrix(ComplexMatrix::from_rows(&rows)?, tol)
        }
        StateSpec::RandomPure { dim, seed } => pure(presets::random_pure(*dim, *seed)),
        StateSpec::RandomMixed { dim, seed } => presets::random_density(*dim, *seed, tol),
    }
    .and_then(|rho| match (dims, local_dim(spec)) {
        (Some(d), Some(own)) if d.total() != own => Err(Error::Validation(format!(
            "state has dimension {own}, dims require {}",
            d.total()
        ))),
        _ => Ok(rho),
    })
}
