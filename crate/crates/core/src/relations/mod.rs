//! Intensive and effective relations between the two local PSAs of a
//! bipartite state, and the resulting classification.
//!
//! | intensive | effective | classification          |
//! |-----------|-----------|-------------------------|
//! | yes       | yes       | `Entangled`             |
//! | yes       | no        | `IntensiveOnly`         |
//! | no        | no        | `Separable`             |
//! | no        | yes       | `EffectiveOnlyAnomaly`  |
//!
//! The local PSAs are the Born valuations of the reduced states over the
//! supplied local graphs.

pub mod baselines;
pub mod effective;
pub mod intensive;

use std::sync::Arc;

pub use baselines::{ppt_separable, schmidt_rank, PptResult};
pub use effective::{
    assess_pair, decide, effective_related, joint_outcome_distribution, tested_pairs, CorrelationSign,
    EffectiveFailure, EffectiveOutcome, EffectiveWitness, PairAssessment, PairSign, TestedPair,
};
pub use intensive::{intensive_related, IntensiveOutcome, IntensiveWitness, NotRelatedReason};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{partial_trace, DensityMatrix, Side};
use crate::powers::{Context, PowerGraph};
use crate::psa::{psa_from_density, Psa};

/// Which context pairs the effective relation quantifies over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RelationMode {
    /// Only the pairs listed in the scenario.
    #[default]
    DesignatedPairs,
    /// Every identity-resolving maximal context on either side must have
    /// a deterministically coupled partner on the other.
    AllMatchedContexts,
}

/// One designated context pair with its reference outcome matching:
/// outcome `i` of `a` is paired with outcome `matching[i]` of `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextPair {
    pub a: Context,
    pub b: Context,
    pub matching: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct JointScenario {
    pub rho: DensityMatrix,
    pub dims: (usize, usize),
    pub graph_a: Arc<PowerGraph>,
    pub graph_b: Arc<PowerGraph>,
    pub context_pairs: Vec<ContextPair>,
    pub mode: RelationMode,
}

impl JointScenario {
    pub fn new(
        rho: DensityMatrix,
        dims: (usize, usize),
        graph_a: Arc<PowerGraph>,
        graph_b: Arc<PowerGraph>,
        context_pairs: Vec<ContextPair>,
        mode: RelationMode,
    ) -> Result<Self> {
        let (da, db) = dims;
        if da * db != rho.dim() {
            return Err(Error::Dimension(format!(
                "dims ({da}, {db}) do not factor a state of dimension {}",
                rho.dim()
            )));
        }
        if graph_a.dim() != da || graph_b.dim() != db {
            return Err(Error::Dimension(format!(
                "local graphs have dimensions ({}, {}), expected ({da}, {db})",
                graph_a.dim(),
                graph_b.dim()
            )));
        }
        if mode == RelationMode::DesignatedPairs && context_pairs.is_empty() {
            return Err(Error::Validation("designated mode needs at least one context pair".into()));
        }
        for p in &context_pairs {
            for (c, g) in [(&p.a, &graph_a), (&p.b, &graph_b)] {
                if c.node_ids.iter().any(|&i| i >= g.len()) {
                    return Err(Error::Validation(format!("context {:?} is outside its graph", c.node_ids)));
                }
                if !c.resolves_identity {
                    return Err(Error::NonExhaustiveContext(c.node_ids.clone()));
                }
            }
            if p.matching.len() != p.a.len() || p.matching.iter().any(|&m| m >= p.b.len()) {
                return Err(Error::Validation(format!(
                    "matching {:?} does not map {} outcomes into {}",
                    p.matching,
                    p.a.len(),
                    p.b.len()
                )));
            }
        }
        Ok(JointScenario {
            rho,
            dims,
            graph_a,
            graph_b,
            context_pairs,
            mode,
        })
    }

    /// Reduced states (A, B).
    pub fn reduced_states(&self, tol: &Tolerances) -> Result<(DensityMatrix, DensityMatrix)> {
        Ok((
            partial_trace(&self.rho, self.dims, Side::A, tol)?,
            partial_trace(&self.rho, self.dims, Side::B, tol)?,
        ))
    }

    /// Local PSAs over the two graphs.
    pub fn local_psas(&self, tol: &Tolerances) -> Result<(Psa, Psa)> {
        let (ra, rb) = self.reduced_states(tol)?;
        Ok((
            psa_from_density(&ra, self.graph_a.clone(), tol)?,
            psa_from_density(&rb, self.graph_b.clone(), tol)?,
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Entangled,
    IntensiveOnly,
    Separable,
    EffectiveOnlyAnomaly,
}

impl Classification {
    pub fn from_relations(intensive: bool, effective: bool) -> Self {
        match (intensive, effective) {
            (true, true) => Classification::Entangled,
            (true, false) => Classification::IntensiveOnly,
            (false, false) => Classification::Separable,
            (false, true) => Classification::EffectiveOnlyAnomaly,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Entangled => "Entangled",
            Classification::IntensiveOnly => "IntensiveOnly",
            Classification::Separable => "Separable",
            Classification::EffectiveOnlyAnomaly => "EffectiveOnlyAnomaly",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Baselines {
    /// Present when the joint state is pure within `tol.pure`.
    pub schmidt_rank: Option<usize>,
    /// Present when dA·dB ≤ 36.
    pub ppt: Option<PptResult>,
}

#[derive(Debug, Clone)]
pub struct RelationVerdict {
    pub intensive: IntensiveOutcome,
    pub effective: EffectiveOutcome,
    pub classification: Classification,
    pub baselines: Baselines,
    pub diagnostics: Vec<String>,
    pub psa_a: Psa,
    pub psa_b: Psa,
}

impl RelationVerdict {
    pub fn is_anomaly(&self) -> bool {
        self.classification == Classification::EffectiveOnlyAnomaly
    }
}

/// Orthodox baselines for the joint state.
pub fn baselines(s: &JointScenario, tol: &Tolerances) -> Result<Baselines> {
    let schmidt = match baselines::pure_state_vector(&s.rho, tol)? {
        Some(psi) => Some(schmidt_rank(&psi, s.dims, tol)?),
        None => None,
    };
    let ppt = if s.dims.0 * s.dims.1 <= 36 {
        Some(ppt_separable(&s.rho, s.dims, tol)?)
    } else {
        None
    };
    Ok(Baselines {
        schmidt_rank: schmidt,
        ppt,
    })
}

/// Runs both deciders on the scenario and fills in the verdict table.
pub fn classify(s: &JointScenario, tol: &Tolerances) -> Result<RelationVerdict> {
    let (psa_a, psa_b) = s.local_psas(tol)?;
    let intensive = intensive_related(&psa_a, &psa_b, tol)?;
    let effective = effective_related(s, tol)?;
    let classification = Classification::from_relations(intensive.is_related(), effective.is_related());
    let mut diagnostics = Vec::new();
    if classification == Classification::EffectiveOnlyAnomaly {
        diagnostics.push(
            "effective relation found without an intensive relation; effective relations should imply intensive ones"
                .to_string(),
        );
    }
    Ok(RelationVerdict {
        intensive,
        effective,
        classification,
        baselines: baselines(s, tol)?,
        diagnostics,
        psa_a,
        psa_b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_table_is_exhaustive_and_exclusive() {
        use Classification::*;
        let cases = [
            (true, true, Entangled),
            (true, false, IntensiveOnly),
            (false, false, Separable),
            (false, true, EffectiveOnlyAnomaly),
        ];
        for (i, e, c) in cases {
            assert_eq!(Classification::from_relations(i, e), c);
        }
    }
}
