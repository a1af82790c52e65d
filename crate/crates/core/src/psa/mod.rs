//! Potential states of affairs: Born-rule potentia over a power graph,
//! reconstruction of the density matrix from them, binary valuations and
//! effective-valuation distributions.

mod reconstruct;
mod valuation;

use std::sync::Arc;

pub use reconstruct::{density_from_psa, tomographic_rank};
pub use valuation::{search_binary_valuation, BinaryValuation, NonexistenceCertificate, ValuationSearch};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::DensityMatrix;
use crate::powers::{maximal_contexts, Context, Power, PowerGraph};

#[derive(Debug, Clone, PartialEq)]
pub enum PsaSource {
    FromDensity(DensityMatrix),
    Explicit,
}

/// An intensive valuation Ψ: one potentia in [0, 1] per node.
#[derive(Debug, Clone, PartialEq)]
pub struct Psa {
    graph: Arc<PowerGraph>,
    potentia: Vec<f64>,
    source: PsaSource,
}

impl Psa {
    /// Validates range and per-context normalization of a hand-given PSA.
    pub fn explicit(graph: Arc<PowerGraph>, potentia: Vec<f64>, tol: &Tolerances) -> Result<Self> {
        if potentia.len() != graph.len() {
            return Err(Error::InconsistentPsa(format!(
                "{} potentia for a graph of {} nodes",
                potentia.len(),
                graph.len()
            )));
        }
        if let Some(i) = potentia.iter().position(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::InconsistentPsa(format!(
                "potentia of node {i} is {} (outside [0, 1])",
                potentia[i]
            )));
        }
        let psa = Psa {
            graph,
            potentia,
            source: PsaSource::Explicit,
        };
        let mut contexts = maximal_contexts(&psa.graph, tol)?;
        contexts.extend(psa.graph.named_contexts().iter().map(|n| n.context.clone()));
        for c in contexts.iter().filter(|c| c.resolves_identity) {
            let total: f64 = c.node_ids.iter().map(|&i| psa.potentia[i]).sum();
            if (total - 1.0).abs() > tol.num {
                return Err(Error::InconsistentPsa(format!(
                    "context {:?} sums to {total}",
                    c.node_ids
                )));
            }
        }
        Ok(psa)
    }

    pub fn graph(&self) -> &Arc<PowerGraph> {
        &self.graph
    }

    pub fn potentia(&self) -> &[f64] {
        &self.potentia
    }

    pub fn get(&self, node: usize) -> f64 {
        self.potentia[node]
    }

    pub fn source(&self) -> &PsaSource {
        &self.source
    }
}

/// Tr(ρP), clamped into [0, 1] when within `tol.num` of the boundary.
pub fn born_potentia(rho: &DensityMatrix, p: &Power, tol: &Tolerances) -> Result<f64> {
    if rho.dim() != p.projector.dim() {
        return Err(Error::Dimension(format!(
            "state of dimension {} against projector of dimension {}",
            rho.dim(),
            p.projector.dim()
        )));
    }
    let value = born_value(rho, p.projector.matrix());
    clamp_unit(value, tol).ok_or_else(|| {
        Error::Numerical(format!("Born value {value} of power {} lies outside [0, 1]", p.id))
    })
}

pub(crate) fn born_value(rho: &DensityMatrix, p: &crate::linalg::ComplexMatrix) -> f64 {
    // Tr(ρP) = Σ_ij ρ_ij P_ji
    let r = rho.matrix();
    let d = rho.dim();
    let mut acc = 0.0;
    for i in 0..d {
        for j in 0..d {
            acc += (r[(i, j)] * p[(j, i)]).re;
        }
    }
    acc
}

pub(crate) fn clamp_unit(value: f64, tol: &Tolerances) -> Option<f64> {
    if value < -tol.num || value > 1.0 + tol.num || !value.is_finite() {
        None
    } else {
        Some(value.clamp(0.0, 1.0))
    }
}

/// The PSA of `rho` over every node of `g`.
pub fn psa_from_density(rho: &DensityMatrix, g: Arc<PowerGraph>, tol: &Tolerances) -> Result<Psa> {
    let potentia = g
        .powers()
        .iter()
        .map(|p| born_potentia(rho, p, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(Psa {
        graph: g,
        potentia,
        source: PsaSource::FromDensity(rho.clone()),
    })
}

/// Law of the effective valuation over one identity-resolving context.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveDistribution {
    pub context: Context,
    /// `(node id, probability)` in the context's outcome order.
    pub probabilities: Vec<(usize, f64)>,
}

/// Pr(outcome = P_k) = Ψ(P_k) over the context `c`.
pub fn effective_distribution(psa: &Psa, c: &Context, tol: &Tolerances) -> Result<EffectiveDistribution> {
    if let Some(&bad) = c.node_ids.iter().find(|&&i| i >= psa.graph.len()) {
        return Err(Error::Validation(format!("node {bad} is not in the PSA's graph")));
    }
    if !c.resolves_identity {
        return Err(Error::NonExhaustiveContext(c.node_ids.clone()));
    }
    let probabilities: Vec<(usize, f64)> = c.node_ids.iter().map(|&i| (i, psa.potentia[i])).collect();
    let total: f64 = probabilities.iter().map(|(_, p)| p).sum();
    if (total - 1.0).abs() > tol.num {
        return Err(Error::InconsistentPsa(format!(
            "context {:?} sums to {total}",
            c.node_ids
        )));
    }
    Ok(EffectiveDistribution {
        context: c.clone(),
        probabilities,
    })
}
