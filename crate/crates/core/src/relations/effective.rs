//! Effective relatedness: deterministic coupling of the outcomes of
//! context pairs under the joint state.
//!
//! The same decision rule runs on exact distributions (threshold
//! `tol.effective`) and on sampled frequencies (a statistical threshold),
//! which keeps exact and empirical verdicts comparable.

use super::{JointScenario, RelationMode};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::powers::{maximal_contexts, Context};
use crate::psa::clamp_unit;

/// A pair of contexts actually put to the test, with the outcome
/// matching used as the reference for the correlation sign.
#[derive(Debug, Clone, PartialEq)]
pub struct TestedPair {
    pub a: Context,
    pub b: Context,
    pub matching: Vec<usize>,
    pub a_group: usize,
    pub b_group: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairSign {
    Correlated,
    AntiCorrelated,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrelationSign {
    Correlated,
    AntiCorrelated,
    Mixed,
}

/// How well the best outcome function τ explains one joint table.
#[derive(Debug, Clone, PartialEq)]
pub struct PairAssessment {
    /// Per-row argmax: outcome i of the A context ↦ outcome τ(i) of B.
    pub tau: Vec<usize>,
    /// Σ_i p(i, τ(i)).
    pub captured_mass: f64,
    /// 1 − captured mass.
    pub leak: f64,
    /// Number of B outcomes whose marginal exceeds the threshold.
    pub b_support: usize,
    pub sign: PairSign,
    /// Leak within threshold and the B outcome is not constant.
    pub deterministic: bool,
}

/// Scores a probability (or frequency) table against `threshold`.
pub fn assess_pair(table: &[Vec<f64>], matching: &[usize], threshold: f64) -> PairAssessment {
    let total: f64 = table.iter().flatten().sum();
    let norm = if total > 0.0 { total } else { 1.0 };
    let cols = table.first().map_or(0, Vec::len);
    let mut tau = Vec::with_capacity(table.len());
    let mut captured = 0.0;
    for row in table {
        let (best, value) = row
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (j, &p)| if p > acc.1 { (j, p) } else { acc });
        tau.push(best);
        captured += value.max(0.0);
    }
    let captured_mass = captured / norm;
    let leak = (1.0 - captured_mass).max(0.0);
    let b_support = (0..cols)
        .filter(|&j| table.iter().map(|r| r[j]).sum::<f64>() / norm > threshold)
        .count();
    let live_rows: Vec<usize> = (0..table.len())
        .filter(|&i| table[i].iter().sum::<f64>() / norm > threshold)
        .collect();
    let agrees = |target: &dyn Fn(usize) -> Option<usize>| live_rows.iter().all(|&i| target(i) == Some(tau[i]));
    let sign = if agrees(&|i| matching.get(i).copied()) {
        PairSign::Correlated
    } else if agrees(&|i| matching.get(i).and_then(|&m| (cols - 1).checked_sub(m))) {
        PairSign::AntiCorrelated
    } else {
        PairSign::Other
    };
    PairAssessment {
        tau,
        captured_mass,
        leak,
        b_support,
        sign,
        deterministic: leak <= threshold && b_support >= 2,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairCorrelation {
    pub pair_index: usize,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub tau: Vec<usize>,
    pub captured_mass: f64,
    pub leak: f64,
    pub sign: PairSign,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveWitness {
    pub pairs: Vec<PairCorrelation>,
    pub correlation_sign: CorrelationSign,
    /// Largest off-map joint mass over the witnessing pairs.
    pub max_leak: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EffectiveFailure {
    /// The best outcome function leaves too much mass off the map.
    Leak,
    /// The coupling is exact but one side's outcome is constant.
    Degenerate,
    /// Some context has no deterministically coupled partner.
    NoPartner,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EffectiveOutcome {
    Related(EffectiveWitness),
    NotRelated {
        worst_pair: usize,
        leak: f64,
        reason: EffectiveFailure,
    },
}

impl EffectiveOutcome {
    pub fn is_related(&self) -> bool {
        matches!(self, EffectiveOutcome::Related(_))
    }
}

/// p(i, j) = Tr(ρ (P_i ⊗ Q_j)) in the contexts' outcome orders.
pub fn joint_outcome_distribution(
    s: &JointScenario,
    c1: &Context,
    c2: &Context,
    tol: &Tolerances,
) -> Result<Vec<Vec<f64>>> {
    for (c, side) in [(c1, "A"), (c2, "B")] {
        if !c.resolves_identity {
            return Err(Error::NonExhaustiveContext(c.node_ids.clone()));
        }
        let g = if side == "A" { &s.graph_a } else { &s.graph_b };
        if c.node_ids.iter().any(|&i| i >= g.len()) {
            return Err(Error::Validation(format!("context {:?} is not in graph {side}", c.node_ids)));
        }
    }
    let rho = s.rho.matrix();
    let (da, db) = s.dims;
    let mut table = Vec::with_capacity(c1.len());
    for &i in &c1.node_ids {
        let p = s.graph_a.power(i).projector.matrix();
        let row = c2
            .node_ids
            .iter()
            .map(|&j| {
                let q = s.graph_b.power(j).projector.matrix();
                let value = local_product_expectation(rho, p, q, da, db);
                clamp_unit(value, tol).ok_or_else(|| {
                    Error::Numerical(format!("joint probability {value} for outcome ({i}, {j}) is outside [0, 1]"))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        table.push(row);
    }
    let total: f64 = table.iter().flatten().sum();
    if (total - 1.0).abs() > tol.num {
        return Err(Error::Numerical(format!("joint distribution sums to {total}")));
    }
    Ok(table)
}

// Tr(ρ (P ⊗ Q)) = Σ ρ_{(a,c),(b,d)} P_{b,a} Q_{d,c}
fn local_product_expectation(rho: &ComplexMatrix, p: &ComplexMatrix, q: &ComplexMatrix, da: usize, db: usize) -> f64 {
    let mut acc = 0.0;
    for a in 0..da {
        for b in 0..da {
            let pba = p[(b, a)];
            if pba.norm_sqr() == 0.0 {
                continue;
            }
            for c in 0..db {
                for d in 0..db {
                    acc += (rho[(a * db + c, b * db + d)] * pba * q[(d, c)]).re;
                }
            }
        }
    }
    acc
}

/// The context pairs a scenario tests, according to its mode.
///
/// `AllMatchedContexts` pairs every identity-resolving maximal context of
/// graph A with every one of graph B; the matching defaults to index order.
pub fn tested_pairs(s: &JointScenario, tol: &Tolerances) -> Result<Vec<TestedPair>> {
    match s.mode {
        RelationMode::DesignatedPairs => Ok(s
            .context_pairs
            .iter()
            .enumerate()
            .map(|(k, p)| TestedPair {
                a: p.a.clone(),
                b: p.b.clone(),
                matching: p.matching.clone(),
                a_group: k,
                b_group: k,
            })
            .collect()),
        RelationMode::AllMatchedContexts => {
            let ca: Vec<Context> = maximal_contexts(&s.graph_a, tol)?
                .into_iter()
                .filter(|c| c.resolves_identity)
                .collect();
            let cb: Vec<Context> = maximal_contexts(&s.graph_b, tol)?
                .into_iter()
                .filter(|c| c.resolves_identity)
                .collect();
            let mut out = Vec::with_capacity(ca.len() * cb.len());
            for (ia, a) in ca.iter().enumerate() {
                for (ib, b) in cb.iter().enumerate() {
                    let matching = (0..a.len()).map(|i| i.min(b.len() - 1)).collect();
                    out.push(TestedPair {
                        a: a.clone(),
                        b: b.clone(),
                        matching,
                        a_group: ia,
                        b_group: ib,
                    });
                }
            }
            Ok(out)
        }
    }
}

fn witness_from(pairs: &[TestedPair], assessments: &[PairAssessment], chosen: &[usize]) -> EffectiveWitness {
    let correlations: Vec<PairCorrelation> = chosen
        .iter()
        .map(|&k| PairCorrelation {
            pair_index: k,
            a: pairs[k].a.node_ids.clone(),
            b: pairs[k].b.node_ids.clone(),
            tau: assessments[k].tau.clone(),
            captured_mass: assessments[k].captured_mass,
            leak: assessments[k].leak,
            sign: assessments[k].sign,
        })
        .collect();
    let correlation_sign = if correlations.iter().all(|c| c.sign == PairSign::Correlated) {
        CorrelationSign::Correlated
    } else if correlations.iter().all(|c| c.sign == PairSign::AntiCorrelated) {
        CorrelationSign::AntiCorrelated
    } else {
        CorrelationSign::Mixed
    };
    let max_leak = correlations.iter().map(|c| c.leak).fold(0.0, f64::max);
    EffectiveWitness {
        pairs: correlations,
        correlation_sign,
        max_leak,
    }
}

type GroupOf = fn(&TestedPair) -> usize;

/// Aggregates per-pair assessments into a verdict for `mode`.
pub fn decide(mode: RelationMode, pairs: &[TestedPair], assessments: &[PairAssessment]) -> EffectiveOutcome {
    match mode {
        RelationMode::DesignatedPairs => {
            let worst = (0..pairs.len())
                .filter(|&k| !assessments[k].deterministic)
                .max_by(|&x, &y| assessments[x].leak.total_cmp(&assessments[y].leak).then(y.cmp(&x)));
            match worst {
                Some(k) => {
                    let a = &assessments[k];
                    let reason = if a.b_support < 2 {
                        EffectiveFailure::Degenerate
                    } else {
                        EffectiveFailure::Leak
                    };
                    EffectiveOutcome::NotRelated {
                        worst_pair: k,
                        leak: a.leak,
                        reason,
                    }
                }
                None => {
                    let chosen: Vec<usize> = (0..pairs.len()).collect();
                    EffectiveOutcome::Related(witness_from(pairs, assessments, &chosen))
                }
            }
        }
        RelationMode::AllMatchedContexts => {
            let groups_a = pairs.iter().map(|p| p.a_group + 1).max().unwrap_or(0);
            let groups_b = pairs.iter().map(|p| p.b_group + 1).max().unwrap_or(0);
            let mut chosen = Vec::new();
            let sides: [(usize, GroupOf); 2] = [(groups_a, |p| p.a_group), (groups_b, |p| p.b_group)];
            for (groups, group_of) in sides {
                for g in 0..groups {
                    let members: Vec<usize> = (0..pairs.len()).filter(|&k| group_of(&pairs[k]) == g).collect();
                    match members.iter().find(|&&k| assessments[k].deterministic) {
                        Some(&k) => chosen.push(k),
                        None => {
                            let best = members
                                .iter()
                                .copied()
                                .min_by(|&x, &y| assessments[x].leak.total_cmp(&assessments[y].leak))
                                .unwrap_or(0);
                            return EffectiveOutcome::NotRelated {
                                worst_pair: best,
                                leak: assessments.get(best).map_or(1.0, |a| a.leak),
                                reason: EffectiveFailure::NoPartner,
                            };
                        }
                    }
                }
            }
            chosen.sort_unstable();
            chosen.dedup();
            EffectiveOutcome::Related(witness_from(pairs, assessments, &chosen))
        }
    }
}

/// Exact effective relatedness of the scenario's local PSAs.
pub fn effective_related(s: &JointScenario, tol: &Tolerances) -> Result<EffectiveOutcome> {
    let pairs = tested_pairs(s, tol)?;
    let mut assessments = Vec::with_capacity(pairs.len());
    for p in &pairs {
        let table = joint_outcome_distribution(s, &p.a, &p.b, tol)?;
        assessments.push(assess_pair(&table, &p.matching, tol.effective));
    }
    Ok(decide(s.mode, &pairs, &assessments))
}
