use serde::{Deserialize, Serialize};

/// Numerical tolerances and combinatorial caps shared by every module.
///
/// All values have desk-scale defaults for double precision and small
/// dimensions; each can be overridden from a scenario file or the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Hermiticity defect ‖A − A†‖_F.
    pub herm: f64,
    /// |Tr ρ − 1| for density matrices.
    pub trace: f64,
    /// Most negative eigenvalue tolerated in a density matrix.
    pub psd: f64,
    /// General numerical slack (products, eigenvectors, sums).
    pub num: f64,
    /// Commutator norm below which two powers share an edge.
    pub comm: f64,
    /// Idempotence defect ‖P² − P‖_F.
    pub proj: f64,
    /// Least-squares residual accepted when reconstructing ρ from a PSA.
    pub recon: f64,
    /// Largest potentia gap allowed by an intensive isomorphism.
    pub intensive: f64,
    /// Off-map joint mass allowed by an exact effective relation.
    pub effective: f64,
    /// Singular values above this count towards the Schmidt rank.
    pub schmidt: f64,
    /// A state is pure when Tr ρ² ≥ 1 − pure.
    pub pure: f64,
    /// Largest Hilbert-space dimension any operation will build.
    pub max_dim: usize,
    /// Maximal number of contexts returned by clique enumeration.
    pub clique_cap: usize,
    /// Branch budget for the binary-valuation search.
    pub search_budget: u64,
    /// Branch budget for the labeled isomorphism search.
    pub iso_budget: u64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            herm: 1e-9,
            trace: 1e-9,
            psd: 1e-9,
            num: 1e-8,
            comm: 1e-9,
            proj: 1e-9,
            recon: 1e-7,
            intensive: 1e-9,
            effective: 1e-9,
            schmidt: 1e-9,
            pure: 1e-9,
            max_dim: 64,
            clique_cap: 100_000,
            search_budget: 100_000_000,
            iso_budget: 10_000_000,
        }
    }
}

impl Tolerances {
    /// Applies `PSAKIT_MAX_DIM` from the environment when set and valid.
    pub fn with_env_overrides(mut self) -> Self {
        if let Some(dim) = std::env::var("PSAKIT_MAX_DIM")
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&d| d > 0)
        {
            self.max_dim = dim;
        }
        self
    }
}
