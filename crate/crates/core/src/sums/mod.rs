//! Ergodic sums `φ_n(x) = Σ_{j<n} φ(x + jα)` and their variances.

mod blocks;
mod bounds;
mod counting;
mod decor;
mod diophantine;
mod fourier;
mod profile;
mod scan;

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

pub use blocks::{Block, BlockDecomposition};
pub use bounds::{MeanVariance, UpperRatio};
pub use counting::{count_near_multiples, counting_bound};
pub use decor::{decorrelation_integral, Factor};
pub use diophantine::{diophantine_sum, DioKind, DioReport};
pub use fourier::{FourierEval, FourierVariance};
pub use profile::{
    base_set, profile_stats, sum_naive, ProfileStats, SumProfile, Sweep, DEFAULT_PIECE_BUDGET,
    DEFAULT_SWEEP_BUDGET,
};
pub use scan::{autocorrelations, variance_scan};

use crate::cf::ConvergentTable;
use crate::error::Result;
use crate::phase::Phase;
use crate::stepfn::StepFunction;

/// A step function paired with a rotation, with memoized profiles.
pub struct ErgodicSums {
    phi: StepFunction,
    table: Arc<ConvergentTable>,
    piece_budget: u128,
    cache: RwLock<HashMap<u64, Arc<SumProfile>>>,
}

impl ErgodicSums {
    pub fn new(phi: StepFunction, table: Arc<ConvergentTable>) -> ErgodicSums {
        ErgodicSums {
            phi,
            table,
            piece_budget: DEFAULT_PIECE_BUDGET,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn with_budget(mut self, pieces: u128) -> ErgodicSums {
        self.piece_budget = pieces;
        self
    }

    pub fn phi(&self) -> &StepFunction {
        &self.phi
    }

    pub fn table(&self) -> &ConvergentTable {
        &self.table
    }

    pub fn alpha(&self) -> Phase {
        self.table.alpha_phase()
    }

    pub fn sum_naive(&self, n: u64, x: Phase) -> Result<f64> {
        sum_naive(&self.phi, self.alpha(), n, x)
    }

    /// The profile of `φ_n`; memoized.
    pub fn profile(&self, n: u64) -> Result<Arc<SumProfile>> {
        if let Some(p) = self.cache.read().expect("profile cache").get(&n) {
            return Ok(Arc::clone(p));
        }
        let p = Arc::new(SumProfile::build_with_budget(
            &self.phi,
            self.alpha(),
            n,
            self.piece_budget,
        )?);
        let mut cache = self.cache.write().expect("profile cache");
        Ok(Arc::clone(cache.entry(n).or_insert(p)))
    }

    /// Drops all memoized profiles.
    pub fn clear_cache(&self) {
        self.cache.write().expect("profile cache").clear();
    }

    pub fn stats(&self, n: u64) -> Result<ProfileStats> {
        profile_stats(&self.phi, self.alpha(), n)
    }

    /// `∫ φ_n²` by exact integration of the profile.
    pub fn variance_exact(&self, n: u64) -> Result<f64> {
        Ok(self.profile(n)?.variance())
    }

    pub fn block_decompose(&self, n: u64) -> Result<BlockDecomposition> {
        BlockDecomposition::new(self, n)
    }

    /// `‖φ_n‖₂²` for every `n ≤ n_max`, index `n`.
    pub fn variance_scan(&self, n_max: u64) -> Vec<f64> {
        scan::variance_scan(&self.phi, self.alpha(), n_max)
    }

    pub fn fourier(&self, cutoff: u64) -> FourierVariance {
        FourierVariance::new(&self.phi, &self.table, cutoff)
    }

    pub fn variance_lower_bound(&self, n: u64, delta: f64) -> Result<f64> {
        bounds::variance_lower_bound(&self.phi, &self.table, n, delta)
    }

    pub fn mean_variance(&self, n_total: u64) -> Result<MeanVariance> {
        bounds::mean_variance(&self.phi, &self.table, &self.variance_scan(n_total))
    }

    /// Ratio of `‖φ_n‖₂²` to `K(φ)² Σ_{j≤ℓ} a_{j+1}²` over `n ∈ [q_ℓ, q_{ℓ+1})`.
    pub fn upper_ratio(&self, ell: usize) -> Result<UpperRatio> {
        bounds::upper_ratio(self, ell)
    }
}
