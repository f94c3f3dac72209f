//! Lower and upper bounds on variances in terms of the partial quotients.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::ErgodicSums;
use crate::cf::ConvergentTable;
use crate::error::Result;
use crate::stepfn::StepFunction;

fn gamma_sq(phi: &StepFunction, q: u128) -> f64 {
    phi.gamma(q as i128).norm_sqr()
}

/// `(8/π²) δ² Σ_{j=1}^{ℓ} |γ_{q_j}|² a_{j+1}² 1{‖n q_j α‖ ≥ δ}` with
/// `n ∈ [q_{ℓ-1}, q_ℓ)`.
pub fn variance_lower_bound(
    phi: &StepFunction,
    table: &ConvergentTable,
    n: u64,
    delta: f64,
) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    let ell = table.m_of_n(n as u128)? + 1;
    let alpha = table.alpha_phase();
    let mut s = 0.0;
    for j in 1..=ell {
        let q = table.try_q_u128(j)?;
        if alpha.mul_int(q.wrapping_mul(n as u128)).norm() >= delta {
            let a = table.a(j + 1) as f64;
            s += gamma_sq(phi, q) * a * a;
        }
    }
    Ok(8.0 / (PI * PI) * delta * delta * s)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanVariance {
    pub n: u64,
    /// `(1/N) Σ_{k<N} ‖φ_k‖₂²`
    pub mean: f64,
    /// `ℓ` with `N ∈ [q_ℓ, q_{ℓ+1})`
    pub ell: usize,
    /// `Σ_{j<ℓ} |γ_{q_j}|² a_{j+1}²`
    pub reference: f64,
    pub ratio: Option<f64>,
}

/// Mean variance from a scan holding `‖φ_k‖₂²` at index `k`, `k ≤ N`.
pub fn mean_variance(
    phi: &StepFunction,
    table: &ConvergentTable,
    scan: &[f64],
) -> Result<MeanVariance> {
    let n = scan.len() as u64 - 1;
    let mean = if n == 0 {
        0.0
    } else {
        scan[..n as usize].iter().sum::<f64>() / n as f64
    };
    let ell = if n == 0 { 0 } else { table.m_of_n(n as u128)? };
    let mut reference = 0.0;
    for j in 0..ell {
        let a = table.a(j + 1) as f64;
        reference += gamma_sq(phi, table.try_q_u128(j)?) * a * a;
    }
    Ok(MeanVariance {
        n,
        mean,
        ell,
        reference,
        ratio: (reference > 0.0).then(|| mean / reference),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpperRatio {
    pub ell: usize,
    pub max_variance: f64,
    pub argmax: u64,
    /// `K(φ)² Σ_{j≤ℓ} a_{j+1}²`
    pub reference: f64,
    pub ratio: f64,
}

pub fn upper_ratio(sums: &ErgodicSums, ell: usize) -> Result<UpperRatio> {
    let table = sums.table();
    let lo = table.try_q_u128(ell)? as u64;
    let hi = table.try_q_u128(ell + 1)? as u64;
    let scan = sums.variance_scan(hi - 1);
    let (argmax, max_variance) =
        (lo..hi)
            .map(|n| (n, scan[n as usize]))
            .fold((lo, f64::NEG_INFINITY), |best, cur| {
                if cur.1 >= best.1 {
                    cur
                } else {
                    best
                }
            });
    let k = sums.phi().k_bound_with(1).certified;
    let reference = k
        * k
        * (0..=ell)
            .map(|j| (table.a(j + 1) as f64).powi(2))
            .sum::<f64>();
    Ok(UpperRatio {
        ell,
        max_variance,
        argmax,
        reference,
        ratio: max_variance / reference,
    })
}
