//! Scans over `n`: the size of `|γ_{q_j}|`, variance-defined sets of
//! integers and record variances.

use serde::{Deserialize, Serialize};

use crate::cf::ConvergentTable;
use crate::error::{Error, Result};
use crate::stepfn::StepFunction;

/// `(1/N) #{1 ≤ j ≤ N : |γ_{q_j}(φ)| ≥ η}`.
pub fn gamma_condition_scan(
    phi: &StepFunction,
    table: &ConvergentTable,
    n: usize,
    eta: f64,
) -> Result<f64> {
    if n == 0 || !(eta > 0.0) {
        return Err(Error::InvalidInput("need N >= 1 and eta > 0".into()));
    }
    let mut hits = 0usize;
    for j in 1..=n {
        let q = table.try_q_u128(j)? as i128;
        if phi.gamma(q).norm() >= eta {
            hits += 1;
        }
    }
    Ok(hits as f64 / n as f64)
}

/// `Σ_{j<ℓ} |γ_{q_j}|² a_{j+1}² / Σ_{j≤ℓ} a_{j+1}²`.
pub fn c0_ratio(phi: &StepFunction, table: &ConvergentTable, ell: usize) -> Result<f64> {
    let mut num = 0.0;
    let mut den = 0.0;
    for j in 0..=ell {
        let a = table.a(j + 1) as f64;
        den += a * a;
        if j < ell {
            let q = table.try_q_u128(j)? as i128;
            num += phi.gamma(q).norm_sqr() * a * a;
        }
    }
    Ok(num / den)
}

/// Proxy for the liminf defining `c₀`: the minimum of [`c0_ratio`] over the
/// upper half `ℓ ∈ [⌈ℓ_max/2⌉, ℓ_max]`, which discards the start-up terms.
pub fn c0_estimate(phi: &StepFunction, table: &ConvergentTable, ell_max: usize) -> Result<f64> {
    if ell_max < 2 {
        return Err(Error::InvalidInput("ell_max must be at least 2".into()));
    }
    let mut best = f64::INFINITY;
    for ell in ell_max.div_ceil(2)..=ell_max {
        best = best.min(c0_ratio(phi, table, ell)?);
    }
    Ok(best)
}

/// Lower and upper constants `b ≤ B` of the variance windows.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub b: f64,
    pub big_b: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub n: u64,
    pub variance: f64,
    pub m_of_n: usize,
    /// `b (log log n)^{-1/2} √log n ≤ ‖φ_n‖ ≤ B √log n`
    pub in_w: bool,
    /// `b √log n ≤ ‖φ_n‖ ≤ B √log n`
    pub in_v: bool,
    /// `b √m(n) / √ln m(n) ≤ ‖φ_n‖ ≤ B √m(n)`
    pub in_z: bool,
    /// `‖φ_n‖² ≥ ½ c₀ Σ_{j≤ℓ} a_{j+1}²` with `ℓ = m(n) + 1`
    pub in_e0: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecordVariance {
    pub ell: usize,
    /// Largest `n < q_{ℓ+1}` with maximal variance.
    pub n: u64,
    pub variance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub thresholds: Thresholds,
    pub c0: f64,
    pub records: Vec<ScanRecord>,
    pub density_w: f64,
    pub density_v: f64,
    pub density_z: f64,
    pub density_e0: f64,
    pub record_variances: Vec<RecordVariance>,
}

/// Relative tolerance below which two variances count as tied.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// Largest `n < q_{ℓ+1}` maximizing `scan[n]`, ties within
/// [`TIE_TOLERANCE`] going to the larger `n`.
pub fn record_variance(
    scan: &[f64],
    table: &ConvergentTable,
    ell: usize,
) -> Result<RecordVariance> {
    let end = table.try_q_u128(ell + 1)? as usize;
    if scan.len() < end {
        return Err(Error::InvalidInput(format!(
            "scan covers n < {}, need n < {end}",
            scan.len()
        )));
    }
    let max = scan[..end].iter().copied().fold(0.0, f64::max);
    let n = (0..end)
        .rev()
        .find(|&n| scan[n] >= max * (1.0 - TIE_TOLERANCE))
        .unwrap_or(0);
    Ok(RecordVariance {
        ell,
        n: n as u64,
        variance: scan[n],
    })
}

/// Classifies `1 ≤ n ≤ N` from a variance scan (index `n` holds `‖φ_n‖²`).
pub fn scan_sets(
    phi: &StepFunction,
    table: &ConvergentTable,
    scan: &[f64],
    thresholds: Thresholds,
) -> Result<ScanReport> {
    let n_max = scan.len() as u64 - 1;
    let top_ell = table.m_of_n(n_max.max(1) as u128)? + 1;
    let c0 = c0_estimate(phi, table, top_ell.max(2))?;
    let mut a_sq_prefix = Vec::with_capacity(top_ell + 2);
    let mut acc = 0.0;
    for j in 0..=top_ell + 1 {
        let a = table.a(j + 1) as f64;
        acc += a * a;
        a_sq_prefix.push(acc);
    }
    let Thresholds { b, big_b } = thresholds;
    let mut records = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let variance = scan[n as usize];
        let norm = variance.sqrt();
        let m = table.m_of_n(n as u128)?;
        let log_n = (n as f64).ln();
        let loglog = log_n.ln();
        let upper_log = norm <= big_b * log_n.sqrt();
        let in_v = b * log_n.sqrt() <= norm && upper_log;
        let in_w = loglog > 0.0 && b * log_n.sqrt() / loglog.sqrt() <= norm && upper_log;
        let mf = m as f64;
        let in_z = m >= 2 && b * (mf / mf.ln()).sqrt() <= norm && norm <= big_b * mf.sqrt();
        let in_e0 = variance >= 0.5 * c0 * a_sq_prefix[m + 1];
        records.push(ScanRecord {
            n,
            variance,
            m_of_n: m,
            in_w,
            in_v,
            in_z,
            in_e0,
        });
    }
    let density = |f: fn(&ScanRecord) -> bool| {
        records.iter().filter(|r| f(r)).count() as f64 / records.len().max(1) as f64
    };
    let (density_w, density_v, density_z, density_e0) = (
        density(|r| r.in_w),
        density(|r| r.in_v),
        density(|r| r.in_z),
        density(|r| r.in_e0),
    );
    let mut record_variances = Vec::new();
    for ell in 0..table.len() - 1 {
        if table.q_u128(ell + 1) > n_max as u128 + 1 {
            break;
        }
        record_variances.push(record_variance(scan, table, ell)?);
    }
    Ok(ScanReport {
        thresholds,
        c0,
        records,
        density_w,
        density_v,
        density_z,
        density_e0,
        record_variances,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::cf::IrrationalSpec;

    #[test]
    fn phi0_meets_gamma_condition() {
        for spec in ["golden", "sqrt2", "sqrt3"] {
            let t = ConvergentTable::new(&spec.parse().unwrap(), 70).unwrap();
            let f = gamma_condition_scan(&StepFunction::phi0(), &t, 64, 1.0 / (4.0 * PI)).unwrap();
            assert_eq!(f, 1.0);
        }
    }

    #[test]
    fn psi_golden_parity() {
        let t = ConvergentTable::new(&IrrationalSpec::golden(), 70).unwrap();
        let f = gamma_condition_scan(&StepFunction::psi_half(), &t, 63, 1.0 / PI).unwrap();
        assert_eq!(f, 2.0 / 3.0);
        let f = gamma_condition_scan(&StepFunction::psi_half(), &t, 63, 1.0).unwrap();
        assert_eq!(f, 0.0);
    }

    #[test]
    fn c0_proxies() {
        let t = ConvergentTable::new(&IrrationalSpec::golden(), 70).unwrap();
        let c = c0_estimate(&StepFunction::phi0(), &t, 60).unwrap();
        assert!((c - 1.0 / (4.0 * PI * PI)).abs() < 0.05 / (4.0 * PI * PI));
        let c = c0_estimate(&StepFunction::psi_half(), &t, 60).unwrap();
        assert!((c - 2.0 / 3.0 * 4.0 / (PI * PI)).abs() < 0.05);
        assert_eq!(c0_estimate(&StepFunction::zero(), &t, 10).unwrap(), 0.0);
    }
}
