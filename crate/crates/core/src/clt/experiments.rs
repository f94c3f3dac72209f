use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::distribution::AtomDistribution;
use super::scan::record_variance;
use crate::cf::{ConvergentTable, IrrationalSpec};
use crate::error::{Error, Result};
use crate::piecewise::product_integral;
use crate::stepfn::StepFunction;
use crate::sums::{ErgodicSums, SumProfile};

/// Exact law of `φ_n / ‖φ_n‖₂` under uniform `x`.
pub fn normalized_distribution(sums: &ErgodicSums, n: u64) -> Result<AtomDistribution> {
    let profile = sums.profile(n)?;
    distribution_of(&profile)
}

fn distribution_of(profile: &SumProfile) -> Result<AtomDistribution> {
    let var = profile.variance();
    if !(var > 0.0) {
        return Err(Error::ZeroVariance(profile.n()));
    }
    AtomDistribution::from_piecewise(profile.function(), var.sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CltReport {
    /// `ℓ` when `n` is the record-variance index `v_ℓ`.
    pub ell: Option<usize>,
    pub n: u64,
    pub variance: f64,
    pub m_of_n: usize,
    pub d_kolmogorov: f64,
    pub support_radius: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum NSelector {
    /// Record-variance indices `v_ℓ` for the listed `ℓ`.
    RecordVariance(Vec<usize>),
    Explicit(Vec<u64>),
}

fn report(sums: &ErgodicSums, ell: Option<usize>, n: u64) -> Result<CltReport> {
    let profile = sums.profile(n)?;
    let dist = distribution_of(&profile)?;
    Ok(CltReport {
        ell,
        n,
        variance: profile.variance(),
        m_of_n: sums.table().m_of_n(n as u128)?,
        d_kolmogorov: dist.kolmogorov_to_normal(),
        support_radius: dist.support_radius(),
    })
}

pub fn clt_experiment(sums: &ErgodicSums, selector: &NSelector) -> Result<Vec<CltReport>> {
    match selector {
        NSelector::Explicit(ns) => ns.iter().map(|&n| report(sums, None, n)).collect(),
        NSelector::RecordVariance(ells) => {
            let top = ells.iter().copied().max().unwrap_or(0);
            let end = sums.table().try_q_u128(top + 1)? as u64;
            let scan = sums.variance_scan(end - 1);
            ells.iter()
                .map(|&ell| {
                    let rec = record_variance(&scan, sums.table(), ell)?;
                    report(sums, Some(ell), rec.n)
                })
                .collect()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub spec: IrrationalSpec,
    pub partial_quotients: Vec<u64>,
    pub records: Vec<CltReport>,
    /// max/min of the support radii over the listed `ℓ`.
    pub radius_ratio: f64,
    pub min_distance: f64,
}

/// `{x} - 1/2` over the rotation with `a_n = ⌊n^γ⌋` at powers of two and
/// `1` elsewhere, at the record-variance indices `n_ℓ`.
pub fn counterexample_experiment(
    gamma_num: u32,
    gamma_den: u32,
    ells: &[usize],
) -> Result<CounterexampleReport> {
    let g = gamma_num as f64 / gamma_den as f64;
    if !(g > 0.5 && g <= 2.0) {
        return Err(Error::InvalidInput(format!("gamma = {g} not in (1/2, 2]")));
    }
    let spec = IrrationalSpec::counterexample(gamma_num, gamma_den)?;
    let top = ells.iter().copied().max().unwrap_or(1);
    let table = Arc::new(ConvergentTable::new(&spec, top + 3)?);
    let sums = ErgodicSums::new(StepFunction::phi0(), Arc::clone(&table));
    let records = clt_experiment(&sums, &NSelector::RecordVariance(ells.to_vec()))?;
    let radii: Vec<f64> = records.iter().map(|r| r.support_radius).collect();
    let max = radii.iter().copied().fold(0.0, f64::max);
    let min = radii.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(CounterexampleReport {
        spec,
        partial_quotients: table.partial_quotients(top + 1),
        radius_ratio: max / min,
        min_distance: records
            .iter()
            .map(|r| r.d_kolmogorov)
            .fold(f64::INFINITY, f64::min),
        records,
    })
}

/// Symmetric `[[xx, xy], [xy, yy]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CovarianceMatrix2 {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl CovarianceMatrix2 {
    /// Eigenvalues in increasing order.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let mean = 0.5 * (self.xx + self.yy);
        let r = (0.25 * (self.xx - self.yy).powi(2) + self.xy * self.xy).sqrt();
        (mean - r, mean + r)
    }

    /// `Γ(a, b) = (a, b) Γ (a, b)ᵀ`.
    pub fn quadratic_form(&self, a: f64, b: f64) -> f64 {
        a * a * self.xx + 2.0 * a * b * self.xy + b * b * self.yy
    }
}

/// `(log n)^{-1}` times the covariance of `(φ¹_n, φ²_n)` under uniform `x`.
pub fn vector_covariance(
    phi1: &StepFunction,
    phi2: &StepFunction,
    table: &ConvergentTable,
    n: u64,
) -> Result<CovarianceMatrix2> {
    if n < 2 {
        return Err(Error::InvalidInput("vector covariance needs n >= 2".into()));
    }
    let alpha = table.alpha_phase();
    let p1 = SumProfile::build(phi1, alpha, n)?;
    let p2 = SumProfile::build(phi2, alpha, n)?;
    let scale = 1.0 / (n as f64).ln();
    Ok(CovarianceMatrix2 {
        xx: scale * p1.variance(),
        xy: scale * product_integral(&[p1.function(), p2.function()]),
        yy: scale * p2.variance(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParityFractions {
    pub count: usize,
    pub odd_odd: f64,
    pub odd_even: f64,
    pub even_odd: f64,
    pub even_even: f64,
}

/// Parity classes of `(p_j, q_j)` for `0 ≤ j < N`.
pub fn parity_scan(table: &ConvergentTable, n: usize) -> Result<ParityFractions> {
    if n == 0 || n > table.len() {
        return Err(Error::TableTooShort {
            needed: n.max(1),
            available: table.len(),
        });
    }
    let mut counts = [0usize; 4];
    for j in 0..n {
        let p_odd = table.p(j).is_odd() as usize;
        let q_odd = table.q(j).is_odd() as usize;
        counts[(1 - p_odd) * 2 + (1 - q_odd)] += 1;
    }
    let f = |c: usize| c as f64 / n as f64;
    Ok(ParityFractions {
        count: n,
        odd_odd: f(counts[0]),
        odd_even: f(counts[1]),
        even_odd: f(counts[2]),
        even_even: f(counts[3]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden_sums(phi: StepFunction) -> ErgodicSums {
        ErgodicSums::new(
            phi,
            Arc::new(ConvergentTable::new(&IrrationalSpec::golden(), 40).unwrap()),
        )
    }

    #[test]
    fn psi_single_step() {
        let sums = golden_sums(StepFunction::psi_half());
        let d = normalized_distribution(&sums, 1).unwrap();
        assert_eq!(d.atoms(), &[(-1.0, 0.5), (1.0, 0.5)]);
        let r = clt_experiment(&sums, &NSelector::Explicit(vec![1])).unwrap();
        assert!((r[0].d_kolmogorov - 0.3413447460685429).abs() < 1e-14);
    }

    #[test]
    fn zero_function_has_no_law() {
        let sums = golden_sums(StepFunction::zero());
        assert!(matches!(
            normalized_distribution(&sums, 5),
            Err(Error::ZeroVariance(5))
        ));
    }

    #[test]
    fn golden_parity_thirds() {
        let t = ConvergentTable::new(&IrrationalSpec::golden(), 70).unwrap();
        let p = parity_scan(&t, 60).unwrap();
        assert_eq!(
            (p.odd_odd, p.odd_even, p.even_odd),
            (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)
        );
        assert_eq!(p.even_even, 0.0);
        assert_eq!(parity_scan(&t, 1).unwrap().even_odd, 1.0);
    }

    #[test]
    fn covariance_diagonal_matches_variance() {
        let t = ConvergentTable::new(&IrrationalSpec::golden(), 40).unwrap();
        let (f1, f2) = StepFunction::billiard(t.alpha_phase()).unwrap();
        let c = vector_covariance(&f1, &f2, &t, 100).unwrap();
        let v = SumProfile::build(&f1, t.alpha_phase(), 100)
            .unwrap()
            .variance();
        assert!((c.xx - v / 100f64.ln()).abs() < 1e-14);
        let (lo, hi) = c.eigenvalues();
        assert!(lo >= -1e-14 && hi >= lo);
    }
}
