//! Variances for all `n ≤ N` at once.
//!
//! With `A(t) = ∫ φ(x) φ(x + t) dx`,
//! `‖φ_{n+1}‖² = ‖φ_n‖² + A(0) + 2 Σ_{d=1}^{n} A(dα)`.

use rayon::prelude::*;

use crate::phase::Phase;
use crate::piecewise::{autocorrelation, KahanSum};
use crate::stepfn::StepFunction;

/// `A(dα)` for `d = 0..count`, computed in parallel in index order.
pub fn autocorrelations(phi: &StepFunction, alpha: Phase, count: u64) -> Vec<f64> {
    let f = phi.to_piecewise();
    (0..count)
        .into_par_iter()
        .map(|d| autocorrelation(&f, alpha.mul_int(d as u128)))
        .collect()
}

pub fn variance_scan(phi: &StepFunction, alpha: Phase, n_max: u64) -> Vec<f64> {
    let a = autocorrelations(phi, alpha, n_max.max(1));
    let mut out = Vec::with_capacity(n_max as usize + 1);
    out.push(0.0);
    let mut var = KahanSum::new();
    let mut prefix = KahanSum::new();
    for n in 0..n_max as usize {
        // prefix = Σ_{d=1}^{n} A(dα)
        if n >= 1 {
            prefix.add(a[n]);
        }
        var.add(a[0]);
        var.add(2.0 * prefix.value());
        out.push(var.value().max(0.0));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::{ConvergentTable, IrrationalSpec};
    use crate::sums::SumProfile;

    #[test]
    fn scan_matches_profiles() {
        let alpha = ConvergentTable::new(&IrrationalSpec::golden(), 10)
            .unwrap()
            .alpha_phase();
        for phi in [StepFunction::psi_half(), StepFunction::phi0()] {
            let scan = variance_scan(&phi, alpha, 60);
            assert_eq!(scan.len(), 61);
            assert_eq!(scan[0], 0.0);
            for n in [1u64, 2, 7, 21, 60] {
                let exact = SumProfile::build(&phi, alpha, n).unwrap().variance();
                assert!((scan[n as usize] - exact).abs() < 1e-12, "{n}");
            }
        }
    }
}
