//! Diophantine sums over `‖jα‖` that control the correlation estimates,
//! each reported with the growth shape it is compared against.
//!
//! Norms are read off the 128-bit phase of `α`; for the index ranges allowed
//! here (`k < 2^40`) the absolute error of `‖kα‖` is below `2^-86`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cf::ConvergentTable;
use crate::error::{Error, Result};
use crate::phase::Phase;
use crate::piecewise::KahanSum;

/// Cap on the number of terms of one sum.
pub const TERM_BUDGET: u128 = 1 << 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DioKind {
    /// `Σ_{1≤j<q_{t+1}} 1/‖jα‖`
    S1 { t: usize },
    /// `Σ_{1≤j<q_{r+1}} 1/(j‖jα‖)`
    S2 { r: usize },
    /// `Σ_{1≤j<q_ℓ} ‖q_n jα‖/(j²‖jα‖)`
    D1 { n: usize, ell: usize },
    /// `Σ_{1≤j,k<q_Λ, j≠k} ‖q_n jα‖‖q_m kα‖/(|k−j| k j ‖jα‖‖kα‖)`
    D2 { n: usize, m: usize, lambda: usize },
    /// `Σ_{0<|i|,|j|,|k|<q_Λ, i+j+k≠0} ‖q_n iα‖‖q_m jα‖‖q_ℓ kα‖/(|i+j+k||ijk|‖iα‖‖jα‖‖kα‖)`
    D3 {
        n: usize,
        m: usize,
        ell: usize,
        lambda: usize,
    },
}

impl fmt::Display for DioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            DioKind::S1 { t } => write!(f, "s1:{t}"),
            DioKind::S2 { r } => write!(f, "s2:{r}"),
            DioKind::D1 { n, ell } => write!(f, "d1:{n},{ell}"),
            DioKind::D2 { n, m, lambda } => write!(f, "d2:{n},{m},{lambda}"),
            DioKind::D3 { n, m, ell, lambda } => write!(f, "d3:{n},{m},{ell},{lambda}"),
        }
    }
}

impl FromStr for DioKind {
    type Err = Error;

    /// `s1:t`, `s2:r`, `d1:n,ℓ`, `d2:n,m,Λ`, `d3:n,m,ℓ,Λ`.
    fn from_str(s: &str) -> Result<DioKind> {
        let bad = || Error::InvalidInput(format!("cannot parse sum kind {s:?}"));
        let (name, args) = s.split_once(':').ok_or_else(bad)?;
        let args: Vec<usize> = args
            .split(',')
            .map(|a| a.trim().parse().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        Ok(
            match (name.to_ascii_lowercase().as_str(), args.as_slice()) {
                ("s1", &[t]) => DioKind::S1 { t },
                ("s2", &[r]) => DioKind::S2 { r },
                ("d1", &[n, ell]) => DioKind::D1 { n, ell },
                ("d2", &[n, m, lambda]) => DioKind::D2 { n, m, lambda },
                ("d3", &[n, m, ell, lambda]) => DioKind::D3 { n, m, ell, lambda },
                _ => return Err(bad()),
            },
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DioReport {
    pub kind: DioKind,
    pub lhs: f64,
    pub rhs_shape: f64,
    /// `lhs / rhs_shape`, absent when the shape vanishes.
    pub ratio: Option<f64>,
}

fn norm(alpha: Phase, k: u128) -> f64 {
    alpha.mul_int(k).norm()
}

/// `w[t] = ‖q tα‖ / (t ‖tα‖)` for `1 ≤ t < len`, `w[0] = 0`.
fn weights(alpha: Phase, q: u128, len: u128) -> Vec<f64> {
    (0..len)
        .into_par_iter()
        .map(|t| {
            if t == 0 {
                0.0
            } else {
                norm(alpha, q * t) / (t as f64 * norm(alpha, t))
            }
        })
        .collect()
}

fn ordered_sum(parts: Vec<f64>) -> f64 {
    let mut s = KahanSum::new();
    parts.into_iter().for_each(|p| s.add(p));
    s.value()
}

fn check_terms(needed: u128) -> Result<()> {
    if needed > TERM_BUDGET {
        return Err(Error::ResourceExceeded {
            what: "diophantine sum terms",
            needed,
            budget: TERM_BUDGET,
        });
    }
    Ok(())
}

/// Evaluates the sum and its comparison shape; `p` is the growth exponent
/// of the partial quotients (`0` for bounded type).
pub fn diophantine_sum(table: &ConvergentTable, kind: DioKind, p: f64) -> Result<DioReport> {
    let alpha = table.alpha_phase();
    let q = |k: usize| table.try_q_u128(k);
    let (lhs, rhs) = match kind {
        DioKind::S1 { t } => {
            let top = q(t + 1)?;
            check_terms(top)?;
            let parts = (1..top)
                .into_par_iter()
                .map(|j| 1.0 / norm(alpha, j))
                .collect();
            let qt = top as f64;
            (ordered_sum(parts), qt * qt.ln())
        }
        DioKind::S2 { r } => {
            let top = q(r + 1)?;
            check_terms(top)?;
            let parts = (1..top)
                .into_par_iter()
                .map(|j| 1.0 / (j as f64 * norm(alpha, j)))
                .collect();
            let mut shape = 0.0;
            for t in 0..=r {
                let (a, b) = (q(t)? as f64, q(t + 1)? as f64);
                shape += b / a * b.ln();
            }
            (ordered_sum(parts), shape)
        }
        DioKind::D1 { n, ell } => {
            let top = q(ell)?;
            check_terms(top)?;
            let w = weights(alpha, q(n)?, top);
            let parts = (1..top as usize).map(|j| w[j] / j as f64).collect();
            let nf = n as f64;
            (
                ordered_sum(parts),
                nf.powf(p + 2.0) * nf.ln() / q(n + 1)? as f64,
            )
        }
        DioKind::D2 { n, m, lambda } => {
            let top = q(lambda)?;
            check_terms(top * top)?;
            let wn = weights(alpha, q(n)?, top);
            let wm = weights(alpha, q(m)?, top);
            let parts = (1..top as usize)
                .into_par_iter()
                .map(|j| {
                    let mut s = KahanSum::new();
                    for (k, &w) in wm.iter().enumerate().take(top as usize).skip(1) {
                        if k != j {
                            s.add(wn[j] * w / k.abs_diff(j) as f64);
                        }
                    }
                    s.value()
                })
                .collect();
            let l = lambda as f64;
            (
                ordered_sum(parts),
                l.powf(2.0 * p + 4.0) * l.ln() * l.ln() / q(n + 1)? as f64,
            )
        }
        DioKind::D3 { n, m, ell, lambda } => {
            let top = q(lambda)?;
            check_terms(8 * top * top * top)?;
            let wn = weights(alpha, q(n)?, top);
            let wm = weights(alpha, q(m)?, top);
            let wl = weights(alpha, q(ell)?, top);
            let range = -(top as i64 - 1)..top as i64;
            let parts = range
                .clone()
                .into_par_iter()
                .filter(|&i| i != 0)
                .map(|i| {
                    let mut s = KahanSum::new();
                    let a = wn[i.unsigned_abs() as usize];
                    for j in range.clone().filter(|&j| j != 0) {
                        let b = a * wm[j.unsigned_abs() as usize];
                        for k in range.clone().filter(|&k| k != 0) {
                            let total = i + j + k;
                            if total != 0 {
                                s.add(
                                    b * wl[k.unsigned_abs() as usize] / total.unsigned_abs() as f64,
                                );
                            }
                        }
                    }
                    s.value()
                })
                .collect();
            let l = lambda as f64;
            (ordered_sum(parts), l.powf(3.0 * p + 8.0) / q(n + 1)? as f64)
        }
    };
    Ok(DioReport {
        kind,
        lhs,
        rhs_shape: rhs,
        ratio: (rhs > 0.0 && rhs.is_finite()).then(|| lhs / rhs),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::IrrationalSpec;

    #[test]
    fn s1_small_cases() {
        let g = ConvergentTable::new(&IrrationalSpec::golden(), 20).unwrap();
        assert_eq!(
            diophantine_sum(&g, DioKind::S1 { t: 0 }, 0.0).unwrap().lhs,
            0.0
        );
        let s = ConvergentTable::new(&"sqrt2".parse().unwrap(), 20).unwrap();
        let r = diophantine_sum(&s, DioKind::S1 { t: 0 }, 0.0).unwrap();
        assert!((r.lhs - 1.0 / (2f64.sqrt() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn kind_round_trip() {
        for s in ["s1:3", "s2:4", "d1:4,12", "d2:2,3,5", "d3:1,2,3,4"] {
            assert_eq!(s.parse::<DioKind>().unwrap().to_string(), s);
        }
        assert!("d2:1,2".parse::<DioKind>().is_err());
    }

    #[test]
    fn d2_is_symmetric_for_equal_indices() {
        // with n = m the summand is symmetric in (j, k), so the sum is twice
        // the part above the diagonal
        let g = ConvergentTable::new(&IrrationalSpec::golden(), 20).unwrap();
        let alpha = g.alpha_phase();
        let full = diophantine_sum(
            &g,
            DioKind::D2 {
                n: 3,
                m: 3,
                lambda: 7,
            },
            0.0,
        )
        .unwrap()
        .lhs;
        let w = weights(alpha, 3, 21);
        let mut upper = 0.0;
        for j in 1..21usize {
            for k in j + 1..21 {
                upper += w[j] * w[k] / (k - j) as f64;
            }
        }
        assert!((full - 2.0 * upper).abs() < 1e-9 * full);
    }
}
