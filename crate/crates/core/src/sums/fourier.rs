//! Variance of `φ_n` from Fourier coefficients:
//! `‖φ_n‖² = 2 Σ_{r≥1} |γ_r|²/r² · sin²(π r n α) / sin²(π r α)`.
//!
//! The tail beyond `L` is bounded through the Ostrowski digits of `n`. With
//! `D_q(r) = sin(π q r α)/sin(π r α)` and `n = Σ b_k q_k`, Cauchy–Schwarz gives
//! `|D_n(r)|² ≤ (Σ b_k) Σ b_k |D_{q_k}(r)|²`, and for `q_ℓ ≤ L + 1`
//! `Σ_{|r|>L} r⁻² |D_{q_k}(r)|² ≤ (π²/3)(6ρ + ρ²)`, `ρ = q_k/q_ℓ`,
//! because in any `q_ℓ` consecutive integers the `i`-th smallest `‖rα‖` is at
//! least `i/(4q_ℓ)`. The trivial bound `2 q_k²/L` is used when smaller.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::cf::ConvergentTable;
use crate::error::{Error, Result};
use crate::phase::Phase;
use crate::piecewise::KahanSum;
use crate::stepfn::StepFunction;

const CHUNK: usize = 4096;

/// `γ_r` from circle jumps, for `r = 1..=cutoff`.
fn gammas(jumps: &[(Phase, f64)], cutoff: u64) -> Vec<Complex64> {
    (1..cutoff as usize + 1)
        .into_par_iter()
        .with_min_len(CHUNK)
        .map(|r| {
            let mut re = KahanSum::new();
            let mut im = KahanSum::new();
            for &(u, jump) in jumps {
                let t = 2.0 * PI * u.mul_int(r as u128).to_f64();
                re.add(jump * t.cos());
                im.add(-jump * t.sin());
            }
            Complex64::new(im.value(), -re.value()) / (2.0 * PI)
        })
        .collect()
}

/// `Σ f(i)` over `0..len` in fixed chunks, so the rounding does not depend
/// on the number of threads.
fn chunked_sum(len: usize, f: impl Fn(usize) -> f64 + Sync) -> f64 {
    let parts: Vec<f64> = (0..len.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut s = KahanSum::new();
            for i in c * CHUNK..((c + 1) * CHUNK).min(len) {
                s.add(f(i));
            }
            s.value()
        })
        .collect();
    let mut s = KahanSum::new();
    parts.into_iter().for_each(|p| s.add(p));
    s.value()
}

fn sin_pi_sq(x: Phase) -> f64 {
    let s = (PI * x.norm()).sin();
    s * s
}

/// Ostrowski digits of `n` by the greedy rule.
fn greedy_digits(qs: &[u128], n: u128) -> Result<Vec<u64>> {
    let top = qs.partition_point(|&q| q <= n);
    if top == qs.len() {
        return Err(Error::TableTooShort {
            needed: top + 1,
            available: qs.len(),
        });
    }
    let mut digits = vec![0; top];
    let mut r = n;
    for k in (0..top).rev() {
        digits[k] = (r / qs[k]) as u64;
        r %= qs[k];
    }
    Ok(digits)
}

/// Precomputed weights `2|γ_r|²/(r² sin²(π r α))` for `r ≤ L`.
pub struct FourierVariance {
    cutoff: u64,
    alpha: Phase,
    weights: Vec<f64>,
    k_certified: f64,
    qs: Vec<u128>,
}

impl FourierVariance {
    pub fn new(phi: &StepFunction, table: &ConvergentTable, cutoff: u64) -> FourierVariance {
        let cutoff = cutoff.max(1);
        let alpha = table.alpha_phase();
        let jumps = phi.jumps();
        let g = gammas(&jumps, cutoff);
        let weights = g
            .par_iter()
            .enumerate()
            .with_min_len(CHUNK)
            .map(|(i, gamma)| {
                let r = (i + 1) as f64;
                2.0 * gamma.norm_sqr() / (r * r * sin_pi_sq(alpha.mul_int(i as u128 + 1)))
            })
            .collect();
        let k_certified = jumps.iter().map(|(_, j)| j.abs()).sum::<f64>() / (2.0 * PI);
        let qs = (0..table.len()).map(|k| table.q_u128(k)).collect();
        FourierVariance {
            cutoff,
            alpha,
            weights,
            k_certified,
            qs,
        }
    }

    pub fn cutoff(&self) -> u64 {
        self.cutoff
    }

    /// Partial sum over `0 < |r| ≤ L`.
    pub fn partial(&self, n: u64) -> f64 {
        let step = self.alpha.mul_int(n as u128);
        chunked_sum(self.weights.len(), |i| {
            self.weights[i] * sin_pi_sq(step.mul_int(i as u128 + 1))
        })
    }

    /// Largest `ℓ` with `q_ℓ ≤ L + 1`.
    fn ell(&self) -> usize {
        self.qs
            .iter()
            .rposition(|&q| q <= self.cutoff as u128 + 1)
            .unwrap_or(0)
    }

    /// Certified bound on `Σ_{|r|>L} |c_r(φ_n)|²`.
    pub fn tail_bound(&self, n: u64) -> Result<f64> {
        if n == 0 {
            return Ok(0.0);
        }
        let digits = greedy_digits(&self.qs, n as u128)?;
        let ell = self.ell();
        let q_ell = self.qs[ell] as f64;
        let cutoff = self.cutoff as f64;
        let mut weighted = 0.0;
        let mut digit_sum = 0.0;
        for (k, &b) in digits.iter().enumerate() {
            if b == 0 {
                continue;
            }
            let q = self.qs[k] as f64;
            let trivial = 2.0 * q * q / cutoff;
            let t = if k < ell {
                let rho = q / q_ell;
                trivial.min(PI * PI / 3.0 * (6.0 * rho + rho * rho))
            } else {
                trivial
            };
            weighted += b as f64 * t;
            digit_sum += b as f64;
        }
        Ok(self.k_certified * self.k_certified * digit_sum * weighted)
    }

    /// `(partial sum, tail bound)`.
    pub fn variance(&self, n: u64) -> Result<(f64, f64)> {
        Ok((self.partial(n), self.tail_bound(n)?))
    }
}

/// Pointwise Fourier evaluation of `φ_n(x)` with a certified error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourierEval {
    pub value: f64,
    pub tail_bound: f64,
}

impl FourierEval {
    /// Partial sum `Σ_{0<|r|≤L} c_r(φ_n) e(rx)`. The error is at most
    /// `Σ_P |J_P| / (2π(L+1)‖x - P‖)` over the jumps `P` of `φ_n`, from the
    /// Abel bound on the sawtooth's Fourier tail.
    pub fn compute(phi: &StepFunction, alpha: Phase, n: u64, x: Phase, cutoff: u64) -> FourierEval {
        let jumps = phi.jumps();
        let g = gammas(&jumps, cutoff);
        let value = 2.0
            * chunked_sum(g.len(), |i| {
                let r = (i + 1) as u128;
                let mut d = Complex64::new(0.0, 0.0);
                for j in 0..n as u128 {
                    let t = 2.0 * PI * (x + alpha.mul_int(j)).mul_int(r).to_f64();
                    d += Complex64::new(t.cos(), t.sin());
                }
                (g[i] / r as f64 * d).re
            });
        let mut bound = 0.0;
        for j in 0..n as u128 {
            for &(u, jump) in &jumps {
                let p = u - alpha.mul_int(j);
                bound += jump.abs() / (2.0 * PI * (cutoff as f64 + 1.0) * (x - p).norm());
            }
        }
        FourierEval {
            value,
            tail_bound: bound,
        }
    }
}
