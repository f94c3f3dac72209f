//! Symbolic dynamics of Ostrowski digits for quadratic α.
//!
//! Past the preperiod the partial quotients repeat with period `p`, so the
//! digit strings read `p` letters at a time form a subshift of finite type.
//! Its Perron data give the maximal-entropy (Parry) Markov measure.

use std::collections::VecDeque;

use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::cf::{ConvergentTable, IrrationalSpec, QuotientSource};
use crate::error::{Error, Result};
use crate::piecewise::KahanSum;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodData {
    /// Number of partial quotients `a_n`, `n ≥ 1`, before the repeating block.
    pub n0: usize,
    pub minimal_period: usize,
    /// The period used, doubled when the minimal one is odd.
    pub p: usize,
    /// `a_{n0+1} … a_{n0+p}`.
    pub repeating: Vec<u64>,
}

/// Periodic structure of an eventually periodic expansion (quadratic surds
/// and literal specs).
pub fn detect_period(spec: &IrrationalSpec) -> Result<PeriodData> {
    let source = QuotientSource::new(spec)?;
    let (n0, block) = match (spec, source.surd_expansion()) {
        (_, Some(e)) => (e.preperiod(), e.period.clone()),
        (IrrationalSpec::Literal { prefix, tail }, None) => (prefix.len(), tail.clone()),
        _ => {
            return Err(Error::InvalidInput(format!(
                "{spec} has no periodic expansion"
            )))
        }
    };
    let minimal = (1..=block.len())
        .find(|&d| block.len() % d == 0 && (d..block.len()).all(|i| block[i] == block[i - d]))
        .unwrap_or(block.len());
    let block = &block[..minimal];
    let repeating = if minimal % 2 == 1 {
        block.iter().chain(block.iter()).copied().collect()
    } else {
        block.to_vec()
    };
    Ok(PeriodData {
        n0,
        minimal_period: minimal,
        p: repeating.len(),
        repeating,
    })
}

/// Alphabet of admissible length-`p` digit words and its 0/1 transitions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitionSystem {
    /// First digit index `k0` covered by the periodic block.
    pub start: usize,
    pub alphabet: Vec<Vec<u64>>,
    pub matrix: Vec<Vec<u8>>,
}

impl TransitionSystem {
    /// Words `(b_{k0} … b_{k0+p-1})` with `b_k ≤ a_{k+1}` and the carry rule
    /// `b_{k+1} = a_{k+2} ⇒ b_k = 0`, where `k0 = max(1, n0)` so that every
    /// digit bound comes from the periodic block.
    pub fn build(spec: &IrrationalSpec) -> Result<TransitionSystem> {
        let period = detect_period(spec)?;
        let source = QuotientSource::new(spec)?;
        let start = period.n0.max(1);
        let p = period.p;
        let max: Vec<u64> = (0..=p).map(|i| source.quotient(start + i + 1)).collect();
        let mut alphabet = Vec::new();
        let mut word = vec![0u64; p];
        loop {
            let ok = (0..p - 1).all(|i| word[i + 1] != max[i + 1] || word[i] == 0);
            if ok {
                alphabet.push(word.clone());
            }
            // odometer over the digit ranges
            let mut i = 0;
            while i < p && word[i] == max[i] {
                word[i] = 0;
                i += 1;
            }
            if i == p {
                break;
            }
            word[i] += 1;
        }
        // `max[p]` equals `max[0]` by periodicity
        let matrix = alphabet
            .iter()
            .map(|w1| {
                alphabet
                    .iter()
                    .map(|w2| u8::from(w2[0] != max[p] || w1[p - 1] == 0))
                    .collect()
            })
            .collect();
        let system = TransitionSystem {
            start,
            alphabet,
            matrix,
        };
        system.validate()?;
        Ok(system)
    }

    pub fn from_matrix(matrix: Vec<Vec<u8>>) -> Result<TransitionSystem> {
        let alphabet = (0..matrix.len() as u64).map(|i| vec![i]).collect();
        let system = TransitionSystem {
            start: 0,
            alphabet,
            matrix,
        };
        system.validate()?;
        Ok(system)
    }

    pub fn len(&self) -> usize {
        self.alphabet.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphabet.is_empty()
    }

    pub fn allowed(&self, a: usize, b: usize) -> bool {
        self.matrix[a][b] != 0
    }

    /// Requires at least two letters, irreducibility and aperiodicity.
    pub fn validate(&self) -> Result<()> {
        let n = self.matrix.len();
        if n < 2 {
            return Err(Error::InvalidStructure(format!(
                "alphabet of size {n} is degenerate"
            )));
        }
        if self.matrix.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidStructure(
                "transition matrix is not square".into(),
            ));
        }
        let period = self.period()?;
        if period != 1 {
            return Err(Error::InvalidStructure(format!(
                "transition graph has period {period}"
            )));
        }
        Ok(())
    }

    /// Gcd of cycle lengths; errors when the graph is not strongly connected.
    pub fn period(&self) -> Result<u64> {
        let n = self.matrix.len();
        let reach = |forward: bool| {
            let mut seen = vec![false; n];
            let mut level = vec![0u64; n];
            let mut queue = VecDeque::from([0usize]);
            seen[0] = true;
            while let Some(u) = queue.pop_front() {
                for v in 0..n {
                    let edge = if forward {
                        self.matrix[u][v]
                    } else {
                        self.matrix[v][u]
                    };
                    if edge != 0 && !seen[v] {
                        seen[v] = true;
                        level[v] = level[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            (seen, level)
        };
        let (fwd, level) = reach(true);
        let (bwd, _) = reach(false);
        if fwd.iter().chain(&bwd).any(|&s| !s) {
            return Err(Error::InvalidStructure(
                "transition graph is not irreducible".into(),
            ));
        }
        let mut g = 0u64;
        for u in 0..n {
            for v in 0..n {
                if self.matrix[u][v] != 0 {
                    let d = (level[u] + 1).abs_diff(level[v]);
                    g = g.gcd(&d);
                }
            }
        }
        Ok(g)
    }

    /// Number of admissible words of `k ≥ 1` letters, `1ᵀ B^{k-1} 1`.
    pub fn word_count(&self, k: usize) -> f64 {
        let n = self.len();
        let mut v = vec![1.0; n];
        for _ in 1..k {
            v = (0..n)
                .map(|i| (0..n).filter(|&j| self.allowed(i, j)).map(|j| v[j]).sum())
                .collect();
        }
        v.iter().sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerronData {
    pub lambda: f64,
    /// Right eigenvector, `BU = λU`.
    pub u: Vec<f64>,
    /// Left eigenvector, `ᵗBV = λV`, scaled so that `ᵗUV = 1`.
    pub v: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

pub const DEFAULT_TOLERANCE: f64 = 1e-12;
const MAX_ITERATIONS: usize = 100_000;

fn mat_vec(b: &[Vec<f64>], x: &[f64], transpose: bool) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|i| {
            let mut s = KahanSum::new();
            for j in 0..n {
                s.add(if transpose { b[j][i] } else { b[i][j] } * x[j]);
            }
            s.value()
        })
        .collect()
}

fn normalize(x: &mut [f64]) -> f64 {
    let s: f64 = x.iter().sum();
    x.iter_mut().for_each(|v| *v /= s);
    s
}

/// Two-sided power iteration for a nonnegative irreducible aperiodic matrix.
pub fn perron(b: &[Vec<f64>], tolerance: f64) -> Result<PerronData> {
    let n = b.len();
    if n == 0 || b.iter().any(|r| r.len() != n || r.iter().any(|&x| x < 0.0)) {
        return Err(Error::InvalidStructure(
            "need a square nonnegative matrix".into(),
        ));
    }
    let mut u = vec![1.0 / n as f64; n];
    let mut v = u.clone();
    let residual = |u: &[f64], v: &[f64], lambda: f64| {
        let bu = mat_vec(b, u, false);
        let bv = mat_vec(b, v, true);
        let r1 = bu
            .iter()
            .zip(u)
            .map(|(a, x)| (a - lambda * x).abs())
            .fold(0.0, f64::max);
        let r2 = bv
            .iter()
            .zip(v)
            .map(|(a, x)| (a - lambda * x).abs())
            .fold(0.0, f64::max);
        r1.max(r2)
    };
    for it in 1..=MAX_ITERATIONS {
        let mut nu = mat_vec(b, &u, false);
        let lambda = normalize(&mut nu);
        let mut nv = mat_vec(b, &v, true);
        normalize(&mut nv);
        u = nu;
        v = nv;
        // scale for the residual test: entries are O(1) relative to λ
        let r = residual(&u, &v, lambda);
        if r <= tolerance * lambda.max(1.0) {
            let dot: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
            v.iter_mut().for_each(|x| *x /= dot);
            let residual = residual(&u, &v, lambda);
            return Ok(PerronData {
                lambda,
                u,
                v,
                residual,
                iterations: it,
            });
        }
    }
    Err(Error::NoConvergence(format!(
        "power iteration did not reach {tolerance:e} in {MAX_ITERATIONS} steps"
    )))
}

fn as_f64(system: &TransitionSystem) -> Vec<Vec<f64>> {
    system
        .matrix
        .iter()
        .map(|r| r.iter().map(|&x| x as f64).collect())
        .collect()
}

/// The Parry measure: `π_y = U_y V_y`, `P(y, y') = B(y, y') U_{y'} / (λ U_y)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarkovMeasure {
    pub perron: PerronData,
    pub stationary: Vec<f64>,
    pub kernel: Vec<Vec<f64>>,
}

impl MarkovMeasure {
    pub fn new(system: &TransitionSystem, tolerance: f64) -> Result<MarkovMeasure> {
        let perron = perron(&as_f64(system), tolerance)?;
        if !(perron.lambda > 1.0) {
            return Err(Error::InvalidStructure(format!(
                "spectral radius {} is not above 1",
                perron.lambda
            )));
        }
        let n = system.len();
        let (u, v, lambda) = (&perron.u, &perron.v, perron.lambda);
        let stationary = (0..n).map(|i| u[i] * v[i]).collect();
        let kernel = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if system.allowed(i, j) {
                            u[j] / (lambda * u[i])
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(MarkovMeasure {
            perron,
            stationary,
            kernel,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.perron.lambda
    }

    /// `max_y |Σ_{y'} P(y, y') - 1|`.
    pub fn row_sum_error(&self) -> f64 {
        self.kernel
            .iter()
            .map(|r| (r.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `‖πP - π‖₁`.
    pub fn stationarity_error(&self) -> f64 {
        let n = self.stationary.len();
        (0..n)
            .map(|j| {
                let s: f64 = (0..n).map(|i| self.stationary[i] * self.kernel[i][j]).sum();
                (s - self.stationary[j]).abs()
            })
            .sum()
    }

    /// `-Σ π_y P(y, y') ln P(y, y')`.
    pub fn entropy(&self) -> f64 {
        let mut s = KahanSum::new();
        for (i, row) in self.kernel.iter().enumerate() {
            for &p in row {
                if p > 0.0 {
                    s.add(-self.stationary[i] * p * p.ln());
                }
            }
        }
        s.value()
    }

    /// `μ(C_{y0…yn}) = V_{y0} U_{yn} λ^{-n}`; `None` for inadmissible words.
    pub fn cylinder(&self, system: &TransitionSystem, word: &[usize]) -> Option<f64> {
        let (&first, &last) = (word.first()?, word.last()?);
        if word.iter().any(|&y| y >= system.len())
            || word.windows(2).any(|w| !system.allowed(w[0], w[1]))
        {
            return None;
        }
        let n = (word.len() - 1) as i32;
        Some(self.perron.v[first] * self.perron.u[last] * self.lambda().powi(-n))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub p: usize,
    pub lambda: f64,
    /// `(n, q_{n+p}/q_n, |q_{n+p}/q_n - λ|)`
    pub ratios: Vec<(usize, f64, f64)>,
}

/// Compares `q_{n+p}/q_n` with the Perron root for `n ≤ n_max`.
pub fn growth_check(spec: &IrrationalSpec, n_max: usize) -> Result<GrowthReport> {
    let system = TransitionSystem::build(spec)?;
    let lambda = perron(&as_f64(&system), DEFAULT_TOLERANCE)?.lambda;
    let p = detect_period(spec)?.p;
    let table = ConvergentTable::new(spec, n_max + p + 1)?;
    let ratios = (1..=n_max)
        .map(|n| {
            // exact quotient of big integers, rounded once
            let num = table.q(n + p);
            let den = table.q(n);
            let scale = num.bits().saturating_sub(60);
            let r = (num >> scale).to_f64().unwrap_or(f64::NAN)
                / (den >> scale).to_f64().unwrap_or(f64::NAN);
            (n, r, (r - lambda).abs())
        })
        .collect();
    Ok(GrowthReport { p, lambda, ratios })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowReport {
    pub fit_n: u64,
    pub n_max: u64,
    pub eta1: f64,
    pub eta2: f64,
    /// Fraction of `2 ≤ n ≤ N` with `η₁ ln n ≤ ‖φ_n‖² ≤ η₂ ln n`.
    pub fraction: f64,
    /// `(N', #{2 ≤ n ≤ N' outside the window})` at powers of ten.
    pub outside: Vec<(u64, u64)>,
}

/// Nearest-rank percentile of `values`, `q ∈ [0, 100]`.
pub fn percentile(values: &[f64], q: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let rank = ((q / 100.0) * v.len() as f64).ceil().max(1.0) as usize;
    v[rank.min(v.len()) - 1]
}

/// Window `[η₁, η₂]` for `‖φ_n‖²/ln n` fitted on `2 ≤ n ≤ fit_n` at the given
/// percentiles, then applied to `2 ≤ n ≤ N`. `scan[n]` holds `‖φ_n‖²`.
pub fn variance_window_scan(
    scan: &[f64],
    fit_n: u64,
    percentiles: (f64, f64),
) -> Result<WindowReport> {
    let n_max = scan.len() as u64 - 1;
    if fit_n < 2 || fit_n > n_max {
        return Err(Error::InvalidInput(format!(
            "fit range 2..={fit_n} must lie inside 2..={n_max}"
        )));
    }
    let ratio = |n: u64| scan[n as usize] / (n as f64).ln();
    let fit: Vec<f64> = (2..=fit_n).map(ratio).collect();
    let eta1 = percentile(&fit, percentiles.0);
    let eta2 = percentile(&fit, percentiles.1);
    Ok(window_fraction(scan, eta1, eta2, fit_n))
}

pub fn window_fraction(scan: &[f64], eta1: f64, eta2: f64, fit_n: u64) -> WindowReport {
    let n_max = scan.len() as u64 - 1;
    let mut outside = Vec::new();
    let mut misses = 0u64;
    let mut checkpoint = 10u64;
    for n in 2..=n_max {
        let v = scan[n as usize];
        let l = (n as f64).ln();
        if !(eta1 * l <= v && v <= eta2 * l) {
            misses += 1;
        }
        if n == checkpoint || n == n_max {
            outside.push((n, misses));
            checkpoint = checkpoint.saturating_mul(10);
        }
    }
    let total = n_max.saturating_sub(1).max(1);
    WindowReport {
        fit_n,
        n_max,
        eta1,
        eta2,
        fraction: 1.0 - misses as f64 / total as f64,
        outside,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periods() {
        let g = detect_period(&IrrationalSpec::golden()).unwrap();
        assert_eq!((g.n0, g.minimal_period, g.p), (0, 1, 2));
        let s = detect_period(&"sqrt2".parse().unwrap()).unwrap();
        assert_eq!(
            (s.minimal_period, s.p, s.repeating.clone()),
            (1, 2, vec![2, 2])
        );
        let t = detect_period(&"sqrt3".parse().unwrap()).unwrap();
        assert_eq!((t.minimal_period, t.p, t.repeating), (2, 2, vec![1, 2]));
        assert!(detect_period(&"linear".parse().unwrap()).is_err());
    }

    #[test]
    fn golden_alphabet() {
        let sys = TransitionSystem::build(&IrrationalSpec::golden()).unwrap();
        assert_eq!(sys.alphabet, vec![vec![0, 0], vec![1, 0], vec![0, 1]]);
        assert_eq!(
            sys.matrix,
            vec![vec![1, 1, 1], vec![1, 1, 1], vec![1, 0, 1]]
        );
        let l = MarkovMeasure::new(&sys, DEFAULT_TOLERANCE)
            .unwrap()
            .lambda();
        assert!((l - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-10);
    }

    #[test]
    fn sqrt2_root_and_measure() {
        let sys = TransitionSystem::build(&"sqrt2".parse().unwrap()).unwrap();
        let m = MarkovMeasure::new(&sys, DEFAULT_TOLERANCE).unwrap();
        let want = 3.0 + 2.0 * 2f64.sqrt();
        assert!((m.lambda() - want).abs() < 1e-9);
        assert!((m.entropy() - want.ln()).abs() < 1e-9);
        assert!(m.stationarity_error() < 1e-10);
        assert!(m.row_sum_error() < 1e-10);
    }

    #[test]
    fn perron_two_by_two() {
        let p = perron(&[vec![1.0, 1.0], vec![1.0, 2.0]], 1e-13).unwrap();
        assert!((p.lambda - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
        let p = perron(&[vec![1.0, 2.0], vec![2.0, 5.0]], 1e-13).unwrap();
        assert!((p.lambda - (3.0 + 2.0 * 2f64.sqrt())).abs() < 1e-11);
    }

    #[test]
    fn degenerate_alphabet_rejected() {
        assert!(matches!(
            TransitionSystem::from_matrix(vec![vec![1]]),
            Err(Error::InvalidStructure(_))
        ));
        assert!(TransitionSystem::from_matrix(vec![vec![0, 1], vec![1, 0]]).is_err());
    }

    #[test]
    fn percentile_nearest_rank() {
        let v: Vec<f64> = (1..=200).map(f64::from).collect();
        assert_eq!(percentile(&v, 0.5), 1.0);
        assert_eq!(percentile(&v, 99.5), 199.0);
        assert_eq!(percentile(&v, 100.0), 200.0);
    }
}
