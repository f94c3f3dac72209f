//! Exact piecewise profiles of ergodic sums `φ_n(x) = Σ_{j<n} φ(x + jα)`.
//!
//! Every jump `J` of `φ` at `u` reappears in `φ_n` at the `n` points
//! `u - jα`, `j < n`. Those points are rotated copies of one sorted base set
//! `{-jα}`, so the breakpoints of `φ_n` come out of a k-way merge without a
//! global sort. Values follow from cumulative jumps plus the slope, and the
//! additive constant from `∫ φ_n = 0`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::phase::{Phase, MERGE_TOLERANCE};
use crate::piecewise::{KahanSum, PiecewiseLinear};
use crate::stepfn::StepFunction;

/// Default cap on the number of pieces of a materialized profile.
pub const DEFAULT_PIECE_BUDGET: u128 = 1 << 24;

/// Cap on `n` for streaming sweeps (the base set holds `n` phases).
pub const DEFAULT_SWEEP_BUDGET: u128 = 1 << 26;

/// `Σ_{j<n} φ(x + jα)` by direct summation, with `α` taken from the
/// 128-bit phase. Fails when some `x + jα` lies within its own error radius
/// of a discontinuity of `φ`, where the value would be ambiguous.
pub fn sum_naive(phi: &StepFunction, alpha: Phase, n: u64, x: Phase) -> Result<f64> {
    let jumps: Vec<Phase> = phi.jumps().into_iter().map(|(u, _)| u).collect();
    let mut s = KahanSum::new();
    let mut point = x;
    for j in 0..n {
        // the phase of α is within 2^-127 of α, so x + jα is within 2j+1 ulps
        let radius = 2 * j as u128 + 1;
        for &u in jumps.iter().filter(|_| j > 0) {
            let d = (point - u).dist_to_int().0;
            if d <= radius {
                return Err(Error::PrecisionExhausted {
                    radius: radius as f64 * crate::phase::ULP,
                    tolerance: d as f64 * crate::phase::ULP,
                });
            }
        }
        s.add(phi.evaluate_phase(point));
        point = point + alpha;
    }
    Ok(s.value())
}

/// Sorted `{-jα mod 1 : 0 <= j < n}`.
pub fn base_set(alpha: Phase, n: u64) -> Vec<u128> {
    let mut v: Vec<u128> = (0..n)
        .map(|j| alpha.mul_int(j as u128).0.wrapping_neg())
        .collect();
    v.par_sort_unstable();
    v
}

/// Merged breakpoint events of `φ_n` in increasing order.
pub struct Sweep<'a> {
    base: &'a [u128],
    copies: Vec<(u128, f64, usize)>, // (shift u, jump J, cursor position t)
    starts: Vec<usize>,
    pending: Option<(u128, f64)>,
}

impl<'a> Sweep<'a> {
    pub fn new(base: &'a [u128], jumps: &[(Phase, f64)]) -> Sweep<'a> {
        let starts = jumps
            .iter()
            .map(|&(u, _)| {
                if u.0 == 0 {
                    0
                } else {
                    let cut = u.0.wrapping_neg();
                    base.partition_point(|&b| b < cut)
                }
            })
            .collect();
        Sweep {
            base,
            copies: jumps.iter().map(|&(u, j)| (u.0, j, 0)).collect(),
            starts,
            pending: None,
        }
    }

    fn peek_copy(&self, i: usize) -> Option<u128> {
        let (u, _, t) = self.copies[i];
        let n = self.base.len();
        if t >= n {
            return None;
        }
        Some(self.base[(self.starts[i] + t) % n].wrapping_add(u))
    }

    fn next_raw(&mut self) -> Option<(u128, f64)> {
        let mut best: Option<(u128, usize)> = None;
        for i in 0..self.copies.len() {
            if let Some(p) = self.peek_copy(i) {
                if best.is_none_or(|(b, _)| p < b) {
                    best = Some((p, i));
                }
            }
        }
        let (p, i) = best?;
        self.copies[i].2 += 1;
        Some((p, self.copies[i].1))
    }
}

impl Iterator for Sweep<'_> {
    type Item = (u128, f64);

    /// Next breakpoint with the total jump of all points within the merge
    /// tolerance of it.
    fn next(&mut self) -> Option<(u128, f64)> {
        let (mut p, mut j) = match self.pending.take() {
            Some(e) => e,
            None => self.next_raw()?,
        };
        loop {
            match self.next_raw() {
                Some((q, k)) if q - p < MERGE_TOLERANCE => {
                    j += k;
                    // keep the first point of a cluster as its representative
                    let _ = &mut p;
                }
                Some(e) => {
                    self.pending = Some(e);
                    return Some((p, j));
                }
                None => return Some((p, j)),
            }
        }
    }
}

/// Events of the sweep with the wrap-around cluster folded into the first
/// event.
fn collect_events(base: &[u128], jumps: &[(Phase, f64)]) -> Vec<(u128, f64)> {
    let mut events: Vec<(u128, f64)> = Sweep::new(base, jumps).collect();
    if events.len() > 1 {
        let first = events[0].0;
        let last = events[events.len() - 1].0;
        if first.wrapping_sub(last) < MERGE_TOLERANCE {
            let (_, j) = events.pop().unwrap();
            events[0].1 += j;
        }
    }
    events
}

/// Summary statistics of `φ_n` obtained in one streaming pass.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfileStats {
    pub n: u64,
    pub pieces: u64,
    pub sup: f64,
    pub variance: f64,
}

fn check_sweep_budget(n: u64, budget: u128) -> Result<()> {
    if n as u128 > budget {
        return Err(Error::ResourceExceeded {
            what: "sum profile base set",
            needed: n as u128,
            budget,
        });
    }
    Ok(())
}

/// Sup norm and variance of `φ_n` without materializing the profile.
pub fn profile_stats(phi: &StepFunction, alpha: Phase, n: u64) -> Result<ProfileStats> {
    check_sweep_budget(n, DEFAULT_SWEEP_BUDGET)?;
    let jumps = phi.jumps();
    if n == 0 || jumps.is_empty() {
        return Ok(ProfileStats {
            n,
            pieces: 1,
            sup: 0.0,
            variance: 0.0,
        });
    }
    let base = base_set(alpha, n);
    let slope = phi.slope() * n as f64;

    let mut sweep = Sweep::new(&base, &jumps).peekable();
    let (p0, j0) = sweep.next().expect("nonempty sweep");
    let mut cur = (p0, j0);
    let mut cum = KahanSum::new();
    cum.add(j0);
    let mut m1 = KahanSum::new();
    let mut m2 = KahanSum::new();
    let (mut hi, mut lo) = (f64::NEG_INFINITY, f64::INFINITY);
    let mut pieces = 0u64;
    loop {
        let next = sweep.next();
        let end = next.map_or(p0, |e| e.0);
        let len = Phase(cur.0).arc_len_f64(Phase(end));
        let v = cum.value() + slope * Phase(p0).forward_to(Phase(cur.0)).to_f64();
        let w = v + slope * len;
        m1.add(v * len + 0.5 * slope * len * len);
        m2.add(v * v * len + v * slope * len * len + slope * slope * len * len * len / 3.0);
        hi = hi.max(v).max(w);
        lo = lo.min(v).min(w);
        pieces += 1;
        match next {
            Some(e) => {
                cum.add(e.1);
                cur = e;
            }
            None => break,
        }
    }
    let c = m1.value();
    Ok(ProfileStats {
        n,
        pieces,
        sup: (hi - c).abs().max((lo - c).abs()),
        variance: (m2.value() - c * c).max(0.0),
    })
}

/// The function `φ_n` as an explicit piecewise-linear profile.
#[derive(Clone, Debug, PartialEq)]
pub struct SumProfile {
    n: u64,
    function: PiecewiseLinear,
}

impl SumProfile {
    pub fn build(phi: &StepFunction, alpha: Phase, n: u64) -> Result<SumProfile> {
        SumProfile::build_with_budget(phi, alpha, n, DEFAULT_PIECE_BUDGET)
    }

    pub fn build_with_budget(
        phi: &StepFunction,
        alpha: Phase,
        n: u64,
        budget: u128,
    ) -> Result<SumProfile> {
        let jumps = phi.jumps();
        let needed = n as u128 * jumps.len().max(1) as u128;
        if needed > budget {
            return Err(Error::ResourceExceeded {
                what: "sum profile pieces",
                needed,
                budget,
            });
        }
        if n == 0 || jumps.is_empty() {
            return Ok(SumProfile {
                n,
                function: PiecewiseLinear::constant(0.0),
            });
        }
        let base = base_set(alpha, n);
        let events = collect_events(&base, &jumps);
        drop(base);
        let slope = phi.slope() * n as f64;
        let p0 = Phase(events[0].0);
        let mut cum = KahanSum::new();
        let mut breakpoints = Vec::with_capacity(events.len());
        let mut values = Vec::with_capacity(events.len());
        for &(p, j) in &events {
            cum.add(j);
            breakpoints.push(Phase(p));
            values.push(cum.value() + slope * p0.forward_to(Phase(p)).to_f64());
        }
        let raw = PiecewiseLinear::new(breakpoints, values, slope);
        let c = raw.integral();
        let values = raw.values().iter().map(|v| v - c).collect();
        Ok(SumProfile {
            n,
            function: PiecewiseLinear::new(raw.breakpoints().to_vec(), values, slope),
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn function(&self) -> &PiecewiseLinear {
        &self.function
    }

    pub fn piece_count(&self) -> usize {
        self.function.piece_count()
    }

    pub fn eval_phase(&self, x: Phase) -> f64 {
        self.function.eval_phase(x)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.function.eval(x)
    }

    pub fn variance(&self) -> f64 {
        self.function.l2_norm_sq()
    }

    pub fn sup_norm(&self) -> f64 {
        self.function.sup_norm()
    }

    pub fn integral(&self) -> f64 {
        self.function.integral()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::{ConvergentTable, IrrationalSpec};

    fn golden_alpha() -> Phase {
        ConvergentTable::new(&IrrationalSpec::golden(), 10)
            .unwrap()
            .alpha_phase()
    }

    #[test]
    fn psi_golden_three_terms() {
        let v = sum_naive(&StepFunction::psi_half(), golden_alpha(), 3, Phase::ZERO).unwrap();
        assert_eq!(v, 1.0);
    }

    #[test]
    fn n_one_reproduces_phi() {
        let alpha = golden_alpha();
        for phi in [StepFunction::psi_half(), StepFunction::phi0()] {
            let p = SumProfile::build(&phi, alpha, 1).unwrap();
            for &x in &[0.0, 0.1, 0.49, 0.5, 0.77] {
                assert!((p.eval(x) - phi.evaluate(x)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn profile_matches_naive_sum() {
        let alpha = golden_alpha();
        let phi = StepFunction::phi0();
        let p = SumProfile::build(&phi, alpha, 37).unwrap();
        for i in 0..50 {
            let x = Phase::from_f64((i as f64 + 0.5) / 50.0);
            let naive = sum_naive(&phi, alpha, 37, x).unwrap();
            assert!((p.eval_phase(x) - naive).abs() < 1e-12);
        }
        assert!(p.integral().abs() < 1e-12);
    }

    #[test]
    fn streaming_stats_match_profile() {
        let alpha = golden_alpha();
        for phi in [StepFunction::psi_half(), StepFunction::phi0()] {
            for n in [1u64, 2, 5, 13, 100] {
                let p = SumProfile::build(&phi, alpha, n).unwrap();
                let s = profile_stats(&phi, alpha, n).unwrap();
                assert!((p.variance() - s.variance).abs() < 1e-12);
                assert!((p.sup_norm() - s.sup).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let err = SumProfile::build_with_budget(&StepFunction::psi_half(), golden_alpha(), 100, 50)
            .unwrap_err();
        assert!(matches!(err, Error::ResourceExceeded { .. }));
    }
}
