//! Laws of `φ_n(x)/‖φ_n‖₂` under uniform `x` and their Kolmogorov distance
//! to the standard normal.
//!
//! A step function's sum takes finitely many values, so its law is a list of
//! atoms. Sums with a slope (such as those of `{x} - 1/2`) are uniform on
//! each piece, which contributes a uniform segment instead.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::piecewise::{KahanSum, PiecewiseLinear};

/// Standard normal CDF. libm's `erfc` is accurate to about one ulp, far
/// below the `1e-12` needed here.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// Mass `weight` spread uniformly over `[lo, hi]`, `lo < hi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
    pub weight: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AtomDistribution {
    /// `(value, weight)`, sorted by value, values distinct.
    atoms: Vec<(f64, f64)>,
    segments: Vec<Segment>,
}

impl AtomDistribution {
    /// Sorts the atoms and merges equal values; weights must be positive.
    pub fn from_atoms(atoms: Vec<(f64, f64)>) -> Result<AtomDistribution> {
        AtomDistribution::new(atoms, Vec::new())
    }

    pub fn new(mut atoms: Vec<(f64, f64)>, segments: Vec<Segment>) -> Result<AtomDistribution> {
        if atoms.iter().any(|&(v, w)| !(w > 0.0) || !v.is_finite())
            || segments.iter().any(|s| {
                !(s.weight > 0.0) || !(s.lo < s.hi) || !s.hi.is_finite() || !s.lo.is_finite()
            })
        {
            return Err(Error::InvalidInput(
                "atoms need finite values and positive weights".into(),
            ));
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
        for (v, w) in atoms {
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 += w,
                _ => merged.push((v, w)),
            }
        }
        let mut segments = segments;
        segments.sort_by(|a, b| a.lo.total_cmp(&b.lo).then(a.hi.total_cmp(&b.hi)));
        Ok(AtomDistribution {
            atoms: merged,
            segments,
        })
    }

    /// Law of `f(x) / scale` for uniform `x`, one atom or segment per piece.
    pub fn from_piecewise(f: &PiecewiseLinear, scale: f64) -> Result<AtomDistribution> {
        let mut atoms = Vec::new();
        let mut segments = Vec::new();
        let slope = f.slope();
        for (v, len) in f.pieces() {
            let a = v / scale;
            if slope == 0.0 {
                atoms.push((a, len));
            } else {
                let b = (v + slope * len) / scale;
                if a == b {
                    atoms.push((a, len));
                } else {
                    segments.push(Segment {
                        lo: a.min(b),
                        hi: a.max(b),
                        weight: len,
                    });
                }
            }
        }
        AtomDistribution::new(atoms, segments)
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn total_weight(&self) -> f64 {
        let mut s = KahanSum::new();
        self.atoms.iter().for_each(|a| s.add(a.1));
        self.segments.iter().for_each(|g| s.add(g.weight));
        s.value()
    }

    pub fn mean(&self) -> f64 {
        let mut s = KahanSum::new();
        self.atoms.iter().for_each(|&(v, w)| s.add(v * w));
        self.segments
            .iter()
            .for_each(|g| s.add(g.weight * 0.5 * (g.lo + g.hi)));
        s.value()
    }

    pub fn second_moment(&self) -> f64 {
        let mut s = KahanSum::new();
        self.atoms.iter().for_each(|&(v, w)| s.add(v * v * w));
        self.segments
            .iter()
            .for_each(|g| s.add(g.weight * (g.lo * g.lo + g.lo * g.hi + g.hi * g.hi) / 3.0));
        s.value()
    }

    /// `max |value|` over the support.
    pub fn support_radius(&self) -> f64 {
        let a = self.atoms.iter().map(|a| a.0.abs()).fold(0.0, f64::max);
        let s = self
            .segments
            .iter()
            .map(|g| g.lo.abs().max(g.hi.abs()))
            .fold(0.0, f64::max);
        a.max(s)
    }

    /// `F(x) = P(X ≤ x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        let k = self.atoms.partition_point(|a| a.0 <= x);
        let mut s = KahanSum::new();
        self.atoms[..k].iter().for_each(|a| s.add(a.1));
        for g in &self.segments {
            if x >= g.hi {
                s.add(g.weight);
            } else if x > g.lo {
                s.add(g.weight * (x - g.lo) / (g.hi - g.lo));
            }
        }
        s.value()
    }

    /// `sup_x |F(x) - Φ(x)|`, exact up to rounding: both one-sided limits
    /// are checked at every atom and segment end, and between them, where
    /// `F` is linear with slope `d`, at the points where `Φ' = d`.
    pub fn kolmogorov_to_normal(&self) -> f64 {
        // (x, atom mass, density change)
        let mut events: Vec<(f64, f64, f64)> =
            self.atoms.iter().map(|&(v, w)| (v, w, 0.0)).collect();
        for g in &self.segments {
            let d = g.weight / (g.hi - g.lo);
            events.push((g.lo, 0.0, d));
            events.push((g.hi, 0.0, -d));
        }
        events.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut best: f64 = 0.0;
        let mut f = KahanSum::new();
        let mut density = KahanSum::new();
        let mut i = 0;
        while i < events.len() {
            let x = events[i].0;
            let phi = normal_cdf(x);
            best = best.max((f.value() - phi).abs());
            while i < events.len() && events[i].0 == x {
                f.add(events[i].1);
                density.add(events[i].2);
                i += 1;
            }
            best = best.max((f.value() - phi).abs());
            let d = density.value();
            if i < events.len() && d > 1e-300 {
                let next = events[i].0;
                let base = f.value();
                // stationary points of F - Φ: normal_pdf(t) = d
                let c = d * (2.0 * PI).sqrt();
                if c < 1.0 {
                    let t = (-2.0 * c.ln()).sqrt();
                    for cand in [-t, t] {
                        if cand > x && cand < next {
                            let fc = base + d * (cand - x);
                            best = best.max((fc - normal_cdf(cand)).abs());
                        }
                    }
                }
                f.add(d * (next - x));
            }
        }
        best.min(1.0)
    }

    /// Brute-force `max |F - Φ|` over a uniform grid, used as a cross-check.
    pub fn kolmogorov_on_grid(&self, lo: f64, hi: f64, points: usize) -> f64 {
        (0..points)
            .map(|i| {
                let x = lo + (hi - lo) * i as f64 / (points - 1) as f64;
                (self.cdf(x) - normal_cdf(x)).abs()
            })
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    #[test]
    fn point_mass_at_zero() {
        let d = AtomDistribution::from_atoms(vec![(0.0, 1.0)]).unwrap();
        assert!((d.kolmogorov_to_normal() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn two_atoms() {
        let d = AtomDistribution::from_atoms(vec![(1.0, 0.5), (-1.0, 0.5)]).unwrap();
        // mpmath: ncdf(1) - 1/2
        assert!((d.kolmogorov_to_normal() - 0.3413447460685429485852).abs() < 1e-14);
    }

    #[test]
    fn uniform_segment() {
        // uniform on [-√3, √3] has unit variance; sup |F - Φ| is attained
        // where φ(t) = 1/(2√3)
        let r = 3f64.sqrt();
        let d = AtomDistribution::new(
            vec![],
            vec![Segment {
                lo: -r,
                hi: r,
                weight: 1.0,
            }],
        )
        .unwrap();
        assert!((d.second_moment() - 1.0).abs() < 1e-15);
        let grid = d.kolmogorov_on_grid(-4.0, 4.0, 800_001);
        assert!((d.kolmogorov_to_normal() - grid).abs() < 1e-9);
    }

    #[test]
    fn merges_equal_values() {
        let d = AtomDistribution::from_atoms(vec![(1.0, 0.25), (1.0, 0.25), (0.0, 0.5)]).unwrap();
        assert_eq!(d.atoms(), &[(0.0, 0.5), (1.0, 0.5)]);
        assert!(AtomDistribution::from_atoms(vec![(0.0, -1.0)]).is_err());
    }

    #[test]
    fn normal_cdf_reference_values() {
        // mpmath.ncdf at 50 digits
        let cases = [
            (0.0, 0.5),
            (1.0, 0.8413447460685429485852325456320),
            (-2.5, 0.006209665325776135166978104574192),
            (3.7, 0.9998922002665226117385186644506),
            (-8.0, 6.220960574271784123515995172588e-16),
        ];
        for (x, want) in cases {
            assert!((normal_cdf(x) - want).abs() < 1e-15, "x={x}");
        }
    }
}
