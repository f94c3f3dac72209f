//! Centered step functions on the circle, `{x} - 1/2`, and the named presets.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::Phase;
use crate::piecewise::{KahanSum, PiecewiseLinear};

/// A function `Σ_j v_j 1_{[u_j, u_{j+1})} + slope·x - c` on `[0, 1)`,
/// with `u_0 = 0` and `c` chosen so that the integral vanishes.
///
/// Genuine step functions have `slope = 0`; the sawtooth `{x} - 1/2` is the
/// only preset with a slope.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction {
    name: String,
    breakpoints: Vec<Phase>,
    values: Vec<f64>,
    slope: f64,
    centering: f64,
}

impl StepFunction {
    /// `breakpoints` must start at 0 and increase strictly.
    pub fn from_pieces(
        name: impl Into<String>,
        breakpoints: Vec<Phase>,
        values: Vec<f64>,
        slope: f64,
    ) -> Result<StepFunction> {
        if breakpoints.is_empty() || breakpoints[0] != Phase::ZERO {
            return Err(Error::InvalidInput("first breakpoint must be 0".into()));
        }
        if breakpoints.len() != values.len() {
            return Err(Error::InvalidInput("one value per breakpoint".into()));
        }
        if !breakpoints.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput("breakpoints must increase".into()));
        }
        if values.iter().any(|v| !v.is_finite()) || !slope.is_finite() {
            return Err(Error::InvalidInput("values must be finite".into()));
        }
        let raw = PiecewiseLinear::new(breakpoints.clone(), values.clone(), slope);
        let centering = raw.integral();
        Ok(StepFunction {
            name: name.into(),
            breakpoints,
            values,
            slope,
            centering,
        })
    }

    /// `Σ w·1_{[start, start+len)}` taken on the circle, then centered.
    /// Coincident endpoints merge.
    pub fn from_arcs(
        name: impl Into<String>,
        arcs: &[(Phase, Phase, f64)],
    ) -> Result<StepFunction> {
        let mut points: Vec<Phase> = vec![Phase::ZERO];
        for &(start, len, _) in arcs {
            points.push(start);
            points.push(start + len);
        }
        points.sort_unstable();
        points.dedup();
        let values = points
            .iter()
            .map(|&x| {
                arcs.iter()
                    .filter(|&&(start, len, _)| len == Phase::ZERO || start.forward_to(x) < len)
                    .map(|&(_, len, w)| if len == Phase::ZERO { 0.0 } else { w })
                    .sum()
            })
            .collect();
        StepFunction::from_pieces(name, points, values, 0.0)
    }

    pub fn zero() -> StepFunction {
        StepFunction::from_pieces("zero", vec![Phase::ZERO], vec![0.0], 0.0).unwrap()
    }

    /// `{x} - 1/2`.
    pub fn phi0() -> StepFunction {
        StepFunction::from_pieces("phi0", vec![Phase::ZERO], vec![0.0], 1.0).unwrap()
    }

    /// `1_{[0,1/2)} - 1_{[1/2,1)}`.
    pub fn psi_half() -> StepFunction {
        StepFunction::from_pieces(
            "psi_half",
            vec![Phase::ZERO, Phase::HALF],
            vec![1.0, -1.0],
            0.0,
        )
        .unwrap()
    }

    /// `1_{[0,u)} - u`.
    pub fn indicator(name: impl Into<String>, u: Phase) -> Result<StepFunction> {
        if u == Phase::ZERO {
            return Err(Error::InvalidInput("u must lie in (0, 1)".into()));
        }
        StepFunction::from_pieces(name, vec![Phase::ZERO, u], vec![1.0, 0.0], 0.0)
    }

    /// `1_{[0,u)} - 1_{[w,u+w)}` on the circle.
    pub fn two_arcs(name: impl Into<String>, u: Phase, w: Phase) -> Result<StepFunction> {
        StepFunction::from_arcs(name, &[(Phase::ZERO, u, 1.0), (w, u, -1.0)])
    }

    /// The billiard pair `(1_{[0,α/2)} - 1_{[1/2,1/2+α/2)}, 1_{[0,1/2-α/2)} - 1_{[1/2,1-α/2)})`.
    pub fn billiard(alpha: Phase) -> Result<(StepFunction, StepFunction)> {
        let half_alpha = Phase(alpha.0 >> 1);
        let first = StepFunction::from_arcs(
            "billiard1",
            &[
                (Phase::ZERO, half_alpha, 1.0),
                (Phase::HALF, half_alpha, -1.0),
            ],
        )?;
        let rest = Phase::HALF - half_alpha;
        let second = StepFunction::from_arcs(
            "billiard2",
            &[(Phase::ZERO, rest, 1.0), (Phase::HALF, rest, -1.0)],
        )?;
        Ok((first, second))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn breakpoints(&self) -> &[Phase] {
        &self.breakpoints
    }

    /// Raw values `v_j` before centering.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn slope(&self) -> f64 {
        self.slope
    }

    pub fn centering(&self) -> f64 {
        self.centering
    }

    /// Number of interior breakpoints `s`.
    pub fn interior_breakpoints(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn is_step(&self) -> bool {
        self.slope == 0.0
    }

    /// The centered function as a circle function.
    pub fn to_piecewise(&self) -> PiecewiseLinear {
        PiecewiseLinear::new(
            self.breakpoints.clone(),
            self.values.iter().map(|v| v - self.centering).collect(),
            self.slope,
        )
    }

    pub fn evaluate_phase(&self, x: Phase) -> f64 {
        let j = self.breakpoints.partition_point(|&b| b <= x) - 1;
        self.values[j] - self.centering + self.slope * self.breakpoints[j].forward_to(x).to_f64()
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        self.evaluate_phase(Phase::from_f64(x))
    }

    /// Circle jumps `(u, φ(u+) - φ(u-))`, including the wrap-around at 0.
    pub fn jumps(&self) -> Vec<(Phase, f64)> {
        self.to_piecewise().jumps()
    }

    /// `γ_r = r c_r = (1/2πi) Σ J e^{-2πi r u}` over the circle jumps `(u, J)`.
    pub fn gamma(&self, r: i128) -> Complex64 {
        assert!(r != 0, "gamma is defined for r != 0");
        let mut re = KahanSum::new();
        let mut im = KahanSum::new();
        for (u, jump) in self.jumps() {
            let t = 2.0 * PI * u.mul_i128(r).to_f64();
            re.add(jump * t.cos());
            im.add(-jump * t.sin());
        }
        Complex64::new(re.value(), im.value()) / Complex64::new(0.0, 2.0 * PI)
    }

    /// Fourier coefficient `c_r = ∫ φ(x) e^{-2πirx} dx`.
    pub fn fourier(&self, r: i128) -> Complex64 {
        self.gamma(r) / r as f64
    }

    /// `H_φ(t_1, …, t_s) = [Σ v_j cos π(t_j+t_{j+1}) sin π(t_{j+1}-t_j)]²
    ///  + [Σ v_j sin π(t_j+t_{j+1}) sin π(t_{j+1}-t_j)]²` with `t_0 = t_{s+1} = 0`.
    pub fn h(&self, t: &[f64]) -> Result<f64> {
        if !self.is_step() {
            return Err(Error::InvalidInput(format!(
                "{} is not piecewise constant; H is defined for step functions",
                self.name
            )));
        }
        if t.len() != self.interior_breakpoints() {
            return Err(Error::InvalidInput(format!(
                "H of {} takes {} coordinates, got {}",
                self.name,
                self.interior_breakpoints(),
                t.len()
            )));
        }
        let mut pts = Vec::with_capacity(t.len() + 2);
        pts.push(0.0);
        pts.extend_from_slice(t);
        pts.push(0.0);
        let mut c = KahanSum::new();
        let mut s = KahanSum::new();
        for (j, v) in self.values.iter().enumerate() {
            let (a, b) = (pts[j], pts[j + 1]);
            let w = (PI * (b - a)).sin();
            c.add(v * (PI * (a + b)).cos() * w);
            s.add(v * (PI * (a + b)).sin() * w);
        }
        Ok(c.value().powi(2) + s.value().powi(2))
    }

    /// `H_φ(r u_1, …, r u_s)` with the products reduced modulo 1 exactly.
    pub fn h_at_multiple(&self, r: i64) -> Result<f64> {
        let t: Vec<f64> = self.breakpoints[1..]
            .iter()
            .map(|u| u.mul_i128(r as i128).to_f64())
            .collect();
        self.h(&t)
    }

    /// Variation of the restriction to `[0, 1)`: the wrap-around jump at 0 is
    /// not counted.
    pub fn variation(&self) -> f64 {
        let interior: f64 = self
            .jumps()
            .iter()
            .filter(|(u, _)| *u != Phase::ZERO)
            .map(|(_, j)| j.abs())
            .sum();
        interior + self.slope.abs()
    }

    /// Variation over the whole circle, wrap-around jump included.
    pub fn circle_variation(&self) -> f64 {
        self.jumps().iter().map(|(_, j)| j.abs()).sum::<f64>() + self.slope.abs()
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.to_piecewise().l2_norm_sq()
    }

    pub fn mean(&self) -> f64 {
        self.to_piecewise().integral()
    }

    pub fn k_bound(&self) -> KBound {
        self.k_bound_with(10_000)
    }

    /// `sup_r |γ_r|`: a certified bound `Σ|J|/(2π)` from the jump formula and
    /// the empirical maximum over `0 < |r| <= r_max`.
    pub fn k_bound_with(&self, r_max: i64) -> KBound {
        let certified = self.jumps().iter().map(|(_, j)| j.abs()).sum::<f64>() / (2.0 * PI);
        let empirical = (1..=r_max)
            .map(|r| self.gamma(r as i128).norm())
            .fold(0.0, f64::max);
        KBound {
            certified,
            empirical,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KBound {
    pub certified: f64,
    pub empirical: f64,
}

/// Parses `p/q`, a decimal such as `0.25`, or an integer into an exact phase
/// in `[0, 1)` together with its float value.
pub fn parse_unit(s: &str) -> Result<Phase> {
    let bad = || Error::InvalidInput(format!("cannot parse '{s}' as a number in [0, 1)"));
    let s = s.trim();
    let (num, den): (i128, u128) = if let Some((a, b)) = s.split_once('/') {
        (
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
        )
    } else if let Some((int, frac)) = s.split_once('.') {
        if frac.len() > 30 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let den = 10u128.pow(frac.len() as u32);
        let int: i128 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let frac: i128 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| bad())?
        };
        (int * den as i128 + frac, den)
    } else {
        (s.parse().map_err(|_| bad())?, 1)
    };
    if den == 0 || num < 0 || num as u128 >= den {
        return Err(bad());
    }
    Ok(Phase::from_ratio(num, den))
}

/// A named step-function preset; `billiard` depends on α and is resolved by
/// [`PhiSpec::build`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhiSpec {
    Zero,
    Phi0,
    PsiHalf,
    Ex1 { u: String },
    Ex2 { u: String, w: String },
    Ex3 { r: u64, s: u64 },
    Billiard,
    BilliardComponent(u8),
    Custom { u: Vec<String>, v: Vec<String> },
}

impl PhiSpec {
    /// The function(s) named by the preset: two for `billiard`, one otherwise.
    pub fn build(&self, alpha: Phase) -> Result<Vec<StepFunction>> {
        let name = self.to_string();
        let one = |f: StepFunction| Ok(vec![f]);
        match self {
            PhiSpec::Zero => one(StepFunction::zero()),
            PhiSpec::Phi0 => one(StepFunction::phi0()),
            PhiSpec::PsiHalf => one(StepFunction::psi_half()),
            PhiSpec::Ex1 { u } => one(StepFunction::indicator(name, parse_unit(u)?)?),
            PhiSpec::Ex2 { u, w } => one(StepFunction::two_arcs(
                name,
                parse_unit(u)?,
                parse_unit(w)?,
            )?),
            PhiSpec::Ex3 { r, s } => {
                if *r == 0 || r >= s {
                    return Err(Error::InvalidInput("ex3 needs 0 < r < s".into()));
                }
                one(StepFunction::indicator(
                    name,
                    Phase::from_ratio(*r as i128, *s as u128),
                )?)
            }
            PhiSpec::Billiard => {
                let (a, b) = StepFunction::billiard(alpha)?;
                Ok(vec![a, b])
            }
            PhiSpec::BilliardComponent(i) => {
                let (a, b) = StepFunction::billiard(alpha)?;
                one(if *i == 1 { a } else { b })
            }
            PhiSpec::Custom { u, v } => {
                let bps = u
                    .iter()
                    .map(|s| parse_unit(s))
                    .collect::<Result<Vec<_>>>()?;
                let vals = v
                    .iter()
                    .map(|s| {
                        s.trim()
                            .parse::<f64>()
                            .map_err(|_| Error::InvalidInput(format!("bad value '{s}'")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                one(StepFunction::from_pieces(name, bps, vals, 0.0)?)
            }
        }
    }

    /// The single function named by the preset; `billiard` is rejected.
    pub fn build_one(&self, alpha: Phase) -> Result<StepFunction> {
        let mut fs = self.build(alpha)?;
        if fs.len() != 1 {
            return Err(Error::InvalidInput(
                "this command takes a scalar function; use billiard1 or billiard2".into(),
            ));
        }
        Ok(fs.remove(0))
    }
}

fn key_values(s: &str) -> Vec<(&str, &str)> {
    s.split(',')
        .filter_map(|kv| kv.split_once('='))
        .map(|(k, v)| (k.trim(), v.trim()))
        .collect()
}

impl FromStr for PhiSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<PhiSpec> {
        let s = s.trim();
        let bad = |msg: &str| Error::InvalidInput(format!("bad phi '{s}': {msg}"));
        match s {
            "zero" => return Ok(PhiSpec::Zero),
            "phi0" => return Ok(PhiSpec::Phi0),
            "psi_half" | "psi" => return Ok(PhiSpec::PsiHalf),
            "billiard" => return Ok(PhiSpec::Billiard),
            "billiard1" => return Ok(PhiSpec::BilliardComponent(1)),
            "billiard2" => return Ok(PhiSpec::BilliardComponent(2)),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("ex1:") {
            let kv = key_values(rest);
            let u = kv
                .iter()
                .find(|(k, _)| *k == "u")
                .ok_or_else(|| bad("missing u"))?
                .1;
            parse_unit(u)?;
            return Ok(PhiSpec::Ex1 { u: u.to_string() });
        }
        if let Some(rest) = s.strip_prefix("ex2:") {
            let kv = key_values(rest);
            let get = |name: &str| {
                kv.iter()
                    .find(|(k, _)| *k == name)
                    .map(|(_, v)| v.to_string())
                    .ok_or_else(|| bad(&format!("missing {name}")))
            };
            let (u, w) = (get("u")?, get("w")?);
            parse_unit(&u)?;
            parse_unit(&w)?;
            return Ok(PhiSpec::Ex2 { u, w });
        }
        if let Some(rest) = s.strip_prefix("ex3:") {
            let (r, q) = rest
                .split_once('/')
                .ok_or_else(|| bad("expected ex3:r/s"))?;
            let r: u64 = r.trim().parse().map_err(|_| bad("r"))?;
            let q: u64 = q.trim().parse().map_err(|_| bad("s"))?;
            if r == 0 || r >= q {
                return Err(bad("need 0 < r < s"));
            }
            return Ok(PhiSpec::Ex3 { r, s: q });
        }
        if let Some(rest) = s.strip_prefix("step:") {
            // step:u=0,1/4,1/2;v=1,0,-1
            let mut u = None;
            let mut v = None;
            for part in rest.split(';') {
                if let Some(list) = part.trim().strip_prefix("u=") {
                    u = Some(list.split(',').map(|x| x.trim().to_string()).collect());
                } else if let Some(list) = part.trim().strip_prefix("v=") {
                    v = Some(list.split(',').map(|x| x.trim().to_string()).collect());
                }
            }
            return Ok(PhiSpec::Custom {
                u: u.ok_or_else(|| bad("missing u list"))?,
                v: v.ok_or_else(|| bad("missing v list"))?,
            });
        }
        Err(bad("unknown preset"))
    }
}

impl fmt::Display for PhiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhiSpec::Zero => write!(f, "zero"),
            PhiSpec::Phi0 => write!(f, "phi0"),
            PhiSpec::PsiHalf => write!(f, "psi_half"),
            PhiSpec::Ex1 { u } => write!(f, "ex1:u={u}"),
            PhiSpec::Ex2 { u, w } => write!(f, "ex2:u={u},w={w}"),
            PhiSpec::Ex3 { r, s } => write!(f, "ex3:{r}/{s}"),
            PhiSpec::Billiard => write!(f, "billiard"),
            PhiSpec::BilliardComponent(i) => write!(f, "billiard{i}"),
            PhiSpec::Custom { u, v } => write!(f, "step:u={};v={}", u.join(","), v.join(",")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex2() -> StepFunction {
        "ex2:u=1/3,w=1/5"
            .parse::<PhiSpec>()
            .unwrap()
            .build_one(Phase::ZERO)
            .unwrap()
    }

    #[test]
    fn evaluation() {
        assert_eq!(StepFunction::psi_half().evaluate(0.25), 1.0);
        assert!((StepFunction::phi0().evaluate(0.25) + 0.25).abs() < 1e-16);
        assert_eq!(ex2().evaluate(0.4), -1.0);
        assert_eq!(ex2().evaluate(0.1), 1.0);
        assert_eq!(ex2().evaluate(0.9), 0.0);
    }

    #[test]
    fn gamma_of_presets() {
        let g = StepFunction::phi0().gamma(7);
        assert!((g - Complex64::new(0.0, 1.0 / (2.0 * PI))).norm() < 1e-15);
        let psi = StepFunction::psi_half();
        assert!(psi.gamma(4).norm() < 1e-15);
        assert!((psi.gamma(3).norm() - 2.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn h_examples() {
        let ex1 = StepFunction::indicator("ex1", Phase::from_ratio(1, 2)).unwrap();
        assert!((ex1.h(&[0.5]).unwrap() - 1.0).abs() < 1e-15);
        let (u, w) = (1.0 / 3.0, 1.0 / 5.0);
        let f = ex2();
        let want = 4.0 * (PI * u).sin().powi(2) * (PI * w).sin().powi(2);
        assert!((f.h_at_multiple(1).unwrap() - want).abs() < 1e-14);
        let zeros = vec![0.0; f.interior_breakpoints()];
        assert_eq!(f.h(&zeros).unwrap(), 0.0);
        assert!(StepFunction::phi0().h(&[]).is_err());
    }

    #[test]
    fn variations() {
        assert_eq!(StepFunction::psi_half().variation(), 2.0);
        assert_eq!(StepFunction::phi0().variation(), 1.0);
        assert_eq!(ex2().variation(), 3.0);
        assert_eq!(ex2().circle_variation(), 4.0);
    }

    #[test]
    fn k_bounds() {
        let k = StepFunction::phi0().k_bound_with(100);
        assert!((k.certified - 1.0 / (2.0 * PI)).abs() < 1e-16);
        assert!((k.empirical - 1.0 / (2.0 * PI)).abs() < 1e-15);
        let k = StepFunction::psi_half().k_bound_with(100);
        assert!((k.certified - 2.0 / PI).abs() < 1e-15);
        let k = StepFunction::zero().k_bound_with(10);
        assert_eq!((k.certified, k.empirical), (0.0, 0.0));
    }

    #[test]
    fn centering_and_norms() {
        assert!((StepFunction::phi0().l2_norm_sq() - 1.0 / 12.0).abs() < 1e-16);
        assert_eq!(StepFunction::psi_half().l2_norm_sq(), 1.0);
        assert!(ex2().mean().abs() < 1e-15);
    }

    #[test]
    fn preset_names_round_trip() {
        for s in [
            "phi0",
            "psi_half",
            "ex1:u=0.3",
            "ex2:u=1/3,w=1/5",
            "ex3:2/7",
            "billiard",
        ] {
            assert_eq!(s.parse::<PhiSpec>().unwrap().to_string(), s);
        }
    }
}
