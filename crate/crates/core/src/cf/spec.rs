//! Descriptions of the rotation number α and the preset names that map to them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Roots;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::cf::surd::{expand_surd, is_square, SurdExpansion, SurdNumber};
use crate::error::{Error, Result};

/// Exact description of `α = [0; a_1, a_2, …]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IrrationalSpec {
    /// `(P + √D)/Q`, which must lie in `(0, 1)`.
    QuadraticSurd { p: i64, q: i64, d: i64 },
    /// `a_n` given by a named rule.
    QuotientRule(QuotientRule),
    /// Finite prefix followed by a nonempty repeating tail.
    Literal { prefix: Vec<u64>, tail: Vec<u64> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuotientRule {
    /// `a_n = ⌊n^γ⌋` when `n` is a power of two, `1` otherwise, with
    /// `γ = num/den`.
    SparseGrowth { num: u32, den: u32 },
    /// `a_n = n`, the expansion of an `e`-like number with unbounded quotients.
    Linear,
}

impl QuotientRule {
    pub fn quotient(&self, n: usize) -> u64 {
        assert!(n >= 1);
        match *self {
            QuotientRule::SparseGrowth { num, den } => {
                if !n.is_power_of_two() {
                    return 1;
                }
                floor_rational_power(n as u64, num, den).max(1)
            }
            QuotientRule::Linear => n as u64,
        }
    }
}

/// A spec paired with its surd expansion when one exists.
#[derive(Clone, Debug)]
pub struct QuotientSource {
    spec: IrrationalSpec,
    surd: Option<SurdExpansion>,
}

impl QuotientSource {
    pub fn new(spec: &IrrationalSpec) -> Result<QuotientSource> {
        spec.validate()?;
        let surd = match *spec {
            IrrationalSpec::QuadraticSurd { p, q, d } => Some(expand_surd(p, q, d)?),
            _ => None,
        };
        Ok(QuotientSource {
            spec: spec.clone(),
            surd,
        })
    }

    pub fn spec(&self) -> &IrrationalSpec {
        &self.spec
    }

    pub fn surd_expansion(&self) -> Option<&SurdExpansion> {
        self.surd.as_ref()
    }

    /// `a_n` for `n >= 1`.
    pub fn quotient(&self, n: usize) -> u64 {
        if let Some(e) = &self.surd {
            return e.quotient(n);
        }
        match &self.spec {
            IrrationalSpec::QuotientRule(rule) => rule.quotient(n),
            IrrationalSpec::Literal { prefix, tail } => {
                if n <= prefix.len() {
                    prefix[n - 1]
                } else {
                    tail[(n - 1 - prefix.len()) % tail.len()]
                }
            }
            IrrationalSpec::QuadraticSurd { .. } => unreachable!("surd expansion is precomputed"),
        }
    }
}

impl IrrationalSpec {
    pub fn golden() -> IrrationalSpec {
        IrrationalSpec::QuadraticSurd { p: -1, q: 2, d: 5 }
    }

    /// `√D - ⌊√D⌋`.
    pub fn sqrt_frac(d: i64) -> Result<IrrationalSpec> {
        if d <= 1 {
            return Err(Error::InvalidSpec("D must be at least 2".into()));
        }
        if is_square(&d.into()) {
            return Err(Error::InvalidSpec("D must be non-square".into()));
        }
        let root = (d as u64).sqrt() as i64;
        Ok(IrrationalSpec::QuadraticSurd { p: -root, q: 1, d })
    }

    pub fn counterexample(num: u32, den: u32) -> Result<IrrationalSpec> {
        if den == 0 || num == 0 {
            return Err(Error::InvalidSpec(
                "gamma must be a positive rational".into(),
            ));
        }
        Ok(IrrationalSpec::QuotientRule(QuotientRule::SparseGrowth {
            num,
            den,
        }))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            IrrationalSpec::QuadraticSurd { p, q, d } => {
                if *q == 0 {
                    return Err(Error::InvalidSpec("Q must be nonzero".into()));
                }
                if *d <= 0 || is_square(&(*d).into()) {
                    return Err(Error::InvalidSpec("D must be non-square".into()));
                }
                let x = SurdNumber::from_parts(*p, *q, *d);
                let zero = 0.into();
                let one = 1.into();
                if x.cmp_rational(&zero, &one).is_le() || x.cmp_rational(&one, &one).is_ge() {
                    return Err(Error::InvalidSpec(format!(
                        "surd ({p} + sqrt({d}))/{q} is not in (0, 1)"
                    )));
                }
                Ok(())
            }
            IrrationalSpec::QuotientRule(QuotientRule::SparseGrowth { num, den }) => {
                if *num == 0 || *den == 0 {
                    return Err(Error::InvalidSpec(
                        "gamma must be a positive rational".into(),
                    ));
                }
                Ok(())
            }
            IrrationalSpec::QuotientRule(QuotientRule::Linear) => Ok(()),
            IrrationalSpec::Literal { prefix, tail } => {
                if tail.is_empty() {
                    return Err(Error::InvalidSpec("literal tail must be nonempty".into()));
                }
                if prefix.iter().chain(tail).any(|&a| a == 0) {
                    return Err(Error::InvalidSpec("partial quotients must be >= 1".into()));
                }
                Ok(())
            }
        }
    }

    /// Exact value for the surd variant. Periodic literals are also quadratic,
    /// but their closed form is not reconstructed.
    pub fn surd_value(&self) -> Option<SurdNumber> {
        match *self {
            IrrationalSpec::QuadraticSurd { p, q, d } => Some(SurdNumber::from_parts(p, q, d)),
            _ => None,
        }
    }
}

fn parse_rational(s: &str) -> Result<(u32, u32)> {
    let bad = || Error::InvalidSpec(format!("cannot parse rational '{s}'"));
    if let Some((a, b)) = s.split_once('/') {
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim().parse().map_err(|_| bad())?;
        if b == 0 {
            return Err(bad());
        }
        return Ok((a, b));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let digits = frac.trim();
        if digits.len() > 6 || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let den = 10u32.pow(digits.len() as u32);
        let int: u32 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let frac: u32 = if digits.is_empty() {
            0
        } else {
            digits.parse().map_err(|_| bad())?
        };
        let num = int
            .checked_mul(den)
            .and_then(|v| v.checked_add(frac))
            .ok_or_else(bad)?;
        let g = num_integer::gcd(num, den);
        return Ok((num / g, den / g));
    }
    Ok((s.trim().parse().map_err(|_| bad())?, 1))
}

fn parse_list(s: &str) -> Result<Vec<u64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::InvalidSpec(format!("bad partial quotient '{t}'")))
        })
        .collect()
}

impl FromStr for IrrationalSpec {
    type Err = Error;

    /// Accepts `golden`, `sqrt<D>`, `counterexample:γ=<rational>`,
    /// `surd:P:Q:D` and `literal:<prefix>;<tail>` (comma-separated lists).
    fn from_str(s: &str) -> Result<IrrationalSpec> {
        let s = s.trim();
        if s == "golden" {
            return Ok(IrrationalSpec::golden());
        }
        if s == "linear" {
            return Ok(IrrationalSpec::QuotientRule(QuotientRule::Linear));
        }
        if let Some(d) = s.strip_prefix("sqrt") {
            let d: i64 = d
                .parse()
                .map_err(|_| Error::InvalidSpec(format!("bad radicand in '{s}'")))?;
            return IrrationalSpec::sqrt_frac(d);
        }
        if let Some(rest) = s.strip_prefix("counterexample:") {
            let value = rest
                .strip_prefix("γ=")
                .or_else(|| rest.strip_prefix("gamma="))
                .ok_or_else(|| {
                    Error::InvalidSpec("expected counterexample:gamma=<rational>".into())
                })?;
            let (num, den) = parse_rational(value)?;
            return IrrationalSpec::counterexample(num, den);
        }
        if let Some(rest) = s.strip_prefix("surd:") {
            let parts: Vec<&str> = rest.split(':').collect();
            if parts.len() != 3 {
                return Err(Error::InvalidSpec("expected surd:P:Q:D".into()));
            }
            let nums: Vec<i64> = parts
                .iter()
                .map(|t| t.trim().parse::<i64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::InvalidSpec(format!("bad integer in '{s}'")))?;
            let spec = IrrationalSpec::QuadraticSurd {
                p: nums[0],
                q: nums[1],
                d: nums[2],
            };
            spec.validate()?;
            return Ok(spec);
        }
        if let Some(rest) = s.strip_prefix("literal:") {
            let (prefix, tail) = rest.split_once(';').unwrap_or(("", rest));
            let spec = IrrationalSpec::Literal {
                prefix: parse_list(prefix)?,
                tail: parse_list(tail)?,
            };
            spec.validate()?;
            return Ok(spec);
        }
        Err(Error::InvalidSpec(format!("unknown alpha '{s}'")))
    }
}

impl fmt::Display for IrrationalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrrationalSpec::QuadraticSurd { p: -1, q: 2, d: 5 } => write!(f, "golden"),
            IrrationalSpec::QuadraticSurd { p, q: 1, d } if (*d as u64).sqrt() as i64 == -p => {
                write!(f, "sqrt{d}")
            }
            IrrationalSpec::QuadraticSurd { p, q, d } => write!(f, "surd:{p}:{q}:{d}"),
            IrrationalSpec::QuotientRule(QuotientRule::SparseGrowth { num, den }) => {
                if *den == 1 {
                    write!(f, "counterexample:gamma={num}")
                } else {
                    write!(f, "counterexample:gamma={num}/{den}")
                }
            }
            IrrationalSpec::QuotientRule(QuotientRule::Linear) => write!(f, "linear"),
            IrrationalSpec::Literal { prefix, tail } => {
                let join = |v: &[u64]| {
                    v.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                };
                write!(f, "literal:{};{}", join(prefix), join(tail))
            }
        }
    }
}

/// `⌊n^{num/den}⌋ = ⌊(n^num)^{1/den}⌋`, exact in integers.
pub fn floor_rational_power(n: u64, num: u32, den: u32) -> u64 {
    BigUint::from(n)
        .pow(num)
        .nth_root(den)
        .to_u64()
        .unwrap_or(u64::MAX)
}
