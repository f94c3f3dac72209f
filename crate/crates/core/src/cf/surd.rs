//! Quadratic surds: the exact continued-fraction algorithm and exact
//! arithmetic on elements `(a + b√D)/c` of `Q(√D)`.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cf::certified::CertifiedReal;
use crate::error::{Error, Result};

fn isqrt_big(n: &BigInt) -> BigInt {
    BigInt::from_biguint(Sign::Plus, n.magnitude().sqrt())
}

pub fn is_square(d: &BigInt) -> bool {
    if d.is_negative() {
        return false;
    }
    let s = isqrt_big(d);
    &s * &s == *d
}

/// One state `(P + √D)/Q` of the surd algorithm, with `Q | D - P²`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct State {
    p: BigInt,
    q: BigInt,
}

/// The expansion of `(P + √D)/Q` as produced by the surd algorithm:
/// quotients `a_1, a_2, …` (the integer part `a_0` is dropped), of which
/// those at positions `>= preperiod + 1` repeat with the given period.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurdExpansion {
    pub a0: BigInt,
    /// `a_1 … a_{preperiod}`.
    pub prefix: Vec<u64>,
    /// The repeating block, starting at `a_{preperiod+1}`.
    pub period: Vec<u64>,
}

impl SurdExpansion {
    pub fn preperiod(&self) -> usize {
        self.prefix.len()
    }

    /// Partial quotient `a_n` for `n >= 1`.
    pub fn quotient(&self, n: usize) -> u64 {
        assert!(n >= 1);
        if n <= self.prefix.len() {
            self.prefix[n - 1]
        } else {
            self.period[(n - 1 - self.prefix.len()) % self.period.len()]
        }
    }
}

/// Validates `(P + √D)/Q` and rewrites it so that `Q | D - P²`.
fn normalize(p: i64, q: i64, d: i64) -> Result<(BigInt, BigInt, BigInt)> {
    if q == 0 {
        return Err(Error::InvalidSpec("Q must be nonzero".into()));
    }
    if d <= 0 {
        return Err(Error::InvalidSpec("D must be positive".into()));
    }
    let (p, q, d) = (BigInt::from(p), BigInt::from(q), BigInt::from(d));
    if is_square(&d) {
        return Err(Error::InvalidSpec("D must be non-square".into()));
    }
    if ((&d - &p * &p) % &q).is_zero() {
        return Ok((p, q, d));
    }
    let aq = q.abs();
    Ok((&p * &aq, &q * &aq, &d * &aq * &aq))
}

fn floor_state(s: &State, sd: &BigInt) -> BigInt {
    if s.q.is_positive() {
        (&s.p + sd).div_floor(&s.q)
    } else {
        (-&s.p - sd - BigInt::one()).div_floor(&(-&s.q))
    }
}

/// Runs the surd algorithm on `(P + √D)/Q` until a state repeats.
pub fn expand_surd(p: i64, q: i64, d: i64) -> Result<SurdExpansion> {
    let (p, q, d) = normalize(p, q, d)?;
    let sd = isqrt_big(&d);
    let mut state = State { p, q };
    let a0 = floor_state(&state, &sd);
    let mut quotients: Vec<u64> = Vec::new();
    let mut seen: HashMap<State, usize> = HashMap::new();
    let mut a = a0.clone();
    loop {
        let p_next = &a * &state.q - &state.p;
        let q_next = (&d - &p_next * &p_next) / &state.q;
        state = State {
            p: p_next,
            q: q_next,
        };
        let index = quotients.len() + 1;
        if let Some(&first) = seen.get(&state) {
            let prefix = quotients[..first - 1].to_vec();
            let period = quotients[first - 1..].to_vec();
            return Ok(SurdExpansion { a0, prefix, period });
        }
        seen.insert(state.clone(), index);
        a = floor_state(&state, &sd);
        let small: u64 = a
            .clone()
            .try_into()
            .map_err(|_| Error::InvalidSpec("partial quotient does not fit in 64 bits".into()))?;
        quotients.push(small);
    }
}

/// An exact element `(a + b√d)/c` of `Q(√d)` with `c > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurdNumber {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl SurdNumber {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> SurdNumber {
        assert!(!c.is_zero(), "zero denominator");
        if c.is_negative() {
            SurdNumber {
                a: -a,
                b: -b,
                c: -c,
                d,
            }
        } else {
            SurdNumber { a, b, c, d }
        }
    }

    pub fn from_parts(p: i64, q: i64, d: i64) -> SurdNumber {
        SurdNumber::new(
            BigInt::from(p),
            BigInt::one(),
            BigInt::from(q),
            BigInt::from(d),
        )
    }

    /// `⌊x⌋`, exact.
    pub fn floor(&self) -> BigInt {
        let s = isqrt_big(&(&self.b * &self.b * &self.d));
        let exact_root = &s * &s == &self.b * &self.b * &self.d;
        let num = match self.b.sign() {
            Sign::NoSign => self.a.clone(),
            Sign::Plus => &self.a + &s,
            Sign::Minus if exact_root => &self.a - &s,
            Sign::Minus => &self.a - &s - BigInt::one(),
        };
        num.div_floor(&self.c)
    }

    pub fn mul_int(&self, k: &BigInt) -> SurdNumber {
        SurdNumber::new(&self.a * k, &self.b * k, self.c.clone(), self.d.clone())
    }

    pub fn add_int(&self, k: &BigInt) -> SurdNumber {
        SurdNumber::new(
            &self.a + k * &self.c,
            self.b.clone(),
            self.c.clone(),
            self.d.clone(),
        )
    }

    pub fn neg(&self) -> SurdNumber {
        SurdNumber::new(-&self.a, -&self.b, self.c.clone(), self.d.clone())
    }

    /// `‖x‖`, exact.
    pub fn dist_to_nearest_int(&self) -> SurdNumber {
        let twice = SurdNumber::new(&self.a * 2, &self.b * 2, self.c.clone(), self.d.clone());
        let f2 = twice.floor();
        let f = self.floor();
        if f2.is_even() {
            self.add_int(&-f)
        } else {
            self.add_int(&-(f + BigInt::one())).neg()
        }
    }

    /// Exact comparison with the rational `num/den`, `den > 0`.
    pub fn cmp_rational(&self, num: &BigInt, den: &BigInt) -> Ordering {
        // compare (a + b√d) den  with  num c
        let lhs_rational = &self.a * den - num * &self.c;
        let rad = &self.b * den;
        // sign of lhs_rational + rad √d
        let s1 = lhs_rational.sign();
        let s2 = rad.sign();
        let sq = |x: &BigInt| x * x;
        match (s1, s2) {
            (Sign::NoSign, Sign::NoSign) => Ordering::Equal,
            (_, Sign::NoSign) => s1_to_ord(s1),
            (Sign::NoSign, _) => s1_to_ord(s2),
            (x, y) if x == y => s1_to_ord(x),
            _ => {
                let left = sq(&lhs_rational);
                let right = sq(&rad) * &self.d;
                match left.cmp(&right) {
                    Ordering::Greater => s1_to_ord(s1),
                    Ordering::Less => s1_to_ord(s2),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    /// Fixed-point value with `bits` fractional bits and a radius of a few ulps.
    pub fn to_certified(&self, bits: u32) -> CertifiedReal {
        let scale = BigInt::one() << (2 * bits);
        let root = isqrt_big(&(&self.b * &self.b * &self.d * &scale));
        let signed_root = if self.b.is_negative() { -root } else { root };
        let num = (&self.a << bits) + signed_root;
        let mant = num.div_floor(&self.c);
        CertifiedReal::new(mant, BigUint::from(2u32), bits)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_certified(80).to_f64()
    }
}

fn s1_to_ord(s: Sign) -> Ordering {
    match s {
        Sign::Plus => Ordering::Greater,
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
    }
}
