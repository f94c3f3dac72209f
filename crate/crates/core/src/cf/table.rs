//! Convergents `p_n/q_n`, signed errors `θ_n = q_n α - p_n`, and certified
//! values of `‖kα‖`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::cf::certified::CertifiedReal;
use crate::cf::spec::{IrrationalSpec, QuotientSource};
use crate::cf::surd::SurdNumber;
use crate::error::{Error, Result};
use crate::phase::Phase;

/// Working precision used when the caller does not ask for one:
/// `128 + 16·ℓ` bits for a table reaching index `ℓ`.
pub fn default_bits(max_index: usize) -> u32 {
    128 + 16 * max_index as u32
}

/// Precision of the α value behind [`ConvergentTable::alpha_phase`]; the
/// 128-bit phase is a truncation of it.
const PHASE_BITS: u32 = 192;

#[derive(Clone, Debug)]
pub struct ConvergentTable {
    source: QuotientSource,
    bits: u32,
    /// `a[0] = a_0 = 0`, `a[n] = a_n`.
    a: Vec<u64>,
    p: Vec<BigUint>,
    q: Vec<BigUint>,
    q_small: Vec<u128>,
    theta: Vec<CertifiedReal>,
    alpha: CertifiedReal,
    alpha_phase: Phase,
    surd: Option<SurdNumber>,
}

/// `α` to `bits` fractional bits from a convergent `p/q` whose successor
/// denominator is `q_next`: `|α - p/q| < 1/(q q_next)`.
fn alpha_from_convergent(p: &BigUint, q: &BigUint, q_next: &BigUint, bits: u32) -> CertifiedReal {
    let num = BigInt::from(p.clone()) << bits;
    let den = BigInt::from(q.clone());
    let (mant, _) = num.div_mod_floor(&den);
    let err = ((BigUint::one() << bits) / (q * q_next)) + 2u32;
    CertifiedReal::new(mant, err, bits)
}

impl ConvergentTable {
    /// Table with indices `0..count` at [`default_bits`] precision.
    pub fn new(spec: &IrrationalSpec, count: usize) -> Result<ConvergentTable> {
        ConvergentTable::with_bits(spec, count, default_bits(count))
    }

    pub fn with_bits(spec: &IrrationalSpec, count: usize, bits: u32) -> Result<ConvergentTable> {
        if count == 0 {
            return Err(Error::InvalidInput("count must be at least 1".into()));
        }
        let source = QuotientSource::new(spec)?;
        let alpha_bits = bits.max(PHASE_BITS);

        // Extend the quotient list until the convergents pin α to
        // alpha_bits, and at least to `count` entries.
        let mut a = vec![0u64];
        let mut p = vec![BigUint::zero()];
        let mut q = vec![BigUint::one()];
        let (mut p_prev, mut q_prev) = (BigUint::one(), BigUint::zero());
        let target = BigUint::one() << (alpha_bits + 4);
        loop {
            let n = a.len();
            let an = source.quotient(n);
            let pn = BigUint::from(an) * &p[n - 1] + &p_prev;
            let qn = BigUint::from(an) * &q[n - 1] + &q_prev;
            p_prev = p[n - 1].clone();
            q_prev = q[n - 1].clone();
            a.push(an);
            p.push(pn);
            q.push(qn);
            let last = q.len() - 1;
            if q.len() > count + 1 && &q[last - 1] * &q[last] > target {
                break;
            }
        }
        let last = q.len() - 1;
        let alpha_hi = alpha_from_convergent(&p[last - 1], &q[last - 1], &q[last], alpha_bits);
        let alpha_phase = alpha_hi.to_phase();
        let shift = alpha_bits - bits;
        let alpha = CertifiedReal::new(
            alpha_hi.mantissa() >> shift,
            (alpha_hi.radius_ulps() >> shift) + 1u32,
            bits,
        );

        a.truncate(count + 1);
        p.truncate(count);
        q.truncate(count);
        let q_small = q.iter().map(|x| x.to_u128().unwrap_or(u128::MAX)).collect();

        let mut theta = Vec::with_capacity(count);
        let mut prev = CertifiedReal::from_integer(-1, bits);
        theta.push(alpha.clone());
        for n in 0..count - 1 {
            let next = theta[n].mul_int(&BigInt::from(a[n + 1])).add(&prev);
            prev = theta[n].clone();
            theta.push(next);
        }

        Ok(ConvergentTable {
            surd: spec.surd_value(),
            source,
            bits,
            a,
            p,
            q,
            q_small,
            theta,
            alpha,
            alpha_phase,
        })
    }

    /// Smallest table whose last denominator exceeds `n`, so that
    /// [`ConvergentTable::m_of_n`] is defined for every `1 <= k <= n`.
    pub fn covering(spec: &IrrationalSpec, n: u128, extra: usize) -> Result<ConvergentTable> {
        let source = QuotientSource::new(spec)?;
        let (mut q_prev, mut q) = (BigUint::zero(), BigUint::one());
        let mut len = 1;
        let bound = BigUint::from(n);
        while q <= bound {
            let next = BigUint::from(source.quotient(len)) * &q + &q_prev;
            q_prev = q;
            q = next;
            len += 1;
        }
        ConvergentTable::new(spec, len + extra)
    }

    pub fn spec(&self) -> &IrrationalSpec {
        self.source.spec()
    }

    pub fn source(&self) -> &QuotientSource {
        &self.source
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Number of indices `n` with `q_n` stored.
    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    /// `a_n` for `n >= 1` (any `n`, read from the rule), `a_0 = 0`.
    pub fn a(&self, n: usize) -> u64 {
        if n < self.a.len() {
            self.a[n]
        } else {
            self.source.quotient(n)
        }
    }

    /// `a_1 … a_count`.
    pub fn partial_quotients(&self, count: usize) -> Vec<u64> {
        (1..=count).map(|n| self.a(n)).collect()
    }

    pub fn p(&self, n: usize) -> &BigUint {
        &self.p[n]
    }

    pub fn q(&self, n: usize) -> &BigUint {
        &self.q[n]
    }

    pub fn qs(&self) -> &[BigUint] {
        &self.q
    }

    /// `q_n` saturated to `u128`.
    pub fn q_u128(&self, n: usize) -> u128 {
        self.q_small[n]
    }

    pub fn try_q_u128(&self, n: usize) -> Result<u128> {
        if n >= self.q.len() {
            return Err(Error::TableTooShort {
                needed: n,
                available: self.q.len(),
            });
        }
        self.q[n].to_u128().ok_or(Error::ResourceExceeded {
            what: "denominator width",
            needed: self.q[n].bits() as u128,
            budget: 128,
        })
    }

    pub fn theta(&self, n: usize) -> &CertifiedReal {
        &self.theta[n]
    }

    pub fn alpha(&self) -> &CertifiedReal {
        &self.alpha
    }

    pub fn alpha_f64(&self) -> f64 {
        self.alpha.to_f64()
    }

    /// α truncated to 128 fractional bits; off by less than `2^-127`.
    pub fn alpha_phase(&self) -> Phase {
        self.alpha_phase
    }

    pub fn surd_value(&self) -> Option<&SurdNumber> {
        self.surd.as_ref()
    }

    /// Certified `‖kα‖`. Fails when the radius is not below `2^-(bits/2)`.
    pub fn norm_multiple(&self, k: &BigUint) -> Result<CertifiedReal> {
        let x = self
            .alpha
            .mul_int(&BigInt::from(k.clone()))
            .dist_to_nearest_int();
        x.require_radius_below(self.bits / 2)?;
        Ok(x)
    }

    /// Exact `‖kα‖` for surd specs.
    pub fn norm_multiple_exact(&self, k: &BigInt) -> Option<SurdNumber> {
        self.surd
            .as_ref()
            .map(|s| s.mul_int(k).dist_to_nearest_int())
    }

    /// `‖kα‖` from the 128-bit phase, with error below `k·2^-127`.
    pub fn norm_fast(&self, k: u128) -> f64 {
        self.alpha_phase.mul_int(k).norm()
    }

    /// Largest `ℓ` with `q_ℓ <= n`.
    pub fn m_of_n(&self, n: u128) -> Result<usize> {
        if n == 0 {
            return Err(Error::InvalidInput("m(n) requires n >= 1".into()));
        }
        // q is nondecreasing; find the first index with q > n.
        let idx = self.q_small.partition_point(|&q| q <= n);
        if idx == self.q_small.len() {
            return Err(Error::TableTooShort {
                needed: idx,
                available: self.q_small.len(),
            });
        }
        Ok(idx - 1)
    }
}
