//! Counting `n` with `n q_j α` close to an integer.

use std::cmp::Ordering;

use num_bigint::BigUint;

use crate::cf::ConvergentTable;
use crate::error::{Error, Result};
use crate::phase::Phase;

/// `#{n ∈ [n1, n2) : ‖n q_j α‖ < δ}`.
///
/// Each norm comes from the 128-bit phase of `α` with a certified error of
/// `2 n q_j` ulps; near the threshold the comparison is redone with the
/// certified big-number value of `‖n q_j α‖`.
pub fn count_near_multiples(
    table: &ConvergentTable,
    j: usize,
    delta: f64,
    n1: u128,
    n2: u128,
) -> Result<u128> {
    if !(delta > 0.0 && delta <= 0.5) {
        return Err(Error::InvalidInput(format!(
            "delta = {delta} not in (0, 1/2]"
        )));
    }
    if n1 >= n2 {
        return Err(Error::InvalidInput(format!("empty interval [{n1}, {n2})")));
    }
    let q = table.try_q_u128(j)?;
    let beta = table.alpha_phase().mul_int(q);
    let threshold = Phase::from_f64(delta);
    let exact_threshold = delta < 0.5 && threshold.to_f64() == delta;
    let mut count = 0u128;
    let mut point = beta.mul_int(n1);
    for n in n1..n2 {
        let d = point.dist_to_int().0;
        let radius = n.saturating_mul(q).saturating_mul(2).saturating_add(2);
        let gap = d.abs_diff(threshold.0);
        let below = if exact_threshold && gap > radius {
            d < threshold.0
        } else if delta == 0.5 {
            true
        } else {
            let k = BigUint::from(n) * BigUint::from(q);
            table.norm_multiple(&k)?.cmp_threshold(delta)? == Ordering::Less
        };
        if below {
            count += 1;
        }
        point = point + beta;
    }
    Ok(count)
}

/// `20 (δ + 1/q_{j+1}) L`.
pub fn counting_bound(delta: f64, q_next: u128, len: u128) -> f64 {
    20.0 * (delta + 1.0 / q_next as f64) * len as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::IrrationalSpec;

    #[test]
    fn half_counts_everything() {
        let t = ConvergentTable::new(&IrrationalSpec::golden(), 20).unwrap();
        assert_eq!(count_near_multiples(&t, 3, 0.5, 0, 100).unwrap(), 100);
    }

    #[test]
    fn agrees_with_float_counts() {
        let t = ConvergentTable::new(&IrrationalSpec::golden(), 20).unwrap();
        let alpha = (5f64.sqrt() - 1.0) / 2.0;
        let c = count_near_multiples(&t, 4, 0.1, 0, 100).unwrap();
        let want = (0..100u32)
            .filter(|&n| {
                let x = n as f64 * 5.0 * alpha;
                (x - x.round()).abs() < 0.1
            })
            .count() as u128;
        assert_eq!(c, want);
        assert!((c as f64) <= counting_bound(0.1, t.q_u128(5), 100));
    }

    #[test]
    fn rejects_bad_delta() {
        let t = ConvergentTable::new(&IrrationalSpec::golden(), 20).unwrap();
        assert!(count_near_multiples(&t, 3, 0.0, 0, 10).is_err());
        assert!(count_near_multiples(&t, 3, 0.6, 0, 10).is_err());
    }
}
