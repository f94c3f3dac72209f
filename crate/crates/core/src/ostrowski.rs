//! Ostrowski numeration: `n = Σ b_k q_k` with the carry rule
//! `b_k = a_{k+1} ⇒ b_{k-1} = 0`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cf::ConvergentTable;
use crate::error::{Error, Result};

/// Digits `b_0 … b_m`, least significant first. Zero is the empty word.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OstrowskiDigits {
    pub digits: Vec<u64>,
}

impl OstrowskiDigits {
    pub fn new(digits: Vec<u64>) -> OstrowskiDigits {
        OstrowskiDigits { digits }
    }

    /// Index of the top digit, `None` for the empty word.
    pub fn top(&self) -> Option<usize> {
        self.digits.len().checked_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn digit(&self, k: usize) -> u64 {
        self.digits.get(k).copied().unwrap_or(0)
    }

    /// Sum of digits, `Σ b_k`.
    pub fn digit_sum(&self) -> u128 {
        self.digits.iter().map(|&b| b as u128).sum()
    }
}

impl fmt::Display for OstrowskiDigits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.digits.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Largest allowed value of `b_k`.
fn digit_max(table: &ConvergentTable, k: usize) -> u64 {
    if k == 0 {
        table.a(1) - 1
    } else {
        table.a(k + 1)
    }
}

/// Greedy expansion of `n`.
pub fn expand(table: &ConvergentTable, n: u128) -> Result<OstrowskiDigits> {
    if n == 0 {
        return Ok(OstrowskiDigits::default());
    }
    let m = table.m_of_n(n)?;
    let mut digits = vec![0u64; m + 1];
    let mut r = n;
    for k in (0..=m).rev() {
        let q = table.q_u128(k);
        digits[k] = (r / q) as u64;
        r %= q;
    }
    debug_assert_eq!(r, 0);
    Ok(OstrowskiDigits { digits })
}

fn check_bounds(table: &ConvergentTable, digits: &OstrowskiDigits) -> Result<()> {
    if let Some(&last) = digits.digits.last() {
        if last == 0 {
            return Err(Error::InvalidDigits("top digit must be nonzero".into()));
        }
    }
    if digits.digits.len() > table.len() {
        return Err(Error::TableTooShort {
            needed: digits.digits.len(),
            available: table.len(),
        });
    }
    for (k, &b) in digits.digits.iter().enumerate() {
        let max = digit_max(table, k);
        if b > max {
            return Err(Error::InvalidDigits(format!("b_{k} = {b} exceeds {max}")));
        }
    }
    Ok(())
}

/// `Σ b_k q_k`; rejects digits outside their ranges.
pub fn reconstruct(table: &ConvergentTable, digits: &OstrowskiDigits) -> Result<u128> {
    check_bounds(table, digits)?;
    let mut n: u128 = 0;
    for (k, &b) in digits.digits.iter().enumerate() {
        let term = table
            .try_q_u128(k)?
            .checked_mul(b as u128)
            .ok_or(Error::ResourceExceeded {
                what: "integer width",
                needed: 129,
                budget: 128,
            })?;
        n = n.checked_add(term).ok_or(Error::ResourceExceeded {
            what: "integer width",
            needed: 129,
            budget: 128,
        })?;
    }
    Ok(n)
}

/// True when the digits are in range and obey the carry rule.
pub fn is_admissible(table: &ConvergentTable, digits: &OstrowskiDigits) -> bool {
    if check_bounds(table, digits).is_err() {
        return false;
    }
    let d = &digits.digits;
    (1..d.len()).all(|k| d[k] != table.a(k + 1) || d[k - 1] == 0)
}

/// All admissible words using indices `0..=m`, in increasing order of the
/// integers they represent, starting with the empty word.
pub fn enumerate_admissible(table: &ConvergentTable, m: usize) -> AdmissibleWords<'_> {
    AdmissibleWords {
        table,
        digits: vec![0; m + 1],
        started: false,
        done: false,
    }
}

pub struct AdmissibleWords<'a> {
    table: &'a ConvergentTable,
    digits: Vec<u64>,
    started: bool,
    done: bool,
}

impl AdmissibleWords<'_> {
    /// Advances to the next admissible word in lexicographic order (top
    /// digit most significant): bump the lowest digit that can grow without
    /// breaking the carry rule against the digit above, then clear below it.
    fn advance(&mut self) -> bool {
        let m = self.digits.len() - 1;
        for k in 0..=m {
            let blocked_from_above = k < m && self.digits[k + 1] == self.table.a(k + 2);
            if self.digits[k] < digit_max(self.table, k) && !blocked_from_above {
                self.digits[k] += 1;
                self.digits[..k].iter_mut().for_each(|d| *d = 0);
                return true;
            }
        }
        false
    }
}

impl Iterator for AdmissibleWords<'_> {
    type Item = OstrowskiDigits;

    fn next(&mut self) -> Option<OstrowskiDigits> {
        if self.done {
            return None;
        }
        if self.started && !self.advance() {
            self.done = true;
            return None;
        }
        self.started = true;
        let len = self
            .digits
            .iter()
            .rposition(|&d| d != 0)
            .map_or(0, |i| i + 1);
        Some(OstrowskiDigits::new(self.digits[..len].to_vec()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::IrrationalSpec;

    fn golden() -> ConvergentTable {
        ConvergentTable::new(&IrrationalSpec::golden(), 20).unwrap()
    }

    #[test]
    fn expand_examples() {
        let t = golden();
        assert_eq!(expand(&t, 4).unwrap().digits, vec![0, 1, 0, 1]);
        assert_eq!(expand(&t, 8).unwrap().digits, vec![0, 0, 0, 0, 0, 1]);
        assert!(expand(&t, 0).unwrap().is_empty());
        let s = ConvergentTable::new(&"sqrt2".parse().unwrap(), 10).unwrap();
        assert_eq!(expand(&s, 7).unwrap().digits, vec![0, 1, 1]);
        assert_eq!(
            reconstruct(&s, &OstrowskiDigits::new(vec![0, 1, 1])).unwrap(),
            7
        );
    }

    #[test]
    fn admissibility_examples() {
        let t = golden();
        assert!(is_admissible(&t, &OstrowskiDigits::new(vec![0, 1, 0, 1])));
        assert!(!is_admissible(&t, &OstrowskiDigits::new(vec![0, 1, 1])));
        assert!(is_admissible(&t, &OstrowskiDigits::default()));
        assert!(reconstruct(&t, &OstrowskiDigits::new(vec![1])).is_err());
    }

    #[test]
    fn enumeration_is_increasing() {
        let t = golden();
        let words: Vec<_> = enumerate_admissible(&t, 4).collect();
        assert_eq!(words.len() as u128, t.q_u128(5));
        for (i, w) in words.iter().enumerate() {
            assert_eq!(reconstruct(&t, w).unwrap(), i as u128);
        }
    }

    #[test]
    fn enumeration_with_large_first_quotient() {
        // a_1 = 1 forces b_0 = 0, so index 0 alone gives only the empty word.
        let t = golden();
        assert_eq!(enumerate_admissible(&t, 0).count(), 1);
        let s = ConvergentTable::new(&"sqrt2".parse().unwrap(), 10).unwrap();
        assert_eq!(enumerate_admissible(&s, 0).count(), 2);
    }
}
