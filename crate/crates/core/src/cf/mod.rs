//! Continued-fraction engine: partial quotients, convergents, signed errors
//! and certified distances `‖kα‖`.

mod certified;
mod spec;
mod surd;
mod table;

pub use certified::CertifiedReal;
pub use spec::{floor_rational_power, IrrationalSpec, QuotientRule, QuotientSource};
pub use surd::{expand_surd, SurdExpansion, SurdNumber};
pub use table::{default_bits, ConvergentTable};

use num_bigint::BigUint;

use crate::error::Result;

pub fn partial_quotients(spec: &IrrationalSpec, count: usize) -> Result<Vec<u64>> {
    let source = QuotientSource::new(spec)?;
    Ok((1..=count).map(|n| source.quotient(n)).collect())
}

pub fn convergents(spec: &IrrationalSpec, count: usize) -> Result<ConvergentTable> {
    ConvergentTable::new(spec, count)
}

pub fn dist_to_nearest_int(x: &CertifiedReal) -> CertifiedReal {
    x.dist_to_nearest_int()
}

/// Certified `‖kα‖` using a table just long enough to bound `k`.
pub fn norm_multiple(spec: &IrrationalSpec, k: &BigUint) -> Result<CertifiedReal> {
    let table = ConvergentTable::with_bits(spec, 2, 128 + 2 * k.bits() as u32)?;
    table.norm_multiple(k)
}

pub fn m_of_n(spec: &IrrationalSpec, n: u128) -> Result<usize> {
    ConvergentTable::covering(spec, n, 0)?.m_of_n(n)
}
