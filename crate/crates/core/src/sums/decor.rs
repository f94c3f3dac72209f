//! Correlation integrals `∫ ψ · Π φ_{b q} dμ`.

use crate::error::{Error, Result};
use crate::phase::Phase;
use crate::piecewise::product_integral;
use crate::stepfn::StepFunction;

use super::SumProfile;

/// One factor `φ_{b q}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Factor {
    pub b: u64,
    pub q: u64,
}

pub fn decorrelation_integral(
    psi: &StepFunction,
    phi: &StepFunction,
    alpha: Phase,
    factors: &[Factor],
) -> Result<f64> {
    if factors.is_empty() || factors.len() > 3 {
        return Err(Error::InvalidInput(format!(
            "{} factors given, expected 1 to 3",
            factors.len()
        )));
    }
    if factors.iter().any(|f| f.b == 0) {
        return Err(Error::InvalidInput("every factor needs b >= 1".into()));
    }
    let profiles = factors
        .iter()
        .map(|f| {
            let n = f.b.checked_mul(f.q).ok_or(Error::ResourceExceeded {
                what: "factor length",
                needed: f.b as u128 * f.q as u128,
                budget: u64::MAX as u128,
            })?;
            SumProfile::build(phi, alpha, n)
        })
        .collect::<Result<Vec<_>>>()?;
    let psi = psi.to_piecewise();
    let mut fs = vec![&psi];
    fs.extend(profiles.iter().map(|p| p.function()));
    Ok(product_integral(&fs))
}
