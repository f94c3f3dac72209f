//! Ostrowski block decomposition `φ_n = Σ_k f_k` with
//! `f_k(x) = φ_{b_k q_k}(x + n_{k-1} α)` and `n_{k-1} = Σ_{t<k} b_t q_t`.

use std::sync::Arc;

use super::{ErgodicSums, SumProfile};
use crate::error::Result;
use crate::ostrowski::{self, OstrowskiDigits};
use crate::phase::Phase;

#[derive(Clone, Debug)]
pub struct Block {
    pub k: usize,
    pub digit: u64,
    pub q: u128,
    /// `n_{k-1}`, the number of terms in the lower blocks.
    pub offset: u128,
}

pub struct BlockDecomposition {
    n: u64,
    digits: OstrowskiDigits,
    blocks: Vec<Block>,
    alpha: Phase,
    /// `φ_{q_k}` for each block with a nonzero digit.
    base: Vec<Option<Arc<SumProfile>>>,
    /// `φ_{b_k q_k}`, whose sup norm is that of `f_k`.
    whole: Vec<Option<Arc<SumProfile>>>,
}

impl BlockDecomposition {
    pub(super) fn new(sums: &ErgodicSums, n: u64) -> Result<BlockDecomposition> {
        let table = sums.table();
        let digits = ostrowski::expand(table, n as u128)?;
        let mut blocks = Vec::with_capacity(digits.digits.len());
        let mut base = Vec::new();
        let mut whole = Vec::new();
        let mut offset = 0u128;
        for (k, &b) in digits.digits.iter().enumerate() {
            let q = table.try_q_u128(k)?;
            blocks.push(Block {
                k,
                digit: b,
                q,
                offset,
            });
            if b > 0 {
                base.push(Some(sums.profile(q as u64)?));
                whole.push(Some(sums.profile(b * q as u64)?));
            } else {
                base.push(None);
                whole.push(None);
            }
            offset += b as u128 * q;
        }
        Ok(BlockDecomposition {
            n,
            digits,
            blocks,
            alpha: sums.alpha(),
            base,
            whole,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn digits(&self) -> &OstrowskiDigits {
        &self.digits
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Blocks with a nonzero digit.
    pub fn active(&self) -> impl Iterator<Item = &Block> {
        self.blocks.iter().filter(|b| b.digit > 0)
    }

    /// `f_k(x)` as `Σ_{i<b_k} φ_{q_k}(x + (n_{k-1} + i q_k) α)`.
    pub fn eval_block(&self, k: usize, x: Phase) -> f64 {
        let block = &self.blocks[k];
        let Some(base) = &self.base[k] else {
            return 0.0;
        };
        (0..block.digit as u128)
            .map(|i| base.eval_phase(x + self.alpha.mul_int(block.offset + i * block.q)))
            .sum()
    }

    pub fn eval(&self, x: Phase) -> f64 {
        (0..self.blocks.len()).map(|k| self.eval_block(k, x)).sum()
    }

    /// `‖f_k‖_∞`, exact from the profile of `φ_{b_k q_k}`.
    pub fn block_sup(&self, k: usize) -> f64 {
        self.whole[k].as_ref().map_or(0.0, |p| p.sup_norm())
    }
}
