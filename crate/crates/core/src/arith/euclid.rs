//! Iterated remainders and quotients of the Euclidean algorithm.
//!
//! For `1 <= k <= N` the profile records `r_0 = k, r_1, ..., r_T = 0` where
//! `r_i = r_{i-2} mod r_{i-1}` (with the hidden seed `r_{-1} = N`) and the
//! quotients `d_i = floor(r_{i-2} / r_{i-1})`. Reading `rem(i)` or `div(i)`
//! past the end of the sequence yields zero.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EuclidProfile {
    modulus: u64,
    divisor: u64,
    remainders: Vec<u64>,
    quotients: Vec<u64>,
    t_last_nonzero: usize,
    t_first_zero: usize,
}

impl EuclidProfile {
    /// Profile of dividing `modulus` by `divisor`. Requires `1 <= divisor <= modulus`.
    pub fn new(modulus: u64, divisor: u64) -> Result<Self> {
        if divisor == 0 || divisor > modulus {
            return Err(domain(format!(
                "euclid profile needs 1 <= k <= N, got N={modulus}, k={divisor}"
            )));
        }
        let mut remainders = vec![divisor];
        let mut quotients = Vec::new();
        let (mut prev, mut cur) = (modulus, divisor);
        while cur != 0 {
            quotients.push(prev / cur);
            let next = prev % cur;
            remainders.push(next);
            prev = cur;
            cur = next;
        }
        let t_first_zero = remainders.len() - 1;
        Ok(EuclidProfile {
            modulus,
            divisor,
            remainders,
            quotients,
            t_last_nonzero: t_first_zero - 1,
            t_first_zero,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn divisor(&self) -> u64 {
        self.divisor
    }

    /// `r_0, ..., r_T` with `r_T = 0`.
    pub fn remainders(&self) -> &[u64] {
        &self.remainders
    }

    /// `d_1, ..., d_T`.
    pub fn quotients(&self) -> &[u64] {
        &self.quotients
    }

    /// Largest index with a nonzero remainder.
    pub fn t_last_nonzero(&self) -> usize {
        self.t_last_nonzero
    }

    /// Smallest positive index with a zero remainder.
    pub fn t_first_zero(&self) -> usize {
        self.t_first_zero
    }

    /// `rem_i(N, k)`; zero beyond the end of the sequence.
    pub fn rem(&self, i: usize) -> u64 {
        self.remainders.get(i).copied().unwrap_or(0)
    }

    /// `div_i(N, k)` for `i >= 1`; zero beyond the end of the sequence.
    pub fn div(&self, i: usize) -> u64 {
        assert!(i >= 1, "iterated quotients are indexed from 1");
        self.quotients.get(i - 1).copied().unwrap_or(0)
    }

    /// `d_1 + ... + d_i`.
    pub fn quotient_prefix_sum(&self, i: usize) -> u64 {
        self.quotients.iter().take(i).sum()
    }
}
