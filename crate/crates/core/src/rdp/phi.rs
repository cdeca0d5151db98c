//! The sequence `phi(n, k)` that gives the type of `A(n, k)`.

use crate::arith::EuclidProfile;
use crate::error::{domain, Error, Result};

use super::TypeSequence;

/// `phi(n, k)` for `1 <= k <= n`.
///
/// Evaluated by its defining recursion and cross-checked against the
/// closed form built from the Euclidean profile of `(n - k + 1, k)`.
pub fn phi(n: u64, k: u64) -> Result<TypeSequence> {
    let recursive = phi_recursive(n, k)?;
    let closed = phi_closed_form(n, k)?;
    if recursive != closed {
        return Err(Error::Inconsistent(format!(
            "phi({n},{k}): recursion gives {recursive}, Euclidean form gives {closed}"
        )));
    }
    Ok(recursive)
}

fn check_range(n: u64, k: u64) -> Result<()> {
    if k == 0 || k > n {
        return Err(domain(format!("phi needs 1 <= k <= n, got n={n}, k={k}")));
    }
    Ok(())
}

/// Reflect `k` into `1 <= k <= (n + 1) / 2`.
pub(crate) fn canonical_k(n: u64, k: u64) -> u64 {
    if 2 * k > n + 1 {
        n - k + 1
    } else {
        k
    }
}

pub(crate) fn phi_recursive(n: u64, k: u64) -> Result<TypeSequence> {
    check_range(n, k)?;
    let (mut n, mut k) = (n, canonical_k(n, k));
    let mut out = Vec::new();
    loop {
        if 2 * k == n + 1 {
            out.push(k);
            break;
        }
        // 2k < n + 1 here, so n - k >= k
        out.push(k);
        n -= k;
        k = canonical_k(n, k);
    }
    TypeSequence::new(out)
}

/// `(r_0^[d_1], r_1^[d_2], ..., r_t^[d_{t+1}])` where `r_i, d_i` come from
/// dividing `n - k + 1` by `k` and `t` is the last index with `r_t != 0`.
pub(crate) fn phi_closed_form(n: u64, k: u64) -> Result<TypeSequence> {
    check_range(n, k)?;
    let k = canonical_k(n, k);
    let profile = EuclidProfile::new(n - k + 1, k)?;
    let mut out = Vec::new();
    for i in 0..=profile.t_last_nonzero() {
        let r = profile.rem(i);
        out.extend(std::iter::repeat_n(r, profile.div(i + 1) as usize));
    }
    TypeSequence::new(out)
}
