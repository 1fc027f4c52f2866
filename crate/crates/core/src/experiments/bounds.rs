//! Analytic upper bounds on word-map probabilities and the girth
//! guarantees they imply through a union bound over words.

use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::groups::is_prime;

/// `(2ℓ/n)^{n/(2ℓ)}`, a bound on `P(w = 1)` in `Sym(n)` for words of length `ℓ`.
pub fn sn_word_prob_bound(n: u64, len: u64) -> Result<f64, ExperimentError> {
    if len == 0 || 2 * len >= n {
        return Err(ExperimentError::Domain(format!("need 1 <= l and 2l < n, got n={n}, l={len}")));
    }
    let x = 2.0 * len as f64 / n as f64;
    Ok(x.powf(1.0 / x))
}

/// `(1/n)^{n/l}`, a lower bound on `P(σ^l = 1)` in `Sym(n)`.
pub fn sn_power_prob_lower_bound(n: u64, l: u64) -> Result<f64, ExperimentError> {
    if n == 0 || l == 0 {
        return Err(ExperimentError::Domain(format!("need n, l >= 1, got n={n}, l={l}")));
    }
    Ok((1.0 / n as f64).powf(n as f64 / l as f64))
}

/// Leading term `ℓ/p` of the `PGL_2(F_p)` bound; the `O(p⁻²)` correction has
/// no explicit constant and is left out.
pub fn pgl_word_prob_bound(p: u64, len: u64) -> Result<f64, ExperimentError> {
    if !is_prime(p) {
        return Err(ExperimentError::Domain(format!("{p} is not a prime")));
    }
    if len == 0 {
        return Err(ExperimentError::Domain("word length must be at least 1".into()));
    }
    Ok(len as f64 / p as f64)
}

/// Number of nonempty reduced words of length at most `len` in a
/// `d`-regular Cayley graph (`d = 2k`).
pub fn word_count_up_to(d: u64, len: u64) -> f64 {
    let mut total = 0.0;
    let mut layer = d as f64;
    for _ in 0..len {
        total += layer;
        layer *= (d - 1) as f64;
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundKind {
    /// `⌊log_{d-1} p − 2 log_{d-1} log_{d-1} p⌋`.
    PglClosedForm { p: u64 },
    /// Largest `ℓ` with `#words(≤ ℓ) · ℓ/p < 1`.
    PglUnion { p: u64 },
    /// Largest `ℓ < n/2` with `#words(≤ ℓ) · (2ℓ/n)^{n/(2ℓ)} < 1`.
    Symmetric { n: u64 },
}

/// Length below which a random `d`-regular Cayley graph has no relation
/// with probability bounded away from zero.
pub fn union_bound_threshold(d: u64, kind: BoundKind) -> Result<u64, ExperimentError> {
    if d < 3 {
        return Err(ExperimentError::Domain(format!("degree must be at least 3, got {d}")));
    }
    let base = (d - 1) as f64;
    match kind {
        BoundKind::PglClosedForm { p } => {
            if !is_prime(p) {
                return Err(ExperimentError::Domain(format!("{p} is not a prime")));
            }
            let lp = (p as f64).ln() / base.ln();
            if lp <= 1.0 {
                return Ok(0);
            }
            let l = lp - 2.0 * lp.ln() / base.ln();
            Ok(if l > 0.0 { l.floor() as u64 } else { 0 })
        }
        BoundKind::PglUnion { p } => {
            largest_below_one(|l| Some(word_count_up_to(d, l) * pgl_word_prob_bound(p, l).ok()?))
        }
        BoundKind::Symmetric { n } => {
            largest_below_one(|l| Some(word_count_up_to(d, l) * sn_word_prob_bound(n, l).ok()?))
        }
    }
}

/// Both union sums increase with `ℓ`, so the scan stops at the first failure.
fn largest_below_one(sum: impl Fn(u64) -> Option<f64>) -> Result<u64, ExperimentError> {
    let mut best = 0;
    let mut l = 1;
    while let Some(s) = sum(l) {
        if s >= 1.0 {
            break;
        }
        best = l;
        l += 1;
    }
    Ok(best)
}
