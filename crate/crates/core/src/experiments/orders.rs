//! Orders of random elements of `W_n(2)`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::groups::{Group, TreeGroup};

/// Largest height sampled.
pub const MAX_ORDER_HEIGHT: u32 = 24;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderStats {
    pub n: u32,
    pub trials: usize,
    /// `counts[j]` elements had order `2^j`.
    pub counts: Vec<usize>,
    /// Mean of `log2(order) / n`.
    pub alpha_hat: f64,
    /// Standard error of `alpha_hat`.
    pub std_error: f64,
}

/// Samples uniform elements of `W_n` and records `log2(order)`. Element
/// orders in `W_n` are powers of two at most `2^n`.
pub fn wn_order_experiment<R: Rng + ?Sized>(n: u32, trials: usize, rng: &mut R) -> Result<OrderStats, ExperimentError> {
    if n == 0 || n > MAX_ORDER_HEIGHT {
        return Err(ExperimentError::Domain(format!("height must be in 1..={MAX_ORDER_HEIGHT}, got {n}")));
    }
    if trials == 0 {
        return Err(ExperimentError::Config("trials must be at least 1".into()));
    }
    let group = TreeGroup::new(n)?;
    let mut counts = vec![0usize; n as usize + 1];
    for _ in 0..trials {
        let order = group.order(&group.sample(rng))?;
        assert!(order.is_power_of_two() && order <= 1 << n, "order {order} in W_{n}");
        counts[order.trailing_zeros() as usize] += 1;
    }
    let ratios = counts.iter().enumerate().flat_map(|(j, &c)| std::iter::repeat_n(j as f64 / n as f64, c));
    let t = trials as f64;
    let (sum, sum_sq) = ratios.fold((0.0, 0.0), |(s, q), r| (s + r, q + r * r));
    let alpha_hat = sum / t;
    let variance = if trials > 1 { ((sum_sq - t * alpha_hat * alpha_hat) / (t - 1.0)).max(0.0) } else { 0.0 };
    Ok(OrderStats { n, trials, counts, alpha_hat, std_error: (variance / t).sqrt() })
}
