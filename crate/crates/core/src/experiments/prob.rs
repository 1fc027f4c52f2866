//! Word-map probabilities: Monte Carlo estimates and an exact counter for
//! power words in `Sym(n)`.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::groups::Group;
use crate::words::{evaluate, ReducedWord};

/// Two-sided 99% normal quantile.
pub const Z_99: f64 = 2.575_829_303_548_900_4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordProbEstimate {
    pub hits: u64,
    pub trials: u64,
    pub estimate: f64,
    /// Wilson 99% interval.
    pub lower: f64,
    pub upper: f64,
}

impl WordProbEstimate {
    /// Binomial standard error at probability `p`.
    pub fn sigma_at(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

pub fn wilson_interval(hits: u64, trials: u64, z: f64) -> (f64, f64) {
    let n = trials as f64;
    let phat = hits as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Fraction of uniformly random tuples at which `w` evaluates to the identity.
pub fn estimate_word_prob<G: Group, R: Rng + ?Sized>(
    group: &G,
    w: &ReducedWord,
    trials: u64,
    rng: &mut R,
) -> Result<WordProbEstimate, ExperimentError> {
    if trials == 0 {
        return Err(ExperimentError::Config("trials must be at least 1".into()));
    }
    let mut hits = 0;
    let mut tuple = Vec::with_capacity(w.arity());
    for _ in 0..trials {
        tuple.clear();
        tuple.extend((0..w.arity()).map(|_| group.sample(rng)));
        if group.is_identity(&evaluate(group, w, &tuple)?) {
            hits += 1;
        }
    }
    let (lower, upper) = wilson_interval(hits, trials, Z_99);
    Ok(WordProbEstimate { hits, trials, estimate: hits as f64 / trials as f64, lower, upper })
}

/// `#{σ ∈ Sym(n) : σ^l = 1} / n!`, from
/// `c(m) = Σ_{d | l, d ≤ m} (m-1)!/(m-d)! · c(m-d)` with `c(0) = 1`.
pub fn exact_power_word_prob_sn(n: usize, l: usize) -> Result<BigRational, ExperimentError> {
    if n == 0 || l == 0 {
        return Err(ExperimentError::Domain(format!("need n, l >= 1, got n={n}, l={l}")));
    }
    let divisors: Vec<usize> = (1..=l).filter(|d| l.is_multiple_of(*d)).collect();
    let mut c: Vec<BigUint> = vec![BigUint::one()];
    for m in 1..=n {
        let mut total = BigUint::zero();
        for &d in divisors.iter().take_while(|&&d| d <= m) {
            // (m-1)(m-2)…(m-d+1) ways to complete the cycle through point m
            let falling: BigUint = (m - d + 1..m).map(BigUint::from).product();
            total += falling * &c[m - d];
        }
        c.push(total);
    }
    let factorial: BigUint = (1..=n).map(BigUint::from).product();
    Ok(BigRational::new(c[n].clone().into(), factorial.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{Pgl2, Symmetric};
    use crate::words::{parse_word, power_word};
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn brute_force(n: usize, l: usize) -> BigRational {
        let g = Symmetric::new(n).unwrap();
        let elements = g.elements().unwrap();
        let hits = elements.iter().filter(|x| g.is_identity(&g.pow(x, l as u64))).count();
        BigRational::new(BigInt::from(hits), BigInt::from(elements.len()))
    }

    #[test]
    fn involutions_in_s4() {
        assert_eq!(exact_power_word_prob_sn(4, 2).unwrap(), BigRational::new(10.into(), 24.into()));
        assert_eq!(exact_power_word_prob_sn(6, 1).unwrap(), BigRational::new(1.into(), 720.into()));
    }

    #[test]
    fn exact_matches_enumeration() {
        for n in 1..=6 {
            for l in 1..=6 {
                assert_eq!(exact_power_word_prob_sn(n, l).unwrap(), brute_force(n, l), "n={n} l={l}");
            }
        }
    }

    #[test]
    fn single_letter_in_pgl2_5() {
        let g = Pgl2::new(5).unwrap();
        let est = estimate_word_prob(&g, &parse_word("a", 1).unwrap(), 120_000, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        let p = 1.0 / 120.0;
        assert!(est.lower <= p && p <= est.upper, "{est:?}");
    }

    #[test]
    fn commutator_in_abelian_group() {
        let g = Symmetric::new(2).unwrap();
        let est = estimate_word_prob(&g, &parse_word("abAB", 2).unwrap(), 500, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(est.hits, 500);
        assert_eq!(est.upper, 1.0);
    }

    #[test]
    fn power_words_match_exact_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (n, l) in [(5, 2), (8, 3), (12, 4), (20, 6), (30, 2), (30, 6)] {
            let g = Symmetric::new(n).unwrap();
            let est = estimate_word_prob(&g, &power_word(0, l, 1).unwrap(), 20_000, &mut rng).unwrap();
            let p = exact_power_word_prob_sn(n, l).unwrap().to_f64().unwrap();
            let tol = 3.0 * est.sigma_at(p).max(1.0 / 20_000.0);
            assert!((est.estimate - p).abs() <= tol, "n={n} l={l}: {} vs {p}", est.estimate);
        }
    }

    #[test]
    fn wilson_edges() {
        let (lo, hi) = wilson_interval(0, 100, Z_99);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.1);
        let (lo, hi) = wilson_interval(50, 100, Z_99);
        assert!((lo + hi - 1.0).abs() < 1e-12);
        assert!(estimate_word_prob(&Symmetric::new(3).unwrap(), &parse_word("a", 1).unwrap(), 0, &mut ChaCha8Rng::seed_from_u64(0)).is_err());
    }
}
