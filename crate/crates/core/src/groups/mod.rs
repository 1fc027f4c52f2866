//! Finite groups used as vertex sets of Cayley graphs.
//!
//! Every family implements [`Group`]. Products are read left to right and
//! groups act on points from the right, so for permutations
//! `(xy)(i) = y(x(i))`. The same convention is used by word evaluation,
//! the girth engine and the tree-automorphism section calculus.

mod mat2;
mod perm;
mod tree;

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::Rng;
use thiserror::Error;

pub use mat2::{Mat2, Pgl2, ProjMat2, Sl2, MAX_MODULUS};
pub use perm::{Permutation, Symmetric};
pub use tree::{TreeAut, TreeGroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("modulus {0} is out of range (must be below 2^21)")]
    ModulusOutOfRange(u64),
    #[error("invalid group parameter: {0}")]
    InvalidParameter(String),
    #[error("element is not valid in {group}: {reason}")]
    ForeignElement { group: String, reason: String },
    #[error("order search exceeded the group order {0}")]
    OrderCutoff(u64),
    #[error("element order does not fit in 64 bits")]
    OrderOverflow,
}

/// Group family tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Sym,
    Sl2,
    Pgl2,
    /// Iterated wreath product `W_n(2)`, the automorphisms of the binary
    /// rooted tree of height `n`.
    Wn,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Sym => "sym",
            Family::Sl2 => "sl2",
            Family::Pgl2 => "pgl2",
            Family::Wn => "wn",
        }
    }

    /// Dimension of the ambient algebraic group, where there is one.
    pub fn dimension(self) -> Option<u32> {
        match self {
            Family::Sl2 | Family::Pgl2 => Some(3),
            Family::Sym | Family::Wn => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sym" | "sn" | "s" => Ok(Family::Sym),
            "sl2" => Ok(Family::Sl2),
            "pgl2" => Ok(Family::Pgl2),
            "wn" | "w2" | "tree" => Ok(Family::Wn),
            other => Err(GroupError::InvalidParameter(format!("unknown group family `{other}`"))),
        }
    }
}

/// Order of a group: always as a base-2 logarithm, exactly when it is small
/// enough to be worth materializing.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSize {
    pub log2: f64,
    pub exact: Option<BigUint>,
}

impl GroupSize {
    pub(crate) fn from_exact(n: BigUint) -> Self {
        GroupSize { log2: log2_biguint(&n), exact: Some(n) }
    }

    /// `log_base |G|`.
    pub fn log(&self, base: f64) -> f64 {
        self.log2 / base.log2()
    }
}

fn log2_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        // exact enough through f64 for anything below 2^1000
        let f: f64 = n.to_string().parse().unwrap_or(f64::INFINITY);
        f.log2()
    } else {
        let shift = bits - 64;
        let top: BigUint = n >> shift;
        let top = top.to_u64_digits().first().copied().unwrap_or(0) as f64;
        top.log2() + shift as f64
    }
}

/// A finite group with explicit element arithmetic.
pub trait Group: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + Eq + fmt::Debug + Send + Sync;
    /// Hashable key; `key(x) == key(y)` iff `x` and `y` are the same group element.
    type Key: Hash + Eq + Clone + fmt::Debug + Send + Sync;

    fn family(&self) -> Family;
    /// `n` for `Sym(n)`, `p` for the matrix groups, the height for `W_n`.
    fn param(&self) -> u64;

    fn identity(&self) -> Self::Elem;
    fn multiply(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn invert(&self, x: &Self::Elem) -> Self::Elem;
    fn key(&self, x: &Self::Elem) -> Self::Key;
    /// Packed byte form of [`Group::key`].
    fn key_bytes(&self, x: &Self::Elem) -> Vec<u8>;
    /// Exactly uniform sample.
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;
    fn order(&self, x: &Self::Elem) -> Result<u64, GroupError>;
    fn check(&self, x: &Self::Elem) -> Result<(), GroupError>;
    fn size(&self) -> GroupSize;
    /// All elements, for groups small enough to list (`None` otherwise).
    fn elements(&self) -> Option<Vec<Self::Elem>>;

    /// Heap bytes owned by one element, for memory accounting.
    fn elem_heap_bytes(&self) -> usize {
        0
    }

    fn is_identity(&self, x: &Self::Elem) -> bool {
        *x == self.identity()
    }

    fn try_multiply(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem, GroupError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.multiply(x, y))
    }

    fn pow(&self, x: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut acc = self.identity();
        let mut base = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.multiply(&acc, &base);
            }
            base = self.multiply(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn name(&self) -> String {
        format!("{}({})", self.family(), self.param())
    }
}

/// A group family together with its parameter.
#[derive(Debug, Clone)]
pub enum GroupContext {
    Sym(Symmetric),
    Sl2(Sl2),
    Pgl2(Pgl2),
    Wn(TreeGroup),
}

impl GroupContext {
    pub fn new(family: Family, param: u64) -> Result<Self, GroupError> {
        if param == 0 {
            return Err(GroupError::InvalidParameter("parameter must be at least 1".into()));
        }
        Ok(match family {
            Family::Sym => GroupContext::Sym(Symmetric::new(param as usize)?),
            Family::Sl2 => GroupContext::Sl2(Sl2::new(param)?),
            Family::Pgl2 => GroupContext::Pgl2(Pgl2::new(param)?),
            Family::Wn => GroupContext::Wn(TreeGroup::new(param as u32)?),
        })
    }

    pub fn family(&self) -> Family {
        crate::with_group!(self, g => g.family())
    }

    pub fn param(&self) -> u64 {
        crate::with_group!(self, g => g.param())
    }

    pub fn dimension(&self) -> Option<u32> {
        self.family().dimension()
    }

    pub fn size(&self) -> GroupSize {
        crate::with_group!(self, g => g.size())
    }
}

/// Runs `$body` with `$g` bound to the concrete group inside a [`GroupContext`].
#[macro_export]
macro_rules! with_group {
    ($ctx:expr, $g:ident => $body:expr) => {
        match $ctx {
            $crate::groups::GroupContext::Sym($g) => $body,
            $crate::groups::GroupContext::Sl2($g) => $body,
            $crate::groups::GroupContext::Pgl2($g) => $body,
            $crate::groups::GroupContext::Wn($g) => $body,
        }
    };
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn lcm(a: u64, b: u64) -> Result<u64, GroupError> {
    let g = num_integer::gcd(a, b);
    (a / g).checked_mul(b).ok_or(GroupError::OrderOverflow)
}

#[cfg(test)]
pub(crate) mod test_util {
    use super::*;
    use std::collections::HashMap;

    /// Chi-square goodness-of-fit p-value of `samples` draws against the uniform
    /// distribution on the listed elements.
    pub fn uniformity_p_value<G: Group>(g: &G, samples: usize, seed: u64) -> f64 {
        use rand::SeedableRng;
        use statrs::distribution::{ChiSquared, ContinuousCDF};
        let elems = g.elements().expect("small group");
        let index: HashMap<G::Key, usize> =
            elems.iter().enumerate().map(|(i, e)| (g.key(e), i)).collect();
        assert_eq!(index.len(), elems.len());
        let mut counts = vec![0usize; elems.len()];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            counts[index[&g.key(&g.sample(&mut rng))]] += 1;
        }
        let expected = samples as f64 / elems.len() as f64;
        let stat: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        let dist = ChiSquared::new((elems.len() - 1) as f64).unwrap();
        1.0 - dist.cdf(stat)
    }

    pub fn check_axioms<G: Group>(g: &G, trials: usize, seed: u64) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let id = g.identity();
        for _ in 0..trials {
            let (x, y, z) = (g.sample(&mut rng), g.sample(&mut rng), g.sample(&mut rng));
            g.check(&x).unwrap();
            let lhs = g.multiply(&g.multiply(&x, &y), &z);
            let rhs = g.multiply(&x, &g.multiply(&y, &z));
            assert_eq!(g.key(&lhs), g.key(&rhs));
            assert_eq!(g.key(&g.multiply(&x, &id)), g.key(&x));
            assert_eq!(g.key(&g.multiply(&id, &x)), g.key(&x));
            assert!(g.is_identity(&g.multiply(&x, &g.invert(&x))));
            assert!(g.is_identity(&g.multiply(&g.invert(&x), &x)));
        }
    }

    /// Key equality must coincide with element equality over the whole group.
    pub fn check_keys_exhaustive<G: Group>(g: &G) {
        let elems = g.elements().unwrap();
        let keys: std::collections::HashSet<_> = elems.iter().map(|e| g.key(e)).collect();
        assert_eq!(keys.len(), elems.len());
        let bytes: std::collections::HashSet<_> = elems.iter().map(|e| g.key_bytes(e)).collect();
        assert_eq!(bytes.len(), elems.len());
    }
}
