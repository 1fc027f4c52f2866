use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::Rng;

use super::{lcm, Family, Group, GroupError, GroupSize};

/// Permutation of `{0, …, n-1}`; `images[i]` is the image of point `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn new(images: Vec<u32>) -> Result<Self, GroupError> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let i = i as usize;
            if i >= images.len() || seen[i] {
                return Err(GroupError::ForeignElement {
                    group: format!("sym({})", images.len()),
                    reason: "images are not a bijection".into(),
                });
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n as u32).collect() }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation { images: self.images.iter().map(|&i| other.images[i as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut r = vec![0u32; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            r[j as usize] = i as u32;
        }
        Permutation { images: r }
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i] as usize;
                len += 1;
            }
            out.push(len);
        }
        out
    }

    /// lcm of the cycle lengths.
    pub fn order(&self) -> Result<u64, GroupError> {
        self.cycle_lengths().into_iter().try_fold(1u64, |acc, l| lcm(acc, l as u64))
    }
}

/// The symmetric group `Sym(n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symmetric {
    n: usize,
}

impl Symmetric {
    pub fn new(n: usize) -> Result<Self, GroupError> {
        if n == 0 || n > u32::MAX as usize {
            return Err(GroupError::InvalidParameter(format!("degree {n} out of range")));
        }
        Ok(Symmetric { n })
    }

    pub fn degree(&self) -> usize {
        self.n
    }
}

impl Group for Symmetric {
    type Elem = Permutation;
    type Key = Vec<u32>;

    fn family(&self) -> Family {
        Family::Sym
    }

    fn param(&self) -> u64 {
        self.n as u64
    }

    fn identity(&self) -> Permutation {
        Permutation::identity(self.n)
    }

    fn multiply(&self, x: &Permutation, y: &Permutation) -> Permutation {
        x.then(y)
    }

    fn invert(&self, x: &Permutation) -> Permutation {
        x.inverse()
    }

    fn key(&self, x: &Permutation) -> Vec<u32> {
        x.images.clone()
    }

    fn key_bytes(&self, x: &Permutation) -> Vec<u8> {
        x.images.iter().flat_map(|i| i.to_le_bytes()).collect()
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let mut images: Vec<u32> = (0..self.n as u32).collect();
        images.shuffle(rng);
        Permutation { images }
    }

    fn order(&self, x: &Permutation) -> Result<u64, GroupError> {
        x.order()
    }

    fn check(&self, x: &Permutation) -> Result<(), GroupError> {
        if x.degree() != self.n {
            return Err(GroupError::ForeignElement {
                group: self.name(),
                reason: format!("permutation has degree {}", x.degree()),
            });
        }
        Permutation::new(x.images.clone()).map(|_| ())
    }

    fn size(&self) -> GroupSize {
        let f = (1..=self.n as u64).fold(BigUint::from(1u32), |acc, i| acc * i);
        GroupSize::from_exact(f)
    }

    fn elements(&self) -> Option<Vec<Permutation>> {
        if self.n > 8 {
            return None;
        }
        // lexicographic successor
        let mut cur: Vec<u32> = (0..self.n as u32).collect();
        let mut out = vec![Permutation { images: cur.clone() }];
        while let Some(i) = (0..cur.len().saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) {
            let j = (i + 1..cur.len()).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
            out.push(Permutation { images: cur.clone() });
        }
        Some(out)
    }

    fn elem_heap_bytes(&self) -> usize {
        4 * self.n
    }
}
