//! Automorphisms of the rooted binary tree, `W_n(2)`.
//!
//! An element is stored by its portrait: one activity bit per internal node,
//! heap-indexed (root 1, children of `v` are `2v` and `2v + 1`). A vertex
//! address `u_1 … u_j` is mapped by emitting `u_i ⊕ ε(node)` and descending
//! along the *original* bit `u_i`. Writing `g = (g_0, g_1)·ε` with sections
//! `g_b` below child `b`, products satisfy
//! `(xy)_b = x_b · y_{b ⊕ ε_x}` and `ε_{xy} = ε_x ⊕ ε_y` at the root.

use num_bigint::BigUint;
use rand::Rng;

use super::{lcm, Family, Group, GroupError, GroupSize, Permutation};

/// Heights above this are refused; a portrait is `2^height` bits.
pub const MAX_HEIGHT: u32 = 26;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeAut {
    height: u32,
    // bit v is the activity of heap node v; bit 0 unused
    bits: Vec<u64>,
}

fn words_for(height: u32) -> usize {
    (1usize << height).div_ceil(64)
}

impl TreeAut {
    pub fn identity(height: u32) -> Self {
        TreeAut { height, bits: vec![0; words_for(height)] }
    }

    /// Builds an element from its activity bits listed in heap order
    /// (`portrait[0]` is the root).
    pub fn from_portrait(height: u32, portrait: &[bool]) -> Result<Self, GroupError> {
        let nodes = (1usize << height) - 1;
        if portrait.len() != nodes {
            return Err(GroupError::ForeignElement {
                group: format!("wn({height})"),
                reason: format!("portrait has {} bits, expected {nodes}", portrait.len()),
            });
        }
        let mut g = TreeAut::identity(height);
        for (i, &bit) in portrait.iter().enumerate() {
            g.set(i + 1, bit);
        }
        Ok(g)
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn portrait(&self) -> Vec<bool> {
        (1..1usize << self.height).map(|v| self.activity(v)).collect()
    }

    #[inline]
    pub fn activity(&self, node: usize) -> bool {
        self.bits[node >> 6] >> (node & 63) & 1 == 1
    }

    #[inline]
    fn set(&mut self, node: usize, bit: bool) {
        if bit {
            self.bits[node >> 6] |= 1 << (node & 63);
        } else {
            self.bits[node >> 6] &= !(1 << (node & 63));
        }
    }

    pub fn root_active(&self) -> bool {
        self.height > 0 && self.activity(1)
    }

    pub fn is_identity(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Section below child `b` of the root, an automorphism of height `n - 1`.
    pub fn section(&self, b: usize) -> TreeAut {
        assert!(self.height > 0, "height-0 automorphisms have no sections");
        let mut out = TreeAut::identity(self.height - 1);
        for depth in 0..self.height - 1 {
            let base = (2 + b) << depth;
            for t in 0..1usize << depth {
                if self.activity(base + t) {
                    out.set((1 << depth) + t, true);
                }
            }
        }
        out
    }

    /// `(left, right)·ε` in wreath-product notation.
    pub fn from_sections(root: bool, left: &TreeAut, right: &TreeAut) -> TreeAut {
        assert_eq!(left.height, right.height);
        let mut out = TreeAut::identity(left.height + 1);
        out.set(1, root);
        for depth in 0..left.height {
            for t in 0..1usize << depth {
                let src = (1 << depth) + t;
                out.set((2 << depth) + t, left.activity(src));
                out.set((3 << depth) + t, right.activity(src));
            }
        }
        out
    }

    /// Image of the heap node `node` under `self`.
    pub fn apply_node(&self, node: usize) -> usize {
        let depth = usize::BITS - 1 - node.leading_zeros();
        let mut cur = 1usize;
        let mut img = 1usize;
        for i in (0..depth).rev() {
            let bit = node >> i & 1;
            img = img << 1 | (bit ^ self.activity(cur) as usize);
            cur = cur << 1 | bit;
        }
        img
    }

    /// Visits every internal node `v` together with its image under `self`.
    fn for_each_node_image(&self, mut f: impl FnMut(usize, usize)) {
        if self.height == 0 {
            return;
        }
        let mut level = vec![1usize];
        f(1, 1);
        for _ in 1..self.height {
            let start = level.len();
            let mut next = Vec::with_capacity(2 * level.len());
            for (t, &img) in level.iter().enumerate() {
                let v = start + t;
                let flip = self.activity(v) as usize;
                for b in 0..2 {
                    let child_img = img << 1 | (b ^ flip);
                    f(2 * v + b, child_img);
                    next.push(child_img);
                }
            }
            level = next;
        }
    }

    pub fn then(&self, other: &TreeAut) -> TreeAut {
        debug_assert_eq!(self.height, other.height);
        let mut out = TreeAut::identity(self.height);
        self.for_each_node_image(|v, img| {
            if self.activity(v) != other.activity(img) {
                out.set(v, true);
            }
        });
        out
    }

    pub fn inverse(&self) -> TreeAut {
        let mut out = TreeAut::identity(self.height);
        self.for_each_node_image(|v, img| {
            if self.activity(v) {
                out.set(img, true);
            }
        });
        out
    }

    /// `ord(g) = lcm(ord g_0, ord g_1)` for an inactive root, `2·ord(g_0 g_1)` otherwise.
    pub fn order(&self) -> Result<u64, GroupError> {
        if self.height == 0 || self.is_identity() {
            return Ok(1);
        }
        let (left, right) = (self.section(0), self.section(1));
        if self.root_active() {
            left.then(&right).order()?.checked_mul(2).ok_or(GroupError::OrderOverflow)
        } else {
            lcm(left.order()?, right.order()?)
        }
    }

    /// Action on the `2^n` leaves, leaf `u_1…u_n` read with `u_1` as the most
    /// significant bit.
    pub fn to_permutation(&self) -> Permutation {
        let n = self.height;
        let images = (0..1usize << n)
            .map(|leaf| {
                let mut cur = 1usize;
                let mut out = 0usize;
                for i in (0..n).rev() {
                    let bit = leaf >> i & 1;
                    out = out << 1 | (bit ^ self.activity(cur) as usize);
                    cur = cur << 1 | bit;
                }
                out as u32
            })
            .collect();
        Permutation::new(images).expect("tree automorphisms permute leaves")
    }
}

/// `W_n(2)` for a fixed height `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeGroup {
    height: u32,
}

impl TreeGroup {
    /// Height 0 is allowed and gives the trivial group (the sections of `W_1`).
    pub fn new(height: u32) -> Result<Self, GroupError> {
        if height > MAX_HEIGHT {
            return Err(GroupError::InvalidParameter(format!("tree height {height} exceeds {MAX_HEIGHT}")));
        }
        Ok(TreeGroup { height })
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    /// Group of the sections, one level down.
    pub fn subgroup(&self) -> TreeGroup {
        TreeGroup { height: self.height.saturating_sub(1) }
    }
}

impl Group for TreeGroup {
    type Elem = TreeAut;
    type Key = Vec<u64>;

    fn family(&self) -> Family {
        Family::Wn
    }

    fn param(&self) -> u64 {
        self.height as u64
    }

    fn identity(&self) -> TreeAut {
        TreeAut::identity(self.height)
    }

    fn multiply(&self, x: &TreeAut, y: &TreeAut) -> TreeAut {
        x.then(y)
    }

    fn invert(&self, x: &TreeAut) -> TreeAut {
        x.inverse()
    }

    fn key(&self, x: &TreeAut) -> Vec<u64> {
        x.bits.clone()
    }

    fn key_bytes(&self, x: &TreeAut) -> Vec<u8> {
        x.bits.iter().flat_map(|w| w.to_le_bytes()).collect()
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> TreeAut {
        let mut g = TreeAut::identity(self.height);
        let nodes = 1usize << self.height;
        for (i, w) in g.bits.iter_mut().enumerate() {
            *w = rng.gen();
            let hi = nodes.saturating_sub(64 * i);
            if hi < 64 {
                *w &= (1u64 << hi) - 1;
            }
        }
        g.bits[0] &= !1;
        g
    }

    fn order(&self, x: &TreeAut) -> Result<u64, GroupError> {
        x.order()
    }

    fn check(&self, x: &TreeAut) -> Result<(), GroupError> {
        let stray = x.bits.len() != words_for(self.height)
            || x.bits[0] & 1 == 1
            || !(1usize << self.height).is_multiple_of(64) && x.bits.last().unwrap() >> ((1usize << self.height) % 64) != 0;
        if x.height != self.height || stray {
            return Err(GroupError::ForeignElement {
                group: self.name(),
                reason: format!("portrait of height {}", x.height),
            });
        }
        Ok(())
    }

    fn size(&self) -> GroupSize {
        let log2 = ((1u64 << self.height) - 1) as f64;
        if log2 <= 4096.0 {
            GroupSize { log2, exact: Some(BigUint::from(1u32) << ((1u64 << self.height) - 1)) }
        } else {
            GroupSize { log2, exact: None }
        }
    }

    fn elements(&self) -> Option<Vec<TreeAut>> {
        if self.height > 4 {
            return None;
        }
        let nodes = (1usize << self.height) - 1;
        Some(
            (0..1u64 << nodes)
                .map(|mask| {
                    let mut g = TreeAut::identity(self.height);
                    g.bits[0] = mask << 1;
                    g
                })
                .collect(),
        )
    }

    fn elem_heap_bytes(&self) -> usize {
        8 * words_for(self.height)
    }
}
