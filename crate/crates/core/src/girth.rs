//! Girth of a Cayley graph as the length of the shortest nontrivial relation
//! among its generators.
//!
//! The search grows the ball around the identity one radius at a time,
//! storing for every element the first reduced word that reaches it. As long
//! as the ball is a tree each stored word extends to all its reduced
//! children; the first radius `d` at which two distinct words meet bounds the
//! girth `g` by `2d - 1 ≤ g ≤ 2d`, and the shortest cyclic reduction of
//! `u·v⁻¹` over all meetings at that radius is exactly `g`.

use std::collections::hash_map::Entry;
use std::mem::size_of;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::Group;
use crate::words::{
    concat_inverse_reduce, cyclic_reduce, enumerate_cyclically_reduced, evaluate, Letter, ReducedWord,
    WordCode, WordError,
};

pub const DEFAULT_MAX_GIRTH: usize = 30;
pub const DEFAULT_MEMORY_LIMIT: usize = 600_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GirthError {
    #[error("memory limit of {limit} bytes reached after exploring radius {depth_reached} (next radius needs ~{required} bytes)")]
    MemoryLimit { depth_reached: usize, required: usize, limit: usize },
    #[error("maximum girth must be at least 1")]
    InvalidCutoff,
    #[error("generator tuple is empty")]
    NoGenerators,
    #[error(transparent)]
    Word(#[from] WordError),
}

/// `k` generators of a group.
#[derive(Debug, Clone)]
pub struct GeneratorTuple<G: Group> {
    pub group: G,
    pub generators: Vec<G::Elem>,
}

impl<G: Group> GeneratorTuple<G> {
    pub fn new(group: G, generators: Vec<G::Elem>) -> Self {
        GeneratorTuple { group, generators }
    }

    pub fn random<R: rand::Rng + ?Sized>(group: G, k: usize, rng: &mut R) -> Self {
        let generators = (0..k).map(|_| group.sample(rng)).collect();
        GeneratorTuple { group, generators }
    }

    pub fn k(&self) -> usize {
        self.generators.len()
    }

    /// Valency of the Cayley graph, counting `g` and `g⁻¹` separately.
    pub fn degree(&self) -> usize {
        2 * self.generators.len()
    }

    pub fn evaluate(&self, w: &ReducedWord) -> Result<G::Elem, WordError> {
        evaluate(&self.group, w, &self.generators)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GirthOutcome {
    Exact {
        girth: usize,
        #[serde(with = "word_text")]
        witness: ReducedWord,
    },
    /// No relation shorter than `bound` exists.
    AtLeast { bound: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GirthResult {
    #[serde(flatten)]
    pub outcome: GirthOutcome,
    /// Elements stored in the collision map.
    pub stored: usize,
    /// Largest radius fully explored.
    pub depth: usize,
}

impl GirthResult {
    pub fn girth(&self) -> Option<usize> {
        match self.outcome {
            GirthOutcome::Exact { girth, .. } => Some(girth),
            GirthOutcome::AtLeast { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&ReducedWord> {
        match &self.outcome {
            GirthOutcome::Exact { witness, .. } => Some(witness),
            GirthOutcome::AtLeast { .. } => None,
        }
    }
}

pub(crate) mod word_text {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::words::{parse_word_minimal, ReducedWord};

    pub fn serialize<S: Serializer>(w: &ReducedWord, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(w)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ReducedWord, D::Error> {
        let text = String::deserialize(d)?;
        parse_word_minimal(&text).map_err(serde::de::Error::custom)
    }
}

/// Map from group element to the first word reaching it.
pub struct CollisionMap<K> {
    map: FxHashMap<K, WordCode>,
    limit: usize,
}

impl<K: std::hash::Hash + Eq> CollisionMap<K> {
    fn with_limit(limit: usize) -> Self {
        CollisionMap { map: FxHashMap::default(), limit }
    }

    /// Rough footprint of a table holding `entries` items.
    fn table_bytes(entries: usize) -> usize {
        let buckets = (entries.saturating_mul(8) / 7 + 1).next_power_of_two();
        buckets * (size_of::<(K, WordCode)>() + 1)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

struct Node<E> {
    elem: E,
    code: WordCode,
    last: Option<Letter>,
}

/// Exact girth up to `max_girth`, or a certified lower bound `max_girth + 1`.
///
/// A relation found at the last explored radius may be exactly one longer
/// than an odd `max_girth`; it is still reported as exact.
pub fn girth<G: Group>(
    tuple: &GeneratorTuple<G>,
    max_girth: usize,
    memory_limit: usize,
) -> Result<GirthResult, GirthError> {
    if max_girth == 0 {
        return Err(GirthError::InvalidCutoff);
    }
    let k = tuple.k();
    if k == 0 {
        return Err(GirthError::NoGenerators);
    }
    let g = &tuple.group;
    let max_depth = max_girth.div_ceil(2);
    let bits = WordCode::bits_per_letter(k);
    if max_depth > WordCode::max_len(k) {
        return Err(WordError::CodeOverflow { len: max_depth, bits }.into());
    }

    let letter_elems: Vec<G::Elem> = (0..2 * k as u32)
        .map(|c| {
            let l = Letter::from_code(c);
            let x = &tuple.generators[l.generator()];
            if l.is_inverse() {
                g.invert(x)
            } else {
                x.clone()
            }
        })
        .collect();

    let node_bytes = size_of::<Node<G::Elem>>() + g.elem_heap_bytes();
    let mut seen: CollisionMap<G::Key> = CollisionMap::with_limit(memory_limit);
    seen.map.insert(g.key(&g.identity()), WordCode::EMPTY);
    let mut frontier = vec![Node { elem: g.identity(), code: WordCode::EMPTY, last: None }];

    for depth in 1..=max_depth {
        let children = if depth == 1 { 2 * k } else { frontier.len() * (2 * k - 1) };
        let last = depth == max_depth;
        let required = CollisionMap::<G::Key>::table_bytes(seen.len() + children)
            + frontier.len() * node_bytes
            + if last { 0 } else { children * node_bytes };
        if required > seen.limit {
            return Err(GirthError::MemoryLimit { depth_reached: depth - 1, required, limit: seen.limit });
        }
        seen.map.reserve(children);

        let mut next = Vec::with_capacity(if last { 0 } else { children });
        let mut collisions: Vec<(WordCode, WordCode)> = Vec::new();
        for node in &frontier {
            for c in 0..2 * k as u32 {
                let l = Letter::from_code(c);
                if node.last == Some(l.inverse()) {
                    continue;
                }
                let elem = g.multiply(&node.elem, &letter_elems[c as usize]);
                let code = node.code.push(l, bits);
                match seen.map.entry(g.key(&elem)) {
                    Entry::Occupied(e) => collisions.push((code, *e.get())),
                    Entry::Vacant(e) => {
                        e.insert(code);
                        if !last {
                            next.push(Node { elem, code, last: Some(l) });
                        }
                    }
                }
            }
        }

        if !collisions.is_empty() {
            let mut best: Option<ReducedWord> = None;
            for (u, v) in collisions {
                let rel = cyclic_reduce(&concat_inverse_reduce(&u.decode(k), &v.decode(k))?);
                debug_assert!(!rel.is_empty());
                if best.as_ref().is_none_or(|b| rel < *b) {
                    best = Some(rel);
                }
            }
            let witness = best.expect("at least one collision");
            return Ok(GirthResult {
                outcome: GirthOutcome::Exact { girth: witness.len(), witness },
                stored: seen.len(),
                depth,
            });
        }
        frontier = next;
    }

    Ok(GirthResult { outcome: GirthOutcome::AtLeast { bound: max_girth + 1 }, stored: seen.len(), depth: max_depth })
}

/// Shortest relation by plain enumeration of cyclically reduced words, with
/// no hashing. Exponential; for cross-checking on small cases.
pub fn girth_oracle<G: Group>(tuple: &GeneratorTuple<G>, max_girth: usize) -> GirthOutcome {
    let g = &tuple.group;
    for len in 1..=max_girth {
        for w in enumerate_cyclically_reduced(tuple.k(), len) {
            let mut acc = g.identity();
            for l in w.letters() {
                let x = &tuple.generators[l.generator()];
                acc = if l.is_inverse() { g.multiply(&acc, &g.invert(x)) } else { g.multiply(&acc, x) };
            }
            if g.is_identity(&acc) {
                return GirthOutcome::Exact { girth: len, witness: w };
            }
        }
    }
    GirthOutcome::AtLeast { bound: max_girth + 1 }
}

/// Largest girth a `degree`-regular graph on `vertices` vertices can have.
///
/// Girth `2r+1` needs a tree-shaped vertex ball of `1 + d·Σ_{i<r}(d-1)^i`
/// vertices; girth `2r` needs an edge ball of `2·Σ_{i<r}(d-1)^i`.
pub fn moore_bound(degree: u64, vertices: u128) -> usize {
    assert!(degree >= 3, "Moore bound needs degree at least 3");
    let d = degree as u128;
    let fits = |g: usize| {
        let r = (g / 2) as u32;
        let mut sum = 0u128;
        let mut term = 1u128;
        for _ in 0..r {
            sum = sum.saturating_add(term);
            term = term.saturating_mul(d - 1);
        }
        let need = if g % 2 == 1 { sum.saturating_mul(d).saturating_add(1) } else { sum.saturating_mul(2) };
        need <= vertices
    };
    let mut g = 2;
    while fits(g + 1) {
        g += 1;
    }
    g
}

/// `min_i ord(g_i)`: each `g_i^{ord}` is a relation.
pub fn power_upper_bound<G: Group>(tuple: &GeneratorTuple<G>) -> Result<u64, crate::groups::GroupError> {
    tuple
        .generators
        .iter()
        .map(|x| tuple.group.order(x))
        .try_fold(u64::MAX, |m, o| o.map(|o| m.min(o)))
}
