//! Shortest laws of small groups, and the polynomial identity behind the
//! lower bound on law length in `SL_2`.

use num_bigint::BigInt;
use num_traits::Zero;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::groups::Group;
use crate::words::{Letter, ReducedWord};

/// Default number of word-tree nodes `shortest_law` may visit.
pub const DEFAULT_NODE_CAP: u64 = 50_000_000;

/// At most this many `k`-tuples are tracked.
const MAX_TUPLES: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LawOutcome {
    Found {
        length: usize,
        #[serde(with = "crate::girth::word_text")]
        word: ReducedWord,
    },
    /// No law of length below `bound`.
    AtLeast { bound: usize },
}

impl LawOutcome {
    /// Exact length, or the certified lower bound.
    pub fn lower_bound(&self) -> usize {
        match self {
            LawOutcome::Found { length, .. } => *length,
            LawOutcome::AtLeast { bound } => *bound,
        }
    }
}

struct Search<'a> {
    /// `table[x * n + y]` is the index of `x·y`.
    table: &'a [u32],
    n: usize,
    /// Letter code → element index for every tuple, tuple-major.
    letter_values: Vec<Vec<u32>>,
    identity: u32,
    arity: usize,
    nodes: u64,
    cap: u64,
    word: Vec<Letter>,
}

impl Search<'_> {
    /// Depth-first over reduced words of exactly `len` letters. `values`
    /// holds the running product for every tuple.
    fn descend(&mut self, values: &[u32], len: usize) -> Result<bool, ExperimentError> {
        if self.word.len() == len {
            let cyclic = self.word[0] != self.word[len - 1].inverse();
            return Ok(cyclic && values.iter().all(|&v| v == self.identity));
        }
        let mut next = vec![0u32; values.len()];
        for code in 0..2 * self.arity as u32 {
            let letter = Letter::from_code(code);
            if self.word.last().is_some_and(|&l| l == letter.inverse()) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.cap {
                return Err(ExperimentError::SearchCap(self.cap));
            }
            let step = &self.letter_values[code as usize];
            for ((out, &v), &s) in next.iter_mut().zip(values).zip(step) {
                *out = self.table[v as usize * self.n + s as usize];
            }
            self.word.push(letter);
            if self.descend(&next, len)? {
                return Ok(true);
            }
            self.word.pop();
        }
        Ok(false)
    }
}

/// Shortest nonempty word in `k` letters that is the identity at every
/// `k`-tuple of `group`, searched up to length `max_len`. Among laws of the
/// minimal length the shortlex-first one is returned.
pub fn shortest_law<G: Group>(group: &G, k: usize, max_len: usize, node_cap: u64) -> Result<LawOutcome, ExperimentError> {
    if k == 0 {
        return Err(ExperimentError::Config("need at least one variable".into()));
    }
    let elements = group
        .elements()
        .ok_or_else(|| ExperimentError::Config(format!("{} is too large to enumerate", group.name())))?;
    let n = elements.len();
    let tuples = (0..k).try_fold(1usize, |acc, _| acc.checked_mul(n).filter(|&t| t <= MAX_TUPLES));
    let tuples = tuples.ok_or_else(|| ExperimentError::Config(format!("{n}^{k} tuples exceed {MAX_TUPLES}")))?;

    let index: FxHashMap<G::Key, u32> = elements.iter().enumerate().map(|(i, x)| (group.key(x), i as u32)).collect();
    let find = |x: &G::Elem| index[&group.key(x)];
    let mut table = vec![0u32; n * n];
    for (i, x) in elements.iter().enumerate() {
        for (j, y) in elements.iter().enumerate() {
            table[i * n + j] = find(&group.multiply(x, y));
        }
    }
    let inverse: Vec<u32> = elements.iter().map(|x| find(&group.invert(x))).collect();
    let identity = find(&group.identity());

    // tuple t has coordinate i equal to element (t / n^i) % n
    let mut letter_values = Vec::with_capacity(2 * k);
    for gen in 0..k {
        let stride = n.pow(gen as u32);
        let forward: Vec<u32> = (0..tuples).map(|t| ((t / stride) % n) as u32).collect();
        let backward = forward.iter().map(|&x| inverse[x as usize]).collect();
        letter_values.push(forward);
        letter_values.push(backward);
    }

    let mut search =
        Search { table: &table, n, letter_values, identity, arity: k, nodes: 0, cap: node_cap, word: Vec::new() };
    let start = vec![identity; tuples];
    for len in 1..=max_len {
        if search.descend(&start, len)? {
            let word = ReducedWord::from_reduced_unchecked(search.word.clone(), k);
            return Ok(LawOutcome::Found { length: len, word });
        }
    }
    Ok(LawOutcome::AtLeast { bound: max_len + 1 })
}

type Poly = Vec<BigInt>;

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_add(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] += y;
    }
    trim(out)
}

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

/// Degree of `p`, `None` for the zero polynomial.
fn degree(p: &Poly) -> Option<usize> {
    p.len().checked_sub(1)
}

type PolyMat = [[Poly; 2]; 2];

fn mat_mul(x: &PolyMat, y: &PolyMat) -> PolyMat {
    let entry = |i: usize, j: usize| poly_add(&poly_mul(&x[i][0], &y[0][j]), &poly_mul(&x[i][1], &y[1][j]));
    [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]]
}

fn ping_pong_product(exponents: &[(i64, i64)]) -> PolyMat {
    let constant = |c: i64| trim(vec![BigInt::from(c)]);
    let linear = |c: i64| trim(vec![BigInt::zero(), BigInt::from(c)]);
    let mut product: PolyMat = [[constant(1), constant(0)], [constant(0), constant(1)]];
    for &(l, k) in exponents {
        let lower = [[constant(1), constant(0)], [linear(l), constant(1)]];
        let upper = [[constant(1), linear(k)], [constant(0), constant(1)]];
        product = mat_mul(&mat_mul(&product, &lower), &upper);
    }
    product
}

/// Multiplies out `Π_i [[1,0],[l_i x,1]]·[[1,k_i x],[0,1]]` over `Z[x]` and
/// checks that entry (2,2) has degree `2r` and leading coefficient
/// `Π l_i k_i` while every other entry has degree below `2r`.
pub fn verify_ping_pong_form(exponents: &[(i64, i64)]) -> bool {
    let product = ping_pong_product(exponents);
    let leading: BigInt = exponents.iter().map(|&(l, k)| BigInt::from(l) * BigInt::from(k)).product();
    let r2 = 2 * exponents.len();
    let corner = &product[1][1];
    if degree(corner) != Some(r2) || corner[r2] != leading || leading.is_zero() {
        return false;
    }
    [&product[0][0], &product[0][1], &product[1][0]].iter().all(|p| degree(p).is_none_or(|d| d < r2))
}
