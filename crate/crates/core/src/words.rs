//! Words in a free group on `k` generators.
//!
//! Generators are 0-based internally. The text form writes generator `i` as
//! the `i`-th lowercase letter and its inverse as the matching uppercase
//! letter, so `"AbcaaC"` is `a⁻¹ b c a a c⁻¹`.

use std::cmp::Ordering;
use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::groups::Group;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("invalid character {0:?} in word")]
    InvalidChar(char),
    #[error("generator {index} is outside an alphabet of {arity} generators")]
    LetterOutOfRange { index: usize, arity: usize },
    #[error("alphabet arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("tuple has {got} elements, word needs {expected}")]
    TupleArity { expected: usize, got: usize },
    #[error("word of length {len} does not fit a 64-bit code at {bits} bits per letter")]
    CodeOverflow { len: usize, bits: u32 },
    #[error("substitution needs at least two target generators and a nonempty word")]
    DegenerateSubstitution,
    #[error("no non-collapsing substitution found after {0} attempts")]
    SubstitutionRetries(usize),
    #[error("generator {0} has no text letter")]
    Unprintable(usize),
}

/// A generator or its inverse. Letters order as `a < A < b < B < …`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u32);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter((generator as u32) << 1 | inverse as u32)
    }

    pub fn from_code(code: u32) -> Self {
        Letter(code)
    }

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    #[inline]
    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }

    pub fn to_char(self) -> Option<char> {
        let g = self.generator();
        if g >= 26 {
            return None;
        }
        let base = if self.is_inverse() { b'A' } else { b'a' };
        Some((base + g as u8) as char)
    }
}

/// A freely reduced word over `arity` generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReducedWord {
    letters: Vec<Letter>,
    arity: usize,
}

impl PartialOrd for ReducedWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortlex: shorter words first, then lexicographic by letter.
impl Ord for ReducedWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
            .then_with(|| self.arity.cmp(&other.arity))
    }
}

impl ReducedWord {
    pub fn empty(arity: usize) -> Self {
        ReducedWord { letters: Vec::new(), arity }
    }

    /// Caller guarantees the letters are reduced and in range.
    pub(crate) fn from_reduced_unchecked(letters: Vec<Letter>, arity: usize) -> Self {
        debug_assert!(letters.windows(2).all(|w| w[0] != w[1].inverse()));
        ReducedWord { letters, arity }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> ReducedWord {
        ReducedWord { letters: self.letters.iter().rev().map(|l| l.inverse()).collect(), arity: self.arity }
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(&f), Some(&l)) if self.letters.len() > 1 => f != l.inverse(),
            _ => true,
        }
    }

    /// Same word over a larger alphabet.
    pub fn with_arity(mut self, arity: usize) -> Result<Self, WordError> {
        if let Some(l) = self.letters.iter().find(|l| l.generator() >= arity) {
            return Err(WordError::LetterOutOfRange { index: l.generator(), arity });
        }
        self.arity = arity;
        Ok(self)
    }

    /// Reduced form of `self · other`.
    pub fn concat(&self, other: &ReducedWord) -> Result<ReducedWord, WordError> {
        if self.arity != other.arity {
            return Err(WordError::ArityMismatch(self.arity, other.arity));
        }
        let mut out = self.letters.clone();
        for &l in &other.letters {
            push_reducing(&mut out, l);
        }
        Ok(ReducedWord { letters: out, arity: self.arity })
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            match l.to_char() {
                Some(c) => write!(f, "{c}")?,
                None if l.is_inverse() => write!(f, "[-{}]", l.generator())?,
                None => write!(f, "[{}]", l.generator())?,
            }
        }
        Ok(())
    }
}

#[inline]
fn push_reducing(stack: &mut Vec<Letter>, l: Letter) {
    if stack.last() == Some(&l.inverse()) {
        stack.pop();
    } else {
        stack.push(l);
    }
}

/// Deletes cancelling pairs until none remain.
pub fn free_reduce(letters: impl IntoIterator<Item = Letter>, arity: usize) -> Result<ReducedWord, WordError> {
    let mut stack = Vec::new();
    for l in letters {
        if l.generator() >= arity {
            return Err(WordError::LetterOutOfRange { index: l.generator(), arity });
        }
        push_reducing(&mut stack, l);
    }
    Ok(ReducedWord { letters: stack, arity })
}

/// Strips the longest prefix that cancels against the matching suffix.
pub fn cyclic_reduce(w: &ReducedWord) -> ReducedWord {
    let l = &w.letters;
    let (mut i, mut j) = (0usize, l.len());
    while j - i >= 2 && l[i] == l[j - 1].inverse() {
        i += 1;
        j -= 1;
    }
    ReducedWord { letters: l[i..j].to_vec(), arity: w.arity }
}

/// Reduced form of `u · v⁻¹`.
pub fn concat_inverse_reduce(u: &ReducedWord, v: &ReducedWord) -> Result<ReducedWord, WordError> {
    if u.arity != v.arity {
        return Err(WordError::ArityMismatch(u.arity, v.arity));
    }
    let common = u.letters.iter().rev().zip(v.letters.iter().rev()).take_while(|(a, b)| a == b).count();
    let mut letters = u.letters[..u.len() - common].to_vec();
    letters.extend(v.letters[..v.len() - common].iter().rev().map(|l| l.inverse()));
    Ok(ReducedWord { letters, arity: u.arity })
}

/// `m` copies of generator `generator`.
pub fn power_word(generator: usize, m: usize, arity: usize) -> Result<ReducedWord, WordError> {
    if generator >= arity {
        return Err(WordError::LetterOutOfRange { index: generator, arity });
    }
    Ok(ReducedWord { letters: vec![Letter::new(generator, false); m], arity })
}

/// All reduced words of one length in lexicographic order, produced by an
/// odometer over non-cancelling letters.
#[derive(Debug, Clone)]
pub struct ReducedWords {
    arity: usize,
    current: Option<Vec<Letter>>,
}

/// Reduced words of length exactly `len` over `arity` generators; there are
/// `2k(2k-1)^(len-1)` of them.
pub fn enumerate_reduced(arity: usize, len: usize) -> ReducedWords {
    let current = if arity == 0 && len > 0 {
        None
    } else {
        let mut w = Vec::with_capacity(len);
        for _ in 0..len {
            let l = first_after(w.last().copied(), None, arity).expect("some letter never cancels");
            w.push(l);
        }
        Some(w)
    };
    ReducedWords { arity, current }
}

/// Smallest letter strictly above `above` that does not cancel `prev`.
fn first_after(prev: Option<Letter>, above: Option<Letter>, arity: usize) -> Option<Letter> {
    let start = above.map_or(0, |l| l.code() + 1);
    (start..2 * arity as u32).map(Letter).find(|&l| Some(l.inverse()) != prev)
}

impl Iterator for ReducedWords {
    type Item = ReducedWord;

    fn next(&mut self) -> Option<ReducedWord> {
        let cur = self.current.as_mut()?;
        let out = ReducedWord { letters: cur.clone(), arity: self.arity };
        let mut pos = cur.len();
        loop {
            if pos == 0 {
                self.current = None;
                break;
            }
            pos -= 1;
            let prev = if pos == 0 { None } else { Some(cur[pos - 1]) };
            if let Some(l) = first_after(prev, Some(cur[pos]), self.arity) {
                cur[pos] = l;
                for i in pos + 1..cur.len() {
                    cur[i] = first_after(Some(cur[i - 1]), None, self.arity).unwrap();
                }
                break;
            }
        }
        Some(out)
    }
}

/// Nonempty cyclically reduced words of length `len`.
pub fn enumerate_cyclically_reduced(arity: usize, len: usize) -> impl Iterator<Item = ReducedWord> {
    enumerate_reduced(arity, len).filter(|w| !w.is_empty() && w.is_cyclically_reduced())
}

/// Uniform reduced word of length `len`.
pub fn random_reduced_word<R: Rng + ?Sized>(arity: usize, len: usize, rng: &mut R) -> ReducedWord {
    assert!(arity > 0 || len == 0, "no letters to draw from");
    let d = 2 * arity as u32;
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    for _ in 0..len {
        let l = match letters.last() {
            None => Letter(rng.gen_range(0..d)),
            Some(prev) => {
                let forbidden = prev.inverse().code();
                let r = rng.gen_range(0..d - 1);
                Letter(if r >= forbidden { r + 1 } else { r })
            }
        };
        letters.push(l);
    }
    ReducedWord { letters, arity }
}

/// Word map `w(g_1, …, g_k)`, multiplied left to right.
pub fn evaluate<G: Group>(group: &G, w: &ReducedWord, tuple: &[G::Elem]) -> Result<G::Elem, WordError> {
    if tuple.len() != w.arity {
        return Err(WordError::TupleArity { expected: w.arity, got: tuple.len() });
    }
    let inverses: Vec<G::Elem> = tuple.iter().map(|g| group.invert(g)).collect();
    let mut acc = group.identity();
    for l in &w.letters {
        let g = if l.is_inverse() { &inverses[l.generator()] } else { &tuple[l.generator()] };
        acc = group.multiply(&acc, g);
    }
    Ok(acc)
}

/// Replaces every `x_i^{±1}` in `w` by `ω_i^{±1}`, reducing while splicing.
pub fn substitute(w: &ReducedWord, replacements: &[ReducedWord]) -> Result<ReducedWord, WordError> {
    if replacements.len() != w.arity {
        return Err(WordError::TupleArity { expected: w.arity, got: replacements.len() });
    }
    let target = replacements.first().map_or(0, |r| r.arity);
    if let Some(r) = replacements.iter().find(|r| r.arity != target) {
        return Err(WordError::ArityMismatch(target, r.arity));
    }
    let mut out = Vec::new();
    for l in &w.letters {
        let rep = &replacements[l.generator()].letters;
        if l.is_inverse() {
            rep.iter().rev().for_each(|&x| push_reducing(&mut out, x.inverse()));
        } else {
            rep.iter().for_each(|&x| push_reducing(&mut out, x));
        }
    }
    Ok(ReducedWord { letters: out, arity: target })
}

/// Half-word length `s` for [`build_substitution`]: the least `s ≥ 1` with
/// `|w| · 2k' · (2k'-1)^{-(s-1)} < 1`.
pub fn substitution_half_length(word_len: usize, target_arity: usize) -> usize {
    let d = 2.0 * target_arity as f64;
    let mut s = 1usize;
    while word_len as f64 * d * (d - 1.0).powi(-(s as i32 - 1)) >= 1.0 {
        s += 1;
    }
    s
}

const SUBSTITUTION_RETRIES: usize = 10_000;

/// Random words `ω_i = L_i x_i R_i` over `target_arity` generators such that
/// substituting them into `w` leaves a nonempty word.
pub fn build_substitution<R: Rng + ?Sized>(
    w: &ReducedWord,
    target_arity: usize,
    rng: &mut R,
) -> Result<Vec<ReducedWord>, WordError> {
    if target_arity < 2 || w.is_empty() {
        return Err(WordError::DegenerateSubstitution);
    }
    let s = substitution_half_length(w.len(), target_arity);
    for _ in 0..SUBSTITUTION_RETRIES {
        let reps: Vec<ReducedWord> = (0..w.arity)
            .map(|_| {
                let left = random_reduced_word(target_arity, s, rng);
                let right = random_reduced_word(target_arity, s, rng);
                let (l_end, r_start) = (*left.letters.last().unwrap(), right.letters[0]);
                let allowed: Vec<Letter> = (0..2 * target_arity as u32)
                    .map(Letter)
                    .filter(|&x| x != l_end.inverse() && x != r_start.inverse())
                    .collect();
                let middle = allowed[rng.gen_range(0..allowed.len())];
                let mut letters = left.letters;
                letters.push(middle);
                letters.extend(right.letters);
                ReducedWord { letters, arity: target_arity }
            })
            .collect();
        if !substitute(w, &reps)?.is_empty() {
            return Ok(reps);
        }
    }
    Err(WordError::SubstitutionRetries(SUBSTITUTION_RETRIES))
}

/// Parses the a-z / A-Z text form over an alphabet of `arity` generators and
/// reduces the result.
pub fn parse_word(text: &str, arity: usize) -> Result<ReducedWord, WordError> {
    let letters = text
        .chars()
        .map(|c| match c {
            'a'..='z' => Ok(Letter::new(c as usize - 'a' as usize, false)),
            'A'..='Z' => Ok(Letter::new(c as usize - 'A' as usize, true)),
            _ => Err(WordError::InvalidChar(c)),
        })
        .collect::<Result<Vec<_>, _>>()?;
    free_reduce(letters, arity)
}

/// Parses with the smallest alphabet containing every letter used.
pub fn parse_word_minimal(text: &str) -> Result<ReducedWord, WordError> {
    let w = parse_word(text, 26)?;
    let arity = text
        .chars()
        .map(|c| c.to_ascii_lowercase() as usize - 'a' as usize + 1)
        .max()
        .unwrap_or(0);
    w.with_arity(arity)
}

pub fn format_word(w: &ReducedWord) -> Result<String, WordError> {
    w.letters
        .iter()
        .map(|l| l.to_char().ok_or(WordError::Unprintable(l.generator())))
        .collect()
}

/// A reduced word packed into 64 bits: a leading sentinel 1 followed by a
/// fixed number of bits per letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WordCode(pub u64);

impl WordCode {
    pub const EMPTY: WordCode = WordCode(1);

    /// Bits needed per letter for an alphabet of `arity` generators.
    pub fn bits_per_letter(arity: usize) -> u32 {
        let d = (2 * arity.max(1)) as u32;
        u32::BITS - (d - 1).leading_zeros()
    }

    /// Longest word that fits at this arity.
    pub fn max_len(arity: usize) -> usize {
        (63 / Self::bits_per_letter(arity)) as usize
    }

    pub fn encode(w: &ReducedWord) -> Result<WordCode, WordError> {
        let bits = Self::bits_per_letter(w.arity);
        if w.len() > Self::max_len(w.arity) {
            return Err(WordError::CodeOverflow { len: w.len(), bits });
        }
        Ok(w.letters.iter().fold(Self::EMPTY, |c, &l| c.push(l, bits)))
    }

    #[inline]
    pub fn push(self, l: Letter, bits: u32) -> WordCode {
        WordCode(self.0 << bits | l.code() as u64)
    }

    pub fn len(self, arity: usize) -> usize {
        ((63 - self.0.leading_zeros()) / Self::bits_per_letter(arity)) as usize
    }

    pub fn is_empty(self) -> bool {
        self == Self::EMPTY
    }

    pub fn decode(self, arity: usize) -> ReducedWord {
        let bits = Self::bits_per_letter(arity);
        let len = self.len(arity);
        let mask = (1u64 << bits) - 1;
        let letters =
            (0..len).rev().map(|i| Letter((self.0 >> (i as u32 * bits) & mask) as u32)).collect();
        ReducedWord { letters, arity }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{Permutation, Symmetric};
    use proptest::prelude::{any, prop_assert_eq, proptest};
    use rand::SeedableRng;

    fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
        rand_chacha::ChaCha8Rng::seed_from_u64(seed)
    }

    fn w(text: &str) -> ReducedWord {
        parse_word(text, 2).unwrap()
    }

    /// Deletes the leftmost cancelling pair, rescanning from scratch each time.
    fn naive_reduce(mut v: Vec<Letter>) -> Vec<Letter> {
        while let Some(i) = (0..v.len().saturating_sub(1)).find(|&i| v[i] == v[i + 1].inverse()) {
            v.drain(i..i + 2);
        }
        v
    }

    /// Deletes a random cancelling pair each step.
    fn random_order_reduce(mut v: Vec<Letter>, r: &mut impl Rng) -> Vec<Letter> {
        loop {
            let pairs: Vec<usize> =
                (0..v.len().saturating_sub(1)).filter(|&i| v[i] == v[i + 1].inverse()).collect();
            if pairs.is_empty() {
                return v;
            }
            let i = pairs[r.gen_range(0..pairs.len())];
            v.drain(i..i + 2);
        }
    }

    fn random_letters(r: &mut impl Rng, arity: usize, max_len: usize) -> Vec<Letter> {
        let len = r.gen_range(0..=max_len);
        (0..len).map(|_| Letter(r.gen_range(0..2 * arity as u32))).collect()
    }

    #[test]
    fn reduction_examples() {
        let a = Letter::new(0, false);
        let b = Letter::new(1, false);
        assert_eq!(free_reduce([a, b, b.inverse(), a], 2).unwrap(), w("aa"));
        assert!(free_reduce([a, a.inverse()], 2).unwrap().is_empty());
        assert!(free_reduce([Letter::new(2, false)], 2).is_err());
    }

    #[test]
    fn reduction_is_confluent() {
        let mut r = rng(1);
        for _ in 0..1000 {
            let raw = random_letters(&mut r, 2, 12);
            let reduced = free_reduce(raw.clone(), 2).unwrap();
            assert_eq!(reduced.letters(), naive_reduce(raw.clone()).as_slice());
            assert_eq!(reduced.letters(), random_order_reduce(raw, &mut r).as_slice());
            assert_eq!(free_reduce(reduced.letters().to_vec(), 2).unwrap(), reduced);
            assert!(reduced.letters().windows(2).all(|p| p[0] != p[1].inverse()));
        }
    }

    #[test]
    fn cyclic_reduction_examples() {
        assert_eq!(cyclic_reduce(&w("abA")), w("b"));
        assert_eq!(cyclic_reduce(&w("abAB")), w("abAB"));
        assert_eq!(cyclic_reduce(&w("a")), w("a"));
        assert!(cyclic_reduce(&w("")).is_empty());
    }

    #[test]
    fn cyclic_reduction_never_empties_a_nonempty_word() {
        for len in 1..=8 {
            for word in enumerate_reduced(2, len) {
                let c = cyclic_reduce(&word);
                assert!(!c.is_empty() && c.is_cyclically_reduced());
            }
        }
    }

    #[test]
    fn cyclic_reduction_is_conjugation() {
        let s5 = Symmetric::new(5).unwrap();
        let mut r = rng(2);
        for _ in 0..500 {
            let len = r.gen_range(1..10);
            let word = random_reduced_word(2, len, &mut r);
            let core = cyclic_reduce(&word);
            // word = p · core · p⁻¹ with p the stripped prefix
            let strip = (word.len() - core.len()) / 2;
            let prefix = ReducedWord::from_reduced_unchecked(word.letters()[..strip].to_vec(), 2);
            let tuple = vec![s5.sample(&mut r), s5.sample(&mut r)];
            let p = evaluate(&s5, &prefix, &tuple).unwrap();
            let lhs = evaluate(&s5, &word, &tuple).unwrap();
            let rhs = s5.multiply(&s5.multiply(&p, &evaluate(&s5, &core, &tuple).unwrap()), &s5.invert(&p));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn concat_inverse_examples() {
        assert!(concat_inverse_reduce(&w("ab"), &w("ab")).unwrap().is_empty());
        assert_eq!(concat_inverse_reduce(&w("ab"), &w("a")).unwrap(), w("abA"));
        assert_eq!(cyclic_reduce(&concat_inverse_reduce(&w("ab"), &w("a")).unwrap()), w("b"));
        assert!(concat_inverse_reduce(&w("a"), &parse_word("a", 3).unwrap()).is_err());
    }

    #[test]
    fn distinct_words_give_nontrivial_quotients() {
        let words: Vec<ReducedWord> = (0..=4).flat_map(|l| enumerate_reduced(2, l)).collect();
        for u in &words {
            for v in &words {
                let q = concat_inverse_reduce(u, v).unwrap();
                assert_eq!(q.is_empty(), u == v);
                assert_eq!(q, u.concat(&v.inverse()).unwrap());
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_reduced(2, 3).count(), 36);
        assert_eq!(enumerate_reduced(2, 1).count(), 4);
        assert_eq!(enumerate_reduced(2, 0).count(), 1);
        for k in [2usize, 3] {
            for l in 1..=8u32 {
                let expected = 2 * k * (2 * k - 1).pow(l - 1);
                assert_eq!(enumerate_reduced(k, l as usize).count(), expected);
            }
        }
        assert_eq!(enumerate_cyclically_reduced(2, 2).count(), 12);
        assert_eq!(enumerate_cyclically_reduced(2, 1).count(), 4);
        // (2k-1)^l + 1 + (k-1)(1 + (-1)^l); exceeds (2k-1)^l by at most 2k-1
        for k in [2usize, 3] {
            for l in 1..=10u32 {
                let parity = if l % 2 == 0 { 2 } else { 0 };
                let expected = (2 * k - 1).pow(l) + 1 + (k - 1) * parity;
                let count = enumerate_cyclically_reduced(k, l as usize).count();
                assert_eq!(count, expected);
                assert!(count < (2 * k - 1).pow(l) + 2 * k);
            }
        }
    }

    #[test]
    fn enumeration_matches_brute_force() {
        // all sequences of length 2 over 6 letters, reduced, deduplicated
        let mut brute: Vec<Vec<Letter>> = Vec::new();
        for x in 0..6 {
            for y in 0..6 {
                let v = vec![Letter(x), Letter(y)];
                if naive_reduce(v.clone()).len() == 2 {
                    brute.push(v);
                }
            }
        }
        brute.sort();
        brute.dedup();
        let listed: Vec<Vec<Letter>> = enumerate_reduced(3, 2).map(|w| w.letters().to_vec()).collect();
        assert_eq!(listed.len(), 30);
        assert_eq!(listed, brute);

        let cyc: Vec<_> = enumerate_reduced(2, 2).filter(|w| w.is_cyclically_reduced()).collect();
        assert_eq!(cyc.len(), 12);
    }

    #[test]
    fn random_words_are_uniform() {
        let mut r = rng(3);
        let all: Vec<ReducedWord> = enumerate_reduced(2, 2).collect();
        let mut counts = vec![0usize; all.len()];
        let n = 12_000;
        for _ in 0..n {
            let x = random_reduced_word(2, 2, &mut r);
            counts[all.iter().position(|y| *y == x).unwrap()] += 1;
        }
        let p = 1.0 / 12.0;
        let sigma = (n as f64 * p * (1.0 - p)).sqrt();
        for c in counts {
            assert!((c as f64 - n as f64 * p).abs() <= 3.0 * sigma, "{c}");
        }
        assert!(random_reduced_word(2, 0, &mut r).is_empty());
        for _ in 0..10_000 {
            let x = random_reduced_word(3, 7, &mut r);
            assert_eq!(x.len(), 7);
            assert_eq!(free_reduce(x.letters().to_vec(), 3).unwrap(), x);
        }
    }

    #[test]
    fn power_words() {
        assert_eq!(power_word(0, 3, 2).unwrap(), w("aaa"));
        assert_eq!(power_word(1, 1, 2).unwrap(), w("b"));
        let s6 = Symmetric::new(6).unwrap();
        let mut r = rng(4);
        for _ in 0..100 {
            let g = s6.sample(&mut r);
            let o = g.order().unwrap() as usize;
            let pw = power_word(0, o, 1).unwrap();
            assert!(s6.is_identity(&evaluate(&s6, &pw, &[g]).unwrap()));
        }
    }

    #[test]
    fn evaluation() {
        let s4 = Symmetric::new(4).unwrap();
        let x = Permutation::new(vec![1, 0, 2, 3]).unwrap();
        let y = Permutation::new(vec![0, 1, 3, 2]).unwrap();
        let comm = w("abAB");
        assert!(s4.is_identity(&evaluate(&s4, &comm, &[x.clone(), y.clone()]).unwrap()));
        assert_eq!(evaluate(&s4, &w("a"), &[x.clone(), y.clone()]).unwrap(), x);
        assert!(evaluate(&s4, &w("a"), &[x]).is_err());

        let s5 = Symmetric::new(5).unwrap();
        let mut r = rng(5);
        for _ in 0..500 {
            let len = r.gen_range(0..=6);
            let word = random_reduced_word(2, len, &mut r);
            let tuple = vec![s5.sample(&mut r), s5.sample(&mut r)];
            let folded = word.letters().iter().fold(s5.identity(), |acc, l| {
                let g = &tuple[l.generator()];
                let g = if l.is_inverse() { g.inverse() } else { g.clone() };
                acc.then(&g)
            });
            assert_eq!(evaluate(&s5, &word, &tuple).unwrap(), folded);

            let other = random_reduced_word(2, r.gen_range(0..=6), &mut r);
            let q = concat_inverse_reduce(&word, &other).unwrap();
            let expect = s5.multiply(
                &evaluate(&s5, &word, &tuple).unwrap(),
                &s5.invert(&evaluate(&s5, &other, &tuple).unwrap()),
            );
            assert_eq!(evaluate(&s5, &q, &tuple).unwrap(), expect);
        }
    }

    #[test]
    fn substitution() {
        let xy = vec![w("a"), w("b")];
        assert_eq!(substitute(&w("ab"), &xy).unwrap(), w("ab"));
        let omega = vec![w("abba"), w("Ba")];
        let collapsed = free_reduce([Letter::new(0, false), Letter::new(0, true), Letter::new(1, false)], 2).unwrap();
        assert_eq!(substitute(&collapsed, &omega).unwrap(), w("Ba"));

        let s5 = Symmetric::new(5).unwrap();
        let mut r = rng(6);
        for _ in 0..300 {
            let word = random_reduced_word(3, r.gen_range(0..8), &mut r);
            let reps: Vec<ReducedWord> = (0..3).map(|_| random_reduced_word(2, r.gen_range(0..5), &mut r)).collect();
            let tuple = vec![s5.sample(&mut r), s5.sample(&mut r)];
            let images: Vec<Permutation> = reps.iter().map(|x| evaluate(&s5, x, &tuple).unwrap()).collect();
            let lhs = evaluate(&s5, &substitute(&word, &reps).unwrap(), &tuple).unwrap();
            assert_eq!(lhs, evaluate(&s5, &word, &images).unwrap());
        }
    }

    #[test]
    fn substitution_lengths() {
        assert_eq!(substitution_half_length(8, 2), 5);
        let mut r = rng(7);
        for _ in 0..1000 {
            let len = r.gen_range(1..12);
            let word = random_reduced_word(4, len, &mut r);
            let reps = build_substitution(&word, 2, &mut r).unwrap();
            let s = substitution_half_length(len, 2);
            for rep in &reps {
                assert_eq!(rep.len(), 2 * s + 1);
                assert_eq!(free_reduce(rep.letters().to_vec(), 2).unwrap(), *rep);
            }
            assert!(!substitute(&word, &reps).unwrap().is_empty());
        }
        assert!(build_substitution(&w(""), 2, &mut r).is_err());
        assert!(build_substitution(&w("ab"), 1, &mut r).is_err());
    }

    #[test]
    fn text_format() {
        let word = parse_word("AbcaaC", 3).unwrap();
        let expect = [(0, true), (1, false), (2, false), (0, false), (0, false), (2, true)];
        let got: Vec<(usize, bool)> = word.letters().iter().map(|l| (l.generator(), l.is_inverse())).collect();
        assert_eq!(got, expect);
        assert!(parse_word("aA", 1).unwrap().is_empty());
        assert_eq!(parse_word("a1", 2), Err(WordError::InvalidChar('1')));
        assert!(matches!(parse_word("c", 2), Err(WordError::LetterOutOfRange { .. })));
        assert_eq!(parse_word_minimal("AbcaaC").unwrap().arity(), 3);
        let big = ReducedWord::from_reduced_unchecked(vec![Letter::new(30, false)], 31);
        assert!(format_word(&big).is_err());
        assert_eq!(big.to_string(), "[30]");
    }

    #[test]
    fn text_round_trip() {
        let mut r = rng(8);
        for _ in 0..1000 {
            let raw: String = (0..r.gen_range(0..15))
                .map(|_| {
                    let c = b'a' + r.gen_range(0..4u8);
                    if r.gen() { c.to_ascii_uppercase() as char } else { c as char }
                })
                .collect();
            let word = parse_word(&raw, 4).unwrap();
            let text = format_word(&word).unwrap();
            assert_eq!(parse_word(&text, 4).unwrap(), word);
            assert_eq!(text.len(), word.len());
        }
    }

    #[test]
    fn word_codes() {
        assert_eq!(WordCode::bits_per_letter(2), 2);
        assert_eq!(WordCode::bits_per_letter(1), 1);
        assert_eq!(WordCode::bits_per_letter(3), 3);
        assert_eq!(WordCode::max_len(2), 31);
        let long = random_reduced_word(2, 32, &mut rng(9));
        assert!(WordCode::encode(&long).is_err());
        assert!(WordCode::EMPTY.is_empty());
        assert!(WordCode::encode(&w("")).unwrap().decode(2).is_empty());
    }

    proptest! {
        #[test]
        fn word_code_round_trips(seed in any::<u64>(), len in 0usize..=31) {
            let word = random_reduced_word(2, len, &mut rng(seed));
            let code = WordCode::encode(&word).unwrap();
            prop_assert_eq!(code.len(2), len);
            prop_assert_eq!(code.decode(2), word);
        }

        #[test]
        fn shortlex_order_agrees_with_codes(seed in any::<u64>(), len in 0usize..=20) {
            let mut r = rng(seed);
            let (x, y) = (random_reduced_word(2, len, &mut r), random_reduced_word(2, len, &mut r));
            prop_assert_eq!(x.cmp(&y), WordCode::encode(&x).unwrap().cmp(&WordCode::encode(&y).unwrap()));
        }
    }
}
