//! Crossover model for words on `W_n(2)`.
//!
//! A DNA strand is a reduced word; each base type carries one crossover bit.
//! At fission the crossover mark of base `x` sits after every forward
//! occurrence of `x` and before every backward one. Two copies of the strand
//! are scanned left to right, switching copy at every active mark; child 1
//! starts on copy 1, child 2 on copy 2. Base `(x, copy)` is generator
//! `2x + copy - 1` of the child alphabet.
//!
//! The same bookkeeping computes sections: for `w(g)` in `W_n` with root bits
//! as crossover bits, the two sections of `w(g)` are the children evaluated
//! at the generator sections.

use rand::Rng;
use thiserror::Error;

use crate::groups::{TreeAut, TreeGroup};
use crate::words::{evaluate, Letter, ReducedWord, WordError};

pub type Dna = ReducedWord;

/// Amoeba populations beyond this many members are refused.
pub const DEFAULT_POPULATION_CAP: usize = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneticsError {
    #[error("activity assignment covers {got} bases, word uses {needed}")]
    ActivityArity { needed: usize, got: usize },
    #[error("population cap of {cap} exceeded at generation {generation}")]
    PopulationCap { generation: u32, cap: usize },
    #[error(transparent)]
    Word(#[from] WordError),
}

/// One crossover bit per base type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActivityAssignment(pub Vec<bool>);

impl ActivityAssignment {
    pub fn random<R: Rng + ?Sized>(bases: usize, rng: &mut R) -> Self {
        ActivityAssignment((0..bases).map(|_| rng.gen()).collect())
    }

    pub fn from_active(bases: usize, active: &[usize]) -> Self {
        let mut bits = vec![false; bases];
        for &b in active {
            bits[b] = true;
        }
        ActivityAssignment(bits)
    }

    pub fn is_active(&self, base: usize) -> bool {
        self.0[base]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OffspringPair {
    pub first: Dna,
    pub second: Dna,
}

/// Child-alphabet generator for base `base` on copy `copy` (0 or 1).
pub fn child_base(base: usize, copy: usize) -> usize {
    2 * base + copy
}

pub fn fission(w: &Dna, activity: &ActivityAssignment) -> Result<OffspringPair, GeneticsError> {
    if activity.0.len() < w.arity() {
        return Err(GeneticsError::ActivityArity { needed: w.arity(), got: activity.0.len() });
    }
    let arity = 2 * w.arity();
    let mut first = Vec::with_capacity(w.len());
    let mut second = Vec::with_capacity(w.len());
    // copy index of child 1 (0 = copy 1); child 2 is always on the other copy
    let mut t = 0usize;
    for &l in w.letters() {
        let x = l.generator();
        let flips = activity.is_active(x);
        if l.is_inverse() && flips {
            t ^= 1;
        }
        first.push(Letter::new(child_base(x, t), l.is_inverse()));
        second.push(Letter::new(child_base(x, t ^ 1), l.is_inverse()));
        if !l.is_inverse() && flips {
            t ^= 1;
        }
    }
    Ok(OffspringPair {
        first: ReducedWord::from_reduced_unchecked(first, arity),
        second: ReducedWord::from_reduced_unchecked(second, arity),
    })
}

fn distinct_bases(w: &Dna) -> usize {
    let mut seen: Vec<usize> = w.letters().iter().map(|l| l.generator()).collect();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

/// Every base type occurs at most once, in either orientation.
pub fn is_free(w: &Dna) -> bool {
    distinct_bases(w) == w.len()
}

/// `χ(w) = |w| − (number of distinct base types)`.
pub fn complexity(w: &Dna) -> i64 {
    w.len() as i64 - distinct_bases(w) as i64
}

/// Renames bases to `0, 1, …` in order of first appearance. Fission and
/// complexity commute with renaming, and this keeps alphabets from doubling
/// every generation.
pub fn relabel(w: &Dna) -> Dna {
    let mut names: Vec<Option<usize>> = vec![None; w.arity()];
    let mut next = 0;
    let letters: Vec<Letter> = w
        .letters()
        .iter()
        .map(|l| {
            let name = *names[l.generator()].get_or_insert_with(|| {
                next += 1;
                next - 1
            });
            Letter::new(name, l.is_inverse())
        })
        .collect();
    ReducedWord::from_reduced_unchecked(letters, next)
}

fn random_fission<R: Rng + ?Sized>(w: &Dna, rng: &mut R) -> OffspringPair {
    let activity = ActivityAssignment::random(w.arity(), rng);
    let pair = fission(w, &activity).expect("activity covers the alphabet");
    OffspringPair { first: relabel(&pair.first), second: relabel(&pair.second) }
}

/// Follows the lower-complexity child (child 1 on ties) for `generations`
/// fissions with fresh crossover bits each time. Entry `i` is generation `i`.
pub fn greedy_lineage<R: Rng + ?Sized>(w: &Dna, generations: u32, rng: &mut R) -> Vec<(Dna, i64)> {
    let mut cur = relabel(w);
    let mut out = vec![(cur.clone(), complexity(&cur))];
    for _ in 0..generations {
        let pair = random_fission(&cur, rng);
        let (c1, c2) = (complexity(&pair.first), complexity(&pair.second));
        cur = if c2 < c1 { pair.second } else { pair.first };
        out.push((cur.clone(), c1.min(c2)));
    }
    out
}

/// Generation at which the full population first contains a free amoeba,
/// `None` if that does not happen within `max_gen` generations.
pub fn population_first_free<R: Rng + ?Sized>(
    w: &Dna,
    max_gen: u32,
    rng: &mut R,
    population_cap: usize,
) -> Result<Option<u32>, GeneticsError> {
    if is_free(w) {
        return Ok(Some(0));
    }
    let mut population = vec![relabel(w)];
    for generation in 1..=max_gen {
        if population.len() * 2 > population_cap {
            return Err(GeneticsError::PopulationCap { generation, cap: population_cap });
        }
        let mut next = Vec::with_capacity(population.len() * 2);
        for amoeba in &population {
            let pair = random_fission(amoeba, rng);
            if is_free(&pair.first) || is_free(&pair.second) {
                return Ok(Some(generation));
            }
            next.push(pair.first);
            next.push(pair.second);
        }
        population = next;
    }
    Ok(None)
}

/// Tail bound on "no free amoeba at generation `n`" for words of length
/// `len`: `exp(-n/4 · (1 - 2(len-1)/n)²)`, clamped to 1 where the
/// large-deviation estimate does not apply (`n ≤ 2(len-1)`).
pub fn p1_bound(n: u32, len: usize) -> f64 {
    let worst = 2.0 * (len as f64 - 1.0);
    let n = n as f64;
    if n <= worst {
        return 1.0;
    }
    (-n / 4.0 * (1.0 - worst / n).powi(2)).exp()
}

/// Upper bound on `P(w = 1)` in `W_n` for any reduced `w` of length `len`:
/// `min_{1 ≤ n0 < n} p1(n0, len) + 2^{-(2^{n-n0} - 1)}`. The bound does not
/// depend on the number of generators.
pub fn wn_word_prob_bound(n: u32, len: usize) -> f64 {
    (1..n)
        .map(|n0| {
            let rest = n - n0;
            let p2 = if rest >= 11 { 0.0 } else { (-(((1u64 << rest) - 1) as f64)).exp2() };
            p1_bound(n0, len) + p2
        })
        .fold(1.0, f64::min)
}

/// The level-one split of `w(g)` for generators `g` in `W_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionSplit {
    /// Whether `w(g)` swaps the two subtrees.
    pub parity: bool,
    pub first: Dna,
    pub second: Dna,
    /// Generator sections indexed like the child alphabet.
    pub sections: Vec<TreeAut>,
}

/// When `parity` is false, `w(g)` fixes level one and its sections are
/// `first(sections)` and `second(sections)`.
pub fn section_decomposition(group: &TreeGroup, w: &Dna, tuple: &[TreeAut]) -> Result<SectionSplit, GeneticsError> {
    if tuple.len() != w.arity() {
        return Err(WordError::TupleArity { expected: w.arity(), got: tuple.len() }.into());
    }
    assert!(group.height() >= 1, "W_0 has no sections");
    let activity = ActivityAssignment(tuple.iter().map(|g| g.root_active()).collect());
    let pair = fission(w, &activity)?;
    let parity = w.letters().iter().fold(false, |acc, l| acc ^ activity.is_active(l.generator()));
    let sections = tuple.iter().flat_map(|g| [g.section(0), g.section(1)]).collect();
    Ok(SectionSplit { parity, first: pair.first, second: pair.second, sections })
}

/// Evaluates a child word at generator sections.
pub fn evaluate_sections(group: &TreeGroup, child: &Dna, sections: &[TreeAut]) -> Result<TreeAut, WordError> {
    evaluate(&group.subgroup(), child, sections)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Group;
    use crate::words::{enumerate_reduced, parse_word, random_reduced_word};
    use rand::SeedableRng;

    fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
        rand_chacha::ChaCha8Rng::seed_from_u64(seed)
    }

    fn child(text: &str) -> Vec<(char, usize, bool)> {
        // "ã₂" written as ('a', 2, true)
        let mut out = Vec::new();
        let mut chars = text.chars().peekable();
        while let Some(c) = chars.next() {
            let copy = chars.next().unwrap().to_digit(10).unwrap() as usize;
            out.push((c.to_ascii_lowercase(), copy, c.is_ascii_uppercase()));
        }
        out
    }

    fn describe(w: &Dna) -> Vec<(char, usize, bool)> {
        w.letters()
            .iter()
            .map(|l| ((b'a' + (l.generator() / 2) as u8) as char, l.generator() % 2 + 1, l.is_inverse()))
            .collect()
    }

    #[test]
    fn worked_example() {
        let w = parse_word("AbcaaC", 3).unwrap();
        let pair = fission(&w, &ActivityAssignment::from_active(3, &[0, 1])).unwrap();
        assert_eq!(describe(&pair.first), child("A2b2c1a1a2C1"));
        assert_eq!(describe(&pair.second), child("A1b1c2a2a1C2"));
        assert!(!is_free(&w));
        assert_eq!(complexity(&w), 3);
        // a2 and c1 each occur twice in the first child
        assert_eq!(complexity(&pair.first), 2);
        assert_eq!(complexity(&pair.second), 2);
    }

    #[test]
    fn inactive_marks_copy_the_parent() {
        let w = parse_word("AbcaaC", 3).unwrap();
        let pair = fission(&w, &ActivityAssignment(vec![false; 3])).unwrap();
        assert_eq!(describe(&pair.first), child("A1b1c1a1a1C1"));
        assert_eq!(relabel(&pair.first), relabel(&w));
    }

    #[test]
    fn freeness_and_complexity() {
        assert!(is_free(&parse_word("abc", 3).unwrap()));
        assert!(is_free(&parse_word("C", 3).unwrap()));
        assert!(!is_free(&parse_word("aa", 1).unwrap()));
        assert!(!is_free(&parse_word("abA", 2).unwrap()));
        assert_eq!(complexity(&ReducedWord::empty(2)), 0);
        let mut r = rng(1);
        for _ in 0..1000 {
            let w = random_reduced_word(4, r.gen_range(0..10), &mut r);
            assert_eq!(complexity(&w) <= 0, is_free(&w));
        }
    }

    #[test]
    fn children_are_reduced_complementary_and_simpler() {
        // exhaustive over short words and all assignments
        for len in 0..=6 {
            for w in enumerate_reduced(2, len) {
                for mask in 0..4u32 {
                    let act = ActivityAssignment(vec![mask & 1 == 1, mask & 2 == 2]);
                    let pair = fission(&w, &act).unwrap();
                    for c in [&pair.first, &pair.second] {
                        assert_eq!(c.len(), w.len());
                        assert!(c.letters().windows(2).all(|p| p[0] != p[1].inverse()));
                        assert!(complexity(c) <= complexity(&w));
                    }
                    for (x, y) in pair.first.letters().iter().zip(pair.second.letters()) {
                        assert_eq!(x.generator() ^ 1, y.generator());
                        assert_eq!(x.is_inverse(), y.is_inverse());
                    }
                }
            }
        }
    }

    #[test]
    fn complexity_drops_with_probability_at_least_half() {
        // exact over all assignments for short words over 3 bases
        for len in 2..=6 {
            for w in enumerate_reduced(3, len) {
                if complexity(&w) < 1 {
                    continue;
                }
                let drops = (0..8u32)
                    .filter(|mask| {
                        let act = ActivityAssignment((0..3).map(|i| mask >> i & 1 == 1).collect());
                        let pair = fission(&w, &act).unwrap();
                        complexity(&pair.first).min(complexity(&pair.second)) < complexity(&w)
                    })
                    .count();
                assert!(drops >= 4, "{w} drops in only {drops}/8 assignments");
            }
        }
    }

    #[test]
    fn lineage_is_monotone() {
        let mut r = rng(2);
        for _ in 0..200 {
            let w = random_reduced_word(3, r.gen_range(1..12), &mut r);
            let lineage = greedy_lineage(&w, 20, &mut r);
            assert_eq!(lineage.len(), 21);
            assert!(lineage.windows(2).all(|p| p[1].1 <= p[0].1));
            for (dna, chi) in &lineage {
                assert_eq!(*chi, complexity(dna));
                assert_eq!(dna.len(), w.len());
            }
        }
        let free = parse_word("abc", 3).unwrap();
        assert!(greedy_lineage(&free, 10, &mut r).iter().all(|(_, c)| *c <= 0));
    }

    #[test]
    fn population_examples() {
        let mut r = rng(3);
        assert_eq!(population_first_free(&parse_word("abc", 3).unwrap(), 5, &mut r, 1 << 10), Ok(Some(0)));
        let aa = parse_word("aa", 1).unwrap();
        for _ in 0..200 {
            let g = population_first_free(&aa, 30, &mut r, DEFAULT_POPULATION_CAP).unwrap().unwrap();
            assert!(g >= 1);
        }
        let hard = parse_word("aaaaaaaaaaaaaaaa", 1).unwrap();
        assert!(matches!(
            population_first_free(&hard, 30, &mut r, 4),
            Err(GeneticsError::PopulationCap { generation: 3, cap: 4 })
        ));
        assert_eq!(population_first_free(&hard, 0, &mut r, 4), Ok(None));
    }

    #[test]
    fn p1_values() {
        assert!((p1_bound(20, 6) - (-1.25f64).exp()).abs() < 1e-15);
        assert!((p1_bound(20, 6) - 0.2865).abs() < 1e-4);
        assert_eq!(p1_bound(10, 6), 1.0);
        assert_eq!(p1_bound(3, 6), 1.0);
        for len in 1..10 {
            for n in 1..60 {
                assert!(p1_bound(n + 1, len) <= p1_bound(n, len));
                assert!(p1_bound(n, len + 1) >= p1_bound(n, len));
            }
        }
    }

    #[test]
    fn wn_bound_values() {
        // independent evaluation of the minimum, term by term
        let direct = |n: u32, len: usize| {
            let mut best = f64::INFINITY;
            for n0 in 1..n {
                let chi = (len - 1) as f64;
                let p1 = if (n0 as f64) <= 2.0 * chi {
                    1.0
                } else {
                    (-(n0 as f64) / 4.0 * (1.0 - 2.0 * chi / n0 as f64).powi(2)).exp()
                };
                let p2 = 2f64.powf(-(2f64.powi((n - n0) as i32) - 1.0));
                best = best.min(p1 + p2);
            }
            best
        };
        for (n, len) in [(40, 6), (12, 3), (20, 1), (30, 8)] {
            assert!((wn_word_prob_bound(n, len) - direct(n, len)).abs() < 1e-12);
        }
        let v = wn_word_prob_bound(40, 6);
        assert!((v - 0.00917).abs() < 5e-5, "{v}");
        assert!(wn_word_prob_bound(20, 1) < wn_word_prob_bound(20, 2));
        for len in 1..8 {
            assert!(wn_word_prob_bound(24, len + 1) >= wn_word_prob_bound(24, len));
        }
    }

    fn check_contract(group: &TreeGroup, w: &Dna, tuple: &[TreeAut]) {
        let split = section_decomposition(group, w, tuple).unwrap();
        let value = evaluate(group, w, tuple).unwrap();
        assert_eq!(value.root_active(), split.parity);
        let s0 = evaluate_sections(group, &split.first, &split.sections).unwrap();
        let s1 = evaluate_sections(group, &split.second, &split.sections).unwrap();
        assert_eq!(value.section(0), s0);
        assert_eq!(value.section(1), s1);
    }

    #[test]
    fn section_contract() {
        let mut r = rng(4);
        let a = parse_word("a", 1).unwrap();
        let g4 = TreeGroup::new(4).unwrap();
        let x = g4.sample(&mut r);
        let split = section_decomposition(&g4, &a, std::slice::from_ref(&x)).unwrap();
        assert_eq!(split.sections, vec![x.section(0), x.section(1)]);
        check_contract(&g4, &a, &[x]);

        let example = parse_word("AbcaaC", 3).unwrap();
        for _ in 0..100 {
            let tuple: Vec<TreeAut> = (0..3).map(|_| g4.sample(&mut r)).collect();
            check_contract(&g4, &example, &tuple);
        }
        for _ in 0..500 {
            let n = r.gen_range(1..=6);
            let g = TreeGroup::new(n).unwrap();
            let k = r.gen_range(1..=3);
            let w = random_reduced_word(k, r.gen_range(0..=8), &mut r);
            let tuple: Vec<TreeAut> = (0..k).map(|_| g.sample(&mut r)).collect();
            check_contract(&g, &w, &tuple);
        }
        assert!(section_decomposition(&g4, &example, &[]).is_err());
    }

    #[test]
    fn fission_rejects_short_assignment() {
        let w = parse_word("ab", 2).unwrap();
        assert!(fission(&w, &ActivityAssignment(vec![true])).is_err());
    }
}
