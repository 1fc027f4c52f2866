//! Projective zeros of homogeneous polynomials over `F_p`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::groups::is_prime;

/// Enumeration limits for `count_projective_zeros`.
pub const MAX_ZERO_PRIME: u64 = 13;
pub const MAX_ZERO_VARS: usize = 4;

/// `Σ c · x^e` over `F_p` with every monomial of the same total degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomogeneousPoly {
    vars: usize,
    p: u64,
    degree: u32,
    terms: Vec<(u64, Vec<u32>)>,
}

impl HomogeneousPoly {
    /// Reduces coefficients mod `p` and merges equal monomials.
    pub fn new(vars: usize, p: u64, terms: Vec<(u64, Vec<u32>)>) -> Result<Self, ExperimentError> {
        let bad = |msg: String| Err(ExperimentError::Polynomial(msg));
        if !is_prime(p) {
            return bad(format!("{p} is not a prime"));
        }
        if vars == 0 {
            return bad("need at least one variable".into());
        }
        let mut merged: Vec<(u64, Vec<u32>)> = Vec::new();
        for (c, e) in terms {
            if e.len() != vars {
                return bad(format!("monomial has {} exponents, expected {vars}", e.len()));
            }
            match merged.iter_mut().find(|(_, f)| *f == e) {
                Some(t) => t.0 = (t.0 + c % p) % p,
                None => merged.push((c % p, e)),
            }
        }
        merged.retain(|(c, _)| *c != 0);
        merged.sort_by(|a, b| b.1.cmp(&a.1));
        let Some(degree) = merged.first().map(|(_, e)| e.iter().sum::<u32>()) else {
            return bad("polynomial is zero".into());
        };
        if degree == 0 {
            return bad("degree must be at least 1".into());
        }
        if merged.iter().any(|(_, e)| e.iter().sum::<u32>() != degree) {
            return bad("monomials have different degrees".into());
        }
        Ok(HomogeneousPoly { vars, p, degree, terms: merged })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &[(u64, Vec<u32>)] {
        &self.terms
    }

    pub fn eval(&self, x: &[u64]) -> u64 {
        let p = self.p;
        self.terms.iter().fold(0, |acc, (c, e)| {
            let mono = e.iter().zip(x).fold(*c, |m, (&k, &xi)| (0..k).fold(m, |m, _| m * xi % p));
            (acc + mono) % p
        })
    }

    /// Parses `"x0*x1 + 2*x0^2 - x2^2"` over `F_p` in `vars` variables.
    pub fn parse(text: &str, vars: usize, p: u64) -> Result<Self, ExperimentError> {
        let bad = |msg: String| ExperimentError::Polynomial(msg);
        let spaced = text.replace('-', "+-");
        let mut terms = Vec::new();
        for raw in spaced.split('+').map(str::trim).filter(|t| !t.is_empty()) {
            let (negative, body) = match raw.strip_prefix('-') {
                Some(rest) => (true, rest.trim()),
                None => (false, raw),
            };
            let mut coeff = 1u64;
            let mut exps = vec![0u32; vars];
            for factor in body.split('*').map(str::trim) {
                if let Some(var) = factor.strip_prefix('x') {
                    let (idx, pow) = match var.split_once('^') {
                        Some((i, e)) => (i, e.parse::<u32>().map_err(|_| bad(format!("bad exponent in {factor:?}")))?),
                        None => (var, 1),
                    };
                    let idx: usize = idx.parse().map_err(|_| bad(format!("bad variable {factor:?}")))?;
                    if idx >= vars {
                        return Err(bad(format!("variable x{idx} outside {vars} variables")));
                    }
                    exps[idx] += pow;
                } else {
                    let c: u64 = factor.parse().map_err(|_| bad(format!("bad factor {factor:?}")))?;
                    coeff = coeff * (c % p) % p;
                }
            }
            if negative {
                coeff = (p - coeff) % p;
            }
            terms.push((coeff, exps));
        }
        HomogeneousPoly::new(vars, p, terms)
    }
}

impl fmt::Display for HomogeneousPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (c, e)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if *c != 1 {
                factors.push(c.to_string());
            }
            for (v, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(format!("x{v}")),
                    _ => factors.push(format!("x{v}^{k}")),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl FromStr for HomogeneousPoly {
    type Err = ExperimentError;

    /// `"p=5;m=3;x0*x1 - x2^2"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ExperimentError::Polynomial(format!("expected \"p=<prime>;m=<vars>;<poly>\", got {s:?}"));
        let mut parts = s.splitn(3, ';');
        let p = parts.next().and_then(|t| t.trim().strip_prefix("p=")).and_then(|t| t.parse().ok()).ok_or_else(bad)?;
        let m = parts.next().and_then(|t| t.trim().strip_prefix("m=")).and_then(|t| t.parse().ok()).ok_or_else(bad)?;
        HomogeneousPoly::parse(parts.next().ok_or_else(bad)?, m, p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroCount {
    pub zeros: u64,
    pub points: u64,
    /// `d·p^{m-2} + (p^{m-2} - 1)/(p - 1)`.
    pub bound: u64,
    pub within_bound: bool,
}

/// Counts zeros of `poly` on `P^{m-1}(F_p)`, visiting each point once through
/// its representative with first nonzero coordinate 1. The bound applies
/// when `d ≤ p`.
pub fn count_projective_zeros(poly: &HomogeneousPoly) -> Result<ZeroCount, ExperimentError> {
    let (m, p, d) = (poly.vars, poly.p, poly.degree as u64);
    if p > MAX_ZERO_PRIME || !(2..=MAX_ZERO_VARS).contains(&m) {
        return Err(ExperimentError::Domain(format!(
            "enumeration needs p <= {MAX_ZERO_PRIME} and 2 <= m <= {MAX_ZERO_VARS}, got p={p}, m={m}"
        )));
    }
    let mut zeros = 0;
    let mut points = 0;
    let mut x = vec![0u64; m];
    for lead in 0..m {
        x.iter_mut().for_each(|c| *c = 0);
        x[lead] = 1;
        let free = m - lead - 1;
        for tail in 0..p.pow(free as u32) {
            let mut t = tail;
            for c in &mut x[lead + 1..] {
                *c = t % p;
                t /= p;
            }
            points += 1;
            if poly.eval(&x) == 0 {
                zeros += 1;
            }
        }
    }
    let q = p.pow(m as u32 - 2);
    let bound = d * q + (q - 1) / (p - 1);
    Ok(ZeroCount { zeros, points, bound, within_bound: zeros <= bound })
}

/// `Π_i (x0 - c_i x1)` in `m` variables for distinct `c_i ∈ F_p`; its zero
/// set is `d` hyperplanes through a common codimension-two subspace.
pub fn split_product(p: u64, vars: usize, roots: &[u64]) -> Result<HomogeneousPoly, ExperimentError> {
    if vars < 2 || roots.is_empty() {
        return Err(ExperimentError::Polynomial("need two variables and at least one root".into()));
    }
    let mut sorted: Vec<u64> = roots.iter().map(|c| c % p.max(1)).collect();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(ExperimentError::Polynomial("roots must be distinct mod p".into()));
    }
    // coeffs[j] multiplies x0^{d-j} x1^j
    let mut coeffs = vec![1u64];
    for &c in roots {
        let neg = (p - c % p) % p;
        let mut next = vec![0u64; coeffs.len() + 1];
        for (j, &a) in coeffs.iter().enumerate() {
            next[j] = (next[j] + a) % p;
            next[j + 1] = (next[j + 1] + a * neg) % p;
        }
        coeffs = next;
    }
    let d = roots.len() as u32;
    let terms = coeffs
        .into_iter()
        .enumerate()
        .map(|(j, c)| {
            let mut e = vec![0u32; vars];
            e[0] = d - j as u32;
            e[1] = j as u32;
            (c, e)
        })
        .collect();
    HomogeneousPoly::new(vars, p, terms)
}
