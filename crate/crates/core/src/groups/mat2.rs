//! `SL_2(F_p)` and `PGL_2(F_p)` with 2×2 matrices over a prime field.

use std::sync::Arc;

use num_bigint::BigUint;
use rand::Rng;

use super::{is_prime, Family, Group, GroupError, GroupSize};

/// Moduli must stay below this so three residues pack into a 64-bit key.
pub const MAX_MODULUS: u64 = 1 << 21;

const FIELD_BITS: u32 = 21;
const TAG: u64 = 1 << 63;

/// Matrix `[[a, b], [c, d]]` with residues in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
}

/// Element of `PGL_2`, stored scaled so the first nonzero entry in row-major
/// order is 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProjMat2 {
    a: u32,
    b: u32,
    c: u32,
    d: u32,
}

impl Mat2 {
    pub const fn new(a: u32, b: u32, c: u32, d: u32) -> Self {
        Mat2 { a, b, c, d }
    }
}

impl ProjMat2 {
    pub fn entries(&self) -> [u32; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

/// Prime-field arithmetic shared by both matrix groups.
#[derive(Debug, Clone)]
struct Field {
    p: u64,
    inverses: Arc<[u32]>,
}

impl Field {
    fn new(p: u64) -> Result<Self, GroupError> {
        if p >= MAX_MODULUS {
            return Err(GroupError::ModulusOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(GroupError::NotPrime(p));
        }
        // inv(i) = -(p / i) * inv(p mod i)
        let mut inv = vec![0u32; p as usize];
        if p > 1 {
            inv[1] = 1;
        }
        for i in 2..p {
            let r = inv[(p % i) as usize] as u64;
            inv[i as usize] = ((p - p / i) * r % p) as u32;
        }
        Ok(Field { p, inverses: inv.into() })
    }

    #[inline]
    fn mul(&self, x: u32, y: u32) -> u32 {
        (x as u64 * y as u64 % self.p) as u32
    }

    #[inline]
    fn dot(&self, x1: u32, y1: u32, x2: u32, y2: u32) -> u32 {
        ((x1 as u64 * y1 as u64 + x2 as u64 * y2 as u64) % self.p) as u32
    }

    #[inline]
    fn neg(&self, x: u32) -> u32 {
        if x == 0 {
            0
        } else {
            (self.p - x as u64) as u32
        }
    }

    #[inline]
    fn inv(&self, x: u32) -> u32 {
        self.inverses[x as usize]
    }

    fn det(&self, m: &Mat2) -> u32 {
        let ad = m.a as u64 * m.d as u64 % self.p;
        let bc = m.b as u64 * m.c as u64 % self.p;
        ((ad + self.p - bc) % self.p) as u32
    }

    fn product(&self, x: &Mat2, y: &Mat2) -> Mat2 {
        Mat2 {
            a: self.dot(x.a, y.a, x.b, y.c),
            b: self.dot(x.a, y.b, x.b, y.d),
            c: self.dot(x.c, y.a, x.d, y.c),
            d: self.dot(x.c, y.b, x.d, y.d),
        }
    }

    fn residue<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        // gen_range rejects rather than reducing modulo p
        rng.gen_range(0..self.p as u32)
    }

    fn in_range(&self, m: &Mat2) -> bool {
        [m.a, m.b, m.c, m.d].iter().all(|&x| (x as u64) < self.p)
    }

    fn matrices(&self) -> impl Iterator<Item = Mat2> + '_ {
        let p = self.p as u32;
        (0..p).flat_map(move |a| {
            (0..p).flat_map(move |b| (0..p).flat_map(move |c| (0..p).map(move |d| Mat2 { a, b, c, d })))
        })
    }
}

/// `SL_2(F_p)`.
#[derive(Debug, Clone)]
pub struct Sl2 {
    field: Field,
}

impl Sl2 {
    pub fn new(p: u64) -> Result<Self, GroupError> {
        Ok(Sl2 { field: Field::new(p)? })
    }

    pub fn modulus(&self) -> u64 {
        self.field.p
    }

    pub fn from_entries(&self, a: u32, b: u32, c: u32, d: u32) -> Result<Mat2, GroupError> {
        let m = Mat2 { a, b, c, d };
        self.check(&m)?;
        Ok(m)
    }
}

impl Group for Sl2 {
    type Elem = Mat2;
    type Key = u64;

    fn family(&self) -> Family {
        Family::Sl2
    }

    fn param(&self) -> u64 {
        self.field.p
    }

    fn identity(&self) -> Mat2 {
        Mat2::new(1, 0, 0, 1)
    }

    #[inline]
    fn multiply(&self, x: &Mat2, y: &Mat2) -> Mat2 {
        self.field.product(x, y)
    }

    fn invert(&self, x: &Mat2) -> Mat2 {
        let f = &self.field;
        Mat2 { a: x.d, b: f.neg(x.b), c: f.neg(x.c), d: x.a }
    }

    /// With determinant 1 the fourth entry is implied: `d = (1 + bc)/a` when
    /// `a != 0`, and `c = -1/b` when `a == 0`.
    #[inline]
    fn key(&self, x: &Mat2) -> u64 {
        if x.a != 0 {
            (x.a as u64) << (2 * FIELD_BITS) | (x.b as u64) << FIELD_BITS | x.c as u64
        } else {
            TAG | (x.b as u64) << FIELD_BITS | x.d as u64
        }
    }

    fn key_bytes(&self, x: &Mat2) -> Vec<u8> {
        self.key(x).to_le_bytes().to_vec()
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Mat2 {
        let f = &self.field;
        let (a, b) = loop {
            let (a, b) = (f.residue(rng), f.residue(rng));
            if a != 0 || b != 0 {
                break (a, b);
            }
        };
        // each first row has exactly p completions
        if a != 0 {
            let c = f.residue(rng);
            let d = f.mul(f.dot(1, 1, b, c), f.inv(a));
            Mat2 { a, b, c, d }
        } else {
            let d = f.residue(rng);
            let c = f.neg(f.inv(b));
            Mat2 { a, b, c, d }
        }
    }

    fn order(&self, x: &Mat2) -> Result<u64, GroupError> {
        matrix_order(self, x)
    }

    fn check(&self, x: &Mat2) -> Result<(), GroupError> {
        if !self.field.in_range(x) || self.field.det(x) != 1 {
            return Err(GroupError::ForeignElement {
                group: self.name(),
                reason: format!("{x:?} is not a determinant-one matrix mod {}", self.field.p),
            });
        }
        Ok(())
    }

    fn size(&self) -> GroupSize {
        let p = BigUint::from(self.field.p);
        GroupSize::from_exact(&p * (&p * &p - 1u32))
    }

    fn elements(&self) -> Option<Vec<Mat2>> {
        if self.field.p > 13 {
            return None;
        }
        Some(self.field.matrices().filter(|m| self.field.det(m) == 1).collect())
    }
}

/// `PGL_2(F_p)`.
#[derive(Debug, Clone)]
pub struct Pgl2 {
    field: Field,
}

impl Pgl2 {
    pub fn new(p: u64) -> Result<Self, GroupError> {
        Ok(Pgl2 { field: Field::new(p)? })
    }

    pub fn modulus(&self) -> u64 {
        self.field.p
    }

    /// Projective class of an invertible matrix.
    pub fn from_matrix(&self, m: Mat2) -> Result<ProjMat2, GroupError> {
        if !self.field.in_range(&m) || self.field.det(&m) == 0 {
            return Err(GroupError::ForeignElement {
                group: self.name(),
                reason: format!("{m:?} is not invertible mod {}", self.field.p),
            });
        }
        Ok(self.canonicalize(m))
    }

    #[inline]
    fn canonicalize(&self, m: Mat2) -> ProjMat2 {
        let f = &self.field;
        let s = if m.a != 0 { f.inv(m.a) } else { f.inv(m.b) };
        ProjMat2 { a: f.mul(m.a, s), b: f.mul(m.b, s), c: f.mul(m.c, s), d: f.mul(m.d, s) }
    }

    fn raw(x: &ProjMat2) -> Mat2 {
        Mat2 { a: x.a, b: x.b, c: x.c, d: x.d }
    }
}

impl Group for Pgl2 {
    type Elem = ProjMat2;
    type Key = u64;

    fn family(&self) -> Family {
        Family::Pgl2
    }

    fn param(&self) -> u64 {
        self.field.p
    }

    fn identity(&self) -> ProjMat2 {
        ProjMat2 { a: 1, b: 0, c: 0, d: 1 }
    }

    #[inline]
    fn multiply(&self, x: &ProjMat2, y: &ProjMat2) -> ProjMat2 {
        self.canonicalize(self.field.product(&Self::raw(x), &Self::raw(y)))
    }

    fn invert(&self, x: &ProjMat2) -> ProjMat2 {
        let f = &self.field;
        self.canonicalize(Mat2 { a: x.d, b: f.neg(x.b), c: f.neg(x.c), d: x.a })
    }

    /// Canonical form has `a == 1`, or `a == 0, b == 1`; the remaining
    /// entries fit in 63 bits.
    #[inline]
    fn key(&self, x: &ProjMat2) -> u64 {
        if x.a != 0 {
            (x.b as u64) << (2 * FIELD_BITS) | (x.c as u64) << FIELD_BITS | x.d as u64
        } else {
            TAG | (x.c as u64) << FIELD_BITS | x.d as u64
        }
    }

    fn key_bytes(&self, x: &ProjMat2) -> Vec<u8> {
        self.key(x).to_le_bytes().to_vec()
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ProjMat2 {
        // GL_2 -> PGL_2 has fibres of equal size p - 1
        let f = &self.field;
        loop {
            let m = Mat2 { a: f.residue(rng), b: f.residue(rng), c: f.residue(rng), d: f.residue(rng) };
            if f.det(&m) != 0 {
                return self.canonicalize(m);
            }
        }
    }

    fn order(&self, x: &ProjMat2) -> Result<u64, GroupError> {
        matrix_order(self, x)
    }

    fn check(&self, x: &ProjMat2) -> Result<(), GroupError> {
        let m = Self::raw(x);
        if !self.field.in_range(&m) || self.field.det(&m) == 0 || self.canonicalize(m) != *x {
            return Err(GroupError::ForeignElement {
                group: self.name(),
                reason: format!("{x:?} is not a canonical invertible matrix mod {}", self.field.p),
            });
        }
        Ok(())
    }

    fn size(&self) -> GroupSize {
        let p = BigUint::from(self.field.p);
        GroupSize::from_exact(&p * (&p - 1u32) * (&p + 1u32))
    }

    fn elements(&self) -> Option<Vec<ProjMat2>> {
        if self.field.p > 13 {
            return None;
        }
        Some(
            self.field
                .matrices()
                .filter(|m| self.field.det(m) != 0 && self.canonicalize(*m) == Self::raw_proj(m))
                .map(|m| self.canonicalize(m))
                .collect(),
        )
    }
}

impl Pgl2 {
    fn raw_proj(m: &Mat2) -> ProjMat2 {
        ProjMat2 { a: m.a, b: m.b, c: m.c, d: m.d }
    }
}

fn matrix_order<G: Group>(g: &G, x: &G::Elem) -> Result<u64, GroupError> {
    let cutoff = g.size().exact.and_then(|n| n.to_u64_digits().first().copied()).unwrap_or(u64::MAX);
    let mut acc = x.clone();
    let mut m = 1u64;
    while !g.is_identity(&acc) {
        if m >= cutoff {
            return Err(GroupError::OrderCutoff(cutoff));
        }
        acc = g.multiply(&acc, x);
        m += 1;
    }
    Ok(m)
}
