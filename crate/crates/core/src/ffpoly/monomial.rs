use std::fmt;

/// Largest number of variables a ring may have.
pub const MAX_VARS: usize = 32;

/// Exponent vector over a fixed variable list, with its cached total degree.
///
/// Exponents are `u8`; every computation in this crate stays far below that
/// bound and overflow panics instead of wrapping.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: [u8; MAX_VARS],
    nvars: u8,
    degree: u16,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables are supported");
        Self {
            exps: [0; MAX_VARS],
            nvars: nvars as u8,
            degree: 0,
        }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        assert!(i < nvars);
        m.exps[i] = 1;
        m.degree = 1;
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        let mut m = Self::one(exps.len());
        let mut deg = 0u32;
        for (slot, &e) in m.exps.iter_mut().zip(exps) {
            *slot = u8::try_from(e).expect("exponent overflow");
            deg += e;
        }
        m.degree = u16::try_from(deg).expect("degree overflow");
        m
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars as usize
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree as u32
    }

    #[inline]
    pub fn exponents(&self) -> &[u8] {
        &self.exps[..self.nvars as usize]
    }

    #[inline]
    pub fn exponent(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    /// Bit `i` set iff variable `i` occurs; a cheap necessary test for divisibility.
    #[inline]
    pub fn support_mask(&self) -> u32 {
        self.exponents()
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &e)| if e > 0 { acc | (1 << i) } else { acc })
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = *self;
        for i in 0..self.nvars as usize {
            out.exps[i] = self.exps[i]
                .checked_add(other.exps[i])
                .expect("exponent overflow");
        }
        out.degree = self.degree + other.degree;
        out
    }

    /// `self | other`
    #[inline]
    pub fn divides(&self, other: &Self) -> bool {
        if self.degree > other.degree {
            return false;
        }
        self.exps[..self.nvars as usize]
            .iter()
            .zip(&other.exps)
            .all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Self) -> Option<Self> {
        if !self.divides(other) {
            return None;
        }
        let mut out = *other;
        for i in 0..self.nvars as usize {
            out.exps[i] -= self.exps[i];
        }
        out.degree = other.degree - self.degree;
        Some(out)
    }

    pub fn lcm(&self, other: &Self) -> Self {
        let mut out = *self;
        let mut deg = 0u16;
        for i in 0..self.nvars as usize {
            out.exps[i] = self.exps[i].max(other.exps[i]);
            deg += out.exps[i] as u16;
        }
        out.degree = deg;
        out
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut out = *self;
        let mut deg = 0u16;
        for i in 0..self.nvars as usize {
            out.exps[i] = self.exps[i].min(other.exps[i]);
            deg += out.exps[i] as u16;
        }
        out.degree = deg;
        out
    }

    pub fn is_coprime(&self, other: &Self) -> bool {
        self.exps[..self.nvars as usize]
            .iter()
            .zip(&other.exps)
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Variables with a positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exponents()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
    }

    /// Same exponents, reindexed: variable `i` moves to `perm[i]`.
    pub fn permuted(&self, perm: &[usize], nvars: usize) -> Self {
        let mut out = Self::one(nvars);
        for (i, &e) in self.exponents().iter().enumerate() {
            if e > 0 {
                out.exps[perm[i]] = e;
            }
        }
        out.degree = self.degree;
        out
    }

    /// Remove every power of variable `i`.
    pub fn strip_var(&self, i: usize) -> Self {
        let mut out = *self;
        out.degree -= out.exps[i] as u16;
        out.exps[i] = 0;
        out
    }

    pub(crate) fn set_exponent(&mut self, i: usize, e: u8) {
        self.degree = self.degree - self.exps[i] as u16 + e as u16;
        self.exps[i] = e;
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exponents())
    }
}

/// All monomials of total degree `deg` in `nvars` variables, in lex-descending order.
pub fn monomials_of_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; nvars];
    fn rec(i: usize, left: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        let n = exps.len();
        if i + 1 == n {
            exps[i] = left;
            out.push(Monomial::from_exponents(exps));
            return;
        }
        for e in (0..=left).rev() {
            exps[i] = e;
            rec(i + 1, left - e, exps, out);
        }
        exps[i] = 0;
    }
    if nvars == 0 {
        if deg == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    rec(0, deg, &mut exps, &mut out);
    out
}

/// Binomial coefficient as `u64`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_cache_tracks_exponents() {
        let a = Monomial::from_exponents(&[2, 0, 1]);
        let b = Monomial::from_exponents(&[1, 3, 0]);
        assert_eq!(a.degree(), 3);
        let ab = a.mul(&b);
        assert_eq!(ab.exponents(), &[3, 3, 1]);
        assert_eq!(ab.degree(), 7);
        assert_eq!(a.lcm(&b).exponents(), &[2, 3, 1]);
        assert_eq!(a.gcd(&b).degree(), 1);
        assert_eq!(a.quotient_of(&ab).unwrap(), b);
        assert!(a.quotient_of(&b).is_none());
        assert!(!a.is_coprime(&b));
        assert!(Monomial::var(3, 1).is_coprime(&a));
    }

    #[test]
    fn counts_monomials() {
        assert_eq!(monomials_of_degree(5, 4).len(), 70);
        assert_eq!(monomials_of_degree(8, 2).len(), 36);
        assert_eq!(monomials_of_degree(5, 17).len(), binomial(21, 4) as usize);
        assert_eq!(binomial(13, 4), 715);
    }
}
