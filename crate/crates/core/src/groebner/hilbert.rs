//! Hilbert series of monomial ideals and the data derived from them.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use super::Ideal;
use crate::ffpoly::{binomial, Monomial, MonomialOrder};

/// Polynomial in one variable with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertPolynomial(Vec<Ratio<i64>>);

impl HilbertPolynomial {
    pub fn new(mut coeffs: Vec<Ratio<i64>>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Ratio::from_integer(c)).collect())
    }

    pub fn coefficients(&self) -> &[Ratio<i64>] {
        &self.0
    }

    /// Degree, with `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.0.len() as i64 - 1
    }

    pub fn leading_coefficient(&self) -> Ratio<i64> {
        self.0.last().copied().unwrap_or_else(Ratio::zero)
    }

    pub fn evaluate(&self, s: i64) -> Ratio<i64> {
        self.0
            .iter()
            .rev()
            .fold(Ratio::zero(), |acc, &c| acc * Ratio::from_integer(s) + c)
    }

    fn mul_linear(&self, a: i64) -> Self {
        // (s + a) * self
        let mut out = vec![Ratio::zero(); self.0.len() + 1];
        for (i, &c) in self.0.iter().enumerate() {
            out[i + 1] += c;
            out[i] += c * Ratio::from_integer(a);
        }
        Self::new(out)
    }
}

impl fmt::Display for HilbertPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if c.is_negative() {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                if mag.is_integer() {
                    write!(f, "{}", mag.numer())?;
                } else {
                    write!(f, "{}/{}", mag.numer(), mag.denom())?;
                }
            }
            match i {
                0 => {}
                1 => f.write_str("t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}

/// Hilbert polynomial, projective dimension and degree of `R/I`.
///
/// The unit ideal and ideals whose quotient has finite length both report
/// projective dimension `-1` and degree `0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertData {
    pub hilbert_polynomial: HilbertPolynomial,
    pub projective_dimension: i64,
    pub degree: i64,
    /// Numerator `N(t)` of the Hilbert series `N(t) / (1 - t)^n`.
    pub numerator: Vec<i64>,
    pub nvars: usize,
}

impl HilbertData {
    pub fn from_numerator(numerator: Vec<i64>, nvars: usize) -> Self {
        let mut q = numerator.clone();
        while q.last() == Some(&0) {
            q.pop();
        }
        if q.is_empty() {
            return Self {
                hilbert_polynomial: HilbertPolynomial::new(Vec::new()),
                projective_dimension: -1,
                degree: 0,
                numerator,
                nvars,
            };
        }
        let mut krull = nvars as i64;
        while q.iter().sum::<i64>() == 0 {
            // divide by (1 - t)
            let mut acc = 0;
            let mut out = Vec::with_capacity(q.len() - 1);
            for &c in &q[..q.len() - 1] {
                acc += c;
                out.push(acc);
            }
            q = out;
            krull -= 1;
        }
        if krull <= 0 {
            return Self {
                hilbert_polynomial: HilbertPolynomial::new(Vec::new()),
                projective_dimension: -1,
                degree: 0,
                numerator,
                nvars,
            };
        }
        let degree = q.iter().sum();
        // HP(s) = sum_i q_i * C(s - i + D - 1, D - 1), D = krull
        let dm1 = krull - 1;
        let fact: i64 = (1..=dm1).product();
        let mut hp = HilbertPolynomial::new(Vec::new());
        for (i, &qi) in q.iter().enumerate() {
            if qi == 0 {
                continue;
            }
            let a = dm1 - i as i64;
            let mut b = HilbertPolynomial::from_integers(&[1]);
            for j in 0..dm1 {
                b = b.mul_linear(a - j);
            }
            let scale = Ratio::new(qi, fact);
            let mut coeffs = hp.0.clone();
            coeffs.resize(coeffs.len().max(b.0.len()), Ratio::zero());
            for (k, c) in b.0.iter().enumerate() {
                coeffs[k] += *c * scale;
            }
            hp = HilbertPolynomial::new(coeffs);
        }
        Self {
            hilbert_polynomial: hp,
            projective_dimension: krull - 1,
            degree,
            numerator,
            nvars,
        }
    }

    /// Value of the Hilbert function of `R/I` in degree `t`.
    pub fn hilbert_function(&self, t: u32) -> u64 {
        hilbert_function(&self.numerator, self.nvars, t)
    }
}

pub(crate) fn hilbert_function(numerator: &[i64], nvars: usize, t: u32) -> u64 {
    if nvars == 0 {
        return numerator.first().copied().unwrap_or(0).max(0) as u64 * u64::from(t == 0);
    }
    let mut total: i128 = 0;
    for (i, &c) in numerator.iter().enumerate() {
        if i as u32 > t || c == 0 {
            continue;
        }
        let k = (t - i as u32) as u64;
        total += c as i128 * binomial(k + nvars as u64 - 1, nvars as u64 - 1) as i128;
    }
    u64::try_from(total).expect("Hilbert function is nonnegative")
}

fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(|m| m.degree());
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::with_capacity(gens.len());
    for m in gens {
        if !out.iter().any(|g| g.divides(&m)) {
            out.push(m);
        }
    }
    out
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add_shifted(a: &mut Vec<i64>, b: &[i64], shift: usize) {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, 0);
    }
    for (j, &y) in b.iter().enumerate() {
        a[j + shift] += y;
    }
}

fn numerator_rec(gens: Vec<Monomial>) -> Vec<i64> {
    let gens = minimalize(gens);
    if gens.is_empty() {
        return vec![1];
    }
    if gens.iter().any(|m| m.is_one()) {
        return vec![0];
    }
    let pairwise_coprime = gens
        .iter()
        .enumerate()
        .all(|(i, a)| gens[i + 1..].iter().all(|b| a.is_coprime(b)));
    if pairwise_coprime {
        return gens.iter().fold(vec![1], |acc, m| {
            let mut f = vec![0; m.degree() as usize + 1];
            f[0] = 1;
            f[m.degree() as usize] = -1;
            poly_mul(&acc, &f)
        });
    }
    let n = gens[0].nvars();
    let var = (0..n)
        .max_by_key(|&i| (gens.iter().filter(|m| m.exponent(i) > 0).count(), std::cmp::Reverse(i)))
        .expect("at least one variable");
    let mut exps: Vec<u32> = gens
        .iter()
        .map(|m| m.exponent(var))
        .filter(|&e| e > 0)
        .collect();
    exps.sort_unstable();
    let mut e = exps[exps.len() / 2];
    // the pivot must lie outside the ideal; x itself does, since `var` occurs
    // in at least two minimal generators
    if gens.iter().any(|m| m.degree() == m.exponent(var) && m.exponent(var) <= e) {
        e = 1;
    }
    let mut pivot = Monomial::one(n);
    pivot.set_exponent(var, e as u8);

    let mut plus = gens.clone();
    plus.push(pivot);
    let colon: Vec<Monomial> = gens
        .iter()
        .map(|m| {
            let mut q = *m;
            q.set_exponent(var, m.exponent(var).saturating_sub(e) as u8);
            q
        })
        .collect();
    let mut out = numerator_rec(plus);
    poly_add_shifted(&mut out, &numerator_rec(colon), e as usize);
    out
}

/// Numerator `N(t)` of the Hilbert series `N(t)/(1-t)^n` of `R / <gens>`.
pub fn hilbert_numerator(gens: &[Monomial]) -> Vec<i64> {
    let mut n = numerator_rec(gens.to_vec());
    while n.len() > 1 && n.last() == Some(&0) {
        n.pop();
    }
    n
}

/// Hilbert data of `R/I`, read off the leading monomials of a degrevlex basis.
pub fn hilbert_data(ideal: &Ideal) -> HilbertData {
    let basis = ideal.groebner(MonomialOrder::DegRevLex);
    HilbertData::from_numerator(hilbert_numerator(&basis.leading_monomials()), ideal.ring().nvars())
}
