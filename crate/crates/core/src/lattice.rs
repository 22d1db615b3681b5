//! Integer lattices: Smith normal form, discriminant groups and the rank-8
//! algebraic lattice of the Cremona resolution, with its two bases.

use std::fmt;
use std::ops::RangeInclusive;

use num_rational::Ratio;
use num_traits::Signed;
use serde::Serialize;

use crate::intersect::{ExceptionalNumbers, MixedNumbers};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("matrix is not square and symmetric")]
    NotSymmetric,
    #[error("Gram matrix is singular")]
    Singular,
    #[error("{0} basis labels for a rank {1} lattice")]
    LabelCount(usize, usize),
    #[error("no class satisfies the constraints")]
    NoSolution,
    #[error("{} classes satisfy the constraints: {candidates:?}", candidates.len())]
    MultipleSolutions { candidates: Vec<ClassVector> },
    #[error("solution {0:?} is not the Cauchy-Schwarz equality case")]
    NotEqualityCase(ClassVector),
    #[error("base change does not preserve the Gram matrix")]
    NotIsometry,
    #[error("discriminant group is not cyclic")]
    NotCyclic,
    #[error("image of the generator is not in the dual lattice")]
    NotInDual,
}

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn diagonal(entries: &[i128]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows<R: AsRef<[i128]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged matrix");
            data.extend_from_slice(r.as_ref());
        }
        Self {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i128 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i128) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i128] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i128> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i128>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i128]) -> Vec<i128> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && *self == self.transpose()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j) == 0))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> i128 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = 1;
        let mut prev = 1;
        for k in 0..n {
            if a.get(k, k) == 0 {
                let Some(p) = (k + 1..n).find(|&i| a.get(i, k) != 0) else {
                    return 0;
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k);
        }
        if n == 0 {
            1
        } else {
            sign * a.get(n - 1, n - 1)
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: i128) {
        for j in 0..self.cols {
            let v = self.get(src, j);
            self.data[dst * self.cols + j] += k * v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: i128) {
        for i in 0..self.rows {
            let v = self.get(i, src);
            self.data[i * self.cols + dst] += k * v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self.data[i * self.cols + j] = -self.data[i * self.cols + j];
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

/// `U * A * V = D` with `U`, `V` unimodular and `D` diagonal, each diagonal
/// entry dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<i128> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d.get(i, i)).collect()
    }
}

/// Smith normal form by row and column operations, pivoting on the smallest
/// nonzero entry of the remaining block. Meant for small matrices: the
/// transforms are not size-reduced, so `u` and `v` grow fast past 5x5.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    for t in 0..m.min(n) {
        loop {
            let pivot = (t..m)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| d.get(i, j) != 0)
                .min_by_key(|&(i, j)| d.get(i, j).abs());
            let Some((pi, pj)) = pivot else {
                return SmithForm { u, d, v };
            };
            if pi != t {
                d.swap_rows(t, pi);
                u.swap_rows(t, pi);
            }
            if pj != t {
                d.swap_cols(t, pj);
                v.swap_cols(t, pj);
            }
            let p = d.get(t, t);
            let mut clean = true;
            for i in t + 1..m {
                let q = d.get(i, t) / p;
                if q != 0 {
                    d.add_row(i, t, -q);
                    u.add_row(i, t, -q);
                }
                clean &= d.get(i, t) == 0;
            }
            for j in t + 1..n {
                let q = d.get(t, j) / p;
                if q != 0 {
                    d.add_col(j, t, -q);
                    v.add_col(j, t, -q);
                }
                clean &= d.get(t, j) == 0;
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| d.get(i, j) % p != 0));
            match offender {
                Some(i) => {
                    d.add_row(t, i, 1);
                    u.add_row(t, i, 1);
                }
                None => break,
            }
        }
        if d.get(t, t) < 0 {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { u, d, v }
}

/// A nondegenerate integral lattice given by its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GramLattice {
    gram: IntMatrix,
    labels: Vec<String>,
}

/// Labels of the basis `L^2, H_L, F_1..3, Q_1..3` of the algebraic lattice.
pub const L_SIDE_LABELS: [&str; 8] = ["L^2", "H_L", "F_1", "F_2", "F_3", "Q_1", "Q_2", "Q_3"];
/// Labels of the basis coming from the inverse map.
pub const M_SIDE_LABELS: [&str; 8] = ["M^2", "H_M", "G_1", "G_2", "G_3", "K_1", "K_2", "K_3"];

/// Index of the polarization class in the algebraic lattice basis.
pub const POLARIZATION: usize = 1;

impl GramLattice {
    pub fn new(gram: IntMatrix, labels: Vec<String>) -> Result<Self, LatticeError> {
        if !gram.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        if labels.len() != gram.rows() {
            return Err(LatticeError::LabelCount(labels.len(), gram.rows()));
        }
        if gram.det() == 0 {
            return Err(LatticeError::Singular);
        }
        Ok(Self { gram, labels })
    }

    /// The algebraic lattice of the resolution: `diag(1, -2g, 1, 1, 1, 1, 1, 1)`
    /// for a K3 of degree `2g`, here degree 12.
    pub fn algebraic(k3_degree: i128) -> Self {
        let gram = IntMatrix::diagonal(&[1, -k3_degree, 1, 1, 1, 1, 1, 1]);
        Self::new(gram, L_SIDE_LABELS.iter().map(|s| s.to_string()).collect())
            .expect("nonsingular for positive degree")
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn pairing(&self, a: &[i128], b: &[i128]) -> i128 {
        a.iter().zip(self.gram.mul_vec(b)).map(|(x, y)| x * y).sum()
    }

    pub fn norm(&self, a: &[i128]) -> i128 {
        self.pairing(a, a)
    }

    pub fn is_isometry(&self, t: &IntMatrix) -> bool {
        t.mul(&self.gram).mul(&t.transpose()) == self.gram
    }
}

pub type Rational = Ratio<i128>;

/// `Lambda^* / Lambda` as a sum of cyclic groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantGroup {
    /// Invariant factors greater than one, each dividing the next.
    pub invariant_factors: Vec<i128>,
    /// One generator per factor, in coordinates of the lattice basis.
    pub generators: Vec<Vec<Rational>>,
}

impl DiscriminantGroup {
    pub fn order(&self) -> i128 {
        self.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }
}

fn reduce_mod_one(x: Rational) -> Rational {
    // representative in (-1/2, 1/2]
    let mut r = x - x.floor();
    if r > Ratio::new(1, 2) {
        r -= 1;
    }
    r
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Among the generators `k g` of the cyclic group generated by `g`, the one
/// with fewest nonzero coordinates, then smallest coordinates, then a negative
/// first nonzero coordinate.
fn canonical_generator(g: &[Rational], order: i128) -> Vec<Rational> {
    (1..order)
        .filter(|&k| gcd(k, order) == 1)
        .map(|k| g.iter().map(|&x| reduce_mod_one(x * k)).collect::<Vec<_>>())
        .min_by_key(|c| {
            let nonzero = c.iter().filter(|x| **x != Ratio::from_integer(0)).count();
            let size: Rational = c.iter().map(|x| x.abs()).sum();
            let positive_lead = c
                .iter()
                .find(|x| **x != Ratio::from_integer(0))
                .is_some_and(|x| *x > Ratio::from_integer(0));
            (nonzero, size, positive_lead)
        })
        .unwrap_or_else(|| g.to_vec())
}

/// With `U G V = D`, the dual lattice is `V D^{-1} Z^n`, so the columns of `V`
/// divided by the invariant factors generate `Lambda^* / Lambda`.
pub fn discriminant_group(lattice: &GramLattice) -> Result<DiscriminantGroup, LatticeError> {
    let snf = smith_normal_form(lattice.gram());
    let mut factors = Vec::new();
    let mut generators = Vec::new();
    for (i, &d) in snf.diagonal().iter().enumerate() {
        if d == 0 {
            return Err(LatticeError::Singular);
        }
        if d > 1 {
            let g: Vec<Rational> = snf.v.column(i).iter().map(|&x| Ratio::new(x, d)).collect();
            generators.push(canonical_generator(&g, d));
            factors.push(d);
        }
    }
    Ok(DiscriminantGroup {
        invariant_factors: factors,
        generators,
    })
}

/// Coefficients `(a, b, f_1, f_2, f_3, g_1, g_2, g_3)` of a class in the basis
/// `L^2, H_L, F_1..3, Q_1..3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ClassVector(pub [i128; 8]);

impl ClassVector {
    pub fn a(&self) -> i128 {
        self.0[0]
    }

    pub fn b(&self) -> i128 {
        self.0[1]
    }

    pub fn f(&self) -> [i128; 3] {
        [self.0[2], self.0[3], self.0[4]]
    }

    pub fn g(&self) -> [i128; 3] {
        [self.0[5], self.0[6], self.0[7]]
    }
}

/// `p b + q`
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Affine {
    pub p: i128,
    pub q: i128,
}

impl Affine {
    pub fn at(&self, b: i128) -> i128 {
        self.p * b + self.q
    }
}

/// How the `Q_i`-coefficients are constrained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum QCondition {
    /// Each `g_i` equals this value.
    Each(i128),
    /// `g_1 + g_2 + g_3` is affine in `b`.
    Sum(Affine),
}

/// Constraints on an unknown class `aL^2 + bH + sum f_i F_i + sum g_i Q_i`
/// in the algebraic lattice `diag(1, h2, 1, .., 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClassConstraints {
    /// Self-intersection `H^2` of the polarization class.
    pub h2: i128,
    pub a: i128,
    /// `f_1 + f_2 + f_3`
    pub f_sum: Affine,
    pub q: QCondition,
    pub self_intersection: i128,
}

impl ClassConstraints {
    /// Constraints on `M^2`: `a = L^2M^2`, `g_i = M^2 Q_i = -M^2 E'^2_i`,
    /// the pairing with `LM` equals `LM^3` and the norm is `M^4`.
    pub fn m_squared(n: i128, mixed: &MixedNumbers, ex: &ExceptionalNumbers, h2: i128) -> Self {
        // M = nL - E - 2 sum E'_j and L E'_i = 0, so only (E + 2 E'_i)^2 E'_i^2 survives
        let g = -(ex.e2_ei2 + 4 * ex.e_ei3 + 4 * ex.ei4);
        let a = mixed.l2m2;
        // LM = nL^2 - H_L + sum F_i, so <x, LM> = n a - h2 b + sum f
        Self {
            h2,
            a,
            f_sum: Affine {
                p: h2,
                q: mixed.lm3 - n * a,
            },
            q: QCondition::Each(g),
            self_intersection: mixed.m4,
        }
    }

    /// Constraints on `H_M` from the symmetry `H_M L^k M^(2-k) = H_L M^k L^(2-k)`:
    /// `a = H_M L^2 = H_L M^2`, `<H_M, LM> = <H_L, LM>`, `<H_M, M^2> = H_L L^2 = 0`
    /// and `H_M^2 = H_L^2`.
    pub fn h_m(n: i128, m_squared: &ClassVector, h2: i128) -> Self {
        let a = h2 * m_squared.b();
        let h_lm = -h2; // <H_L, nL^2 - H_L + sum F_i>
        let f_sum = Affine {
            p: h2,
            q: h_lm - n * a,
        };
        // <x, M^2> = a a' + h2 b b' + f' sum f + g' sum g = 0 with symmetric M^2
        let [fm, _, _] = m_squared.f();
        let [gm, _, _] = m_squared.g();
        // gm * sum g = -(a_m a + h2 b_m b + fm (p b + q))
        let num_p = -(h2 * m_squared.b() + fm * f_sum.p);
        let num_q = -(m_squared.a() * a + fm * f_sum.q);
        let q = QCondition::Sum(Affine {
            p: num_p / gm,
            q: num_q / gm,
        });
        Self {
            h2,
            a,
            f_sum,
            q,
            self_intersection: h2,
        }
    }

    /// `sum f_i^2 + sum g_i^2 = self_intersection - a^2 - h2 b^2`.
    fn free_norm(&self, b: i128) -> i128 {
        self.self_intersection - self.a * self.a - self.h2 * b * b
    }

    /// Coefficients `[alpha, beta, gamma]` (divided by their gcd) with
    /// `alpha b^2 + beta b + gamma <= 0` necessary for a solution, from
    /// Cauchy-Schwarz applied to the `f` and `g` triples.
    pub fn window_polynomial(&self) -> [i128; 3] {
        let (p, q) = (self.f_sum.p, self.f_sum.q);
        // (p b + q)^2 [+ (r b + s)^2] - 3 (N - a^2 - h2 b^2 [- 3 g^2]) <= 0
        let n0 = self.self_intersection - self.a * self.a;
        let mut c = [p * p + 3 * self.h2, 2 * p * q, q * q - 3 * n0];
        match self.q {
            QCondition::Each(g) => c[2] += 9 * g * g,
            QCondition::Sum(s) => {
                c[0] += s.p * s.p;
                c[1] += 2 * s.p * s.q;
                c[2] += s.q * s.q;
            }
        }
        let g = gcd(gcd(c[0], c[1]), c[2]);
        if g > 1 {
            c.iter_mut().for_each(|x| *x /= g);
        }
        if c[0] < 0 {
            c.iter_mut().for_each(|x| *x = -*x);
        }
        c
    }

    /// Integer `b` satisfying the window inequality (empty range when none).
    pub fn search_window(&self) -> RangeInclusive<i128> {
        let [a, b, c] = self.window_polynomial();
        let value = |x: i128| a * x * x + b * x + c;
        let disc = (b * b - 4 * a * c) as f64;
        if a <= 0 || disc < 0.0 {
            return 1..=0;
        }
        let (lo, hi) = (
            ((-b as f64) - disc.sqrt()) / (2.0 * a as f64),
            ((-b as f64) + disc.sqrt()) / (2.0 * a as f64),
        );
        // widen by one on each side and let the exact test decide
        let mut start = lo.floor() as i128 - 1;
        let mut end = hi.ceil() as i128 + 1;
        while start <= end && value(start) > 0 {
            start += 1;
        }
        while end >= start && value(end) > 0 {
            end -= 1;
        }
        start..=end
    }

    /// Every class satisfying the constraints with `b` in `range`, by
    /// enumeration of the free coefficients.
    pub fn solutions_in(&self, range: RangeInclusive<i128>) -> Vec<ClassVector> {
        let mut out = Vec::new();
        for b in range {
            let total = self.free_norm(b);
            if total < 0 {
                continue;
            }
            let s_f = self.f_sum.at(b);
            let bound = isqrt(total);
            for f1 in -bound..=bound {
                for f2 in -bound..=bound {
                    let f3 = s_f - f1 - f2;
                    let nf = f1 * f1 + f2 * f2 + f3 * f3;
                    if nf > total {
                        continue;
                    }
                    let rest = total - nf;
                    match self.q {
                        QCondition::Each(g) => {
                            if rest == 3 * g * g {
                                out.push(ClassVector([self.a, b, f1, f2, f3, g, g, g]));
                            }
                        }
                        QCondition::Sum(s) => {
                            let s_g = s.at(b);
                            let gb = isqrt(rest);
                            for g1 in -gb..=gb {
                                for g2 in -gb..=gb {
                                    let g3 = s_g - g1 - g2;
                                    if g1 * g1 + g2 * g2 + g3 * g3 == rest {
                                        out.push(ClassVector([self.a, b, f1, f2, f3, g1, g2, g3]));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

fn isqrt(n: i128) -> i128 {
    if n <= 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// The unique class meeting the constraints; it must be the equality case of
/// Cauchy-Schwarz (all `f_i` equal and all `g_i` equal).
pub fn solve_class_decomposition(c: &ClassConstraints) -> Result<ClassVector, LatticeError> {
    let mut found = c.solutions_in(c.search_window());
    match found.len() {
        0 => Err(LatticeError::NoSolution),
        1 => {
            let v = found.pop().expect("one element");
            let [f1, f2, f3] = v.f();
            let [g1, g2, g3] = v.g();
            if f1 == f2 && f2 == f3 && g1 == g2 && g2 == g3 {
                Ok(v)
            } else {
                Err(LatticeError::NotEqualityCase(v))
            }
        }
        _ => Err(LatticeError::MultipleSolutions { candidates: found }),
    }
}

/// Rows `M^2, H_M, G_1..3, K_1..3` in the basis `L^2, H_L, F_1..3, Q_1..3`.
pub const BASE_CHANGE: [[i128; 8]; 8] = [
    [7, -3, 4, 4, 4, 2, 2, 2],
    [36, -17, 24, 24, 24, 12, 12, 12],
    [4, -2, 3, 3, 3, 2, 1, 1],
    [4, -2, 3, 3, 3, 1, 2, 1],
    [4, -2, 3, 3, 3, 1, 1, 2],
    [2, -1, 2, 1, 1, 1, 1, 1],
    [2, -1, 1, 2, 1, 1, 1, 1],
    [2, -1, 1, 1, 2, 1, 1, 1],
];

/// The full base change between the two bases of the algebraic lattice,
/// checked to be an isometry of `lattice`.
pub fn full_base_change(lattice: &GramLattice) -> Result<IntMatrix, LatticeError> {
    let t = IntMatrix::from_rows(&BASE_CHANGE);
    if !lattice.is_isometry(&t) {
        return Err(LatticeError::NotIsometry);
    }
    Ok(t)
}

/// Multiplier `k` in `[0, order)` with `phi_*(gen) = k * gen`, where the
/// rows of `t` express the second basis in the first and `generator` is the
/// same generator (in its own basis coordinates) on both sides.
pub fn discriminant_action_with(
    lattice: &GramLattice,
    t: &IntMatrix,
    generator: &[Rational],
    order: i128,
) -> Result<i128, LatticeError> {
    let n = lattice.rank();
    // coordinates in the first basis: t^T applied to the generator
    let image: Vec<Rational> = (0..n)
        .map(|j| (0..n).map(|i| generator[i] * t.get(i, j)).sum())
        .collect();
    let in_dual = (0..n).all(|i| {
        let v: Rational = (0..n).map(|j| image[j] * lattice.gram().get(i, j)).sum();
        v.is_integer()
    });
    if !in_dual {
        return Err(LatticeError::NotInDual);
    }
    (0..order)
        .find(|&k| {
            image
                .iter()
                .zip(generator)
                .all(|(&x, &g)| (x - g * k).is_integer())
        })
        .ok_or(LatticeError::NotInDual)
}

/// Action of the base change on the cyclic discriminant group, using the
/// canonical generator of [`discriminant_group`] on both sides.
pub fn discriminant_action(lattice: &GramLattice, t: &IntMatrix) -> Result<i128, LatticeError> {
    let group = discriminant_group(lattice)?;
    if group.invariant_factors.len() != 1 {
        return Err(LatticeError::NotCyclic);
    }
    discriminant_action_with(lattice, t, &group.generators[0], group.invariant_factors[0])
}
