//! Scissor arithmetic for the blowup of P^4 along the base surface of either
//! side of the Cremona transformation, in the polynomial ring generated by the
//! Lefschetz class `L` and the opaque classes `[R_L]`, `[R_M]` of the two K3
//! surfaces.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::k3pipeline::{count_projective_points, PipelineRun};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MotivicError {
    #[error("stratification of the {side} side gives {stratified}, closed form is {closed}")]
    BlowupMismatch {
        side: Side,
        stratified: MotivicExpression,
        closed: MotivicExpression,
    },
    #[error("difference of the two sides is {found}, expected {expected}")]
    AnnihilationMismatch {
        found: MotivicExpression,
        expected: MotivicExpression,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    L,
    M,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::L => write!(f, "L"),
            Side::M => write!(f, "M"),
        }
    }
}

/// `L^lefschetz [R_L]^r_l [R_M]^r_m`
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub lefschetz: u32,
    pub r_l: u32,
    pub r_m: u32,
}

impl Monomial {
    fn times(self, o: Self) -> Self {
        Self {
            lefschetz: self.lefschetz + o.lefschetz,
            r_l: self.r_l + o.r_l,
            r_m: self.r_m + o.r_m,
        }
    }
}

/// A Z-linear combination of monomials, always stored expanded with zero
/// coefficients dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MotivicExpression(BTreeMap<Monomial, i128>);

impl MotivicExpression {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn int(c: i128) -> Self {
        Self::term(Monomial::default(), c)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    /// The Lefschetz class `L = [A^1]`.
    pub fn lefschetz() -> Self {
        Self::term(
            Monomial {
                lefschetz: 1,
                ..Monomial::default()
            },
            1,
        )
    }

    /// The class `[R_L]` or `[R_M]` of the K3 surface on one side.
    pub fn k3(side: Side) -> Self {
        let m = match side {
            Side::L => Monomial {
                r_l: 1,
                ..Monomial::default()
            },
            Side::M => Monomial {
                r_m: 1,
                ..Monomial::default()
            },
        };
        Self::term(m, 1)
    }

    pub fn term(m: Monomial, c: i128) -> Self {
        let mut out = Self::default();
        out.add_term(m, c);
        out
    }

    fn add_term(&mut self, m: Monomial, c: i128) {
        let e = self.0.entry(m).or_insert(0);
        *e += c;
        if *e == 0 {
            self.0.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, i128)> + '_ {
        self.0.iter().map(|(&m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: Monomial) -> i128 {
        self.0.get(&m).copied().unwrap_or(0)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Replaces `[R_side]` by `value`.
    pub fn substitute(&self, side: Side, value: &Self) -> Self {
        let mut out = Self::zero();
        for (m, c) in self.terms() {
            let (k, rest) = match side {
                Side::L => (m.r_l, Monomial { r_l: 0, ..m }),
                Side::M => (m.r_m, Monomial { r_m: 0, ..m }),
            };
            out = out + &(&Self::term(rest, c) * &value.pow(k));
        }
        out
    }

    /// The counting realization: `L -> q` and the K3 classes to point counts.
    pub fn count(&self, q: i128, r_l: i128, r_m: i128) -> i128 {
        self.terms()
            .map(|(m, c)| c * q.pow(m.lefschetz) * r_l.pow(m.r_l) * r_m.pow(m.r_m))
            .sum()
    }
}

impl Add<&MotivicExpression> for MotivicExpression {
    type Output = MotivicExpression;
    fn add(mut self, rhs: &MotivicExpression) -> MotivicExpression {
        for (m, c) in rhs.terms() {
            self.add_term(m, c);
        }
        self
    }
}

impl Add for MotivicExpression {
    type Output = MotivicExpression;
    fn add(self, rhs: MotivicExpression) -> MotivicExpression {
        self + &rhs
    }
}

impl Neg for MotivicExpression {
    type Output = MotivicExpression;
    fn neg(mut self) -> MotivicExpression {
        self.0.values_mut().for_each(|c| *c = -*c);
        self
    }
}

impl Sub<&MotivicExpression> for MotivicExpression {
    type Output = MotivicExpression;
    fn sub(self, rhs: &MotivicExpression) -> MotivicExpression {
        self + &(-rhs.clone())
    }
}

impl Sub for MotivicExpression {
    type Output = MotivicExpression;
    fn sub(self, rhs: MotivicExpression) -> MotivicExpression {
        self - &rhs
    }
}

impl Mul for &MotivicExpression {
    type Output = MotivicExpression;
    fn mul(self, rhs: &MotivicExpression) -> MotivicExpression {
        let mut out = MotivicExpression::zero();
        for (a, x) in self.terms() {
            for (b, y) in rhs.terms() {
                out.add_term(a.times(b), x * y);
            }
        }
        out
    }
}

impl Mul for MotivicExpression {
    type Output = MotivicExpression;
    fn mul(self, rhs: MotivicExpression) -> MotivicExpression {
        &self * &rhs
    }
}

impl fmt::Display for MotivicExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // K3 classes first, then descending powers of L
        let mut terms: Vec<_> = self.terms().collect();
        terms.sort_by_key(|(m, _)| std::cmp::Reverse((m.r_l + m.r_m, m.r_l, m.lefschetz)));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let mut factors = Vec::new();
            for (name, e) in [("[R_L]", m.r_l), ("[R_M]", m.r_m), ("L", m.lefschetz)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    e => factors.push(format!("{name}^{e}")),
                }
            }
            let body = factors.join("*");
            let a = c.abs();
            let text = match (body.is_empty(), a) {
                (true, _) => a.to_string(),
                (false, 1) => body,
                (false, _) => format!("{a}*{body}"),
            };
            match (i, c < 0) {
                (0, true) => write!(f, "-{text}")?,
                (0, false) => write!(f, "{text}")?,
                (_, true) => write!(f, " - {text}")?,
                (_, false) => write!(f, " + {text}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for MotivicExpression {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `[P^n] = 1 + L + ... + L^n`
pub fn projective_class(n: u32) -> MotivicExpression {
    (0..=n).fold(MotivicExpression::zero(), |acc, k| {
        acc + MotivicExpression::lefschetz().pow(k)
    })
}

/// Number of double points on each base surface.
pub const NODES: i128 = 3;

/// `[S] = [R] + 3L - 3`: the normalization is `R` blown up at three points,
/// and it maps onto `S` identifying three pairs of points.
pub fn base_surface_class(side: Side) -> MotivicExpression {
    let nodes = MotivicExpression::int(NODES);
    MotivicExpression::k3(side) + &(&nodes * &MotivicExpression::lefschetz()) - &nodes
}

/// The successive lines of the stratification of the blowup `X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlowupDerivation {
    pub side: Side,
    /// `[P^4] - [S]`
    pub complement: MotivicExpression,
    /// `([S] - 3)[P^1] + 3[P^1]^2`: P^1-bundle over the smooth part plus a
    /// quadric surface over each node.
    pub exceptional: MotivicExpression,
    pub stratified: MotivicExpression,
    /// `[P^4] + 3[P^1]L + [R]L + 3L^2 - 3L`
    pub closed_form: MotivicExpression,
}

pub fn blowup_derivation(side: Side) -> BlowupDerivation {
    let l = MotivicExpression::lefschetz();
    let three = MotivicExpression::int(NODES);
    let p1 = projective_class(1);
    let s = base_surface_class(side);
    let complement = projective_class(4) - &s;
    let exceptional = &(s - &three) * &p1 + &three * &p1.pow(2);
    let stratified = complement.clone() + &exceptional;
    let closed_form = projective_class(4)
        + &(&(&three * &p1) * &l)
        + &(&MotivicExpression::k3(side) * &l)
        + &(&three * &l.pow(2))
        - &(&three * &l);
    BlowupDerivation {
        side,
        complement,
        exceptional,
        stratified,
        closed_form,
    }
}

/// `[X]` computed from the stratification, checked against the closed form.
pub fn blowup_class(side: Side) -> Result<MotivicExpression, MotivicError> {
    let d = blowup_derivation(side);
    if d.stratified != d.closed_form {
        return Err(MotivicError::BlowupMismatch {
            side,
            stratified: d.stratified,
            closed: d.closed_form,
        });
    }
    Ok(d.stratified)
}

/// `([R_L] - [R_M]) L`
pub fn expected_annihilation() -> MotivicExpression {
    &(MotivicExpression::k3(Side::L) - MotivicExpression::k3(Side::M)) * &MotivicExpression::lefschetz()
}

/// The difference of the two expressions for `[X]`, checked to be
/// `([R_L] - [R_M]) L` monomial by monomial.
pub fn annihilation_identity() -> Result<MotivicExpression, MotivicError> {
    let diff = blowup_class(Side::L)? - blowup_class(Side::M)?;
    let expected = expected_annihilation();
    if diff != expected {
        return Err(MotivicError::AnnihilationMismatch {
            found: diff,
            expected,
        });
    }
    Ok(diff)
}

/// F_q-point counts of the surfaces on both sides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PointCounts {
    pub q: i128,
    /// `#R_L`, the K3 surface in P^7.
    pub r_l: i128,
    /// `#S`, the base surface of the map.
    pub s: i128,
    /// `#T`, the base surface of the inverse.
    pub t: i128,
}

impl PointCounts {
    pub fn from_run(run: &PipelineRun) -> Self {
        let count = |ideal| i128::from(count_projective_points(ideal));
        Self {
            q: i128::from(run.input.field().modulus()),
            r_l: count(&run.section),
            s: count(&run.surface),
            t: count(&run.base),
        }
    }
}

/// The counting realization of the identities at one prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PointCountRealization {
    pub counts: PointCounts,
    /// `#R_M`, reconstructed as `#T - 3q + 3`; no section matrix of the
    /// second K3 surface is available.
    pub r_m: i128,
    /// `#S - #R_L`, which should be `3q - 3`.
    pub l_side_offset: i128,
    /// `#X` from the strata over `S`.
    pub x_from_l: i128,
    /// `#X` from the strata over `T`.
    pub x_from_m: i128,
    /// `#X` from the closed form on the L side.
    pub x_closed_l: i128,
    /// `(#R_L - #R_M) q`
    pub annihilation: i128,
}

impl PointCountRealization {
    pub fn holds(&self) -> bool {
        let q = self.counts.q;
        self.l_side_offset == NODES * q - NODES
            && self.x_from_l == self.x_from_m
            && self.x_from_l == self.x_closed_l
            && self.annihilation == 0
            && self.counts.r_l == self.r_m
    }
}

fn strata_count(q: i128, surface: i128) -> i128 {
    let p1 = q + 1;
    projective_class(4).count(q, 0, 0) - surface + (surface - NODES) * p1 + NODES * p1 * p1
}

pub fn point_count_realization(counts: PointCounts) -> PointCountRealization {
    let q = counts.q;
    let r_m = counts.t - (NODES * q - NODES);
    let closed = blowup_derivation(Side::L).closed_form;
    PointCountRealization {
        counts,
        r_m,
        l_side_offset: counts.s - counts.r_l,
        x_from_l: strata_count(q, counts.s),
        x_from_m: strata_count(q, counts.t),
        x_closed_l: closed.count(q, counts.r_l, r_m),
        annihilation: expected_annihilation().count(q, counts.r_l, r_m),
    }
}
