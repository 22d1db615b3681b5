//! Intersection numbers on the blowup of P^4 along a surface with transverse
//! double points, as closed-form integer formulas.
//!
//! Notation: `L` is the hyperplane class, `E` the exceptional divisor over the
//! surface, `E'_i` the divisors over the double points and
//! `M = nL - m(E + 2 sum E'_i)` the pullback of the hyperplane class through
//! the Cremona map.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntersectError {
    #[error("invalid surface invariants: {0}")]
    InvalidInvariants(String),
    #[error("the two expressions for E^4 disagree: {first} vs {second}")]
    E4Mismatch { first: i128, second: i128 },
    #[error("the two expansions of M^4 disagree: {first} vs {second}")]
    M4Mismatch { first: i128, second: i128 },
    #[error("double-point class {0} is odd")]
    OddDoublePointClass(i128),
    #[error("{what} = {numerator}/{denominator} is not an integer")]
    NonIntegral {
        what: &'static str,
        numerator: i128,
        denominator: i128,
    },
}

/// Numerical data of a Cremona map of P^4 and of the normalization `Sigma`
/// of its base surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceInvariants {
    /// Degree of the forms of the map.
    pub n: i128,
    /// Multiplicity of the surface in the base locus.
    pub m: i128,
    /// Degree of the forms of the inverse.
    pub xi: i128,
    /// Degree of the surface, `C^2`.
    pub d: i128,
    /// Number of transverse double points.
    pub delta: i128,
    /// `K_Sigma . C`
    pub kc: i128,
    /// `K_Sigma^2`
    pub k2: i128,
    /// `c_2(Sigma)`
    pub c2: i128,
    /// `chi(O_Sigma)`
    pub chi: i128,
    /// Sectional genus.
    pub g: i128,
}

impl SurfaceInvariants {
    /// The nonic surface of the worked example.
    pub fn example() -> Self {
        Self {
            n: 4,
            m: 1,
            xi: 4,
            d: 9,
            delta: 3,
            kc: 3,
            k2: -3,
            c2: 27,
            chi: 2,
            g: 7,
        }
    }

    /// Checks Noether's formula, the genus formula and the sign conditions.
    pub fn validate(&self) -> Result<(), IntersectError> {
        let bad = |msg: String| Err(IntersectError::InvalidInvariants(msg));
        if self.d < 1 {
            return bad(format!("degree d = {} must be positive", self.d));
        }
        if self.delta < 0 {
            return bad(format!("node count {} is negative", self.delta));
        }
        if self.m < 1 || self.n < 2 {
            return bad(format!("need n >= 2 and m >= 1, found n = {}, m = {}", self.n, self.m));
        }
        if 12 * self.chi != self.k2 + self.c2 {
            return bad(format!(
                "Noether: 12 chi = {} but K^2 + c2 = {}",
                12 * self.chi,
                self.k2 + self.c2
            ));
        }
        if 2 * self.g - 2 != self.d + self.kc {
            return bad(format!(
                "genus formula: 2g - 2 = {} but d + KC = {}",
                2 * self.g - 2,
                self.d + self.kc
            ));
        }
        Ok(())
    }
}

/// `(L E'_i, E^3 E'_i, E^2 E'_i^2, E E'_i^3, E'_i^4)`, the same for every double point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExceptionalNumbers {
    pub l_ei: i128,
    pub e3_ei: i128,
    pub e2_ei2: i128,
    pub e_ei3: i128,
    pub ei4: i128,
}

impl ExceptionalNumbers {
    pub fn as_array(&self) -> [i128; 5] {
        [self.l_ei, self.e3_ei, self.e2_ei2, self.e_ei3, self.ei4]
    }
}

/// Each `E'_i` is P^3 blown up along two skew lines `Q', Q''`, with normal
/// bundle `O(-H)` and `E|_{E'_i} = Q' + Q''`; on it `Q'^3 = Q''^3 = -2`,
/// `Q'^2 H = -1` and `Q' Q'' = 0`.
pub fn exceptional_numbers() -> ExceptionalNumbers {
    let q_cubed = -2;
    let q_sq_h = -1;
    let h_cubed = 1;
    ExceptionalNumbers {
        l_ei: 0,
        e3_ei: 2 * q_cubed,
        // (Q' + Q'')^2 (-H)
        e2_ei2: -2 * q_sq_h,
        // (Q' + Q'') H^2 vanishes since Q' H^2 = 0
        e_ei3: 0,
        ei4: -h_cubed,
    }
}

/// `(L^3 E, L^2 E^2, L E^3, E^4)`
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LeNumbers {
    pub l3e: i128,
    pub l2e2: i128,
    pub le3: i128,
    pub e4: i128,
}

impl LeNumbers {
    pub fn as_array(&self) -> [i128; 4] {
        [self.l3e, self.l2e2, self.le3, self.e4]
    }
}

/// `E^4` from the Chern classes of `Sigma`.
pub fn e4_from_c2(s: &SurfaceInvariants) -> i128 {
    -15 * s.d - 5 * s.kc - s.c2 + 6 * s.delta
}

/// `E^4` from the canonical class of `Sigma`.
pub fn e4_from_k2(s: &SurfaceInvariants) -> i128 {
    s.d * s.d - 25 * s.d - 10 * s.kc - s.k2 + 4 * s.delta
}

pub fn le_numbers(s: &SurfaceInvariants) -> Result<LeNumbers, IntersectError> {
    s.validate()?;
    let (first, second) = (e4_from_c2(s), e4_from_k2(s));
    if first != second {
        return Err(IntersectError::E4Mismatch { first, second });
    }
    Ok(LeNumbers {
        l3e: 0,
        l2e2: -s.d,
        le3: -5 * s.d - s.kc,
        e4: first,
    })
}

/// `L M^3`, the degree of the inverse.
pub fn xi_formula(s: &SurfaceInvariants) -> i128 {
    let (n, m) = (s.n, s.m);
    n.pow(3) - 3 * n * m * m * s.d + m.pow(3) * (s.kc + 5 * s.d)
}

/// `M^4` expanded with each of the two expressions for `E^4`.
pub fn m4_evaluations(s: &SurfaceInvariants) -> (i128, i128) {
    let (n, m) = (s.n, s.m);
    let common = n.pow(4) - 6 * n * n * m * m * s.d + 4 * n * m.pow(3) * (s.kc + 5 * s.d);
    let m4 = m.pow(4);
    (common + m4 * e4_from_c2(s), common + m4 * e4_from_k2(s))
}

/// `M^4`; the value 1 certifies birationality.
pub fn m4_formula(s: &SurfaceInvariants) -> Result<i128, IntersectError> {
    match m4_evaluations(s) {
        (first, second) if first == second => Ok(first),
        (first, second) => Err(IntersectError::M4Mismatch { first, second }),
    }
}

/// `(L^3 M, L^2 M^2, L M^3, M^4)`
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MixedNumbers {
    pub l3m: i128,
    pub l2m2: i128,
    pub lm3: i128,
    pub m4: i128,
}

impl MixedNumbers {
    pub fn as_array(&self) -> [i128; 4] {
        [self.l3m, self.l2m2, self.lm3, self.m4]
    }
}

pub fn mixed_numbers(s: &SurfaceInvariants) -> Result<MixedNumbers, IntersectError> {
    Ok(MixedNumbers {
        l3m: s.n,
        l2m2: s.n * s.n - s.m * s.m * s.d,
        lm3: xi_formula(s),
        m4: m4_formula(s)?,
    })
}

/// All intersection numbers of the blowup tower.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionTable {
    pub exceptional: ExceptionalNumbers,
    pub le: LeNumbers,
    pub mixed: MixedNumbers,
}

pub fn intersection_table(s: &SurfaceInvariants) -> Result<IntersectionTable, IntersectError> {
    Ok(IntersectionTable {
        exceptional: exceptional_numbers(),
        le: le_numbers(s)?,
        mixed: mixed_numbers(s)?,
    })
}

/// Mixed-degree class on a surface: a number in degree 0, a combination
/// `a C + b K` in degree 1 and a number in degree 2 (top degree).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct SurfaceClass {
    rank: i128,
    c: i128,
    k: i128,
    top: i128,
}

impl SurfaceClass {
    /// Degree-2 part of the product, using `C^2 = d`, `C K = kc`, `K^2 = k2`.
    fn top_of_product(&self, other: &Self, s: &SurfaceInvariants) -> i128 {
        let middle = self.c * other.c * s.d
            + (self.c * other.k + self.k * other.c) * s.kc
            + self.k * other.k * s.k2;
        self.rank * other.top + middle + self.top * other.rank
    }
}

/// Double-point class and the node count it predicts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DoublePoint {
    pub class: i128,
    pub nodes: i128,
}

/// `D = eps^* eps_* [Sigma] - [eps^* c(P^4) c(Sigma)^{-1}]_0` for the map of the
/// normalization to P^4.
pub fn double_point_class(s: &SurfaceInvariants) -> Result<DoublePoint, IntersectError> {
    // eps^* c(P^4) = (1 + C)^5, truncated
    let ambient = SurfaceClass {
        rank: 1,
        c: 5,
        k: 0,
        top: 10 * s.d,
    };
    // c(Sigma)^{-1} = 1 - c1 + (c1^2 - c2) with c1 = -K
    let inverse = SurfaceClass {
        rank: 1,
        c: 0,
        k: 1,
        top: s.k2 - s.c2,
    };
    let class = s.d * s.d - ambient.top_of_product(&inverse, s);
    if class % 2 != 0 {
        return Err(IntersectError::OddDoublePointClass(class));
    }
    Ok(DoublePoint {
        class,
        nodes: class / 2,
    })
}

/// Numbers describing the P-locus `Theta` (the Jacobian hypersurface) of a map
/// with `m = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PLocusNumbers {
    /// `deg Theta * L M^3`, which must equal `mult * M^3 E_X`.
    pub contraction_term: i128,
    /// `M^3 E_X`, the degree of the P-locus of the inverse.
    pub exceptional_degree: i128,
    /// Multiplicity of `Theta` along the base surface.
    pub theta_mult: i128,
    /// Degree of the curves contracted to a point of the inverse base locus.
    pub secant_degree: i128,
    /// Their intersection number with the base surface.
    pub secant_hits: i128,
}

fn exact_div(what: &'static str, numerator: i128, denominator: i128) -> Result<i128, IntersectError> {
    if denominator == 0 || numerator % denominator != 0 {
        return Err(IntersectError::NonIntegral {
            what,
            numerator,
            denominator,
        });
    }
    Ok(numerator / denominator)
}

/// On the resolution `X`, `E_X = nL - M` and `F_X = xi M - L`; the inverse
/// base surface is assumed to have the same degree `d` (symmetric case).
pub fn plocus_numbers(s: &SurfaceInvariants, theta_degree: i128) -> Result<PLocusNumbers, IntersectError> {
    if s.m != 1 {
        return Err(IntersectError::InvalidInvariants(format!(
            "P-locus numbers need m = 1, found {}",
            s.m
        )));
    }
    let mixed = mixed_numbers(s)?;
    let (n, xi) = (s.n, s.xi);
    let contraction_term = theta_degree * mixed.lm3;
    let exceptional_degree = n * mixed.lm3 - mixed.m4;
    let theta_mult = exact_div("theta multiplicity", contraction_term, exceptional_degree)?;
    // L F_X M^2 and E_X F_X M^2
    let lfm2 = xi * mixed.lm3 - mixed.l2m2;
    let efm2 = n * xi * mixed.lm3 - n * mixed.l2m2 - xi * mixed.m4 + mixed.lm3;
    Ok(PLocusNumbers {
        contraction_term,
        exceptional_degree,
        theta_mult,
        secant_degree: exact_div("secant degree", lfm2, s.d)?,
        secant_hits: exact_div("secant intersection", efm2, s.d)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_table() {
        let s = SurfaceInvariants::example();
        let t = intersection_table(&s).unwrap();
        assert_eq!(t.exceptional.as_array(), [0, -4, 2, 0, -1]);
        assert_eq!(t.le.as_array(), [0, -9, -48, -159]);
        assert_eq!(t.mixed.as_array(), [4, 7, 4, 1]);
    }

    #[test]
    fn validation_rejects_bad_data() {
        let mut s = SurfaceInvariants::example();
        s.chi = 3;
        assert!(matches!(s.validate(), Err(IntersectError::InvalidInvariants(_))));
        let mut s = SurfaceInvariants::example();
        s.d = 0;
        assert!(le_numbers(&s).is_err());
    }
}
