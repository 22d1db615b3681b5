//! Ideals, reduced Gröbner bases and the ideal-theoretic operations built on them.

mod buchberger;
mod hilbert;
mod ops;

use std::fmt;
use std::sync::Arc;

use crate::ffpoly::{
    format_ring_header, parse_ring_header, Monomial, MonomialOrder, PolyError, PolyRing,
    Polynomial,
};

pub use hilbert::{hilbert_data, hilbert_numerator, HilbertData, HilbertPolynomial};
pub use ops::{
    eliminate, graded_piece_basis, graded_piece_dimension, intersect, quotient, saturate,
    saturate_by_variable,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IdealError {
    #[error("generator {index} is not homogeneous: {poly}")]
    NotHomogeneous { index: usize, poly: String },
    #[error("generators live in different rings")]
    RingMismatch,
    #[error("variable index {0} out of range")]
    BadVariable(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Homogeneous ideal given by generators; zero generators are dropped.
#[derive(Clone)]
pub struct Ideal {
    ring: Arc<PolyRing>,
    gens: Vec<Polynomial>,
}

impl Ideal {
    pub fn new(ring: &Arc<PolyRing>, gens: Vec<Polynomial>) -> Result<Self, IdealError> {
        let mut kept = Vec::with_capacity(gens.len());
        for (index, g) in gens.into_iter().enumerate() {
            if !g.ring().same_variables(ring) {
                return Err(IdealError::RingMismatch);
            }
            if g.is_zero() {
                continue;
            }
            if !g.is_homogeneous() {
                return Err(IdealError::NotHomogeneous {
                    index,
                    poly: g.to_string(),
                });
            }
            kept.push(g.with_ring(ring)?);
        }
        Ok(Self {
            ring: ring.clone(),
            gens: kept,
        })
    }

    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Self {
            ring: ring.clone(),
            gens: Vec::new(),
        }
    }

    pub fn unit(ring: &Arc<PolyRing>) -> Self {
        Self {
            ring: ring.clone(),
            gens: vec![Polynomial::one(ring)],
        }
    }

    /// The ideal generated by all variables.
    pub fn irrelevant(ring: &Arc<PolyRing>) -> Self {
        Self {
            ring: ring.clone(),
            gens: ring.vars(),
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// Reduced Gröbner basis in `order`.
    pub fn groebner(&self, order: MonomialOrder) -> GroebnerBasis {
        buchberger(self, order)
    }

    /// Whether both ideals coincide (compared through reduced degrevlex bases).
    pub fn same_ideal(&self, other: &Ideal) -> bool {
        self.ring.same_variables(&other.ring)
            && self.groebner(MonomialOrder::DegRevLex).elements
                == other.groebner(MonomialOrder::DegRevLex).elements
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.groebner(MonomialOrder::DegRevLex).contains(f)
    }

    /// Same generators in a ring with the same field and variable names but
    /// possibly another order.
    pub fn in_ring(&self, ring: &Arc<PolyRing>) -> Result<Ideal, IdealError> {
        Ideal::new(ring, self.gens.clone())
    }

    /// Text form: ring header, then one generator per line.
    pub fn to_text(&self) -> String {
        let mut s = format_ring_header(&self.ring);
        s.push('\n');
        for g in &self.gens {
            s.push_str(&g.to_string());
            s.push('\n');
        }
        s
    }

    /// Parses the text form; blank lines and lines starting with `#` are skipped.
    pub fn from_text(text: &str) -> Result<Ideal, IdealError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| PolyError::Parse("empty ideal file".into()))?;
        let ring = parse_ring_header(header)?;
        let gens = lines
            .map(|l| Polynomial::parse(&ring, l))
            .collect::<Result<Vec<_>, _>>()?;
        Ideal::new(&ring, gens)
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.gens.iter()).finish()
    }
}

/// Reduced Gröbner basis: monic elements sorted by ascending leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    ring: Arc<PolyRing>,
    elements: Vec<Polynomial>,
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn order(&self) -> MonomialOrder {
        self.ring.order()
    }

    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elements
            .iter()
            .map(|g| *g.leading_monomial().expect("nonzero element"))
            .collect()
    }

    /// Remainder of `f` on division by the basis; `f` is re-sorted into the basis order.
    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        let f = f.with_ring(&self.ring).expect("polynomial from the basis ring");
        buchberger::reduce_by(&f, &self.elements)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_zero()
    }

    /// The basis elements as an ideal (requires homogeneous elements).
    pub fn to_ideal(&self) -> Ideal {
        Ideal::new(&self.ring, self.elements.clone()).expect("homogeneous basis")
    }
}

/// Reduced Gröbner basis of `ideal` with respect to `order`.
pub fn buchberger(ideal: &Ideal, order: MonomialOrder) -> GroebnerBasis {
    let ring = ideal.ring.with_order(order);
    GroebnerBasis {
        elements: buchberger::reduced_basis(&ring, &ideal.gens, None),
        ring,
    }
}

/// Reduced basis of the truncation: all S-pairs up to degree `max_degree`.
/// Elements of degree at most `max_degree` agree with the full reduced basis.
pub fn buchberger_truncated(ideal: &Ideal, order: MonomialOrder, max_degree: u32) -> GroebnerBasis {
    let ring = ideal.ring.with_order(order);
    GroebnerBasis {
        elements: buchberger::reduced_basis(&ring, &ideal.gens, Some(max_degree)),
        ring,
    }
}

pub fn normal_form(f: &Polynomial, basis: &GroebnerBasis) -> Polynomial {
    basis.normal_form(f)
}

/// `lcm/lt(f) * f - lcm/lt(g) * g` with both leading coefficients normalized to 1.
pub fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (Some(a), Some(b)) = (f.leading_monomial(), g.leading_monomial()) else {
        return Polynomial::zero(f.ring());
    };
    let l = a.lcm(b);
    let fm = f.monic();
    let gm = g.monic();
    let left = fm.mul_term(&a.quotient_of(&l).expect("lcm"), 1);
    let right = gm.mul_term(&b.quotient_of(&l).expect("lcm"), 1);
    &left - &right
}

/// Polynomials over a general (possibly inhomogeneous) generating set, used
/// internally by tag-variable constructions.
pub(crate) fn reduced_basis_of(ring: &Arc<PolyRing>, gens: &[Polynomial]) -> Vec<Polynomial> {
    buchberger::reduced_basis(ring, gens, None)
}
