use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use rustc_hash::FxHashMap;

use super::{binomial, Monomial, MonomialOrder, PolyError, PrimeField, MAX_VARS};

/// Coefficient field, named variables and active monomial order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    field: PrimeField,
    vars: Vec<String>,
    order: MonomialOrder,
}

impl PolyRing {
    pub fn new(
        field: PrimeField,
        vars: Vec<String>,
        order: MonomialOrder,
    ) -> Result<Arc<Self>, PolyError> {
        if vars.len() > MAX_VARS {
            return Err(PolyError::TooManyVariables(vars.len()));
        }
        if let MonomialOrder::Block(k) = order {
            if k > vars.len() {
                return Err(PolyError::Parse(format!(
                    "block split {k} exceeds {} variables",
                    vars.len()
                )));
            }
        }
        for (i, v) in vars.iter().enumerate() {
            let ok = !v.is_empty()
                && v.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok || vars[..i].contains(v) {
                return Err(PolyError::Parse(format!("bad variable name `{v}`")));
            }
        }
        Ok(Arc::new(Self { field, vars, order }))
    }

    /// Variables `prefix0 .. prefix{n-1}`.
    pub fn indexed(
        field: PrimeField,
        prefix: &str,
        n: usize,
        order: MonomialOrder,
    ) -> Result<Arc<Self>, PolyError> {
        Self::new(field, (0..n).map(|i| format!("{prefix}{i}")).collect(), order)
    }

    pub fn with_order(&self, order: MonomialOrder) -> Arc<Self> {
        Arc::new(Self {
            field: self.field,
            vars: self.vars.clone(),
            order,
        })
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Same field and variable list; the order may differ.
    pub fn same_variables(&self, other: &PolyRing) -> bool {
        self.field == other.field && self.vars == other.vars
    }

    pub fn var(self: &Arc<Self>, i: usize) -> Polynomial {
        Polynomial::var(self, i)
    }

    pub fn vars(self: &Arc<Self>) -> Vec<Polynomial> {
        (0..self.nvars()).map(|i| Polynomial::var(self, i)).collect()
    }
}

/// Sparse polynomial over F_p, terms strictly descending in the ring's order.
#[derive(Clone)]
pub struct Polynomial {
    ring: Arc<PolyRing>,
    terms: Vec<(Monomial, u32)>,
}

fn same_ring(a: &Arc<PolyRing>, b: &Arc<PolyRing>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl Polynomial {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Self {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Arc<PolyRing>, c: i64) -> Self {
        let c = ring.field.reduce(c);
        let terms = if c == 0 {
            Vec::new()
        } else {
            vec![(Monomial::one(ring.nvars()), c)]
        };
        Self {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, 1)
    }

    pub fn var(ring: &Arc<PolyRing>, i: usize) -> Self {
        Self {
            ring: ring.clone(),
            terms: vec![(Monomial::var(ring.nvars(), i), 1)],
        }
    }

    pub fn monomial(ring: &Arc<PolyRing>, m: Monomial, c: u32) -> Self {
        debug_assert_eq!(m.nvars(), ring.nvars());
        let c = c % ring.field.modulus();
        let terms = if c == 0 { Vec::new() } else { vec![(m, c)] };
        Self {
            ring: ring.clone(),
            terms,
        }
    }

    /// Builds a canonical polynomial from arbitrary terms (duplicates combine).
    pub fn from_terms<I>(ring: &Arc<PolyRing>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, i64)>,
    {
        let f = ring.field;
        let mut acc: FxHashMap<Monomial, u32> = FxHashMap::default();
        for (m, c) in terms {
            assert_eq!(m.nvars(), ring.nvars(), "monomial arity mismatch");
            let c = f.reduce(c);
            let e = acc.entry(m).or_insert(0);
            *e = f.add(*e, c);
        }
        Self::from_map(ring, acc)
    }

    fn from_map(ring: &Arc<PolyRing>, acc: FxHashMap<Monomial, u32>) -> Self {
        let mut terms: Vec<(Monomial, u32)> = acc.into_iter().filter(|&(_, c)| c != 0).collect();
        let order = ring.order;
        terms.sort_unstable_by(|a, b| order.cmp(&b.0, &a.0));
        Self {
            ring: ring.clone(),
            terms,
        }
    }

    /// Trusts the caller that `terms` is canonical for `ring`.
    pub(crate) fn from_sorted(ring: &Arc<PolyRing>, terms: Vec<(Monomial, u32)>) -> Self {
        debug_assert!(terms.iter().all(|t| t.1 != 0));
        debug_assert!(terms
            .windows(2)
            .all(|w| ring.order.cmp(&w[0].0, &w[1].0) == Ordering::Greater));
        Self {
            ring: ring.clone(),
            terms,
        }
    }

    #[inline]
    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.ring.field
    }

    #[inline]
    pub fn terms(&self) -> &[(Monomial, u32)] {
        &self.terms
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    #[inline]
    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    #[inline]
    pub fn leading_coeff(&self) -> Option<u32> {
        self.terms.first().map(|t| t.1)
    }

    /// Largest total degree of a term; `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    /// Common degree of all terms, if the polynomial is a nonzero form.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.terms.first()?.0.degree();
        self.terms.iter().all(|(m, _)| m.degree() == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    /// Coefficient of a given monomial.
    pub fn coeff(&self, m: &Monomial) -> u32 {
        let order = self.ring.order;
        self.terms
            .binary_search_by(|t| order.cmp(m, &t.0))
            .map(|i| self.terms[i].1)
            .unwrap_or(0)
    }

    /// Variables that occur in some term.
    pub fn support_vars(&self) -> Vec<usize> {
        let mut used = vec![false; self.ring.nvars()];
        for (m, _) in &self.terms {
            for i in m.support() {
                used[i] = true;
            }
        }
        (0..used.len()).filter(|&i| used[i]).collect()
    }

    fn check_ring(&self, other: &Self) -> Result<(), PolyError> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(PolyError::RingMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_ring(other)?;
        Ok(self.add_scaled(other, 1))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_ring(other)?;
        Ok(self.add_scaled(other, self.field().neg(1)))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_ring(other)?;
        Ok(self.mul_unchecked(other))
    }

    /// `self + c * other`, merging two sorted term lists.
    pub(crate) fn add_scaled(&self, other: &Self, c: u32) -> Self {
        let f = self.field();
        let order = self.ring.order;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match order.cmp(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Less => {
                    let v = f.mul(b[j].1, c);
                    if v != 0 {
                        out.push((b[j].0, v));
                    }
                    j += 1;
                }
                Ordering::Equal => {
                    let v = f.add(a[i].1, f.mul(b[j].1, c));
                    if v != 0 {
                        out.push((a[i].0, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            let v = f.mul(t.1, c);
            if v != 0 {
                out.push((t.0, v));
            }
        }
        Self {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ring);
        }
        if other.terms.len() == 1 {
            let (m, c) = other.terms[0];
            return self.mul_term(&m, c);
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms[0];
            return other.mul_term(&m, c);
        }
        let f = self.field();
        let p = f.modulus() as u64;
        let mut acc: FxHashMap<Monomial, u64> =
            FxHashMap::with_capacity_and_hasher(self.len() * 4, Default::default());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let e = acc.entry(ma.mul(mb)).or_insert(0);
                *e = (*e + *ca as u64 * *cb as u64) % p;
            }
        }
        let mut terms: Vec<(Monomial, u32)> = acc
            .into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|(m, c)| (m, c as u32))
            .collect();
        let order = self.ring.order;
        terms.sort_unstable_by(|a, b| order.cmp(&b.0, &a.0));
        Self {
            ring: self.ring.clone(),
            terms,
        }
    }

    /// `c * m * self`; order is preserved because monomial orders are multiplicative.
    pub fn mul_term(&self, m: &Monomial, c: u32) -> Self {
        let f = self.field();
        let c = c % f.modulus();
        if c == 0 {
            return Self::zero(&self.ring);
        }
        Self {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(mm, cc)| (mm.mul(m), f.mul(*cc, c)))
                .collect(),
        }
    }

    pub fn scale(&self, c: u32) -> Self {
        self.mul_term(&Monomial::one(self.ring.nvars()), c)
    }

    pub fn neg(&self) -> Self {
        self.scale(self.field().neg(1))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        for _ in 0..e {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// Scaled so the leading coefficient is 1.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None | Some(1) => self.clone(),
            Some(c) => self.scale(self.field().inv(c).expect("nonzero leading coefficient")),
        }
    }

    pub fn evaluate(&self, point: &[u32]) -> u32 {
        assert_eq!(point.len(), self.ring.nvars(), "point has wrong arity");
        let f = self.field();
        let mut acc = 0;
        for (m, c) in &self.terms {
            let mut v = *c;
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    v = f.mul(v, f.pow(point[i], e as u64));
                    if v == 0 {
                        break;
                    }
                }
            }
            acc = f.add(acc, v);
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Self {
        let f = self.field();
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponent(i);
            if e == 0 {
                return None;
            }
            let mut mm = *m;
            mm.set_exponent(i, (e - 1) as u8);
            Some((mm, f.mul(*c, e % f.modulus()) as i64))
        });
        Self::from_terms(&self.ring, terms.collect::<Vec<_>>())
    }

    /// Substitute `images[i]` for variable `i`; the result lives in the images' ring.
    pub fn compose(&self, images: &[Polynomial]) -> Result<Polynomial, PolyError> {
        if images.len() != self.ring.nvars() {
            return Err(PolyError::ShapeMismatch(format!(
                "{} images for {} variables",
                images.len(),
                self.ring.nvars()
            )));
        }
        let target = match images.first() {
            Some(p) => p.ring.clone(),
            None => return Err(PolyError::ShapeMismatch("no images".into())),
        };
        if images.iter().any(|p| !same_ring(&p.ring, &target)) {
            return Err(PolyError::RingMismatch);
        }
        if images.iter().any(|p| p.field() != self.field()) {
            return Err(PolyError::RingMismatch);
        }
        let mut powers: Vec<Vec<Polynomial>> = images.iter().map(|p| vec![Polynomial::one(&target), p.clone()]).collect();
        let f = self.field();
        let p = f.modulus() as u64;
        let mut acc: FxHashMap<Monomial, u64> = FxHashMap::default();
        for (m, c) in &self.terms {
            let mut prod = Polynomial::constant(&target, *c as i64);
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul_unchecked(&images[i]);
                    powers[i].push(next);
                }
                prod = prod.mul_unchecked(&powers[i][e as usize]);
            }
            for (mm, cc) in prod.terms {
                let slot = acc.entry(mm).or_insert(0);
                *slot = (*slot + cc as u64) % p;
            }
        }
        let acc = acc.into_iter().map(|(m, c)| (m, c as u32)).collect();
        Ok(Self::from_map(&target, acc))
    }

    /// Linear pullback `x_j = sum_i z_i * matrix[i][j]` for a `k x n` matrix,
    /// with `n` the number of variables of `self` and `k` those of `target`.
    pub fn substitute_linear(
        &self,
        matrix: &[Vec<u32>],
        target: &Arc<PolyRing>,
    ) -> Result<Polynomial, PolyError> {
        let n = self.ring.nvars();
        let k = target.nvars();
        if matrix.len() != k || matrix.iter().any(|row| row.len() != n) {
            return Err(PolyError::ShapeMismatch(format!(
                "expected a {k}x{n} matrix for this substitution"
            )));
        }
        if target.field != self.ring.field {
            return Err(PolyError::RingMismatch);
        }
        let images: Vec<Polynomial> = (0..n)
            .map(|j| {
                Polynomial::from_terms(
                    target,
                    (0..k).map(|i| (Monomial::var(k, i), matrix[i][j] as i64)),
                )
            })
            .collect();
        self.compose(&images)
    }

    /// Re-sort into another ring over the same variables (e.g. a new order).
    pub fn with_ring(&self, ring: &Arc<PolyRing>) -> Result<Polynomial, PolyError> {
        if !self.ring.same_variables(ring) {
            return Err(PolyError::RingMismatch);
        }
        if same_ring(&self.ring, ring) {
            return Ok(self.clone());
        }
        let mut terms = self.terms.clone();
        let order = ring.order;
        terms.sort_unstable_by(|a, b| order.cmp(&b.0, &a.0));
        Ok(Self {
            ring: ring.clone(),
            terms,
        })
    }

    /// Move variable `i` to position `perm[i]` of `target`.
    pub fn permute_into(&self, target: &Arc<PolyRing>, perm: &[usize]) -> Polynomial {
        let n = target.nvars();
        Self::from_terms(
            target,
            self.terms
                .iter()
                .map(|(m, c)| (m.permuted(perm, n), *c as i64))
                .collect::<Vec<_>>(),
        )
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a remainder.
    pub fn divide_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        let lm = *divisor.leading_monomial()?;
        let f = self.field();
        let lc_inv = f.inv(divisor.leading_coeff()?).ok()?;
        let mut rem = self.clone();
        let mut quotient: Vec<(Monomial, i64)> = Vec::new();
        while let Some(&(m, c)) = rem.terms.first() {
            let q = lm.quotient_of(&m)?;
            let qc = f.mul(c, lc_inv);
            quotient.push((q, qc as i64));
            rem = rem.add_scaled(&divisor.mul_term(&q, qc), f.neg(1));
        }
        Some(Polynomial::from_terms(&self.ring, quotient))
    }

    /// Terms of `self(point + u)` of total degree at most `max_order` in `u`.
    ///
    /// The coefficient of `u^k` is the Hasse derivative of order `k` at `point`;
    /// all of them vanish iff `self` has multiplicity above `max_order` there.
    pub fn taylor_low(&self, point: &[u32], max_order: u32) -> Polynomial {
        let n = self.ring.nvars();
        assert_eq!(point.len(), n);
        let f = self.field();
        let mut out: Vec<(Monomial, i64)> = Vec::new();
        let mut k = vec![0u32; n];
        for (m, c) in &self.terms {
            let e: Vec<u32> = m.exponents().iter().map(|&x| x as u32).collect();
            // enumerate k <= e with |k| <= max_order
            fn rec(
                i: usize,
                budget: u32,
                e: &[u32],
                k: &mut Vec<u32>,
                point: &[u32],
                coeff: u32,
                f: PrimeField,
                out: &mut Vec<(Monomial, i64)>,
            ) {
                if i == e.len() {
                    out.push((Monomial::from_exponents(k), coeff as i64));
                    return;
                }
                for ki in 0..=e[i].min(budget) {
                    k[i] = ki;
                    let b = (binomial(e[i] as u64, ki as u64) % f.modulus() as u64) as u32;
                    let c = f.mul(coeff, f.mul(b, f.pow(point[i], (e[i] - ki) as u64)));
                    if c != 0 {
                        rec(i + 1, budget - ki, e, k, point, c, f, out);
                    }
                }
                k[i] = 0;
            }
            rec(0, max_order, &e, &mut k, point, *c, f, &mut out);
        }
        Polynomial::from_terms(&self.ring, out)
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        if !self.ring.same_variables(&other.ring) {
            return false;
        }
        if self.ring.order == other.ring.order {
            return self.terms == other.terms;
        }
        let other = other.with_ring(&self.ring).expect("same variables");
        self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("polynomials from different rings")
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("polynomials from different rings")
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("polynomials from different rings")
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::neg(self)
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
