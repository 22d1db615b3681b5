//! Elimination, colon ideals, saturation, intersection and graded pieces.

use std::sync::Arc;

use rustc_hash::FxHashMap;

use super::{buchberger_truncated, reduced_basis_of, Ideal, IdealError};
use crate::ffpoly::{binomial, monomials_of_degree, Monomial, MonomialOrder, PolyRing, Polynomial};
use crate::linalg::Matrix;

use super::hilbert::{hilbert_function, hilbert_numerator};

/// Ring with the same field and variables listed in `perm`-image order:
/// variable `i` of `ring` becomes variable `perm[i]`.
fn permuted_ring(ring: &PolyRing, perm: &[usize], order: MonomialOrder) -> Arc<PolyRing> {
    let mut names = vec![String::new(); perm.len()];
    for (i, &j) in perm.iter().enumerate() {
        names[j] = ring.var_names()[i].clone();
    }
    PolyRing::new(ring.field(), names, order).expect("permuted variable names stay valid")
}

fn inverse(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &j) in perm.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

/// `I ∩ F_p[keep]`, computed with a block order that puts the other variables first.
pub fn eliminate(ideal: &Ideal, keep: &[usize]) -> Result<Ideal, IdealError> {
    let ring = ideal.ring();
    let n = ring.nvars();
    if let Some(&bad) = keep.iter().find(|&&k| k >= n) {
        return Err(IdealError::BadVariable(bad));
    }
    let mut kept = vec![false; n];
    for &k in keep {
        kept[k] = true;
    }
    let dropped: Vec<usize> = (0..n).filter(|&i| !kept[i]).collect();
    let retained: Vec<usize> = (0..n).filter(|&i| kept[i]).collect();
    let mut perm = vec![0; n];
    for (pos, &v) in dropped.iter().chain(&retained).enumerate() {
        perm[v] = pos;
    }
    let k = dropped.len();
    let order = if k == 0 || k == n {
        MonomialOrder::DegRevLex
    } else {
        MonomialOrder::Block(k)
    };
    let big = permuted_ring(ring, &perm, order);
    let gens: Vec<Polynomial> = ideal
        .generators()
        .iter()
        .map(|g| g.permute_into(&big, &perm))
        .collect();
    let basis = reduced_basis_of(&big, &gens);
    let back = inverse(&perm);
    let out = basis
        .into_iter()
        .filter(|g| {
            let lm = g.leading_monomial().expect("nonzero");
            lm.exponents()[..k].iter().all(|&e| e == 0)
        })
        .map(|g| g.permute_into(ring, &back))
        .collect();
    Ideal::new(ring, out)
}

/// `I : x_var^∞` by dividing a degrevlex basis with `x_var` last by the
/// largest power of `x_var` that divides each element.
pub fn saturate_by_variable(ideal: &Ideal, var: usize) -> Result<Ideal, IdealError> {
    let ring = ideal.ring();
    let n = ring.nvars();
    if var >= n {
        return Err(IdealError::BadVariable(var));
    }
    let perm: Vec<usize> = (0..n)
        .map(|i| match i.cmp(&var) {
            std::cmp::Ordering::Less => i,
            std::cmp::Ordering::Equal => n - 1,
            std::cmp::Ordering::Greater => i - 1,
        })
        .collect();
    let big = permuted_ring(ring, &perm, MonomialOrder::DegRevLex);
    let gens: Vec<Polynomial> = ideal
        .generators()
        .iter()
        .map(|g| g.permute_into(&big, &perm))
        .collect();
    let basis = reduced_basis_of(&big, &gens);
    let back = inverse(&perm);
    let out = basis
        .into_iter()
        .map(|g| {
            let e = g
                .terms()
                .iter()
                .map(|(m, _)| m.exponent(n - 1))
                .min()
                .unwrap_or(0);
            let mut d = Monomial::one(n);
            d.set_exponent(n - 1, e as u8);
            let stripped = Polynomial::from_terms(
                &big,
                g.terms()
                    .iter()
                    .map(|(m, c)| (d.quotient_of(m).expect("common power"), *c as i64))
                    .collect::<Vec<_>>(),
            );
            stripped.permute_into(ring, &back)
        })
        .collect();
    Ideal::new(ring, out)
}

fn tag_name(ring: &PolyRing) -> String {
    (0..)
        .map(|k| format!("tag{k}"))
        .find(|s| ring.var_index(s).is_none())
        .expect("some unused name")
}

/// `I ∩ J` as the part of `t·I + (1 - t)·J` free of the tag variable `t`.
pub fn intersect(a: &Ideal, b: &Ideal) -> Result<Ideal, IdealError> {
    let ring = a.ring();
    if !ring.same_variables(b.ring()) {
        return Err(IdealError::RingMismatch);
    }
    if a.is_zero() || b.is_zero() {
        return Ok(Ideal::zero(ring));
    }
    let n = ring.nvars();
    let mut names = vec![tag_name(ring)];
    names.extend(ring.var_names().iter().cloned());
    let big = PolyRing::new(ring.field(), names, MonomialOrder::Block(1))?;
    let shift: Vec<usize> = (1..=n).collect();
    let t = Polynomial::var(&big, 0);
    let one_minus_t = &Polynomial::one(&big) - &t;
    let mut gens = Vec::new();
    for g in a.generators() {
        gens.push(&t * &g.permute_into(&big, &shift));
    }
    for g in b.generators() {
        gens.push(&one_minus_t * &g.permute_into(&big, &shift));
    }
    let basis = reduced_basis_of(&big, &gens);
    let out = basis
        .into_iter()
        .filter(|g| g.leading_monomial().expect("nonzero").exponent(0) == 0)
        .map(|g| {
            // drop the (absent) tag coordinate
            Polynomial::from_terms(
                ring,
                g.terms()
                    .iter()
                    .map(|(m, c)| {
                        let e: Vec<u32> = m.exponents()[1..].iter().map(|&x| x as u32).collect();
                        (Monomial::from_exponents(&e), *c as i64)
                    })
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    Ideal::new(ring, out)
}

/// `I : h = (I ∩ <h>) / h`.
fn quotient_by(ideal: &Ideal, h: &Polynomial) -> Result<Ideal, IdealError> {
    let ring = ideal.ring();
    let principal = Ideal::new(ring, vec![h.clone()])?;
    let meet = intersect(ideal, &principal)?;
    let gens = meet
        .generators()
        .iter()
        .map(|g| g.divide_exact(h).expect("elements of <h> are multiples of h"))
        .collect();
    Ideal::new(ring, gens)
}

/// `I : J`, intersecting the quotients by the generators of `J`.
pub fn quotient(ideal: &Ideal, by: &Ideal) -> Result<Ideal, IdealError> {
    let ring = ideal.ring();
    if !ring.same_variables(by.ring()) {
        return Err(IdealError::RingMismatch);
    }
    let mut acc = Ideal::unit(ring);
    for h in by.generators() {
        let q = quotient_by(ideal, h)?;
        acc = if acc.generators().iter().any(|g| g.is_constant()) {
            q
        } else {
            intersect(&acc, &q)?
        };
    }
    Ok(acc)
}

fn single_variable(p: &Polynomial) -> Option<usize> {
    match p.terms() {
        [(m, _)] if m.degree() == 1 => m.support().next(),
        _ => None,
    }
}

/// `I : J^∞`. When `J` is generated by variables this is the intersection of
/// the saturations by each variable; otherwise colon ideals are iterated until
/// they stabilize.
pub fn saturate(ideal: &Ideal, by: &Ideal) -> Result<Ideal, IdealError> {
    let ring = ideal.ring();
    if !ring.same_variables(by.ring()) {
        return Err(IdealError::RingMismatch);
    }
    if by.is_zero() {
        return Ok(Ideal::unit(ring));
    }
    if by.generators().iter().any(|g| g.is_constant()) {
        return Ok(ideal.clone());
    }
    let vars: Option<Vec<usize>> = by.generators().iter().map(single_variable).collect();
    if let Some(vars) = vars {
        let parts = vars
            .iter()
            .map(|&v| saturate_by_variable(ideal, v))
            .collect::<Result<Vec<_>, _>>()?;
        let first = parts[0].clone();
        if parts[1..].iter().all(|p| p.same_ideal(&first)) {
            return Ok(first);
        }
        return parts[1..].iter().try_fold(first, |acc, p| intersect(&acc, p));
    }
    let mut current = ideal.clone();
    loop {
        let next = quotient(&current, by)?;
        if next.same_ideal(&current) {
            return Ok(current);
        }
        current = next;
    }
}

/// `dim_F I_t`: the number of degree-`t` monomials in the leading ideal.
pub fn graded_piece_dimension(ideal: &Ideal, t: u32) -> u64 {
    let n = ideal.ring().nvars();
    if n == 0 {
        return u64::from(t == 0 && ideal.generators().iter().any(|g| !g.is_zero()));
    }
    let basis = buchberger_truncated(ideal, MonomialOrder::DegRevLex, t);
    let num = hilbert_numerator(&basis.leading_monomials());
    binomial(t as u64 + n as u64 - 1, n as u64 - 1) - hilbert_function(&num, n, t)
}

/// Reduced echelon basis of `I_t`, spanned by monomial multiples of the
/// generators; columns are degree-`t` monomials in descending degrevlex order,
/// so the elements have distinct leading monomials, listed descending.
pub fn graded_piece_basis(ideal: &Ideal, t: u32) -> Vec<Polynomial> {
    let ring = ideal.ring();
    let n = ring.nvars();
    let mut cols = monomials_of_degree(n, t);
    cols.sort_by(|a, b| MonomialOrder::DegRevLex.cmp(b, a));
    let index: FxHashMap<Monomial, usize> = cols.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut mat = Matrix::zeros(ring.field(), 0, cols.len());
    let mut row = vec![0u32; cols.len()];
    for g in ideal.generators() {
        let Some(d) = g.homogeneous_degree() else { continue };
        if d > t {
            continue;
        }
        for m in monomials_of_degree(n, t - d) {
            row.iter_mut().for_each(|x| *x = 0);
            for (gm, c) in g.terms() {
                row[index[&gm.mul(&m)]] = *c;
            }
            mat.push_row(&row);
        }
    }
    let target = ring.with_order(MonomialOrder::DegRevLex);
    mat.row_space()
        .into_iter()
        .map(|r| {
            let p = Polynomial::from_terms(
                &target,
                r.iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| (cols[i], c as i64))
                    .collect::<Vec<_>>(),
            );
            p.with_ring(ring).expect("same variables")
        })
        .collect()
}
