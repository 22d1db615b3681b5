//! Buchberger's algorithm with the normal selection strategy (sugar degree for
//! inhomogeneous input) and the Gebauer–Möller installation of criteria.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::ffpoly::{Monomial, MonomialOrder, PolyRing, Polynomial, PrimeField};

type Terms = Vec<(Monomial, u32)>;

struct Element {
    terms: Terms,
    lm: Monomial,
    mask: u32,
    sugar: u32,
}

#[derive(Clone, Copy)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

/// `h - c * m * g` for term lists sorted descending in `order`, skipping the
/// first `skip_h` terms of `h` and the first `skip_g` terms of `g`.
fn sub_mul(
    order: MonomialOrder,
    field: PrimeField,
    h: &[(Monomial, u32)],
    c: u32,
    m: &Monomial,
    g: &[(Monomial, u32)],
) -> Terms {
    let neg = field.neg(c);
    let mut out = Vec::with_capacity(h.len() + g.len());
    let (mut i, mut j) = (0, 0);
    let mut gm = g.first().map(|t| t.0.mul(m));
    while i < h.len() {
        let Some(gmon) = gm else { break };
        match order.cmp(&h[i].0, &gmon) {
            Ordering::Greater => {
                out.push(h[i]);
                i += 1;
            }
            Ordering::Less => {
                out.push((gmon, field.mul(g[j].1, neg)));
                j += 1;
                gm = g.get(j).map(|t| t.0.mul(m));
            }
            Ordering::Equal => {
                let v = field.add(h[i].1, field.mul(g[j].1, neg));
                if v != 0 {
                    out.push((h[i].0, v));
                }
                i += 1;
                j += 1;
                gm = g.get(j).map(|t| t.0.mul(m));
            }
        }
    }
    out.extend_from_slice(&h[i..]);
    while j < g.len() {
        out.push((g[j].0.mul(m), field.mul(g[j].1, neg)));
        j += 1;
    }
    out
}

fn sugar_of(terms: &[(Monomial, u32)]) -> u32 {
    terms.iter().map(|t| t.0.degree()).max().unwrap_or(0)
}

pub(crate) struct Engine {
    order: MonomialOrder,
    field: PrimeField,
    elements: Vec<Element>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
}

impl Engine {
    fn new(order: MonomialOrder, field: PrimeField) -> Self {
        Self {
            order,
            field,
            elements: Vec::new(),
            active: Vec::new(),
            pairs: Vec::new(),
        }
    }

    fn find_reducer(&self, m: &Monomial) -> Option<usize> {
        let mask = m.support_mask();
        self.active.iter().copied().find(|&k| {
            let e = &self.elements[k];
            e.mask & !mask == 0 && e.lm.divides(m)
        })
    }

    /// Reduce until the leading monomial is not divisible by any active leading monomial.
    fn top_reduce(&self, mut h: Terms) -> Terms {
        while let Some(&(m, c)) = h.first() {
            let Some(k) = self.find_reducer(&m) else { break };
            let e = &self.elements[k];
            let q = e.lm.quotient_of(&m).expect("divisor");
            // element leading coefficients are 1
            h = sub_mul(self.order, self.field, &h[1..], c, &q, &e.terms[1..]);
        }
        h
    }

    /// Reduce every term against the active set, skipping `skip` (tail reduction of an element).
    fn full_reduce(&self, mut h: Terms, skip: Option<usize>) -> Terms {
        let mut out = Vec::new();
        let mut start = 0;
        while start < h.len() {
            let (m, c) = h[start];
            let mask = m.support_mask();
            let reducer = self.active.iter().copied().find(|&k| {
                let e = &self.elements[k];
                Some(k) != skip && e.mask & !mask == 0 && e.lm.divides(&m)
            });
            match reducer {
                None => {
                    out.push((m, c));
                    start += 1;
                }
                Some(k) => {
                    let e = &self.elements[k];
                    let q = e.lm.quotient_of(&m).expect("divisor");
                    h = sub_mul(self.order, self.field, &h[start + 1..], c, &q, &e.terms[1..]);
                    start = 0;
                }
            }
        }
        out
    }

    fn make_monic(&self, mut h: Terms) -> Terms {
        if let Some(&(_, c)) = h.first() {
            if c != 1 {
                let inv = self.field.inv(c).expect("nonzero");
                for t in &mut h {
                    t.1 = self.field.mul(t.1, inv);
                }
            }
        }
        h
    }

    fn spoly(&self, pair: &Pair) -> Terms {
        let a = &self.elements[pair.i];
        let b = &self.elements[pair.j];
        let qa = a.lm.quotient_of(&pair.lcm).expect("lcm");
        let qb = b.lm.quotient_of(&pair.lcm).expect("lcm");
        let left: Terms = a.terms[1..].iter().map(|t| (t.0.mul(&qa), t.1)).collect();
        sub_mul(self.order, self.field, &left, 1, &qb, &b.terms[1..])
    }

    fn pair(&self, i: usize, j: usize) -> Pair {
        let a = &self.elements[i];
        let b = &self.elements[j];
        let lcm = a.lm.lcm(&b.lm);
        let sugar = (a.sugar + lcm.degree() - a.lm.degree()).max(b.sugar + lcm.degree() - b.lm.degree());
        Pair { i, j, lcm, sugar }
    }

    /// Gebauer–Möller update with new element `h`.
    fn insert(&mut self, terms: Terms, sugar: u32) {
        let lm = terms[0].0;
        let h = self.elements.len();
        self.elements.push(Element {
            mask: lm.support_mask(),
            lm,
            sugar,
            terms,
        });

        let mut c: Vec<Pair> = self.active.iter().map(|&g| self.pair(g, h)).collect();
        let mut d: Vec<Pair> = Vec::new();
        while let Some(p) = (!c.is_empty()).then(|| c.remove(0)) {
            let other = &self.elements[p.i].lm;
            let keep = lm.is_coprime(other)
                || (!c.iter().any(|q| q.lcm.divides(&p.lcm)) && !d.iter().any(|q| q.lcm.divides(&p.lcm)));
            if keep {
                d.push(p);
            }
        }
        d.retain(|p| !lm.is_coprime(&self.elements[p.i].lm));

        let elements = &self.elements;
        self.pairs.retain(|p| {
            if !lm.divides(&p.lcm) {
                return true;
            }
            let l1 = elements[p.i].lm.lcm(&lm);
            let l2 = elements[p.j].lm.lcm(&lm);
            l1 == p.lcm || l2 == p.lcm
        });
        self.pairs.extend(d);

        let elements = &self.elements;
        self.active.retain(|&g| !lm.divides(&elements[g].lm));
        self.active.push(h);
    }

    fn next_pair(&mut self) -> Option<Pair> {
        let order = self.order;
        let best = self
            .pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                a.sugar
                    .cmp(&b.sugar)
                    .then_with(|| order.cmp(&a.lcm, &b.lcm))
                    .then_with(|| (a.i, a.j).cmp(&(b.i, b.j)))
            })
            .map(|(k, _)| k)?;
        Some(self.pairs.swap_remove(best))
    }

    fn add_generator(&mut self, terms: Terms) {
        let sugar = sugar_of(&terms);
        let h = self.top_reduce(terms);
        if !h.is_empty() {
            let h = self.make_monic(h);
            self.insert(h, sugar);
        }
    }

    fn run(&mut self, max_degree: Option<u32>) {
        while let Some(p) = self.next_pair() {
            if max_degree.is_some_and(|b| p.sugar > b) {
                self.pairs.push(p);
                break;
            }
            let s = self.spoly(&p);
            let h = self.top_reduce(s);
            if !h.is_empty() {
                let h = self.make_monic(h);
                self.insert(h, p.sugar);
            }
        }
    }

    /// Interreduced, monic, sorted by leading monomial (ascending).
    fn reduced(&self) -> Vec<Terms> {
        let mut idx = self.active.clone();
        idx.sort_by(|&a, &b| self.order.cmp(&self.elements[a].lm, &self.elements[b].lm));
        idx.iter()
            .map(|&k| {
                let e = &self.elements[k];
                let mut t = vec![e.terms[0]];
                t.extend(self.full_reduce(e.terms[1..].to_vec(), Some(k)));
                t
            })
            .collect()
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens` in `ring`'s order.
///
/// With `max_degree`, S-pairs of larger sugar are not processed; for
/// homogeneous input the result is then a basis up to that degree.
pub(crate) fn reduced_basis(
    ring: &Arc<PolyRing>,
    gens: &[Polynomial],
    max_degree: Option<u32>,
) -> Vec<Polynomial> {
    let mut engine = Engine::new(ring.order(), ring.field());
    let mut sorted: Vec<&Polynomial> = gens.iter().filter(|g| !g.is_zero()).collect();
    // feeding in increasing order keeps intermediate reductions small
    sorted.sort_by(|a, b| {
        ring.order()
            .cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap())
    });
    for g in sorted {
        let g = g.with_ring(ring).expect("generator from a compatible ring");
        if max_degree.is_some_and(|b| sugar_of(g.terms()) > b) {
            continue;
        }
        engine.add_generator(g.terms().to_vec());
    }
    engine.run(max_degree);
    engine
        .reduced()
        .into_iter()
        .map(|t| Polynomial::from_sorted(ring, t))
        .collect()
}

/// Fully reduce `f` by a list of monic polynomials sorted in `f`'s ring order.
pub(crate) fn reduce_by(f: &Polynomial, basis: &[Polynomial]) -> Polynomial {
    let ring = f.ring();
    let mut engine = Engine::new(ring.order(), ring.field());
    for b in basis {
        let lm = *b.leading_monomial().expect("nonzero basis element");
        engine.elements.push(Element {
            mask: lm.support_mask(),
            lm,
            sugar: 0,
            terms: b.terms().to_vec(),
        });
        engine.active.push(engine.elements.len() - 1);
    }
    let out = engine.full_reduce(f.terms().to_vec(), None);
    Polynomial::from_sorted(ring, out)
}
