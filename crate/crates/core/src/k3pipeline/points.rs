use std::fmt;

use serde::{Deserialize, Serialize};

use super::SectionInput;
use crate::ffpoly::{Polynomial, PrimeField};
use crate::groebner::Ideal;
use crate::linalg::Matrix;

/// Point of projective space over `F_p`, scaled so its first nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProjectivePoint(Vec<u32>);

impl ProjectivePoint {
    /// `None` for the zero vector.
    pub fn new(field: PrimeField, coords: &[u32]) -> Option<Self> {
        let lead = coords.iter().copied().find(|&c| c % field.modulus() != 0)?;
        let inv = field.inv(lead % field.modulus()).ok()?;
        Some(Self(coords.iter().map(|&c| field.mul(c % field.modulus(), inv)).collect()))
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(":")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// All points of `P^{n-1}(F_p)` in lexicographic order of normalized coordinates.
pub fn projective_points(field: PrimeField, n: usize) -> impl Iterator<Item = ProjectivePoint> {
    let p = field.modulus();
    (0..n).flat_map(move |lead| {
        let free = n - lead - 1;
        let count = (p as u64).pow(free as u32);
        (0..count).map(move |mut code| {
            let mut v = vec![0u32; n];
            v[lead] = 1;
            for slot in v[lead + 1..].iter_mut().rev() {
                *slot = (code % p as u64) as u32;
                code /= p as u64;
            }
            ProjectivePoint(v)
        })
    })
}

/// Polynomial compiled for repeated evaluation: `(coefficient, [(var, exp)])`.
struct Compiled {
    terms: Vec<(u32, Vec<(usize, u32)>)>,
}

impl Compiled {
    fn new(p: &Polynomial) -> Self {
        Self {
            terms: p
                .terms()
                .iter()
                .map(|(m, c)| {
                    let factors = m
                        .exponents()
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(i, &e)| (i, e as u32))
                        .collect();
                    (*c, factors)
                })
                .collect(),
        }
    }

    fn eval(&self, field: PrimeField, x: &[u32]) -> u32 {
        let p = field.modulus() as u64;
        let mut acc = 0u64;
        for (c, factors) in &self.terms {
            let mut v = *c as u64;
            for &(i, e) in factors {
                let xi = x[i] as u64;
                for _ in 0..e {
                    v = v * xi % p;
                }
            }
            acc += v;
        }
        (acc % p) as u32
    }
}

/// Points of `P^{n-1}(F_p)` on `V(I)`, enumerated in parallel and returned sorted.
pub fn zeros(ideal: &Ideal) -> Vec<ProjectivePoint> {
    let field = ideal.ring().field();
    let n = ideal.ring().nvars();
    let compiled: Vec<Compiled> = ideal.generators().iter().map(Compiled::new).collect();
    filter_points(field, n, |x| compiled.iter().all(|g| g.eval(field, x) == 0))
}

/// Number of `F_p`-points of `V(I)` in projective space.
pub fn count_projective_points(ideal: &Ideal) -> u64 {
    zeros(ideal).len() as u64
}

fn filter_points<F>(field: PrimeField, n: usize, pred: F) -> Vec<ProjectivePoint>
where
    F: Fn(&[u32]) -> bool + Sync,
{
    let all: Vec<ProjectivePoint> = projective_points(field, n).collect();
    let threads = std::thread::available_parallelism().map_or(1, |t| t.get()).min(16);
    let chunk = all.len().div_ceil(threads).max(1);
    let mut out: Vec<ProjectivePoint> = std::thread::scope(|s| {
        let handles: Vec<_> = all
            .chunks(chunk)
            .map(|part| {
                let pred = &pred;
                s.spawn(move || {
                    part.iter()
                        .filter(|pt| pred(pt.coords()))
                        .cloned()
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("enumeration worker panicked"))
            .collect()
    });
    out.sort();
    out
}

/// Rank of the Jacobian matrix of `gens` at `point`.
pub fn jacobian_rank(gens: &[Polynomial], point: &[u32]) -> usize {
    let Some(first) = gens.first() else { return 0 };
    let field = first.field();
    let n = first.ring().nvars();
    let rows: Vec<Vec<i64>> = gens
        .iter()
        .map(|g| (0..n).map(|i| g.derivative(i).evaluate(point) as i64).collect())
        .collect();
    Matrix::from_rows(field, n, &rows).rank()
}

/// `F_p`-points of the surface `V(I)` in P^4 where the Jacobian of the
/// generators has rank at most 1.
pub fn singular_points(ideal: &Ideal) -> Vec<ProjectivePoint> {
    let field = ideal.ring().field();
    let n = ideal.ring().nvars();
    let gens = ideal.generators();
    let compiled: Vec<Compiled> = gens.iter().map(Compiled::new).collect();
    let partials: Vec<Vec<Compiled>> = gens
        .iter()
        .map(|g| (0..n).map(|i| Compiled::new(&g.derivative(i))).collect())
        .collect();
    let codim = 2;
    filter_points(field, n, |x| {
        if !compiled.iter().all(|g| g.eval(field, x) == 0) {
            return false;
        }
        let rows: Vec<Vec<i64>> = partials
            .iter()
            .map(|row| row.iter().map(|d| d.eval(field, x) as i64).collect())
            .collect();
        Matrix::from_rows(field, n, &rows).rank() < codim
    })
}

/// Points of `V(section)` in P^7 mapping to `a` under `(z0..z7) -> (z0..z4)`,
/// excluding the centre plane `z0 = .. = z4 = 0`.
pub fn fiber_points(a: &ProjectivePoint, input: &SectionInput, section: &Ideal) -> Vec<ProjectivePoint> {
    let field = input.field();
    let p = field.modulus();
    let compiled: Vec<Compiled> = section.generators().iter().map(Compiled::new).collect();
    let mut out = Vec::new();
    for code in 0..(p as u64).pow(3) {
        let mut z = a.coords().to_vec();
        let mut c = code;
        for _ in 0..3 {
            z.push((c % p as u64) as u32);
            c /= p as u64;
        }
        if compiled.iter().all(|g| g.eval(field, &z) == 0) {
            out.push(ProjectivePoint::new(field, &z).expect("nonzero"));
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_sizes() {
        let f = PrimeField::f7();
        assert_eq!(projective_points(f, 5).count(), 2801);
        assert_eq!(projective_points(f, 2).count(), 8);
        let pts: Vec<_> = projective_points(f, 3).collect();
        let mut sorted = pts.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 57);
    }

    #[test]
    fn normalization_is_canonical() {
        let f = PrimeField::f7();
        let a = ProjectivePoint::new(f, &[0, 3, 6]).unwrap();
        let b = ProjectivePoint::new(f, &[0, 1, 2]).unwrap();
        assert_eq!(a, b);
        assert!(ProjectivePoint::new(f, &[0, 0]).is_none());
        assert_eq!(a.to_string(), "(0:1:2)");
    }
}
