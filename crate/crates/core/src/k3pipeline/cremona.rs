use std::sync::Arc;

use rustc_hash::FxHashMap;

use super::points::ProjectivePoint;
use super::PipelineError;
use crate::ffpoly::{monomials_of_degree, Monomial, MonomialOrder, PolyRing, Polynomial, PrimeField};
use crate::groebner::{buchberger, graded_piece_basis, saturate, Ideal};
use crate::linalg::Matrix;

/// Rational self-map of projective space given by forms of a common degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CremonaMap {
    forms: Vec<Polynomial>,
}

impl CremonaMap {
    pub fn new(forms: Vec<Polynomial>) -> Result<Self, PipelineError> {
        let Some(first) = forms.first() else {
            return Err(PipelineError::Input("a map needs at least one form".into()));
        };
        let ring = first.ring().clone();
        if forms.len() != ring.nvars() {
            return Err(PipelineError::Input(format!(
                "{} forms in {} variables",
                forms.len(),
                ring.nvars()
            )));
        }
        let degree = first.homogeneous_degree();
        for f in &forms {
            if !f.ring().same_variables(&ring) {
                return Err(PipelineError::Input("forms from different rings".into()));
            }
            if f.is_zero() || f.homogeneous_degree() != degree || degree.is_none() {
                return Err(PipelineError::Input(format!(
                    "forms must be nonzero and homogeneous of one degree: {f}"
                )));
            }
        }
        Ok(Self { forms })
    }

    pub fn forms(&self) -> &[Polynomial] {
        &self.forms
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        self.forms[0].ring()
    }

    pub fn degree(&self) -> u32 {
        self.forms[0].homogeneous_degree().expect("checked on construction")
    }

    /// `self ∘ inner`: substitute the forms of `inner` into `self`.
    pub fn compose(&self, inner: &CremonaMap) -> Result<Vec<Polynomial>, PipelineError> {
        self.forms
            .iter()
            .map(|f| f.compose(inner.forms()).map_err(PipelineError::from))
            .collect()
    }

    pub fn base_ideal(&self) -> Ideal {
        Ideal::new(self.ring(), self.forms.clone()).expect("homogeneous forms")
    }
}

/// The quartics through the surface: reduced echelon basis of `I_4`.
pub fn cremona_from_ideal(ideal: &Ideal) -> Result<CremonaMap, PipelineError> {
    let n = ideal.ring().nvars();
    let forms = graded_piece_basis(ideal, 4);
    if forms.len() != n {
        return Err(PipelineError::GradedPiece {
            expected: n,
            found: forms.len(),
        });
    }
    CremonaMap::new(forms)
}

/// Inverse map with the common factor: `g_i(f(x)) = x_i * factor(x)`.
#[derive(Clone, Debug)]
pub struct Inversion {
    pub inverse: CremonaMap,
    pub factor: Polynomial,
    /// Dimension of the space of forms vanishing on the image of each
    /// coordinate hyperplane, at the inverse degree.
    pub hyperplane_dimensions: Vec<usize>,
}

fn target_ring(field: PrimeField, n: usize) -> Arc<PolyRing> {
    PolyRing::indexed(field, "y", n, MonomialOrder::DegRevLex).expect("valid ring")
}

fn sorted_monomials(n: usize, deg: u32) -> Vec<Monomial> {
    let mut monos = monomials_of_degree(n, deg);
    monos.sort_by(|a, b| MonomialOrder::DegRevLex.cmp(b, a));
    monos
}

/// `f^alpha` for all monomials `alpha` of one degree, sharing partial products.
fn powers_of(f: &CremonaMap, monos: &[Monomial]) -> Vec<Polynomial> {
    let ring = f.ring();
    let mut cache: FxHashMap<Monomial, Polynomial> = FxHashMap::default();
    cache.insert(Monomial::one(ring.nvars()), Polynomial::one(ring));
    fn power(m: &Monomial, f: &CremonaMap, cache: &mut FxHashMap<Monomial, Polynomial>) -> Polynomial {
        if let Some(p) = cache.get(m) {
            return p.clone();
        }
        let i = m.support().next().expect("non-constant");
        let smaller = Monomial::var(m.nvars(), i).quotient_of(m).expect("divides");
        let p = &power(&smaller, f, cache) * &f.forms()[i];
        cache.insert(*m, p.clone());
        p
    }
    monos.iter().map(|m| power(m, f, &mut cache)).collect()
}

/// Linear system whose columns are the given polynomials, one row per monomial.
fn column_matrix(field: PrimeField, columns: &[Polynomial]) -> Matrix {
    let mut index: FxHashMap<Monomial, usize> = FxHashMap::default();
    for c in columns {
        for (m, _) in c.terms() {
            let next = index.len();
            index.entry(*m).or_insert(next);
        }
    }
    let mut mat = Matrix::zeros(field, index.len(), columns.len());
    for (k, c) in columns.iter().enumerate() {
        for (m, v) in c.terms() {
            mat.set(index[m], k, *v);
        }
    }
    mat
}

fn combine(field: PrimeField, vectors: &[Vec<u32>], weights: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32; vectors.first().map_or(0, Vec::len)];
    for (v, &w) in vectors.iter().zip(weights) {
        for (o, &x) in out.iter_mut().zip(v) {
            *o = field.add(*o, field.mul(w, x));
        }
    }
    out
}

fn linear_combination(field: PrimeField, polys: &[Polynomial], weights: &[u32]) -> Polynomial {
    let ring = polys[0].ring();
    polys
        .iter()
        .zip(weights)
        .fold(Polynomial::zero(ring), |acc, (p, &w)| &acc + &p.scale(w % field.modulus()))
}

/// Solutions of `sum_i x_i c_i(f(x)) = 0` with `c_i` forms of degree `xi` in
/// `y`, as vectors of `n` coefficient blocks over the degree-`xi` monomials in
/// descending degrevlex order.
///
/// The inverse contributes the antisymmetric vectors `g_j e_i - g_i e_j`, but
/// linear syzygies among the `f_j` contribute too, so the kernel is usually larger.
pub fn syzygy_kernel(f: &CremonaMap, xi: u32) -> Vec<Vec<u32>> {
    let ring = f.ring();
    let n = ring.nvars();
    let monos = sorted_monomials(n, xi);
    let powers = powers_of(f, &monos);
    let columns: Vec<Polynomial> = (0..n)
        .flat_map(|i| {
            let x = Polynomial::var(ring, i);
            powers.iter().map(move |p| &x * p).collect::<Vec<_>>()
        })
        .collect();
    column_matrix(ring.field(), &columns).kernel()
}

/// Coefficient vector of a degree-`xi` form over `sorted_monomials(n, xi)`.
pub fn coefficient_vector(p: &Polynomial, xi: u32) -> Vec<u32> {
    sorted_monomials(p.ring().nvars(), xi)
        .iter()
        .map(|m| p.coeff(m))
        .collect()
}

/// Solves `c_i(f) x_j = c_j(f) x_i` for forms `c_i` of degree `xi`. Each `c_i`
/// vanishes on the image of the hyperplane `x_i = 0`, which confines it to a
/// small space computed first. The solutions are `h * g` for the inverse `g`,
/// so at the inverse degree the space is one-dimensional.
fn proportional_solution(
    f: &CremonaMap,
    xi: u32,
) -> Result<Option<(Vec<Polynomial>, Vec<usize>)>, PipelineError> {
    let ring = f.ring();
    let n = ring.nvars();
    let field = ring.field();
    let monos = sorted_monomials(n, xi);
    let powers = powers_of(f, &monos);
    let mut spaces: Vec<Vec<Vec<u32>>> = Vec::with_capacity(n);
    for i in 0..n {
        let restricted: Vec<Polynomial> = powers
            .iter()
            .map(|p| {
                Polynomial::from_terms(
                    ring,
                    p.terms()
                        .iter()
                        .filter(|(m, _)| m.exponent(i) == 0)
                        .map(|(m, c)| (*m, *c as i64))
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        let space = column_matrix(field, &restricted).kernel();
        if space.is_empty() {
            return Ok(None);
        }
        spaces.push(space);
    }
    let dims: Vec<usize> = spaces.iter().map(Vec::len).collect();
    // the forms c(f) for each basis vector of each space
    let composed: Vec<Vec<Polynomial>> = spaces
        .iter()
        .map(|space| {
            space
                .iter()
                .map(|v| linear_combination(field, &powers, v))
                .collect()
        })
        .collect();
    // block i >= 1: x_0 * c_i(f) - x_i * c_0(f) = 0, blocks tagged by an extra variable
    let tagged = PolyRing::indexed(field, "w", n + 1, MonomialOrder::DegRevLex)?;
    let lift: Vec<usize> = (0..n).collect();
    let tag = Polynomial::var(&tagged, n);
    let block = |i: usize, p: &Polynomial| -> Polynomial {
        &p.permute_into(&tagged, &lift) * &tag.pow(i as u32)
    };
    let mut columns = Vec::new();
    for (i, polys) in composed.iter().enumerate() {
        for p in polys {
            if i == 0 {
                let mut acc = Polynomial::zero(&tagged);
                for j in 1..n {
                    let xj = Polynomial::var(ring, j);
                    acc = &acc - &block(j, &(&xj * p));
                }
                columns.push(acc);
            } else {
                let x0 = Polynomial::var(ring, 0);
                columns.push(block(i, &(&x0 * p)));
            }
        }
    }
    let kernel = column_matrix(field, &columns).kernel();
    match kernel.len() {
        0 => Ok(None),
        1 => {
            let sol = &kernel[0];
            let mut offset = 0;
            let mut forms = Vec::with_capacity(n);
            for space in &spaces {
                let weights = &sol[offset..offset + space.len()];
                offset += space.len();
                let coeffs = combine(field, space, weights);
                forms.push(Polynomial::from_terms(
                    ring,
                    coeffs
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .map(|(k, &c)| (monos[k], c as i64))
                        .collect::<Vec<_>>(),
                ));
            }
            Ok(Some((forms, dims)))
        }
        found => Err(PipelineError::KernelDimension { expected: 1, found }),
    }
}

/// Scales the candidate inverse so that `g_i(f(x)) = x_i * D(x)` with one
/// common monic `D`, checks that identity exactly and moves it to `y0..`.
fn normalize_inverse(
    f: &CremonaMap,
    candidates: Vec<Polynomial>,
    xi: u32,
) -> Result<(CremonaMap, Polynomial), PipelineError> {
    let ring = f.ring();
    let field = ring.field();
    let n = ring.nvars();
    let mut factors = Vec::with_capacity(candidates.len());
    for (i, g) in candidates.iter().enumerate() {
        if g.is_zero() {
            return Err(PipelineError::Inversion(format!("component {i} vanishes")));
        }
        let composed = g.compose(f.forms())?;
        let x = Polynomial::var(ring, i);
        let d = composed.divide_exact(&x).ok_or_else(|| {
            PipelineError::Inversion(format!("g_{i}(f) is not divisible by x_{i}"))
        })?;
        factors.push(d);
    }
    let reference = factors[0].monic();
    let lead = *reference
        .leading_monomial()
        .ok_or_else(|| PipelineError::Inversion("g_0(f) vanishes identically".into()))?;
    let target = target_ring(field, n);
    let monos = sorted_monomials(n, xi);
    let mut forms = Vec::with_capacity(candidates.len());
    for (g, d) in candidates.iter().zip(&factors) {
        let lambda = d.coeff(&lead);
        if lambda == 0 || d.scale(field.inv(lambda)?) != reference {
            return Err(PipelineError::Inversion(
                "the factors g_i(f)/x_i are not proportional".into(),
            ));
        }
        let scaled = g.scale(field.inv(lambda)?);
        forms.push(Polynomial::from_terms(
            &target,
            monos
                .iter()
                .map(|m| (*m, scaled.coeff(m) as i64))
                .collect::<Vec<_>>(),
        ));
    }
    Ok((CremonaMap::new(forms)?, reference))
}

/// Inverse of a Cremona map by linear algebra, trying degrees `1..=max_degree`
/// and returning the first (hence gcd-free) solution.
pub fn invert_cremona(f: &CremonaMap, max_degree: u32) -> Result<Inversion, PipelineError> {
    for xi in 1..=max_degree {
        if let Some((candidates, dims)) = proportional_solution(f, xi)? {
            let (inverse, factor) = normalize_inverse(f, candidates, xi)?;
            return Ok(Inversion {
                inverse,
                factor,
                hyperplane_dimensions: dims,
            });
        }
    }
    Err(PipelineError::Inversion(format!(
        "no inverse of degree at most {max_degree}"
    )))
}

/// Inverse through the graph: saturate `<y_i f_j - y_j f_i>` by `<f>` and find
/// forms `c_i(y)` of degree `xi` with `x_0 c_i(y) - x_i c_0(y)` in the graph ideal.
///
/// Much slower than [`invert_cremona`]; intended as an independent cross-check
/// on small maps.
pub fn invert_cremona_graph(f: &CremonaMap, xi: u32) -> Result<Inversion, PipelineError> {
    let src = f.ring();
    let n = src.nvars();
    let field = src.field();
    let mut names: Vec<String> = src.var_names().to_vec();
    names.extend((0..n).map(|i| format!("graph_y{i}")));
    let big = PolyRing::new(field, names, MonomialOrder::DegRevLex)?;
    let lift: Vec<usize> = (0..n).collect();
    let fs: Vec<Polynomial> = f.forms().iter().map(|p| p.permute_into(&big, &lift)).collect();
    let ys: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(&big, n + i)).collect();
    let mut gens = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            gens.push(&(&ys[i] * &fs[j]) - &(&ys[j] * &fs[i]));
        }
    }
    let graph = saturate(&Ideal::new(&big, gens)?, &Ideal::new(&big, fs)?)?;
    let basis = buchberger(&graph, MonomialOrder::DegRevLex);

    let monos = sorted_monomials(n, xi);
    let y_mono = |beta: &Monomial, x: usize| {
        let mut e = vec![0u32; 2 * n];
        e[x] = 1;
        for k in 0..n {
            e[n + k] = beta.exponent(k);
        }
        Polynomial::monomial(&big, Monomial::from_exponents(&e), 1)
    };
    // same block layout as the direct method, with normal forms in place of compositions
    let tagged_names: Vec<String> = big
        .var_names()
        .iter()
        .cloned()
        .chain(std::iter::once("graph_block".to_string()))
        .collect();
    let tagged = PolyRing::new(field, tagged_names, MonomialOrder::DegRevLex)?;
    let lift2: Vec<usize> = (0..2 * n).collect();
    let tag = Polynomial::var(&tagged, 2 * n);
    let mut columns = Vec::new();
    for i in 0..n {
        for beta in &monos {
            if i == 0 {
                let mut acc = Polynomial::zero(&tagged);
                for j in 1..n {
                    let nf = basis.normal_form(&y_mono(beta, j));
                    acc = &acc - &(&nf.permute_into(&tagged, &lift2) * &tag.pow(j as u32));
                }
                columns.push(acc);
            } else {
                let nf = basis.normal_form(&y_mono(beta, 0));
                columns.push(&nf.permute_into(&tagged, &lift2) * &tag.pow(i as u32));
            }
        }
    }
    let kernel = column_matrix(field, &columns).kernel();
    if kernel.len() != 1 {
        return Err(PipelineError::KernelDimension {
            expected: 1,
            found: kernel.len(),
        });
    }
    let len = monos.len();
    let candidates: Vec<Polynomial> = (0..n)
        .map(|i| {
            Polynomial::from_terms(
                src,
                kernel[0][i * len..(i + 1) * len]
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(k, &c)| (monos[k], c as i64))
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    let (inverse, factor) = normalize_inverse(f, candidates, xi)?;
    Ok(Inversion {
        inverse,
        factor,
        hyperplane_dimensions: Vec::new(),
    })
}

/// Determinant of the Jacobian matrix of the map, by Laplace expansion with
/// memoized minors.
pub fn jacobian_determinant(f: &CremonaMap) -> Polynomial {
    let ring = f.ring();
    let n = ring.nvars();
    let jac: Vec<Vec<Polynomial>> = f
        .forms()
        .iter()
        .map(|g| (0..n).map(|i| g.derivative(i)).collect())
        .collect();
    // minors[mask] = det of rows 0..popcount(mask) on the columns in mask
    let mut minors: FxHashMap<u32, Polynomial> = FxHashMap::default();
    minors.insert(0, Polynomial::one(ring));
    for size in 1..=n {
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let row = size - 1;
            let mut acc = Polynomial::zero(ring);
            for (pos, col) in (0..n).filter(|&c| mask & (1 << c) != 0).enumerate() {
                let entry = &jac[row][col];
                if entry.is_zero() {
                    continue;
                }
                let sub = &minors[&(mask & !(1 << col))];
                let term = entry * sub;
                acc = if (pos + row) % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            minors.insert(mask, acc);
        }
    }
    minors.remove(&((1u32 << n) - 1)).expect("full minor")
}

/// Whether every Hasse derivative of `p` of order below `k` vanishes at `point`.
pub fn multiplicity_at_least(p: &Polynomial, point: &ProjectivePoint, k: u32) -> bool {
    k == 0 || p.taylor_low(point.coords(), k - 1).is_zero()
}

/// Base locus of the map: the ideal of its forms saturated by the irrelevant ideal.
pub fn base_locus(g: &CremonaMap) -> Result<Ideal, PipelineError> {
    let ring = g.ring();
    Ok(saturate(&g.base_ideal(), &Ideal::irrelevant(ring))?)
}

/// Local structure of a surface in P^4 at a singular point, read off the
/// tangent cone in the affine chart of the point's leading coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeBranches {
    /// Rank of the linear parts of the local equations.
    pub linear_rank: usize,
    /// Dimension of the span of the quadratic parts.
    pub quadric_span: usize,
    /// Number of `F_p`-points of the projectivized tangent cone.
    pub cone_points: usize,
    /// The cone is two disjoint `F_p`-lines in P^3: two rational smooth
    /// branches meeting transversally.
    pub two_rational_branches: bool,
}

pub fn certify_node_branches(ideal: &Ideal, point: &ProjectivePoint) -> Result<NodeBranches, PipelineError> {
    let ring = ideal.ring();
    let n = ring.nvars();
    let field = ring.field();
    let chart = point
        .coords()
        .iter()
        .position(|&c| c != 0)
        .expect("normalized point");
    let local = PolyRing::indexed(field, "u", n - 1, MonomialOrder::DegRevLex)?;
    let mut images = Vec::with_capacity(n);
    let mut k = 0;
    for (j, &a) in point.coords().iter().enumerate() {
        if j == chart {
            images.push(Polynomial::one(&local));
        } else {
            images.push(&Polynomial::constant(&local, a as i64) + &Polynomial::var(&local, k));
            k += 1;
        }
    }
    let mut linear = Vec::new();
    let mut quadratic = Vec::new();
    let lin_monos: Vec<Monomial> = (0..n - 1).map(|i| Monomial::var(n - 1, i)).collect();
    let quad_monos = monomials_of_degree(n - 1, 2);
    for g in ideal.generators() {
        let h = g.compose(&images)?;
        if h.coeff(&Monomial::one(n - 1)) != 0 {
            return Err(PipelineError::Input(format!("{point} is not on the surface")));
        }
        linear.push(lin_monos.iter().map(|m| h.coeff(m) as i64).collect::<Vec<_>>());
        quadratic.push(quad_monos.iter().map(|m| h.coeff(m) as i64).collect::<Vec<_>>());
    }
    let linear_rank = Matrix::from_rows(field, n - 1, &linear).rank();
    let quads = Matrix::from_rows(field, quad_monos.len(), &quadratic).row_space();
    let quad_polys: Vec<Polynomial> = quads
        .iter()
        .map(|r| {
            Polynomial::from_terms(
                &local,
                r.iter()
                    .zip(&quad_monos)
                    .map(|(&c, m)| (*m, c as i64))
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    let cone: Vec<ProjectivePoint> = super::points::projective_points(field, n - 1)
        .filter(|pt| quad_polys.iter().all(|q| q.evaluate(pt.coords()) == 0))
        .collect();
    let two_rational_branches =
        linear_rank == 0 && quads.len() == 4 && is_two_skew_lines(field, &cone);
    Ok(NodeBranches {
        linear_rank,
        quadric_span: quads.len(),
        cone_points: cone.len(),
        two_rational_branches,
    })
}

fn span_rank(field: PrimeField, pts: &[&ProjectivePoint]) -> usize {
    let Some(first) = pts.first() else { return 0 };
    let rows: Vec<Vec<i64>> = pts
        .iter()
        .map(|p| p.coords().iter().map(|&c| c as i64).collect())
        .collect();
    Matrix::from_rows(field, first.coords().len(), &rows).rank()
}

/// The point set is exactly the union of two disjoint lines of P^3(F_p).
fn is_two_skew_lines(field: PrimeField, pts: &[ProjectivePoint]) -> bool {
    let q = field.modulus() as usize;
    if pts.len() != 2 * (q + 1) {
        return false;
    }
    let p0 = &pts[0];
    for p1 in &pts[1..] {
        let line: Vec<&ProjectivePoint> = pts
            .iter()
            .filter(|p| span_rank(field, &[p0, p1, p]) == 2)
            .collect();
        if line.len() != q + 1 {
            continue;
        }
        let rest: Vec<&ProjectivePoint> = pts.iter().filter(|p| !line.contains(p)).collect();
        let all: Vec<&ProjectivePoint> = pts.iter().collect();
        return span_rank(field, &rest) == 2 && span_rank(field, &all) == 4;
    }
    false
}
