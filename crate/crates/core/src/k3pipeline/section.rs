use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::ffpoly::{MonomialOrder, PolyRing, Polynomial, PrimeField};
use crate::groebner::{eliminate, Ideal};
use crate::linalg::Matrix;

const OG_QUADRICS: [&str; 10] = [
    "x0*x11 + x5*x10 - x6*x9 + x7*x8",
    "x0*x12 + x2*x10 - x3*x9 + x4*x8",
    "x0*x13 + x1*x10 - x3*x7 + x4*x6",
    "x0*x14 + x1*x9 - x2*x7 + x4*x5",
    "x0*x15 + x1*x8 - x2*x6 + x3*x5",
    "-x1*x12 + x2*x13 - x3*x14 + x4*x15",
    "x1*x11 - x5*x13 + x6*x14 - x7*x15",
    "-x2*x11 + x5*x12 - x8*x14 + x9*x15",
    "x3*x11 - x6*x12 + x8*x13 - x10*x15",
    "-x4*x11 + x7*x12 - x9*x13 + x10*x14",
];

/// Ring `F_p[x0..x15]` with degrevlex.
pub fn og_ring(field: PrimeField) -> Arc<PolyRing> {
    PolyRing::indexed(field, "x", 16, MonomialOrder::DegRevLex).expect("valid ring")
}

/// The ten spinor quadrics cutting out the orthogonal Grassmannian OG(5,10) in P^15.
pub fn og_ideal(field: PrimeField) -> Ideal {
    let ring = og_ring(field);
    let gens = OG_QUADRICS
        .iter()
        .map(|q| Polynomial::parse(&ring, q).expect("well-formed quadric"))
        .collect();
    Ideal::new(&ring, gens).expect("homogeneous quadrics")
}

#[derive(Deserialize)]
struct RawSection {
    prime: u32,
    matrix: Vec<Vec<i64>>,
}

#[derive(Serialize)]
struct RawSectionOut<'a> {
    prime: u32,
    matrix: &'a [Vec<u32>],
}

/// An 8x16 matrix `H` over `F_p` whose rows span a P^7 in P^15 via `x = z H`.
/// The last three rows are points of the Grassmannian.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionInput {
    field: PrimeField,
    matrix: Vec<Vec<u32>>,
}

impl SectionInput {
    /// Indices of the rows that must be points of OG(5,10).
    pub const POINT_ROWS: [usize; 3] = [5, 6, 7];

    pub fn new(field: PrimeField, matrix: Vec<Vec<i64>>) -> Result<Self, PipelineError> {
        let rows = matrix.len();
        let cols = matrix.first().map_or(0, Vec::len);
        if rows != 8 || matrix.iter().any(|r| r.len() != 16) {
            return Err(PipelineError::MatrixShape { rows, cols });
        }
        let rank = Matrix::from_rows(field, 16, &matrix).rank();
        if rank != 8 {
            return Err(PipelineError::RankDeficient(rank));
        }
        let matrix: Vec<Vec<u32>> = matrix
            .iter()
            .map(|r| r.iter().map(|&v| field.reduce(v)).collect())
            .collect();
        let og = og_ideal(field);
        for row in Self::POINT_ROWS {
            for (q, g) in og.generators().iter().enumerate() {
                if g.evaluate(&matrix[row]) != 0 {
                    return Err(PipelineError::PointOffGrassmannian {
                        row,
                        quadric: q,
                        text: g.to_string(),
                    });
                }
            }
        }
        Ok(Self { field, matrix })
    }

    pub fn from_json(text: &str) -> Result<Self, PipelineError> {
        let raw: RawSection =
            serde_json::from_str(text).map_err(|e| PipelineError::Input(e.to_string()))?;
        let field = PrimeField::new(raw.prime)?;
        Self::new(field, raw.matrix)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&RawSectionOut {
            prime: self.field.modulus(),
            matrix: &self.matrix,
        })
        .expect("serializable")
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn matrix(&self) -> &[Vec<u32>] {
        &self.matrix
    }

    /// Ring `F_p[z0..z7]` of the section.
    pub fn section_ring(&self) -> Arc<PolyRing> {
        PolyRing::indexed(self.field, "z", 8, MonomialOrder::DegRevLex).expect("valid ring")
    }

    /// Image in P^15 of a point of P^7.
    pub fn embed(&self, z: &[u32]) -> Vec<u32> {
        let f = self.field;
        (0..16)
            .map(|j| {
                (0..8).fold(0, |acc, i| f.add(acc, f.mul(z[i], self.matrix[i][j])))
            })
            .collect()
    }
}

/// Ideal of the K3 surface `R` in `F_p[z0..z7]`: the quadrics pulled back along `x = z H`.
pub fn k3_section(input: &SectionInput) -> Result<Ideal, PipelineError> {
    let og = og_ideal(input.field);
    let ring = input.section_ring();
    let gens = og
        .generators()
        .iter()
        .map(|q| q.substitute_linear(input.matrix(), &ring))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Ideal::new(&ring, gens)?)
}

/// Ring `F_p[x0..x4]` of the target P^4.
pub fn p4_ring(field: PrimeField) -> Arc<PolyRing> {
    PolyRing::indexed(field, "x", 5, MonomialOrder::DegRevLex).expect("valid ring")
}

/// Image of `R` under the projection `(z0..z7) -> (z0..z4)` from the plane
/// spanned by the point rows, with variables renamed to `x0..x4`.
pub fn project_to_p4(section: &Ideal) -> Result<Ideal, PipelineError> {
    let ring = section.ring();
    if ring.nvars() != 8 {
        return Err(PipelineError::Input(format!(
            "expected an ideal in 8 variables, found {}",
            ring.nvars()
        )));
    }
    let elim = eliminate(section, &[0, 1, 2, 3, 4])?;
    let target = p4_ring(ring.field());
    let perm: Vec<usize> = (0..8).map(|i| i.min(4)).collect();
    let gens = elim
        .generators()
        .iter()
        .map(|g| g.permute_into(&target, &perm))
        .collect();
    Ok(Ideal::new(&target, gens)?)
}
