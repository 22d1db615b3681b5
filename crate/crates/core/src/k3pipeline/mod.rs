//! The degree-12 K3 example: a linear section of the orthogonal Grassmannian
//! in P^15, its projection to a nodal surface in P^4, the quartic Cremona
//! transformation defined by that surface and its inverse.

mod cremona;
mod points;
mod section;
mod verify;

use crate::ffpoly::PolyError;
use crate::groebner::IdealError;

pub use cremona::{
    base_locus, certify_node_branches, coefficient_vector, cremona_from_ideal, invert_cremona,
    invert_cremona_graph, jacobian_determinant, multiplicity_at_least, syzygy_kernel, CremonaMap, Inversion, NodeBranches,
};
pub use points::{
    count_projective_points, fiber_points, jacobian_rank, projective_points, singular_points, zeros,
    ProjectivePoint,
};
pub use section::{k3_section, og_ideal, p4_ring, project_to_p4, SectionInput};
pub use verify::{run_pipeline, verify_example, CheckRecord, ExampleReport, PipelineRun, MAX_INVERSE_DEGREE};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PipelineError {
    #[error("section matrix must be 8x16, found {rows}x{cols}")]
    MatrixShape { rows: usize, cols: usize },
    #[error("section matrix has rank {0}, expected 8")]
    RankDeficient(usize),
    #[error("point row {row} does not satisfy quadric {quadric} ({text})")]
    PointOffGrassmannian {
        row: usize,
        quadric: usize,
        text: String,
    },
    #[error("expected a {expected}-dimensional space of quartics, found {found}")]
    GradedPiece { expected: usize, found: usize },
    #[error("inversion system has a {found}-dimensional solution space, expected {expected}")]
    KernelDimension { expected: usize, found: usize },
    #[error("inversion failed: {0}")]
    Inversion(String),
    #[error("malformed section input: {0}")]
    Input(String),
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}
