use std::time::Instant;

use serde::Serialize;

use super::{
    base_locus, certify_node_branches, count_projective_points, cremona_from_ideal, fiber_points,
    invert_cremona, jacobian_determinant, k3_section, project_to_p4, singular_points, CremonaMap,
    Inversion, NodeBranches, PipelineError, ProjectivePoint, SectionInput,
};
use crate::ffpoly::Polynomial;
use crate::groebner::{graded_piece_basis, graded_piece_dimension, hilbert_data, saturate, Ideal};

/// Largest inverse degree tried by [`run_pipeline`].
pub const MAX_INVERSE_DEGREE: u32 = 6;

/// Everything computed from one section matrix.
#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub input: SectionInput,
    /// Ideal of the K3 surface `R` in P^7.
    pub section: Ideal,
    /// Ideal of its projection `S` in P^4.
    pub surface: Ideal,
    pub surface_nodes: Vec<ProjectivePoint>,
    /// The quartics through `S`.
    pub map: CremonaMap,
    pub inversion: Inversion,
    /// Base locus `T` of the inverse map.
    pub base: Ideal,
    pub base_nodes: Vec<ProjectivePoint>,
}

/// One verified claim of the example.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub claim: String,
    pub expected: String,
    pub computed: String,
    pub passed: bool,
    pub elapsed_ms: u64,
}

/// Result of [`verify_example`]: the check records and the computed objects.
#[derive(Clone, Debug)]
pub struct ExampleReport {
    pub checks: Vec<CheckRecord>,
    pub run: PipelineRun,
}

impl ExampleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

struct Recorder {
    checks: Vec<CheckRecord>,
    clock: Instant,
}

impl Recorder {
    fn new() -> Self {
        Self {
            checks: Vec::new(),
            clock: Instant::now(),
        }
    }

    fn record(&mut self, id: &str, claim: &str, expected: impl ToString, computed: impl ToString) {
        let expected = expected.to_string();
        let computed = computed.to_string();
        self.checks.push(CheckRecord {
            id: id.to_string(),
            claim: claim.to_string(),
            passed: expected == computed,
            expected,
            computed,
            elapsed_ms: self.clock.elapsed().as_millis() as u64,
        });
        self.clock = Instant::now();
    }
}

fn dim_deg(ideal: &Ideal) -> String {
    let h = hilbert_data(ideal);
    format!("({}, {})", h.projective_dimension, h.degree)
}

fn list<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    let parts: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn node_summary(cert: &NodeBranches) -> String {
    format!(
        "linear rank {}, {} quadrics, {} cone points, two branches {}",
        cert.linear_rank, cert.quadric_span, cert.cone_points, cert.two_rational_branches
    )
}

fn nodes_certified(ideal: &Ideal, nodes: &[ProjectivePoint]) -> Result<String, PipelineError> {
    let mut out = Vec::new();
    for p in nodes {
        out.push(node_summary(&certify_node_branches(ideal, p)?));
    }
    out.dedup();
    Ok(list(out))
}

fn expected_node() -> String {
    list([node_summary(&NodeBranches {
        linear_rank: 0,
        quadric_span: 4,
        cone_points: 16,
        two_rational_branches: true,
    })])
}

/// Computes the whole chain `R -> S -> f -> g -> T` without checking anything.
pub fn run_pipeline(input: &SectionInput) -> Result<PipelineRun, PipelineError> {
    let section = k3_section(input)?;
    let surface = project_to_p4(&section)?;
    let surface_nodes = singular_points(&surface);
    let map = cremona_from_ideal(&surface)?;
    let inversion = invert_cremona(&map, MAX_INVERSE_DEGREE)?;
    let base = base_locus(&inversion.inverse)?;
    let base_nodes = singular_points(&base);
    Ok(PipelineRun {
        input: input.clone(),
        section,
        surface,
        surface_nodes,
        map,
        inversion,
        base,
        base_nodes,
    })
}

/// Runs the pipeline and records the fourteen checks of the worked example.
///
/// Errors are reserved for inputs the pipeline cannot process at all; a
/// computed value differing from the expected one yields a failed record.
pub fn verify_example(input: &SectionInput) -> Result<ExampleReport, PipelineError> {
    let mut rec = Recorder::new();

    let section = k3_section(input)?;
    rec.record(
        "section_dimension_degree",
        "the linear section R of OG(5,10) is a surface of degree 12 in P^7",
        "(2, 12)",
        dim_deg(&section),
    );
    rec.record(
        "section_hilbert_polynomial",
        "R has Hilbert polynomial 6t^2+2",
        "6t^2+2",
        hilbert_data(&section).hilbert_polynomial,
    );

    let surface = project_to_p4(&section)?;
    rec.record(
        "surface_dimension_degree",
        "the projection S of R to P^4 is a surface of degree 9",
        "(2, 9)",
        dim_deg(&surface),
    );
    rec.record(
        "surface_low_degree_forms",
        "no forms of degree at most 3 vanish on S",
        "[0, 0, 0]",
        list((1..=3).map(|t| graded_piece_dimension(&surface, t))),
    );

    let quartic_ideal = Ideal::new(surface.ring(), graded_piece_basis(&surface, 4))?;
    let cut_out = saturate(&quartic_ideal, &Ideal::irrelevant(surface.ring()))?.same_ideal(&surface);
    rec.record(
        "surface_quartics",
        "S lies on exactly five independent quartics, which cut it out",
        "5 quartics, cut out true",
        format!(
            "{} quartics, cut out {}",
            graded_piece_dimension(&surface, 4),
            cut_out
        ),
    );

    let surface_nodes = singular_points(&surface);
    rec.record(
        "surface_singular_points",
        "S has exactly three singular F_7-points",
        3,
        surface_nodes.len(),
    );
    rec.record(
        "node_fibers",
        "each singular point of S has two preimages on R off the centre of projection",
        "[2, 2, 2]",
        list(surface_nodes.iter().map(|p| fiber_points(p, input, &section).len())),
    );
    rec.record(
        "surface_nodes_transverse",
        "each singular point of S is a transverse double point with rational branches",
        expected_node(),
        nodes_certified(&surface, &surface_nodes)?,
    );

    let map = cremona_from_ideal(&surface)?;
    let inversion = invert_cremona(&map, MAX_INVERSE_DEGREE)?;
    let ring = map.ring();
    let exact = map.forms().len() == inversion.inverse.forms().len()
        && inversion
            .inverse
            .forms()
            .iter()
            .enumerate()
            .all(|(i, g)| match g.compose(map.forms()) {
                Ok(c) => c == &Polynomial::var(ring, i) * &inversion.factor,
                Err(_) => false,
            });
    rec.record(
        "inverse_quartics",
        "the inverse map is given by quartics g with g_i(f(x)) = x_i D(x)",
        "degree 4, identity true",
        format!("degree {}, identity {}", inversion.inverse.degree(), exact),
    );

    let det = jacobian_determinant(&map);
    rec.record(
        "jacobian_factor",
        "D has degree 15 and is proportional to the Jacobian determinant of f",
        "degree 15, proportional true",
        format!(
            "degree {}, proportional {}",
            inversion.factor.total_degree().map_or(-1, i64::from),
            !det.is_zero() && det.monic() == inversion.factor.monic()
        ),
    );

    let target = inversion.inverse.ring();
    let mut forward_degrees = Vec::new();
    for (i, fi) in map.forms().iter().enumerate() {
        let composed = fi.compose(inversion.inverse.forms())?;
        let y = Polynomial::var(target, i);
        forward_degrees.push(
            composed
                .divide_exact(&y)
                .and_then(|d| d.homogeneous_degree())
                .map_or(-1, i64::from),
        );
    }
    forward_degrees.dedup();
    rec.record(
        "forward_identity",
        "f_i(g(y)) = y_i D'(y) with one common D' of degree 15",
        "[15]",
        list(forward_degrees),
    );

    let base = base_locus(&inversion.inverse)?;
    rec.record(
        "base_locus_dimension_degree",
        "the base locus T of g is a surface of degree 9 on five quartics",
        "(2, 9), 5 quartics",
        format!("{}, {} quartics", dim_deg(&base), graded_piece_dimension(&base, 4)),
    );
    let base_nodes = singular_points(&base);
    rec.record(
        "base_locus_nodes",
        "T has exactly three singular F_7-points, all transverse double points",
        format!("3, {}", expected_node()),
        format!("{}, {}", base_nodes.len(), nodes_certified(&base, &base_nodes)?),
    );

    let (r, s, t) = (
        count_projective_points(&section),
        count_projective_points(&surface),
        count_projective_points(&base),
    );
    rec.record(
        "point_counts",
        "#S(F_7) = #R(F_7) + 18 and #T(F_7) = #S(F_7)",
        "true, true",
        format!("{}, {}", s == r + 18, t == s),
    );

    Ok(ExampleReport {
        checks: rec.checks,
        run: PipelineRun {
            input: input.clone(),
            section,
            surface,
            surface_nodes,
            map,
            inversion,
            base,
            base_nodes,
        },
    })
}
