use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use serde_json::{json, Value};

use cremona::classify::{final_classification, CaseLabel, ExclusionCertificate, StepKind, Subject, Verdict};
use cremona::intersect::{
    double_point_class, e4_from_c2, e4_from_k2, exceptional_numbers, intersection_table, m4_evaluations,
    mixed_numbers, xi_formula, SurfaceInvariants,
};
use cremona::k3pipeline::{run_pipeline, verify_example as run_checks, CheckRecord, PipelineError, SectionInput};
use cremona::lattice::{
    discriminant_action, discriminant_group, full_base_change, smith_normal_form, solve_class_decomposition,
    ClassConstraints, GramLattice, L_SIDE_LABELS, M_SIDE_LABELS,
};
use cremona::motivic::{
    annihilation_identity, blowup_derivation, expected_annihilation, point_count_realization, PointCounts, Side,
};

pub const SCHEMA: u32 = 1;

const BUNDLED_FIXTURE: &str = include_str!("../../core/fixtures/h_f7_v1.json");

/// Problems with the command's input; reported with exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub enum Outcome {
    Pass,
    Fail,
}

pub struct Output {
    pub report: Value,
    pub summary: String,
    pub outcome: Outcome,
}

impl Output {
    fn new(command: &str, passed: bool, mut payload: Value, summary: String) -> Self {
        let map = payload.as_object_mut().expect("payload is an object");
        map.insert("schema".into(), json!(SCHEMA));
        map.insert("command".into(), json!(command));
        map.insert("passed".into(), json!(passed));
        Self {
            report: payload,
            summary,
            outcome: if passed { Outcome::Pass } else { Outcome::Fail },
        }
    }
}

fn read_input(path: &Path) -> Result<String, InputError> {
    let err = |source| InputError::Read {
        path: path.display().to_string(),
        source,
    };
    if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).map_err(err)?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).map_err(err)
    }
}

fn read_fixture(path: Option<&Path>) -> Result<String, InputError> {
    path.map_or_else(|| Ok(BUNDLED_FIXTURE.to_string()), read_input)
}

/// Parses a section matrix. A well-formed matrix whose point rows are off
/// the Grassmannian is a failed check, not an input error.
fn parse_section(text: &str) -> Result<Result<SectionInput, PipelineError>, InputError> {
    match SectionInput::from_json(text) {
        Ok(input) => Ok(Ok(input)),
        Err(e @ (PipelineError::PointOffGrassmannian { .. } | PipelineError::RankDeficient(_))) => Ok(Err(e)),
        Err(e) => Err(InputError::Invalid(e.to_string())),
    }
}

fn check_line(c: &CheckRecord) -> String {
    if c.passed {
        format!("PASS {:<28} {}\n", c.id, c.computed)
    } else {
        format!("FAIL {:<28} expected {}, computed {}\n", c.id, c.expected, c.computed)
    }
}

fn failed_check(id: &str, claim: &str, expected: &str, error: &PipelineError) -> CheckRecord {
    CheckRecord {
        id: id.into(),
        claim: claim.into(),
        expected: expected.into(),
        computed: error.to_string(),
        passed: false,
        elapsed_ms: 0,
    }
}

pub fn verify_example(fixture: Option<&Path>) -> Result<Output, InputError> {
    let text = read_fixture(fixture)?;
    let checks = match parse_section(&text)? {
        Ok(input) => match run_checks(&input) {
            Ok(report) => report.checks,
            Err(e) => vec![failed_check("pipeline", "the pipeline runs to completion", "completed", &e)],
        },
        Err(e) => vec![failed_check(
            "section_input",
            "rows 5..7 of the section matrix are points of OG(5,10)",
            "valid",
            &e,
        )],
    };
    let passed = checks.iter().all(|c| c.passed);
    let mut summary: String = checks.iter().map(check_line).collect();
    let ok = checks.iter().filter(|c| c.passed).count();
    writeln!(summary, "{ok}/{} checks passed", checks.len()).unwrap();
    Ok(Output::new("verify-example", passed, json!({ "checks": checks }), summary))
}

pub fn intersection(path: Option<&Path>) -> Result<Output, InputError> {
    let s: SurfaceInvariants = match path {
        None => SurfaceInvariants::example(),
        Some(p) => serde_json::from_str(&read_input(p)?).map_err(|e| InputError::Invalid(e.to_string()))?,
    };
    let mut issues = Vec::new();
    if let Err(e) = s.validate() {
        issues.push(e.to_string());
    }
    let (e4_c2, e4_k2) = (e4_from_c2(&s), e4_from_k2(&s));
    if e4_c2 != e4_k2 {
        issues.push(format!("the two expressions for E^4 disagree: {e4_c2} vs {e4_k2}"));
    }
    let (m4_first, m4_second) = m4_evaluations(&s);
    if (m4_first, m4_second) != (1, 1) {
        issues.push(format!("M^4 evaluates to ({m4_first}, {m4_second}), not 1"));
    }
    let xi = xi_formula(&s);
    if xi != s.xi {
        issues.push(format!("L M^3 = {xi} but xi = {}", s.xi));
    }
    let double_point = match double_point_class(&s) {
        Ok(dp) => {
            if dp.nodes != s.delta {
                issues.push(format!("double-point class {} predicts {} nodes", dp.class, dp.nodes));
            }
            json!(dp)
        }
        Err(e) => {
            issues.push(e.to_string());
            Value::Null
        }
    };
    let table = intersection_table(&s).ok();
    let mut summary = String::new();
    if let Some(t) = &table {
        writeln!(summary, "(L^3M, L^2M^2, LM^3, M^4) = {:?}", t.mixed.as_array()).unwrap();
        writeln!(summary, "(L^3E, L^2E^2, LE^3, E^4) = {:?}", t.le.as_array()).unwrap();
    } else {
        writeln!(summary, "M^4 = ({m4_first}, {m4_second}), L M^3 = {xi}").unwrap();
    }
    for issue in &issues {
        writeln!(summary, "issue: {issue}").unwrap();
    }
    let passed = issues.is_empty();
    writeln!(summary, "{}", if passed { "consistent" } else { "inconsistent" }).unwrap();
    let payload = json!({
        "invariants": s,
        "table": table,
        "e4": { "from_c2": e4_c2, "from_k2": e4_k2 },
        "m4": { "first": m4_first, "second": m4_second },
        "lm3": xi,
        "double_point": double_point,
        "issues": issues,
    });
    Ok(Output::new("intersection", passed, payload, summary))
}

fn certificate_name(c: &ExclusionCertificate) -> String {
    match c.subject {
        Subject::Case { label } => format!("({label})"),
        Subject::SubCase { label, d, delta } => format!("({label}) (d, delta) = ({d}, {delta})"),
    }
}

fn describe_certificate(out: &mut String, c: &ExclusionCertificate, show_steps: bool) {
    let verdict = match &c.verdict {
        Verdict::Excluded => "excluded".to_string(),
        Verdict::Survives(pairs) => format!("survives with (d, delta) in {pairs:?}"),
    };
    writeln!(out, "{} {verdict}", certificate_name(c)).unwrap();
    if !show_steps {
        return;
    }
    let mut branch = None;
    for s in &c.steps {
        if s.branch != branch {
            branch = s.branch.clone();
            if let Some(b) = &branch {
                writeln!(out, "  if {b}:").unwrap();
            }
        }
        let kind = match s.kind {
            StepKind::Arithmetic => "",
            StepKind::CitedAssumption => " [cited]",
        };
        let status = match s.relation {
            Some(_) if s.holds() => " [ok]",
            Some(_) => " [FAILS]",
            None => "",
        };
        let indent = if branch.is_some() { "    " } else { "  " };
        writeln!(out, "{indent}- {}{kind}{status}", s.claim).unwrap();
    }
}

pub fn classify(show_steps: bool, case: Option<&str>) -> Result<Output, InputError> {
    let label = case
        .map(|c| c.parse::<CaseLabel>().map_err(|e| InputError::Invalid(e.to_string())))
        .transpose()?;
    let report = match final_classification() {
        Ok(r) => r,
        Err(e) => {
            let summary = format!("classification failed: {e}\n");
            return Ok(Output::new("classify", false, json!({ "error": e.to_string() }), summary));
        }
    };
    let mut summary = String::new();
    let payload = match label {
        Some(label) => {
            let certs: Vec<&ExclusionCertificate> = report
                .certificates
                .iter()
                .filter(|c| matches!(c.subject, Subject::Case { label: l } | Subject::SubCase { label: l, .. } if l == label))
                .collect();
            for c in &certs {
                describe_certificate(&mut summary, c, show_steps);
            }
            let case = report.cases.iter().find(|c| c.label == label);
            json!({ "case": case, "certificates": certs })
        }
        None => {
            for c in &report.certificates {
                describe_certificate(&mut summary, c, show_steps);
            }
            let (n, m, xi, d, delta) = report.survivor_tuple();
            writeln!(summary, "survivor (n, m, xi, d, delta) = ({n}, {m}, {xi}, {d}, {delta})").unwrap();
            let p = report.projected_surface;
            writeln!(
                summary,
                "S is the projection from {} points of a degree-{} surface with K^2 = {}, c2 = {}, chi = {}",
                p.points, p.degree, p.k2, p.c2, p.chi
            )
            .unwrap();
            let mut v = json!(report);
            v["survivor_tuple"] = json!([n, m, xi, d, delta]);
            v
        }
    };
    Ok(Output::new("classify", true, payload, summary))
}

fn search_json(c: &ClassConstraints) -> Result<Value, String> {
    let window = c.search_window();
    let solution = solve_class_decomposition(c).map_err(|e| e.to_string())?;
    Ok(json!({
        "constraints": c,
        "window_polynomial": c.window_polynomial(),
        "window": [window.start(), window.end()],
        "solution": solution,
    }))
}

pub fn lattice() -> Result<Output, InputError> {
    let lat = GramLattice::algebraic(12);
    let mut issues = Vec::new();
    let factors = smith_normal_form(lat.gram()).diagonal();
    let group = discriminant_group(&lat);
    let s = SurfaceInvariants::example();
    let mixed = mixed_numbers(&s).map_err(|e| InputError::Invalid(e.to_string()))?;
    let m2 = ClassConstraints::m_squared(s.n, &mixed, &exceptional_numbers(), -12);
    let m2_solution = solve_class_decomposition(&m2);
    let m2_json = search_json(&m2).unwrap_or_else(|e| {
        issues.push(format!("M^2 search: {e}"));
        Value::Null
    });
    let hm_json = match &m2_solution {
        Ok(v) => search_json(&ClassConstraints::h_m(s.n, v, -12)).unwrap_or_else(|e| {
            issues.push(format!("H_M search: {e}"));
            Value::Null
        }),
        Err(_) => Value::Null,
    };
    let t = full_base_change(&lat);
    let multiplier = t.as_ref().ok().map(|t| discriminant_action(&lat, t));
    if let Ok(t) = &t {
        for (row, search) in [(0, &m2_json), (1, &hm_json)] {
            if search["solution"] != json!(t.row(row)) {
                issues.push(format!("base-change row {row} differs from the class search"));
            }
        }
    } else if let Err(e) = &t {
        issues.push(format!("base change: {e}"));
    }
    let k = match multiplier {
        Some(Ok(k)) => Some(k),
        Some(Err(e)) => {
            issues.push(format!("discriminant action: {e}"));
            None
        }
        None => None,
    };
    let group_json = match &group {
        Ok(g) => json!({
            "invariant_factors": g.invariant_factors,
            "generators": g.generators.iter()
                .map(|v| v.iter().map(ToString::to_string).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        }),
        Err(e) => {
            issues.push(format!("discriminant group: {e}"));
            Value::Null
        }
    };
    let order = group.as_ref().ok().and_then(|g| g.invariant_factors.first().copied());
    let k_squared = k.zip(order).map(|(k, o)| (k * k) % o);
    if k_squared != Some(1) {
        issues.push("the multiplier is not an involution of the discriminant group".into());
    }
    let mut summary = String::new();
    writeln!(summary, "invariant factors {factors:?}").unwrap();
    writeln!(summary, "M^2 = {}", m2_json["solution"]).unwrap();
    writeln!(summary, "H_M = {}", hm_json["solution"]).unwrap();
    match k {
        Some(k) => writeln!(summary, "discriminant multiplier {k}").unwrap(),
        None => writeln!(summary, "discriminant multiplier unavailable").unwrap(),
    }
    for issue in &issues {
        writeln!(summary, "issue: {issue}").unwrap();
    }
    let payload = json!({
        "gram": lat.gram(),
        "l_labels": L_SIDE_LABELS,
        "m_labels": M_SIDE_LABELS,
        "invariant_factors": factors,
        "discriminant_group": group_json,
        "m_squared": m2_json,
        "h_m": hm_json,
        "base_change": t.as_ref().ok(),
        "multiplier": k,
        "multiplier_squared_mod_order": k_squared,
        "issues": issues,
    });
    Ok(Output::new("lattice", issues.is_empty(), payload, summary))
}

pub fn motivic(points: Option<&Path>) -> Result<Output, InputError> {
    let mut issues = Vec::new();
    let identity = annihilation_identity().map_err(|e| issues.push(e.to_string())).ok();
    let sides: Vec<Value> = [Side::L, Side::M]
        .into_iter()
        .map(|side| json!(blowup_derivation(side)))
        .collect();
    let mut summary = String::new();
    for side in [Side::L, Side::M] {
        writeln!(summary, "[X] = {} (from the {side} side)", blowup_derivation(side).closed_form).unwrap();
    }
    match &identity {
        Some(id) => writeln!(summary, "difference: {id}").unwrap(),
        None => writeln!(summary, "difference does not match {}", expected_annihilation()).unwrap(),
    }
    let realization = match points {
        None => Value::Null,
        Some(path) => {
            let text = read_input(path)?;
            match parse_section(&text)?.and_then(|input| run_pipeline(&input)) {
                Ok(run) => {
                    let real = point_count_realization(PointCounts::from_run(&run));
                    let c = real.counts;
                    writeln!(summary, "#R_L = {}, #S = {}, #T = {} over F_{}", c.r_l, c.s, c.t, c.q).unwrap();
                    writeln!(summary, "#R_M = #T - 3q + 3 = {}, #X = {} from both sides", real.r_m, real.x_from_l)
                        .unwrap();
                    if !real.holds() {
                        issues.push("point counts do not realize the identities".into());
                    }
                    json!({
                        "counts": c,
                        "r_m": real.r_m,
                        "r_m_source": "#T - (3q - 3); no section matrix of R_M is available",
                        "l_side_offset": real.l_side_offset,
                        "x_from_l": real.x_from_l,
                        "x_from_m": real.x_from_m,
                        "x_closed_l": real.x_closed_l,
                        "annihilation": real.annihilation,
                        "holds": real.holds(),
                    })
                }
                Err(e) => {
                    issues.push(e.to_string());
                    Value::Null
                }
            }
        }
    };
    for issue in &issues {
        writeln!(summary, "issue: {issue}").unwrap();
    }
    let payload = json!({
        "sides": sides,
        "identity": identity,
        "expected": expected_annihilation(),
        "point_counts": realization,
        "issues": issues,
    });
    Ok(Output::new("motivic", issues.is_empty(), payload, summary))
}
