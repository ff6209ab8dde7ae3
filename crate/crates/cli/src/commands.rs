use std::fmt::Write;

use qhmod_core::algebra::BiPoly;
use qhmod_core::foliation::{index_sum_check, IndexModel, IndexReport};
use qhmod_core::moduli::{canonical_fingerprint, decide_equivalence_with, fmt_complex, witness_bound, SpherePoint};
use qhmod_core::parser::{format_poly, parse_poly};
use qhmod_core::quasihom::{classify_curve, decompose, CurveType, QHNormalForm, QuasiHomError, Stratum, Weights};
use qhmod_core::resolution::{
    attachment_representative, euclid_chain, export_graph, is_contractible, simulate_resolution, DualGraph,
    GraphFormat, ResolutionError,
};
use serde::Serialize;

use crate::render;
use crate::{CliError, Outcome, OutputFormat, RunConfig, EXIT_INTERNAL, EXIT_NOT_EQUIVALENT};

pub(crate) struct Loaded {
    pub poly: BiPoly,
    pub nf: QHNormalForm,
}

pub(crate) fn load(src: &str) -> Result<Loaded, CliError> {
    let poly = parse_poly(src)?;
    let nf = decompose(&poly)?;
    if nf.degenerate && nf.m == 0 && nf.n == 0 {
        return Err(QuasiHomError::ConstantGerm.into());
    }
    Ok(Loaded { poly, nf })
}

pub(crate) fn classify(src: &str) -> Result<(Loaded, CurveType), CliError> {
    let loaded = load(src)?;
    let curve = classify_curve(&loaded.nf)?;
    Ok((loaded, curve))
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn no_dot(cfg: &RunConfig) -> Result<(), CliError> {
    if cfg.format == OutputFormat::Dot {
        return Err(CliError::input("--format dot is only available for resolve"));
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphSummary {
    pub components: usize,
    /// In chain order, starting from the line the x-axis meets.
    pub self_intersections: Vec<i64>,
    pub valuations: Vec<(u64, u64)>,
    pub principal: Option<usize>,
    pub contractible: bool,
}

impl GraphSummary {
    fn new(g: &DualGraph) -> Self {
        GraphSummary {
            components: g.components.len(),
            self_intersections: g.self_intersections(),
            valuations: g.components.iter().map(|c| (c.vx, c.vy)).collect(),
            principal: g.principal().map(|c| c.id),
            contractible: is_contractible(g),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeReport {
    pub input: String,
    pub weights: Weights,
    pub normal_form: String,
    pub mu: String,
    pub m: u32,
    pub n: u32,
    pub lambdas: Vec<String>,
    pub stratum: Stratum,
    pub stratum_label: String,
    pub flag_m: u8,
    pub flag_k: u8,
    pub points: Vec<SpherePoint>,
    pub fingerprint: String,
    pub graph: GraphSummary,
    pub representative: Vec<SpherePoint>,
    pub no_principal_line: bool,
}

fn analyze_report(src: &str) -> Result<AnalyzeReport, CliError> {
    let (Loaded { poly, nf }, curve) = classify(src)?;
    let g = simulate_resolution(&nf);
    let rep = attachment_representative(&g);
    Ok(AnalyzeReport {
        input: format_poly(&poly),
        weights: nf.weights,
        normal_form: render::normal_form(&nf),
        mu: nf.mu.to_string(),
        m: nf.m,
        n: nf.n,
        lambdas: nf.lambdas.iter().map(|&z| fmt_complex(z)).collect(),
        stratum: curve.stratum,
        stratum_label: curve.stratum.to_string(),
        flag_m: curve.flag_m,
        flag_k: curve.flag_k,
        points: curve.lambdas.clone(),
        fingerprint: canonical_fingerprint(&curve),
        graph: GraphSummary::new(&g),
        representative: rep.points,
        no_principal_line: rep.no_principal_line,
    })
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

pub fn analyze(src: &str, cfg: &RunConfig) -> Result<String, CliError> {
    no_dot(cfg)?;
    let r = analyze_report(src)?;
    if cfg.format == OutputFormat::Json {
        return Ok(json(&r));
    }
    let mut out = String::new();
    let w = &r.weights;
    let _ = writeln!(out, "input: {}", r.input);
    let _ = writeln!(
        out,
        "weights: p={} q={} degree={}{}",
        w.p,
        w.q,
        w.d,
        if w.swapped { " (x, y swapped)" } else { "" }
    );
    let _ = writeln!(out, "normal form: {}", r.normal_form);
    let _ = writeln!(
        out,
        "stratum: {} flag_m={} flag_k={}",
        r.stratum_label, r.flag_m, r.flag_k
    );
    let _ = writeln!(out, "points: {}", join(&r.points));
    let _ = writeln!(out, "fingerprint: {}", r.fingerprint);
    let _ = writeln!(
        out,
        "resolution: {} lines, self-intersections {}",
        r.graph.components,
        join(&r.graph.self_intersections)
    );
    match r.graph.principal {
        Some(id) => {
            let _ = writeln!(out, "principal line: D{id}");
        }
        None => out.push_str("principal line: none\n"),
    }
    let _ = writeln!(out, "attachment points: {}", join(&r.representative));
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
struct EquivReport {
    equivalent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    map: Option<(String, String)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    permutation: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual: Option<String>,
}

fn equiv_report(first: &str, second: &str, cfg: &RunConfig) -> Result<EquivReport, CliError> {
    let (a, ca) = classify(first)?;
    let (b, cb) = classify(second)?;
    let verdict = decide_equivalence_with(&ca, &cb, cfg.tolerance)?;
    let Some(w) = verdict.witness.filter(|_| verdict.equivalent) else {
        return Ok(EquivReport {
            equivalent: false,
            reason: verdict.certificate,
            map: None,
            alpha: None,
            permutation: None,
            residual: None,
        });
    };
    let lifted = w.lift(&a.nf, &b.nf, &a.poly.to_complex_poly(), &b.poly.to_complex_poly());
    if !(lifted.residual <= witness_bound(cfg.tolerance)) {
        return Err(CliError::internal(format!(
            "witness residual {:e} on the inputs",
            lifted.residual
        )));
    }
    Ok(EquivReport {
        equivalent: true,
        reason: None,
        map: Some((
            render::complex_poly(&lifted.map.px),
            render::complex_poly(&lifted.map.py),
        )),
        alpha: Some(fmt_complex(lifted.alpha)),
        permutation: Some(lifted.permutation),
        residual: Some(format!("{:.3e}", lifted.residual)),
    })
}

pub fn equiv(first: &str, second: &str, cfg: &RunConfig) -> Outcome {
    let report = match no_dot(cfg).and_then(|_| equiv_report(first, second, cfg)) {
        Ok(r) => r,
        Err(e) => return e.into(),
    };
    let code = if report.equivalent { 0 } else { EXIT_NOT_EQUIVALENT };
    let stdout = if cfg.format == OutputFormat::Json {
        json(&report)
    } else {
        let mut out = format!("equivalent: {}\n", report.equivalent);
        if let Some(reason) = &report.reason {
            let _ = writeln!(out, "reason: {reason}");
        }
        if let (Some((px, py)), Some(alpha), Some(perm), Some(res)) =
            (&report.map, &report.alpha, &report.permutation, &report.residual)
        {
            let _ = writeln!(out, "T(x, y) = ({px}, {py})");
            let _ = writeln!(out, "alpha: {alpha}");
            let _ = writeln!(out, "permutation: {perm:?}");
            let _ = writeln!(out, "residual: {res}");
        }
        out
    };
    Outcome {
        stdout,
        stderr: String::new(),
        code,
    }
}

pub fn resolve(src: &str, cfg: &RunConfig) -> Result<String, CliError> {
    let Loaded { nf, .. } = load(src)?;
    let g = simulate_resolution(&nf);
    Ok(match cfg.format {
        OutputFormat::Dot => export_graph(&g, GraphFormat::Dot),
        OutputFormat::Json => export_graph(&g, GraphFormat::Json) + "\n",
        OutputFormat::Text => {
            let mut out = String::new();
            for c in &g.components {
                let _ = write!(
                    out,
                    "D{} self-intersection {} valuations ({}, {})",
                    c.id, c.self_int, c.vx, c.vy
                );
                if c.principal {
                    out.push_str(" principal");
                }
                for a in &c.attachments {
                    let _ = write!(out, " [{} x{}]", a.position, a.mult);
                }
                out.push('\n');
            }
            let edges: Vec<String> = g.edges.iter().map(|(a, b)| format!("D{a}-D{b}")).collect();
            let _ = writeln!(out, "edges: {}", edges.join(" "));
            out
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FoliationInput {
    Curve(String),
    /// `y^p − x^q`.
    Pair(u32, u32),
}

#[derive(Debug, Clone, Serialize)]
struct FoliationReport {
    hamiltonian: IndexReport,
    fibration: IndexReport,
}

fn foliation_report(input: &FoliationInput, cfg: &RunConfig) -> Result<FoliationReport, CliError> {
    let nf = match input {
        FoliationInput::Curve(src) => load(src)?.nf,
        &FoliationInput::Pair(p, q) => {
            if p == 0 || q == 0 {
                return Err(ResolutionError::InvalidWeights { p, q }.into());
            }
            euclid_chain(p.min(q), p.max(q))?;
            decompose(&BiPoly::from_int_terms(&[(0, p, 1), (q, 0, -1)]))?
        }
    };
    let g = simulate_resolution(&nf);
    let conv = cfg.cs_convention.into();
    let (p, q) = (nf.weights.p, nf.weights.q);
    Ok(FoliationReport {
        hamiltonian: index_sum_check(&g, IndexModel::hamiltonian(&nf), conv)?,
        fibration: index_sum_check(&g, IndexModel::Fibration { p, q }, conv)?,
    })
}

fn render_index(out: &mut String, r: &IndexReport) {
    let conv = serde_json::to_value(r.convention)
        .ok()
        .and_then(|v| v.as_str().map(String::from))
        .unwrap_or_default();
    let _ = writeln!(out, "{} ({conv} convention)", r.model);
    for c in &r.components {
        if c.skipped_dicritical {
            let _ = writeln!(out, "  D{} order 0: dicritical, skipped", c.id);
        } else {
            let status = if c.pass { "pass" } else { "FAIL" };
            let _ = writeln!(
                out,
                "  D{} order {}: sum {}, self-intersection {}, {status}",
                c.id, c.order, c.sum, c.expected
            );
        }
    }
}

pub fn foliation_check(input: &FoliationInput, cfg: &RunConfig) -> Outcome {
    let report = match no_dot(cfg).and_then(|_| foliation_report(input, cfg)) {
        Ok(r) => r,
        Err(e) => return e.into(),
    };
    let pass = report.hamiltonian.all_pass() && report.fibration.all_pass();
    let stdout = if cfg.format == OutputFormat::Json {
        json(&report)
    } else {
        let mut out = String::new();
        render_index(&mut out, &report.hamiltonian);
        render_index(&mut out, &report.fibration);
        out.push_str(if pass {
            "all checks pass\n"
        } else {
            "index sums do not match\n"
        });
        out
    };
    Outcome {
        stdout,
        stderr: String::new(),
        code: if pass { 0 } else { EXIT_INTERNAL },
    }
}
