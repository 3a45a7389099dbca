use nalgebra::DMatrix;
use racg_core::coloring::{
    build_120cell, build_kgon, deformed_normals, empirical_lipschitz, five_color_120cell,
    lorentz_form, margulis_demo, LipschitzMap,
};
use racg_core::coxeter::{CoxeterGraph, NormalForm, Word};
use racg_core::exact::{format_rational, int, parse_rational, Rational, RationalMatrix};
use racg_core::gram::{GramFamily, SignatureProfile};
use racg_core::hpq::LieElement;
use racg_core::normalize::{graph_hash, Cocycle, Frame, NormalizedRep, IOTA_CONVENTION};
use racg_core::verify::{
    estimate_spacelike_lipschitz, estimate_vf_lipschitz, properness_probe_affine,
    properness_probe_group, quadric_expansion_check, random_lie_elements, rational_base,
    spacelike_escape_check, ContractionReport, EquivariantMap, OrbitSample, VectorField, Verdict,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{
    Cli, ColoringArgs, Command, ExportArgs, ExportKind, OrbitArgs, ProfileArgs, RepArgs, VerifyArgs,
};
use crate::report::{to_json, Failure, Outcome};
use crate::svg;

/// Steps allowed when reducing a point into the fundamental chamber.
const REDUCTION_BUDGET: usize = 10_000;
/// Elements allowed per sphere when enumerating balls of the group.
const SPHERE_BUDGET: usize = 1 << 20;
const LIPSCHITZ_SLACK: f64 = 1e-6;
const ORTHOGONALITY_TOL: f64 = 1e-12;
const RESIDUAL_TOL: f64 = 1e-9;

type Run = Result<Outcome, Failure>;

pub fn run(cli: &Cli) -> Run {
    let common = &cli.common;
    match &cli.command {
        Command::Profile(a) => profile(&load_graph(cli)?, config(cli, a)?, a),
        Command::Rep(a) => rep(&load_graph(cli)?, config(cli, a)?, a),
        Command::Perron => perron(&load_graph(cli)?, config(cli, &json!({}))?),
        Command::Orbit(a) => orbit(&load_graph(cli)?, config(cli, a)?, a),
        Command::Cocycle(a) => cocycle(&load_graph(cli)?, config(cli, a)?, a),
        Command::Verify(a) => verify(&load_graph(cli)?, config(cli, a)?, a, common.seed),
        Command::Coloring(a) => coloring(config(cli, a)?, a, common.seed),
        Command::Export(a) => export(&load_graph(cli)?, config(cli, a)?, a),
    }
}

fn load_graph(cli: &Cli) -> Result<CoxeterGraph, Failure> {
    let text = match &cli.common.graph {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Failure::config(format!("reading {path}: {e}")))?,
        None => cli.common.preset.clone(),
    };
    Ok(CoxeterGraph::parse(&text)?)
}

/// Full run configuration embedded in every report.
fn config<T: Serialize>(cli: &Cli, args: &T) -> Result<Value, Failure> {
    let graph = match &cli.command {
        Command::Coloring(_) => Value::Null,
        _ => to_json(&load_graph(cli)?.to_spec())?,
    };
    Ok(json!({ "common": to_json(&cli.common)?, "graph": graph, "args": to_json(args)? }))
}

fn rational(text: &str) -> Result<Rational, Failure> {
    Ok(parse_rational(text)?)
}

fn exact_rows(m: &RationalMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(format_rational).collect())
        .collect()
}

fn float_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| m.row(i).iter().copied().collect())
        .collect()
}

fn check_word(graph: &CoxeterGraph, text: &str) -> Result<Word, Failure> {
    let w = Word::parse(text)?;
    match w.0.iter().find(|&&a| a >= graph.k()) {
        Some(a) => Err(Failure::config(format!(
            "generator {} out of range 1..={}",
            a + 1,
            graph.k()
        ))),
        None => Ok(w),
    }
}

fn ball(graph: &CoxeterGraph, len: usize) -> Result<Vec<NormalForm>, Failure> {
    Ok(graph
        .enumerate_ball(len, SPHERE_BUDGET)?
        .into_iter()
        .flatten()
        .collect())
}

fn normalized(fam: &GramFamily, t: &Rational) -> Result<(Frame, NormalizedRep), Failure> {
    if fam.det_polynomial().eval(t) == int(0) {
        return Err(racg_core::Error::Singular(format_rational(t)).into());
    }
    let frame = Frame::new(fam)?;
    let rep = NormalizedRep::new(fam, &frame, t)?;
    Ok((frame, rep))
}

/// Range from a root bound of `det(M_t)` up to `-1`.
fn default_range(fam: &GramFamily) -> (Rational, Rational) {
    let p = fam.det_polynomial();
    let hi = int(-1);
    let coeffs = p.coeffs();
    let bound = match p.degree() {
        Some(d) if d > 0 => {
            let lead = &coeffs[d];
            let ratios = coeffs[..d].iter().map(|c| {
                let r = c / lead;
                if r < int(0) {
                    -r
                } else {
                    r
                }
            });
            ratios.fold(int(1), |acc, r| if r > acc { r } else { acc }) + int(1)
        }
        _ => int(1),
    };
    let lo = -(bound.floor() + int(1));
    (lo.min(int(-2)), hi)
}

fn profile(graph: &CoxeterGraph, config: Value, a: &ProfileArgs) -> Run {
    let fam = GramFamily::new(graph.clone());
    let (lo, hi) = match &a.range {
        Some(r) => {
            let (lo, hi) = r.split_once(':').expect("validated by the parser");
            (rational(lo)?, rational(hi)?)
        }
        None => default_range(&fam),
    };
    let profile = fam.signature_profile(&lo, &hi);
    let result = json!({
        "profile": to_json(&profile)?,
        "suggested_interval": to_json(&profile.default_interval())?,
    });
    let mut out = Outcome::new("profile", config, result, Verdict::Pass);
    out.csv = Some(profile_csv(&profile));
    Ok(out)
}

fn profile_csv(profile: &SignatureProfile) -> String {
    let mut csv = String::from("lo,hi,lo_open,hi_open,sample,positive,negative\n");
    for s in &profile.segments {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            format_rational(&s.lo),
            format_rational(&s.hi),
            s.lo_open,
            s.hi_open,
            format_rational(&s.sample),
            s.signature.positive,
            s.signature.negative
        ));
    }
    csv
}

#[derive(Serialize)]
struct RepExport {
    schema: u32,
    graph: racg_core::coxeter::GraphSpec,
    graph_hash: String,
    t: String,
    signature: (usize, usize),
    iota_convention: &'static str,
    gram_matrix: Vec<Vec<String>>,
    generators: Vec<Vec<Vec<String>>>,
    word: String,
    /// `ρ_t(word)`, exact.
    matrix: Vec<Vec<String>>,
    /// `ι ρ_t(word) ι⁻¹`.
    normalized: Vec<Vec<f64>>,
    iota: Vec<Vec<f64>>,
    congruence_residual: f64,
    group_residual: f64,
}

fn rep_export(graph: &CoxeterGraph, t_text: &str, word: &str) -> Result<RepExport, Failure> {
    let t = rational(t_text)?;
    let w = check_word(graph, word)?;
    let fam = GramFamily::new(graph.clone());
    let (_, rep) = normalized(&fam, &t)?;
    let conjugated = rep.conjugated(&w);
    Ok(RepExport {
        schema: crate::report::SCHEMA,
        graph: graph.to_spec(),
        graph_hash: graph_hash(&graph.canonical_json()),
        t: format_rational(&t),
        signature: rep.norm.signature,
        iota_convention: IOTA_CONVENTION,
        gram_matrix: exact_rows(&rep.rep.m_t),
        generators: rep.rep.generators.iter().map(exact_rows).collect(),
        word: w.to_string(),
        matrix: exact_rows(&rep.rep.represent(&w)),
        congruence_residual: rep.norm.congruence_residual(&rep.rep.m_t),
        group_residual: rep.form().group_residual(&conjugated),
        normalized: float_rows(&conjugated),
        iota: float_rows(&rep.norm.iota),
    })
}

fn rep(graph: &CoxeterGraph, config: Value, a: &RepArgs) -> Run {
    let r = rep_export(graph, &a.t, &a.word)?;
    let ok = r.congruence_residual < RESIDUAL_TOL && r.group_residual < RESIDUAL_TOL;
    Ok(Outcome::new(
        "rep",
        config,
        to_json(&r)?,
        if ok { Verdict::Pass } else { Verdict::Fail },
    ))
}

fn perron(graph: &CoxeterGraph, config: Value) -> Run {
    let data = GramFamily::new(graph.clone()).perron()?;
    Ok(Outcome::new(
        "perron",
        config,
        to_json(&data)?,
        Verdict::Pass,
    ))
}

fn orbit(graph: &CoxeterGraph, config: Value, a: &OrbitArgs) -> Run {
    let t = rational(&a.t)?;
    let fam = GramFamily::new(graph.clone());
    let (_, rep) = normalized(&fam, &t)?;
    let base = rational_base(&fam.perron()?);
    let sample = OrbitSample::build(graph, &rep, &base, a.len)?;
    let points: Vec<Value> = sample
        .points
        .iter()
        .map(|p| {
            json!({
                "word": p.word.to_string(),
                "exact": p.exact.iter().map(format_rational).collect::<Vec<_>>(),
                "point": p.point.0.iter().copied().collect::<Vec<f64>>(),
            })
        })
        .collect();
    let mut csv = String::from("word");
    for i in 0..rep.form().dim() {
        csv.push_str(&format!(",x{i}"));
    }
    csv.push('\n');
    for p in &sample.points {
        csv.push_str(&p.word.to_string());
        for x in p.point.0.iter() {
            csv.push_str(&format!(",{x:.17e}"));
        }
        csv.push('\n');
    }
    let result = json!({
        "t": format_rational(&t),
        "signature": rep.norm.signature,
        "base": base.iter().map(format_rational).collect::<Vec<_>>(),
        "count": sample.len(),
        "points": points,
    });
    let mut out = Outcome::new("orbit", config, result, Verdict::Pass);
    out.csv = Some(csv);
    Ok(out)
}

/// Largest relative defect of `u(ab) = u(a) + Ad(a) u(b)` for generators `a`.
fn cocycle_defect(rep: &NormalizedRep, words: &[NormalForm], k: usize) -> f64 {
    let mut worst = 0.0f64;
    for w in words {
        let b = w.to_word();
        let ub = rep.cocycle(&b);
        for a in 0..k {
            let a = Word(vec![a]);
            let lhs = rep.cocycle(&a.concat(&b));
            let rhs = rep.affine_act(&a, &ub);
            worst = worst.max((&lhs.0 - &rhs.0).amax() / lhs.0.amax().max(1.0));
        }
    }
    worst
}

fn cocycle(graph: &CoxeterGraph, config: Value, a: &OrbitArgs) -> Run {
    let t = rational(&a.t)?;
    let fam = GramFamily::new(graph.clone());
    let (_, rep) = normalized(&fam, &t)?;
    let words = ball(graph, a.len)?;
    let table = Cocycle::build(&rep, &words);
    let form = rep.form();
    let lie_residual = table
        .table
        .values()
        .map(|u| form.lie_residual(u) / u.0.amax().max(1.0))
        .fold(0.0, f64::max);
    let identity_residual = cocycle_defect(&rep, &words, graph.k());
    let export = table.export(&rep, &graph.canonical_json());
    let ok = lie_residual < RESIDUAL_TOL && identity_residual < RESIDUAL_TOL;
    let result = json!({
        "lie_residual": lie_residual,
        "identity_residual": identity_residual,
        "cocycle": to_json(&export)?,
    });
    Ok(Outcome::new(
        "cocycle",
        config,
        result,
        if ok { Verdict::Pass } else { Verdict::Fail },
    ))
}

/// Refuses parameters that are not in one constant-signature segment.
fn check_segment(fam: &GramFamily, t: &Rational, s: &Rational) -> Result<(), Failure> {
    let (lo, hi) = (
        t.clone().min(s.clone()) - int(1),
        t.clone().max(s.clone()) + int(1),
    );
    let profile = fam.signature_profile(&lo, &hi);
    let det = fam.det_polynomial();
    for x in [t, s] {
        if det.eval(x) == int(0) {
            return Err(racg_core::Error::Singular(format_rational(x)).into());
        }
    }
    let describe = |v: &racg_core::gram::ExceptionalValue| {
        format!(
            "[{}, {}] (~{})",
            format_rational(&v.interval.lo),
            format_rational(&v.interval.hi),
            v.approx
        )
    };
    let Some(segment) = profile.segment_containing(t) else {
        let near: Vec<String> = profile
            .exceptional
            .iter()
            .filter(|v| v.interval.lo <= *t && *t <= v.interval.hi)
            .map(describe)
            .collect();
        return Err(Failure::config(format!(
            "t = {} lies in the isolating interval {} of an exceptional value",
            format_rational(t),
            near.join(", ")
        )));
    };
    if !segment.contains(s) {
        let between: Vec<String> = profile
            .exceptional
            .iter()
            .filter(|v| v.interval.hi > *t.min(s) && v.interval.lo < *t.max(s))
            .map(describe)
            .collect();
        return Err(Failure::config(format!(
            "t = {} and s = {} straddle the exceptional value(s) isolated in {}",
            format_rational(t),
            format_rational(s),
            between.join(", ")
        )));
    }
    Ok(())
}

fn pair_csv(reports: &[(&str, &ContractionReport)]) -> String {
    let mut csv = String::from("kind,a,b,d_before,value\n");
    for (kind, report) in reports {
        for r in &report.records {
            csv.push_str(&format!(
                "{kind},{},{},{:.17e},{:.17e}\n",
                r.a, r.b, r.d_before, r.value
            ));
        }
    }
    csv
}

fn verify(graph: &CoxeterGraph, config: Value, a: &VerifyArgs, seed: u64) -> Run {
    let (t, s) = (rational(&a.t)?, rational(&a.s)?);
    if t > s {
        return Err(Failure::config(format!(
            "need t <= s, got t = {} and s = {}",
            a.t, a.s
        )));
    }
    let fam = GramFamily::new(graph.clone());
    check_segment(&fam, &t, &s)?;
    let mut warnings = Vec::new();
    if t == s {
        warnings
            .push("t equals s: the map is the identity and every distance ratio is 1".to_string());
    }
    let (frame, rep_t) = normalized(&fam, &t)?;
    let rep_s = NormalizedRep::new(&fam, &frame, &s)?;
    let base = rational_base(&fam.perron()?);
    let sample = OrbitSample::build(graph, &rep_t, &base, a.len)?;
    let form = rep_t.form();

    let map = EquivariantMap::new(&fam, &frame, &t, &s, REDUCTION_BUDGET)?;
    let images = map.apply_orbit(graph, &sample)?;
    let map_report =
        estimate_spacelike_lipschitz(&form, &sample, &rep_s.form(), &images, a.separation)?;

    let field = VectorField::new(&fam, &frame, &t, REDUCTION_BUDGET)?;
    let z = field.along_orbit(&sample)?;
    let field_report = estimate_vf_lipschitz(&form, &sample, &z, a.separation)?;

    let escape = spacelike_escape_check(&form, &sample);
    let quadric = quadric_expansion_check(&fam, &t, a.quadric_samples, seed);
    let group = properness_probe_group(&rep_t, &rep_s, &ball(graph, a.len)?)?;
    let y = random_lie_elements(&form, 1, a.affine_scale, seed).remove(0);
    let ys = [LieElement::zero(form.dim()), LieElement(&y.0 * 10.0), y];
    let affine = properness_probe_affine(graph, &rep_t, &sample, &z, &ys, a.translates, seed);

    let verdicts = [
        ("map", map_report.verdict),
        ("vector_field", field_report.verdict),
        ("escape", escape.verdict),
        ("quadric", quadric.verdict),
        ("group_probe", group.verdict),
        ("affine_probe", affine.verdict),
    ];
    let verdict = if verdicts.iter().all(|(_, v)| v.passed()) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    let result = json!({
        "t": format_rational(&t),
        "s": format_rational(&s),
        "signature": rep_t.norm.signature,
        "orbit_size": sample.len(),
        "verdicts": to_json(&verdicts.iter().copied().collect::<std::collections::BTreeMap<_, _>>())?,
        "map": to_json(&map_report)?,
        "map_fit_violation": map_report.fit_violation(),
        "vector_field": to_json(&field_report)?,
        "escape": to_json(&escape)?,
        "quadric": to_json(&quadric)?,
        "group_probe": to_json(&group)?,
        "affine_probe": to_json(&affine)?,
    });
    let mut out = Outcome::new("verify", config, result, verdict);
    out.warnings = warnings;
    out.csv = Some(pair_csv(&[
        ("map", &map_report),
        ("vector_field", &field_report),
    ]));
    out.svg = Some(svg::ratio_scatter(
        &format!("{} generators, t = {}, s = {}", graph.k(), a.t, a.s),
        &map_report,
    ));
    Ok(out)
}

fn coloring(config: Value, a: &ColoringArgs, seed: u64) -> Run {
    if let Some(k) = a.kgon {
        let poly = build_kgon(k)?;
        let dn = deformed_normals(&poly, a.t)?;
        let form = lorentz_form(dn.dim());
        let residual = poly
            .edges()
            .iter()
            .map(|&(i, j)| {
                let (u, v) = (&dn.vectors[i], &dn.vectors[j]);
                form.pairing(u, v).abs() / (u.norm() * v.norm())
            })
            .fold(0.0, f64::max);
        let map = LipschitzMap::new(&poly, a.t, a.s, REDUCTION_BUDGET)?;
        let bound = map.lipschitz_constant();
        let ratio = empirical_lipschitz(&map, a.pairs, a.radius, seed)?;
        let ok = ratio <= bound + LIPSCHITZ_SLACK && residual < ORTHOGONALITY_TOL;
        let result = json!({
            "construction": "kgon",
            "k": k,
            "t": a.t,
            "s": a.s,
            "lipschitz_constant": bound,
            "empirical_ratio": ratio,
            "orthogonality_residual": residual,
            "pairs": a.pairs,
            "radius": a.radius,
        });
        return Ok(Outcome::new(
            "coloring",
            config,
            result,
            if ok { Verdict::Pass } else { Verdict::Fail },
        ));
    }
    if let Some(k) = a.margulis {
        let report = margulis_demo(k, a.t, a.s, seed)?;
        let verdict = report.verdict;
        return Ok(Outcome::new(
            "coloring",
            config,
            json!({ "construction": "margulis", "report": to_json(&report)? }),
            verdict,
        ));
    }
    let poly = build_120cell()?;
    poly.validate()?;
    let five = five_color_120cell(&poly)?;
    poly.check_coloring(&five.coloring)?;
    let degrees: Vec<usize> = poly
        .adjacency
        .iter()
        .map(|row| row.iter().filter(|&&b| b).count())
        .collect();
    let degree = degrees.iter().all(|&d| d == degrees[0]).then(|| degrees[0]);
    let edges = poly.edges().len();
    let ok =
        poly.faces() == 120 && degree == Some(12) && edges == 720 && five.class_sizes == [24; 5];
    let result = json!({
        "construction": "120cell",
        "vectors": poly.faces(),
        "degree": degree,
        "edges": edges,
        "colors": five.class_sizes.len(),
        "coloring": to_json(&five)?,
    });
    Ok(Outcome::new(
        "coloring",
        config,
        result,
        if ok { Verdict::Pass } else { Verdict::Fail },
    ))
}

fn export(graph: &CoxeterGraph, config: Value, a: &ExportArgs) -> Run {
    let require_t = || {
        a.t.as_deref()
            .ok_or_else(|| Failure::config("--t is required for this export"))
    };
    let result = match a.kind {
        ExportKind::Graph => to_json(&graph.to_spec())?,
        ExportKind::Rep => to_json(&rep_export(graph, require_t()?, &a.word)?)?,
        ExportKind::Cocycle => {
            let t = rational(require_t()?)?;
            let (_, rep) = normalized(&GramFamily::new(graph.clone()), &t)?;
            to_json(
                &Cocycle::build(&rep, &ball(graph, a.len)?).export(&rep, &graph.canonical_json()),
            )?
        }
    };
    let mut out = Outcome::new("export", config, result, Verdict::Pass);
    out.raw = true;
    Ok(out)
}
