use std::path::Path;

use eigenbound_core::koiso_sakane::TABLE_GRID;
use eigenbound_core::moments::moments_up_to;
use eigenbound_core::polytope::format_point;
use eigenbound_core::potential::POTENTIAL_PRESETS;
use eigenbound_core::rational::{format_float, format_rational, parse_rational};
use eigenbound_core::{
    bound_from_raw_moments, ks_bound, ks_family_wq, minimize_bound, moment_tensors, parse_polytope, presets,
    rayleigh_ritz_spectrum, BoundResult, Error, KSData, MomentTensor, Polytope, Rational, SpectrumOptions,
    SymplecticPotential,
};
use serde_json::{json, Value};

use crate::report::{exact_and_float, vector, Failure, RunReport, Table};
use crate::{BoundCommand, Command, LambdaArg, PolytopeInput};

type Outcome = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn load_polytope(input: &PolytopeInput) -> Result<Polytope, Failure> {
    match (&input.file, &input.preset) {
        (Some(path), _) => Ok(parse_polytope(&read(path)?)?),
        (None, Some(name)) => Ok(presets::polytope(name)?),
        (None, None) => Err(Error::InvalidArgument("a polytope file or --preset is required".into()).into()),
    }
}

fn parse_lambda(arg: &LambdaArg) -> Result<Rational, Failure> {
    let lambda = parse_rational(&arg.lambda)?;
    if lambda <= Rational::from_integer(0.into()) {
        return Err(Error::InvalidArgument(format!("Λ must be positive, got {}", arg.lambda)).into());
    }
    Ok(lambda)
}

fn label(p: &Polytope) -> String {
    p.name().unwrap_or("<unnamed>").to_string()
}

pub fn run(command: Command, argv: &[String]) -> Outcome {
    match command {
        Command::Bound(b) => run_bound(b, argv),
        Command::Moments { input, max_degree, json } => moments(&input, max_degree, json, argv),
        Command::Spectrum {
            input,
            potential,
            degree,
            tol,
            check_convergence,
            json,
        } => spectrum(&input, &potential, degree, tol, check_convergence, json, argv),
        Command::Check { input, json } => check(&input, json, argv),
        Command::Table1 { json } => table1(json, argv),
    }
}

fn run_bound(command: BoundCommand, argv: &[String]) -> Outcome {
    match command {
        BoundCommand::Toric {
            input,
            lambda,
            recenter,
            emit_polytope,
            json,
        } => {
            let p = load_polytope(&input)?;
            if emit_polytope {
                return Ok(serde_json::to_string_pretty(&p.to_json()).expect("polytope serializes"));
            }
            toric(&p, &parse_lambda(&lambda)?, recenter, json, argv)
        }
        BoundCommand::Raw {
            file,
            preset,
            lambda,
            json,
        } => {
            let m = match (file, preset) {
                (Some(path), _) => MomentTensor::from_json(&read(&path)?)?,
                (None, Some(name)) => presets::moments(&name)?,
                (None, None) => return Err(Error::InvalidArgument("a moments file or --preset is required".into()).into()),
            };
            let r = bound_from_raw_moments(&m, &parse_lambda(&lambda)?)?;
            if json {
                let mut v = serde_json::to_value(&r).expect("bound serializes");
                v["kind"] = json!("raw_bound");
                return Ok(RunReport::new(argv, &m.to_json(4).to_string(), v).render());
            }
            let mut t = Table::new();
            t.row("region", format!("moment data (dimension {})", m.dim()));
            bound_rows(&mut t, &r);
            Ok(t.render())
        }
        BoundCommand::Ks { n, p, q, lambda, json } => {
            let d = KSData::new(n, p, q, parse_lambda(&lambda)?)?;
            ks(&d, json, argv)
        }
        BoundCommand::KsFamily { big_n, q, table, json } => {
            let grid: Vec<(u32, i64)> = if table {
                TABLE_GRID.to_vec()
            } else {
                vec![(big_n.expect("clap enforces --N"), q.expect("clap enforces --q"))]
            };
            ks_family(&grid, json, argv)
        }
    }
}

fn bound_rows(t: &mut Table, r: &BoundResult) {
    t.row("lambda", format_rational(&r.lambda));
    t.row("bound", exact_and_float(r.exact.as_ref(), r.bound));
    if let Some(raw) = &r.argmin_raw {
        t.row("direction", vector(raw));
    }
    t.row("|Phi|^2", format_float(r.diagnostics.denominator));
    for w in &r.diagnostics.warnings {
        t.row("warning", w.clone());
    }
}

fn toric(p: &Polytope, lambda: &Rational, recenter: bool, json: bool, argv: &[String]) -> Outcome {
    let mut m = moment_tensors(p);
    let barycenter = p.barycenter();
    if recenter {
        m = m.recentered(&barycenter);
    }
    let r = minimize_bound(&m, lambda)?;
    if json {
        let mut v = serde_json::to_value(&r).expect("bound serializes");
        v["kind"] = json!("toric_bound");
        v["polytope"] = json!(label(p));
        v["dimension"] = json!(p.dim());
        v["recentered"] = json!(recenter);
        v["barycenter"] = json!(barycenter.iter().map(format_rational).collect::<Vec<_>>());
        return Ok(RunReport::new(argv, &p.to_json().to_string(), v).render());
    }
    let mut t = Table::new();
    t.row("polytope", format!("{} (dimension {})", label(p), p.dim()));
    if recenter {
        t.row("recentered", format!("by {}", format_point(&barycenter)));
    }
    bound_rows(&mut t, &r);
    Ok(t.render())
}

fn ks_canonical(d: &KSData) -> String {
    json!({"n": d.n, "p": d.p, "q": d.q, "lambda": format_rational(&d.lambda)}).to_string()
}

fn ks_value(d: &KSData, r: &BoundResult) -> Value {
    let mut v = serde_json::to_value(r).expect("bound serializes");
    v["n"] = json!(d.n);
    v["p"] = json!(d.p);
    v["q"] = json!(d.q);
    v
}

fn ks(d: &KSData, json: bool, argv: &[String]) -> Outcome {
    let r = ks_bound(d)?;
    if json {
        let mut v = ks_value(d, &r);
        v["kind"] = json!("ks_bound");
        return Ok(RunReport::new(argv, &ks_canonical(d), v).render());
    }
    let mut t = Table::new();
    t.row("data", format!("n = {:?}, p = {:?}, q = {:?}", d.n, d.p, d.q));
    let (a, b) = d.interval();
    t.row("interval", format!("[{}, {}]", format_rational(&a), format_rational(&b)));
    if let Some(ints) = &r.diagnostics.integrals {
        for (k, i) in ints.exact.iter().enumerate() {
            t.row(format!("I{k}"), format_rational(i));
        }
        t.row("futaki", format_rational(&ints.futaki));
    }
    t.row("lambda", format_rational(&r.lambda));
    t.row("bound", exact_and_float(r.exact.as_ref(), r.bound));
    for w in &r.diagnostics.warnings {
        t.row("warning", w.clone());
    }
    Ok(t.render())
}

fn ks_family(grid: &[(u32, i64)], json: bool, argv: &[String]) -> Outcome {
    let mut rows = Vec::new();
    for &(big_n, q) in grid {
        let d = ks_family_wq(big_n, q)?;
        rows.push((big_n, q, ks_bound(&d)?));
    }
    if json {
        let canonical = json!(grid).to_string();
        let rows: Vec<Value> = rows
            .iter()
            .map(|(big_n, q, r)| {
                json!({
                    "N": big_n,
                    "q": q,
                    "bound": r.bound,
                    "exact": r.exact.as_ref().map(format_rational),
                    "warnings": r.diagnostics.warnings,
                })
            })
            .collect();
        return Ok(RunReport::new(argv, &canonical, json!({"kind": "ks_family", "rows": rows})).render());
    }
    let mut out = vec![format!("{:>2}  {:>2}  {:>12}  exact", "N", "q", "bound")];
    for (big_n, q, r) in &rows {
        out.push(format!(
            "{big_n:>2}  {q:>2}  {:>12}  {}",
            format_float(r.bound),
            r.exact.as_ref().map(format_rational).unwrap_or_default()
        ));
    }
    Ok(out.join("\n"))
}

fn monomial_label(alpha: &[u32]) -> String {
    let parts: Vec<String> = alpha
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{e}", i + 1) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" ")
    }
}

fn moments(input: &PolytopeInput, max_degree: u32, json: bool, argv: &[String]) -> Outcome {
    let p = load_polytope(input)?;
    if json {
        let m = moment_tensors(&p);
        let mut v = m.to_json(max_degree);
        v["kind"] = json!("moments");
        v["polytope"] = json!(label(&p));
        v["max_degree"] = json!(max_degree);
        return Ok(RunReport::new(argv, &p.to_json().to_string(), v).render());
    }
    let table = moments_up_to(&p, max_degree);
    let mut t = Table::new();
    t.row("polytope", format!("{} (dimension {})", label(&p), p.dim()));
    for (alpha, value) in &table {
        t.row(format!("∫ {}", monomial_label(alpha)), format_rational(value));
    }
    Ok(t.render())
}

fn load_potential(name: &str, dim: usize) -> Result<(SymplecticPotential, String), Failure> {
    if POTENTIAL_PRESETS.contains(&name) {
        return Ok((SymplecticPotential::preset(name)?, name.to_string()));
    }
    let path = Path::new(name);
    if !path.exists() {
        return Err(Error::InvalidArgument(format!(
            "potential {name:?} is neither a file nor a preset ({})",
            POTENTIAL_PRESETS.join(", ")
        ))
        .into());
    }
    let text = read(path)?;
    Ok((SymplecticPotential::from_json(&text, dim)?, text))
}

#[allow(clippy::too_many_arguments)]
fn spectrum(
    input: &PolytopeInput,
    potential: &str,
    degree: u32,
    tol: f64,
    check_convergence: bool,
    json: bool,
    argv: &[String],
) -> Outcome {
    let p = load_polytope(input)?;
    let (s, potential_source) = load_potential(potential, p.dim())?;
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")).into());
    }
    let opts = SpectrumOptions {
        tol,
        convergence_check: check_convergence,
        ..Default::default()
    };
    let r = rayleigh_ritz_spectrum(&p, &s, degree, &opts)?;
    if json {
        let mut v = serde_json::to_value(&r).expect("spectrum serializes");
        v["kind"] = json!("spectrum");
        v["polytope"] = json!(label(&p));
        v["potential"] = json!(potential);
        v["degree"] = json!(degree);
        v["tol"] = json!(tol);
        let canonical = format!("{}\n{}", p.to_json(), potential_source);
        return Ok(RunReport::new(argv, &canonical, v).render());
    }
    let mut t = Table::new();
    t.row("polytope", format!("{} (dimension {})", label(&p), p.dim()));
    t.row("potential", potential);
    t.row("basis", format!("{} monomials of degree ≤ {degree}", r.basis.len()));
    t.row("eigenvalues", vector(&r.eigenvalues));
    t.row(
        "quadrature",
        format!(
            "{} leaves, depth ≤ {}, estimated error {:.2e}",
            r.quadrature.leaf_simplices, r.quadrature.max_depth_reached, r.quadrature.estimated_error
        ),
    );
    if let Some(delta) = r.quadrature.refinement_delta {
        t.row("refinement", format!("max eigenvalue change {delta:e}"));
    }
    for w in &r.warnings {
        t.row("warning", w.clone());
    }
    Ok(t.render())
}

fn check(input: &PolytopeInput, json: bool, argv: &[String]) -> Outcome {
    let p = load_polytope(input)?;
    let report = p.check_fano_normalized();
    let volume = eigenbound_core::monomial_moment(&p, &vec![0; p.dim()]);
    if json {
        let mut v = serde_json::to_value(&report).expect("report serializes");
        v["kind"] = json!("check");
        v["polytope"] = json!(label(&p));
        v["dimension"] = json!(p.dim());
        v["volume"] = json!(format_rational(&volume));
        v["vertices"] = json!(p
            .vertices()
            .iter()
            .map(|x| x.iter().map(format_rational).collect::<Vec<_>>())
            .collect::<Vec<_>>());
        return Ok(RunReport::new(argv, &p.to_json().to_string(), v).render());
    }
    let yes = |b: bool| if b { "yes" } else { "no" };
    let mut t = Table::new();
    t.row("polytope", format!("{} (dimension {})", label(&p), p.dim()));
    t.row("facets", p.facets().len().to_string());
    t.row("vertices", p.vertices().len().to_string());
    t.row("volume", format_rational(&volume));
    t.row("Fano-normalized", yes(report.passed));
    t.row("barycenter", format_point(&report.barycenter));
    t.row("Delzant", yes(report.delzant_violations.is_empty()));
    for m in report.messages.iter().chain(&report.delzant_violations) {
        t.row("note", m.clone());
    }
    Ok(t.render())
}

const KS_REMARK: &str = "the Koiso-Sakane bound for the threefold is weaker than the toric bound";

fn table1(json: bool, argv: &[String]) -> Outcome {
    let toric_rows = [
        ("CP^1", "cp1"),
        ("CP^2", "cp2"),
        ("CP^1 x CP^1", "cp1xcp1"),
        ("CP^2 # 3 (-CP^2)", "dp6"),
        ("P(O + O(1,-1)) over CP^1 x CP^1", "threefold"),
    ];
    let one = Rational::from_integer(1.into());
    let mut rows = Vec::new();
    for (manifold, preset) in toric_rows {
        let r = minimize_bound(&moment_tensors(&presets::polytope(preset)?), &one)?;
        rows.push((manifold, "toric", r));
    }
    rows.push((toric_rows[4].0, "koiso-sakane", ks_bound(&ks_family_wq(1, 1)?)?));
    if json {
        let rows: Vec<Value> = rows
            .iter()
            .map(|(manifold, method, r)| {
                json!({
                    "manifold": manifold,
                    "method": method,
                    "bound": r.bound,
                    "exact": r.exact.as_ref().map(format_rational),
                })
            })
            .collect();
        let v = json!({"kind": "table1", "lambda": "1", "rows": rows, "remark": KS_REMARK});
        return Ok(RunReport::new(argv, "table1", v).render());
    }
    let width = rows.iter().map(|(m, _, _)| m.chars().count()).max().unwrap_or(0);
    let mut out = vec![format!("{:<width$}  {:<12}  upper bound (Λ = 1)", "manifold", "method")];
    for (manifold, method, r) in &rows {
        out.push(format!("{manifold:<width$}  {method:<12}  {}", exact_and_float(r.exact.as_ref(), r.bound)));
    }
    out.push(format!("note: {KS_REMARK}"));
    Ok(out.join("\n"))
}
