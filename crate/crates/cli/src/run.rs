//! Job execution and the result document.

use rug::Float;
use serde_json::{json, Value};

use polyzeta::atone::decompose_at_one;
use polyzeta::brick::{certify_bounds, decompose_brick, Decomposition};
use polyzeta::exact::{rat_to_string, Rat};
use polyzeta::generic::decompose_generic_z;
use polyzeta::numeval::{decomposition_numeric, series_numeric};
use polyzeta::pfd::{decompose_rational, elementary_series};
use polyzeta::polylog::MzvExpr;
use polyzeta::series::{check_convergence, degree_profile, normalize_shifts, MultSeries};
use polyzeta::sorokin::{default_method, quadrature_check, series_from_integral, Prefactor};
use polyzeta::{Error, Result};

use crate::job::{JobSpec, Mode};

/// Outcome of a job: the document plus the verification verdict, if any.
#[derive(Clone, Debug)]
pub struct Report {
    pub document: Value,
    pub verified: Option<bool>,
}

/// Exit status for an error: 2 for classifier rejections, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Divergent { .. } | Error::NotLogDivergent { .. } => 2,
        _ => 1,
    }
}

fn float_str(f: &Float) -> String {
    format!("{:.30}", f)
}

pub fn mzv_json(e: &MzvExpr) -> Value {
    let terms: Vec<Value> = e
        .terms
        .iter()
        .map(|(s, c)| json!({ "s": s, "coeff": rat_to_string(c) }))
        .collect();
    json!({ "constant": rat_to_string(&e.constant), "terms": terms, "text": e.to_string() })
}

pub fn decomposition_json(d: &Decomposition) -> Value {
    let terms: Vec<Value> = d
        .terms()
        .map(|(t, c)| {
            let coeff: Vec<Value> = c
                .terms()
                .map(|(m, v)| json!({ "monomial": m.to_string(), "exponents": m.0, "coeff": rat_to_string(v) }))
                .collect();
            let args: Vec<String> = t.args.iter().map(|a| a.to_string()).collect();
            json!({ "s": t.s, "args": args, "coeff": coeff })
        })
        .collect();
    json!({ "nvars": d.nvars(), "terms": terms })
}

fn diagnostics(s: &MultSeries) -> Value {
    let norm = normalize_shifts(s);
    let prof = degree_profile(&norm);
    let rows: Vec<Value> = prof
        .prefix_degrees()
        .iter()
        .zip(&prof.bounds)
        .enumerate()
        .map(|(j, (d, b))| json!({ "j": j + 1, "prefix_degree": d, "D": b }))
        .collect();
    json!({
        "depth": s.depth(),
        "weight_bound": s.total_a(),
        "table": rows,
        "margin": prof.margin(),
        "convergent_at_one": check_convergence(s).is_ok(),
    })
}

fn certificates(s: &MultSeries) -> Result<Value> {
    let norm = normalize_shifts(s);
    let pfd = decompose_rational(&norm)?;
    let p = s.depth();
    let args: Vec<_> = (0..p).map(|i| polyzeta::exact::ZMonomial::var(p, i)).collect();
    let mut out = Vec::new();
    for q in pfd.terms.keys() {
        let b = elementary_series(q, &args).to_brick();
        let desc = json!({ "s": b.s, "m": b.m, "j": b.j });
        if b.s.iter().any(|&x| x <= 0) {
            out.push(json!({ "brick": desc, "skipped": "non-positive exponent" }));
            continue;
        }
        let c = certify_bounds(&b, &decompose_brick(&b))?;
        out.push(json!({
            "brick": desc,
            "scale": c.scale.to_string(),
            "z1_range": [c.z1_range.0, c.z1_range.1],
            "denominator_ok": c.denominator_ok,
            "degree_ok": c.degree_ok,
            "constant_coefficients": c.constant_coefficients,
            "pass": c.passed(),
        }));
    }
    Ok(Value::Array(out))
}

fn verify_block(lhs: &Float, rhs: &Float, tail: f64, tol: f64) -> (Value, bool) {
    let diff = Float::with_val(lhs.prec(), lhs - rhs).abs();
    let pass = diff.to_f64() <= tol;
    let v = json!({
        "lhs": float_str(lhs),
        "rhs": float_str(rhs),
        "absdiff": format!("{:.3e}", diff.to_f64()),
        "tail_estimate": format!("{:.3e}", tail),
        "tolerance": format!("{:.1e}", tol),
        "pass": pass,
    });
    (v, pass)
}

pub fn run(job: &JobSpec) -> Result<Report> {
    job.validate()?;
    let prec = job.precision;
    let (prefactor, series): (Option<Prefactor>, MultSeries) = match job.mode {
        Mode::FromIntegral => {
            let int = job.integral.as_ref().expect("validated").build()?;
            let (pre, s) = series_from_integral(&int)?;
            (Some(pre), s)
        }
        _ => (None, job.series()?),
    };
    let mut doc = serde_json::Map::new();
    doc.insert("input".into(), serde_json::to_value(job).expect("job serializes"));
    doc.insert("diagnostics".into(), diagnostics(&series));
    let nv = series.args[0].nvars();
    let point = job.z.point()?;
    let pre_at = |z: &Rat| prefactor.as_ref().map(|p| p.eval(z)).unwrap_or_else(|| Rat::from(1));
    if let Some(p) = &prefactor {
        doc.insert(
            "prefactor".into(),
            json!({ "rational": rat_to_string(&p.rational), "z_power": p.z_power }),
        );
    }
    let mut verified = None;
    if job.z.is_one() {
        let scale = pre_at(&Rat::from(1));
        let expr = decompose_at_one(&series)?.scale(&scale);
        doc.insert("mzv".into(), mzv_json(&expr));
        if job.wants_verification() {
            let ones = vec![Float::with_val(prec, 1); nv];
            let lhs = series_numeric(&series, &ones, job.cutoff, prec)?;
            let lhs_v = Float::with_val(prec, &lhs.extrapolated * &scale);
            let rhs = expr.numeric(prec)?;
            let (v, pass) = verify_block(&lhs_v, &rhs, lhs.tail.to_f64() * scale.to_f64().abs(), job.tolerance);
            doc.insert("verify".into(), v);
            verified = Some(pass);
        }
    } else {
        let d = decompose_generic_z(&series)?;
        doc.insert("decomposition".into(), decomposition_json(&d));
        if let Some(pt) = &point {
            let z: Vec<Float> = pt.iter().map(|x| Float::with_val(prec, x)).collect();
            let scale = pre_at(&pt[0]);
            let rhs = Float::with_val(prec, decomposition_numeric(&d, &z, prec)? * &scale);
            doc.insert("value".into(), json!(float_str(&rhs)));
            if job.wants_verification() {
                let lhs = series_numeric(&series, &z, job.cutoff, prec)?;
                let lhs_v = Float::with_val(prec, &lhs.extrapolated * &scale);
                let (v, pass) = verify_block(&lhs_v, &rhs, lhs.tail.to_f64(), job.tolerance);
                doc.insert("verify".into(), v);
                verified = Some(pass);
            }
        }
    }
    if job.mode == Mode::FromIntegral && job.wants_verification() {
        let int = job.integral.as_ref().expect("validated").build()?;
        if int.dim <= 5 {
            let z = point.as_ref().map(|p| p[0].to_f64()).unwrap_or(1.0);
            let q = quadrature_check(&int, z, default_method(int.dim))?;
            doc.insert(
                "quadrature".into(),
                json!({ "value": q.value, "error": q.error, "method": format!("{:?}", q.method) }),
            );
        }
    }
    if job.emit_certificate {
        doc.insert("certificate".into(), certificates(&series)?);
    }
    Ok(Report { document: Value::Object(doc), verified })
}

/// Short human-readable rendering of a result document.
pub fn render_text(doc: &Value) -> String {
    let mut out = String::new();
    if let Some(d) = doc.get("diagnostics") {
        out.push_str(&format!(
            "depth {}, weight bound {}, convergent at 1: {}\n",
            d["depth"], d["weight_bound"], d["convergent_at_one"]
        ));
        for row in d["table"].as_array().into_iter().flatten() {
            out.push_str(&format!("  j={}  prefix degree {}  D_j {}\n", row["j"], row["prefix_degree"], row["D"]));
        }
    }
    if let Some(p) = doc.get("prefactor") {
        out.push_str(&format!("prefactor: {} * z^{}\n", p["rational"].as_str().unwrap_or(""), p["z_power"]));
    }
    if let Some(m) = doc.get("mzv") {
        out.push_str(&format!("value: {}\n", m["text"].as_str().unwrap_or("")));
    }
    if let Some(d) = doc.get("decomposition") {
        out.push_str("decomposition:\n");
        for t in d["terms"].as_array().into_iter().flatten() {
            let coeff: Vec<String> = t["coeff"]
                .as_array()
                .into_iter()
                .flatten()
                .map(|c| format!("({})*{}", c["coeff"].as_str().unwrap_or(""), c["monomial"].as_str().unwrap_or("")))
                .collect();
            out.push_str(&format!("  [{}] La{}({})\n", coeff.join(" + "), t["s"], t["args"]));
        }
    }
    if let Some(v) = doc.get("value") {
        out.push_str(&format!("numeric value: {}\n", v.as_str().unwrap_or("")));
    }
    if let Some(v) = doc.get("verify") {
        out.push_str(&format!(
            "verify: lhs {} rhs {} absdiff {} (tol {}) {}\n",
            v["lhs"].as_str().unwrap_or(""),
            v["rhs"].as_str().unwrap_or(""),
            v["absdiff"].as_str().unwrap_or(""),
            v["tolerance"].as_str().unwrap_or(""),
            if v["pass"] == true { "PASS" } else { "FAIL" }
        ));
    }
    if let Some(q) = doc.get("quadrature") {
        out.push_str(&format!("quadrature: {} +- {}\n", q["value"], q["error"]));
    }
    if let Some(c) = doc.get("certificate") {
        let all = c.as_array().map(|v| v.len()).unwrap_or(0);
        let ok = c.as_array().into_iter().flatten().filter(|x| x["pass"] == true).count();
        out.push_str(&format!("certificate: {ok}/{all} bricks pass\n"));
    }
    out
}
