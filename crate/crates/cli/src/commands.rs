use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use localinv_core::{
    check_pole_orders, commutant_dimension_mu, degree_bounds, enumerate_generators, evaluate,
    evaluate_planned, evaluate_simple, evaluate_with_plan, hs_local, kron_expand,
    optimal_contraction_cost, plan_contraction, reconstruct_local, reconstruct_rational,
    span_dimension_rho, verify_bound_empirically, verify_generation, ContractionPlan, EndoTuple,
    Endomorphism, EnumerationFilter, GirthBound, InputSampler, MultiDegree, Reconstruction,
    SimpleEndo, TraceMonomial, MAX_ORDER,
};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::args::{
    BoundsArgs, Command, EnumerateArgs, EvalArgs, HilbertArgs, PlanArgs, VerifyArgs,
};
use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: &str = "localinv/1";

/// Result of one invocation: the JSON document, its text rendering and the
/// exit code.
#[derive(Debug)]
pub struct Output {
    pub json: Value,
    pub text: String,
    pub exit: i32,
}

pub fn run(command: &Command) -> CliResult<Output> {
    match command {
        Command::Enumerate(a) => enumerate(a),
        Command::Eval(a) => eval(a),
        Command::Verify(a) => verify(a),
        Command::Hilbert(a) => hilbert(a),
        Command::Bounds(a) => bounds(a),
        Command::Plan(a) => plan(a),
    }
}

/// Serializes `payload` (an object) and adds the schema version and command.
fn envelope(command: &str, payload: &impl Serialize) -> CliResult<Value> {
    let mut out = Map::new();
    out.insert("schema_version".into(), json!(SCHEMA_VERSION));
    out.insert("command".into(), json!(command));
    match serde_json::to_value(payload)? {
        Value::Object(fields) => out.extend(fields),
        other => {
            out.insert("result".into(), other);
        }
    }
    Ok(Value::Object(out))
}

fn pad_alpha(alpha: &MultiDegree, m: Option<usize>) -> CliResult<MultiDegree> {
    match m {
        None => Ok(alpha.clone()),
        Some(m) if m < alpha.m() => Err(CliError::Usage(format!(
            "--alpha has {} entries but --m is {m}",
            alpha.m()
        ))),
        Some(m) => {
            let mut degrees = alpha.degrees.clone();
            degrees.resize(m, 0);
            Ok(MultiDegree::new(degrees))
        }
    }
}

fn read_json(path: &Path) -> CliResult<Value> {
    let raw = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&raw).map_err(|e| CliError::Input {
        path: path.to_owned(),
        message: e.to_string(),
    })
}

fn decode<T: serde::de::DeserializeOwned>(path: &Path, field: &str, v: Value) -> CliResult<T> {
    serde_json::from_value(v).map_err(|e| CliError::Input {
        path: path.to_owned(),
        message: if field.is_empty() {
            e.to_string()
        } else {
            format!("{field}: {e}")
        },
    })
}

fn enumerate(a: &EnumerateArgs) -> CliResult<Output> {
    let alpha = pad_alpha(&a.alpha, a.m)?;
    let d = &a.dims;
    let girth = if a.small_dim {
        GirthBound::SmallDim
    } else if a.girth {
        GirthBound::Square
    } else {
        GirthBound::Off
    };
    let filter = EnumerationFilter {
        connected_only: a.connected,
        girth,
    };
    let selected = enumerate_generators(&alpha, d, filter)?;
    let all = enumerate_generators(&alpha, d, EnumerationFilter::default())?;
    let small_ok = d.dims().iter().all(|&di| di <= 3);
    let mut connected = 0usize;
    let mut square = 0usize;
    let mut small = 0usize;
    for t in &all {
        connected += t.is_connected() as usize;
        square += t.girth_filter(d, false)? as usize;
        if small_ok {
            small += t.girth_filter(d, true)? as usize;
        }
    }
    let mut counts = json!({ "all": all.len(), "connected": connected, "girth_square": square });
    if small_ok {
        counts["girth_small_dim"] = json!(small);
    }
    let mut payload = json!({
        "alpha": alpha,
        "d": d,
        "filter": {
            "connected": a.connected,
            "girth": match girth {
                GirthBound::Off => "off",
                GirthBound::Square => "square",
                GirthBound::SmallDim => "small_dim",
            },
        },
        "count": selected.len(),
        "counts": counts,
        "monomials": selected,
    });
    let mut text = format!("{} monomials of multidegree {alpha}\n", selected.len());
    if alpha.total() == 0 {
        let note = "degree 0: the only trace monomial is the unit monomial (the constant 1), which is not listed";
        payload["note"] = json!(note);
        writeln!(text, "{note}").unwrap();
    }
    for t in &selected {
        writeln!(text, "{}", t.render()).unwrap();
    }
    Ok(Output {
        json: envelope("enumerate", &payload)?,
        text,
        exit: 0,
    })
}

enum Inputs {
    Simple(Vec<SimpleEndo>),
    Full(EndoTuple),
}

fn read_inputs(path: &Path) -> CliResult<Inputs> {
    let items = match read_json(path)? {
        Value::Array(items) => items,
        _ => {
            return Err(CliError::Input {
                path: path.to_owned(),
                message: "expected a JSON array of endomorphisms".into(),
            })
        }
    };
    let mut simple = Vec::new();
    let mut full = Vec::new();
    for (i, item) in items.into_iter().enumerate() {
        let field = format!("[{i}]");
        if item.get("factors").is_some() {
            simple.push(decode::<SimpleEndo>(path, &field, item)?);
            full.push(None);
        } else {
            full.push(Some(decode::<Endomorphism>(path, &field, item)?));
        }
    }
    if full.iter().all(Option::is_none) {
        return Ok(Inputs::Simple(simple));
    }
    let mut simple = simple.into_iter();
    let members = full
        .into_iter()
        .map(|e| e.unwrap_or_else(|| kron_expand(&simple.next().expect("one per slot"))))
        .collect();
    let tuple = EndoTuple::new(members).map_err(|e| CliError::Input {
        path: path.to_owned(),
        message: e.to_string(),
    })?;
    Ok(Inputs::Full(tuple))
}

fn eval(a: &EvalArgs) -> CliResult<Output> {
    let t: TraceMonomial = decode(&a.monomial, "", read_json(&a.monomial)?)?;
    let mut seed = None;
    let inputs = match &a.inputs {
        Some(path) => read_inputs(path)?,
        None => {
            let d = a.dims.as_ref().ok_or_else(|| {
                CliError::Usage("give --inputs, or --dims for random inputs".into())
            })?;
            seed = Some(a.seed);
            let m = a.m.unwrap_or(t.m());
            Inputs::Full(InputSampler::new(a.seed).endotuple(d, m))
        }
    };
    if let (Some(d), Some(path)) = (&a.dims, &a.inputs) {
        let found = match &inputs {
            Inputs::Simple(s) => s.first().map(SimpleEndo::dims),
            Inputs::Full(x) => x.dims().cloned(),
        };
        if found.as_ref().is_some_and(|f| f != d) {
            return Err(CliError::Input {
                path: path.clone(),
                message: format!(
                    "inputs have dims {:?}, --dims is {:?}",
                    found.unwrap().dims(),
                    d.dims()
                ),
            });
        }
    }
    let saved_plan = match &a.plan_file {
        Some(p) => Some(decode::<ContractionPlan>(p, "", read_json(p)?)?),
        None => None,
    };
    let (value, method) = match (inputs, &saved_plan) {
        (Inputs::Simple(s), None) if !a.plan => (evaluate_simple(&t, &s)?, "simple"),
        (inputs, _) => {
            let x = match inputs {
                Inputs::Simple(s) => EndoTuple::new(s.iter().map(kron_expand).collect())?,
                Inputs::Full(x) => x,
            };
            match &saved_plan {
                Some(p) => (evaluate_with_plan(&t, &x, p)?, "plan_file"),
                None if a.plan => (evaluate_planned(&t, &x)?, "planned"),
                None => (evaluate(&t, &x)?, "naive"),
            }
        }
    };
    let mut payload = json!({
        "monomial": t,
        "value": value.to_string(),
        "method": method,
    });
    if let Some(s) = seed {
        payload["seed"] = json!(s);
    }
    Ok(Output {
        json: envelope("eval", &payload)?,
        text: format!("{value}\n"),
        exit: 0,
    })
}

fn verify(a: &VerifyArgs) -> CliResult<Output> {
    let d = &a.dims;
    if a.centralizer {
        let m =
            a.m.ok_or_else(|| CliError::Usage("--centralizer needs --m".into()))?;
        let rho = span_dimension_rho(d, m)?;
        let mu = commutant_dimension_mu(d, m)?;
        let matches = rho.value == mu.value;
        let payload = json!({
            "mode": "centralizer",
            "d": d,
            "m": m,
            "span_rho": rho,
            "commutant_mu": mu,
            "match": matches,
            "seed": a.seed,
        });
        let text = format!(
            "span(rho) = {}, commutant(mu) = {}: {}\n",
            rho.value,
            mu.value,
            if matches { "match" } else { "MISMATCH" }
        );
        return Ok(Output {
            json: envelope("verify", &payload)?,
            text,
            exit: if matches { 0 } else { 1 },
        });
    }
    let alphas: Vec<MultiDegree> = match (&a.alpha, a.max_degree) {
        (Some(alpha), None) => vec![pad_alpha(alpha, a.m)?],
        (None, Some(k)) => {
            let m =
                a.m.ok_or_else(|| CliError::Usage("--max-degree needs --m".into()))?;
            (1..=k)
                .flat_map(|j| MultiDegree::all_with_total(m, j))
                .collect()
        }
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "give either --alpha or --max-degree".into(),
            ))
        }
        (None, None) => {
            return Err(CliError::Usage(
                "give --alpha, --max-degree or --centralizer".into(),
            ))
        }
    };
    let reports = alphas
        .iter()
        .map(|alpha| verify_generation(alpha, d, a.seed))
        .collect::<localinv_core::Result<Vec<_>>>()?;
    let all_match = reports.iter().all(|r| r.matches);
    let mut text = String::new();
    for r in &reports {
        writeln!(
            text,
            "alpha {}: invariants {}, trace span {}: {}",
            r.alpha,
            r.oracle_dim,
            r.span_dim,
            if r.matches { "match" } else { "MISMATCH" }
        )
        .unwrap();
    }
    let json = if a.alpha.is_some() {
        let mut v = envelope("verify", &reports[0])?;
        v["mode"] = json!("generation");
        v
    } else {
        envelope(
            "verify",
            &json!({
                "mode": "suite",
                "d": d,
                "m": a.m,
                "max_degree": a.max_degree,
                "seed": a.seed,
                "match": all_match,
                "reports": reports,
            }),
        )?
    };
    Ok(Output {
        json,
        text,
        exit: if all_match { 0 } else { 1 },
    })
}

fn hilbert(a: &HilbertArgs) -> CliResult<Output> {
    let d = &a.dims;
    if a.m == 0 {
        return Err(CliError::Usage("--m must be at least 1".into()));
    }
    let (n, series, rec) = match a.n {
        Some(n) => {
            let s = hs_local(a.m, d, n)?;
            let r = reconstruct_rational(&s, n);
            (n, s, r)
        }
        None => reconstruct_local(a.m, d, None, MAX_ORDER)?,
    };
    let bound = d.dim_v() * d.dim_v();
    let poles = rec.function().map(|f| check_pole_orders(f, bound));
    let bounds = degree_bounds(a.m, d);
    let mut payload = json!({
        "d": d,
        "m": a.m,
        "N": n,
        "series": series,
        "reconstruction": rec,
        "bounds": bounds,
    });
    let mut text = format!("N = {n}\n");
    match &rec {
        Reconstruction::Found { function, .. } => {
            payload["rational"] = json!(function.to_string());
            writeln!(text, "series = {function}").unwrap();
        }
        Reconstruction::Inconclusive { reason, .. } => {
            writeln!(text, "reconstruction inconclusive: {reason}").unwrap();
        }
    }
    if let Some(p) = &poles {
        payload["pole_check"] = json!(p);
        writeln!(
            text,
            "poles at roots of unity of order <= {bound}: {}",
            if p.ok { "ok" } else { "no" }
        )
        .unwrap();
    }
    writeln!(text, "{}", bounds_text(&bounds)).unwrap();
    Ok(Output {
        json: envelope("hilbert", &payload)?,
        text,
        exit: 0,
    })
}

fn bounds_text(b: &localinv_core::BoundReport) -> String {
    let mut s = format!("segre bound {}", b.segre);
    if let Some(f) = b.final_m1 {
        write!(s, ", final bound {f}").unwrap();
    }
    if let Some(f) = b.small_dim {
        write!(s, ", small-dimension bound {f}").unwrap();
    }
    write!(s, ", girth {:?}", b.girth).unwrap();
    if let Some(g) = &b.girth_small_dim {
        write!(s, ", small-dimension girth {g:?}").unwrap();
    }
    s
}

fn bounds(a: &BoundsArgs) -> CliResult<Output> {
    let report = degree_bounds(a.m, &a.dims);
    let mut text = format!("{}\n", bounds_text(&report));
    let mut payload = serde_json::to_value(&report)?;
    if let Some(k) = a.empirical {
        if a.m != 1 {
            return Err(CliError::Usage("--empirical needs --m 1".into()));
        }
        let e = verify_bound_empirically(&a.dims, k, a.seed)?;
        writeln!(
            text,
            "largest degree with new generators (<= {k}): {}",
            e.largest_new_generator_degree
                .map_or("none".to_string(), |x| x.to_string())
        )
        .unwrap();
        payload["empirical"] = json!(e);
        payload["seed"] = json!(a.seed);
    }
    Ok(Output {
        json: envelope("bounds", &payload)?,
        text,
        exit: 0,
    })
}

fn plan(a: &PlanArgs) -> CliResult<Output> {
    let t: TraceMonomial = decode(&a.monomial, "", read_json(&a.monomial)?)?;
    let p = plan_contraction(&t, &a.dims, None)?;
    let optimal = optimal_contraction_cost(&t, &a.dims).ok();
    let mut json = envelope("plan", &p)?;
    json["optimal_cost"] = json!(optimal);
    let mut text = format!(
        "{} steps, cost {}, peak {}, naive cost {}",
        p.steps.len(),
        p.cost,
        p.peak_size,
        p.naive_cost
    );
    if let Some(o) = optimal {
        write!(text, ", optimal cost {o}").unwrap();
    }
    text.push('\n');
    Ok(Output {
        json,
        text,
        exit: 0,
    })
}
