//! `tropcycle`: command-line front end for the tropcycle library.
//!
//! Exit codes: 0 success, 1 internal error, 2 input error, 3 failed
//! precondition.

mod plot;

use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tropcycle::cycle::TropicalCycle;
use tropcycle::fan::{Fan, FanError};
use tropcycle::fixtures::{fixture, FixtureError};
use tropcycle::hypersurface::{tropical_hypersurface, HypersurfaceError};
use tropcycle::json::{
    self, parse_rational, to_canonical_string, CycleDoc, FanDoc, JsonError, MinkowskiDoc, PolyhedronDoc,
};
use tropcycle::linalg::Rat;
use tropcycle::minkowski::{mw_class_of_cycle, mw_degree, mw_product, MinkowskiError, MinkowskiWeight};
use tropcycle::stable::{multi_stable_intersect, stable_intersect_on_component};

#[derive(Debug, Parser)]
#[command(name = "tropcycle", version, about = "Exact tropical intersection theory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Named input document, `name=path`. Repeatable; order is kept.
    #[arg(long = "in", value_name = "NAME=PATH", value_parser = parse_input, global = true)]
    inputs: Vec<(String, PathBuf)>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check balancing, face closure and unimodularity of a document.
    Validate,
    /// Stable intersection of two or more cycles.
    StableIntersect {
        /// Restrict to the component of the intersection through this point, e.g. `1,1/2`.
        #[arg(long, allow_hyphen_values = true)]
        component: Option<String>,
        /// Print only the degree.
        #[arg(long)]
        degree: bool,
    },
    /// Compactified stable intersection of `gamma` with `S` in the orbit of `tau`.
    Compactified {
        /// Ray indices of the cone, e.g. `0,2`; empty for the zero cone.
        #[arg(long, default_value = "")]
        tau: String,
        /// Print only the degree.
        #[arg(long)]
        degree: bool,
    },
    /// Tropical hypersurface of a polynomial.
    Hypersurface,
    /// Minkowski weights: products, degrees and classes of cycles.
    Mw {
        /// `product` multiplies all inputs, `degree` reads a top-codimension
        /// weight, `from-cycle` computes the class of a cycle on the `fan` input.
        #[arg(long, value_enum)]
        op: MwOp,
    },
    /// SVG drawing of planar cycles.
    Plot {
        /// `xmin,ymin,xmax,ymax`.
        #[arg(long, allow_hyphen_values = true)]
        bbox: Option<String>,
    },
    /// Write a bundled example (inputs and expected values).
    Examples {
        name: String,
        /// Parameter of `selfintersection-n`.
        #[arg(long, default_value_t = 2)]
        n: i64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MwOp {
    Product,
    Degree,
    FromCycle,
}

fn parse_input(s: &str) -> Result<(String, PathBuf), String> {
    let (name, path) = s.split_once('=').ok_or_else(|| format!("expected NAME=PATH, found {s:?}"))?;
    if name.is_empty() {
        return Err("input name is empty".into());
    }
    Ok((name.to_string(), PathBuf::from(path)))
}

/// A failed command: exit code plus message and optional JSON details.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
    details: Option<Value>,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into(), details: None }
    }

    fn internal(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into(), details: None }
    }
}

fn fan_code(e: &FanError) -> u8 {
    match e {
        FanError::NotCompatible { .. } | FanError::NotCompactifying { .. } | FanError::NotComplete => 3,
        _ => 2,
    }
}

impl From<FanError> for Failure {
    fn from(e: FanError) -> Self {
        Failure { code: fan_code(&e), message: e.to_string(), details: None }
    }
}

impl From<MinkowskiError> for Failure {
    fn from(e: MinkowskiError) -> Self {
        let code = match &e {
            MinkowskiError::NotComplete | MinkowskiError::NotUnimodular => 3,
            MinkowskiError::Fan(f) => fan_code(f),
            _ => 2,
        };
        Failure { code, message: e.to_string(), details: None }
    }
}

impl From<JsonError> for Failure {
    fn from(e: JsonError) -> Self {
        match e {
            JsonError::Fan(f) => f.into(),
            JsonError::Minkowski(m) => m.into(),
            other => Failure::input(other.to_string()),
        }
    }
}

macro_rules! input_errors {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::input(e.to_string())
            }
        }
    )*};
}

input_errors!(tropcycle::cycle::CycleError, HypersurfaceError, FixtureError);

struct Inputs(Vec<(String, PathBuf, String)>);

impl Inputs {
    fn load(list: &[(String, PathBuf)]) -> Result<Inputs, Failure> {
        list.iter()
            .map(|(name, path)| {
                let text = fs::read_to_string(path)
                    .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
                Ok((name.clone(), path.clone(), text))
            })
            .collect::<Result<_, _>>()
            .map(Inputs)
    }

    fn get(&self, name: &str) -> Result<&str, Failure> {
        self.0
            .iter()
            .find(|(n, _, _)| n == name)
            .map(|(_, _, t)| t.as_str())
            .ok_or_else(|| Failure::input(format!("missing input --in {name}=PATH")))
    }

    fn others<'a>(&'a self, skip: &'a str) -> impl Iterator<Item = &'a (String, PathBuf, String)> + 'a {
        self.0.iter().filter(move |(n, _, _)| n != skip)
    }
}

fn context(name: &str, e: impl Into<Failure>) -> Failure {
    let mut f = e.into();
    f.message = format!("{name}: {}", f.message);
    f
}

fn parse_point(s: &str) -> Result<Vec<Rat>, Failure> {
    s.split(',').map(|x| parse_rational(x).map_err(Failure::input)).collect()
}

fn parse_indices(s: &str) -> Result<Vec<usize>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().map_err(|_| Failure::input(format!("not a ray index: {x:?}"))))
        .collect()
}

fn cycle_value(c: &TropicalCycle) -> Value {
    serde_json::to_value(CycleDoc::from(c)).expect("documents serialize")
}

fn int_matrix(m: &[Vec<tropcycle::linalg::Int>]) -> Value {
    Value::Array(m.iter().map(|r| Value::Array(r.iter().map(|x| Value::String(x.to_string())).collect())).collect())
}

/// Result of a command: JSON or raw text (integers, SVG).
enum Output {
    Json(Value),
    Text(String),
    Files(BTreeMap<String, String>),
}

fn validate(inputs: &Inputs) -> Result<Output, Failure> {
    let (name, _, text) = inputs.0.first().ok_or_else(|| Failure::input("validate needs one --in document"))?;
    let raw: Value = json::parse_doc(text).map_err(|e| context(name, e))?;
    let has = |k: &str| raw.get(k).is_some();
    let mut checks: Vec<Value> = Vec::new();
    let mut check = |name: &str, details: Vec<String>| {
        checks.push(json!({ "check": name, "pass": details.is_empty(), "details": details }));
    };
    let mut info = serde_json::Map::new();
    let kind = if has("cells") {
        let c = json::parse_cycle(text).map_err(|e| context(name, e))?;
        let v = c.balancing_check();
        check(
            "balancing",
            v.iter()
                .map(|v| {
                    let face = to_canonical_string(&PolyhedronDoc::from(&v.face)).replace(['\n', ' '], "");
                    format!("residual {:?} around face {face}", v.residual.iter().map(|x| x.to_string()).collect::<Vec<_>>())
                })
                .collect(),
        );
        "cycle"
    } else if has("fan") && has("values") {
        let doc: MinkowskiDoc = json::parse_doc(text).map_err(|e| context(name, e))?;
        let fan = Fan::try_from(&doc.fan).map_err(|e| context(name, e))?;
        let mut values = BTreeMap::new();
        for v in &doc.values {
            let cone: Vec<usize> = v.cone.iter().map(|c| c.0 as usize).collect();
            *values.entry(cone).or_insert(0) += v.w.0;
        }
        let w = MinkowskiWeight::unchecked(fan, doc.codim.0 as usize, values).map_err(|e| context(name, e))?;
        check("balancing", w.balancing_violations().iter().map(|c| format!("around cone {c:?}")).collect());
        "minkowski-weight"
    } else if has("rays") {
        let doc: FanDoc = json::parse_doc(text).map_err(|e| context(name, e))?;
        let fan = doc.to_unchecked().map_err(|e| context(name, e))?;
        let (closure, other): (Vec<FanError>, Vec<FanError>) =
            fan.issues().into_iter().partition(|e| matches!(e, FanError::MissingFace { .. }));
        check("face-closure", closure.iter().map(ToString::to_string).collect());
        check("cones", other.iter().map(ToString::to_string).collect());
        if other.is_empty() && closure.is_empty() {
            info.insert("unimodular".into(), fan.is_unimodular().into());
            info.insert("complete".into(), fan.is_complete().into());
        }
        "fan"
    } else if has("components") {
        let s = json::parse_stratified(text).map_err(|e| context(name, e))?;
        let details = s
            .components
            .iter()
            .filter(|(_, c)| !c.is_balanced())
            .map(|(tau, _)| format!("component {tau:?} is not balanced"))
            .collect();
        check("balancing", details);
        "stratified-cycle"
    } else if has("terms") {
        json::parse_polynomial(text).map_err(|e| context(name, e))?;
        "polynomial"
    } else if has("ineqs") || has("eqs") {
        json::parse_polyhedron(text).map_err(|e| context(name, e))?;
        "polyhedron"
    } else {
        return Err(Failure::input(format!("{name}: unrecognised document")));
    };
    let ok = checks.iter().all(|c| c["pass"] == Value::Bool(true));
    let mut report = json!({ "kind": kind, "ok": ok, "checks": checks });
    report.as_object_mut().expect("object").extend(info);
    if ok {
        Ok(Output::Json(report))
    } else {
        Err(Failure { code: 3, message: format!("{name}: validation failed"), details: Some(report) })
    }
}

fn load_cycles(inputs: &Inputs) -> Result<Vec<TropicalCycle>, Failure> {
    inputs.0.iter().map(|(n, _, t)| json::parse_cycle(t).map_err(|e| context(n, e))).collect()
}

fn stable(inputs: &Inputs, component: Option<&str>, degree: bool) -> Result<Output, Failure> {
    let cycles = load_cycles(inputs)?;
    if cycles.len() < 2 {
        return Err(Failure::input("stable-intersect needs at least two cycles"));
    }
    let result = match component {
        Some(p) => stable_intersect_on_component(&cycles, &parse_point(p)?)?,
        None => multi_stable_intersect(&cycles)?,
    };
    Ok(if degree { Output::Text(format!("{}\n", result.degree())) } else { Output::Json(cycle_value(&result)) })
}

fn compactified(inputs: &Inputs, tau: &str, degree: bool) -> Result<Output, Failure> {
    let fan = json::parse_fan(inputs.get("fan")?).map_err(|e| context("fan", e))?;
    let gamma = json::parse_cycle(inputs.get("gamma")?).map_err(|e| context("gamma", e))?;
    let s = json::parse_cycle(inputs.get("S")?).map_err(|e| context("S", e))?;
    let rays = parse_indices(tau)?;
    let t = fan.require_cone(&rays)?;
    let frame = fan.orbit_frame(t);
    let result = fan.compactified_stable_intersect(&gamma, &s, t).map_err(|e| match e {
        FanError::NotCompatible { ref cone, polyhedron } => Failure {
            code: 3,
            message: e.to_string(),
            details: Some(json!({
                "cone": cone,
                "cone_rays": cone.iter().map(|&i| fan.rays()[i].iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "polyhedron": s.cells().get(polyhedron).map(|c| serde_json::to_value(PolyhedronDoc::from(&c.poly)).expect("serializes")),
            })),
        },
        other => other.into(),
    })?;
    let mut out = json!({ "tau": fan.cone_rays(t), "frame": int_matrix(frame.matrix()) });
    let obj = out.as_object_mut().expect("object");
    if degree {
        obj.insert("degree".into(), result.degree().into());
    } else {
        obj.insert("cycle".into(), cycle_value(&result));
    }
    Ok(Output::Json(out))
}

fn hypersurface(inputs: &Inputs) -> Result<Output, Failure> {
    let (name, _, text) = inputs.0.first().ok_or_else(|| Failure::input("hypersurface needs one polynomial"))?;
    let f = json::parse_polynomial(text).map_err(|e| context(name, e))?;
    Ok(Output::Json(cycle_value(&tropical_hypersurface(&f)?)))
}

/// Minkowski weights from the inputs; cycles become classes on the `fan` input.
fn load_weights(inputs: &Inputs) -> Result<Vec<MinkowskiWeight>, Failure> {
    let fan = match inputs.get("fan") {
        Ok(t) => Some(json::parse_fan(t).map_err(|e| context("fan", e))?),
        Err(_) => None,
    };
    inputs
        .others("fan")
        .map(|(name, _, text)| {
            let raw: Value = json::parse_doc(text).map_err(|e| context(name, e))?;
            if raw.get("cells").is_some() {
                let fan = fan.as_ref().ok_or_else(|| Failure::input(format!("{name}: cycles need --in fan=PATH")))?;
                let c = json::parse_cycle(text).map_err(|e| context(name, e))?;
                mw_class_of_cycle(&c, fan).map_err(|e| context(name, e))
            } else {
                json::parse_minkowski(text).map_err(|e| context(name, e))
            }
        })
        .collect()
}

fn mw(inputs: &Inputs, op: MwOp) -> Result<Output, Failure> {
    let weights = load_weights(inputs)?;
    let product = |ws: &[MinkowskiWeight]| -> Result<MinkowskiWeight, Failure> {
        let (first, rest) = ws.split_first().ok_or_else(|| Failure::input("no weights given"))?;
        rest.iter().try_fold(first.clone(), |acc, w| mw_product(&acc, w).map_err(Failure::from))
    };
    let doc = |w: &MinkowskiWeight| serde_json::to_value(MinkowskiDoc::from(w)).expect("serializes");
    match op {
        MwOp::Product => Ok(Output::Json(doc(&product(&weights)?))),
        MwOp::Degree => Ok(Output::Text(format!("{}\n", mw_degree(&product(&weights)?)?))),
        MwOp::FromCycle => match weights.as_slice() {
            [w] => Ok(Output::Json(doc(w))),
            _ => Err(Failure::input("from-cycle needs --in fan=PATH and exactly one cycle")),
        },
    }
}

fn plot(inputs: &Inputs, bbox: Option<&str>) -> Result<Output, Failure> {
    let cycles = load_cycles(inputs)?;
    if cycles.is_empty() {
        return Err(Failure::input("plot needs at least one cycle"));
    }
    if let Some((n, c)) = inputs.0.iter().zip(&cycles).find(|(_, c)| c.ambient_dim() != 2) {
        return Err(Failure::input(format!("{}: NotPlanar: ambient dimension {}", n.0, c.ambient_dim())));
    }
    let bbox = match bbox {
        Some(s) => match parse_point(s)?.as_slice() {
            [a, b, c, d] if a < c && b < d => {
                plot::BBox { xmin: a.clone(), ymin: b.clone(), xmax: c.clone(), ymax: d.clone() }
            }
            _ => return Err(Failure::input("--bbox expects xmin,ymin,xmax,ymax with xmin < xmax, ymin < ymax")),
        },
        None => plot::BBox::around(&cycles),
    };
    Ok(Output::Text(plot::render(&cycles, &bbox)))
}

fn examples(name: &str, n: i64, out: Option<&Path>) -> Result<Output, Failure> {
    let f = fixture(name, n)?;
    if out.is_some() {
        return Ok(Output::Files(f.files()));
    }
    Ok(Output::Json(json!({
        "fixture": f.name,
        "documents": f.documents,
        "expected": f.expected,
        "notes": f.notes,
    })))
}

/// Write via a temporary file in the target directory, then rename.
fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| Failure::internal(format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn emit(output: Output, out: Option<&Path>) -> Result<(), Failure> {
    let text = match output {
        Output::Json(v) => to_canonical_string(&v),
        Output::Text(t) => t,
        Output::Files(files) => {
            let dir = out.expect("files are only produced with --out");
            fs::create_dir_all(dir)
                .map_err(|e| Failure::internal(format!("cannot create {}: {e}", dir.display())))?;
            for (name, contents) in files {
                write_atomic(&dir.join(name), &contents)?;
            }
            return Ok(());
        }
    };
    match out {
        Some(p) => write_atomic(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let inputs = Inputs::load(&cli.inputs)?;
    let out = cli.out.as_deref();
    let output = match &cli.command {
        Command::Validate => validate(&inputs)?,
        Command::StableIntersect { component, degree } => stable(&inputs, component.as_deref(), *degree)?,
        Command::Compactified { tau, degree } => compactified(&inputs, tau, *degree)?,
        Command::Hypersurface => hypersurface(&inputs)?,
        Command::Mw { op } => mw(&inputs, *op)?,
        Command::Plot { bbox } => plot(&inputs, bbox.as_deref())?,
        Command::Examples { name, n } => examples(name, *n, out)?,
    };
    emit(output, out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = std::panic::catch_unwind(|| run(&cli))
        .unwrap_or_else(|_| Err(Failure::internal("internal error (panic)")));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            if let Some(d) = f.details {
                // Reports go to stdout so they can be piped like normal output.
                print!("{}", to_canonical_string(&d));
            }
            ExitCode::from(f.code)
        }
    }
}
