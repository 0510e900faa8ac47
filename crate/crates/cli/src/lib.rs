//! Command-line front end for `monge-core`.
//!
//! [`run`] parses an argument vector and returns a [`CommandResult`]; the
//! binary only renders it. Output is a JSON document
//! `{"command": [...], "exit_code": n, "payload": {...}}` with sorted keys
//! and rationals as `"a/b"` strings, so repeated runs are byte-identical.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use monge_core::counting::{
    asymptotic_leading, asymptotic_leading_by_derivative, brute_force_count, coefficients, series_spec, CountFamily,
};
use monge_core::generic::{
    edge_count_formula, edges_explicit, f_vector_with_limit, face_lattice_with_limit, generic_facets, generic_vertices,
    DEFAULT_MAX_CELLS,
};
use monge_core::optimize::{
    northwest_corner, objective, pyramidal_tsp, supnick_tour, tp_bruteforce, tsp_bruteforce, TransportInstance,
};
use monge_core::scalar::{binomial, format_scalar};
use monge_core::stanley::{canonical_form, numerator_polynomial, reconstruct, CanonicalForm};
use monge_core::symmetric::{decompose_symmetric, is_true_metric, metric_face_status, symmetric_vertices};
use monge_core::volume::{closed_form_volume, normalized_volume_with, Family};
use monge_core::{generator, Error, Matrix, VertexLabel};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// Environment variable overriding the `p·q` bound on lattice enumeration.
pub const MAX_CELLS_ENV: &str = "MONGE_MAX_CELLS";

/// Largest `K` accepted by `series`.
pub const MAX_SERIES_TERMS: u64 = 100_000;

#[derive(Parser, Debug)]
#[command(name = "monge", version, about = "Exact computations on Monge matrix polytopes")]
struct Cli {
    /// Output format; `csv` is available for tabular results only.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GeometryFamily {
    Generic,
    Hollow,
    Symmetric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SeriesFamily {
    Hm,
    Sm,
    Mm,
}

/// `PxQ` or a bare `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    Rect(usize, usize),
    Square(usize),
}

impl FromStr for Shape {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("invalid shape {s:?}: expected PxQ or N"));
        match s.split_once(['x', 'X']) {
            Some((p, q)) => Ok(Shape::Rect(num(p)?, num(q)?)),
            None => Ok(Shape::Square(num(s)?)),
        }
    }
}

#[derive(Args, Debug)]
struct GeometryArgs {
    /// `PxQ` for the generic family, `N` for hollow and symmetric.
    #[arg(long)]
    shape: Shape,
    #[arg(long, value_enum, default_value_t = GeometryFamily::Generic)]
    family: GeometryFamily,
}

#[derive(Args, Debug)]
struct SeriesArgs {
    #[arg(long, value_enum)]
    family: SeriesFamily,
    /// `N` for hm and sm, `PxQ` for mm.
    #[arg(long)]
    shape: Shape,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Monge test of a matrix document, with every violated adjacent minor.
    Check { file: PathBuf },
    /// Vertices as generator labels and matrices.
    Vertices(GeometryArgs),
    /// Facets with their vertex sets.
    Facets(GeometryArgs),
    /// Edges of the vertex graph.
    Edges(GeometryArgs),
    /// f-vector `(f_-1, f_0, ..., f_d)`.
    Fvector(GeometryArgs),
    /// Full face lattice with cover relations (generic family).
    Lattice(GeometryArgs),
    /// Normalized volume against the ambient probability simplex.
    Volume {
        #[command(flatten)]
        geometry: GeometryArgs,
        /// Evaluate the closed form instead of triangulating.
        #[arg(long)]
        closed_form: bool,
    },
    /// Number of integer members with entry sum `k`.
    Count {
        #[command(flatten)]
        series: SeriesArgs,
        #[arg(short = 'k')]
        k: u64,
        /// Enumerate matrices instead of expanding the generating function.
        #[arg(long)]
        brute_force: bool,
    },
    /// Generating function data and coefficients `f_0..=f_K`.
    Series {
        #[command(flatten)]
        series: SeriesArgs,
        #[arg(short = 'K')]
        max_k: u64,
    },
    /// Leading coefficient of the polynomial growth of `f_k`.
    Asymptotic {
        #[command(flatten)]
        series: SeriesArgs,
    },
    /// Coefficients of a symmetric Monge matrix over the hatted generators.
    Decompose {
        file: PathBuf,
        /// Decompose over the hollow generators only.
        #[arg(long)]
        hollow: bool,
    },
    /// Position of a hollow symmetric matrix relative to the metric face.
    Metric { file: PathBuf },
    /// Canonical form of a `2 × p` integer Monge matrix.
    Canonical { file: PathBuf },
    /// Matrix of a canonical form document `{"p", "S", "a", "b"}`.
    Reconstruct { file: PathBuf },
    /// Numerator polynomial of the `2 × p` series.
    Numerator {
        #[arg(short = 'p')]
        p: usize,
    },
    /// Transportation problem from `{"cost", "supplies", "demands"}`.
    Tp {
        file: PathBuf,
        /// Exhaustive search instead of the northwest corner rule.
        #[arg(long)]
        brute_force: bool,
    },
    /// Travelling salesman tour from `{"cost"}`.
    Tsp {
        file: PathBuf,
        #[arg(long, conflicts_with = "supnick")]
        brute_force: bool,
        /// Fixed tour for symmetric Monge costs.
        #[arg(long)]
        supnick: bool,
    },
}

/// Outcome of one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct CommandResult {
    /// Arguments after the program name.
    pub command: Vec<String>,
    pub payload: Value,
    pub exit_code: i32,
    pub format: Format,
    /// Header and rows for `--format csv`, when the result is tabular.
    pub table: Option<Table>,
    /// Help or version text; rendered verbatim instead of JSON.
    pub text: Option<String>,
    /// Human-readable error for stderr.
    pub diagnostic: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str], rows: Vec<Vec<String>>) -> Self {
        Table { header: header.iter().map(ToString::to_string).collect(), rows }
    }

    fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

impl CommandResult {
    /// The JSON document printed on stdout.
    pub fn document(&self) -> Value {
        json!({ "command": self.command, "exit_code": self.exit_code, "payload": self.payload })
    }

    /// Exactly what the binary writes to stdout.
    pub fn render(&self) -> String {
        if let Some(text) = &self.text {
            return text.clone();
        }
        match (&self.table, self.format) {
            (Some(table), Format::Csv) if self.exit_code == EXIT_OK => table.to_csv(),
            _ => {
                let mut s = serde_json::to_string_pretty(&self.document()).expect("JSON values always serialize");
                s.push('\n');
                s
            }
        }
    }
}

/// Failure of a subcommand, before it becomes an exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Core(Error::ResourceLimit(_)) => EXIT_RESOURCE,
            Failure::Core(_) => EXIT_DOMAIN,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(message) => message.clone(),
            Failure::Core(e) => e.to_string(),
        }
    }

    fn payload(&self) -> Value {
        let error = match self {
            Failure::Usage(message) => json!({ "kind": "usage", "message": message }),
            Failure::Core(e) => {
                let mut error = json!({ "kind": e.kind(), "message": e.to_string() });
                match e {
                    Error::NotMonge { row, col } | Error::NotInPolytope { row, col } => {
                        error["row"] = json!(row);
                        error["col"] = json!(col);
                    }
                    Error::Unbalanced { supply, demand } => {
                        error["supply"] = json!(supply);
                        error["demand"] = json!(demand);
                    }
                    _ => {}
                }
                error
            }
        };
        json!({ "error": error })
    }
}

type Outcome = Result<(Value, Option<Table>), Failure>;

/// Parse and execute one command line; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let command: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let base = CommandResult { command, payload: Value::Null, exit_code: EXIT_OK, format: Format::Json, table: None, text: None, diagnostic: None };

    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CommandResult { text: Some(e.to_string()), ..base },
                _ => {
                    let rendered = e.to_string();
                    let first = rendered.lines().next().unwrap_or_default();
                    let failure = Failure::Usage(first.trim_start_matches("error: ").to_string());
                    CommandResult {
                        payload: failure.payload(),
                        exit_code: failure.exit_code(),
                        diagnostic: Some(e.render().to_string()),
                        ..base
                    }
                }
            };
        }
    };

    let format = cli.format;
    let outcome = execute(cli.command).and_then(|(payload, table)| {
        if format == Format::Csv && table.is_none() {
            Err(Failure::Usage("--format csv is only available for tabular results".into()))
        } else {
            Ok((payload, table))
        }
    });
    match outcome {
        Ok((payload, table)) => CommandResult { payload, table, format, ..base },
        Err(failure) => CommandResult {
            payload: failure.payload(),
            exit_code: failure.exit_code(),
            format,
            diagnostic: Some(format!("error: {}\n", failure.message())),
            ..base
        },
    }
}

fn execute(command: Command) -> Outcome {
    match command {
        Command::Check { file } => check(&file),
        Command::Vertices(g) => vertices(&g),
        Command::Facets(g) => facets(&g),
        Command::Edges(g) => edges(&g),
        Command::Fvector(g) => fvector(&g),
        Command::Lattice(g) => lattice(&g),
        Command::Volume { geometry, closed_form } => volume(&geometry, closed_form),
        Command::Count { series, k, brute_force } => count(&series, k, brute_force),
        Command::Series { series, max_k } => series_cmd(&series, max_k),
        Command::Asymptotic { series } => asymptotic(&series),
        Command::Decompose { file, hollow } => {
            let m = read_matrix(&file)?;
            Ok((decompose_symmetric(&m, hollow)?.to_json(), None))
        }
        Command::Metric { file } => metric(&file),
        Command::Canonical { file } => {
            let form = canonical_form(&read_matrix(&file)?)?;
            let mut payload = form.to_json();
            payload["grading"] = json!(form.grading());
            Ok((payload, None))
        }
        Command::Reconstruct { file } => {
            let form = CanonicalForm::from_json(&read_json(&file)?)?;
            Ok((json!({ "grading": form.grading(), "matrix": reconstruct(&form)?.to_json() }), None))
        }
        Command::Numerator { p } => numerator(p),
        Command::Tp { file, brute_force } => tp(&file, brute_force),
        Command::Tsp { file, brute_force, supnick } => tsp(&file, brute_force, supnick),
    }
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Core(Error::Parse(format!("{}: {e}", path.display()))))
}

/// A matrix document, bare or wrapped as `{"cost": ...}`.
fn read_matrix(path: &Path) -> Result<Matrix, Failure> {
    let doc = read_json(path)?;
    Ok(Matrix::from_json(doc.get("cost").unwrap_or(&doc))?)
}

fn max_cells() -> Result<usize, Failure> {
    match std::env::var(MAX_CELLS_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| Failure::Usage(format!("{MAX_CELLS_ENV}={v:?} is not a nonnegative integer"))),
        Err(_) => Ok(DEFAULT_MAX_CELLS),
    }
}

fn geometry_family(g: &GeometryArgs) -> Result<Family, Failure> {
    match (g.family, g.shape) {
        (GeometryFamily::Generic, Shape::Rect(p, q)) => Ok(Family::Generic { p, q }),
        (GeometryFamily::Hollow, Shape::Square(n)) => Ok(Family::Hollow { n }),
        (GeometryFamily::Symmetric, Shape::Square(n)) => Ok(Family::Symmetric { n }),
        (GeometryFamily::Generic, _) => Err(Failure::Usage("the generic family takes --shape PxQ".into())),
        _ => Err(Failure::Usage("hollow and symmetric families take --shape N".into())),
    }
}

fn count_family(s: &SeriesArgs) -> Result<CountFamily, Failure> {
    match (s.family, s.shape) {
        (SeriesFamily::Hm, Shape::Square(n)) => Ok(CountFamily::Hm { n }),
        (SeriesFamily::Sm, Shape::Square(n)) => Ok(CountFamily::Sm { n }),
        (SeriesFamily::Mm, Shape::Rect(p, q)) => Ok(CountFamily::Mm { p, q }),
        (SeriesFamily::Mm, _) => Err(Failure::Usage("the mm family takes --shape PxQ".into())),
        _ => Err(Failure::Usage("hm and sm families take --shape N".into())),
    }
}

/// Vertex labels of a symmetric family, which are the vertices of a simplex.
fn simplex_labels(family: Family) -> Result<Vec<VertexLabel>, Failure> {
    match family {
        Family::Hollow { n } => Ok(symmetric_vertices(n, true)?),
        Family::Symmetric { n } => Ok(symmetric_vertices(n, false)?),
        Family::Generic { .. } => unreachable!("generic family is handled separately"),
    }
}

fn integer(n: &BigInt) -> Value {
    n.to_u64().map_or_else(|| json!(n.to_string()), |v| json!(v))
}

fn check(path: &Path) -> Outcome {
    let m = read_matrix(path)?;
    let violations: Vec<Value> = m.monge_violations().iter().map(|&(i, j)| json!([i, j])).collect();
    Ok((json!({ "rows": m.rows(), "cols": m.cols(), "is_monge": violations.is_empty(), "violations": violations }), None))
}

fn vertices(g: &GeometryArgs) -> Outcome {
    let family = geometry_family(g)?;
    let labels = match family {
        Family::Generic { p, q } => generic_vertices(p, q)?,
        _ => simplex_labels(family)?,
    };
    let list = labels
        .iter()
        .enumerate()
        .map(|(k, label)| Ok(json!({ "index": k, "label": label.to_string(), "matrix": generator(label)?.to_json() })))
        .collect::<Result<Vec<Value>, Error>>()?;
    Ok((json!({ "family": family.to_string(), "count": list.len(), "vertices": list }), None))
}

fn facets(g: &GeometryArgs) -> Outcome {
    let family = geometry_family(g)?;
    let list: Vec<Value> = match family {
        Family::Generic { p, q } => generic_facets(p, q)?
            .iter()
            .map(|f| json!({ "inequality": f.kind, "vertices": f.vertices.iter().collect::<Vec<_>>() }))
            .collect(),
        _ => {
            let m = simplex_labels(family)?.len();
            (0..m)
                .map(|k| {
                    json!({
                        "inequality": { "kind": "COEFFICIENT_ZERO", "vertex": k },
                        "vertices": (0..m).filter(|&v| v != k).collect::<Vec<_>>(),
                    })
                })
                .collect()
        }
    };
    Ok((json!({ "family": family.to_string(), "count": list.len(), "facets": list }), None))
}

fn edges(g: &GeometryArgs) -> Outcome {
    let family = geometry_family(g)?;
    let (list, formula) = match family {
        Family::Generic { p, q } => (edges_explicit(p, q)?, edge_count_formula(p, q)?),
        _ => {
            let m = simplex_labels(family)?.len();
            let pairs: Vec<(usize, usize)> = (0..m).flat_map(|u| (u + 1..m).map(move |v| (u, v))).collect();
            let formula = pairs.len() as u64;
            (pairs, formula)
        }
    };
    let table = Table::new(&["u", "v"], list.iter().map(|(u, v)| vec![u.to_string(), v.to_string()]).collect());
    let payload = json!({ "family": family.to_string(), "count": list.len(), "formula": formula, "edges": list });
    Ok((payload, Some(table)))
}

fn fvector(g: &GeometryArgs) -> Outcome {
    let family = geometry_family(g)?;
    let f: Vec<Value> = match family {
        Family::Generic { p, q } => f_vector_with_limit(p, q, max_cells()?)?.into_iter().map(|x| json!(x)).collect(),
        _ => {
            let m = simplex_labels(family)?.len() as u64;
            (0..=m).map(|k| integer(&binomial(m, k))).collect()
        }
    };
    let rows = f.iter().enumerate().map(|(k, x)| vec![(k as i64 - 1).to_string(), x.to_string()]).collect();
    Ok((json!({ "family": family.to_string(), "f_vector": f }), Some(Table::new(&["dim", "faces"], rows))))
}

fn lattice(g: &GeometryArgs) -> Outcome {
    let Family::Generic { p, q } = geometry_family(g)? else {
        return Err(Error::Unsupported("the face lattice is enumerated for the generic family only".into()).into());
    };
    let lat = face_lattice_with_limit(p, q, max_cells()?)?;
    let faces: Vec<Value> = lat
        .faces
        .iter()
        .zip(&lat.covers)
        .enumerate()
        .map(|(k, (face, covers))| {
            json!({ "index": k, "dim": face.dim, "vertices": face.vertices.iter().collect::<Vec<_>>(), "covers": covers })
        })
        .collect();
    let payload = json!({ "family": Family::Generic { p, q }.to_string(), "f_vector": lat.f_vector(), "faces": faces });
    Ok((payload, None))
}

fn volume(g: &GeometryArgs, closed_form: bool) -> Outcome {
    let family = geometry_family(g)?;
    if closed_form {
        let v = closed_form_volume(family)?;
        return Ok((json!({ "family": family.to_string(), "method": "closed-form", "normalized": format_scalar(&v) }), None));
    }
    let mut payload = normalized_volume_with(family, max_cells()?)?.to_json();
    payload["method"] = json!("triangulation");
    Ok((payload, None))
}

fn count(s: &SeriesArgs, k: u64, brute_force: bool) -> Outcome {
    let family = count_family(s)?;
    let (value, method) = if brute_force {
        (json!(brute_force_count(family, k)?), "brute-force")
    } else {
        let k = usize::try_from(k).ok().filter(|&k| k as u64 <= MAX_SERIES_TERMS).ok_or_else(|| {
            Error::ResourceLimit(format!("k = {k} exceeds the series bound {MAX_SERIES_TERMS}"))
        })?;
        (integer(&coefficients(&series_spec(family)?, k)[k]), "series")
    };
    Ok((json!({ "family": family.to_string(), "k": k, "count": value, "method": method }), None))
}

fn series_cmd(s: &SeriesArgs, max_k: u64) -> Outcome {
    let family = count_family(s)?;
    if max_k > MAX_SERIES_TERMS {
        return Err(Error::ResourceLimit(format!("K = {max_k} exceeds the series bound {MAX_SERIES_TERMS}")).into());
    }
    let spec = series_spec(family)?;
    let f = coefficients(&spec, max_k as usize);
    let rows = f.iter().enumerate().map(|(k, x)| vec![k.to_string(), x.to_string()]).collect();
    let payload = json!({
        "family": family.to_string(),
        "series": spec.to_json(),
        "coefficients": f.iter().map(integer).collect::<Vec<_>>(),
    });
    Ok((payload, Some(Table::new(&["k", "count"], rows))))
}

fn asymptotic(s: &SeriesArgs) -> Outcome {
    let family = count_family(s)?;
    let spec = series_spec(family)?;
    let payload = json!({
        "family": family.to_string(),
        "degree": spec.denominator_exponents.len().saturating_sub(1),
        "leading": format_scalar(&asymptotic_leading(&spec)?),
        "leading_by_derivative": format_scalar(&asymptotic_leading_by_derivative(&spec)?),
    });
    Ok((payload, None))
}

fn metric(path: &Path) -> Outcome {
    let m = read_matrix(path)?;
    let status = metric_face_status(&m)?;
    let payload = json!({
        "face": status.face,
        "is_true_metric": is_true_metric(&m)?,
        "witness": status.witness.to_json(),
    });
    Ok((payload, None))
}

fn numerator(p: usize) -> Outcome {
    let coeffs = numerator_polynomial(p)?;
    let rows = coeffs.iter().enumerate().map(|(k, c)| vec![k.to_string(), c.to_string()]).collect();
    let payload = json!({ "p": p, "coefficients": coeffs, "value_at_one": coeffs.iter().sum::<u64>() });
    Ok((payload, Some(Table::new(&["k", "coefficient"], rows))))
}

fn tp(path: &Path, brute_force: bool) -> Outcome {
    let inst = TransportInstance::from_json(&read_json(path)?)?;
    let (value, flow, method) = if brute_force {
        let (value, flow) = tp_bruteforce(&inst)?;
        (value, flow, "brute-force")
    } else {
        let flow = northwest_corner(&inst)?;
        (objective(&inst.cost, &flow), flow, "northwest-corner")
    };
    Ok((json!({ "method": method, "flow": flow.flows, "objective": format_scalar(&value) }), None))
}

fn tsp(path: &Path, brute_force: bool, supnick: bool) -> Outcome {
    let cost = read_matrix(path)?;
    let (tour, value, method) = if brute_force {
        let (tour, value) = tsp_bruteforce(&cost)?;
        (tour, value, "brute-force")
    } else if supnick {
        cost.ensure_monge()?;
        if !cost.is_square() || !cost.is_symmetric() {
            return Err(Error::Hypothesis("the Supnick tour needs a symmetric square Monge cost matrix".into()).into());
        }
        let tour = supnick_tour(cost.rows())?;
        let value = tour.cost(&cost);
        (tour, value, "supnick")
    } else {
        let (tour, value) = pyramidal_tsp(&cost)?;
        (tour, value, "pyramidal")
    };
    Ok((json!({ "method": method, "tour": tour.cities(), "cost": format_scalar(&value) }), None))
}
