mod document;
mod verify;

use std::collections::BTreeMap;
use std::io::Read;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use serde::Serialize;
use serde_json::{json, Value};

use document::{analyze, Metadata, PointSetDocument, Section};
use pg2q::constructions::ConstructionId;
use pg2q::gf::FieldOp;
use pg2q::search::{sample_search, search_generic, Budget, SearchSpec};
use pg2q::{Field, PlaneCtx};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "pg2q", version, about = "Exact computations in the projective plane PG(2,q)")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for searches (0 uses every core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Node limit for searches.
    #[arg(long, global = true)]
    max_nodes: Option<u64>,
    /// Wall-clock limit for searches, in milliseconds.
    #[arg(long, global = true)]
    max_millis: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Neg,
    Inv,
}

impl From<Op> for FieldOp {
    fn from(op: Op) -> FieldOp {
        match op {
            Op::Add => FieldOp::Add,
            Op::Sub => FieldOp::Sub,
            Op::Mul => FieldOp::Mul,
            Op::Div => FieldOp::Div,
            Op::Pow => FieldOp::Pow,
            Op::Neg => FieldOp::Neg,
            Op::Inv => FieldOp::Inv,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Describe GF(q) or evaluate one operation.
    Field {
        #[arg(long)]
        q: u32,
        #[arg(long, value_enum)]
        op: Option<Op>,
        #[arg(long, default_value_t = 0)]
        a: u32,
        /// Second operand, or the exponent for `pow`.
        #[arg(long, default_value_t = 0)]
        b: u64,
    },
    /// Describe PG(2,q), a point, a line, a join or a meet.
    Plane {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        point: Option<u32>,
        #[arg(long)]
        line: Option<u32>,
        /// Two point indices.
        #[arg(long, num_args = 2)]
        join: Option<Vec<u32>>,
        /// Two line indices.
        #[arg(long, num_args = 2)]
        meet: Option<Vec<u32>>,
    },
    /// Emit a named construction as a point-set document.
    Construct {
        name: String,
        #[arg(long)]
        q: u32,
        /// Construction parameters as a JSON object.
        #[arg(long, default_value = "{}")]
        params: String,
    },
    /// Analyze a point-set document (a path, or `-` for standard input).
    Analyze {
        input: String,
        /// Sections to include; all by default.
        #[arg(long, value_enum, value_delimiter = ',')]
        sections: Vec<Section>,
    },
    /// Check a theorem on an instance.
    Verify(verify::VerifyArgs),
    /// Run a search spec document (a path, or `-` for standard input).
    Search {
        spec: String,
        /// Evaluate this many random sets instead of searching.
        #[arg(long)]
        samples: Option<u64>,
        /// Seed for `--samples`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// A finished command: the document to print and the exit code.
struct Outcome {
    doc: Value,
    code: u8,
}

impl Outcome {
    fn ok(doc: impl Serialize) -> Result<Outcome> {
        Ok(Outcome { doc: serde_json::to_value(doc)?, code: 0 })
    }
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("cannot read {path}"))
    }
}

fn plane(q: u32) -> Result<PlaneCtx> {
    Ok(PlaneCtx::with_order(q)?)
}

pub(crate) fn build_construction(name: &str, q: u32, params: &str) -> Result<(PlaneCtx, PointSetDocument)> {
    let Value::Object(mut obj) = serde_json::from_str::<Value>(params).context("parameters must be a JSON object")? else {
        bail!("parameters must be a JSON object");
    };
    let parameters: BTreeMap<String, Value> = obj.clone().into_iter().collect();
    obj.insert("name".into(), Value::String(name.into()));
    let id: ConstructionId = serde_json::from_value(Value::Object(obj)).map_err(|e| {
        anyhow!("unknown construction or invalid parameters for {name}: {e} (known: {})", ConstructionId::NAMES.join(", "))
    })?;
    let ctx = plane(q)?;
    let set = id.build(&ctx)?;
    let doc = PointSetDocument::new(&ctx, &set, Some(Metadata { name: name.into(), parameters }));
    Ok((ctx, doc))
}

fn run(cli: &Cli) -> Result<Outcome> {
    let budget = Budget { max_nodes: cli.max_nodes, max_millis: cli.max_millis };
    match &cli.command {
        Command::Field { q, op, a, b } => {
            let f = Field::with_order(*q)?;
            let mut doc = json!({ "field": f.spec(), "q": f.q() });
            if let Some(op) = op {
                let r = f.arith((*op).into(), f.element(*a)?, *b)?;
                doc["result"] = json!(r.code());
            }
            Outcome::ok(doc)
        }
        Command::Plane { q, point, line, join, meet } => {
            let ctx = plane(*q)?;
            let mut doc = json!({ "field": ctx.field().spec(), "numPoints": ctx.num_points(), "numLines": ctx.num_lines() });
            if let Some(p) = point {
                ctx.check_index(*p)?;
                doc["point"] = json!({ "index": p, "coords": ctx.triple_codes(*p), "lines": ctx.lines_through(*p) });
            }
            if let Some(l) = line {
                ctx.check_index(*l)?;
                doc["line"] = json!({ "index": l, "coeffs": ctx.triple_codes(*l), "points": ctx.points_on(*l) });
            }
            if let Some(j) = join {
                let l = ctx.join(j[0], j[1])?;
                doc["join"] = json!({ "index": l, "coeffs": ctx.triple_codes(l) });
            }
            if let Some(m) = meet {
                let p = ctx.meet(m[0], m[1])?;
                doc["meet"] = json!({ "index": p, "coords": ctx.triple_codes(p) });
            }
            Outcome::ok(doc)
        }
        Command::Construct { name, q, params } => Outcome::ok(build_construction(name, *q, params)?.1),
        Command::Analyze { input, sections } => {
            let doc = PointSetDocument::parse(&read_input(input)?)?;
            let report = analyze(doc, sections)?;
            let code = if report.has_failure() { EXIT_FAILURE } else { 0 };
            Ok(Outcome { doc: serde_json::to_value(report)?, code })
        }
        Command::Verify(args) => verify::run(args, budget),
        Command::Search { spec, samples, seed } => {
            let mut spec: SearchSpec = serde_json::from_str(&read_input(spec)?).context("malformed search spec")?;
            // Command-line limits take precedence over the document's.
            spec.budget.max_nodes = budget.max_nodes.or(spec.budget.max_nodes);
            spec.budget.max_millis = budget.max_millis.or(spec.budget.max_millis);
            let result = match samples {
                Some(n) => sample_search(&spec, *n, &mut rand_chacha::ChaCha8Rng::seed_from_u64(*seed))?,
                None => search_generic(&spec)?,
            };
            let code = if result.exhaustive { 0 } else { EXIT_BUDGET };
            Ok(Outcome { doc: serde_json::to_value(result)?, code })
        }
    }
}

/// `path = value` lines for every leaf of a document.
fn render_text(v: &Value, path: &str, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                render_text(x, &if path.is_empty() { k.clone() } else { format!("{path}.{k}") }, out);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in items.iter().enumerate() {
                render_text(x, &format!("{path}[{i}]"), out);
            }
        }
        _ => out.push_str(&format!("{path} = {v}\n")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    match run(&cli) {
        Ok(outcome) => {
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&outcome.doc).expect("documents serialize") + "\n",
                Format::Text => {
                    let mut s = String::new();
                    render_text(&outcome.doc, "", &mut s);
                    s
                }
            };
            print!("{text}");
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
