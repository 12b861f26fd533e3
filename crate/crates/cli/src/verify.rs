//! The `verify` subcommand.

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde_json::{json, Value};

use crate::document::{PointSetDocument, SCHEMA_VERSION};
use crate::{build_construction, read_input, Outcome, EXIT_BUDGET, EXIT_FAILURE};
use pg2q::constructions::{linear_graph, LinearMap};
use pg2q::redei::{
    direction_bounds, redei_blocking_set, verify_bisecant_theorems, verify_lemma_poly, zero_bisecant_identity, AffineQSet,
};
use pg2q::search::{verify_blokhuis_classification_with, verify_peter_nonexistence_with, Budget, SymmetryReduction};
use pg2q::secant::{blocking_report, semioval_checks, weight_theorem_checks};
use pg2q::{Clause, FieldElement, PlaneCtx, PointSet};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Theorem {
    /// Root multiplicities of the Rédei-type polynomial at a point of a q-set.
    LemmaPoly,
    /// Bisecant structure of a Rédei-type blocking set.
    BisecantStructure,
    /// Direction-count bounds for the graph of a function.
    DirectionBounds,
    /// Tangent and exponent bounds for minimal blocking sets.
    Blocking,
    /// Weight identities and odd-secant bounds.
    Weights,
    /// Semioval structure.
    Semioval,
    /// Classification of semiovals with intersections 0, 1, 2 and a.
    Blokhuis,
    /// Non-existence of the dual line-set configuration.
    Peter,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    theorem: Theorem,
    #[arg(long)]
    q: Option<u32>,
    /// Use the graph of x ↦ x^E.
    #[arg(long)]
    power: Option<u64>,
    /// Use the graph of the function with these values at the codes 0, 1, …, q−1.
    #[arg(long, value_delimiter = ',')]
    function: Vec<u32>,
    /// Use the graph of an additive map given as JSON, e.g. {"kind":"frobenius","k":1}.
    #[arg(long)]
    map: Option<String>,
    /// Affine point (x, y) of the q-set, by element codes.
    #[arg(long, num_args = 2)]
    at: Option<Vec<u32>>,
    /// Line index.
    #[arg(long)]
    line: Option<u32>,
    /// Point-set document (a path, or `-` for standard input).
    #[arg(long)]
    input: Option<String>,
    /// Named construction to use as the point set.
    #[arg(long)]
    construct: Option<String>,
    /// Parameters of `--construct` as a JSON object.
    #[arg(long, default_value = "{}")]
    params: String,
    /// Secant size for `blokhuis`.
    #[arg(long)]
    a: Option<u32>,
    /// Disable the feasibility bounds of the searches.
    #[arg(long)]
    no_pruning: bool,
}

impl VerifyArgs {
    fn q(&self) -> Result<u32> {
        self.q.context("--q is required")
    }

    fn graph(&self, ctx: &PlaneCtx) -> Result<Option<AffineQSet>> {
        let f = ctx.field();
        let given = [self.power.is_some(), !self.function.is_empty(), self.map.is_some()].iter().filter(|&&b| b).count();
        if given > 1 {
            bail!("give at most one of --power, --function and --map");
        }
        if let Some(e) = self.power {
            return Ok(Some(AffineQSet::from_fn(ctx, |x| f.pow(x, e))));
        }
        if !self.function.is_empty() {
            let values = self.function.iter().map(|&c| f.element(c)).collect::<Result<Vec<_>, _>>()?;
            return Ok(Some(AffineQSet::graph(ctx, &values)?));
        }
        if let Some(m) = &self.map {
            let map: LinearMap = serde_json::from_str(m).context("malformed --map")?;
            return Ok(Some(linear_graph(ctx, map)?));
        }
        Ok(None)
    }

    fn require_graph(&self, ctx: &PlaneCtx) -> Result<AffineQSet> {
        self.graph(ctx)?.context("give one of --power, --function and --map")
    }

    /// The point set from `--input` or `--construct`.
    fn point_set(&self) -> Result<Option<(PlaneCtx, PointSet)>> {
        match (&self.input, &self.construct) {
            (Some(_), Some(_)) => bail!("give at most one of --input and --construct"),
            (Some(path), None) => Ok(Some(PointSetDocument::parse(&read_input(path)?)?.resolve()?)),
            (None, Some(name)) => {
                let (_, doc) = build_construction(name, self.q()?, &self.params)?;
                Ok(Some(doc.resolve()?))
            }
            (None, None) => Ok(None),
        }
    }

    fn require_point_set(&self) -> Result<(PlaneCtx, PointSet)> {
        self.point_set()?.context("give --input or --construct")
    }
}

fn outcome(theorem: Theorem, instance: Value, result: Value, clauses: &[Clause], exhaustive: bool) -> Result<Outcome> {
    let holds = pg2q::report::all_hold(clauses);
    let code = if !holds {
        EXIT_FAILURE
    } else if !exhaustive {
        EXIT_BUDGET
    } else {
        0
    };
    let doc = json!({
        "schemaVersion": SCHEMA_VERSION,
        "theorem": format!("{theorem:?}"),
        "instance": instance,
        "holds": holds,
        "result": result,
    });
    Ok(Outcome { doc, code })
}

pub fn run(args: &VerifyArgs, budget: Budget) -> Result<Outcome> {
    let t = args.theorem;
    match t {
        Theorem::LemmaPoly => {
            let ctx = crate::plane(args.q()?)?;
            let u = args.require_graph(&ctx)?;
            let f = ctx.field();
            let r: (FieldElement, FieldElement) = match &args.at {
                Some(xy) => (f.element(xy[0])?, f.element(xy[1])?),
                None => u.points()[0],
            };
            let mut report = verify_lemma_poly(&ctx, &u, r)?;
            report.clauses.push(Clause::new("zero_bisecant_identity", zero_bisecant_identity(&ctx, &u, r)?));
            let instance = json!({ "q": ctx.q(), "point": [r.0.code(), r.1.code()], "function": u.function().map(|v| v.iter().map(|c| c.code()).collect::<Vec<_>>()) });
            outcome(t, instance, serde_json::to_value(&report)?, &report.clauses, true)
        }
        Theorem::BisecantStructure => {
            let (ctx, set, default_line) = match args.point_set()? {
                Some((ctx, set)) => (ctx, set, None),
                None => {
                    let ctx = crate::plane(args.q()?)?;
                    let u = args.require_graph(&ctx)?;
                    let b = redei_blocking_set(&ctx, &u);
                    let l = ctx.line_at_infinity();
                    (ctx, b, Some(l))
                }
            };
            let l = match args.line.or(default_line) {
                Some(l) => l,
                None => *blocking_report(&ctx, &set).redei_lines.first().context("the set has no Rédei line")?,
            };
            ctx.check_index(l)?;
            let report = verify_bisecant_theorems(&ctx, &set, l)?;
            let instance = json!({ "q": ctx.q(), "line": ctx.triple_codes(l), "points": PointSetDocument::new(&ctx, &set, None).points });
            outcome(t, instance, serde_json::to_value(&report)?, &report.clauses, true)
        }
        Theorem::DirectionBounds => {
            let ctx = crate::plane(args.q()?)?;
            let u = args.require_graph(&ctx)?;
            let report = direction_bounds(&ctx, &u)?;
            outcome(t, json!({ "q": ctx.q() }), serde_json::to_value(&report)?, &report.clauses, true)
        }
        Theorem::Blocking => {
            let (ctx, set) = args.require_point_set()?;
            let report = blocking_report(&ctx, &set);
            let clauses = [Clause::new("tangent_bound", report.tangent_bound.clone()), Clause::new("small_exponent", report.small_exponent.clone())];
            outcome(t, json!({ "q": ctx.q() }), serde_json::to_value(&report)?, &clauses, true)
        }
        Theorem::Weights => {
            let (ctx, set) = args.require_point_set()?;
            let report = weight_theorem_checks(&ctx, &set);
            outcome(t, json!({ "q": ctx.q() }), serde_json::to_value(&report)?, &report.clauses, true)
        }
        Theorem::Semioval => {
            let (ctx, set) = args.require_point_set()?;
            let report = semioval_checks(&ctx, &set);
            outcome(t, json!({ "q": ctx.q() }), serde_json::to_value(&report)?, &report.clauses, true)
        }
        Theorem::Blokhuis => {
            let (q, a) = (args.q()?, args.a.context("--a is required")?);
            let r = verify_blokhuis_classification_with(q, a, SymmetryReduction::FullCanonical, budget)?;
            outcome(t, json!({ "q": q, "a": a }), serde_json::to_value(&r)?, &r.clauses, r.exhaustive)
        }
        Theorem::Peter => {
            let q = args.q()?;
            let r = verify_peter_nonexistence_with(q, SymmetryReduction::FullCanonical, budget, !args.no_pruning)?;
            outcome(t, json!({ "q": q }), serde_json::to_value(&r)?, &r.clauses, r.exhaustive)
        }
    }
}
