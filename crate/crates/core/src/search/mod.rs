//! Isomorph-reduced exhaustive searches over point sets of PG(2,q).

mod engine;
mod predicate;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::{blokhuis_semioval, symmdiff_semioval};
use crate::gf::FieldError;
use crate::plane::{canonical_form, CanonicalForm, PlaneCtx, PlaneError};
use crate::report::{Clause, Verdict, Witness};
use crate::secant::{semioval_checks, PointSet};
use crate::FieldSpec;

use engine::{Job, MARK};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("invalid search spec: {0}")]
    InvalidSpec(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Plane(#[from] PlaneError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    MinOddSecants,
    EnumeratePredicate,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Predicate {
    #[default]
    Any,
    Semioval,
    /// `(q+t,t)`-arcs of type `[0,2,t]`.
    #[serde(rename = "type_02t")]
    Type02t { t: u32 },
    /// Semiovals of size `q−1+a` whose lines meet them in 0, 1, 2 or `a` points.
    BlokhuisPattern { a: u32 },
    /// `(q+k)`-sets avoiding the marked point `O = (0,0,1)`, with at least `m`
    /// k-secants through `O` and exactly `q−k` odd-secants avoiding `O`.
    PeterDual { k: u32, m: u32 },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryReduction {
    /// Every sorted set is visited.
    None,
    /// The first points are fixed using transitivity of the point stabilizers.
    LexminStabilizer,
    /// One representative per orbit at every level.
    #[default]
    FullCanonical,
}

/// Limits of a search; absent fields are unlimited.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Budget {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_nodes: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_millis: Option<u64>,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SearchSpec {
    pub q: u32,
    pub target_size: u32,
    pub objective: Objective,
    #[serde(default)]
    pub predicate: Predicate,
    #[serde(default)]
    pub symmetry_reduction: SymmetryReduction,
    #[serde(default)]
    pub budget: Budget,
    /// Feasibility bounds on partial sets; turning them off leaves the results unchanged.
    #[serde(default = "yes")]
    pub pruning: bool,
}

impl SearchSpec {
    pub fn new(q: u32, target_size: u32, objective: Objective, predicate: Predicate) -> SearchSpec {
        SearchSpec {
            q,
            target_size,
            objective,
            predicate,
            symmetry_reduction: SymmetryReduction::default(),
            budget: Budget::default(),
            pruning: true,
        }
    }

    pub fn min_odd_secants(q: u32, n: u32) -> SearchSpec {
        SearchSpec::new(q, n, Objective::MinOddSecants, Predicate::Any)
    }

    pub fn semiovals(q: u32, size: u32) -> SearchSpec {
        SearchSpec::new(q, size, Objective::EnumeratePredicate, Predicate::Semioval)
    }

    pub fn with_reduction(mut self, reduction: SymmetryReduction) -> SearchSpec {
        self.symmetry_reduction = reduction;
        self
    }

    pub fn with_budget(mut self, budget: Budget) -> SearchSpec {
        self.budget = budget;
        self
    }

    pub fn with_pruning(mut self, pruning: bool) -> SearchSpec {
        self.pruning = pruning;
        self
    }

    pub fn validate(&self, ctx: &PlaneCtx) -> Result<(), SearchError> {
        let q = self.q;
        let n = self.target_size;
        let invalid = |msg: String| Err(SearchError::InvalidSpec(msg));
        if self.budget.max_nodes == Some(0) || self.budget.max_millis == Some(0) {
            return invalid("budget limits must be positive".into());
        }
        if n > ctx.num_points() {
            return invalid(format!("target size {n} exceeds the {} points of the plane", ctx.num_points()));
        }
        match self.predicate {
            Predicate::Any | Predicate::Semioval => {}
            Predicate::Type02t { t } => {
                if t == 0 || t == 2 || t > q + 1 || n != q + t {
                    return invalid(format!("type_02t needs t ∉ {{0,2}}, t ≤ q+1 and target size q+t, got t = {t}, size {n}"));
                }
            }
            Predicate::BlokhuisPattern { a } => {
                if a < 2 || n != q - 1 + a {
                    return invalid(format!("blokhuis_pattern needs a ≥ 2 and target size q−1+a, got a = {a}, size {n}"));
                }
            }
            Predicate::PeterDual { k, m } => {
                if q.is_multiple_of(2) || k % 2 == 0 || k > q || m == 0 || m > q + 1 || n != q + k {
                    return invalid(format!("peter_dual needs q odd, k odd ≤ q, 1 ≤ m ≤ q+1 and target size q+k, got k = {k}, m = {m}, size {n}"));
                }
            }
        }
        Ok(())
    }
}

/// A canonical representative; `marked` is the image of the marked point.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchWitness {
    pub points: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marked: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchResult {
    /// Minimum odd-secant count for minimization; a best-found value when not exhaustive.
    pub optimum: Option<u32>,
    /// In ascending order of canonical encoding.
    pub witnesses: Vec<SearchWitness>,
    pub nodes_explored: u64,
    /// True only when the whole reduced tree was traversed within budget.
    pub exhaustive: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub clauses: Vec<Clause>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl SearchResult {
    /// Canonical encodings of the witnesses.
    pub fn encodings(&self, ctx: &PlaneCtx) -> Vec<CanonicalForm> {
        self.witnesses.iter().map(|w| encoding(ctx, w)).collect()
    }
}

fn encoding(ctx: &PlaneCtx, w: &SearchWitness) -> CanonicalForm {
    let items: Vec<(u32, u32)> = w.points.iter().map(|&p| (p, 0)).chain(w.marked.map(|o| (o, MARK))).collect();
    crate::plane::canonical_form_colored(ctx, &items)
}

pub fn plane_for(q: u32) -> Result<PlaneCtx, SearchError> {
    Ok(PlaneCtx::new(FieldSpec::with_order(q)?)?)
}

pub fn search_generic(spec: &SearchSpec) -> Result<SearchResult, SearchError> {
    let ctx = plane_for(spec.q)?;
    search_in(&ctx, spec)
}

/// Runs a spec in an existing plane of the same order.
pub fn search_in(ctx: &PlaneCtx, spec: &SearchSpec) -> Result<SearchResult, SearchError> {
    if ctx.q() != spec.q {
        return Err(SearchError::InvalidSpec(format!("spec is for q = {}, plane has order {}", spec.q, ctx.q())));
    }
    spec.validate(ctx)?;
    let job = Job {
        ctx,
        n: spec.target_size,
        objective: spec.objective,
        predicate: spec.predicate,
        reduction: spec.symmetry_reduction,
        pruning: spec.pruning,
        budget: spec.budget,
    };
    let out = job.run();
    let marked = matches!(spec.predicate, Predicate::PeterDual { .. });
    let witnesses = out
        .leaves
        .iter()
        .map(|(form, _)| SearchWitness {
            points: form.points_with_color(ctx, 0),
            marked: marked.then(|| form.points_with_color(ctx, MARK)[0]),
        })
        .collect();
    let optimum = match spec.objective {
        Objective::MinOddSecants => out.leaves.first().map(|l| l.1),
        Objective::EnumeratePredicate => None,
    };
    let mut notes = Vec::new();
    if !out.exhaustive {
        notes.push("budget exhausted; results are partial".to_string());
    }
    Ok(SearchResult { optimum, witnesses, nodes_explored: out.nodes, exhaustive: out.exhaustive, clauses: Vec::new(), notes })
}

/// Evaluates `samples` uniformly random sets of the target size instead of
/// searching; the result is never exhaustive.
pub fn sample_search<R: Rng>(spec: &SearchSpec, samples: u64, rng: &mut R) -> Result<SearchResult, SearchError> {
    let ctx = plane_for(spec.q)?;
    spec.validate(&ctx)?;
    let marked = matches!(spec.predicate, Predicate::PeterDual { .. }).then_some(0);
    let pool: Vec<u32> = (0..ctx.num_points()).filter(|&p| Some(p) != marked).collect();
    let mut leaves: Vec<(CanonicalForm, u32)> = Vec::new();
    for _ in 0..samples {
        let members: Vec<u32> =
            rand::seq::index::sample(rng, pool.len(), spec.target_size as usize).into_iter().map(|i| pool[i]).collect();
        let counts = predicate::counts_of(&ctx, &members);
        let node = predicate::Node { members: &members, counts: &counts, marked };
        if predicate::accepts(&ctx, &spec.predicate, &node) {
            let items: Vec<(u32, u32)> = members.iter().map(|&p| (p, 0)).chain(marked.map(|o| (o, MARK))).collect();
            leaves.push((crate::plane::canonical_form_colored(&ctx, &items), predicate::odd_secants(&counts)));
        }
    }
    let optimum = match spec.objective {
        Objective::MinOddSecants => leaves.iter().map(|l| l.1).min(),
        Objective::EnumeratePredicate => None,
    };
    if optimum.is_some() {
        leaves.retain(|l| Some(l.1) == optimum);
    }
    leaves.sort();
    leaves.dedup();
    let witnesses = leaves
        .iter()
        .map(|(form, _)| SearchWitness {
            points: form.points_with_color(&ctx, 0),
            marked: marked.map(|_| form.points_with_color(&ctx, MARK)[0]),
        })
        .collect();
    Ok(SearchResult {
        optimum,
        witnesses,
        nodes_explored: samples,
        exhaustive: false,
        clauses: Vec::new(),
        notes: vec![format!("sampled {samples} random sets; results are not exhaustive")],
    })
}

fn only_when_exhaustive(result: &SearchResult, verdict: impl FnOnce() -> Verdict) -> Verdict {
    if result.exhaustive {
        verdict()
    } else {
        Verdict::vacuous("search incomplete")
    }
}

/// Minimum number of odd-secants over all `n`-sets.
pub fn min_odd_secants(q: u32, n: u32) -> Result<SearchResult, SearchError> {
    min_odd_secants_with(&SearchSpec::min_odd_secants(q, n))
}

/// As [`min_odd_secants`], with the reduction and budget taken from `spec`.
pub fn min_odd_secants_with(spec: &SearchSpec) -> Result<SearchResult, SearchError> {
    let (q, n) = (spec.q, spec.target_size);
    if n == 0 {
        return Err(SearchError::Precondition("n must be at least 1".into()));
    }
    let mut result = search_generic(spec)?;
    if n == q + 2 && q % 2 == 1 {
        let opt = result.optimum.unwrap_or(0);
        result.clauses.push(Clause::new(
            "odd_secant_lower_bound",
            if q > 3 {
                only_when_exhaustive(&result, || {
                    Verdict::check(5 * opt >= 8 * q, || Witness::new(format!("minimum {opt} is below 8q/5")))
                })
            } else {
                Verdict::vacuous("requires q > 3")
            },
        ));
        result.clauses.push(Clause::new(
            "odd_secant_large_q",
            if q >= 7 {
                only_when_exhaustive(&result, || {
                    Verdict::check(2 * opt >= 3 * (q + 1), || Witness::new(format!("minimum {opt} is below 3(q+1)/2")))
                })
            } else {
                Verdict::vacuous("requires q ≥ 7")
            },
        ));
    }
    Ok(result)
}

/// All semiovals of the given size, one per orbit.
pub fn enumerate_semiovals(q: u32, size: u32) -> Result<SearchResult, SearchError> {
    enumerate_semiovals_with(&SearchSpec::semiovals(q, size))
}

pub fn enumerate_semiovals_with(spec: &SearchSpec) -> Result<SearchResult, SearchError> {
    if spec.target_size < spec.q + 1 {
        return Err(SearchError::Precondition(format!("semiovals have at least q+1 = {} points", spec.q + 1)));
    }
    let ctx = plane_for(spec.q)?;
    let mut result = search_in(&ctx, spec)?;
    let bad = result.witnesses.iter().find_map(|w| {
        let set = PointSet::from_points(&ctx, w.points.iter().copied()).ok()?;
        let report = semioval_checks(&ctx, &set);
        report.clauses.into_iter().find(|c| c.verdict.is_fail()).map(|c| (w.points.clone(), c.id))
    });
    result.clauses.push(Clause::new(
        "semioval_checks",
        Verdict::check(bad.is_none(), || {
            let (pts, id) = bad.clone().unwrap();
            Witness::new(format!("clause {id} fails")).points(&ctx, pts)
        }),
    ));
    Ok(result)
}

/// Semiovals of size `q−1+a` meeting every line in 0, 1, 2 or `a` points,
/// checked against the two known families.
pub fn verify_blokhuis_classification(q: u32, a: u32) -> Result<SearchResult, SearchError> {
    verify_blokhuis_classification_with(q, a, SymmetryReduction::FullCanonical, Budget::default())
}

pub fn verify_blokhuis_classification_with(
    q: u32,
    a: u32,
    reduction: SymmetryReduction,
    budget: Budget,
) -> Result<SearchResult, SearchError> {
    if a <= 2 {
        return Err(SearchError::Precondition(format!("a = {a} must exceed 2")));
    }
    if q.is_multiple_of(2) {
        return Err(SearchError::Precondition(format!("q = {q} must be odd")));
    }
    let ctx = plane_for(q)?;
    let spec = SearchSpec::new(q, q - 1 + a, Objective::EnumeratePredicate, Predicate::BlokhuisPattern { a })
        .with_reduction(reduction)
        .with_budget(budget);
    let mut result = search_in(&ctx, &spec)?;
    let known: Vec<CanonicalForm> = [symmdiff_semioval(&ctx), blokhuis_semioval(&ctx)]
        .into_iter()
        .flatten()
        .filter(|s| s.len() as u32 == q - 1 + a)
        .map(|s| canonical_form(&ctx, &s.to_vec()))
        .collect();
    let stray = result.witnesses.iter().find(|w| !known.contains(&canonical_form(&ctx, &w.points)));
    let verdict = Verdict::check(stray.is_none(), || Witness::new("semioval outside both families").points(&ctx, stray.unwrap().points.clone()));
    result.clauses.push(Clause::new("known_families", verdict));
    Ok(result)
}

/// One `(k, m)` case of the dual configuration search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PeterCase {
    pub k: u32,
    pub m: u32,
    pub witnesses: usize,
    pub nodes_explored: u64,
    pub exhaustive: bool,
}

/// Searches every odd `k ≤ q` and every `4 ≤ m ≤ q−1` for the dual configuration.
pub fn verify_peter_nonexistence(q: u32) -> Result<SearchResult, SearchError> {
    verify_peter_nonexistence_with(q, SymmetryReduction::FullCanonical, Budget::default(), true)
}

pub fn verify_peter_nonexistence_with(
    q: u32,
    reduction: SymmetryReduction,
    budget: Budget,
    pruning: bool,
) -> Result<SearchResult, SearchError> {
    if q.is_multiple_of(2) {
        return Err(SearchError::Precondition(format!("q = {q} must be odd")));
    }
    let ctx = plane_for(q)?;
    let mut witnesses = Vec::new();
    let mut nodes = 0;
    let mut exhaustive = true;
    let mut notes = vec![
        "reading: O = (0,0,1) lies on at least m k-secants of B and exactly q−k odd-secants of B avoid O".to_string(),
    ];
    for m in 4..q {
        for k in (1..=q).step_by(2) {
            let spec = SearchSpec::new(q, q + k, Objective::EnumeratePredicate, Predicate::PeterDual { k, m })
                .with_reduction(reduction)
                .with_budget(budget)
                .with_pruning(pruning);
            let r = search_in(&ctx, &spec)?;
            let case = PeterCase { k, m, witnesses: r.witnesses.len(), nodes_explored: r.nodes_explored, exhaustive: r.exhaustive };
            let counting = if (m - 1) * k > q { ", impossible by counting" } else { "" };
            notes.push(format!(
                "k = {k}, m = {m}: {} witnesses, {} nodes, exhaustive = {}{counting}",
                case.witnesses, case.nodes_explored, case.exhaustive
            ));
            nodes += r.nodes_explored;
            exhaustive &= r.exhaustive;
            witnesses.extend(r.witnesses);
        }
    }
    if q < 5 {
        notes.push("no admissible m: the range 4 ≤ m ≤ q−1 is empty".to_string());
    }
    witnesses.sort_by_cached_key(|w| encoding(&ctx, w));
    let mut result = SearchResult { optimum: None, witnesses, nodes_explored: nodes, exhaustive, clauses: Vec::new(), notes };
    let verdict = only_when_exhaustive(&result, || {
        Verdict::check(result.witnesses.is_empty(), || {
            let w = &result.witnesses[0];
            Witness::new("dual configuration found").points(&ctx, w.points.iter().copied())
        })
    });
    result.clauses.push(Clause::new("no_configuration", verdict));
    Ok(result)
}
