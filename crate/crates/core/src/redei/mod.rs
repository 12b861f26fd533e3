//! Affine q-sets, the directions they determine, and the polynomial
//! machinery behind blocking sets of Rédei type.

mod bisecant;
mod bounds;
mod lemma;
mod poly;

pub use bisecant::{bisecant_slope, verify_bisecant_theorems};
pub use bounds::{direction_bounds, DirectionBranch, DirectionReport};
pub use lemma::{f_poly, g_poly, verify_lemma_poly, zero_bisecant_identity};
pub use poly::DensePoly;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::FieldElement;
use crate::plane::{PlaneCtx, Slope};
use crate::report::Clause;
use crate::secant::PointSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RedeiError {
    #[error("an affine q-set needs exactly {expected} points, got {actual}")]
    WrongSize { expected: u32, actual: usize },
    #[error("point ({x}, {y}) occurs twice")]
    Duplicate { x: u32, y: u32 },
    #[error("coordinate code {0} is not a field element")]
    InvalidElement(u32),
    #[error("the set is not the graph of a function")]
    NotGraph,
    #[error("point ({x}, {y}) is not in the set")]
    NotInSet { x: u32, y: u32 },
    #[error("p divides k+1 = {0}")]
    CharacteristicDividesK(u32),
    #[error("slope {0} is one of the missing directions")]
    SlopeIsMissing(u32),
    #[error("the slope formula has a zero denominator")]
    ZeroDenominator,
    #[error("line {line} is not a Rédei line: {reason}")]
    NotRedeiLine { line: u32, reason: String },
}

/// `q` distinct points of AG(2,q), sorted by `(x, y)` code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AffineQSet {
    points: Vec<(FieldElement, FieldElement)>,
    /// `function[x] = f(x)` when the set is a graph.
    function: Option<Vec<FieldElement>>,
}

impl AffineQSet {
    pub fn new(ctx: &PlaneCtx, mut points: Vec<(FieldElement, FieldElement)>) -> Result<AffineQSet, RedeiError> {
        let q = ctx.q();
        if points.len() != q as usize {
            return Err(RedeiError::WrongSize { expected: q, actual: points.len() });
        }
        for &(x, y) in &points {
            for c in [x, y] {
                if c.code() >= q {
                    return Err(RedeiError::InvalidElement(c.code()));
                }
            }
        }
        points.sort();
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(RedeiError::Duplicate { x: w[0].0.code(), y: w[0].1.code() });
        }
        let xs: BTreeSet<FieldElement> = points.iter().map(|p| p.0).collect();
        let function = (xs.len() == q as usize).then(|| points.iter().map(|p| p.1).collect());
        Ok(AffineQSet { points, function })
    }

    /// The graph `{(x, f(x))}` of a table indexed by element code.
    pub fn graph(ctx: &PlaneCtx, values: &[FieldElement]) -> Result<AffineQSet, RedeiError> {
        let pts = ctx.field().elements().zip(values.iter().copied()).collect::<Vec<_>>();
        if values.len() != ctx.q() as usize {
            return Err(RedeiError::WrongSize { expected: ctx.q(), actual: values.len() });
        }
        AffineQSet::new(ctx, pts)
    }

    pub fn from_fn(ctx: &PlaneCtx, f: impl Fn(FieldElement) -> FieldElement) -> AffineQSet {
        let values: Vec<FieldElement> = ctx.field().elements().map(f).collect();
        AffineQSet::graph(ctx, &values).expect("a function table is a graph")
    }

    /// Reads a set of affine points of the plane.
    pub fn from_point_set(ctx: &PlaneCtx, set: &PointSet) -> Result<AffineQSet, RedeiError> {
        let mut pts = Vec::with_capacity(set.len());
        for p in set.iter() {
            match ctx.affine_coords(p) {
                Some(c) => pts.push(c),
                None => return Err(RedeiError::WrongSize { expected: ctx.q(), actual: set.len() }),
            }
        }
        AffineQSet::new(ctx, pts)
    }

    pub fn points(&self) -> &[(FieldElement, FieldElement)] {
        &self.points
    }

    pub fn function(&self) -> Option<&[FieldElement]> {
        self.function.as_deref()
    }

    pub fn is_graph(&self) -> bool {
        self.function.is_some()
    }

    pub fn contains(&self, pt: (FieldElement, FieldElement)) -> bool {
        self.points.binary_search(&pt).is_ok()
    }

    pub fn to_point_set(&self, ctx: &PlaneCtx) -> PointSet {
        PointSet::from_points(ctx, self.points.iter().map(|&(x, y)| ctx.affine_point(x, y))).expect("affine points are valid")
    }
}

/// Points of `ℓ∞` determined by an affine set, ascending by index, so `(∞)` comes first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DirectionSet {
    pub points: Vec<u32>,
}

impl DirectionSet {
    pub fn n(&self) -> u32 {
        self.points.len() as u32
    }

    pub fn contains(&self, ctx: &PlaneCtx, slope: Slope) -> bool {
        self.points.binary_search(&ctx.direction_point(slope)).is_ok()
    }

    pub fn slopes(&self, ctx: &PlaneCtx) -> Vec<Slope> {
        self.points.iter().map(|&p| ctx.slope_of_point(p).expect("directions lie on the line at infinity")).collect()
    }
}

pub fn directions_of(ctx: &PlaneCtx, u: &AffineQSet) -> DirectionSet {
    let f = ctx.field();
    let mut seen = vec![false; ctx.q() as usize + 1];
    let pts = u.points();
    for (i, &(a, b)) in pts.iter().enumerate() {
        for &(c, d) in &pts[i + 1..] {
            let slot = if a == c { ctx.q() as usize } else { f.div(f.sub(d, b), f.sub(c, a)).unwrap().code() as usize };
            seen[slot] = true;
        }
    }
    let mut points: Vec<u32> = (0..ctx.q())
        .filter(|&m| seen[m as usize])
        .map(|m| ctx.direction_point(Slope::Finite(FieldElement(m))))
        .collect();
    if seen[ctx.q() as usize] {
        points.push(ctx.direction_point(Slope::Infinite));
    }
    points.sort_unstable();
    DirectionSet { points }
}

/// Whether `x ↦ f(x) − c·x` permutes GF(q), i.e. `(c)` is not a determined direction.
pub fn is_permutation_direction(ctx: &PlaneCtx, u: &AffineQSet, c: FieldElement) -> Result<bool, RedeiError> {
    let table = u.function().ok_or(RedeiError::NotGraph)?;
    let f = ctx.field();
    let mut hit = vec![false; ctx.q() as usize];
    for (x, &y) in f.elements().zip(table) {
        hit[f.sub(y, f.mul(c, x)).code() as usize] = true;
    }
    let permutes = hit.iter().all(|&h| h);
    debug_assert_eq!(permutes, !directions_of(ctx, u).contains(ctx, Slope::Finite(c)));
    Ok(permutes)
}

/// `U ∪ D_U`.
pub fn redei_blocking_set(ctx: &PlaneCtx, u: &AffineQSet) -> PointSet {
    let mut set = u.to_point_set(ctx);
    for p in directions_of(ctx, u).points {
        set.insert(p);
    }
    set
}

/// Verdicts of one theorem checker, with the hypotheses it detected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RedeiReport {
    pub hypotheses: Vec<(String, bool)>,
    pub clauses: Vec<Clause>,
}

impl RedeiReport {
    pub fn holds(&self) -> bool {
        crate::report::all_hold(&self.clauses)
    }

    pub fn clause(&self, id: &str) -> Option<&Clause> {
        crate::report::find(&self.clauses, id)
    }
}

/// Number of points of `u` on the line through `r` with the given slope.
pub(crate) fn points_toward(ctx: &PlaneCtx, u: &AffineQSet, r: (FieldElement, FieldElement), slope: Slope) -> u32 {
    let f = ctx.field();
    u.points()
        .iter()
        .filter(|&&(a, b)| match slope {
            Slope::Infinite => a == r.0,
            Slope::Finite(m) => f.sub(b, r.1) == f.mul(m, f.sub(a, r.0)),
        })
        .count() as u32
}
