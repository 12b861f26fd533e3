//! Builders for the standard example sets.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::FieldElement;
use crate::plane::{PlaneCtx, PlaneError};
use crate::redei::{redei_blocking_set, AffineQSet};
use crate::secant::{profile, PointSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("q = {0} must be odd")]
    NeedsOddOrder(u32),
    #[error("q = {0} must be even")]
    NeedsEvenOrder(u32),
    #[error("q = {q} is below the minimum {min}")]
    OrderTooSmall { q: u32, min: u32 },
    #[error("q = {0} is not a square")]
    NotSquare(u32),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error(transparent)]
    Altered(#[from] AlteredError),
    #[error(transparent)]
    Plane(#[from] PlaneError),
}

/// Violated preconditions of the altered semioval construction.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlteredError {
    #[error("B' is not a blocking set of Rédei type with the given Rédei line")]
    NotRedei,
    #[error("P is not a point of B'")]
    PNotInSet,
    #[error("P lies on the Rédei line")]
    POnLine,
    #[error("bisecant {0} of B' misses P")]
    BisecantMissesP(u32),
    #[error("trisecant {0} of B' passes through P")]
    TrisecantThroughP(u32),
    #[error("W is not on the Rédei line")]
    WOffLine,
    #[error("W is a point of B'")]
    WInSet,
}

fn need_odd(ctx: &PlaneCtx) -> Result<(), ConstructionError> {
    match ctx.q() % 2 {
        1 => Ok(()),
        _ => Err(ConstructionError::NeedsOddOrder(ctx.q())),
    }
}

fn need_min(ctx: &PlaneCtx, min: u32) -> Result<(), ConstructionError> {
    if ctx.q() < min {
        return Err(ConstructionError::OrderTooSmall { q: ctx.q(), min });
    }
    Ok(())
}

fn set_of(ctx: &PlaneCtx, triples: impl IntoIterator<Item = [FieldElement; 3]>) -> Result<PointSet, ConstructionError> {
    let mut idx = Vec::new();
    for t in triples {
        idx.push(ctx.index_of(t)?);
    }
    Ok(PointSet::from_points(ctx, idx)?)
}

/// `{(0,1,a), (1,0,a), (−a,1,0) : a a square} ∪ {(0,0,1)}`, with `a = 0` admitted.
pub fn projective_triangle(ctx: &PlaneCtx) -> Result<PointSet, ConstructionError> {
    need_odd(ctx)?;
    need_min(ctx, 5)?;
    let f = ctx.field();
    let (o, z) = (FieldElement::ONE, FieldElement::ZERO);
    let squares: Vec<FieldElement> = f.elements().filter(|&a| f.is_square(a)).collect();
    let pts = squares.iter().flat_map(|&a| [[z, o, a], [o, z, a], [f.neg(a), o, z]]).chain([[z, z, o]]);
    set_of(ctx, pts)
}

/// `{(0,1,s), (s,0,1), (1,s,0) : −s a non-square}`.
pub fn blokhuis_semioval(ctx: &PlaneCtx) -> Result<PointSet, ConstructionError> {
    need_odd(ctx)?;
    need_min(ctx, 5)?;
    let f = ctx.field();
    let (o, z) = (FieldElement::ONE, FieldElement::ZERO);
    let pts = f.elements().filter(|&s| !f.is_square(f.neg(s))).flat_map(|s| [[z, o, s], [s, z, o], [o, s, z]]);
    set_of(ctx, pts)
}

/// The lines `x = 0` and `y = 0` without their meet `(0,0,1)` and without
/// `(0,1,0)` and `(1,0,0)`.
pub fn symmdiff_semioval(ctx: &PlaneCtx) -> Result<PointSet, ConstructionError> {
    need_min(ctx, 4)?;
    let mut s = two_lines(ctx);
    s.remove(ctx.index_of_codes([0, 1, 0])?);
    s.remove(ctx.index_of_codes([1, 0, 0])?);
    Ok(s)
}

fn two_lines(ctx: &PlaneCtx) -> PointSet {
    let x0 = ctx.index_of_codes([1, 0, 0]).unwrap();
    let y0 = ctx.index_of_codes([0, 1, 0]).unwrap();
    PointSet::line(ctx, x0).symmetric_difference(&PointSet::line(ctx, y0))
}

/// The conic `{(1,t,t²)} ∪ {(0,0,1)}` and the meet `(0,1,0)` of its tangents at `(0,0,1)` and `(1,0,0)`.
pub fn conic_plus_external(ctx: &PlaneCtx) -> Result<PointSet, ConstructionError> {
    need_odd(ctx)?;
    let f = ctx.field();
    let (o, z) = (FieldElement::ONE, FieldElement::ZERO);
    set_of(ctx, f.elements().map(|t| [o, t, f.mul(t, t)]).chain([[z, z, o], [z, o, z]]))
}

/// Additive maps of GF(q) used as graph fixtures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LinearMap {
    Identity,
    /// `x ↦ c·x` for the element with code `c`.
    Scalar { c: u32 },
    /// `x ↦ x^(p^k)`.
    Frobenius { k: u32 },
    /// Relative trace onto GF(p^d): `x + x^(p^d) + … + x^(p^(h−d))`.
    Trace { d: u32 },
}

/// The graph of an additive map.
pub fn linear_graph(ctx: &PlaneCtx, map: LinearMap) -> Result<AffineQSet, ConstructionError> {
    let f = ctx.field();
    let h = f.h();
    let invalid = |msg: String| Err(ConstructionError::InvalidMap(msg));
    match map {
        LinearMap::Identity => Ok(AffineQSet::from_fn(ctx, |x| x)),
        LinearMap::Scalar { c } => {
            let Ok(c) = f.element(c) else { return invalid(format!("{c} is not an element of GF({})", f.q())) };
            Ok(AffineQSet::from_fn(ctx, |x| f.mul(c, x)))
        }
        LinearMap::Frobenius { k } if k <= h => Ok(AffineQSet::from_fn(ctx, |x| f.frobenius(x, k).unwrap())),
        LinearMap::Frobenius { k } => invalid(format!("Frobenius power {k} exceeds h = {h}")),
        LinearMap::Trace { d } if d >= 1 && d < h && h.is_multiple_of(d) => Ok(AffineQSet::from_fn(ctx, |x| {
            (0..h / d).fold(FieldElement::ZERO, |acc, i| f.add(acc, f.frobenius(x, i * d).unwrap()))
        })),
        LinearMap::Trace { d } => invalid(format!("no proper subfield GF(p^{d}) of GF(p^{h})")),
    }
}

/// Points with all coordinates in GF(√q).
pub fn baer_subplane(ctx: &PlaneCtx) -> Result<PointSet, ConstructionError> {
    let f = ctx.field();
    if !f.h().is_multiple_of(2) {
        return Err(ConstructionError::NotSquare(ctx.q()));
    }
    let d = f.h() / 2;
    let pts = (0..ctx.num_points()).filter(|&p| ctx.triple(p).iter().all(|&c| f.in_subfield(c, d)));
    Ok(PointSet::from_points(ctx, pts)?)
}

/// The lines `x = 0` and `y = 0` without their meet `(0,0,1)`.
pub fn punctured_line_pair(ctx: &PlaneCtx) -> Result<PointSet, ConstructionError> {
    if !ctx.q().is_multiple_of(2) {
        return Err(ConstructionError::NeedsEvenOrder(ctx.q()));
    }
    Ok(two_lines(ctx))
}

/// `S = (l Δ B') ∖ {W, P}`.
pub fn altered_semioval(ctx: &PlaneCtx, b_prime: &PointSet, l: u32, p: u32, w: u32) -> Result<PointSet, ConstructionError> {
    ctx.check_index(l)?;
    ctx.check_index(p)?;
    ctx.check_index(w)?;
    let q = ctx.q();
    let prof = profile(ctx, b_prime);
    let size = b_prime.len() as u32;
    if prof.count(0) > 0 || size != q + prof.per_line[l as usize] || size > 2 * q {
        return Err(AlteredError::NotRedei.into());
    }
    if !b_prime.contains(p) {
        return Err(AlteredError::PNotInSet.into());
    }
    if ctx.incident(p, l) {
        return Err(AlteredError::POnLine.into());
    }
    if let Some(b) = prof.lines_with(2).into_iter().find(|&b| !ctx.incident(p, b)) {
        return Err(AlteredError::BisecantMissesP(b).into());
    }
    if let Some(&t) = ctx.lines_through(p).iter().find(|&&t| prof.per_line[t as usize] == 3) {
        return Err(AlteredError::TrisecantThroughP(t).into());
    }
    if !ctx.incident(w, l) {
        return Err(AlteredError::WOffLine.into());
    }
    if b_prime.contains(w) {
        return Err(AlteredError::WInSet.into());
    }
    let mut s = PointSet::line(ctx, l).symmetric_difference(b_prime);
    s.remove(w);
    s.remove(p);
    Ok(s)
}

/// A named fixture and its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum ConstructionId {
    ProjectiveTriangle,
    BlokhuisSemioval,
    SymmdiffSemioval,
    ConicPlusExternal,
    LinearGraph { map: LinearMap },
    /// `U ∪ D_U` for the graph of a map.
    RedeiSet { map: LinearMap },
    BaerSubplane,
    PuncturedLinePair,
    /// Built from the Rédei set of `map` with the line at infinity as Rédei line.
    AlteredSemioval { map: LinearMap, p: [u32; 3], w: [u32; 3] },
}

impl ConstructionId {
    pub const NAMES: [&'static str; 9] = [
        "projective_triangle",
        "blokhuis_semioval",
        "symmdiff_semioval",
        "conic_plus_external",
        "linear_graph",
        "redei_set",
        "baer_subplane",
        "punctured_line_pair",
        "altered_semioval",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ConstructionId::ProjectiveTriangle => "projective_triangle",
            ConstructionId::BlokhuisSemioval => "blokhuis_semioval",
            ConstructionId::SymmdiffSemioval => "symmdiff_semioval",
            ConstructionId::ConicPlusExternal => "conic_plus_external",
            ConstructionId::LinearGraph { .. } => "linear_graph",
            ConstructionId::RedeiSet { .. } => "redei_set",
            ConstructionId::BaerSubplane => "baer_subplane",
            ConstructionId::PuncturedLinePair => "punctured_line_pair",
            ConstructionId::AlteredSemioval { .. } => "altered_semioval",
        }
    }

    pub fn build(&self, ctx: &PlaneCtx) -> Result<PointSet, ConstructionError> {
        match *self {
            ConstructionId::ProjectiveTriangle => projective_triangle(ctx),
            ConstructionId::BlokhuisSemioval => blokhuis_semioval(ctx),
            ConstructionId::SymmdiffSemioval => symmdiff_semioval(ctx),
            ConstructionId::ConicPlusExternal => conic_plus_external(ctx),
            ConstructionId::LinearGraph { map } => Ok(linear_graph(ctx, map)?.to_point_set(ctx)),
            ConstructionId::RedeiSet { map } => Ok(redei_blocking_set(ctx, &linear_graph(ctx, map)?)),
            ConstructionId::BaerSubplane => baer_subplane(ctx),
            ConstructionId::PuncturedLinePair => punctured_line_pair(ctx),
            ConstructionId::AlteredSemioval { map, p, w } => {
                let b = redei_blocking_set(ctx, &linear_graph(ctx, map)?);
                altered_semioval(ctx, &b, ctx.line_at_infinity(), ctx.index_of_codes(p)?, ctx.index_of_codes(w)?)
            }
        }
    }
}
