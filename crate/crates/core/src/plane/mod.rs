//! The Desarguesian projective plane PG(2,q).
//!
//! Points and lines are both indexed by normalized homogeneous triples (first
//! nonzero coordinate equal to 1) in lexicographic order of element codes, so
//! point `i` and line `i` are dual to each other. Index 0 is the affine origin
//! `(0,0,1)` as a point and the line at infinity `z = 0` as a line.

mod canonical;
mod collineation;

pub use canonical::{canonical_form, canonical_form_colored, CanonicalForm};
pub use collineation::Matrix3;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::BitSet;
use crate::gf::{Field, FieldElement, FieldSpec};

/// Largest order for which a plane context may be built.
pub const MAX_PLANE_ORDER: u32 = 89;

const JOIN_TABLE_LIMIT: u32 = 2048;

pub type Triple = [FieldElement; 3];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlaneError {
    #[error("plane order {0} exceeds the supported maximum {MAX_PLANE_ORDER}")]
    OrderTooLarge(u32),
    #[error("the zero vector is not a projective point")]
    ZeroVector,
    #[error("coordinate code {code} is not below q = {q}")]
    InvalidCoordinate { code: u32, q: u32 },
    #[error("index {index} is not below {count}")]
    InvalidIndex { index: u32, count: u32 },
    #[error("join and meet need distinct arguments, got {0} twice")]
    Identical(u32),
    #[error("point {0} is not an affine point")]
    NotAffine(u32),
    #[error("the collineation matrix is singular")]
    Singular,
}

/// A slope: the direction `(m)` or the vertical direction `(∞)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Slope {
    Finite(FieldElement),
    Infinite,
}

/// A point together with its normalized coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    pub index: u32,
    pub coords: Triple,
}

/// A line together with its normalized coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ProjLine {
    pub index: u32,
    pub coeffs: Triple,
}

#[derive(Clone, Debug)]
pub struct PlaneCtx {
    field: Field,
    q: u32,
    count: u32,
    triples: Vec<Triple>,
    line_points: Vec<Vec<u32>>,
    line_sets: Vec<BitSet>,
    point_lines: Vec<Vec<u32>>,
    join_table: Option<Vec<u32>>,
}

impl PlaneCtx {
    pub fn new(spec: FieldSpec) -> Result<PlaneCtx, PlaneError> {
        PlaneCtx::from_field(Field::new(spec))
    }

    pub fn with_order(q: u32) -> Result<PlaneCtx, crate::Error> {
        Ok(PlaneCtx::from_field(Field::with_order(q)?)?)
    }

    pub fn from_field(field: Field) -> Result<PlaneCtx, PlaneError> {
        let q = field.q();
        if q > MAX_PLANE_ORDER {
            return Err(PlaneError::OrderTooLarge(q));
        }
        let count = q * q + q + 1;
        let fe = FieldElement;
        let mut triples = Vec::with_capacity(count as usize);
        triples.push([fe(0), fe(0), fe(1)]);
        for z in 0..q {
            triples.push([fe(0), fe(1), fe(z)]);
        }
        for y in 0..q {
            for z in 0..q {
                triples.push([fe(1), fe(y), fe(z)]);
            }
        }
        let mut ctx = PlaneCtx {
            field,
            q,
            count,
            triples,
            line_points: Vec::new(),
            line_sets: Vec::new(),
            point_lines: vec![Vec::with_capacity(q as usize + 1); count as usize],
            join_table: None,
        };
        for l in 0..count {
            let mut pts = ctx.enumerate_line(l);
            pts.sort_unstable();
            for &p in &pts {
                ctx.point_lines[p as usize].push(l);
            }
            ctx.line_sets.push(BitSet::from_indices(count as usize, pts.iter().copied()));
            ctx.line_points.push(pts);
        }
        if count <= JOIN_TABLE_LIMIT {
            let n = count as usize;
            let mut table = vec![u32::MAX; n * n];
            for (l, pts) in ctx.line_points.iter().enumerate() {
                for &a in pts {
                    for &b in pts {
                        if a != b {
                            table[a as usize * n + b as usize] = l as u32;
                        }
                    }
                }
            }
            ctx.join_table = Some(table);
        }
        Ok(ctx)
    }

    /// Points of line `l` as `v` and `u + t·v` for a basis `{u, v}` of its kernel.
    fn enumerate_line(&self, l: u32) -> Vec<u32> {
        let f = &self.field;
        let [a, b, c] = self.triples[l as usize];
        let zero = FieldElement::ZERO;
        let one = FieldElement::ONE;
        let (u, v) = if !a.is_zero() {
            let ia = f.inv_nonzero(a);
            ([f.neg(f.mul(b, ia)), one, zero], [f.neg(f.mul(c, ia)), zero, one])
        } else if !b.is_zero() {
            let ib = f.inv_nonzero(b);
            ([one, zero, zero], [zero, f.neg(f.mul(c, ib)), one])
        } else {
            ([one, zero, zero], [zero, one, zero])
        };
        let mut out = vec![self.index_unchecked(v)];
        for t in f.elements() {
            let w = [f.add(u[0], f.mul(t, v[0])), f.add(u[1], f.mul(t, v[1])), f.add(u[2], f.mul(t, v[2]))];
            out.push(self.index_unchecked(w));
        }
        out
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Number of points, which is also the number of lines.
    #[inline]
    pub fn num_points(&self) -> u32 {
        self.count
    }

    #[inline]
    pub fn num_lines(&self) -> u32 {
        self.count
    }

    pub fn point(&self, index: u32) -> ProjPoint {
        ProjPoint { index, coords: self.triples[index as usize] }
    }

    pub fn line(&self, index: u32) -> ProjLine {
        ProjLine { index, coeffs: self.triples[index as usize] }
    }

    /// Normalized triple of a point or line index.
    #[inline]
    pub fn triple(&self, index: u32) -> Triple {
        self.triples[index as usize]
    }

    pub fn triple_codes(&self, index: u32) -> [u32; 3] {
        self.triples[index as usize].map(|c| c.code())
    }

    pub fn check_index(&self, index: u32) -> Result<u32, PlaneError> {
        if index < self.count {
            Ok(index)
        } else {
            Err(PlaneError::InvalidIndex { index, count: self.count })
        }
    }

    /// Scales a nonzero vector so that its first nonzero coordinate is 1.
    pub fn normalize(&self, v: Triple) -> Option<Triple> {
        let lead = v.iter().copied().find(|c| !c.is_zero())?;
        let inv = self.field.inv_nonzero(lead);
        Some(v.map(|c| self.field.mul(c, inv)))
    }

    #[inline]
    fn index_normalized(&self, v: Triple) -> u32 {
        let q = self.q;
        if v[0].is_zero() {
            if v[1].is_zero() {
                0
            } else {
                1 + v[2].code()
            }
        } else {
            1 + q + v[1].code() * q + v[2].code()
        }
    }

    /// Index of the projective class of a nonzero vector.
    #[inline]
    pub(crate) fn index_unchecked(&self, v: Triple) -> u32 {
        let lead = if !v[0].is_zero() {
            v[0]
        } else if !v[1].is_zero() {
            v[1]
        } else {
            v[2]
        };
        if lead == FieldElement::ONE {
            return self.index_normalized(v);
        }
        let inv = self.field.inv_nonzero(lead);
        self.index_normalized(v.map(|c| self.field.mul(c, inv)))
    }

    /// Index of the point (or line) with the given homogeneous coordinates.
    pub fn index_of(&self, v: Triple) -> Result<u32, PlaneError> {
        for c in v {
            if c.code() >= self.q {
                return Err(PlaneError::InvalidCoordinate { code: c.code(), q: self.q });
            }
        }
        if v.iter().all(|c| c.is_zero()) {
            return Err(PlaneError::ZeroVector);
        }
        Ok(self.index_unchecked(v))
    }

    pub fn index_of_codes(&self, codes: [u32; 3]) -> Result<u32, PlaneError> {
        self.index_of(codes.map(FieldElement))
    }

    /// Points of line `l` in ascending order.
    #[inline]
    pub fn points_on(&self, l: u32) -> &[u32] {
        &self.line_points[l as usize]
    }

    #[inline]
    pub fn line_set(&self, l: u32) -> &BitSet {
        &self.line_sets[l as usize]
    }

    /// Lines through point `p` in ascending order.
    #[inline]
    pub fn lines_through(&self, p: u32) -> &[u32] {
        &self.point_lines[p as usize]
    }

    #[inline]
    pub fn incident(&self, p: u32, l: u32) -> bool {
        self.line_sets[l as usize].contains(p)
    }

    /// Line through two distinct points.
    pub fn join(&self, a: u32, b: u32) -> Result<u32, PlaneError> {
        self.check_index(a)?;
        self.check_index(b)?;
        if a == b {
            return Err(PlaneError::Identical(a));
        }
        Ok(self.join_unchecked(a, b))
    }

    #[inline]
    pub(crate) fn join_unchecked(&self, a: u32, b: u32) -> u32 {
        match &self.join_table {
            Some(t) => t[a as usize * self.count as usize + b as usize],
            None => self.index_unchecked(self.cross(self.triples[a as usize], self.triples[b as usize])),
        }
    }

    /// Common point of two distinct lines; the dual of [`PlaneCtx::join`].
    pub fn meet(&self, l: u32, m: u32) -> Result<u32, PlaneError> {
        self.join(l, m)
    }

    fn cross(&self, u: Triple, v: Triple) -> Triple {
        let f = &self.field;
        [
            f.sub(f.mul(u[1], v[2]), f.mul(u[2], v[1])),
            f.sub(f.mul(u[2], v[0]), f.mul(u[0], v[2])),
            f.sub(f.mul(u[0], v[1]), f.mul(u[1], v[0])),
        ]
    }

    /// The line `z = 0`.
    #[inline]
    pub fn line_at_infinity(&self) -> u32 {
        0
    }

    /// The affine point `(x, y)`, that is `(x, y, 1)`.
    pub fn affine_point(&self, x: FieldElement, y: FieldElement) -> u32 {
        self.index_unchecked([x, y, FieldElement::ONE])
    }

    /// The infinite point `(m) = (1, m, 0)` or `(∞) = (0, 1, 0)`.
    pub fn direction_point(&self, slope: Slope) -> u32 {
        match slope {
            Slope::Finite(m) => self.index_normalized([FieldElement::ONE, m, FieldElement::ZERO]),
            Slope::Infinite => 1,
        }
    }

    /// Slope of an infinite point, or `None` for an affine point.
    pub fn slope_of_point(&self, p: u32) -> Option<Slope> {
        let [x, y, z] = self.triples[p as usize];
        if !z.is_zero() {
            return None;
        }
        if x.is_zero() {
            Some(Slope::Infinite)
        } else {
            Some(Slope::Finite(y))
        }
    }

    /// Cartesian coordinates of an affine point.
    pub fn affine_coords(&self, p: u32) -> Option<(FieldElement, FieldElement)> {
        let [x, y, z] = self.triples[p as usize];
        if z.is_zero() {
            return None;
        }
        let iz = self.field.inv_nonzero(z);
        Some((self.field.mul(x, iz), self.field.mul(y, iz)))
    }

    /// Direction of the line through two distinct affine points.
    pub fn direction_of(&self, a: u32, b: u32) -> Result<Slope, PlaneError> {
        let (xa, ya) = self.affine_coords(a).ok_or(PlaneError::NotAffine(a))?;
        let (xb, yb) = self.affine_coords(b).ok_or(PlaneError::NotAffine(b))?;
        if a == b {
            return Err(PlaneError::Identical(a));
        }
        let f = &self.field;
        let dx = f.sub(xa, xb);
        if dx.is_zero() {
            return Ok(Slope::Infinite);
        }
        Ok(Slope::Finite(f.mul(f.sub(ya, yb), f.inv_nonzero(dx))))
    }

    /// Image of point `p` under the projectivity induced by `m`.
    #[inline]
    pub fn image(&self, m: &Matrix3, p: u32) -> u32 {
        self.index_unchecked(m.apply(&self.field, self.triples[p as usize]))
    }

    /// Image of a set of points under an invertible matrix, in ascending order.
    pub fn apply_collineation(&self, m: &Matrix3, points: &[u32]) -> Result<Vec<u32>, PlaneError> {
        if m.det(&self.field).is_zero() {
            return Err(PlaneError::Singular);
        }
        let mut out = Vec::with_capacity(points.len());
        for &p in points {
            self.check_index(p)?;
            out.push(self.image(m, p));
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Image of a line: the line through the images of two of its points.
    pub fn line_image(&self, m: &Matrix3, l: u32) -> u32 {
        let pts = self.points_on(l);
        self.join_unchecked(self.image(m, pts[0]), self.image(m, pts[1]))
    }

    /// A collineation sending line `l` to the line at infinity and its point `w` to `(∞)`.
    pub fn normalizing_collineation(&self, l: u32, w: u32) -> Matrix3 {
        debug_assert!(self.incident(w, l));
        let x = *self.points_on(l).iter().find(|&&p| p != w).expect("a line has at least three points");
        let y = (0..self.count).find(|&p| !self.incident(p, l)).expect("some point is off the line");
        // The inverse sends e1 to x, e2 to w and e3 to y.
        let inv = Matrix3::from_columns(self.triples[x as usize], self.triples[w as usize], self.triples[y as usize]);
        inv.inverse(&self.field).expect("columns are independent")
    }
}
