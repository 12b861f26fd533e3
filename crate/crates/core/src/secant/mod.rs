//! Line-intersection statistics of point sets and the recognizers built on them.

mod blocking;
mod semioval;
mod weights;

pub use blocking::{blocking_report, BlockingReport};
pub use semioval::{nucleus, semioval_checks, NucleusError, SemiovalReport};
pub use weights::{smallest_weight_rows, weight_theorem_checks, WeightReport};

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::BitSet;
use crate::plane::{PlaneCtx, PlaneError};
use crate::report::{rational_string, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SecantError {
    #[error("point {0} is not in the set")]
    NotMember(u32),
    #[error(transparent)]
    Plane(#[from] PlaneError),
}

/// A subset of the points of a fixed plane.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PointSet {
    members: BitSet,
}

impl PointSet {
    pub fn empty(ctx: &PlaneCtx) -> PointSet {
        PointSet { members: BitSet::new(ctx.num_points() as usize) }
    }

    pub fn from_points<I: IntoIterator<Item = u32>>(ctx: &PlaneCtx, points: I) -> Result<PointSet, PlaneError> {
        let mut set = PointSet::empty(ctx);
        for p in points {
            set.members.insert(ctx.check_index(p)?);
        }
        Ok(set)
    }

    pub fn from_bitset(members: BitSet) -> PointSet {
        PointSet { members }
    }

    pub fn members(&self) -> &BitSet {
        &self.members
    }

    pub fn contains(&self, p: u32) -> bool {
        self.members.contains(p)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn insert(&mut self, p: u32) -> bool {
        self.members.insert(p)
    }

    pub fn remove(&mut self, p: u32) -> bool {
        self.members.remove(p)
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.members.iter()
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.members.to_vec()
    }

    /// Number of points of the set on line `l`.
    #[inline]
    pub fn line_count(&self, ctx: &PlaneCtx, l: u32) -> u32 {
        self.members.intersection_count(ctx.line_set(l)) as u32
    }

    pub fn symmetric_difference(&self, other: &PointSet) -> PointSet {
        let mut members = self.members.clone();
        members.symmetric_difference_with(&other.members);
        PointSet { members }
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        let mut members = self.members.clone();
        members.union_with(&other.members);
        PointSet { members }
    }

    pub fn difference(&self, other: &PointSet) -> PointSet {
        let mut members = self.members.clone();
        members.difference_with(&other.members);
        PointSet { members }
    }

    /// The points of line `l` as a set.
    pub fn line(ctx: &PlaneCtx, l: u32) -> PointSet {
        PointSet { members: ctx.line_set(l).clone() }
    }

    pub fn image(&self, ctx: &PlaneCtx, m: &crate::plane::Matrix3) -> PointSet {
        PointSet::from_points(ctx, self.iter().map(|p| ctx.image(m, p))).expect("images are valid indices")
    }
}

/// Number of k-secants for every k, and the intersection size of every line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SecantProfile {
    pub global: BTreeMap<u32, u32>,
    pub per_line: Vec<u32>,
}

impl SecantProfile {
    pub fn count(&self, k: u32) -> u32 {
        self.global.get(&k).copied().unwrap_or(0)
    }

    /// Lines meeting the set in exactly `k` points, ascending.
    pub fn lines_with(&self, k: u32) -> Vec<u32> {
        (0..self.per_line.len() as u32).filter(|&l| self.per_line[l as usize] == k).collect()
    }

    pub fn max_intersection(&self) -> u32 {
        self.global.keys().next_back().copied().unwrap_or(0)
    }
}

pub fn profile(ctx: &PlaneCtx, set: &PointSet) -> SecantProfile {
    let per_line: Vec<u32> = (0..ctx.num_lines()).map(|l| set.line_count(ctx, l)).collect();
    let mut global = BTreeMap::new();
    for &k in &per_line {
        *global.entry(k).or_insert(0) += 1;
    }
    SecantProfile { global, per_line }
}

/// The tallies `t_i(P)`, the weight and the type of one point of the set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PointTypeRecord {
    pub point: u32,
    /// `i -> t_i(P)` for the nonzero tallies.
    pub tallies: BTreeMap<u32, u32>,
    #[serde(with = "rational_string")]
    pub weight: Rational,
    pub type_string: String,
}

impl PointTypeRecord {
    /// Type written as `(a_{t_a},b_{t_b},...)`.
    pub fn format_type(tallies: &BTreeMap<u32, u32>) -> String {
        let mut s = String::from("(");
        for (n, (i, t)) in tallies.iter().enumerate() {
            if n > 0 {
                s.push(',');
            }
            write!(s, "{i}_{t}").unwrap();
        }
        s.push(')');
        s
    }

    /// The point has type `(2_q, k_1)`.
    pub fn is_type_2q_k1(&self, q: u32, k: u32) -> bool {
        k != 2 && self.tallies.len() == 2 && self.tallies.get(&2) == Some(&q) && self.tallies.get(&k) == Some(&1)
    }

    pub fn tally(&self, i: u32) -> u32 {
        self.tallies.get(&i).copied().unwrap_or(0)
    }
}

pub(crate) fn weight_of(tallies: &BTreeMap<u32, u32>) -> Rational {
    tallies
        .iter()
        .filter(|(i, _)| *i % 2 == 1)
        .map(|(&i, &t)| Rational::new(t as i64, i as i64))
        .fold(Rational::from_integer(0), |a, b| a + b)
}

pub(crate) fn point_record(ctx: &PlaneCtx, prof: &SecantProfile, p: u32) -> PointTypeRecord {
    let mut tallies = BTreeMap::new();
    for &l in ctx.lines_through(p) {
        *tallies.entry(prof.per_line[l as usize]).or_insert(0) += 1;
    }
    let weight = weight_of(&tallies);
    let type_string = PointTypeRecord::format_type(&tallies);
    PointTypeRecord { point: p, tallies, weight, type_string }
}

pub fn point_profile(ctx: &PlaneCtx, set: &PointSet, p: u32) -> Result<PointTypeRecord, SecantError> {
    ctx.check_index(p)?;
    if !set.contains(p) {
        return Err(SecantError::NotMember(p));
    }
    Ok(point_record(ctx, &profile(ctx, set), p))
}

/// Records for all points of the set, ascending by index.
pub fn point_records(ctx: &PlaneCtx, set: &PointSet, prof: &SecantProfile) -> Vec<PointTypeRecord> {
    set.iter().map(|p| point_record(ctx, prof, p)).collect()
}

pub fn odd_secant_count(ctx: &PlaneCtx, set: &PointSet) -> u32 {
    let _ = ctx;
    profile(ctx, set).per_line.iter().filter(|&&k| k % 2 == 1).count() as u32
}

pub(crate) fn odd_count(prof: &SecantProfile) -> u32 {
    prof.per_line.iter().filter(|&&k| k % 2 == 1).count() as u32
}

/// Tangent lines at a point, ascending.
pub fn tangents_at(ctx: &PlaneCtx, prof: &SecantProfile, p: u32) -> Vec<u32> {
    ctx.lines_through(p).iter().copied().filter(|&l| prof.per_line[l as usize] == 1).collect()
}

/// Exactly one tangent at each point; the empty set is not a semioval.
pub fn is_semioval(ctx: &PlaneCtx, set: &PointSet) -> bool {
    let prof = profile(ctx, set);
    is_semioval_with(ctx, set, &prof)
}

pub(crate) fn is_semioval_with(ctx: &PlaneCtx, set: &PointSet, prof: &SecantProfile) -> bool {
    !set.is_empty() && set.iter().all(|p| tangents_at(ctx, prof, p).len() == 1)
}

/// No line meets the set in more than `n` points.
pub fn is_kn_arc(ctx: &PlaneCtx, set: &PointSet, n: u32) -> bool {
    profile(ctx, set).per_line.iter().all(|&k| k <= n)
}

/// The `t` of a `(q+t,t)`-arc of type `[0,2,t]`: every line meets the set in
/// 0, 2 or `t` points, some line in `t ∉ {0,2}`, and the set has `q+t` points.
pub fn type_02t(ctx: &PlaneCtx, set: &PointSet) -> Option<u32> {
    type_02t_with(ctx, set, &profile(ctx, set))
}

pub(crate) fn type_02t_with(ctx: &PlaneCtx, set: &PointSet, prof: &SecantProfile) -> Option<u32> {
    let others: Vec<u32> = prof.global.keys().copied().filter(|&k| k != 0 && k != 2).collect();
    match others[..] {
        [t] if set.len() as u32 == ctx.q() + t => Some(t),
        _ => None,
    }
}

/// No three of the lines pass through a common point.
pub fn is_dual_arc(ctx: &PlaneCtx, lines: &[u32]) -> bool {
    let dual = BitSet::from_indices(ctx.num_points() as usize, lines.iter().copied());
    (0..ctx.num_points()).all(|p| dual.intersection_count(ctx.line_set(p)) <= 2)
}

/// A point on all of the given lines, if any; `None` for fewer than two lines.
pub fn common_point(ctx: &PlaneCtx, lines: &[u32]) -> Option<u32> {
    let mut distinct = lines.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 2 {
        return None;
    }
    let p = ctx.meet(distinct[0], distinct[1]).ok()?;
    distinct.iter().all(|&l| ctx.incident(p, l)).then_some(p)
}

/// Lines are concurrent (trivially so when there are at most two).
pub fn concurrent(ctx: &PlaneCtx, lines: &[u32]) -> bool {
    let mut distinct = lines.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    distinct.len() <= 2 || common_point(ctx, &distinct).is_some()
}
