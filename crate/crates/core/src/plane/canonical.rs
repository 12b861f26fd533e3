//! Exact canonical forms of (colored) point sets under PGL(3,q).
//!
//! A set containing four points in general position is mapped, for every
//! candidate ordered frame inside it, onto the standard frame; the smallest
//! resulting image is the canonical form. Candidate frames are the ordered
//! 4-arcs whose sequence of incidence invariants is lexicographically smallest,
//! so the candidate set moves along with the set under any collineation.
//! Sets without a 4-arc are handled separately: for at least four points they
//! lie on a line plus at most one further point.

use serde::{Deserialize, Serialize};

use super::{Matrix3, PlaneCtx};
use crate::gf::FieldElement;

/// Sorted codes `color · (q²+q+1) + index` of a canonical representative.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalForm(Vec<u32>);

impl CanonicalForm {
    pub fn codes(&self) -> &[u32] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// The representative as `(point, color)` pairs.
    pub fn colored_points(&self, ctx: &PlaneCtx) -> Vec<(u32, u32)> {
        let n = ctx.num_points();
        self.0.iter().map(|&c| (c % n, c / n)).collect()
    }

    /// Points of the representative having the given color, ascending.
    pub fn points_with_color(&self, ctx: &PlaneCtx, color: u32) -> Vec<u32> {
        let n = ctx.num_points();
        let mut pts: Vec<u32> = self.0.iter().filter(|&&c| c / n == color).map(|&c| c % n).collect();
        pts.sort_unstable();
        pts
    }
}

pub fn canonical_form(ctx: &PlaneCtx, points: &[u32]) -> CanonicalForm {
    let items: Vec<(u32, u32)> = points.iter().map(|&p| (p, 0)).collect();
    canonical_form_colored(ctx, &items)
}

/// Canonical form of a set of distinct points, each carrying a color that
/// collineations must preserve.
pub fn canonical_form_colored(ctx: &PlaneCtx, items: &[(u32, u32)]) -> CanonicalForm {
    let mut pts: Vec<u32> = items.iter().map(|&(p, _)| p).collect();
    pts.sort_unstable();
    pts.dedup();
    assert_eq!(pts.len(), items.len(), "canonical_form needs distinct points");
    match items.len() {
        0 => CanonicalForm::default(),
        1..=3 => small_form(ctx, items),
        _ => Canonizer::new(ctx, items).run(),
    }
}

fn encode(n: u32, pairs: impl Iterator<Item = (u32, u32)>) -> Vec<u32> {
    let mut codes: Vec<u32> = pairs.map(|(p, c)| c * n + p).collect();
    codes.sort_unstable();
    codes
}

/// At most three points: PGL(3,q) is transitive on ordered pairs, on ordered
/// collinear triples and on ordered triangles, so only the colors matter.
fn small_form(ctx: &PlaneCtx, items: &[(u32, u32)]) -> CanonicalForm {
    let n = ctx.num_points();
    let collinear = items.len() == 3 && ctx.incident(items[2].0, ctx.join_unchecked(items[0].0, items[1].0));
    let third = if collinear { ctx.index_of_codes([0, 1, 1]) } else { ctx.index_of_codes([1, 0, 0]) };
    let targets = [0, 1, third.expect("valid coordinates")];
    let perms: &[[usize; 3]] = &[[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let s = items.len();
    let best = perms
        .iter()
        .filter(|perm| perm[..s].iter().all(|&i| i < s))
        .map(|perm| encode(n, (0..s).map(|j| (targets[j], items[perm[j]].1))))
        .min()
        .expect("some permutation applies");
    CanonicalForm(best)
}

fn mix(h: u64, v: u64) -> u64 {
    let mut x = h ^ v.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

fn mix_all(seed: u64, values: &mut [u64]) -> u64 {
    values.sort_unstable();
    values.iter().fold(seed, |h, &v| mix(h, v))
}

struct Canonizer<'a> {
    ctx: &'a PlaneCtx,
    pts: Vec<u32>,
    colors: Vec<u32>,
    /// Invariant of each point after one round of refinement.
    point_inv: Vec<u64>,
    /// Invariant of each line meeting the set in at least two points, zero otherwise.
    line_inv: Vec<u64>,
    line_cnt: Vec<u32>,
}

impl<'a> Canonizer<'a> {
    fn new(ctx: &'a PlaneCtx, items: &[(u32, u32)]) -> Canonizer<'a> {
        let pts: Vec<u32> = items.iter().map(|&(p, _)| p).collect();
        let colors: Vec<u32> = items.iter().map(|&(_, c)| c).collect();
        let mut line_cnt = vec![0u32; ctx.num_lines() as usize];
        for &p in &pts {
            for &l in ctx.lines_through(p) {
                line_cnt[l as usize] += 1;
            }
        }
        let inv0: Vec<u64> = pts
            .iter()
            .zip(&colors)
            .map(|(&p, &c)| {
                let mut counts: Vec<u64> = ctx
                    .lines_through(p)
                    .iter()
                    .map(|&l| line_cnt[l as usize] as u64)
                    .filter(|&k| k >= 2)
                    .collect();
                mix_all(mix(1, c as u64), &mut counts)
            })
            .collect();
        let mut line_inv = vec![0u64; line_cnt.len()];
        let mut member = vec![usize::MAX; ctx.num_points() as usize];
        for (i, &p) in pts.iter().enumerate() {
            member[p as usize] = i;
        }
        for (l, &k) in line_cnt.iter().enumerate() {
            if k >= 2 {
                let mut on: Vec<u64> = ctx
                    .points_on(l as u32)
                    .iter()
                    .filter(|&&p| member[p as usize] != usize::MAX).map(|&p| inv0[member[p as usize]])
                    .collect();
                line_inv[l] = mix_all(mix(2, k as u64), &mut on);
            }
        }
        let point_inv = pts
            .iter()
            .zip(&inv0)
            .map(|(&p, &h)| {
                let mut through: Vec<u64> =
                    ctx.lines_through(p).iter().map(|&l| line_inv[l as usize]).filter(|&v| v != 0).collect();
                mix_all(h, &mut through)
            })
            .collect();
        Canonizer { ctx, pts, colors, point_inv, line_inv, line_cnt }
    }

    fn line(&self, i: usize, j: usize) -> u32 {
        self.ctx.join_unchecked(self.pts[i], self.pts[j])
    }

    fn on_line(&self, x: usize, i: usize, j: usize) -> bool {
        self.ctx.incident(self.pts[x], self.line(i, j))
    }

    fn admissible(&self, partial: &[usize], x: usize) -> bool {
        if partial.contains(&x) {
            return false;
        }
        for a in 0..partial.len() {
            for b in a + 1..partial.len() {
                if self.on_line(x, partial[a], partial[b]) {
                    return false;
                }
            }
        }
        true
    }

    fn key(&self, partial: &[usize], x: usize) -> u64 {
        partial.iter().fold(self.point_inv[x], |h, &c| mix(h, self.line_inv[self.line(c, x) as usize]))
    }

    /// All ordered 4-arcs whose invariant sequence is lexicographically minimal.
    fn candidate_frames(&self, level: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
        if level.first().is_some_and(|t| t.len() == 4) {
            return level;
        }
        let mut ext: Vec<(u64, Vec<usize>)> = Vec::new();
        for partial in &level {
            for x in 0..self.pts.len() {
                if self.admissible(partial, x) {
                    let mut next = partial.clone();
                    next.push(x);
                    ext.push((self.key(partial, x), next));
                }
            }
        }
        ext.sort_by_key(|(k, _)| *k);
        let mut start = 0;
        while start < ext.len() {
            let key = ext[start].0;
            let end = start + ext[start..].iter().take_while(|(k, _)| *k == key).count();
            let group: Vec<Vec<usize>> = ext[start..end].iter().map(|(_, t)| t.clone()).collect();
            let found = self.candidate_frames(group);
            if !found.is_empty() {
                return found;
            }
            start = end;
        }
        Vec::new()
    }

    fn image(&self, m: &Matrix3) -> Vec<u32> {
        let n = self.ctx.num_points();
        encode(n, self.pts.iter().zip(&self.colors).map(|(&p, &c)| (self.ctx.image(m, p), c)))
    }

    fn run(self) -> CanonicalForm {
        let frames = self.candidate_frames(vec![Vec::new()]);
        if frames.is_empty() {
            return self.line_plus_point();
        }
        let f = self.ctx.field();
        let best = frames
            .iter()
            .map(|t| {
                let frame = [0, 1, 2, 3].map(|i| self.ctx.triple(self.pts[t[i]]));
                let m = Matrix3::frame_to_standard(f, frame).expect("candidate frames are in general position");
                self.image(&m)
            })
            .min()
            .expect("nonempty candidate list");
        CanonicalForm(best)
    }

    /// At least four points without a 4-arc: all but at most one lie on a line.
    /// The line goes to `x = 0`, the extra point to `(1,0,0)` and an ordered
    /// triple on the line to `(0,0,1), (0,1,0), (0,1,1)`; homologies with that
    /// axis and center fix everything else, so the image is well defined.
    fn line_plus_point(&self) -> CanonicalForm {
        let ctx = self.ctx;
        let f = ctx.field();
        let s = self.pts.len() as u32;
        let (axis, cnt) = self
            .line_cnt
            .iter()
            .enumerate()
            .max_by_key(|&(l, &k)| (k, std::cmp::Reverse(l)))
            .map(|(l, &k)| (l as u32, k))
            .expect("lines exist");
        assert!(cnt + 1 >= s, "a set without a 4-arc lies on a line plus one point");
        let on: Vec<usize> = (0..self.pts.len()).filter(|&i| ctx.incident(self.pts[i], axis)).collect();
        let center = (0..self.pts.len())
            .find(|&i| !ctx.incident(self.pts[i], axis))
            .map(|i| self.pts[i])
            .unwrap_or_else(|| (0..ctx.num_points()).find(|&p| !ctx.incident(p, axis)).expect("point off the axis"));
        let center_v = ctx.triple(center);
        let mut best: Option<Vec<u32>> = None;
        for &a in &on {
            for &b in &on {
                for &c in &on {
                    if a == b || b == c || a == c {
                        continue;
                    }
                    let (va, vb, vc) = (ctx.triple(self.pts[a]), ctx.triple(self.pts[b]), ctx.triple(self.pts[c]));
                    let basis = Matrix3::from_columns(center_v, vb, va);
                    let lambda = basis.solve(f, vc).expect("independent columns");
                    debug_assert!(lambda[0].is_zero());
                    let scale = |v: [FieldElement; 3], s: FieldElement| v.map(|x| f.mul(x, s));
                    let back = Matrix3::from_columns(center_v, scale(vb, lambda[1]), scale(va, lambda[2]));
                    let m = back.inverse(f).expect("independent columns");
                    let img = self.image(&m);
                    if best.as_ref().is_none_or(|b| img < *b) {
                        best = Some(img);
                    }
                }
            }
        }
        CanonicalForm(best.expect("at least three collinear points"))
    }
}
