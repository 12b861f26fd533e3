use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{common_point, concurrent, is_semioval_with, odd_count, profile, tangents_at, PointSet, SecantProfile};
use crate::constructions::{self, ConstructionError};
use crate::plane::{canonical_form, PlaneCtx};
use crate::report::{Clause, Verdict, Witness};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NucleusError {
    #[error("nuclei need q > 2")]
    OrderTooSmall,
    #[error("the line meets the set in {0} points, at least 2 needed")]
    TooFewPoints(u32),
    #[error("the set has {actual} points, expected q - 1 + a = {expected}")]
    SizeMismatch { expected: u32, actual: u32 },
    #[error("point {point} of the line has {count} tangents")]
    TangentCount { point: u32, count: u32 },
    /// Never occurs when the preconditions hold.
    #[error("internal failure: the tangents at the points of line {0} are not concurrent")]
    NotConcurrent(u32),
}

/// The common point of the tangents at the points of an `a`-secant `l` of a `(q−1+a)`-set.
pub fn nucleus(ctx: &PlaneCtx, set: &PointSet, l: u32) -> Result<u32, NucleusError> {
    nucleus_with(ctx, set, &profile(ctx, set), l)
}

fn nucleus_with(ctx: &PlaneCtx, set: &PointSet, prof: &SecantProfile, l: u32) -> Result<u32, NucleusError> {
    let q = ctx.q();
    if q <= 2 {
        return Err(NucleusError::OrderTooSmall);
    }
    let a = prof.per_line[l as usize];
    if a < 2 {
        return Err(NucleusError::TooFewPoints(a));
    }
    let actual = set.len() as u32;
    if actual != q - 1 + a {
        return Err(NucleusError::SizeMismatch { expected: q - 1 + a, actual });
    }
    let mut tangents = Vec::with_capacity(a as usize);
    for &p in ctx.points_on(l).iter().filter(|&&p| set.contains(p)) {
        let t = tangents_at(ctx, prof, p);
        if t.len() != 1 {
            return Err(NucleusError::TangentCount { point: p, count: t.len() as u32 });
        }
        tangents.push(t[0]);
    }
    common_point(ctx, &tangents).ok_or(NucleusError::NotConcurrent(l))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SemiovalReport {
    pub is_semioval: bool,
    /// `|S| − q + 1`, when positive.
    pub a: Option<u32>,
    /// `(line, nucleus)` for every `a`-secant with one tangent at each of its points.
    pub nuclei: Vec<(u32, u32)>,
    pub clauses: Vec<Clause>,
}

fn equivalent_to(ctx: &PlaneCtx, set: &PointSet, build: fn(&PlaneCtx) -> Result<PointSet, ConstructionError>) -> bool {
    build(ctx).is_ok_and(|fixture| {
        fixture.len() == set.len() && canonical_form(ctx, &fixture.to_vec()) == canonical_form(ctx, &set.to_vec())
    })
}

fn cnt_with(prof: &SecantProfile, ctx: &PlaneCtx, extra: u32, l: u32) -> u32 {
    prof.per_line[l as usize] + ctx.incident(extra, l) as u32
}

/// `|RM ∩ (S ∪ {N})|` for the points `M` of `l` in order.
fn spectrum(ctx: &PlaneCtx, prof: &SecantProfile, n: u32, r: u32, l: u32) -> Vec<u32> {
    ctx.points_on(l).iter().map(|&m| cnt_with(prof, ctx, n, ctx.join_unchecked(r, m))).collect()
}

fn rich_lines_through(ctx: &PlaneCtx, prof: &SecantProfile, r: u32) -> usize {
    ctx.lines_through(r).iter().filter(|&&l| prof.per_line[l as usize] >= 3).count()
}

struct Ctx<'a> {
    ctx: &'a PlaneCtx,
    set: &'a PointSet,
    prof: &'a SecantProfile,
    a: u32,
}

impl Ctx<'_> {
    fn off_line(&self, l: u32) -> Vec<u32> {
        self.set.iter().filter(|&r| !self.ctx.incident(r, l)).collect()
    }

    fn tangent(&self, r: u32) -> u32 {
        tangents_at(self.ctx, self.prof, r)[0]
    }

    /// The trichotomy for one `a`-secant of a semioval.
    fn nucleus_structure(&self, l: u32, n: u32) -> Result<(), Witness> {
        let (ctx, set, prof, a) = (self.ctx, self.set, self.prof, self.a);
        let fail = |detail: &str| Witness::new(detail).line(ctx, l).point(ctx, n);
        if a == 2 {
            return if prof.max_intersection() <= 2 { Ok(()) } else { Err(fail("a = 2 but the set is not an oval")) };
        }
        let off = self.off_line(l);
        let tangents: Vec<u32> = off.iter().map(|&r| self.tangent(r)).collect();
        let mut b = set.symmetric_difference(&PointSet::line(ctx, l));
        b.insert(n);
        if concurrent(ctx, &tangents) {
            let c = common_point(ctx, &tangents).unwrap_or_else(|| ctx.meet(tangents[0], l).unwrap());
            if !ctx.incident(c, l) {
                return Err(fail("the tangents off the line meet outside the line").point(ctx, c));
            }
            let mut b_prime = b.clone();
            b_prime.remove(c);
            let bp = profile(ctx, &b_prime);
            let size = b_prime.len() as u32;
            if bp.count(0) > 0 || size != ctx.q() + bp.per_line[l as usize] || size > 2 * ctx.q() {
                return Err(fail("B' is not a Rédei blocking set with the line as Rédei line").point(ctx, c));
            }
            return match constructions::altered_semioval(ctx, &b_prime, l, n, c) {
                Ok(s) if &s == set => Ok(()),
                Ok(_) => Err(fail("the altered construction gives a different set").point(ctx, c)),
                Err(e) => Err(fail(&format!("the altered construction rejects B': {e}")).point(ctx, c)),
            };
        }
        let bp = profile(ctx, &b);
        let size = b.len() as u32;
        let report = super::blocking_report(ctx, &b);
        if !report.is_minimal || size != ctx.q() + bp.per_line[l as usize] || size > 2 * ctx.q() {
            return Err(fail("B is not a minimal Rédei blocking set"));
        }
        if a % ctx.field().p() == 0 {
            return Err(fail("p divides a"));
        }
        if let Some(&r) = off.iter().find(|&&r| prof.per_line[ctx.join_unchecked(r, n) as usize] == 1) {
            return Err(fail("RN is a tangent").point(ctx, r));
        }
        let spectra: Vec<Vec<u32>> = off.iter().map(|&r| spectrum(ctx, prof, n, r, l)).collect();
        let line_pts = ctx.points_on(l);
        for i in 0..off.len() {
            for j in i + 1..off.len() {
                let (r1, r2) = (off[i], off[j]);
                let shared = line_pts.iter().any(|&t| {
                    cnt_with(prof, ctx, n, ctx.join_unchecked(r1, t)) >= 3 && cnt_with(prof, ctx, n, ctx.join_unchecked(r2, t)) >= 3
                });
                let meet_on_line = ctx.incident(ctx.meet(tangents[i], tangents[j]).unwrap(), l);
                if (shared || meet_on_line) && spectra[i] != spectra[j] {
                    return Err(fail("spectra toward the line differ").points(ctx, [r1, r2]));
                }
            }
        }
        Ok(())
    }

    /// Structure of the lines other than an `a`-secant, for `a > 2`.
    fn other_lines(&self, l: u32, n: u32) -> [Result<(), Witness>; 3] {
        let (ctx, set, prof, a) = (self.ctx, self.set, self.prof, self.a);
        let off = self.off_line(l);
        let not_tangent = match off.iter().find(|&&r| prof.per_line[ctx.join_unchecked(r, n) as usize] == 1) {
            Some(&r) => Err(Witness::new("RN is a tangent").points(ctx, [r, n]).line(ctx, l)),
            None => Ok(()),
        };
        let mut pencil = Ok(());
        let mut sizes = Ok(());
        for m in (0..ctx.num_lines()).filter(|&m| m != l) {
            let k = prof.per_line[m as usize];
            if k >= 3 && pencil.is_ok() {
                let tangents: Vec<u32> = ctx.points_on(m).iter().filter(|&&p| set.contains(p)).map(|&p| self.tangent(p)).collect();
                if !common_point(ctx, &tangents).is_some_and(|c| ctx.incident(c, l)) {
                    pencil = Err(Witness::new("tangents along a rich line have no common point on the a-secant").line(ctx, m).line(ctx, l));
                }
            }
            if 2 * k > a - 1 && sizes.is_ok() {
                let through = ctx.incident(n, m);
                if !((k == a && through) || (k == a.div_ceil(2) && !through)) {
                    sizes = Err(Witness::new(format!("a {k}-secant with a = {a}, through nucleus: {through}")).line(ctx, m).point(ctx, n));
                }
            }
        }
        [not_tangent, pencil, sizes]
    }

    fn two_secants(&self, l1: u32, n1: u32, l2: u32, n2: u32) -> Result<(), Witness> {
        let (ctx, set, prof, a) = (self.ctx, self.set, self.prof, self.a);
        let q = ctx.q();
        if !ctx.incident(n1, l2) || !ctx.incident(n2, l1) {
            return Err(Witness::new("a nucleus is off the other a-secant").lines_pair(ctx, l1, l2).points(ctx, [n1, n2]));
        }
        let v = ctx.meet(l1, l2).unwrap();
        let rest: Vec<u32> = set.iter().filter(|&r| !ctx.incident(r, l1) && !ctx.incident(r, l2)).collect();
        if let Some(&r) = rest.iter().find(|&&r| !ctx.incident(v, self.tangent(r))) {
            return Err(Witness::new("a tangent misses the meet of the a-secants").point(ctx, r).lines_pair(ctx, l1, l2));
        }
        let symmdiff = rest.is_empty() && !set.contains(v) && a == q - 1;
        let blokhuis = equivalent_to(ctx, set, constructions::blokhuis_semioval);
        let crowded = rest.iter().all(|&r| rich_lines_through(ctx, prof, r) >= 3) && {
            let t = (a as u64).saturating_sub(2).pow(2) * (a as u64).saturating_sub(3).pow(2);
            6 * (q as u64).saturating_sub(a as u64 + 1) <= t
        };
        if symmdiff || blokhuis || crowded {
            Ok(())
        } else {
            Err(Witness::new("none of the three outcomes holds").lines_pair(ctx, l1, l2))
        }
    }
}

impl Witness {
    fn lines_pair(self, ctx: &PlaneCtx, l1: u32, l2: u32) -> Witness {
        self.line(ctx, l1).line(ctx, l2)
    }
}

fn to_verdict(results: impl IntoIterator<Item = Result<(), Witness>>, empty_reason: &str) -> Verdict {
    let mut any = false;
    for r in results {
        any = true;
        if let Err(w) = r {
            return Verdict::fail(w);
        }
    }
    if any {
        Verdict::Pass
    } else {
        Verdict::vacuous(empty_reason)
    }
}

/// Theorem checks for sets of size `q − 1 + a`; the semioval statements are vacuous on other sets.
pub fn semioval_checks(ctx: &PlaneCtx, set: &PointSet) -> SemiovalReport {
    let q = ctx.q();
    let prof = profile(ctx, set);
    let is_semi = is_semioval_with(ctx, set, &prof);
    let size = set.len() as u32;
    let a = (size + 1).checked_sub(q).filter(|&a| a > 0);
    let p = ctx.field().p();
    let mut clauses = Vec::new();

    // a-secants with one tangent at each of their points, and their nuclei.
    let mut nuclei = Vec::new();
    let mut pencil_failures = Vec::new();
    if let Some(a) = a.filter(|&a| a >= 2 && q > 2) {
        for l in prof.lines_with(a) {
            match nucleus_with(ctx, set, &prof, l) {
                Ok(n) => nuclei.push((l, n)),
                Err(NucleusError::NotConcurrent(_)) => pencil_failures.push(l),
                Err(_) => {}
            }
        }
    }
    clauses.push(Clause::new(
        "tangents_in_pencil",
        if nuclei.is_empty() && pencil_failures.is_empty() {
            Verdict::vacuous("no a-secant with one tangent at each of its points")
        } else {
            Verdict::check(pencil_failures.is_empty(), || Witness::new("tangents not concurrent").line(ctx, pencil_failures[0]))
        },
    ));

    let a_val = a.unwrap_or(0);
    let pairs: Vec<((u32, u32), (u32, u32))> =
        nuclei.iter().enumerate().flat_map(|(i, &x)| nuclei[i + 1..].iter().map(move |&y| (x, y))).collect();
    let general = a_val >= 3;
    clauses.push(Clause::new(
        "nucleus_pairs",
        if !general {
            Verdict::vacuous("requires a ≥ 3")
        } else {
            to_verdict(
                pairs.iter().map(|&((l1, n1), (l2, n2))| {
                    let crossed = ctx.incident(n1, l2) && ctx.incident(n2, l1);
                    let common = n1 == n2
                        && a_val.is_multiple_of(p)
                        && set.iter().all(|r| {
                            let t = tangents_at(ctx, &prof, r);
                            t.len() != 1 || ctx.incident(n1, t[0])
                        });
                    if crossed || common {
                        Ok(())
                    } else {
                        Err(Witness::new("neither nucleus configuration holds").lines_pair(ctx, l1, l2).points(ctx, [n1, n2]))
                    }
                }),
                "fewer than two such a-secants",
            )
        },
    ));
    clauses.push(Clause::new(
        "third_secant_on_nuclei",
        if !general || (q.is_multiple_of(2) && a_val.is_multiple_of(2)) {
            Verdict::vacuous("requires a ≥ 3 and q or a odd")
        } else {
            let triples = nuclei.iter().flat_map(|&x| {
                pairs.iter().filter(move |&&(y, z)| x != y && x != z).map(move |&(y, z)| (x, y, z))
            });
            to_verdict(
                triples.map(|((l3, _), (_, n1), (_, n2))| {
                    if n1 != n2 && ctx.join(n1, n2).unwrap() == l3 {
                        Ok(())
                    } else {
                        Err(Witness::new("third a-secant is not the join of the other nuclei").line(ctx, l3).points(ctx, [n1, n2]))
                    }
                }),
                "fewer than three such a-secants",
            )
        },
    ));
    let tangent_free: Vec<u32> = set.iter().filter(|&r| tangents_at(ctx, &prof, r).is_empty()).collect();
    clauses.push(Clause::new(
        "tangent_free_points",
        if !general || nuclei.is_empty() || tangent_free.is_empty() {
            Verdict::vacuous("requires a ≥ 3, a nucleus and a point on no tangent")
        } else if !a_val.is_multiple_of(p) {
            Verdict::fail(Witness::new("p does not divide a").point(ctx, tangent_free[0]))
        } else {
            let bad = (a_val == 3)
                .then(|| {
                    nuclei.iter().find_map(|&(l, n)| {
                        tangent_free.iter().enumerate().find_map(|(i, &t1)| {
                            tangent_free[i + 1..]
                                .iter()
                                .find(|&&t2| !ctx.incident(n, ctx.join_unchecked(t1, t2)))
                                .map(|&t2| Witness::new("nucleus off the join of two tangent-free points").points(ctx, [t1, t2, n]).line(ctx, l))
                        })
                    })
                })
                .flatten();
            bad.map_or(Verdict::Pass, Verdict::fail)
        },
    ));

    let semi_only = |reason: &'static str, ok: bool, f: &dyn Fn() -> Verdict| {
        if !is_semi {
            Verdict::vacuous("not a semioval")
        } else if !ok {
            Verdict::vacuous(reason)
        } else {
            f()
        }
    };
    let c = Ctx { ctx, set, prof: &prof, a: a_val };

    clauses.push(Clause::new(
        "line_cap",
        semi_only("", true, &|| {
            let l = (0..ctx.num_lines()).find(|&l| prof.per_line[l as usize] > a_val);
            Verdict::check(l.is_none(), || Witness::new(format!("a line with more than a = {a_val} points")).line(ctx, l.unwrap()))
        }),
    ));
    clauses.push(Clause::new(
        "odd_secant_upper_bound",
        semi_only("", true, &|| {
            let delta = odd_count(&prof) as i64;
            let eps = size as i64 - q as i64 - 1;
            Verdict::check(3 * delta <= size as i64 * (3 + eps), || Witness::new(format!("{delta} odd-secants")))
        }),
    ));
    clauses.push(Clause::new(
        "rich_lines_per_point",
        semi_only("", true, &|| {
            let r = set.iter().find(|&r| rich_lines_through(ctx, &prof, r) as u32 + 2 > a_val);
            Verdict::check(r.is_none(), || Witness::new("more than a-2 lines with 3 or more points").point(ctx, r.unwrap()))
        }),
    ));
    clauses.push(Clause::new(
        "nucleus_structure",
        semi_only("no a-secant", !nuclei.is_empty(), &|| {
            to_verdict(nuclei.iter().map(|&(l, n)| c.nucleus_structure(l, n)), "no a-secant")
        }),
    ));
    let others: Vec<[Result<(), Witness>; 3]> =
        if is_semi && a_val > 2 { nuclei.iter().map(|&(l, n)| c.other_lines(l, n)).collect() } else { Vec::new() };
    for (i, id) in ["nucleus_joins_are_not_tangents", "rich_line_tangents_meet_on_secant", "large_secant_sizes"].into_iter().enumerate() {
        clauses.push(Clause::new(
            id,
            semi_only("requires a > 2 and an a-secant", a_val > 2 && !nuclei.is_empty(), &|| {
                to_verdict(others.iter().map(|r| r[i].clone()), "no a-secant")
            }),
        ));
    }
    clauses.push(Clause::new(
        "two_secants",
        semi_only("requires a > 2 and two a-secants", a_val > 2 && nuclei.len() >= 2, &|| {
            to_verdict(pairs.iter().map(|&((l1, n1), (l2, n2))| c.two_secants(l1, n1, l2, n2)), "fewer than two a-secants")
        }),
    ));
    let restricted = prof.global.keys().all(|&k| k <= 2 || k == a_val);
    clauses.push(Clause::new(
        "restricted_intersections",
        semi_only("requires a > 2 and intersections in {0,1,2,a}", a_val > 2 && restricted, &|| {
            let ok = equivalent_to(ctx, set, constructions::symmdiff_semioval) || equivalent_to(ctx, set, constructions::blokhuis_semioval);
            Verdict::check(ok, || Witness::new("neither the symmetric-difference nor the Blokhuis semioval"))
        }),
    ));
    clauses.push(Clause::new(
        "size_q_plus_2",
        semi_only("the set does not have q+2 points", size == q + 2, &|| {
            let ok = (q == 4 && equivalent_to(ctx, set, constructions::symmdiff_semioval))
                || (q == 7 && equivalent_to(ctx, set, constructions::blokhuis_semioval));
            Verdict::check(ok, || Witness::new(format!("a semioval of size q+2 in PG(2,{q})")))
        }),
    ));
    clauses.push(Clause::new(
        "size_q_plus_3",
        semi_only("the set does not have q+3 points", size == q + 3, &|| {
            let ok = (q == 5 && equivalent_to(ctx, set, constructions::symmdiff_semioval))
                || (q == 9 && equivalent_to(ctx, set, constructions::blokhuis_semioval))
                || (p == 3 && prof.max_intersection() <= 3);
            Verdict::check(ok, || Witness::new(format!("a semioval of size q+3 in PG(2,{q})")))
        }),
    ));

    SemiovalReport { is_semioval: is_semi, a, nuclei, clauses }
}
