use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{common_point, concurrent, is_dual_arc, odd_count, point_records, profile, tangents_at, type_02t_with, PointSet, PointTypeRecord};
use crate::plane::PlaneCtx;
use crate::report::{rational_string, Clause, Rational, Verdict, Witness};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WeightReport {
    /// Number of odd-secants.
    pub delta: u32,
    #[serde(with = "rational_string")]
    pub total_weight: Rational,
    pub records: Vec<PointTypeRecord>,
    pub clauses: Vec<Clause>,
}

fn tallies(entries: &[(u32, i64)]) -> BTreeMap<u32, u32> {
    entries.iter().filter(|(_, t)| *t > 0).map(|&(i, t)| (i, t as u32)).collect()
}

/// The six smallest weights of a point of a `(q+2)`-set and their types.
/// Every row uses `q+1` lines whose sizes minus one add up to `q+1`.
pub fn smallest_weight_rows(q: u32) -> Vec<(Rational, BTreeMap<u32, u32>)> {
    let q = q as i64;
    let r = Rational::new;
    vec![
        (r(0, 1), tallies(&[(2, q + 1)])),
        (r(4, 3), tallies(&[(1, 1), (2, q - 1), (3, 1)])),
        (r(2, 1), tallies(&[(1, 2), (2, q - 2), (4, 1)])),
        (r(8, 3), tallies(&[(1, 2), (2, q - 3), (3, 2)])),
        (r(16, 5), tallies(&[(1, 3), (2, q - 3), (5, 1)])),
        (r(10, 3), tallies(&[(1, 3), (2, q - 4), (3, 1), (4, 1)])),
    ]
}

fn hypothesis(ok: bool, reason: &str, verdict: impl FnOnce() -> Verdict) -> Verdict {
    if ok {
        verdict()
    } else {
        Verdict::vacuous(reason)
    }
}

pub fn weight_theorem_checks(ctx: &PlaneCtx, set: &PointSet) -> WeightReport {
    let q = ctx.q();
    let size = set.len() as u32;
    let odd_q = q % 2 == 1;
    let prof = profile(ctx, set);
    let records = point_records(ctx, set, &prof);
    let delta = odd_count(&prof);
    let total_weight = records.iter().map(|r| r.weight).fold(Rational::from_integer(0), |a, b| a + b);
    let mut clauses = Vec::new();

    clauses.push(Clause::new(
        "total_weight",
        Verdict::check(total_weight == Rational::from_integer(delta as i64), || {
            Witness::new(format!("{delta} odd-secants, total weight {total_weight}"))
        }),
    ));

    let q_plus_2 = size == q + 2;
    clauses.push(Clause::new(
        "smallest_weight_types",
        hypothesis(q_plus_2, "the set does not have q+2 points", || {
            let rows = smallest_weight_rows(q);
            let bad = records.iter().find(|rec| {
                let by_weight = rows.iter().find(|(w, _)| *w == rec.weight);
                let by_type = rows.iter().find(|(_, t)| *t == rec.tallies);
                let small = rec.weight <= Rational::new(10, 3);
                (small && by_weight.map(|r| &r.1) != Some(&rec.tallies)) || by_type.is_some_and(|r| r.0 != rec.weight)
            });
            Verdict::check(bad.is_none(), || {
                let rec = bad.unwrap();
                Witness::new(format!("type {} has weight {}", rec.type_string, rec.weight)).point(ctx, rec.point)
            })
        }),
    ));
    clauses.push(Clause::new(
        "weight_lower_bounds",
        hypothesis(q_plus_2, "the set does not have q+2 points", || {
            let bad = records.iter().find(|rec| {
                let k = rec.tallies.keys().next_back().copied().unwrap_or(0) as i64;
                let trisecants = rec.tally(3) as i64;
                rec.weight < Rational::from_integer(k - 2) || rec.weight < Rational::new(4 * trisecants, 3)
            });
            Verdict::check(bad.is_none(), || {
                let rec = bad.unwrap();
                Witness::new(format!("type {} has weight {}", rec.type_string, rec.weight)).point(ctx, rec.point)
            })
        }),
    ));

    let k = size as i64 - q as i64;
    clauses.push(Clause::new(
        "tangent_dual_arc",
        hypothesis(k == 1 && odd_q, "requires |S| = q+1 and q odd", || {
            let pts: Vec<u32> = records.iter().filter(|r| r.tallies == tallies(&[(1, 1), (2, q as i64)])).map(|r| r.point).collect();
            let lines: Vec<u32> = pts.iter().map(|&p| tangents_at(ctx, &prof, p)[0]).collect();
            Verdict::check(is_dual_arc(ctx, &lines), || Witness::new("three tangents are concurrent").points(ctx, pts.iter().copied()))
        }),
    ));
    clauses.push(Clause::new(
        "weight_zero_points",
        hypothesis(k == 2 && odd_q, "requires |S| = q+2 and q odd", || {
            let zero: Vec<u32> = records.iter().filter(|r| r.weight == Rational::from_integer(0)).map(|r| r.point).collect();
            Verdict::check(zero.len() <= 2, || Witness::new(format!("{} points of weight 0", zero.len())).points(ctx, zero.iter().copied()))
        }),
    ));

    let special = |rec: &PointTypeRecord| k >= 3 && rec.is_type_2q_k1(q, k as u32);
    let special_lines: Vec<u32> = {
        let mut ls: Vec<u32> = records
            .iter()
            .filter(|r| special(r))
            .flat_map(|r| ctx.lines_through(r.point).iter().copied().filter(|&l| prof.per_line[l as usize] as i64 == k))
            .collect();
        ls.sort_unstable();
        ls.dedup();
        ls
    };
    clauses.push(Clause::new(
        "rich_secant_dual_arc",
        hypothesis(k >= 3 && odd_q, "requires |S| ≥ q+3 and q odd", || {
            Verdict::check(is_dual_arc(ctx, &special_lines), || {
                let mut w = Witness::new("three such k-secants are concurrent");
                for &l in &special_lines {
                    w = w.line(ctx, l);
                }
                w
            })
        }),
    ));
    let all_special = |l: u32| ctx.points_on(l).iter().filter(|&&p| set.contains(p)).all(|&p| special(&records[rank(set, p)]));
    let anchor = special_lines.iter().copied().find(|&l| all_special(l));
    clauses.push(Clause::new(
        "concurrent_rich_secants",
        hypothesis(anchor.is_some(), "no k-secant consists of points of type (2_q,k_1)", || {
            Verdict::check(concurrent(ctx, &special_lines), || {
                let mut w = Witness::new("k-secants through points of type (2_q,k_1) are not concurrent");
                for &l in &special_lines {
                    w = w.line(ctx, l);
                }
                w
            })
        }),
    ));

    let t = type_02t_with(ctx, set, &prof);
    clauses.push(Clause::new(
        "arc_secants_concurrent",
        hypothesis(t.is_some_and(|t| t > 2), "not a (q+t,t)-arc of type [0,2,t] with t > 2", || {
            let lines = prof.lines_with(t.unwrap());
            Verdict::check(common_point(ctx, &lines).is_some(), || Witness::new("the t-secants do not share a point"))
        }),
    ));

    clauses.push(Clause::new(
        "odd_secant_lower_bound",
        hypothesis(q_plus_2 && odd_q && q > 3, "requires |S| = q+2 and q > 3 odd", || {
            Verdict::check(5 * delta >= 8 * q, || Witness::new(format!("{delta} odd-secants, fewer than 8q/5")))
        }),
    ));
    clauses.push(Clause::new(
        "odd_secant_small_q",
        hypothesis(q_plus_2 && odd_q && q <= 13, "requires |S| = q+2 and q ≤ 13 odd", || {
            Verdict::check(delta + 2 >= 2 * q, || Witness::new(format!("{delta} odd-secants, fewer than 2q-2")))
        }),
    ));
    clauses.push(Clause::new(
        "odd_secant_large_q",
        hypothesis(q_plus_2 && odd_q && q >= 7, "requires |S| = q+2 and q ≥ 7 odd", || {
            Verdict::check(2 * delta >= 3 * (q + 1), || Witness::new(format!("{delta} odd-secants, fewer than 3(q+1)/2")))
        }),
    ));

    WeightReport { delta, total_weight, records, clauses }
}

/// Position of a member in ascending member order.
fn rank(set: &PointSet, p: u32) -> usize {
    set.iter().take_while(|&x| x < p).count()
}
