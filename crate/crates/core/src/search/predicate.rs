//! Recognizers evaluated on per-line counts, and their hereditary feasibility bounds.

use super::Predicate;
use crate::plane::PlaneCtx;

pub(crate) fn counts_of(ctx: &PlaneCtx, members: &[u32]) -> Vec<u32> {
    let mut counts = vec![0u32; ctx.num_lines() as usize];
    for &p in members {
        add_point(ctx, &mut counts, p);
    }
    counts
}

pub(crate) fn add_point(ctx: &PlaneCtx, counts: &mut [u32], p: u32) {
    for &l in ctx.lines_through(p) {
        counts[l as usize] += 1;
    }
}

pub(crate) fn remove_point(ctx: &PlaneCtx, counts: &mut [u32], p: u32) {
    for &l in ctx.lines_through(p) {
        counts[l as usize] -= 1;
    }
}

pub(crate) fn odd_secants(counts: &[u32]) -> u32 {
    counts.iter().filter(|&&c| c % 2 == 1).count() as u32
}

/// A node of the search: the current members, their line counts and the
/// marked point when the predicate uses one.
pub(crate) struct Node<'a> {
    pub members: &'a [u32],
    pub counts: &'a [u32],
    pub marked: Option<u32>,
}

/// Whether some superset of size `n` can still satisfy the predicate.
/// Every bound holds for all subsets of a satisfying set.
pub(crate) fn feasible(ctx: &PlaneCtx, pred: &Predicate, n: u32, node: &Node) -> bool {
    let q = ctx.q() as i64;
    let remaining = n as i64 - node.members.len() as i64;
    match *pred {
        Predicate::Any => true,
        Predicate::Semioval => semioval_feasible(ctx, n as i64 - q + 1, remaining, node),
        Predicate::BlokhuisPattern { a } => semioval_feasible(ctx, a as i64, remaining, node),
        Predicate::Type02t { t } => {
            let cap = t.max(2);
            if node.counts.iter().any(|&c| c > cap) {
                return false;
            }
            // Each tangent of the partial set needs a further point, and distinct
            // lines through a point need distinct points.
            t == 1
                || node.members.iter().all(|&p| {
                    let ones = ctx.lines_through(p).iter().filter(|&&l| node.counts[l as usize] == 1).count() as i64;
                    ones <= remaining
                })
        }
        Predicate::PeterDual { k, m } => peter_feasible(ctx, k, m, remaining, node),
    }
}

/// A point of a semioval of size `q−1+a` has one tangent and its other lines carry `a−2` surplus points.
fn semioval_feasible(ctx: &PlaneCtx, a: i64, remaining: i64, node: &Node) -> bool {
    if node.members.is_empty() {
        return true;
    }
    if a < 2 {
        return false;
    }
    node.members.iter().all(|&p| {
        let (mut surplus, mut ones) = (0i64, 0i64);
        for &l in ctx.lines_through(p) {
            match node.counts[l as usize] {
                1 => ones += 1,
                c if c > 2 => surplus += c as i64 - 2,
                _ => {}
            }
        }
        surplus <= a - 2 && ones >= 1 && ones - 1 <= remaining
    })
}

/// In a configuration every point on one of the `m` k-secants through O has
/// type (2_q, k_1): its lines avoiding O are bisecants. A point on a line
/// avoiding O with three or more points is therefore spoiled for good.
fn peter_feasible(ctx: &PlaneCtx, k: u32, m: u32, remaining: i64, node: &Node) -> bool {
    let Some(o) = node.marked else { return false };
    let spoiled = |p: u32| ctx.lines_through(p).iter().any(|&l| node.counts[l as usize] >= 3 && !ctx.incident(o, l));
    let mut deficits: Vec<i64> = ctx
        .lines_through(o)
        .iter()
        .filter(|&&l| node.counts[l as usize] <= k)
        .filter(|&&l| ctx.points_on(l).iter().all(|&p| !node.members.contains(&p) || !spoiled(p)))
        .map(|&l| (k - node.counts[l as usize]) as i64)
        .collect();
    if deficits.len() < m as usize {
        return false;
    }
    deficits.sort_unstable();
    deficits[..m as usize].iter().sum::<i64>() <= remaining
}

pub(crate) fn accepts(ctx: &PlaneCtx, pred: &Predicate, node: &Node) -> bool {
    let q = ctx.q();
    let size = node.members.len() as u32;
    let one_tangent_each = || {
        node.members.iter().all(|&p| ctx.lines_through(p).iter().filter(|&&l| node.counts[l as usize] == 1).count() == 1)
    };
    match *pred {
        Predicate::Any => true,
        Predicate::Semioval => size > 0 && one_tangent_each(),
        Predicate::BlokhuisPattern { a } => {
            size > 0 && one_tangent_each() && node.counts.iter().all(|&c| c <= 2 || c == a)
        }
        Predicate::Type02t { t } => {
            size == q + t && node.counts.iter().all(|&c| c == 0 || c == 2 || c == t) && node.counts.contains(&t)
        }
        Predicate::PeterDual { k, m } => {
            let Some(o) = node.marked else { return false };
            let through = ctx.lines_through(o).iter().filter(|&&l| node.counts[l as usize] == k).count() as u32;
            let avoiding = (0..ctx.num_lines()).filter(|&l| node.counts[l as usize] % 2 == 1 && !ctx.incident(o, l)).count() as u32;
            !node.members.contains(&o) && through >= m && avoiding == q - k
        }
    }
}
