use serde::{Deserialize, Serialize};

use super::{directions_of, points_toward, AffineQSet, RedeiError};
use crate::plane::PlaneCtx;
use crate::report::{Clause, Verdict, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectionBranch {
    /// `s = 1` and `(q+3)/2 ≤ N ≤ q+1`.
    Scattered,
    /// `q/s + 1 ≤ N ≤ (q−1)/(s−1)`.
    Intermediate,
    /// `s = q` and `N = 1`.
    Linear,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DirectionReport {
    pub n: u32,
    /// Largest power of p dividing every intersection of a determined-direction line with the graph.
    pub s_max: u32,
    /// Smallest intersection size `p^t > 1` of such a line, when every such line meets the graph twice or more.
    pub s_min: Option<u32>,
    pub branch: DirectionBranch,
    pub clauses: Vec<Clause>,
}

fn is_power_of(mut n: u32, p: u32) -> bool {
    while n > 1 && n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// `q/s + 1 ≤ N ≤ (q − 1)/(s − 1)` in integers, for `s > 1`.
fn intermediate_bounds(q: u32, s: u32, n: u32) -> bool {
    q + s <= n * s && n * (s - 1) < q
}

pub fn direction_bounds(ctx: &PlaneCtx, u: &AffineQSet) -> Result<DirectionReport, RedeiError> {
    if !u.is_graph() {
        return Err(RedeiError::NotGraph);
    }
    let q = ctx.q();
    let p = ctx.field().p();
    let dirs = directions_of(ctx, u);
    let n = dirs.n();
    let slopes = dirs.slopes(ctx);
    let counts: Vec<(usize, usize, u32)> = u
        .points()
        .iter()
        .enumerate()
        .flat_map(|(i, &r)| slopes.iter().enumerate().map(move |(j, &s)| (i, j, points_toward(ctx, u, r, s))))
        .collect();

    let mut s_max = q;
    while counts.iter().any(|&(_, _, c)| c % s_max != 0) {
        s_max /= p;
    }
    let branch = match s_max {
        1 => DirectionBranch::Scattered,
        s if s == q => DirectionBranch::Linear,
        _ => DirectionBranch::Intermediate,
    };
    let trichotomy = Verdict::check(
        match branch {
            DirectionBranch::Scattered => 2 * n >= q + 3 && n <= q + 1,
            DirectionBranch::Linear => n == 1,
            DirectionBranch::Intermediate => intermediate_bounds(q, s_max, n),
        },
        || Witness::new(format!("N = {n}, s = {s_max}, branch {branch:?}")),
    );

    let rich = counts.iter().all(|&(_, _, c)| c >= 2);
    let s_min = rich.then(|| counts.iter().map(|&(_, _, c)| c).min().unwrap_or(q));
    let (powers, min_bounds) = match s_min {
        None => (Verdict::vacuous("some determined-direction line is a tangent to the graph"), Verdict::vacuous("hypothesis fails")),
        Some(s) => {
            let bad = counts.iter().find(|&&(_, _, c)| !is_power_of(c, p));
            let powers = Verdict::check(bad.is_none(), || {
                let &(i, j, c) = bad.unwrap();
                let (x, y) = u.points()[i];
                Witness::new(format!("a line meets the graph in {c} points"))
                    .point(ctx, ctx.affine_point(x, y))
                    .point(ctx, dirs.points[j])
            });
            // At s = q the graph is a line and the lower bound q/s + 1 = 2 cannot hold.
            let bounds = if s == q {
                Verdict::vacuous("s = q: the graph is a line, covered by the N = 1 branch")
            } else {
                Verdict::check(s > 1 && intermediate_bounds(q, s, n), || Witness::new(format!("N = {n}, s = {s}")))
            };
            (powers, bounds)
        }
    };

    Ok(DirectionReport {
        n,
        s_max,
        s_min,
        branch,
        clauses: vec![
            Clause::new("trichotomy", trichotomy),
            Clause::new("prime_power_intersections", powers),
            Clause::new("min_secant_bounds", min_bounds),
        ],
    })
}
