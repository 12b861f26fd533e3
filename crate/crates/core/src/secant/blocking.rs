use serde::{Deserialize, Serialize};

use super::{profile, tangents_at, PointSet};
use crate::plane::PlaneCtx;
use crate::report::{Verdict, Witness};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BlockingReport {
    pub is_blocking: bool,
    pub is_nontrivial: bool,
    pub is_minimal: bool,
    /// Points on at least one tangent, ascending.
    pub essential: Vec<u32>,
    /// Lines with `|S| = q + |ℓ ∩ S|`; only filled when `q < |S| ≤ 2q`.
    pub redei_lines: Vec<u32>,
    /// Absent for non-blocking sets.
    pub exponent: Option<u32>,
    /// `|S| − q` when Rédei lines exist.
    pub n: Option<u32>,
    /// At least `q + 1 − N` tangents at each point of a minimal set of size `q + N`.
    pub tangent_bound: Verdict,
    /// A small minimal blocking set has positive exponent dividing h.
    pub small_exponent: Verdict,
}

pub fn blocking_report(ctx: &PlaneCtx, set: &PointSet) -> BlockingReport {
    let q = ctx.q();
    let size = set.len() as u32;
    let prof = profile(ctx, set);
    let is_blocking = prof.count(0) == 0;
    let is_nontrivial = is_blocking && prof.count(q + 1) == 0;
    let tangent_counts: Vec<(u32, u32)> = set.iter().map(|p| (p, tangents_at(ctx, &prof, p).len() as u32)).collect();
    let essential: Vec<u32> = tangent_counts.iter().filter(|(_, t)| *t > 0).map(|(p, _)| *p).collect();
    let is_minimal = is_blocking && essential.len() == set.len();

    let redei_lines = if q < size && size <= 2 * q { prof.lines_with(size - q) } else { Vec::new() };
    let n = (!redei_lines.is_empty()).then(|| size - q);

    let field = ctx.field();
    let exponent = is_blocking.then(|| {
        let mut e = 0;
        let mut modulus = 1u32;
        while e < field.h() {
            let next = modulus * field.p();
            if prof.global.keys().any(|&k| k % next != 1 % next) {
                break;
            }
            e += 1;
            modulus = next;
        }
        e
    });

    let tangent_bound = if !is_minimal {
        Verdict::vacuous("not a minimal blocking set")
    } else {
        let needed = (2 * q + 1).saturating_sub(size);
        let short = tangent_counts.iter().find(|(_, t)| *t < needed);
        Verdict::check(short.is_none(), || {
            let (p, t) = short.unwrap();
            Witness::new(format!("{t} tangents, at least {needed} required")).point(ctx, *p)
        })
    };

    let small_exponent = if !is_minimal || 2 * size >= 3 * q + 3 {
        Verdict::vacuous("not a small minimal blocking set")
    } else {
        let e = exponent.unwrap_or(0);
        Verdict::check(e > 0 && field.h().is_multiple_of(e), || Witness::new(format!("exponent {e} with h = {}", field.h())))
    };

    BlockingReport { is_blocking, is_nontrivial, is_minimal, essential, redei_lines, exponent, n, tangent_bound, small_exponent }
}
