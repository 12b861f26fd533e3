//! Verdicts, witnesses and exact rationals shared by all checkers.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::plane::PlaneCtx;

pub type Rational = Ratio<i64>;

/// Renders a rational as `num/den` in lowest terms, e.g. `8/3` or `0/1`.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let (n, d) = s.split_once('/')?;
    let (n, d): (i64, i64) = (n.trim().parse().ok()?, d.trim().parse().ok()?);
    (d != 0).then(|| Rational::new(n, d))
}

/// Serde adapter writing rationals as `num/den` strings.
pub mod rational_string {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).ok_or_else(|| serde::de::Error::custom(format!("bad rational {text:?}")))
    }
}

/// Concrete counterexample data attached to a failing clause.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// Normalized coordinate triples of the points involved.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<[u32; 3]>,
    /// Normalized coefficient triples of the lines involved.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lines: Vec<[u32; 3]>,
    pub detail: String,
}

impl Witness {
    pub fn new(detail: impl Into<String>) -> Witness {
        Witness { detail: detail.into(), ..Witness::default() }
    }

    pub fn point(mut self, ctx: &PlaneCtx, p: u32) -> Witness {
        self.points.push(ctx.triple_codes(p));
        self
    }

    pub fn points(mut self, ctx: &PlaneCtx, ps: impl IntoIterator<Item = u32>) -> Witness {
        self.points.extend(ps.into_iter().map(|p| ctx.triple_codes(p)));
        self
    }

    pub fn line(mut self, ctx: &PlaneCtx, l: u32) -> Witness {
        self.lines.push(ctx.triple_codes(l));
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail { witness: Witness },
    Vacuous { reason: String },
}

impl Verdict {
    pub fn vacuous(reason: impl Into<String>) -> Verdict {
        Verdict::Vacuous { reason: reason.into() }
    }

    pub fn fail(witness: Witness) -> Verdict {
        Verdict::Fail { witness }
    }

    /// Pass when `ok`, otherwise fail with the lazily built witness.
    pub fn check(ok: bool, witness: impl FnOnce() -> Witness) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail { witness: witness() }
        }
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail { .. })
    }

    pub fn is_vacuous(&self) -> bool {
        matches!(self, Verdict::Vacuous { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => write!(f, "pass"),
            Verdict::Fail { witness } => write!(f, "FAIL ({})", witness.detail),
            Verdict::Vacuous { reason } => write!(f, "vacuous ({reason})"),
        }
    }
}

/// One named claim and its verdict on a concrete input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub id: String,
    pub verdict: Verdict,
}

impl Clause {
    pub fn new(id: impl Into<String>, verdict: Verdict) -> Clause {
        Clause { id: id.into(), verdict }
    }
}

/// No clause failed.
pub fn all_hold(clauses: &[Clause]) -> bool {
    clauses.iter().all(|c| !c.verdict.is_fail())
}

/// First clause with the given id.
pub fn find<'a>(clauses: &'a [Clause], id: &str) -> Option<&'a Clause> {
    clauses.iter().find(|c| c.id == id)
}
