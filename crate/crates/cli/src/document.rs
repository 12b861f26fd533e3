//! JSON documents exchanged by the command-line tool.

use std::collections::BTreeMap;

use anyhow::{bail, ensure, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use pg2q::redei::RedeiReport;
use pg2q::secant::{
    blocking_report, is_semioval, point_records, profile, semioval_checks, type_02t, weight_theorem_checks, BlockingReport,
    PointTypeRecord, SemiovalReport, WeightReport,
};
use pg2q::{FieldSpec, PlaneCtx, PointSet};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Metadata {
    pub name: String,
    #[serde(default)]
    pub parameters: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct PointSetDocument {
    pub field: FieldSpec,
    /// Normalized coordinate triples in ascending index order.
    pub points: Vec<[u32; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

impl PointSetDocument {
    pub fn new(ctx: &PlaneCtx, set: &PointSet, metadata: Option<Metadata>) -> PointSetDocument {
        PointSetDocument {
            field: ctx.field().spec().clone(),
            points: set.iter().map(|p| ctx.triple_codes(p)).collect(),
            metadata,
        }
    }

    pub fn parse(text: &str) -> Result<PointSetDocument> {
        let doc: PointSetDocument = serde_json::from_str(text).context("malformed point-set document")?;
        Ok(doc)
    }

    /// The plane and the point set, after checking normalization, order and uniqueness.
    pub fn resolve(&self) -> Result<(PlaneCtx, PointSet)> {
        let ctx = PlaneCtx::new(self.field.clone())?;
        let q = ctx.q();
        let mut indices = Vec::with_capacity(self.points.len());
        for t in &self.points {
            ensure!(t.iter().all(|&c| c < q), "coordinate out of range in {t:?}");
            let lead = t.iter().find(|&&c| c != 0).copied();
            ensure!(lead == Some(1), "point {t:?} is not normalized");
            indices.push(ctx.index_of_codes(*t)?);
        }
        for w in indices.windows(2) {
            if w[0] == w[1] {
                bail!("duplicate point {:?}", ctx.triple_codes(w[0]));
            }
            ensure!(w[0] < w[1], "points are not in ascending order at {:?}", ctx.triple_codes(w[1]));
        }
        let set = PointSet::from_points(&ctx, indices)?;
        Ok((ctx, set))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Section {
    Profile,
    Points,
    Blocking,
    Recognizers,
    Weights,
    Semioval,
    Redei,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProfileSection {
    /// Number of lines meeting the set in each number of points.
    pub global: BTreeMap<u32, u32>,
    pub odd_secants: u32,
    pub max_intersection: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RecognizerSection {
    pub is_semioval: bool,
    /// Largest intersection with a line, so the set is a `(|S|, n)`-arc for this n.
    pub arc_degree: u32,
    #[serde(rename = "type02t")]
    pub type_02t: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RedeiLineReport {
    pub line: [u32; 3],
    #[serde(flatten)]
    pub outcome: RedeiOutcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum RedeiOutcome {
    Report(RedeiReport),
    Skipped(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReportDocument {
    pub schema_version: u32,
    pub input: PointSetDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProfileSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<PointTypeRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocking: Option<BlockingReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recognizers: Option<RecognizerSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<WeightReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semioval: Option<SemiovalReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub redei: Option<Vec<RedeiLineReport>>,
}

impl ReportDocument {
    /// Whether any clause in the document failed.
    pub fn has_failure(&self) -> bool {
        let mut verdicts: Vec<&pg2q::Verdict> = Vec::new();
        if let Some(b) = &self.blocking {
            verdicts.extend([&b.tangent_bound, &b.small_exponent]);
        }
        for clauses in [self.weights.as_ref().map(|w| &w.clauses), self.semioval.as_ref().map(|s| &s.clauses)].into_iter().flatten() {
            verdicts.extend(clauses.iter().map(|c| &c.verdict));
        }
        for r in self.redei.iter().flatten() {
            if let RedeiOutcome::Report(rep) = &r.outcome {
                verdicts.extend(rep.clauses.iter().map(|c| &c.verdict));
            }
        }
        verdicts.iter().any(|v| v.is_fail())
    }
}

pub fn analyze(input: PointSetDocument, sections: &[Section]) -> Result<ReportDocument> {
    let (ctx, set) = input.resolve()?;
    let want = |s: Section| sections.is_empty() || sections.contains(&s);
    let prof = profile(&ctx, &set);
    let mut doc = ReportDocument {
        schema_version: SCHEMA_VERSION,
        input,
        profile: None,
        points: None,
        blocking: None,
        recognizers: None,
        weights: None,
        semioval: None,
        redei: None,
    };
    if want(Section::Profile) {
        doc.profile = Some(ProfileSection {
            global: prof.global.clone(),
            odd_secants: prof.global.iter().filter(|(k, _)| *k % 2 == 1).map(|(_, v)| v).sum(),
            max_intersection: prof.max_intersection(),
        });
    }
    if want(Section::Points) {
        doc.points = Some(point_records(&ctx, &set, &prof));
    }
    let blocking = blocking_report(&ctx, &set);
    if want(Section::Recognizers) {
        doc.recognizers = Some(RecognizerSection {
            is_semioval: is_semioval(&ctx, &set),
            arc_degree: prof.max_intersection(),
            type_02t: type_02t(&ctx, &set),
        });
    }
    if want(Section::Weights) {
        doc.weights = Some(weight_theorem_checks(&ctx, &set));
    }
    if want(Section::Semioval) {
        doc.semioval = Some(semioval_checks(&ctx, &set));
    }
    if want(Section::Redei) {
        doc.redei = Some(
            blocking
                .redei_lines
                .iter()
                .map(|&l| RedeiLineReport {
                    line: ctx.triple_codes(l),
                    outcome: match pg2q::redei::verify_bisecant_theorems(&ctx, &set, l) {
                        Ok(r) => RedeiOutcome::Report(r),
                        Err(e) => RedeiOutcome::Skipped(e.to_string()),
                    },
                })
                .collect(),
        );
    }
    if want(Section::Blocking) {
        doc.blocking = Some(blocking);
    }
    Ok(doc)
}
