//! The JSON report document and its plain-text rendering.
//!
//! Every section is always present in JSON (as `null` when a command does not
//! produce it). Exact quantities are integers, decimal strings, or
//! `{numerator, denominator}` objects; floats appear only inside `estimates`.

use std::fmt::Write as _;

use propb_core::search::{Counterexample, CounterexampleKind, FixtureResult, LevelResult, LevelStats};
use propb_core::setpairs::ViolationKind;
use propb_core::{BigRational, BollobasVerdict, Color, Hypergraph, SearchRecord, Vertex};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const TOOL: &str = "propb";

/// Violations listed individually; the total is always reported.
pub const VIOLATION_LIST_LIMIT: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// `sha256:<hex>` of the raw input bytes.
    pub input_digest: Option<String>,
    /// Seconds since the Unix epoch; `null` under `--deterministic`.
    pub timestamp: Option<u64>,
    pub hypergraph: Option<HypergraphDoc>,
    pub analysis: Option<AnalysisDoc>,
    pub coloring: Option<ColoringDoc>,
    pub separation: Option<SeparationDoc>,
    pub bollobas: Option<BollobasDoc>,
    pub search: Option<SearchDoc>,
}

impl ReportDocument {
    pub fn new(command: &str) -> Self {
        ReportDocument {
            tool: TOOL.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            input_digest: None,
            timestamp: None,
            hypergraph: None,
            analysis: None,
            coloring: None,
            separation: None,
            bollobas: None,
            search: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Plain-text rendering of the same document.
    pub fn to_text(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut out = String::new();
        let Value::Object(top) = value else { unreachable!() };
        for (key, v) in &top {
            match v {
                Value::Object(_) => {}
                Value::Null => {}
                other => writeln!(out, "{key:<14} {}", scalar(other)).unwrap(),
            }
        }
        for (key, v) in &top {
            if let Value::Object(_) = v {
                writeln!(out, "\n[{key}]").unwrap();
                render_fields(&mut out, v, "");
            }
        }
        out
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Object(o) if is_rational(o) => format!("{}/{}", scalar(&o["numerator"]), scalar(&o["denominator"])),
        other => other.to_string(),
    }
}

fn is_rational(o: &serde_json::Map<String, Value>) -> bool {
    o.len() == 2 && o.contains_key("numerator") && o.contains_key("denominator")
}

fn render_fields(out: &mut String, v: &Value, prefix: &str) {
    let Value::Object(map) = v else { return };
    for (key, field) in map {
        let name = format!("{prefix}{key}");
        match field {
            Value::Object(o) if !is_rational(o) => render_fields(out, field, &format!("{name}.")),
            Value::Array(items) if items.iter().any(|i| matches!(i, Value::Object(_))) => {
                writeln!(out, "  {name:<28} ({} entries)", items.len()).unwrap();
                for item in items {
                    writeln!(out, "    {}", compact(item)).unwrap();
                }
            }
            Value::Array(_) => writeln!(out, "  {name:<28} {}", compact(field)).unwrap(),
            other => writeln!(out, "  {name:<28} {}", scalar(other)).unwrap(),
        }
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::Object(o) if is_rational(o) => scalar(v),
        Value::Object(o) => o
            .iter()
            .map(|(k, x)| format!("{k}={}", compact(x)))
            .collect::<Vec<_>>()
            .join(" "),
        Value::Array(items) => format!("[{}]", items.iter().map(compact).collect::<Vec<_>>().join(",")),
        other => scalar(other),
    }
}

pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalDoc {
    pub numerator: String,
    pub denominator: String,
}

impl From<&BigRational> for RationalDoc {
    fn from(r: &BigRational) -> Self {
        RationalDoc {
            numerator: r.numer().to_string(),
            denominator: r.denom().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypergraphDoc {
    pub n: usize,
    pub p: usize,
    pub edge_count: usize,
}

impl From<&Hypergraph> for HypergraphDoc {
    fn from(h: &Hypergraph) -> Self {
        HypergraphDoc {
            n: h.n(),
            p: h.p(),
            edge_count: h.num_edges(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisDoc {
    pub m2: u64,
    /// Decimal string; exact at any `n`.
    pub bound: String,
    pub meets_bound_exactly: bool,
    /// At least as many edges as covered vertices.
    pub seymour_ok: bool,
    /// The same test on a minimal non-colorable sub-hypergraph; `null` unless
    /// the input is non-colorable within budget.
    pub seymour_core_ok: Option<bool>,
    pub colorable: String,
    pub vertex_budget: usize,
    pub clique_witness: Option<Vec<Vertex>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairDoc {
    pub first: Vec<Vertex>,
    pub second: Vec<Vertex>,
    pub meet: Vertex,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringDoc {
    /// `order` or `random_restart`.
    pub mode: String,
    pub ordering: Option<Vec<Vertex>>,
    pub colors: Option<Vec<String>>,
    pub proper: Option<bool>,
    pub violating_edge: Option<Vec<Vertex>>,
    pub witness: Option<PairDoc>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    /// Every trial ran without finding a proper coloring.
    pub exhausted: Option<bool>,
}

pub fn color_names(colors: &[Color]) -> Vec<String> {
    colors.iter().map(|c| c.to_string()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub separated: usize,
    pub orderings: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationDoc {
    /// `monte_carlo` or `enumeration`.
    pub method: String,
    pub orderings: u64,
    pub seed: Option<u64>,
    pub m2: u64,
    pub bound: String,
    /// `m2 / bound`.
    pub expected_mean: RationalDoc,
    /// Mean separated count over the orderings examined, exactly.
    pub mean: RationalDoc,
    pub mean_equals_expected: bool,
    /// Fraction of examined orderings that separate no pair.
    pub success_fraction: RationalDoc,
    pub histogram: Vec<HistogramBin>,
    pub estimates: Option<EstimatesDoc>,
}

/// Floating-point summaries of a sampled run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatesDoc {
    pub mean_separated: f64,
    pub success_rate: f64,
    pub sigma_mean: f64,
    /// `(mean - expected) / sigma_mean`; `null` when sigma is zero.
    pub deviation_sigmas: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationDoc {
    pub kind: String,
    pub i: usize,
    pub j: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BollobasDoc {
    pub members: usize,
    pub conditions_ok: bool,
    pub violation_count: usize,
    pub violations: Vec<ViolationDoc>,
    pub sum: RationalDoc,
    pub equality: bool,
    pub common_b: Option<Vec<Vertex>>,
    pub ground_u: Option<Vec<Vertex>>,
    pub q: Option<usize>,
}

impl BollobasDoc {
    pub fn new(members: usize, v: &BollobasVerdict) -> Self {
        BollobasDoc {
            members,
            conditions_ok: v.conditions_ok,
            violation_count: v.violations.len(),
            violations: v
                .violations
                .iter()
                .take(VIOLATION_LIST_LIMIT)
                .map(|x| ViolationDoc {
                    kind: match x.kind {
                        ViolationKind::Disjointness => "disjointness".into(),
                        ViolationKind::Containment => "containment".into(),
                    },
                    i: x.i,
                    j: x.j,
                })
                .collect(),
            sum: (&v.sum).into(),
            equality: v.equality,
            common_b: v.common_b.clone(),
            ground_u: v.ground_u.clone(),
            q: v.q,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordDoc {
    pub n: usize,
    pub p: usize,
    pub edge_count: usize,
    pub m2: u64,
    pub meets_bound: bool,
    pub has_clique: bool,
    pub canonical_form: Vec<Vec<Vertex>>,
}

impl From<&SearchRecord> for RecordDoc {
    fn from(r: &SearchRecord) -> Self {
        RecordDoc {
            n: r.n,
            p: r.p,
            edge_count: r.edge_count,
            m2: r.m2,
            meets_bound: r.meets_bound,
            has_clique: r.has_clique,
            canonical_form: r.canonical_form.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleDoc {
    /// `below_bound` or `equality_without_clique`.
    pub kind: String,
    pub n: usize,
    pub p: usize,
    pub m2: u64,
    pub edges: Vec<Vec<Vertex>>,
}

impl From<&Counterexample> for CounterexampleDoc {
    fn from(c: &Counterexample) -> Self {
        CounterexampleDoc {
            kind: match c.kind {
                CounterexampleKind::BelowBound => "below_bound".into(),
                CounterexampleKind::EqualityWithoutClique => "equality_without_clique".into(),
            },
            n: c.n,
            p: c.p,
            m2: c.m2,
            edges: c.edges.clone(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsDoc {
    pub tested: u64,
    pub non_colorable: u64,
    pub min_m2: Option<u64>,
    pub equality_cases: u64,
    pub equality_with_clique: u64,
    pub seymour_violations: u64,
    pub seymour_core_violations: u64,
}

impl From<&LevelStats> for StatsDoc {
    fn from(s: &LevelStats) -> Self {
        StatsDoc {
            tested: s.tested,
            non_colorable: s.non_colorable,
            min_m2: s.min_m2,
            equality_cases: s.equality_cases,
            equality_with_clique: s.equality_with_clique,
            seymour_violations: s.seymour_violations,
            seymour_core_violations: s.seymour_core_violations,
        }
    }
}

impl StatsDoc {
    pub fn add(&mut self, o: &StatsDoc) {
        self.tested += o.tested;
        self.non_colorable += o.non_colorable;
        self.min_m2 = match (self.min_m2, o.min_m2) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.equality_cases += o.equality_cases;
        self.equality_with_clique += o.equality_with_clique;
        self.seymour_violations += o.seymour_violations;
        self.seymour_core_violations += o.seymour_core_violations;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelDoc {
    pub p: usize,
    pub stats: StatsDoc,
    /// Isomorphism classes of non-colorable instances found.
    pub classes: usize,
    pub counterexamples: Vec<CounterexampleDoc>,
    pub seymour_examples: Vec<Vec<Vec<Vertex>>>,
}

impl From<&LevelResult> for LevelDoc {
    fn from(l: &LevelResult) -> Self {
        LevelDoc {
            p: l.stats.p,
            stats: (&l.stats).into(),
            classes: l.records.len(),
            counterexamples: l.counterexamples.iter().map(Into::into).collect(),
            seymour_examples: l.seymour_examples.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureDoc {
    pub name: String,
    pub n: usize,
    pub p: usize,
    pub edge_count: usize,
    pub colorable: String,
    pub m2: u64,
    pub bound: String,
    pub seymour_ok: bool,
    pub seymour_core_ok: Option<bool>,
    pub extremal: bool,
    pub clique: Option<Vec<Vertex>>,
    pub bollobas_sum: Option<RationalDoc>,
    pub bollobas_equality: Option<bool>,
    pub shared_meets: Option<usize>,
    pub multi_separations: Option<usize>,
}

impl From<&FixtureResult> for FixtureDoc {
    fn from(f: &FixtureResult) -> Self {
        FixtureDoc {
            name: f.name.clone(),
            n: f.n,
            p: f.p,
            edge_count: f.edge_count,
            colorable: f.colorable.to_string(),
            m2: f.m2,
            bound: f.bound.to_string(),
            seymour_ok: f.seymour_ok,
            seymour_core_ok: f.seymour_core_ok,
            extremal: f.extremal,
            clique: f.clique.clone(),
            bollobas_sum: f.bollobas.as_ref().map(|b| (&b.sum).into()),
            bollobas_equality: f.bollobas.as_ref().map(|b| b.equality),
            shared_meets: f.shared_meets,
            multi_separations: f.multi_separations,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchDoc {
    pub n: usize,
    /// `exhaustive`, `sampled` or `fixtures`.
    pub method: String,
    pub max_p: Option<usize>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub levels: Vec<LevelDoc>,
    pub totals: StatsDoc,
    pub counterexample_count: usize,
    /// Levels read back from an earlier run's record file.
    pub resumed_levels: Vec<usize>,
    pub records_file: Option<String>,
    /// Inline records when no record file was given.
    pub records: Option<Vec<RecordDoc>>,
    pub fixtures: Option<Vec<FixtureDoc>>,
}

/// One line of the `verify --out` record stream.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum StreamLine {
    Record(RecordDoc),
    /// Written after all records of a level; a level is complete only once
    /// this line is present.
    PDone { n: usize, method: String, level: LevelDoc },
}
