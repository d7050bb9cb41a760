//! The versioned analysis report: spectrum listing, per-prime flags, and
//! the oracle comparison. Reports are deterministic for a given input —
//! no timestamps, canonical orderings throughout.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use lpa_core::certs::ExampleReport;
use lpa_core::graph::Graph;
use lpa_core::oracle::{verify_dm, DmRow, OracleError};
use lpa_core::spectrum::{
    classify_prime, spectrum, ClassificationReport, FieldDesc, SpectrumError,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool: String,
    pub version: String,
    pub schema: u32,
    pub input_digest: String,
    pub field: FieldDesc,
    pub spectrum: Vec<SpectrumEntry>,
    pub oracle: OracleComparison,
    /// Certificate verdicts; populated by the window-checked examples,
    /// absent for finite-graph analyses.
    pub certificates: Option<ExampleReport>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub prime: String,
    pub flags: ClassificationReport,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleComparison {
    pub consistent: bool,
    pub rows: Vec<DmRow>,
    pub violations: Vec<String>,
}

pub fn digest(input: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(input);
    format!("{:x}", hasher.finalize())
}

#[derive(Debug)]
pub enum AnalyzeError {
    Classifier(SpectrumError),
    Oracle(OracleError),
}

impl std::fmt::Display for AnalyzeError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AnalyzeError::Classifier(e) => write!(f, "{e}"),
            AnalyzeError::Oracle(e) => write!(f, "{e}"),
        }
    }
}

pub fn analyze(
    g: &Graph,
    field: &FieldDesc,
    raw_input: &[u8],
) -> Result<ReportDocument, AnalyzeError> {
    let mut entries = Vec::new();
    for p in spectrum(g).map_err(AnalyzeError::Classifier)? {
        let flags = classify_prime(g, &p, field).map_err(AnalyzeError::Classifier)?;
        entries.push(SpectrumEntry {
            prime: p.to_string(),
            flags,
        });
    }
    let dm = verify_dm(g, field).map_err(AnalyzeError::Oracle)?;
    Ok(ReportDocument {
        tool: "lpa".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        schema: SCHEMA_VERSION,
        input_digest: digest(raw_input),
        field: field.clone(),
        spectrum: entries,
        oracle: OracleComparison {
            consistent: dm.consistent(),
            rows: dm.rows,
            violations: dm.violations,
        },
        certificates: None,
    })
}

fn flag(b: bool) -> char {
    if b {
        '✓'
    } else {
        '✗'
    }
}

pub fn render_text(report: &ReportDocument, g: &Graph) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "graph: {} vertices, {} edge specs (sha256 {})\n",
        g.vertices().len(),
        g.edges().len(),
        &report.input_digest[..16],
    ));
    out.push_str(&format!(
        "field: {} ({:?})\n",
        report.field.label, report.field.cardinality
    ));
    out.push_str(&format!("spectrum: {} node(s)\n", report.spectrum.len()));
    for entry in &report.spectrum {
        let f = &entry.flags;
        out.push_str(&format!(
            "  {}\n    graded {}  primitive {}  strongly-primitive {}  locally-closed {}  compl-irreducible {}  rational {}\n",
            entry.prime,
            flag(f.graded),
            flag(f.primitive),
            flag(f.strongly_primitive),
            flag(f.locally_closed),
            flag(f.completely_irreducible),
            f.rationality,
        ));
    }
    if report.oracle.consistent {
        out.push_str(&format!(
            "oracle comparison: consistent across {} node(s)\n",
            report.oracle.rows.len()
        ));
    } else {
        out.push_str("oracle comparison: INCONSISTENT\n");
        for v in &report.oracle.violations {
            out.push_str(&format!("  violation: {v}\n"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use lpa_core::fixtures;
    use lpa_core::spectrum::{Rationality, RuleId};

    #[test]
    fn analyze_single_loop_report() {
        let b = fixtures::single_loop();
        let field = FieldDesc::countable("Q");
        let report = analyze(&b, &field, b"test").unwrap();
        assert_eq!(report.spectrum.len(), 2);
        assert!(report.oracle.consistent);
        let zero = &report.spectrum[0].flags;
        assert!(!zero.primitive);
        assert_eq!(zero.rationality, Rationality::No(RuleId::R0));
        let family = &report.spectrum[1].flags;
        assert!(family.primitive && family.locally_closed);

        let text = render_text(&report, &b);
        assert!(text.contains("spectrum: 2 node(s)"));
        assert!(text.contains("consistent"));
    }

    #[test]
    fn json_round_trips_through_the_schema() {
        let c = fixtures::emitter_cycle();
        let field = FieldDesc::finite(2).unwrap();
        let report = analyze(&c, &field, b"bytes").unwrap();
        let json = serde_json::to_string_pretty(&report).unwrap();
        let back: ReportDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(serde_json::to_string_pretty(&back).unwrap(), json);
    }

    #[test]
    fn reports_are_deterministic() {
        let c = fixtures::emitter_cycle();
        let field = FieldDesc::uncountable("R");
        let r1 = serde_json::to_string(&analyze(&c, &field, b"x").unwrap()).unwrap();
        let r2 = serde_json::to_string(&analyze(&c, &field, b"x").unwrap()).unwrap();
        assert_eq!(r1, r2);
    }
}
