//! Machine-readable reports and the reference values recorded for the
//! bundled examples.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::complexes::Truncation;
use crate::frontend::{parse_presentation, print_presentation};
use crate::presentation::{Diagnostic, Presentation};

pub const SCHEMA_VERSION: u32 = 1;

/// Bundled example presentations, by file stem.
pub const BUNDLED: [(&str, &str); 6] = [
    ("circle", include_str!("../data/circle.dpr")),
    ("torus", include_str!("../data/torus.dpr")),
    ("torus2", include_str!("../data/torus2.dpr")),
    ("line", include_str!("../data/line.dpr")),
    ("line_two_charts", include_str!("../data/line_two_charts.dpr")),
    ("two_circles", include_str!("../data/two_circles.dpr")),
];

#[derive(Clone, Debug, Serialize)]
pub struct PresentationInfo {
    pub space: String,
    /// SHA-256 of the canonical printed presentation.
    pub digest: String,
    pub charts: usize,
    pub relations: usize,
}

impl PresentationInfo {
    pub fn of(p: &Presentation) -> Self {
        PresentationInfo {
            space: p.space.clone(),
            digest: digest(p),
            charts: p.charts.len(),
            relations: p.relations.len(),
        }
    }
}

pub fn digest(p: &Presentation) -> String {
    hex::encode(Sha256::digest(print_presentation(p).as_bytes()))
}

#[derive(Clone, Debug, Serialize)]
pub struct TruncationProfile {
    pub frequencies: Vec<String>,
    pub poly_deg: u32,
    pub headroom: u32,
    pub depth: usize,
}

impl TruncationProfile {
    pub fn of(t: &Truncation) -> Self {
        TruncationProfile {
            frequencies: t.frequencies().iter().map(ToString::to_string).collect(),
            poly_deg: t.poly_deg,
            headroom: t.headroom,
            depth: t.depth,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub presentation: Option<PresentationInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation: Option<TruncationProfile>,
    pub results: serde_json::Value,
    pub diagnostics: Vec<Diagnostic>,
    pub exit_code: i32,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            presentation: None,
            truncation: None,
            results: serde_json::Value::Null,
            diagnostics: Vec::new(),
            exit_code: 0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Which published value a reference entry records.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Betti(usize),
    CupLength,
    Hcat,
}

impl std::fmt::Display for Quantity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Quantity::Betti(r) => write!(f, "b{r}"),
            Quantity::CupLength => write!(f, "cup length"),
            Quantity::Hcat => write!(f, "hcat"),
        }
    }
}

fn reference_table() -> Vec<(&'static str, Quantity, usize)> {
    vec![
        ("circle", Quantity::Betti(0), 1),
        ("circle", Quantity::Betti(1), 1),
        ("circle", Quantity::CupLength, 1),
        ("circle", Quantity::Hcat, 1),
        ("torus", Quantity::Betti(0), 1),
        ("torus", Quantity::Betti(1), 0),
        ("torus", Quantity::CupLength, 0),
        ("torus", Quantity::Hcat, 0),
    ]
}

/// The bundled example a presentation prints identically to, if any.
pub fn bundled_name(p: &Presentation) -> Option<&'static str> {
    let d = digest(p);
    BUNDLED
        .iter()
        .find(|(_, src)| parse_presentation(src).is_ok_and(|q| digest(&q) == d))
        .map(|(name, _)| *name)
}

/// The recorded reference value of a quantity, for bundled examples.
pub fn reference_value(p: &Presentation, q: Quantity) -> Option<usize> {
    let name = bundled_name(p)?;
    reference_table()
        .into_iter()
        .find(|(n, k, _)| *n == name && *k == q)
        .map(|(_, _, v)| v)
}

/// A `REFERENCE-DISCREPANCY` diagnostic when a computed value differs from
/// the recorded reference value.
pub fn compare_reference(p: &Presentation, q: Quantity, computed: usize) -> Option<Diagnostic> {
    let expected = reference_value(p, q)?;
    (expected != computed).then(|| {
        Diagnostic::new(
            "REFERENCE-DISCREPANCY",
            format!(
                "{} of `{}`: computed {computed} within the truncation profile, reference value {expected}",
                q,
                p.space
            ),
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_examples_are_recognized() {
        for (name, src) in BUNDLED {
            let p = parse_presentation(src).unwrap();
            assert_eq!(bundled_name(&p), Some(name));
        }
    }

    #[test]
    fn torus_discrepancy() {
        let p = parse_presentation(BUNDLED[1].1).unwrap();
        let d = compare_reference(&p, Quantity::Betti(1), 1).unwrap();
        assert_eq!(d.code, "REFERENCE-DISCREPANCY");
        assert!(compare_reference(&p, Quantity::Betti(0), 1).is_none());
    }

    #[test]
    fn report_has_schema_version() {
        let json = Report::new("validate").to_json();
        assert!(json.contains("\"schema_version\": 1"));
    }
}
