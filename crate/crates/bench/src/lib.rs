//! Shared fixtures for the benchmarks.

use diffeo_core::report::BUNDLED;
use diffeo_core::{parse_presentation, Presentation, Truncation};

/// A bundled presentation with its default truncation.
pub fn example(name: &str) -> (Presentation, Truncation) {
    let src = BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .unwrap_or_else(|| panic!("no bundled example `{name}`"))
        .1;
    let p = parse_presentation(src).expect("bundled examples parse");
    let t = Truncation::default_for(&p);
    (p, t)
}

/// The lattice truncation with `|k| ≤ n`, otherwise default.
pub fn with_freq(p: &Presentation, n: u32) -> Truncation {
    let d = Truncation::default_for(p);
    Truncation::lattice(n, &p.constants, d.poly_deg, d.headroom)
}
