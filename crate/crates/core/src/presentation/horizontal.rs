use serde::{Deserialize, Serialize};

use super::{PlotRef, Presentation, PresentationError};
use crate::trigform::{AffineMap, TrigForm};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum HorizontalVerdict {
    /// Every generating pair agrees. `saturation` counts the distinct
    /// coordinate changes reached within the depth bound.
    Yes { saturation: usize, closed: bool },
    No { relation: String, difference: String },
    /// All generating pairs agree but they are not known to generate every
    /// pair (some leg is not invertible).
    Unknown { saturation: usize, reason: String },
}

impl HorizontalVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, HorizontalVerdict::Yes { .. })
    }
}

/// Decides `h*θ = h'*θ` for the coordinate-change pairs of a plot.
///
/// For a single chart the pairs are generated by its self-blocks; for a join
/// they are the blocks inside the chart subset. When every leg is invertible
/// the identifications form a group generated by `R ∘ L⁻¹`, so generator
/// invariance is full invariance; the depth-bounded closure is still reported.
pub fn is_horizontal(
    p: &Presentation,
    plot: &PlotRef,
    theta: &[(String, TrigForm)],
    depth: usize,
) -> Result<HorizontalVerdict, PresentationError> {
    p.check_plot(plot)?;
    let charts = plot.charts();
    let blocks: Vec<_> = p.blocks_within(&charts).collect();
    for r in &blocks {
        let diff = p.block_defect(r, |c| theta.iter().find(|(n, _)| n == c).map(|(_, f)| f.clone()))?;
        if !diff.is_zero() {
            return Ok(HorizontalVerdict::No {
                relation: r.name.clone(),
                difference: crate::frontend::print_form(&diff, &r.vars),
            });
        }
    }
    let mut generators = Vec::new();
    for r in &blocks {
        let (Some(li), Some(ri)) = (r.left.map.inverse(), r.right.map.inverse()) else {
            return Ok(HorizontalVerdict::Unknown {
                saturation: blocks.len(),
                reason: format!("relation `{}` has a non-invertible leg", r.name),
            });
        };
        if r.is_self_block() {
            generators.push(r.right.map.compose(&li)?);
            generators.push(r.left.map.compose(&ri)?);
        }
    }
    if let PlotRef::Join(_) = plot {
        return Ok(HorizontalVerdict::Yes {
            saturation: blocks.len(),
            closed: true,
        });
    }
    let (saturation, closed) = saturate(&generators, p.chart(&charts[0]).map_or(0, |c| c.dim), depth)?;
    Ok(HorizontalVerdict::Yes { saturation, closed })
}

/// Breadth-first closure of a set of self-maps under composition.
pub(crate) fn saturate(
    generators: &[AffineMap],
    dim: usize,
    depth: usize,
) -> Result<(usize, bool), PresentationError> {
    let mut seen = vec![AffineMap::identity(dim)];
    let mut frontier = seen.clone();
    for _ in 0..depth {
        let mut next = Vec::new();
        for f in &frontier {
            for g in generators {
                let h = g.compose(f)?;
                if !seen.contains(&h) && !next.contains(&h) {
                    next.push(h);
                }
            }
        }
        if next.is_empty() {
            return Ok((seen.len(), true));
        }
        seen.extend(next.iter().cloned());
        frontier = next;
    }
    let closed = frontier.iter().all(|f| {
        generators
            .iter()
            .all(|g| g.compose(f).map(|h| seen.contains(&h)).unwrap_or(false))
    });
    Ok((seen.len(), closed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{parse_form, parse_presentation};

    fn verdict(src: &str, chart: &str, form: &str) -> HorizontalVerdict {
        let p = parse_presentation(src).unwrap();
        let theta = parse_form(form, p.chart(chart).unwrap(), &p.constants).unwrap();
        is_horizontal(&p, &PlotRef::Chart(chart.into()), &[(chart.into(), theta)], 2).unwrap()
    }

    #[test]
    fn circle_charts_have_trivial_saturation() {
        let v = verdict(include_str!("../../data/circle.dpr"), "Uplus", "cos(2*pi*t)*dt");
        assert_eq!(v, HorizontalVerdict::Yes { saturation: 1, closed: true });
    }

    #[test]
    fn torus_cosine_is_not_invariant() {
        let src = include_str!("../../data/torus.dpr");
        match verdict(src, "T", "cos(2*pi*t)") {
            HorizontalVerdict::No { relation, .. } => assert_eq!(relation, "S2"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(verdict(src, "T", "3").is_yes());
        assert!(verdict(src, "T", "dt").is_yes());
    }

    #[test]
    fn finite_groups_close() {
        let half = AffineMap::translation_by(vec![crate::scalars::ScalarExponent::rational(crate::scalars::rat(1, 2))]);
        let flip = AffineMap::new(1, vec![vec![crate::scalars::rat(-1, 1)]], vec![Default::default()]).unwrap();
        assert_eq!(saturate(&[flip], 1, 4).unwrap(), (2, true));
        let (n, closed) = saturate(&[half], 1, 3).unwrap();
        assert_eq!(n, 4);
        assert!(!closed);
    }
}
