//! Spaces given by a finite generating family of charts glued by affine
//! relation blocks. A global form is a tuple of chart forms that agree
//! along every block.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalars::{ConstantSystem, Rational};
use crate::trigform::{AffineMap, TrigError, TrigForm};

mod horizontal;

pub use horizontal::{is_horizontal, HorizontalVerdict};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chart {
    pub name: String,
    pub dim: usize,
    pub vars: Vec<String>,
    /// Per-variable open interval; informational only.
    pub bounds: Option<Vec<(Rational, Rational)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Leg {
    pub chart: String,
    pub map: AffineMap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationBlock {
    pub name: String,
    pub dim: usize,
    pub vars: Vec<String>,
    pub left: Leg,
    pub right: Leg,
}

impl RelationBlock {
    pub fn is_self_block(&self) -> bool {
        self.left.chart == self.right.chart
    }

    pub fn touches(&self, chart: &str) -> bool {
        self.left.chart == chart || self.right.chart == chart
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub space: String,
    pub constants: ConstantSystem,
    pub charts: Vec<Chart>,
    pub relations: Vec<RelationBlock>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub code: String,
    pub message: String,
}

impl Diagnostic {
    pub fn new(code: &str, message: impl Into<String>) -> Self {
        Diagnostic {
            code: code.to_string(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.code, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PresentationError {
    #[error("unknown plot `{0}`")]
    UnknownPlot(String),
    #[error("join over an empty chart set")]
    EmptyJoin,
    #[error("components incompatible along relation `{relation}`: difference {witness}")]
    Incompatible { relation: String, witness: String },
    #[error("component for chart `{chart}`: {message}")]
    BadComponent { chart: String, message: String },
    #[error(transparent)]
    Trig(#[from] TrigError),
}

/// A single chart or the join of a nonempty set of charts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PlotRef {
    Chart(String),
    Join(Vec<String>),
}

impl PlotRef {
    /// Parses `NAME` or `join:A,B,...`.
    pub fn parse(s: &str) -> Result<Self, PresentationError> {
        match s.strip_prefix("join:") {
            Some(rest) => {
                let names: Vec<String> = rest
                    .split(',')
                    .map(str::trim)
                    .filter(|n| !n.is_empty())
                    .map(str::to_string)
                    .collect();
                if names.is_empty() {
                    return Err(PresentationError::EmptyJoin);
                }
                Ok(PlotRef::Join(names))
            }
            None if s.trim().is_empty() => Err(PresentationError::UnknownPlot(s.to_string())),
            None => Ok(PlotRef::Chart(s.trim().to_string())),
        }
    }

    pub fn charts(&self) -> Vec<String> {
        match self {
            PlotRef::Chart(c) => vec![c.clone()],
            PlotRef::Join(cs) => cs.clone(),
        }
    }

    /// The joined plot `self ∗ other`.
    pub fn join_with(&self, other: &PlotRef) -> PlotRef {
        let mut names = self.charts();
        for c in other.charts() {
            if !names.contains(&c) {
                names.push(c);
            }
        }
        if names.len() == 1 {
            PlotRef::Chart(names.pop().unwrap())
        } else {
            PlotRef::Join(names)
        }
    }
}

impl fmt::Display for PlotRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlotRef::Chart(c) => write!(f, "{c}"),
            PlotRef::Join(cs) => write!(f, "join:{}", cs.join(",")),
        }
    }
}

/// A compatible tuple of chart forms, in chart order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalForm {
    degree: usize,
    components: Vec<(String, TrigForm)>,
}

impl GlobalForm {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn components(&self) -> &[(String, TrigForm)] {
        &self.components
    }

    pub fn component(&self, chart: &str) -> Option<&TrigForm> {
        self.components.iter().find(|(n, _)| n == chart).map(|(_, f)| f)
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|(_, f)| f.is_zero())
    }

    pub fn zero(p: &Presentation, degree: usize) -> Self {
        GlobalForm {
            degree,
            components: p
                .charts
                .iter()
                .map(|c| (c.name.clone(), TrigForm::zero(c.dim, degree)))
                .collect(),
        }
    }

    /// Componentwise map; the caller guarantees compatibility is preserved.
    pub(crate) fn map(&self, degree: usize, f: impl Fn(&TrigForm) -> TrigForm) -> Self {
        GlobalForm {
            degree,
            components: self.components.iter().map(|(n, w)| (n.clone(), f(w))).collect(),
        }
    }

    pub fn d(&self) -> Self {
        self.map(self.degree + 1, TrigForm::d)
    }

    pub fn add(&self, other: &Self) -> Self {
        GlobalForm {
            degree: self.degree,
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|((n, a), (_, b))| (n.clone(), a.add(b)))
                .collect(),
        }
    }

    pub fn scale(&self, s: &crate::scalars::Scalar) -> Self {
        self.map(self.degree, |w| w.scale(s))
    }

    /// Componentwise wedge; compatibility is preserved because pullback
    /// distributes over the wedge product.
    pub fn wedge(&self, other: &Self) -> Self {
        GlobalForm {
            degree: self.degree + other.degree,
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|((n, a), (_, b))| (n.clone(), a.wedge(b).expect("same chart")))
                .collect(),
        }
    }
}

impl Presentation {
    pub fn chart(&self, name: &str) -> Option<&Chart> {
        self.charts.iter().find(|c| c.name == name)
    }

    pub fn chart_index(&self, name: &str) -> Option<usize> {
        self.charts.iter().position(|c| c.name == name)
    }

    pub fn max_dim(&self) -> usize {
        self.charts.iter().map(|c| c.dim).max().unwrap_or(0)
    }

    pub fn chart_names(&self) -> Vec<String> {
        self.charts.iter().map(|c| c.name.clone()).collect()
    }

    /// Structural checks; an empty list means the presentation is valid.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if self.charts.is_empty() {
            out.push(Diagnostic::new("no-charts", "presentation declares no charts"));
        }
        let mut seen = HashSet::new();
        for c in &self.charts {
            if !seen.insert(c.name.as_str()) {
                out.push(Diagnostic::new("duplicate-chart", format!("chart `{}` declared twice", c.name)));
            }
            if c.vars.len() != c.dim {
                out.push(Diagnostic::new(
                    "chart-vars",
                    format!("chart `{}` has dim {} but {} variables", c.name, c.dim, c.vars.len()),
                ));
            }
            if let Some(b) = &c.bounds {
                if b.len() != c.dim {
                    out.push(Diagnostic::new(
                        "chart-bounds",
                        format!("chart `{}` has {} bounds for dim {}", c.name, b.len(), c.dim),
                    ));
                }
            }
            let vars: BTreeSet<&String> = c.vars.iter().collect();
            if vars.len() != c.vars.len() {
                out.push(Diagnostic::new("duplicate-var", format!("chart `{}` repeats a variable", c.name)));
            }
        }
        let mut rseen = HashSet::new();
        for r in &self.relations {
            if !rseen.insert(r.name.as_str()) {
                out.push(Diagnostic::new("duplicate-relation", format!("relation `{}` declared twice", r.name)));
            }
            if r.vars.len() != r.dim {
                out.push(Diagnostic::new(
                    "relation-vars",
                    format!("relation `{}` has dim {} but {} variables", r.name, r.dim, r.vars.len()),
                ));
            }
            for (side, leg) in [("left", &r.left), ("right", &r.right)] {
                match self.chart(&leg.chart) {
                    None => out.push(Diagnostic::new(
                        "unknown-chart",
                        format!("relation `{}` {side} leg names unknown chart `{}`", r.name, leg.chart),
                    )),
                    Some(c) => {
                        if leg.map.target_dim() != c.dim {
                            out.push(Diagnostic::new(
                                "leg-dimension",
                                format!(
                                    "relation `{}` {side} leg gives {} coordinates for chart `{}` of dim {}",
                                    r.name,
                                    leg.map.target_dim(),
                                    c.name,
                                    c.dim
                                ),
                            ));
                        }
                    }
                }
                if leg.map.source_dim() != r.dim {
                    out.push(Diagnostic::new(
                        "leg-source",
                        format!("relation `{}` {side} leg has source dim {} for block dim {}", r.name, leg.map.source_dim(), r.dim),
                    ));
                }
                for b in leg.map.translation() {
                    for name in b.constants() {
                        if !self.constants.contains(name) {
                            out.push(Diagnostic::new(
                                "undeclared-constant",
                                format!("relation `{}` uses undeclared constant `{name}`", r.name),
                            ));
                        }
                    }
                }
            }
        }
        out
    }

    /// Checks that a plot names existing charts.
    pub fn check_plot(&self, plot: &PlotRef) -> Result<(), PresentationError> {
        let names = plot.charts();
        if names.is_empty() {
            return Err(PresentationError::EmptyJoin);
        }
        for n in names {
            if self.chart(&n).is_none() {
                return Err(PresentationError::UnknownPlot(n));
            }
        }
        Ok(())
    }

    /// Relation blocks with both legs among `charts`.
    pub fn blocks_within<'a>(&'a self, charts: &'a [String]) -> impl Iterator<Item = &'a RelationBlock> + 'a {
        self.relations
            .iter()
            .filter(move |r| charts.contains(&r.left.chart) && charts.contains(&r.right.chart))
    }

    /// Builds the global form with the given per-chart components, or
    /// reports the first relation along which they disagree.
    pub fn global_build(&self, components: Vec<(String, TrigForm)>) -> Result<GlobalForm, PresentationError> {
        let mut ordered = Vec::with_capacity(self.charts.len());
        let degree = components.iter().map(|(_, f)| f.degree()).max().unwrap_or(0);
        for c in &self.charts {
            let form = components
                .iter()
                .find(|(n, _)| *n == c.name)
                .map(|(_, f)| f.clone())
                .unwrap_or_else(|| TrigForm::zero(c.dim, degree));
            if form.dim() != c.dim {
                return Err(PresentationError::BadComponent {
                    chart: c.name.clone(),
                    message: format!("dimension {} for chart of dim {}", form.dim(), c.dim),
                });
            }
            if form.degree() != degree && !form.is_zero() {
                return Err(PresentationError::BadComponent {
                    chart: c.name.clone(),
                    message: format!("degree {} differs from {degree}", form.degree()),
                });
            }
            let form = if form.is_zero() { TrigForm::zero(c.dim, degree) } else { form };
            ordered.push((c.name.clone(), form));
        }
        if let Some((n, _)) = components.iter().find(|(n, _)| self.chart(n).is_none()) {
            return Err(PresentationError::UnknownPlot(n.clone()));
        }
        let g = GlobalForm {
            degree,
            components: ordered,
        };
        for r in &self.relations {
            let diff = self.block_defect(r, |c| g.component(c).cloned())?;
            if !diff.is_zero() {
                return Err(PresentationError::Incompatible {
                    relation: r.name.clone(),
                    witness: crate::frontend::print_form(&diff, &r.vars),
                });
            }
        }
        Ok(g)
    }

    /// `L*ω_left − R*ω_right` on the block domain.
    pub fn block_defect(
        &self,
        r: &RelationBlock,
        component: impl Fn(&str) -> Option<TrigForm>,
    ) -> Result<TrigForm, PresentationError> {
        let l = component(&r.left.chart).ok_or_else(|| PresentationError::UnknownPlot(r.left.chart.clone()))?;
        let rr = component(&r.right.chart).ok_or_else(|| PresentationError::UnknownPlot(r.right.chart.clone()))?;
        let lp = l.pullback(&r.left.map)?;
        let rp = rr.pullback(&r.right.map)?;
        Ok(lp.try_add(&rp.neg())?)
    }

    /// `α*ω`: the components of a global form on the plot's charts.
    pub fn restrict(&self, omega: &GlobalForm, plot: &PlotRef) -> Result<Vec<(String, TrigForm)>, PresentationError> {
        self.check_plot(plot)?;
        plot.charts()
            .into_iter()
            .map(|c| {
                omega
                    .component(&c)
                    .map(|f| (c.clone(), f.clone()))
                    .ok_or(PresentationError::UnknownPlot(c))
            })
            .collect()
    }

    /// The join presentation over a chart subset: those charts and every
    /// relation block with both legs among them.
    pub fn join(&self, charts: &[String]) -> Result<Presentation, PresentationError> {
        if charts.is_empty() {
            return Err(PresentationError::EmptyJoin);
        }
        for c in charts {
            if self.chart(c).is_none() {
                return Err(PresentationError::UnknownPlot(c.clone()));
            }
        }
        Ok(Presentation {
            space: self.space.clone(),
            constants: self.constants.clone(),
            charts: self.charts.iter().filter(|c| charts.contains(&c.name)).cloned().collect(),
            relations: self.blocks_within(charts).cloned().collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{parse_form, parse_presentation};

    const CIRCLE: &str = include_str!("../../data/circle.dpr");
    const TORUS: &str = include_str!("../../data/torus.dpr");

    fn form(p: &Presentation, chart: &str, s: &str) -> TrigForm {
        parse_form(s, p.chart(chart).unwrap(), &p.constants).unwrap()
    }

    #[test]
    fn circle_volume_form_is_global() {
        let p = parse_presentation(CIRCLE).unwrap();
        let vol = p
            .global_build(vec![("Uplus".into(), form(&p, "Uplus", "dt")), ("Uminus".into(), form(&p, "Uminus", "ds"))])
            .unwrap();
        assert_eq!(vol.degree(), 1);
        let r = p.restrict(&vol, &PlotRef::Chart("Uplus".into())).unwrap();
        assert_eq!(r[0].1, form(&p, "Uplus", "dt"));
    }

    #[test]
    fn circle_cosines_are_incompatible() {
        let p = parse_presentation(CIRCLE).unwrap();
        let err = p
            .global_build(vec![
                ("Uplus".into(), form(&p, "Uplus", "cos(2*pi*t)")),
                ("Uminus".into(), form(&p, "Uminus", "cos(2*pi*s)")),
            ])
            .unwrap_err();
        assert!(matches!(err, PresentationError::Incompatible { ref relation, .. } if relation == "R1"));
    }

    #[test]
    fn zero_tuple_is_zero() {
        let p = parse_presentation(CIRCLE).unwrap();
        let z = p.global_build(vec![]).unwrap();
        assert!(z.is_zero());
        assert_eq!(z, GlobalForm::zero(&p, 0));
    }

    #[test]
    fn joins() {
        let p = parse_presentation(CIRCLE).unwrap();
        assert_eq!(p.join(&p.chart_names()).unwrap(), p);
        let up = p.join(&["Uplus".to_string()]).unwrap();
        assert_eq!(up.charts.len(), 1);
        assert!(up.relations.is_empty());
        let t = parse_presentation(TORUS).unwrap();
        assert_eq!(t.join(&["T".to_string()]).unwrap(), t);
        assert_eq!(p.join(&[]), Err(PresentationError::EmptyJoin));
    }

    #[test]
    fn validation_catches_duplicates() {
        let mut p = parse_presentation(CIRCLE).unwrap();
        assert!(p.validate().is_empty());
        p.charts.push(p.charts[0].clone());
        assert!(p.validate().iter().any(|d| d.code == "duplicate-chart"));
    }

    #[test]
    fn plot_refs_parse() {
        assert_eq!(PlotRef::parse("Uplus").unwrap(), PlotRef::Chart("Uplus".into()));
        assert_eq!(
            PlotRef::parse("join:Uplus,Uminus").unwrap(),
            PlotRef::Join(vec!["Uplus".into(), "Uminus".into()])
        );
        assert_eq!(PlotRef::parse("join:"), Err(PresentationError::EmptyJoin));
    }
}
