//! The short exact sequence of the Bott–Tu complex and the Mayer–Vietoris
//! maps, with their cochain-level rank checks.

use std::sync::Arc;

use serde::Serialize;

use super::{blockvec_is_zero, cell_form, Cell, CochainComplex, ComplexKind, FrequencyClasses, GradedMap, Truncation};
use crate::presentation::{Chart, PlotRef, Presentation};
use crate::scalars::Scalar;
use crate::EngineError;

/// `Ω(α)[−1] →i 𝓥Ω(X, α) →π Ω(X)` together with the restriction `α*`.
pub struct Ses {
    pub plot: PlotRef,
    pub global: CochainComplex,
    pub horizontal: CochainComplex,
    pub bott_tu: CochainComplex,
    pub i: GradedMap,
    pub pi: GradedMap,
    pub restrict: GradedMap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SesDegree {
    pub degree: usize,
    pub dim_horizontal: usize,
    pub dim_bott_tu: usize,
    pub dim_global: usize,
    pub rank_i: usize,
    pub rank_pi: usize,
    pub i_injective: bool,
    pub pi_surjective: bool,
    pub exact_middle: bool,
    pub pi_after_i_zero: bool,
}

impl SesDegree {
    pub fn holds(&self) -> bool {
        self.i_injective && self.pi_surjective && self.exact_middle && self.pi_after_i_zero
    }
}

/// `α*` from global forms into a complex whose first part lives on some
/// of the same charts.
pub fn restriction_map(global: &CochainComplex, target: &CochainComplex) -> Result<GradedMap, EngineError> {
    let carried = target.parts()[0].charts.clone();
    let map = GradedMap::from_cells("restriction", global, target, 0, 1, |cell| {
        if carried.contains(&cell.chart) && !target.parts()[0].zero.contains(&cell.chart) {
            vec![(cell.clone(), Scalar::one())]
        } else {
            Vec::new()
        }
    })?;
    map.check_commutes(global, target)?;
    Ok(map)
}

pub fn ses_maps(p: &Presentation, plot: &PlotRef, t: &Truncation) -> Result<Ses, EngineError> {
    let classes = Arc::new(FrequencyClasses::build(p, t)?);
    let shared = Arc::new(p.clone());
    let build = |kind| CochainComplex::build_shared(shared.clone(), kind, t, classes.clone());
    let global = build(ComplexKind::GlobalOmega)?;
    let horizontal = build(ComplexKind::Horizontal(plot.clone()))?;
    let bott_tu = build(ComplexKind::BottTu(plot.clone()))?;
    let i = GradedMap::from_cells("i", &horizontal, &bott_tu, 1, -1, |cell| {
        vec![(Cell { part: 1, ..cell.clone() }, Scalar::one())]
    })?;
    i.check_commutes(&horizontal, &bott_tu)?;
    let pi = GradedMap::from_cells("pi", &bott_tu, &global, 0, 1, |cell| {
        if cell.part == 0 {
            vec![(cell.clone(), Scalar::one())]
        } else {
            Vec::new()
        }
    })?;
    pi.check_commutes(&bott_tu, &global)?;
    let restrict = restriction_map(&global, &horizontal)?;
    Ok(Ses {
        plot: plot.clone(),
        global,
        horizontal,
        bott_tu,
        i,
        pi,
        restrict,
    })
}

impl Ses {
    /// Degreewise rank identities of the short exact sequence.
    pub fn check(&self) -> Vec<SesDegree> {
        (0..=self.bott_tu.top())
            .map(|r| {
                let dim_horizontal = if r == 0 { 0 } else { self.horizontal.dim(r - 1) };
                let rank_i = if r == 0 { 0 } else { self.i.rank(&self.horizontal, r - 1) };
                let rank_pi = self.pi.rank(&self.bott_tu, r);
                let dim_bott_tu = self.bott_tu.dim(r);
                let dim_global = self.global.dim(r);
                let pi_after_i_zero = r == 0
                    || self
                        .i
                        .images(&self.horizontal, r - 1)
                        .iter()
                        .all(|v| blockvec_is_zero(&self.pi.apply(r, v)));
                SesDegree {
                    degree: r,
                    dim_horizontal,
                    dim_bott_tu,
                    dim_global,
                    rank_i,
                    rank_pi,
                    i_injective: rank_i == dim_horizontal,
                    pi_surjective: rank_pi == dim_global,
                    exact_middle: rank_i + rank_pi == dim_bott_tu,
                    pi_after_i_zero,
                }
            })
            .collect()
    }
}

/// `Ω(α∗β) →J Ω(α) ⊕ Ω(β) →Π ⊕_b Ω(P_b)` over the relation blocks `b`
/// joining the two charts.
pub struct MvMaps {
    pub join: CochainComplex,
    pub middle: CochainComplex,
    pub target: CochainComplex,
    pub j: GradedMap,
    pub pi: GradedMap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MvDegree {
    pub degree: usize,
    pub dim_join: usize,
    pub dim_middle: usize,
    pub dim_target: usize,
    pub rank_j: usize,
    pub rank_pi: usize,
    pub j_injective: bool,
    pub exact_middle: bool,
    pub pi_after_j_zero: bool,
    pub coker_pi: usize,
}

impl MvDegree {
    pub fn holds(&self) -> bool {
        self.j_injective && self.exact_middle && self.pi_after_j_zero
    }
}

pub fn mv_maps(p: &Presentation, alpha: &str, beta: &str, t: &Truncation) -> Result<MvMaps, EngineError> {
    if alpha == beta {
        return Err(EngineError::Input("Mayer–Vietoris needs two distinct charts".into()));
    }
    let classes = Arc::new(FrequencyClasses::build(p, t)?);
    let shared = Arc::new(p.clone());
    let build = |kind| CochainComplex::build_shared(shared.clone(), kind, t, classes.clone());
    let join = build(ComplexKind::Horizontal(PlotRef::Join(vec![alpha.into(), beta.into()])))?;
    let middle = build(ComplexKind::HorizontalPair(alpha.into(), beta.into()))?;
    let u = p.chart_index(alpha).expect("built");

    // Each block between the two charts becomes a chart of its own; the
    // leg on `alpha` is listed first.
    let mut legs = Vec::new();
    let mut charts = Vec::new();
    for r in &p.relations {
        let oriented = if r.left.chart == alpha && r.right.chart == beta {
            (r.left.map.clone(), r.right.map.clone())
        } else if r.left.chart == beta && r.right.chart == alpha {
            (r.right.map.clone(), r.left.map.clone())
        } else {
            continue;
        };
        legs.push(oriented);
        charts.push(Chart {
            name: r.name.clone(),
            dim: r.dim,
            vars: r.vars.clone(),
            bounds: None,
        });
    }
    let blocks = Presentation {
        space: format!("{}|{alpha},{beta}", p.space),
        constants: p.constants.clone(),
        charts,
        relations: Vec::new(),
    };
    let target = CochainComplex::build(&blocks, ComplexKind::GlobalOmega, t)?;

    let j = GradedMap::from_cells("J", &join, &middle, 0, 1, |cell| {
        let part = if cell.chart == u { 0 } else { 1 };
        vec![(Cell { part, ..cell.clone() }, Scalar::one())]
    })?;
    j.check_commutes(&join, &middle)?;
    let form_err = std::cell::RefCell::new(None);
    let pi = GradedMap::from_cells("Pi", &middle, &target, 0, 1, |cell| {
        let form = cell_form(p, cell);
        let sign = if cell.chart == u { Scalar::one() } else { -Scalar::one() };
        let mut out = Vec::new();
        for (b, (lu, lv)) in legs.iter().enumerate() {
            let leg = if cell.chart == u { lu } else { lv };
            match form.pullback(leg) {
                Ok(pulled) => {
                    for (idx, key, x) in pulled.terms() {
                        out.push((
                            Cell {
                                part: 0,
                                chart: b,
                                idx: idx.clone(),
                                key: key.clone(),
                            },
                            x * &sign,
                        ));
                    }
                }
                Err(e) => *form_err.borrow_mut() = Some(e),
            }
        }
        out
    })?;
    if let Some(e) = form_err.into_inner() {
        return Err(e.into());
    }
    pi.check_commutes(&middle, &target)?;
    Ok(MvMaps {
        join,
        middle,
        target,
        j,
        pi,
    })
}

impl MvMaps {
    pub fn check(&self, max_degree: usize) -> Vec<MvDegree> {
        (0..=max_degree.min(self.middle.top()))
            .map(|r| {
                let dim_join = self.join.dim(r);
                let dim_middle = self.middle.dim(r);
                let dim_target = self.target.dim(r);
                let rank_j = self.j.rank(&self.join, r);
                let rank_pi = self.pi.rank(&self.middle, r);
                let pi_after_j_zero = self
                    .j
                    .images(&self.join, r)
                    .iter()
                    .all(|x| blockvec_is_zero(&self.pi.apply(r, x)));
                MvDegree {
                    degree: r,
                    dim_join,
                    dim_middle,
                    dim_target,
                    rank_j,
                    rank_pi,
                    j_injective: rank_j == dim_join,
                    exact_middle: rank_j + rank_pi == dim_middle,
                    pi_after_j_zero,
                    coker_pi: dim_target - rank_pi,
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_presentation;

    #[test]
    fn circle_ses_is_exact() {
        let p = parse_presentation(include_str!("../../data/circle.dpr")).unwrap();
        let t = Truncation::lattice(2, &p.constants, 1, 1);
        let ses = ses_maps(&p, &PlotRef::Chart("Uplus".into()), &t).unwrap();
        for d in ses.check() {
            assert!(d.holds(), "{d:?}");
        }
    }

    #[test]
    fn circle_mayer_vietoris() {
        let p = parse_presentation(include_str!("../../data/circle.dpr")).unwrap();
        let t = Truncation::lattice(2, &p.constants, 1, 1);
        let mv = mv_maps(&p, "Uplus", "Uminus", &t).unwrap();
        for d in mv.check(1) {
            assert!(d.holds(), "{d:?}");
        }
    }
}
