use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::presentation::Presentation;
use crate::scalars::{rat_int, ConstantSystem, ScalarExponent};
use crate::trigform::{index_tuples, AffineMap, FrequencyVector, TermKey, TrigForm, TrigPoly};
use crate::EngineError;

/// Finite window `F_c × {degree ≤ D}` in which complexes are assembled.
///
/// Each chart variable ranges over the frequency set `S` independently. A
/// monomial `x^e` in front of `exp(2 pi i <ν,x>)` on `dx_I` is allowed when
/// `e_v ≤ D` for every `v` with `ν_v ≠ 0` and `e_v ≤ D + H − [v ∈ I]` when
/// `ν_v = 0`. The window is closed under `d`, and on a single chart every
/// frequency block is acyclic except `ν = 0`, whose cohomology is the
/// constants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    frequencies: Vec<ScalarExponent>,
    pub poly_deg: u32,
    pub headroom: u32,
    pub depth: usize,
}

pub const DEFAULT_FREQ: u32 = 4;
pub const DEFAULT_POLY_DEG: u32 = 1;
pub const DEFAULT_HEADROOM: u32 = 1;
pub const DEFAULT_DEPTH: usize = 4;

impl Truncation {
    /// `S = {k + Σ m_j c_j : |k|, |m_j| ≤ n}` over the declared constants.
    pub fn lattice(n: u32, constants: &ConstantSystem, poly_deg: u32, headroom: u32) -> Self {
        let n = n as i64;
        let mut set: Vec<ScalarExponent> = (-n..=n).map(ScalarExponent::from_int).collect();
        for c in constants.names() {
            let unit = ScalarExponent::constant(c);
            set = set
                .iter()
                .flat_map(|base| (-n..=n).map(move |m| (base.clone(), m)))
                .map(|(base, m)| base.add(&unit.scale(&rat_int(m))))
                .collect();
        }
        Self::from_list(set, poly_deg, headroom)
    }

    /// An explicit frequency set, closed under negation and always
    /// containing zero.
    pub fn from_list(list: Vec<ScalarExponent>, poly_deg: u32, headroom: u32) -> Self {
        let mut set: BTreeSet<ScalarExponent> = BTreeSet::new();
        set.insert(ScalarExponent::zero());
        for f in list {
            set.insert(f.neg());
            set.insert(f);
        }
        Truncation {
            frequencies: set.into_iter().collect(),
            poly_deg,
            headroom,
            depth: DEFAULT_DEPTH,
        }
    }

    /// The reproducibility profile: `n = 4`, `D = 1`, headroom 1, depth 4.
    pub fn default_for(p: &Presentation) -> Self {
        Self::lattice(DEFAULT_FREQ, &p.constants, DEFAULT_POLY_DEG, DEFAULT_HEADROOM)
    }

    pub fn with_depth(mut self, depth: usize) -> Self {
        self.depth = depth;
        self
    }

    pub fn frequencies(&self) -> &[ScalarExponent] {
        &self.frequencies
    }

    pub fn contains(&self, nu: &ScalarExponent) -> bool {
        self.frequencies.binary_search(nu).is_ok()
    }

    pub fn contains_vector(&self, nu: &FrequencyVector) -> bool {
        nu.0.iter().all(|x| self.contains(x))
    }

    /// All frequency vectors of a chart of dimension `dim`.
    pub fn chart_frequencies(&self, dim: usize) -> Vec<FrequencyVector> {
        let mut out = vec![Vec::new()];
        for _ in 0..dim {
            out = out
                .into_iter()
                .flat_map(|v: Vec<ScalarExponent>| {
                    self.frequencies.iter().map(move |f| {
                        let mut w = v.clone();
                        w.push(f.clone());
                        w
                    })
                })
                .collect();
        }
        out.into_iter().map(FrequencyVector).collect()
    }

    pub fn degree_bound(&self, poly_deg: u32, nu_zero: bool, in_index: bool) -> u32 {
        if nu_zero {
            poly_deg + self.headroom - u32::from(in_index)
        } else {
            poly_deg
        }
    }

    /// The window's basis monomials of form degree `q` at frequency `nu`.
    pub fn window(&self, poly_deg: u32, q: usize, nu: &FrequencyVector) -> Vec<(Vec<usize>, TermKey)> {
        let dim = nu.dim();
        let mut out = Vec::new();
        for idx in index_tuples(dim, q) {
            let bounds: Vec<u32> = (0..dim)
                .map(|v| self.degree_bound(poly_deg, nu.0[v].is_zero(), idx.contains(&v)))
                .collect();
            let mut exps = vec![vec![]];
            for b in &bounds {
                exps = exps
                    .into_iter()
                    .flat_map(|e: Vec<u32>| {
                        (0..=*b).map(move |k| {
                            let mut f = e.clone();
                            f.push(k);
                            f
                        })
                    })
                    .collect();
            }
            for e in exps {
                out.push((
                    idx.clone(),
                    TermKey {
                        exps: e,
                        freq: nu.clone(),
                    },
                ));
            }
        }
        out
    }
}

/// A node of the frequency graph: a chart index and a frequency on it.
pub type Node = (usize, FrequencyVector);

/// Partition of all window nodes into classes linked by relation blocks.
/// Every complex and chain map of the engine is block diagonal with
/// respect to it.
#[derive(Clone, Debug)]
pub struct FrequencyClasses {
    classes: Vec<Vec<Node>>,
    lookup: HashMap<Node, usize>,
}

fn witness(p: &Presentation, relation: &str, chart: usize, nu: &FrequencyVector, why: &str) -> EngineError {
    let c = &p.charts[chart];
    let term = TrigForm::function(TrigPoly::exponential(nu.clone()));
    EngineError::TruncationNotClosed {
        relation: relation.to_string(),
        witness: format!(
            "{} on chart {}: {why}",
            crate::frontend::print_form(&term, &c.vars),
            c.name
        ),
    }
}

/// The frequency on the other leg's chart matched to `nu` on this leg's,
/// if the legs' linear parts allow a unique match.
fn transfer(from: &AffineMap, to: &AffineMap, nu: &FrequencyVector) -> Option<FrequencyVector> {
    let mu = from.pull_frequency(nu);
    let inv = to.inverse()?;
    Some(inv.pull_frequency(&mu))
}

impl FrequencyClasses {
    /// Classes of the window nodes of `p`; fails when a relation carries a
    /// window frequency outside the window or a leg is not a signed
    /// permutation-with-scaling of the coordinates.
    pub fn build(p: &Presentation, t: &Truncation) -> Result<Self, EngineError> {
        for r in &p.relations {
            for leg in [&r.left, &r.right] {
                if leg.map.monomial_pattern().is_none() {
                    let chart = p.chart_index(&leg.chart).expect("validated");
                    let dim = p.charts[chart].dim;
                    let mut nu = FrequencyVector::zero(dim);
                    if let Some(f) = t.frequencies().iter().find(|f| !f.is_zero()) {
                        if dim > 0 {
                            nu.0[0] = f.clone();
                        }
                    }
                    return Err(witness(
                        p,
                        &r.name,
                        chart,
                        &nu,
                        &format!("leg into `{}` does not map coordinate axes to axes", leg.chart),
                    ));
                }
            }
        }
        let mut classes = Vec::new();
        let mut lookup: HashMap<Node, usize> = HashMap::new();
        for (c, chart) in p.charts.iter().enumerate() {
            for nu in t.chart_frequencies(chart.dim) {
                let start = (c, nu);
                if lookup.contains_key(&start) {
                    continue;
                }
                let nodes = Self::explore(p, start, Some(t), 1 << 16)?;
                let id = classes.len();
                for n in &nodes {
                    lookup.insert(n.clone(), id);
                }
                classes.push(nodes);
            }
        }
        Ok(FrequencyClasses { classes, lookup })
    }

    /// Breadth-first search through relation blocks starting at `start`.
    /// With a truncation, leaving its window is an error.
    pub fn explore(
        p: &Presentation,
        start: Node,
        window: Option<&Truncation>,
        cap: usize,
    ) -> Result<Vec<Node>, EngineError> {
        let mut seen: BTreeSet<Node> = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.clone());
        queue.push_back(start);
        while let Some((c, nu)) = queue.pop_front() {
            let name = &p.charts[c].name;
            for r in &p.relations {
                let mut links = Vec::new();
                if &r.left.chart == name {
                    links.push((&r.left.map, &r.right.map, &r.right.chart));
                }
                if &r.right.chart == name {
                    links.push((&r.right.map, &r.left.map, &r.left.chart));
                }
                for (from, to, other) in links {
                    let oc = p.chart_index(other).expect("validated");
                    let Some(nu2) = transfer(from, to, &nu) else {
                        return Err(witness(p, &r.name, c, &nu, "leg is not invertible"));
                    };
                    if let Some(t) = window {
                        if !t.contains_vector(&nu2) {
                            return Err(witness(
                                p,
                                &r.name,
                                c,
                                &nu,
                                &format!("matches a frequency outside the window on `{other}`"),
                            ));
                        }
                    }
                    let node = (oc, nu2);
                    if seen.insert(node.clone()) {
                        if seen.len() > cap {
                            return Err(witness(p, &r.name, c, &nu, "frequency orbit does not close"));
                        }
                        queue.push_back(node);
                    }
                }
            }
        }
        Ok(seen.into_iter().collect())
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn nodes(&self, class: usize) -> &[Node] {
        &self.classes[class]
    }

    pub fn class_of(&self, node: &Node) -> Option<usize> {
        self.lookup.get(node).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_presentation;

    #[test]
    fn lattice_profile() {
        let c = ConstantSystem::new(["a"]).unwrap();
        let t = Truncation::lattice(4, &c, 1, 1);
        assert_eq!(t.frequencies().len(), 81);
        let t0 = Truncation::lattice(2, &ConstantSystem::empty(), 0, 1);
        assert_eq!(t0.frequencies().len(), 5);
    }

    #[test]
    fn window_sizes() {
        let t = Truncation::lattice(1, &ConstantSystem::empty(), 1, 1);
        let zero = FrequencyVector::zero(1);
        let one = FrequencyVector(vec![ScalarExponent::from_int(1)]);
        assert_eq!(t.window(1, 0, &zero).len(), 3);
        assert_eq!(t.window(1, 1, &zero).len(), 2);
        assert_eq!(t.window(1, 0, &one).len(), 2);
        assert_eq!(t.window(1, 1, &one).len(), 2);
    }

    #[test]
    fn circle_classes_pair_charts() {
        let p = parse_presentation(include_str!("../../data/circle.dpr")).unwrap();
        let t = Truncation::lattice(2, &p.constants, 0, 1);
        let fc = FrequencyClasses::build(&p, &t).unwrap();
        assert_eq!(fc.len(), 5);
        assert!((0..5).all(|k| fc.nodes(k).len() == 2));
    }

    #[test]
    fn scaling_legs_are_not_closed() {
        let src = "constants:\nspace X\nchart U dim 1 vars t\nrelation R dim 1 vars t\n  leg U : t\n  leg U : 2*t\n";
        let p = parse_presentation(src).unwrap();
        let t = Truncation::lattice(2, &p.constants, 1, 1);
        assert!(matches!(FrequencyClasses::build(&p, &t), Err(EngineError::TruncationNotClosed { .. })));
    }
}
