//! Finite truncations of the cochain complexes of a presentation.
//!
//! A complex is a list of parts. A part carries forms on some charts,
//! constrained to agree along some relation blocks, optionally forced to
//! vanish on some charts, and placed in degree `form degree + shift`. All
//! spaces are assembled one frequency class at a time, so every
//! differential and chain map is block diagonal.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::linalg::Matrix;
use crate::presentation::{GlobalForm, PlotRef, Presentation};
use crate::scalars::Scalar;
use crate::trigform::{TermKey, TrigForm, TrigPoly};
use crate::EngineError;

mod maps;
mod sequences;
mod truncation;

pub use maps::{rank_of_blockvecs, GradedMap};
pub use sequences::{mv_maps, restriction_map, ses_maps, MvDegree, MvMaps, Ses, SesDegree};
pub use truncation::{
    FrequencyClasses, Node, Truncation, DEFAULT_DEPTH, DEFAULT_FREQ, DEFAULT_HEADROOM, DEFAULT_POLY_DEG,
};

/// A vector of a complex in one degree: coordinates per frequency class.
/// Classes absent from the map are zero.
pub type BlockVec = BTreeMap<usize, Vec<Scalar>>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ComplexKind {
    /// Compatible tuples of chart forms.
    GlobalOmega,
    /// All forms on one chart.
    ChartOmega(String),
    /// Forms on the plot's charts agreeing along the blocks among them.
    Horizontal(PlotRef),
    /// Global forms vanishing on the plot's charts.
    KernelRelative(PlotRef),
    /// Pairs `(ω, θ)` with `d(ω, θ) = (dω, α*ω − dθ)`.
    BottTu(PlotRef),
    /// `Horizontal(U) ⊕ Horizontal(V)`.
    HorizontalPair(String, String),
}

impl fmt::Display for ComplexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexKind::GlobalOmega => write!(f, "Omega(X)"),
            ComplexKind::ChartOmega(u) => write!(f, "Omega({u})"),
            ComplexKind::Horizontal(a) => write!(f, "Omega({a})"),
            ComplexKind::KernelRelative(a) => write!(f, "Omega(X, {a})"),
            ComplexKind::BottTu(a) => write!(f, "VOmega(X, {a})"),
            ComplexKind::HorizontalPair(u, v) => write!(f, "Omega({u}) + Omega({v})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Part {
    pub charts: Vec<usize>,
    pub blocks: Vec<usize>,
    pub zero: Vec<usize>,
    pub shift: usize,
    /// Sign of the differential on this part.
    pub sign: i64,
}

impl Part {
    fn carries(&self, chart: usize) -> bool {
        self.charts.contains(&chart) && !self.zero.contains(&chart)
    }
}

/// A basis monomial `x^e E_ν dx_I` on one chart of one part.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub part: usize,
    pub chart: usize,
    pub idx: Vec<usize>,
    pub key: TermKey,
}

/// The constrained subspace of a raw cell space. Basis vector `j` is 1 on
/// its free cell `free[j]` and 0 on every other free cell, so coordinates
/// are read off the free cells.
#[derive(Clone, Debug)]
pub struct Subspace {
    cells: Vec<Cell>,
    index: HashMap<Cell, usize>,
    basis: Vec<Vec<Scalar>>,
    free: Vec<usize>,
}

impl Subspace {
    fn new(cells: Vec<Cell>, constraints: Vec<Vec<(usize, Scalar)>>) -> Self {
        let index = cells.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let n = cells.len();
        let (basis, free) = if constraints.is_empty() {
            let basis = (0..n)
                .map(|j| {
                    let mut v = vec![Scalar::zero(); n];
                    v[j] = Scalar::one();
                    v
                })
                .collect();
            (basis, (0..n).collect())
        } else {
            let mut m = Matrix::zeros(constraints.len(), n);
            for (i, row) in constraints.into_iter().enumerate() {
                for (j, x) in row {
                    m.set(i, j, x);
                }
            }
            m.nullspace()
        };
        Subspace {
            cells,
            index,
            basis,
            free,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn position(&self, cell: &Cell) -> Option<usize> {
        self.index.get(cell).copied()
    }

    pub fn vector(&self, j: usize) -> &[Scalar] {
        &self.basis[j]
    }

    pub fn raw(&self, coords: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.cells.len()];
        for (x, b) in coords.iter().zip(&self.basis) {
            if x.is_zero() {
                continue;
            }
            for (o, y) in out.iter_mut().zip(b) {
                if !y.is_zero() {
                    *o = &*o + &(x * y);
                }
            }
        }
        out
    }

    /// Coordinates of a raw vector, or `None` if it is not in the subspace.
    pub fn coords(&self, raw: &[Scalar]) -> Option<Vec<Scalar>> {
        let coords: Vec<Scalar> = self.free.iter().map(|&f| raw[f].clone()).collect();
        (self.raw(&coords) == raw).then_some(coords)
    }
}

/// All spaces and differentials of a complex over one frequency class.
#[derive(Clone, Debug)]
pub struct ClassBlock {
    pub nodes: Vec<Node>,
    pub poly_deg: u32,
    spaces: Vec<Subspace>,
    d: Vec<Matrix>,
}

impl ClassBlock {
    pub fn space(&self, r: usize) -> Option<&Subspace> {
        self.spaces.get(r)
    }

    pub fn dim(&self, r: usize) -> usize {
        self.spaces.get(r).map_or(0, Subspace::dim)
    }

    /// `d_r`, of shape `dim(r+1) × dim(r)`.
    pub fn d(&self, r: usize) -> Matrix {
        self.d
            .get(r)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.dim(r + 1), self.dim(r)))
    }

    /// Raw vector of the given cells in degree `r`, or the first cell that
    /// is not in this block's window.
    pub fn raw_of(&self, r: usize, cells: &[(Cell, Scalar)]) -> Result<Vec<Scalar>, Cell> {
        let Some(space) = self.spaces.get(r) else {
            return match cells.first() {
                Some((c, _)) => Err(c.clone()),
                None => Ok(Vec::new()),
            };
        };
        let mut raw = vec![Scalar::zero(); space.cells.len()];
        for (c, x) in cells {
            let i = space.position(c).ok_or_else(|| c.clone())?;
            raw[i] = &raw[i] + x;
        }
        Ok(raw)
    }
}

/// Why a set of cells does not define a vector of a complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Miss {
    Outside(Cell),
    NotInSubspace(usize),
}

/// A form per chart per part; parts below their shift have no components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub degree: usize,
    pub parts: Vec<Vec<(String, TrigForm)>>,
}

impl Cochain {
    pub fn from_global(g: &GlobalForm) -> Self {
        Cochain {
            degree: g.degree(),
            parts: vec![g.components().to_vec()],
        }
    }

    pub fn pair(degree: usize, omega: &GlobalForm, theta: Vec<(String, TrigForm)>) -> Self {
        Cochain {
            degree,
            parts: vec![omega.components().to_vec(), theta],
        }
    }

    pub fn component(&self, part: usize, chart: &str) -> Option<&TrigForm> {
        self.parts.get(part)?.iter().find(|(n, _)| n == chart).map(|(_, f)| f)
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().flatten().all(|(_, f)| f.is_zero())
    }

    /// Componentwise combination, matching components by chart name.
    fn zip(&self, other: &Self, f: impl Fn(&TrigForm, &TrigForm) -> TrigForm) -> Self {
        Cochain {
            degree: self.degree,
            parts: self
                .parts
                .iter()
                .zip(&other.parts)
                .map(|(a, b)| {
                    let find = |list: &[(String, TrigForm)], n: &str| list.iter().find(|(m, _)| m == n).map(|(_, g)| g.clone());
                    let mut out: Vec<(String, TrigForm)> = a
                        .iter()
                        .map(|(n, x)| {
                            let y = find(b, n).unwrap_or_else(|| TrigForm::zero(x.dim(), x.degree()));
                            (n.clone(), f(x, &y))
                        })
                        .collect();
                    for (n, y) in b {
                        if find(a, n).is_none() {
                            out.push((n.clone(), f(&TrigForm::zero(y.dim(), y.degree()), y)));
                        }
                    }
                    out
                })
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, TrigForm::add)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, TrigForm::sub)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Cochain {
            degree: self.degree,
            parts: self
                .parts
                .iter()
                .map(|p| p.iter().map(|(n, f)| (n.clone(), f.scale(s))).collect())
                .collect(),
        }
    }

    /// One line per nonzero component, `part/chart: form`.
    pub fn render(&self, p: &Presentation) -> Vec<String> {
        let mut out = Vec::new();
        for (i, part) in self.parts.iter().enumerate() {
            for (n, f) in part {
                let vars = &p.chart(n).expect("chart of cochain").vars;
                let label = if self.parts.len() > 1 { format!("{i}/{n}") } else { n.clone() };
                out.push(format!("{label}: {}", crate::frontend::print_form(f, vars)));
            }
        }
        out
    }
}

pub(crate) fn cell_form(p: &Presentation, cell: &Cell) -> TrigForm {
    let dim = p.charts[cell.chart].dim;
    TrigForm::from_component(dim, cell.idx.clone(), TrigPoly::term(dim, cell.key.clone(), Scalar::one()))
}

pub(crate) fn add_into(map: &mut HashMap<Cell, Scalar>, cell: Cell, x: Scalar) {
    let e = map.entry(cell).or_insert_with(Scalar::zero);
    *e = &*e + &x;
}

/// A built complex; immutable.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    kind: ComplexKind,
    presentation: Arc<Presentation>,
    truncation: Truncation,
    classes: Arc<FrequencyClasses>,
    parts: Vec<Part>,
    links: Vec<(usize, usize)>,
    top: usize,
    blocks: Vec<ClassBlock>,
}

fn blocks_among(p: &Presentation, charts: &[usize]) -> Vec<usize> {
    p.relations
        .iter()
        .enumerate()
        .filter(|(_, r)| {
            let l = p.chart_index(&r.left.chart).expect("validated");
            let rr = p.chart_index(&r.right.chart).expect("validated");
            charts.contains(&l) && charts.contains(&rr)
        })
        .map(|(i, _)| i)
        .collect()
}

fn plot_charts(p: &Presentation, plot: &PlotRef) -> Result<Vec<usize>, EngineError> {
    p.check_plot(plot)?;
    let mut out: Vec<usize> = plot
        .charts()
        .iter()
        .map(|n| p.chart_index(n).expect("checked"))
        .collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn chart_of(p: &Presentation, name: &str) -> Result<usize, EngineError> {
    p.check_plot(&PlotRef::Chart(name.to_string()))?;
    Ok(p.chart_index(name).expect("checked"))
}

type Layout = (Vec<Part>, Vec<(usize, usize)>);

fn layout(p: &Presentation, kind: &ComplexKind) -> Result<Layout, EngineError> {
    let all: Vec<usize> = (0..p.charts.len()).collect();
    let part = |charts: Vec<usize>, zero: Vec<usize>, shift: usize, sign: i64| Part {
        blocks: blocks_among(p, &charts),
        charts,
        zero,
        shift,
        sign,
    };
    Ok(match kind {
        ComplexKind::GlobalOmega => (vec![part(all, vec![], 0, 1)], vec![]),
        ComplexKind::ChartOmega(u) => {
            let u = chart_of(p, u)?;
            let mut only = part(vec![u], vec![], 0, 1);
            only.blocks.clear();
            (vec![only], vec![])
        }
        ComplexKind::Horizontal(a) => (vec![part(plot_charts(p, a)?, vec![], 0, 1)], vec![]),
        ComplexKind::KernelRelative(a) => (vec![part(all, plot_charts(p, a)?, 0, 1)], vec![]),
        ComplexKind::BottTu(a) => (
            vec![part(all, vec![], 0, 1), part(plot_charts(p, a)?, vec![], 1, -1)],
            vec![(0, 1)],
        ),
        ComplexKind::HorizontalPair(u, v) => {
            let (u, v) = (chart_of(p, u)?, chart_of(p, v)?);
            (vec![part(vec![u], vec![], 0, 1), part(vec![v], vec![], 0, 1)], vec![])
        }
    })
}

impl CochainComplex {
    /// Builds `kind` over `p` in the window `t`.
    pub fn build(p: &Presentation, kind: ComplexKind, t: &Truncation) -> Result<Self, EngineError> {
        let classes = Arc::new(FrequencyClasses::build(p, t)?);
        Self::build_shared(Arc::new(p.clone()), kind, t, classes)
    }

    /// Builds over a precomputed class partition, so that several complexes
    /// share class indices.
    pub fn build_shared(
        p: Arc<Presentation>,
        kind: ComplexKind,
        t: &Truncation,
        classes: Arc<FrequencyClasses>,
    ) -> Result<Self, EngineError> {
        let (parts, links) = layout(&p, &kind)?;
        let top = parts
            .iter()
            .map(|part| part.charts.iter().map(|&c| p.charts[c].dim).max().unwrap_or(0) + part.shift)
            .max()
            .unwrap_or(0);
        let mut c = CochainComplex {
            kind,
            presentation: p,
            truncation: t.clone(),
            classes,
            parts,
            links,
            top,
            blocks: Vec::new(),
        };
        let blocks = (0..c.classes.len())
            .map(|k| c.build_block(c.classes.nodes(k).to_vec(), t.poly_deg))
            .collect::<Result<Vec<_>, _>>()?;
        c.blocks = blocks;
        Ok(c)
    }

    pub fn kind(&self) -> &ComplexKind {
        &self.kind
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn shared_presentation(&self) -> Arc<Presentation> {
        self.presentation.clone()
    }

    pub fn truncation(&self) -> &Truncation {
        &self.truncation
    }

    pub fn classes(&self) -> &Arc<FrequencyClasses> {
        &self.classes
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    /// Highest degree with possibly nonzero cochains.
    pub fn top(&self) -> usize {
        self.top
    }

    pub fn blocks(&self) -> &[ClassBlock] {
        &self.blocks
    }

    pub fn block(&self, class: usize) -> &ClassBlock {
        &self.blocks[class]
    }

    pub fn dim(&self, r: usize) -> usize {
        self.blocks.iter().map(|b| b.dim(r)).sum()
    }

    /// Cells of degree `r` over the given nodes.
    fn cells(&self, r: usize, nodes: &[Node], poly_deg: u32) -> Vec<Cell> {
        let mut out = Vec::new();
        for (pi, part) in self.parts.iter().enumerate() {
            if r < part.shift {
                continue;
            }
            let q = r - part.shift;
            for (c, nu) in nodes {
                if !part.carries(*c) || q > self.presentation.charts[*c].dim {
                    continue;
                }
                for (idx, key) in self.truncation.window(poly_deg, q, nu) {
                    out.push(Cell {
                        part: pi,
                        chart: *c,
                        idx,
                        key,
                    });
                }
            }
        }
        out
    }

    fn constraints(&self, cells: &[Cell]) -> Result<Vec<Vec<(usize, Scalar)>>, EngineError> {
        let p = &self.presentation;
        let mut rows: HashMap<(usize, usize, Vec<usize>, TermKey), usize> = HashMap::new();
        let mut out: Vec<Vec<(usize, Scalar)>> = Vec::new();
        for (j, cell) in cells.iter().enumerate() {
            let part = &self.parts[cell.part];
            let name = &p.charts[cell.chart].name;
            let form = cell_form(p, cell);
            for &b in &part.blocks {
                let rel = &p.relations[b];
                let mut sides = Vec::new();
                if &rel.left.chart == name {
                    sides.push((&rel.left.map, Scalar::one()));
                }
                if &rel.right.chart == name {
                    sides.push((&rel.right.map, -Scalar::one()));
                }
                for (map, sign) in sides {
                    for (idx, key, c) in form.pullback(map)?.terms() {
                        let row = *rows
                            .entry((cell.part, b, idx.clone(), key.clone()))
                            .or_insert_with(|| {
                                out.push(Vec::new());
                                out.len() - 1
                            });
                        out[row].push((j, c * &sign));
                    }
                }
            }
        }
        for row in &mut out {
            row.sort_by_key(|(j, _)| *j);
            let mut merged: Vec<(usize, Scalar)> = Vec::new();
            for (j, x) in row.drain(..) {
                match merged.last_mut() {
                    Some((k, y)) if *k == j => *y = &*y + &x,
                    _ => merged.push((j, x)),
                }
            }
            merged.retain(|(_, x)| !x.is_zero());
            *row = merged;
        }
        out.retain(|r| !r.is_empty());
        Ok(out)
    }

    /// Image of one cell under the differential of the complex.
    pub fn d_cell(&self, cell: &Cell) -> Vec<(Cell, Scalar)> {
        let p = &self.presentation;
        let part = &self.parts[cell.part];
        let sign = Scalar::from_int(part.sign);
        let mut out: Vec<(Cell, Scalar)> = cell_form(p, cell)
            .d()
            .terms()
            .map(|(idx, key, c)| {
                (
                    Cell {
                        part: cell.part,
                        chart: cell.chart,
                        idx: idx.clone(),
                        key: key.clone(),
                    },
                    c * &sign,
                )
            })
            .collect();
        for &(from, to) in &self.links {
            if from == cell.part && self.parts[to].carries(cell.chart) {
                out.push((Cell { part: to, ..cell.clone() }, Scalar::one()));
            }
        }
        out
    }

    /// Spaces and differentials over `nodes` with polynomial bound
    /// `poly_deg`; the nodes must form a union of relation orbits.
    pub fn build_block(&self, nodes: Vec<Node>, poly_deg: u32) -> Result<ClassBlock, EngineError> {
        let mut spaces = Vec::with_capacity(self.top + 2);
        for r in 0..=self.top + 1 {
            let cells = self.cells(r, &nodes, poly_deg);
            let constraints = self.constraints(&cells)?;
            spaces.push(Subspace::new(cells, constraints));
        }
        let mut d = Vec::with_capacity(self.top + 1);
        for r in 0..=self.top {
            let (src, tgt) = (&spaces[r], &spaces[r + 1]);
            let images: Vec<Vec<(usize, Scalar)>> = src
                .cells
                .iter()
                .map(|cell| {
                    self.d_cell(cell)
                        .into_iter()
                        .map(|(c, x)| {
                            tgt.position(&c)
                                .map(|i| (i, x))
                                .ok_or_else(|| EngineError::guard(format!("d leaves the window at {c:?}")))
                        })
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<_, _>>()?;
            let mut m = Matrix::zeros(tgt.dim(), src.dim());
            for j in 0..src.dim() {
                let mut acc = vec![Scalar::zero(); tgt.cells.len()];
                for (i, x) in src.vector(j).iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (k, y) in &images[i] {
                        acc[*k] = &acc[*k] + &(x * y);
                    }
                }
                let coords = tgt
                    .coords(&acc)
                    .ok_or_else(|| EngineError::guard(format!("d leaves the constrained subspace in degree {}", r + 1)))?;
                for (i, x) in coords.into_iter().enumerate() {
                    m.set(i, j, x);
                }
            }
            d.push(m);
        }
        for r in 0..self.top {
            if !d[r + 1].mul(&d[r]).is_zero() {
                return Err(EngineError::guard(format!("d∘d ≠ 0 in degree {r}")));
            }
        }
        Ok(ClassBlock {
            nodes,
            poly_deg,
            spaces,
            d,
        })
    }

    /// The class of a node, or its orbit if it lies outside the window.
    pub fn orbit(&self, node: &Node) -> Result<(Option<usize>, Vec<Node>), EngineError> {
        if let Some(k) = self.classes.class_of(node) {
            return Ok((Some(k), self.classes.nodes(k).to_vec()));
        }
        Ok((None, FrequencyClasses::explore(&self.presentation, node.clone(), None, 4096)?))
    }

    pub fn node_of(cell: &Cell) -> Node {
        (cell.chart, cell.key.freq.clone())
    }

    pub fn d_vec(&self, r: usize, v: &BlockVec) -> BlockVec {
        let mut out = BlockVec::new();
        for (&k, x) in v {
            let y = self.blocks[k].d(r).mul_vec(x);
            if y.iter().any(|s| !s.is_zero()) {
                out.insert(k, y);
            }
        }
        out
    }

    pub fn unit(&self, r: usize, class: usize, j: usize) -> BlockVec {
        let mut v = vec![Scalar::zero(); self.blocks[class].dim(r)];
        v[j] = Scalar::one();
        BlockVec::from([(class, v)])
    }

    /// Nonzero raw entries of a vector.
    pub fn expand(&self, r: usize, v: &BlockVec) -> Vec<(Cell, Scalar)> {
        let mut out = Vec::new();
        for (&k, x) in v {
            let Some(space) = self.blocks[k].space(r) else { continue };
            for (cell, y) in space.cells.iter().zip(space.raw(x)) {
                if !y.is_zero() {
                    out.push((cell.clone(), y));
                }
            }
        }
        out
    }

    /// The vector with the given raw entries.
    pub fn embed(&self, r: usize, cells: impl IntoIterator<Item = (Cell, Scalar)>) -> Result<BlockVec, Miss> {
        let mut grouped: BTreeMap<usize, Vec<(Cell, Scalar)>> = BTreeMap::new();
        for (cell, x) in cells {
            if x.is_zero() {
                continue;
            }
            let k = self
                .classes
                .class_of(&Self::node_of(&cell))
                .ok_or_else(|| Miss::Outside(cell.clone()))?;
            grouped.entry(k).or_default().push((cell, x));
        }
        let mut out = BlockVec::new();
        for (k, cells) in grouped {
            let block = &self.blocks[k];
            let raw = block.raw_of(r, &cells).map_err(Miss::Outside)?;
            if raw.iter().all(Scalar::is_zero) {
                continue;
            }
            let coords = block.spaces[r].coords(&raw).ok_or(Miss::NotInSubspace(k))?;
            out.insert(k, coords);
        }
        Ok(out)
    }

    /// Raw entries of a cochain given as forms.
    pub fn cells_of(&self, z: &Cochain) -> Result<Vec<(Cell, Scalar)>, EngineError> {
        let p = &self.presentation;
        if z.parts.len() != self.parts.len() {
            return Err(EngineError::PreconditionViolated(format!(
                "cochain has {} parts, complex {} has {}",
                z.parts.len(),
                self.kind,
                self.parts.len()
            )));
        }
        let mut out = Vec::new();
        for (pi, (comps, part)) in z.parts.iter().zip(&self.parts).enumerate() {
            for (name, form) in comps {
                if form.is_zero() {
                    continue;
                }
                let c = p
                    .chart_index(name)
                    .filter(|c| part.carries(*c))
                    .ok_or_else(|| EngineError::PreconditionViolated(format!("component on `{name}` is not allowed in {}", self.kind)))?;
                if form.degree() + part.shift != z.degree {
                    return Err(EngineError::PreconditionViolated(format!(
                        "component on `{name}` has degree {}",
                        form.degree()
                    )));
                }
                for (idx, key, x) in form.terms() {
                    out.push((
                        Cell {
                            part: pi,
                            chart: c,
                            idx: idx.clone(),
                            key: key.clone(),
                        },
                        x.clone(),
                    ));
                }
            }
        }
        Ok(out)
    }

    /// Coordinates of a cochain that lies in the window.
    pub fn vector_of(&self, z: &Cochain) -> Result<BlockVec, EngineError> {
        let cells = self.cells_of(z)?;
        self.embed(z.degree, cells).map_err(|m| match m {
            Miss::Outside(c) => EngineError::OutsideWindow(self.describe(&c)),
            Miss::NotInSubspace(_) => EngineError::PreconditionViolated(format!("cochain is not an element of {}", self.kind)),
        })
    }

    pub fn describe(&self, cell: &Cell) -> String {
        let p = &self.presentation;
        let chart = &p.charts[cell.chart];
        format!("{} on chart {}", crate::frontend::print_form(&cell_form(p, cell), &chart.vars), chart.name)
    }

    /// Forms of a list of raw entries.
    pub fn cochain_of_cells(&self, r: usize, cells: &[(Cell, Scalar)]) -> Cochain {
        let p = &self.presentation;
        let mut parts: Vec<Vec<(String, TrigForm)>> = self
            .parts
            .iter()
            .map(|part| {
                if r < part.shift {
                    return Vec::new();
                }
                part.charts
                    .iter()
                    .map(|&c| (p.charts[c].name.clone(), TrigForm::zero(p.charts[c].dim, r - part.shift)))
                    .collect()
            })
            .collect();
        for (cell, x) in cells {
            let pos = self.parts[cell.part]
                .charts
                .iter()
                .position(|&c| c == cell.chart)
                .expect("cell chart in part");
            parts[cell.part][pos].1.add_term(&cell.idx, &cell.key, x);
        }
        Cochain { degree: r, parts }
    }

    pub fn cochain(&self, r: usize, v: &BlockVec) -> Cochain {
        self.cochain_of_cells(r, &self.expand(r, v))
    }

    pub fn zero_cochain(&self, r: usize) -> Cochain {
        self.cochain_of_cells(r, &[])
    }

    /// Applies `d` to a cochain given as forms, outside the window too.
    pub fn d_cochain(&self, z: &Cochain) -> Result<Cochain, EngineError> {
        let mut acc: HashMap<Cell, Scalar> = HashMap::new();
        for (cell, x) in self.cells_of(z)? {
            for (c, y) in self.d_cell(&cell) {
                add_into(&mut acc, c, &x * &y);
            }
        }
        let mut cells: Vec<(Cell, Scalar)> = acc.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        cells.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(self.cochain_of_cells(z.degree + 1, &cells))
    }

    /// Euler characteristic of the cochain spaces.
    pub fn euler_characteristic(&self) -> i64 {
        (0..=self.top + 1)
            .map(|r| if r % 2 == 0 { self.dim(r) as i64 } else { -(self.dim(r) as i64) })
            .sum()
    }
}

pub fn blockvec_is_zero(v: &BlockVec) -> bool {
    v.values().all(|x| x.iter().all(Scalar::is_zero))
}

pub fn blockvec_add(a: &BlockVec, b: &BlockVec, scale: &Scalar) -> BlockVec {
    let mut out = a.clone();
    for (k, y) in b {
        let e = out.entry(*k).or_insert_with(|| vec![Scalar::zero(); y.len()]);
        for (o, x) in e.iter_mut().zip(y) {
            if !x.is_zero() {
                *o = &*o + &(x * scale);
            }
        }
    }
    out.retain(|_, x| x.iter().any(|s| !s.is_zero()));
    out
}

pub fn blockvec_eq(a: &BlockVec, b: &BlockVec) -> bool {
    blockvec_is_zero(&blockvec_add(a, b, &-Scalar::one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{parse_form, parse_presentation};
    use crate::scalars::ConstantSystem;

    const CIRCLE: &str = include_str!("../../data/circle.dpr");
    const TORUS: &str = include_str!("../../data/torus.dpr");

    #[test]
    fn circle_global_functions_at_degree_zero() {
        let p = parse_presentation(CIRCLE).unwrap();
        let t = Truncation::lattice(2, &ConstantSystem::empty(), 0, 1);
        let c = CochainComplex::build(&p, ComplexKind::GlobalOmega, &t).unwrap();
        assert_eq!(c.dim(0), 5);
    }

    #[test]
    fn circle_kernel_relative_vanishes() {
        let p = parse_presentation(CIRCLE).unwrap();
        let t = Truncation::lattice(2, &p.constants, 1, 1);
        let c = CochainComplex::build(&p, ComplexKind::KernelRelative(PlotRef::Chart("Uplus".into())), &t).unwrap();
        assert_eq!((c.dim(0), c.dim(1), c.dim(2)), (0, 0, 0));
    }

    #[test]
    fn torus_bott_tu_squares_to_zero() {
        let p = parse_presentation(TORUS).unwrap();
        let t = Truncation::lattice(2, &p.constants, 1, 1);
        let c = CochainComplex::build(&p, ComplexKind::BottTu(PlotRef::Chart("T".into())), &t).unwrap();
        assert_eq!(c.top(), 2);
        for b in c.blocks() {
            for r in 0..2 {
                assert!(b.d(r + 1).mul(&b.d(r)).is_zero());
            }
        }
    }

    #[test]
    fn cochains_round_trip() {
        let p = parse_presentation(CIRCLE).unwrap();
        let t = Truncation::default_for(&p);
        let c = CochainComplex::build(&p, ComplexKind::GlobalOmega, &t).unwrap();
        let f = |chart: &str, s: &str| parse_form(s, p.chart(chart).unwrap(), &p.constants).unwrap();
        let g = p
            .global_build(vec![("Uplus".into(), f("Uplus", "cos(2*pi*t)")), ("Uminus".into(), f("Uminus", "-cos(2*pi*s)"))])
            .unwrap();
        let z = Cochain::from_global(&g);
        let v = c.vector_of(&z).unwrap();
        assert_eq!(c.cochain(0, &v), z);
        let dz = c.cochain(1, &c.d_vec(0, &v));
        assert_eq!(dz, c.d_cochain(&z).unwrap());
        let bad = Cochain::from_global(&p.global_build(vec![("Uplus".into(), f("Uplus", "0")), ("Uminus".into(), f("Uminus", "0"))]).unwrap());
        assert!(c.vector_of(&bad).unwrap().is_empty());
    }

    #[test]
    fn unknown_plot_is_rejected() {
        let p = parse_presentation(CIRCLE).unwrap();
        let t = Truncation::default_for(&p);
        let err = CochainComplex::build(&p, ComplexKind::Horizontal(PlotRef::Chart("W".into())), &t).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
