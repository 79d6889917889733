//! Cohomology of built complexes by exact elimination, class coordinates,
//! induced maps, the long exact sequence of the Bott–Tu complex and the
//! contracting homotopy of quotient plots.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::complexes::{
    blockvec_add, blockvec_eq, rank_of_blockvecs, ses_maps, BlockVec, Cell, ClassBlock, Cochain, CochainComplex,
    GradedMap, Node, Ses, SesDegree, Truncation,
};
use crate::linalg::Matrix;
use crate::presentation::{PlotRef, Presentation};
use crate::scalars::Scalar;
use crate::EngineError;

/// `H^r` of a complex: Betti number and one representative cocycle per
/// basis class, each supported on a single frequency class.
#[derive(Clone, Debug)]
pub struct CohomologyBasis {
    pub degree: usize,
    pub betti: usize,
    pub reps: Vec<(usize, Vec<Scalar>)>,
}

impl CohomologyBasis {
    pub fn rep(&self, i: usize) -> BlockVec {
        let (k, x) = &self.reps[i];
        BlockVec::from([(*k, x.clone())])
    }

    pub fn rep_cochain(&self, c: &CochainComplex, i: usize) -> Cochain {
        c.cochain(self.degree, &self.rep(i))
    }
}

fn image_columns(block: &ClassBlock, r: usize) -> Vec<Vec<Scalar>> {
    if r == 0 {
        return Vec::new();
    }
    block.d(r - 1).columns()
}

fn rank_cols(len: usize, cols: &[Vec<Scalar>]) -> usize {
    crate::linalg::rank_of_columns(len, cols)
}

/// Representatives in one class block: kernel basis vectors of `d_r` that
/// extend a basis of the image of `d_{r-1}`.
fn block_reps(block: &ClassBlock, r: usize) -> Vec<Vec<Scalar>> {
    let n = block.dim(r);
    if n == 0 {
        return Vec::new();
    }
    let (kernel, _) = block.d(r).nullspace();
    let mut cols = image_columns(block, r);
    let mut rank = rank_cols(n, &cols);
    let mut reps = Vec::new();
    for z in kernel {
        if rank == n {
            break;
        }
        cols.push(z.clone());
        let next = rank_cols(n, &cols);
        if next > rank {
            rank = next;
            reps.push(z);
        } else {
            cols.pop();
        }
    }
    reps
}

pub fn cohomology(c: &CochainComplex, r: usize) -> Result<CohomologyBasis, EngineError> {
    if r > c.top() + 1 {
        return Err(EngineError::DegreeOutOfRange {
            degree: r,
            max: c.top() + 1,
        });
    }
    let mut reps = Vec::new();
    for (k, block) in c.blocks().iter().enumerate() {
        for z in block_reps(block, r) {
            reps.push((k, z));
        }
    }
    Ok(CohomologyBasis {
        degree: r,
        betti: reps.len(),
        reps,
    })
}

/// Betti numbers in degrees `0..=top`.
pub fn betti_numbers(c: &CochainComplex) -> Result<Vec<usize>, EngineError> {
    (0..=c.top()).map(|r| cohomology(c, r).map(|h| h.betti)).collect()
}

/// `z = Σ coords_i · rep_i + d(primitive)`.
#[derive(Clone, Debug)]
pub struct ClassCoords {
    pub coords: Vec<Scalar>,
    pub primitive: Cochain,
}

impl ClassCoords {
    pub fn is_exact(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }
}

/// A class id (none for ad-hoc), its nodes and the cochain's cells in it.
type Group = (Option<usize>, Vec<Node>, Vec<(Cell, Scalar)>);

/// Class of a cocycle given as forms. Cochains leaving the window are
/// handled on an enlarged block over their frequency orbits.
pub fn class_of(c: &CochainComplex, h: &CohomologyBasis, z: &Cochain) -> Result<ClassCoords, EngineError> {
    let r = z.degree;
    if r != h.degree {
        return Err(EngineError::PreconditionViolated(format!(
            "cochain of degree {r} against a basis of degree {}",
            h.degree
        )));
    }
    let cells = c.cells_of(z)?;
    let t = c.truncation();

    let mut orbit_of: HashMap<Node, usize> = HashMap::new();
    let mut groups: Vec<Group> = Vec::new();
    for (cell, x) in cells {
        let node = CochainComplex::node_of(&cell);
        let g = match orbit_of.get(&node) {
            Some(&g) => g,
            None => {
                let (class, nodes) = c.orbit(&node)?;
                let g = groups.len();
                for n in &nodes {
                    orbit_of.insert(n.clone(), g);
                }
                groups.push((class, nodes, Vec::new()));
                g
            }
        };
        groups[g].2.push((cell, x));
    }

    let mut coords = vec![Scalar::zero(); h.betti];
    let mut primitive_cells = Vec::new();
    for (class, nodes, cells) in groups {
        let default = class.map(|k| c.block(k)).filter(|b| b.raw_of(r, &cells).is_ok());
        let adhoc;
        let block = match default {
            Some(b) => b,
            None => {
                let need = cells
                    .iter()
                    .flat_map(|(cell, _)| cell.key.exps.iter().copied())
                    .max()
                    .unwrap_or(0)
                    .max(t.poly_deg);
                adhoc = c.build_block(nodes, need)?;
                &adhoc
            }
        };
        let raw = block.raw_of(r, &cells).map_err(|cell| EngineError::OutsideWindow(c.describe(&cell)))?;
        let space = block.space(r).expect("degree in range");
        let x = space
            .coords(&raw)
            .ok_or_else(|| EngineError::PreconditionViolated(format!("cochain is not an element of {}", c.kind())))?;
        if block.d(r).mul_vec(&x).iter().any(|s| !s.is_zero()) {
            return Err(EngineError::NotACocycle(format!("d of the {} component is nonzero", c.kind())));
        }
        // Representatives of this class, carried into `block`.
        let mut rep_index = Vec::new();
        let mut rep_cols = Vec::new();
        if let Some(k) = class {
            let home = c.block(k);
            for (i, (kk, rep)) in h.reps.iter().enumerate() {
                if *kk != k {
                    continue;
                }
                let rep_cells: Vec<(Cell, Scalar)> = home
                    .space(r)
                    .expect("rep degree")
                    .cells()
                    .iter()
                    .cloned()
                    .zip(home.space(r).unwrap().raw(rep))
                    .filter(|(_, s)| !s.is_zero())
                    .collect();
                let rraw = block
                    .raw_of(r, &rep_cells)
                    .map_err(|_| EngineError::guard("representative outside its enlarged block"))?;
                rep_cols.push(space.coords(&rraw).ok_or_else(|| EngineError::guard("representative not in enlarged block"))?);
                rep_index.push(i);
            }
        }
        let image = image_columns(block, r);
        let n_image = image.len();
        let mut cols = image;
        cols.extend(rep_cols);
        let solution = if cols.is_empty() {
            x.iter().all(Scalar::is_zero).then(Vec::new)
        } else {
            Matrix::from_columns(x.len(), &cols).solve(&x)
        };
        let Some(sol) = solution else {
            return Err(if block.poly_deg == t.poly_deg && class.is_some() {
                EngineError::guard("cocycle not spanned by image and representatives")
            } else {
                EngineError::OutsideWindow(format!(
                    "cocycle class over frequency orbit of {} is not represented in the window",
                    c.describe(&cells[0].0)
                ))
            });
        };
        for (pos, i) in rep_index.iter().enumerate() {
            coords[*i] = sol[n_image + pos].clone();
        }
        if r > 0 && n_image > 0 {
            let prim = block.space(r - 1).expect("degree").raw(&sol[..n_image]);
            for (cell, s) in block.space(r - 1).unwrap().cells().iter().zip(prim) {
                if !s.is_zero() {
                    primitive_cells.push((cell.clone(), s));
                }
            }
        }
    }
    let primitive = c.cochain_of_cells(r.saturating_sub(1), &primitive_cells);

    let mut check = z.clone();
    for (i, s) in coords.iter().enumerate() {
        if !s.is_zero() {
            check = check.sub(&h.rep_cochain(c, i).scale(s));
        }
    }
    if r > 0 {
        check = check.sub(&c.d_cochain(&primitive)?);
    }
    if !check.is_zero() {
        return Err(EngineError::guard("class decomposition does not reconstruct the cocycle"));
    }
    Ok(ClassCoords { coords, primitive })
}

/// `dim` of the span of the classes of `vecs` in `H^r(c)`.
pub fn class_rank(c: &CochainComplex, r: usize, vecs: &[BlockVec]) -> usize {
    let touched: std::collections::BTreeSet<usize> = vecs.iter().flat_map(|v| v.keys().copied()).collect();
    let mut image: Vec<BlockVec> = Vec::new();
    if r > 0 {
        for &k in &touched {
            for col in c.block(k).d(r - 1).columns() {
                image.push(BlockVec::from([(k, col)]));
            }
        }
    }
    let base = rank_of_blockvecs(&image);
    image.extend(vecs.iter().cloned());
    rank_of_blockvecs(&image) - base
}

/// Rank of the map induced on cohomology by `f` in source degree `r`.
pub fn induced_rank(f: &GradedMap, h: &CohomologyBasis, tgt: &CochainComplex) -> usize {
    let Some(rt) = f.target_degree(h.degree) else { return 0 };
    let images: Vec<BlockVec> = (0..h.betti).map(|i| f.apply(h.degree, &h.rep(i))).collect();
    class_rank(tgt, rt, &images)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LesNode {
    pub label: String,
    pub dim: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LesReport {
    pub plot: String,
    pub ses: Vec<SesDegree>,
    pub betti_bott_tu: Vec<usize>,
    pub betti_global: Vec<usize>,
    pub betti_horizontal: Vec<usize>,
    pub nodes: Vec<LesNode>,
    pub compositions_zero: bool,
}

impl LesReport {
    pub fn all_exact(&self) -> bool {
        self.nodes.iter().all(|n| n.exact) && self.compositions_zero && self.ses.iter().all(SesDegree::holds)
    }
}

/// `… → H^{r−1}(α) →i* 𝓗^r(X,α) →π* H^r(X) →α* H^r(α) → …` for
/// `r ≤ r_max`, checked by exact ranks at every node.
pub fn les_check(p: &Presentation, plot: &PlotRef, t: &Truncation, r_max: usize) -> Result<LesReport, EngineError> {
    let ses = ses_maps(p, plot, t)?;
    les_from_ses(&ses, r_max)
}

pub fn les_from_ses(ses: &Ses, r_max: usize) -> Result<LesReport, EngineError> {
    let r_max = r_max.min(ses.bott_tu.top()).min(ses.global.top());
    let hv: Vec<CohomologyBasis> = (0..=r_max + 1).map(|r| cohomology(&ses.bott_tu, r)).collect::<Result<_, _>>()?;
    let hx: Vec<CohomologyBasis> = (0..=r_max + 1).map(|r| cohomology(&ses.global, r)).collect::<Result<_, _>>()?;
    let ha: Vec<CohomologyBasis> = (0..=r_max + 1).map(|r| cohomology(&ses.horizontal, r)).collect::<Result<_, _>>()?;

    // i*_r : H^{r−1}(α) → 𝓗^r, π*_r : 𝓗^r → H^r(X), α*_r : H^r(X) → H^r(α).
    let i_star = |r: usize| if r == 0 { 0 } else { induced_rank(&ses.i, &ha[r - 1], &ses.bott_tu) };
    let pi_star = |r: usize| induced_rank(&ses.pi, &hv[r], &ses.global);
    let a_star = |r: usize| induced_rank(&ses.restrict, &hx[r], &ses.horizontal);

    let mut nodes = Vec::new();
    for r in 0..=r_max {
        let entries = [
            (format!("VH^{r}(X,{})", ses.plot), hv[r].betti, i_star(r), pi_star(r)),
            (format!("H^{r}(X)"), hx[r].betti, pi_star(r), a_star(r)),
            (format!("H^{r}({})", ses.plot), ha[r].betti, a_star(r), i_star(r + 1)),
        ];
        for (label, dim, rank_in, rank_out) in entries {
            nodes.push(LesNode {
                exact: rank_in + rank_out == dim,
                label,
                dim,
                rank_in,
                rank_out,
            });
        }
    }

    let mut compositions_zero = true;
    for r in 0..=r_max {
        let through_pi: Vec<BlockVec> = (0..hv[r].betti)
            .map(|i| ses.restrict.apply(r, &ses.pi.apply(r, &hv[r].rep(i))))
            .collect();
        let through_a: Vec<BlockVec> = (0..hx[r].betti)
            .map(|i| ses.i.apply(r, &ses.restrict.apply(r, &hx[r].rep(i))))
            .collect();
        let through_i: Vec<BlockVec> = if r == 0 {
            Vec::new()
        } else {
            (0..ha[r - 1].betti)
                .map(|i| ses.pi.apply(r, &ses.i.apply(r - 1, &ha[r - 1].rep(i))))
                .collect()
        };
        compositions_zero &= class_rank(&ses.horizontal, r, &through_pi) == 0
            && class_rank(&ses.bott_tu, r + 1, &through_a) == 0
            && class_rank(&ses.global, r, &through_i) == 0;
    }

    Ok(LesReport {
        plot: ses.plot.to_string(),
        ses: ses.check(),
        betti_bott_tu: hv[..=r_max].iter().map(|h| h.betti).collect(),
        betti_global: hx[..=r_max].iter().map(|h| h.betti).collect(),
        betti_horizontal: ha[..=r_max].iter().map(|h| h.betti).collect(),
        nodes,
        compositions_zero,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct HomotopyReport {
    pub plot: String,
    pub degrees_checked: Vec<usize>,
    pub identity_holds: bool,
    pub betti_bott_tu: Vec<usize>,
}

/// For a quotient-like plot, checks `d h + h d = id` on `𝓥Ω(X, α)` with
/// `h(ω, θ) = ((α*)⁻¹θ, 0)`.
pub fn homotopy_check(p: &Presentation, plot: &PlotRef, t: &Truncation) -> Result<HomotopyReport, EngineError> {
    let ses = ses_maps(p, plot, t)?;
    let (x, a, v) = (&ses.global, &ses.horizontal, &ses.bott_tu);

    // (α*)⁻¹ per class and form degree.
    let mut inverse: BTreeMap<(usize, usize), Matrix> = BTreeMap::new();
    for q in 0..=x.top() {
        for k in 0..x.blocks().len() {
            let (n, m) = (x.block(k).dim(q), a.block(k).dim(q));
            if n == 0 && m == 0 {
                continue;
            }
            let mut cols = Vec::new();
            for j in 0..n {
                let img = ses.restrict.apply(q, &x.unit(q, k, j));
                if img.keys().any(|&kk| kk != k) {
                    return Err(EngineError::guard("restriction mixes frequency classes"));
                }
                cols.push(img.get(&k).cloned().unwrap_or_else(|| vec![Scalar::zero(); m]));
            }
            let mat = Matrix::from_columns(m, &cols);
            let inv = mat.inverse().ok_or_else(|| {
                EngineError::NotQuotientLike(format!(
                    "restriction Omega^{q}(X) -> Omega^{q}({plot}) is not invertible on frequency class {k} (dimensions {n} -> {m}, rank {})",
                    mat.rank()
                ))
            })?;
            inverse.insert((q, k), inv);
        }
    }

    let h = |r: usize, e: &BlockVec| -> Result<BlockVec, EngineError> {
        if r == 0 {
            return Ok(BlockVec::new());
        }
        let theta: Vec<(Cell, Scalar)> = v
            .expand(r, e)
            .into_iter()
            .filter(|(c, _)| c.part == 1)
            .map(|(c, s)| (Cell { part: 0, ..c }, s))
            .collect();
        let theta = a.embed(r - 1, theta).map_err(|_| EngineError::guard("theta outside Omega(alpha)"))?;
        let mut omega = BlockVec::new();
        for (k, y) in theta {
            let inv = &inverse[&(r - 1, k)];
            omega.insert(k, inv.mul_vec(&y));
        }
        v.embed(r - 1, x.expand(r - 1, &omega))
            .map_err(|_| EngineError::guard("h leaves the Bott–Tu complex"))
    };

    let mut identity_holds = true;
    let mut degrees_checked = Vec::new();
    for r in 0..=v.top() {
        for k in 0..v.blocks().len() {
            for j in 0..v.block(k).dim(r) {
                let e = v.unit(r, k, j);
                let dh = if r == 0 { BlockVec::new() } else { v.d_vec(r - 1, &h(r, &e)?) };
                let hd = h(r + 1, &v.d_vec(r, &e))?;
                let sum = blockvec_add(&dh, &hd, &Scalar::one());
                identity_holds &= blockvec_eq(&sum, &e);
            }
        }
        degrees_checked.push(r);
    }
    Ok(HomotopyReport {
        plot: plot.to_string(),
        degrees_checked,
        identity_holds,
        betti_bott_tu: betti_numbers(v)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::ComplexKind;
    use crate::frontend::{parse_form, parse_presentation};

    const CIRCLE: &str = include_str!("../data/circle.dpr");
    const TORUS: &str = include_str!("../data/torus.dpr");

    #[test]
    fn circle_betti_and_volume() {
        let p = parse_presentation(CIRCLE).unwrap();
        let t = Truncation::default_for(&p);
        let c = CochainComplex::build(&p, ComplexKind::GlobalOmega, &t).unwrap();
        assert_eq!(betti_numbers(&c).unwrap(), vec![1, 1]);
        let h1 = cohomology(&c, 1).unwrap();
        let f = |chart: &str, s: &str| parse_form(s, p.chart(chart).unwrap(), &p.constants).unwrap();
        let vol = p
            .global_build(vec![("Uplus".into(), f("Uplus", "dt")), ("Uminus".into(), f("Uminus", "ds"))])
            .unwrap();
        let k = class_of(&c, &h1, &Cochain::from_global(&vol)).unwrap();
        assert!(!k.is_exact());
    }

    #[test]
    fn chart_forms_are_exact() {
        let p = parse_presentation(CIRCLE).unwrap();
        let t = Truncation::default_for(&p);
        let c = CochainComplex::build(&p, ComplexKind::ChartOmega("Uplus".into()), &t).unwrap();
        let h1 = cohomology(&c, 1).unwrap();
        assert_eq!(h1.betti, 0);
        let dt = parse_form("dt", p.chart("Uplus").unwrap(), &p.constants).unwrap();
        let z = Cochain {
            degree: 1,
            parts: vec![vec![("Uplus".into(), dt)]],
        };
        let k = class_of(&c, &h1, &z).unwrap();
        assert!(k.is_exact());
        let t_form = parse_form("t", p.chart("Uplus").unwrap(), &p.constants).unwrap();
        assert_eq!(k.primitive.parts[0][0].1, t_form);
    }

    #[test]
    fn out_of_window_cocycles_use_enlarged_blocks() {
        let p = parse_presentation(CIRCLE).unwrap();
        let t = Truncation::lattice(1, &p.constants, 1, 1);
        let c = CochainComplex::build(&p, ComplexKind::ChartOmega("Uplus".into()), &t).unwrap();
        let h1 = cohomology(&c, 1).unwrap();
        let w = parse_form("t^3*cos(2*pi*5*t)*dt", p.chart("Uplus").unwrap(), &p.constants).unwrap();
        let z = Cochain {
            degree: 1,
            parts: vec![vec![("Uplus".into(), w)]],
        };
        assert!(class_of(&c, &h1, &z).unwrap().is_exact());
    }

    #[test]
    fn circle_les() {
        let p = parse_presentation(CIRCLE).unwrap();
        let t = Truncation::lattice(2, &p.constants, 1, 1);
        let report = les_check(&p, &PlotRef::Chart("Uplus".into()), &t, 1).unwrap();
        assert!(report.all_exact(), "{report:?}");
        assert_eq!(report.betti_bott_tu, vec![0, 1]);
    }

    #[test]
    fn torus_homotopy_and_circle_refusal() {
        let p = parse_presentation(TORUS).unwrap();
        let t = Truncation::lattice(2, &p.constants, 1, 1);
        let r = homotopy_check(&p, &PlotRef::Chart("T".into()), &t).unwrap();
        assert!(r.identity_holds);
        assert!(r.betti_bott_tu.iter().all(|&b| b == 0));
        let c = parse_presentation(CIRCLE).unwrap();
        let err = homotopy_check(&c, &PlotRef::Chart("Uplus".into()), &t).unwrap_err();
        assert!(matches!(err, EngineError::NotQuotientLike(_)));
    }
}
