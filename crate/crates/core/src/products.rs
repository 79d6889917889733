//! Cup products in absolute, kernel-relative and Bott–Tu cohomology, the
//! horizontal lift, cup length, cohomological nullity and the hcat bound.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::complexes::{
    restriction_map, Cell, Cochain, CochainComplex, ComplexKind, FrequencyClasses, Node, Truncation,
};
use crate::homology::{class_of, cohomology, induced_rank, ClassCoords, CohomologyBasis};
use crate::linalg::Matrix;
use crate::presentation::{is_horizontal, Diagnostic, HorizontalVerdict, PlotRef, Presentation};
use crate::scalars::Scalar;
use crate::trigform::{TermKey, TrigForm, TrigPoly};
use crate::EngineError;

/// Global-form cohomology with bases in every degree.
#[derive(Clone, Debug)]
pub struct Ring {
    pub complex: CochainComplex,
    pub bases: Vec<CohomologyBasis>,
}

impl Ring {
    pub fn new(p: &Presentation, t: &Truncation) -> Result<Self, EngineError> {
        let complex = CochainComplex::build(p, ComplexKind::GlobalOmega, t)?;
        Self::of(complex)
    }

    pub fn of(complex: CochainComplex) -> Result<Self, EngineError> {
        let bases = (0..=complex.top() + 1)
            .map(|r| cohomology(&complex, r))
            .collect::<Result<_, _>>()?;
        Ok(Ring { complex, bases })
    }

    pub fn betti(&self) -> Vec<usize> {
        self.bases[..=self.complex.top()].iter().map(|h| h.betti).collect()
    }

    pub fn rep(&self, r: usize, i: usize) -> Cochain {
        self.bases[r].rep_cochain(&self.complex, i)
    }

    /// Class coordinates; zero for cochains above the top degree.
    pub fn classify(&self, z: &Cochain) -> Result<ClassCoords, EngineError> {
        classify_in(&self.complex, &self.bases, z)
    }

    /// `Σ coords_i · rep_i` in degree `r`.
    pub fn combination(&self, r: usize, coords: &[Scalar]) -> Cochain {
        let mut out = self.complex.zero_cochain(r);
        for (i, s) in coords.iter().enumerate() {
            if !s.is_zero() {
                out = out.add(&self.rep(r, i).scale(s));
            }
        }
        out
    }
}

fn classify_in(c: &CochainComplex, bases: &[CohomologyBasis], z: &Cochain) -> Result<ClassCoords, EngineError> {
    if z.degree >= bases.len() {
        if z.is_zero() {
            return Ok(ClassCoords {
                coords: Vec::new(),
                primitive: c.zero_cochain(z.degree.saturating_sub(1)),
            });
        }
        return Err(EngineError::guard("nonzero cochain above the top degree"));
    }
    class_of(c, &bases[z.degree], z)
}

/// Componentwise wedge of two chart-form lists, matched by chart name.
pub fn wedge_components(
    a: &[(String, TrigForm)],
    b: &[(String, TrigForm)],
) -> Result<Vec<(String, TrigForm)>, EngineError> {
    a.iter()
        .map(|(n, x)| {
            let y = b
                .iter()
                .find(|(m, _)| m == n)
                .map(|(_, y)| y)
                .ok_or_else(|| EngineError::PreconditionViolated(format!("no component on `{n}`")))?;
            Ok((n.clone(), x.wedge(y)?))
        })
        .collect()
}

fn wedge_cochains(x: &Cochain, y: &Cochain) -> Result<Cochain, EngineError> {
    Ok(Cochain {
        degree: x.degree + y.degree,
        parts: vec![wedge_components(&x.parts[0], &y.parts[0])?],
    })
}

fn check_cocycle(c: &CochainComplex, z: &Cochain) -> Result<(), EngineError> {
    if !c.d_cochain(z)?.is_zero() {
        return Err(EngineError::NotACocycle(format!("d z ≠ 0 in {}", c.kind())));
    }
    Ok(())
}

/// `[ω] ⌣ [μ] = [ω ∧ μ]` in `H(X)`.
pub fn cup_absolute(ring: &Ring, x: &Cochain, y: &Cochain) -> Result<ClassCoords, EngineError> {
    check_cocycle(&ring.complex, x)?;
    check_cocycle(&ring.complex, y)?;
    ring.classify(&wedge_cochains(x, y)?)
}

/// Kernel-relative cohomology `H(X, α)` with bases.
pub struct KernelTheory {
    pub plot: PlotRef,
    pub complex: CochainComplex,
    pub bases: Vec<CohomologyBasis>,
}

impl KernelTheory {
    pub fn new(p: &Presentation, plot: &PlotRef, t: &Truncation) -> Result<Self, EngineError> {
        let complex = CochainComplex::build(p, ComplexKind::KernelRelative(plot.clone()), t)?;
        let bases = (0..=complex.top() + 1)
            .map(|r| cohomology(&complex, r))
            .collect::<Result<_, _>>()?;
        Ok(KernelTheory {
            plot: plot.clone(),
            complex,
            bases,
        })
    }

    pub fn classify(&self, z: &Cochain) -> Result<ClassCoords, EngineError> {
        classify_in(&self.complex, &self.bases, z)
    }
}

/// `H^r(X, α) × H^s(X, β) → H^{r+s}(X, α∗β)`, `[ω] ⌣ [μ] = [ω ∧ μ]`.
pub fn cup_rel_kernel(
    a: &KernelTheory,
    b: &KernelTheory,
    ab: &KernelTheory,
    x: &Cochain,
    y: &Cochain,
) -> Result<ClassCoords, EngineError> {
    if ab.plot != a.plot.join_with(&b.plot) {
        return Err(EngineError::PreconditionViolated(format!(
            "product lands in H(X, {}) not H(X, {})",
            a.plot.join_with(&b.plot),
            ab.plot
        )));
    }
    for (theory, z) in [(a, x), (b, y)] {
        theory.complex.cells_of(z)?;
        for chart in theory.plot.charts() {
            if z.component(0, &chart).is_some_and(|f| !f.is_zero()) {
                return Err(EngineError::PreconditionViolated(format!("form does not vanish on `{chart}`")));
            }
        }
        check_cocycle(&theory.complex, z)?;
    }
    let mut product = wedge_cochains(x, y)?;
    for chart in ab.plot.charts() {
        if product.component(0, &chart).is_some_and(|f| !f.is_zero()) {
            return Err(EngineError::guard(format!("relative product does not vanish on `{chart}`")));
        }
    }
    // The kernel complex has no components on the zero charts.
    let zero = ab.plot.charts();
    product.parts[0].retain(|(n, _)| !zero.contains(n));
    ab.classify(&product)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LiftStatus {
    Unique,
    NonUnique { dimension: usize },
}

/// `θ̃ = (θ, θ₂)` on the join of two charts.
#[derive(Clone, Debug, PartialEq)]
pub struct Lift {
    pub alpha: String,
    pub beta: String,
    pub theta: TrigForm,
    pub lifted: TrigForm,
    pub status: LiftStatus,
}

impl Lift {
    pub fn join_components(&self) -> Vec<(String, TrigForm)> {
        if self.alpha == self.beta {
            vec![(self.alpha.clone(), self.theta.clone())]
        } else {
            vec![(self.alpha.clone(), self.theta.clone()), (self.beta.clone(), self.lifted.clone())]
        }
    }
}

/// The blocks constraining a lift: those between the two charts with the
/// `alpha` leg first, and the self-blocks of `beta`.
fn lift_blocks<'a>(
    p: &'a Presentation,
    alpha: &str,
    beta: &str,
) -> (Vec<(&'a str, &'a crate::trigform::AffineMap, &'a crate::trigform::AffineMap)>, Vec<&'a crate::presentation::RelationBlock>) {
    let mut between = Vec::new();
    let mut own = Vec::new();
    for r in &p.relations {
        if r.left.chart == alpha && r.right.chart == beta {
            between.push((r.name.as_str(), &r.left.map, &r.right.map));
        } else if r.left.chart == beta && r.right.chart == alpha {
            between.push((r.name.as_str(), &r.right.map, &r.left.map));
        } else if r.left.chart == beta && r.right.chart == beta {
            own.push(r);
        }
    }
    (between, own)
}

/// Linear system `V-leg*θ₂ = U-leg*θ` plus horizontality of `θ₂`, over the
/// `beta` cells of the given nodes. Returns the matrix, right-hand side and
/// unknown cells.
#[allow(clippy::type_complexity)]
fn lift_system(
    p: &Presentation,
    t: &Truncation,
    alpha: &str,
    beta: &str,
    theta: &TrigForm,
    nodes: &[Node],
    poly_deg: u32,
) -> Result<(Matrix, Vec<Scalar>, Vec<(Vec<usize>, TermKey)>), EngineError> {
    let v = p.chart_index(beta).expect("checked");
    let dim = p.charts[v].dim;
    let q = theta.degree();
    let unknowns: Vec<(Vec<usize>, TermKey)> = nodes
        .iter()
        .filter(|(c, _)| *c == v)
        .flat_map(|(_, nu)| t.window(poly_deg, q, nu))
        .collect();
    let (between, own) = lift_blocks(p, alpha, beta);
    let mut rows: HashMap<(String, Vec<usize>, TermKey), usize> = HashMap::new();
    let mut entries: Vec<Vec<(usize, Scalar)>> = Vec::new();
    let mut rhs: Vec<Scalar> = Vec::new();
    let mut row = |key: (String, Vec<usize>, TermKey), entries: &mut Vec<Vec<(usize, Scalar)>>, rhs: &mut Vec<Scalar>| {
        *rows.entry(key).or_insert_with(|| {
            entries.push(Vec::new());
            rhs.push(Scalar::zero());
            entries.len() - 1
        })
    };
    for (name, lu, _) in &between {
        for (idx, key, x) in theta.pullback(lu)?.terms() {
            let i = row((name.to_string(), idx.clone(), key.clone()), &mut entries, &mut rhs);
            rhs[i] = &rhs[i] + x;
        }
    }
    for (j, (idx, key)) in unknowns.iter().enumerate() {
        let cell = TrigForm::from_component(dim, idx.clone(), TrigPoly::term(dim, key.clone(), Scalar::one()));
        for (name, _, lv) in &between {
            for (i2, k2, x) in cell.pullback(lv)?.terms() {
                let i = row((name.to_string(), i2.clone(), k2.clone()), &mut entries, &mut rhs);
                entries[i].push((j, x.clone()));
            }
        }
        for r in &own {
            for (map, sign) in [(&r.left.map, Scalar::one()), (&r.right.map, -Scalar::one())] {
                for (i2, k2, x) in cell.pullback(map)?.terms() {
                    let i = row((r.name.clone(), i2.clone(), k2.clone()), &mut entries, &mut rhs);
                    entries[i].push((j, x * &sign));
                }
            }
        }
    }
    let mut m = Matrix::zeros(entries.len(), unknowns.len());
    for (i, es) in entries.into_iter().enumerate() {
        for (j, x) in es {
            let y = m.get(i, j) + &x;
            m.set(i, j, y);
        }
    }
    Ok((m, rhs, unknowns))
}

/// Lifts an `alpha`-horizontal form to the join `alpha ∗ beta`.
pub fn lift(p: &Presentation, t: &Truncation, alpha: &str, beta: &str, theta: &TrigForm) -> Result<Lift, EngineError> {
    for c in [alpha, beta] {
        p.check_plot(&PlotRef::Chart(c.to_string()))?;
    }
    let u = p.chart_index(alpha).expect("checked");
    let v = p.chart_index(beta).expect("checked");
    if theta.dim() != p.charts[u].dim {
        return Err(EngineError::PreconditionViolated(format!("form is not on chart `{alpha}`")));
    }
    let verdict = is_horizontal(p, &PlotRef::Chart(alpha.into()), &[(alpha.into(), theta.clone())], t.depth)?;
    if let HorizontalVerdict::No { relation, difference } = verdict {
        return Err(EngineError::PreconditionViolated(format!(
            "form is not horizontal along `{relation}`: difference {difference}"
        )));
    }
    if alpha == beta {
        return Ok(Lift {
            alpha: alpha.into(),
            beta: beta.into(),
            theta: theta.clone(),
            lifted: theta.clone(),
            status: LiftStatus::Unique,
        });
    }

    // Particular solution over the frequency orbits of θ.
    let mut orbits: Vec<Vec<Node>> = Vec::new();
    let mut seen: BTreeSet<Node> = BTreeSet::new();
    for (_, key, _) in theta.terms() {
        let node = (u, key.freq.clone());
        if seen.contains(&node) {
            continue;
        }
        let orbit = FrequencyClasses::explore(p, node, None, 4096)?;
        seen.extend(orbit.iter().cloned());
        orbits.push(orbit);
    }
    let need = theta
        .terms()
        .flat_map(|(_, k, _)| k.exps.iter().copied())
        .max()
        .unwrap_or(0)
        .max(t.poly_deg);
    let dim_v = p.charts[v].dim;
    let mut lifted = TrigForm::zero(dim_v, theta.degree());
    for orbit in &orbits {
        let (m, rhs, unknowns) = lift_system(p, t, alpha, beta, &orbit_part(theta, u, orbit), orbit, need)?;
        let sol = if unknowns.is_empty() {
            rhs.iter().all(Scalar::is_zero).then(Vec::new)
        } else {
            m.solve(&rhs)
        };
        let Some(sol) = sol else {
            return Err(EngineError::NoInClassLift(format!(
                "the relation blocks between `{alpha}` and `{beta}` admit no {}-form on `{beta}` matching {}",
                theta.degree(),
                crate::frontend::print_form(theta, &p.charts[u].vars)
            )));
        };
        for ((idx, key), x) in unknowns.iter().zip(sol) {
            if !x.is_zero() {
                lifted.add_term(idx, key, &x);
            }
        }
    }

    // Homogeneous solutions over the whole window.
    let classes = FrequencyClasses::build(p, t)?;
    let zero = TrigForm::zero(p.charts[u].dim, theta.degree());
    let mut nullity = 0;
    for k in 0..classes.len() {
        let nodes = classes.nodes(k);
        if !nodes.iter().any(|(c, _)| *c == v) {
            continue;
        }
        let (m, _, unknowns) = lift_system(p, t, alpha, beta, &zero, nodes, t.poly_deg)?;
        nullity += unknowns.len() - m.rank();
    }

    let lift = Lift {
        alpha: alpha.into(),
        beta: beta.into(),
        theta: theta.clone(),
        lifted,
        status: if nullity == 0 {
            LiftStatus::Unique
        } else {
            LiftStatus::NonUnique { dimension: nullity }
        },
    };
    let join = PlotRef::Join(vec![alpha.into(), beta.into()]);
    if !is_horizontal(p, &join, &lift.join_components(), t.depth)?.is_yes() {
        return Err(EngineError::guard("lift is not horizontal on the join"));
    }
    Ok(lift)
}

fn orbit_part(theta: &TrigForm, chart: usize, orbit: &[Node]) -> TrigForm {
    let mut out = TrigForm::zero(theta.dim(), theta.degree());
    for (idx, key, x) in theta.terms() {
        if orbit.contains(&(chart, key.freq.clone())) {
            out.add_term(idx, key, x);
        }
    }
    out
}

/// A Bott–Tu cochain `(ω, θ)` for a single-chart plot.
#[derive(Clone, Debug, PartialEq)]
pub struct RelPair {
    pub plot: String,
    pub omega: Vec<(String, TrigForm)>,
    pub theta: TrigForm,
    pub degree: usize,
}

impl RelPair {
    pub fn from_cochain(plot: &str, z: &Cochain) -> Result<Self, EngineError> {
        let theta = z
            .component(1, plot)
            .cloned()
            .ok_or_else(|| EngineError::PreconditionViolated(format!("no θ component on `{plot}`")))?;
        Ok(RelPair {
            plot: plot.into(),
            omega: z.parts[0].clone(),
            theta,
            degree: z.degree,
        })
    }

    pub fn to_cochain(&self) -> Cochain {
        Cochain {
            degree: self.degree,
            parts: vec![self.omega.clone(), vec![(self.plot.clone(), self.theta.clone())]],
        }
    }

    fn check_cocycle(&self) -> Result<(), EngineError> {
        for (n, w) in &self.omega {
            if !w.d().is_zero() {
                return Err(EngineError::NotACocycle(format!("dω ≠ 0 on `{n}`")));
            }
        }
        let w = self
            .omega
            .iter()
            .find(|(n, _)| *n == self.plot)
            .map(|(_, w)| w)
            .ok_or_else(|| EngineError::PreconditionViolated(format!("no ω component on `{}`", self.plot)))?;
        if *w != self.theta.d() && !(w.is_zero() && self.theta.d().is_zero()) {
            return Err(EngineError::NotACocycle(format!("α*ω ≠ dθ on `{}`", self.plot)));
        }
        Ok(())
    }
}

/// Bott–Tu relative cohomology `𝓗(X, α)` with bases.
pub struct BottTuTheory {
    pub plot: PlotRef,
    pub complex: CochainComplex,
    pub bases: Vec<CohomologyBasis>,
}

impl BottTuTheory {
    pub fn new(p: &Presentation, plot: PlotRef, t: &Truncation) -> Result<Self, EngineError> {
        let complex = CochainComplex::build(p, ComplexKind::BottTu(plot.clone()), t)?;
        let bases = (0..=complex.top() + 1)
            .map(|r| cohomology(&complex, r))
            .collect::<Result<_, _>>()?;
        Ok(BottTuTheory { plot, complex, bases })
    }

    /// The plot's chart; products are defined for single-chart plots.
    pub fn chart(&self) -> String {
        self.plot.to_string()
    }

    pub fn classify(&self, z: &Cochain) -> Result<Vec<Scalar>, EngineError> {
        if z.degree >= self.bases.len() {
            if z.is_zero() {
                return Ok(Vec::new());
            }
            return Err(EngineError::guard("nonzero cochain above the top degree"));
        }
        Ok(class_of(&self.complex, &self.bases[z.degree], z)?.coords)
    }
}

/// `[(ω,θ)] ⌣ [(μ,τ)] = [(ω∧μ, θ̃∧dτ̃)]` as a cochain of `𝓥Ω(X, α∗β)`,
/// together with the lifts used.
pub struct BottTuProduct {
    pub plot: PlotRef,
    pub cochain: Cochain,
    pub theta_lift: Vec<(String, TrigForm)>,
    pub tau_lift: Vec<(String, TrigForm)>,
}

fn join_plot(a: &str, b: &str) -> PlotRef {
    if a == b {
        PlotRef::Chart(a.into())
    } else {
        PlotRef::Join(vec![a.into(), b.into()])
    }
}

fn unique(l: Lift) -> Result<Lift, EngineError> {
    match l.status {
        LiftStatus::Unique => Ok(l),
        LiftStatus::NonUnique { dimension } => Err(EngineError::NonUnique { dimension }),
    }
}

pub fn cup_rel_bott_tu(p: &Presentation, t: &Truncation, x: &RelPair, y: &RelPair) -> Result<BottTuProduct, EngineError> {
    x.check_cocycle()?;
    y.check_cocycle()?;
    let theta = unique(lift(p, t, &x.plot, &y.plot, &x.theta)?)?.join_components();
    let tau_lift = unique(lift(p, t, &y.plot, &x.plot, &y.theta)?)?;
    let tau: Vec<(String, TrigForm)> = if x.plot == y.plot {
        vec![(y.plot.clone(), y.theta.clone())]
    } else {
        vec![(x.plot.clone(), tau_lift.lifted.clone()), (y.plot.clone(), y.theta.clone())]
    };
    let omega_mu = wedge_components(&x.omega, &y.omega)?;
    let dtau: Vec<(String, TrigForm)> = tau.iter().map(|(n, f)| (n.clone(), f.d())).collect();
    let second = wedge_components(&theta, &dtau)?;
    // (α∗β)*(ω∧μ) = d(θ̃ ∧ dτ̃) on every chart of the join.
    for (n, f) in &second {
        let restricted = omega_mu.iter().find(|(m, _)| m == n).map(|(_, w)| w).expect("join chart");
        if *restricted != f.d() && !(restricted.is_zero() && f.d().is_zero()) {
            return Err(EngineError::guard(format!("product guard fails on `{n}`")));
        }
    }
    Ok(BottTuProduct {
        plot: join_plot(&x.plot, &y.plot),
        cochain: Cochain {
            degree: x.degree + y.degree,
            parts: vec![omega_mu, second],
        },
        theta_lift: theta,
        tau_lift: tau,
    })
}

fn sign(e: usize) -> Scalar {
    if e.is_multiple_of(2) {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

/// `y⌣x − (−1)^{rs} x⌣y = d(0, −(−1)^{rs}(−1)^r θ̃∧τ̃)`, checked as an
/// identity of cochains.
pub fn skew_identity(p: &Presentation, t: &Truncation, x: &RelPair, y: &RelPair) -> Result<bool, EngineError> {
    let (r, s) = (x.degree, y.degree);
    let xy = cup_rel_bott_tu(p, t, x, y)?;
    let yx = cup_rel_bott_tu(p, t, y, x)?;
    let eta: Vec<(String, TrigForm)> = wedge_components(&xy.theta_lift, &xy.tau_lift)?
        .into_iter()
        .map(|(n, f)| (n, f.scale(&(-(sign(r * s) * sign(r))))))
        .collect();
    // d(0, η) = (0, −dη).
    let rhs_second: Vec<(String, TrigForm)> = eta.iter().map(|(n, f)| (n.clone(), f.d().neg())).collect();
    let coeff = sign(r * s);
    let lhs_first: Vec<(String, TrigForm)> = yx.cochain.parts[0]
        .iter()
        .map(|(n, f)| {
            let g = xy.cochain.component(0, n).expect("same charts");
            (n.clone(), f.sub(&g.scale(&coeff)))
        })
        .collect();
    let first_ok = lhs_first.iter().all(|(_, f)| f.is_zero());
    let second_ok = rhs_second.iter().all(|(n, f)| {
        let a = yx.cochain.component(1, n).expect("same join");
        let b = xy.cochain.component(1, n).expect("same join");
        a.sub(&b.scale(&coeff)).sub(f).is_zero()
    });
    Ok(first_ok && second_ok)
}

/// `π(x ⌣ y)` and `π(x) ⌣ π(y)` have the same class in `H(X)`.
pub fn projection_compatible(ring: &Ring, p: &Presentation, t: &Truncation, x: &RelPair, y: &RelPair) -> Result<bool, EngineError> {
    let xy = cup_rel_bott_tu(p, t, x, y)?;
    let lhs = ring.classify(&Cochain {
        degree: xy.cochain.degree,
        parts: vec![xy.cochain.parts[0].clone()],
    })?;
    let cx = ring.classify(&Cochain {
        degree: x.degree,
        parts: vec![x.omega.clone()],
    })?;
    let cy = ring.classify(&Cochain {
        degree: y.degree,
        parts: vec![y.omega.clone()],
    })?;
    let rhs = cup_absolute(ring, &ring.combination(x.degree, &cx.coords), &ring.combination(y.degree, &cy.coords))?;
    Ok(lhs.coords == rhs.coords)
}

/// Least `n` such that every product of `n + 1` positive-degree classes
/// vanishes, with a nonzero `n`-fold product as witness.
#[derive(Clone, Debug, Serialize)]
pub struct CupLength {
    pub length: usize,
    pub witness: Vec<(usize, usize)>,
}

pub fn cup_length(ring: &Ring) -> Result<CupLength, EngineError> {
    let top = ring.complex.top();
    let positive: Vec<(usize, usize)> = (1..=top)
        .flat_map(|r| (0..ring.bases[r].betti).map(move |i| (r, i)))
        .collect();
    let mut best = CupLength {
        length: 0,
        witness: Vec::new(),
    };
    // Products are graded-commutative, so nondecreasing index tuples suffice.
    let mut frontier: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), 0)];
    for n in 1..=top {
        let mut next = Vec::new();
        let mut found = None;
        for (tuple, deg) in &frontier {
            let start = tuple.last().copied().unwrap_or(0);
            for (k, &(r, _)) in positive.iter().enumerate().skip(start) {
                if deg + r > top {
                    continue;
                }
                let mut t2 = tuple.clone();
                t2.push(k);
                next.push((t2, deg + r));
            }
        }
        for (tuple, _) in &next {
            let mut z = ring.rep(positive[tuple[0]].0, positive[tuple[0]].1);
            for &k in &tuple[1..] {
                z = wedge_cochains(&z, &ring.rep(positive[k].0, positive[k].1))?;
            }
            if !ring.classify(&z)?.is_exact() {
                found = Some(tuple.clone());
                break;
            }
        }
        match found {
            Some(tuple) => {
                best = CupLength {
                    length: n,
                    witness: tuple.iter().map(|&k| positive[k]).collect(),
                };
            }
            None => break,
        }
        frontier = next;
    }
    Ok(best)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NullNotion {
    /// `H(X) → H(U)` vanishes in positive degrees.
    ChartCohomology,
    /// `H(X) → H(α)` vanishes in positive degrees.
    HorizontalCohomology,
}

impl std::str::FromStr for NullNotion {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "chart" => Ok(NullNotion::ChartCohomology),
            "horizontal" => Ok(NullNotion::HorizontalCohomology),
            other => Err(format!("unknown nullity notion `{other}` (chart|horizontal)")),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NullReport {
    pub chart: String,
    pub notion: NullNotion,
    /// Rank of the induced map in degrees `1..=top`.
    pub ranks: Vec<usize>,
    pub null: bool,
}

pub fn null_check(ring: &Ring, chart: &str, notion: NullNotion) -> Result<NullReport, EngineError> {
    let c = &ring.complex;
    let kind = match notion {
        NullNotion::ChartCohomology => ComplexKind::ChartOmega(chart.into()),
        NullNotion::HorizontalCohomology => ComplexKind::Horizontal(PlotRef::Chart(chart.into())),
    };
    let target = CochainComplex::build_shared(c.shared_presentation(), kind, c.truncation(), Arc::clone(c.classes()))?;
    let map = restriction_map(c, &target)?;
    let ranks: Vec<usize> = (1..=c.top()).map(|r| induced_rank(&map, &ring.bases[r], &target)).collect();
    Ok(NullReport {
        chart: chart.into(),
        notion,
        null: ranks.iter().all(|&k| k == 0),
        ranks,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct HcatReport {
    pub notion: NullNotion,
    pub family: Vec<String>,
    pub members: Vec<NullReport>,
    pub generating: bool,
    /// `hcat ≤ bound` when the family is generating and null.
    pub bound: Option<usize>,
    pub cup_length: usize,
    /// Set when the cup length meets the bound.
    pub hcat: Option<usize>,
    pub diagnostics: Vec<Diagnostic>,
}

impl HcatReport {
    pub fn theorem_holds(&self) -> bool {
        self.bound.is_none_or(|b| self.cup_length <= b)
    }
}

pub fn hcat_check(ring: &Ring, family: &[String], notion: NullNotion) -> Result<HcatReport, EngineError> {
    let p = ring.complex.presentation();
    if family.is_empty() {
        return Err(EngineError::Input("empty family".into()));
    }
    for c in family {
        p.check_plot(&PlotRef::Chart(c.clone()))?;
    }
    let members = family
        .iter()
        .map(|c| null_check(ring, c, notion))
        .collect::<Result<Vec<_>, _>>()?;
    let generating = p.charts.iter().all(|c| family.contains(&c.name));
    let all_null = members.iter().all(|m| m.null);
    let bound = (generating && all_null).then(|| family.len() - 1);
    let cup = cup_length(ring)?.length;
    let mut diagnostics = Vec::new();
    if !generating {
        diagnostics.push(Diagnostic::new("NOT-GENERATING", "family does not contain every chart; no bound"));
    }
    for m in members.iter().filter(|m| !m.null) {
        diagnostics.push(Diagnostic::new(
            "NOT-NULL",
            format!("`{}` is not cohomologically null (induced ranks {:?})", m.chart, m.ranks),
        ));
    }
    if let Some(b) = bound {
        if cup > b {
            diagnostics.push(Diagnostic::new(
                "THEOREM-VIOLATION",
                format!("cup length {cup} exceeds the hcat bound {b} under the {notion:?} notion"),
            ));
        }
    }
    Ok(HcatReport {
        notion,
        family: family.to_vec(),
        hcat: bound.filter(|&b| b == cup),
        members,
        generating,
        bound,
        cup_length: cup,
        diagnostics,
    })
}

/// Raw cells of a cochain, for callers that perturb cochains.
pub fn cells(c: &CochainComplex, z: &Cochain) -> Result<Vec<(Cell, Scalar)>, EngineError> {
    c.cells_of(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{parse_form, parse_presentation};

    const CIRCLE: &str = include_str!("../data/circle.dpr");
    const TORUS: &str = include_str!("../data/torus.dpr");
    const LINE: &str = include_str!("../data/line.dpr");
    const TORUS2: &str = include_str!("../data/torus2.dpr");
    const TWO_CIRCLES: &str = include_str!("../data/two_circles.dpr");

    fn small(p: &Presentation) -> Truncation {
        Truncation::lattice(2, &p.constants, 1, 1)
    }

    #[test]
    fn circle_products_and_length() {
        let p = parse_presentation(CIRCLE).unwrap();
        let ring = Ring::new(&p, &small(&p)).unwrap();
        let one = ring.rep(0, 0);
        let vol = ring.rep(1, 0);
        let k = cup_absolute(&ring, &one, &vol).unwrap();
        assert!(!k.is_exact());
        assert!(ring.classify(&wedge_cochains(&vol, &vol).unwrap()).unwrap().is_exact());
        assert_eq!(cup_length(&ring).unwrap().length, 1);
    }

    #[test]
    fn cup_lengths_of_examples() {
        for (src, expect) in [(LINE, 0), (TORUS, 1), (TORUS2, 2)] {
            let p = parse_presentation(src).unwrap();
            let ring = Ring::new(&p, &small(&p)).unwrap();
            assert_eq!(cup_length(&ring).unwrap().length, expect, "{}", p.space);
        }
    }

    #[test]
    fn lifts_on_the_circle() {
        let p = parse_presentation(CIRCLE).unwrap();
        let t = small(&p);
        let f = |c: &str, s: &str| parse_form(s, p.chart(c).unwrap(), &p.constants).unwrap();
        let l = lift(&p, &t, "Uplus", "Uminus", &f("Uplus", "cos(2*pi*t)")).unwrap();
        assert_eq!(l.lifted, f("Uminus", "-cos(2*pi*s)"));
        assert_eq!(l.status, LiftStatus::Unique);
        assert_eq!(lift(&p, &t, "Uplus", "Uminus", &f("Uplus", "dt")).unwrap().lifted, f("Uminus", "ds"));
        let half = f("Uplus", "exp(2*pi*i*(1/2)*t)");
        assert!(matches!(lift(&p, &t, "Uplus", "Uminus", &half), Err(EngineError::NoInClassLift(_))));
    }

    #[test]
    fn circle_hcat_both_notions() {
        let p = parse_presentation(CIRCLE).unwrap();
        let ring = Ring::new(&p, &small(&p)).unwrap();
        let family = vec!["Uplus".to_string(), "Uminus".to_string()];
        for notion in [NullNotion::ChartCohomology, NullNotion::HorizontalCohomology] {
            let r = hcat_check(&ring, &family, notion).unwrap();
            assert_eq!(r.bound, Some(1));
            assert_eq!(r.hcat, Some(1));
            assert!(r.theorem_holds());
        }
    }

    #[test]
    fn torus_nullity_notions_differ() {
        let p = parse_presentation(TORUS).unwrap();
        let ring = Ring::new(&p, &small(&p)).unwrap();
        assert!(null_check(&ring, "T", NullNotion::ChartCohomology).unwrap().null);
        assert!(!null_check(&ring, "T", NullNotion::HorizontalCohomology).unwrap().null);
        let chart = hcat_check(&ring, &["T".into()], NullNotion::ChartCohomology).unwrap();
        assert!(!chart.theorem_holds());
        assert!(chart.diagnostics.iter().any(|d| d.code == "THEOREM-VIOLATION"));
        let horizontal = hcat_check(&ring, &["T".into()], NullNotion::HorizontalCohomology).unwrap();
        assert!(horizontal.theorem_holds());
        assert_eq!(horizontal.bound, None);
    }

    #[test]
    fn bott_tu_products_on_the_circle() {
        let p = parse_presentation(CIRCLE).unwrap();
        let t = small(&p);
        let ring = Ring::new(&p, &t).unwrap();
        let f = |c: &str, s: &str| parse_form(s, p.chart(c).unwrap(), &p.constants).unwrap();
        let vol = ring.rep(1, 0).parts[0].clone();
        let vol_u = vol.iter().find(|(n, _)| n == "Uplus").unwrap().1.clone();
        assert_eq!(vol_u, f("Uplus", "dt"));
        let theta = f("Uplus", "t");
        let x = RelPair {
            plot: "Uplus".into(),
            omega: vol.clone(),
            theta,
            degree: 1,
        };
        assert!(skew_identity(&p, &t, &x, &x).unwrap());
        let product = cup_rel_bott_tu(&p, &t, &x, &x).unwrap();
        assert_eq!(product.plot, PlotRef::Chart("Uplus".into()));
        assert!(product.cochain.parts[0].iter().all(|(_, f)| f.is_zero()));
        assert!(projection_compatible(&ring, &p, &t, &x, &x).unwrap());
    }

    #[test]
    fn kernel_products_on_two_circles() {
        let p = parse_presentation(TWO_CIRCLES).unwrap();
        let t = small(&p);
        let a = PlotRef::Chart("A".into());
        let k = KernelTheory::new(&p, &a, &t).unwrap();
        assert_eq!(k.bases.iter().take(2).map(|h| h.betti).collect::<Vec<_>>(), vec![1, 1]);
        let one = k.bases[0].rep_cochain(&k.complex, 0);
        let vol = k.bases[1].rep_cochain(&k.complex, 0);
        let c = cup_rel_kernel(&k, &k, &k, &one, &vol).unwrap();
        assert!(!c.is_exact());
        let b = KernelTheory::new(&p, &PlotRef::Chart("B".into()), &t).unwrap();
        assert!(cup_rel_kernel(&k, &b, &k, &one, &vol).is_err());
    }
}
