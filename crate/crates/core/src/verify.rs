//! Seeded invariant suites and an independent Betti-number oracle.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complexes::{blockvec_add, BlockVec, Cochain, CochainComplex, Truncation};
use crate::homology::CohomologyBasis;
use crate::presentation::{PlotRef, Presentation};
use crate::products::{cup_absolute, cup_rel_bott_tu, cup_rel_kernel, BottTuTheory, KernelTheory, RelPair, Ring};
use crate::scalars::{rat, ConstantSystem, Scalar, ScalarExponent};
use crate::trigform::{index_tuples, AffineMap, FrequencyVector, TermKey, TrigForm};
use crate::EngineError;

/// Outcome of one suite: how many cases ran and the first failures.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub passed: usize,
    /// Draws outside the operation's domain, not counted as cases.
    pub skipped: usize,
    pub failures: Vec<String>,
}

impl SuiteResult {
    fn new(name: &str) -> Self {
        SuiteResult {
            name: name.into(),
            cases: 0,
            passed: 0,
            skipped: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if ok {
            self.passed += 1;
        } else if self.failures.len() < 5 {
            self.failures.push(what());
        }
    }

    pub fn ok(&self) -> bool {
        self.cases > 0 && self.passed == self.cases
    }
}

fn rng_for(seed: u64, suite: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(suite))
}

fn random_scalar(rng: &mut ChaCha8Rng, constants: &ConstantSystem) -> Scalar {
    let mut n = rng.gen_range(-5i64..=5);
    if n == 0 {
        n = 1;
    }
    let mut s = Scalar::ratio(n, rng.gen_range(1i64..=3));
    match rng.gen_range(0..10) {
        0 | 1 => s = s * Scalar::i(),
        2 => s = s * Scalar::pi(),
        3 => {
            if let Some(c) = constants.names().first() {
                s = s * Scalar::constant(c);
            }
        }
        _ => {}
    }
    s
}

fn random_exponent(rng: &mut ChaCha8Rng, constants: &ConstantSystem) -> ScalarExponent {
    let base = match rng.gen_range(0..6) {
        0 | 1 => ScalarExponent::zero(),
        2 => ScalarExponent::from_int(rng.gen_range(-2..=2)),
        3 => ScalarExponent::rational(rat(rng.gen_range(-3..=3), 2)),
        _ => ScalarExponent::from_int(rng.gen_range(-1..=1)),
    };
    match constants.names().first() {
        Some(c) if rng.gen_bool(0.25) => base.add(&ScalarExponent::constant(c).scale(&rat(rng.gen_range(-1..=1), 1))),
        _ => base,
    }
}

/// A random form with at most `terms` basis terms.
pub fn random_form(rng: &mut ChaCha8Rng, dim: usize, degree: usize, terms: usize, constants: &ConstantSystem) -> TrigForm {
    let mut out = TrigForm::zero(dim, degree);
    let tuples = index_tuples(dim, degree);
    if tuples.is_empty() {
        return out;
    }
    for _ in 0..rng.gen_range(1..=terms) {
        let idx = tuples.choose(rng).expect("nonempty").clone();
        let key = TermKey {
            exps: (0..dim).map(|_| rng.gen_range(0..=2)).collect(),
            freq: FrequencyVector((0..dim).map(|_| random_exponent(rng, constants)).collect()),
        };
        out.add_term(&idx, &key, &random_scalar(rng, constants));
    }
    out
}

/// A random affine map `R^source → R^target` with small integer matrix.
pub fn random_affine(rng: &mut ChaCha8Rng, source: usize, target: usize, constants: &ConstantSystem) -> AffineMap {
    let linear = (0..target)
        .map(|_| (0..source).map(|_| rat(rng.gen_range(-2..=2), 1)).collect())
        .collect();
    let translation = (0..target).map(|_| random_exponent(rng, constants)).collect();
    AffineMap::new(source, linear, translation).expect("well-formed map")
}

fn sign(e: usize) -> Scalar {
    if e.is_multiple_of(2) {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

fn suite_constants() -> ConstantSystem {
    ConstantSystem::new(["a"]).expect("one constant")
}

/// `d(ω∧μ) = dω∧μ + (−1)^p ω∧dμ`.
pub fn leibniz_suite(seed: u64, cases: usize) -> SuiteResult {
    let cs = suite_constants();
    let mut rng = rng_for(seed, 1);
    let mut out = SuiteResult::new("leibniz");
    for _ in 0..cases {
        let dim = rng.gen_range(1..=3);
        let p = rng.gen_range(0..=dim);
        let q = rng.gen_range(0..=dim - p);
        let w = random_form(&mut rng, dim, p, 3, &cs);
        let m = random_form(&mut rng, dim, q, 3, &cs);
        let lhs = w.wedge(&m).expect("same chart").d();
        let rhs = w
            .d()
            .wedge(&m)
            .expect("same chart")
            .add(&w.wedge(&m.d()).expect("same chart").scale(&sign(p)));
        out.record(lhs == rhs, || format!("dim {dim}, degrees ({p},{q})"));
    }
    out
}

/// `d(dω) = 0`.
pub fn d_squared_suite(seed: u64, cases: usize) -> SuiteResult {
    let cs = suite_constants();
    let mut rng = rng_for(seed, 2);
    let mut out = SuiteResult::new("d_squared");
    for _ in 0..cases {
        let dim = rng.gen_range(1..=3);
        let p = rng.gen_range(0..=dim);
        let w = random_form(&mut rng, dim, p, 4, &cs);
        out.record(w.d().d().is_zero(), || format!("dim {dim}, degree {p}"));
    }
    out
}

/// `ω∧μ = (−1)^{pq} μ∧ω`.
pub fn commutativity_suite(seed: u64, cases: usize) -> SuiteResult {
    let cs = suite_constants();
    let mut rng = rng_for(seed, 3);
    let mut out = SuiteResult::new("graded_commutativity");
    for _ in 0..cases {
        let dim = rng.gen_range(1..=3);
        let p = rng.gen_range(0..=dim);
        let q = rng.gen_range(0..=dim);
        let w = random_form(&mut rng, dim, p, 3, &cs);
        let m = random_form(&mut rng, dim, q, 3, &cs);
        let lhs = w.wedge(&m).expect("same chart");
        let rhs = m.wedge(&w).expect("same chart").scale(&sign(p * q));
        out.record(lhs == rhs, || format!("dim {dim}, degrees ({p},{q})"));
    }
    out
}

/// `h*` commutes with `∧` and `d`, and `(g∘h)* = h*∘g*`.
pub fn pullback_suite(seed: u64, cases: usize) -> SuiteResult {
    let cs = suite_constants();
    let mut rng = rng_for(seed, 4);
    let mut out = SuiteResult::new("pullback_functoriality");
    for _ in 0..cases {
        let (k, m, n) = (rng.gen_range(1..=3), rng.gen_range(1..=3), rng.gen_range(1..=3));
        let g = random_affine(&mut rng, m, n, &cs);
        let h = random_affine(&mut rng, k, m, &cs);
        let p = rng.gen_range(0..=n);
        let q = rng.gen_range(0..=n - p);
        let w = random_form(&mut rng, n, p, 2, &cs);
        let mu = random_form(&mut rng, n, q, 2, &cs);
        let run = || -> Result<bool, crate::trigform::TrigError> {
            let wedge = w.wedge(&mu)?.pullback(&g)? == w.pullback(&g)?.wedge(&mu.pullback(&g)?)?;
            let d = w.d().pullback(&g)? == w.pullback(&g)?.d();
            let comp = w.pullback(&g.compose(&h)?)? == w.pullback(&g)?.pullback(&h)?;
            Ok(wedge && d && comp)
        };
        let ok = run();
        out.record(ok == Ok(true), || format!("maps {k}→{m}→{n}, degrees ({p},{q}): {ok:?}"));
    }
    out
}

/// Integer combination of basis vectors of one degree.
fn random_vector(rng: &mut ChaCha8Rng, c: &CochainComplex, r: usize) -> BlockVec {
    let mut v = BlockVec::new();
    let live: Vec<usize> = (0..c.blocks().len()).filter(|&k| c.block(k).dim(r) > 0).collect();
    for _ in 0..rng.gen_range(1..=3) {
        let Some(&k) = live.choose(rng) else { break };
        let j = rng.gen_range(0..c.block(k).dim(r));
        let s = Scalar::from_int(rng.gen_range(-3..=3));
        v = blockvec_add(&v, &c.unit(r, k, j), &s);
    }
    v
}

/// A random cocycle of a basis, plus a random coboundary.
fn random_pair(
    rng: &mut ChaCha8Rng,
    c: &CochainComplex,
    h: &CohomologyBasis,
) -> Result<(Cochain, Cochain), EngineError> {
    let r = h.degree;
    let mut z = c.zero_cochain(r);
    for i in 0..h.betti {
        let s = Scalar::from_int(rng.gen_range(-2..=2));
        if !s.is_zero() {
            z = z.add(&h.rep_cochain(c, i).scale(&s));
        }
    }
    let perturbed = if r == 0 {
        z.clone()
    } else {
        let eta = c.cochain(r - 1, &random_vector(rng, c, r - 1));
        z.add(&c.d_cochain(&eta)?)
    };
    Ok((z, perturbed))
}

fn degrees_with_classes(bases: &[CohomologyBasis], min: usize) -> Vec<usize> {
    bases.iter().filter(|h| h.degree >= min && h.betti > 0).map(|h| h.degree).collect()
}

/// Cup classes of absolute cocycles are unchanged by coboundaries.
pub fn well_defined_absolute(p: &Presentation, t: &Truncation, seed: u64, cases: usize) -> Result<SuiteResult, EngineError> {
    let ring = Ring::new(p, t)?;
    let mut rng = rng_for(seed, 5);
    let mut out = SuiteResult::new(&format!("well_defined_absolute[{}]", p.space));
    let degrees = degrees_with_classes(&ring.bases, 0);
    for _ in 0..cases {
        let (r, s) = (*degrees.choose(&mut rng).expect("H^0"), *degrees.choose(&mut rng).expect("H^0"));
        let (x, x2) = random_pair(&mut rng, &ring.complex, &ring.bases[r])?;
        let (y, y2) = random_pair(&mut rng, &ring.complex, &ring.bases[s])?;
        let a = cup_absolute(&ring, &x, &y)?;
        let b = cup_absolute(&ring, &x2, &y2)?;
        out.record(a.coords == b.coords, || format!("degrees ({r},{s})"));
    }
    Ok(out)
}

/// Kernel-relative cup classes are unchanged by coboundaries.
pub fn well_defined_kernel(
    p: &Presentation,
    plot: &PlotRef,
    t: &Truncation,
    seed: u64,
    cases: usize,
) -> Result<SuiteResult, EngineError> {
    let k = KernelTheory::new(p, plot, t)?;
    let mut rng = rng_for(seed, 6);
    let mut out = SuiteResult::new(&format!("well_defined_kernel[{}, {plot}]", p.space));
    let degrees = degrees_with_classes(&k.bases, 0);
    if degrees.is_empty() {
        return Err(EngineError::PreconditionViolated(format!("H(X, {plot}) vanishes in the window")));
    }
    for _ in 0..cases {
        let (r, s) = (*degrees.choose(&mut rng).expect("nonempty"), *degrees.choose(&mut rng).expect("nonempty"));
        let (x, x2) = random_pair(&mut rng, &k.complex, &k.bases[r])?;
        let (y, y2) = random_pair(&mut rng, &k.complex, &k.bases[s])?;
        let a = cup_rel_kernel(&k, &k, &k, &x, &y)?;
        let b = cup_rel_kernel(&k, &k, &k, &x2, &y2)?;
        out.record(a.coords == b.coords, || format!("degrees ({r},{s})"));
    }
    Ok(out)
}

/// Bott–Tu cup classes are unchanged by coboundaries, for products of two
/// charts with themselves and with each other.
pub fn well_defined_bott_tu(
    p: &Presentation,
    alpha: &str,
    beta: &str,
    t: &Truncation,
    seed: u64,
    cases: usize,
) -> Result<SuiteResult, EngineError> {
    let chart = |c: &str| PlotRef::Chart(c.to_string());
    let ta = BottTuTheory::new(p, chart(alpha), t)?;
    let tb = BottTuTheory::new(p, chart(beta), t)?;
    let join = |a: &str, b: &str| if a == b { chart(a) } else { PlotRef::Join(vec![a.into(), b.into()]) };
    let mut targets: BTreeMap<String, BottTuTheory> = BTreeMap::new();
    for (a, b) in [(alpha, alpha), (alpha, beta), (beta, alpha), (beta, beta)] {
        let j = join(a, b);
        if let std::collections::btree_map::Entry::Vacant(e) = targets.entry(j.to_string()) {
            e.insert(BottTuTheory::new(p, j, t)?);
        }
    }
    let mut rng = rng_for(seed, 7);
    let mut out = SuiteResult::new(&format!("well_defined_bott_tu[{}, {alpha}, {beta}]", p.space));
    // Mixed products need in-class lifts, which some draws lack.
    for _ in 0..cases * 20 {
        if out.cases == cases {
            break;
        }
        let (x_theory, y_theory) = match rng.gen_range(0..4) {
            0 => (&ta, &ta),
            1 => (&ta, &tb),
            2 => (&tb, &ta),
            _ => (&tb, &tb),
        };
        let dx = degrees_with_classes(&x_theory.bases, 1);
        let dy = degrees_with_classes(&y_theory.bases, 1);
        let (Some(&r), Some(&s)) = (dx.choose(&mut rng), dy.choose(&mut rng)) else {
            return Err(EngineError::PreconditionViolated("no positive-degree relative classes".into()));
        };
        let (x, x2) = random_pair(&mut rng, &x_theory.complex, &x_theory.bases[r])?;
        let (y, y2) = random_pair(&mut rng, &y_theory.complex, &y_theory.bases[s])?;
        let target = &targets[&join(&x_theory.chart(), &y_theory.chart()).to_string()];
        let product = |x: &Cochain, y: &Cochain| -> Result<Vec<Scalar>, EngineError> {
            let px = RelPair::from_cochain(&x_theory.chart(), x)?;
            let py = RelPair::from_cochain(&y_theory.chart(), y)?;
            target.classify(&cup_rel_bott_tu(p, t, &px, &py)?.cochain)
        };
        match (product(&x, &y), product(&x2, &y2)) {
            (Err(EngineError::NoInClassLift(_)), _) | (_, Err(EngineError::NoInClassLift(_))) => out.skipped += 1,
            (a, b) => {
                let (a, b) = (a?, b?);
                out.record(a == b, || format!("{} ⌣ {} in degrees ({r},{s})", x_theory.plot, y_theory.plot));
            }
        }
    }
    if out.cases < cases {
        let n = out.cases;
        out.record(false, || format!("only {n} of {cases} draws were in the domain"));
    }
    Ok(out)
}

// Independent Betti-number oracle. It handles presentations whose legs are
// all translations, where a frequency never changes along a relation, so a
// class is a connected set of charts together with one frequency vector.
// Nothing below calls into the complexes or homology modules.

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

fn rank(mut rows: Vec<Vec<Scalar>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        let pivot_row: Vec<Scalar> = rows[r].iter().map(|x| x * &inv).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = &*x - &(&f * y);
            }
        }
        rows[r] = pivot_row;
        r += 1;
    }
    r
}

type OracleCell = (usize, Vec<usize>, Vec<u32>);

fn oracle_cells(charts: &[usize], dim: usize, q: usize, nu: &[ScalarExponent], t: &Truncation) -> Vec<OracleCell> {
    let mut out = Vec::new();
    for &c in charts {
        for idx in index_tuples(dim, q) {
            let bounds: Vec<u32> = (0..dim)
                .map(|v| {
                    if nu[v].is_zero() {
                        t.poly_deg + t.headroom - u32::from(idx.contains(&v))
                    } else {
                        t.poly_deg
                    }
                })
                .collect();
            let mut exps: Vec<Vec<u32>> = vec![Vec::new()];
            for b in bounds {
                exps = exps
                    .into_iter()
                    .flat_map(|e| {
                        (0..=b).map(move |k| {
                            let mut f = e.clone();
                            f.push(k);
                            f
                        })
                    })
                    .collect();
            }
            out.extend(exps.into_iter().map(|e| (c, idx.clone(), e)));
        }
    }
    out
}

/// Betti numbers of global forms in degrees `0..=max chart dimension`,
/// computed without the main elimination path. `None` when some leg is not
/// a translation.
pub fn oracle_betti(p: &Presentation, t: &Truncation) -> Option<Vec<usize>> {
    if p.relations.iter().any(|r| !r.left.map.has_identity_linear_part() || !r.right.map.has_identity_linear_part()) {
        return None;
    }
    let n = p.charts.len();
    let index = |name: &str| p.charts.iter().position(|c| c.name == name).expect("declared chart");
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    for r in &p.relations {
        let (a, b) = (find(&mut parent, index(&r.left.chart)), find(&mut parent, index(&r.right.chart)));
        parent[a] = b;
    }
    let mut components: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for c in 0..n {
        let root = find(&mut parent, c);
        components.entry(root).or_default().push(c);
    }

    let top = p.max_dim();
    let mut betti = vec![0usize; top + 1];
    let two_pi_i = Scalar::from_int(2) * Scalar::pi() * Scalar::i();
    for charts in components.values() {
        let dim = p.charts[charts[0]].dim;
        let blocks: Vec<_> = p.relations.iter().filter(|r| charts.contains(&index(&r.left.chart))).collect();
        let mut nus: Vec<Vec<ScalarExponent>> = vec![Vec::new()];
        for _ in 0..dim {
            nus = nus
                .into_iter()
                .flat_map(|v| {
                    t.frequencies().iter().map(move |f| {
                        let mut w = v.clone();
                        w.push(f.clone());
                        w
                    })
                })
                .collect();
        }
        for nu in &nus {
            let cells: Vec<Vec<OracleCell>> = (0..=dim + 1).map(|q| oracle_cells(charts, dim, q, nu, t)).collect();
            // Constraint rows: left-leg pullback minus right-leg pullback.
            let constraints = |q: usize| -> Vec<Vec<Scalar>> {
                let mut rows: BTreeMap<(usize, Vec<usize>, Vec<u32>), Vec<Scalar>> = BTreeMap::new();
                for (j, (c, idx, e)) in cells[q].iter().enumerate() {
                    for (b, rel) in blocks.iter().enumerate() {
                        for (leg, s) in [(&rel.left, Scalar::one()), (&rel.right, -Scalar::one())] {
                            if index(&leg.chart) != *c {
                                continue;
                            }
                            let shift = leg.map.translation();
                            let mut phase = ScalarExponent::zero();
                            for (a, bv) in nu.iter().zip(shift) {
                                phase = phase.add(&a.mul(bv).expect("linear"));
                            }
                            let front = &s * &Scalar::phase(&phase);
                            // Π (w_v + b_v)^{e_v}, expanded.
                            let mut terms: Vec<(Vec<u32>, Scalar)> = vec![(Vec::new(), front)];
                            for (v, &ev) in e.iter().enumerate() {
                                let bv = Scalar::from_exponent(&shift[v]);
                                terms = terms
                                    .into_iter()
                                    .flat_map(|(k, x)| {
                                        let bv = bv.clone();
                                        (0..=ev).map(move |kv| {
                                            let mut k2 = k.clone();
                                            k2.push(kv);
                                            let coef = Scalar::from_int(binomial(ev, kv)) * bv.pow(ev - kv);
                                            (k2, &x * &coef)
                                        })
                                    })
                                    .collect();
                            }
                            for (k, x) in terms {
                                if x.is_zero() {
                                    continue;
                                }
                                let row = rows
                                    .entry((b, idx.clone(), k))
                                    .or_insert_with(|| vec![Scalar::zero(); cells[q].len()]);
                                row[j] = &row[j] + &x;
                            }
                        }
                    }
                }
                rows.into_values().collect()
            };
            // d as rows over the degree-q cells.
            let derivative = |q: usize| -> Vec<Vec<Scalar>> {
                let target = &cells[q + 1];
                let mut rows = vec![vec![Scalar::zero(); cells[q].len()]; target.len()];
                for (j, (c, idx, e)) in cells[q].iter().enumerate() {
                    for v in 0..dim {
                        if idx.contains(&v) {
                            continue;
                        }
                        let mut idx2 = idx.clone();
                        idx2.push(v);
                        idx2.sort_unstable();
                        let s = sign(idx.iter().filter(|&&i| i < v).count());
                        let mut put = |exps: Vec<u32>, x: Scalar| {
                            let i = target
                                .iter()
                                .position(|(c2, i2, e2)| c2 == c && *i2 == idx2 && *e2 == exps)
                                .expect("window closed under d");
                            rows[i][j] = &rows[i][j] + &(&x * &s);
                        };
                        if e[v] > 0 {
                            let mut e2 = e.clone();
                            e2[v] -= 1;
                            put(e2, Scalar::from_int(e[v] as i64));
                        }
                        if !nu[v].is_zero() {
                            put(e.clone(), &two_pi_i * &Scalar::from_exponent(&nu[v]));
                        }
                    }
                }
                rows
            };
            let stacked_rank = |q: usize| -> (usize, usize) {
                let c = constraints(q);
                let rc = rank(c.clone());
                let mut both = c;
                both.extend(derivative(q));
                (rc, rank(both))
            };
            let ranks: Vec<(usize, usize)> = (0..=dim).map(stacked_rank).collect();
            for q in 0..=dim {
                let cocycles = cells[q].len() - ranks[q].1;
                let boundaries = if q == 0 { 0 } else { ranks[q - 1].1 - ranks[q - 1].0 };
                betti[q] += cocycles - boundaries;
            }
        }
    }
    Some(betti)
}

/// Every suite of the crate at a fixed seed, over the bundled examples.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::ok)
    }
}

pub const FORM_CASES: usize = 200;
pub const PRODUCT_CASES: usize = 50;

fn check(name: &str, f: impl FnOnce() -> Result<bool, EngineError>) -> SuiteResult {
    let mut s = SuiteResult::new(name);
    match f() {
        Ok(ok) => s.record(ok, || "identity fails".into()),
        Err(e) => s.record(false, || e.to_string()),
    }
    s
}

fn lift_suite(r: Result<SuiteResult, EngineError>, name: &str) -> SuiteResult {
    r.unwrap_or_else(|e| {
        let mut s = SuiteResult::new(name);
        s.record(false, || e.to_string());
        s
    })
}

/// Runs every suite. `profile` builds the truncation for a presentation.
pub fn verify_all(seed: u64, profile: impl Fn(&Presentation) -> Truncation) -> VerifyReport {
    use crate::frontend::{parse_presentation, print_presentation};
    use crate::products::{cup_length, hcat_check, projection_compatible, skew_identity, NullNotion};
    use crate::report::BUNDLED;

    let mut suites = vec![
        leibniz_suite(seed, FORM_CASES),
        d_squared_suite(seed, FORM_CASES),
        commutativity_suite(seed, FORM_CASES),
        pullback_suite(seed, FORM_CASES),
    ];
    let load = |name: &str| {
        let src = BUNDLED.iter().find(|(n, _)| *n == name).expect("bundled").1;
        parse_presentation(src).expect("bundled example parses")
    };

    let circle = load("circle");
    let tc = profile(&circle);
    suites.push(lift_suite(well_defined_absolute(&circle, &tc, seed, PRODUCT_CASES), "well_defined_absolute"));
    let two = load("two_circles");
    suites.push(lift_suite(
        well_defined_kernel(&two, &PlotRef::Chart("A".into()), &profile(&two), seed, PRODUCT_CASES),
        "well_defined_kernel",
    ));
    suites.push(lift_suite(
        well_defined_bott_tu(&circle, "Uplus", "Uminus", &tc, seed, PRODUCT_CASES),
        "well_defined_bott_tu",
    ));

    suites.push(check("bott_tu_skew_and_projection[circle]", || {
        let ring = Ring::new(&circle, &tc)?;
        let bt = BottTuTheory::new(&circle, PlotRef::Chart("Uplus".into()), &tc)?;
        let mut ok = true;
        for i in 0..bt.bases[1].betti {
            let x = RelPair::from_cochain("Uplus", &bt.bases[1].rep_cochain(&bt.complex, i))?;
            ok &= skew_identity(&circle, &tc, &x, &x)?;
            ok &= projection_compatible(&ring, &circle, &tc, &x, &x)?;
        }
        Ok(ok)
    }));

    let mut round = SuiteResult::new("parse_print_round_trip");
    for (name, src) in BUNDLED {
        let p = parse_presentation(src).expect("bundled example parses");
        let again = parse_presentation(&print_presentation(&p));
        round.record(again.as_ref() == Ok(&p), || name.to_string());

        let t = profile(&p);
        suites.push(check(&format!("oracle_betti[{name}]"), || {
            let ring = Ring::new(&p, &t)?;
            Ok(oracle_betti(&p, &t).is_none_or(|b| b == ring.betti()))
        }));
        suites.push(check(&format!("cup_le_hcat_horizontal[{name}]"), || {
            let ring = Ring::new(&p, &t)?;
            let family = p.chart_names();
            let report = hcat_check(&ring, &family, NullNotion::HorizontalCohomology)?;
            Ok(report.theorem_holds() && report.cup_length == cup_length(&ring)?.length)
        }));
    }
    suites.push(round);
    VerifyReport { seed, suites }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_presentation;

    #[test]
    fn form_suites_pass_at_small_counts() {
        for s in [
            leibniz_suite(7, 30),
            d_squared_suite(7, 30),
            commutativity_suite(7, 30),
            pullback_suite(7, 30),
        ] {
            assert!(s.ok(), "{s:?}");
        }
    }

    #[test]
    fn oracle_matches_circle_and_torus2() {
        for (src, expect) in [
            (include_str!("../data/circle.dpr"), vec![1, 1]),
            (include_str!("../data/torus2.dpr"), vec![1, 2, 1]),
            (include_str!("../data/line.dpr"), vec![1, 0]),
        ] {
            let p = parse_presentation(src).unwrap();
            let t = Truncation::lattice(2, &p.constants, 1, 1);
            assert_eq!(oracle_betti(&p, &t), Some(expect));
        }
    }

    #[test]
    fn binomials() {
        assert_eq!((0..=4).map(|k| binomial(4, k)).collect::<Vec<_>>(), vec![1, 4, 6, 4, 1]);
    }
}
