use std::path::Path;

use diffeo_core::complexes::{mv_maps, FrequencyClasses};
use diffeo_core::homology::betti_numbers;
use diffeo_core::presentation::{Diagnostic, PlotRef, Presentation};
use diffeo_core::products::{
    cup_absolute, cup_length, cup_rel_bott_tu, cup_rel_kernel, hcat_check, lift, skew_identity, BottTuTheory,
    KernelTheory, LiftStatus, NullNotion, RelPair, Ring,
};
use diffeo_core::report::{compare_reference, PresentationInfo, Quantity, Report, TruncationProfile};
use diffeo_core::verify::verify_all;
use diffeo_core::{
    cohomology, homotopy_check, les_check, parse_exponent, parse_form, parse_presentation, print_form,
    print_presentation, CochainComplex, ComplexKind, EngineError, Scalar, Truncation,
};
use serde_json::{json, Value};

use crate::{Cli, Command, Notion, Profile, Theory};

struct Outcome {
    results: Value,
    diagnostics: Vec<Diagnostic>,
    /// Set when a mathematical check reported in `results` failed.
    failed: bool,
}

impl Outcome {
    fn ok(results: Value) -> Self {
        Outcome {
            results,
            diagnostics: Vec::new(),
            failed: false,
        }
    }
}

struct Ctx<'a> {
    report: Report,
    profile: &'a Profile,
}

impl Ctx<'_> {
    fn load(&mut self, file: &Path) -> Result<(Presentation, Truncation), EngineError> {
        let text = std::fs::read_to_string(file)
            .map_err(|e| EngineError::Input(format!("cannot read {}: {e}", file.display())))?;
        let p = parse_presentation(&text)?;
        let t = truncation(self.profile, &p)?;
        self.report.presentation = Some(PresentationInfo::of(&p));
        self.report.truncation = Some(TruncationProfile::of(&t));
        Ok((p, t))
    }
}

pub fn truncation(profile: &Profile, p: &Presentation) -> Result<Truncation, EngineError> {
    let t = match &profile.freq_list {
        Some(list) => {
            let freqs = list
                .iter()
                .map(|s| parse_exponent(s, &p.constants))
                .collect::<Result<Vec<_>, _>>()?;
            Truncation::from_list(freqs, profile.poly_deg, profile.headroom)
        }
        None => Truncation::lattice(profile.freq_n(), &p.constants, profile.poly_deg, profile.headroom),
    };
    Ok(t.with_depth(profile.depth))
}

fn plot(p: &Presentation, s: &str) -> Result<PlotRef, EngineError> {
    let plot = PlotRef::parse(s)?;
    p.check_plot(&plot)?;
    Ok(plot)
}

/// `degree:index`.
fn class_index(s: &str) -> Result<(usize, usize), EngineError> {
    let bad = || EngineError::Input(format!("class `{s}` is not of the form DEGREE:INDEX"));
    let (r, i) = s.split_once(':').ok_or_else(bad)?;
    Ok((r.trim().parse().map_err(|_| bad())?, i.trim().parse().map_err(|_| bad())?))
}

fn basis_entry(bases: &[diffeo_core::CohomologyBasis], (r, i): (usize, usize)) -> Result<(), EngineError> {
    let h = bases.get(r).ok_or(EngineError::DegreeOutOfRange {
        degree: r,
        max: bases.len().saturating_sub(1),
    })?;
    if i >= h.betti {
        return Err(EngineError::Input(format!("H^{r} has dimension {}, no class {i}", h.betti)));
    }
    Ok(())
}

fn scalars(v: &[Scalar]) -> Value {
    Value::from(v.iter().map(ToString::to_string).collect::<Vec<_>>())
}

fn generators(c: &CochainComplex, p: &Presentation, top: usize) -> Result<Value, EngineError> {
    let mut out = Vec::new();
    for r in 0..=top {
        let h = cohomology(c, r)?;
        for i in 0..h.betti {
            out.push(json!({ "degree": r, "index": i, "forms": h.rep_cochain(c, i).render(p) }));
        }
    }
    Ok(Value::from(out))
}

fn reference(p: &Presentation, q: Quantity, computed: usize, diags: &mut Vec<Diagnostic>) {
    diags.extend(compare_reference(p, q, computed));
}

pub fn run(cli: &Cli) -> Report {
    let name = command_name(&cli.command);
    let mut ctx = Ctx {
        report: Report::new(name),
        profile: &cli.profile,
    };
    match dispatch(&mut ctx, &cli.command) {
        Ok(out) => {
            ctx.report.results = out.results;
            ctx.report.diagnostics.extend(out.diagnostics);
            ctx.report.exit_code = i32::from(out.failed);
        }
        Err(e) => {
            let code = match &e {
                EngineError::TruncationNotClosed { .. } | EngineError::OutsideWindow(_) => "TRUNCATION",
                EngineError::Guard(_) => "GUARD",
                _ if e.exit_code() == 1 => "CHECK-FAILED",
                _ => "INPUT",
            };
            ctx.report.results = json!({ "error": e.to_string() });
            ctx.report.diagnostics.push(Diagnostic::new(code, e.to_string()));
            ctx.report.exit_code = e.exit_code();
        }
    }
    ctx.report
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Cohomology { .. } => "cohomology",
        Command::Relative { .. } => "relative",
        Command::Join { .. } => "join",
        Command::MvCheck { .. } => "mv-check",
        Command::LesCheck { .. } => "les-check",
        Command::HomotopyCheck { .. } => "homotopy-check",
        Command::Cup { .. } => "cup",
        Command::CupLength { .. } => "cup-length",
        Command::RelCup { .. } => "rel-cup",
        Command::Lift { .. } => "lift",
        Command::HcatCheck { .. } => "hcat-check",
        Command::Verify => "verify",
    }
}

fn dispatch(ctx: &mut Ctx, command: &Command) -> Result<Outcome, EngineError> {
    match command {
        Command::Validate { file } => {
            let (p, t) = ctx.load(file)?;
            let classes = FrequencyClasses::build(&p, &t)?;
            Ok(Outcome {
                results: json!({
                    "charts": p.chart_names(),
                    "relations": p.relations.iter().map(|r| r.name.clone()).collect::<Vec<_>>(),
                    "frequency_classes": classes.len(),
                    "canonical": print_presentation(&p),
                }),
                diagnostics: p.validate(),
                failed: false,
            })
        }
        Command::Cohomology { file } => {
            let (p, t) = ctx.load(file)?;
            let ring = Ring::new(&p, &t)?;
            let betti = ring.betti();
            let mut diagnostics = Vec::new();
            for (r, &b) in betti.iter().enumerate() {
                reference(&p, Quantity::Betti(r), b, &mut diagnostics);
            }
            Ok(Outcome {
                results: json!({
                    "betti_within_truncation_profile": betti,
                    "euler_characteristic": ring.complex.euler_characteristic(),
                    "generators": generators(&ring.complex, &p, ring.complex.top())?,
                }),
                diagnostics,
                failed: false,
            })
        }
        Command::Relative { file, theory, plot: s } => {
            let (p, t) = ctx.load(file)?;
            let plot = plot(&p, s)?;
            let kind = match theory {
                Theory::Kernel => ComplexKind::KernelRelative(plot),
                Theory::BottTu => ComplexKind::BottTu(plot),
            };
            let c = CochainComplex::build(&p, kind, &t)?;
            let top = ctx.profile.max_degree.unwrap_or(c.top()).min(c.top() + 1);
            let betti = (0..=top).map(|r| cohomology(&c, r).map(|h| h.betti)).collect::<Result<Vec<_>, _>>()?;
            Ok(Outcome::ok(json!({
                "complex": c.kind().to_string(),
                "betti_within_truncation_profile": betti,
                "generators": generators(&c, &p, top)?,
            })))
        }
        Command::Join { file, plot: s } => {
            let (p, t) = ctx.load(file)?;
            let plot = plot(&p, s)?;
            let joined = p.join(&plot.charts())?;
            let c = CochainComplex::build(&p, ComplexKind::Horizontal(plot), &t)?;
            Ok(Outcome::ok(json!({
                "presentation": print_presentation(&joined),
                "horizontal_betti_within_truncation_profile": betti_numbers(&c)?,
            })))
        }
        Command::MvCheck { file, left, right } => {
            let (p, t) = ctx.load(file)?;
            let mv = mv_maps(&p, left, right, &t)?;
            let degrees = mv.check(ctx.profile.max_degree.unwrap_or(p.max_dim()));
            let holds = degrees.iter().all(|d| d.holds());
            Ok(Outcome {
                results: json!({ "degrees": degrees, "exact": holds }),
                diagnostics: Vec::new(),
                failed: !holds,
            })
        }
        Command::LesCheck { file, plot: s } => {
            let (p, t) = ctx.load(file)?;
            let plot = plot(&p, s)?;
            let r = les_check(&p, &plot, &t, ctx.profile.max_degree.unwrap_or(p.max_dim()))?;
            let ok = r.all_exact();
            Ok(Outcome {
                results: json!({ "les": r, "exact": ok }),
                diagnostics: Vec::new(),
                failed: !ok,
            })
        }
        Command::HomotopyCheck { file, plot: s } => {
            let (p, t) = ctx.load(file)?;
            let plot = plot(&p, s)?;
            let r = homotopy_check(&p, &plot, &t)?;
            let ok = r.identity_holds;
            Ok(Outcome {
                results: serde_json::to_value(&r).expect("serializable"),
                diagnostics: Vec::new(),
                failed: !ok,
            })
        }
        Command::Cup { file, left, right } => {
            let (p, t) = ctx.load(file)?;
            let ring = Ring::new(&p, &t)?;
            let (a, b) = (class_index(left)?, class_index(right)?);
            basis_entry(&ring.bases, a)?;
            basis_entry(&ring.bases, b)?;
            let c = cup_absolute(&ring, &ring.rep(a.0, a.1), &ring.rep(b.0, b.1))?;
            Ok(Outcome::ok(json!({
                "degree": a.0 + b.0,
                "coordinates": scalars(&c.coords),
                "zero_class": c.is_exact(),
            })))
        }
        Command::CupLength { file } => {
            let (p, t) = ctx.load(file)?;
            let ring = Ring::new(&p, &t)?;
            let cl = cup_length(&ring)?;
            let mut diagnostics = Vec::new();
            reference(&p, Quantity::CupLength, cl.length, &mut diagnostics);
            Ok(Outcome {
                results: json!({
                    "cup_length": cl.length,
                    "witness": cl.witness.iter().map(|(r, i)| format!("{r}:{i}")).collect::<Vec<_>>(),
                    "betti_within_truncation_profile": ring.betti(),
                }),
                diagnostics,
                failed: false,
            })
        }
        Command::RelCup {
            file,
            theory,
            left_plot,
            right_plot,
            left,
            right,
        } => {
            let (p, t) = ctx.load(file)?;
            let (pa, pb) = (plot(&p, left_plot)?, plot(&p, right_plot)?);
            let (a, b) = (class_index(left)?, class_index(right)?);
            match theory {
                Theory::Kernel => {
                    let ka = KernelTheory::new(&p, &pa, &t)?;
                    let kb = KernelTheory::new(&p, &pb, &t)?;
                    let kab = KernelTheory::new(&p, &pa.join_with(&pb), &t)?;
                    basis_entry(&ka.bases, a)?;
                    basis_entry(&kb.bases, b)?;
                    let x = ka.bases[a.0].rep_cochain(&ka.complex, a.1);
                    let y = kb.bases[b.0].rep_cochain(&kb.complex, b.1);
                    let c = cup_rel_kernel(&ka, &kb, &kab, &x, &y)?;
                    Ok(Outcome::ok(json!({
                        "plot": kab.plot.to_string(),
                        "degree": a.0 + b.0,
                        "coordinates": scalars(&c.coords),
                        "zero_class": c.is_exact(),
                    })))
                }
                Theory::BottTu => {
                    for q in [&pa, &pb] {
                        if !matches!(q, PlotRef::Chart(_)) {
                            return Err(EngineError::Input(format!("Bott–Tu products take chart plots, not `{q}`")));
                        }
                    }
                    let ta = BottTuTheory::new(&p, pa.clone(), &t)?;
                    let tb = BottTuTheory::new(&p, pb.clone(), &t)?;
                    let tab = BottTuTheory::new(&p, pa.join_with(&pb), &t)?;
                    basis_entry(&ta.bases, a)?;
                    basis_entry(&tb.bases, b)?;
                    if a.0 == 0 || b.0 == 0 {
                        return Err(EngineError::Input("Bott–Tu classes of degree 0 have no θ component".into()));
                    }
                    let x = RelPair::from_cochain(&ta.chart(), &ta.bases[a.0].rep_cochain(&ta.complex, a.1))?;
                    let y = RelPair::from_cochain(&tb.chart(), &tb.bases[b.0].rep_cochain(&tb.complex, b.1))?;
                    let product = cup_rel_bott_tu(&p, &t, &x, &y)?;
                    let coords = tab.classify(&product.cochain)?;
                    let skew = skew_identity(&p, &t, &x, &y)?;
                    Ok(Outcome {
                        results: json!({
                            "plot": product.plot.to_string(),
                            "degree": a.0 + b.0,
                            "product": product.cochain.render(&p),
                            "guard_holds": true,
                            "skew_identity_holds": skew,
                            "coordinates": scalars(&coords),
                            "zero_class": coords.iter().all(Scalar::is_zero),
                        }),
                        diagnostics: Vec::new(),
                        failed: !skew,
                    })
                }
            }
        }
        Command::Lift { file, from, to, form } => {
            let (p, t) = ctx.load(file)?;
            let chart = p
                .chart(from)
                .ok_or_else(|| EngineError::Input(format!("unknown chart `{from}`")))?;
            let theta = parse_form(form, chart, &p.constants)?;
            let target = p.chart(to).ok_or_else(|| EngineError::Input(format!("unknown chart `{to}`")))?;
            let l = lift(&p, &t, from, to, &theta)?;
            let (status, dimension) = match l.status {
                LiftStatus::Unique => ("unique", 0),
                LiftStatus::NonUnique { dimension } => ("non_unique", dimension),
            };
            Ok(Outcome::ok(json!({
                "from": from,
                "to": to,
                "form": print_form(&theta, &chart.vars),
                "lift": print_form(&l.lifted, &target.vars),
                "status": status,
                "homogeneous_dimension": dimension,
            })))
        }
        Command::HcatCheck { file, notion, family } => {
            let (p, t) = ctx.load(file)?;
            let ring = Ring::new(&p, &t)?;
            let notion = match notion {
                Notion::Chart => NullNotion::ChartCohomology,
                Notion::Horizontal => NullNotion::HorizontalCohomology,
            };
            let r = hcat_check(&ring, family, notion)?;
            let mut diagnostics = r.diagnostics.clone();
            reference(&p, Quantity::CupLength, r.cup_length, &mut diagnostics);
            if let Some(h) = r.hcat {
                reference(&p, Quantity::Hcat, h, &mut diagnostics);
            }
            Ok(Outcome {
                failed: !r.theorem_holds(),
                results: serde_json::to_value(&r).expect("serializable"),
                diagnostics,
            })
        }
        Command::Verify => {
            let profile = ctx.profile;
            // Surface profile errors before running the suites.
            for (_, src) in diffeo_core::report::BUNDLED {
                truncation(profile, &parse_presentation(src)?)?;
            }
            let r = verify_all(profile.seed, |p| truncation(profile, p).expect("checked above"));
            let ok = r.all_passed();
            Ok(Outcome {
                results: serde_json::to_value(&r).expect("serializable"),
                diagnostics: Vec::new(),
                failed: !ok,
            })
        }
    }
}
