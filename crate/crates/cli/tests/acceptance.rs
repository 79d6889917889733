//! One pass/fail line per acceptance criterion, at the default profile.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use diffeo_core::frontend::{parse_presentation, print_presentation};
use diffeo_core::products::{cup_rel_bott_tu, projection_compatible, BottTuTheory, RelPair, Ring};
use diffeo_core::report::BUNDLED;
use diffeo_core::verify::{
    commutativity_suite, d_squared_suite, leibniz_suite, oracle_betti, pullback_suite, well_defined_absolute,
    well_defined_bott_tu, well_defined_kernel, SuiteResult, FORM_CASES, PRODUCT_CASES,
};
use diffeo_core::{PlotRef, Presentation, Truncation};
use serde_json::Value;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(format!("{name}.dpr"))
}

fn load(name: &str) -> Presentation {
    parse_presentation(&std::fs::read_to_string(data(name)).unwrap()).unwrap()
}

struct Run {
    code: i32,
    json: Value,
    elapsed: Duration,
}

fn diffeo(args: &[&str]) -> Run {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_diffeo"))
        .args(args)
        .arg("--json")
        .output()
        .expect("binary runs");
    let elapsed = start.elapsed();
    Run {
        code: out.status.code().unwrap_or(-1),
        json: serde_json::from_slice(&out.stdout).unwrap_or(Value::Null),
        elapsed,
    }
}

fn path(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn betti(v: &Value) -> Vec<u64> {
    v.as_array().map(|a| a.iter().filter_map(Value::as_u64).collect()).unwrap_or_default()
}

fn has_diagnostic(run: &Run, code: &str) -> bool {
    run.json["diagnostics"]
        .as_array()
        .is_some_and(|ds| ds.iter().any(|d| d["code"] == code))
}

fn suite(s: &SuiteResult, min: usize) -> Result<(), String> {
    ensure(s.ok() && s.cases >= min, format!("{} {}/{} {:?}", s.name, s.passed, s.cases, s.failures))
}

fn circle_cohomology() -> Verdict {
    let run = diffeo(&["cohomology", &path("circle"), "--freq", "4", "--poly-deg", "1"]);
    ensure(run.code == 0, format!("exit {}", run.code))?;
    let b = betti(&run.json["results"]["betti_within_truncation_profile"]);
    ensure(b == [1, 1], format!("betti {b:?}"))?;
    let gens = run.json["results"]["generators"].as_array().cloned().unwrap_or_default();
    let h1: Vec<&Value> = gens.iter().filter(|g| g["degree"] == 1).collect();
    ensure(h1.len() == 1, "one H^1 generator")?;
    let forms = &h1[0]["forms"];
    ensure(
        forms == &serde_json::json!(["Uplus: dt", "Uminus: ds"]),
        format!("generator {forms}"),
    )?;
    ensure(run.elapsed < Duration::from_secs(5), format!("took {:?}", run.elapsed))?;
    Ok(format!("b = (1,1), H^1 = <(dt, ds)>, {:?}", run.elapsed))
}

fn generating_family_vanishing() -> Verdict {
    let run = diffeo(&[
        "relative",
        &path("circle"),
        "--theory",
        "kernel",
        "--plot",
        "join:Uplus,Uminus",
        "--max-degree",
        "2",
    ]);
    ensure(run.code == 0, format!("exit {}", run.code))?;
    let b = betti(&run.json["results"]["betti_within_truncation_profile"]);
    ensure(b == [0, 0, 0], format!("betti {b:?}"))?;
    Ok("H^r(S1, U+ * U-) = 0 for r = 0,1,2".into())
}

fn bott_tu_les() -> Verdict {
    let run = diffeo(&["les-check", &path("circle"), "--plot", "Uplus"]);
    ensure(run.code == 0, format!("exit {}", run.code))?;
    let les = &run.json["results"]["les"];
    let h = betti(&les["betti_bott_tu"]);
    ensure(h.len() >= 2 && h[0] == 0 && h[1] == 1, format!("VH = {h:?}"))?;
    let nodes = les["nodes"].as_array().cloned().unwrap_or_default();
    ensure(nodes.iter().all(|n| n["exact"] == true), "a node is not exact")?;
    ensure(les["compositions_zero"] == true, "consecutive maps do not compose to zero")?;
    // The rank bookkeeping at each node must reproduce its dimension.
    for n in &nodes {
        let (d, i, o) = (n["dim"].as_u64(), n["rank_in"].as_u64(), n["rank_out"].as_u64());
        ensure(d == Some(i.unwrap_or(0) + o.unwrap_or(0)), format!("node {}", n["label"]))?;
    }
    let vh1 = nodes.iter().find(|n| n["label"] == "VH^1(X,Uplus)").ok_or("no VH^1 node")?;
    ensure(vh1["dim"] == 1, "VH^1 node dimension")?;
    Ok(format!("VH = {h:?}, {} LES nodes exact", nodes.len()))
}

fn quotient_homotopy() -> Verdict {
    let run = diffeo(&["homotopy-check", &path("torus"), "--plot", "T"]);
    ensure(run.code == 0, format!("exit {}", run.code))?;
    ensure(run.json["results"]["identity_holds"] == true, "dh + hd != id")?;
    let h = betti(&run.json["results"]["betti_bott_tu"]);
    ensure(!h.is_empty() && h.iter().all(|&b| b == 0), format!("VH = {h:?}"))?;
    Ok(format!("dh + hd = id, VH(T_a, pi) = {h:?}"))
}

fn mayer_vietoris() -> Verdict {
    let run = diffeo(&["mv-check", &path("circle"), "--left", "Uplus", "--right", "Uminus"]);
    ensure(run.code == 0, format!("exit {}", run.code))?;
    let degrees = run.json["results"]["degrees"].as_array().cloned().unwrap_or_default();
    ensure(degrees.len() == 2, "degrees 0 and 1")?;
    let mut coker = Vec::new();
    for d in &degrees {
        ensure(d["j_injective"] == true, format!("J not injective in degree {}", d["degree"]))?;
        ensure(d["exact_middle"] == true, format!("ker Pi != im J in degree {}", d["degree"]))?;
        ensure(d["pi_after_j_zero"] == true, "Pi J != 0")?;
        coker.push(d["coker_pi"].as_u64().ok_or("coker Pi not reported")?);
    }
    Ok(format!("J injective, ker Pi = im J in degrees 0,1; coker Pi = {coker:?}"))
}

fn torus() -> Verdict {
    let run = diffeo(&["cohomology", &path("torus")]);
    ensure(run.code == 0, format!("exit {}", run.code))?;
    let b = betti(&run.json["results"]["betti_within_truncation_profile"]);
    ensure(b.first() == Some(&1), format!("H^0 = {:?}", b.first()))?;
    let p = load("torus");
    let oracle = oracle_betti(&p, &Truncation::default_for(&p)).ok_or("oracle declined")?;
    ensure(b.get(1).copied() == oracle.get(1).map(|&x| x as u64), format!("engine {b:?}, oracle {oracle:?}"))?;
    ensure(has_diagnostic(&run, "REFERENCE-DISCREPANCY") == (b[1] != 0), "discrepancy diagnostic")?;
    Ok(format!("H^0 = 1, H^1 = {} = oracle, discrepancy reported", b[1]))
}

fn product_laws() -> Verdict {
    for s in [
        leibniz_suite(0, FORM_CASES),
        d_squared_suite(0, FORM_CASES),
        commutativity_suite(0, FORM_CASES),
        pullback_suite(0, FORM_CASES),
    ] {
        suite(&s, 200)?;
    }
    Ok(format!("4 suites x {FORM_CASES} cases"))
}

fn relative_products() -> Verdict {
    let circle = load("circle");
    let t = Truncation::default_for(&circle);
    let two = load("two_circles");
    let suites = [
        well_defined_absolute(&circle, &t, 0, PRODUCT_CASES),
        well_defined_kernel(&two, &PlotRef::Chart("A".into()), &Truncation::default_for(&two), 0, PRODUCT_CASES),
        well_defined_bott_tu(&circle, "Uplus", "Uminus", &t, 0, PRODUCT_CASES),
    ];
    for s in &suites {
        suite(s.as_ref().map_err(|e| e.to_string())?, 50)?;
    }
    // The guard runs inside every product; the skew identity is checked here.
    let run = diffeo(&[
        "rel-cup",
        &path("circle"),
        "--theory",
        "bott-tu",
        "--left-plot",
        "Uplus",
        "--right-plot",
        "Uplus",
        "--left",
        "1:0",
        "--right",
        "1:0",
    ]);
    ensure(run.code == 0, format!("rel-cup exit {}", run.code))?;
    ensure(run.json["results"]["guard_holds"] == true, "guard")?;
    ensure(run.json["results"]["skew_identity_holds"] == true, "skew identity")?;
    Ok(format!("3 theories x {PRODUCT_CASES} perturbations, guard and skew identity exact"))
}

fn bound_harness() -> Verdict {
    let run = diffeo(&["cup-length", &path("circle")]);
    ensure(run.json["results"]["cup_length"] == 1, "circle cup length")?;
    for notion in ["chart", "horizontal"] {
        let run = diffeo(&["hcat-check", &path("circle"), "--notion", notion, "--family", "Uplus,Uminus"]);
        ensure(run.code == 0, format!("{notion}: exit {}", run.code))?;
        ensure(run.json["results"]["hcat"] == 1, format!("{notion}: hcat {}", run.json["results"]["hcat"]))?;
    }
    for (name, src) in BUNDLED {
        let p = parse_presentation(src).unwrap();
        let family = p.chart_names().join(",");
        let run = diffeo(&["hcat-check", &path(name), "--notion", "horizontal", "--family", &family]);
        ensure(run.code == 0, format!("{name}: exit {}", run.code))?;
        let r = &run.json["results"];
        if let Some(bound) = r["bound"].as_u64() {
            ensure(r["cup_length"].as_u64() <= Some(bound), format!("{name}: cup > hcat bound"))?;
        }
    }
    Ok(format!("cup S1 = 1, hcat S1 = 1 under both notions, cup <= hcat on {} examples", BUNDLED.len()))
}

fn spanier() -> Verdict {
    let p = load("circle");
    let t = Truncation::default_for(&p);
    let ring = Ring::new(&p, &t).map_err(|e| e.to_string())?;
    let mut checked = 0;
    for chart in ["Uplus", "Uminus"] {
        let th = BottTuTheory::new(&p, PlotRef::Chart(chart.into()), &t).map_err(|e| e.to_string())?;
        let h = &th.bases[1];
        for i in 0..h.betti {
            let z = h.rep_cochain(&th.complex, i);
            // A sample class, a multiple of it and a coboundary-shifted copy.
            let shift = th.complex.d_cochain(&th.complex.cochain(0, &th.complex.unit(0, 0, 0))).map_err(|e| e.to_string())?;
            for w in [z.clone(), z.scale(&diffeo_core::Scalar::from_int(3)), z.add(&shift)] {
                let x = RelPair::from_cochain(chart, &w).map_err(|e| e.to_string())?;
                cup_rel_bott_tu(&p, &t, &x, &x).map_err(|e| e.to_string())?;
                let ok = projection_compatible(&ring, &p, &t, &x, &x).map_err(|e| e.to_string())?;
                ensure(ok, format!("{chart} class {i}"))?;
                checked += 1;
            }
        }
    }
    ensure(checked > 0, "no sample classes")?;
    Ok(format!("pi0*(x u y) = pi1*(x) u pi2*(y) on {checked} samples"))
}

fn frontend() -> Verdict {
    for (name, src) in BUNDLED {
        let p = parse_presentation(src).map_err(|e| format!("{name}: {e}"))?;
        let printed = print_presentation(&p);
        let again = parse_presentation(&printed).map_err(|e| format!("{name}: {e}"))?;
        ensure(again == p, format!("{name}: round trip changes the presentation"))?;
        ensure(print_presentation(&again) == printed, format!("{name}: printing is not stable"))?;
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let bad = dir.path().join("scaled.dpr");
    std::fs::write(
        &bad,
        "constants:\nspace X\nchart U dim 1 vars t\nrelation R dim 1 vars t\n  leg U : t\n  leg U : 2*t\n",
    )
    .map_err(|e| e.to_string())?;
    let run = diffeo(&["cohomology", &bad.to_string_lossy()]);
    ensure(run.code == 3, format!("exit {}", run.code))?;
    let msg = run.json["results"]["error"].as_str().unwrap_or_default().to_string();
    ensure(msg.contains("exp(") && msg.contains("on chart U"), format!("witness missing: {msg}"))?;
    let missing = diffeo(&["cohomology", "missing.dpr"]);
    ensure(missing.code == 2, format!("missing file exit {}", missing.code))?;
    Ok(format!("{} files round-trip; not closed -> exit 3 with witness", BUNDLED.len()))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("circle cohomology", circle_cohomology),
        ("generating-family vanishing", generating_family_vanishing),
        ("Bott-Tu and long exact sequence", bott_tu_les),
        ("quotient homotopy", quotient_homotopy),
        ("Mayer-Vietoris", mayer_vietoris),
        ("torus and oracle", torus),
        ("product laws", product_laws),
        ("relative cup products", relative_products),
        ("cup length and hcat bound", bound_harness),
        ("projection identity", spanier),
        ("frontend round trip and closure", frontend),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                println!("FAIL {:>2} {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
