//! Acceptance run. Prints one PASS/FAIL line per criterion.
//!
//! Exits nonzero on a failure only when `CGMV_ACCEPTANCE_STRICT=1`, so the
//! regular test run reports the table without aborting.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use cgmv::cli::strip_timestamp;
use cgmv::cmv::{build_cmv, cmv_power_entry, VerblunskySeq};
use cgmv::coin::{canonical_coin, random_paper_class_coin, realize_a, realize_b, WalkKind};
use cgmv::limits::{localizes_i, localizes_ii, mass_margin_ii, nu_i, nu_ii};
use cgmv::opuc::{eigen_residual, opuc_basis, BasisKind};
use cgmv::spectral::{measure, measure_moment, MeasureConfig};
use cgmv::walk::{correspondence_residual, diagonal_profile, initial_state, time_avg_return, CoinState, Walk};
use cgmv::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn timed(limit: Duration, f: impl FnOnce() -> Verdict) -> Verdict {
    let t0 = Instant::now();
    let v = f();
    let dt = t0.elapsed();
    let in_time = dt <= limit;
    verdict(v.pass && in_time, format!("{}; {:.2}s (limit {}s)", v.detail, dt.as_secs_f64(), limit.as_secs()))
}

fn e1() -> CoinState {
    CoinState::TypeI([C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)])
}

fn moment_seqs() -> Vec<VerblunskySeq> {
    vec![
        VerblunskySeq::zero(),
        VerblunskySeq::NullOdd(C::new(0.5, 0.0)),
        VerblunskySeq::NullEven(C::new(0.5, 0.0)),
        VerblunskySeq::NullOdd(C::new(0.3, 0.3)),
    ]
}

fn correspondence() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for alpha in [C::new(0.3, 0.0), C::new(0.5, 0.0), C::new(0.2, 0.4)] {
        let walk = Walk::new(WalkKind::TypeI, canonical_coin(alpha).expect("|α| < 1"), [0.0, 0.0]);
        match correspondence_residual(&walk, 64) {
            Ok(r) => {
                worst = worst.max(r.residual);
                parts.push(format!("α={alpha}: {:.3e} ({})", r.residual, r.best.label()));
            }
            Err(e) => {
                worst = f64::INFINITY;
                parts.push(format!("α={alpha}: {e}"));
            }
        }
    }
    verdict(worst < 1e-10, format!("max residual {worst:.3e} [{}]", parts.join(", ")))
}

fn moments() -> Verdict {
    let results: Vec<(String, f64)> = moment_seqs()
        .par_iter()
        .map(|seq| {
            let mu = measure(seq, &MeasureConfig::default()).expect("closed-rule sequence");
            let c = build_cmv(seq, 40).expect("valid sequence");
            let mut worst: f64 = 0.0;
            for t in 0..=12 {
                for l in 0..=4 {
                    for m in 0..=4 {
                        let a = measure_moment(&mu, t as i32, l, m).expect("grid is large enough");
                        let b = cmv_power_entry(&c, t, l, m).expect("truncation is large enough");
                        worst = worst.max((a - b).norm());
                    }
                }
            }
            (format!("{seq:?}"), worst)
        })
        .collect();
    let worst = results.iter().map(|r| r.1).fold(0.0, f64::max);
    verdict(worst < 1e-4, format!("max |moment - (C^t)_lm| {worst:.3e} over t<=12, l,m<=4, 4 sequences"))
}

fn totals() -> Verdict {
    let mut seqs = moment_seqs();
    seqs.extend([
        VerblunskySeq::NullEven(C::new(0.0, -0.5)),
        VerblunskySeq::NullOdd(C::new(0.0, 0.6)),
        VerblunskySeq::Constant(C::new(0.4, 0.2)),
        VerblunskySeq::NullEven(C::new(-0.7, 0.1)),
        VerblunskySeq::Explicit(vec![C::new(0.5, 0.1), C::new(-0.3, 0.2), C::new(0.6, -0.4)]),
    ]);
    let worst = seqs
        .par_iter()
        .map(|s| (measure(s, &MeasureConfig::default()).expect("valid sequence").total - 1.0).abs())
        .reduce(|| 0.0, f64::max);
    verdict(worst < 1e-4, format!("max |total - 1| {worst:.3e} over {} measures", seqs.len()))
}

const RETURN_THRESHOLD: f64 = 0.05;
/// Grid points closer than this to a predicate boundary are not scored.
const MARGIN: f64 = 0.02;

struct Point {
    kind: WalkKind,
    p: C,
    atoms: bool,
    tail: f64,
    predicate: bool,
    disputed: bool,
    scored: bool,
}

fn grid() -> Vec<C> {
    let v: Vec<f64> = (0..5).map(|i| -0.56 + 0.28 * i as f64).collect();
    v.iter().flat_map(|&x| v.iter().map(move |&y| C::new(x, y))).collect()
}

fn localization_point(kind: WalkKind, p: C) -> Point {
    let (walk, cs, seq) = match kind {
        WalkKind::TypeI => (
            Walk::new(kind, realize_a(p).expect("|a| < 1"), [0.0, 0.0]),
            e1(),
            VerblunskySeq::NullOdd(p),
        ),
        WalkKind::TypeII => {
            let (coin, gamma) = realize_b(p).expect("|b| < 1");
            (Walk::new(kind, coin, gamma), CoinState::TypeII([0.0, 0.0]), VerblunskySeq::NullEven(p))
        }
    };
    let tail = time_avg_return(&walk, &cs, 256).expect("walk fits its box").tail;
    let atoms = !measure(&seq, &MeasureConfig::default()).expect("valid sequence").atoms.is_empty();
    let (predicate, disputed, margin) = match kind {
        WalkKind::TypeI => {
            let theta = walk.coin.derived().theta;
            let cs = match cs {
                CoinState::TypeI(v) => v,
                CoinState::TypeII(_) => unreachable!(),
            };
            let pred = localizes_i(cs, p, theta).expect("|a| < 1");
            (pred, false, if p.re == 0.0 { f64::INFINITY } else { p.re.abs() })
        }
        WalkKind::TypeII => {
            let l = localizes_ii(p).expect("|b| < 1");
            (l.mass_criterion, !l.agree(), mass_margin_ii(p))
        }
    };
    Point { kind, p, atoms, tail, predicate, disputed, scored: margin >= MARGIN }
}

fn localization() -> Verdict {
    let points: Vec<Point> = [WalkKind::TypeI, WalkKind::TypeII]
        .iter()
        .flat_map(|&k| grid().into_iter().map(move |p| (k, p)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(k, p)| localization_point(k, p))
        .collect();
    let mut bad = Vec::new();
    let mut scored = 0;
    let mut disputed = 0;
    for pt in &points {
        if !pt.scored {
            continue;
        }
        scored += 1;
        let sim = pt.tail > RETURN_THRESHOLD;
        let ok = if pt.disputed {
            disputed += 1;
            pt.predicate == sim
        } else {
            pt.atoms == sim && sim == pt.predicate
        };
        if !ok {
            bad.push(format!(
                "{:?} {:.2}{:+.2}i atoms={} tail={:.4} pred={}",
                pt.kind, pt.p.re, pt.p.im, pt.atoms, pt.tail, pt.predicate
            ));
        }
    }
    let max_tail = points.iter().map(|p| p.tail).fold(0.0, f64::max);
    let first = bad.iter().take(3).cloned().collect::<Vec<_>>().join("; ");
    verdict(
        bad.is_empty(),
        format!(
            "{} of {scored} scored points disagree ({disputed} disputed), max tail {max_tail:.4}; e.g. {first}",
            bad.len()
        ),
    )
}

fn decay() -> Verdict {
    let a = C::new(0.5, 0.0);
    let b = C::new(0.5, 0.0);
    let wi = Walk::new(WalkKind::TypeI, realize_a(a).expect("|a| < 1"), [0.0, 0.0]);
    let (coin, gamma) = realize_b(b).expect("|b| < 1");
    let wii = Walk::new(WalkKind::TypeII, coin, gamma);
    let cases = [
        ("I", wi, e1(), nu_i(a).expect("|a| < 1")),
        ("II", wii, CoinState::TypeII([0.0, 0.0]), nu_ii(b).expect("|b| < 1")),
    ];
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for (name, walk, cs, nu) in cases {
        let prof = diagonal_profile(&walk, &cs, 192, 256, 3).expect("walk fits its box");
        for k in 1..=3 {
            let want = nu.powi(2 * k as i32);
            worst = worst.max(((prof.ratios[k] - want) / want).abs());
        }
        parts.push(format!(
            "{name}: {:.4}/{:.4}/{:.4} vs {:.4}/{:.4}/{:.4}",
            prof.ratios[1],
            prof.ratios[2],
            prof.ratios[3],
            nu.powi(2),
            nu.powi(4),
            nu.powi(6)
        ));
    }
    verdict(worst < 0.1, format!("max relative error {worst:.3} [{}]", parts.join("; ")))
}

fn unitarity() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(20240611);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let coin = random_paper_class_coin(&mut rng);
        let gamma = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
        let delta = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
        let v: [C; 4] = std::array::from_fn(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for (walk, cs) in [
            (Walk::new(WalkKind::TypeI, coin.clone(), [0.0, 0.0]), CoinState::TypeI(v.map(|z| z / n))),
            (Walk::new(WalkKind::TypeII, coin.clone(), gamma), CoinState::TypeII(delta)),
        ] {
            let mut s = initial_state(walk.kind, &cs, 204).expect("normalized state");
            for _ in 0..200 {
                s = walk.step(&s).expect("walk fits its box");
                worst = worst.max((s.norm_sqr() - 1.0).abs());
            }
        }
    }
    verdict(worst < 1e-9, format!("max norm drift {worst:.3e} over 10 coins x 2 types x 200 steps"))
}

fn eigen() -> Verdict {
    let seqs = [
        VerblunskySeq::zero(),
        VerblunskySeq::NullOdd(C::new(0.5, 0.0)),
        VerblunskySeq::NullEven(C::new(0.3, -0.4)),
        VerblunskySeq::Explicit(vec![C::new(0.2, 0.1), C::new(-0.4, 0.3), C::new(0.5, 0.0), C::new(0.1, -0.6)]),
    ];
    let mut worst: f64 = 0.0;
    for seq in &seqs {
        let c = build_cmv(seq, 32).expect("valid sequence");
        let basis = opuc_basis(seq, 32, BasisKind::FirstKind).expect("valid sequence");
        for j in 0..16 {
            let z = C::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / 16.0 + 0.1);
            worst = worst.max(eigen_residual(&c, &basis, z).expect("z is on the circle"));
        }
    }
    verdict(worst < 1e-10, format!("max residual {worst:.3e} over 16 points x 4 sequences"))
}

fn run_compare(dir: &Path, args: &[&str]) -> Result<(Vec<u8>, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_cgmv"))
        .current_dir(dir)
        .arg("compare")
        .args(args)
        .args(["--out", "report.json"])
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(String::from_utf8_lossy(&out.stderr).into_owned());
    }
    let report = std::fs::read(dir.join("report.json")).map_err(|e| e.to_string())?;
    let manifest = std::fs::read_to_string(dir.join("report.json.manifest.json")).map_err(|e| e.to_string())?;
    Ok((report, strip_timestamp(&manifest).map_err(|e| e.to_string())?))
}

fn determinism() -> Verdict {
    let cases: [&[&str]; 3] =
        [&["--type", "I", "--a", "0,0.6"], &["--type", "II", "--b", "0.5,0"], &["--type", "II", "--b", "0,-0.5"]];
    let mut diffs = Vec::new();
    for case in cases {
        let (d1, d2) = (tempfile::tempdir().expect("tempdir"), tempfile::tempdir().expect("tempdir"));
        match (run_compare(d1.path(), case), run_compare(d2.path(), case)) {
            (Ok(a), Ok(b)) if a == b => {}
            (Ok(_), Ok(_)) => diffs.push(format!("{} differs", case.join(" "))),
            (Err(e), _) | (_, Err(e)) => diffs.push(format!("{}: {}", case.join(" "), e.trim())),
        }
    }
    verdict(diffs.is_empty(), format!("3 compare configs run twice; {}", if diffs.is_empty() { "byte-identical".into() } else { diffs.join("; ") }))
}

fn main() {
    let criteria: Vec<(&str, Box<dyn FnOnce() -> Verdict>)> = vec![
        ("correspondence identity", Box::new(|| timed(Duration::from_secs(5), correspondence))),
        ("moment identity", Box::new(|| timed(Duration::from_secs(30), moments))),
        ("spectral probability", Box::new(totals)),
        ("localization agreement", Box::new(|| timed(Duration::from_secs(300), localization))),
        ("decay ratios", Box::new(decay)),
        ("unitarity", Box::new(unitarity)),
        ("eigen-relation", Box::new(eigen)),
        ("determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let v = f();
        if !v.pass {
            failed += 1;
        }
        println!("{} {}. {name}: {}", if v.pass { "PASS" } else { "FAIL" }, i + 1, v.detail);
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed > 0 && std::env::var("CGMV_ACCEPTANCE_STRICT").as_deref() == Ok("1") {
        std::process::exit(1);
    }
}
