//! Acceptance criteria, one line each. Every comparison is exact.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde_json::Value;

use dvblab::dualization::adual::adual_compare;
use dvblab::dualization::cstar::cstar_duality;
use dvblab::dualization::triality::{double_transpose_is_identity, triality_report};
use dvblab::dualization::udual::{check_u_dual, compare_abstract, line_dual_compare, u_dual, DualSide};
use dvblab::dualization::xspace::xspace_oracle;
use dvblab::dvb::{check_interchange_with, DvbMorphism, Side, TrivialDvb};
use dvblab::equivalence::{check_functors, check_nat_pi, check_nat_t, combining, compare_with_oracle, doubling};
use dvblab::geom::{check_atiyah, check_jet, square_report, GeomContext};
use dvblab::sample::{dim, trial_rng, TrialRng};
use dvblab::seq::{DvbSeq, DvbStarSeq};

const SEED: u64 = 2024;
const SAMPLES: usize = 5;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn line(n: usize, name: &str, verdict: &Verdict) {
    let (tag, detail) = match verdict {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    let mut out = std::io::stdout().lock();
    writeln!(out, "criterion {n:>2} {tag} {name}: {detail}").unwrap();
    out.flush().unwrap();
}

/// Runs `f` on `count` independent trials and reports the first failure.
fn trials(label: &str, count: usize, f: impl Fn(&mut TrialRng) -> Result<(), String> + Sync) -> Verdict {
    let failures: Vec<(usize, String)> = (0..count)
        .into_par_iter()
        .filter_map(|t| f(&mut trial_rng(SEED, label, t as u64)).err().map(|e| (t, e)))
        .collect();
    match failures.first() {
        None => Ok(format!("{count} trials")),
        Some((t, e)) => Err(format!("{} of {count} failed; trial {t}: {e}", failures.len())),
    }
}

fn triples(max: usize) -> Vec<(usize, usize, usize)> {
    let r = 0..=max;
    r.clone()
        .flat_map(|a| r.clone().flat_map(move |b| (0..=max).map(move |c| (a, b, c))))
        .collect()
}

fn dims3(rng: &mut TrialRng, lo: usize, hi: usize) -> (usize, usize, usize) {
    (dim(rng, lo, hi), dim(rng, lo, hi), dim(rng, lo, hi))
}

fn random_dvb(rng: &mut TrialRng, hi: usize) -> TrivialDvb {
    let (a, b, c) = dims3(rng, 0, hi);
    TrivialDvb::with_dims(a, b, c)
}

fn random_seq(rng: &mut TrialRng, hi: usize) -> DvbSeq {
    let (a, b, c) = dims3(rng, 0, hi);
    DvbSeq::random(rng, a, b, c)
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn both(a: Verdict, b: Verdict) -> Verdict {
    match (a, b) {
        (Ok(x), Ok(y)) => Ok(format!("{x}; {y}")),
        (Err(e), _) | (_, Err(e)) => Err(e),
    }
}

fn interchange() -> Verdict {
    let trivial = trials("interchange.trivial", 50, |rng| {
        let mut d = random_dvb(rng, 4);
        let rep = check_interchange_with(&mut d, 500, rng);
        ensure(rep.all_passed(), || format!("dims {:?}: {:?}", d.dims(), rep.laws))
    });
    let doubled = trials("interchange.doubled", 50, |rng| {
        let s = random_seq(rng, 4);
        let mut dd = doubling(&s);
        let rep = check_interchange_with(&mut dd, 500, rng);
        ensure(rep.all_passed(), || format!("{:?}", rep.laws))
    });
    both(
        trivial.map(|d| format!("trivial DVBs, {d}")),
        doubled.map(|d| format!("doubled sequences, {d}")),
    )
    .map(|d| format!("500 samples per law; {d}"))
}

fn dimension_law() -> Verdict {
    let all = triples(4);
    let bad: Vec<_> = all
        .par_iter()
        .filter(|&&(a, b, c)| combining(&TrivialDvb::with_dims(a, b, c)).seq.omega().dim != a * b + c)
        .collect();
    ensure(bad.is_empty(), || format!("wrong dimension for {bad:?}")).map(|_| format!("{} triples", all.len()))
}

fn equivalence() -> Verdict {
    let t = trials("equivalence.nat_t", 100, |rng| {
        let (src, tgt) = (random_dvb(rng, 3), random_dvb(rng, 3));
        let rep = check_nat_t(&DvbMorphism::random(rng, &src, &tgt), rng, SAMPLES);
        ensure(rep.passed(), || format!("{rep:?}"))
    });
    let pi = trials("equivalence.nat_pi", 100, |rng| {
        let (s1, s2) = (random_seq(rng, 3), random_seq(rng, 3));
        let m = dvblab::seq::SeqMorphism::random(rng, &s1, &s2);
        let rep = check_nat_pi(&m, rng, SAMPLES);
        ensure(rep.passed(), || format!("{rep:?}"))
    });
    let functors = trials("equivalence.functors", 100, |rng| {
        let ds: Vec<_> = (0..3).map(|_| random_dvb(rng, 3)).collect();
        let phi1 = DvbMorphism::random(rng, &ds[0], &ds[1]);
        let phi2 = DvbMorphism::random(rng, &ds[1], &ds[2]);
        let ss: Vec<_> = (0..3).map(|_| random_seq(rng, 3)).collect();
        let m1 = dvblab::seq::SeqMorphism::random(rng, &ss[0], &ss[1]);
        let m2 = dvblab::seq::SeqMorphism::random(rng, &ss[1], &ss[2]);
        let rep = check_functors(&phi1, &phi2, &m1, &m2, rng, SAMPLES);
        ensure(rep.passed(), || format!("{rep:?}"))
    });
    let t = t.map(|d| format!("t: {d}"));
    let pi = pi.map(|d| format!("pi: {d}"));
    both(both(t, pi), functors.map(|d| format!("functors: {d}")))
}

fn exhaustive(max: usize, f: impl Fn(&TrivialDvb, &mut TrialRng) -> Result<(), String> + Sync) -> Verdict {
    let all = triples(max);
    let bad: Vec<String> = all
        .par_iter()
        .filter_map(|&(a, b, c)| {
            let mut rng = trial_rng(SEED, "exhaustive", (a * 100 + b * 10 + c) as u64);
            f(&TrivialDvb::with_dims(a, b, c), &mut rng).err()
        })
        .collect();
    match bad.first() {
        None => Ok(format!("all {} dims triples", all.len())),
        Some(e) => Err(format!("{} triples failed, first: {e}", bad.len())),
    }
}

fn oracle_equivalence() -> Verdict {
    exhaustive(3, |d, rng| {
        let rep = compare_with_oracle(d, rng, SAMPLES);
        ensure(rep.passed(), || format!("{rep:?}"))
    })
}

fn double_linearity() -> Verdict {
    exhaustive(3, |d, rng| {
        let rep = xspace_oracle(d, rng);
        ensure(rep.passed(), || format!("{rep:?}"))
    })
}

fn u_duality() -> Verdict {
    let line_instances = std::sync::atomic::AtomicUsize::new(0);
    let verdict = trials("u_duality", 200, |rng| {
        let (du, dv, dk) = dims3(rng, 1, 3);
        let s = DvbStarSeq::random(rng, du, dv, dk);
        for side in [DualSide::First, DualSide::Second] {
            let d = u_dual(&s, side).map_err(|e| e.to_string())?;
            let rep = check_u_dual(&d, rng, SAMPLES);
            ensure(rep.passed(), || format!("{:?} {side:?}: {rep:?}", s.dims()))?;
        }
        let d = u_dual(&s, DualSide::First).map_err(|e| e.to_string())?;
        ensure(compare_abstract(&d), || {
            format!("{:?}: differs from the abstract dual", s.dims())
        })?;
        if du == 1 {
            line_instances.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
            let rep = line_dual_compare(&d, rng, SAMPLES);
            ensure(rep.passed(), || format!("{:?} line dual: {rep:?}", s.dims()))?;
        }
        Ok(())
    });
    verdict.map(|d| format!("{d}, {} with dim U = 1", line_instances.into_inner()))
}

fn triality() -> Verdict {
    trials("triality", 100, |rng| {
        let (du, dv, dk) = dims3(rng, 1, 3);
        let s = DvbStarSeq::random(rng, du, dv, dk);
        let rep = triality_report(&s, rng, SAMPLES).map_err(|e| e.to_string())?;
        ensure(rep.passed() && double_transpose_is_identity(&s), || format!("{rep:?}"))
    })
}

fn a_duality() -> Verdict {
    trials("a_duality", 100, |rng| {
        let (a, b, c) = dims3(rng, 1, 3);
        let d = TrivialDvb::with_dims(a, b, c);
        for side in [Side::A, Side::B] {
            let rep = adual_compare(&d, side, rng, SAMPLES);
            ensure(rep.passed() && !rep.vacuous, || format!("{rep:?}"))?;
        }
        let rep = cstar_duality(&d, rng, SAMPLES);
        ensure(rep.passed() && rep.nondegenerate, || format!("{rep:?}"))
    })
}

fn examples() -> Verdict {
    let pairs: Vec<(usize, usize)> = (0..=3).flat_map(|t| (0..=3).map(move |e| (t, e))).collect();
    let fibers = pairs
        .par_iter()
        .map(|&(t, e)| {
            let ctx = GeomContext::new(t, e);
            let mut rng = trial_rng(SEED, "examples", (t * 10 + e) as u64);
            let jet = check_jet(&ctx, &mut rng, SAMPLES);
            ensure(jet.passed() && jet.dim == t * e + e, || {
                format!("JE at {:?}: {jet:?}", (t, e))
            })?;
            let atiyah = check_atiyah(&ctx, &mut rng, SAMPLES);
            ensure(atiyah.passed() && atiyah.dim == e * e + t, || {
                format!("DE at {:?}: {atiyah:?}", (t, e))
            })
        })
        .collect::<Result<Vec<()>, String>>();
    let squares = [(1, 1), (2, 2), (2, 3)]
        .par_iter()
        .map(|&(t, e)| {
            let mut rng = trial_rng(SEED, "square", (t * 10 + e) as u64);
            let rep = square_report(&GeomContext::new(t, e), &mut rng, SAMPLES);
            ensure(rep.passed() && !rep.consistency_vacuous, || {
                format!("square at {:?}: {rep:?}", (t, e))
            })
        })
        .collect::<Result<Vec<()>, String>>();
    fibers?;
    squares?;
    Ok(format!(
        "JE and DE for {} (dT, dE) pairs; squares (1,1), (2,2), (2,3)",
        pairs.len()
    ))
}

fn run_cli(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_dvblab"))
        .args(args)
        .env_remove("DVBLAB_SEED")
        .output()
        .expect("binary runs");
    (out.status.code(), out.stdout)
}

fn without_elapsed(stdout: &[u8]) -> Value {
    let mut v: Value = serde_json::from_slice(stdout).expect("report JSON");
    for c in v["checks"].as_array_mut().unwrap() {
        c.as_object_mut().unwrap().remove("elapsed");
    }
    v
}

fn cli_contract() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let smoke = ["verify", "--trials", "2", "--max-dim", "2", "--seed", "4"];
    let (c1, r1) = run_cli(&smoke);
    let (c2, r2) = run_cli(&smoke);
    ensure(c1 == Some(0) && c2 == Some(0), || {
        format!("smoke exit codes {c1:?}, {c2:?}")
    })?;
    ensure(without_elapsed(&r1) == without_elapsed(&r2), || {
        "reports differ under a fixed seed".into()
    })?;

    let path = dir.path().join("seq.json");
    let p = path.to_str().unwrap();
    let (g1, a) = run_cli(&["gen", "--dims", "2,3,1", "--seed", "7"]);
    let (g2, b) = run_cli(&["gen", "--dims", "2,3,1", "--seed", "7"]);
    ensure(g1 == Some(0) && g2 == Some(0) && a == b, || {
        "gen is not byte-identical".into()
    })?;
    std::fs::write(&path, &a).map_err(|e| e.to_string())?;
    let (ok, _) = run_cli(&["roundtrip", p]);
    ensure(ok == Some(0), || format!("roundtrip on gen output exited {ok:?}"))?;
    let mut v: Value = serde_json::from_slice(&a).unwrap();
    v["p"][0][0] = Value::String("99".into());
    std::fs::write(&path, v.to_string()).unwrap();
    let (bad, _) = run_cli(&["verify", "--instance", p]);
    ensure(bad == Some(1), || format!("corrupted instance exited {bad:?}"))?;
    std::fs::write(&path, &a[..a.len() / 3]).unwrap();
    let (trunc, _) = run_cli(&["roundtrip", p]);
    ensure(trunc == Some(2), || format!("truncated JSON exited {trunc:?}"))?;
    let (args, _) = run_cli(&["verify", "--trials", "0"]);
    ensure(args == Some(2), || format!("bad arguments exited {args:?}"))?;

    let start = Instant::now();
    let (full, _) = run_cli(&["verify", "--suite", "all", "--trials", "100", "--max-dim", "3"]);
    let elapsed = start.elapsed();
    ensure(full == Some(0), || format!("full verify exited {full:?}"))?;
    ensure(elapsed < Duration::from_secs(60), || {
        format!("full verify took {elapsed:.1?}")
    })?;
    Ok(format!(
        "deterministic; exit codes 0/1/2; full verify in {:.1}s",
        elapsed.as_secs_f64()
    ))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("interchange laws", interchange),
        ("dimension law", dimension_law),
        ("category equivalence", equivalence),
        ("combining oracle", oracle_equivalence),
        ("double-linearity oracle", double_linearity),
        ("U-duality", u_duality),
        ("triality", triality),
        ("A*- and C*-duality", a_duality),
        ("tangent examples", examples),
        ("CLI contract", cli_contract),
    ];
    let mut failed = Vec::new();
    for (k, (name, f)) in criteria.iter().enumerate() {
        let verdict = f();
        line(k + 1, name, &verdict);
        if verdict.is_err() {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
