//! Randomized verification suites and their JSON reports.
//!
//! Every check draws its instances from `trial_rng(seed, name, trial)`, so
//! trials are independent substreams and may run in parallel without
//! changing any result. Records are sorted by check name.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::dualization::adual::adual_compare;
use crate::dualization::cstar::cstar_duality;
use crate::dualization::side_dual::{check_side_dual, dual_over};
use crate::dualization::triality::{double_transpose_is_identity, triality_report};
use crate::dualization::udual::{check_u_dual, compare_abstract, line_dual_compare, u_dual, DualSide};
use crate::dualization::xspace::xspace_oracle;
use crate::dvb::{check_interchange_with, DvbMorphism, Side, TrivialDvb};
use crate::equivalence::{
    check_functors, check_nat_pi, check_nat_t, check_trivialization, combining, compare_with_oracle, doubling,
};
use crate::geom::{check_atiyah, check_cotangent, check_jet, square_report, GeomContext};
use crate::sample::{self, trial_rng, TrialRng};
use crate::seq::{DvbSeq, DvbStarSeq, SeqFile, SeqMorphism};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Interchange,
    Equivalence,
    Duality,
    Triality,
    Examples,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckRecord {
    pub name: String,
    pub anchor: String,
    pub trials: usize,
    pub failures: usize,
    pub first_counterexample: Option<Value>,
    /// Wall time in milliseconds; the only nondeterministic field.
    pub elapsed: u64,
}

impl CheckRecord {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub suite: Suite,
    pub seed: u64,
    pub trials: usize,
    pub max_dim: usize,
    pub passed: bool,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn failed_checks(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.passed())
    }

    /// The report with every `elapsed` zeroed, for comparing runs.
    pub fn without_timings(&self) -> Report {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.elapsed = 0;
        }
        r
    }
}

type TrialResult = Result<(), Value>;

pub struct Check {
    pub name: &'static str,
    pub anchor: &'static str,
    pub suite: Suite,
    run: fn(&mut TrialRng, usize) -> TrialResult,
}

fn fail_unless<T: Serialize>(ok: bool, detail: T) -> TrialResult {
    if ok {
        Ok(())
    } else {
        Err(serde_json::to_value(detail).unwrap_or(Value::Null))
    }
}

fn dims(rng: &mut TrialRng, lo: usize, hi: usize) -> (usize, usize, usize) {
    (
        sample::dim(rng, lo, hi),
        sample::dim(rng, lo, hi),
        sample::dim(rng, lo, hi),
    )
}

fn trivial(rng: &mut TrialRng, lo: usize, hi: usize) -> TrivialDvb {
    let (a, b, c) = dims(rng, lo, hi);
    TrivialDvb::with_dims(a, b, c)
}

fn random_seq(rng: &mut TrialRng, lo: usize, hi: usize) -> DvbSeq {
    let (a, b, c) = dims(rng, lo, hi);
    DvbSeq::random(rng, a, b, c)
}

fn random_star(rng: &mut TrialRng, lo: usize, hi: usize) -> DvbStarSeq {
    let (u, v, k) = dims(rng, lo, hi);
    DvbStarSeq::random(rng, u, v, k)
}

fn seq_instance(s: &DvbSeq) -> Value {
    serde_json::to_value(SeqFile::from_seq(s)).unwrap_or(Value::Null)
}

fn star_instance(s: &DvbStarSeq) -> Value {
    json!({
        "U": s.u.dim,
        "V": s.v.dim,
        "K": s.k.dim,
        "i": s.i().matrix(),
        "j": s.j().matrix(),
    })
}

const INTERCHANGE_SAMPLES: usize = 20;
const INNER_SAMPLES: usize = 5;

fn interchange_trivial(rng: &mut TrialRng, max_dim: usize) -> TrialResult {
    let mut d = trivial(rng, 0, max_dim);
    let rep = check_interchange_with(&mut d, INTERCHANGE_SAMPLES, rng);
    fail_unless(rep.all_passed(), json!({ "dims": d.dims(), "report": rep }))
}

fn interchange_doubled(rng: &mut TrialRng, max_dim: usize) -> TrialResult {
    let s = random_seq(rng, 0, max_dim);
    let mut dd = doubling(&s);
    let rep = check_interchange_with(&mut dd, INTERCHANGE_SAMPLES, rng);
    let triv = check_trivialization(&dd, rng, INNER_SAMPLES);
    fail_unless(
        rep.all_passed() && triv.passed(),
        json!({ "instance": seq_instance(&s), "interchange": rep, "trivialization": triv }),
    )
}

fn dimension_law(rng: &mut TrialRng, max_dim: usize) -> TrialResult {
    let d = trivial(rng, 0, max_dim);
    let (a, b, c) = d.dims();
    let got = combining(&d).seq.omega().dim;
    fail_unless(got == a * b + c, json!({ "dims": d.dims(), "omega": got }))
}

fn nat_t(rng: &mut TrialRng, max_dim: usize) -> TrialResult {
    let (src, tgt) = (trivial(rng, 0, max_dim), trivial(rng, 0, max_dim));
    let phi = DvbMorphism::random(rng, &src, &tgt);
    let rep = check_nat_t(&phi, rng, INNER_SAMPLES);
    fail_unless(
        rep.passed(),
        json!({ "source": src.dims(), "target": tgt.dims(), "report": rep }),
    )
}

fn nat_pi(rng: &mut TrialRng, max_dim: usize) -> TrialResult {
    let (s1, s2) = (random_seq(rng, 0, max_dim), random_seq(rng, 0, max_dim));
    let m = SeqMorphism::random(rng, &s1, &s2);
    let rep = check_nat_pi(&m, rng, INNER_SAMPLES);
    fail_unless(
        rep.passed(),
        json!({ "source": seq_instance(&s1), "target": seq_instance(&s2), "report": rep }),
    )
}

fn functors(rng: &mut TrialRng, max_dim: usize) -> TrialResult {
    let ds: Vec<TrivialDvb> = (0..3).map(|_| trivial(rng, 0, max_dim)).collect();
    let phi1 = DvbMorphism::random(rng, &ds[0], &ds[1]);
    let phi2 = DvbMorphism::random(rng, &ds[1], &ds[2]);
    let ss: Vec<DvbSeq> = (0..3).map(|_| random_seq(rng, 0, max_dim)).collect();
    let m1 = SeqMorphism::random(rng, &ss[0], &ss[1]);
    let m2 = SeqMorphism::random(rng, &ss[1], &ss[2]);
    let rep = check_functors(&phi1, &phi2, &m1, &m2, rng, INNER_SAMPLES);
    let dvb_dims: Vec<_> = ds.iter().map(TrivialDvb::dims).collect();
    fail_unless(rep.passed(), json!({ "dvbs": dvb_dims, "report": rep }))
}

fn combining_oracle(rng: &mut TrialRng, max_dim: usize) -> TrialResult {
    let d = trivial(rng, 0, max_dim);
    let rep = compare_with_oracle(&d, rng, INNER_SAMPLES);
    fail_unless(rep.passed(), rep)
}

fn ansatz_oracle(rng: &mut TrialRng, max_dim: usize) -> TrialResult {
    let d = trivial(rng, 0, max_dim);
    let rep = xspace_oracle(&d, rng);
    fail_unless(rep.passed(), rep)
}

fn side_duals(rng: &mut TrialRng, max_dim: usize) -> TrialResult {
    let d = trivial(rng, 0, max_dim);
    let reps: Vec<_> = [Side::A, Side::B]
        .into_iter()
        .map(|side| check_side_dual(&dual_over(&d, side), rng, INNER_SAMPLES))
        .collect();
    fail_unless(
        reps.iter().all(|r| r.passed()),
        json!({ "dims": d.dims(), "reports": reps }),
    )
}

fn u_duality(rng: &mut TrialRng, max_dim: usize) -> TrialResult {
    let s = random_star(rng, 1, max_dim);
    let mut details = Vec::new();
    let mut ok = true;
    for side in [DualSide::First, DualSide::Second] {
        match u_dual(&s, side) {
            Ok(d) => {
                let rep = check_u_dual(&d, rng, INNER_SAMPLES);
                ok &= rep.passed();
                details.push(json!({ "side": side, "report": rep }));
            }
            Err(err) => {
                ok = false;
                details.push(json!({ "side": side, "error": err.to_string() }));
            }
        }
    }
    if let Ok(d) = u_dual(&s, DualSide::First) {
        let abstract_equal = compare_abstract(&d);
        ok &= abstract_equal;
        details.push(json!({ "abstractEqual": abstract_equal }));
        if s.u.dim == 1 {
            let line = line_dual_compare(&d, rng, INNER_SAMPLES);
            ok &= line.passed();
            details.push(json!({ "lineDual": line }));
        }
    }
    fail_unless(ok, json!({ "instance": star_instance(&s), "details": details }))
}

fn line_duals(rng: &mut TrialRng, max_dim: usize) -> TrialResult {
    let (v, k) = (sample::dim(rng, 0, max_dim), sample::dim(rng, 0, max_dim));
    let s = DvbStarSeq::random(rng, 1, v, k);
    let d = u_dual(&s, DualSide::First).map_err(|e| json!({ "error": e.to_string() }))?;
    let rep = line_dual_compare(&d, rng, INNER_SAMPLES);
    fail_unless(rep.passed(), json!({ "instance": star_instance(&s), "report": rep }))
}

fn a_duality(rng: &mut TrialRng, max_dim: usize) -> TrialResult {
    let d = trivial(rng, 1, max_dim);
    let reps: Vec<_> = [Side::A, Side::B]
        .into_iter()
        .map(|side| adual_compare(&d, side, rng, INNER_SAMPLES))
        .collect();
    fail_unless(reps.iter().all(|r| r.passed()), reps)
}

fn c_duality(rng: &mut TrialRng, max_dim: usize) -> TrialResult {
    let d = trivial(rng, 1, max_dim);
    let rep = cstar_duality(&d, rng, INNER_SAMPLES);
    fail_unless(rep.passed(), rep)
}

fn three_duals(rng: &mut TrialRng, max_dim: usize) -> TrialResult {
    let s = random_star(rng, 1, max_dim);
    match triality_report(&s, rng, INNER_SAMPLES) {
        Ok(rep) => fail_unless(rep.passed(), json!({ "instance": star_instance(&s), "report": rep })),
        Err(err) => Err(json!({ "instance": star_instance(&s), "error": err.to_string() })),
    }
}

fn double_transpose(rng: &mut TrialRng, max_dim: usize) -> TrialResult {
    let s = random_star(rng, 0, max_dim);
    fail_unless(double_transpose_is_identity(&s), star_instance(&s))
}

fn geom_ctx(rng: &mut TrialRng, max_dim: usize) -> GeomContext {
    GeomContext::new(sample::dim(rng, 0, max_dim), sample::dim(rng, 0, max_dim))
}

fn jet(rng: &mut TrialRng, max_dim: usize) -> TrialResult {
    let ctx = geom_ctx(rng, max_dim);
    let rep = check_jet(&ctx, rng, INNER_SAMPLES);
    fail_unless(rep.passed(), rep)
}

fn atiyah(rng: &mut TrialRng, max_dim: usize) -> TrialResult {
    let ctx = geom_ctx(rng, max_dim);
    let rep = check_atiyah(&ctx, rng, INNER_SAMPLES);
    fail_unless(rep.passed(), rep)
}

fn cotangent(rng: &mut TrialRng, max_dim: usize) -> TrialResult {
    let ctx = geom_ctx(rng, max_dim);
    let rep = check_cotangent(&ctx, rng, INNER_SAMPLES);
    fail_unless(rep.passed(), rep)
}

fn square(rng: &mut TrialRng, max_dim: usize) -> TrialResult {
    let ctx = geom_ctx(rng, max_dim);
    let rep = square_report(&ctx, rng, INNER_SAMPLES);
    fail_unless(rep.passed(), rep)
}

pub const CHECKS: &[Check] = &[
    Check {
        name: "interchange.doubled",
        anchor: "interchange laws on doubled sequences",
        suite: Suite::Interchange,
        run: interchange_doubled,
    },
    Check {
        name: "interchange.trivial",
        anchor: "interchange laws",
        suite: Suite::Interchange,
        run: interchange_trivial,
    },
    Check {
        name: "equivalence.dimension_law",
        anchor: "dim C(D) = dim A dim B + dim C",
        suite: Suite::Equivalence,
        run: dimension_law,
    },
    Check {
        name: "equivalence.functors",
        anchor: "combining and doubling are functors",
        suite: Suite::Equivalence,
        run: functors,
    },
    Check {
        name: "equivalence.nat_pi",
        anchor: "category equivalence, pi",
        suite: Suite::Equivalence,
        run: nat_pi,
    },
    Check {
        name: "equivalence.nat_t",
        anchor: "category equivalence, t",
        suite: Suite::Equivalence,
        run: nat_t,
    },
    Check {
        name: "equivalence.oracle",
        anchor: "combining by generators and relations",
        suite: Suite::Equivalence,
        run: combining_oracle,
    },
    Check {
        name: "duality.a_duality",
        anchor: "X(D*_A) is the A*-dual of X(D)",
        suite: Suite::Duality,
        run: a_duality,
    },
    Check {
        name: "duality.c_duality",
        anchor: "D*_A and D*_B are dual over C*",
        suite: Suite::Duality,
        run: c_duality,
    },
    Check {
        name: "duality.double_linear",
        anchor: "double-linear functions are (theta, chi)",
        suite: Suite::Duality,
        run: ansatz_oracle,
    },
    Check {
        name: "duality.line_dual",
        anchor: "line-valued dual is the ordinary dual",
        suite: Suite::Duality,
        run: line_duals,
    },
    Check {
        name: "duality.side_dual",
        anchor: "side duals of a double vector bundle",
        suite: Suite::Duality,
        run: side_duals,
    },
    Check {
        name: "duality.u_dual",
        anchor: "U-duality of DVB* sequences",
        suite: Suite::Duality,
        run: u_duality,
    },
    Check {
        name: "triality.double_transpose",
        anchor: "transposing twice is the identity",
        suite: Suite::Triality,
        run: double_transpose,
    },
    Check {
        name: "triality.three_duals",
        anchor: "three steps of duals give the transpose",
        suite: Suite::Triality,
        run: three_duals,
    },
    Check {
        name: "examples.atiyah",
        anchor: "DE = X(T*E*)",
        suite: Suite::Examples,
        run: atiyah,
    },
    Check {
        name: "examples.cotangent",
        anchor: "cotangent doubles of E and E*",
        suite: Suite::Examples,
        run: cotangent,
    },
    Check {
        name: "examples.jet",
        anchor: "JE = X(TE*)",
        suite: Suite::Examples,
        run: jet,
    },
    Check {
        name: "examples.square",
        anchor: "DE, JE, DE*, JE* duality square",
        suite: Suite::Examples,
        run: square,
    },
];

pub fn checks_for(suite: Suite) -> Vec<&'static Check> {
    CHECKS
        .iter()
        .filter(|c| suite == Suite::All || c.suite == suite)
        .collect()
}

fn panic_message(payload: Box<dyn std::any::Any + Send>) -> String {
    payload
        .downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| payload.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "panic".to_string())
}

pub fn run_check(check: &Check, seed: u64, trials: usize, max_dim: usize) -> CheckRecord {
    let start = Instant::now();
    let outcomes: Vec<TrialResult> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, check.name, t as u64);
            catch_unwind(AssertUnwindSafe(|| (check.run)(&mut rng, max_dim)))
                .unwrap_or_else(|p| Err(json!({ "panic": panic_message(p) })))
        })
        .collect();
    let failures = outcomes.iter().filter(|o| o.is_err()).count();
    let first_counterexample = outcomes.into_iter().enumerate().find_map(|(t, o)| {
        o.err()
            .map(|detail| json!({ "trial": t, "seed": seed, "detail": detail }))
    });
    CheckRecord {
        name: check.name.to_string(),
        anchor: check.anchor.to_string(),
        trials,
        failures,
        first_counterexample,
        elapsed: start.elapsed().as_millis() as u64,
    }
}

pub fn run_suite(suite: Suite, seed: u64, trials: usize, max_dim: usize) -> Report {
    let mut checks: Vec<CheckRecord> = checks_for(suite)
        .into_iter()
        .map(|c| run_check(c, seed, trials, max_dim))
        .collect();
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    Report {
        suite,
        seed,
        trials,
        max_dim,
        passed: checks.iter().all(CheckRecord::passed),
        checks,
    }
}

fn instance_record(name: &str, anchor: &str, trials: usize, result: TrialResult, start: Instant) -> CheckRecord {
    CheckRecord {
        name: name.to_string(),
        anchor: anchor.to_string(),
        trials,
        failures: usize::from(result.is_err()),
        first_counterexample: result.err(),
        elapsed: start.elapsed().as_millis() as u64,
    }
}

/// Checks on a user-supplied DVB sequence: exactness, then the interchange
/// laws of its doubling, its trivialization and the round trip through the
/// combining functor.
pub fn verify_instance(file: &SeqFile, seed: u64, trials: usize) -> Report {
    let mut checks = Vec::new();
    let start = Instant::now();
    match file.to_seq() {
        Err(err) => checks.push(instance_record(
            "instance.exactness",
            "DVB sequences are short exact",
            1,
            Err(json!({ "instance": file, "error": err.to_string() })),
            start,
        )),
        Ok(s) => {
            checks.push(instance_record(
                "instance.exactness",
                "DVB sequences are short exact",
                1,
                Ok(()),
                start,
            ));
            let mut rng = trial_rng(seed, "instance", 0);
            let start = Instant::now();
            let mut dd = doubling(&s);
            let rep = check_interchange_with(&mut dd, trials, &mut rng);
            checks.push(instance_record(
                "instance.interchange",
                "interchange laws on doubled sequences",
                trials,
                fail_unless(rep.all_passed(), json!({ "instance": file, "report": rep })),
                start,
            ));
            let start = Instant::now();
            let rep = check_nat_pi(&SeqMorphism::identity(&s), &mut rng, trials);
            checks.push(instance_record(
                "instance.nat_pi",
                "category equivalence, pi",
                trials,
                fail_unless(rep.passed(), json!({ "instance": file, "report": rep })),
                start,
            ));
        }
    }
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    Report {
        suite: Suite::All,
        seed,
        trials,
        max_dim: file.a.max(file.b).max(file.c),
        passed: checks.iter().all(CheckRecord::passed),
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique_and_sorted() {
        let names: Vec<_> = CHECKS.iter().map(|c| c.name).collect();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len());
        for suite in [
            Suite::Interchange,
            Suite::Equivalence,
            Suite::Duality,
            Suite::Triality,
            Suite::Examples,
        ] {
            assert!(!checks_for(suite).is_empty());
        }
    }

    #[test]
    fn smoke_run_is_deterministic() {
        let a = run_suite(Suite::All, 5, 2, 2);
        let b = run_suite(Suite::All, 5, 2, 2);
        assert!(a.passed, "{:?}", a.failed_checks().collect::<Vec<_>>());
        assert_eq!(a.without_timings(), b.without_timings());
    }

    #[test]
    fn corrupted_instance_is_reported() {
        let mut rng = sample::rng_from_seed(1);
        let s = DvbSeq::random(&mut rng, 1, 2, 1);
        let good = SeqFile::from_seq(&s);
        assert!(verify_instance(&good, 1, 5).passed);
        let mut bad = good.clone();
        let v = bad.p.get(0, 0).clone() + crate::exactla::Scalar::one();
        bad.p.set(0, 0, v);
        let rep = verify_instance(&bad, 1, 5);
        assert!(!rep.passed);
        assert!(rep.checks[0].first_counterexample.is_some());
    }
}
