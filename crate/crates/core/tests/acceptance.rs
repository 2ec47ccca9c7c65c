//! Acceptance run: every criterion at its stated tolerance, one line each.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_3};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use qmeasure::density::{joint_prediction_gap, DensityMatrix, MixtureSpec};
use qmeasure::hilbert::{
    identity, kron, max_abs_diff, tensor, CompositeSpace, Label, Observable, ObserverId,
    StateVector,
};
use qmeasure::measurement::basis_ambiguity_check;
use qmeasure::observer::{
    hang_up, query, BranchedState, EnvironmentRecord, EventId, EventSpec, Observer,
};
use qmeasure::scenarios::{
    self, lhv_oracle, mermin_consistent_assignments, Check, ScenarioParams, ScenarioReport,
};
use qmeasure::C64;

const EPS_NUM: f64 = 1e-10;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(checks: &[(&str, bool)]) -> Outcome {
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    Outcome {
        pass: failed.is_empty(),
        detail: if failed.is_empty() {
            format!("{} checks", checks.len())
        } else {
            format!("failed: {}", failed.join("; "))
        },
    }
}

fn check<'a>(report: &'a ScenarioReport, prefix: &str) -> &'a Check {
    report
        .check(prefix)
        .unwrap_or_else(|| panic!("{}: no check starting with {prefix:?}", report.scenario))
}

fn passes(report: &ScenarioReport, prefix: &str) -> bool {
    report
        .checks
        .iter()
        .filter(|c| c.desc.starts_with(prefix))
        .all(|c| c.pass)
        && report.check(prefix).is_some()
}

fn singlet() -> StateVector {
    StateVector::from_slice(
        CompositeSpace::qubits(2),
        &[
            C64::new(0.0, 0.0),
            C64::new(FRAC_1_SQRT_2, 0.0),
            C64::new(-FRAC_1_SQRT_2, 0.0),
            C64::new(0.0, 0.0),
        ],
    )
    .unwrap()
}

fn bell(reports: &BTreeMap<&str, ScenarioReport>, elapsed: Duration) -> Outcome {
    let r = &reports["bell"];
    // P_same for axes at amplitude angles a, b on (|++⟩+|−−⟩)/√2 is cos²(a−b).
    let oracle = |a: f64, b: f64| (a - b).cos().powi(2);
    let pairs = [
        ("z,u", 0.0, FRAC_PI_3),
        ("z,v", 0.0, -FRAC_PI_3),
        ("u,v", FRAC_PI_3, -FRAC_PI_3),
    ];
    let mut checks: Vec<(String, bool)> = Vec::new();
    for (name, a, b) in pairs {
        let c = check(r, &format!("P_same({name}) analytic"));
        checks.push((
            format!("P_same({name}) = 0.25"),
            (c.empirical - 0.25).abs() <= EPS_NUM && (oracle(a, b) - 0.25).abs() <= EPS_NUM,
        ));
        checks.push((
            format!("P_same({name}) empirical"),
            check(r, &format!("P_same({name}) empirical")).pass,
        ));
    }
    let sum = check(r, "sum of P_same analytic");
    checks.push((
        "analytic sum 0.75".into(),
        (sum.empirical - 0.75).abs() <= EPS_NUM,
    ));
    checks.push((
        "empirical sum within 5 sigma".into(),
        check(r, "sum of P_same empirical").pass,
    ));
    checks.push(("lhv oracle returns 1".into(), lhv_oracle() == 1.0));
    checks.push((
        "quantum sum below lhv bound".into(),
        check(r, "quantum sum below").pass,
    ));
    checks.push((
        format!("runtime {:.2}s < 5s", elapsed.as_secs_f64()),
        elapsed < Duration::from_secs(5),
    ));
    let refs: Vec<(&str, bool)> = checks.iter().map(|(d, p)| (d.as_str(), *p)).collect();
    outcome(&refs)
}

fn mermin(reports: &BTreeMap<&str, ScenarioReport>, elapsed: Duration) -> Outcome {
    let r = &reports["mermin_square"];
    let commuting = r
        .checks
        .iter()
        .filter(|c| c.desc.ends_with("mutually commuting"))
        .count();
    outcome(&[
        (
            "six mutually commuting lines",
            commuting == 6 && passes(r, "row") && passes(r, "column"),
        ),
        (
            "column 3 product is -I",
            check(r, "column 3: product equals -I").pass,
        ),
        (
            "products within 1e-10",
            r.checks
                .iter()
                .filter(|c| c.desc.contains("product"))
                .all(|c| c.empirical <= 1e-10),
        ),
        (
            "no consistent assignment",
            mermin_consistent_assignments() == 0 && check(r, "consistent").pass,
        ),
        ("runtime < 1s", elapsed < Duration::from_secs(1)),
    ])
}

fn improper_mixture(reports: &BTreeMap<&str, ScenarioReport>) -> Outcome {
    let r = &reports["epr"];
    let rho = DensityMatrix::from_pure(&singlet()).unwrap();
    let (up, down) = (StateVector::up_z(), StateVector::down_z());
    let mixture =
        MixtureSpec::new(vec![(0.5, tensor(&up, &down)), (0.5, tensor(&down, &up))]).unwrap();
    let px = Observable::spin_x()
        .outcome(&Label::plus())
        .unwrap()
        .projector
        .clone();
    let (global, mixed) = joint_prediction_gap(&rho, &mixture, &kron(&px, &px)).unwrap();
    let reduced = rho.partial_trace(&[0]).unwrap();
    let half = identity(2) * C64::new(0.5, 0.0);
    outcome(&[
        (
            "singlet +x+x = 0",
            global.abs() <= EPS_NUM && check(r, "joint +x+x probability, singlet").pass,
        ),
        (
            "mixture +x+x = 0.25",
            (mixed - 0.25).abs() <= EPS_NUM && check(r, "joint +x+x probability, mixture").pass,
        ),
        (
            "reduced singlet = I/2 within 1e-12",
            max_abs_diff(reduced.matrix(), &half) <= 1e-12 && check(r, "reduced singlet").pass,
        ),
    ])
}

fn mixture_vs_superposition(reports: &BTreeMap<&str, ScenarioReport>) -> Outcome {
    let r = &reports["mixture_vs_superposition"];
    let set1 = check(r, "set 1 along Ox");
    outcome(&[
        (
            "set 1 along Ox: 10000/10000 '+'",
            set1.empirical == 1.0 && set1.desc.contains("N=10000"),
        ),
        (
            "set 2 along Ox within 5 sigma of 0.5",
            check(r, "set 2 along Ox").pass && check(r, "set 2 along Ox").analytic == 0.5,
        ),
        (
            "both sets along Oz",
            check(r, "set 1 along Oz").pass && check(r, "set 2 along Oz").pass,
        ),
    ])
}

fn hanging_up(reports: &BTreeMap<&str, ScenarioReport>) -> Outcome {
    let r = &reports["sequential"];
    let first = check(r, "first '+' frequency");
    outcome(&[
        (
            "first outcome within 5 sigma of |alpha|^2 at N=1e5",
            first.pass
                && first.desc.contains("N=100000")
                && (first.analytic - 0.36).abs() < EPS_NUM,
        ),
        (
            "z repetition 100%",
            check(r, "z repeated gives the same outcome").empirical == 1.0
                && check(r, "z repeated after '+'").empirical == 1.0,
        ),
        (
            "conditional x '+' within 5 sigma of 1/2",
            check(r, "x '+' frequency after z '+'").pass,
        ),
        (
            "conditional x '-' within 5 sigma of 1/2",
            check(r, "x '-' frequency after z '+'").pass,
        ),
        (
            "four branches",
            check(r, "branch count after z then x").pass && passes(r, "branch weight"),
        ),
    ])
}

/// Every query in a set of interleavings, checked against the asker's own
/// correlated outcome. Returns (trials, contradictions, state untouched).
fn consistency_sweep(trials: u64) -> (u64, u64, bool) {
    let z = Observable::spin_z();
    let (alice, bob) = (ObserverId::new("alice"), ObserverId::new("bob"));
    let ev = |id: &str, target: usize, o: &ObserverId| {
        EventSpec::new(id, target, z.clone())
            .with_environment(EnvironmentRecord::Orthogonal)
            .witnessed_by(o)
    };
    let psi = StateVector::qubit(C64::new(0.6, 0.0), C64::new(0.0, 0.8));
    // Bob measures, Alice measures the same system, Alice asks Bob.
    let measure_then_ask = BranchedState::new(psi.clone())
        .unwrap()
        .split(ev("b", 0, &bob))
        .unwrap()
        .split(ev("a", 0, &alice))
        .unwrap()
        .record_query(&alice, &bob, &EventId::new("b"))
        .unwrap();
    // Alice asks Bob first, then measures.
    let ask_then_measure = BranchedState::new(psi)
        .unwrap()
        .split(ev("b", 0, &bob))
        .unwrap()
        .record_query(&alice, &bob, &EventId::new("b"))
        .unwrap()
        .split(ev("a", 0, &alice))
        .unwrap();
    // Singlet: Alice and Bob measure their own particles, Alice asks.
    let epr = BranchedState::new(singlet())
        .unwrap()
        .split(ev("a", 0, &alice))
        .unwrap()
        .split(ev("b", 1, &bob))
        .unwrap()
        .record_query(&alice, &bob, &EventId::new("b"))
        .unwrap();
    let states = [&measure_then_ask, &ask_then_measure, &epr];
    let snapshots: Vec<String> = states.iter().map(|s| s.to_canonical_string()).collect();
    let (a, b) = (EventId::new("a"), EventId::new("b"));
    let mut contradictions = 0;
    for seed in 0..trials {
        let mut o = Observer::new("alice", seed);
        let own = hang_up(&mut o, &measure_then_ask, &a).unwrap();
        contradictions += u64::from(query(&mut o, &bob, &b, &measure_then_ask).unwrap() != own);

        let mut o = Observer::new("alice", seed);
        let answer = query(&mut o, &bob, &b, &ask_then_measure).unwrap();
        contradictions += u64::from(hang_up(&mut o, &ask_then_measure, &a).unwrap() != answer);

        let mut o = Observer::new("alice", seed);
        let own = hang_up(&mut o, &epr, &a).unwrap();
        contradictions += u64::from(query(&mut o, &bob, &b, &epr).unwrap() == own);
    }
    let untouched = states
        .iter()
        .zip(&snapshots)
        .all(|(s, snap)| s.to_canonical_string() == *snap);
    (3 * trials, contradictions, untouched)
}

fn consistency(reports: &BTreeMap<&str, ScenarioReport>, sweep: (u64, u64, bool)) -> Outcome {
    let wf = check(
        &reports["wigners_friend"],
        "query agreement: Wigner's own outcome",
    );
    let epr = check(&reports["epr"], "query agreement");
    let all_queries = reports
        .values()
        .flat_map(|r| &r.checks)
        .filter(|c| c.desc.starts_with("query agreement"))
        .all(|c| c.pass && c.empirical == 1.0);
    let sweep_detail = format!(
        "interleaving sweep: {} contradictions in {} queries",
        sweep.1, sweep.0
    );
    outcome(&[
        (
            "Wigner's friend agreement 10000/10000",
            wf.empirical == 1.0 && wf.desc.contains("N=10000"),
        ),
        (
            "EPR agreement 10000/10000",
            epr.empirical == 1.0 && epr.desc.contains("N=10000"),
        ),
        ("every query check across scenarios agrees", all_queries),
        (&sweep_detail, sweep.1 == 0 && sweep.0 >= 10_000),
    ])
}

fn no_reduction(reports: &BTreeMap<&str, ScenarioReport>, sweep: (u64, u64, bool)) -> Outcome {
    let snapshots: Vec<&Check> = reports
        .values()
        .flat_map(|r| &r.checks)
        .filter(|c| c.desc.starts_with("state unchanged"))
        .collect();
    let with_states = [
        "mixture_vs_superposition",
        "epr",
        "bell",
        "wigners_friend",
        "locality",
        "sequential",
    ];
    outcome(&[
        (
            "every scenario with hang-ups checks its state",
            with_states
                .iter()
                .all(|n| passes(&reports[n], "state unchanged")),
        ),
        (
            "all snapshot checks identical",
            snapshots.iter().all(|c| c.pass),
        ),
        ("interleaving sweep states identical", sweep.2),
    ])
}

fn decoherence(reports: &BTreeMap<&str, ScenarioReport>) -> Outcome {
    let r = &reports["decoherence"];
    let custom = scenarios::run(
        "decoherence",
        &ScenarioParams {
            tau: 0.5,
            times: Some(vec![0.0, 0.05, 0.3, 1.7, 10.0, 12.5, 40.0]),
            amplitudes: Some((C64::new(0.0, 0.6), C64::new(0.8, 0.0))),
            ..ScenarioParams::default()
        },
    )
    .unwrap();
    let off_diag = |rep: &ScenarioReport| {
        rep.checks
            .iter()
            .filter(|c| c.desc.contains("off-diagonal weight equals"))
            .all(|c| c.pass && c.tolerance <= 1e-10)
    };
    let limit = |rep: &ScenarioReport| {
        rep.checks
            .iter()
            .filter(|c| c.desc.contains("purity reaches the diagonal limit"))
            .all(|c| c.pass && c.tolerance <= 1e-6)
            && rep.check("t=").is_some()
    };
    outcome(&[
        (
            "off-diagonal weight = 2|Z||alpha||beta| within 1e-10",
            off_diag(r) && off_diag(&custom),
        ),
        (
            "purity limit within 1e-6 for t >= 20 tau",
            limit(r) && limit(&custom) && passes(&custom, "t=10: purity reaches"),
        ),
        (
            "finite d_E=2 recurrence |Z| > 0.5",
            check(r, "finite environment d_E=2: max |Z(t)|").pass,
        ),
        (
            "monotone decay",
            check(r, "off-diagonal weight non-increasing").pass
                && check(&custom, "off-diagonal weight non-increasing").pass,
        ),
    ])
}

fn refined(reports: &BTreeMap<&str, ScenarioReport>) -> Outcome {
    let r = &reports["sequential"];
    let freq = check(r, "refined first '+' frequency");
    outcome(&[
        (
            "analytic distributions within 1e-10",
            check(r, "refined vs plain analytic").pass,
        ),
        (
            "sampled frequencies within 5 sigma at N=1e5",
            check(r, "refined vs plain '+' frequency").pass
                && freq.pass
                && freq.desc.contains("N=100000"),
        ),
        (
            "pointer-diagonal after tracing environments",
            check(r, "environment traced out").pass,
        ),
    ])
}

fn rewriting(reports: &BTreeMap<&str, ScenarioReport>) -> Outcome {
    let bell = check(&reports["bell"], "basis invariance");
    let tilde = check(&reports["decoherence"], "equal amplitudes: rewriting");
    let direct =
        basis_ambiguity_check(C64::new(FRAC_1_SQRT_2, 0.0), C64::new(FRAC_1_SQRT_2, 0.0)).unwrap();
    let x = &direct.x_rewriting;
    outcome(&[
        (
            "Bell state in u and v bases within 1e-12",
            bell.pass && bell.empirical < 1e-12,
        ),
        (
            "superposed-apparatus rewriting within 1e-12",
            tilde.pass && tilde.empirical < 1e-12,
        ),
        (
            "x-basis relative states orthogonal",
            x.biorthogonal && x.overlap.norm() < 1e-12,
        ),
    ])
}

fn main() -> ExitCode {
    let start = Instant::now();
    let params = ScenarioParams::default();
    let mut reports = BTreeMap::new();
    let mut timings = BTreeMap::new();
    for name in scenarios::list() {
        let t = Instant::now();
        let report = scenarios::run(name, &params).unwrap();
        timings.insert(name, t.elapsed());
        reports.insert(name, report);
    }
    let sweep = consistency_sweep(10_000);

    let criteria: Vec<(&str, Outcome)> = vec![
        ("Bell sum", bell(&reports, timings["bell"])),
        ("Mermin square", mermin(&reports, timings["mermin_square"])),
        (
            "Improper-mixture discrimination",
            improper_mixture(&reports),
        ),
        (
            "Mixture vs superposition",
            mixture_vs_superposition(&reports),
        ),
        ("Hanging-up statistics", hanging_up(&reports)),
        ("Inter-observer consistency", consistency(&reports, sweep)),
        ("No-reduction invariant", no_reduction(&reports, sweep)),
        ("Decoherence", decoherence(&reports)),
        ("Refined vs plain hanging-up", refined(&reports)),
        ("Basis invariance and rewriting", rewriting(&reports)),
    ];
    let mut all = true;
    for (i, (name, o)) in criteria.iter().enumerate() {
        all &= o.pass;
        println!(
            "criterion {:>2} {:<34} {}  ({})",
            i + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    for (name, report) in &reports {
        if !report.pass {
            all = false;
            for c in report.checks.iter().filter(|c| !c.pass) {
                println!("  {name}: failed check {:?}", c.desc);
            }
        }
    }
    println!("total runtime {:.1}s", start.elapsed().as_secs_f64());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
