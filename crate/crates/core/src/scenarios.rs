//! Scripted thought experiments with seeded statistics.
//!
//! Every scenario returns a [`ScenarioReport`]: a list of checks, each an
//! analytic value computed through the density-matrix rules, an empirical or
//! exact value obtained through a second code path (usually observers
//! hanging up on a [`BranchedState`]), and a tolerance. Empirical
//! frequencies use `5·√(p(1−p)/N)`.
//!
//! Trials run in parallel. Each trial derives its own seed from the scenario
//! seed, a per-experiment salt and the trial index, so reports do not
//! depend on scheduling.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_3};

use nalgebra::QR;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::density::{joint_prediction_gap, DensityMatrix, MixtureSpec};
use crate::hilbert::{
    commutator, identity, kron, max_abs, max_abs_diff, outer, pauli, rotated_spin_basis, tensor,
    CompositeSpace, Label, Observable, ObserverId, Role, StateVector,
};
use crate::measurement::{
    basis_ambiguity_check, decohered_reduced_matrix, pointer_basis, EnvironmentModel,
};
use crate::observer::{
    hang_up, hang_up_distribution, query, refined_distribution, refined_hang_up, BranchedState,
    EnvironmentRecord, EventId, EventSpec, Observer, RefinedDistribution, RefinedOutcome,
};
use crate::{CMatrix, Error, Result, C64, EPS_NUM};

/// Default trial count for frequency estimates.
pub const FREQUENCY_TRIALS: usize = 100_000;
/// Default trial count for perfect-correlation checks.
pub const CORRELATION_TRIALS: usize = 10_000;

const SCENARIOS: [&str; 9] = [
    "mixture_vs_superposition",
    "interference",
    "epr",
    "bell",
    "mermin_square",
    "wigners_friend",
    "locality",
    "sequential",
    "decoherence",
];

/// Names accepted by [`run`].
pub fn list() -> Vec<&'static str> {
    SCENARIOS.to_vec()
}

/// Inputs shared by all scenarios. Unset fields fall back to per-scenario
/// defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioParams {
    pub seed: u64,
    /// Overrides both default trial counts.
    pub trials: Option<usize>,
    pub tau: f64,
    pub times: Option<Vec<f64>>,
    pub amplitudes: Option<(C64, C64)>,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: None,
            tau: 1.0,
            times: None,
            amplitudes: None,
        }
    }
}

impl ScenarioParams {
    fn validate(&self) -> Result<()> {
        if self.trials == Some(0) {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return Err(Error::InvalidParameter(format!("decay time {}", self.tau)));
        }
        if let Some(times) = &self.times {
            if times.is_empty() {
                return Err(Error::InvalidParameter("empty time grid".into()));
            }
            if let Some(t) = times.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
                return Err(Error::InvalidParameter(format!("time {t}")));
            }
        }
        if let Some((a, b)) = self.amplitudes {
            let total = a.norm_sqr() + b.norm_sqr();
            if !total.is_finite() || (total - 1.0).abs() > crate::EPS_NORM {
                return Err(Error::InvalidAmplitudes(total));
            }
        }
        Ok(())
    }

    fn frequency_trials(&self) -> usize {
        self.trials.unwrap_or(FREQUENCY_TRIALS)
    }

    fn correlation_trials(&self) -> usize {
        self.trials.unwrap_or(CORRELATION_TRIALS)
    }

    fn amplitudes_or(&self, alpha: f64, beta: f64) -> (C64, C64) {
        self.amplitudes
            .unwrap_or((C64::new(alpha, 0.0), C64::new(beta, 0.0)))
    }
}

/// Parameters as echoed in a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportParams {
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub times: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<[f64; 2]>,
}

impl ReportParams {
    fn new(params: &ScenarioParams) -> Self {
        Self {
            seed: params.seed,
            trials: params.trials,
            tau: None,
            times: None,
            alpha: None,
            beta: None,
        }
    }

    fn with_amplitudes(mut self, (a, b): (C64, C64)) -> Self {
        self.alpha = Some([round15(a.re), round15(a.im)]);
        self.beta = Some([round15(b.re), round15(b.im)]);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub desc: String,
    pub analytic: f64,
    pub empirical: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `|analytic − empirical| ≤ tolerance`.
    pub fn close(desc: impl Into<String>, analytic: f64, empirical: f64, tolerance: f64) -> Self {
        let pass = (analytic - empirical).abs() <= tolerance;
        Self::build(desc, analytic, empirical, tolerance, pass)
    }

    /// Frequency `hits / n` against probability `p` with tolerance
    /// `5·√(p(1−p)/n)`.
    pub fn frequency(desc: impl Into<String>, p: f64, hits: usize, n: usize) -> Self {
        let n = n.max(1);
        let tolerance = statistical_tolerance(p, n);
        Self::close(desc, p, hits as f64 / n as f64, tolerance)
    }

    /// Boolean check reported as `1` (expected) against `1`/`0`.
    pub fn holds(desc: impl Into<String>, ok: bool) -> Self {
        Self::build(desc, 1.0, if ok { 1.0 } else { 0.0 }, 0.0, ok)
    }

    /// Passes when `value > bound`.
    pub fn exceeds(desc: impl Into<String>, bound: f64, value: f64) -> Self {
        Self::build(desc, bound, value, 0.0, value > bound)
    }

    fn build(
        desc: impl Into<String>,
        analytic: f64,
        empirical: f64,
        tolerance: f64,
        pass: bool,
    ) -> Self {
        Self {
            desc: desc.into(),
            analytic: round15(analytic),
            empirical: round15(empirical),
            tolerance: round15(tolerance),
            pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub params: ReportParams,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl ScenarioReport {
    fn new(scenario: &str, params: ReportParams, checks: Vec<Check>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Self {
            scenario: scenario.to_string(),
            params,
            checks,
            pass,
        }
    }

    pub fn check(&self, desc_prefix: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.desc.starts_with(desc_prefix))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// One row per check under the header
    /// `scenario,desc,analytic,empirical,tolerance,pass`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidParameter(format!("csv: {e}"));
        w.write_record([
            "scenario",
            "desc",
            "analytic",
            "empirical",
            "tolerance",
            "pass",
        ])
        .map_err(io)?;
        for c in &self.checks {
            w.write_record([
                self.scenario.clone(),
                c.desc.clone(),
                format!("{:?}", c.analytic),
                format!("{:?}", c.empirical),
                format!("{:?}", c.tolerance),
                c.pass.to_string(),
            ])
            .map_err(io)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::InvalidParameter(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// `5·√(p(1−p)/n)`
pub fn statistical_tolerance(p: f64, n: usize) -> f64 {
    5.0 * (p * (1.0 - p) / n as f64).sqrt()
}

fn round15(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.14e}").parse().expect("formatted float parses")
}

/// Seed for one trial of one sub-experiment.
pub fn trial_seed(seed: u64, salt: u64, trial: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(salt);
    rng.set_word_pos(u128::from(trial) * 2);
    rng.next_u64()
}

fn run_trials<T, F>(n: usize, seed: u64, salt: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync,
{
    (0..n as u64)
        .into_par_iter()
        .map(|i| f(trial_seed(seed, salt, i)))
        .collect()
}

fn count(outcomes: &[bool]) -> usize {
    outcomes.iter().filter(|&&b| b).count()
}

fn id(s: &str) -> EventId {
    EventId::new(s)
}

fn measure(id: &str, target: usize, observable: Observable, witness: &ObserverId) -> EventSpec {
    EventSpec::new(id, target, observable).witnessed_by(witness)
}

fn plus_projector(observable: &Observable) -> CMatrix {
    observable
        .outcome(&Label::plus())
        .expect("spin observable has a '+' outcome")
        .projector
        .clone()
}

fn minus_projector(observable: &Observable) -> CMatrix {
    observable
        .outcome(&Label::minus())
        .expect("spin observable has a '-' outcome")
        .projector
        .clone()
}

fn singlet() -> StateVector {
    let s = FRAC_1_SQRT_2;
    StateVector::from_slice(
        CompositeSpace::qubits(2),
        &[
            C64::new(0.0, 0.0),
            C64::new(s, 0.0),
            C64::new(-s, 0.0),
            C64::new(0.0, 0.0),
        ],
    )
    .expect("singlet is normalized")
}

fn phi_plus() -> StateVector {
    let s = FRAC_1_SQRT_2;
    StateVector::from_slice(
        CompositeSpace::qubits(2),
        &[
            C64::new(s, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(s, 0.0),
        ],
    )
    .expect("phi+ is normalized")
}

fn unchanged(desc: &str, state: &BranchedState, snapshot: &str) -> Check {
    Check::holds(
        format!("state unchanged by hang-ups and queries: {desc}"),
        state.to_canonical_string() == snapshot,
    )
}

/// Set 1 is the superposition `(|+⟩_z + |−⟩_z)/√2`; set 2 a 50/50 proper
/// mixture of `|+⟩_z` and `|−⟩_z`. Along Ox set 1 always gives `+`, set 2
/// gives `+` half the time; along Oz both give `+` half the time.
pub fn scenario_mixture_vs_superposition(params: &ScenarioParams) -> Result<ScenarioReport> {
    params.validate()?;
    let n_corr = params.correlation_trials();
    let n_freq = params.frequency_trials();
    let o = ObserverId::new("o");
    let superposition = StateVector::real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
    let mixture = MixtureSpec::new(vec![
        (0.5, StateVector::up_z()),
        (0.5, StateVector::down_z()),
    ])?;
    let rho1 = DensityMatrix::from_pure(&superposition)?;
    let rho2 = DensityMatrix::from_mixture(&mixture);
    let (x, z) = (Observable::spin_x(), Observable::spin_z());

    let measured = |s: &StateVector, axis: &Observable, name: &str| -> Result<BranchedState> {
        BranchedState::new(s.clone())?.split(measure(name, 0, axis.clone(), &o))
    };
    let set1_x = measured(&superposition, &x, "x")?;
    let set1_z = measured(&superposition, &z, "z")?;
    let set2_x = [
        measured(&StateVector::up_z(), &x, "x")?,
        measured(&StateVector::down_z(), &x, "x")?,
    ];
    let set2_z = [
        measured(&StateVector::up_z(), &z, "z")?,
        measured(&StateVector::down_z(), &z, "z")?,
    ];
    let snapshots: Vec<String> = [
        &set1_x, &set1_z, &set2_x[0], &set2_x[1], &set2_z[0], &set2_z[1],
    ]
    .iter()
    .map(|s| s.to_canonical_string())
    .collect();

    let single = |state: &BranchedState, event: &str, n: usize, salt: u64| -> Result<usize> {
        let hits = run_trials(n, params.seed, salt, |seed| {
            let mut obs = Observer::new("o", seed);
            Ok(hang_up(&mut obs, state, &id(event))? == Label::plus())
        })?;
        Ok(count(&hits))
    };
    // A proper mixture: each trial's system is prepared in one definite
    // component, chosen with the mixture weights.
    let mixed = |states: &[BranchedState; 2], event: &str, n: usize, salt: u64| -> Result<usize> {
        let hits = run_trials(n, params.seed, salt, |seed| {
            let mut prep = ChaCha8Rng::seed_from_u64(seed);
            let component = usize::from(prep.random::<f64>() >= 0.5);
            let mut obs = Observer::new("o", prep.next_u64());
            Ok(hang_up(&mut obs, &states[component], &id(event))? == Label::plus())
        })?;
        Ok(count(&hits))
    };

    let px = plus_projector(&x);
    let pz = plus_projector(&z);
    let mut checks = vec![
        Check::frequency(
            format!("set 1 along Ox: '+' frequency (N={n_corr})"),
            rho1.outcome_probability(&px)?,
            single(&set1_x, "x", n_corr, 1)?,
            n_corr,
        ),
        Check::frequency(
            format!("set 2 along Ox: '+' frequency (N={n_freq})"),
            rho2.outcome_probability(&px)?,
            mixed(&set2_x, "x", n_freq, 2)?,
            n_freq,
        ),
        Check::frequency(
            format!("set 1 along Oz: '+' frequency (N={n_freq})"),
            rho1.outcome_probability(&pz)?,
            single(&set1_z, "z", n_freq, 3)?,
            n_freq,
        ),
        Check::frequency(
            format!("set 2 along Oz: '+' frequency (N={n_freq})"),
            rho2.outcome_probability(&pz)?,
            mixed(&set2_z, "z", n_freq, 4)?,
            n_freq,
        ),
        Check::close(
            "set 1 and set 2 agree along Oz (analytic)",
            rho1.outcome_probability(&pz)?,
            rho2.outcome_probability(&pz)?,
            EPS_NUM,
        ),
    ];
    checks.push(Check::holds(
        "state unchanged by hang-ups and queries: sets",
        [
            &set1_x, &set1_z, &set2_x[0], &set2_x[1], &set2_z[0], &set2_z[1],
        ]
        .iter()
        .zip(&snapshots)
        .all(|(s, snap)| s.to_canonical_string() == *snap),
    ));
    Ok(ScenarioReport::new(
        "mixture_vs_superposition",
        ReportParams::new(params),
        checks,
    ))
}

/// Outcome probabilities with and without interference for amplitudes `μ`
/// in basis `{aⱼ}`, measured in basis `{bᵢ}` with `νᵢⱼ = ⟨bᵢ|aⱼ⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferenceRow {
    /// `|Σⱼ μⱼ νᵢⱼ|²`
    pub coherent: f64,
    /// `Σⱼ |μⱼ|² |νᵢⱼ|²`
    pub incoherent: f64,
    pub difference: f64,
}

pub fn interference_table(mu: &[C64], nu: &CMatrix) -> Result<Vec<InterferenceRow>> {
    if nu.nrows() != mu.len() || !nu.is_square() {
        return Err(Error::DimensionMismatch {
            expected: mu.len(),
            found: nu.nrows(),
        });
    }
    let norm: f64 = mu.iter().map(|m| m.norm_sqr()).sum();
    if (norm - 1.0).abs() > crate::EPS_NORM {
        return Err(Error::NotNormalized { norm: norm.sqrt() });
    }
    crate::hilbert::require_unitary(nu)?;
    Ok((0..nu.nrows())
        .map(|i| {
            let amp: C64 = mu.iter().enumerate().map(|(j, m)| m * nu[(i, j)]).sum();
            let coherent = amp.norm_sqr();
            let incoherent = mu
                .iter()
                .enumerate()
                .map(|(j, m)| m.norm_sqr() * nu[(i, j)].norm_sqr())
                .sum::<f64>();
            InterferenceRow {
                coherent,
                incoherent,
                difference: coherent - incoherent,
            }
        })
        .collect())
}

fn cross_terms(mu: &[C64], nu: &CMatrix, i: usize) -> f64 {
    let mut total = C64::new(0.0, 0.0);
    for j in 0..mu.len() {
        for k in 0..mu.len() {
            if j != k {
                total += (mu[j] * nu[(i, j)]).conj() * mu[k] * nu[(i, k)];
            }
        }
    }
    total.re
}

fn random_unitary(dim: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    QR::new(g).q()
}

/// Interference terms for three cases: a single basis state, an equal
/// superposition (or the given amplitudes) measured in the x basis, and a
/// random three-level state in a random basis.
pub fn scenario_interference(params: &ScenarioParams) -> Result<ScenarioReport> {
    params.validate()?;
    let x_basis = CMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(FRAC_1_SQRT_2, 0.0),
            C64::new(FRAC_1_SQRT_2, 0.0),
            C64::new(FRAC_1_SQRT_2, 0.0),
            C64::new(-FRAC_1_SQRT_2, 0.0),
        ],
    );
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let raw: Vec<C64> = (0..3)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let random_mu: Vec<C64> = raw.iter().map(|z| z / norm).collect();
    let random_nu = random_unitary(3, &mut rng);
    let (a, b) = params.amplitudes_or(FRAC_1_SQRT_2, FRAC_1_SQRT_2);

    let mut checks = Vec::new();
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    for (i, row) in interference_table(&[one, zero], &x_basis)?
        .iter()
        .enumerate()
    {
        checks.push(Check::close(
            format!("single term, outcome {i}: interference difference"),
            0.0,
            row.difference,
            EPS_NUM,
        ));
    }
    // Two-level oracle: |α ± β|²/2 − 1/2 = ±Re(α*β).
    let two_level = (a.conj() * b).re;
    for (i, row) in interference_table(&[a, b], &x_basis)?.iter().enumerate() {
        let sign = if i == 0 { 1.0 } else { -1.0 };
        checks.push(Check::close(
            format!("x basis, outcome {i}: interference difference"),
            sign * two_level,
            row.difference,
            EPS_NUM,
        ));
    }
    let table = interference_table(&random_mu, &random_nu)?;
    let state = StateVector::from_slice(CompositeSpace::single(3), &random_mu)?;
    let rho = DensityMatrix::from_pure(&state)?;
    for (i, row) in table.iter().enumerate() {
        checks.push(Check::close(
            format!("random 3-level, outcome {i}: difference equals cross-term sum"),
            cross_terms(&random_mu, &random_nu, i),
            row.difference,
            EPS_NUM,
        ));
        let b_i: Vec<C64> = (0..3).map(|j| random_nu[(i, j)].conj()).collect();
        let b_i = crate::CVector::from_vec(b_i);
        checks.push(Check::close(
            format!("random 3-level, outcome {i}: coherent probability matches Tr[rho P]"),
            rho.outcome_probability(&outer(&b_i, &b_i))?,
            row.coherent,
            EPS_NUM,
        ));
    }
    let coherent: f64 = table.iter().map(|r| r.coherent).sum();
    let incoherent: f64 = table.iter().map(|r| r.incoherent).sum();
    checks.push(Check::close(
        "random 3-level: coherent probabilities sum to 1",
        1.0,
        coherent,
        EPS_NUM,
    ));
    checks.push(Check::close(
        "random 3-level: incoherent probabilities sum to 1",
        1.0,
        incoherent,
        EPS_NUM,
    ));
    Ok(ScenarioReport::new(
        "interference",
        ReportParams::new(params).with_amplitudes((a, b)),
        checks,
    ))
}

fn axis(name: &str) -> Observable {
    match name {
        "z" => Observable::spin_z(),
        "x" => Observable::spin_x(),
        "u" => Observable::spin_along(FRAC_PI_3),
        "v" => Observable::spin_along(-FRAC_PI_3),
        _ => unreachable!("known axis"),
    }
}

/// Probability that both particles give the same outcome (`same = true`) or
/// opposite outcomes, measuring `a` on particle 1 and `b` on particle 2.
fn pair_probability(
    rho: &DensityMatrix,
    a: &Observable,
    b: &Observable,
    same: bool,
) -> Result<f64> {
    let (ap, am) = (plus_projector(a), minus_projector(a));
    let (bp, bm) = (plus_projector(b), minus_projector(b));
    let p = if same {
        kron(&ap, &bp) + kron(&am, &bm)
    } else {
        kron(&ap, &bm) + kron(&am, &bp)
    };
    rho.outcome_probability(&p)
}

/// Builds `state` measured along `a` on particle 1 (witness `alice`) and
/// along `b` on particle 2 (witness `bob`), as events `"A"` and `"B"`.
fn two_particle_state(
    state: &StateVector,
    a: &Observable,
    b: &Observable,
    alice: &ObserverId,
    bob: &ObserverId,
) -> Result<BranchedState> {
    BranchedState::new(state.clone())?
        .split(measure("A", 0, a.clone(), alice).with_environment(EnvironmentRecord::Orthogonal))?
        .split(measure("B", 1, b.clone(), bob).with_environment(EnvironmentRecord::Orthogonal))
}

/// Fraction of trials in which one observer hanging up on both events sees
/// equal (`same`) or opposite outcomes.
fn pair_hits(state: &BranchedState, n: usize, seed: u64, salt: u64, same: bool) -> Result<usize> {
    let hits = run_trials(n, seed, salt, |s| {
        let mut obs = Observer::new("o", s);
        let a = hang_up(&mut obs, state, &id("A"))?;
        let b = hang_up(&mut obs, state, &id("B"))?;
        Ok((a == b) == same)
    })?;
    Ok(count(&hits))
}

/// Singlet correlations: perfect anti-correlation along any common axis, the
/// joint prediction that separates the singlet from the 50/50 mixture of
/// `|+⟩|−⟩` and `|−⟩|+⟩`, and Alice's query of Bob.
pub fn scenario_epr(params: &ScenarioParams) -> Result<ScenarioReport> {
    params.validate()?;
    let n = params.correlation_trials();
    let (alice, bob) = (ObserverId::new("alice"), ObserverId::new("bob"));
    let psi = singlet();
    let rho = DensityMatrix::from_pure(&psi)?;
    let mut checks = Vec::new();

    for (k, name) in ["z", "x", "u", "v"].into_iter().enumerate() {
        let a = axis(name);
        let state = two_particle_state(&psi, &a, &a, &alice, &bob)?;
        let snap = state.to_canonical_string();
        checks.push(Check::frequency(
            format!("{name}-axis: opposite outcomes (N={n})"),
            pair_probability(&rho, &a, &a, false)?,
            pair_hits(&state, n, params.seed, 10 + k as u64, false)?,
            n,
        ));
        checks.push(unchanged(&format!("{name}-axis"), &state, &snap));
    }

    let (up, down) = (StateVector::up_z(), StateVector::down_z());
    let mixture = MixtureSpec::new(vec![(0.5, tensor(&up, &down)), (0.5, tensor(&down, &up))])?;
    let px = plus_projector(&Observable::spin_x());
    let (global, mixed) = joint_prediction_gap(&rho, &mixture, &kron(&px, &px))?;
    checks.push(Check::close(
        "joint +x+x probability, singlet",
        0.0,
        global,
        EPS_NUM,
    ));
    checks.push(Check::close(
        "joint +x+x probability, mixture",
        0.25,
        mixed,
        EPS_NUM,
    ));
    let reduced = rho.partial_trace(&[1])?;
    let half = identity(2) * C64::new(0.5, 0.0);
    checks.push(Check::close(
        "reduced singlet equals I/2 (max entry deviation)",
        0.0,
        max_abs_diff(reduced.matrix(), &half),
        1e-12,
    ));

    let z = axis("z");
    let state =
        two_particle_state(&psi, &z, &z, &alice, &bob)?.record_query(&alice, &bob, &id("B"))?;
    let snap = state.to_canonical_string();
    let agree = run_trials(n, params.seed, 20, |s| {
        let mut obs = Observer::new("alice", s);
        let own = hang_up(&mut obs, &state, &id("A"))?;
        let answer = query(&mut obs, &bob, &id("B"), &state)?;
        Ok(own != answer)
    })?;
    checks.push(Check::frequency(
        format!(
            "query agreement: Alice's query of Bob anti-correlated with her own outcome (N={n})"
        ),
        1.0,
        count(&agree),
        n,
    ));
    checks.push(unchanged("query", &state, &snap));
    Ok(ScenarioReport::new(
        "epr",
        ReportParams::new(params),
        checks,
    ))
}

/// Values `(v(A), v(B), v(C))` shared by both systems of a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LhvAssignment {
    pub values: [u8; 3],
}

impl LhvAssignment {
    /// All eight assignments.
    pub fn all() -> Vec<Self> {
        (0..8u8)
            .map(|m| Self {
                values: [(m >> 2) & 1, (m >> 1) & 1, m & 1],
            })
            .collect()
    }

    /// Number of pairs among (A,B), (A,C), (B,C) on which both systems give
    /// the same result.
    pub fn same_count(&self) -> u32 {
        let [a, b, c] = self.values;
        u32::from(a == b) + u32::from(a == c) + u32::from(b == c)
    }
}

/// Lower bound on `P_same(A,B) + P_same(A,C) + P_same(B,C)` over every
/// distribution of shared value assignments.
pub fn lhv_oracle() -> f64 {
    LhvAssignment::all()
        .iter()
        .map(LhvAssignment::same_count)
        .min()
        .expect("eight assignments") as f64
}

/// Bell's inequality with `(|+⟩|+⟩ + |−⟩|−⟩)/√2` and axes z, u = π/3,
/// v = −π/3.
pub fn scenario_bell(params: &ScenarioParams) -> Result<ScenarioReport> {
    params.validate()?;
    let n = params.frequency_trials();
    let (alice, bob) = (ObserverId::new("alice"), ObserverId::new("bob"));
    let psi = phi_plus();
    let rho = DensityMatrix::from_pure(&psi)?;
    let mut checks = Vec::new();

    let mut deviation: f64 = 0.0;
    for angle in [FRAC_PI_3, -FRAC_PI_3] {
        let (p, m) = rotated_spin_basis(angle);
        let rebuilt = StateVector::combine(&[
            (C64::new(FRAC_1_SQRT_2, 0.0), &tensor(&p, &p)),
            (C64::new(FRAC_1_SQRT_2, 0.0), &tensor(&m, &m)),
        ])?;
        deviation = deviation.max(rebuilt.max_deviation(&psi)?);
    }
    checks.push(Check::close(
        "basis invariance in u and v bases (max amplitude deviation)",
        0.0,
        deviation,
        1e-12,
    ));

    let pairs = [("z", "u"), ("z", "v"), ("u", "v")];
    let mut analytic_sum = 0.0;
    let mut empirical_sum = 0.0;
    let mut variance = 0.0;
    for (k, (a, b)) in pairs.into_iter().enumerate() {
        let (oa, ob) = (axis(a), axis(b));
        let p = pair_probability(&rho, &oa, &ob, true)?;
        checks.push(Check::close(
            format!("P_same({a},{b}) analytic"),
            0.25,
            p,
            EPS_NUM,
        ));
        let state = two_particle_state(&psi, &oa, &ob, &alice, &bob)?;
        let snap = state.to_canonical_string();
        let hits = pair_hits(&state, n, params.seed, 30 + k as u64, true)?;
        checks.push(Check::frequency(
            format!("P_same({a},{b}) empirical (N={n})"),
            p,
            hits,
            n,
        ));
        checks.push(unchanged(&format!("pair ({a},{b})"), &state, &snap));
        analytic_sum += p;
        empirical_sum += hits as f64 / n as f64;
        variance += p * (1.0 - p) / n as f64;
    }
    checks.push(Check::close(
        "sum of P_same analytic",
        0.75,
        analytic_sum,
        EPS_NUM,
    ));
    checks.push(Check::close(
        "sum of P_same empirical",
        analytic_sum,
        empirical_sum,
        5.0 * variance.sqrt(),
    ));
    let bound = lhv_oracle();
    checks.push(Check::close(
        "local hidden variable lower bound",
        1.0,
        bound,
        0.0,
    ));
    checks.push(Check::holds(
        "quantum sum below the hidden-variable bound",
        analytic_sum < bound,
    ));
    Ok(ScenarioReport::new(
        "bell",
        ReportParams::new(params),
        checks,
    ))
}

/// The nine two-qubit observables of the magic square, by row.
pub fn mermin_square() -> [[CMatrix; 3]; 3] {
    let (x, y, z, i) = (pauli::x(), pauli::y(), pauli::z(), pauli::id());
    [
        [kron(&x, &i), kron(&i, &x), kron(&x, &x)],
        [kron(&i, &y), kron(&y, &i), kron(&y, &y)],
        [kron(&x, &y), kron(&y, &x), kron(&z, &z)],
    ]
}

/// Number of ±1 assignments to the nine cells that reproduce every row
/// product (+1) and column product (+1, +1, −1).
pub fn mermin_consistent_assignments() -> usize {
    (0u32..512)
        .filter(|mask| {
            let v = |r: usize, c: usize| {
                if mask >> (3 * r + c) & 1 == 1 {
                    -1i32
                } else {
                    1
                }
            };
            let rows = (0..3).all(|r| v(r, 0) * v(r, 1) * v(r, 2) == 1);
            let cols = (0..3).all(|c| {
                let want = if c == 2 { -1 } else { 1 };
                v(0, c) * v(1, c) * v(2, c) == want
            });
            rows && cols
        })
        .count()
}

pub fn scenario_mermin_square(params: &ScenarioParams) -> Result<ScenarioReport> {
    params.validate()?;
    let square = mermin_square();
    let id4 = identity(4);
    let mut checks = Vec::new();
    let lines: Vec<(String, [&CMatrix; 3], f64)> = (0..3)
        .map(|r| {
            (
                format!("row {}", r + 1),
                [&square[r][0], &square[r][1], &square[r][2]],
                1.0,
            )
        })
        .chain((0..3).map(|c| {
            (
                format!("column {}", c + 1),
                [&square[0][c], &square[1][c], &square[2][c]],
                if c == 2 { -1.0 } else { 1.0 },
            )
        }))
        .collect();
    let mut squares: f64 = 0.0;
    for row in &square {
        for m in row {
            squares = squares.max(max_abs_diff(&(m * m), &id4));
        }
    }
    checks.push(Check::close(
        "every observable squares to I",
        0.0,
        squares,
        EPS_NUM,
    ));
    for (name, ops, sign) in &lines {
        let mut worst: f64 = 0.0;
        for a in 0..3 {
            for b in a + 1..3 {
                worst = worst.max(max_abs(&commutator(ops[a], ops[b])));
            }
        }
        checks.push(Check::close(
            format!("{name}: mutually commuting"),
            0.0,
            worst,
            EPS_NUM,
        ));
        let product = ops[0] * ops[1] * ops[2];
        let target = &id4 * C64::new(*sign, 0.0);
        checks.push(Check::close(
            format!(
                "{name}: product equals {}I",
                if *sign > 0.0 { "+" } else { "-" }
            ),
            0.0,
            max_abs_diff(&product, &target),
            EPS_NUM,
        ));
    }
    // Parity oracle: the row constraints multiply to +1, the column
    // constraints to −1, and both products cover every cell once.
    checks.push(Check::close(
        "consistent +/-1 assignments among 512",
        0.0,
        mermin_consistent_assignments() as f64,
        0.0,
    ));
    Ok(ScenarioReport::new(
        "mermin_square",
        ReportParams::new(params),
        checks,
    ))
}

/// Friend measures the spin; Wigner later measures the system himself and
/// then asks the friend. Also the reverse order, where Wigner asks first.
pub fn scenario_wigners_friend(params: &ScenarioParams) -> Result<ScenarioReport> {
    params.validate()?;
    let n_corr = params.correlation_trials();
    let n_freq = params.frequency_trials();
    let (alpha, beta) = params.amplitudes_or(FRAC_1_SQRT_2, FRAC_1_SQRT_2);
    let (friend, wigner) = (ObserverId::new("friend"), ObserverId::new("wigner"));
    let z = Observable::spin_z();
    let mut checks = Vec::new();

    let friend_event = |s: StateVector| -> Result<BranchedState> {
        BranchedState::new(s)?.split(
            measure("friend", 0, z.clone(), &friend)
                .with_environment(EnvironmentRecord::Orthogonal),
        )
    };
    let measure_then_ask = |s: StateVector| -> Result<BranchedState> {
        friend_event(s)?
            .split(measure("wigner", 0, z.clone(), &wigner))?
            .record_query(&wigner, &friend, &id("friend"))
    };

    let psi = StateVector::qubit(alpha, beta);
    let p_plus = DensityMatrix::from_pure(&psi)?.outcome_probability(&plus_projector(&z))?;
    let state = measure_then_ask(psi)?;
    let snap = state.to_canonical_string();
    let trials = run_trials(n_corr, params.seed, 40, |s| {
        let mut sub = ChaCha8Rng::seed_from_u64(s);
        let mut f = Observer::new("friend", sub.next_u64());
        let mut w = Observer::new("wigner", sub.next_u64());
        let friend_saw = hang_up(&mut f, &state, &id("friend"))?;
        let own = hang_up(&mut w, &state, &id("wigner"))?;
        let answer = query(&mut w, &friend, &id("friend"), &state)?;
        Ok((friend_saw == Label::plus(), own == answer))
    })?;
    checks.push(Check::frequency(
        format!("friend's '+' frequency (N={n_corr})"),
        p_plus,
        trials.iter().filter(|t| t.0).count(),
        n_corr,
    ));
    checks.push(Check::frequency(
        format!("query agreement: Wigner's own outcome vs friend's answer (N={n_corr})"),
        1.0,
        trials.iter().filter(|t| t.1).count(),
        n_corr,
    ));
    checks.push(unchanged("measure then ask", &state, &snap));

    let eigen = measure_then_ask(StateVector::up_z())?;
    let det = run_trials(n_corr, params.seed, 41, |s| {
        let mut sub = ChaCha8Rng::seed_from_u64(s);
        let mut f = Observer::new("friend", sub.next_u64());
        let mut w = Observer::new("wigner", sub.next_u64());
        let friend_saw = hang_up(&mut f, &eigen, &id("friend"))?;
        let own = hang_up(&mut w, &eigen, &id("wigner"))?;
        Ok(friend_saw == Label::plus() && own == Label::plus())
    })?;
    checks.push(Check::frequency(
        format!("eigenstate: both see '+' (N={n_corr})"),
        1.0,
        count(&det),
        n_corr,
    ));

    // Wigner asks before measuring the system himself.
    let first = friend_event(StateVector::real(&[0.6, 0.8]))?
        .record_query(&wigner, &friend, &id("friend"))?
        .split(measure("wigner", 0, z.clone(), &wigner))?;
    let snap = first.to_canonical_string();
    let p_first = DensityMatrix::from_pure(&StateVector::real(&[0.6, 0.8]))?
        .outcome_probability(&plus_projector(&z))?;
    let asked = run_trials(n_freq, params.seed, 42, |s| {
        let mut w = Observer::new("wigner", s);
        let answer = query(&mut w, &friend, &id("friend"), &first)?;
        let own = hang_up(&mut w, &first, &id("wigner"))?;
        Ok((answer == Label::plus(), answer == own))
    })?;
    checks.push(Check::frequency(
        format!("ask first: friend's reported '+' frequency (N={n_freq})"),
        p_first,
        asked.iter().filter(|t| t.0).count(),
        n_freq,
    ));
    checks.push(Check::frequency(
        format!("query agreement: answer vs Wigner's later outcome (N={n_freq})"),
        1.0,
        asked.iter().filter(|t| t.1).count(),
        n_freq,
    ));
    checks.push(unchanged("ask first", &first, &snap));
    Ok(ScenarioReport::new(
        "wigners_friend",
        ReportParams::new(params).with_amplitudes((alpha, beta)),
        checks,
    ))
}

/// No signaling: Bob's own marginal does not depend on the axis Alice
/// chooses; and Alice's later query of Bob agrees with her outcome.
pub fn scenario_locality(params: &ScenarioParams) -> Result<ScenarioReport> {
    params.validate()?;
    let n = params.frequency_trials();
    let n_corr = params.correlation_trials();
    let (alice, bob) = (ObserverId::new("alice"), ObserverId::new("bob"));
    let psi = singlet();
    let z = axis("z");
    let mut checks = Vec::new();

    let mut marginals = Vec::new();
    for (k, alice_axis) in ["z", "x"].into_iter().enumerate() {
        let a = axis(alice_axis);
        let after_alice = BranchedState::new(psi.clone())?.split(
            measure("A", 0, a.clone(), &alice).with_environment(EnvironmentRecord::Orthogonal),
        )?;
        // Bob's particle is factor 1 in every later space.
        let rho_bob =
            DensityMatrix::from_pure(&after_alice.global_vector())?.partial_trace(&[1])?;
        let p = rho_bob.outcome_probability(&plus_projector(&z))?;
        let state = after_alice.split(
            measure("B", 1, z.clone(), &bob).with_environment(EnvironmentRecord::Orthogonal),
        )?;
        let snap = state.to_canonical_string();
        let hits = run_trials(n, params.seed, 50 + k as u64, |s| {
            let mut b = Observer::new("bob", s);
            Ok(hang_up(&mut b, &state, &id("B"))? == Label::plus())
        })?;
        checks.push(Check::frequency(
            format!("Bob's '+' frequency with Alice along {alice_axis} (N={n})"),
            p,
            count(&hits),
            n,
        ));
        checks.push(unchanged(
            &format!("Alice along {alice_axis}"),
            &state,
            &snap,
        ));
        marginals.push((p, count(&hits) as f64 / n as f64));
    }
    let (pz, fz) = marginals[0];
    let (px, fx) = marginals[1];
    checks.push(Check::close(
        "Bob's marginal independent of Alice's axis (analytic)",
        pz,
        px,
        EPS_NUM,
    ));
    checks.push(Check::close(
        "Bob's marginal independent of Alice's axis (empirical difference)",
        0.0,
        fz - fx,
        5.0 * (pz * (1.0 - pz) / n as f64 + px * (1.0 - px) / n as f64).sqrt(),
    ));

    let state =
        two_particle_state(&psi, &z, &z, &alice, &bob)?.record_query(&alice, &bob, &id("B"))?;
    let snap = state.to_canonical_string();
    let query_seq = state
        .event(&crate::observer::query_event_id(&alice, &bob, &id("B")))
        .map(|e| e.seq());
    let alice_seq = state.event(&id("A")).map(|e| e.seq());
    checks.push(Check::holds(
        "query of Bob is logged after Alice's own measurement",
        matches!((alice_seq, query_seq), (Some(a), Some(q)) if q > a),
    ));
    let runs = run_trials(n_corr, params.seed, 52, |s| {
        let mut a = Observer::new("alice", s);
        let own = hang_up(&mut a, &state, &id("A"))?;
        let answer = query(&mut a, &bob, &id("B"), &state)?;
        Ok((own == Label::plus(), own != answer))
    })?;
    let ups = runs.iter().filter(|r| r.0).count();
    let pa = DensityMatrix::from_pure(&psi)?
        .partial_trace(&[0])?
        .outcome_probability(&plus_projector(&z))?;
    checks.push(Check::frequency(
        format!("Alice's '+' frequency (N={n_corr})"),
        pa,
        ups,
        n_corr,
    ));
    checks.push(Check::frequency(
        format!("query agreement: after Alice's '+', Bob answers '-' (N={ups})"),
        1.0,
        runs.iter().filter(|r| r.0 && r.1).count(),
        ups,
    ));
    checks.push(Check::frequency(
        format!("query agreement: Bob's answer opposite to Alice's outcome (N={n_corr})"),
        1.0,
        runs.iter().filter(|r| r.1).count(),
        n_corr,
    ));
    checks.push(unchanged("query", &state, &snap));
    Ok(ScenarioReport::new(
        "locality",
        ReportParams::new(params),
        checks,
    ))
}

/// An observer measures spin z, then spin x, on `α|+⟩ + β|−⟩`; a separate
/// history repeats the z measurement. Also compares the plain and
/// density-matrix forms of hanging up with the environment traced out.
pub fn scenario_sequential(params: &ScenarioParams) -> Result<ScenarioReport> {
    params.validate()?;
    let n = params.frequency_trials();
    let n_corr = params.correlation_trials();
    let (alpha, beta) = params.amplitudes_or(0.6, 0.8);
    let o = ObserverId::new("o");
    let psi = StateVector::qubit(alpha, beta);
    let (z, x) = (Observable::spin_z(), Observable::spin_x());
    let mut checks = Vec::new();

    let event = |name: &str, obs: &Observable| {
        measure(name, 0, obs.clone(), &o).with_environment(EnvironmentRecord::Orthogonal)
    };
    let zx = BranchedState::new(psi.clone())?
        .split(event("z", &z))?
        .split(event("x", &x))?;
    let zz = BranchedState::new(psi.clone())?
        .split(event("z", &z))?
        .split(event("z2", &z))?;
    let snaps = (zx.to_canonical_string(), zz.to_canonical_string());

    let rho = DensityMatrix::from_pure(&psi)?;
    let p_plus = rho.outcome_probability(&plus_projector(&z))?;
    checks.push(Check::close(
        "branch count after z then x",
        4.0,
        zx.branch_count() as f64,
        0.0,
    ));
    // Joint weights of the two brain records, from the global vector.
    let rho_zx = DensityMatrix::from_pure(&zx.global_vector())?;
    let brain = |seq: usize| {
        zx.space()
            .find(&Role::Brain(o.clone()), seq)
            .expect("brain factor present")
    };
    let brains = rho_zx.partial_trace(&[brain(0), brain(1)])?;
    let e = |k: usize| {
        let mut v = crate::CVector::zeros(2);
        v[k] = C64::new(1.0, 0.0);
        outer(&v, &v)
    };
    for (k1, l1) in ["+", "-"].into_iter().enumerate() {
        for (k2, l2) in ["+", "-"].into_iter().enumerate() {
            let first = if k1 == 0 {
                alpha.norm_sqr()
            } else {
                beta.norm_sqr()
            };
            checks.push(Check::close(
                format!("branch weight z={l1}, x={l2}"),
                first / 2.0,
                brains.outcome_probability(&kron(&e(k1), &e(k2)))?,
                EPS_NUM,
            ));
        }
    }

    let runs = run_trials(n, params.seed, 60, |s| {
        let mut obs = Observer::new("o", s);
        let first = hang_up(&mut obs, &zx, &id("z"))?;
        let second = hang_up(&mut obs, &zx, &id("x"))?;
        Ok((first == Label::plus(), second == Label::plus()))
    })?;
    let ups = runs.iter().filter(|r| r.0).count();
    checks.push(Check::frequency(
        format!("first '+' frequency (N={n})"),
        p_plus,
        ups,
        n,
    ));
    let x_given_up = runs.iter().filter(|r| r.0 && r.1).count();
    let px =
        DensityMatrix::from_pure(&StateVector::up_z())?.outcome_probability(&plus_projector(&x))?;
    checks.push(Check::frequency(
        format!("x '+' frequency after z '+' (N={ups})"),
        px,
        x_given_up,
        ups,
    ));
    checks.push(Check::frequency(
        format!("x '-' frequency after z '+' (N={ups})"),
        1.0 - px,
        ups - x_given_up,
        ups,
    ));

    let repeat = run_trials(n_corr, params.seed, 61, |s| {
        let mut obs = Observer::new("o", s);
        let first = hang_up(&mut obs, &zz, &id("z"))?;
        let second = hang_up(&mut obs, &zz, &id("z2"))?;
        Ok((first == Label::plus(), first == second))
    })?;
    let repeat_ups = repeat.iter().filter(|r| r.0).count();
    checks.push(Check::frequency(
        format!("z repeated after '+' gives '+' (N={repeat_ups})"),
        1.0,
        repeat.iter().filter(|r| r.0 && r.1).count(),
        repeat_ups,
    ));
    checks.push(Check::frequency(
        format!("z repeated gives the same outcome (N={n_corr})"),
        1.0,
        repeat.iter().filter(|r| r.1).count(),
        n_corr,
    ));

    // Refined hanging-up on the first event, environments traced out.
    let env: Vec<usize> = zx
        .events()
        .iter()
        .filter_map(|e| e.environment_factor())
        .collect();
    let fresh = Observer::new("o", 0);
    let plain = hang_up_distribution(&fresh, &zx, &id("z"))?;
    let refined = match refined_distribution(&fresh, &zx, &id("z"), &env)? {
        RefinedDistribution::Pointer(d) => d,
        RefinedDistribution::Interference(_) => Vec::new(),
    };
    checks.push(Check::holds(
        "environment traced out: reduced matrix diagonal in the pointer basis",
        !refined.is_empty(),
    ));
    let analytic_gap = plain
        .iter()
        .zip(&refined)
        .map(|((l1, p1), (l2, p2))| {
            if l1 == l2 {
                (p1 - p2).abs()
            } else {
                f64::INFINITY
            }
        })
        .fold(
            if refined.is_empty() {
                f64::INFINITY
            } else {
                0.0
            },
            f64::max,
        );
    checks.push(Check::close(
        "refined vs plain analytic distributions (max difference)",
        0.0,
        analytic_gap,
        EPS_NUM,
    ));
    let refined_runs = run_trials(n, params.seed, 62, |s| {
        let mut obs = Observer::new("o", s);
        match refined_hang_up(&mut obs, &zx, &id("z"), &env)? {
            RefinedOutcome::Pointer(l) => Ok(Some(l == Label::plus())),
            RefinedOutcome::Interference(_) => Ok(None),
        }
    })?;
    let refined_ups = refined_runs.iter().filter(|r| **r == Some(true)).count();
    checks.push(Check::frequency(
        format!("refined first '+' frequency (N={n})"),
        p_plus,
        refined_ups,
        n,
    ));
    checks.push(Check::close(
        "refined vs plain '+' frequency (difference)",
        0.0,
        (refined_ups as f64 - ups as f64) / n as f64,
        5.0 * (2.0 * p_plus * (1.0 - p_plus) / n as f64).sqrt(),
    ));
    checks.push(unchanged("z then x", &zx, &snaps.0));
    checks.push(unchanged("z twice", &zz, &snaps.1));
    Ok(ScenarioReport::new(
        "sequential",
        ReportParams::new(params).with_amplitudes((alpha, beta)),
        checks,
    ))
}

/// Default decoherence time grid, in units of the decay time.
pub const DEFAULT_TIMES: [f64; 10] = [0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 30.0, 50.0];

/// Grid on which the finite environment is searched for a recurrence.
const RECURRENCE_GRID: (f64, usize) = (0.01, 10_000);

/// Reduced matrix from an explicit system–environment vector
/// `α|+⟩|E₊⟩ + β|−⟩|E₋⟩`, tracing out the environment.
fn traced_matrix(
    alpha: C64,
    beta: C64,
    e_plus: &crate::CVector,
    e_minus: &crate::CVector,
) -> Result<DensityMatrix> {
    let d = e_plus.len();
    let env = CompositeSpace::single(d);
    let ep = StateVector::new(env.clone(), e_plus.clone())?;
    let em = StateVector::new(env, e_minus.clone())?;
    let psi = StateVector::combine(&[
        (alpha, &tensor(&StateVector::up_z(), &ep)),
        (beta, &tensor(&StateVector::down_z(), &em)),
    ])?;
    DensityMatrix::from_pure(&psi)?.partial_trace(&[0])
}

/// Off-diagonal weight and purity of the reduced system matrix under a
/// decaying coherence factor, the finite-environment recurrence, pointer
/// basis selection and the basis ambiguity of the bare premeasurement.
pub fn scenario_decoherence(params: &ScenarioParams) -> Result<ScenarioReport> {
    params.validate()?;
    let (alpha, beta) = params.amplitudes_or(0.6, 0.8);
    let tau = params.tau;
    let times: Vec<f64> = params
        .times
        .clone()
        .unwrap_or_else(|| DEFAULT_TIMES.iter().map(|t| t * tau).collect());
    let model = EnvironmentModel::parametric(tau)?;
    let basis = [StateVector::up_z(), StateVector::down_z()];
    let (a2, b2) = (alpha.norm_sqr(), beta.norm_sqr());
    let mut checks = Vec::new();

    let mut sorted = times.clone();
    sorted.sort_by(f64::total_cmp);
    let mut weights = Vec::new();
    for &t in &sorted {
        let rho = decohered_reduced_matrix(alpha, beta, &model, t)?;
        let z = model.coherence(t);
        let weight = rho.off_diagonal_weight(&basis)?;
        checks.push(Check::close(
            format!("t={t}: off-diagonal weight equals 2|Z||alpha||beta|"),
            2.0 * z.norm() * alpha.norm() * beta.norm(),
            weight,
            EPS_NUM,
        ));
        let zr = z.re.clamp(-1.0, 1.0);
        let e_plus = crate::CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        let e_minus = crate::CVector::from_vec(vec![
            C64::new(zr, 0.0),
            C64::new((1.0 - zr * zr).sqrt(), 0.0),
        ]);
        checks.push(Check::close(
            format!("t={t}: matches trace over an explicit environment"),
            0.0,
            max_abs_diff(
                traced_matrix(alpha, beta, &e_plus, &e_minus)?.matrix(),
                rho.matrix(),
            ),
            EPS_NUM,
        ));
        let purity = rho.purity();
        checks.push(Check::close(
            format!("t={t}: purity"),
            a2 * a2 + b2 * b2 + 2.0 * z.norm_sqr() * a2 * b2,
            purity,
            EPS_NUM,
        ));
        if t == 0.0 {
            checks.push(Check::close("t=0: pure state", 1.0, purity, EPS_NUM));
        }
        if t >= 20.0 * tau {
            checks.push(Check::close(
                format!("t={t}: purity reaches the diagonal limit"),
                a2 * a2 + b2 * b2,
                purity,
                1e-6,
            ));
        }
        weights.push(weight);
    }
    checks.push(Check::holds(
        "off-diagonal weight non-increasing in t",
        weights.windows(2).all(|w| w[1] <= w[0]),
    ));

    let finite = EnvironmentModel::finite(2, params.seed)?;
    let (dt, steps) = RECURRENCE_GRID;
    let grid: Vec<(f64, f64)> = (1..=steps)
        .map(|k| {
            let t = k as f64 * dt;
            (t, finite.coherence(t).norm())
        })
        .collect();
    // A recurrence: after its first local minimum, |Z| climbs back above
    // 1/2. The parametric model decays monotonically and never does.
    let first_min =
        (1..grid.len() - 1).find(|&i| grid[i].1 <= grid[i - 1].1 && grid[i].1 <= grid[i + 1].1);
    let revival = first_min
        .map(|i| grid[i + 1..].iter().map(|&(_, z)| z).fold(0.0, f64::max))
        .unwrap_or(0.0);
    checks.push(Check::exceeds(
        "finite environment d_E=2: max |Z(t)| after the first local minimum of |Z|",
        0.5,
        revival,
    ));
    checks.push(Check::holds(
        "finite environment d_E=2: |Z| has a local minimum below 1",
        first_min.is_some_and(|i| grid[i].1 < 1.0 - 1e-6),
    ));
    if let EnvironmentModel::Finite(env) = &finite {
        let mut worst: f64 = 0.0;
        for &(t, _) in grid.iter().step_by(steps / 10) {
            let rho = decohered_reduced_matrix(alpha, beta, &finite, t)?;
            let traced = traced_matrix(alpha, beta, &env.state(0, t), &env.state(1, t))?;
            worst = worst.max(max_abs_diff(rho.matrix(), traced.matrix()));
        }
        checks.push(Check::close(
            "finite environment: matches trace over the evolved environment",
            0.0,
            worst,
            EPS_NUM,
        ));
    }

    // Pointer basis: H = σz ⊗ σx commutes with σz ⊗ I but not σx ⊗ I.
    let interaction = kron(&pauli::z(), &pauli::x());
    let selected = pointer_basis(&interaction, &[Observable::spin_x(), Observable::spin_z()])?;
    checks.push(Check::close(
        "pointer basis selected by the interaction is z",
        0.0,
        max_abs_diff(selected.matrix(), Observable::spin_z().matrix()),
        EPS_NUM,
    ));

    let equal = C64::new(FRAC_1_SQRT_2, 0.0);
    let ambiguity = basis_ambiguity_check(equal, equal)?;
    checks.push(Check::holds(
        "equal amplitudes: x basis gives a second biorthogonal decomposition",
        ambiguity.x_rewriting.biorthogonal,
    ));
    checks.push(Check::close(
        "equal amplitudes: rewriting with superposed apparatus states (max amplitude deviation)",
        0.0,
        ambiguity
            .tilde_rewriting
            .as_ref()
            .map(|t| t.max_deviation)
            .unwrap_or(f64::INFINITY),
        1e-12,
    ));
    let unequal = basis_ambiguity_check(C64::new(0.6, 0.0), C64::new(0.8, 0.0))?;
    checks.push(Check::holds(
        "unequal amplitudes: Schmidt basis unique",
        unequal.unique_schmidt_basis && !unequal.x_rewriting.biorthogonal,
    ));

    let mut report = ReportParams::new(params).with_amplitudes((alpha, beta));
    report.tau = Some(tau);
    report.times = Some(times.iter().map(|&t| round15(t)).collect());
    Ok(ScenarioReport::new("decoherence", report, checks))
}

/// Runs the named scenario.
pub fn run(name: &str, params: &ScenarioParams) -> Result<ScenarioReport> {
    match name {
        "mixture_vs_superposition" => scenario_mixture_vs_superposition(params),
        "interference" => scenario_interference(params),
        "epr" => scenario_epr(params),
        "bell" => scenario_bell(params),
        "mermin_square" => scenario_mermin_square(params),
        "wigners_friend" => scenario_wigners_friend(params),
        "locality" => scenario_locality(params),
        "sequential" => scenario_sequential(params),
        "decoherence" => scenario_decoherence(params),
        _ => Err(Error::UnknownScenario(name.to_string())),
    }
}
