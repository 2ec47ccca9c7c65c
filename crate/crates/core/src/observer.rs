//! Branched universal state and observers that hang up to branches.
//!
//! A [`BranchedState`] is never reduced. Each measurement event splits every
//! leaf branch into one child per outcome, entangling fresh apparatus,
//! environment and brain factors with the measured system. An [`Observer`]
//! carries no ket of its own beyond its brain factors; its awareness is a
//! list of `(event, label)` entries, extended by [`hang_up`] with a
//! Born-weighted choice restricted to branches that extend what the observer
//! is already aware of.
//!
//! Nothing in the public API compares the awareness of two observers. Branch
//! lists and awareness records are available only with the `introspection`
//! feature (and in unit tests).

use std::fmt::{self, Write as _};

use nalgebra::SymmetricEigen;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::density::DensityMatrix;
use crate::hilbert::{
    outer, CompositeSpace, Factor, Label, Observable, ObserverId, Role, StateVector,
};
use crate::measurement::{MeasurementSpec, PointerRecord};
use crate::{CMatrix, CVector, Error, Result, C64};

/// Outcomes whose squared amplitude falls below this are not kept as branches.
pub const PRUNE_THRESHOLD: f64 = 1e-12;
/// Largest pointer-basis coherence accepted as diagonal by [`refined_hang_up`].
pub const EPS_DIAG: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EventId(pub String);

impl EventId {
    pub fn new(id: impl Into<String>) -> Self {
        Self(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// How an event's environment factor records the outcome.
#[derive(Debug, Clone, PartialEq)]
pub enum EnvironmentRecord {
    None,
    /// Orthonormal environment states, one per outcome.
    Orthogonal,
    /// Explicit ready and per-outcome states; these may overlap.
    Custom {
        ready: StateVector,
        pointers: Vec<StateVector>,
    },
}

/// A measurement to be recorded by [`BranchedState::split`]. The apparatus,
/// environment and witness brain factors are created fresh by the split.
#[derive(Debug, Clone, PartialEq)]
pub struct EventSpec {
    pub id: EventId,
    pub target: usize,
    pub observable: Observable,
    pub environment: EnvironmentRecord,
    pub witnesses: Vec<ObserverId>,
}

impl EventSpec {
    pub fn new(id: impl Into<String>, target: usize, observable: Observable) -> Self {
        Self {
            id: EventId::new(id),
            target,
            observable,
            environment: EnvironmentRecord::None,
            witnesses: Vec::new(),
        }
    }

    pub fn with_environment(mut self, environment: EnvironmentRecord) -> Self {
        self.environment = environment;
        self
    }

    pub fn witnessed_by(mut self, observer: &ObserverId) -> Self {
        self.witnesses.push(observer.clone());
        self
    }
}

/// Who asked whom about which event, for query interactions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryOrigin {
    pub asker: ObserverId,
    pub askee: ObserverId,
    pub event: EventId,
}

/// One entry of the event log.
#[derive(Debug, Clone, PartialEq)]
pub struct EventRecord {
    seq: usize,
    id: EventId,
    spec: MeasurementSpec,
    witnesses: Vec<(ObserverId, usize)>,
    query: Option<QueryOrigin>,
}

impl EventRecord {
    pub fn seq(&self) -> usize {
        self.seq
    }

    pub fn id(&self) -> &EventId {
        &self.id
    }

    pub fn spec(&self) -> &MeasurementSpec {
        &self.spec
    }

    pub fn labels(&self) -> Vec<Label> {
        self.spec.observable.labels()
    }

    pub fn apparatus_factor(&self) -> usize {
        self.spec.apparatus.factor
    }

    pub fn environment_factor(&self) -> Option<usize> {
        self.spec.environment.as_ref().map(|r| r.factor)
    }

    /// Brain factor of `observer` created by this event, if it witnessed it.
    pub fn witness_factor(&self, observer: &ObserverId) -> Option<usize> {
        self.witnesses
            .iter()
            .find(|(o, _)| o == observer)
            .map(|(_, f)| *f)
    }

    pub fn query(&self) -> Option<&QueryOrigin> {
        self.query.as_ref()
    }
}

/// A leaf of the branch tree.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    path: Vec<(EventId, Label)>,
    amplitude: C64,
    component: CVector,
}

impl Branch {
    pub fn path(&self) -> &[(EventId, Label)] {
        &self.path
    }

    pub fn amplitude(&self) -> C64 {
        self.amplitude
    }

    pub fn weight(&self) -> f64 {
        self.amplitude.norm_sqr()
    }

    pub fn component(&self) -> &CVector {
        &self.component
    }

    fn label_for(&self, event: &EventId) -> Option<&Label> {
        self.path.iter().find(|(e, _)| e == event).map(|(_, l)| l)
    }

    fn extends(&self, awareness: &[(EventId, Label)]) -> bool {
        awareness.iter().all(|(e, l)| self.label_for(e) == Some(l))
    }
}

/// The universal state relative to an observer, as a sum of labeled
/// branches. Only leaves are stored; every leaf path has one entry per
/// logged event, in log order.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchedState {
    space: CompositeSpace,
    branches: Vec<Branch>,
    events: Vec<EventRecord>,
}

impl BranchedState {
    pub fn new(initial: StateVector) -> Result<Self> {
        initial.require_normalized()?;
        let space = initial.space().clone();
        Ok(Self {
            space,
            branches: vec![Branch {
                path: Vec::new(),
                amplitude: C64::new(1.0, 0.0),
                component: initial.into_amplitudes(),
            }],
            events: Vec::new(),
        })
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn events(&self) -> &[EventRecord] {
        &self.events
    }

    pub fn event(&self, id: &EventId) -> Option<&EventRecord> {
        self.events.iter().find(|e| &e.id == id)
    }

    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    /// Leaves of the branch tree.
    #[cfg(any(test, feature = "introspection"))]
    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    /// `Σ amplitude · component` over all branches.
    pub fn global_vector(&self) -> StateVector {
        let mut v = CVector::zeros(self.space.total_dim());
        for b in &self.branches {
            v += &b.component * b.amplitude;
        }
        StateVector::new(self.space.clone(), v).expect("branch components match the space")
    }

    /// Sum of squared branch amplitudes.
    pub fn total_weight(&self) -> f64 {
        self.branches.iter().map(Branch::weight).sum()
    }

    /// Records a measurement: appends fresh apparatus, environment and
    /// witness brain factors in their ready states, applies the
    /// premeasurement unitary and splits every leaf into its outcomes.
    pub fn split(&self, event: EventSpec) -> Result<BranchedState> {
        self.split_inner(event, None)
    }

    fn split_inner(&self, event: EventSpec, query: Option<QueryOrigin>) -> Result<BranchedState> {
        if self.event(&event.id).is_some() {
            return Err(Error::DuplicateEvent(event.id.0));
        }
        let target_dim = self.space.factor(event.target)?.dim;
        if target_dim != event.observable.dim() {
            return Err(Error::DimensionMismatch {
                expected: target_dim,
                found: event.observable.dim(),
            });
        }
        let seq = self.events.len();
        let n = event.observable.outcomes().len();
        let mut space = self.space.clone();
        let mut ready: Vec<CVector> = Vec::new();

        let apparatus_factor = space.push(Factor::new(Role::Apparatus, seq, n))?;
        let apparatus = PointerRecord::standard(apparatus_factor, n);
        ready.push(apparatus.ready.amplitudes().clone());
        let mut spec = MeasurementSpec::new(event.target, event.observable.clone(), apparatus)?;

        let environment = match &event.environment {
            EnvironmentRecord::None => None,
            EnvironmentRecord::Orthogonal => {
                let f = space.push(Factor::new(Role::Environment, seq, n))?;
                Some(PointerRecord::standard(f, n))
            }
            EnvironmentRecord::Custom { ready, pointers } => {
                let f = space.push(Factor::new(Role::Environment, seq, ready.dim()))?;
                Some(PointerRecord::new(f, ready.clone(), pointers.clone())?)
            }
        };
        if let Some(env) = environment {
            ready.push(env.ready.amplitudes().clone());
            spec = spec.with_environment(env)?;
        }

        let mut witnesses = Vec::new();
        for w in &event.witnesses {
            let f = space.push(Factor::new(Role::Brain(w.clone()), seq, n))?;
            let brain = PointerRecord::standard(f, n);
            ready.push(brain.ready.amplitudes().clone());
            spec = spec.with_observer(brain)?;
            witnesses.push((w.clone(), f));
        }
        spec.validate(&space)?;

        let ancilla = ready
            .iter()
            .skip(1)
            .fold(ready[0].clone(), |acc, r| acc.kronecker(r));
        let transitions: Vec<Vec<(usize, CMatrix)>> = (0..n)
            .map(|k| {
                spec.records()
                    .map(|r| (r.factor, r.transition(k)))
                    .collect()
            })
            .collect();

        let mut branches = Vec::new();
        for parent in &self.branches {
            let extended = parent.component.kronecker(&ancilla);
            for (k, outcome) in spec.observable.outcomes().iter().enumerate() {
                let mut child = crate::hilbert::apply_local_raw(
                    &outcome.projector,
                    spec.target,
                    &space,
                    &extended,
                )?;
                let weight = child.norm_squared();
                if parent.weight() * weight < PRUNE_THRESHOLD {
                    continue;
                }
                for (factor, w) in &transitions[k] {
                    child = crate::hilbert::apply_local_raw(w, *factor, &space, &child)?;
                }
                let norm = weight.sqrt();
                let mut path = parent.path.clone();
                path.push((event.id.clone(), outcome.label.clone()));
                branches.push(Branch {
                    path,
                    amplitude: parent.amplitude * norm,
                    component: child / C64::new(norm, 0.0),
                });
            }
        }

        let mut events = self.events.clone();
        events.push(EventRecord {
            seq,
            id: event.id,
            spec,
            witnesses,
            query,
        });
        Ok(BranchedState {
            space,
            branches,
            events,
        })
    }

    /// Records the physical interaction by which `asker` asks `askee` about
    /// `event`: a measurement by the asker of the askee's brain factor for
    /// that event, in its pointer basis.
    pub fn record_query(
        &self,
        asker: &ObserverId,
        askee: &ObserverId,
        event: &EventId,
    ) -> Result<BranchedState> {
        let record = self
            .event(event)
            .ok_or_else(|| Error::UnknownEvent(event.0.clone()))?;
        let brain = record
            .witness_factor(askee)
            .ok_or_else(|| Error::NotParticipant {
                observer: askee.0.clone(),
                event: event.0.clone(),
            })?;
        let dim = self.space.factor(brain)?.dim;
        let spectrum = record
            .spec
            .observable
            .outcomes()
            .iter()
            .enumerate()
            .map(|(k, o)| {
                let e = StateVector::basis(CompositeSpace::single(dim), k)?;
                Ok((o.value, outer(e.amplitudes(), e.amplitudes())))
            })
            .collect::<Result<Vec<_>>>()?;
        let observable = Observable::from_spectrum(spectrum)?.with_labels(record.labels())?;
        let spec = EventSpec::new(query_event_id(asker, askee, event).0, brain, observable)
            .witnessed_by(asker);
        self.split_inner(
            spec,
            Some(QueryOrigin {
                asker: asker.clone(),
                askee: askee.clone(),
                event: event.clone(),
            }),
        )
    }

    /// Born weights of `event`'s outcomes over the branches extending
    /// `awareness`, normalized over those branches.
    fn conditional_distribution(
        &self,
        awareness: &[(EventId, Label)],
        event: &EventRecord,
    ) -> Result<Vec<(Label, f64)>> {
        let mut dist: Vec<(Label, f64)> = event.labels().into_iter().map(|l| (l, 0.0)).collect();
        let mut total = 0.0;
        for b in self.branches.iter().filter(|b| b.extends(awareness)) {
            let label = b
                .label_for(&event.id)
                .ok_or_else(|| Error::UnknownEvent(event.id.0.clone()))?;
            if let Some(slot) = dist.iter_mut().find(|(l, _)| l == label) {
                slot.1 += b.weight();
            }
            total += b.weight();
        }
        if total <= 0.0 {
            return Err(Error::EmptyCandidates);
        }
        for slot in &mut dist {
            slot.1 /= total;
        }
        Ok(dist)
    }

    /// Normalized sum of the branches extending `awareness`.
    fn candidate_vector(&self, awareness: &[(EventId, Label)]) -> Result<StateVector> {
        let mut v = CVector::zeros(self.space.total_dim());
        let mut any = false;
        for b in self.branches.iter().filter(|b| b.extends(awareness)) {
            v += &b.component * b.amplitude;
            any = true;
        }
        if !any {
            return Err(Error::EmptyCandidates);
        }
        StateVector::new(self.space.clone(), v)?.normalized()
    }

    /// Canonical text form. Branches are sorted by path; floats use the
    /// shortest round-trip representation.
    pub fn to_canonical_string(&self) -> String {
        let mut out = String::new();
        out.push_str("space");
        for f in self.space.factors() {
            let _ = write!(out, " {f}");
        }
        out.push('\n');
        for e in &self.events {
            let _ = write!(
                out,
                "event {} {} target={} apparatus={} environment={}",
                e.seq,
                e.id,
                e.spec.target,
                e.spec.apparatus.factor,
                e.environment_factor()
                    .map(|f| f.to_string())
                    .unwrap_or_else(|| "-".into()),
            );
            out.push_str(" witnesses=");
            let ws: Vec<String> = e
                .witnesses
                .iter()
                .map(|(o, f)| format!("{o}@{f}"))
                .collect();
            out.push_str(&ws.join(","));
            let labels: Vec<String> = e.labels().iter().map(|l| l.0.clone()).collect();
            let _ = write!(out, " labels={}", labels.join(","));
            if let Some(q) = &e.query {
                let _ = write!(out, " query={}>{}:{}", q.asker, q.askee, q.event);
            }
            out.push('\n');
        }
        let mut sorted: Vec<&Branch> = self.branches.iter().collect();
        sorted.sort_by(|a, b| a.path.cmp(&b.path));
        for b in sorted {
            let path: Vec<String> = b.path.iter().map(|(e, l)| format!("{e}={l}")).collect();
            let _ = write!(
                out,
                "branch {} amp={:e},{:e} comp=",
                path.join(";"),
                b.amplitude.re,
                b.amplitude.im
            );
            let comp: Vec<String> = b
                .component
                .iter()
                .map(|z| format!("{:e},{:e}", z.re, z.im))
                .collect();
            out.push_str(&comp.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Identifier of the query interaction `asker → askee` about `event`.
pub fn query_event_id(asker: &ObserverId, askee: &ObserverId, event: &EventId) -> EventId {
    EventId(format!("ask:{asker}:{askee}:{event}"))
}

/// A conscious observer: identity, awareness record and a private seeded
/// random stream.
#[derive(Debug, Clone)]
pub struct Observer {
    id: ObserverId,
    seed: u64,
    awareness: Vec<(EventId, Label)>,
    rng: ChaCha8Rng,
}

impl Observer {
    pub fn new(id: impl Into<String>, seed: u64) -> Self {
        Self {
            id: ObserverId::new(id),
            seed,
            awareness: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn id(&self) -> &ObserverId {
        &self.id
    }

    /// Copy of the awareness record, in the order it was acquired.
    #[cfg(any(test, feature = "introspection"))]
    pub fn awareness_path(&self) -> Vec<(EventId, Label)> {
        self.awareness.clone()
    }

    pub fn to_canonical_string(&self) -> String {
        let entries: Vec<String> = self
            .awareness
            .iter()
            .map(|(e, l)| format!("{e}={l}"))
            .collect();
        format!(
            "observer {} seed={} word_pos={} awareness={}\n",
            self.id,
            self.seed,
            self.rng.get_word_pos(),
            entries.join(";")
        )
    }

    fn check_can_hang_up<'s>(
        &self,
        state: &'s BranchedState,
        event: &EventId,
    ) -> Result<&'s EventRecord> {
        let record = state
            .event(event)
            .ok_or_else(|| Error::UnknownEvent(event.0.clone()))?;
        if self.awareness.iter().any(|(e, _)| e == event) {
            return Err(Error::AlreadyHungUp(event.0.clone()));
        }
        if let Some((last, _)) = self.awareness.last() {
            let last_seq = state
                .event(last)
                .ok_or_else(|| Error::UnknownEvent(last.0.clone()))?
                .seq;
            if last_seq >= record.seq {
                return Err(Error::StaleEvent {
                    event: event.0.clone(),
                });
            }
        }
        Ok(record)
    }

    fn sample(&mut self, weights: &[f64]) -> usize {
        let u: f64 = self.rng.random();
        let mut acc = 0.0;
        let mut last = 0;
        for (i, &w) in weights.iter().enumerate() {
            if w <= 0.0 {
                continue;
            }
            acc += w;
            last = i;
            if u < acc {
                return i;
            }
        }
        last
    }
}

/// Born-rule distribution the observer assigns to `event`, restricted to
/// branches that extend its awareness.
pub fn hang_up_distribution(
    obs: &Observer,
    state: &BranchedState,
    event: &EventId,
) -> Result<Vec<(Label, f64)>> {
    let record = obs.check_can_hang_up(state, event)?;
    state.conditional_distribution(&obs.awareness, record)
}

/// The observer's awareness hangs up to one outcome of `event`, drawn with
/// Born weights among the branches extending its current awareness. The
/// state itself is untouched.
pub fn hang_up(obs: &mut Observer, state: &BranchedState, event: &EventId) -> Result<Label> {
    let dist = hang_up_distribution(obs, state, event)?;
    let weights: Vec<f64> = dist.iter().map(|(_, p)| *p).collect();
    let label = dist[obs.sample(&weights)].0.clone();
    obs.awareness.push((event.clone(), label.clone()));
    Ok(label)
}

/// Result of the density-matrix form of hanging up.
#[derive(Debug, Clone, PartialEq)]
pub enum RefinedOutcome {
    /// The reduced matrix is diagonal in the pointer basis; the label was
    /// appended to the observer's awareness.
    Pointer(Label),
    /// Pointer-basis coherences survive the partial trace; the observer
    /// hung up to an eigenvector of the reduced matrix instead, and its
    /// awareness record is unchanged.
    Interference(InterferenceReport),
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceReport {
    /// Largest pointer-basis coherence `max |⟨a|ρ|b⟩|` between different
    /// pointer outcomes.
    pub coherence: f64,
    /// Eigenvalues of the reduced matrix, largest first.
    pub eigenvalues: Vec<f64>,
    /// Index into `eigenvalues` of the sampled eigenvector.
    pub sampled: usize,
    /// Sampled eigenvector, with the apparatus factor written in its
    /// pointer basis.
    pub eigenvector: StateVector,
    /// Pointer-outcome weights `⟨v|P_a|v⟩` of the sampled eigenvector.
    pub pointer_weights: Vec<(Label, f64)>,
}

/// Outcome distribution of the refined mechanism, without sampling.
#[derive(Debug, Clone, PartialEq)]
pub enum RefinedDistribution {
    Pointer(Vec<(Label, f64)>),
    Interference(PointerCoherence),
}

/// Reduced matrix that is not diagonal in the pointer basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PointerCoherence {
    pub coherence: f64,
    /// Reduced matrix with the apparatus factor written in its pointer
    /// basis.
    pub reduced: DensityMatrix,
    labels: Vec<Label>,
    stride: usize,
    dim: usize,
}

impl PointerCoherence {
    fn pointer_digit(&self, index: usize) -> usize {
        index / self.stride % self.dim
    }

    /// `Σ_{i ∈ outcome a} |vᵢ|²` for each pointer outcome `a`.
    fn pointer_weights(&self, v: &CVector) -> Vec<(Label, f64)> {
        let mut w: Vec<(Label, f64)> = self.labels.iter().map(|l| (l.clone(), 0.0)).collect();
        for (i, z) in v.iter().enumerate() {
            w[self.pointer_digit(i)].1 += z.norm_sqr();
        }
        w
    }
}

/// Builds the reduced matrix of the candidate branches after tracing out
/// `unobservable`, and its distribution over pointer outcomes of `event`.
pub fn refined_distribution(
    obs: &Observer,
    state: &BranchedState,
    event: &EventId,
    unobservable: &[usize],
) -> Result<RefinedDistribution> {
    let record = obs.check_can_hang_up(state, event)?;
    let count = state.space.factor_count();
    if let Some(&index) = unobservable.iter().find(|&&i| i >= count) {
        return Err(Error::FactorOutOfRange { index, count });
    }
    let pointer_factor = record.apparatus_factor();
    if unobservable.contains(&pointer_factor) {
        return Err(Error::PointerRecordHidden(event.0.clone()));
    }
    let keep: Vec<usize> = (0..count).filter(|i| !unobservable.contains(i)).collect();
    let psi = state.candidate_vector(&obs.awareness)?;

    // Rotate the apparatus factor into its pointer basis, so that pointer
    // projectors become index sets.
    let pointers = &record.spec.apparatus.pointers;
    let n = pointers.len();
    let to_pointer = CMatrix::from_fn(n, n, |a, j| pointers[a].amplitudes()[j].conj());
    let psi = crate::hilbert::apply_local(&to_pointer, pointer_factor, &psi)?;
    let reduced = DensityMatrix::reduced_from_pure(&psi, &keep)?;
    let position = keep
        .iter()
        .position(|&f| f == pointer_factor)
        .expect("pointer factor kept");
    let coherent = PointerCoherence {
        coherence: 0.0,
        stride: reduced.space().stride(position),
        dim: n,
        reduced,
        labels: record.labels(),
    };

    let rho = coherent.reduced.matrix();
    let dim = rho.nrows();
    let mut coherence: f64 = 0.0;
    let mut dist: Vec<(Label, f64)> = coherent.labels.iter().map(|l| (l.clone(), 0.0)).collect();
    for i in 0..dim {
        let di = coherent.pointer_digit(i);
        dist[di].1 += rho[(i, i)].re;
        for j in 0..dim {
            if coherent.pointer_digit(j) != di {
                coherence = coherence.max(rho[(i, j)].norm());
            }
        }
    }
    if coherence <= EPS_DIAG {
        for slot in &mut dist {
            slot.1 = slot.1.clamp(0.0, 1.0);
        }
        Ok(RefinedDistribution::Pointer(dist))
    } else {
        Ok(RefinedDistribution::Interference(PointerCoherence {
            coherence,
            ..coherent
        }))
    }
}

/// Hanging up through the reduced density matrix: trace out the factors the
/// observer will not observe, check that what remains is diagonal in the
/// pointer basis of `event`, and sample a diagonal entry.
pub fn refined_hang_up(
    obs: &mut Observer,
    state: &BranchedState,
    event: &EventId,
    unobservable: &[usize],
) -> Result<RefinedOutcome> {
    match refined_distribution(obs, state, event, unobservable)? {
        RefinedDistribution::Pointer(dist) => {
            let weights: Vec<f64> = dist.iter().map(|(_, p)| *p).collect();
            let label = dist[obs.sample(&weights)].0.clone();
            obs.awareness.push((event.clone(), label.clone()));
            Ok(RefinedOutcome::Pointer(label))
        }
        RefinedDistribution::Interference(coherent) => {
            let eig = SymmetricEigen::new(coherent.reduced.matrix().clone());
            let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
            order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
            let eigenvalues: Vec<f64> =
                order.iter().map(|&k| eig.eigenvalues[k].max(0.0)).collect();
            let total: f64 = eigenvalues.iter().sum();
            let weights: Vec<f64> = eigenvalues.iter().map(|v| v / total).collect();
            let sampled = obs.sample(&weights);
            let v = eig.eigenvectors.column(order[sampled]).into_owned();
            let pointer_weights = coherent.pointer_weights(&v);
            let eigenvector = StateVector::new(coherent.reduced.space().clone(), v)?;
            Ok(RefinedOutcome::Interference(InterferenceReport {
                coherence: coherent.coherence,
                eigenvalues,
                sampled,
                eigenvector,
                pointer_weights,
            }))
        }
    }
}

/// Asks `askee` about `event`. The state must already contain the query
/// interaction (see [`BranchedState::record_query`]); the answer is the
/// asker's hang-up on that interaction.
pub fn query(
    asker: &mut Observer,
    askee: &ObserverId,
    event: &EventId,
    state: &BranchedState,
) -> Result<Label> {
    let record = state
        .event(event)
        .ok_or_else(|| Error::UnknownEvent(event.0.clone()))?;
    if record.witness_factor(askee).is_none() {
        return Err(Error::NotParticipant {
            observer: askee.0.clone(),
            event: event.0.clone(),
        });
    }
    let derived = query_event_id(&asker.id, askee, event);
    if state.event(&derived).is_none() {
        return Err(Error::QueryNotRecorded {
            asker: asker.id.0.clone(),
            askee: askee.0.clone(),
            event: event.0.clone(),
        });
    }
    hang_up(asker, state, &derived)
}
