//! Premeasurement, reduction, decoherence and pointer-basis selection.

use nalgebra::SymmetricEigen;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::density::{DensityMatrix, Provenance};
use crate::hilbert::{
    apply, apply_local, commutator, embed, identity, inner, is_orthonormal, is_projector, kron,
    max_abs, outer, tensor, CompositeSpace, Observable, StateVector,
};
use crate::{CMatrix, CVector, Error, Result, C64, EPS_NORM, EPS_NUM};

/// Ready state and per-outcome pointer states of one recording factor.
#[derive(Debug, Clone, PartialEq)]
pub struct PointerRecord {
    pub factor: usize,
    pub ready: StateVector,
    pub pointers: Vec<StateVector>,
}

impl PointerRecord {
    pub fn new(factor: usize, ready: StateVector, pointers: Vec<StateVector>) -> Result<Self> {
        ready.require_normalized()?;
        for p in &pointers {
            if p.dim() != ready.dim() {
                return Err(Error::DimensionMismatch {
                    expected: ready.dim(),
                    found: p.dim(),
                });
            }
            p.require_normalized()?;
        }
        Ok(Self {
            factor,
            ready,
            pointers,
        })
    }

    /// Computational-basis record of dimension `dim`: ready state `|0⟩`,
    /// pointer `k` is `|k⟩`.
    pub fn standard(factor: usize, dim: usize) -> Self {
        let basis = |k| StateVector::basis(CompositeSpace::single(dim), k).expect("index < dim");
        Self {
            factor,
            ready: basis(0),
            pointers: (0..dim).map(basis).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.ready.dim()
    }

    /// Unitary on this factor taking the ready state to pointer `k`.
    pub fn transition(&self, k: usize) -> CMatrix {
        transition_unitary(self.ready.amplitudes(), self.pointers[k].amplitudes())
    }
}

/// What is measured, and which factors record the result.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSpec {
    pub target: usize,
    pub observable: Observable,
    pub apparatus: PointerRecord,
    pub environment: Option<PointerRecord>,
    pub observers: Vec<PointerRecord>,
}

impl MeasurementSpec {
    pub fn new(target: usize, observable: Observable, apparatus: PointerRecord) -> Result<Self> {
        let spec = Self {
            target,
            observable,
            apparatus,
            environment: None,
            observers: Vec::new(),
        };
        spec.check_record(&spec.apparatus, true)?;
        Ok(spec)
    }

    /// Adds an environment record. Its pointer states need not be orthogonal.
    pub fn with_environment(mut self, environment: PointerRecord) -> Result<Self> {
        self.check_record(&environment, false)?;
        self.environment = Some(environment);
        Ok(self)
    }

    /// Adds an observer's brain record.
    pub fn with_observer(mut self, brain: PointerRecord) -> Result<Self> {
        self.check_record(&brain, true)?;
        self.observers.push(brain);
        Ok(self)
    }

    fn check_record(&self, record: &PointerRecord, orthonormal: bool) -> Result<()> {
        let outcomes = self.observable.outcomes().len();
        if record.pointers.len() != outcomes {
            return Err(Error::PointerCountMismatch {
                outcomes,
                pointers: record.pointers.len(),
            });
        }
        if orthonormal && !is_orthonormal(&record.pointers) {
            return Err(Error::PointersNotOrthonormal);
        }
        Ok(())
    }

    /// All recording factors: apparatus, then environment, then observers.
    pub fn records(&self) -> impl Iterator<Item = &PointerRecord> {
        std::iter::once(&self.apparatus)
            .chain(self.environment.iter())
            .chain(self.observers.iter())
    }

    /// Checks factor indices and dimensions against a space.
    pub fn validate(&self, space: &CompositeSpace) -> Result<()> {
        let target_dim = space.factor(self.target)?.dim;
        if target_dim != self.observable.dim() {
            return Err(Error::DimensionMismatch {
                expected: target_dim,
                found: self.observable.dim(),
            });
        }
        let mut used = vec![self.target];
        for r in self.records() {
            let dim = space.factor(r.factor)?.dim;
            if dim != r.dim() {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: r.dim(),
                });
            }
            if used.contains(&r.factor) {
                return Err(Error::InvalidParameter(format!(
                    "factor {} used twice in one measurement",
                    r.factor
                )));
            }
            used.push(r.factor);
        }
        Ok(())
    }
}

/// Unitary `W` with `W|a⟩ = |b⟩` for unit vectors `a`, `b`: a phase times a
/// Householder reflection, acting as the identity (up to that phase) on the
/// complement of `span{a, b}`.
pub fn transition_unitary(a: &CVector, b: &CVector) -> CMatrix {
    let overlap = a.dotc(b);
    let phase = if overlap.norm() > 1e-15 {
        overlap / overlap.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    let aligned = b * phase.conj();
    let w = a - &aligned;
    let n2 = w.norm_squared();
    let reflection = if n2 < 1e-28 {
        identity(a.len())
    } else {
        identity(a.len()) - outer(&w, &w) * C64::new(2.0 / n2, 0.0)
    };
    reflection * phase
}

/// Fraction of `state`'s norm carried by `ready` on factor `factor`.
fn ready_weight(state: &StateVector, record: &PointerRecord) -> Result<f64> {
    let p = outer(record.ready.amplitudes(), record.ready.amplitudes());
    Ok(apply_local(&p, record.factor, state)?.norm_sqr())
}

/// `Σ cᵢ|φᵢ⟩|A₀⟩(|E₀⟩…) ↦ Σ cᵢ|φᵢ⟩|Aᵢ⟩(|Eᵢ⟩…)`, realized as the unitary
/// `Σₖ Pₖ ⊗ Wₖ` where `Wₖ` moves every record from ready to pointer `k`.
pub fn premeasure(state: &StateVector, spec: &MeasurementSpec) -> Result<StateVector> {
    spec.validate(state.space())?;
    let total = state.norm_sqr();
    for r in spec.records() {
        if (ready_weight(state, r)? - total).abs() > EPS_NORM * total.max(1.0) {
            return Err(Error::NotReady { factor: r.factor });
        }
    }
    let mut out = CVector::zeros(state.dim());
    for (k, outcome) in spec.observable.outcomes().iter().enumerate() {
        let mut branch = apply_local(&outcome.projector, spec.target, state)?;
        if branch.norm_sqr() == 0.0 {
            continue;
        }
        for r in spec.records() {
            branch = apply_local(&r.transition(k), r.factor, &branch)?;
        }
        out += branch.amplitudes();
    }
    StateVector::new(state.space().clone(), out)
}

/// Full matrix of the premeasurement unitary on `space`.
pub fn premeasure_unitary(space: &CompositeSpace, spec: &MeasurementSpec) -> Result<CMatrix> {
    spec.validate(space)?;
    let dim = space.total_dim();
    let mut u = CMatrix::zeros(dim, dim);
    for (k, outcome) in spec.observable.outcomes().iter().enumerate() {
        let mut term = embed(&outcome.projector, spec.target, space)?;
        for r in spec.records() {
            term = embed(&r.transition(k), r.factor, space)? * term;
        }
        u += term;
    }
    Ok(u)
}

/// Reduction postulate: `P|Ψ⟩ / ‖P|Ψ⟩‖`.
pub fn reduce(state: &StateVector, projector: &CMatrix) -> Result<StateVector> {
    if !is_projector(projector) {
        return Err(Error::NotProjector);
    }
    let projected = apply(projector, state)?;
    if projected.norm_sqr() <= 1e-15 * state.norm_sqr().max(f64::MIN_POSITIVE) {
        return Err(Error::ZeroProbability);
    }
    projected.normalized()
}

/// Environment model giving the coherence factor `Z(t)` between two
/// branches.
#[derive(Debug, Clone, PartialEq)]
pub enum EnvironmentModel {
    /// `Z(t) = exp(−t/τ_d)`.
    Parametric {
        tau: f64,
    },
    Finite(FiniteEnvironment),
}

impl EnvironmentModel {
    pub fn parametric(tau: f64) -> Result<Self> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::InvalidParameter(format!("decay time {tau}")));
        }
        Ok(Self::Parametric { tau })
    }

    /// Two-branch finite environment of dimension `dim` with random
    /// per-branch Hamiltonians drawn from `seed`.
    pub fn finite(dim: usize, seed: u64) -> Result<Self> {
        Ok(Self::Finite(FiniteEnvironment::random(dim, 2, seed)?))
    }

    /// `Z(t)`, with `Z(0) = 1` and `|Z(t)| ≤ 1`.
    pub fn coherence(&self, t: f64) -> C64 {
        match self {
            Self::Parametric { tau } => C64::new((-t / tau).exp(), 0.0),
            Self::Finite(env) => env.overlap(1, 0, t),
        }
    }
}

/// Environment of dimension `dim` whose state in branch `k` evolves as
/// `|Eₖ(t)⟩ = exp(−iHₖt)|E₀⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteEnvironment {
    ready: CVector,
    spectra: Vec<(Vec<f64>, CMatrix)>,
}

impl FiniteEnvironment {
    /// Hamiltonians drawn from the Gaussian unitary ensemble.
    pub fn random(dim: usize, branches: usize, seed: u64) -> Result<Self> {
        if dim < 2 || branches < 2 {
            return Err(Error::InvalidParameter(
                "finite environment needs dimension ≥ 2 and ≥ 2 branches".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let hamiltonians = (0..branches)
            .map(|_| random_hermitian(dim, &mut rng))
            .collect();
        let mut ready = CVector::zeros(dim);
        ready[0] = C64::new(1.0, 0.0);
        Self::new(ready, hamiltonians)
    }

    pub fn new(ready: CVector, hamiltonians: Vec<CMatrix>) -> Result<Self> {
        if (ready.norm_squared() - 1.0).abs() > EPS_NORM {
            return Err(Error::NotNormalized { norm: ready.norm() });
        }
        let spectra = hamiltonians
            .into_iter()
            .map(|h| {
                let deviation = crate::hilbert::hermiticity_defect(&h);
                if deviation > EPS_NUM || h.nrows() != ready.len() {
                    return Err(Error::NotHermitian { deviation });
                }
                let eig = SymmetricEigen::new(h);
                Ok((eig.eigenvalues.iter().copied().collect(), eig.eigenvectors))
            })
            .collect::<Result<_>>()?;
        Ok(Self { ready, spectra })
    }

    pub fn dim(&self) -> usize {
        self.ready.len()
    }

    pub fn branches(&self) -> usize {
        self.spectra.len()
    }

    /// `|E_branch(t)⟩`
    pub fn state(&self, branch: usize, t: f64) -> CVector {
        let (values, vectors) = &self.spectra[branch];
        let mut coeffs = vectors.adjoint() * &self.ready;
        for (c, &l) in coeffs.iter_mut().zip(values) {
            *c *= C64::from_polar(1.0, -l * t);
        }
        vectors * coeffs
    }

    /// `⟨E_a(t)|E_b(t)⟩`
    pub fn overlap(&self, a: usize, b: usize, t: f64) -> C64 {
        self.state(a, t).dotc(&self.state(b, t))
    }
}

fn random_hermitian(dim: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re, im)
    });
    (&g + g.adjoint()) * C64::new(0.5, 0.0)
}

fn check_amplitudes(alpha: C64, beta: C64) -> Result<()> {
    let total = alpha.norm_sqr() + beta.norm_sqr();
    if !total.is_finite() || (total - 1.0).abs() > EPS_NORM {
        return Err(Error::InvalidAmplitudes(total));
    }
    Ok(())
}

/// Reduced system+apparatus matrix in the pointer basis:
/// `[[|α|², Zαβ*], [Z*α*β, |β|²]]` with `Z = Z(t)`.
pub fn decohered_reduced_matrix(
    alpha: C64,
    beta: C64,
    env: &EnvironmentModel,
    t: f64,
) -> Result<DensityMatrix> {
    check_amplitudes(alpha, beta)?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParameter(format!("time {t}")));
    }
    let z = env.coherence(t);
    let off = z * alpha * beta.conj();
    let m = CMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(alpha.norm_sqr(), 0.0),
            off,
            off.conj(),
            C64::new(beta.norm_sqr(), 0.0),
        ],
    );
    DensityMatrix::new(CompositeSpace::single(2), m, Provenance::Reduced)
}

/// First candidate `O` whose extension `O ⊗ I_env` commutes with the
/// apparatus–environment interaction (max-entry norm ≤ `EPS_NUM`).
pub fn pointer_basis(interaction: &CMatrix, candidates: &[Observable]) -> Result<Observable> {
    for candidate in candidates {
        let d = candidate.dim();
        if !interaction.nrows().is_multiple_of(d) || !interaction.is_square() {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: interaction.nrows(),
            });
        }
        let extended = kron(candidate.matrix(), &identity(interaction.nrows() / d));
        if max_abs(&commutator(&extended, interaction)) <= EPS_NUM {
            return Ok(candidate.clone());
        }
    }
    Err(Error::NoPointerBasis)
}

/// Rewriting of `α|+⟩_z|⇑⟩ + β|−⟩_z|⇓⟩` in the x basis of the system.
#[derive(Debug, Clone, PartialEq)]
pub struct XRewriting {
    /// `⟨+x|Ψ⟩` and `⟨−x|Ψ⟩` as (unnormalized) apparatus vectors.
    pub relative_states: (StateVector, StateVector),
    pub overlap: C64,
    /// Whether the two relative states are orthogonal, i.e. the x basis
    /// gives a second biorthogonal decomposition.
    pub biorthogonal: bool,
}

/// Rewriting with superposed apparatus states
/// `‖a‖ |+⟩_x|⇑̃⟩ − ‖b‖ |−⟩_x|⇓̃⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct TildeRewriting {
    pub up_tilde: StateVector,
    pub down_tilde: StateVector,
    pub rebuilt: StateVector,
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmbiguityReport {
    pub state: StateVector,
    pub single_branch: bool,
    /// Schmidt coefficients, largest first.
    pub schmidt_coefficients: (f64, f64),
    pub unique_schmidt_basis: bool,
    pub x_rewriting: XRewriting,
    pub tilde_rewriting: Option<TildeRewriting>,
}

/// Builds the post-measurement state for amplitudes `(α, β)` and checks
/// whether it admits a second product-form decomposition in the x basis.
pub fn basis_ambiguity_check(alpha: C64, beta: C64) -> Result<AmbiguityReport> {
    check_amplitudes(alpha, beta)?;
    let (up, down) = (StateVector::up_z(), StateVector::down_z());
    let state = StateVector::combine(&[(alpha, &tensor(&up, &up)), (beta, &tensor(&down, &down))])?;
    let amps = state.amplitudes();

    // Coefficient matrix M[s][a]; singular values from the eigenvalues of MM†.
    let m = CMatrix::from_fn(2, 2, |s, a| amps[2 * s + a]);
    let mm = &m * m.adjoint();
    let tr = mm.trace().re;
    let det = mm.determinant().re;
    let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
    let s1 = ((tr + disc) / 2.0).max(0.0).sqrt();
    let s2 = ((tr - disc) / 2.0).max(0.0).sqrt();

    let project = |x: &StateVector| -> StateVector {
        let v = CVector::from_fn(2, |a, _| {
            (0..2)
                .map(|s| x.amplitudes()[s].conj() * amps[2 * s + a])
                .sum()
        });
        StateVector::new(CompositeSpace::single(2), v).expect("dimension 2")
    };
    let (px, mx) = (StateVector::up_x(), StateVector::down_x());
    let a = project(&px);
    let b = project(&mx);
    let overlap = inner(&a, &b)?;
    let biorthogonal = overlap.norm() <= EPS_NUM && a.norm() > EPS_NUM && b.norm() > EPS_NUM;

    let tilde_rewriting = if biorthogonal {
        let up_tilde = a.normalized()?;
        let down_tilde = b.normalized()?.scale(C64::new(-1.0, 0.0));
        let rebuilt = StateVector::combine(&[
            (C64::new(a.norm(), 0.0), &tensor(&px, &up_tilde)),
            (C64::new(-b.norm(), 0.0), &tensor(&mx, &down_tilde)),
        ])?
        .with_space(state.space().clone())?;
        let max_deviation = rebuilt.max_deviation(&state)?;
        Some(TildeRewriting {
            up_tilde,
            down_tilde,
            rebuilt,
            max_deviation,
        })
    } else {
        None
    };

    Ok(AmbiguityReport {
        single_branch: s2 <= EPS_NUM,
        schmidt_coefficients: (s1, s2),
        unique_schmidt_basis: s1 - s2 > EPS_NUM,
        x_rewriting: XRewriting {
            relative_states: (a, b),
            overlap,
            biorthogonal,
        },
        tilde_rewriting,
        state,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{max_abs_diff, pauli, projector_onto, Factor, Role};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn sa_space() -> CompositeSpace {
        CompositeSpace::new(vec![
            Factor::new(Role::System, 0, 2),
            Factor::new(Role::Apparatus, 0, 2),
        ])
        .unwrap()
    }

    fn z_spec() -> MeasurementSpec {
        MeasurementSpec::new(0, Observable::spin_z(), PointerRecord::standard(1, 2)).unwrap()
    }

    fn ready(system: &StateVector) -> StateVector {
        tensor(system, &StateVector::up_z())
            .with_space(sa_space())
            .unwrap()
    }

    #[test]
    fn premeasure_entangles_superposition() {
        let (a, b) = (0.6, 0.8);
        let out = premeasure(&ready(&StateVector::real(&[a, b])), &z_spec()).unwrap();
        // α|+⟩|⇑⟩ + β|−⟩|⇓⟩ with ⇑ = |0⟩, ⇓ = |1⟩.
        let expected = [a, 0.0, 0.0, b];
        for (x, e) in out.amplitudes().iter().zip(expected) {
            assert!((x - c(e)).norm() < EPS_NUM);
        }
    }

    #[test]
    fn eigenstate_stays_product() {
        let out = premeasure(&ready(&StateVector::down_z()), &z_spec()).unwrap();
        let expected = tensor(&StateVector::down_z(), &StateVector::down_z());
        assert!(
            out.max_deviation(&expected.with_space(sa_space()).unwrap())
                .unwrap()
                < EPS_NUM
        );
    }

    #[test]
    fn premeasure_with_environment() {
        let space = CompositeSpace::new(vec![
            Factor::new(Role::System, 0, 2),
            Factor::new(Role::Apparatus, 0, 2),
            Factor::new(Role::Environment, 0, 2),
        ])
        .unwrap();
        let spec = z_spec()
            .with_environment(PointerRecord::standard(2, 2))
            .unwrap();
        let psi = StateVector::real(&[0.6, 0.8]);
        let input = crate::hilbert::tensor_all(&[&psi, &StateVector::up_z(), &StateVector::up_z()])
            .with_space(space.clone())
            .unwrap();
        let out = premeasure(&input, &spec).unwrap();
        let mut expected = vec![c(0.0); 8];
        expected[0] = c(0.6);
        expected[7] = c(0.8);
        let expected = StateVector::from_slice(space.clone(), &expected).unwrap();
        assert!(out.max_deviation(&expected).unwrap() < EPS_NUM);
        let u = premeasure_unitary(&space, &spec).unwrap();
        assert!(crate::hilbert::unitarity_defect(&u) < EPS_NUM);
        assert!(apply(&u, &input).unwrap().max_deviation(&out).unwrap() < EPS_NUM);
    }

    #[test]
    fn premeasure_errors() {
        let not_ready = tensor(&StateVector::up_z(), &StateVector::down_z())
            .with_space(sa_space())
            .unwrap();
        assert!(matches!(
            premeasure(&not_ready, &z_spec()),
            Err(Error::NotReady { factor: 1 })
        ));
        let three = PointerRecord::standard(1, 3);
        assert!(matches!(
            MeasurementSpec::new(0, Observable::spin_z(), three),
            Err(Error::PointerCountMismatch { .. })
        ));
        let skew = PointerRecord::new(
            1,
            StateVector::up_z(),
            vec![StateVector::up_z(), StateVector::up_x()],
        )
        .unwrap();
        assert!(matches!(
            MeasurementSpec::new(0, Observable::spin_z(), skew),
            Err(Error::PointersNotOrthonormal)
        ));
    }

    #[test]
    fn transition_unitary_maps_ready_to_pointer() {
        let a = StateVector::up_z();
        for b in [
            StateVector::down_z(),
            StateVector::up_x(),
            StateVector::qubit(c(0.6), C64::new(0.0, 0.8)),
        ] {
            let w = transition_unitary(a.amplitudes(), b.amplitudes());
            assert!(crate::hilbert::unitarity_defect(&w) < EPS_NUM);
            assert!(apply(&w, &a).unwrap().max_deviation(&b).unwrap() < EPS_NUM);
        }
        let w = transition_unitary(a.amplitudes(), a.amplitudes());
        assert!(max_abs_diff(&w, &identity(2)) < EPS_NUM);
    }

    #[test]
    fn reduction_postulate() {
        let psi = StateVector::real(&[0.6, 0.8]);
        let p = projector_onto(&StateVector::down_z()).unwrap();
        assert_eq!(reduce(&psi, &p).unwrap(), StateVector::down_z());
        let h = FRAC_1_SQRT_2;
        let phi = StateVector::from_slice(CompositeSpace::qubits(2), &[c(h), c(0.0), c(0.0), c(h)])
            .unwrap();
        let p_up = embed(
            &projector_onto(&StateVector::up_z()).unwrap(),
            0,
            phi.space(),
        )
        .unwrap();
        let once = reduce(&phi, &p_up).unwrap();
        assert!((once.amplitudes()[0] - c(1.0)).norm() < EPS_NUM);
        assert_eq!(reduce(&once, &p_up).unwrap(), once);
        assert!(matches!(
            reduce(&StateVector::up_z(), &p),
            Err(Error::ZeroProbability)
        ));
    }

    #[test]
    fn decohered_matrix_limits() {
        let (a, b) = (c(0.6), c(0.8));
        let env = EnvironmentModel::parametric(1.0).unwrap();
        let r0 = decohered_reduced_matrix(a, b, &env, 0.0).unwrap();
        assert!((r0.purity() - 1.0).abs() < EPS_NUM);
        let r1 = decohered_reduced_matrix(a, b, &env, 1.0).unwrap();
        assert!((r1.matrix()[(0, 1)] - c(0.48 * (-1.0f64).exp())).norm() < 1e-15);
        let late = decohered_reduced_matrix(a, b, &env, 100.0).unwrap();
        assert!(late.matrix()[(0, 1)].norm() < 1e-40);
        assert!(matches!(
            decohered_reduced_matrix(c(1.0), c(1.0), &env, 0.0),
            Err(Error::InvalidAmplitudes(_))
        ));
        assert!(EnvironmentModel::parametric(0.0).is_err());
    }

    #[test]
    fn finite_environment_coherence_starts_at_one() {
        let env = EnvironmentModel::finite(8, 3).unwrap();
        assert!((env.coherence(0.0) - c(1.0)).norm() < 1e-12);
        for t in [0.3, 1.0, 7.0] {
            assert!(env.coherence(t).norm() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn pointer_basis_selection() {
        let b = CMatrix::from_row_slice(
            2,
            2,
            &[c(0.3), C64::new(0.1, -0.2), C64::new(0.1, 0.2), c(-0.7)],
        );
        let h = kron(&pauli::z(), &b);
        let picked = pointer_basis(&h, &[Observable::spin_x(), Observable::spin_z()]).unwrap();
        assert_eq!(picked, Observable::spin_z());
        let zero = CMatrix::zeros(4, 4);
        assert_eq!(
            pointer_basis(&zero, &[Observable::spin_x()]).unwrap(),
            Observable::spin_x()
        );
        assert!(matches!(
            pointer_basis(&h, &[Observable::spin_x()]),
            Err(Error::NoPointerBasis)
        ));
    }

    #[test]
    fn ambiguity_for_equal_weights() {
        let h = FRAC_1_SQRT_2;
        let report = basis_ambiguity_check(c(h), c(-h)).unwrap();
        let tilde = report.tilde_rewriting.expect("x-basis rewriting exists");
        assert!(tilde.max_deviation < 1e-12);
        assert!(!report.unique_schmidt_basis);
        // The tilde states are equal-weight superpositions of ⇑ and ⇓.
        for v in [&tilde.up_tilde, &tilde.down_tilde] {
            assert!((v.amplitudes()[0].norm() - h).abs() < 1e-12);
            assert!((v.amplitudes()[1].norm() - h).abs() < 1e-12);
        }
    }

    #[test]
    fn ambiguity_absent_for_unequal_weights() {
        let report = basis_ambiguity_check(c(0.6), c(0.8)).unwrap();
        assert!(!report.x_rewriting.biorthogonal);
        assert!(report.tilde_rewriting.is_none());
        assert!(report.unique_schmidt_basis);
        assert!((report.x_rewriting.overlap - c((0.36 - 0.64) / 2.0)).norm() < EPS_NUM);
        let single = basis_ambiguity_check(c(1.0), c(0.0)).unwrap();
        assert!(single.single_branch);
    }
}
