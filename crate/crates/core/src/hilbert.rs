//! Composite state spaces, state vectors and observables.
//!
//! Basis ordering is lexicographic over factor indices with factor 0 the
//! slowest-varying digit, so `tensor(|+⟩, |−⟩)` is `(0, 1, 0, 0)`.

use std::fmt;

use nalgebra::SymmetricEigen;
use serde::{Deserialize, Serialize};

use crate::{CMatrix, CVector, Error, Result, C64, EPS_NORM, EPS_NUM};

/// Identifier of a conscious observer owning a brain factor.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ObserverId(pub String);

impl ObserverId {
    pub fn new(id: impl Into<String>) -> Self {
        Self(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ObserverId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Physical role of a tensor factor.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Role {
    System,
    Apparatus,
    Environment,
    Brain(ObserverId),
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::System => f.write_str("System"),
            Role::Apparatus => f.write_str("Apparatus"),
            Role::Environment => f.write_str("Environment"),
            Role::Brain(id) => write!(f, "Brain({id})"),
        }
    }
}

/// One tensor factor: a role, an index distinguishing factors of the same
/// role, and the factor dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factor {
    pub role: Role,
    pub index: usize,
    pub dim: usize,
}

impl Factor {
    pub fn new(role: Role, index: usize, dim: usize) -> Self {
        assert!(dim > 0, "factor dimension must be positive");
        Self { role, index, dim }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}:{}", self.role, self.index, self.dim)
    }
}

/// Ordered list of tensor factors. `(role, index)` pairs are unique.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CompositeSpace {
    factors: Vec<Factor>,
}

impl CompositeSpace {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidParameter(
                "space needs at least one factor".into(),
            ));
        }
        for (i, a) in factors.iter().enumerate() {
            if factors[..i]
                .iter()
                .any(|b| b.role == a.role && b.index == a.index)
            {
                return Err(Error::InvalidParameter(format!("duplicate factor {a}")));
            }
        }
        Ok(Self { factors })
    }

    /// A single `System` factor of the given dimension.
    pub fn single(dim: usize) -> Self {
        Self {
            factors: vec![Factor::new(Role::System, 0, dim)],
        }
    }

    /// `n` spin-1/2 systems, indexed `0..n`.
    pub fn qubits(n: usize) -> Self {
        Self {
            factors: (0..n).map(|i| Factor::new(Role::System, i, 2)).collect(),
        }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.dim).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim).product()
    }

    pub fn factor(&self, index: usize) -> Result<&Factor> {
        self.factors.get(index).ok_or(Error::FactorOutOfRange {
            index,
            count: self.factors.len(),
        })
    }

    /// Position of the factor with the given role and index.
    pub fn find(&self, role: &Role, index: usize) -> Option<usize> {
        self.factors
            .iter()
            .position(|f| &f.role == role && f.index == index)
    }

    /// Distance in the flat index between consecutive values of factor `i`.
    pub fn stride(&self, i: usize) -> usize {
        self.factors[i + 1..].iter().map(|f| f.dim).product()
    }

    /// Concatenation of factor lists. Colliding `(role, index)` pairs on the
    /// right-hand side are renumbered to the next free index for their role.
    pub fn concat(&self, other: &CompositeSpace) -> CompositeSpace {
        let mut factors = self.factors.clone();
        for f in &other.factors {
            let mut f = f.clone();
            if factors
                .iter()
                .any(|g| g.role == f.role && g.index == f.index)
            {
                f.index = factors
                    .iter()
                    .filter(|g| g.role == f.role)
                    .map(|g| g.index + 1)
                    .max()
                    .unwrap_or(0);
            }
            factors.push(f);
        }
        CompositeSpace { factors }
    }

    /// Appends a factor, returning its position.
    pub fn push(&mut self, factor: Factor) -> Result<usize> {
        if self.find(&factor.role, factor.index).is_some() {
            return Err(Error::InvalidParameter(format!(
                "duplicate factor {factor}"
            )));
        }
        self.factors.push(factor);
        Ok(self.factors.len() - 1)
    }

    /// The sub-space formed by the listed factors, in the given order.
    pub fn select(&self, keep: &[usize]) -> Result<CompositeSpace> {
        let factors = keep
            .iter()
            .map(|&i| self.factor(i).cloned())
            .collect::<Result<Vec<_>>>()?;
        CompositeSpace::new(factors)
    }
}

impl fmt::Display for CompositeSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" ⊗ ")?;
            }
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}

/// Complex amplitude vector over a composite space.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    space: CompositeSpace,
    amps: CVector,
}

impl StateVector {
    pub fn new(space: CompositeSpace, amps: CVector) -> Result<Self> {
        if amps.len() != space.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: space.total_dim(),
                found: amps.len(),
            });
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { space, amps })
    }

    pub fn from_slice(space: CompositeSpace, amps: &[C64]) -> Result<Self> {
        Self::new(space, CVector::from_column_slice(amps))
    }

    /// A single spin-1/2 system `a|+⟩ + b|−⟩`.
    pub fn qubit(a: C64, b: C64) -> Self {
        Self {
            space: CompositeSpace::single(2),
            amps: CVector::from_column_slice(&[a, b]),
        }
    }

    /// Real-amplitude vector on a single `System` factor.
    pub fn real(amps: &[f64]) -> Self {
        Self {
            space: CompositeSpace::single(amps.len()),
            amps: CVector::from_iterator(amps.len(), amps.iter().map(|&x| C64::new(x, 0.0))),
        }
    }

    /// Computational basis vector `index` of `space`.
    pub fn basis(space: CompositeSpace, index: usize) -> Result<Self> {
        let dim = space.total_dim();
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: index,
            });
        }
        let mut amps = CVector::zeros(dim);
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { space, amps })
    }

    /// `|+⟩_z`
    pub fn up_z() -> Self {
        Self::real(&[1.0, 0.0])
    }

    /// `|−⟩_z`
    pub fn down_z() -> Self {
        Self::real(&[0.0, 1.0])
    }

    /// `|+⟩_x = (|+⟩_z + |−⟩_z)/√2`
    pub fn up_x() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::real(&[h, h])
    }

    /// `|−⟩_x = (|+⟩_z − |−⟩_z)/√2`
    pub fn down_x() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::real(&[h, -h])
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    pub fn into_amplitudes(self) -> CVector {
        self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= EPS_NORM
    }

    pub fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::NotNormalized { norm: self.norm() })
        }
    }

    /// Rescales to unit norm.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n <= f64::EPSILON {
            return Err(Error::ZeroVector);
        }
        Ok(self.scale(C64::new(1.0 / n, 0.0)))
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            space: self.space.clone(),
            amps: &self.amps * c,
        }
    }

    /// Sum of two vectors on the same space.
    pub fn add(&self, other: &StateVector) -> Result<Self> {
        check_same_dim(self, other)?;
        Ok(Self {
            space: self.space.clone(),
            amps: &self.amps + &other.amps,
        })
    }

    /// `Σ cₖ |vₖ⟩` over vectors sharing one space.
    pub fn combine(terms: &[(C64, &StateVector)]) -> Result<Self> {
        let (_, first) = terms
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty linear combination".into()))?;
        let mut amps = CVector::zeros(first.dim());
        for (c, v) in terms {
            check_same_dim(first, v)?;
            amps += &v.amps * *c;
        }
        Ok(Self {
            space: first.space.clone(),
            amps,
        })
    }

    /// Same amplitudes, relabeled onto another space of equal dimension.
    pub fn with_space(&self, space: CompositeSpace) -> Result<Self> {
        Self::new(space, self.amps.clone())
    }

    /// Largest entry-wise modulus of `self − other`.
    pub fn max_deviation(&self, other: &StateVector) -> Result<f64> {
        check_same_dim(self, other)?;
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

fn check_same_dim(a: &StateVector, b: &StateVector) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

/// Tensor product `a ⊗ b`.
pub fn tensor(a: &StateVector, b: &StateVector) -> StateVector {
    let space = a.space.concat(&b.space);
    let (da, db) = (a.dim(), b.dim());
    let mut amps = CVector::zeros(da * db);
    for i in 0..da {
        for j in 0..db {
            amps[i * db + j] = a.amps[i] * b.amps[j];
        }
    }
    StateVector { space, amps }
}

/// Tensor product of a non-empty list of states, left to right.
pub fn tensor_all(states: &[&StateVector]) -> StateVector {
    let mut iter = states.iter();
    let first = (*iter.next().expect("tensor_all needs at least one state")).clone();
    iter.fold(first, |acc, s| tensor(&acc, s))
}

/// `⟨a|b⟩`, antilinear in the first argument.
pub fn inner(a: &StateVector, b: &StateVector) -> Result<C64> {
    check_same_dim(a, b)?;
    Ok(a.amps.dotc(&b.amps))
}

/// Matrix action on a state.
pub fn apply(op: &CMatrix, s: &StateVector) -> Result<StateVector> {
    if op.nrows() != s.dim() || op.ncols() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            found: op.ncols(),
        });
    }
    Ok(StateVector {
        space: s.space.clone(),
        amps: op * &s.amps,
    })
}

/// Applies `op` to factor `factor` of `s`, identity elsewhere.
pub fn apply_local(op: &CMatrix, factor: usize, s: &StateVector) -> Result<StateVector> {
    let amps = apply_local_raw(op, factor, &s.space, &s.amps)?;
    Ok(StateVector {
        space: s.space.clone(),
        amps,
    })
}

pub(crate) fn apply_local_raw(
    op: &CMatrix,
    factor: usize,
    space: &CompositeSpace,
    amps: &CVector,
) -> Result<CVector> {
    let d = space.factor(factor)?.dim;
    if op.nrows() != d || op.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: op.nrows(),
        });
    }
    let stride = space.stride(factor);
    let block = d * stride;
    let mut out = CVector::zeros(amps.len());
    for base in (0..amps.len()).step_by(block) {
        for low in 0..stride {
            let offset = base + low;
            for r in 0..d {
                let mut acc = C64::new(0.0, 0.0);
                for c in 0..d {
                    let m = op[(r, c)];
                    if m != C64::new(0.0, 0.0) {
                        acc += m * amps[offset + c * stride];
                    }
                }
                out[offset + r * stride] = acc;
            }
        }
    }
    Ok(out)
}

/// Spin basis along an axis in the Oxz plane at `angle` from Oz, using the
/// amplitude pattern `|+⟩ = cos θ|+⟩_z + sin θ|−⟩_z`,
/// `|−⟩ ∝ sin θ|+⟩_z − cos θ|−⟩_z`. The overall sign of `|−⟩` is fixed so
/// that its first non-zero amplitude is positive, which reproduces
/// `|+⟩_u = ½|+⟩_z + (√3/2)|−⟩_z`, `|−⟩_u = (√3/2)|+⟩_z − ½|−⟩_z` at π/3 and
/// the mirrored `v` pair at −π/3.
///
/// Note that in this pattern the Bloch-sphere angle of the axis is `2θ`.
pub fn rotated_spin_basis(angle: f64) -> (StateVector, StateVector) {
    let (s, c) = angle.sin_cos();
    let plus = StateVector::real(&[c, s]);
    let (m0, m1) = (s, -c);
    let first = if m0.abs() > EPS_NUM { m0 } else { m1 };
    let sign = if first < 0.0 { -1.0 } else { 1.0 };
    let minus = StateVector::real(&[sign * m0, sign * m1]);
    (plus, minus)
}

/// `|s⟩⟨s|` for a normalized `s`.
pub fn projector_onto(s: &StateVector) -> Result<CMatrix> {
    if s.norm() <= f64::EPSILON {
        return Err(Error::ZeroVector);
    }
    s.require_normalized()?;
    Ok(outer(&s.amps, &s.amps))
}

/// `|a⟩⟨b|`
pub fn outer(a: &CVector, b: &CVector) -> CMatrix {
    a * b.adjoint()
}

/// Kronecker product `a ⊗ b` in the same ordering as [`tensor`].
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// Embeds an operator acting on factor `factor` into the full space.
pub fn embed(op: &CMatrix, factor: usize, space: &CompositeSpace) -> Result<CMatrix> {
    let d = space.factor(factor)?.dim;
    if op.nrows() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: op.nrows(),
        });
    }
    let before: usize = space.factors()[..factor].iter().map(|f| f.dim).product();
    let after = space.stride(factor);
    Ok(kron(&kron(&identity(before), op), &identity(after)))
}

/// Largest entry-wise modulus of `a − b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Largest entry-wise modulus of a matrix.
pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    max_abs_diff(m, &m.adjoint())
}

pub fn unitarity_defect(m: &CMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    max_abs_diff(&(m.adjoint() * m), &identity(m.nrows()))
}

pub fn require_unitary(m: &CMatrix) -> Result<()> {
    let deviation = unitarity_defect(m);
    if deviation > EPS_NUM {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(())
}

/// Hermitian and idempotent within `EPS_NUM`.
pub fn is_projector(p: &CMatrix) -> bool {
    p.is_square() && hermiticity_defect(p) <= EPS_NUM && max_abs_diff(&(p * p), p) <= EPS_NUM
}

/// Whether the vectors are pairwise orthonormal within `EPS_NUM`.
pub fn is_orthonormal(vectors: &[StateVector]) -> bool {
    vectors.iter().enumerate().all(|(i, a)| {
        vectors.iter().enumerate().all(|(j, b)| {
            inner(a, b)
                .map(|z| {
                    let target = if i == j { 1.0 } else { 0.0 };
                    (z - C64::new(target, 0.0)).norm() <= EPS_NUM
                })
                .unwrap_or(false)
        })
    })
}

/// Pauli matrices.
pub mod pauli {
    use crate::{CMatrix, C64};

    fn m(entries: [[C64; 2]; 2]) -> CMatrix {
        CMatrix::from_row_slice(
            2,
            2,
            &[entries[0][0], entries[0][1], entries[1][0], entries[1][1]],
        )
    }

    const O: C64 = C64::new(0.0, 0.0);
    const ONE: C64 = C64::new(1.0, 0.0);
    const I: C64 = C64::new(0.0, 1.0);

    pub fn x() -> CMatrix {
        m([[O, ONE], [ONE, O]])
    }

    pub fn y() -> CMatrix {
        m([[O, -I], [I, O]])
    }

    pub fn z() -> CMatrix {
        m([[ONE, O], [O, -ONE]])
    }

    pub fn id() -> CMatrix {
        m([[ONE, O], [O, ONE]])
    }
}

/// Outcome label of a measurement.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Label(pub String);

impl Label {
    pub fn new(s: impl Into<String>) -> Self {
        Self(s.into())
    }

    pub fn plus() -> Self {
        Self("+".into())
    }

    pub fn minus() -> Self {
        Self("-".into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// One spectral component of an observable.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub value: f64,
    pub label: Label,
    pub projector: CMatrix,
}

/// Hermitian operator with its spectral decomposition. Outcomes are kept in
/// decreasing eigenvalue order.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    matrix: CMatrix,
    outcomes: Vec<Outcome>,
}

impl Observable {
    /// Builds `Σ λₖ Pₖ` from explicit spectral data, checking that the
    /// projectors are orthogonal and resolve the identity.
    pub fn from_spectrum(spectrum: Vec<(f64, CMatrix)>) -> Result<Self> {
        let (_, first) = spectrum
            .first()
            .ok_or_else(|| Error::InvalidSpectrum("empty spectrum".into()))?;
        let dim = first.nrows();
        let mut sum = CMatrix::zeros(dim, dim);
        for (i, (value, p)) in spectrum.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::InvalidSpectrum("non-finite eigenvalue".into()));
            }
            if p.shape() != (dim, dim) {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.nrows(),
                });
            }
            if !is_projector(p) {
                return Err(Error::NotProjector);
            }
            for (value2, q) in &spectrum[..i] {
                if (value - value2).abs() <= EPS_NUM {
                    return Err(Error::InvalidSpectrum("repeated eigenvalue".into()));
                }
                if max_abs(&(p * q)) > EPS_NUM {
                    return Err(Error::InvalidSpectrum("projectors not orthogonal".into()));
                }
            }
            sum += p;
        }
        if max_abs_diff(&sum, &identity(dim)) > EPS_NUM {
            return Err(Error::InvalidSpectrum(
                "projectors do not sum to identity".into(),
            ));
        }
        let mut spectrum = spectrum;
        spectrum.sort_by(|a, b| b.0.total_cmp(&a.0));
        let values: Vec<f64> = spectrum.iter().map(|(v, _)| *v).collect();
        let matrix = spectrum
            .iter()
            .fold(CMatrix::zeros(dim, dim), |acc, (v, p)| {
                acc + p * C64::new(*v, 0.0)
            });
        let outcomes = spectrum
            .into_iter()
            .map(|(value, projector)| Outcome {
                value,
                label: default_label(value, &values),
                projector,
            })
            .collect();
        Ok(Self { matrix, outcomes })
    }

    /// Builds an observable from eigenvalue/eigenvector pairs. Vectors sharing
    /// an eigenvalue are combined into one projector.
    pub fn from_eigenbasis(pairs: &[(f64, StateVector)]) -> Result<Self> {
        let vectors: Vec<StateVector> = pairs.iter().map(|(_, v)| v.clone()).collect();
        if !is_orthonormal(&vectors) {
            return Err(Error::NonOrthonormalBasis);
        }
        let mut spectrum: Vec<(f64, CMatrix)> = Vec::new();
        for (value, v) in pairs {
            let p = projector_onto(v)?;
            match spectrum
                .iter_mut()
                .find(|(w, _)| (w - value).abs() <= EPS_NUM)
            {
                Some((_, q)) => *q += p,
                None => spectrum.push((*value, p)),
            }
        }
        Self::from_spectrum(spectrum)
    }

    /// Diagonalizes a hermitian matrix, clustering eigenvalues closer than
    /// `1e-8` into one outcome.
    pub fn from_hermitian(matrix: &CMatrix) -> Result<Self> {
        let deviation = hermiticity_defect(matrix);
        if deviation > EPS_NUM {
            return Err(Error::NotHermitian { deviation });
        }
        let dim = matrix.nrows();
        let eig = SymmetricEigen::new(matrix.clone());
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let mut spectrum: Vec<(f64, CMatrix, usize)> = Vec::new();
        for k in order {
            let value = eig.eigenvalues[k];
            let v = eig.eigenvectors.column(k).into_owned();
            let p = outer(&v, &v);
            match spectrum.last_mut() {
                Some((w, q, n)) if (*w - value).abs() <= 1e-8 => {
                    *w = (*w * *n as f64 + value) / (*n as f64 + 1.0);
                    *q += p;
                    *n += 1;
                }
                _ => spectrum.push((value, p, 1)),
            }
        }
        Self::from_spectrum(spectrum.into_iter().map(|(v, p, _)| (v, p)).collect())
    }

    /// Replaces the outcome labels, in decreasing eigenvalue order.
    pub fn with_labels(mut self, labels: Vec<Label>) -> Result<Self> {
        if labels.len() != self.outcomes.len() {
            return Err(Error::InvalidSpectrum("label count mismatch".into()));
        }
        for (o, l) in self.outcomes.iter_mut().zip(labels) {
            o.label = l;
        }
        Ok(self)
    }

    /// Spin (in units of ħ/2) along the axis of [`rotated_spin_basis`].
    pub fn spin_along(angle: f64) -> Self {
        let (plus, minus) = rotated_spin_basis(angle);
        Self::from_eigenbasis(&[(1.0, plus), (-1.0, minus)])
            .expect("rotated spin basis is orthonormal")
    }

    pub fn spin_z() -> Self {
        Self::spin_along(0.0)
    }

    pub fn spin_x() -> Self {
        Self::from_eigenbasis(&[(1.0, StateVector::up_x()), (-1.0, StateVector::down_x())])
            .expect("x basis is orthonormal")
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn labels(&self) -> Vec<Label> {
        self.outcomes.iter().map(|o| o.label.clone()).collect()
    }

    pub fn outcome(&self, label: &Label) -> Option<&Outcome> {
        self.outcomes.iter().find(|o| &o.label == label)
    }

    /// `Σ λₖ Pₖ` recomputed from the stored spectrum.
    pub fn spectral_sum(&self) -> CMatrix {
        self.outcomes
            .iter()
            .fold(CMatrix::zeros(self.dim(), self.dim()), |acc, o| {
                acc + &o.projector * C64::new(o.value, 0.0)
            })
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.outcomes.last().map(|o| o.value).unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.outcomes.first().map(|o| o.value).unwrap_or(0.0)
    }
}

fn default_label(value: f64, all: &[f64]) -> Label {
    let signed = all.len() == 2 && all.iter().any(|&v| v > 0.0) && all.iter().any(|&v| v < 0.0);
    if signed {
        if value > 0.0 {
            Label::plus()
        } else {
            Label::minus()
        }
    } else {
        Label(format!("{value}"))
    }
}
