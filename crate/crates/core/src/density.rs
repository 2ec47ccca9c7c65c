//! Density matrices, partial traces and prediction rules.
//!
//! A [`DensityMatrix`] remembers how it was obtained: a pure state, a proper
//! mixture of pure states, or a reduction of a larger state by partial
//! trace. The last kind is an improper mixture: it can have exactly the same
//! entries as a proper mixture while the global state it came from makes
//! different joint predictions (see [`joint_prediction_gap`]).

use nalgebra::SymmetricEigen;
use serde::{Deserialize, Serialize};

use crate::hilbert::{
    hermiticity_defect, inner, is_orthonormal, is_projector, outer, require_unitary,
    CompositeSpace, Observable, StateVector,
};
use crate::{CMatrix, Error, Result, C64, EPS_NUM};

/// Eigenvalue floor used for the positivity check.
pub const PSD_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Pure,
    ProperMixture,
    Reduced,
}

/// Hermitian, trace-one, positive semidefinite matrix over a composite space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    space: CompositeSpace,
    matrix: CMatrix,
    provenance: Provenance,
}

/// Classical ensemble `{(pₖ, |Ψₖ⟩)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureSpec {
    components: Vec<(f64, StateVector)>,
}

impl MixtureSpec {
    pub fn new(components: Vec<(f64, StateVector)>) -> Result<Self> {
        let (_, first) = components
            .first()
            .ok_or_else(|| Error::InvalidWeights("empty mixture".into()))?;
        let dim = first.dim();
        let mut total = 0.0;
        for (p, s) in &components {
            if !p.is_finite() || *p < 0.0 {
                return Err(Error::InvalidWeights(format!("negative weight {p}")));
            }
            if s.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: s.dim(),
                });
            }
            s.require_normalized()?;
            total += p;
        }
        if (total - 1.0).abs() > EPS_NUM {
            return Err(Error::InvalidWeights(format!("weights sum to {total}")));
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[(f64, StateVector)] {
        &self.components
    }

    pub fn space(&self) -> &CompositeSpace {
        self.components[0].1.space()
    }
}

impl DensityMatrix {
    /// Validates hermiticity, unit trace and positivity.
    pub fn new(space: CompositeSpace, matrix: CMatrix, provenance: Provenance) -> Result<Self> {
        let dim = space.total_dim();
        if matrix.shape() != (dim, dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: matrix.nrows(),
            });
        }
        let deviation = hermiticity_defect(&matrix);
        if deviation > EPS_NUM {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = matrix.trace();
        if (trace - C64::new(1.0, 0.0)).norm() > EPS_NUM {
            return Err(Error::InvalidDensity(format!("trace {trace}")));
        }
        let rho = Self {
            space,
            matrix,
            provenance,
        };
        let min = rho.eigenvalues().first().copied().unwrap_or(0.0);
        if min < -PSD_TOLERANCE {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min}")));
        }
        Ok(rho)
    }

    /// `|s⟩⟨s|`
    pub fn from_pure(s: &StateVector) -> Result<Self> {
        s.require_normalized()?;
        Ok(Self {
            space: s.space().clone(),
            matrix: outer(s.amplitudes(), s.amplitudes()),
            provenance: Provenance::Pure,
        })
    }

    /// `Σ pₖ |Ψₖ⟩⟨Ψₖ|`
    pub fn from_mixture(m: &MixtureSpec) -> Self {
        let dim = m.space().total_dim();
        let matrix = m
            .components
            .iter()
            .fold(CMatrix::zeros(dim, dim), |acc, (p, s)| {
                acc + outer(s.amplitudes(), s.amplitudes()) * C64::new(*p, 0.0)
            });
        Self {
            space: m.space().clone(),
            matrix,
            provenance: Provenance::ProperMixture,
        }
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Eigenvalues in increasing order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut values: Vec<f64> = SymmetricEigen::new(self.matrix.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        values.sort_by(f64::total_cmp);
        values
    }

    /// Reduced state on the factors in `keep` (any order; the result keeps
    /// the original factor order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let (kept_space, split) = split_indices(&self.space, keep)?;
        let kept_dim = kept_space.total_dim();
        let traced_dim = self.dim() / kept_dim;
        let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::new(); traced_dim];
        for (flat, &(k, t)) in split.iter().enumerate() {
            groups[t].push((flat, k));
        }
        let mut out = CMatrix::zeros(kept_dim, kept_dim);
        for group in &groups {
            for &(a, ka) in group {
                for &(b, kb) in group {
                    out[(ka, kb)] += self.matrix[(a, b)];
                }
            }
        }
        Ok(Self {
            space: kept_space,
            matrix: out,
            provenance: Provenance::Reduced,
        })
    }

    /// Reduced state of the pure state `s` on the factors in `keep`, computed
    /// as `M M†` with `M` the kept × traced reshaping of `s`. Equal to
    /// `from_pure(s)?.partial_trace(keep)` without forming the full matrix.
    pub fn reduced_from_pure(s: &StateVector, keep: &[usize]) -> Result<Self> {
        s.require_normalized()?;
        let (kept_space, split) = split_indices(s.space(), keep)?;
        let kept_dim = kept_space.total_dim();
        let mut m = CMatrix::zeros(kept_dim, s.dim() / kept_dim);
        for (amp, &(k, t)) in s.amplitudes().iter().zip(&split) {
            m[(k, t)] = *amp;
        }
        Ok(Self {
            space: kept_space,
            matrix: &m * m.adjoint(),
            provenance: Provenance::Reduced,
        })
    }

    /// `Tr(ρA)`
    pub fn expectation(&self, observable: &Observable) -> Result<f64> {
        self.check_dim(observable.dim())?;
        Ok((&self.matrix * observable.matrix()).trace().re)
    }

    /// `Tr(ρP)`, clamped to `[0, 1]`.
    pub fn outcome_probability(&self, projector: &CMatrix) -> Result<f64> {
        self.check_dim(projector.nrows())?;
        if !is_projector(projector) {
            return Err(Error::NotProjector);
        }
        Ok((&self.matrix * projector).trace().re.clamp(0.0, 1.0))
    }

    /// `Tr(ρ²)`
    pub fn purity(&self) -> f64 {
        // Tr(ρ²) = Σ |ρᵢⱼ|² for hermitian ρ.
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `Σ_{i≠j} |⟨bᵢ|ρ|bⱼ⟩|` in an orthonormal basis spanning the space.
    pub fn off_diagonal_weight(&self, basis: &[StateVector]) -> Result<f64> {
        if basis.len() != self.dim() {
            return Err(Error::NonOrthonormalBasis);
        }
        for b in basis {
            self.check_dim(b.dim())?;
        }
        if !is_orthonormal(basis) {
            return Err(Error::NonOrthonormalBasis);
        }
        let images: Vec<StateVector> = basis
            .iter()
            .map(|b| crate::hilbert::apply(&self.matrix, b))
            .collect::<Result<_>>()?;
        let mut total = 0.0;
        for (i, bi) in basis.iter().enumerate() {
            for (j, image) in images.iter().enumerate() {
                if i != j {
                    total += inner(bi, image)?.norm();
                }
            }
        }
        Ok(total)
    }

    /// `UρU†`
    pub fn evolve(&self, unitary: &CMatrix) -> Result<Self> {
        self.check_dim(unitary.nrows())?;
        require_unitary(unitary)?;
        Ok(Self {
            space: self.space.clone(),
            matrix: unitary * &self.matrix * unitary.adjoint(),
            provenance: self.provenance,
        })
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found,
            });
        }
        Ok(())
    }
}

/// Joint-outcome probabilities `(Tr[ρ_global·P], Tr[ρ_mixture·P])`. Unequal
/// values show that the mixture is not equivalent to the global state.
pub fn joint_prediction_gap(
    global: &DensityMatrix,
    mixture: &MixtureSpec,
    joint: &CMatrix,
) -> Result<(f64, f64)> {
    let mixed = DensityMatrix::from_mixture(mixture);
    if mixed.dim() != global.dim() {
        return Err(Error::DimensionMismatch {
            expected: global.dim(),
            found: mixed.dim(),
        });
    }
    Ok((
        global.outcome_probability(joint)?,
        mixed.outcome_probability(joint)?,
    ))
}

/// Kept space and, for every flat index of `space`, its (kept, traced)
/// index pair.
fn split_indices(
    space: &CompositeSpace,
    keep: &[usize],
) -> Result<(CompositeSpace, Vec<(usize, usize)>)> {
    if keep.is_empty() {
        return Err(Error::EmptyKeep);
    }
    let count = space.factor_count();
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if let Some(&index) = keep.iter().find(|&&i| i >= count) {
        return Err(Error::FactorOutOfRange { index, count });
    }
    let dims = space.dims();
    let kept_space = space.select(&keep)?;
    let mut digits = vec![0; count];
    let split = (0..space.total_dim())
        .map(|flat| {
            let mut rem = flat;
            for f in (0..count).rev() {
                digits[f] = rem % dims[f];
                rem /= dims[f];
            }
            let (mut k, mut t) = (0, 0);
            for (f, &d) in digits.iter().enumerate() {
                if keep.binary_search(&f).is_ok() {
                    k = k * dims[f] + d;
                } else {
                    t = t * dims[f] + d;
                }
            }
            (k, t)
        })
        .collect();
    Ok((kept_space, split))
}
