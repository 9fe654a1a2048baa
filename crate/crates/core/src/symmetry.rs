//! Hermitian intertwiners and antilinear symmetries.
//!
//! An antilinear operator is stored as the matrix `A` of its action
//! `v -> A conj(v)`. The dyad `|psi> K <phi|` therefore contributes
//! `psi phi^T` (plain transpose) to `A`, two antilinear operators compose to
//! the linear matrix `A conj(B)`, and `[H, T] = 0` reads
//! `H A = A conj(H)`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::matrix::{check_vector, ComplexMatrix, C64};
use crate::spectral::{
    biorthonormal_system_with, classify_spectrum, is_real, BiorthonormalSystem, SpectralConfig,
    SpectrumClassification,
};

/// Antilinear map `v -> A conj(v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntilinearOperator {
    a: ComplexMatrix,
}

impl AntilinearOperator {
    pub fn new(a: ComplexMatrix) -> Self {
        Self { a }
    }

    /// Complex conjugation `K` itself.
    pub fn conjugation(dim: usize) -> Self {
        Self::new(ComplexMatrix::identity(dim))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn apply(&self, v: &DVector<C64>) -> Result<DVector<C64>> {
        check_vector(v, self.dim())?;
        Ok(self.a.as_matrix() * v.conjugate())
    }

    /// The linear operator `self . other`, i.e. `A conj(B)`.
    pub fn compose(&self, other: &Self) -> Result<ComplexMatrix> {
        if other.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        ComplexMatrix::new(self.a.as_matrix() * other.a.as_matrix().conjugate())
    }

    /// `A conj(A)`.
    pub fn square(&self) -> ComplexMatrix {
        self.compose(self).expect("same dimension")
    }

    /// `||A conj(A) + 1||_F`.
    pub fn square_residual(&self) -> f64 {
        let n = self.dim();
        (self.square().as_matrix() + DMatrix::<C64>::identity(n, n)).norm()
    }

    /// The operator in the basis change `H -> S H S^-1`: `S A conj(S)^-1`.
    pub fn similarity(&self, s: &ComplexMatrix) -> Result<Self> {
        if s.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: s.dim(),
            });
        }
        let inv =
            s.as_matrix()
                .conjugate()
                .try_inverse()
                .ok_or_else(|| Error::NotDiagonalizable {
                    reason: "similarity transform is singular".into(),
                })?;
        Ok(Self::new(ComplexMatrix::new(
            s.as_matrix() * self.a.as_matrix() * inv,
        )?))
    }
}

pub fn apply_antilinear(t: &AntilinearOperator, v: &DVector<C64>) -> Result<DVector<C64>> {
    t.apply(v)
}

/// `||H A - A conj(H)||_F / max(1, ||H||_F)`.
pub fn commutator_residual(h: &ComplexMatrix, t: &AntilinearOperator) -> Result<f64> {
    if h.dim() != t.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            actual: t.dim(),
        });
    }
    let hm = h.as_matrix();
    let a = t.matrix().as_matrix();
    Ok((hm * a - a * hm.conjugate()).norm() / h.frobenius_norm().max(1.0))
}

/// Hermitian, invertible `eta` with `eta H eta^-1 = H^dagger`.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaOperator {
    eta: ComplexMatrix,
}

impl EtaOperator {
    /// Accepts `eta` when `||eta - eta^dagger||_F <= 1e-10 ||eta||_F`.
    pub fn new(eta: ComplexMatrix) -> Result<Self> {
        let skew = (eta.as_matrix() - eta.as_matrix().adjoint()).norm();
        if skew > 1e-10 * eta.frobenius_norm() {
            return Err(Error::NotHermitian(skew));
        }
        Ok(Self { eta })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.eta
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.eta
    }
}

/// Gathers the columns of every group listed in `sources`.
fn columns(system: &BiorthonormalSystem, sources: &[usize]) -> Result<Vec<usize>> {
    let groups = system.groups();
    let mut cols = Vec::new();
    for &s in sources {
        let g = groups.get(s).ok_or(Error::DimensionMismatch {
            expected: groups.len(),
            actual: s + 1,
        })?;
        cols.extend(g.columns());
    }
    Ok(cols)
}

fn check_classification(
    system: &BiorthonormalSystem,
    classification: &SpectrumClassification,
) -> Result<()> {
    let total = classification.total_multiplicity();
    if total != system.dim() {
        return Err(Error::DimensionMismatch {
            expected: system.dim(),
            actual: total,
        });
    }
    Ok(())
}

fn pair_columns(
    system: &BiorthonormalSystem,
    plus_sources: &[usize],
    minus_sources: &[usize],
) -> Result<(Vec<usize>, Vec<usize>)> {
    let plus = columns(system, plus_sources)?;
    let minus = columns(system, minus_sources)?;
    if plus.len() != minus.len() {
        return Err(Error::NotPseudohermitianSpectrum {
            reason: format!(
                "conjugate pair multiplicities {} and {} differ",
                plus.len(),
                minus.len()
            ),
        });
    }
    Ok((plus, minus))
}

/// `eta = sum_{n0,a} |phi><phi| + sum_{pairs,a} (|phi_+><phi_-| + |phi_-><phi_+|)`.
pub fn construct_eta(
    system: &BiorthonormalSystem,
    classification: &SpectrumClassification,
) -> Result<EtaOperator> {
    check_classification(system, classification)?;
    let n = system.dim();
    let phi = system.phi();
    let mut eta = DMatrix::<C64>::zeros(n, n);
    for group in &classification.real_groups {
        for k in columns(system, &group.sources)? {
            let f = phi.column(k);
            eta += f * f.adjoint();
        }
    }
    for pair in &classification.conjugate_pairs {
        let (plus, minus) = pair_columns(system, &pair.plus_sources, &pair.minus_sources)?;
        for (&p, &m) in plus.iter().zip(&minus) {
            let cross = phi.column(p) * phi.column(m).adjoint();
            eta += &cross + cross.adjoint();
        }
    }
    // exact Hermitian part; rounding above is already symmetric up to ulps
    let eta = (&eta + eta.adjoint()) * C64::new(0.5, 0.0);
    EtaOperator::new(ComplexMatrix::new(eta)?)
}

/// `||eta H eta^-1 - H^dagger||_F / max(1, ||H||_F)`.
pub fn verify_pseudohermitian(h: &ComplexMatrix, eta: &EtaOperator) -> Result<f64> {
    let e = eta.matrix();
    if e.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            actual: e.dim(),
        });
    }
    if crate::spectral::condition_number(e.as_matrix()) > 1.0 / f64::EPSILON {
        return Err(Error::SingularEta);
    }
    let inv = e
        .as_matrix()
        .clone()
        .try_inverse()
        .ok_or(Error::SingularEta)?;
    let hm = h.as_matrix();
    Ok((e.as_matrix() * hm * inv - hm.adjoint()).norm() / h.frobenius_norm().max(1.0))
}

/// The antilinear symmetry with `T^2 = -1` built from the biorthonormal
/// system: real groups are split in halves `a` / `a + d/2` in column order,
/// conjugate pairs are swapped with a relative sign.
pub fn construct_t(
    system: &BiorthonormalSystem,
    classification: &SpectrumClassification,
) -> Result<AntilinearOperator> {
    check_classification(system, classification)?;
    let odd = classification.odd_real_groups();
    if !odd.is_empty() {
        return Err(Error::OddDegeneracy(odd));
    }
    let n = system.dim();
    let psi = system.psi();
    let phi = system.phi();
    let mut a = DMatrix::<C64>::zeros(n, n);
    let dyad = |a: &mut DMatrix<C64>, sign: f64, ket: usize, bra: usize| {
        let term = psi.column(ket) * phi.column(bra).transpose();
        *a += term * C64::new(sign, 0.0);
    };
    for group in &classification.real_groups {
        let cols = columns(system, &group.sources)?;
        let half = cols.len() / 2;
        for k in 0..half {
            dyad(&mut a, 1.0, cols[k], cols[k + half]);
            dyad(&mut a, -1.0, cols[k + half], cols[k]);
        }
    }
    for pair in &classification.conjugate_pairs {
        let (plus, minus) = pair_columns(system, &pair.plus_sources, &pair.minus_sources)?;
        for (&p, &m) in plus.iter().zip(&minus) {
            dyad(&mut a, 1.0, m, p);
            dyad(&mut a, -1.0, p, m);
        }
    }
    Ok(AntilinearOperator::new(ComplexMatrix::new(a)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessResiduals {
    /// [`commutator_residual`] of the witness.
    pub commutator: f64,
    /// `||A conj(A) + 1||_F`.
    pub square: f64,
}

/// Outcome of testing `H` for an antilinear symmetry with `T^2 = -1`.
#[derive(Debug, Clone, PartialEq)]
pub struct KramersReport {
    pub pseudohermitian: bool,
    /// Real eigenvalues with their degeneracies.
    pub real_degeneracies: Vec<(f64, usize)>,
    pub all_even: bool,
    pub witness: Option<AntilinearOperator>,
    pub residuals: Option<WitnessResiduals>,
    /// Classification, when the spectrum is pseudohermitian.
    pub classification: Option<SpectrumClassification>,
}

impl KramersReport {
    pub fn has_symmetry(&self) -> bool {
        self.witness.is_some()
    }
}

pub fn kramers_test(h: &ComplexMatrix, tol: f64) -> Result<KramersReport> {
    kramers_test_with(h, &SpectralConfig::with_tol(tol))
}

pub fn kramers_test_with(h: &ComplexMatrix, cfg: &SpectralConfig) -> Result<KramersReport> {
    let system = biorthonormal_system_with(h, cfg)?;
    kramers_test_system(h, &system, cfg.tol)
}

/// Runs the test on an already diagonalized `h`.
pub fn kramers_test_system(
    h: &ComplexMatrix,
    system: &BiorthonormalSystem,
    tol: f64,
) -> Result<KramersReport> {
    match classify_spectrum(&system.eigenvalues(), tol) {
        Ok(classification) => {
            let real_degeneracies: Vec<(f64, usize)> = classification
                .real_groups
                .iter()
                .map(|g| (g.value, g.multiplicity))
                .collect();
            let all_even = classification.all_real_even();
            let (witness, residuals) = if all_even {
                let t = construct_t(system, &classification)?;
                let residuals = WitnessResiduals {
                    commutator: commutator_residual(h, &t)?,
                    square: t.square_residual(),
                };
                if !(residuals.commutator <= tol && residuals.square <= tol * h.dim() as f64) {
                    return Err(Error::WitnessVerification {
                        commutator: residuals.commutator,
                        square: residuals.square,
                    });
                }
                (Some(t), Some(residuals))
            } else {
                (None, None)
            };
            Ok(KramersReport {
                pseudohermitian: true,
                real_degeneracies,
                all_even,
                witness,
                residuals,
                classification: Some(classification),
            })
        }
        Err(Error::NotPseudohermitianSpectrum { .. }) => {
            let real_degeneracies: Vec<(f64, usize)> = system
                .eigenvalues()
                .into_iter()
                .filter(|&(e, _)| is_real(e, tol))
                .map(|(e, d)| (e.re, d))
                .collect();
            let all_even = real_degeneracies.iter().all(|&(_, d)| d % 2 == 0);
            Ok(KramersReport {
                pseudohermitian: false,
                real_degeneracies,
                all_even,
                witness: None,
                residuals: None,
                classification: None,
            })
        }
        Err(e) => Err(e),
    }
}
