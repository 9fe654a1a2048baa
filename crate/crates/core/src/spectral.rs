//! Eigendecomposition, biorthonormal eigensystems and spectrum classification.
//!
//! A diagonalizable `H` has right eigenvectors `psi_{n,a}` (columns of `V`)
//! and a dual family `phi_{n,a}` (columns of `(V^-1)^dagger`) such that
//! `<phi_{m,b}|psi_{n,a}> = delta_mn delta_ab` and
//! `sum |psi><phi| = 1`. Eigenvalues are grouped into degenerate clusters
//! `E_n` with multiplicity `d_n`; `a` runs over `0..d_n` inside a group.

use nalgebra::{DMatrix, DVector, Schur, SVD};

use crate::error::{check_tol, Error, Result};
use crate::matrix::{ComplexMatrix, C64};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_COND_CEILING: f64 = 1e12;

/// Numerical knobs shared by the whole pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralConfig {
    /// Relative tolerance for clustering, realness and pairing.
    pub tol: f64,
    /// Largest admissible condition number of the eigenvector matrix.
    pub cond_ceiling: f64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            cond_ceiling: DEFAULT_COND_CEILING,
        }
    }
}

impl SpectralConfig {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

/// A cluster of numerically coincident eigenvalues occupying the columns
/// `start..start + multiplicity` of the eigenvector matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenGroup {
    pub value: C64,
    pub start: usize,
    pub multiplicity: usize,
}

impl EigenGroup {
    pub fn columns(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.multiplicity
    }
}

#[derive(Debug, Clone)]
pub struct Diagonalization {
    /// Eigenvalue of each column of `vectors`.
    pub eigenvalues: Vec<C64>,
    /// Unit-norm right eigenvectors, grouped by cluster.
    pub vectors: DMatrix<C64>,
    pub groups: Vec<EigenGroup>,
    /// 2-norm condition number of `vectors`.
    pub condition_number: f64,
}

/// Diagonalizes `h` with the default condition-number ceiling.
pub fn diagonalize(h: &ComplexMatrix, tol: f64) -> Result<Diagonalization> {
    diagonalize_with(h, &SpectralConfig::with_tol(tol))
}

pub fn diagonalize_with(h: &ComplexMatrix, cfg: &SpectralConfig) -> Result<Diagonalization> {
    check_tol(cfg.tol)?;
    let n = h.dim();
    let m = h.as_matrix();
    let h_norm = h.frobenius_norm();

    let raw = schur_eigenvalues(m)?;
    let radius = raw.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let clusters = cluster(&raw, cfg.tol * radius.max(1.0));

    let mut vectors = DMatrix::<C64>::zeros(n, n);
    let mut groups = Vec::with_capacity(clusters.len());
    let mut col = 0;
    for members in &clusters {
        let d = members.len();
        let mean = members.iter().map(|&k| raw[k]).sum::<C64>() / d as f64;
        let basis = null_space(m, mean, d)?;
        vectors.columns_mut(col, d).copy_from(&basis);
        groups.push(EigenGroup {
            value: mean,
            start: col,
            multiplicity: d,
        });
        col += d;
    }

    let condition_number = condition_number(&vectors);
    if !(condition_number <= cfg.cond_ceiling) {
        return Err(Error::NotDiagonalizable {
            reason: format!(
                "eigenvector condition number {condition_number:e} exceeds ceiling {:e}",
                cfg.cond_ceiling
            ),
        });
    }

    // Refine each group value with the biorthogonal Rayleigh quotient.
    let inv = vectors
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::NotDiagonalizable {
            reason: "eigenvector matrix is singular".into(),
        })?;
    let projected = &inv * m * &vectors;
    for g in &mut groups {
        let trace: C64 = g.columns().map(|k| projected[(k, k)]).sum();
        g.value = trace / g.multiplicity as f64;
    }

    let mut eigenvalues = vec![C64::new(0.0, 0.0); n];
    let bound = cfg.tol * h_norm;
    for g in &groups {
        for k in g.columns() {
            eigenvalues[k] = g.value;
            let v = vectors.column(k);
            let residual = (m * v - v * g.value).norm();
            if residual > bound {
                return Err(Error::NotDiagonalizable {
                    reason: format!(
                        "eigenvalue {} has residual {residual:e} > {bound:e}; \
                         its eigenspace is deficient",
                        g.value
                    ),
                });
            }
        }
    }

    Ok(Diagonalization {
        eigenvalues,
        vectors,
        groups,
        condition_number,
    })
}

fn schur_eigenvalues(m: &DMatrix<C64>) -> Result<Vec<C64>> {
    let n = m.nrows();
    if n == 1 {
        return Ok(vec![m[(0, 0)]]);
    }
    // Deflation can stall at machine precision on clustered spectra.
    for eps in [1.0, 4.0, 16.0, 64.0] {
        if let Some(schur) = Schur::try_new(m.clone(), eps * f64::EPSILON, 1_000 * n) {
            let (_, t) = schur.unpack();
            return Ok((0..n).map(|k| t[(k, k)]).collect());
        }
    }
    Err(Error::NoConvergence)
}

/// Greedy clustering over `(Re, Im)` order: each value joins the first
/// cluster whose seed lies within `radius`.
fn cluster(values: &[C64], radius: f64) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        let (x, y) = (values[a], values[b]);
        x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im))
    });
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for k in order {
        match clusters
            .iter_mut()
            .find(|c| (values[c[0]] - values[k]).norm() <= radius)
        {
            Some(c) => c.push(k),
            None => clusters.push(vec![k]),
        }
    }
    clusters
}

/// The `d` right singular vectors of `m - shift*I` with the smallest
/// singular values.
fn null_space(m: &DMatrix<C64>, shift: C64, d: usize) -> Result<DMatrix<C64>> {
    let n = m.nrows();
    let shifted = m - DMatrix::<C64>::identity(n, n) * shift;
    let svd = SVD::try_new(shifted, false, true, f64::EPSILON, 0).ok_or(Error::NoConvergence)?;
    let v_t = svd.v_t.ok_or(Error::NoConvergence)?;
    // try_new sorts singular values in descending order.
    let mut basis = v_t.rows(n - d, d).adjoint();
    if d == 1 {
        fix_phase(basis.column_mut(0));
    }
    Ok(basis)
}

/// Rotates a unit vector so that its largest component is real positive.
fn fix_phase(mut v: nalgebra::DVectorViewMut<'_, C64>) {
    let pivot = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or(C64::new(1.0, 0.0));
    if pivot.norm() > 0.0 {
        let phase = pivot.conj() / pivot.norm();
        v *= phase;
    }
}

pub(crate) fn condition_number(m: &DMatrix<C64>) -> f64 {
    let sv = m.singular_values();
    let max = sv.max();
    let min = sv.min();
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Paired right/left eigenvector families of a diagonalizable operator.
#[derive(Debug, Clone, PartialEq)]
pub struct BiorthonormalSystem {
    groups: Vec<EigenGroup>,
    psi: DMatrix<C64>,
    phi: DMatrix<C64>,
}

impl BiorthonormalSystem {
    /// Assembles a system from grouped eigenvalues `(E_n, d_n)` and the
    /// matching column families. Only shapes are validated here; see
    /// [`BiorthonormalSystem::residuals`] for the numerical invariants.
    pub fn new(eigenvalues: &[(C64, usize)], psi: DMatrix<C64>, phi: DMatrix<C64>) -> Result<Self> {
        let n = psi.nrows();
        if psi.ncols() != n {
            return Err(Error::NotSquare {
                rows: n,
                cols: psi.ncols(),
            });
        }
        if phi.shape() != psi.shape() {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: phi.nrows().max(phi.ncols()),
            });
        }
        let total: usize = eigenvalues.iter().map(|&(_, d)| d).sum();
        if total != n || eigenvalues.iter().any(|&(_, d)| d == 0) {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: total,
            });
        }
        let mut start = 0;
        let groups = eigenvalues
            .iter()
            .map(|&(value, multiplicity)| {
                let g = EigenGroup {
                    value,
                    start,
                    multiplicity,
                };
                start += multiplicity;
                g
            })
            .collect();
        Ok(Self { groups, psi, phi })
    }

    pub fn dim(&self) -> usize {
        self.psi.nrows()
    }

    pub fn groups(&self) -> &[EigenGroup] {
        &self.groups
    }

    /// `(E_n, d_n)` for every group, in column order.
    pub fn eigenvalues(&self) -> Vec<(C64, usize)> {
        self.groups
            .iter()
            .map(|g| (g.value, g.multiplicity))
            .collect()
    }

    /// Right eigenvectors as columns.
    pub fn psi(&self) -> &DMatrix<C64> {
        &self.psi
    }

    /// Left-system vectors (eigenvectors of `H^dagger`) as columns.
    pub fn phi(&self) -> &DMatrix<C64> {
        &self.phi
    }

    /// Column holding label `(n, a)`.
    pub fn column(&self, n: usize, a: usize) -> usize {
        let g = &self.groups[n];
        assert!(a < g.multiplicity, "degeneracy label out of range");
        g.start + a
    }

    pub fn psi_vector(&self, n: usize, a: usize) -> DVector<C64> {
        self.psi.column(self.column(n, a)).into_owned()
    }

    pub fn phi_vector(&self, n: usize, a: usize) -> DVector<C64> {
        self.phi.column(self.column(n, a)).into_owned()
    }

    /// All `(n, a)` labels in column order.
    pub fn labels(&self) -> Vec<(usize, usize)> {
        self.groups
            .iter()
            .enumerate()
            .flat_map(|(n, g)| (0..g.multiplicity).map(move |a| (n, a)))
            .collect()
    }

    /// Eigenvalue attached to each column.
    pub fn column_eigenvalues(&self) -> Vec<C64> {
        self.groups
            .iter()
            .flat_map(|g| std::iter::repeat_n(g.value, g.multiplicity))
            .collect()
    }

    /// `sum_n sum_a |psi_{n,a}> f(E_n) <phi_{n,a}|`.
    pub fn spectral_function(&self, f: impl Fn(C64) -> C64) -> DMatrix<C64> {
        let mut scaled = self.psi.clone();
        for g in &self.groups {
            let w = f(g.value);
            for k in g.columns() {
                let mut c = scaled.column_mut(k);
                c *= w;
            }
        }
        scaled * self.phi.adjoint()
    }

    /// Measures the eigen-equations, biorthonormality and completeness
    /// against `h`.
    pub fn residuals(&self, h: &ComplexMatrix) -> SystemResiduals {
        let m = h.as_matrix();
        let n = self.dim();
        let mut right: f64 = 0.0;
        let mut left: f64 = 0.0;
        for g in &self.groups {
            for k in g.columns() {
                let p = self.psi.column(k);
                let q = self.phi.column(k);
                right = right.max((m * p - p * g.value).norm());
                left = left.max((m.adjoint() * q - q * g.value.conj()).norm());
            }
        }
        let gram = self.phi.adjoint() * &self.psi;
        let identity = DMatrix::<C64>::identity(n, n);
        let biorthonormality = crate::matrix::max_abs_diff(&gram, &identity);
        let completeness = (&self.psi * self.phi.adjoint() - identity).norm();
        SystemResiduals {
            right_eigen: right,
            left_eigen: left,
            biorthonormality,
            completeness,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemResiduals {
    /// `max ||H psi - E psi||`.
    pub right_eigen: f64,
    /// `max ||H^dagger phi - E* phi||`.
    pub left_eigen: f64,
    /// `max |<phi_m|psi_n> - delta_mn|`.
    pub biorthonormality: f64,
    /// `||sum |psi><phi| - 1||_F`.
    pub completeness: f64,
}

/// Builds the biorthonormal eigensystem of `h`; the `phi` family is
/// `(V^-1)^dagger`.
pub fn biorthonormal_system(h: &ComplexMatrix, tol: f64) -> Result<BiorthonormalSystem> {
    biorthonormal_system_with(h, &SpectralConfig::with_tol(tol))
}

pub fn biorthonormal_system_with(
    h: &ComplexMatrix,
    cfg: &SpectralConfig,
) -> Result<BiorthonormalSystem> {
    let diag = diagonalize_with(h, cfg)?;
    system_from_diagonalization(diag)
}

pub fn system_from_diagonalization(diag: Diagonalization) -> Result<BiorthonormalSystem> {
    let inv = diag
        .vectors
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::NotDiagonalizable {
            reason: "eigenvector matrix is singular".into(),
        })?;
    Ok(BiorthonormalSystem {
        groups: diag.groups,
        psi: diag.vectors,
        phi: inv.adjoint(),
    })
}

/// `sum_n sum_a |psi_{n,a}> E_n <phi_{n,a}|`.
pub fn reconstruct(system: &BiorthonormalSystem) -> ComplexMatrix {
    ComplexMatrix::new(system.spectral_function(|e| e))
        .expect("reconstruction of a finite system is finite and square")
}

/// A real eigenvalue `E_{n0}` with degeneracy `d_{n0}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealGroup {
    pub value: f64,
    pub multiplicity: usize,
    /// Indices into the classified eigenvalue list.
    pub sources: Vec<usize>,
}

/// `E_{n+}` (positive imaginary part) and `E_{n-} = E_{n+}*` sharing one
/// multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugatePair {
    pub plus: C64,
    pub minus: C64,
    pub multiplicity: usize,
    pub plus_sources: Vec<usize>,
    pub minus_sources: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumClassification {
    pub real_groups: Vec<RealGroup>,
    pub conjugate_pairs: Vec<ConjugatePair>,
    pub tolerance_used: f64,
}

impl SpectrumClassification {
    pub fn total_multiplicity(&self) -> usize {
        self.real_groups
            .iter()
            .map(|g| g.multiplicity)
            .sum::<usize>()
            + 2 * self
                .conjugate_pairs
                .iter()
                .map(|p| p.multiplicity)
                .sum::<usize>()
    }

    /// Real groups whose degeneracy is odd.
    pub fn odd_real_groups(&self) -> Vec<(f64, usize)> {
        self.real_groups
            .iter()
            .filter(|g| g.multiplicity % 2 == 1)
            .map(|g| (g.value, g.multiplicity))
            .collect()
    }

    pub fn all_real_even(&self) -> bool {
        self.real_groups.iter().all(|g| g.multiplicity % 2 == 0)
    }
}

/// `|Im E| <= tol * max(1, |E|)`.
pub fn is_real(e: C64, tol: f64) -> bool {
    e.im.abs() <= tol * e.norm().max(1.0)
}

struct Class {
    value: C64,
    multiplicity: usize,
    sources: Vec<usize>,
}

/// Partitions `(E, d)` entries into real groups and conjugate pairs.
///
/// Entries within `tol * max(1, |E|)` of each other are merged first, so a
/// list with repeated values is accepted. Fails with
/// [`Error::NotPseudohermitianSpectrum`] when a complex value has no
/// conjugate partner or the partner's multiplicity differs.
pub fn classify_spectrum(eigenvalues: &[(C64, usize)], tol: f64) -> Result<SpectrumClassification> {
    check_tol(tol)?;
    let near = |a: C64, b: C64| (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0);

    let mut classes: Vec<Class> = Vec::new();
    for (k, &(e, d)) in eigenvalues.iter().enumerate() {
        if !(e.re.is_finite() && e.im.is_finite()) {
            return Err(Error::NonFinite { row: k, col: 0 });
        }
        match classes.iter_mut().find(|c| near(c.value, e)) {
            Some(c) => {
                c.multiplicity += d;
                c.sources.push(k);
            }
            None => classes.push(Class {
                value: e,
                multiplicity: d,
                sources: vec![k],
            }),
        }
    }

    let mut real_groups = Vec::new();
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for c in classes {
        if is_real(c.value, tol) {
            real_groups.push(RealGroup {
                value: c.value.re,
                multiplicity: c.multiplicity,
                sources: c.sources,
            });
        } else if c.value.im > 0.0 {
            plus.push(c);
        } else {
            minus.push(c);
        }
    }

    let mut conjugate_pairs = Vec::new();
    for p in plus {
        let Some(pos) = minus.iter().position(|m| near(m.value, p.value.conj())) else {
            return Err(Error::NotPseudohermitianSpectrum {
                reason: format!("{} has no complex-conjugate partner", p.value),
            });
        };
        let m = minus.remove(pos);
        if m.multiplicity != p.multiplicity {
            return Err(Error::NotPseudohermitianSpectrum {
                reason: format!(
                    "{} has multiplicity {} but its conjugate {} has multiplicity {}",
                    p.value, p.multiplicity, m.value, m.multiplicity
                ),
            });
        }
        conjugate_pairs.push(ConjugatePair {
            plus: p.value,
            minus: m.value,
            multiplicity: p.multiplicity,
            plus_sources: p.sources,
            minus_sources: m.sources,
        });
    }
    if let Some(m) = minus.first() {
        return Err(Error::NotPseudohermitianSpectrum {
            reason: format!("{} has no complex-conjugate partner", m.value),
        });
    }

    Ok(SpectrumClassification {
        real_groups,
        conjugate_pairs,
        tolerance_used: tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn p1_heff() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[&[c(1.0, 0.0), c(0.0, 0.4)], &[c(0.0, -0.15), c(1.0, 0.0)]])
            .unwrap()
    }

    #[test]
    fn diagonal_matrix_gives_identity_columns() {
        let h = ComplexMatrix::real_diagonal(&[3.0, 1.0, 2.0]).unwrap();
        let d = diagonalize(&h, DEFAULT_TOL).unwrap();
        let values: Vec<f64> = d.groups.iter().map(|g| g.value.re).collect();
        assert_eq!(values, vec![1.0, 2.0, 3.0]);
        // each column is a standard basis vector
        for k in 0..3 {
            let col = d.vectors.column(k);
            let ones = col
                .iter()
                .filter(|z| (z.norm() - 1.0).abs() < 1e-14)
                .count();
            let zeros = col.iter().filter(|z| z.norm() < 1e-14).count();
            assert_eq!((ones, zeros), (1, 2));
        }
        assert!((d.condition_number - 1.0).abs() < 1e-12);
    }

    #[test]
    fn jordan_block_is_rejected() {
        let h =
            ComplexMatrix::from_rows(&[&[c(0.0, 0.0), c(1.0, 0.0)], &[c(0.0, 0.0), c(0.0, 0.0)]])
                .unwrap();
        assert!(matches!(
            diagonalize(&h, DEFAULT_TOL),
            Err(Error::NotDiagonalizable { .. })
        ));
    }

    #[test]
    fn perturbed_jordan_block_hits_condition_ceiling() {
        let h =
            ComplexMatrix::from_rows(&[&[c(0.0, 0.0), c(1.0, 0.0)], &[c(1e-28, 0.0), c(0.0, 0.0)]])
                .unwrap();
        assert!(matches!(
            diagonalize(&h, DEFAULT_TOL),
            Err(Error::NotDiagonalizable { .. })
        ));
    }

    #[test]
    fn heff_eigenvalues_match_closed_form() {
        let d = diagonalize(&p1_heff(), DEFAULT_TOL).unwrap();
        let r = 0.06f64.sqrt();
        let mut got: Vec<C64> = d.groups.iter().map(|g| g.value).collect();
        got.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((got[0] - c(1.0 - r, 0.0)).norm() < 1e-12);
        assert!((got[1] - c(1.0 + r, 0.0)).norm() < 1e-12);
        assert!((got[1].re - 1.244949).abs() < 1e-6);
        assert!((got[0].re - 0.755051).abs() < 1e-6);
    }

    #[test]
    fn hermitian_system_is_orthonormal() {
        let h =
            ComplexMatrix::from_rows(&[&[c(2.0, 0.0), c(0.0, 1.0)], &[c(0.0, -1.0), c(-1.0, 0.0)]])
                .unwrap();
        let s = biorthonormal_system(&h, DEFAULT_TOL).unwrap();
        assert!(crate::matrix::max_abs_diff(s.psi(), s.phi()) < 1e-12);
    }

    #[test]
    fn heff_system_satisfies_biorthonormality() {
        let h = p1_heff();
        let s = biorthonormal_system(&h, DEFAULT_TOL).unwrap();
        let r = s.residuals(&h);
        assert!(r.right_eigen < 1e-13 && r.left_eigen < 1e-13);
        assert!(r.biorthonormality < 1e-13);
        assert!(r.completeness < 1e-13);
    }

    #[test]
    fn normal_diagonal_system() {
        let h = ComplexMatrix::diagonal(&[c(0.0, 1.0), c(0.0, -1.0)]).unwrap();
        let s = biorthonormal_system(&h, DEFAULT_TOL).unwrap();
        assert!(crate::matrix::max_abs_diff(s.psi(), s.phi()) < 1e-14);
        let id = DMatrix::<C64>::identity(2, 2);
        let perm =
            DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let p = s.psi();
        assert!(
            crate::matrix::max_abs_diff(p, &id) < 1e-14
                || crate::matrix::max_abs_diff(p, &perm) < 1e-14
        );
    }

    #[test]
    fn degenerate_group_detected() {
        let h = ComplexMatrix::real_diagonal(&[2.0, 2.0, 5.0]).unwrap();
        let s = biorthonormal_system(&h, DEFAULT_TOL).unwrap();
        assert_eq!(s.eigenvalues().len(), 2);
        assert_eq!(s.groups()[0].multiplicity, 2);
        assert_eq!(s.labels(), vec![(0, 0), (0, 1), (1, 0)]);
    }

    #[test]
    fn reconstruct_round_trips() {
        let h = ComplexMatrix::real_diagonal(&[1.0, 2.0, 3.0]).unwrap();
        let s = biorthonormal_system(&h, DEFAULT_TOL).unwrap();
        assert!(reconstruct(&s).max_abs_diff(&h) < 1e-14);

        let h = p1_heff();
        let s = biorthonormal_system(&h, DEFAULT_TOL).unwrap();
        let err = (reconstruct(&s).as_matrix() - h.as_matrix()).norm() / h.frobenius_norm();
        assert!(err <= 1e-10);
    }

    #[test]
    fn reconstruct_zero_group() {
        let psi =
            DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 1.0), c(0.0, 0.0), c(2.0, 0.0)]);
        let phi = psi.clone().try_inverse().unwrap().adjoint();
        let s = BiorthonormalSystem::new(&[(c(0.0, 0.0), 2)], psi, phi).unwrap();
        assert_eq!(reconstruct(&s).frobenius_norm(), 0.0);
    }

    #[test]
    fn classify_real_and_pairs() {
        let cl = classify_spectrum(
            &[(c(1.0, 0.0), 1), (c(2.0, 0.0), 1), (c(3.0, 0.0), 1)],
            1e-9,
        )
        .unwrap();
        assert_eq!(cl.real_groups.len(), 3);
        assert!(cl.real_groups.iter().all(|g| g.multiplicity == 1));
        assert!(cl.conjugate_pairs.is_empty());

        let cl = classify_spectrum(
            &[(c(1.0, 2.0), 1), (c(1.0, -2.0), 1), (c(5.0, 0.0), 1)],
            1e-9,
        )
        .unwrap();
        assert_eq!(cl.conjugate_pairs.len(), 1);
        let p = &cl.conjugate_pairs[0];
        assert_eq!(
            (p.plus, p.minus, p.multiplicity),
            (c(1.0, 2.0), c(1.0, -2.0), 1)
        );
        assert_eq!(cl.real_groups[0].value, 5.0);
        assert_eq!(cl.total_multiplicity(), 3);
    }

    #[test]
    fn classify_rejects_unequal_multiplicities() {
        let err = classify_spectrum(
            &[(c(0.0, 1.0), 1), (c(0.0, 1.0), 1), (c(0.0, -1.0), 1)],
            1e-9,
        );
        assert!(matches!(err, Err(Error::NotPseudohermitianSpectrum { .. })));
        let err = classify_spectrum(&[(c(0.0, 1.0), 1), (c(0.0, 2.0), 1)], 1e-9);
        assert!(matches!(err, Err(Error::NotPseudohermitianSpectrum { .. })));
        let err = classify_spectrum(&[(c(0.0, -1.0), 1)], 1e-9);
        assert!(matches!(err, Err(Error::NotPseudohermitianSpectrum { .. })));
    }

    #[test]
    fn realness_threshold_is_relative() {
        assert!(is_real(c(1e3, 5e-7), 1e-9));
        assert!(!is_real(c(1.0, 5e-7), 1e-9));
        assert!(is_real(c(0.0, 1e-9), 1e-9));
    }

    #[test]
    fn invalid_tolerance() {
        assert_eq!(
            classify_spectrum(&[], 0.0),
            Err(Error::InvalidTolerance(0.0))
        );
    }
}
