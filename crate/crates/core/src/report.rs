//! Machine-readable analysis reports. Complex numbers are `[re, im]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};
use crate::spectral::{
    diagonalize_with, reconstruct, system_from_diagonalization, SpectralConfig,
    SpectrumClassification,
};
use crate::symmetry::{construct_eta, kramers_test_system, verify_pseudohermitian};

pub type ComplexPair = [f64; 2];

pub fn pair(z: C64) -> ComplexPair {
    [z.re, z.im]
}

pub fn matrix_rows(m: &ComplexMatrix) -> Vec<Vec<ComplexPair>> {
    (0..m.dim())
        .map(|i| (0..m.dim()).map(|j| pair(m[(i, j)])).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueEntry {
    pub value: ComplexPair,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealGroupEntry {
    pub value: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairEntry {
    pub plus: ComplexPair,
    pub minus: ComplexPair,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationSection {
    pub real_groups: Vec<RealGroupEntry>,
    pub conjugate_pairs: Vec<PairEntry>,
    pub tolerance_used: f64,
}

impl From<&SpectrumClassification> for ClassificationSection {
    fn from(c: &SpectrumClassification) -> Self {
        Self {
            real_groups: c
                .real_groups
                .iter()
                .map(|g| RealGroupEntry {
                    value: g.value,
                    multiplicity: g.multiplicity,
                })
                .collect(),
            conjugate_pairs: c
                .conjugate_pairs
                .iter()
                .map(|p| PairEntry {
                    plus: pair(p.plus),
                    minus: pair(p.minus),
                    multiplicity: p.multiplicity,
                })
                .collect(),
            tolerance_used: c.tolerance_used,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EtaSection {
    pub matrix: Vec<Vec<ComplexPair>>,
    /// `||eta H eta^-1 - H^dagger||_F / max(1, ||H||_F)`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KramersSection {
    pub all_even: bool,
    pub real_degeneracies: Vec<RealGroupEntry>,
    pub has_symmetry: bool,
    pub witness: Option<Vec<Vec<ComplexPair>>>,
    pub commutator_residual: Option<f64>,
    pub square_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemSection {
    pub condition_number: f64,
    pub biorthonormality: f64,
    pub completeness: f64,
    /// `||reconstruct - H||_F / max(1, ||H||_F)`.
    pub reconstruction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub tool_version: String,
    pub tolerance: f64,
    pub cond_ceiling: f64,
    pub dim: usize,
    pub eigenvalues: Vec<EigenvalueEntry>,
    pub system: SystemSection,
    pub pseudohermitian: bool,
    pub classification: Option<ClassificationSection>,
    pub eta: Option<EtaSection>,
    pub kramers: KramersSection,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values are finite")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Runs the full pipeline on `h`: diagonalization, classification, eta and
/// the Kramers test.
pub fn analyze(h: &ComplexMatrix, cfg: &SpectralConfig) -> Result<AnalysisReport> {
    let diag = diagonalize_with(h, cfg)?;
    let condition_number = diag.condition_number;
    let system = system_from_diagonalization(diag)?;
    let residuals = system.residuals(h);
    let scale = h.frobenius_norm().max(1.0);
    let reconstruction = (reconstruct(&system).as_matrix() - h.as_matrix()).norm() / scale;

    let kramers = kramers_test_system(h, &system, cfg.tol)?;
    let eta = match &kramers.classification {
        Some(cl) => {
            let eta = construct_eta(&system, cl)?;
            let residual = verify_pseudohermitian(h, &eta)?;
            Some(EtaSection {
                matrix: matrix_rows(eta.matrix()),
                residual,
            })
        }
        None => None,
    };

    Ok(AnalysisReport {
        tool_version: crate::VERSION.to_string(),
        tolerance: cfg.tol,
        cond_ceiling: cfg.cond_ceiling,
        dim: h.dim(),
        eigenvalues: system
            .eigenvalues()
            .into_iter()
            .map(|(e, d)| EigenvalueEntry {
                value: pair(e),
                multiplicity: d,
            })
            .collect(),
        system: SystemSection {
            condition_number,
            biorthonormality: residuals.biorthonormality,
            completeness: residuals.completeness,
            reconstruction,
        },
        pseudohermitian: kramers.pseudohermitian,
        classification: kramers.classification.as_ref().map(Into::into),
        eta,
        kramers: KramersSection {
            all_even: kramers.all_even,
            real_degeneracies: kramers
                .real_degeneracies
                .iter()
                .map(|&(value, multiplicity)| RealGroupEntry {
                    value,
                    multiplicity,
                })
                .collect(),
            has_symmetry: kramers.witness.is_some(),
            witness: kramers.witness.as_ref().map(|w| matrix_rows(w.matrix())),
            commutator_residual: kramers.residuals.map(|r| r.commutator),
            square_residual: kramers.residuals.map(|r| r.square),
        },
    })
}

/// Convenience for callers that only hold a tolerance.
pub fn analyze_tol(h: &ComplexMatrix, tol: f64) -> Result<AnalysisReport> {
    analyze(h, &SpectralConfig::with_tol(tol))
}
