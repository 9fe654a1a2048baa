//! Two-level spin-rotation model with helicity-dependent couplings.
//!
//! In the helicity basis `(|psi_+>, |psi_->)`
//!
//! ```text
//! H_eff = [[ E,            i(k1 w2/2 - muB) ],
//!          [ -i(k2 w2/2 - muB),  E          ]]
//! ```
//!
//! With `a = k1 w2/2 - muB` and `b = k2 w2/2 - muB`: `chi = a/b`,
//! `R = sqrt(a b)` and the eigenvalues are `E +- R`. Every closed form here
//! is evaluated in complex arithmetic so that the complex-spectrum regime
//! (`a b < 0`, imaginary `R`) needs no separate branch.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};
use crate::spectral::BiorthonormalSystem;
use crate::symmetry::EtaOperator;

/// `(E, muB, w2, k1, k2)`. Only the product `muB` of magnetic moment and
/// field enters the Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub energy: f64,
    pub mu_b: f64,
    pub omega2: f64,
    pub k1: f64,
    pub k2: f64,
}

impl ModelParams {
    pub fn new(energy: f64, mu_b: f64, omega2: f64, k1: f64, k2: f64) -> Self {
        Self {
            energy,
            mu_b,
            omega2,
            k1,
            k2,
        }
    }

    pub fn is_finite(&self) -> bool {
        [self.energy, self.mu_b, self.omega2, self.k1, self.k2]
            .iter()
            .all(|x| x.is_finite())
    }

    /// `k1 w2/2 - muB`, the coupling of the upper off-diagonal entry.
    pub fn upper(&self) -> f64 {
        self.k1 * self.omega2 / 2.0 - self.mu_b
    }

    /// `k2 w2/2 - muB`, the coupling of the lower off-diagonal entry.
    pub fn lower(&self) -> f64 {
        self.k2 * self.omega2 / 2.0 - self.mu_b
    }

    /// `H_eff` is Hermitian exactly when both couplings agree.
    pub fn is_hermitian(&self) -> bool {
        self.upper() == self.lower()
    }
}

/// `k w2/2 - muB` as an unevaluated sum `hi + lo`, where `hi` is the plain
/// floating-point value.
fn coupling_exact(k: f64, omega2: f64, mu_b: f64) -> (f64, f64) {
    let prod = k * omega2;
    let prod_err = k.mul_add(omega2, -prod);
    let half = prod / 2.0;
    let hi = half - mu_b;
    let back = hi - half;
    let err = (half - (hi - back)) + (-mu_b - back);
    (hi, err + prod_err / 2.0)
}

/// `(n.0 + n.1) / (d.0 + d.1)`, accurate to about one rounding.
fn ratio(n: (f64, f64), d: (f64, f64)) -> f64 {
    let q = n.0 / d.0;
    let rem = (-q).mul_add(d.0, n.0);
    q + (rem + n.1 - q * d.1) / d.0
}

fn upper_exact(p: &ModelParams) -> (f64, f64) {
    coupling_exact(p.k1, p.omega2, p.mu_b)
}

fn lower_exact(p: &ModelParams) -> (f64, f64) {
    coupling_exact(p.k2, p.omega2, p.mu_b)
}

/// True when `x` vanishes relative to the terms it was computed from.
fn cancels(x: f64, terms: [f64; 2]) -> bool {
    let scale = terms[0].abs().max(terms[1].abs());
    x == 0.0 || x.abs() <= 8.0 * f64::EPSILON * scale
}

fn check_lower(p: &ModelParams) -> Result<f64> {
    let b = p.lower();
    if cancels(b, [p.k2 * p.omega2 / 2.0, p.mu_b]) {
        return Err(Error::DegenerateModel);
    }
    Ok(b)
}

pub fn build_heff(p: &ModelParams) -> Result<ComplexMatrix> {
    let e = C64::new(p.energy, 0.0);
    ComplexMatrix::from_rows(&[
        &[e, C64::new(0.0, p.upper())],
        &[C64::new(0.0, -p.lower()), e],
    ])
}

/// `chi = (k1 w2 - 2 muB) / (k2 w2 - 2 muB)`.
pub fn chi(p: &ModelParams) -> Result<C64> {
    check_lower(p)?;
    Ok(C64::new(ratio(upper_exact(p), lower_exact(p)), 0.0))
}

/// Principal `R = sqrt((k1 w2/2 - muB)(k2 w2/2 - muB))`.
pub fn big_r(p: &ModelParams) -> C64 {
    C64::new(p.upper() * p.lower(), 0.0).sqrt()
}

/// `(k1 w2/2 - muB)(k2 w2/2 - muB) > 0`: real, non-degenerate spectrum.
pub fn condition9(p: &ModelParams) -> bool {
    p.upper() * p.lower() > 0.0
}

/// The square root of `chi` paired with [`big_r`], `R / b`.
///
/// It satisfies `s^2 = chi` and `b s = R`, so the eigenvector
/// `(i s, 1)` belongs to `E + R` on every branch. When `b > 0` it is the
/// principal root.
pub fn sqrt_chi(p: &ModelParams) -> Result<C64> {
    let b = check_lower(p)?;
    Ok(big_r(p) / b)
}

/// Closed-form eigenbasis `psi_{1,2} = (+-i s, 1)/sqrt2`,
/// `phi_{1,2} = (+-i / conj(s), 1)/sqrt2` with eigenvalues `E +- R`.
///
/// For real `chi > 0` this is `phi = (+-i chi^-1/2, 1)/sqrt2`; the conjugate
/// keeps the pair biorthonormal when `chi < 0`.
pub fn model_eigenbasis(p: &ModelParams) -> Result<BiorthonormalSystem> {
    let s = sqrt_chi(p)?;
    if cancels(p.upper(), [p.k1 * p.omega2 / 2.0, p.mu_b]) {
        return Err(Error::RZero);
    }
    let r = big_r(p);
    let e = C64::new(p.energy, 0.0);
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let i = C64::i();
    let one = C64::new(1.0, 0.0);
    let psi = DMatrix::from_row_slice(2, 2, &[i * s * h, -i * s * h, h, h]);
    let dual = i / s.conj();
    let phi = DMatrix::from_row_slice(2, 2, &[dual * h, -dual * h, one * h, one * h]);
    BiorthonormalSystem::new(&[(e + r, 1), (e - r, 1)], psi, phi)
}

/// `eta = diag(1/chi, 1)`, defined in the real-spectrum regime.
pub fn model_eta(p: &ModelParams) -> Result<EtaOperator> {
    if !condition9(p) {
        return Err(Error::ComplexSpectrumRegime);
    }
    check_lower(p)?;
    let inv_chi = ratio(lower_exact(p), upper_exact(p));
    EtaOperator::new(ComplexMatrix::real_diagonal(&[inv_chi, 1.0])?)
}

/// `|psi_+>`.
pub fn helicity_plus() -> DVector<C64> {
    DVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)])
}

/// `|psi_->`.
pub fn helicity_minus() -> DVector<C64> {
    DVector::from_vec(vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)])
}

/// Probe state `(|psi_+> + |psi_->)/sqrt2` for which
/// [`phi_transition_probability`] holds as written.
pub fn probe_state() -> DVector<C64> {
    DVector::from_vec(vec![
        C64::new(FRAC_1_SQRT_2, 0.0),
        C64::new(FRAC_1_SQRT_2, 0.0),
    ])
}

/// Spin-flip probability `|psi_-> -> |psi_+>`: `Re[(chi/2)(1 - cos 2Rt)]`.
/// Exceeds one when `chi > 1`; the value is not clamped.
pub fn spin_flip_probability(p: &ModelParams, t: f64) -> Result<f64> {
    let chi = chi(p)?;
    let r = big_r(p);
    Ok((chi / 2.0 * (C64::new(1.0, 0.0) - (r * 2.0 * t).cos())).re)
}

/// `|psi_-> -> (|psi_+> + |psi_->)/sqrt2`: `Re[(cos Rt + s sin Rt)^2 / 2]`
/// with `s` from [`sqrt_chi`].
pub fn phi_transition_probability(p: &ModelParams, t: f64) -> Result<f64> {
    let s = sqrt_chi(p)?;
    let rt = big_r(p) * t;
    let amp = rt.cos() + s * rt.sin();
    Ok((amp * amp / 2.0).re)
}

/// `P(t) - P(-t)` of [`phi_transition_probability`]: `Re[s sin 2Rt]`.
pub fn phi_time_asymmetry(p: &ModelParams, t: f64) -> Result<f64> {
    let s = sqrt_chi(p)?;
    Ok((s * (big_r(p) * 2.0 * t).sin()).re)
}
