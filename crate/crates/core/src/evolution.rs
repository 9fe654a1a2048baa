//! Non-unitary time evolution through the spectral decomposition.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::matrix::{check_vector, ComplexMatrix, C64};
use crate::spectral::BiorthonormalSystem;

/// Largest admissible `|Im E| * |t|`; `exp(709)` is the edge of `f64`.
pub const MAX_EXPONENT: f64 = 700.0;

/// Tolerance on `| ||v|| - 1 |` for states fed to the probability routines.
pub const NORM_TOL: f64 = 1e-9;

/// Per-dimension bound on `||U^dagger U - 1||_F` below which evolution
/// counts as unitary.
pub const UNITARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionOperator {
    time: f64,
    u: ComplexMatrix,
}

impl EvolutionOperator {
    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.u
    }

    pub fn dim(&self) -> usize {
        self.u.dim()
    }

    /// `||U^dagger U - 1||_F`; zero for unitary evolution.
    pub fn unitarity_defect(&self) -> f64 {
        let u = self.u.as_matrix();
        let n = self.dim();
        (u.adjoint() * u - nalgebra::DMatrix::<C64>::identity(n, n)).norm()
    }
}

/// `U(t) = sum_n sum_a |psi_{n,a}> exp(-i E_n t) <phi_{n,a}|`.
pub fn evolution_operator(system: &BiorthonormalSystem, t: f64) -> Result<EvolutionOperator> {
    if !t.is_finite() {
        return Err(Error::TimeRange {
            exponent: f64::INFINITY,
            limit: MAX_EXPONENT,
        });
    }
    let growth = system
        .groups()
        .iter()
        .map(|g| g.value.im.abs())
        .fold(0.0, f64::max);
    let exponent = growth * t.abs();
    if exponent > MAX_EXPONENT {
        return Err(Error::TimeRange {
            exponent,
            limit: MAX_EXPONENT,
        });
    }
    let minus_it = C64::new(0.0, -t);
    let u = system.spectral_function(|e| (minus_it * e).exp());
    Ok(EvolutionOperator {
        time: t,
        u: ComplexMatrix::new(u)?,
    })
}

/// `U psi`, without renormalization.
pub fn propagate(u: &EvolutionOperator, state: &DVector<C64>) -> Result<DVector<C64>> {
    check_vector(state, u.dim())?;
    Ok(u.matrix().as_matrix() * state)
}

fn check_unit(v: &DVector<C64>) -> Result<()> {
    let norm = v.norm();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(norm));
    }
    Ok(())
}

/// `|<final| U(t) |initial>|^2`. Values above 1 are possible for
/// non-unitary evolution and are returned as computed. When `U(t)` is
/// unitary to within [`UNITARY_TOL`] the result is capped at 1.
pub fn transition_probability(
    system: &BiorthonormalSystem,
    initial: &DVector<C64>,
    target: &DVector<C64>,
    t: f64,
) -> Result<f64> {
    check_vector(initial, system.dim())?;
    check_vector(target, system.dim())?;
    check_unit(initial)?;
    check_unit(target)?;
    let u = evolution_operator(system, t)?;
    let evolved = propagate(&u, initial)?;
    let p = target.dotc(&evolved).norm_sqr();
    if u.unitarity_defect() <= UNITARY_TOL * system.dim() as f64 {
        return Ok(p.min(1.0));
    }
    Ok(p)
}

/// `P(t) - P(-t)`.
pub fn time_asymmetry(
    system: &BiorthonormalSystem,
    initial: &DVector<C64>,
    target: &DVector<C64>,
    t: f64,
) -> Result<f64> {
    Ok(transition_probability(system, initial, target, t)?
        - transition_probability(system, initial, target, -t)?)
}

/// Evenly spaced times `start, ..., stop` (`count` points).
pub fn time_grid(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (count - 1) as f64;
            (0..count).map(|k| start + step * k as f64).collect()
        }
    }
}

/// `max_t |P(t) - P(-t)|` over `times`.
pub fn max_abs_asymmetry(
    system: &BiorthonormalSystem,
    initial: &DVector<C64>,
    target: &DVector<C64>,
    times: &[f64],
) -> Result<f64> {
    let mut best: f64 = 0.0;
    for &t in times {
        best = best.max(time_asymmetry(system, initial, target, t)?.abs());
    }
    Ok(best)
}

/// `||U(t+s) - U(t) U(s)||_F` relative to `1 + ||U(t)|| ||U(s)||`.
pub fn semigroup_defect(system: &BiorthonormalSystem, t: f64, s: f64) -> Result<f64> {
    let ut = evolution_operator(system, t)?;
    let us = evolution_operator(system, s)?;
    let uts = evolution_operator(system, t + s)?;
    let prod = ut.matrix().as_matrix() * us.matrix().as_matrix();
    let scale = 1.0 + ut.matrix().frobenius_norm() * us.matrix().frobenius_norm();
    Ok((uts.matrix().as_matrix() - prod).norm() / scale)
}

/// Sum of the transition probabilities from `initial` into each column of
/// `basis` at time `t`.
pub fn probability_sum(
    system: &BiorthonormalSystem,
    initial: &DVector<C64>,
    basis: &ComplexMatrix,
    t: f64,
) -> Result<f64> {
    let mut total = 0.0;
    for k in 0..basis.dim() {
        let target = basis.as_matrix().column(k).into_owned();
        total += transition_probability(system, initial, &target, t)?;
    }
    Ok(total)
}
