//! Command implementations behind the `kramers` binary: `analyze`, `model`
//! and `scan`. Everything here returns strings so that the binary only
//! handles I/O and exit codes.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{max_abs_asymmetry, time_grid, transition_probability};
use crate::matrix::{ComplexMatrix, C64};
use crate::model::{
    big_r, build_heff, chi, condition9, helicity_minus, helicity_plus, model_eta, probe_state,
    sqrt_chi, ModelParams,
};
use crate::spectral::{biorthonormal_system_with, SpectralConfig};
use crate::symmetry::kramers_test_with;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERIC: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_MODEL: i32 = 4;

/// Maps a library error onto the process exit code.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NotDiagonalizable { .. }
        | Error::NoConvergence
        | Error::WitnessVerification { .. }
        | Error::TimeRange { .. }
        | Error::SingularEta
        | Error::NotHermitian(_)
        | Error::NotPseudohermitianSpectrum { .. }
        | Error::OddDegeneracy(_) => EXIT_NUMERIC,
        Error::DegenerateModel | Error::RZero | Error::ComplexSpectrumRegime => EXIT_MODEL,
        Error::NotSquare { .. }
        | Error::Empty
        | Error::NonFinite { .. }
        | Error::DimensionMismatch { .. }
        | Error::InvalidTolerance(_)
        | Error::NotNormalized(_)
        | Error::Parse(_) => EXIT_INPUT,
    }
}

/// `%.12g`-style rendering: 12 significant digits, trailing zeros trimmed.
pub fn fmt_sig(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        let t = s.trim_end_matches('0').trim_end_matches('.');
        if t == "-0" {
            "0".into()
        } else {
            t.to_string()
        }
    } else {
        s
    }
}

pub fn fmt_complex(z: C64) -> String {
    if z.im == 0.0 {
        fmt_sig(z.re)
    } else if z.re == 0.0 {
        format!("{}i", fmt_sig(z.im))
    } else if z.im < 0.0 {
        format!("{}-{}i", fmt_sig(z.re), fmt_sig(-z.im))
    } else {
        format!("{}+{}i", fmt_sig(z.re), fmt_sig(z.im))
    }
}

fn fmt_matrix(m: &ComplexMatrix) -> String {
    let rows: Vec<String> = (0..m.dim())
        .map(|i| {
            let row: Vec<String> = (0..m.dim()).map(|j| fmt_complex(m[(i, j)])).collect();
            format!("[{}]", row.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

/// Inclusive grid `start:stop:count`, or a single value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn single(x: f64) -> Self {
        Self {
            start: x,
            stop: x,
            count: 1,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        time_grid(self.start, self.stop, self.count)
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::Parse(format!("invalid grid `{s}`: {why}"));
        let parts: Vec<&str> = s.split(':').collect();
        let num = |p: &str| {
            p.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| bad("expected finite numbers"))
        };
        let spec = match parts.as_slice() {
            [x] => Self::single(num(x)?),
            [a, b, n] => Self {
                start: num(a)?,
                stop: num(b)?,
                count: n
                    .trim()
                    .parse()
                    .map_err(|_| bad("count must be an integer"))?,
            },
            _ => return Err(bad("expected `value` or `start:stop:count`")),
        };
        if spec.count == 0 {
            return Err(bad("count must be at least 1"));
        }
        if spec.start > spec.stop {
            return Err(bad("start must not exceed stop"));
        }
        Ok(spec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub t: f64,
    pub p_flip: f64,
    pub p_phi_fwd: f64,
    pub p_phi_bwd: f64,
    pub asymmetry: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelReport {
    pub params: ModelParams,
    pub hermitian: bool,
    pub heff: ComplexMatrix,
    pub eigenvalues: Vec<C64>,
    pub chi: C64,
    pub r: C64,
    pub sqrt_chi: C64,
    pub condition9: bool,
    /// `diag(1/chi, 1)`, or `None` off the real-spectrum regime.
    pub eta: Option<ComplexMatrix>,
    pub curve: Vec<CurveRow>,
}

impl ModelReport {
    /// True when some curve value exceeds one (non-unitary evolution).
    pub fn exceeds_unity(&self) -> bool {
        self.curve
            .iter()
            .any(|r| r.p_flip > 1.0 || r.p_phi_fwd > 1.0 || r.p_phi_bwd > 1.0)
    }

    pub fn render(&self) -> String {
        let p = &self.params;
        let mut out = String::new();
        let _ = writeln!(out, "# kramers {} model", crate::VERSION);
        let _ = writeln!(
            out,
            "# params: E={} muB={} omega2={} k1={} k2={}",
            fmt_sig(p.energy),
            fmt_sig(p.mu_b),
            fmt_sig(p.omega2),
            fmt_sig(p.k1),
            fmt_sig(p.k2)
        );
        if self.hermitian {
            let _ = writeln!(out, "# Hermitian (k1 = k2): unitary evolution");
        }
        let _ = writeln!(out, "# hermitian: {}", self.hermitian);
        let _ = writeln!(out, "# H_eff: {}", fmt_matrix(&self.heff));
        let eig: Vec<String> = self.eigenvalues.iter().map(|&z| fmt_complex(z)).collect();
        let _ = writeln!(out, "# eigenvalues: {}", eig.join(", "));
        let _ = writeln!(out, "# chi: {}", fmt_complex(self.chi));
        let _ = writeln!(out, "# R: {}", fmt_complex(self.r));
        let _ = writeln!(out, "# sqrt_chi: {}", fmt_complex(self.sqrt_chi));
        let _ = writeln!(out, "# condition9: {}", self.condition9);
        match &self.eta {
            Some(eta) => {
                let _ = writeln!(out, "# eta: {}", fmt_matrix(eta));
            }
            None => {
                let _ = writeln!(out, "# eta: unavailable ({})", Error::ComplexSpectrumRegime);
            }
        }
        let _ = writeln!(out, "# probability_above_one: {}", self.exceeds_unity());
        let _ = writeln!(out, "t,P_flip,P_phi_fwd,P_phi_bwd,asymmetry");
        for r in &self.curve {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                fmt_sig(r.t),
                fmt_sig(r.p_flip),
                fmt_sig(r.p_phi_fwd),
                fmt_sig(r.p_phi_bwd),
                fmt_sig(r.asymmetry)
            );
        }
        out
    }
}

/// Drives the generic pipeline on `H_eff(p)` over `times`.
///
/// The probe transition is `|psi_-> -> (|psi_+> + |psi_->)/sqrt2`.
pub fn run_model(p: &ModelParams, times: &[f64], cfg: &SpectralConfig) -> Result<ModelReport> {
    if !p.is_finite() {
        return Err(Error::Parse("model parameters must be finite".into()));
    }
    let chi = chi(p)?;
    let r = big_r(p);
    if r == C64::new(0.0, 0.0) {
        return Err(Error::RZero);
    }
    let heff = build_heff(p)?;
    let system = biorthonormal_system_with(&heff, cfg)?;
    let eigenvalues = system.column_eigenvalues();
    let eta = match model_eta(p) {
        Ok(eta) => Some(eta.into_matrix()),
        Err(Error::ComplexSpectrumRegime) => None,
        Err(e) => return Err(e),
    };
    let minus = helicity_minus();
    let plus = helicity_plus();
    let probe = probe_state();
    let curve = times
        .iter()
        .map(|&t| {
            let fwd = transition_probability(&system, &minus, &probe, t)?;
            let bwd = transition_probability(&system, &minus, &probe, -t)?;
            Ok(CurveRow {
                t,
                p_flip: transition_probability(&system, &minus, &plus, t)?,
                p_phi_fwd: fwd,
                p_phi_bwd: bwd,
                asymmetry: fwd - bwd,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ModelReport {
        params: *p,
        hermitian: p.is_hermitian(),
        heff,
        eigenvalues,
        chi,
        r,
        sqrt_chi: sqrt_chi(p)?,
        condition9: condition9(p),
        eta,
        curve,
    })
}

/// One grid point of a parameter scan. `None` marks points where the
/// generic pipeline cannot run (defective `H_eff` at `R = 0` or `b = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub k1: f64,
    pub k2: f64,
    pub mu_b: f64,
    pub condition9: bool,
    pub kramers_all_even: Option<bool>,
    pub max_abs_asymmetry: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanSpec {
    pub k1: GridSpec,
    pub k2: GridSpec,
    pub mu_b: GridSpec,
    pub omega2: f64,
    pub energy: f64,
    pub times: Vec<f64>,
}

impl ScanSpec {
    /// `t = 0, 0.1, ..., 10`.
    pub fn default_times() -> Vec<f64> {
        time_grid(0.0, 10.0, 101)
    }

    /// Grid points in output order: `k1` slowest, `muB` fastest.
    pub fn points(&self) -> Vec<ModelParams> {
        let mut out = Vec::new();
        for &k1 in &self.k1.points() {
            for &k2 in &self.k2.points() {
                for &mu_b in &self.mu_b.points() {
                    out.push(ModelParams::new(self.energy, mu_b, self.omega2, k1, k2));
                }
            }
        }
        out
    }
}

pub fn scan_point(p: &ModelParams, times: &[f64], cfg: &SpectralConfig) -> ScanRow {
    let heff = build_heff(p).ok();
    let kramers = heff
        .as_ref()
        .and_then(|h| kramers_test_with(h, cfg).ok())
        .map(|r| r.all_even);
    let asymmetry = heff
        .as_ref()
        .and_then(|h| biorthonormal_system_with(h, cfg).ok())
        .and_then(|s| max_abs_asymmetry(&s, &helicity_minus(), &probe_state(), times).ok());
    ScanRow {
        k1: p.k1,
        k2: p.k2,
        mu_b: p.mu_b,
        condition9: condition9(p),
        kramers_all_even: kramers,
        max_abs_asymmetry: asymmetry,
    }
}

/// Evaluates every grid point in parallel; rows keep grid order.
pub fn scan(spec: &ScanSpec, cfg: &SpectralConfig) -> Vec<ScanRow> {
    spec.points()
        .par_iter()
        .map(|p| scan_point(p, &spec.times, cfg))
        .collect()
}

pub fn render_scan(rows: &[ScanRow]) -> String {
    let mut out = String::from("k1,k2,muB,condition9,kramers_all_even,max_abs_asymmetry\n");
    for r in rows {
        let even = r
            .kramers_all_even
            .map_or("na".to_string(), |b| b.to_string());
        let asym = r.max_abs_asymmetry.map_or("na".to_string(), fmt_sig);
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_sig(r.k1),
            fmt_sig(r.k2),
            fmt_sig(r.mu_b),
            r.condition9,
            even,
            asym
        );
    }
    out
}
