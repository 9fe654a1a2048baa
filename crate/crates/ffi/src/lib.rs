//! C ABI over the `kramers` library.
//!
//! Matrices cross the boundary as `2 * n * n` doubles, row-major, with
//! real and imaginary parts interleaved. Vectors use `2 * n` doubles in the
//! same layout. Every fallible call returns a [`KrStatus`]; on failure the
//! message is available from [`kr_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use kramers::model::{self, ModelParams};
use kramers::spectral::biorthonormal_system_with;
use kramers::symmetry::kramers_test_system;
use kramers::{
    evolution_operator, BiorthonormalSystem, ComplexMatrix, Error, KramersReport, SpectralConfig,
    C64,
};
use nalgebra::DVector;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KrStatus {
    Ok = 0,
    NullPointer = 1,
    /// Malformed input: non-finite entries, bad sizes, bad tolerance,
    /// non-normalized states.
    InvalidInput = 2,
    /// Defective or ill-conditioned matrix, failed convergence or
    /// verification.
    Numeric = 3,
    /// Model parameters at a degenerate point or outside the regime.
    Model = 4,
    /// Output buffer too short.
    BufferTooSmall = 5,
    Panic = 6,
}

/// Diagonalized matrix: biorthonormal eigensystem plus the source matrix.
pub struct KrSystem {
    h: ComplexMatrix,
    system: BiorthonormalSystem,
    tol: f64,
}

/// Result of the Kramers test.
pub struct KrKramersReport {
    report: KramersReport,
    dim: usize,
}

/// Two-level model parameters.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrModelParams {
    pub energy: f64,
    pub mu_b: f64,
    pub omega2: f64,
    pub k1: f64,
    pub k2: f64,
}

impl From<KrModelParams> for ModelParams {
    fn from(p: KrModelParams) -> Self {
        ModelParams::new(p.energy, p.mu_b, p.omega2, p.k1, p.k2)
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> KrStatus {
    match kramers::cli::exit_code(err) {
        kramers::cli::EXIT_INPUT => KrStatus::InvalidInput,
        kramers::cli::EXIT_MODEL => KrStatus::Model,
        _ => KrStatus::Numeric,
    }
}

enum Fail {
    Null(&'static str),
    Buffer { needed: usize, given: usize },
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> KrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KrStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            KrStatus::NullPointer
        }
        Ok(Err(Fail::Buffer { needed, given })) => {
            set_error(format!("buffer holds {given} doubles, {needed} needed"));
            KrStatus::BufferTooSmall
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            KrStatus::Panic
        }
    }
}

unsafe fn read_doubles<'a>(
    ptr: *const f64,
    len: usize,
    what: &'static str,
) -> Result<&'a [f64], Fail> {
    if ptr.is_null() {
        return Err(Fail::Null(what));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

unsafe fn out_doubles<'a>(
    ptr: *mut f64,
    len: usize,
    needed: usize,
    what: &'static str,
) -> Result<&'a mut [f64], Fail> {
    if ptr.is_null() {
        return Err(Fail::Null(what));
    }
    if len < needed {
        return Err(Fail::Buffer { needed, given: len });
    }
    Ok(std::slice::from_raw_parts_mut(ptr, needed))
}

unsafe fn out_ref<'a, T>(ptr: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    ptr.as_mut().ok_or(Fail::Null(what))
}

unsafe fn read_matrix(data: *const f64, n: usize) -> Result<ComplexMatrix, Fail> {
    let raw = read_doubles(data, 2 * n * n, "matrix")?;
    let entries: Vec<C64> = raw.chunks_exact(2).map(|p| C64::new(p[0], p[1])).collect();
    Ok(ComplexMatrix::from_row_slice(n, &entries)?)
}

unsafe fn read_vector(
    data: *const f64,
    n: usize,
    what: &'static str,
) -> Result<DVector<C64>, Fail> {
    let raw = read_doubles(data, 2 * n, what)?;
    Ok(DVector::from_iterator(
        n,
        raw.chunks_exact(2).map(|p| C64::new(p[0], p[1])),
    ))
}

fn write_complex(out: &mut [f64], values: impl IntoIterator<Item = C64>) {
    for (slot, z) in out.chunks_exact_mut(2).zip(values) {
        slot[0] = z.re;
        slot[1] = z.im;
    }
}

fn no_witness(report: &KramersReport) -> Error {
    if !report.pseudohermitian {
        return Error::NotPseudohermitianSpectrum {
            reason: "complex eigenvalues without conjugate partners".into(),
        };
    }
    Error::OddDegeneracy(
        report
            .real_degeneracies
            .iter()
            .copied()
            .filter(|&(_, d)| d % 2 == 1)
            .collect(),
    )
}

fn config(tol: f64) -> SpectralConfig {
    SpectralConfig::with_tol(tol)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn kr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the last error message of this thread into `buf` (truncated,
/// always NUL-terminated when `len > 0`). Returns the full message length
/// including the terminator, or 0 when there is no message.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn kr_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| match e.borrow().as_ref() {
        None => 0,
        Some(msg) => {
            let bytes = msg.as_bytes_with_nul();
            if !buf.is_null() && len > 0 {
                let k = bytes.len().min(len);
                ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, k);
                *buf.add(k - 1) = 0;
            }
            bytes.len()
        }
    })
}

/// Diagonalizes the `n x n` matrix `data` into a new handle.
///
/// # Safety
/// `data` must hold `2 * n * n` doubles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kr_system_new(
    data: *const f64,
    n: usize,
    tol: f64,
    out: *mut *mut KrSystem,
) -> KrStatus {
    guard(|| {
        let slot = out_ref(out, "out")?;
        *slot = ptr::null_mut();
        let h = read_matrix(data, n)?;
        let system = biorthonormal_system_with(&h, &config(tol))?;
        *slot = Box::into_raw(Box::new(KrSystem { h, system, tol }));
        Ok(())
    })
}

/// # Safety
/// `sys` must be null or a handle from [`kr_system_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kr_system_free(sys: *mut KrSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Dimension of the system, 0 for a null handle.
///
/// # Safety
/// `sys` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kr_system_dim(sys: *const KrSystem) -> usize {
    sys.as_ref().map_or(0, |s| s.system.dim())
}

/// Writes the eigenvalue of each eigenvector column (`2 * n` doubles).
///
/// # Safety
/// `sys` must be a live handle; `out` must be valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn kr_system_eigenvalues(
    sys: *const KrSystem,
    out: *mut f64,
    len: usize,
) -> KrStatus {
    guard(|| {
        let s = sys.as_ref().ok_or(Fail::Null("system"))?;
        let buf = out_doubles(out, len, 2 * s.system.dim(), "out")?;
        write_complex(buf, s.system.column_eigenvalues());
        Ok(())
    })
}

/// Writes the right eigenvectors (`psi`) or the dual vectors (`phi`) as a
/// matrix whose columns are the vectors.
///
/// # Safety
/// `sys` must be a live handle; `out` must be valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn kr_system_vectors(
    sys: *const KrSystem,
    dual: bool,
    out: *mut f64,
    len: usize,
) -> KrStatus {
    guard(|| {
        let s = sys.as_ref().ok_or(Fail::Null("system"))?;
        let n = s.system.dim();
        let buf = out_doubles(out, len, 2 * n * n, "out")?;
        let m = if dual { s.system.phi() } else { s.system.psi() };
        write_complex(buf, (0..n).flat_map(|i| (0..n).map(move |j| m[(i, j)])));
        Ok(())
    })
}

/// Writes `U(t)` (`2 * n * n` doubles).
///
/// # Safety
/// `sys` must be a live handle; `out` must be valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn kr_system_evolution(
    sys: *const KrSystem,
    t: f64,
    out: *mut f64,
    len: usize,
) -> KrStatus {
    guard(|| {
        let s = sys.as_ref().ok_or(Fail::Null("system"))?;
        let n = s.system.dim();
        let buf = out_doubles(out, len, 2 * n * n, "out")?;
        let u = evolution_operator(&s.system, t)?;
        write_complex(buf, u.matrix().to_row_major());
        Ok(())
    })
}

/// `|<target| U(t) |initial>|^2` for unit vectors of `2 * n` doubles.
///
/// # Safety
/// `sys` must be a live handle; both vectors must hold `2 * n` doubles;
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kr_system_transition_probability(
    sys: *const KrSystem,
    initial: *const f64,
    target: *const f64,
    t: f64,
    out: *mut f64,
) -> KrStatus {
    guard(|| {
        let s = sys.as_ref().ok_or(Fail::Null("system"))?;
        let slot = out_ref(out, "out")?;
        let n = s.system.dim();
        let a = read_vector(initial, n, "initial")?;
        let b = read_vector(target, n, "target")?;
        *slot = kramers::transition_probability(&s.system, &a, &b, t)?;
        Ok(())
    })
}

/// Writes a metric operator `eta` with `eta H eta^-1 = H^dagger` and its
/// relative residual. Fails with [`KrStatus::Numeric`] when the spectrum
/// is not closed under conjugation.
///
/// # Safety
/// `sys` must be a live handle; `out` must be valid for `len` doubles;
/// `residual` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn kr_system_eta(
    sys: *const KrSystem,
    out: *mut f64,
    len: usize,
    residual: *mut f64,
) -> KrStatus {
    guard(|| {
        let s = sys.as_ref().ok_or(Fail::Null("system"))?;
        let n = s.system.dim();
        let buf = out_doubles(out, len, 2 * n * n, "out")?;
        let cl = kramers::classify_spectrum(&s.system.eigenvalues(), s.tol)?;
        let eta = kramers::construct_eta(&s.system, &cl)?;
        let res = kramers::verify_pseudohermitian(&s.h, &eta)?;
        write_complex(buf, eta.matrix().to_row_major());
        if let Some(r) = residual.as_mut() {
            *r = res;
        }
        Ok(())
    })
}

/// Runs the Kramers test on a diagonalized system.
///
/// # Safety
/// `sys` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kr_kramers_test(
    sys: *const KrSystem,
    out: *mut *mut KrKramersReport,
) -> KrStatus {
    guard(|| {
        let slot = out_ref(out, "out")?;
        *slot = ptr::null_mut();
        let s = sys.as_ref().ok_or(Fail::Null("system"))?;
        let report = kramers_test_system(&s.h, &s.system, s.tol)?;
        *slot = Box::into_raw(Box::new(KrKramersReport {
            report,
            dim: s.system.dim(),
        }));
        Ok(())
    })
}

/// # Safety
/// `rep` must be null or a handle from [`kr_kramers_test`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kr_report_free(rep: *mut KrKramersReport) {
    if !rep.is_null() {
        drop(Box::from_raw(rep));
    }
}

/// # Safety
/// `rep` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kr_report_pseudohermitian(rep: *const KrKramersReport) -> bool {
    rep.as_ref().is_some_and(|r| r.report.pseudohermitian)
}

/// True when every real eigenvalue has even degeneracy.
///
/// # Safety
/// `rep` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kr_report_all_even(rep: *const KrKramersReport) -> bool {
    rep.as_ref().is_some_and(|r| r.report.all_even)
}

/// # Safety
/// `rep` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kr_report_has_witness(rep: *const KrKramersReport) -> bool {
    rep.as_ref().is_some_and(|r| r.report.witness.is_some())
}

/// Copies the witness matrix `A` (acting as `v -> A conj(v)`).
/// Fails with [`KrStatus::Numeric`] when there is none.
///
/// # Safety
/// `rep` must be a live handle; `out` must be valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn kr_report_witness(
    rep: *const KrKramersReport,
    out: *mut f64,
    len: usize,
) -> KrStatus {
    guard(|| {
        let r = rep.as_ref().ok_or(Fail::Null("report"))?;
        let buf = out_doubles(out, len, 2 * r.dim * r.dim, "out")?;
        let w = r
            .report
            .witness
            .as_ref()
            .ok_or_else(|| no_witness(&r.report))?;
        write_complex(buf, w.matrix().to_row_major());
        Ok(())
    })
}

/// Witness residuals `||H A - A conj(H)||_F / max(1, ||H||_F)` and
/// `||A conj(A) + 1||_F`.
///
/// # Safety
/// `rep` must be a live handle; `commutator` and `square` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn kr_report_residuals(
    rep: *const KrKramersReport,
    commutator: *mut f64,
    square: *mut f64,
) -> KrStatus {
    guard(|| {
        let r = rep.as_ref().ok_or(Fail::Null("report"))?;
        let c = out_ref(commutator, "commutator")?;
        let s = out_ref(square, "square")?;
        let res = r.report.residuals.ok_or_else(|| no_witness(&r.report))?;
        *c = res.commutator;
        *s = res.square;
        Ok(())
    })
}

/// Number of distinct real eigenvalues reported.
///
/// # Safety
/// `rep` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kr_report_real_count(rep: *const KrKramersReport) -> usize {
    rep.as_ref().map_or(0, |r| r.report.real_degeneracies.len())
}

/// Value and degeneracy of the `k`-th real eigenvalue.
///
/// # Safety
/// `rep` must be a live handle; `value` and `degeneracy` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn kr_report_real_degeneracy(
    rep: *const KrKramersReport,
    k: usize,
    value: *mut f64,
    degeneracy: *mut usize,
) -> KrStatus {
    guard(|| {
        let r = rep.as_ref().ok_or(Fail::Null("report"))?;
        let v = out_ref(value, "value")?;
        let d = out_ref(degeneracy, "degeneracy")?;
        let &(e, m) = r
            .report
            .real_degeneracies
            .get(k)
            .ok_or_else(|| Error::Parse(format!("index {k} out of range")))?;
        *v = e;
        *d = m;
        Ok(())
    })
}

/// Writes the model matrix (`8` doubles).
///
/// # Safety
/// `out` must be valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn kr_model_heff(p: KrModelParams, out: *mut f64, len: usize) -> KrStatus {
    guard(|| {
        let buf = out_doubles(out, len, 8, "out")?;
        write_complex(buf, model::build_heff(&p.into())?.to_row_major());
        Ok(())
    })
}

/// `(k1 w2/2 - muB)(k2 w2/2 - muB) > 0`.
#[no_mangle]
pub extern "C" fn kr_model_condition9(p: KrModelParams) -> bool {
    model::condition9(&p.into())
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kr_model_chi(p: KrModelParams, out: *mut f64) -> KrStatus {
    guard(|| {
        *out_ref(out, "out")? = model::chi(&p.into())?.re;
        Ok(())
    })
}

/// Spin-flip probability from the closed form.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kr_model_spin_flip(p: KrModelParams, t: f64, out: *mut f64) -> KrStatus {
    guard(|| {
        *out_ref(out, "out")? = model::spin_flip_probability(&p.into(), t)?;
        Ok(())
    })
}

/// Probe transition probability from the closed form.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kr_model_phi_probability(
    p: KrModelParams,
    t: f64,
    out: *mut f64,
) -> KrStatus {
    guard(|| {
        *out_ref(out, "out")? = model::phi_transition_probability(&p.into(), t)?;
        Ok(())
    })
}

/// `P(t) - P(-t)` of the probe transition from the closed form.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kr_model_asymmetry(p: KrModelParams, t: f64, out: *mut f64) -> KrStatus {
    guard(|| {
        *out_ref(out, "out")? = model::phi_time_asymmetry(&p.into(), t)?;
        Ok(())
    })
}

/// Writes `diag(1/chi, 1)`; requires the real-spectrum regime.
///
/// # Safety
/// `out` must be valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn kr_model_eta(p: KrModelParams, out: *mut f64, len: usize) -> KrStatus {
    guard(|| {
        let buf = out_doubles(out, len, 8, "out")?;
        write_complex(buf, model::model_eta(&p.into())?.matrix().to_row_major());
        Ok(())
    })
}
