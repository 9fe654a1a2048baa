//! Acceptance gate. Each test prints one `PASS`/`FAIL` line; run with
//! `cargo test -p kramers --test acceptance -- --nocapture --test-threads=1`
//! to see them in order.

mod common;

use common::{c, commutant_basis, forward_corpus, necessity_corpus, rng, Sample};
use kramers::cli::{scan, GridSpec, ScanSpec};
use kramers::evolution::time_grid;
use kramers::model::{
    build_heff, condition9, helicity_minus, helicity_plus, model_eta, phi_time_asymmetry,
    phi_transition_probability, probe_state, spin_flip_probability,
};
use kramers::spectral::biorthonormal_system;
use kramers::{
    classify_spectrum, construct_eta, evolution_operator, kramers_test, reconstruct,
    time_asymmetry, transition_probability, verify_pseudohermitian, AntilinearOperator,
    ComplexMatrix, ModelParams, SpectralConfig, C64, DEFAULT_TOL,
};
use nalgebra::{DMatrix, DVector};
use rand::Rng;

const P1: ModelParams = ModelParams {
    energy: 1.0,
    mu_b: 0.1,
    omega2: 1.0,
    k1: 1.0,
    k2: 0.5,
};

fn verdict(id: &str, name: &str, pass: bool, detail: String) {
    println!(
        "{} {id} {name}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{id} {name} failed: {detail}");
}

fn full_corpus() -> Vec<Sample> {
    let mut all = forward_corpus();
    all.extend(necessity_corpus());
    all
}

#[test]
fn ac1_forward_suite() {
    let corpus = forward_corpus();
    let mut worst_square: f64 = 0.0;
    let mut worst_comm: f64 = 0.0;
    let mut failures = Vec::new();
    for (k, s) in corpus.iter().enumerate() {
        let n = s.dim() as f64;
        match kramers_test(&s.h, DEFAULT_TOL) {
            Ok(rep) => match rep.witness {
                Some(t) => {
                    let sq = (t.square().as_matrix() + DMatrix::<C64>::identity(s.dim(), s.dim()))
                        .norm();
                    let comm = kramers::commutator_residual(&s.h, &t).unwrap();
                    worst_square = worst_square.max(sq / n);
                    worst_comm = worst_comm.max(comm);
                    if sq > 1e-9 * n || comm > 1e-9 {
                        failures.push(format!("#{k}: square {sq:e} commutator {comm:e}"));
                    }
                }
                None => failures.push(format!("#{k}: no witness")),
            },
            Err(e) => failures.push(format!("#{k}: {e}")),
        }
    }
    verdict(
        "AC1",
        "forward suite",
        failures.is_empty() && corpus.len() == 200,
        format!(
            "{} matrices, max square/n {worst_square:.2e}, max commutator {worst_comm:.2e}, failures {failures:?}",
            corpus.len()
        ),
    );
}

/// Random antilinear candidates: mostly from the complex span of the
/// solutions of `H B = B conj(H)`, the rest unconstrained.
fn search_witness(s: &Sample, candidates: usize, seed: u64) -> usize {
    let mut r = rng(seed);
    let n = s.dim();
    let basis = commutant_basis(&s.h);
    let mut passing = 0;
    for k in 0..candidates {
        let scale = 10f64.powf(r.gen_range(-2.0..2.0));
        let b = if !basis.is_empty() && k % 5 != 0 {
            let mut b = DMatrix::<C64>::zeros(n, n);
            for m in &basis {
                b += m * common::random_complex(&mut r);
            }
            let norm = b.norm().max(f64::MIN_POSITIVE);
            b * c(scale * (n as f64).sqrt() / norm, 0.0)
        } else {
            common::random_matrix(&mut r, n) * c(scale, 0.0)
        };
        let t = AntilinearOperator::new(ComplexMatrix::new(b).unwrap());
        let comm = kramers::commutator_residual(&s.h, &t).unwrap();
        if comm <= 1e-6 && t.square_residual() <= 1e-6 {
            passing += 1;
        }
    }
    passing
}

#[test]
fn ac2_necessity_suite() {
    let corpus = necessity_corpus();
    let mut failures = Vec::new();
    let mut searched = 0;
    let mut found = 0;
    for (k, s) in corpus.iter().enumerate() {
        assert!(s.has_odd_real());
        match kramers_test(&s.h, DEFAULT_TOL) {
            Ok(rep) => {
                if rep.all_even || rep.witness.is_some() {
                    failures.push(format!(
                        "#{k}: all_even {} witness {}",
                        rep.all_even,
                        rep.witness.is_some()
                    ));
                }
            }
            Err(e) => failures.push(format!("#{k}: {e}")),
        }
        if s.dim() <= 4 {
            searched += 1;
            let hits = search_witness(s, 10_000, 0xace2_0000 + k as u64);
            found += hits;
            if hits > 0 {
                failures.push(format!("#{k}: random search found {hits} witnesses"));
            }
        }
    }
    verdict(
        "AC2",
        "necessity suite",
        failures.is_empty() && corpus.len() == 200,
        format!(
            "{} matrices, {searched} searched with 10^4 candidates each, {found} passing candidates, failures {failures:?}",
            corpus.len()
        ),
    );
}

#[test]
fn ac3_biorthonormal_residuals() {
    let corpus = full_corpus();
    let (mut round, mut bi, mut comp) = (0f64, 0f64, 0f64);
    let mut failures = Vec::new();
    for (k, s) in corpus.iter().enumerate() {
        match biorthonormal_system(&s.h, DEFAULT_TOL) {
            Ok(sys) => {
                let res = sys.residuals(&s.h);
                let rt = (reconstruct(&sys).as_matrix() - s.h.as_matrix()).norm()
                    / s.h.frobenius_norm().max(1.0);
                round = round.max(rt);
                bi = bi.max(res.biorthonormality);
                comp = comp.max(res.completeness);
                if rt > 1e-9 || res.biorthonormality > 1e-9 || res.completeness > 1e-9 {
                    failures.push(format!(
                        "#{k}: {rt:e} {:e} {:e}",
                        res.biorthonormality, res.completeness
                    ));
                }
            }
            Err(e) => failures.push(format!("#{k}: {e}")),
        }
    }
    verdict(
        "AC3",
        "round trip, biorthonormality, completeness",
        failures.is_empty(),
        format!(
            "{} matrices, max round trip {round:.2e}, biorthonormality {bi:.2e}, completeness {comp:.2e}, failures {failures:?}",
            corpus.len()
        ),
    );
}

/// Scalar oracle: `U(t) = e^{-iEt} (cos Rt - i sin Rt M / R)` for the
/// traceless part `M` of the 2x2 model matrix, since `M^2 = R^2`.
fn oracle_amplitude(p: &ModelParams, t: f64, target: [f64; 2]) -> f64 {
    let a = p.k1 * p.omega2 / 2.0 - p.mu_b;
    let b = p.k2 * p.omega2 / 2.0 - p.mu_b;
    let r = (a * b).sqrt();
    // M = [[0, i a], [-i b, 0]]; initial state e2.
    let u12 = c(0.0, -(r * t).sin() / r) * c(0.0, a);
    let u22 = c((r * t).cos(), 0.0);
    let phase = c(0.0, -p.energy * t).exp();
    let amp = phase * (u12 * target[0] + u22 * target[1]);
    amp.norm_sqr()
}

fn printed_forms(p: &ModelParams, t: f64) -> (f64, f64, f64) {
    let a = p.k1 * p.omega2 / 2.0 - p.mu_b;
    let b = p.k2 * p.omega2 / 2.0 - p.mu_b;
    let chi = a / b;
    let r = (a * b).sqrt();
    let root = chi.sqrt() * b.signum();
    let flip = chi / 2.0 * (1.0 - (2.0 * r * t).cos());
    let phi = 0.5 * ((r * t).cos() + root * (r * t).sin()).powi(2);
    let asym = root * (2.0 * r * t).sin();
    (flip, phi, asym)
}

fn random_regime_params(r: &mut rand::rngs::StdRng) -> ModelParams {
    loop {
        let p = ModelParams::new(
            r.gen_range(-2.0..2.0),
            r.gen_range(-1.0..1.0),
            r.gen_range(0.2..3.0),
            r.gen_range(-3.0..3.0),
            r.gen_range(-3.0..3.0),
        );
        if condition9(&p) && p.upper().abs().min(p.lower().abs()) >= 0.05 {
            return p;
        }
    }
}

#[test]
fn ac4_model_oracle_equivalence() {
    let mut r = rng(0xac4);
    let plus = helicity_plus();
    let minus = helicity_minus();
    let probe = probe_state();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for k in 0..100 {
        let p = random_regime_params(&mut r);
        let sys = biorthonormal_system(&build_heff(&p).unwrap(), DEFAULT_TOL).unwrap();
        for _ in 0..20 {
            let t = r.gen_range(-10.0..10.0);
            let flip = transition_probability(&sys, &minus, &plus, t).unwrap();
            let phi = transition_probability(&sys, &minus, &probe, t).unwrap();
            let asym = time_asymmetry(&sys, &minus, &probe, t).unwrap();
            let (f0, p0, a0) = printed_forms(&p, t);
            let errs = [
                flip - f0,
                phi - p0,
                asym - a0,
                flip - oracle_amplitude(&p, t, [1.0, 0.0]),
                phi - oracle_amplitude(&p, t, [h, h]),
                flip - spin_flip_probability(&p, t).unwrap(),
                phi - phi_transition_probability(&p, t).unwrap(),
                asym - phi_time_asymmetry(&p, t).unwrap(),
            ];
            let e = errs.iter().fold(0f64, |m, x| m.max(x.abs()));
            worst = worst.max(e);
            if e > 1e-9 {
                failures.push(format!("#{k} t={t}: {errs:?}"));
            }
        }
    }

    // Spot values at P1 from the scalar oracle.
    let chi = (P1.k1 * P1.omega2 / 2.0 - P1.mu_b) / (P1.k2 * P1.omega2 / 2.0 - P1.mu_b);
    let r1 = ((P1.k1 * P1.omega2 / 2.0 - P1.mu_b) * (P1.k2 * P1.omega2 / 2.0 - P1.mu_b)).sqrt();
    let sys = biorthonormal_system(&build_heff(&P1).unwrap(), DEFAULT_TOL).unwrap();
    let flip1 = transition_probability(&sys, &minus, &plus, 1.0).unwrap();
    let asym1 = time_asymmetry(&sys, &minus, &probe, 1.0).unwrap();
    let spots = [
        ("chi", chi, 8.0 / 3.0, 1e-15),
        ("R", r1, 0.06f64.sqrt(), 1e-15),
        ("R approx", r1, 0.244949, 1e-6),
        ("spin flip P(1)", flip1, 0.156825490577754, 1e-9),
        ("spin flip P(1) approx", flip1, 0.156826, 1e-6),
        ("asymmetry(1)", asym1, 0.768381813012637, 1e-9),
    ];
    for (name, got, want, tol) in spots {
        if (got - want).abs() > tol {
            failures.push(format!("P1 {name}: {got} vs {want}"));
        }
    }
    verdict(
        "AC4",
        "model oracle equivalence",
        failures.is_empty(),
        format!("100 parameter sets x 20 times, max deviation {worst:.2e}, P1 flip {flip1:.9} asymmetry {asym1:.9}, failures {failures:?}"),
    );
}

#[test]
fn ac5_eta_certification() {
    let corpus = full_corpus();
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    let mut failures = Vec::new();
    for (k, s) in corpus
        .iter()
        .enumerate()
        .filter(|(_, s)| s.pseudohermitian_spectrum())
    {
        checked += 1;
        let result = biorthonormal_system(&s.h, DEFAULT_TOL).and_then(|sys| {
            let cl = classify_spectrum(&sys.eigenvalues(), DEFAULT_TOL)?;
            let eta = construct_eta(&sys, &cl)?;
            verify_pseudohermitian(&s.h, &eta)
        });
        match result {
            Ok(res) => {
                worst = worst.max(res);
                if res > 1e-8 {
                    failures.push(format!("#{k}: {res:e}"));
                }
            }
            Err(e) => failures.push(format!("#{k}: {e}")),
        }
    }
    let eta = model_eta(&P1).unwrap();
    let m = eta.matrix();
    let model_ok = m[(0, 0)] == c(0.375, 0.0)
        && m[(1, 1)] == c(1.0, 0.0)
        && m[(0, 1)] == c(0.0, 0.0)
        && m[(1, 0)] == c(0.0, 0.0);
    if !model_ok {
        failures.push(format!("model eta {:?}", m.to_row_major()));
    }
    verdict(
        "AC5",
        "eta certification",
        failures.is_empty(),
        format!("{checked} pseudohermitian matrices, max residual {worst:.2e}, P1 eta[0][0] = {}, failures {failures:?}", m[(0, 0)].re),
    );
}

#[test]
fn ac6_scan_consistency() {
    let spec = ScanSpec {
        k1: GridSpec {
            start: -2.0,
            stop: 2.0,
            count: 9,
        },
        k2: GridSpec {
            start: -2.0,
            stop: 2.0,
            count: 9,
        },
        mu_b: GridSpec {
            start: -0.6,
            stop: 0.6,
            count: 7,
        },
        omega2: 1.0,
        energy: 1.0,
        times: ScanSpec::default_times(),
    };
    let rows = scan(&spec, &SpectralConfig::default());
    let mut failures = Vec::new();
    let (mut regime, mut diagonal) = (0, 0);
    for row in rows.iter().filter(|r| r.condition9) {
        regime += 1;
        if row.k1 == row.k2 {
            diagonal += 1;
        }
        let p = ModelParams::new(spec.energy, row.mu_b, spec.omega2, row.k1, row.k2);
        let expected = spec
            .times
            .iter()
            .map(|&t| printed_forms(&p, t).2.abs())
            .fold(0f64, f64::max);
        let ok = row.kramers_all_even == Some(false)
            && row
                .max_abs_asymmetry
                .is_some_and(|a| a > 1e-6 && (a - expected).abs() <= 1e-9);
        if !ok {
            failures.push(format!("{row:?} expected asymmetry {expected}"));
        }
    }
    verdict(
        "AC6",
        "Kramers and asymmetry consistency",
        failures.is_empty() && regime > 0 && diagonal > 0,
        format!("{} grid points, {regime} in the real-spectrum regime ({diagonal} with k1 = k2), failures {failures:?}", rows.len()),
    );
}

#[test]
fn ac7_hermitian_limit() {
    let mut r = rng(0xac7);
    let times = time_grid(-1000.0, 1000.0, 81);
    let states: Vec<DVector<C64>> = vec![helicity_plus(), helicity_minus(), probe_state()];
    let (mut worst_u, mut p_min, mut p_max) = (0f64, f64::INFINITY, f64::NEG_INFINITY);
    let mut failures = Vec::new();
    for k in 0..50 {
        let coupling = r.gen_range(-3.0..3.0);
        let p = ModelParams::new(
            r.gen_range(-2.0..2.0),
            0.0,
            r.gen_range(0.2..3.0),
            coupling,
            coupling,
        );
        let h = build_heff(&p).unwrap();
        if !h.is_hermitian(0.0) {
            failures.push(format!("#{k}: H not Hermitian"));
        }
        let sys = match biorthonormal_system(&h, DEFAULT_TOL) {
            Ok(s) => s,
            Err(e) => {
                failures.push(format!("#{k}: {e}"));
                continue;
            }
        };
        for &t in &times {
            let u = evolution_operator(&sys, t).unwrap();
            let defect = u.unitarity_defect();
            worst_u = worst_u.max(defect);
            if defect > 1e-10 {
                failures.push(format!("#{k} t={t}: unitarity {defect:e}"));
            }
            for a in &states {
                for b in &states {
                    let prob = transition_probability(&sys, a, b, t).unwrap();
                    p_min = p_min.min(prob);
                    p_max = p_max.max(prob);
                    if !(0.0..=1.0).contains(&prob) {
                        failures.push(format!("#{k} t={t}: probability {prob}"));
                    }
                }
            }
        }
    }
    verdict(
        "AC7",
        "Hermitian limit",
        failures.is_empty(),
        format!("50 parameter sets x 81 times in [-1000, 1000], max unitarity defect {worst_u:.2e}, probabilities in [{p_min}, {p_max}], failures {failures:?}"),
    );
}
