//! Acceptance suite: twelve criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so that every line is printed by
//! `cargo test`; the process fails if any criterion fails.

mod common;

use std::time::Instant;

use steklov::asymptotics::{self, decay_order_fit, loglog_slope, riccati_coefficients, wt_expansion};
use steklov::dn_map::{block_eigenvalues, counting_function, dn_block, steklov_spectrum};
use steklov::inverse::{self, recover_boundary, trace_det_signature, uniqueness_probe, Verdict};
use steklov::ode::Tolerance;
use steklov::sturm_liouville::{self, dirichlet_alphas, extend_alphas, fundamental_at, hadamard_truncated};
use steklov::transversal::kappa;
use steklov::warping::{build_potential, involute, DEFAULT_NODE_COUNT};
use steklov::{Branch, Potential, Result, ScaledValue, WarpingProfile};

const C1_REL_TOL: f64 = 1e-8;
const C1_MAX_SECONDS: f64 = 10.0;
const C2_REL_TOL: f64 = 1e-9;
const C3_ABS_TOL: f64 = 1e-7;
const C4_FINAL_TOL: f64 = 1e-2;
const C5_COEFF_TOL: f64 = 1e-12;
const C5_EXPONENT_SLACK: f64 = 0.3;
const C6_SLOPE_BOUND: f64 = 0.1;
const C6_EXTRA_TOL: f64 = 1e-9;
const C7_TOL: f64 = 1e-7;
const C7_Q_BOUND: f64 = 10.0;
const C8_F_TOL: f64 = 1e-2;
const C8_VOLUME_TOL: f64 = 2e-2;
const C9_SIGNATURE_TOL: f64 = 1e-8;
const C9_SEPARATION: f64 = 1e-3;
const C10_TOL: f64 = 1e-8;
const C11_REL_TOL: f64 = 0.05;
const C12_REL_TOL: f64 = 1e-2;

type Check = Result<(bool, String)>;

fn quadratic(n: usize, lambda: f64) -> WarpingProfile {
    WarpingProfile::from_fn(|x| (1.0 + 0.2 * x).powi(2), n, lambda, 16).unwrap()
}

fn c1_cylinder() -> Check {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for n in [2, 3] {
        let spec = steklov_spectrum(&WarpingProfile::constant(1.0, n, 0.0)?, 30, DEFAULT_NODE_COUNT)?;
        for e in &spec.entries {
            let s = kappa(n, e.m).sqrt();
            let want = match e.branch {
                Branch::Minus => s * (s / 2.0).tanh(),
                Branch::Plus if s == 0.0 => 2.0,
                Branch::Plus => s / (s / 2.0).tanh(),
            };
            // the m = 0 minus branch is exactly zero
            worst = worst.max((e.value - want).abs() / want.abs().max(1.0));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok((
        worst <= C1_REL_TOL && secs < C1_MAX_SECONDS,
        format!("max rel err {worst:.2e} (tol {C1_REL_TOL:.0e}), {secs:.2}s"),
    ))
}

fn free_solution(z: f64) -> (ScaledValue, ScaledValue) {
    if z > 0.0 {
        let r = z.sqrt();
        let tail = (-2.0 * r).exp();
        (
            ScaledValue::new((1.0 - tail) / (2.0 * r), r),
            ScaledValue::new((1.0 + tail) / 2.0, r),
        )
    } else if z == 0.0 {
        (ScaledValue::new(1.0, 0.0), ScaledValue::new(1.0, 0.0))
    } else {
        let r = (-z).sqrt();
        (ScaledValue::new(r.sin() / r, 0.0), ScaledValue::new(r.cos(), 0.0))
    }
}

fn c2_free_identities() -> Check {
    let q = Potential::constant(0.0, DEFAULT_NODE_COUNT);
    let mut worst: f64 = 0.0;
    for z in [-50.0, 0.0, 1.0, 1e2, 1e4, 1e6] {
        let v = fundamental_at(&q, z)?;
        let (sinh_r, cosh_r) = free_solution(z);
        for (got, want) in [(v.delta, sinh_r), (v.dd, cosh_r), (v.ee, cosh_r)] {
            worst = worst.max((got.ratio(&want) - 1.0).abs());
        }
    }
    Ok((worst <= C2_REL_TOL, format!("max rel err {worst:.2e} (tol {C2_REL_TOL:.0e})")))
}

fn c3_dirichlet_roots() -> Check {
    let mut worst: f64 = 0.0;
    for c in [0.0, 5.0] {
        let alphas = dirichlet_alphas(&Potential::constant(c, DEFAULT_NODE_COUNT), 20)?;
        for (k, a) in alphas.iter().enumerate() {
            let want = -((k + 1) as f64 * std::f64::consts::PI).powi(2) - c;
            worst = worst.max((a - want).abs());
        }
    }
    Ok((worst <= C3_ABS_TOL, format!("max abs err {worst:.2e} (tol {C3_ABS_TOL:.0e})")))
}

fn c4_hadamard() -> Check {
    let q = Potential::constant(0.0, DEFAULT_NODE_COUNT);
    let alphas = extend_alphas(&q, &dirichlet_alphas(&q, 20)?, 10_000);
    let want = 5f64.sinh() / 5.0;
    let mut errors = Vec::new();
    for terms in [100, 1_000, 10_000] {
        errors.push((hadamard_truncated(&alphas, 1.0, 25.0, terms)? - want).abs());
    }
    let monotone = errors.windows(2).all(|w| w[1] < w[0]);
    Ok((
        monotone && errors[2] <= C4_FINAL_TOL,
        format!(
            "errors {:.2e} > {:.2e} > {:.2e} (final tol {C4_FINAL_TOL:.0e})",
            errors[0], errors[1], errors[2]
        ),
    ))
}

fn c5_expansion() -> Check {
    let mut coeff_err: f64 = 0.0;
    for c in [2.0, -1.5, 6.0] {
        let co = riccati_coefficients(&Potential::constant(c, DEFAULT_NODE_COUNT), 2)?;
        let want = [c / 2.0, 0.0, -c * c / 8.0];
        for j in 0..3 {
            coeff_err = coeff_err.max((co.beta[j] - want[j]).abs());
        }
    }
    // large enough that the z^-5 remainder stays above the shooting error at z = 100
    let q = Potential::from_fn(|x| 20.0 + 4.0 * x - 3.0 * x * x + 2.0 * (3.0 * x).cos(), DEFAULT_NODE_COUNT);
    let order = asymptotics::DEFAULT_ORDER;
    let co = riccati_coefficients(&q, order)?;
    let tight = Tolerance {
        rtol: 1e-14,
        atol: 1e-16,
    };
    let mut samples = Vec::new();
    for i in 0..9 {
        let z = 10f64.powf(1.0 + i as f64 / 8.0);
        let m = sturm_liouville::fundamental_with(&q, z * z, tight)?.m_function();
        samples.push((z, wt_expansion(&co, z).0 + m));
    }
    let fit = decay_order_fit(&samples)?;
    let bound = -(order as f64 + 2.0) + C5_EXPONENT_SLACK;
    Ok((
        coeff_err <= C5_COEFF_TOL && fit.exponent <= bound,
        format!(
            "constant-q coeff err {coeff_err:.1e}; order-{order} residual exponent {:.2} (bound {bound:.1}, {} samples)",
            fit.exponent, fit.used
        ),
    ))
}

fn c6_branch_asymptotics() -> Check {
    let f = quadratic(3, 0.0);
    let q = build_potential(&f, DEFAULT_NODE_COUNT)?;
    let co = riccati_coefficients(&q, asymptotics::DEFAULT_ORDER)?;
    let mut scaled = Vec::new();
    let mut refined_ok = true;
    let mut worst_excess = f64::NEG_INFINITY;
    for m in 5..=60 {
        let mu = kappa(3, m);
        let (minus, plus) = block_eigenvalues(&dn_block(&q, mu, m)?);
        let p = asymptotics::vp_prediction(&q, &co, mu)?;
        let s = mu.sqrt();
        let allowed = 10.0 * s * (-s).exp() + C6_EXTRA_TOL;
        let gap = (p.refined.0 - minus).abs().max((p.refined.1 - plus).abs());
        worst_excess = worst_excess.max(gap - allowed);
        refined_ok &= gap <= allowed;
        if m >= 20 {
            scaled.push((m as f64, (plus - p.leading.1) * s));
        }
    }
    let slope = loglog_slope(&scaled)?;
    let bounded = slope.abs() <= C6_SLOPE_BOUND;
    Ok((
        bounded && refined_ok,
        format!(
            "scaled residual log-log slope {slope:.3} (|.| <= {C6_SLOPE_BOUND}); refined gap minus allowance max {worst_excess:.1e}"
        ),
    ))
}

fn c7_gauge() -> Check {
    let cases = common::random_profiles(0x5eed_2024, 5, C7_Q_BOUND, 30);
    let mut worst: f64 = 0.0;
    let mut q_max: f64 = 0.0;
    for case in &cases {
        let a = steklov_spectrum(&case.profile, 30, DEFAULT_NODE_COUNT)?;
        let b = steklov_spectrum(&involute(&case.profile), 30, DEFAULT_NODE_COUNT)?;
        worst = worst.max(inverse::isospectral_compare(&a, &b, C7_TOL)?.max_deviation);
        q_max = q_max.max(case.q_sup);
    }
    Ok((
        worst <= C7_TOL,
        format!(
            "{} profiles (max |q| {q_max:.2}), max sorted deviation {worst:.2e} (tol {C7_TOL:.0e})",
            cases.len()
        ),
    ))
}

fn c8_recovery() -> Check {
    let spec = steklov_spectrum(&quadratic(3, 0.0), 80, DEFAULT_NODE_COUNT)?;
    let data = recover_boundary(&spec, 20..=80)?;
    let e0 = (data.f0_hat - 1.0).abs();
    let e1 = (data.f1_hat / 1.44 - 1.0).abs();
    let volume = 1.0 + 1.44;
    let ev = (data.volume_hat / volume - 1.0).abs();
    Ok((
        e0 <= C8_F_TOL && e1 <= C8_F_TOL && ev <= C8_VOLUME_TOL,
        format!(
            "f0 {:.5} f1 {:.5} volume {:.5} (rel errs {e0:.1e}, {e1:.1e}, {ev:.1e})",
            data.f0_hat, data.f1_hat, data.volume_hat
        ),
    ))
}

fn c9_trace_det() -> Check {
    let f = quadratic(3, 0.0);
    let a = trace_det_signature(&f, 0..=30, DEFAULT_NODE_COUNT)?;
    let b = trace_det_signature(&involute(&f), 0..=30, DEFAULT_NODE_COUNT)?;
    let (reflect_dev, _) = a.max_deviation(&b);

    let nodes = 256;
    let bumped = WarpingProfile::from_fn(|x| (1.0 + 0.2 * x).powi(2) + 0.05 * common::bump(x), 3, 0.0, nodes)?;
    let plain = trace_det_signature(&f, 0..=20, nodes)?;
    let other = trace_det_signature(&bumped, 0..=20, nodes)?;
    let (bump_dev, witness) = plain.max_deviation(&other);
    let probe = uniqueness_probe(&f, &bumped, 20, nodes)?;
    Ok((
        reflect_dev <= C9_SIGNATURE_TOL && bump_dev > C9_SEPARATION && probe.verdict == Verdict::Distinct,
        format!(
            "reflection dev {reflect_dev:.1e} (tol {C9_SIGNATURE_TOL:.0e}); bump dev {bump_dev:.2e} at m = {} (> {C9_SEPARATION:.0e}); probe {:?}",
            witness.unwrap_or(0),
            probe.verdict
        ),
    ))
}

fn c10_ground_state() -> Check {
    let profiles = [
        WarpingProfile::constant(1.0, 2, 0.0)?,
        WarpingProfile::constant(1.0, 3, 0.0)?,
        quadratic(2, 0.0),
        quadratic(3, 0.0),
        quadratic(4, 0.0),
        WarpingProfile::from_fn(|x| 1.0 + 0.3 * x + 0.1 * (4.0 * x).sin(), 3, 0.0, 32)?,
        WarpingProfile::from_fn(|x| (0.5 * x).exp(), 5, 0.0, 32)?,
    ];
    let mut worst: f64 = 0.0;
    for p in &profiles {
        worst = worst.max(steklov_spectrum(p, 20, DEFAULT_NODE_COUNT)?.min_value().abs());
    }
    Ok((
        worst <= C10_TOL,
        format!("{} profiles, max |min eigenvalue| {worst:.1e} (tol {C10_TOL:.0e})", profiles.len()),
    ))
}

fn c11_weyl() -> Check {
    let f = quadratic(2, 0.0);
    // lambda_minus ~ m / 1.2 must clear t = 60
    let spec = steklov_spectrum(&f, 90, DEFAULT_NODE_COUNT)?;
    let ts: Vec<f64> = (0..=160).map(|i| 20.0 + 0.25 * i as f64).collect();
    let counts: Vec<f64> = ts.iter().map(|&t| counting_function(&spec, t) as f64).collect();
    let fit = steklov::regression::fit_line(&ts, &counts).expect("distinct abscissae");
    let want = 2.0 * (1.0 + 1.44f64.sqrt());
    let rel = (fit.slope / want - 1.0).abs();
    Ok((
        rel <= C11_REL_TOL,
        format!("N(t) slope {:.4} vs {want:.4} (rel err {rel:.2e}, tol {C11_REL_TOL})", fit.slope),
    ))
}

fn c12_finite_differences() -> Check {
    let spec = steklov_spectrum(&WarpingProfile::constant(1.0, 2, 1.0)?, 10, DEFAULT_NODE_COUNT)?;
    let ours = spec.sorted_values();
    let fd = common::finite_difference_dn(1.0, 200, 200);
    let mut worst: f64 = 0.0;
    for (a, b) in ours.iter().zip(&fd).take(6) {
        // the zero eigenvalue at m = 1 has no relative scale
        worst = worst.max((a - b).abs() / b.abs().max(1.0));
    }
    Ok((
        worst <= C12_REL_TOL,
        format!(
            "first 6: toolkit {:?} vs grid {:?}; max rel err {worst:.2e} (tol {C12_REL_TOL:.0e})",
            ours[..6].iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>(),
            fd[..6].iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>()
        ),
    ))
}

fn main() {
    let criteria: [(&str, &str, fn() -> Check); 12] = [
        ("C1", "cylinder oracle", c1_cylinder),
        ("C2", "q = 0 function identities", c2_free_identities),
        ("C3", "Dirichlet roots", c3_dirichlet_roots),
        ("C4", "Hadamard product", c4_hadamard),
        ("C5", "expansion coefficients", c5_expansion),
        ("C6", "eigenvalue branch asymptotics", c6_branch_asymptotics),
        ("C7", "reflection invariance", c7_gauge),
        ("C8", "boundary recovery", c8_recovery),
        ("C9", "trace/det probe", c9_trace_det),
        ("C10", "zero ground state", c10_ground_state),
        ("C11", "Weyl slope", c11_weyl),
        ("C12", "finite-difference cross-check", c12_finite_differences),
    ];
    let mut failed = 0;
    for (id, name, check) in criteria {
        let start = Instant::now();
        let (passed, detail) = match check() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        let mark = if passed { "PASS" } else { "FAIL" };
        println!(
            "[{mark}] {id} {name}: {detail} [{:.2}s]",
            start.elapsed().as_secs_f64()
        );
        failed += usize::from(!passed);
    }
    println!("acceptance: {} passed, {failed} failed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
