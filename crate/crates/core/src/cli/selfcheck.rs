//! Closed-form oracle checks run by `steklov selfcheck`.

use crate::asymptotics;
use crate::dn_map::{self, Branch};
use crate::error::Result;
use crate::inverse;
use crate::scaled::ScaledValue;
use crate::sturm_liouville;
use crate::transversal;
use crate::warping::{self, Potential, WarpingProfile, DEFAULT_NODE_COUNT};

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &'static str, result: Result<(bool, String)>) -> CheckOutcome {
    match result {
        Ok((passed, detail)) => CheckOutcome { name, passed, detail },
        Err(e) => CheckOutcome {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn cylinder() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for n in [2, 3] {
        let f = WarpingProfile::constant(1.0, n, 0.0)?;
        let spec = dn_map::steklov_spectrum(&f, 30, DEFAULT_NODE_COUNT)?;
        for e in &spec.entries {
            let s = transversal::kappa(n, e.m).sqrt();
            let want = match e.branch {
                Branch::Minus => s * (s / 2.0).tanh(),
                Branch::Plus if s == 0.0 => 2.0,
                Branch::Plus => s / (s / 2.0).tanh(),
            };
            let err = (e.value - want).abs() / want.abs().max(1.0);
            worst = worst.max(err);
        }
    }
    Ok((worst <= 1e-8, format!("max relative error {worst:.2e}")))
}

fn free_identities() -> Result<(bool, String)> {
    let q = Potential::constant(0.0, DEFAULT_NODE_COUNT);
    let mut worst: f64 = 0.0;
    for z in [-50.0, 0.0, 1.0, 1e2, 1e4, 1e6] {
        let v = sturm_liouville::fundamental_at(&q, z)?;
        let (delta, cosh) = if z > 0.0 {
            let r: f64 = z.sqrt();
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
        };
        for (got, want) in [(v.delta, delta), (v.dd, cosh), (v.ee, cosh)] {
            worst = worst.max((got.ratio(&want) - 1.0).abs());
        }
    }
    Ok((worst <= 1e-9, format!("max relative error {worst:.2e}")))
}

fn dirichlet_roots() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for c in [0.0, 5.0] {
        let alphas = sturm_liouville::dirichlet_alphas(&Potential::constant(c, DEFAULT_NODE_COUNT), 20)?;
        for (k, a) in alphas.iter().enumerate() {
            let want = -((k + 1) as f64 * std::f64::consts::PI).powi(2) - c;
            worst = worst.max((a - want).abs());
        }
    }
    Ok((worst <= 1e-7, format!("max absolute error {worst:.2e}")))
}

fn hadamard() -> Result<(bool, String)> {
    let q = Potential::constant(0.0, DEFAULT_NODE_COUNT);
    let alphas = sturm_liouville::extend_alphas(&q, &sturm_liouville::dirichlet_alphas(&q, 20)?, 10_000);
    let want = 5f64.sinh() / 5.0;
    let errors = [100, 1_000, 10_000]
        .iter()
        .map(|&t| Ok((sturm_liouville::hadamard_truncated(&alphas, 1.0, 25.0, t)? - want).abs()))
        .collect::<Result<Vec<f64>>>()?;
    let monotone = errors.windows(2).all(|w| w[1] < w[0]);
    Ok((
        monotone && errors[2] <= 1e-2,
        format!("errors {:.2e}, {:.2e}, {:.2e}", errors[0], errors[1], errors[2]),
    ))
}

fn constant_coefficients() -> Result<(bool, String)> {
    let c = asymptotics::riccati_coefficients(&Potential::constant(2.0, DEFAULT_NODE_COUNT), 2)?;
    let want = [1.0, 0.0, -0.5];
    let err = c
        .beta
        .iter()
        .zip(&want)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok((err <= 1e-12, format!("max error {err:.2e}")))
}

fn gauge() -> Result<(bool, String)> {
    let f = WarpingProfile::from_fn(|x| 1.0 + 0.3 * x + 0.1 * (4.0 * x).sin(), 3, 0.5, 32)?;
    let a = dn_map::steklov_spectrum(&f, 30, DEFAULT_NODE_COUNT)?;
    let b = dn_map::steklov_spectrum(&warping::involute(&f), 30, DEFAULT_NODE_COUNT)?;
    let report = inverse::isospectral_compare(&a, &b, 1e-7)?;
    Ok((report.matched, format!("max deviation {:.2e}", report.max_deviation)))
}

fn ground_state() -> Result<(bool, String)> {
    let f = WarpingProfile::from_fn(|x| (1.0 + 0.2 * x).powi(2), 3, 0.0, 16)?;
    let min = dn_map::steklov_spectrum(&f, 10, DEFAULT_NODE_COUNT)?.min_value();
    Ok((min.abs() <= 1e-8, format!("minimum {min:.2e}")))
}

/// Runs every check in order.
pub fn run_all() -> Vec<CheckOutcome> {
    vec![
        outcome("cylinder eigenvalues", cylinder()),
        outcome("free characteristic functions", free_identities()),
        outcome("Dirichlet roots", dirichlet_roots()),
        outcome("Hadamard product", hadamard()),
        outcome("constant-potential coefficients", constant_coefficients()),
        outcome("reflection isospectrality", gauge()),
        outcome("zero ground state", ground_state()),
    ]
}
