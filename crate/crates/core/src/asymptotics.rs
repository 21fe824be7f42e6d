//! Large-`z` expansion of the Weyl-Titchmarsh functions and the eigenvalue
//! predictions it implies.
//!
//! With `w = -psi'/psi` for the solution vanishing at the far end, `w` solves
//! `w^2 = z^2 + q + w'` and `w(0) = -M(z^2)`. Substituting
//! `w = z + sum_j beta_j / z^{j+1}` and matching powers gives
//!
//! ```text
//! beta_0 = q/2,  beta_1 = beta_0'/2,
//! beta_{j+1} = beta_j'/2 - (1/2) sum_{l=0}^{j-1} beta_l beta_{j-1-l}.
//! ```
//!
//! The `gamma_j` for `-N` are the same fields built from `q(1 - x)`.

use crate::chebyshev;
use crate::dn_map;
use crate::error::{Error, Result};
use crate::regression;
use crate::warping::Potential;

pub const DEFAULT_ORDER: usize = 3;
pub const MAX_ORDER: usize = 6;

/// Residuals below this are treated as roundoff by [`decay_order_fit`].
pub const RESIDUAL_FLOOR: f64 = 1e-13;

/// Relative grid-refinement disagreement tolerated per coefficient.
const REFINEMENT_TOL: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionCoefficients {
    /// `beta_0(0) .. beta_A(0)`
    pub beta: Vec<f64>,
    /// `gamma_0(0) .. gamma_A(0)`, the reflected-side coefficients.
    pub gamma: Vec<f64>,
    pub order: usize,
}

/// Chebyshev coefficients of `beta_0 .. beta_order` on `[0, 1]`.
fn coefficient_fields(q: &[f64], order: usize) -> Vec<Vec<f64>> {
    let mut fields: Vec<Vec<f64>> = Vec::with_capacity(order + 1);
    fields.push(q.iter().map(|c| 0.5 * c).collect());
    for j in 0..order {
        let mut next: Vec<f64> = chebyshev::derivative(&fields[j])
            .into_iter()
            .map(|c| 0.5 * c)
            .collect();
        for l in 0..j {
            let prod = chebyshev::product(&fields[l], &fields[j - 1 - l]);
            if prod.len() > next.len() {
                next.resize(prod.len(), 0.0);
            }
            for (n, p) in next.iter_mut().zip(&prod) {
                *n -= 0.5 * p;
            }
        }
        chebyshev::chop(&mut next, 1e-15);
        fields.push(next);
    }
    fields
}

fn endpoint_values(q: &[f64], order: usize) -> (Vec<f64>, Vec<f64>) {
    let at_zero = |fields: Vec<Vec<f64>>| {
        fields
            .iter()
            .map(|c| chebyshev::clenshaw(c, 0.0))
            .collect::<Vec<f64>>()
    };
    let beta = at_zero(coefficient_fields(q, order));
    let gamma = at_zero(coefficient_fields(&chebyshev::reflect(q), order));
    (beta, gamma)
}

/// Expansion coefficients `beta_j(0)`, `gamma_j(0)` for `j <= order`.
///
/// The fields are recomputed from `q` resampled on a grid of half the size;
/// a coefficient whose two values disagree by more than 1% (beyond an
/// absolute floor scaled like `|q|^{(j+2)/2}`) is reported as `OrderTooHigh`.
pub fn riccati_coefficients(potential: &Potential, order: usize) -> Result<ExpansionCoefficients> {
    if order > MAX_ORDER {
        return Err(Error::InvalidArgument(format!(
            "expansion order {order} exceeds {MAX_ORDER}"
        )));
    }
    let (beta, gamma) = endpoint_values(potential.coefficients(), order);

    let coarse_count = potential.node_count().div_ceil(2).max(2);
    let mut coarse = chebyshev::values_to_coeffs(
        &chebyshev::lobatto_nodes(coarse_count)
            .into_iter()
            .map(|x| potential.eval(x))
            .collect::<Vec<f64>>(),
    );
    chebyshev::chop(&mut coarse, 1e-15);
    let (beta_c, gamma_c) = endpoint_values(&coarse, order);

    let scale = 1.0 + potential.sup_norm();
    for j in 0..=order {
        let floor = 1e-9 * scale.powf((j as f64 + 2.0) / 2.0);
        for (fine, rough) in [(beta[j], beta_c[j]), (gamma[j], gamma_c[j])] {
            let gap = (fine - rough).abs();
            if gap > REFINEMENT_TOL * fine.abs() + floor {
                return Err(Error::OrderTooHigh {
                    order,
                    index: j,
                    disagreement: gap,
                });
            }
        }
    }
    Ok(ExpansionCoefficients { beta, gamma, order })
}

/// Truncated expansions `(-M(z^2), -N(z^2))`.
pub fn wt_expansion(coeffs: &ExpansionCoefficients, z: f64) -> (f64, f64) {
    let series = |c: &[f64]| {
        let mut acc = z;
        let mut power = z;
        for b in c {
            acc += b / power;
            power *= z;
        }
        acc
    };
    (series(&coeffs.beta), series(&coeffs.gamma))
}

/// Eigenvalue predictions for one block, each as `(lambda_minus, lambda_plus)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VpPrediction {
    /// `sqrt(mu / f) +- (ln h)'/(4 sqrt f)` at the two ends.
    pub leading: (f64, f64),
    /// Diagonal entries with `M`, `N` replaced by their truncated expansions.
    pub expansion: (f64, f64),
    /// Diagonal entries with the computed `M`, `N`.
    pub refined: (f64, f64),
}

/// Predictions for the eigenvalues of the block at `mu > 0`.
pub fn vp_prediction(
    potential: &Potential,
    coeffs: &ExpansionCoefficients,
    mu: f64,
) -> Result<VpPrediction> {
    if !(mu > 0.0) {
        return Err(Error::InvalidArgument(format!("mu must be positive, got {mu}")));
    }
    let (r0, r1) = (potential.f0.sqrt(), potential.f1.sqrt());
    let c0 = potential.lnh_prime0 / (4.0 * r0);
    let c1 = potential.lnh_prime1 / (4.0 * r1);
    let z = mu.sqrt();
    let (minus_m, minus_n) = wt_expansion(coeffs, z);
    let block = dn_map::dn_block(potential, mu, 0)?;
    Ok(VpPrediction {
        leading: (z / r1 - c1, z / r0 + c0),
        expansion: (minus_n / r1 - c1, minus_m / r0 + c0),
        refined: (block.a22, block.a11),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayFit {
    /// Slope of `ln |residual|` against `ln z`.
    pub exponent: f64,
    pub intercept: f64,
    /// Samples used after removing those at the roundoff floor.
    pub used: usize,
    pub excluded: usize,
}

/// Least-squares slope of `ln |residual|` against `ln z`, without the
/// sampling requirements of [`decay_order_fit`].
pub fn loglog_slope(samples: &[(f64, f64)]) -> Result<f64> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = samples
        .iter()
        .map(|&(z, r)| (z.ln(), r.abs().ln()))
        .unzip();
    regression::fit_line(&xs, &ys)
        .map(|fit| fit.slope)
        .ok_or_else(|| Error::DegenerateFit("need two distinct abscissae".into()))
}

/// Fits the algebraic decay rate of a residual sequence.
///
/// Needs at least five samples with `z > 0` spanning a decade. Samples with
/// `|residual| < 1e-13` are dropped; if fewer than three remain the fit is
/// `DegenerateFit`.
pub fn decay_order_fit(samples: &[(f64, f64)]) -> Result<DecayFit> {
    if samples.len() < 5 {
        return Err(Error::InvalidArgument(format!(
            "decay fit needs at least 5 samples, got {}",
            samples.len()
        )));
    }
    if samples.iter().any(|&(z, _)| !(z > 0.0)) {
        return Err(Error::InvalidArgument("sample abscissae must be positive".into()));
    }
    let lo = samples.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let hi = samples.iter().map(|s| s.0).fold(0.0, f64::max);
    if hi < 10.0 * lo * (1.0 - 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "samples span [{lo}, {hi}], less than a decade"
        )));
    }
    let kept: Vec<(f64, f64)> = samples
        .iter()
        .copied()
        .filter(|&(_, r)| r.abs() >= RESIDUAL_FLOOR)
        .collect();
    let excluded = samples.len() - kept.len();
    if kept.len() < 3 {
        return Err(Error::DegenerateFit(format!(
            "{excluded} of {} residuals at the roundoff floor",
            samples.len()
        )));
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) =
        kept.iter().map(|&(z, r)| (z.ln(), r.abs().ln())).unzip();
    let fit = regression::fit_line(&xs, &ys)
        .ok_or_else(|| Error::DegenerateFit("coincident sample abscissae".into()))?;
    Ok(DecayFit {
        exponent: fit.slope,
        intercept: fit.intercept,
        used: kept.len(),
        excluded,
    })
}
