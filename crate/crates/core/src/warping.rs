//! Warping profiles `f` on `[0, 1]` and the reduced Sturm-Liouville potential.
//!
//! The metric `f(x) (dx^2 + g_S)` separates into the family of equations
//! `-v'' + q v = -mu v` with
//! `q = (f^p)'' / f^p - lambda f`, `p = (n - 2) / 4`.

use crate::chebyshev::{self, Barycentric};
use crate::error::{Error, Result};
use crate::sturm_liouville;
use crate::transversal;

/// Default number of collocation nodes for the potential.
pub const DEFAULT_NODE_COUNT: usize = 64;

/// Smallest node count accepted by [`build_potential`].
pub const MIN_NODE_COUNT: usize = 16;

/// Minimum size of the positivity sample grid.
const MIN_SAMPLE_COUNT: usize = 256;

/// The conformal factor `f` together with the dimension `n` and frequency `lambda`.
#[derive(Debug, Clone, PartialEq)]
pub struct WarpingProfile {
    coefficients: Vec<f64>,
    n: usize,
    lambda: f64,
}

/// Validates and wraps Chebyshev coefficients of `f` on `[0, 1]`.
pub fn make_profile(coefficients: Vec<f64>, n: usize, lambda: f64) -> Result<WarpingProfile> {
    if n < 2 {
        return Err(Error::BadDimension(n));
    }
    if coefficients.is_empty() {
        return Err(Error::InvalidArgument("empty coefficient vector".into()));
    }
    if coefficients.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidArgument("non-finite coefficient".into()));
    }
    if !lambda.is_finite() {
        return Err(Error::InvalidArgument("non-finite frequency".into()));
    }
    let samples = MIN_SAMPLE_COUNT.max(4 * coefficients.len());
    for x in chebyshev::lobatto_nodes(samples) {
        let value = chebyshev::clenshaw(&coefficients, x);
        if !(value > 0.0) {
            return Err(Error::NonPositiveProfile { x, value });
        }
    }
    Ok(WarpingProfile {
        coefficients,
        n,
        lambda,
    })
}

impl WarpingProfile {
    /// Interpolates `f` at `count` Chebyshev nodes and validates the result.
    pub fn from_fn<F: Fn(f64) -> f64>(f: F, n: usize, lambda: f64, count: usize) -> Result<Self> {
        let mut coefficients = chebyshev::fit(f, count.max(2));
        chebyshev::chop(&mut coefficients, 1e-15);
        make_profile(coefficients, n, lambda)
    }

    /// The constant profile `f = value`.
    pub fn constant(value: f64, n: usize, lambda: f64) -> Result<Self> {
        make_profile(vec![value], n, lambda)
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Same shape, different frequency.
    pub fn with_lambda(&self, lambda: f64) -> Self {
        WarpingProfile {
            lambda,
            ..self.clone()
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        chebyshev::clenshaw(&self.coefficients, x)
    }

    pub fn f0(&self) -> f64 {
        self.value(0.0)
    }

    pub fn f1(&self) -> f64 {
        self.value(1.0)
    }

    /// Coefficients of the `order`-th derivative.
    fn derivative_coeffs(&self, order: usize) -> Vec<f64> {
        (0..order).fold(self.coefficients.clone(), |c, _| chebyshev::derivative(&c))
    }
}

/// `d^order f / dx^order` at `x`, by exact differentiation of the interpolant.
pub fn eval_profile(profile: &WarpingProfile, x: f64, order: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::OutOfDomain { x });
    }
    if order > 4 {
        return Err(Error::InvalidArgument(format!(
            "derivative order {order} exceeds 4"
        )));
    }
    Ok(chebyshev::clenshaw(&profile.derivative_coeffs(order), x))
}

/// Returns the profile of `x -> f(1 - x)`.
pub fn involute(profile: &WarpingProfile) -> WarpingProfile {
    WarpingProfile {
        coefficients: chebyshev::reflect(&profile.coefficients),
        n: profile.n,
        lambda: profile.lambda,
    }
}

/// Endpoint condition `|f'(k) / f(k)| <= 1 / (n - 2)` at `k = 0, 1`.
pub fn cb_membership(profile: &WarpingProfile) -> bool {
    if profile.n <= 2 {
        return true;
    }
    let bound = 1.0 / (profile.n - 2) as f64;
    let d = profile.derivative_coeffs(1);
    [0.0, 1.0].iter().all(|&x| {
        let ratio = chebyshev::clenshaw(&d, x) / profile.value(x);
        ratio.abs() <= bound
    })
}

/// Reduced potential `q` sampled on Chebyshev-Lobatto nodes, plus the endpoint
/// data of `h = f^(n-2)` needed by the DN blocks.
#[derive(Debug, Clone)]
pub struct Potential {
    interp: Barycentric,
    coeffs: Vec<f64>,
    pub f0: f64,
    pub f1: f64,
    /// `(ln h)'(0)`
    pub lnh_prime0: f64,
    /// `(ln h)'(1)`
    pub lnh_prime1: f64,
    n: usize,
}

impl Potential {
    /// A bare Sturm-Liouville potential with trivial boundary geometry
    /// (`f(0) = f(1) = 1`, `h = 1`).
    pub fn from_fn<F: Fn(f64) -> f64>(q: F, node_count: usize) -> Self {
        let values = chebyshev::lobatto_nodes(node_count).into_iter().map(q).collect();
        Self::from_values(values, 1.0, 1.0, 0.0, 0.0, 2)
    }

    /// `q = c` everywhere.
    pub fn constant(c: f64, node_count: usize) -> Self {
        Self::from_values(vec![c; node_count], 1.0, 1.0, 0.0, 0.0, 2)
    }

    fn from_values(
        values: Vec<f64>,
        f0: f64,
        f1: f64,
        lnh_prime0: f64,
        lnh_prime1: f64,
        n: usize,
    ) -> Self {
        let mut coeffs = chebyshev::values_to_coeffs(&values);
        chebyshev::chop(&mut coeffs, 1e-15);
        Potential {
            interp: Barycentric::new(values),
            coeffs,
            f0,
            f1,
            lnh_prime0,
            lnh_prime1,
            n,
        }
    }

    /// `q(x)` via barycentric interpolation.
    pub fn eval(&self, x: f64) -> f64 {
        self.interp.eval(x)
    }

    pub fn q_values(&self) -> &[f64] {
        self.interp.values()
    }

    pub fn nodes(&self) -> &[f64] {
        self.interp.nodes()
    }

    pub fn node_count(&self) -> usize {
        self.interp.values().len()
    }

    /// Chebyshev coefficients of `q` with the roundoff tail removed.
    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn sup_norm(&self) -> f64 {
        self.q_values().iter().fold(0.0_f64, |m, q| m.max(q.abs()))
    }

    pub fn min(&self) -> f64 {
        self.q_values().iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.q_values().iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `int_0^1 q(x) dx`, exact for the interpolant.
    pub fn mean(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(k, _)| k % 2 == 0)
            .map(|(k, c)| {
                let k = k as f64;
                c / (1.0 - k * k)
            })
            .sum()
    }

    /// `(h(1) / h(0))^(1/4)`.
    pub fn h_quarter_ratio(&self) -> f64 {
        (self.f1 / self.f0).powf((self.n as f64 - 2.0) / 4.0)
    }

    /// The potential of the reflected problem `x -> 1 - x`.
    pub fn reflected(&self) -> Self {
        let mut values = self.q_values().to_vec();
        values.reverse();
        Self::from_values(
            values,
            self.f1,
            self.f0,
            -self.lnh_prime1,
            -self.lnh_prime0,
            self.n,
        )
    }
}

/// Builds `q = (f^p)''/f^p - lambda f` at `node_count` Lobatto nodes.
///
/// With `g = f^p`, `g''/g = p f''/f + p (p - 1) (f'/f)^2`; both derivatives come
/// from the Chebyshev interpolant of `f`.
pub fn build_potential(profile: &WarpingProfile, node_count: usize) -> Result<Potential> {
    if node_count < MIN_NODE_COUNT {
        return Err(Error::InvalidArgument(format!(
            "node_count {node_count} below minimum {MIN_NODE_COUNT}"
        )));
    }
    let p = (profile.n as f64 - 2.0) / 4.0;
    let d1 = profile.derivative_coeffs(1);
    let d2 = chebyshev::derivative(&d1);
    let mut values = Vec::with_capacity(node_count);
    for x in chebyshev::lobatto_nodes(node_count) {
        let f = profile.value(x);
        if !(f > 0.0) {
            return Err(Error::NonPositiveProfile { x, value: f });
        }
        let q = if profile.n == 2 {
            -profile.lambda * f
        } else {
            let r1 = chebyshev::clenshaw(&d1, x) / f;
            let r2 = chebyshev::clenshaw(&d2, x) / f;
            p * r2 + p * (p - 1.0) * r1 * r1 - profile.lambda * f
        };
        values.push(q);
    }
    let f0 = profile.f0();
    let f1 = profile.f1();
    let (lnh_prime0, lnh_prime1) = if profile.n == 2 {
        (0.0, 0.0)
    } else {
        let k = (profile.n - 2) as f64;
        (
            k * chebyshev::clenshaw(&d1, 0.0) / f0,
            k * chebyshev::clenshaw(&d1, 1.0) / f1,
        )
    };
    Ok(Potential::from_values(
        values, f0, f1, lnh_prime0, lnh_prime1, profile.n,
    ))
}

/// Relative floor below which `Delta(z)` is treated as vanishing:
/// `ln(1e-8 e^{Re sqrt z} / (2 (1 + |sqrt z|)))`.
pub(crate) fn delta_floor_ln(re_sqrt: f64, abs_sqrt: f64) -> f64 {
    1e-8_f64.ln() + re_sqrt - (2.0 * (1.0 + abs_sqrt)).ln()
}

/// Checks that `lambda` is not a Dirichlet eigenvalue on any transversal mode
/// `m <= m_max`, i.e. `Delta(kappa_m)` stays away from zero.
///
/// Only modes with `kappa_m <= 4 max|q| + 16` are integrated; above that the
/// `sinh(sqrt z)/sqrt z` asymptotics keep `Delta` positive.
pub fn admissibility_check(
    profile: &WarpingProfile,
    potential: &Potential,
    m_max: usize,
) -> Result<()> {
    let cutoff = 4.0 * potential.sup_norm() + 16.0;
    for m in 0..=m_max {
        let kappa = transversal::kappa(profile.n, m);
        if kappa > cutoff {
            break;
        }
        let values = sturm_liouville::fundamental_at(potential, kappa)?;
        let root = kappa.sqrt();
        if values.delta.ln_abs() < delta_floor_ln(root, root) {
            return Err(Error::FrequencyOnDirichletSpectrum {
                m,
                kappa,
                delta: values.delta.value(),
            });
        }
    }
    Ok(())
}
