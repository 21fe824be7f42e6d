//! Fundamental systems of `-u'' + q u = -z u` on `[0, 1]`.
//!
//! One forward integration of the pair `(c0, s0)` (`c0(0) = 1, c0'(0) = 0`,
//! `s0(0) = 0, s0'(0) = 1`) gives all three characteristic functions:
//! `Delta = s0(1)`, `D = c0(1)` and `E = c1(0) = s0'(1)`, the last from the unit
//! Wronskian of `(c0, s0)`.
//!
//! Both members share a single logarithmic scale that is bumped whenever the
//! state leaves `[0.1, 10]`, so `e^{sqrt z}` growth never overflows.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ode::{self, Tolerance};
use crate::scaled::{Scalar, ScaledValue};
use crate::warping::{delta_floor_ln, Potential};

/// Largest `|z|` accepted by [`fundamental_at`].
pub const MAX_ABS_Z: f64 = 1e9;

/// Absolute accuracy of the Dirichlet roots.
pub const ROOT_TOLERANCE: f64 = 1e-10;

/// `Delta`, `D`, `E` at one spectral point.
#[derive(Debug, Clone, Copy)]
pub struct FundamentalValues<T: Scalar = f64> {
    pub z: T,
    pub delta: ScaledValue<T>,
    pub dd: ScaledValue<T>,
    pub ee: ScaledValue<T>,
    /// `c0 s0' - c0' s0` at `x = 1`; equal to one in exact arithmetic.
    pub wronskian: ScaledValue<T>,
}

impl<T: Scalar> FundamentalValues<T> {
    /// `ln` of the floor under which `Delta` counts as vanishing.
    pub fn delta_floor_ln(&self) -> f64 {
        let root = self.z.principal_sqrt();
        delta_floor_ln(root.real_part().abs(), root.modulus())
    }

    pub fn is_near_root(&self) -> bool {
        self.delta.is_zero() || self.delta.ln_abs() < self.delta_floor_ln()
    }

    /// `M = -D / Delta`.
    pub fn m_function(&self) -> T {
        -self.dd.ratio(&self.delta)
    }

    /// `N = -E / Delta`.
    pub fn n_function(&self) -> T {
        -self.ee.ratio(&self.delta)
    }
}

fn integrate_pair<T: Scalar>(potential: &Potential, z: T, tol: Tolerance) -> Result<FundamentalValues<T>> {
    if !(z.modulus() <= MAX_ABS_Z) {
        return Err(Error::InvalidArgument(format!(
            "|z| = {:e} exceeds {MAX_ABS_Z:e}",
            z.modulus()
        )));
    }
    let one = T::from_real(1.0);
    let zero = T::from_real(0.0);
    let mut log_scale = 0.0;
    let end = ode::integrate(
        |x, y: &[T; 4]| {
            let w = z + T::from_real(potential.eval(x));
            [y[1], w * y[0], y[3], w * y[2]]
        },
        0.0,
        1.0,
        [one, zero, zero, one],
        tol,
        |y| {
            let size = y.iter().fold(0.0_f64, |m, v| m.max(v.modulus()));
            if (0.1..=10.0).contains(&size) {
                1.0
            } else {
                for v in y.iter_mut() {
                    *v = *v * (1.0 / size);
                }
                log_scale += size.ln();
                1.0 / size
            }
        },
    )?;
    let [c, dc, s, ds] = end;
    let wronskian = ScaledValue::new(c * ds - dc * s, 2.0 * log_scale);
    Ok(FundamentalValues {
        z,
        delta: ScaledValue::new(s, log_scale),
        dd: ScaledValue::new(c, log_scale),
        ee: ScaledValue::new(ds, log_scale),
        wronskian,
    })
}

/// `Delta(z)`, `D(z)`, `E(z)` for real `z`.
pub fn fundamental_at(potential: &Potential, z: f64) -> Result<FundamentalValues<f64>> {
    integrate_pair(potential, z, Tolerance::default())
}

/// Same as [`fundamental_at`] with caller-chosen tolerances.
pub fn fundamental_with(potential: &Potential, z: f64, tol: Tolerance) -> Result<FundamentalValues<f64>> {
    integrate_pair(potential, z, tol)
}

/// Complex `z`; same algorithm in complex arithmetic, without accuracy guarantees.
pub fn fundamental_at_complex(potential: &Potential, z: Complex64) -> Result<FundamentalValues<Complex64>> {
    integrate_pair(potential, z, Tolerance::default())
}

/// Weyl-Titchmarsh functions `(M(z), N(z))` for real `z`.
pub fn weyl_functions(potential: &Potential, z: f64) -> Result<(f64, f64)> {
    let values = fundamental_at(potential, z)?;
    weyl_from(&values)
}

/// Complex-argument Weyl-Titchmarsh functions.
pub fn weyl_functions_complex(potential: &Potential, z: Complex64) -> Result<(Complex64, Complex64)> {
    let values = fundamental_at_complex(potential, z)?;
    if values.is_near_root() {
        return Err(Error::AtCharacteristicRoot {
            z: z.re,
            magnitude: values.delta.ln_abs().exp(),
        });
    }
    Ok((values.m_function(), values.n_function()))
}

pub(crate) fn weyl_from(values: &FundamentalValues<f64>) -> Result<(f64, f64)> {
    if values.is_near_root() {
        return Err(Error::AtCharacteristicRoot {
            z: values.z,
            magnitude: values.delta.ln_abs().exp(),
        });
    }
    Ok((values.m_function(), values.n_function()))
}

/// Number of Dirichlet eigenvalues of `-d^2/dx^2 + q` below `energy`, from the
/// scaled Prüfer angle `tan(theta) = s u / u'`, `theta(0) = 0`.
pub fn dirichlet_count(potential: &Potential, energy: f64) -> Result<usize> {
    let theta = prufer_angle(potential, energy)?;
    Ok((theta / PI).floor().max(0.0) as usize)
}

fn prufer_angle(potential: &Potential, energy: f64) -> Result<f64> {
    let scale = (energy - potential.mean()).abs().max(1.0).sqrt();
    let end = ode::integrate(
        |x, y: &[f64; 1]| {
            let (sin, cos) = y[0].sin_cos();
            [scale * cos * cos + (energy - potential.eval(x)) / scale * sin * sin]
        },
        0.0,
        1.0,
        [0.0],
        Tolerance {
            rtol: 1e-10,
            atol: 1e-12,
        },
        |_| 1.0,
    )?;
    Ok(end[0])
}

fn delta_real(potential: &Potential, z: f64) -> Result<f64> {
    Ok(fundamental_at(potential, z)?.delta.value())
}

/// The first `count` roots `alpha_0 > alpha_1 > ...` of `Delta`, i.e. minus the
/// Dirichlet eigenvalues of `H = -d^2/dx^2 + q`.
///
/// Brackets come from Prüfer oscillation counts; each root is then polished on
/// the sign change of `Delta` itself.
pub fn dirichlet_alphas(potential: &Potential, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1".into()));
    }
    let (qmin, qmax) = (potential.min(), potential.max());
    let mut alphas: Vec<f64> = Vec::with_capacity(count);
    for j in 0..count {
        let base = ((j + 1) as f64 * PI).powi(2);
        let mut lo = base + qmin - 1.0;
        let mut hi = base + qmax + 1.0;
        if let Some(&prev) = alphas.last() {
            lo = lo.max(-prev);
        }
        let (mut count_lo, mut count_hi) = (dirichlet_count(potential, lo)?, dirichlet_count(potential, hi)?);
        let mut iterations = 0;
        // narrow until exactly one eigenvalue is enclosed
        while !(count_lo == j && count_hi == j + 1) {
            iterations += 1;
            if iterations > 200 || count_lo > j || count_hi <= j {
                return Err(Error::RootSearchFailure {
                    index: j,
                    lo,
                    hi,
                    count_lo,
                    count_hi,
                });
            }
            let mid = 0.5 * (lo + hi);
            let c = dirichlet_count(potential, mid)?;
            if c <= j {
                lo = mid;
                count_lo = c;
            } else {
                hi = mid;
                count_hi = c;
            }
        }
        let energy = polish_root(potential, lo, hi, j)?;
        alphas.push(-energy);
    }
    Ok(alphas)
}

/// Illinois iteration on `E -> Delta(-E)` inside a bracket containing one root.
fn polish_root(potential: &Potential, mut lo: f64, mut hi: f64, index: usize) -> Result<f64> {
    let mut f_lo = delta_real(potential, -lo)?;
    let mut f_hi = delta_real(potential, -hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::RootSearchFailure {
            index,
            lo,
            hi,
            count_lo: index,
            count_hi: index + 1,
        });
    }
    let mut side = 0i8;
    for _ in 0..300 {
        if hi - lo <= ROOT_TOLERANCE {
            break;
        }
        let mut mid = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        if !(mid > lo && mid < hi) {
            mid = 0.5 * (lo + hi);
        }
        let f_mid = delta_real(potential, -mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
            if side == -1 {
                f_hi *= 0.5;
            }
            side = -1;
        } else {
            hi = mid;
            f_hi = f_mid;
            if side == 1 {
                f_lo *= 0.5;
            }
            side = 1;
        }
        // secant steps stop shrinking the far side near convergence
        if (hi - lo) < 4.0 * f64::EPSILON * hi.abs().max(1.0) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `alphas` extended to `total` entries with `-(k+1)^2 pi^2 - int q`.
pub fn extend_alphas(potential: &Potential, alphas: &[f64], total: usize) -> Vec<f64> {
    let shift = potential.mean();
    let mut out = alphas.to_vec();
    for k in alphas.len()..total {
        out.push(-((k + 1) as f64 * PI).powi(2) - shift);
    }
    out
}

/// `C prod_{k < terms} (1 - z / alpha_k)`.
pub fn hadamard_truncated(alphas: &[f64], normalization: f64, z: f64, terms: usize) -> Result<f64> {
    if terms > alphas.len() {
        return Err(Error::InvalidArgument(format!(
            "{terms} terms requested but only {} roots given",
            alphas.len()
        )));
    }
    Ok(alphas[..terms]
        .iter()
        .fold(normalization, |acc, &a| acc * (1.0 - z / a)))
}
