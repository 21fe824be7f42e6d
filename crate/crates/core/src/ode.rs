//! Adaptive Dormand-Prince 5(4) integration of small fixed-size systems.

use crate::error::{Error, Result};
use crate::scaled::Scalar;

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rtol: 1e-12,
            atol: 1e-14,
        }
    }
}

const MAX_STEPS: usize = 20_000_000;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn combine<T: Scalar, const D: usize>(y: &[T; D], h: f64, terms: &[(f64, &[T; D])]) -> [T; D] {
    let mut out = *y;
    for i in 0..D {
        let mut acc = T::from_real(0.0);
        for &(a, k) in terms {
            if a != 0.0 {
                acc = acc + k[i] * a;
            }
        }
        out[i] = out[i] + acc * h;
    }
    out
}

/// Integrates `y' = rhs(x, y)` from `x0` to `x1 > x0`.
///
/// After every accepted step `after_step` may rescale the state in place and
/// must return the factor it applied (1.0 for none). The factor is also applied
/// to the stored first stage, which is only valid for linear homogeneous systems.
pub fn integrate<T, const D: usize, F, G>(
    rhs: F,
    x0: f64,
    x1: f64,
    y0: [T; D],
    tol: Tolerance,
    mut after_step: G,
) -> Result<[T; D]>
where
    T: Scalar,
    F: Fn(f64, &[T; D]) -> [T; D],
    G: FnMut(&mut [T; D]) -> f64,
{
    assert!(x1 > x0, "integration runs forward");
    let span = x1 - x0;
    let mut x = x0;
    let mut y = y0;
    let mut k1 = rhs(x, &y);

    let ynorm = y.iter().fold(0.0_f64, |m, v| m.max(v.modulus()));
    let fnorm = k1.iter().fold(0.0_f64, |m, v| m.max(v.modulus()));
    let rate = if ynorm > 0.0 { fnorm / ynorm } else { fnorm };
    let mut h = if rate > 0.0 {
        (0.01 / rate).min(span)
    } else {
        span * 0.01
    };
    let h_min = span * 1e-15;

    for _ in 0..MAX_STEPS {
        if x >= x1 {
            return Ok(y);
        }
        let last = x + h >= x1;
        if last {
            h = x1 - x;
        }
        let k2 = rhs(x + C2 * h, &combine(&y, h, &[(A21, &k1)]));
        let k3 = rhs(x + C3 * h, &combine(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(
            x + C4 * h,
            &combine(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
        );
        let k5 = rhs(
            x + C5 * h,
            &combine(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = rhs(
            x + h,
            &combine(
                &y,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ),
        );
        let y_new = combine(
            &y,
            h,
            &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
        );
        let k7 = rhs(x + h, &y_new);

        let mut err_sq = 0.0;
        for i in 0..D {
            let e = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7)
                * h;
            let sc = tol.atol + tol.rtol * y[i].modulus().max(y_new[i].modulus());
            let r = e.modulus() / sc;
            err_sq += r * r;
        }
        let err = (err_sq / D as f64).sqrt();
        if !err.is_finite() {
            h *= 0.1;
            if h < h_min {
                return Err(Error::IntegrationFailure { x, step: h });
            }
            continue;
        }

        if err <= 1.0 {
            x = if last { x1 } else { x + h };
            y = y_new;
            k1 = k7;
            let factor = after_step(&mut y);
            if factor != 1.0 {
                for v in k1.iter_mut() {
                    *v = *v * factor;
                }
            }
            let grow = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            h *= grow;
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
            if h < h_min {
                return Err(Error::IntegrationFailure { x, step: h });
            }
        }
    }
    Err(Error::IntegrationFailure { x, step: h })
}
