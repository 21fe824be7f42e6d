//! Chebyshev interpolation on the unit interval `[0, 1]`.
//!
//! Polynomials are stored as coefficients of `T_k(2x - 1)`. Grids are the
//! Chebyshev-Lobatto points ordered from `x = 0` to `x = 1`, so that node `j`
//! and node `N - 1 - j` are mirror images under `x -> 1 - x`.

use std::f64::consts::PI;

/// Chebyshev-Lobatto nodes on `[0, 1]`, ascending.
pub fn lobatto_nodes(count: usize) -> Vec<f64> {
    assert!(count >= 2, "need at least two Lobatto nodes");
    let last = (count - 1) as f64;
    (0..count)
        .map(|j| {
            // sin form is exactly antisymmetric about the midpoint
            let s = (PI * (2.0 * j as f64 - last) / (2.0 * last)).sin();
            0.5 + 0.5 * s
        })
        .collect()
}

/// Coefficients of the interpolant through `values` sampled at [`lobatto_nodes`].
pub fn values_to_coeffs(values: &[f64]) -> Vec<f64> {
    let count = values.len();
    assert!(count >= 2);
    let last = count - 1;
    let mut coeffs = vec![0.0; count];
    for (k, c) in coeffs.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (j, v) in values.iter().enumerate() {
            // node j sits at t = cos(pi (last - j) / last)
            let angle = PI * ((k * (last - j)) % (2 * last)) as f64 / last as f64;
            let w = if j == 0 || j == last { 0.5 } else { 1.0 };
            acc += w * v * angle.cos();
        }
        let scale = if k == 0 || k == last { 1.0 } else { 2.0 };
        *c = scale * acc / last as f64;
    }
    coeffs
}

/// Samples the polynomial at `count` Lobatto nodes.
pub fn coeffs_to_values(coeffs: &[f64], count: usize) -> Vec<f64> {
    lobatto_nodes(count).into_iter().map(|x| clenshaw(coeffs, x)).collect()
}

/// Interpolates `func` at `count` Lobatto nodes and returns the coefficients.
pub fn fit<F: Fn(f64) -> f64>(func: F, count: usize) -> Vec<f64> {
    let values: Vec<f64> = lobatto_nodes(count).into_iter().map(func).collect();
    values_to_coeffs(&values)
}

/// Drops trailing coefficients below `rel_tol * max |c|`, keeping at least one.
pub fn chop(coeffs: &mut Vec<f64>, rel_tol: f64) {
    let scale = coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    let cutoff = rel_tol * scale;
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.abs() <= cutoff) {
        coeffs.pop();
    }
}

/// Evaluates `sum c_k T_k(2x - 1)` by Clenshaw's recurrence.
pub fn clenshaw(coeffs: &[f64], x: f64) -> f64 {
    let t = 2.0 * x - 1.0;
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &c in coeffs.iter().skip(1).rev() {
        let b0 = 2.0 * t * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    coeffs.first().copied().unwrap_or(0.0) + t * b1 - b2
}

/// Coefficients of `d/dx` of the polynomial (including the chain-rule factor 2).
pub fn derivative(coeffs: &[f64]) -> Vec<f64> {
    let n = coeffs.len();
    if n <= 1 {
        return vec![0.0];
    }
    let mut d = vec![0.0; n + 1];
    for k in (1..n).rev() {
        d[k - 1] = d[k + 1] + 2.0 * k as f64 * coeffs[k];
    }
    d.truncate(n - 1);
    d[0] *= 0.5;
    d.iter_mut().for_each(|v| *v *= 2.0);
    d
}

/// Coefficients of the product of two series, `T_i T_j = (T_{i+j} + T_{|i-j|}) / 2`.
pub fn product(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            let half = 0.5 * ai * bj;
            out[i + j] += half;
            out[i.abs_diff(j)] += half;
        }
    }
    out
}

/// Coefficients of `x -> p(1 - x)`: odd modes change sign.
pub fn reflect(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .map(|(k, &c)| if k % 2 == 1 { -c } else { c })
        .collect()
}

/// Barycentric evaluator over Lobatto nodes.
#[derive(Debug, Clone)]
pub struct Barycentric {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    values: Vec<f64>,
}

impl Barycentric {
    pub fn new(values: Vec<f64>) -> Self {
        let count = values.len();
        let nodes = lobatto_nodes(count);
        let weights = (0..count)
            .map(|j| {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                if j == 0 || j == count - 1 {
                    0.5 * sign
                } else {
                    sign
                }
            })
            .collect();
        Barycentric {
            nodes,
            weights,
            values,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for ((&xj, &wj), &vj) in self.nodes.iter().zip(&self.weights).zip(&self.values) {
            let dx = x - xj;
            if dx == 0.0 {
                return vj;
            }
            let r = wj / dx;
            num += r * vj;
            den += r;
        }
        num / den
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
}
