//! Fixtures shared by the integration tests.

#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use steklov::dn_map::steklov_spectrum;
use steklov::warping::{build_potential, DEFAULT_NODE_COUNT};
use steklov::WarpingProfile;

/// `exp(1 - 1/(1 - t^2))` with `t = (x - 0.5) / 0.2`: height one, support `[0.3, 0.7]`.
pub fn bump(x: f64) -> f64 {
    let t = (x - 0.5) / 0.2;
    if t.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - t * t)).exp()
    }
}

/// Solves the tridiagonal system with constant off-diagonal `-1` and diagonal `d`.
fn solve_constant_tridiagonal(d: f64, rhs: &[f64]) -> Vec<f64> {
    let n = rhs.len();
    let mut c = vec![0.0; n];
    let mut y = vec![0.0; n];
    let mut denom = d;
    c[0] = -1.0 / denom;
    y[0] = rhs[0] / denom;
    for i in 1..n {
        denom = d + c[i - 1];
        c[i] = -1.0 / denom;
        y[i] = (rhs[i] + y[i - 1]) / denom;
    }
    for i in (0..n - 1).rev() {
        y[i] -= c[i] * y[i + 1];
    }
    y
}

/// Finite-difference DN matrix of `-Delta u = lambda u` on the flat cylinder
/// `[0, 1] x S^1` (`f = 1`, `n = 2`) with `nx` intervals in `x` and `ntheta`
/// points on the circle. Returns all eigenvalues, ascending.
///
/// The periodic second-difference matrix in `theta` is diagonalized with a
/// dense symmetric eigensolver; each of its modes gives a 2x2 boundary block
/// from two tridiagonal solves in `x`, and the blocks are reassembled into the
/// full `2 ntheta` square DN matrix before its own eigendecomposition.
pub fn finite_difference_dn(lambda: f64, nx: usize, ntheta: usize) -> Vec<f64> {
    let ht = 2.0 * std::f64::consts::PI / ntheta as f64;
    let lap = DMatrix::from_fn(ntheta, ntheta, |i, j| {
        let d = (i as isize - j as isize).rem_euclid(ntheta as isize) as usize;
        match d {
            0 => 2.0 / (ht * ht),
            1 => -1.0 / (ht * ht),
            d if d == ntheta - 1 => -1.0 / (ht * ht),
            _ => 0.0,
        }
    });
    let eig = SymmetricEigen::new(lap);
    let hx = 1.0 / nx as f64;

    let mut dn = DMatrix::<f64>::zeros(2 * ntheta, 2 * ntheta);
    for k in 0..ntheta {
        let shift = eig.eigenvalues[k] - lambda;
        let diag = 2.0 + hx * hx * shift;
        // interior unknowns u_1 .. u_{nx-1}; boundary data enters the first or last row
        let mut left = vec![0.0; nx - 1];
        left[0] = 1.0;
        let mut right = vec![0.0; nx - 1];
        right[nx - 2] = 1.0;
        let ul = solve_constant_tridiagonal(diag, &left);
        let ur = solve_constant_tridiagonal(diag, &right);
        // outward derivatives, second order through u'' = shift u at the boundary
        let out0 = |u0: f64, u1: f64| -((u1 - u0) / hx - 0.5 * hx * shift * u0);
        let out1 = |un: f64, un1: f64| (un - un1) / hx + 0.5 * hx * shift * un;
        let block = [
            [out0(1.0, ul[0]), out0(0.0, ur[0])],
            [out1(0.0, ul[nx - 2]), out1(1.0, ur[nx - 2])],
        ];
        let v = eig.eigenvectors.column(k);
        for (e, row) in block.iter().enumerate() {
            for (f, &b) in row.iter().enumerate() {
                for i in 0..ntheta {
                    for j in 0..ntheta {
                        dn[(e * ntheta + i, f * ntheta + j)] += b * v[i] * v[j];
                    }
                }
            }
        }
    }
    let sym = 0.5 * (&dn + dn.transpose());
    let mut values: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

/// A random smooth profile `f = exp(g)` with `g` a low-degree Chebyshev series.
pub struct RandomCase {
    pub profile: WarpingProfile,
    pub q_sup: f64,
}

/// Draws `count` admissible random profiles with `|q|_inf <= q_bound`.
pub fn random_profiles(seed: u64, count: usize, q_bound: f64, m_max: usize) -> Vec<RandomCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.random_range(2..=5usize);
        let lambda = rng.random_range(0.0..3.0);
        let coeffs: Vec<f64> = (0..5)
            .map(|k| {
                let width = if k == 0 { 0.5 } else { 0.5 / k as f64 };
                rng.random_range(-width..width)
            })
            .collect();
        let g = move |x: f64| steklov::chebyshev::clenshaw(&coeffs, x);
        let Ok(profile) = WarpingProfile::from_fn(move |x| g(x).exp(), n, lambda, 48) else {
            continue;
        };
        let Ok(potential) = build_potential(&profile, DEFAULT_NODE_COUNT) else {
            continue;
        };
        let q_sup = potential.sup_norm();
        if q_sup > q_bound || steklov_spectrum(&profile, m_max, DEFAULT_NODE_COUNT).is_err() {
            continue;
        }
        out.push(RandomCase { profile, q_sup });
    }
    out
}
