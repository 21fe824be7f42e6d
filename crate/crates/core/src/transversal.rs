//! Spectrum of the Laplacian on the round sphere `S^{n-1}`.

use std::f64::consts::PI;

/// `kappa_m = m (m + n - 2)`.
pub fn kappa(n: usize, m: usize) -> f64 {
    let m = m as f64;
    m * (m + n as f64 - 2.0)
}

/// Dimension of the degree-`m` spherical harmonics on `S^{n-1}`.
pub fn multiplicity(n: usize, m: usize) -> usize {
    assert!(n >= 2, "sphere dimension must be at least 1");
    if n == 2 {
        return if m == 0 { 1 } else { 2 };
    }
    // (2m + n - 2)/(n - 2) * C(m + n - 3, m), evaluated as
    // (2m + n - 2) * (m + n - 3)! / (m! (n - 2)!) in integer steps
    let mut binom: u128 = 1;
    for i in 1..=m as u128 {
        binom = binom * (i + n as u128 - 3) / i;
    }
    let num = (2 * m + n - 2) as u128 * binom;
    (num / (n as u128 - 2)) as usize
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransversalEntry {
    pub m: usize,
    pub kappa: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransversalSpectrum {
    pub n: usize,
    pub entries: Vec<TransversalEntry>,
}

impl TransversalSpectrum {
    /// Eigenvalues repeated according to multiplicity, ascending.
    pub fn with_multiplicity(&self) -> Vec<f64> {
        self.entries
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.kappa, e.multiplicity))
            .collect()
    }
}

pub fn transversal_spectrum(n: usize, m_max: usize) -> TransversalSpectrum {
    let entries = (0..=m_max)
        .map(|m| TransversalEntry {
            m,
            kappa: kappa(n, m),
            multiplicity: multiplicity(n, m),
        })
        .collect();
    TransversalSpectrum { n, entries }
}

/// Volume of the unit ball in `R^d`.
pub fn unit_ball_volume(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(d - 2) * 2.0 * PI / d as f64,
    }
}

/// Volume of the round unit sphere `S^{d}`.
pub fn unit_sphere_volume(d: usize) -> f64 {
    (d + 1) as f64 * unit_ball_volume(d + 1)
}

/// Weyl coefficient `c(K) = (2 pi)^2 / (omega vol K)^{2/(n-1)}` for `K = S^{n-1}`,
/// `omega` the volume of the unit ball in `R^{n-1}`.
pub fn weyl_coefficient(n: usize) -> f64 {
    assert!(n >= 2);
    let d = n - 1;
    let base = unit_ball_volume(d) * unit_sphere_volume(d);
    (2.0 * PI).powi(2) / base.powf(2.0 / d as f64)
}
