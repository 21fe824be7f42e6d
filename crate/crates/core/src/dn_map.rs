//! Restricted Dirichlet-to-Neumann blocks and the Steklov spectrum.
//!
//! On the span of `(Y_m, 0)` and `(0, Y_m)` the DN map acts as the 2x2 matrix
//!
//! ```text
//! [ -M/sqrt f0 + (ln h)'(0)/(4 sqrt f0)     -(h1/h0)^{1/4} / (sqrt f0 Delta) ]
//! [ -(h0/h1)^{1/4} / (sqrt f1 Delta)        -N/sqrt f1 - (ln h)'(1)/(4 sqrt f1) ]
//! ```
//!
//! with `M`, `N`, `Delta` evaluated at `mu = kappa_m` and `h = f^{n-2}`.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sturm_liouville;
use crate::transversal;
use crate::warping::{self, Potential, WarpingProfile};

pub const DEFAULT_M_MAX: usize = 40;

/// Relative tolerance under which `f(0)` and `f(1)` count as equal when
/// labelling branches.
const EQUAL_ENDS_TOL: f64 = 1e-12;

/// Relative diagonal gap treated as an exact tie when `f(0) = f(1)`.
const DIAGONAL_TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Branch {
    /// Family attached to the boundary `x = 1`.
    #[serde(rename = "-")]
    Minus,
    /// Family attached to the boundary `x = 0`.
    #[serde(rename = "+")]
    Plus,
}

impl Branch {
    pub fn symbol(self) -> &'static str {
        match self {
            Branch::Minus => "-",
            Branch::Plus => "+",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "-" => Some(Branch::Minus),
            "+" => Some(Branch::Plus),
            _ => None,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DNBlock {
    pub mu: f64,
    pub m_index: usize,
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
    pub f0: f64,
    pub f1: f64,
}

impl DNBlock {
    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    /// `(a11 - a22)^2 + 4 a12 a21`, nonnegative whenever the off-diagonal
    /// product is.
    pub fn discriminant(&self) -> f64 {
        let d = self.a11 - self.a22;
        d * d + 4.0 * self.a12 * self.a21
    }

    /// A block with explicit entries and symmetric boundary geometry.
    pub fn from_entries(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        DNBlock {
            mu: f64::NAN,
            m_index: 0,
            a11,
            a12,
            a21,
            a22,
            f0: 1.0,
            f1: 1.0,
        }
    }
}

/// Assembles the DN block at transversal eigenvalue `mu`.
pub fn dn_block(potential: &Potential, mu: f64, m_index: usize) -> Result<DNBlock> {
    let values = sturm_liouville::fundamental_at(potential, mu)?;
    let (m_fn, n_fn) = sturm_liouville::weyl_from(&values)?;
    let inv_delta = values.delta.recip().value();
    let (f0, f1) = (potential.f0, potential.f1);
    let (r0, r1) = (f0.sqrt(), f1.sqrt());
    let ratio = potential.h_quarter_ratio();
    Ok(DNBlock {
        mu,
        m_index,
        a11: -m_fn / r0 + potential.lnh_prime0 / (4.0 * r0),
        a12: -ratio * inv_delta / r0,
        a21: -inv_delta / (ratio * r1),
        a22: -n_fn / r1 - potential.lnh_prime1 / (4.0 * r1),
        f0,
        f1,
    })
}

/// Both eigenvalues `(lambda_minus, lambda_plus)` of a block.
///
/// `lambda_plus` belongs to the boundary `x = 0`, `lambda_minus` to `x = 1`.
/// For `f(0) != f(1)` the asymptotic slopes fix the pairing with the sorted
/// roots; otherwise the root on the side of `a11` is `lambda_plus`, and the
/// upper root when the diagonal entries agree to roundoff.
pub fn block_eigenvalues(block: &DNBlock) -> (f64, f64) {
    let tr = block.trace();
    let root = block.discriminant().max(0.0).sqrt();
    let big = 0.5 * (tr + tr.signum() * root);
    let (lo, hi) = if big == 0.0 {
        (0.0, 0.0)
    } else {
        let other = block.det() / big;
        if big >= other {
            (other, big)
        } else {
            (big, other)
        }
    };
    let scale = block.f0.abs().max(block.f1.abs());
    let diagonal_gap = block.a11 - block.a22;
    let plus_is_high = if (block.f0 - block.f1).abs() > EQUAL_ENDS_TOL * scale {
        block.f0 < block.f1
    } else if diagonal_gap.abs() <= DIAGONAL_TIE_TOL * (1.0 + block.a11.abs() + block.a22.abs()) {
        // symmetric block: no end is preferred, keep "+" on the upper root
        true
    } else {
        diagonal_gap > 0.0
    };
    if plus_is_high {
        (lo, hi)
    } else {
        (hi, lo)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumEntry {
    pub value: f64,
    pub branch: Branch,
    pub m: usize,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteklovSpectrum {
    pub n: usize,
    pub lambda: f64,
    pub m_max: usize,
    /// Ordered by `m`, then branch (`-` before `+`).
    pub entries: Vec<SpectrumEntry>,
    /// Both branches are strictly increasing in `m` from this index on.
    pub monotone_from: usize,
}

impl SteklovSpectrum {
    /// Builds a spectrum from entries, sorting them and recording the
    /// monotonicity crossover.
    pub fn from_entries(n: usize, lambda: f64, mut entries: Vec<SpectrumEntry>) -> Self {
        entries.sort_by(|a, b| (a.m, a.branch).cmp(&(b.m, b.branch)));
        let m_max = entries.iter().map(|e| e.m).max().unwrap_or(0);
        let monotone_from = crossover_index(&entries, m_max);
        SteklovSpectrum {
            n,
            lambda,
            m_max,
            entries,
            monotone_from,
        }
    }

    /// All eigenvalues repeated by multiplicity, ascending.
    pub fn sorted_values(&self) -> Vec<f64> {
        let mut values: Vec<f64> = self
            .entries
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.value, e.multiplicity))
            .collect();
        values.sort_by(f64::total_cmp);
        values
    }

    /// `(m, value)` pairs of one branch, ascending in `m`.
    pub fn branch(&self, branch: Branch) -> Vec<(usize, f64)> {
        self.entries
            .iter()
            .filter(|e| e.branch == branch)
            .map(|e| (e.m, e.value))
            .collect()
    }

    pub fn min_value(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.value)
            .fold(f64::INFINITY, f64::min)
    }
}

fn crossover_index(entries: &[SpectrumEntry], m_max: usize) -> usize {
    let mut from = 0;
    for branch in [Branch::Minus, Branch::Plus] {
        let values: Vec<(usize, f64)> = entries
            .iter()
            .filter(|e| e.branch == branch)
            .map(|e| (e.m, e.value))
            .collect();
        for w in values.windows(2) {
            if w[1].1 <= w[0].1 {
                from = from.max(w[1].0);
            }
        }
    }
    from.min(m_max)
}

/// Steklov spectrum for transversal modes `m = 0..=m_max`.
pub fn steklov_spectrum(
    profile: &WarpingProfile,
    m_max: usize,
    node_count: usize,
) -> Result<SteklovSpectrum> {
    let potential = warping::build_potential(profile, node_count)?;
    spectrum_from_potential(profile, &potential, m_max)
}

/// Same as [`steklov_spectrum`] with a prebuilt potential.
pub fn spectrum_from_potential(
    profile: &WarpingProfile,
    potential: &Potential,
    m_max: usize,
) -> Result<SteklovSpectrum> {
    warping::admissibility_check(profile, potential, m_max)?;
    let n = profile.dimension();
    let per_mode: Vec<[SpectrumEntry; 2]> = (0..=m_max)
        .into_par_iter()
        .map(|m| {
            let block = dn_block(potential, transversal::kappa(n, m), m).map_err(|e| match e {
                Error::AtCharacteristicRoot { magnitude, .. } => Error::FrequencyOnDirichletSpectrum {
                    m,
                    kappa: transversal::kappa(n, m),
                    delta: magnitude,
                },
                other => other,
            })?;
            let (minus, plus) = block_eigenvalues(&block);
            let multiplicity = transversal::multiplicity(n, m);
            Ok([
                SpectrumEntry {
                    value: minus,
                    branch: Branch::Minus,
                    m,
                    multiplicity,
                },
                SpectrumEntry {
                    value: plus,
                    branch: Branch::Plus,
                    m,
                    multiplicity,
                },
            ])
        })
        .collect::<Result<_>>()?;
    let entries = per_mode.into_iter().flatten().collect();
    let mut spectrum = SteklovSpectrum::from_entries(n, profile.lambda(), entries);
    spectrum.m_max = m_max;
    Ok(spectrum)
}

/// Number of eigenvalues `<= t`, counted with multiplicity.
pub fn counting_function(spectrum: &SteklovSpectrum, t: f64) -> usize {
    spectrum
        .entries
        .iter()
        .filter(|e| e.value <= t)
        .map(|e| e.multiplicity)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::warping::build_potential;

    fn coth(x: f64) -> f64 {
        1.0 / x.tanh()
    }

    #[test]
    fn trivial_block_at_zero() {
        let one = WarpingProfile::constant(1.0, 3, 0.0).unwrap();
        let q = build_potential(&one, 64).unwrap();
        let b = dn_block(&q, 0.0, 0).unwrap();
        for (got, want) in [(b.a11, 1.0), (b.a12, -1.0), (b.a21, -1.0), (b.a22, 1.0)] {
            assert!((got - want).abs() < 1e-13);
        }
    }

    #[test]
    fn trivial_block_at_one() {
        let one = WarpingProfile::constant(1.0, 4, 0.0).unwrap();
        let q = build_potential(&one, 64).unwrap();
        let b = dn_block(&q, 1.0, 1).unwrap();
        assert!((b.a11 - coth(1.0)).abs() < 1e-11);
        assert!((b.a22 - coth(1.0)).abs() < 1e-11);
        assert!((b.a12 + 1.0 / 1f64.sinh()).abs() < 1e-11);
        assert!((b.a12 + 0.8509181).abs() < 1e-7);
    }

    #[test]
    fn off_diagonals_decay_exponentially() {
        let one = WarpingProfile::constant(1.0, 3, 0.0).unwrap();
        let q = build_potential(&one, 64).unwrap();
        for &mu in &[100.0, 400.0, 2500.0] {
            let b = dn_block(&q, mu, 0).unwrap();
            let r: f64 = mu.sqrt();
            let rate = b.a12.abs() / (r * (-r).exp());
            assert!((rate - 2.0).abs() < 1e-6, "mu = {mu}, rate = {rate}");
        }
    }

    #[test]
    fn block_invariants_for_asymmetric_profile() {
        let p = WarpingProfile::from_fn(|x| (1.0 + 0.2 * x).powi(2), 3, 0.5, 16).unwrap();
        let q = build_potential(&p, 64).unwrap();
        let b = dn_block(&q, 6.0, 2).unwrap();
        let values = sturm_liouville::fundamental_at(&q, 6.0).unwrap();
        let delta = values.delta.value();
        let prod = 1.0 / ((p.f0() * p.f1()).sqrt() * delta * delta);
        assert!((b.a12 * b.a21 / prod - 1.0).abs() < 1e-12);
        let expected_ratio = (p.f1() / p.f0()).sqrt() * (p.f1() / p.f0()).sqrt();
        assert!((b.a12 / b.a21 / expected_ratio - 1.0).abs() < 1e-10);
        assert!(b.discriminant() > 0.0);
    }

    #[test]
    fn cylinder_eigenvalues() {
        let one = WarpingProfile::constant(1.0, 3, 0.0).unwrap();
        let q = build_potential(&one, 64).unwrap();
        let b = dn_block(&q, 2.0, 1).unwrap();
        let (lo, hi) = block_eigenvalues(&b);
        let r = 2f64.sqrt();
        assert!((lo - r * (r / 2.0).tanh()).abs() < 1e-10);
        assert!((hi - r * coth(r / 2.0)).abs() < 1e-10);
    }

    #[test]
    fn explicit_block_and_vieta() {
        let b = DNBlock::from_entries(1.0, -1.0, -1.0, 1.0);
        assert_eq!(block_eigenvalues(&b), (0.0, 2.0));
        let b = DNBlock::from_entries(3.7, 1e-9, 2e-9, -0.4);
        let (x, y) = block_eigenvalues(&b);
        assert!(((x + y) - b.trace()).abs() <= 1e-12 * b.trace().abs());
        assert!((x * y / b.det() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn circle_cylinder_spectrum() {
        let one = WarpingProfile::constant(1.0, 2, 0.0).unwrap();
        let s = steklov_spectrum(&one, 2, 64).unwrap();
        let expected = [
            (0.0, 1),
            (2.0, 1),
            ((0.5f64).tanh(), 2),
            (coth(0.5), 2),
            (2.0 * 1f64.tanh(), 2),
            (2.0 * coth(1.0), 2),
        ];
        assert_eq!(s.entries.len(), 6);
        for (e, (v, mult)) in s.entries.iter().zip(expected) {
            assert!((e.value - v).abs() < 1e-10, "{} vs {v}", e.value);
            assert_eq!(e.multiplicity, mult);
        }
        assert_eq!(counting_function(&s, 0.5), 3);
        assert_eq!(counting_function(&s, -1.0), 0);
    }

    #[test]
    fn zero_frequency_contains_zero() {
        let p = WarpingProfile::from_fn(|x| 1.0 + 0.3 * (2.0 * x).sin(), 3, 0.0, 32).unwrap();
        let s = steklov_spectrum(&p, 10, 64).unwrap();
        assert!(s.min_value().abs() < 1e-8);
    }
}
