//! Boundary data and isospectrality probes read off Steklov spectra.
//!
//! Both eigenvalue families are asymptotically affine in `sqrt(kappa_m)`:
//! the `+` family with slope `1/sqrt f(0)` and intercept `(ln h)'(0)/(4 sqrt f(0))`,
//! the `-` family with slope `1/sqrt f(1)` and intercept `-(ln h)'(1)/(4 sqrt f(1))`.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;

use crate::dn_map::{self, Branch, SteklovSpectrum};
use crate::error::{Error, Result};
use crate::regression::{self, LineFit};
use crate::transversal;
use crate::warping::{self, WarpingProfile};

/// Largest mode index a spectrum must reach before its branches are split.
pub const MIN_SPLIT_MODE: usize = 20;

/// Shortest admissible fit window for [`recover_boundary`].
pub const MIN_FIT_LENGTH: usize = 10;

/// Slopes closer than this are treated as equal.
const EQUAL_SLOPE_TOL: f64 = 1e-3;

/// Best assignment residual above this fraction of the runner-up is ambiguous.
const AMBIGUITY_RATIO: f64 = 0.9;

/// One spectral value with its mode index and, if known, its branch tag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    pub m: usize,
    pub value: f64,
    pub branch: Option<Branch>,
}

/// Tagged points of a computed spectrum.
pub fn spectral_points(spectrum: &SteklovSpectrum) -> Vec<SpectralPoint> {
    spectrum
        .entries
        .iter()
        .map(|e| SpectralPoint {
            m: e.m,
            value: e.value,
            branch: Some(e.branch),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchSplit {
    /// `(m, value)` ascending in `m`.
    pub minus: Vec<(usize, f64)>,
    pub plus: Vec<(usize, f64)>,
    /// Line fits of value against `sqrt(kappa_m)` over the upper half of the modes.
    pub minus_fit: LineFit,
    pub plus_fit: LineFit,
    /// Whether the equal-slope fallback was used.
    pub equal_slopes: bool,
}

struct ModePair {
    m: usize,
    s: f64,
    lo: SpectralPoint,
    hi: SpectralPoint,
}

fn cost(line: &LineFit, s: f64, value: f64) -> f64 {
    (value - line.predict(s)).powi(2)
}

fn fit_assignment(pairs: &[&ModePair], swap: &[bool]) -> Result<(LineFit, LineFit)> {
    let (mut xa, mut ya, mut xb, mut yb) = (vec![], vec![], vec![], vec![]);
    for (p, &sw) in pairs.iter().zip(swap) {
        let (a, b) = if sw { (p.hi, p.lo) } else { (p.lo, p.hi) };
        xa.push(p.s);
        ya.push(a.value);
        xb.push(p.s);
        yb.push(b.value);
    }
    let degenerate = || Error::DegenerateFit("branch lines need two distinct modes".into());
    Ok((
        regression::fit_line(&xa, &ya).ok_or_else(degenerate)?,
        regression::fit_line(&xb, &yb).ok_or_else(degenerate)?,
    ))
}

/// Splits the points into the two eigenvalue families.
///
/// Every mode must carry exactly two points. Lines in `sqrt(kappa_m)` are fit
/// over the upper half of the modes, starting from the sorted pairing and
/// alternating assignment and refit until stable. When the slopes agree
/// within `1e-3` each mode is paired by order instead: the smaller value
/// joins the line with the smaller intercept.
///
/// Names follow the majority of the tags when every point is tagged. Untagged
/// data cannot tell the two ends apart (the reflection `x -> 1 - x` preserves
/// the spectrum), so the steeper line is called `+`, or with equal slopes the
/// line with the larger intercept.
pub fn split_branches(n: usize, points: &[SpectralPoint]) -> Result<BranchSplit> {
    let mut by_mode: BTreeMap<usize, Vec<SpectralPoint>> = BTreeMap::new();
    for p in points {
        by_mode.entry(p.m).or_default().push(*p);
    }
    let mut pairs = Vec::with_capacity(by_mode.len());
    for (m, mut pts) in by_mode {
        if pts.len() != 2 {
            return Err(Error::InvalidArgument(format!(
                "mode {m} has {} values, expected 2",
                pts.len()
            )));
        }
        pts.sort_by(|a, b| a.value.total_cmp(&b.value));
        pairs.push(ModePair {
            m,
            s: transversal::kappa(n, m).sqrt(),
            lo: pts[0],
            hi: pts[1],
        });
    }
    let top = pairs.last().map_or(0, |p| p.m);
    if top < MIN_SPLIT_MODE {
        return Err(Error::InvalidArgument(format!(
            "branch split needs modes up to at least {MIN_SPLIT_MODE}, got {top}"
        )));
    }

    let window: Vec<&ModePair> = pairs.iter().filter(|p| 2 * p.m >= top).collect();
    let mut swap = vec![false; window.len()];
    let (mut line_a, mut line_b) = fit_assignment(&window, &swap)?;
    for _ in 0..50 {
        let next: Vec<bool> = window
            .iter()
            .map(|p| {
                let keep = cost(&line_a, p.s, p.lo.value) + cost(&line_b, p.s, p.hi.value);
                let flip = cost(&line_a, p.s, p.hi.value) + cost(&line_b, p.s, p.lo.value);
                flip < keep
            })
            .collect();
        if next == swap {
            break;
        }
        swap = next;
        (line_a, line_b) = fit_assignment(&window, &swap)?;
    }

    let equal_slopes = (line_a.slope - line_b.slope).abs() < EQUAL_SLOPE_TOL;
    let assign_all: Vec<bool> = if equal_slopes {
        swap = vec![false; window.len()];
        (line_a, line_b) = fit_assignment(&window, &swap)?;
        vec![false; pairs.len()]
    } else {
        let mut best = 0.0;
        let mut margin = f64::INFINITY;
        for p in &window {
            let keep = cost(&line_a, p.s, p.lo.value) + cost(&line_b, p.s, p.hi.value);
            let flip = cost(&line_a, p.s, p.hi.value) + cost(&line_b, p.s, p.lo.value);
            best += keep.min(flip);
            if p.hi.value - p.lo.value > 1e-9 * p.hi.value.abs() {
                margin = margin.min((keep - flip).abs());
            }
        }
        let alternative = best + margin;
        if best > AMBIGUITY_RATIO * alternative {
            return Err(Error::BranchAmbiguity { best, alternative });
        }
        pairs
            .iter()
            .map(|p| {
                let keep = cost(&line_a, p.s, p.lo.value) + cost(&line_b, p.s, p.hi.value);
                let flip = cost(&line_a, p.s, p.hi.value) + cost(&line_b, p.s, p.lo.value);
                flip < keep
            })
            .collect()
    };

    let mut a_points = Vec::with_capacity(pairs.len());
    let mut b_points = Vec::with_capacity(pairs.len());
    for (p, &sw) in pairs.iter().zip(&assign_all) {
        let (a, b) = if sw { (p.hi, p.lo) } else { (p.lo, p.hi) };
        a_points.push(a);
        b_points.push(b);
    }

    let plus_votes = |pts: &[SpectralPoint]| {
        pts.iter()
            .filter(|p| p.branch == Some(Branch::Plus))
            .count() as isize
            - pts.iter().filter(|p| p.branch == Some(Branch::Minus)).count() as isize
    };
    let fully_tagged = points.iter().all(|p| p.branch.is_some());
    let a_is_plus = if fully_tagged {
        plus_votes(&a_points) > plus_votes(&b_points)
    } else if equal_slopes {
        line_a.intercept > line_b.intercept
    } else {
        line_a.slope > line_b.slope
    };
    let strip = |pts: Vec<SpectralPoint>| pts.into_iter().map(|p| (p.m, p.value)).collect();
    let (plus, minus, plus_fit, minus_fit) = if a_is_plus {
        (strip(a_points), strip(b_points), line_a, line_b)
    } else {
        (strip(b_points), strip(a_points), line_b, line_a)
    };
    Ok(BranchSplit {
        minus,
        plus,
        minus_fit,
        plus_fit,
        equal_slopes,
    })
}

/// Boundary invariants recovered from a spectrum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryData {
    pub f0_hat: f64,
    pub f1_hat: f64,
    /// Estimate of `(ln h)'(0) / (4 sqrt f(0))`.
    pub b0_hat: f64,
    /// Estimate of `(ln h)'(1) / (4 sqrt f(1))`.
    pub b1_hat: f64,
    /// `f0_hat^{(n-1)/2} + f1_hat^{(n-1)/2}`.
    pub volume_hat: f64,
    /// Largest root-mean-square residual of the two branch fits.
    pub residual: f64,
}

/// Fits `value = a sqrt(kappa) + b + c / sqrt(kappa)` over one branch.
fn branch_fit(n: usize, branch: &[(usize, f64)], range: &RangeInclusive<usize>) -> Result<([f64; 3], f64)> {
    let (rows, ys): (Vec<[f64; 3]>, Vec<f64>) = branch
        .iter()
        .filter(|(m, _)| range.contains(m))
        .map(|&(m, v)| {
            let s = transversal::kappa(n, m).sqrt();
            ([s, 1.0, 1.0 / s], v)
        })
        .unzip();
    let c = regression::fit_basis(&rows, &ys)
        .ok_or_else(|| Error::IllConditionedFit("dependent regression columns".into()))?;
    let sq: f64 = rows
        .iter()
        .zip(&ys)
        .map(|(r, y)| (y - c[0] * r[0] - c[1] - c[2] * r[2]).powi(2))
        .sum();
    Ok((c, (sq / ys.len() as f64).sqrt()))
}

/// Recovers `f(0)`, `f(1)`, the endpoint constants and the boundary volume
/// functional from the modes in `fit_range`.
///
/// Each branch is regressed on `sqrt(kappa_m)`, `1` and `1/sqrt(kappa_m)`; the
/// last column absorbs the first correction of the Weyl-Titchmarsh expansion.
pub fn recover_boundary(spectrum: &SteklovSpectrum, fit_range: RangeInclusive<usize>) -> Result<BoundaryData> {
    let (start, end) = (*fit_range.start(), *fit_range.end());
    if end < start || end - start + 1 < MIN_FIT_LENGTH {
        return Err(Error::IllConditionedFit(format!(
            "fit range {start}..={end} shorter than {MIN_FIT_LENGTH} modes"
        )));
    }
    if end > spectrum.m_max || start == 0 {
        return Err(Error::InvalidArgument(format!(
            "fit range {start}..={end} must lie within 1..={}",
            spectrum.m_max
        )));
    }
    let n = spectrum.n;
    let split = split_branches(n, &spectral_points(spectrum))?;
    let (plus, r_plus) = branch_fit(n, &split.plus, &fit_range)?;
    let (minus, r_minus) = branch_fit(n, &split.minus, &fit_range)?;
    if !(plus[0] > 0.0 && minus[0] > 0.0) {
        return Err(Error::IllConditionedFit(format!(
            "non-positive branch slopes {} and {}",
            plus[0], minus[0]
        )));
    }
    let f0_hat = plus[0].powi(-2);
    let f1_hat = minus[0].powi(-2);
    let e = (n as f64 - 1.0) / 2.0;
    Ok(BoundaryData {
        f0_hat,
        f1_hat,
        b0_hat: plus[1],
        b1_hat: -minus[1],
        volume_hat: f0_hat.powf(e) + f1_hat.powf(e),
        residual: r_plus.max(r_minus),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignatureEntry {
    pub m: usize,
    pub trace: f64,
    pub det: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceDetSignature {
    pub entries: Vec<SignatureEntry>,
}

impl TraceDetSignature {
    /// Largest entrywise gap over common modes, relative to `max(1, |value|)`,
    /// with the mode where it occurs.
    pub fn max_deviation(&self, other: &Self) -> (f64, Option<usize>) {
        let theirs: BTreeMap<usize, &SignatureEntry> = other.entries.iter().map(|e| (e.m, e)).collect();
        let mut worst = (0.0, None);
        for e in &self.entries {
            if let Some(o) = theirs.get(&e.m) {
                for (a, b) in [(e.trace, o.trace), (e.det, o.det)] {
                    let gap = (a - b).abs() / a.abs().max(1.0);
                    if gap > worst.0 || worst.1.is_none() {
                        worst = (gap, Some(e.m));
                    }
                }
            }
        }
        worst
    }
}

/// Trace and determinant of the DN block for each `m` in `m_range`.
pub fn trace_det_signature(
    profile: &WarpingProfile,
    m_range: RangeInclusive<usize>,
    node_count: usize,
) -> Result<TraceDetSignature> {
    let potential = warping::build_potential(profile, node_count)?;
    warping::admissibility_check(profile, &potential, *m_range.end())?;
    let n = profile.dimension();
    let entries = m_range
        .into_par_iter()
        .map(|m| {
            let block = dn_map::dn_block(&potential, transversal::kappa(n, m), m)?;
            Ok(SignatureEntry {
                m,
                trace: block.trace(),
                det: block.det(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TraceDetSignature { entries })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsospectralReport {
    /// Every matched pair lies within the tolerance.
    pub matched: bool,
    pub max_deviation: f64,
    /// Number of values compared (with multiplicity).
    pub compared: usize,
    /// Matched pairs exceeding the tolerance.
    pub exceeding: usize,
}

/// Matches the sorted eigenvalue lists (with multiplicity) one to one.
pub fn isospectral_compare(a: &SteklovSpectrum, b: &SteklovSpectrum, tol: f64) -> Result<IsospectralReport> {
    if a.n != b.n || a.lambda != b.lambda || a.m_max != b.m_max {
        return Err(Error::LengthMismatch(format!(
            "(n, lambda, m_max) = ({}, {}, {}) vs ({}, {}, {})",
            a.n, a.lambda, a.m_max, b.n, b.lambda, b.m_max
        )));
    }
    let (va, vb) = (a.sorted_values(), b.sorted_values());
    if va.len() != vb.len() {
        return Err(Error::LengthMismatch(format!("{} vs {} values", va.len(), vb.len())));
    }
    let gaps: Vec<f64> = va.iter().zip(&vb).map(|(x, y)| (x - y).abs()).collect();
    let max_deviation = gaps.iter().copied().fold(0.0, f64::max);
    let exceeding = gaps.iter().filter(|&&g| g > tol).count();
    Ok(IsospectralReport {
        matched: exceeding == 0,
        max_deviation,
        compared: va.len(),
        exceeding,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Identical,
    Reflected,
    Distinct,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub verdict: Verdict,
    /// Spectra match within `1e-7` and signatures within `1e-8`.
    pub spectrally_equivalent: bool,
    pub spectra: IsospectralReport,
    pub signature_deviation: f64,
    /// Mode of the largest signature gap.
    pub witness_m: Option<usize>,
    pub warnings: Vec<String>,
}

const COEFFICIENT_TOL: f64 = 1e-8;
const SPECTRUM_TOL: f64 = 1e-7;
const SIGNATURE_TOL: f64 = 1e-8;

fn same_coefficients(a: &[f64], b: &[f64]) -> bool {
    let len = a.len().max(b.len());
    let scale = a.iter().chain(b).fold(1.0_f64, |m, c| m.max(c.abs()));
    (0..len).all(|k| {
        let x = a.get(k).copied().unwrap_or(0.0);
        let y = b.get(k).copied().unwrap_or(0.0);
        (x - y).abs() <= COEFFICIENT_TOL * scale
    })
}

/// Compares two profiles coefficientwise (directly and after reflection) and
/// through their spectra and trace/determinant signatures for `m <= m_max`.
pub fn uniqueness_probe(
    a: &WarpingProfile,
    b: &WarpingProfile,
    m_max: usize,
    node_count: usize,
) -> Result<ProbeReport> {
    if a.dimension() != b.dimension() || a.lambda() != b.lambda() {
        return Err(Error::InvalidArgument(format!(
            "profiles differ in (n, lambda): ({}, {}) vs ({}, {})",
            a.dimension(),
            a.lambda(),
            b.dimension(),
            b.lambda()
        )));
    }
    let mut warnings = Vec::new();
    for (name, p) in [("first", a), ("second", b)] {
        if !warping::cb_membership(p) {
            warnings.push(format!(
                "{name} profile violates |f'/f| <= 1/(n-2) at an endpoint"
            ));
        }
    }
    let verdict = if same_coefficients(a.coefficients(), b.coefficients()) {
        Verdict::Identical
    } else if same_coefficients(a.coefficients(), warping::involute(b).coefficients()) {
        Verdict::Reflected
    } else {
        Verdict::Distinct
    };
    let spec_a = dn_map::steklov_spectrum(a, m_max, node_count)?;
    let spec_b = dn_map::steklov_spectrum(b, m_max, node_count)?;
    let spectra = isospectral_compare(&spec_a, &spec_b, SPECTRUM_TOL)?;
    let sig_a = trace_det_signature(a, 0..=m_max, node_count)?;
    let sig_b = trace_det_signature(b, 0..=m_max, node_count)?;
    let (signature_deviation, witness_m) = sig_a.max_deviation(&sig_b);
    Ok(ProbeReport {
        verdict,
        spectrally_equivalent: spectra.matched && signature_deviation <= SIGNATURE_TOL,
        spectra,
        signature_deviation,
        witness_m,
        warnings,
    })
}
