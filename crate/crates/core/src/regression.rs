//! Ordinary least-squares line fits.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual.
    pub rms: f64,
}

impl LineFit {
    pub fn predict(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

/// Fits `y = intercept + slope * x`. `None` for fewer than two points or
/// coincident abscissae.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Option<LineFit> {
    assert_eq!(xs.len(), ys.len());
    let count = xs.len();
    if count < 2 {
        return None;
    }
    let w = count as f64;
    let mx = xs.iter().sum::<f64>() / w;
    let my = ys.iter().sum::<f64>() / w;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if !(sxx > 0.0) {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sq: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    Some(LineFit {
        slope,
        intercept,
        rms: (sq / w).sqrt(),
    })
}

/// Least-squares coefficients of `y ~ sum_k c_k rows[i][k]` by modified
/// Gram-Schmidt QR. `None` if the columns are numerically dependent.
pub fn fit_basis<const K: usize>(rows: &[[f64; K]], ys: &[f64]) -> Option<[f64; K]> {
    assert_eq!(rows.len(), ys.len());
    if rows.len() < K {
        return None;
    }
    let mut q: Vec<Vec<f64>> = (0..K).map(|k| rows.iter().map(|r| r[k]).collect()).collect();
    let mut y = ys.to_vec();
    let mut r = [[0.0; K]; K];
    let mut qty = [0.0; K];
    for k in 0..K {
        let original: f64 = q[k].iter().map(|v| v * v).sum::<f64>().sqrt();
        for j in 0..k {
            let dot: f64 = q[j].iter().zip(&q[k]).map(|(a, b)| a * b).sum();
            r[j][k] = dot;
            let (head, tail) = q.split_at_mut(k);
            for (t, h) in tail[0].iter_mut().zip(&head[j]) {
                *t -= dot * h;
            }
        }
        let norm: f64 = q[k].iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm > 1e-12 * original) {
            return None;
        }
        r[k][k] = norm;
        q[k].iter_mut().for_each(|v| *v /= norm);
        let dot: f64 = q[k].iter().zip(&y).map(|(a, b)| a * b).sum();
        y.iter_mut().zip(&q[k]).for_each(|(t, h)| *t -= dot * h);
        qty[k] = dot;
    }
    let mut x = [0.0; K];
    for i in (0..K).rev() {
        let tail: f64 = (i + 1..K).map(|c| r[i][c] * x[c]).sum();
        x[i] = (qty[i] - tail) / r[i][i];
    }
    Some(x)
}
