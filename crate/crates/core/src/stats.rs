//! Small descriptive-statistics helpers shared across modules.

/// Pairwise (cascade) summation; deterministic for a given ordering and
/// noticeably more accurate than a running sum on long series.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const BLOCK: usize = 64;
    if xs.len() <= BLOCK {
        xs.iter().sum()
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    pairwise_sum(xs) / xs.len() as f64
}

/// Unbiased sample variance (n − 1 denominator). NaN for fewer than 2 points.
pub fn sample_variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return f64::NAN;
    }
    let m = mean(xs);
    let dev: Vec<f64> = xs.iter().map(|x| (x - m) * (x - m)).collect();
    pairwise_sum(&dev) / (xs.len() - 1) as f64
}

/// Ordinary least-squares line `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
}

pub fn ols(xs: &[f64], ys: &[f64]) -> Option<LineFit> {
    wls(xs, ys, &vec![1.0; xs.len()])
}

/// Weighted least squares; weights must be non-negative.
pub fn wls(xs: &[f64], ys: &[f64], ws: &[f64]) -> Option<LineFit> {
    if xs.len() != ys.len() || xs.len() != ws.len() || xs.len() < 2 {
        return None;
    }
    let total = pairwise_sum(ws);
    if !(total > 0.0) {
        return None;
    }
    let weighted_mean = |v: &[f64]| pairwise_sum(&v.iter().zip(ws).map(|(a, w)| a * w).collect::<Vec<_>>()) / total;
    let mx = weighted_mean(xs);
    let my = weighted_mean(ys);
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for ((x, y), w) in xs.iter().zip(ys).zip(ws) {
        sxx += w * (x - mx) * (x - mx);
        sxy += w * (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some(LineFit {
        slope,
        intercept: my - slope * mx,
    })
}

/// Sample autocovariance at `lag` around a supplied mean, normalized by the
/// full length (the usual biased estimator, positive semi-definite).
pub fn autocovariance(xs: &[f64], mean: f64, lag: usize) -> f64 {
    if lag >= xs.len() {
        return f64::NAN;
    }
    let prods: Vec<f64> = xs
        .iter()
        .zip(&xs[lag..])
        .map(|(a, b)| (a - mean) * (b - mean))
        .collect();
    pairwise_sum(&prods) / xs.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variance_of_small_set() {
        let v = sample_variance(&[1.0, 2.0, 3.0, 4.0]);
        assert!((v - 5.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn ols_exact_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 - 0.5 * x).collect();
        let fit = ols(&xs, &ys).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-14);
        assert!((fit.intercept - 2.0).abs() < 1e-14);
        assert!(ols(&[1.0, 1.0], &[1.0, 2.0]).is_none());
    }

    #[test]
    fn pairwise_matches_naive() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64).sin()).collect();
        let naive: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - naive).abs() < 1e-10);
    }
}
