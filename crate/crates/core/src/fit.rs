//! Least-squares helpers for growth and decay fits.

use std::ops::RangeInclusive;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares of `ys` on `xs`. Returns `None` with fewer than two
/// points or a degenerate abscissa.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Some(LinearFit { slope, intercept, r_squared })
}

/// Fit `ln(values[r])` against `r` over the given radii. Zero values are
/// skipped since their logarithm is undefined.
pub fn log_linear_fit(values: &[f64], radii: RangeInclusive<usize>) -> Option<LinearFit> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = radii
        .filter(|&r| r < values.len() && values[r] > 0.0)
        .map(|r| (r as f64, values[r].ln()))
        .unzip();
    linear_fit(&xs, &ys)
}

/// Radii used for orbital growth-rate fits: `[ceil(r_max/2), r_max]`, widened
/// to two points when the upper half is a single radius.
pub fn growth_window(r_max: usize) -> RangeInclusive<usize> {
    let start = r_max.div_ceil(2);
    if r_max - start < 1 {
        r_max.saturating_sub(1)..=r_max
    } else {
        start..=r_max
    }
}

/// Radii trusted by experiment verdicts: the upper half of `[r_min, r_max]`
/// holding at least four points when the range allows it.
pub fn trusted_window(r_min: usize, r_max: usize) -> RangeInclusive<usize> {
    let mut start = r_max.div_ceil(2).max(r_min);
    if r_max + 1 - start < 4 {
        start = r_max.saturating_sub(3).max(r_min);
    }
    start..=r_max
}
