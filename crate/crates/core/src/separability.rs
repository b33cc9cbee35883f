//! Weighted scalar products, w-correlations, and the summand series used
//! by the grouping tests.
//!
//! The weight `w_t = min{t, L, N−t+1}` counts how many times observation
//! `y_t` appears in the trajectory matrix, so the weighted inner product of
//! two reconstructed series measures how far they are from contributing to
//! orthogonal parts of the embedding. A w-correlation near zero between
//! signal and residual is the separability property the grouping index is
//! chosen to achieve.

use crate::error::{Error, Result};
use crate::series::TimeSeries;
use crate::ssa::SsaDecomposition;

/// Diagonal weights of the embedding, `w_t = min{t, L, N−t+1}`.
///
/// Values are integers stored as `f64` for arithmetic convenience; the
/// vector is symmetric and peaks at `min(L, K)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    values: Vec<f64>,
    l: usize,
    sum: f64,
}

impl WeightVector {
    /// The weights `w_1..w_N`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Series length `N`.
    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Window length `L` the weights were derived from.
    pub fn window(&self) -> usize {
        self.l
    }

    /// `Σ_t w_t`, the number of entries of the trajectory matrix.
    pub fn sum(&self) -> f64 {
        self.sum
    }
}

/// Builds the weight vector for a series of length `n` embedded with
/// window `l`. The window must satisfy the same `2 ≤ L ≤ ⌊N/2⌋` bound as
/// the embedding itself.
pub fn weights(n: usize, l: usize) -> Result<WeightVector> {
    let max = n / 2;
    if l < 2 || l > max {
        return Err(Error::WindowOutOfRange { window: l, n, max });
    }
    let values: Vec<f64> = (1..=n).map(|t| t.min(l).min(n - t + 1) as f64).collect();
    let sum = values.iter().sum();
    Ok(WeightVector { values, l, sum })
}

/// Weighted scalar product `Σ_t w_t·a_t·b_t`.
pub fn wscalar(a: &[f64], b: &[f64], w: &WeightVector) -> Result<f64> {
    check_len(a.len(), b.len())?;
    check_len(a.len(), w.n())?;
    Ok(a.iter()
        .zip(b)
        .zip(w.values())
        .map(|((x, y), wt)| wt * x * y)
        .sum())
}

/// Weighted norm `sqrt(Σ_t w_t·a_t²)`.
pub fn wnorm(a: &[f64], w: &WeightVector) -> Result<f64> {
    Ok(wscalar(a, a, w)?.sqrt())
}

/// Threshold below which a weighted norm counts as numerically null, for a
/// series whose largest absolute value is `scale`. The bound is the norm a
/// constant series at `scale` would have, shrunk by 1e−10; the additive
/// floor keeps an exact zero series degenerate rather than dividing by 0.
pub(crate) fn null_norm_tolerance(scale: f64, weight_sum: f64) -> f64 {
    1e-10 * (scale * weight_sum.sqrt() + 1e-300)
}

fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Weighted correlation of two series: `wscalar(a,b)/(wnorm(a)·wnorm(b))`.
///
/// A numerically null input (weighted norm at the level of rounding noise
/// for its own scale) has no meaningful correlation and is reported as
/// [`Error::DegenerateComponent`] so callers can branch instead of reading
/// a garbage ratio.
pub fn wcorr(a: &[f64], b: &[f64], w: &WeightVector) -> Result<f64> {
    let na = wnorm(a, w)?;
    let nb = wnorm(b, w)?;
    if na <= null_norm_tolerance(max_abs(a), w.sum()) {
        return Err(Error::DegenerateComponent(
            "left series has numerically null weighted norm".into(),
        ));
    }
    if nb <= null_norm_tolerance(max_abs(b), w.sum()) {
        return Err(Error::DegenerateComponent(
            "right series has numerically null weighted norm".into(),
        ));
    }
    Ok(wscalar(a, b, w)? / (na * nb))
}

/// The summand series of the grouping statistic: `U_t = w_t·S_t·Z_t`.
/// `Σ_t U_t` equals the numerator of the w-correlation between `S` and `Z`.
pub fn u_series(s: &[f64], z: &[f64], w: &WeightVector) -> Result<Vec<f64>> {
    check_len(s.len(), z.len())?;
    check_len(s.len(), w.n())?;
    Ok(s.iter()
        .zip(z)
        .zip(w.values())
        .map(|((a, b), wt)| wt * a * b)
        .collect())
}

/// Signal/noise split at grouping index `g`: the reconstruction `S_g` of
/// components `1..=g`, the residual `Z_g = y − S_g`, and the weighted
/// product series `U_g` feeding the hypothesis test for this `g`.
#[derive(Debug, Clone)]
pub struct SignalNoiseSplit {
    pub g: usize,
    pub signal: TimeSeries,
    pub residual: TimeSeries,
    pub u: Vec<f64>,
}

/// Matrix of absolute w-correlations between elementary components.
///
/// Entries live in `[0, 1]` with a unit diagonal. A degenerate (numerically
/// null) component cannot be correlated with anything; its entries are
/// recorded as `0` and the affected index pairs are listed in
/// [`degenerate_entries`](Self::degenerate_entries) — the matrix is a
/// diagnostic display, not an inference input, so this is a warning rather
/// than an error.
#[derive(Debug, Clone, PartialEq)]
pub struct WCorrMatrix {
    dim: usize,
    values: Vec<f64>,
    degenerate: Vec<(usize, usize)>,
}

impl WCorrMatrix {
    /// Number of rows (and columns), equal to the decomposition rank `d`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry for the 1-based component pair `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i >= 1 && i <= self.dim && j >= 1 && j <= self.dim);
        self.values[(i - 1) * self.dim + (j - 1)]
    }

    /// Rows in order, each of length [`dim`](Self::dim).
    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.dim)
    }

    /// 1-based index pairs `(i, j)` with `i ≤ j` whose entry was zeroed
    /// because a component had a numerically null weighted norm.
    pub fn degenerate_entries(&self) -> &[(usize, usize)] {
        &self.degenerate
    }
}

/// Computes the `d × d` matrix of absolute w-correlations between the
/// elementary reconstructed components of `dec`.
pub fn wcorr_matrix(dec: &SsaDecomposition) -> Result<WCorrMatrix> {
    let d = dec.rank();
    if d == 0 {
        return Err(Error::DegenerateComponent(
            "decomposition has rank 0; no components to correlate".into(),
        ));
    }
    let w = weights(dec.n(), dec.window())?;
    let components: Vec<TimeSeries> = (1..=d)
        .map(|i| dec.elementary(i))
        .collect::<Result<Vec<_>>>()?;
    let norms: Vec<f64> = components
        .iter()
        .map(|c| wnorm(c.values(), &w))
        .collect::<Result<Vec<_>>>()?;
    let null: Vec<bool> = components
        .iter()
        .zip(&norms)
        .map(|(c, &n)| n <= null_norm_tolerance(max_abs(c.values()), w.sum()))
        .collect();

    let mut values = vec![0.0; d * d];
    let mut degenerate = Vec::new();
    for i in 0..d {
        for j in i..d {
            let entry = if null[i] || null[j] {
                degenerate.push((i + 1, j + 1));
                0.0
            } else if i == j {
                1.0
            } else {
                let dot = wscalar(components[i].values(), components[j].values(), &w)?;
                (dot / (norms[i] * norms[j])).abs()
            };
            values[i * d + j] = entry;
            values[j * d + i] = entry;
        }
    }
    Ok(WCorrMatrix {
        dim: d,
        values,
        degenerate,
    })
}

fn check_len(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::LengthMismatch { left, right });
    }
    Ok(())
}
