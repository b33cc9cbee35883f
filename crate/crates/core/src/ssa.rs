//! Basic singular spectrum analysis: embedding, eigen decomposition,
//! grouping, and diagonal averaging.
//!
//! A series of length `N` is embedded as an `L × K` Hankel trajectory
//! matrix (`K = N − L + 1`), the eigenpairs of `X Xᵀ` give rank-one
//! elementary matrices `√λᵢ·uᵢ·vᵢᵀ`, and any group of them is mapped back
//! to a series by averaging anti-diagonals.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::separability::{u_series, weights, SignalNoiseSplit};
use crate::series::TimeSeries;

/// An eigenvalue below `RANK_TOLERANCE · λ₁` counts as zero when the
/// effective rank is determined.
const RANK_TOLERANCE: f64 = 1e-12;

/// Coordinates of a unit eigenvector this small (in absolute value) are
/// treated as zero when picking the reference coordinate for the sign fix.
const SIGN_TOLERANCE: f64 = 1e-12;

/// Hankel trajectory matrix of a series.
///
/// Column `c` (1-based) is the window `(y_c, …, y_{c+L−1})`. The matrix is
/// stored as the generating series plus the window length; entries are
/// derived on demand, so the Hankel property holds by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryMatrix {
    values: Vec<f64>,
    l: usize,
}

impl TrajectoryMatrix {
    /// Window length `L` (number of rows).
    pub fn window(&self) -> usize {
        self.l
    }

    /// Number of columns `K = N − L + 1`.
    pub fn k(&self) -> usize {
        self.values.len() - self.l + 1
    }

    /// Length of the generating series.
    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Matrix entry at 0-based `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.l && j < self.k());
        self.values[i + j]
    }

    /// The series the matrix was built from.
    pub fn series_values(&self) -> &[f64] {
        &self.values
    }

    /// Materializes the dense `L × K` matrix.
    pub fn to_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.l, self.k(), |i, j| self.values[i + j])
    }
}

/// Embeds `series` into its `L × K` trajectory matrix.
///
/// The window must satisfy `2 ≤ L ≤ ⌊N/2⌋`; anything else is rejected with
/// [`Error::WindowOutOfRange`].
pub fn embed(series: &TimeSeries, l: usize) -> Result<TrajectoryMatrix> {
    let n = series.len();
    let max = n / 2;
    if l < 2 || l > max {
        return Err(Error::WindowOutOfRange { window: l, n, max });
    }
    Ok(TrajectoryMatrix {
        values: series.values().to_vec(),
        l,
    })
}

/// One term of the decomposition: eigenvalue `λᵢ` of `X Xᵀ`, left singular
/// vector `uᵢ` (length `L`) and right singular vector `vᵢ = Xᵀuᵢ/√λᵢ`
/// (length `K`).
#[derive(Debug, Clone)]
pub struct EigenTriple {
    eigenvalue: f64,
    left: DVector<f64>,
    right: DVector<f64>,
}

impl EigenTriple {
    pub fn eigenvalue(&self) -> f64 {
        self.eigenvalue
    }

    pub fn left(&self) -> &[f64] {
        self.left.as_slice()
    }

    pub fn right(&self) -> &[f64] {
        self.right.as_slice()
    }
}

/// Eigen decomposition of a trajectory matrix.
///
/// Holds the analyzed series, all `L` eigenvalues of `X Xᵀ` in descending
/// order, and the eigen triples of the `d` components whose eigenvalue
/// exceeds the rank tolerance. Component indices in the public API are
/// 1-based, matching the usual `λ₁ ≥ λ₂ ≥ …` notation.
#[derive(Debug, Clone)]
pub struct SsaDecomposition {
    series: TimeSeries,
    l: usize,
    eigenvalues: Vec<f64>,
    triples: Vec<EigenTriple>,
}

/// Computes the eigen decomposition of `X Xᵀ` and derives the elementary
/// triples.
///
/// Eigenvalues are sorted in decreasing order (solver order is preserved
/// inside tied blocks); the effective rank `d` counts eigenvalues above
/// `1e−12·λ₁`, so a numerically zero matrix yields `d = 0`. Each `uᵢ` is
/// sign-fixed so that its first nonzero coordinate is positive, which makes
/// the decomposition deterministic.
pub fn decompose(x: &TrajectoryMatrix) -> Result<SsaDecomposition> {
    let l = x.window();
    let xm = x.to_matrix();
    let c = &xm * xm.transpose();
    // The tridiagonal QL iteration converges in a handful of sweeps per
    // eigenvalue; the generous cap only guards against pathological inputs.
    let eig = SymmetricEigen::try_new(c, f64::EPSILON, 100 * l.max(10))
        .ok_or(Error::NumericalFailure)?;

    let mut order: Vec<usize> = (0..l).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();

    let d = match eigenvalues.first() {
        Some(&lambda1) if lambda1 > 0.0 => {
            let tol = RANK_TOLERANCE * lambda1;
            eigenvalues.iter().take_while(|&&v| v > tol).count()
        }
        _ => 0,
    };

    let mut triples = Vec::with_capacity(d);
    for i in 0..d {
        let mut u = eig.eigenvectors.column(order[i]).clone_owned();
        if let Some(j) = u.iter().position(|&v| v.abs() > SIGN_TOLERANCE) {
            if u[j] < 0.0 {
                u.neg_mut();
            }
        }
        let lambda = eigenvalues[i];
        let v = (xm.transpose() * &u) / lambda.sqrt();
        triples.push(EigenTriple {
            eigenvalue: lambda,
            left: u,
            right: v,
        });
    }

    Ok(SsaDecomposition {
        series: TimeSeries::new(x.series_values().to_vec())?,
        l,
        eigenvalues,
        triples,
    })
}

impl SsaDecomposition {
    /// The analyzed series.
    pub fn series(&self) -> &TimeSeries {
        &self.series
    }

    /// Series length `N`.
    pub fn n(&self) -> usize {
        self.series.len()
    }

    /// Window length `L`.
    pub fn window(&self) -> usize {
        self.l
    }

    /// Number of trajectory-matrix columns `K = N − L + 1`.
    pub fn k(&self) -> usize {
        self.n() - self.l + 1
    }

    /// Effective rank `d`: number of eigenvalues above the rank tolerance.
    pub fn rank(&self) -> usize {
        self.triples.len()
    }

    /// All `L` eigenvalues of `X Xᵀ`, descending. The tail beyond
    /// [`rank`](Self::rank) is numerical noise (and may be slightly
    /// negative); it is kept so that `Σλᵢ = ‖X‖²_F` holds exactly.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// The `d` elementary eigen triples, strongest first.
    pub fn triples(&self) -> &[EigenTriple] {
        &self.triples
    }

    /// The rank-one elementary matrix `√λᵢ·uᵢ·vᵢᵀ` for 1-based `i`.
    pub fn component_matrix(&self, i: usize) -> Result<DMatrix<f64>> {
        self.check_index(i)?;
        let mut m = DMatrix::zeros(self.l, self.k());
        self.accumulate_component(&mut m, i);
        Ok(m)
    }

    /// Reconstructs the series for a group of 1-based component indices:
    /// the elementary matrices are summed and the result is averaged over
    /// anti-diagonals. Indices may be given in any order but must be
    /// distinct.
    pub fn reconstruct(&self, indices: &[usize]) -> Result<TimeSeries> {
        if indices.is_empty() {
            return Err(Error::EmptyGrouping);
        }
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::OverlappingGroups { index: pair[0] });
            }
        }
        let mut acc = DMatrix::zeros(self.l, self.k());
        for &i in &sorted {
            self.check_index(i)?;
            self.accumulate_component(&mut acc, i);
        }
        diagonal_average(&acc)
    }

    /// Reconstruction of the single elementary component `i` (1-based).
    pub fn elementary(&self, i: usize) -> Result<TimeSeries> {
        self.reconstruct(&[i])
    }

    /// Splits the series at grouping index `g`: signal `S_g` is rebuilt
    /// from components `1..=g`, the residual is `Z_g = y − S_g`
    /// elementwise (so `S_g + Z_g` reproduces the series exactly), and the
    /// weighted product series `U_g` is attached for the separability
    /// tests.
    pub fn split(&self, g: usize) -> Result<SignalNoiseSplit> {
        self.check_index(g)?;
        let mut acc = DMatrix::zeros(self.l, self.k());
        for i in 1..=g {
            self.accumulate_component(&mut acc, i);
        }
        let signal = diagonal_average(&acc)?;
        let residual: Vec<f64> = self
            .series
            .values()
            .iter()
            .zip(signal.values())
            .map(|(y, s)| y - s)
            .collect();
        let w = weights(self.n(), self.l)?;
        let u = u_series(signal.values(), &residual, &w)?;
        Ok(SignalNoiseSplit {
            g,
            signal,
            residual: TimeSeries::new(residual)?,
            u,
        })
    }

    /// Adds component `i` (1-based, assumed valid) onto `acc`. Inference
    /// code uses this to build prefix sums `Σ_{i≤g} Xᵢ` incrementally; the
    /// accumulation order matches [`reconstruct`](Self::reconstruct), so
    /// prefix results are bitwise identical.
    pub(crate) fn accumulate_component(&self, acc: &mut DMatrix<f64>, i: usize) {
        let t = &self.triples[i - 1];
        acc.ger(t.eigenvalue.sqrt(), &t.left, &t.right, 1.0);
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < 1 || i > self.rank() {
            return Err(Error::IndexOutOfRank {
                index: i,
                rank: self.rank(),
            });
        }
        Ok(())
    }
}

/// Averages a matrix over its anti-diagonals and reads the result off as a
/// series of length `nrows + ncols − 1`.
///
/// On a Hankel matrix this recovers the generating series exactly; on a sum
/// of elementary matrices it performs the Hankelization step of SSA. Any
/// nonempty shape is accepted.
pub fn diagonal_average(m: &DMatrix<f64>) -> Result<TimeSeries> {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Err(Error::EmptySeries);
    }
    let n = rows + cols - 1;
    let mut sums = vec![0.0; n];
    let mut counts = vec![0u32; n];
    for j in 0..cols {
        for i in 0..rows {
            sums[i + j] += m[(i, j)];
            counts[i + j] += 1;
        }
    }
    for (s, &c) in sums.iter_mut().zip(&counts) {
        *s /= f64::from(c);
    }
    TimeSeries::new(sums)
}
