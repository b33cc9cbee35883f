//! Wild bootstrap for dependent data.
//!
//! The classic wild bootstrap multiplies each centered observation by an
//! independent random sign-like factor, which destroys serial dependence.
//! Here the multipliers `η_t` are instead built by sliding a tapered
//! window of length `ell` over i.i.d. auxiliary draws, so neighbouring
//! multipliers share draws and short-range dependence survives resampling:
//!
//! ```text
//! η_t = Σ_j v_ℓ(t−j+1)/‖v_ℓ‖₂ · √ℓ · a_j        (j = 1..Q, Q = N−ℓ+1)
//! R*_t = (R_t − R̄_{ℓ,v})·η_t + R̄
//! ```
//!
//! where `v_ℓ(i) = v((i−0.5)/ℓ)` discretizes the taper, `R̄_{ℓ,v}` is the
//! tapered moving-block mean, and the auxiliary draws satisfy `E(a) = 0`,
//! `Var(√ℓ·a) = 1`. With `ell = 1` the construction reduces to the classic
//! wild bootstrap.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Width of the rising and falling shoulders of the trapezoid taper.
const TRAPEZOID_SHOULDER: f64 = 0.43;

/// Taper on `[0, 1]`: zero outside, symmetric around 1/2, nondecreasing on
/// the first half, values in `[0, 1]`.
#[derive(Clone)]
pub enum TaperWindow {
    /// `v(t) = t` on `(0, 1/2]`, `1 − t` on `(1/2, 1)`.
    Triangle,
    /// Rises linearly over `(0, 0.43]`, flat at 1 through the middle,
    /// falls symmetrically over the last 0.43.
    Trapezoid043,
    /// Caller-supplied evaluator. It must satisfy the same assumptions;
    /// range and finiteness are checked when weights are materialized,
    /// symmetry and monotonicity are the caller's responsibility.
    Custom {
        name: String,
        evaluator: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
}

impl TaperWindow {
    /// Evaluates the taper at `t`.
    pub fn evaluate(&self, t: f64) -> f64 {
        match self {
            TaperWindow::Triangle => {
                if t > 0.0 && t <= 0.5 {
                    t
                } else if t > 0.5 && t < 1.0 {
                    1.0 - t
                } else {
                    0.0
                }
            }
            TaperWindow::Trapezoid043 => {
                const C: f64 = TRAPEZOID_SHOULDER;
                if t > 0.0 && t <= C {
                    t / C
                } else if t > C && t < 1.0 - C {
                    1.0
                } else if (1.0 - C..1.0).contains(&t) {
                    (1.0 - t) / C
                } else {
                    0.0
                }
            }
            TaperWindow::Custom { evaluator, .. } => evaluator(t),
        }
    }

    /// Stable identifier used in configuration and reports.
    pub fn name(&self) -> &str {
        match self {
            TaperWindow::Triangle => "triangle",
            TaperWindow::Trapezoid043 => "trapezoid043",
            TaperWindow::Custom { name, .. } => name,
        }
    }
}

impl fmt::Debug for TaperWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("TaperWindow").field(&self.name()).finish()
    }
}

impl FromStr for TaperWindow {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "triangle" => Ok(TaperWindow::Triangle),
            "trapezoid043" => Ok(TaperWindow::Trapezoid043),
            other => Err(Error::InvalidConfig(format!(
                "unknown taper window `{other}` (expected `triangle` or `trapezoid043`)"
            ))),
        }
    }
}

/// Auxiliary i.i.d. sequence the multipliers are built from. The moment
/// contract is `E(a) = 0` and `Var(√ℓ·a) = 1`.
///
/// `Gaussian` (draws from `N(0, 1/ℓ)`) is built in. The remaining kinds
/// are named slots resolved through [`register_aux`]; using one before a
/// sampler has been registered fails with [`Error::AuxUnavailable`] rather
/// than silently substituting a guessed distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AuxSequence {
    Gaussian,
    A3,
    A4,
    A5,
    A7,
}

impl AuxSequence {
    /// Stable identifier used in configuration and reports.
    pub fn name(self) -> &'static str {
        match self {
            AuxSequence::Gaussian => "gaussian",
            AuxSequence::A3 => "a3",
            AuxSequence::A4 => "a4",
            AuxSequence::A5 => "a5",
            AuxSequence::A7 => "a7",
        }
    }

    /// Resolves the sampler for block size `ell`.
    pub(crate) fn sampler(self, ell: usize) -> Result<AuxSampler> {
        match self {
            AuxSequence::Gaussian => Ok(AuxSampler::Gaussian {
                sd: 1.0 / (ell as f64).sqrt(),
            }),
            preset => registry()
                .read()
                .expect("aux registry poisoned")
                .get(&preset)
                .cloned()
                .map(|f| AuxSampler::Registered { f, ell })
                .ok_or_else(|| Error::AuxUnavailable(preset.name().into())),
        }
    }
}

impl FromStr for AuxSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(AuxSequence::Gaussian),
            "a3" => Ok(AuxSequence::A3),
            "a4" => Ok(AuxSequence::A4),
            "a5" => Ok(AuxSequence::A5),
            "a7" => Ok(AuxSequence::A7),
            other => Err(Error::InvalidConfig(format!(
                "unknown auxiliary sequence `{other}`"
            ))),
        }
    }
}

/// Sampler plug-in for an auxiliary preset: receives the generator and the
/// block size `ell`, returns one draw honoring the moment contract.
pub type AuxFn = Arc<dyn Fn(&mut ChaCha8Rng, usize) -> f64 + Send + Sync>;

fn registry() -> &'static RwLock<HashMap<AuxSequence, AuxFn>> {
    static REGISTRY: OnceLock<RwLock<HashMap<AuxSequence, AuxFn>>> = OnceLock::new();
    REGISTRY.get_or_init(Default::default)
}

/// Registers a sampler for one of the named auxiliary slots. The built-in
/// `Gaussian` kind cannot be overridden.
pub fn register_aux(kind: AuxSequence, sampler: AuxFn) -> Result<()> {
    if kind == AuxSequence::Gaussian {
        return Err(Error::InvalidConfig(
            "the gaussian auxiliary sequence is built in".into(),
        ));
    }
    registry()
        .write()
        .expect("aux registry poisoned")
        .insert(kind, sampler);
    Ok(())
}

/// A resolved auxiliary sampler bound to a concrete block size.
#[derive(Clone)]
pub(crate) enum AuxSampler {
    Gaussian { sd: f64 },
    Registered { f: AuxFn, ell: usize },
}

impl AuxSampler {
    pub(crate) fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            AuxSampler::Gaussian { sd } => {
                let z: f64 = StandardNormal.sample(rng);
                sd * z
            }
            AuxSampler::Registered { f, ell } => f(rng, *ell),
        }
    }
}

/// Block size: fixed, or derived from the series length as
/// `max(2, round(N^{1/5}))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockSize {
    Auto,
    Fixed(usize),
}

impl BlockSize {
    /// Resolves to a concrete block size for a series of length `n`.
    /// The result must leave at least one block position (`ell < n`).
    pub fn resolve(self, n: usize) -> Result<usize> {
        let ell = match self {
            BlockSize::Auto => ((n as f64).powf(0.2).round() as usize).max(2),
            BlockSize::Fixed(0) => {
                return Err(Error::InvalidConfig("block size must be at least 1".into()))
            }
            BlockSize::Fixed(e) => e,
        };
        if ell >= n {
            return Err(Error::BlockTooLarge { ell, n });
        }
        Ok(ell)
    }
}

impl FromStr for BlockSize {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(BlockSize::Auto);
        }
        s.parse::<usize>()
            .map(BlockSize::Fixed)
            .map_err(|_| Error::InvalidConfig(format!("block size must be `auto` or an integer, got `{s}`")))
    }
}

impl fmt::Display for BlockSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockSize::Auto => f.write_str("auto"),
            BlockSize::Fixed(e) => write!(f, "{e}"),
        }
    }
}

/// Everything a bootstrap run needs: block size, taper, auxiliary kind,
/// replication count `B`, and the seed all substreams are derived from.
#[derive(Debug, Clone)]
pub struct BootstrapConfig {
    pub block_size: BlockSize,
    pub window: TaperWindow,
    pub aux: AuxSequence,
    pub replications: usize,
    pub seed: u64,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self {
            block_size: BlockSize::Auto,
            window: TaperWindow::Triangle,
            aux: AuxSequence::Gaussian,
            replications: 1000,
            seed: 0,
        }
    }
}

impl BootstrapConfig {
    /// Concrete block size for a series of length `n`.
    pub fn resolve_block_size(&self, n: usize) -> Result<usize> {
        self.block_size.resolve(n)
    }
}

/// Discretized taper weights `v_ℓ(i) = v((i−0.5)/ℓ)`, together with their
/// 1- and 2-norms.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowWeights {
    values: Vec<f64>,
    l1: f64,
    l2: f64,
}

impl WindowWeights {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Block size `ell` the weights were discretized for.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `‖v_ℓ‖₁`.
    pub fn l1(&self) -> f64 {
        self.l1
    }

    /// `‖v_ℓ‖₂`.
    pub fn l2(&self) -> f64 {
        self.l2
    }
}

/// Evaluates the taper at the block positions `(i − 0.5)/ell`, `i = 1..ell`.
///
/// Custom evaluators are checked pointwise for finiteness and range; a
/// window that vanishes at every position is rejected as
/// [`Error::DegenerateWindow`] since nothing could be resampled with it.
pub fn window_weights(win: &TaperWindow, ell: usize) -> Result<WindowWeights> {
    if ell == 0 {
        return Err(Error::InvalidConfig("block size must be at least 1".into()));
    }
    let mut values = Vec::with_capacity(ell);
    for i in 1..=ell {
        let arg = (i as f64 - 0.5) / ell as f64;
        let v = win.evaluate(arg);
        if !v.is_finite() || !(-1e-12..=1.0 + 1e-12).contains(&v) {
            return Err(Error::InvalidWindow(format!(
                "v({arg}) = {v} falls outside [0, 1]"
            )));
        }
        values.push(v.clamp(0.0, 1.0));
    }
    let l1: f64 = values.iter().sum();
    if l1 <= 0.0 {
        return Err(Error::DegenerateWindow);
    }
    let l2 = values.iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok(WindowWeights { values, l1, l2 })
}

/// Tapered moving-block sample mean:
/// `(1/Q)·Σ_{j=1..Q} Σ_{i=1..ℓ} v_ℓ(i)/‖v_ℓ‖₁ · R_{i+j−1}`.
pub fn tapered_block_mean(r: &[f64], win: &TaperWindow, ell: usize) -> Result<f64> {
    let ww = window_weights(win, ell)?;
    tapered_block_mean_with(r, &ww)
}

fn tapered_block_mean_with(r: &[f64], ww: &WindowWeights) -> Result<f64> {
    let n = r.len();
    if n == 0 {
        return Err(Error::EmptySeries);
    }
    let ell = ww.len();
    if ell > n {
        return Err(Error::BlockTooLarge { ell, n });
    }
    let q = n - ell + 1;
    let mut total = 0.0;
    for j in 0..q {
        let mut block = 0.0;
        for (i, &v) in ww.values().iter().enumerate() {
            block += v * r[i + j];
        }
        total += block;
    }
    Ok(total / (ww.l1() * q as f64))
}

/// Builds the multiplier vector `η` of length `n` from `Q = n − ell + 1`
/// auxiliary draws.
pub fn eta_vector(a: &[f64], win: &TaperWindow, ell: usize, n: usize) -> Result<Vec<f64>> {
    let ww = window_weights(win, ell)?;
    eta_vector_with(a, &ww, n)
}

fn eta_vector_with(a: &[f64], ww: &WindowWeights, n: usize) -> Result<Vec<f64>> {
    let ell = ww.len();
    if ell > n {
        return Err(Error::BlockTooLarge { ell, n });
    }
    let q = n - ell + 1;
    if a.len() != q {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: q,
        });
    }
    // η_t = Σ_j v(t−j+1)·a_j, accumulated block by block: draw j touches
    // positions j .. j+ell−1 (0-based).
    let mut eta = vec![0.0; n];
    for (j, &aj) in a.iter().enumerate() {
        for (i, &v) in ww.values().iter().enumerate() {
            eta[j + i] += v * aj;
        }
    }
    let scale = (ell as f64).sqrt() / ww.l2();
    for e in &mut eta {
        *e *= scale;
    }
    Ok(eta)
}

/// Draws one pseudo-observation vector `R*` from the centered series `r`.
///
/// The caller is expected to pass an (approximately) centered series; the
/// recentering term uses the explicitly computed plain mean rather than a
/// hard-coded zero, so a miscentred input degrades gracefully instead of
/// silently shifting. Fresh auxiliary draws are taken from `rng` on every
/// call.
pub fn resample(r: &[f64], cfg: &BootstrapConfig, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    let n = r.len();
    if n == 0 {
        return Err(Error::EmptySeries);
    }
    let ell = cfg.resolve_block_size(n)?;
    let ww = window_weights(&cfg.window, ell)?;
    let sampler = cfg.aux.sampler(ell)?;
    let tapered = tapered_block_mean_with(r, &ww)?;
    let mean = r.iter().sum::<f64>() / n as f64;
    let q = n - ell + 1;
    let a: Vec<f64> = (0..q).map(|_| sampler.draw(rng)).collect();
    let eta = eta_vector_with(&a, &ww, n)?;
    Ok(r.iter()
        .zip(&eta)
        .map(|(&rt, &et)| (rt - tapered) * et + mean)
        .collect())
}

/// Precomputed state for drawing many bootstrap statistics `Σ_t R*_t` from
/// the same series.
///
/// Exchanging the sums turns each replicate into a `Q`-term dot product:
/// `Σ_t R*_t = √ℓ/‖v‖₂ · Σ_j a_j·γ_j + N·mean`, with
/// `γ_j = Σ_i v_ℓ(i)·(R_{i+j−1} − R̄_{ℓ,v})` precomputed once. Draw order
/// matches [`resample`], so identically seeded generators yield the same
/// replicates (up to summation rounding).
pub(crate) struct ResamplePlan {
    gamma: Vec<f64>,
    scale: f64,
    offset: f64,
    sampler: AuxSampler,
}

impl ResamplePlan {
    pub(crate) fn new(r: &[f64], cfg: &BootstrapConfig) -> Result<Self> {
        let n = r.len();
        if n == 0 {
            return Err(Error::EmptySeries);
        }
        let ell = cfg.resolve_block_size(n)?;
        let ww = window_weights(&cfg.window, ell)?;
        let sampler = cfg.aux.sampler(ell)?;
        let tapered = tapered_block_mean_with(r, &ww)?;
        let mean = r.iter().sum::<f64>() / n as f64;
        let q = n - ell + 1;
        let mut gamma = Vec::with_capacity(q);
        for j in 0..q {
            let mut s = 0.0;
            for (i, &v) in ww.values().iter().enumerate() {
                s += v * (r[i + j] - tapered);
            }
            gamma.push(s);
        }
        Ok(Self {
            gamma,
            scale: (ell as f64).sqrt() / ww.l2(),
            offset: mean * n as f64,
            sampler,
        })
    }

    /// One bootstrap statistic `Σ_t R*_t`, consuming `Q` auxiliary draws.
    pub(crate) fn statistic_draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        let mut s = 0.0;
        for &g in &self.gamma {
            s += self.sampler.draw(rng) * g;
        }
        self.scale * s + self.offset
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::derive_rng;

    #[test]
    fn triangle_weights_for_two_positions() {
        let ww = window_weights(&TaperWindow::Triangle, 2).unwrap();
        assert_eq!(ww.values(), &[0.25, 0.25]);
        assert!((ww.l1() - 0.5).abs() < 1e-15);
        assert!((ww.l2() - 0.125f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn trapezoid_weights_for_four_positions() {
        let ww = window_weights(&TaperWindow::Trapezoid043, 4).unwrap();
        let expected = [
            0.125 / 0.43,
            0.375 / 0.43,
            0.375 / 0.43,
            0.125 / 0.43,
        ];
        for (v, e) in ww.values().iter().zip(&expected) {
            assert!((v - e).abs() < 1e-12);
        }
    }

    #[test]
    fn trapezoid_is_flat_at_the_midpoint() {
        assert_eq!(TaperWindow::Trapezoid043.evaluate(0.5), 1.0);
    }

    #[test]
    fn windows_vanish_outside_unit_interval() {
        for win in [TaperWindow::Triangle, TaperWindow::Trapezoid043] {
            assert_eq!(win.evaluate(0.0), 0.0);
            assert_eq!(win.evaluate(1.0), 0.0);
            assert_eq!(win.evaluate(-0.3), 0.0);
            assert_eq!(win.evaluate(1.7), 0.0);
        }
    }

    #[test]
    fn builtin_windows_are_admissible() {
        // Assumption checks: range, symmetry around 1/2, monotone first half.
        for win in [TaperWindow::Triangle, TaperWindow::Trapezoid043] {
            for ell in [1usize, 2, 3, 5, 8, 13, 100] {
                let ww = window_weights(&win, ell).unwrap();
                let v = ww.values();
                for (i, &x) in v.iter().enumerate() {
                    assert!((0.0..=1.0).contains(&x));
                    assert!((x - v[ell - 1 - i]).abs() <= 1e-12, "asymmetric at {i}");
                }
                for i in 1..ell.div_ceil(2) {
                    assert!(v[i] + 1e-15 >= v[i - 1], "not nondecreasing at {i}");
                }
            }
        }
    }

    #[test]
    fn custom_window_validation() {
        let zero = TaperWindow::Custom {
            name: "zero".into(),
            evaluator: Arc::new(|_| 0.0),
        };
        assert!(matches!(
            window_weights(&zero, 3),
            Err(Error::DegenerateWindow)
        ));

        let bad = TaperWindow::Custom {
            name: "bad".into(),
            evaluator: Arc::new(|_| -0.5),
        };
        assert!(matches!(window_weights(&bad, 3), Err(Error::InvalidWindow(_))));
    }

    #[test]
    fn block_mean_of_constant_is_constant() {
        let r = vec![3.5; 20];
        let m = tapered_block_mean(&r, &TaperWindow::Trapezoid043, 4).unwrap();
        assert!((m - 3.5).abs() < 1e-12);
    }

    #[test]
    fn block_mean_with_unit_block_is_plain_mean() {
        let r = [1.0, 2.0, 4.0, 9.0];
        let m = tapered_block_mean(&r, &TaperWindow::Triangle, 1).unwrap();
        assert!((m - 4.0).abs() < 1e-12);
    }

    #[test]
    fn block_mean_of_ramp() {
        // Blocks of (1,2,3,4) at ell = 2 have midpoints 1.5, 2.5, 3.5.
        let r = [1.0, 2.0, 3.0, 4.0];
        let m = tapered_block_mean(&r, &TaperWindow::Triangle, 2).unwrap();
        assert!((m - 2.5).abs() < 1e-12);
    }

    #[test]
    fn block_mean_rejects_oversized_block() {
        let r = [1.0, 2.0];
        assert!(matches!(
            tapered_block_mean(&r, &TaperWindow::Triangle, 3),
            Err(Error::BlockTooLarge { ell: 3, n: 2 })
        ));
    }

    #[test]
    fn eta_with_unit_block_is_the_draws() {
        let a = [0.3, -1.2, 0.7];
        let eta = eta_vector(&a, &TaperWindow::Triangle, 1, 3).unwrap();
        for (e, x) in eta.iter().zip(&a) {
            assert!((e - x).abs() < 1e-12);
        }
    }

    #[test]
    fn eta_of_zero_draws_is_zero() {
        let eta = eta_vector(&[0.0; 5], &TaperWindow::Trapezoid043, 2, 6).unwrap();
        assert_eq!(eta, vec![0.0; 6]);
    }

    #[test]
    fn eta_hand_computed_example() {
        // N = 4, ell = 2, triangle weights (0.25, 0.25), draws (1, 0, 0):
        // only block j = 1 contributes, to positions 1 and 2.
        let eta = eta_vector(&[1.0, 0.0, 0.0], &TaperWindow::Triangle, 2, 4).unwrap();
        let l2 = 0.125f64.sqrt();
        let expected = 0.25 / l2 * 2f64.sqrt();
        assert!((eta[0] - expected).abs() < 1e-12);
        assert!((eta[1] - expected).abs() < 1e-12);
        assert_eq!(eta[2], 0.0);
        assert_eq!(eta[3], 0.0);
    }

    #[test]
    fn eta_checks_draw_count() {
        assert!(matches!(
            eta_vector(&[1.0, 2.0], &TaperWindow::Triangle, 2, 4),
            Err(Error::LengthMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn auto_block_size_follows_fifth_root() {
        assert_eq!(BlockSize::Auto.resolve(50).unwrap(), 2);
        assert_eq!(BlockSize::Auto.resolve(365).unwrap(), 3);
        assert_eq!(BlockSize::Fixed(4).resolve(10).unwrap(), 4);
        assert!(matches!(
            BlockSize::Fixed(10).resolve(10),
            Err(Error::BlockTooLarge { ell: 10, n: 10 })
        ));
        assert!(BlockSize::Fixed(0).resolve(10).is_err());
    }

    #[test]
    fn resample_of_zero_vector_is_zero() {
        let mut rng = derive_rng(1, &[]);
        let cfg = BootstrapConfig::default();
        let out = resample(&[0.0; 30], &cfg, &mut rng).unwrap();
        assert_eq!(out, vec![0.0; 30]);
    }

    #[test]
    fn resample_is_deterministic_given_seed() {
        let r: Vec<f64> = (0..40).map(|t| ((t * 37 + 11) % 17) as f64 - 8.0).collect();
        let cfg = BootstrapConfig::default();
        let a = resample(&r, &cfg, &mut derive_rng(9, &[4])).unwrap();
        let b = resample(&r, &cfg, &mut derive_rng(9, &[4])).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn resample_with_unit_block_is_classic_wild_bootstrap() {
        let r: Vec<f64> = (0..25).map(|t| (t as f64 * 0.9).sin() * 2.0).collect();
        let cfg = BootstrapConfig {
            block_size: BlockSize::Fixed(1),
            ..BootstrapConfig::default()
        };
        let got = resample(&r, &cfg, &mut derive_rng(5, &[])).unwrap();

        // Same draws, classic formula: R*_t = (R_t − R̄)·a_t·√1/‖v₁‖₂·v₁(1) + R̄.
        // With ell = 1 the window factor is exactly 1, so the multiplier is
        // the raw draw.
        let sampler = AuxSequence::Gaussian.sampler(1).unwrap();
        let mut rng = derive_rng(5, &[]);
        let mean = r.iter().sum::<f64>() / r.len() as f64;
        let expected: Vec<f64> = r
            .iter()
            .map(|&rt| {
                let a = sampler.draw(&mut rng);
                (rt - mean) * a + mean
            })
            .collect();
        for (g, e) in got.iter().zip(&expected) {
            assert!((g - e).abs() < 1e-12);
        }
    }

    #[test]
    fn resample_preserves_conditional_mean() {
        // Averaging R* over many draws recovers mean(R) elementwise.
        let r = [1.5, -2.0, 0.5, 3.0, -3.0, 0.0, 1.0, -1.0];
        let mean = r.iter().sum::<f64>() / r.len() as f64;
        let cfg = BootstrapConfig {
            block_size: BlockSize::Fixed(2),
            ..BootstrapConfig::default()
        };
        let reps = 10_000usize;
        let mut rng = derive_rng(77, &[]);
        let mut avg = vec![0.0; r.len()];
        let mut sq = vec![0.0; r.len()];
        for _ in 0..reps {
            let out = resample(&r, &cfg, &mut rng).unwrap();
            for ((a, s), &o) in avg.iter_mut().zip(sq.iter_mut()).zip(&out) {
                *a += o;
                *s += o * o;
            }
        }
        for (a, s) in avg.iter_mut().zip(sq.iter_mut()) {
            *a /= reps as f64;
            *s = (*s / reps as f64 - *a * *a).max(0.0).sqrt();
        }
        for (a, s) in avg.iter().zip(&sq) {
            assert!((a - mean).abs() <= 4.0 * s / (reps as f64).sqrt() + 1e-12);
        }
    }

    #[test]
    fn statistic_draw_matches_full_resample_sum() {
        let r: Vec<f64> = (0..33)
            .map(|t| (t as f64 * 0.31).cos() * 1.7 - 0.2)
            .collect();
        let mean = r.iter().sum::<f64>() / r.len() as f64;
        let centered: Vec<f64> = r.iter().map(|v| v - mean).collect();
        let cfg = BootstrapConfig {
            block_size: BlockSize::Fixed(3),
            window: TaperWindow::Trapezoid043,
            ..BootstrapConfig::default()
        };
        let plan = ResamplePlan::new(&centered, &cfg).unwrap();
        for rep in 0..20u64 {
            let fast = plan.statistic_draw(&mut derive_rng(3, &[rep]));
            let full: f64 = resample(&centered, &cfg, &mut derive_rng(3, &[rep]))
                .unwrap()
                .iter()
                .sum();
            assert!((fast - full).abs() <= 1e-10 * (1.0 + full.abs()));
        }
    }

    #[test]
    fn bootstrap_sums_are_centered() {
        let r: Vec<f64> = (0..50).map(|t| ((t * 29 + 3) % 23) as f64 - 11.0).collect();
        let mean = r.iter().sum::<f64>() / r.len() as f64;
        let centered: Vec<f64> = r.iter().map(|v| v - mean).collect();
        let cfg = BootstrapConfig::default();
        let plan = ResamplePlan::new(&centered, &cfg).unwrap();
        let mut rng = derive_rng(123, &[]);
        let b = 2000usize;
        let draws: Vec<f64> = (0..b).map(|_| plan.statistic_draw(&mut rng)).collect();
        let m = draws.iter().sum::<f64>() / b as f64;
        let sd = (draws.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (b - 1) as f64).sqrt();
        assert!(m.abs() <= 4.0 * sd / (b as f64).sqrt());
    }

    #[test]
    fn gaussian_aux_honors_moment_contract() {
        let ell = 3usize;
        let sampler = AuxSequence::Gaussian.sampler(ell).unwrap();
        let mut rng = derive_rng(2024, &[]);
        let n = 1_000_000usize;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for _ in 0..n {
            let a = sampler.draw(&mut rng);
            sum += a;
            sumsq += a * a;
        }
        let mean = sum / n as f64;
        let sd = (1.0 / ell as f64).sqrt();
        assert!(mean.abs() <= 4.0 * sd / (n as f64).sqrt());
        let var_scaled = ell as f64 * (sumsq / n as f64 - mean * mean);
        assert!((var_scaled - 1.0).abs() <= 0.02);
    }

    #[test]
    fn unregistered_presets_are_refused() {
        let cfg = BootstrapConfig {
            aux: AuxSequence::A5,
            ..BootstrapConfig::default()
        };
        let err = resample(&[1.0, -1.0, 0.5, -0.5, 0.0, 0.0], &cfg, &mut derive_rng(0, &[]))
            .unwrap_err();
        assert!(matches!(err, Error::AuxUnavailable(name) if name == "a5"));
    }

    #[test]
    fn registered_preset_is_used() {
        // Register a Rademacher-style sampler in the a3 slot (scaled to the
        // moment contract) and check draws flow through it.
        register_aux(
            AuxSequence::A3,
            Arc::new(|rng: &mut ChaCha8Rng, ell: usize| {
                use rand::Rng;
                let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                sign / (ell as f64).sqrt()
            }),
        )
        .unwrap();
        let sampler = AuxSequence::A3.sampler(4).unwrap();
        let mut rng = derive_rng(8, &[]);
        for _ in 0..32 {
            let a = sampler.draw(&mut rng);
            assert!((a.abs() - 0.5).abs() < 1e-15);
        }
        assert!(register_aux(AuxSequence::Gaussian, Arc::new(|_, _| 0.0)).is_err());
    }
}
