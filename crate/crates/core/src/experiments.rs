//! Hamming-weight experiments over sets of differentials, and the summary
//! statistics used to compare them.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};
use statrs::function::erf::erfc;

use crate::diff::paper_round_propagate;
use crate::error::{Error, Result};
use crate::pddt::DiffTriple;
use crate::sampling::{random_schedule, random_state, stream_rng};
use crate::simon::Simon;
use crate::word::{DiffState, WordSize};

pub const DEFAULT_EXPERIMENT_ROUNDS: usize = 10;

/// Heatmap grid side; the 16-bit input space is cut into 64 bins per axis.
pub const HEATMAP_BINS: usize = 64;
pub const HEATMAP_BIN_WIDTH: u32 = 1024;

/// Above this many degrees of freedom the t tail is taken from the normal.
pub const NORMAL_APPROX_DF: f64 = 100.0;

/// How a differential's Hamming weight is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HwMode {
    /// Deterministic trail model; every trial gives the same value.
    PaperModel,
    /// Real SIMON rounds with a fresh random key and plaintext pair per trial.
    #[default]
    Empirical,
    /// Real SIMON rounds with all-zero round keys.
    Unkeyed,
}

impl FromStr for HwMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper-model" | "paper" | "model" => Ok(HwMode::PaperModel),
            "empirical" | "keyed" => Ok(HwMode::Empirical),
            "unkeyed" => Ok(HwMode::Unkeyed),
            _ => Err(Error::InvalidArgument(format!("unknown hw mode {s:?}"))),
        }
    }
}

impl fmt::Display for HwMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HwMode::PaperModel => "paper-model",
            HwMode::Empirical => "empirical",
            HwMode::Unkeyed => "unkeyed",
        })
    }
}

/// `Σ_{r=1..rounds} hw(ΔL_r ^ ΔR_r)` under the deterministic model,
/// starting from `start`.
pub fn paper_model_hw(start: DiffState, rounds: usize, ws: WordSize) -> u32 {
    let mut s = start;
    let mut total = 0;
    for _ in 0..rounds {
        s = paper_round_propagate(s, ws).0;
        total += s.xor_weight();
    }
    total
}

/// PRNG stream for a differential; depends only on the triple.
fn triple_stream(t: &DiffTriple) -> u64 {
    u64::from(t.a) | u64::from(t.b) << 21 | u64::from(t.c) << 42
}

/// Configuration of a batch of HW experiments.
#[derive(Debug, Clone, Copy)]
pub struct HwExperiment {
    pub cipher: Simon,
    pub rounds: usize,
    pub trials: usize,
    pub mode: HwMode,
    pub seed: u64,
}

impl HwExperiment {
    pub fn new(cipher: Simon, rounds: usize, trials: usize, mode: HwMode, seed: u64) -> Self {
        HwExperiment {
            cipher,
            rounds,
            trials,
            mode,
            seed,
        }
    }

    /// HW of each trial for one differential, injected as `(ΔL, ΔR) = (a, b)`.
    pub fn run(&self, d: &DiffTriple) -> Result<Vec<u32>> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument(
                "experiment needs at least one trial".into(),
            ));
        }
        let ws = self.cipher.word_size();
        let start = DiffState::new(d.a, d.b);
        match self.mode {
            HwMode::PaperModel => Ok(vec![paper_model_hw(start, self.rounds, ws); self.trials]),
            HwMode::Empirical | HwMode::Unkeyed => {
                let keyed = self.mode == HwMode::Empirical;
                let mut rng = stream_rng(self.seed, triple_stream(d));
                (0..self.trials)
                    .map(|_| {
                        let keys = random_schedule(&self.cipher, &mut rng, self.rounds, keyed)?;
                        let p0 = random_state(&mut rng, ws.mask());
                        let mut total = 0;
                        self.cipher
                            .walk_pair(p0, p0.xor(start), self.rounds, &keys, |s| {
                                total += s.xor_weight()
                            })?;
                        Ok(total)
                    })
                    .collect()
            }
        }
    }

    pub fn mean_hw(&self, d: &DiffTriple) -> Result<f64> {
        let v = self.run(d)?;
        Ok(v.iter().map(|&x| f64::from(x)).sum::<f64>() / v.len() as f64)
    }

    /// Runs every differential (in parallel) and collects the trials in input
    /// order.
    pub fn run_set(&self, label: impl Into<String>, entries: &[DiffTriple]) -> Result<HwSampleSet> {
        let per_diff: Vec<Vec<u32>> = entries
            .par_iter()
            .map(|d| self.run(d))
            .collect::<Result<_>>()?;
        let samples = entries
            .iter()
            .zip(per_diff)
            .flat_map(|(d, hws)| {
                hws.into_iter()
                    .enumerate()
                    .map(move |(trial, hw)| HwSample {
                        triple: *d,
                        trial: trial as u32,
                        hw,
                    })
            })
            .collect();
        Ok(HwSampleSet {
            label: label.into(),
            samples,
        })
    }
}

/// Convenience form of [`HwExperiment::run`].
pub fn run_hw_experiment(
    cipher: &Simon,
    d: &DiffTriple,
    trials: usize,
    rounds: usize,
    mode: HwMode,
    seed: u64,
) -> Result<Vec<u32>> {
    HwExperiment::new(*cipher, rounds, trials, mode, seed).run(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HwSample {
    pub triple: DiffTriple,
    pub trial: u32,
    pub hw: u32,
}

/// Labelled HW measurements, one per trial per differential.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HwSampleSet {
    pub label: String,
    pub samples: Vec<HwSample>,
}

impl HwSampleSet {
    pub fn values(&self) -> Vec<f64> {
        self.samples.iter().map(|s| f64::from(s.hw)).collect()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn min_hw(&self) -> Option<u32> {
        self.samples.iter().map(|s| s.hw).min()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: u64,
}

/// Equal-width histogram over `[min, max]` of the data; the last bin is
/// closed. An empty input gives `bin_count` empty bins over `[0, 1)`.
pub fn histogram(samples: &[f64], bin_count: usize) -> Result<Vec<HistogramBin>> {
    let (lo, hi) = match samples
        .iter()
        .copied()
        .fold(None, |acc: Option<(f64, f64)>, x| {
            Some(acc.map_or((x, x), |(l, h)| (l.min(x), h.max(x))))
        }) {
        None => (0.0, 1.0),
        Some((l, h)) if l == h => (l, l + 1.0),
        Some(r) => r,
    };
    histogram_in_range(samples, lo, hi, bin_count)
}

/// Equal-width histogram over `[lo, hi]`; values outside are ignored.
pub fn histogram_in_range(
    samples: &[f64],
    lo: f64,
    hi: f64,
    bin_count: usize,
) -> Result<Vec<HistogramBin>> {
    if bin_count == 0 {
        return Err(Error::InvalidArgument(
            "histogram needs at least one bin".into(),
        ));
    }
    if hi.partial_cmp(&lo) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::InvalidArgument(format!(
            "empty histogram range [{lo}, {hi}]"
        )));
    }
    let width = (hi - lo) / bin_count as f64;
    let mut bins: Vec<HistogramBin> = (0..bin_count)
        .map(|i| HistogramBin {
            lo: lo + width * i as f64,
            hi: if i + 1 == bin_count {
                hi
            } else {
                lo + width * (i + 1) as f64
            },
            count: 0,
        })
        .collect();
    for &x in samples {
        if x < lo || x > hi {
            continue;
        }
        let i = (((x - lo) / width) as usize).min(bin_count - 1);
        bins[i].count += 1;
    }
    Ok(bins)
}

/// Linear-interpolation quantile (Hyndman–Fan type 7) of sorted data.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Five-number summary with outliers beyond the 1.5 × IQR fences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxplotStats {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub lower_fence: f64,
    pub upper_fence: f64,
    pub outliers: Vec<f64>,
}

pub fn boxplot_stats(samples: &[f64]) -> Result<BoxplotStats> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("boxplot of an empty sample".into()));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q1 = quantile_sorted(&sorted, 0.25);
    let q3 = quantile_sorted(&sorted, 0.75);
    let iqr = q3 - q1;
    let (lower_fence, upper_fence) = (q1 - 1.5 * iqr, q3 + 1.5 * iqr);
    let outliers = sorted
        .iter()
        .copied()
        .filter(|&x| x < lower_fence || x > upper_fence)
        .collect();
    Ok(BoxplotStats {
        min: sorted[0],
        q1,
        median: quantile_sorted(&sorted, 0.5),
        q3,
        max: sorted[sorted.len() - 1],
        lower_fence,
        upper_fence,
        outliers,
    })
}

/// Moments used in the experiment summary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    pub std_dev: f64,
    /// Sample skewness `g1`; negative means left-skewed.
    pub skewness: f64,
}

pub fn summarize(samples: &[f64]) -> Option<Summary> {
    if samples.is_empty() {
        return None;
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let m2 = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let m3 = samples.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / n;
    let var = if samples.len() > 1 {
        m2 * n / (n - 1.0)
    } else {
        0.0
    };
    Some(Summary {
        n: samples.len(),
        mean,
        std_dev: var.sqrt(),
        skewness: if m2 > 0.0 { m3 / m2.powf(1.5) } else { 0.0 },
    })
}

/// One cell of the input-difference heatmap.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct HeatmapCell {
    pub count: u64,
    pub sum: f64,
}

impl HeatmapCell {
    pub fn mean(&self) -> Option<f64> {
        (self.count > 0).then(|| self.sum / self.count as f64)
    }
}

/// 64 × 64 grid of mean HW, row `⌊a/1024⌋`, column `⌊b/1024⌋`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatmapGrid {
    cells: Vec<HeatmapCell>,
}

impl Default for HeatmapGrid {
    fn default() -> Self {
        HeatmapGrid {
            cells: vec![HeatmapCell::default(); HEATMAP_BINS * HEATMAP_BINS],
        }
    }
}

impl HeatmapGrid {
    pub fn cell_of(d: &DiffTriple) -> (usize, usize) {
        (
            (d.a / HEATMAP_BIN_WIDTH) as usize,
            (d.b / HEATMAP_BIN_WIDTH) as usize,
        )
    }

    pub fn add(&mut self, d: &DiffTriple, hw: f64) {
        let (i, j) = Self::cell_of(d);
        let cell = &mut self.cells[i * HEATMAP_BINS + j];
        cell.count += 1;
        cell.sum += hw;
    }

    pub fn cell(&self, row: usize, col: usize) -> &HeatmapCell {
        &self.cells[row * HEATMAP_BINS + col]
    }

    /// All cells in row-major order with their coordinates.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &HeatmapCell)> {
        self.cells
            .iter()
            .enumerate()
            .map(|(k, c)| (k / HEATMAP_BINS, k % HEATMAP_BINS, c))
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn total_count(&self) -> u64 {
        self.cells.iter().map(|c| c.count).sum()
    }
}

/// Heatmap of the per-differential mean HW (as measured by `exp`), averaged
/// within each input-difference bin. Only defined for 16-bit words.
pub fn build_heatmap(exp: &HwExperiment, entries: &[DiffTriple]) -> Result<HeatmapGrid> {
    if exp.cipher.word_size() != WordSize::SIMON32 {
        return Err(Error::InvalidArgument(
            "heatmap binning requires 16-bit words".into(),
        ));
    }
    let means: Vec<f64> = entries
        .par_iter()
        .map(|d| exp.mean_hw(d))
        .collect::<Result<_>>()?;
    let mut grid = HeatmapGrid::default();
    for (d, m) in entries.iter().zip(means) {
        grid.add(d, m);
    }
    Ok(grid)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatTestResult {
    pub t_statistic: f64,
    pub p_value: f64,
    pub df: f64,
}

/// Two-sided tail of the standard normal, `2 (1 - Φ(|t|))`.
pub fn two_sided_p_normal(t: f64) -> f64 {
    erfc(t.abs() / std::f64::consts::SQRT_2)
}

/// Two-sided tail of Student's t with `df` degrees of freedom.
pub fn two_sided_p_student(t: f64, df: f64) -> f64 {
    let dist = StudentsT::new(0.0, 1.0, df).expect("positive degrees of freedom");
    (2.0 * dist.cdf(-t.abs())).min(1.0)
}

/// Welch's unequal-variance t-test with Welch–Satterthwaite degrees of
/// freedom. A p-value of exactly zero is floating-point underflow.
pub fn welch_t_test(a: &[f64], b: &[f64]) -> Result<StatTestResult> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::InvalidArgument(
            "t-test needs at least two samples per group".into(),
        ));
    }
    let moments = |x: &[f64]| {
        let n = x.len() as f64;
        let mean = x.iter().sum::<f64>() / n;
        let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (n, mean, var)
    };
    let (na, ma, va) = moments(a);
    let (nb, mb, vb) = moments(b);
    let (sa, sb) = (va / na, vb / nb);
    let se2 = sa + sb;
    if se2 == 0.0 {
        return Err(Error::InvalidArgument(
            "t-test is degenerate: both groups have zero variance".into(),
        ));
    }
    let t = (ma - mb) / se2.sqrt();
    let df = se2 * se2 / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    let p_value = if df > NORMAL_APPROX_DF {
        two_sided_p_normal(t)
    } else {
        two_sided_p_student(t, df)
    };
    Ok(StatTestResult {
        t_statistic: t,
        p_value,
        df,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn model_hw_ten_rounds_of_msb_differential() {
        let s = Simon::simon32();
        let d = DiffTriple::new(0x8000, 0x8000, 0, 0);
        let hws = run_hw_experiment(&s, &d, 5, 10, HwMode::PaperModel, 1).unwrap();
        assert_eq!(hws, vec![17; 5]);
    }

    #[test]
    fn zero_differential_has_zero_hw_in_every_mode() {
        let s = Simon::simon32();
        let d = DiffTriple::new(0, 0, 0, 0);
        for mode in [HwMode::PaperModel, HwMode::Empirical, HwMode::Unkeyed] {
            assert!(run_hw_experiment(&s, &d, 8, 10, mode, 3)
                .unwrap()
                .iter()
                .all(|&h| h == 0));
        }
    }

    #[test]
    fn empirical_is_seeded_and_bounded() {
        let s = Simon::simon32();
        let d = DiffTriple::new(0x1, 0x1, 0, 1);
        let a = run_hw_experiment(&s, &d, 50, 10, HwMode::Empirical, 11).unwrap();
        let b = run_hw_experiment(&s, &d, 50, 10, HwMode::Empirical, 11).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|&h| h <= 10 * 32));
        let c = run_hw_experiment(&s, &d, 50, 10, HwMode::Empirical, 12).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn zero_trials_rejected() {
        let s = Simon::simon32();
        let d = DiffTriple::new(0, 0, 0, 0);
        assert!(run_hw_experiment(&s, &d, 0, 10, HwMode::PaperModel, 0).is_err());
    }

    #[test]
    fn histogram_edge_cases() {
        let one = histogram(&[3.0, 4.0, 9.0], 1).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].count, 3);
        let empty = histogram(&[], 4).unwrap();
        assert_eq!(empty.len(), 4);
        assert!(empty.iter().all(|b| b.count == 0));
        assert!(histogram(&[1.0], 0).is_err());
        let unit = histogram_in_range(&[0.0, 1.0, 1.0, 2.0], 0.0, 3.0, 3).unwrap();
        assert_eq!(
            unit.iter().map(|b| b.count).collect::<Vec<_>>(),
            vec![1, 2, 1]
        );
    }

    #[test]
    fn boxplot_constant_and_ramp() {
        let c = boxplot_stats(&[4.0; 9]).unwrap();
        assert_eq!(
            (c.min, c.q1, c.median, c.q3, c.max),
            (4.0, 4.0, 4.0, 4.0, 4.0)
        );
        assert!(c.outliers.is_empty());
        let ramp: Vec<f64> = (1..=100).map(f64::from).collect();
        let r = boxplot_stats(&ramp).unwrap();
        assert_eq!(r.median, 50.5);
        assert_eq!(r.q1, 25.75);
        assert_eq!(r.q3, 75.25);
        assert!(boxplot_stats(&[]).is_err());
    }

    #[test]
    fn boxplot_flags_outliers() {
        let mut v = vec![10.0; 20];
        v.extend([11.0, 9.0, 0.0]);
        let b = boxplot_stats(&v).unwrap();
        assert!(b.outliers.contains(&0.0));
    }

    #[test]
    fn welch_reference_values() {
        // Reference from a standard statistics package (unequal variances):
        // t = -1.0, p = 0.34659350708733416, df = 8.0
        let r = welch_t_test(&[1.0, 2.0, 3.0, 4.0, 5.0], &[2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        assert!((r.t_statistic + 1.0).abs() < 1e-12);
        assert!((r.df - 8.0).abs() < 1e-12);
        assert!((r.p_value - 0.34659350708733416).abs() < 1e-9);

        // t = -0.5805577953661853, p = 0.5766870910399071, df = 8.451867916421456
        let r = welch_t_test(
            &[1.0, 2.0, 3.0, 4.0, 5.0, 9.0],
            &[2.0, 3.0, 4.0, 5.0, 6.0, 6.5, 7.0],
        )
        .unwrap();
        assert!((r.t_statistic + 0.5805577953661853).abs() < 1e-12);
        assert!((r.df - 8.451867916421456).abs() < 1e-9);
        assert!((r.p_value - 0.5766870910399071).abs() < 1e-9);
    }

    #[test]
    fn welch_identical_and_degenerate() {
        let x = [1.0, 5.0, 2.0, 8.0];
        let r = welch_t_test(&x, &x).unwrap();
        assert_eq!(r.t_statistic, 0.0);
        assert!((r.p_value - 1.0).abs() < 1e-12);
        assert!(welch_t_test(&[2.0, 2.0], &[2.0, 2.0]).is_err());
        assert!(welch_t_test(&[1.0], &[2.0, 3.0]).is_err());
    }

    #[test]
    fn heatmap_cells() {
        let d = DiffTriple::new(0x8000, 0x8000, 0, 0);
        assert_eq!(HeatmapGrid::cell_of(&d), (32, 32));
        let mut g = HeatmapGrid::default();
        assert_eq!(g.cell_count(), 4096);
        g.add(&d, 17.0);
        g.add(&DiffTriple::new(0x8001, 0x83ff, 0, 0), 19.0);
        assert_eq!(g.cell(32, 32).mean(), Some(18.0));
        assert_eq!(g.cell(0, 0).mean(), None);
        assert_eq!(g.total_count(), 2);
    }

    #[test]
    fn heatmap_needs_16_bit_words() {
        let e = HwExperiment::new(
            Simon::with_word_size(WordSize::new(8).unwrap()),
            10,
            1,
            HwMode::PaperModel,
            0,
        );
        assert!(build_heatmap(&e, &[]).is_err());
    }

    fn sample_vec() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(0.0f64..100.0, 2..60)
    }

    proptest! {
        #[test]
        fn welch_is_antisymmetric(a in sample_vec(), b in sample_vec()) {
            if let (Ok(x), Ok(y)) = (welch_t_test(&a, &b), welch_t_test(&b, &a)) {
                prop_assert_eq!(x.t_statistic, -y.t_statistic);
                prop_assert_eq!(x.df, y.df);
                prop_assert!((0.0..=1.0).contains(&x.p_value));
            }
        }

        // The largest gap is about 1.6e-3 at df = 200 and 6.3e-5 at df = 5000.
        #[test]
        fn normal_and_student_tails_agree_at_large_df(t in -8.0f64..8.0, df in 200.0f64..1e5) {
            let gap = (two_sided_p_normal(t) - two_sided_p_student(t, df)).abs();
            prop_assert!(gap < 2e-3, "gap {gap} at t={t} df={df}");
            if df >= 5000.0 {
                prop_assert!(gap < 1e-4, "gap {gap} at t={t} df={df}");
            }
        }

        #[test]
        fn p_value_falls_as_t_grows(t in 0.0f64..8.0, dt in 0.01f64..2.0, df in 2.0f64..400.0) {
            prop_assert!(two_sided_p_student(t + dt, df) <= two_sided_p_student(t, df));
        }

        #[test]
        fn histogram_counts_partition(v in proptest::collection::vec(0.0f64..320.0, 0..200), bins in 1usize..40) {
            let h = histogram(&v, bins).unwrap();
            prop_assert_eq!(h.iter().map(|b| b.count).sum::<u64>(), v.len() as u64);
        }
    }
}
