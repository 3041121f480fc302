//! Pipeline stages. Each stage reads its inputs from, and writes its outputs
//! to, the configured output directory.
//!
//! | stage        | reads                        | writes                                  |
//! |--------------|------------------------------|-----------------------------------------|
//! | `pddt`       |                              | `pddt.bin`                              |
//! | `sort`       | `pddt.bin`                   | `significant.bin`, `non_significant.bin`|
//! | `experiment` | both sorted files, `pddt.bin`| `sample.bin`, HW tables, plots, t-test  |
//! | `extract`    | `significant.bin`            | `promising.bin`, `promising.*`          |
//! | `trails`     | `promising.bin`              | `trails/`, report, best trail, comparison|

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use simon32_core::diff::{model_round_exact, monte_carlo_dp};
use simon32_core::experiments::{
    boxplot_stats, build_heatmap, histogram_in_range, summarize, welch_t_test, BoxplotStats,
    HwSampleSet, HEATMAP_BIN_WIDTH,
};
use simon32_core::pddt::{
    compute_pddt, load_pddt, output_weight_stratum, quota_sample, save_pddt, sort_differentials,
};
use simon32_core::trails::{
    distinguisher_check, extract_promising, trail_from_state, trail_report, transition_hw,
    ExtractOptions, RankedTrail, PRIOR_RESULTS, SIMON32_BLOCK_BITS,
};
use simon32_core::{
    DiffState, DiffTriple, HwExperiment, HwMode, PartialDdt, PromisingMetric, Simon, ThresholdMode,
    Trail, WordSize,
};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{Cell, Emitter, Table};
use crate::svg;

pub const PDDT_FILE: &str = "pddt.bin";
pub const SIGNIFICANT_FILE: &str = "significant.bin";
pub const NON_SIGNIFICANT_FILE: &str = "non_significant.bin";
pub const SAMPLE_FILE: &str = "sample.bin";
pub const PROMISING_FILE: &str = "promising.bin";

fn load(path: &Path) -> Result<PartialDdt, CliError> {
    load_pddt(path).map_err(|e| CliError::reading(path, e))
}

fn save(table: &PartialDdt, path: &Path) -> Result<(), CliError> {
    save_pddt(table, path).map_err(|e| CliError::reading(path, e))
}

fn cipher(config: &RunConfig) -> Simon {
    Simon::with_word_size(config.word_size)
}

fn experiment(config: &RunConfig) -> HwExperiment {
    HwExperiment::new(
        cipher(config),
        config.rounds_experiment,
        config.trials,
        config.hw_mode,
        config.seed,
    )
}

fn relation(mode: ThresholdMode) -> &'static str {
    match mode {
        ThresholdMode::AtLeast => ">=",
        ThresholdMode::Greater => ">",
    }
}

#[derive(Debug, Clone)]
pub struct PddtBuild {
    pub table: PartialDdt,
    /// Entry counts under `p >= thr` and `p > thr`, for boundary diagnostics.
    pub at_least: usize,
    pub greater: usize,
    pub elapsed: Duration,
}

impl PddtBuild {
    pub fn diagnostic(&self, thr: f64) -> String {
        let mut s = format!(
            "boundary check: p >= {thr} gives {}, p > {thr} gives {}",
            self.at_least, self.greater
        );
        if self.at_least == self.greater {
            s.push_str(" (threshold is not a power of two, so both comparisons agree)");
        }
        s
    }
}

/// Builds the pDDT and writes `pddt.bin` (and `pddt.csv` when asked).
pub fn cmd_pddt_build(config: &RunConfig, csv: bool) -> Result<PddtBuild, CliError> {
    config.validate()?;
    let emit = Emitter::new(&config.output_dir, config)?;
    let start = Instant::now();
    let table = compute_pddt(
        config.word_size,
        config.pddt_threshold,
        config.threshold_mode,
    )?;
    let elapsed = start.elapsed();
    let other_mode = match config.threshold_mode {
        ThresholdMode::AtLeast => ThresholdMode::Greater,
        ThresholdMode::Greater => ThresholdMode::AtLeast,
    };
    let other = compute_pddt(config.word_size, config.pddt_threshold, other_mode)?.len();
    let (at_least, greater) = match config.threshold_mode {
        ThresholdMode::AtLeast => (table.len(), other),
        ThresholdMode::Greater => (other, table.len()),
    };
    save(&table, &emit.path(PDDT_FILE))?;
    if csv {
        let mut t = Table::new(&["a", "b", "c", "log2p"]);
        for d in table.entries() {
            t.push(vec![
                Cell::Hex(d.a),
                Cell::Hex(d.b),
                Cell::Hex(d.c),
                d.log2p().into(),
            ]);
        }
        emit.table("pddt", &t)?;
    }
    emit.run_config()?;
    let build = PddtBuild {
        table,
        at_least,
        greater,
        elapsed,
    };
    println!(
        "pddt: {} entries (n={}, p {} {}, max weight {}) in {:.1} ms",
        build.table.len(),
        config.word_size,
        relation(config.threshold_mode),
        config.pddt_threshold,
        build
            .table
            .max_weight()
            .map_or_else(|| "none".to_owned(), |w| w.to_string()),
        elapsed.as_secs_f64() * 1e3
    );
    println!("pddt: {}", build.diagnostic(config.pddt_threshold));
    Ok(build)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SortCounts {
    pub significant: usize,
    pub non_significant: usize,
}

/// Splits a table at the significance threshold into two table files.
pub fn cmd_sort(config: &RunConfig, input: Option<&Path>) -> Result<SortCounts, CliError> {
    config.validate()?;
    let emit = Emitter::new(&config.output_dir, config)?;
    let input = input.map_or_else(|| emit.path(PDDT_FILE), Path::to_path_buf);
    let table = load(&input)?;
    let sorted = sort_differentials(&table, config.sig_threshold)?;
    let ws = table.word_size();
    let sig = PartialDdt::from_entries(ws, table.max_weight(), sorted.significant);
    let non = PartialDdt::from_entries(ws, table.max_weight(), sorted.non_significant);
    save(&sig, &emit.path(SIGNIFICANT_FILE))?;
    save(&non, &emit.path(NON_SIGNIFICANT_FILE))?;
    emit.run_config()?;
    let counts = SortCounts {
        significant: sig.len(),
        non_significant: non.len(),
    };
    println!(
        "sort: {} significant (p >= {}), {} non-significant",
        counts.significant, config.sig_threshold, counts.non_significant
    );
    Ok(counts)
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub significant: HwSampleSet,
    pub sample: HwSampleSet,
    /// `(t, p, df)`, or the reason the test could not be run.
    pub t_test: Result<(f64, f64, f64), String>,
}

fn samples_table(set: &HwSampleSet) -> Table {
    let mut t = Table::new(&["a", "b", "c", "trial", "hw"]);
    for s in &set.samples {
        t.push(vec![
            Cell::Hex(s.triple.a),
            Cell::Hex(s.triple.b),
            Cell::Hex(s.triple.c),
            s.trial.into(),
            s.hw.into(),
        ]);
    }
    t
}

/// Unit-width bins over the integer HW range of both sets, so the two
/// histograms share an axis.
fn hw_histogram(values: &[f64], lo: f64, hi: f64) -> Result<Table, CliError> {
    let mut t = Table::new(&["hw", "count"]);
    let bins = histogram_in_range(values, lo, hi + 1.0, (hi - lo) as usize + 1)?;
    for b in bins {
        t.push(vec![Cell::Float(b.lo), b.count.into()]);
    }
    Ok(t)
}

fn boxplot_row(label: &str, s: &BoxplotStats) -> Vec<Cell> {
    vec![
        label.into(),
        s.min.into(),
        s.q1.into(),
        s.median.into(),
        s.q3.into(),
        s.max.into(),
        s.lower_fence.into(),
        s.upper_fence.into(),
        s.outliers.len().into(),
    ]
}

/// Runs the HW experiment on the significant set and on a stratified sample
/// of the non-significant set, then writes tables, plots and a Welch test.
pub fn cmd_experiment(config: &RunConfig) -> Result<ExperimentResult, CliError> {
    config.validate()?;
    let emit = Emitter::new(&config.output_dir, config)?;
    let sig = load(&emit.path(SIGNIFICANT_FILE))?;
    let non = load(&emit.path(NON_SIGNIFICANT_FILE))?;
    let sample_entries = if non.is_empty() {
        Vec::new()
    } else {
        quota_sample(
            non.entries(),
            config.sample_percent,
            output_weight_stratum,
            config.seed,
        )?
    };
    let sample_table = PartialDdt::from_entries(non.word_size(), non.max_weight(), sample_entries);
    save(&sample_table, &emit.path(SAMPLE_FILE))?;

    let exp = experiment(config);
    let significant = exp.run_set("significant", sig.entries())?;
    let sample = exp.run_set("sample", sample_table.entries())?;
    emit.table("hw_significant", &samples_table(&significant))?;
    emit.table("hw_sample", &samples_table(&sample))?;

    let (va, vb) = (significant.values(), sample.values());
    let all = va.iter().chain(&vb).copied();
    let lo = all.clone().fold(f64::INFINITY, f64::min);
    let hi = all.fold(f64::NEG_INFINITY, f64::max);
    let mut summary = Table::new(&["set", "n", "mean", "std_dev", "skewness", "min", "max"]);
    let mut boxes = Table::new(&[
        "set",
        "min",
        "q1",
        "median",
        "q3",
        "max",
        "lower_fence",
        "upper_fence",
        "outliers",
    ]);
    let mut outliers = Table::new(&["set", "hw", "count"]);
    let mut box_stats = Vec::new();
    for (set, values) in [(&significant, &va), (&sample, &vb)] {
        let label = set.label.as_str();
        if values.is_empty() {
            summary.note(format!("{label} set is empty"));
            boxes.note(format!("{label} set is empty"));
            emit.table(&format!("histogram_{label}"), &Table::new(&["hw", "count"]))?;
            continue;
        }
        let hist = hw_histogram(values, lo, hi)?;
        emit.table(&format!("histogram_{label}"), &hist)?;
        let bins = histogram_in_range(values, lo, hi + 1.0, (hi - lo) as usize + 1)?;
        emit.svg(
            &format!("histogram_{label}.svg"),
            &svg::histogram(&bins, &format!("HW distribution, {label}"), "hw"),
        )?;
        let s = summarize(values).expect("non-empty");
        summary.push(vec![
            label.into(),
            s.n.into(),
            s.mean.into(),
            s.std_dev.into(),
            s.skewness.into(),
            set.min_hw().unwrap_or(0).into(),
            (values.iter().copied().fold(0.0, f64::max)).into(),
        ]);
        let b = boxplot_stats(values)?;
        boxes.push(boxplot_row(label, &b));
        let mut distinct: Vec<(f64, usize)> = Vec::new();
        for &o in &b.outliers {
            match distinct.last_mut() {
                Some((v, n)) if *v == o => *n += 1,
                _ => distinct.push((o, 1)),
            }
        }
        for (v, n) in distinct {
            outliers.push(vec![label.into(), v.into(), n.into()]);
        }
        box_stats.push((label, b));
    }
    emit.table("summary", &summary)?;
    emit.table("boxplot", &boxes)?;
    emit.table("boxplot_outliers", &outliers)?;
    let refs: Vec<(&str, &BoxplotStats)> = box_stats.iter().map(|(l, b)| (*l, b)).collect();
    emit.svg("boxplot.svg", &svg::boxplot(&refs, "HW by set", "hw"))?;

    let t_test = welch_t_test(&va, &vb)
        .map(|r| (r.t_statistic, r.p_value, r.df))
        .map_err(|e| e.to_string());
    let mut tt = Table::new(&["t", "p", "df"]);
    match &t_test {
        Ok((t, p, df)) => tt.push(vec![(*t).into(), (*p).into(), (*df).into()]),
        Err(reason) => {
            tt.note(format!("not computed: {reason}"));
            eprintln!("experiment: t-test not computed: {reason}");
        }
    }
    emit.table("ttest", &tt)?;

    if config.word_size == WordSize::SIMON32 {
        let full = load(&emit.path(PDDT_FILE))?;
        let grid = build_heatmap(&exp, full.entries())?;
        let mut heat = Table::new(&["row", "col", "a_lo", "b_lo", "count", "mean_hw"]);
        for (row, col, c) in grid.iter() {
            heat.push(vec![
                row.into(),
                col.into(),
                Cell::Hex(row as u32 * HEATMAP_BIN_WIDTH),
                Cell::Hex(col as u32 * HEATMAP_BIN_WIDTH),
                c.count.into(),
                c.mean().map_or(Cell::Empty, Cell::Float),
            ]);
        }
        emit.table("heatmap", &heat)?;
        emit.svg("heatmap.svg", &svg::heatmap(&grid, "mean HW over (a, b)"))?;
    } else {
        eprintln!("experiment: heatmap skipped, it bins 16-bit words");
    }
    emit.run_config()?;

    match &t_test {
        Ok((t, p, df)) => println!(
            "experiment: {} significant trials, {} sampled trials, t = {t:.4}, p = {p:e}, df = {df:.1}",
            significant.len(),
            sample.len()
        ),
        Err(_) => println!(
            "experiment: {} significant trials, {} sampled trials, no t-test",
            significant.len(),
            sample.len()
        ),
    }
    Ok(ExperimentResult {
        significant,
        sample,
        t_test,
    })
}

fn extract_options(config: &RunConfig) -> ExtractOptions {
    ExtractOptions {
        hw_threshold: config.extract_hw,
        metric: config.extract_metric,
        include_trivial: config.include_trivial,
    }
}

/// Keeps the significant differentials whose HW is at most the extraction
/// threshold and writes them to `promising.bin` and a table.
pub fn cmd_extract(config: &RunConfig) -> Result<Vec<DiffTriple>, CliError> {
    config.validate()?;
    let emit = Emitter::new(&config.output_dir, config)?;
    let sig = load(&emit.path(SIGNIFICANT_FILE))?;
    let promising =
        extract_promising(sig.entries(), &extract_options(config), &experiment(config))?;
    let mut t = Table::new(&["a", "b", "c", "hw"]);
    t.note(format!(
        "promising means {} hw <= {}",
        config.extract_metric, config.extract_hw
    ));
    if config.extract_metric == PromisingMetric::Transition {
        t.note("transition hw is hw(a ^ b) + hw(c)");
    }
    for p in &promising {
        t.push(vec![
            Cell::Hex(p.triple.a),
            Cell::Hex(p.triple.b),
            Cell::Hex(p.triple.c),
            p.observed_hw.into(),
        ]);
    }
    emit.table("promising", &t)?;
    let triples: Vec<DiffTriple> = promising.iter().map(|p| p.triple).collect();
    save(
        &PartialDdt::from_entries(sig.word_size(), sig.max_weight(), triples.clone()),
        &emit.path(PROMISING_FILE),
    )?;
    emit.run_config()?;
    println!("extract: {} promising differentials", triples.len());
    for d in &triples {
        println!("  ({:#06x}, {:#06x}) -> {:#06x}", d.a, d.b, d.c);
    }
    if triples.is_empty() {
        return Err(CliError::Empty("no promising differentials".into()));
    }
    Ok(triples)
}

/// `round,dL,dR,log2p` rows plus a `total,,,-W` trailer.
pub fn trail_table(trail: &Trail) -> Table {
    let mut t = Table::new(&["round", "dL", "dR", "log2p"]);
    for r in &trail.rows {
        t.push(vec![
            r.round.into(),
            Cell::Hex(r.state.dl),
            Cell::Hex(r.state.dr),
            (-(r.weight as i64)).into(),
        ]);
    }
    t.push(vec![
        "total".into(),
        Cell::Empty,
        Cell::Empty,
        trail.log2p().into(),
    ]);
    t
}

fn fmt_log2p(x: f64) -> String {
    if x == 0.0 {
        "2^0".to_owned()
    } else {
        format!("2^{x}")
    }
}

pub fn comparison_table(best: Option<&RankedTrail>) -> Table {
    let mut t = Table::new(&[
        "cipher",
        "rounds",
        "probability",
        "log2p",
        "year",
        "reference",
    ]);
    for p in &PRIOR_RESULTS {
        t.push(vec![
            p.cipher.into(),
            p.rounds.into(),
            fmt_log2p(p.log2p).into(),
            p.log2p.into(),
            p.year.into(),
            p.reference.into(),
        ]);
    }
    if let Some(b) = best {
        let w = b.trail.log2p();
        t.push(vec![
            "SIMON32".into(),
            b.trail.rows.len().into(),
            fmt_log2p(w as f64).into(),
            w.into(),
            Cell::Empty,
            "computed".into(),
        ]);
    }
    t
}

/// Renders a table as left-aligned text columns.
pub fn aligned_text(t: &Table) -> String {
    let render = |c: &Cell| match c {
        Cell::Int(v) => v.to_string(),
        Cell::Float(v) => crate::output::fmt_float(*v),
        Cell::Hex(v) => format!("{v:#06x}"),
        Cell::Text(s) => s.clone(),
        Cell::Empty => "-".to_owned(),
    };
    let rows: Vec<Vec<String>> = std::iter::once(t.columns.iter().map(|c| c.to_string()).collect())
        .chain(t.rows.iter().map(|r| r.iter().map(render).collect()))
        .collect();
    let widths: Vec<usize> = (0..t.columns.len())
        .map(|i| rows.iter().map(|r| r[i].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r
            .iter()
            .zip(&widths)
            .map(|(cell, &w)| format!("{cell:<w$}"))
            .collect();
        let _ = writeln!(out, "{}", line.join("  ").trim_end());
    }
    out
}

#[derive(Debug, Clone)]
pub struct TrailsResult {
    pub report: Vec<RankedTrail>,
}

impl TrailsResult {
    pub fn best(&self) -> Option<&RankedTrail> {
        self.report.first()
    }
}

/// Generates and ranks the trail of every promising differential, writing
/// one file per trail, the ranked report, the best trail and a comparison
/// with published distinguishers.
pub fn cmd_trails(config: &RunConfig, input: Option<&Path>) -> Result<TrailsResult, CliError> {
    config.validate()?;
    let emit = Emitter::new(&config.output_dir, config)?;
    let input = input.map_or_else(|| emit.path(PROMISING_FILE), Path::to_path_buf);
    let promising = load(&input)?;
    let ws = promising.word_size();
    let diffs: Vec<_> = promising
        .entries()
        .iter()
        .map(|d| simon32_core::PromisingDiff {
            triple: *d,
            observed_hw: transition_hw(d),
        })
        .collect();
    let report = trail_report(&diffs, config.rounds_trail, ws);
    let block_bits = 2 * ws.bits();
    let dir = emit.subdir("trails")?;
    let mut t = Table::new(&[
        "rank",
        "a",
        "b",
        "c",
        "rounds",
        "total_weight",
        "log2p",
        "verdict",
        "file",
    ]);
    for (i, r) in report.iter().enumerate() {
        let rank = i + 1;
        let stem = format!("trail_{rank:03}");
        dir.table(&stem, &trail_table(&r.trail))?;
        let d = r.promising.triple;
        t.push(vec![
            rank.into(),
            Cell::Hex(d.a),
            Cell::Hex(d.b),
            Cell::Hex(d.c),
            r.trail.rows.len().into(),
            r.trail.total_weight.into(),
            r.trail.log2p().into(),
            distinguisher_check(&r.trail, block_bits).to_string().into(),
            format!("trails/{stem}.{}", config.format.extension()).into(),
        ]);
    }
    if block_bits != SIMON32_BLOCK_BITS {
        t.note(format!("verdicts use a {block_bits}-bit block"));
    }
    emit.table("trail_report", &t)?;
    let best = report.first();
    match best {
        Some(b) => {
            let mut bt = trail_table(&b.trail);
            bt.note(format!(
                "start ({:#06x}, {:#06x}) -> {:#06x}",
                b.promising.triple.a, b.promising.triple.b, b.promising.triple.c
            ));
            emit.table("best_trail", &bt)?;
        }
        None => {
            let mut bt = Table::new(&["round", "dL", "dR", "log2p"]);
            bt.note("no promising differentials");
            emit.table("best_trail", &bt)?;
        }
    }
    let cmp = comparison_table(best);
    emit.table("comparison", &cmp)?;
    emit.text("comparison.txt", &aligned_text(&cmp))?;
    emit.run_config()?;
    println!(
        "trails: {} trails of {} rounds",
        report.len(),
        config.rounds_trail
    );
    if let Some(b) = best {
        println!(
            "trails: best ({:#06x}, {:#06x}) total weight {} (2^-{}), {}",
            b.promising.triple.a,
            b.promising.triple.b,
            b.trail.total_weight,
            b.trail.total_weight,
            distinguisher_check(&b.trail, block_bits)
        );
    }
    if report.is_empty() {
        return Err(CliError::Empty(
            "no promising differentials to trail".into(),
        ));
    }
    Ok(TrailsResult { report })
}

/// One trail from an explicit start state, printed to stdout.
pub fn cmd_trail(config: &RunConfig, start: DiffState) -> Result<Trail, CliError> {
    config.validate()?;
    let trail = trail_from_state(start, config.rounds_trail, config.word_size);
    println!("round,dL,dR,log2p");
    for r in &trail.rows {
        println!(
            "{},{:#06x},{:#06x},{}",
            r.round,
            r.state.dl,
            r.state.dr,
            -(r.weight as i64)
        );
    }
    println!("total,,,{}", trail.log2p());
    Ok(trail)
}

/// Measures how often real rounds follow the deterministic model from
/// `start`, next to the exact one-round probability.
pub fn cmd_model_gap(
    config: &RunConfig,
    start: DiffState,
    max_rounds: usize,
    trials: u64,
) -> Result<PathBuf, CliError> {
    config.validate()?;
    let emit = Emitter::new(&config.output_dir, config)?;
    let c = cipher(config);
    let exact = model_round_exact(&c, start);
    let keyed = config.hw_mode != HwMode::Unkeyed;
    let mut t = Table::new(&[
        "rounds",
        "hits",
        "trials",
        "estimate",
        "std_error",
        "model_weight",
    ]);
    t.note(format!(
        "start ({:#06x}, {:#06x}); exact one-round probability {}",
        start.dl, start.dr, exact
    ));
    for rounds in 1..=max_rounds {
        let est = monte_carlo_dp(&c, start, rounds, trials, config.seed, keyed)?;
        let model = trail_from_state(start, rounds, config.word_size);
        println!(
            "model-gap: {rounds} rounds: {}/{} follow the model (model weight {})",
            est.hits, est.trials, model.total_weight
        );
        t.push(vec![
            rounds.into(),
            est.hits.into(),
            est.trials.into(),
            est.estimate.into(),
            est.std_error.into(),
            model.total_weight.into(),
        ]);
    }
    println!("model-gap: exact one-round probability {exact}");
    emit.table("model_gap", &t)
}

#[derive(Debug, Clone)]
pub struct RunAll {
    pub pddt: PddtBuild,
    pub sort: SortCounts,
    pub experiment: ExperimentResult,
    pub promising: Vec<DiffTriple>,
    pub trails: TrailsResult,
}

/// Stages A to E in order.
pub fn run_all(config: &RunConfig) -> Result<RunAll, CliError> {
    let pddt = cmd_pddt_build(config, false)?;
    let sort = cmd_sort(config, None)?;
    let experiment = cmd_experiment(config)?;
    let promising = cmd_extract(config)?;
    let trails = cmd_trails(config, None)?;
    Ok(RunAll {
        pddt,
        sort,
        experiment,
        promising,
        trails,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trail_table_has_trailer() {
        let t = trail_table(&trail_from_state(
            DiffState::new(0x8000, 0x8000),
            2,
            WordSize::SIMON32,
        ));
        assert_eq!(t.rows.len(), 3);
        assert_eq!(
            t.rows[2],
            vec!["total".into(), Cell::Empty, Cell::Empty, Cell::Int(-2)]
        );
    }

    #[test]
    fn comparison_has_prior_rows_and_computed_row() {
        assert_eq!(comparison_table(None).rows.len(), 8);
        let d = DiffTriple::new(0x8000, 0x8000, 0, 0);
        let report = trail_report(
            &[simon32_core::PromisingDiff {
                triple: d,
                observed_hw: 0,
            }],
            20,
            WordSize::SIMON32,
        );
        let t = comparison_table(report.first());
        assert_eq!(t.rows.len(), 9);
        assert_eq!(t.rows[8][1], Cell::Int(20));
        assert_eq!(t.rows[8][2], Cell::Text("2^-32".into()));
    }

    #[test]
    fn aligned_text_pads_columns() {
        let mut t = Table::new(&["x", "name"]);
        t.push(vec![Cell::Int(100), "a".into()]);
        t.push(vec![Cell::Int(1), Cell::Empty]);
        assert_eq!(aligned_text(&t), "x    name\n100  a\n1    -\n");
    }

    #[test]
    fn zero_weight_prints_without_sign() {
        assert_eq!(fmt_log2p(-0.0), "2^0");
        assert_eq!(fmt_log2p(-29.69), "2^-29.69");
    }
}
