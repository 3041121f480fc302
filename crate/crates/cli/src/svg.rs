//! Small self-contained SVG charts: axes, bars, boxes and colour-ramp cells.

use std::fmt::Write;

use simon32_core::experiments::{BoxplotStats, HeatmapGrid, HistogramBin, HEATMAP_BINS};

const W: f64 = 640.0;
const H: f64 = 400.0;
const MARGIN: f64 = 48.0;

fn open(out: &mut String, w: f64, h: f64, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        w / 2.0,
        escape(title)
    );
}

fn axes(out: &mut String, x_label: &str, y_label: &str) {
    let (x0, y0, x1, y1) = (MARGIN, H - MARGIN, W - MARGIN / 2.0, MARGIN);
    let _ = writeln!(
        out,
        r#"<path d="M{x0} {y1} L{x0} {y0} L{x1} {y0}" stroke="black" fill="none"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        H - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="14" y="{:.1}" text-anchor="middle" transform="rotate(-90 14 {:.1})">{}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(y_label)
    );
}

fn tick(out: &mut String, x: f64, y: f64, label: &str, anchor: &str) {
    let _ = writeln!(
        out,
        r#"<text x="{x:.1}" y="{y:.1}" text-anchor="{anchor}">{}</text>"#,
        escape(label)
    );
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

pub fn histogram(bins: &[HistogramBin], title: &str, x_label: &str) -> String {
    let mut out = String::new();
    open(&mut out, W, H, title);
    axes(&mut out, x_label, "count");
    let max = bins.iter().map(|b| b.count).max().unwrap_or(0).max(1) as f64;
    let plot_w = W - 1.5 * MARGIN;
    let plot_h = H - 2.0 * MARGIN;
    let bw = plot_w / bins.len().max(1) as f64;
    for (i, b) in bins.iter().enumerate() {
        let h = plot_h * b.count as f64 / max;
        let _ = writeln!(
            out,
            r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#4c72b0" stroke="white"/>"##,
            MARGIN + i as f64 * bw,
            H - MARGIN - h,
            bw,
            h
        );
    }
    if let (Some(first), Some(last)) = (bins.first(), bins.last()) {
        tick(
            &mut out,
            MARGIN,
            H - MARGIN + 14.0,
            &format!("{}", first.lo),
            "start",
        );
        tick(
            &mut out,
            W - MARGIN / 2.0,
            H - MARGIN + 14.0,
            &format!("{}", last.hi),
            "end",
        );
    }
    tick(
        &mut out,
        MARGIN - 4.0,
        MARGIN + 4.0,
        &format!("{max}"),
        "end",
    );
    out.push_str("</svg>\n");
    out
}

pub fn boxplot(sets: &[(&str, &BoxplotStats)], title: &str, y_label: &str) -> String {
    let mut out = String::new();
    open(&mut out, W, H, title);
    axes(&mut out, "set", y_label);
    let lo = sets
        .iter()
        .map(|(_, s)| s.min)
        .fold(f64::INFINITY, f64::min);
    let hi = sets
        .iter()
        .map(|(_, s)| s.max)
        .fold(f64::NEG_INFINITY, f64::max);
    let (lo, hi) = if lo.is_finite() && hi > lo {
        (lo, hi)
    } else {
        (lo.min(0.0), lo.max(0.0) + 1.0)
    };
    let plot_h = H - 2.0 * MARGIN;
    let y = |v: f64| H - MARGIN - plot_h * (v - lo) / (hi - lo);
    let slot = (W - 1.5 * MARGIN) / sets.len().max(1) as f64;
    for (i, (label, s)) in sets.iter().enumerate() {
        let cx = MARGIN + slot * (i as f64 + 0.5);
        let half = slot * 0.2;
        let whisk_lo = s.lower_fence.max(s.min);
        let whisk_hi = s.upper_fence.min(s.max);
        let _ = writeln!(
            out,
            r#"<path d="M{cx:.2} {:.2} L{cx:.2} {:.2} M{cx:.2} {:.2} L{cx:.2} {:.2}" stroke="black"/>"#,
            y(whisk_lo),
            y(s.q1),
            y(s.q3),
            y(whisk_hi)
        );
        let _ = writeln!(
            out,
            r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#dd8452" stroke="black"/>"##,
            cx - half,
            y(s.q3),
            2.0 * half,
            (y(s.q1) - y(s.q3)).max(0.5)
        );
        let _ = writeln!(
            out,
            r#"<path d="M{:.2} {:.2} L{:.2} {:.2}" stroke="black" stroke-width="2"/>"#,
            cx - half,
            y(s.median),
            cx + half,
            y(s.median)
        );
        let mut seen = Vec::new();
        for &o in &s.outliers {
            if seen.last() == Some(&o) {
                continue;
            }
            seen.push(o);
            let _ = writeln!(
                out,
                r#"<circle cx="{cx:.2}" cy="{:.2}" r="2" fill="none" stroke="black"/>"#,
                y(o)
            );
        }
        tick(&mut out, cx, H - MARGIN + 14.0, label, "middle");
    }
    tick(&mut out, MARGIN - 4.0, y(hi) + 4.0, &format!("{hi}"), "end");
    tick(&mut out, MARGIN - 4.0, y(lo), &format!("{lo}"), "end");
    out.push_str("</svg>\n");
    out
}

/// Mean HW per cell on a blue-to-red ramp; empty cells stay grey.
pub fn heatmap(grid: &HeatmapGrid, title: &str) -> String {
    let cell = 6.0;
    let side = cell * HEATMAP_BINS as f64;
    let (w, h) = (side + 2.0 * MARGIN, side + 2.0 * MARGIN);
    let mut out = String::new();
    open(&mut out, w, h, title);
    let means: Vec<f64> = grid.iter().filter_map(|(_, _, c)| c.mean()).collect();
    let lo = means.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    for (row, col, c) in grid.iter() {
        let fill = match c.mean() {
            None => "#dddddd".to_owned(),
            Some(m) => {
                let t = if hi > lo { (m - lo) / (hi - lo) } else { 0.5 };
                let r = (255.0 * t).round() as u8;
                let b = (255.0 * (1.0 - t)).round() as u8;
                format!("#{r:02x}40{b:02x}")
            }
        };
        let _ = writeln!(
            out,
            r#"<rect x="{:.1}" y="{:.1}" width="{cell}" height="{cell}" fill="{fill}"/>"#,
            MARGIN + col as f64 * cell,
            MARGIN + row as f64 * cell
        );
    }
    tick(
        &mut out,
        MARGIN + side / 2.0,
        h - 14.0,
        "b / 1024",
        "middle",
    );
    let _ = writeln!(
        out,
        r#"<text x="14" y="{:.1}" text-anchor="middle" transform="rotate(-90 14 {:.1})">a / 1024</text>"#,
        MARGIN + side / 2.0,
        MARGIN + side / 2.0
    );
    if lo.is_finite() {
        tick(
            &mut out,
            w - MARGIN,
            h - 14.0,
            &format!("mean HW {lo:.2} .. {hi:.2}"),
            "end",
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use simon32_core::experiments::{boxplot_stats, histogram};
    use simon32_core::DiffTriple;

    #[test]
    fn histogram_has_a_bar_per_bin() {
        let bins = histogram(&[1.0, 2.0, 2.0, 3.0], 3).unwrap();
        let svg = super::histogram(&bins, "t <1>", "hw");
        assert_eq!(svg.matches("<rect").count(), 1 + 3);
        assert!(svg.contains("t &lt;1&gt;"));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn boxplot_draws_each_set() {
        let a = boxplot_stats(&[1.0, 2.0, 3.0, 4.0, 100.0]).unwrap();
        let b = boxplot_stats(&[5.0; 4]).unwrap();
        let svg = boxplot(&[("a", &a), ("b", &b)], "box", "hw");
        assert_eq!(svg.matches(r##"fill="#dd8452""##).count(), 2);
        assert_eq!(svg.matches("<circle").count(), 1);
    }

    #[test]
    fn heatmap_has_every_cell() {
        let mut g = HeatmapGrid::default();
        g.add(&DiffTriple::new(0, 0, 0, 0), 2.0);
        g.add(&DiffTriple::new(0xffff, 0xffff, 0, 0), 9.0);
        let svg = heatmap(&g, "heat");
        assert_eq!(svg.matches("<rect").count(), 1 + 4096);
        assert!(svg.contains("#0040ff") && svg.contains("#ff4000"));
    }
}
