//! Static SVG line charts for accuracy-style metrics. Everything is
//! emitted as one self-contained document: inline styling only, no
//! scripts, no references to external resources.
//!
//! [`render_chart`] is the pure renderer; [`plot_curves`] extracts a
//! chart from run reports, either along the per-report learning curve
//! (x = training samples per entity) or across reports along a sweep
//! axis (x = the swept config value).

use wmobs_core::harness::{axis_value, RunReport};

use crate::{CliError, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 620.0;
const TOP: f64 = 36.0;
const BOTTOM: f64 = 368.0;

const PALETTE: [&str; 8] = [
    "#2563eb", "#dc2626", "#16a34a", "#9333ea", "#ea580c", "#0891b2", "#4b5563", "#be185d",
];

#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub label: String,
    /// (x, accuracy) pairs; accuracy is drawn on a fixed [0, 1] axis.
    pub points: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    /// Reference accuracy under random guessing, one (x, 1/n) pair per
    /// x position. Drawn dashed; empty means no reference line.
    pub chance: Vec<(f64, f64)>,
}

/// Which quantity runs along the x axis.
#[derive(Clone, Debug, PartialEq)]
pub enum AxisSpec {
    /// Training samples per entity, from each report's learning curve.
    Samples,
    /// A sweep axis name; one x position per report.
    Config(String),
}

fn esc(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

fn tick_label(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e9 {
        format!("{v:.0}")
    } else {
        format!("{v}")
    }
}

struct Frame {
    x0: f64,
    x1: f64,
}

impl Frame {
    fn around(xs: &[f64]) -> Frame {
        let mut x0 = f64::INFINITY;
        let mut x1 = f64::NEG_INFINITY;
        for &x in xs {
            x0 = x0.min(x);
            x1 = x1.max(x);
        }
        if !x0.is_finite() || !x1.is_finite() {
            x0 = 0.0;
            x1 = 1.0;
        }
        if x0 == x1 {
            // Single x position: pad so the point sits mid-plot.
            x0 -= 0.5;
            x1 += 0.5;
        }
        Frame { x0, x1 }
    }

    fn x(&self, v: f64) -> f64 {
        LEFT + (v - self.x0) / (self.x1 - self.x0) * (RIGHT - LEFT)
    }

    fn y(&self, v: f64) -> f64 {
        BOTTOM - v.clamp(0.0, 1.0) * (BOTTOM - TOP)
    }
}

/// Renders a chart to SVG text. One `<polyline>` per series; the chance
/// reference is a dashed `<line>` when flat and a dashed `<path>` when
/// it varies, so polyline count always equals series count.
pub fn render_chart(chart: &Chart) -> String {
    let mut xs: Vec<f64> = Vec::new();
    for s in &chart.series {
        xs.extend(s.points.iter().map(|p| p.0));
    }
    xs.extend(chart.chance.iter().map(|p| p.0));
    let frame = Frame::around(&xs);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH:.0}\" height=\"{HEIGHT:.0}\" \
         viewBox=\"0 0 {WIDTH:.0} {HEIGHT:.0}\" font-family=\"monospace\" font-size=\"12\">\n"
    ));
    svg.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{WIDTH:.0}\" height=\"{HEIGHT:.0}\" fill=\"#ffffff\"/>\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
        (LEFT + RIGHT) / 2.0,
        esc(&chart.title)
    ));

    // Horizontal grid and y ticks on the fixed [0, 1] accuracy axis.
    for i in 0..=4 {
        let v = i as f64 * 0.25;
        let y = frame.y(v);
        svg.push_str(&format!(
            "<line x1=\"{LEFT:.2}\" y1=\"{y:.2}\" x2=\"{RIGHT:.2}\" y2=\"{y:.2}\" \
             stroke=\"#e5e5e5\" stroke-width=\"1\"/>\n"
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{v:.2}</text>\n",
            LEFT - 8.0,
            y + 4.0
        ));
    }

    // X ticks at the data positions, thinned if crowded.
    let mut ticks: Vec<f64> = xs.clone();
    ticks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ticks.dedup();
    let stride = ticks.len().div_ceil(8).max(1);
    for (i, &v) in ticks.iter().enumerate() {
        if i % stride != 0 && i != ticks.len() - 1 {
            continue;
        }
        let x = frame.x(v);
        svg.push_str(&format!(
            "<line x1=\"{x:.2}\" y1=\"{BOTTOM:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" \
             stroke=\"#999999\" stroke-width=\"1\"/>\n",
            BOTTOM + 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>\n",
            BOTTOM + 20.0,
            esc(&tick_label(v))
        ));
    }

    // Axis frame and labels.
    svg.push_str(&format!(
        "<line x1=\"{LEFT:.2}\" y1=\"{TOP:.2}\" x2=\"{LEFT:.2}\" y2=\"{BOTTOM:.2}\" \
         stroke=\"#333333\" stroke-width=\"1\"/>\n"
    ));
    svg.push_str(&format!(
        "<line x1=\"{LEFT:.2}\" y1=\"{BOTTOM:.2}\" x2=\"{RIGHT:.2}\" y2=\"{BOTTOM:.2}\" \
         stroke=\"#333333\" stroke-width=\"1\"/>\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>\n",
        (LEFT + RIGHT) / 2.0,
        HEIGHT - 12.0,
        esc(&chart.x_label)
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{:.2}\" text-anchor=\"middle\" \
         transform=\"rotate(-90 16 {0:.2})\">{1}</text>\n",
        (TOP + BOTTOM) / 2.0,
        esc(&chart.y_label)
    ));

    // Chance reference.
    if chart.chance.len() >= 2 {
        let flat = chart
            .chance
            .iter()
            .all(|p| (p.1 - chart.chance[0].1).abs() < 1e-12);
        if flat {
            let y = frame.y(chart.chance[0].1);
            svg.push_str(&format!(
                "<line x1=\"{LEFT:.2}\" y1=\"{y:.2}\" x2=\"{RIGHT:.2}\" y2=\"{y:.2}\" \
                 stroke=\"#888888\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>\n"
            ));
        } else {
            let mut d = String::new();
            for (i, &(x, v)) in chart.chance.iter().enumerate() {
                let cmd = if i == 0 { 'M' } else { 'L' };
                d.push_str(&format!("{cmd}{:.2} {:.2} ", frame.x(x), frame.y(v)));
            }
            svg.push_str(&format!(
                "<path d=\"{}\" fill=\"none\" stroke=\"#888888\" stroke-width=\"1.5\" \
                 stroke-dasharray=\"6 4\"/>\n",
                d.trim_end()
            ));
        }
    }

    // Series polylines with point markers.
    for (i, s) in chart.series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let points: Vec<String> = s
            .points
            .iter()
            .map(|&(x, v)| format!("{:.2},{:.2}", frame.x(x), frame.y(v)))
            .collect();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            points.join(" ")
        ));
        for &(x, v) in &s.points {
            svg.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"{color}\"/>\n",
                frame.x(x),
                frame.y(v)
            ));
        }
    }

    // Legend, top-right inside the plot area.
    let mut entries: Vec<(String, &str, bool)> = chart
        .series
        .iter()
        .enumerate()
        .map(|(i, s)| (s.label.clone(), PALETTE[i % PALETTE.len()], false))
        .collect();
    if chart.chance.len() >= 2 {
        entries.push(("chance".to_string(), "#888888", true));
    }
    if !entries.is_empty() {
        let chars = entries.iter().map(|e| e.0.chars().count()).max().unwrap();
        let box_w = chars as f64 * 7.3 + 40.0;
        let box_h = entries.len() as f64 * 16.0 + 10.0;
        let bx = RIGHT - box_w - 6.0;
        let by = TOP + 6.0;
        svg.push_str(&format!(
            "<rect x=\"{bx:.2}\" y=\"{by:.2}\" width=\"{box_w:.2}\" height=\"{box_h:.2}\" \
             fill=\"#ffffff\" fill-opacity=\"0.85\" stroke=\"#cccccc\"/>\n"
        ));
        for (i, (label, color, dashed)) in entries.iter().enumerate() {
            let y = by + 13.0 + i as f64 * 16.0;
            let dash = if *dashed { " stroke-dasharray=\"6 4\"" } else { "" };
            svg.push_str(&format!(
                "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" \
                 stroke=\"{color}\" stroke-width=\"1.5\"{dash}/>\n",
                bx + 6.0,
                y - 4.0,
                bx + 24.0,
                y - 4.0
            ));
            svg.push_str(&format!(
                "<text x=\"{:.2}\" y=\"{:.2}\">{}</text>\n",
                bx + 30.0,
                y,
                esc(label)
            ));
        }
    }

    svg.push_str("</svg>\n");
    svg
}

fn short_id(report: &RunReport) -> String {
    report.scenario_id.chars().take(8).collect()
}

/// Builds the accuracy chart for a set of reports and renders it.
///
/// - `Samples`: every report needs a learning curve; x is training
///   samples per entity, and each report contributes a top-1 and a top-k
///   series (prefixed with the scenario id when several reports share
///   the chart).
/// - `Config(axis)`: each report is one x position at its swept config
///   value; series are attribution TPR and/or the learning curve's
///   largest-count accuracies, whichever every report carries.
pub fn plot_curves(reports: &[RunReport], axis: &AxisSpec) -> Result<String> {
    if reports.is_empty() {
        return Err(CliError::EmptyReport);
    }
    let chart = match axis {
        AxisSpec::Samples => samples_chart(reports)?,
        AxisSpec::Config(name) => config_chart(reports, name)?,
    };
    Ok(render_chart(&chart))
}

fn samples_chart(reports: &[RunReport]) -> Result<Chart> {
    let mut series = Vec::new();
    let mut xs: Vec<f64> = Vec::new();
    for r in reports {
        let curve = r
            .curve
            .as_ref()
            .ok_or_else(|| CliError::MetricMissing("external.top1".into()))?;
        let prefix = if reports.len() > 1 {
            format!("{} ", short_id(r))
        } else {
            String::new()
        };
        let points = |ys: &[f64]| {
            curve
                .counts
                .iter()
                .zip(ys)
                .map(|(&c, &v)| (c as f64, v))
                .collect::<Vec<_>>()
        };
        xs.extend(curve.counts.iter().map(|&c| c as f64));
        series.push(Series {
            label: format!("{prefix}top-1"),
            points: points(&curve.top1),
        });
        series.push(Series {
            label: format!("{prefix}top-{}", curve.k),
            points: points(&curve.topk),
        });
    }
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup();
    let n0 = reports[0].config.n_entities;
    let chance = if reports.iter().all(|r| r.config.n_entities == n0) {
        xs.iter().map(|&x| (x, 1.0 / n0 as f64)).collect()
    } else {
        Vec::new()
    };
    Ok(Chart {
        title: "source identification vs observed samples".into(),
        x_label: "training samples per entity".into(),
        y_label: "accuracy".into(),
        series,
        chance,
    })
}

fn config_chart(reports: &[RunReport], axis: &str) -> Result<Chart> {
    let mut order: Vec<usize> = (0..reports.len()).collect();
    let mut xs = Vec::with_capacity(reports.len());
    for r in reports {
        xs.push(axis_value(&r.config, axis).map_err(|e| CliError::Schema(e.to_string()))?);
    }
    order.sort_by(|&a, &b| xs[a].partial_cmp(&xs[b]).unwrap());

    let mut series = Vec::new();
    if reports.iter().all(|r| r.attribution.is_some()) {
        series.push(Series {
            label: "internal top-1 TPR".into(),
            points: order
                .iter()
                .map(|&i| {
                    (
                        xs[i],
                        reports[i].attribution.as_ref().unwrap().top1_tpr_at_fpr,
                    )
                })
                .collect(),
        });
    }
    if reports.iter().all(|r| r.curve.is_some()) {
        let curves: Vec<_> = reports.iter().map(|r| r.curve.as_ref().unwrap()).collect();
        let last_counts: Vec<usize> = curves.iter().map(|c| *c.counts.last().unwrap()).collect();
        let at = if last_counts.iter().all(|&c| c == last_counts[0]) {
            format!(" @{}/entity", last_counts[0])
        } else {
            " (largest count)".to_string()
        };
        series.push(Series {
            label: format!("external top-1{at}"),
            points: order
                .iter()
                .map(|&i| (xs[i], *curves[i].top1.last().unwrap()))
                .collect(),
        });
        series.push(Series {
            label: format!("external top-{}{at}", curves[0].k),
            points: order
                .iter()
                .map(|&i| (xs[i], *curves[i].topk.last().unwrap()))
                .collect(),
        });
    }
    if series.is_empty() {
        return Err(CliError::MetricMissing("internal.top1_tpr_at_fpr".into()));
    }
    let chance = order
        .iter()
        .map(|&i| (xs[i], 1.0 / reports[i].config.n_entities as f64))
        .collect();
    Ok(Chart {
        title: format!("source identification vs {axis}"),
        x_label: axis.to_string(),
        y_label: "accuracy".into(),
        series,
        chance,
    })
}
