//! Text, JSON, CSV and SVG renderings of analysis results.
//!
//! Numbers are written in shortest round-trip decimal form. Exact
//! rationals are converted to the nearest `f64` first, so `4/5` prints as
//! `0.8`.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::dynamics::{DynamicsTrace, FixedPoint, ReplicatorResult};
use crate::equilibrium::{
    EnumerationMethod, EquilibriumReport, FlipMargin, FlipReport, NashProfile,
};
use crate::model::Warning;
use crate::scalar::Scalar;
use crate::scenario_file::ScenarioFile;
use crate::sweep::{Observables, SweepRow, ThresholdResult};

pub const SCHEMA_VERSION: u32 = 1;

/// Shortest decimal that round-trips to the same `f64`, switching to
/// exponent form for very small or very large magnitudes.
pub fn num<T: Scalar>(value: T) -> String {
    let v = value.as_f64();
    if v == 0.0 || !v.is_finite() || (1e-6..1e16).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn json_num<T: Scalar>(value: T) -> Value {
    serde_json::Number::from_f64(value.as_f64())
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

fn json_opt<T: Scalar>(value: Option<T>) -> Value {
    value.map(json_num).unwrap_or(Value::Null)
}

/// Pretty JSON with a trailing newline.
pub fn to_json_text(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("values always serialize");
    text.push('\n');
    text
}

fn method_name(method: EnumerationMethod) -> &'static str {
    match method {
        EnumerationMethod::BruteForce => "brute_force",
        EnumerationMethod::SymmetricFastPath => "symmetric_fast_path",
    }
}

fn envelope(command: &str, scenario: &ScenarioFile) -> Map<String, Value> {
    let mut map = Map::new();
    map.insert("schema_version".into(), json!(SCHEMA_VERSION));
    map.insert("command".into(), json!(command));
    map.insert(
        "scenario".into(),
        serde_json::to_value(scenario).expect("scenario files always serialize"),
    );
    map
}

fn nash_json(profiles: &[NashProfile]) -> Value {
    Value::Array(
        profiles
            .iter()
            .map(|p| json!({"profile": p.profile.to_string(), "strict": p.strict}))
            .collect(),
    )
}

fn margin_json<T: Scalar>(margin: &FlipMargin<T>) -> Value {
    json!({"margin": json_num(margin.margin), "holds": margin.holds})
}

pub fn equilibrium_json<T: Scalar>(report: &EquilibriumReport<T>) -> Value {
    json!({
        "nash_profiles": nash_json(&report.nash_profiles),
        "dominant_strategy": report
            .dominant_strategy
            .iter()
            .map(|a| a.map(|a| a.symbol().to_string()))
            .collect::<Vec<_>>(),
        "classification": report.classification.name(),
        "method": method_name(report.method),
        "welfare_optimum": {
            "profile": report.welfare_optimum.profile.to_string(),
            "welfare": json_num(report.welfare_optimum.welfare),
        },
        "best_nash_welfare": json_opt(report.best_nash_welfare),
        "welfare_gap": json_opt(report.welfare_gap),
    })
}

pub fn flip_json<T: Scalar>(flip: &FlipReport<T>) -> Value {
    let wards: Vec<Value> = flip
        .wards
        .iter()
        .map(|w| {
            json!({
                "ward": w.ward,
                "baseline": margin_json(&w.baseline),
                "effort": w.effort.as_ref().map(margin_json),
                "observability": w.observability.as_ref().map(margin_json),
                "mechanism": w.mechanism.as_ref().map(margin_json),
                "against_buffering": margin_json(&w.against_buffering),
                "cooperative": margin_json(&w.cooperative),
            })
        })
        .collect();
    json!({
        "wards": wards,
        "blocking_wards": flip.blocking_wards,
        "all_buffer_is_nash": flip.all_buffer_is_nash(),
        "all_expose_is_nash": flip.all_expose_is_nash(),
    })
}

/// Full `analyze` report.
pub fn analysis_json<T: Scalar>(
    scenario: &ScenarioFile,
    arithmetic: &str,
    warnings: &[Warning],
    report: &EquilibriumReport<T>,
    flip: &FlipReport<T>,
) -> Value {
    let mut map = envelope("analyze", scenario);
    map.insert("arithmetic".into(), json!(arithmetic));
    map.insert(
        "warnings".into(),
        json!(warnings.iter().map(|w| w.to_string()).collect::<Vec<_>>()),
    );
    map.insert("equilibrium".into(), equilibrium_json(report));
    map.insert("flip".into(), flip_json(flip));
    Value::Object(map)
}

fn cell<T: Scalar>(margin: Option<&FlipMargin<T>>) -> String {
    match margin {
        Some(m) => format!("{}{}", num(m.margin), if m.holds { "" } else { "*" }),
        None => "-".into(),
    }
}

/// Human-readable `analyze` summary.
pub fn analysis_text<T: Scalar>(
    arithmetic: &str,
    report: &EquilibriumReport<T>,
    flip: &FlipReport<T>,
) -> String {
    let mut out = String::new();
    let n = flip.wards.len();
    let _ = writeln!(out, "wards: {n}");
    let _ = writeln!(out, "arithmetic: {arithmetic}");
    let _ = writeln!(out, "method: {}", method_name(report.method));
    let _ = writeln!(out, "nash_profiles: {}", report.nash_profiles.len());
    for p in &report.nash_profiles {
        let _ = writeln!(
            out,
            "  {} {}",
            p.profile,
            if p.strict { "strict" } else { "weak" }
        );
    }
    let dominant: Vec<String> = report
        .dominant_strategy
        .iter()
        .map(|a| a.map_or("-".to_string(), |a| a.symbol().to_string()))
        .collect();
    let _ = writeln!(out, "dominant_strategy: {}", dominant.join(" "));
    let _ = writeln!(out, "classification: {}", report.classification.name());
    let _ = writeln!(
        out,
        "welfare_optimum: {} ({})",
        report.welfare_optimum.profile,
        num(report.welfare_optimum.welfare)
    );
    let none = || "none".to_string();
    let _ = writeln!(
        out,
        "best_nash_welfare: {}",
        report.best_nash_welfare.map_or_else(none, num)
    );
    let _ = writeln!(
        out,
        "welfare_gap: {}",
        report.welfare_gap.map_or_else(none, num)
    );

    let _ = writeln!(
        out,
        "expose advantage u(E) - u(B) per ward; * marks a condition that fails:"
    );
    let _ = writeln!(
        out,
        "  baseline, effort, observability, vs_buffering: Buffer is a best reply to all-Buffer"
    );
    let _ = writeln!(
        out,
        "  mechanism, cooperative: Expose is a best reply to all-Expose"
    );
    let header = [
        "ward",
        "baseline",
        "effort",
        "observability",
        "mechanism",
        "vs_buffering",
        "cooperative",
    ];
    let mut rows: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
    for w in &flip.wards {
        rows.push(vec![
            w.ward.to_string(),
            cell(Some(&w.baseline)),
            cell(w.effort.as_ref()),
            cell(w.observability.as_ref()),
            cell(w.mechanism.as_ref()),
            cell(Some(&w.against_buffering)),
            cell(Some(&w.cooperative)),
        ]);
    }
    let widths: Vec<usize> = (0..header.len())
        .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
        .collect();
    for row in &rows {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(text, width)| format!("{text:<width$}"))
            .collect();
        let _ = writeln!(out, "  {}", line.join("  ").trim_end());
    }
    let blocking: Vec<String> = flip.blocking_wards.iter().map(|w| w.to_string()).collect();
    let _ = writeln!(
        out,
        "blocking_wards: {}",
        if blocking.is_empty() {
            "none".to_string()
        } else {
            blocking.join(",")
        }
    );
    out
}

fn csv_text(header: &[String], rows: Vec<Vec<String>>) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(header).expect("writing to memory");
    for row in rows {
        writer.write_record(&row).expect("writing to memory");
    }
    String::from_utf8(writer.into_inner().expect("writing to memory")).expect("csv output is utf-8")
}

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

/// Columns `step,state,mover,payoff_delta`; row 0 is the initial profile
/// with an empty mover.
pub fn dynamics_csv<T: Scalar>(trace: &DynamicsTrace<T>) -> String {
    let rows = trace
        .steps
        .iter()
        .enumerate()
        .map(|(i, s)| {
            vec![
                i.to_string(),
                s.profile.to_string(),
                s.mover.map_or(String::new(), |m| m.to_string()),
                num(s.payoff_delta),
            ]
        })
        .collect();
    csv_text(&strings(&["step", "state", "mover", "payoff_delta"]), rows)
}

/// Columns `t,x`.
pub fn replicator_csv<T: Scalar>(result: &ReplicatorResult<T>) -> String {
    let rows = result
        .trajectory
        .iter()
        .map(|(t, x)| vec![num(*t), num(*x)])
        .collect();
    csv_text(&strings(&["t", "x"]), rows)
}

pub fn fixed_points_text<T: Scalar>(points: &[FixedPoint<T>]) -> String {
    points
        .iter()
        .map(|p| format!("{} ({})", num(p.x), p.stability.name()))
        .collect::<Vec<_>>()
        .join(", ")
}

fn profiles_cell(profiles: &[NashProfile]) -> String {
    profiles
        .iter()
        .map(|p| format!("{}{}", p.profile, if p.strict { "" } else { "~" }))
        .collect::<Vec<_>>()
        .join(";")
}

/// Sweep table. Always starts with `value`; the remaining columns depend on
/// the requested observables:
///
/// * `nash_set`: `nash_count,nash_set` (profiles joined by `;`, weak ones
///   suffixed with `~`)
/// * `classification`
/// * `welfare_gap` (empty when no pure equilibrium exists)
/// * `flip_margins`: `vs_buffering_<i>` and `cooperative_<i>` per ward,
///   then `blocking_wards` joined by `;`
pub fn sweep_csv<T: Scalar>(
    rows: &[SweepRow<T>],
    n_wards: usize,
    observables: Observables,
) -> String {
    let mut header = vec!["value".to_string()];
    if observables.nash_set {
        header.extend(strings(&["nash_count", "nash_set"]));
    }
    if observables.classification {
        header.push("classification".into());
    }
    if observables.welfare_gap {
        header.push("welfare_gap".into());
    }
    if observables.flip_margins {
        header.extend((0..n_wards).map(|i| format!("vs_buffering_{i}")));
        header.extend((0..n_wards).map(|i| format!("cooperative_{i}")));
        header.push("blocking_wards".into());
    }
    let body = rows
        .iter()
        .map(|row| {
            let mut cells = vec![num(row.value)];
            if let Some(set) = &row.nash_set {
                cells.push(set.len().to_string());
                cells.push(profiles_cell(set));
            }
            if let Some(class) = row.classification {
                cells.push(class.name().to_string());
            }
            if let Some(gap) = row.welfare_gap {
                cells.push(gap.map_or(String::new(), num));
            }
            if let Some(flip) = &row.flip {
                cells.extend(flip.wards.iter().map(|w| num(w.against_buffering.margin)));
                cells.extend(flip.wards.iter().map(|w| num(w.cooperative.margin)));
                cells.push(
                    flip.blocking_wards
                        .iter()
                        .map(|w| w.to_string())
                        .collect::<Vec<_>>()
                        .join(";"),
                );
            }
            cells
        })
        .collect();
    csv_text(&header, body)
}

pub fn threshold_value<T: Scalar>(path: &str, lo: T, hi: T, result: &ThresholdResult<T>) -> Value {
    json!({
        "path": path,
        "predicate": result.predicate.name(),
        "lo": json_num(lo),
        "hi": json_num(hi),
        "critical_value": json_num(result.critical_value),
        "bracket": [json_num(result.bracket.0), json_num(result.bracket.1)],
        "true_above": result.true_above,
        "iterations": result.iterations,
        "analytic_value": json_opt(result.analytic_value),
    })
}

/// `sweep --critical` report.
pub fn threshold_json<T: Scalar>(
    scenario: &ScenarioFile,
    path: &str,
    lo: T,
    hi: T,
    result: &ThresholdResult<T>,
) -> Value {
    let mut map = envelope("sweep", scenario);
    map.insert("threshold".into(), threshold_value(path, lo, hi, result));
    Value::Object(map)
}

/// Envelope for the `report` bundle summary.
pub fn bundle_json(scenario: &ScenarioFile, analysis: Value, sweeps: Vec<Value>) -> Value {
    let mut map = envelope("report", scenario);
    map.insert("analysis".into(), analysis);
    map.insert("sweeps".into(), Value::Array(sweeps));
    Value::Object(map)
}

/// One line of a margin chart.
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

/// Axis labels, rounded so float noise does not reach the chart.
fn tick(value: f64) -> f64 {
    (value * 1e6).round() / 1e6 + 0.0
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Line chart of margins against a swept parameter, with a dashed zero line.
pub fn margin_svg(title: &str, x_label: &str, series: &[Series]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const LEFT: f64 = 70.0;
    const RIGHT: f64 = 150.0;
    const TOP: f64 = 40.0;
    const BOTTOM: f64 = 50.0;

    let all = series
        .iter()
        .flat_map(|s| s.points.iter())
        .filter(|(x, y)| x.is_finite() && y.is_finite());
    let (mut x_min, mut x_max, mut y_min, mut y_max) = (f64::MAX, f64::MIN, 0.0f64, 0.0f64);
    for (x, y) in all {
        x_min = x_min.min(*x);
        x_max = x_max.max(*x);
        y_min = y_min.min(*y);
        y_max = y_max.max(*y);
    }
    if x_min > x_max {
        (x_min, x_max) = (0.0, 1.0);
    }
    if x_max == x_min {
        x_max = x_min + 1.0;
    }
    if y_max == y_min {
        y_max = y_min + 1.0;
    }
    let px = |x: f64| LEFT + (x - x_min) / (x_max - x_min) * (W - LEFT - RIGHT);
    let py = |y: f64| TOP + (y_max - y) / (y_max - y_min) * (H - TOP - BOTTOM);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        W / 2.0,
        escape(title)
    );
    let _ = writeln!(
        svg,
        r#"<rect x="{LEFT}" y="{TOP}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        W - LEFT - RIGHT,
        H - TOP - BOTTOM
    );
    let _ = writeln!(
        svg,
        r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#888" stroke-dasharray="4 3"/>"##,
        W - RIGHT,
        y = py(0.0)
    );
    for (value, anchor_x) in [(x_min, px(x_min)), (x_max, px(x_max))] {
        let _ = writeln!(
            svg,
            r#"<text x="{anchor_x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            H - BOTTOM + 16.0,
            tick(value)
        );
    }
    for value in [y_min, 0.0, y_max] {
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            py(value) + 4.0,
            tick(value)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        (LEFT + W - RIGHT) / 2.0,
        H - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">u(E) - u(B)</text>"#,
        (TOP + H - BOTTOM) / 2.0,
        (TOP + H - BOTTOM) / 2.0
    );
    for (i, s) in series.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let points: Vec<String> = s
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|(x, y)| format!("{:.2},{:.2}", px(*x), py(*y)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="2" points="{}"/>"#,
            points.join(" ")
        );
        let ly = TOP + 14.0 + 18.0 * i as f64;
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{colour}" stroke-width="2"/>"#,
            W - RIGHT + 10.0,
            ly - 4.0,
            W - RIGHT + 30.0,
            ly - 4.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{ly:.2}">{}</text>"#,
            W - RIGHT + 36.0,
            escape(&s.label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::{enumerate_nash, flip_conditions, AnalysisOptions};
    use crate::model::{BenefitSpec, Scenario};
    use crate::scalar::Exact;

    fn s0<T: Scalar>() -> Scenario<T> {
        let f = |v: f64| T::from_f64_checked(v).unwrap();
        Scenario::symmetric(
            4,
            f(2.0),
            f(1.0),
            BenefitSpec::Linear {
                beta_per_exposer: f(0.3),
            },
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn numbers_use_shortest_form() {
        assert_eq!(num(0.8f64), "0.8");
        assert_eq!(num(Exact::new(4, 5)), "0.8");
        assert_eq!(num(-4.0f64), "-4");
        assert_eq!(num(0.7999999999999998f64), "0.7999999999999998");
        assert_eq!(num(2.504088143413319e-22f64), "2.504088143413319e-22");
        assert_eq!(num(-0.0f64), "-0");
    }

    #[test]
    fn analysis_text_for_s0() {
        let scenario = s0::<Exact>();
        let report = enumerate_nash(&scenario, &AnalysisOptions::default()).unwrap();
        let flip = flip_conditions(&scenario, Exact::from_count(0)).unwrap();
        let text = analysis_text("exact", &report, &flip);
        assert!(text.contains("  BBBB strict\n"), "{text}");
        assert!(text.contains("welfare_gap: 0.8\n"), "{text}");
        assert!(text.contains("welfare_optimum: EEEE (-3.2)"), "{text}");
    }

    #[test]
    fn analysis_json_embeds_scenario() {
        let scenario = s0::<f64>();
        let file = ScenarioFile::from_scenario(&scenario, Default::default());
        let report = enumerate_nash(&scenario, &AnalysisOptions::default()).unwrap();
        let flip = flip_conditions(&scenario, 0.0).unwrap();
        let value = analysis_json(&file, "f64", &[], &report, &flip);
        assert_eq!(value["schema_version"], 1);
        assert_eq!(value["scenario"]["n_wards"], 4);
        assert_eq!(value["equilibrium"]["nash_profiles"][0]["profile"], "BBBB");
        let reparsed: ScenarioFile = serde_json::from_value(value["scenario"].clone()).unwrap();
        assert_eq!(reparsed.to_scenario::<f64>().unwrap(), scenario);
    }

    #[test]
    fn csv_has_header() {
        let text = csv_text(&strings(&["a", "b"]), vec![vec!["1".into(), "x;y".into()]]);
        assert_eq!(text, "a,b\n1,x;y\n");
    }

    #[test]
    fn svg_is_deterministic_and_escaped() {
        let series = vec![Series {
            label: "ward 0 <".into(),
            points: vec![(0.0, -0.7), (1.0, 0.3)],
        }];
        let a = margin_svg("t", "x", &series);
        let b = margin_svg("t", "x", &series);
        assert_eq!(a, b);
        assert!(a.starts_with("<svg") && a.ends_with("</svg>\n"));
        assert!(a.contains("ward 0 &lt;"));
    }
}
