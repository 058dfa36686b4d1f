//! Record CSV, summary JSON and the SVG chart.

use std::fmt::Write as _;
use std::io::Write;

use septenary_core::{CorrelationSummary, Experiment, TrialRecord};
use serde::{Deserialize, Serialize};

const PHI_COLUMNS: [&str; 4] = ["phi_a", "phi_b", "phi_c", "phi_d"];

/// CSV header for an experiment: `k,lambda,phi_*,A..,corr`.
pub fn csv_header(experiment: Experiment) -> Vec<&'static str> {
    let n = experiment.arity();
    let mut h = vec!["k", "lambda"];
    h.extend_from_slice(&PHI_COLUMNS[..n]);
    h.extend_from_slice(experiment.labels());
    h.push("corr");
    h
}

/// Writes the header and one row per record.
pub fn write_records<W: Write>(out: W, experiment: Experiment, records: &[TrialRecord]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(csv_header(experiment))?;
    let mut row: Vec<String> = Vec::with_capacity(11);
    for r in records {
        row.clear();
        row.push(r.index.to_string());
        row.push(r.lambda.as_i8().to_string());
        row.extend(r.phis().iter().map(f64::to_string));
        row.extend(r.outcomes().iter().map(i8::to_string));
        row.push(r.corr.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Where the effective seed came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeedSource {
    /// `--seed` on the command line.
    Flag,
    /// The `SEPTENARY_SEED` environment variable.
    Env,
    /// Built-in default.
    Default,
}

/// Summary JSON payload.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryReport {
    /// Aggregates of the run.
    #[serde(flatten)]
    pub summary: CorrelationSummary,
    /// Origin of `seed`.
    pub seed_source: SeedSource,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 48.0;

fn px(angle_deg: f64) -> f64 {
    MARGIN + angle_deg / 360.0 * (WIDTH - 2.0 * MARGIN)
}

fn py(value: f64) -> f64 {
    HEIGHT / 2.0 - value * (HEIGHT / 2.0 - MARGIN)
}

/// Line chart of binned mean correlation against angle, over `-cos`.
///
/// Everything drawn comes from `summary`.
pub fn render_svg(summary: &CorrelationSummary) -> String {
    let label = match summary.experiment {
        Experiment::Epr => "angle between a and b (deg)",
        Experiment::Ghz => "phi_a + phi_b - phi_c - phi_d (deg)",
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (x0, x1, y0, y1) = (px(0.0), px(360.0), py(-1.0), py(1.0));
    let _ =
        writeln!(s, r#"<rect x="{x0}" y="{y1}" width="{}" height="{}" fill="none" stroke="black"/>"#, x1 - x0, y0 - y1);
    let _ = writeln!(s, r##"<line x1="{x0}" y1="{0}" x2="{x1}" y2="{0}" stroke="#bbb"/>"##, py(0.0));
    for deg in (0..=360).step_by(90) {
        let x = px(f64::from(deg));
        let _ = writeln!(s, r#"<text x="{x}" y="{}" font-size="11" text-anchor="middle">{deg}</text>"#, y0 + 16.0);
    }
    for v in [-1, 0, 1] {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="11" text-anchor="end">{v}</text>"#,
            x0 - 6.0,
            py(f64::from(v)) + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">{label}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 8.0
    );

    let cosine: Vec<String> = (0..=360)
        .map(|d| {
            let d = f64::from(d);
            format!("{:.2},{:.2}", px(d), py(-d.to_radians().cos()))
        })
        .collect();
    let _ = writeln!(s, r##"<polyline points="{}" fill="none" stroke="#c33" stroke-width="1.5"/>"##, cosine.join(" "));
    let means: Vec<String> =
        summary.bins.iter().map(|b| format!("{:.2},{:.2}", px(b.angle_deg), py(b.mean_corr))).collect();
    let _ = writeln!(s, r##"<polyline points="{}" fill="none" stroke="#236" stroke-width="1"/>"##, means.join(" "));
    for b in &summary.bins {
        let _ =
            writeln!(s, r##"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="#236"/>"##, px(b.angle_deg), py(b.mean_corr));
    }
    let _ = writeln!(
        s,
        r##"<text x="{}" y="{}" font-size="11" fill="#c33">-cos</text><text x="{}" y="{}" font-size="11" fill="#236">binned mean ({} trials)</text>"##,
        x1 - 150.0,
        y1 - 20.0,
        x1 - 110.0,
        y1 - 20.0,
        summary.trials
    );
    s.push_str("</svg>\n");
    s
}
