//! Text and CSV rendering of weaving reports.

use std::io::Write;

use fusionweave::WeavingReport;

/// Rows beyond this are only written to CSV.
pub const MAX_PRINTED_ROWS: usize = 256;

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Header, one row per evaluated assignment, then `universal,,C,D,woven`.
pub fn write_csv<W: Write>(report: &WeavingReport, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "assignment_id",
        "labels",
        "lambda_min",
        "lambda_max",
        "is_frame",
    ])?;
    for (id, e) in report.per_assignment.iter().enumerate() {
        w.write_record([
            id.to_string(),
            e.assignment.to_string(),
            float(e.bounds.lower),
            float(e.bounds.upper),
            e.is_frame.to_string(),
        ])?;
    }
    w.write_record([
        "universal".to_string(),
        String::new(),
        float(report.universal_lower),
        float(report.universal_upper),
        report.woven.to_string(),
    ])?;
    w.flush()?;
    Ok(())
}

pub fn render_text(report: &WeavingReport) -> String {
    let mut s = String::new();
    let kind = if report.sampled {
        "sampled"
    } else {
        "exhaustive"
    };
    s.push_str(&format!("assignments: {} ({kind})\n", report.enumerated));
    if report.per_assignment.len() <= MAX_PRINTED_ROWS {
        s.push_str(&format!(
            "{:>6}  {:<16} {:>14} {:>14}  frame\n",
            "id", "labels", "lambda_min", "lambda_max"
        ));
        for (id, e) in report.per_assignment.iter().enumerate() {
            s.push_str(&format!(
                "{id:>6}  {:<16} {:>14.8} {:>14.8}  {}\n",
                e.assignment.to_string(),
                e.bounds.lower,
                e.bounds.upper,
                if e.is_frame { "yes" } else { "no" }
            ));
        }
    } else {
        s.push_str("(per-assignment rows omitted, use --csv)\n");
    }
    let label = if report.sampled { " (estimate)" } else { "" };
    s.push_str(&format!(
        "universal bounds{label}: C = {:.10}, D = {:.10}\n",
        report.universal_lower, report.universal_upper
    ));
    s.push_str(&format!(
        "woven: {}\n",
        if report.woven { "yes" } else { "no" }
    ));
    s
}
