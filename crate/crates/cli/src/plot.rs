//! Minimal deterministic SVG plots of two numeric report columns.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Scatter,
    Line,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 64.0;
const TICKS: usize = 5;

/// Named numeric columns read from a report.
#[derive(Debug, Clone, PartialEq)]
pub struct Columns {
    pub names: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

impl Columns {
    fn column(&self, name: &str) -> Result<&[f64], String> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.values[i].as_slice())
            .ok_or_else(|| {
                format!(
                    "no numeric column '{name}' (have: {})",
                    self.names.join(", ")
                )
            })
    }
}

/// Reads a CSV report, or the `rows` array of a JSON report.
pub fn read_columns(path: &Path) -> Result<Columns, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    if path.extension().is_some_and(|e| e == "json") {
        columns_from_json(&text)
    } else {
        columns_from_csv(&text)
    }
}

fn columns_from_csv(text: &str) -> Result<Columns, String> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| format!("malformed CSV header: {e}"))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut cells: Vec<Vec<Option<f64>>> = vec![Vec::new(); header.len()];
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| format!("malformed CSV record {}: {e}", line + 1))?;
        for (i, field) in record.iter().enumerate() {
            cells[i].push(field.trim().parse::<f64>().ok());
        }
    }
    Ok(numeric_only(header, cells))
}

fn columns_from_json(text: &str) -> Result<Columns, String> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| format!("malformed JSON: {e}"))?;
    let rows = value
        .get("rows")
        .and_then(|r| r.as_array())
        .ok_or("JSON report has no 'rows' array")?;
    let first = match rows.first() {
        Some(serde_json::Value::Object(m)) => m,
        Some(_) => return Err("JSON rows must be objects".into()),
        None => {
            return Ok(Columns {
                names: vec![],
                values: vec![],
            })
        }
    };
    let names: Vec<String> = first.keys().cloned().collect();
    let mut cells: Vec<Vec<Option<f64>>> = vec![Vec::new(); names.len()];
    for row in rows {
        for (i, name) in names.iter().enumerate() {
            cells[i].push(row.get(name).and_then(|v| v.as_f64()));
        }
    }
    Ok(numeric_only(names, cells))
}

fn numeric_only(names: Vec<String>, cells: Vec<Vec<Option<f64>>>) -> Columns {
    let (mut keep_names, mut keep_values) = (Vec::new(), Vec::new());
    for (name, col) in names.into_iter().zip(cells) {
        if let Some(values) = col.into_iter().collect::<Option<Vec<f64>>>() {
            keep_names.push(name);
            keep_values.push(values);
        }
    }
    Columns {
        names: keep_names,
        values: keep_values,
    }
}

#[derive(Debug, Clone, Copy)]
struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn fit(values: &[f64], log: bool, name: &str) -> Result<Self, String> {
        if log && values.iter().any(|&v| v <= 0.0) {
            return Err(format!(
                "column '{name}' has non-positive values; cannot use a log axis"
            ));
        }
        let t: Vec<f64> = values
            .iter()
            .map(|&v| if log { v.log10() } else { v })
            .collect();
        let mut lo = t.iter().copied().fold(f64::INFINITY, f64::min);
        let mut hi = t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(format!("column '{name}' has non-finite values"));
        }
        if hi - lo < 1e-12 * lo.abs().max(1.0) {
            lo -= 0.5;
            hi += 0.5;
        }
        Ok(Self { lo, hi, log })
    }

    /// Maps a data value to `[0, 1]`.
    fn unit(&self, v: f64) -> f64 {
        let t = if self.log { v.log10() } else { v };
        (t - self.lo) / (self.hi - self.lo)
    }

    fn tick_label(&self, i: usize) -> String {
        let t = self.lo + (self.hi - self.lo) * i as f64 / (TICKS - 1) as f64;
        let v = if self.log { 10f64.powf(t) } else { t };
        format!("{v:.3e}")
    }
}

pub struct PlotSpec<'a> {
    pub kind: Kind,
    pub x: &'a str,
    pub y: &'a str,
    pub log_x: bool,
    pub log_y: bool,
}

/// Renders `y` against `x` as SVG text. A single point gets a marker and no line.
pub fn render_svg(cols: &Columns, spec: &PlotSpec) -> Result<String, String> {
    let xs = cols.column(spec.x)?;
    let ys = cols.column(spec.y)?;
    if xs.is_empty() {
        return Err("report has no rows to plot".into());
    }
    let ax = Axis::fit(xs, spec.log_x, spec.x)?;
    let ay = Axis::fit(ys, spec.log_y, spec.y)?;
    let pw = WIDTH - 2.0 * MARGIN;
    let ph = HEIGHT - 2.0 * MARGIN;
    let px = |v: f64| MARGIN + ax.unit(v) * pw;
    let py = |v: f64| HEIGHT - MARGIN - ay.unit(v) * ph;

    let mut pts: Vec<(f64, f64)> = xs.iter().zip(ys).map(|(&x, &y)| (x, y)).collect();
    if spec.kind == Kind::Line {
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    }

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for i in 0..TICKS {
        let f = i as f64 / (TICKS - 1) as f64;
        let tx = MARGIN + f * pw;
        let ty = HEIGHT - MARGIN - f * ph;
        let _ = writeln!(
            s,
            r#"<line x1="{tx:.2}" y1="{:.2}" x2="{tx:.2}" y2="{:.2}" stroke="black"/>"#,
            HEIGHT - MARGIN,
            HEIGHT - MARGIN + 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{tx:.2}" y="{:.2}" font-size="10" text-anchor="middle">{}</text>"#,
            HEIGHT - MARGIN + 18.0,
            ax.tick_label(i)
        );
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{ty:.2}" x2="{MARGIN:.2}" y2="{ty:.2}" stroke="black"/>"#,
            MARGIN - 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="10" text-anchor="end">{}</text>"#,
            MARGIN - 8.0,
            ty + 3.0,
            ay.tick_label(i)
        );
    }
    let log_tag = |log: bool| if log { " (log)" } else { "" };
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">{}{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 16.0,
        escape(spec.x),
        log_tag(spec.log_x)
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" font-size="12" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(spec.y),
        log_tag(spec.log_y)
    );

    if spec.kind == Kind::Line && pts.len() > 1 {
        let path: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="1.5"/>"#,
            path.join(" ")
        );
    }
    for &(x, y) in &pts {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="steelblue"/>"#,
            px(x),
            py(y)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cols(x: Vec<f64>, y: Vec<f64>) -> Columns {
        Columns {
            names: vec!["x".into(), "y".into()],
            values: vec![x, y],
        }
    }

    fn spec(kind: Kind) -> PlotSpec<'static> {
        PlotSpec {
            kind,
            x: "x",
            y: "y",
            log_x: false,
            log_y: false,
        }
    }

    #[test]
    fn single_point_has_no_line() {
        let svg = render_svg(&cols(vec![1.0], vec![2.0]), &spec(Kind::Line)).unwrap();
        assert_eq!(svg.matches("<circle").count(), 1);
        assert!(!svg.contains("<polyline"));
    }

    #[test]
    fn empty_is_error() {
        assert!(render_svg(&cols(vec![], vec![]), &spec(Kind::Scatter)).is_err());
    }

    #[test]
    fn log_axis_rejects_nonpositive() {
        let mut s = spec(Kind::Line);
        s.log_y = true;
        assert!(render_svg(&cols(vec![1.0, 2.0], vec![0.0, 1.0]), &s).is_err());
    }

    #[test]
    fn csv_skips_text_columns() {
        let c = columns_from_csv("law,slope\na,1.5\nb,2\n").unwrap();
        assert_eq!(c.names, vec!["slope"]);
        assert_eq!(c.values[0], vec![1.5, 2.0]);
    }
}
