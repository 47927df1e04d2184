//! SVG heatmaps from map CSV files.

use std::fmt::Write as _;
use std::io::Read;

use super::CliError;

const PLOT: f64 = 480.0;
const LEFT: f64 = 70.0;
const TOP: f64 = 30.0;
const LEGEND_X: f64 = LEFT + PLOT + 30.0;
const WIDTH: f64 = LEGEND_X + 150.0;
const HEIGHT: f64 = TOP + PLOT + 50.0;
const MISSING: &str = "#d9d9d9";
const RAMP_LOW: [u8; 3] = [49, 54, 149];
const RAMP_HIGH: [u8; 3] = [253, 231, 37];

/// Swatches for the discrete columns, in legend order.
/// Entries are (cell value, legend label, colour).
type Swatch = (&'static str, &'static str, &'static str);

fn palette(column: &str) -> Option<&'static [Swatch]> {
    match column {
        "class" => Some(&[
            ("stable", "stable", "#c0392b"),
            ("unstable", "unstable", "#f4d03f"),
            ("forbidden", "forbidden", "#ffffff"),
            ("unbounded", "unbounded", "#7f8c8d"),
        ]),
        "bounded" => Some(&[("1", "bounded", "#2e86c1"), ("0", "unbounded", "#d5d8dc")]),
        _ => None,
    }
}

struct Cell {
    x: f64,
    y: f64,
    value: String,
}

fn parse_err(line: usize, msg: impl Into<String>) -> CliError {
    CliError::Parse(format!("line {line}: {}", msg.into()))
}

fn read_grid<R: Read>(input: R, column: Option<&str>) -> Result<(String, Vec<Cell>), CliError> {
    let mut rdr = csv::Reader::from_reader(input);
    let headers = rdr
        .headers()
        .map_err(|e| parse_err(1, e.to_string()))?
        .clone();
    let idx = |name: &str| headers.iter().position(|h| h == name);
    let (ix, iy) = match (idx("axis1"), idx("axis2")) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(parse_err(1, "header must contain axis1 and axis2")),
    };
    let column = match column {
        Some(c) => c.to_string(),
        None => ["class", "bounded"]
            .iter()
            .find(|c| idx(c).is_some())
            .map(|c| c.to_string())
            .or_else(|| headers.iter().find(|h| *h != "axis1" && *h != "axis2").map(String::from))
            .ok_or_else(|| parse_err(1, "no value column"))?,
    };
    let iv = idx(&column).ok_or_else(|| parse_err(1, format!("no column `{column}`")))?;

    let mut cells = Vec::new();
    for (n, rec) in rdr.records().enumerate() {
        let line = n + 2;
        let rec = rec.map_err(|e| parse_err(line, e.to_string()))?;
        let num = |i: usize| -> Result<f64, CliError> {
            let s = rec.get(i).unwrap_or("");
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_err(line, format!("not a number: `{s}`")))
        };
        cells.push(Cell {
            x: num(ix)?,
            y: num(iy)?,
            value: rec.get(iv).unwrap_or("").trim().to_string(),
        });
    }
    if cells.is_empty() {
        return Err(parse_err(2, "no data rows"));
    }
    Ok((column, cells))
}

fn levels(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn hex(rgb: [u8; 3]) -> String {
    format!("#{:02x}{:02x}{:02x}", rgb[0], rgb[1], rgb[2])
}

fn ramp(u: f64) -> String {
    let u = u.clamp(0.0, 1.0);
    let mix = |a: u8, b: u8| (a as f64 + (b as f64 - a as f64) * u).round() as u8;
    hex([
        mix(RAMP_LOW[0], RAMP_HIGH[0]),
        mix(RAMP_LOW[1], RAMP_HIGH[1]),
        mix(RAMP_LOW[2], RAMP_HIGH[2]),
    ])
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders a map CSV to a standalone SVG 1.1 document.
///
/// `column` picks the value column; by default `class` or `bounded` if
/// present, else the first non-axis column. Exactly one `<rect>` is emitted
/// per data row; legend swatches are paths.
pub fn render_svg<R: Read>(input: R, column: Option<&str>) -> Result<String, CliError> {
    let (column, cells) = read_grid(input, column)?;
    let xs = levels(cells.iter().map(|c| c.x));
    let ys = levels(cells.iter().map(|c| c.y));
    let (cw, ch) = (PLOT / xs.len() as f64, PLOT / ys.len() as f64);
    let pos = |levels: &[f64], v: f64| levels.binary_search_by(|p| p.total_cmp(&v)).unwrap_or(0);

    let discrete = palette(&column);
    let scalars: Vec<Option<f64>> = cells
        .iter()
        .map(|c| c.value.parse::<f64>().ok().filter(|v| v.is_finite()))
        .collect();
    let (lo, hi) = scalars
        .iter()
        .flatten()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8" standalone="yes"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{LEFT}" y="{}" font-family="sans-serif" font-size="14">{}</text>"#,
        TOP - 10.0,
        escape(&column)
    );
    let _ = writeln!(s, r#"<g shape-rendering="crispEdges">"#);
    for (c, v) in cells.iter().zip(&scalars) {
        let fill = match discrete {
            Some(pal) => pal
                .iter()
                .find(|(value, _, _)| *value == c.value)
                .map_or(MISSING.to_string(), |(_, _, col)| col.to_string()),
            None => match v {
                Some(v) if hi > lo => ramp((v - lo) / (hi - lo)),
                Some(_) => ramp(0.0),
                None => MISSING.to_string(),
            },
        };
        let x = LEFT + pos(&xs, c.x) as f64 * cw;
        let y = TOP + PLOT - (pos(&ys, c.y) + 1) as f64 * ch;
        let _ = writeln!(
            s,
            r#"<rect x="{x:.4}" y="{y:.4}" width="{cw:.4}" height="{ch:.4}" fill="{fill}"/>"#
        );
    }
    let _ = writeln!(s, "</g>");

    // axes annotations
    let label = |s: &mut String, x: f64, y: f64, anchor: &str, text: String| {
        let _ = writeln!(
            s,
            r#"<text x="{x:.1}" y="{y:.1}" font-family="sans-serif" font-size="11" text-anchor="{anchor}">{text}</text>"#
        );
    };
    label(&mut s, LEFT, TOP + PLOT + 16.0, "start", format!("{}", xs[0]));
    label(&mut s, LEFT + PLOT, TOP + PLOT + 16.0, "end", format!("{}", xs[xs.len() - 1]));
    label(&mut s, LEFT + PLOT / 2.0, TOP + PLOT + 34.0, "middle", "axis1".into());
    label(&mut s, LEFT - 6.0, TOP + PLOT, "end", format!("{}", ys[0]));
    label(&mut s, LEFT - 6.0, TOP + 10.0, "end", format!("{}", ys[ys.len() - 1]));
    label(&mut s, LEFT - 6.0, TOP + PLOT / 2.0, "end", "axis2".into());

    match discrete {
        Some(pal) => {
            for (i, (_, name, col)) in pal.iter().enumerate() {
                let y = TOP + i as f64 * 24.0;
                let _ = writeln!(
                    s,
                    r##"<path class="swatch" d="M{LEGEND_X} {y}h16v16h-16z" fill="{col}" stroke="#000000" stroke-width="0.5"/>"##
                );
                label(&mut s, LEGEND_X + 22.0, y + 12.0, "start", name.to_string());
            }
        }
        None => {
            let _ = writeln!(
                s,
                r#"<defs><linearGradient id="ramp" x1="0" y1="1" x2="0" y2="0"><stop offset="0" stop-color="{}"/><stop offset="1" stop-color="{}"/></linearGradient></defs>"#,
                ramp(0.0),
                ramp(1.0)
            );
            let _ = writeln!(
                s,
                r##"<path class="ramp" d="M{LEGEND_X} {TOP}h20v{PLOT}h-20z" fill="url(#ramp)" stroke="#000000" stroke-width="0.5"/>"##
            );
            let (lo_txt, hi_txt) = if lo.is_finite() {
                (format!("min {lo:.6e}"), format!("max {hi:.6e}"))
            } else {
                ("min n/a".to_string(), "max n/a".to_string())
            };
            label(&mut s, LEGEND_X + 26.0, TOP + 10.0, "start", hi_txt);
            label(&mut s, LEGEND_X + 26.0, TOP + PLOT, "start", lo_txt);
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}
