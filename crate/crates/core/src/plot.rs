//! Deterministic SVG output for the scatter-with-fit and CUSUM figures.
//!
//! Coordinates are printed with two decimals, so identical inputs give
//! byte-identical files. Axes, ticks and frames use `<line>` and `<rect>`;
//! data use `<circle>` (one per observation), `<path>` (the fitted curve) and
//! `<polyline>`/`<polygon>` (CUSUM path and band).

use std::fmt::Write as _;

pub const WIDTH: f64 = 640.0;
pub const HEIGHT: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
}

impl Range {
    fn of(values: impl IntoIterator<Item = f64>) -> Option<Range> {
        let (lo, hi) = values
            .into_iter()
            .filter(|v| v.is_finite())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(v), h.max(v)));
        (lo <= hi).then_some(Range { lo, hi })
    }

    /// Widens to tick-aligned bounds, and to a unit interval around a single value.
    fn padded(self) -> (Range, f64) {
        let (lo, hi) = if self.hi > self.lo {
            (self.lo, self.hi)
        } else {
            (self.lo - 1.0, self.hi + 1.0)
        };
        let step = nice_step((hi - lo) / 5.0);
        let r = Range {
            lo: (lo / step).floor() * step,
            hi: (hi / step).ceil() * step,
        };
        (r, step)
    }

    fn span(&self) -> f64 {
        self.hi - self.lo
    }
}

fn nice_step(raw: f64) -> f64 {
    let mag = 10f64.powf(raw.log10().floor());
    let f = raw / mag;
    let nice = if f <= 1.0 {
        1.0
    } else if f <= 2.0 {
        2.0
    } else if f <= 2.5 {
        2.5
    } else if f <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

struct Frame {
    x: Range,
    y: Range,
    xstep: f64,
    ystep: f64,
}

impl Frame {
    fn new(x: Range, y: Range) -> Frame {
        let (x, xstep) = x.padded();
        let (y, ystep) = y.padded();
        Frame { x, y, xstep, ystep }
    }

    fn with_steps(x: Range, xstep: f64, y: Range) -> Frame {
        let (y, ystep) = y.padded();
        Frame { x, y, xstep, ystep }
    }

    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.lo) / self.x.span() * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y.lo) / self.y.span() * (HEIGHT - TOP - BOTTOM)
    }
}

fn tick_label(v: f64, step: f64) -> String {
    let decimals = (0..6)
        .find(|d| {
            let s = step * 10f64.powi(*d);
            (s - s.round()).abs() < 1e-9
        })
        .unwrap_or(6) as usize;
    let s = format!("{v:.decimals$}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        format!("{:.decimals$}", 0.0)
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn open(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
}

fn axes(out: &mut String, f: &Frame, xlabel: &str, ylabel: &str) {
    let (x0, x1) = (f.px(f.x.lo), f.px(f.x.hi));
    let (y0, y1) = (f.py(f.y.lo), f.py(f.y.hi));
    let _ = writeln!(
        out,
        r#"<rect x="{x0:.2}" y="{y1:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        x1 - x0,
        y0 - y1
    );
    let nx = (f.x.span() / f.xstep).round() as i64;
    for i in 0..=nx {
        let v = f.x.lo + i as f64 * f.xstep;
        let p = f.px(v);
        let _ = writeln!(out, r#"<line x1="{p:.2}" y1="{y0:.2}" x2="{p:.2}" y2="{:.2}" stroke="black"/>"#, y0 + 5.0);
        let _ = writeln!(
            out,
            r#"<text x="{p:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            y0 + 18.0,
            tick_label(v, f.xstep)
        );
    }
    let ny = (f.y.span() / f.ystep).round() as i64;
    for i in 0..=ny {
        let v = f.y.lo + i as f64 * f.ystep;
        let p = f.py(v);
        let _ = writeln!(out, r#"<line x1="{:.2}" y1="{p:.2}" x2="{x0:.2}" y2="{p:.2}" stroke="black"/>"#, x0 - 5.0);
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            x0 - 8.0,
            p + 4.0,
            tick_label(v, f.ystep)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 15.0,
        escape(xlabel)
    );
    let _ = writeln!(
        out,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(ylabel)
    );
}

fn points_attr(f: &Frame, pts: impl IntoIterator<Item = (f64, f64)>) -> String {
    pts.into_iter()
        .map(|(x, y)| format!("{:.2},{:.2}", f.px(x), f.py(y)))
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Clone)]
pub struct ScatterPlot<'a> {
    pub title: &'a str,
    pub xlabel: &'a str,
    pub ylabel: &'a str,
    pub points: &'a [(f64, f64)],
    /// Fitted curve; dropped with a warning when fewer than two points are given.
    pub curve: Option<&'a [(f64, f64)]>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Svg {
    pub text: String,
    pub warnings: Vec<String>,
}

pub fn scatter_svg(plot: &ScatterPlot<'_>) -> Svg {
    let mut warnings = Vec::new();
    let curve = match plot.curve {
        Some(c) if c.len() >= 2 => Some(c),
        Some(_) => {
            warnings.push("fitted curve has fewer than two points; curve omitted".to_string());
            None
        }
        None => {
            if plot.points.len() < 2 {
                warnings.push(format!(
                    "{} point(s) cannot determine a fitted curve; curve omitted",
                    plot.points.len()
                ));
            }
            None
        }
    };
    let all = plot.points.iter().chain(curve.into_iter().flatten());
    let x = Range::of(all.clone().map(|p| p.0)).unwrap_or(Range { lo: 0.0, hi: 1.0 });
    let y = Range::of(all.map(|p| p.1)).unwrap_or(Range { lo: 0.0, hi: 1.0 });
    let f = Frame::new(x, y);

    let mut out = String::new();
    open(&mut out, plot.title);
    axes(&mut out, &f, plot.xlabel, plot.ylabel);
    out.push_str("<g class=\"observations\" fill=\"black\">\n");
    for &(x, y) in plot.points {
        let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="3"/>"#, f.px(x), f.py(y));
    }
    out.push_str("</g>\n");
    if let Some(c) = curve {
        let d: Vec<String> = c
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| format!("{}{:.2},{:.2}", if i == 0 { "M" } else { "L" }, f.px(x), f.py(y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<path class="fit" d="{}" fill="none" stroke="black" stroke-width="1.5" stroke-dasharray="6,4"/>"#,
            d.join(" ")
        );
    }
    out.push_str("</svg>\n");
    Svg { text: out, warnings }
}

#[derive(Debug, Clone)]
pub struct CusumPlot<'a> {
    pub title: &'a str,
    pub years: &'a [i32],
    pub path: &'a [f64],
    /// Upper boundary at each year; the lower one is its negative.
    pub bound: &'a [f64],
    pub level_label: &'a str,
}

pub fn cusum_svg(plot: &CusumPlot<'_>) -> Svg {
    let xs: Vec<f64> = plot.years.iter().map(|&y| f64::from(y)).collect();
    let x = Range::of(xs.iter().copied()).unwrap_or(Range { lo: 0.0, hi: 1.0 });
    let (x, xstep) = if x.hi > x.lo {
        (x, nice_step(x.span() / 5.0))
    } else {
        (Range { lo: x.lo - 1.0, hi: x.hi + 1.0 }, 1.0)
    };
    let ymax = plot
        .path
        .iter()
        .chain(plot.bound)
        .map(|v| v.abs())
        .filter(|v| v.is_finite())
        .fold(1.0, f64::max);
    let f = Frame::with_steps(x, xstep, Range { lo: -ymax, hi: ymax });

    let mut out = String::new();
    open(&mut out, plot.title);
    let upper: Vec<(f64, f64)> = xs.iter().copied().zip(plot.bound.iter().copied()).collect();
    let lower: Vec<(f64, f64)> = xs.iter().copied().zip(plot.bound.iter().map(|b| -b)).collect();
    let band: Vec<(f64, f64)> = upper.iter().copied().chain(lower.iter().rev().copied()).collect();
    let _ = writeln!(out, r##"<polygon class="band" points="{}" fill="#dddddd" stroke="none"/>"##, points_attr(&f, band));
    axes(&mut out, &f, "Year", "CUSUM");
    let zero = f.py(0.0);
    let _ = writeln!(
        out,
        r#"<line x1="{:.2}" y1="{zero:.2}" x2="{:.2}" y2="{zero:.2}" stroke="gray" stroke-dasharray="2,2"/>"#,
        f.px(f.x.lo),
        f.px(f.x.hi)
    );
    let _ = writeln!(
        out,
        r#"<polyline class="bound upper" points="{}" fill="none" stroke="black" stroke-dasharray="5,3"/>"#,
        points_attr(&f, upper)
    );
    let _ = writeln!(
        out,
        r#"<polyline class="bound lower" points="{}" fill="none" stroke="black" stroke-dasharray="5,3"/>"#,
        points_attr(&f, lower)
    );
    let _ = writeln!(
        out,
        r#"<polyline class="cusum" points="{}" fill="none" stroke="black" stroke-width="1.5"/>"#,
        points_attr(&f, xs.iter().copied().zip(plot.path.iter().copied()))
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="end">band: {} level</text>"#,
        WIDTH - RIGHT - 5.0,
        TOP + 15.0,
        escape(plot.level_label)
    );
    out.push_str("</svg>\n");
    Svg {
        text: out,
        warnings: Vec::new(),
    }
}

/// Parses the `points` attribute of the first `<polyline>` or `<polygon>`
/// whose class attribute starts with `class`.
pub fn polyline_points(svg: &str, class: &str) -> Option<Vec<(f64, f64)>> {
    let needle = format!("class=\"{class}");
    let line = svg.lines().find(|l| l.contains(&needle))?;
    let start = line.find("points=\"")? + 8;
    let rest = &line[start..];
    let end = rest.find('"')?;
    rest[..end]
        .split_whitespace()
        .map(|p| {
            let (x, y) = p.split_once(',')?;
            Some((x.parse().ok()?, y.parse().ok()?))
        })
        .collect()
}
