//! Minimal SVG 1.1 writer for line plots.

use std::fmt::Write;

/// A plotting rectangle in pixels with the data window it shows.
#[derive(Debug, Clone, Copy)]
pub struct Panel {
    pub left: f64,
    pub top: f64,
    pub width: f64,
    pub height: f64,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
}

impl Panel {
    /// A square window `[-r, r]^2` centered in the given box.
    pub fn square(left: f64, top: f64, size: f64, r: f64) -> Self {
        Panel { left, top, width: size, height: size, x_range: (-r, r), y_range: (-r, r) }
    }

    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        let (x0, x1) = self.x_range;
        let (y0, y1) = self.y_range;
        (self.left + (p[0] - x0) / (x1 - x0) * self.width, self.top + (y1 - p[1]) / (y1 - y0) * self.height)
    }
}

#[derive(Debug, Clone)]
pub struct Stroke<'a> {
    pub color: &'a str,
    pub width: f64,
    pub dash: Option<&'a str>,
}

impl<'a> Stroke<'a> {
    pub fn solid(color: &'a str, width: f64) -> Self {
        Stroke { color, width, dash: None }
    }
}

pub struct Svg {
    width: f64,
    height: f64,
    body: String,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

impl Svg {
    pub fn new(width: f64, height: f64) -> Self {
        Svg { width, height, body: String::new() }
    }

    pub fn polyline(&mut self, panel: &Panel, points: &[[f64; 2]], stroke: &Stroke) {
        let mut pts = String::new();
        for p in points {
            let (x, y) = panel.map(*p);
            let _ = write!(pts, "{x:.2},{y:.2} ");
        }
        let dash = stroke.dash.map(|d| format!(" stroke-dasharray=\"{d}\"")).unwrap_or_default();
        let _ = writeln!(
            self.body,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\"{dash}/>",
            pts.trim_end(),
            stroke.color,
            stroke.width
        );
    }

    /// Closed curve `t -> f(t)` sampled at `n` points.
    pub fn closed_curve(&mut self, panel: &Panel, n: usize, f: impl Fn(f64) -> [f64; 2], stroke: &Stroke) {
        let pts: Vec<[f64; 2]> = (0..=n).map(|j| f(std::f64::consts::TAU * j as f64 / n as f64)).collect();
        self.polyline(panel, &pts, stroke);
    }

    pub fn text(&mut self, x: f64, y: f64, s: &str, size: f64, anchor: &str) {
        let _ = writeln!(
            self.body,
            "<text x=\"{x:.2}\" y=\"{y:.2}\" font-family=\"sans-serif\" font-size=\"{size}\" text-anchor=\"{anchor}\">{}</text>",
            escape(s)
        );
    }

    fn line(&mut self, a: (f64, f64), b: (f64, f64), color: &str) {
        let _ = writeln!(
            self.body,
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"{color}\" stroke-width=\"1\"/>",
            a.0, a.1, b.0, b.1
        );
    }

    /// Box, ticks and labels.
    pub fn axes(&mut self, panel: &Panel, x_ticks: &[f64], y_ticks: &[f64], x_label: &str, y_label: &str) {
        let _ = writeln!(
            self.body,
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>",
            panel.left, panel.top, panel.width, panel.height
        );
        let bottom = panel.top + panel.height;
        for &t in x_ticks {
            let (x, _) = panel.map([t, panel.y_range.0]);
            self.line((x, bottom), (x, bottom + 5.0), "black");
            self.text(x, bottom + 18.0, &format!("{t}"), 11.0, "middle");
        }
        for &t in y_ticks {
            let (_, y) = panel.map([panel.x_range.0, t]);
            self.line((panel.left - 5.0, y), (panel.left, y), "black");
            self.text(panel.left - 8.0, y + 4.0, &format!("{t:.2}"), 11.0, "end");
        }
        self.text(panel.left + panel.width / 2.0, bottom + 36.0, x_label, 13.0, "middle");
        self.text(panel.left - 48.0, panel.top + panel.height / 2.0, y_label, 13.0, "middle");
    }

    /// Legend entries stacked from `(x, y)`.
    pub fn legend(&mut self, x: f64, y: f64, entries: &[(String, Stroke)]) {
        for (n, (label, stroke)) in entries.iter().enumerate() {
            let yy = y + 18.0 * n as f64;
            let dash = stroke.dash.map(|d| format!(" stroke-dasharray=\"{d}\"")).unwrap_or_default();
            let _ = writeln!(
                self.body,
                "<line x1=\"{x:.2}\" y1=\"{yy:.2}\" x2=\"{:.2}\" y2=\"{yy:.2}\" stroke=\"{}\" stroke-width=\"{}\"{dash}/>",
                x + 24.0,
                stroke.color,
                stroke.width
            );
            self.text(x + 30.0, yy + 4.0, label, 12.0, "start");
        }
    }

    /// The finished document; `description` goes into `<desc>`.
    pub fn finish(self, title: &str, description: &str) -> String {
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
             <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
             <title>{}</title>\n<desc>{}</desc>\n\
             <rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n{}</svg>\n",
            escape(title),
            escape(description),
            self.body,
            w = self.width,
            h = self.height
        )
    }
}

/// `n` colors from red to blue.
pub fn ramp(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            let t = if n > 1 { i as f64 / (n - 1) as f64 } else { 0.0 };
            let r = (255.0 * (1.0 - t)).round() as u8;
            let b = (255.0 * t).round() as u8;
            format!("#{r:02x}00{b:02x}")
        })
        .collect()
}
