//! Minimal static line chart: 800x600 viewBox, axes, one polyline per series.

use std::fmt::Write;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 60.0;
const MAX_POINTS: usize = 4000;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#7f7f7f"];

pub struct Series<'a> {
    pub name: &'a str,
    pub values: &'a [f64],
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

/// Plots every series against `x`. Long series are decimated by stride.
pub fn render_chart(title: &str, x_label: &str, x: &[f64], series: &[Series<'_>]) -> String {
    let (x_lo, x_hi) = bounds(x.iter().copied());
    let (y_lo, y_hi) = bounds(series.iter().flat_map(|s| s.values.iter().copied()));
    let px = |v: f64| MARGIN + (v - x_lo) / (x_hi - x_lo) * (WIDTH - 2.0 * MARGIN);
    let py = |v: f64| HEIGHT - MARGIN - (v - y_lo) / (y_hi - y_lo) * (HEIGHT - 2.0 * MARGIN);
    let stride = x.len().div_ceil(MAX_POINTS).max(1);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="30" text-anchor="middle" font-family="sans-serif" font-size="18">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        svg,
        r#"<path d="M{left},{top} L{left},{bottom} L{right},{bottom}" fill="none" stroke="black"/>"#
    );
    for (v, anchor_x, anchor_y, align) in [
        (x_lo, left, bottom + 20.0, "start"),
        (x_hi, right, bottom + 20.0, "end"),
    ] {
        let _ = writeln!(
            svg,
            r#"<text x="{anchor_x}" y="{anchor_y}" text-anchor="{align}" font-family="sans-serif" font-size="12">{}</text>"#,
            super::csv::format_real(v)
        );
    }
    for (v, y) in [(y_lo, bottom), (y_hi, top)] {
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{y}" text-anchor="end" font-family="sans-serif" font-size="12">{}</text>"#,
            left - 6.0,
            super::csv::format_real(v)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 15.0,
        escape(x_label)
    );
    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let mut points = String::new();
        for (j, (&xv, &yv)) in x.iter().zip(s.values).enumerate() {
            if j % stride == 0 || j + 1 == x.len() {
                let _ = write!(points, "{:.2},{:.2} ", px(xv), py(yv));
            }
        }
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            points.trim_end()
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" fill="{color}">{}</text>"#,
            right - 120.0,
            top + 16.0 * (i as f64 + 1.0),
            escape(s.name)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_has_fixed_viewbox_and_series() {
        let x = [0.0, 1.0, 2.0];
        let a = [0.0, 1.0, 0.0];
        let b = [1.0, 1.0, 1.0];
        let svg = render_chart(
            "in <&> out",
            "t",
            &x,
            &[
                Series { name: "x", values: &a },
                Series { name: "y", values: &b },
            ],
        );
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains(r#"viewBox="0 0 800 600""#));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("in &lt;&amp;&gt; out"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn long_series_are_decimated() {
        let x: Vec<f64> = (0..100_000).map(f64::from).collect();
        let svg = render_chart("", "t", &x, &[Series { name: "x", values: &x }]);
        let points = svg
            .lines()
            .find(|l| l.starts_with("<polyline"))
            .unwrap()
            .matches(',')
            .count();
        assert!(points <= MAX_POINTS + 1, "{points}");
    }
}
