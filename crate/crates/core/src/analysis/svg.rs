//! Minimal SVG line charts for running visit frequencies.

use std::fmt::Write;

use crate::analysis::FrequencyTrace;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 56.0;
const MAX_POINTS: usize = 2000;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Frequency of each bin against `t`, with dotted horizontal lines at the
/// desired frequencies.
pub fn frequency_plot(trace: &FrequencyTrace, phi: &[f64], title: &str) -> String {
    let t_max = trace.times.last().copied().unwrap_or(1).max(1) as f64;
    let t_min = trace.times.first().copied().unwrap_or(0) as f64;
    let span = (t_max - t_min).max(1.0);
    let px = |t: f64| MARGIN + (t - t_min) / span * (WIDTH - 2.0 * MARGIN);
    let py = |f: f64| HEIGHT - MARGIN - f.clamp(0.0, 1.0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ =
        writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, escape(title));
    // Axes and y ticks.
    let (x0, x1, y0, y1) = (px(t_min), px(t_max), py(0.0), py(1.0));
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#);
    let _ = writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#);
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let y = py(f);
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{f:.2}</text>"#, x0 - 6.0, y + 4.0);
    }
    let _ = writeln!(
        s,
        r#"<text x="{x0}" y="{}" text-anchor="middle">{}</text><text x="{x1}" y="{}" text-anchor="middle">{}</text>"#,
        y0 + 18.0,
        t_min,
        y0 + 18.0,
        t_max
    );
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">iteration</text>"#, WIDTH / 2.0, HEIGHT - 12.0);

    for (i, &target) in phi.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let y = py(target);
        let _ = writeln!(
            s,
            r#"<line x1="{x0}" y1="{y}" x2="{x1}" y2="{y}" stroke="{color}" stroke-dasharray="2,4" stroke-width="1.5"/>"#
        );
    }

    let n = trace.times.len();
    let step = n.div_ceil(MAX_POINTS).max(1);
    let d = trace.freqs.first().map_or(0, Vec::len);
    for bin in 0..d {
        let color = COLORS[bin % COLORS.len()];
        let mut points = String::new();
        for k in (0..n).step_by(step).chain(std::iter::once(n - 1)) {
            let _ = write!(points, "{:.2},{:.2} ", px(trace.times[k] as f64), py(trace.freqs[k][bin]));
        }
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            points.trim_end()
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" fill="{color}">bin {}</text>"#,
            x1 - 50.0,
            MARGIN + 16.0 * bin as f64,
            bin + 1
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
