use std::fmt::Write;

use crate::diagnostics::DiagnosticsRecord;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 56.0;

/// Static SVG of `log₁₀` norm histories against time.
pub fn norm_history_svg(records: &[DiagnosticsRecord]) -> String {
    let series: [(&str, &str, fn(&DiagnosticsRecord) -> f64); 4] = [
        ("L2", "#1f77b4", |r| r.norms.l2),
        ("H1 semi", "#ff7f0e", |r| r.norms.seminorm_1()),
        ("sup psi", "#2ca02c", |r| r.norms.sup_psi),
        ("sup dpsi", "#d62728", |r| r.norms.sup_dpsi),
    ];
    let t_max = records.last().map(|r| r.t).unwrap_or(0.0).max(f64::MIN_POSITIVE);
    let logs: Vec<Vec<Option<f64>>> = series
        .iter()
        .map(|(_, _, f)| {
            records
                .iter()
                .map(|r| {
                    let v = f(r);
                    (v > 0.0).then(|| v.log10())
                })
                .collect()
        })
        .collect();
    let finite = logs.iter().flatten().flatten().copied();
    let (mut lo, mut hi) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        lo = -1.0;
        hi = 0.0;
    }
    lo = lo.floor();
    hi = hi.ceil().max(lo + 1.0);

    let x = |t: f64| MARGIN + (WIDTH - 2.0 * MARGIN) * t / t_max;
    let y = |v: f64| HEIGHT - MARGIN - (HEIGHT - 2.0 * MARGIN) * (v - lo) / (hi - lo);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    let mut decade = lo;
    while decade <= hi {
        let yy = y(decade);
        let _ = writeln!(
            s,
            r##"<line x1="{MARGIN}" x2="{}" y1="{yy:.2}" y2="{yy:.2}" stroke="#ddd"/><text x="{}" y="{:.2}" text-anchor="end">1e{decade}</text>"##,
            WIDTH - MARGIN,
            MARGIN - 6.0,
            yy + 4.0
        );
        decade += 1.0;
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">t (0 to {t_max})</text>"#,
        WIDTH / 2.0,
        HEIGHT - 16.0
    );
    for (i, ((label, colour, _), values)) in series.iter().zip(&logs).enumerate() {
        let points: Vec<String> = records
            .iter()
            .zip(values)
            .filter_map(|(r, v)| v.map(|v| format!("{:.2},{:.2}", x(r.t), y(v))))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
            points.join(" ")
        );
        let ly = MARGIN + 16.0 + 16.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{ly}" fill="{colour}">{label}</text>"#,
            WIDTH - MARGIN - 80.0
        );
    }
    s.push_str("</svg>\n");
    s
}
