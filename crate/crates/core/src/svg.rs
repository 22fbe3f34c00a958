//! Hand-written SVG for histograms, region maps and persistence curves.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::coin::BlochAngles;
use crate::parrondo::{PersistenceScan, RegionMap};
use crate::payoff::Outcome;

const PALETTE: [&str; 16] = [
    "#3b4cc0", "#e7298a", "#66a61e", "#e6ab02", "#7570b3", "#d95f02", "#1b9e77", "#a6761d",
    "#1f78b4", "#fb9a99", "#b2df8a", "#fdbf6f", "#cab2d6", "#ff7f00", "#33a02c", "#6a3d9a",
];
const TIE_COLOR: &str = "#9e9e9e";
const CURVE_COLORS: [&str; 6] = [
    "#1f3b73", "#f28e2b", "#edc948", "#59a14f", "#b07aa1", "#e15759",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Fill color for a label vector: one color per W/L pattern, grey when any walk ties.
pub fn label_color(labels: &[Outcome]) -> &'static str {
    if labels.contains(&Outcome::Tie) {
        return TIE_COLOR;
    }
    let code = labels
        .iter()
        .enumerate()
        .filter(|(_, l)| **l == Outcome::Win)
        .fold(0usize, |acc, (i, _)| acc | (1 << i));
    PALETTE[code % PALETTE.len()]
}

/// Horizontal probability bars, one row per position: red left of the origin,
/// green right of it, black at it.
pub fn histogram_svg(hist: &[(i64, f64)], title: &str) -> String {
    let row = 14.0;
    let (left, width, top) = (48.0, 360.0, 28.0);
    let height = top + row * hist.len().max(1) as f64 + 24.0;
    let pmax = hist.iter().map(|h| h.1).fold(0.0, f64::max).max(1e-12);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{height}" viewBox="0 0 {w} {height}" font-family="sans-serif" font-size="10">"#,
        w = left + width + 70.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{left}" y="16" font-size="12">{}</text>"#,
        escape(title)
    );
    for (i, &(m, p)) in hist.iter().enumerate() {
        let y = top + row * i as f64;
        let color = match m.signum() {
            -1 => "#d62728",
            1 => "#2ca02c",
            _ => "#000000",
        };
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end">{m}</text>"#,
            left - 6.0,
            y + row * 0.75
        );
        let _ = writeln!(
            s,
            r#"<rect x="{left}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="{color}"/>"#,
            width * p / pmax,
            row * 0.8
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{}">{p:.3}</text>"#,
            left + width * p / pmax + 4.0,
            y + row * 0.75
        );
    }
    s.push_str("</svg>\n");
    s
}

fn star_path(cx: f64, cy: f64, r: f64) -> String {
    let mut d = String::new();
    for i in 0..10 {
        let rad = if i % 2 == 0 { r } else { r * 0.45 };
        let a = -PI / 2.0 + i as f64 * PI / 5.0;
        let _ = write!(
            d,
            "{}{:.2},{:.2} ",
            if i == 0 { 'M' } else { 'L' },
            cx + rad * a.cos(),
            cy + rad * a.sin()
        );
    }
    d.push('Z');
    d
}

/// (φ, θ) raster of a region map with a legend and star markers.
pub fn region_svg(map: &RegionMap, markers: &[(String, BlochAngles)], title: &str) -> String {
    let (left, top, w, h) = (50.0, 30.0, 540.0, 270.0);
    let cw = w / map.n_phi as f64;
    let ch = h / map.n_theta as f64;
    let counts = map.region_counts();
    let legend_h = 16.0 * counts.len() as f64;
    let total_h = top + h.max(legend_h) + 40.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{tw}" height="{total_h}" viewBox="0 0 {tw} {total_h}" font-family="sans-serif" font-size="10">"#,
        tw = left + w + 140.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{left}" y="18" font-size="12">{}</text>"#,
        escape(title)
    );
    s.push_str(r#"<g shape-rendering="crispEdges">"#);
    s.push('\n');
    for (idx, node) in map.nodes.iter().enumerate() {
        let (j, k) = (idx / map.n_phi, idx % map.n_phi);
        let _ = writeln!(
            s,
            r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{}"/>"#,
            left + cw * k as f64,
            top + ch * j as f64,
            cw + 0.05,
            ch + 0.05,
            label_color(&node.labels)
        );
    }
    s.push_str("</g>\n");
    let _ = writeln!(
        s,
        r#"<rect x="{left}" y="{top}" width="{w}" height="{h}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">phi</text>"#,
        left + w / 2.0,
        top + h + 28.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">0</text>"#,
        left,
        top + h + 14.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">2pi</text>"#,
        left + w,
        top + h + 14.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="end">0</text>"#,
        left - 4.0,
        top + 8.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="end">pi</text>"#,
        left - 4.0,
        top + h
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="end">theta</text>"#,
        left - 4.0,
        top + h / 2.0
    );
    for (name, a) in markers {
        let x = left + w * a.phi() / (2.0 * PI);
        let y = top + h * a.theta() / PI;
        let _ = writeln!(
            s,
            r#"<path d="{}" fill="white" stroke="black" stroke-width="0.8"/>"#,
            star_path(x, y, 7.0)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
            x + 8.0,
            y - 6.0,
            escape(name)
        );
    }
    let lx = left + w + 16.0;
    for (i, (label, n)) in counts.iter().enumerate() {
        let y = top + 16.0 * i as f64;
        let labels: Vec<Outcome> = label
            .chars()
            .map(|c| match c {
                'W' => Outcome::Win,
                'L' => Outcome::Lose,
                _ => Outcome::Tie,
            })
            .collect();
        let _ = writeln!(
            s,
            r#"<rect x="{lx}" y="{y}" width="12" height="12" fill="{}"/>"#,
            label_color(&labels)
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}">{label} ({n})</text>"#,
            lx + 16.0,
            y + 10.0
        );
    }
    s.push_str("</svg>\n");
    s
}

/// One payoff curve per walk against the cycle count, with the ω line.
pub fn persistence_svg(scan: &PersistenceScan, omega: f64, title: &str) -> String {
    let (left, top, w, h) = (60.0, 30.0, 420.0, 240.0);
    let walks = scan.rows.first().map_or(0, |r| r.payoffs.len());
    let (nmin, nmax) = (
        scan.rows.first().map_or(1, |r| r.n) as f64,
        scan.rows.last().map_or(1, |r| r.n) as f64,
    );
    let mut lo = omega;
    let mut hi = omega;
    for r in &scan.rows {
        for p in &r.payoffs {
            lo = lo.min(*p);
            hi = hi.max(*p);
        }
    }
    if hi - lo < 1e-12 {
        hi += 0.5;
        lo -= 0.5;
    }
    let pad = 0.05 * (hi - lo);
    let (lo, hi) = (lo - pad, hi + pad);
    let px = |n: f64| {
        left + if nmax > nmin {
            w * (n - nmin) / (nmax - nmin)
        } else {
            w / 2.0
        }
    };
    let py = |v: f64| top + h * (hi - v) / (hi - lo);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{tw}" height="{th}" viewBox="0 0 {tw} {th}" font-family="sans-serif" font-size="10">"#,
        tw = left + w + 100.0,
        th = top + h + 40.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{left}" y="18" font-size="12">{}</text>"#,
        escape(title)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{left}" y="{top}" width="{w}" height="{h}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        s,
        r##"<line x1="{left}" y1="{y:.2}" x2="{}" y2="{y:.2}" stroke="#888" stroke-dasharray="4 3"/>"##,
        left + w,
        y = py(omega)
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{:.2}" text-anchor="end">{hi:.3}</text>"#,
        left - 4.0,
        top + 8.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{:.2}" text-anchor="end">{lo:.3}</text>"#,
        left - 4.0,
        top + h
    );
    let _ = writeln!(
        s,
        r#"<text x="{left}" y="{}" text-anchor="middle">{nmin}</text>"#,
        top + h + 14.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{nmax}</text>"#,
        left + w,
        top + h + 14.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">n</text>"#,
        left + w / 2.0,
        top + h + 28.0
    );
    for i in 0..walks {
        let color = CURVE_COLORS[i % CURVE_COLORS.len()];
        let pts: Vec<String> = scan
            .rows
            .iter()
            .map(|r| format!("{:.2},{:.2}", px(r.n as f64), py(r.payoffs[i])))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            pts.join(" ")
        );
        for p in &pts {
            let (x, y) = p.split_once(',').unwrap();
            let _ = writeln!(s, r#"<circle cx="{x}" cy="{y}" r="2" fill="{color}"/>"#);
        }
        let ly = top + 14.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<rect x="{}" y="{ly}" width="12" height="3" fill="{color}"/><text x="{}" y="{}">W{}</text>"#,
            left + w + 12.0,
            left + w + 28.0,
            ly + 5.0,
            i + 1
        );
    }
    let parrondo: Vec<String> = scan
        .rows
        .iter()
        .filter(|r| r.parrondo)
        .map(|r| r.n.to_string())
        .collect();
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}">Parrondo at n = {}</text>"#,
        left + w + 12.0,
        top + 14.0 * walks as f64 + 12.0,
        if parrondo.is_empty() {
            "none".to_string()
        } else {
            compress(&parrondo)
        }
    );
    s.push_str("</svg>\n");
    s
}

fn compress(ns: &[String]) -> String {
    if ns.len() <= 4 {
        ns.join(",")
    } else {
        format!("{}..{}", ns[0], ns[ns.len() - 1])
    }
}
