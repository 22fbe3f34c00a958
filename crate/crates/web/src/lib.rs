//! Browser bindings: region rasters, payoff inspection and SVG charts.
//!
//! Each exported function has a plain-Rust twin (`*_inner`) returning
//! `Result<_, String>` so it can be tested natively.

use qwalk::parrondo::{build_family, is_parrondo, label_string, persistence_scan, region_map};
use qwalk::svg::{histogram_svg, label_color, persistence_svg};
use qwalk::{presets, CoinDensity, Observable, QuantumStep, WalkFamily};
use wasm_bindgen::prelude::*;

/// A preset family name or a JSON array of steps.
pub fn parse_steps(family: &str) -> Result<Vec<QuantumStep>, String> {
    let family = family.trim();
    if family.starts_with('[') {
        let steps: Vec<QuantumStep> =
            serde_json::from_str(family).map_err(|e| format!("steps: {e}"))?;
        if steps.is_empty() {
            return Err("steps: a walk needs at least one step".into());
        }
        return Ok(steps);
    }
    presets::family_steps(family).ok_or_else(|| format!("unknown family preset `{family}`"))
}

fn family(family: &str, cycles: usize) -> Result<WalkFamily, String> {
    build_family(&parse_steps(family)?, cycles).map_err(|e| e.to_string())
}

fn observable(token: &str) -> Result<Observable, String> {
    token.parse().map_err(|e: qwalk::Error| e.to_string())
}

pub fn parse_home(text: &str) -> Result<CoinDensity, String> {
    match presets::home(text.trim()) {
        Some(d) => Ok(d),
        None => text.parse().map_err(|e: qwalk::Error| e.to_string()),
    }
}

fn hex_rgb(hex: &str) -> [u8; 3] {
    let v = u32::from_str_radix(hex.trim_start_matches('#'), 16).unwrap_or(0);
    [(v >> 16) as u8, (v >> 8) as u8, v as u8]
}

/// Row-major RGBA pixels, θ down the rows and φ across, with Parrondo nodes
/// at full opacity and the rest dimmed.
pub fn region_rgba_inner(
    fam: &str,
    obs: &str,
    omega: f64,
    cycles: usize,
    n_theta: usize,
    n_phi: usize,
) -> Result<Vec<u8>, String> {
    let f = family(fam, cycles)?;
    let map = region_map(
        &f,
        &observable(obs)?,
        omega,
        (n_theta, n_phi),
        qwalk::payoff::DEFAULT_TIE_TOL,
    )
    .map_err(|e| e.to_string())?;
    let mut px = Vec::with_capacity(map.nodes.len() * 4);
    for node in &map.nodes {
        let [r, g, b] = hex_rgb(label_color(&node.labels));
        px.extend_from_slice(&[r, g, b, if node.parrondo { 255 } else { 170 }]);
    }
    Ok(px)
}

/// JSON list of `{label, color, count}` for the map drawn by [`region_rgba_inner`].
pub fn region_legend_inner(
    fam: &str,
    obs: &str,
    omega: f64,
    cycles: usize,
    n_theta: usize,
    n_phi: usize,
) -> Result<String, String> {
    let f = family(fam, cycles)?;
    let map = region_map(
        &f,
        &observable(obs)?,
        omega,
        (n_theta, n_phi),
        qwalk::payoff::DEFAULT_TIE_TOL,
    )
    .map_err(|e| e.to_string())?;
    let items: Vec<serde_json::Value> = map
        .region_counts()
        .into_iter()
        .map(|(label, count)| {
            let labels = map
                .nodes
                .iter()
                .find(|n| label_string(&n.labels) == label)
                .map(|n| n.labels.clone());
            serde_json::json!({
                "label": label,
                "color": labels.map_or("#9e9e9e", |l| label_color(&l)),
                "count": count,
            })
        })
        .collect();
    Ok(serde_json::Value::Array(items).to_string())
}

/// JSON `{payoffs, labels, parrondo}` for one home-state.
pub fn inspect_inner(
    fam: &str,
    obs: &str,
    omega: f64,
    cycles: usize,
    home: &str,
) -> Result<String, String> {
    let f = family(fam, cycles)?;
    let a = f.analyze(&observable(obs)?, omega);
    let h = parse_home(home)?;
    let labels = a.labels(&h, qwalk::payoff::DEFAULT_TIE_TOL);
    Ok(serde_json::json!({
        "payoffs": a.payoffs(&h),
        "labels": label_string(&labels),
        "parrondo": is_parrondo(&labels),
    })
    .to_string())
}

/// Position histogram of walk `walk_index` (0-based) as SVG.
pub fn histogram_svg_inner(
    fam: &str,
    cycles: usize,
    walk_index: usize,
    home: &str,
) -> Result<String, String> {
    let f = family(fam, cycles)?;
    let w = f.walks().get(walk_index).ok_or_else(|| {
        format!(
            "walk index {walk_index} out of range (family has {})",
            f.walks().len()
        )
    })?;
    let hist = w.run_mixed(&parse_home(home)?).histogram();
    Ok(histogram_svg(
        &hist,
        &format!("W{}, n = {cycles}, home {home}", walk_index + 1),
    ))
}

pub fn persistence_svg_inner(
    fam: &str,
    obs: &str,
    omega: f64,
    home: &str,
    n_max: usize,
) -> Result<String, String> {
    let o = observable(obs)?;
    let scan = persistence_scan(
        &parse_steps(fam)?,
        &o,
        omega,
        &parse_home(home)?,
        1..=n_max,
        qwalk::payoff::DEFAULT_TIE_TOL,
    )
    .map_err(|e| e.to_string())?;
    Ok(persistence_svg(
        &scan,
        omega,
        &format!("Payoffs vs n, home {home}, {o}"),
    ))
}

#[wasm_bindgen]
pub fn region_rgba(
    fam: &str,
    obs: &str,
    omega: f64,
    cycles: usize,
    n_theta: usize,
    n_phi: usize,
) -> Result<Vec<u8>, JsValue> {
    region_rgba_inner(fam, obs, omega, cycles, n_theta, n_phi).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn region_legend(
    fam: &str,
    obs: &str,
    omega: f64,
    cycles: usize,
    n_theta: usize,
    n_phi: usize,
) -> Result<String, JsValue> {
    region_legend_inner(fam, obs, omega, cycles, n_theta, n_phi).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn inspect(
    fam: &str,
    obs: &str,
    omega: f64,
    cycles: usize,
    home: &str,
) -> Result<String, JsValue> {
    inspect_inner(fam, obs, omega, cycles, home).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn histogram(
    fam: &str,
    cycles: usize,
    walk_index: usize,
    home: &str,
) -> Result<String, JsValue> {
    histogram_svg_inner(fam, cycles, walk_index, home).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn persistence(
    fam: &str,
    obs: &str,
    omega: f64,
    home: &str,
    n_max: usize,
) -> Result<String, JsValue> {
    persistence_svg_inner(fam, obs, omega, home, n_max).map_err(|e| JsValue::from_str(&e))
}
