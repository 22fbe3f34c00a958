//! JSON run configuration and its resolution against command-line overrides.

use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use qwalk::observables::parse_spectral;
use qwalk::{presets, CoinDensity, CoinState, DesignSpec, Observable, QuantumStep, Walk};
use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// A single walk in the serialization form (`{"steps": [...], "repeat": n}`).
    pub walk: Option<Walk>,
    pub family: Option<FamilyConfig>,
    pub cycles: Option<usize>,
    /// `mu`, `delta`, `zero` or `spectral:<file>`.
    pub observable: Option<String>,
    pub omega: Option<f64>,
    pub homes: Option<Vec<String>>,
    /// Inclusive cycle range `[first, last]`.
    pub n_range: Option<[usize; 2]>,
    pub grid: Option<[usize; 2]>,
    pub design: Option<DesignConfig>,
    pub markers: Option<Vec<String>>,
    pub title: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyConfig {
    pub preset: Option<String>,
    pub steps: Option<Vec<QuantumStep>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignConfig {
    pub preset: Option<String>,
    pub target: Option<String>,
    #[serde(default)]
    pub intermediates: Vec<String>,
    #[serde(default)]
    pub strides: Vec<(i64, i64)>,
}

/// Everything a command may need, after merging flags over the config file.
#[derive(Debug)]
pub struct Resolved {
    pub cfg: RunConfig,
    pub base_dir: PathBuf,
}

impl Resolved {
    pub fn load(path: Option<&Path>) -> Result<Resolved> {
        let Some(path) = path else {
            return Ok(Resolved {
                cfg: RunConfig::default(),
                base_dir: PathBuf::from("."),
            });
        };
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg: RunConfig = serde_json::from_str(&text).map_err(|e| {
            anyhow!(
                "{}: line {}, column {}: {e}",
                path.display(),
                e.line(),
                e.column()
            )
        })?;
        let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(Resolved { cfg, base_dir })
    }

    pub fn observable(&self) -> Result<Observable> {
        let token = self.cfg.observable.as_deref().unwrap_or("mu");
        if let Some(file) = token.strip_prefix("spectral:") {
            let path = self.base_dir.join(file);
            let text =
                fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            return parse_spectral(&text)
                .with_context(|| format!("observable file {}", path.display()));
        }
        token
            .parse()
            .with_context(|| "field `observable`".to_string())
    }

    pub fn omega(&self) -> f64 {
        self.cfg.omega.unwrap_or(0.0)
    }

    pub fn family_steps(&self) -> Result<Vec<QuantumStep>> {
        let fam = self
            .cfg
            .family
            .as_ref()
            .ok_or_else(|| anyhow!("field `family` is required"))?;
        let steps = match (&fam.preset, &fam.steps) {
            (Some(name), None) => presets::family_steps(name).ok_or_else(|| {
                anyhow!("field `family.preset`: unknown preset `{name}` (two-step, three-step, designed-two, designed-four)")
            })?,
            (None, Some(steps)) => steps.clone(),
            _ => bail!("field `family`: give exactly one of `preset` or `steps`"),
        };
        if steps.is_empty() {
            bail!("field `family.steps`: a walk needs at least one step");
        }
        Ok(steps)
    }

    pub fn cycles(&self) -> usize {
        self.cfg.cycles.unwrap_or(1)
    }

    pub fn n_range(&self) -> Result<RangeInclusive<usize>> {
        match self.cfg.n_range {
            Some([a, b]) if a >= 1 && a <= b => Ok(a..=b),
            Some([a, b]) => bail!("field `n_range`: [{a}, {b}] is empty or starts below 1"),
            None => Ok(self.cycles()..=self.cycles()),
        }
    }

    pub fn grid(&self) -> (usize, usize) {
        self.cfg
            .grid
            .map_or(qwalk::parrondo::DEFAULT_GRID, |[a, b]| (a, b))
    }

    /// Named homes plus their densities; defaults to |0⟩.
    pub fn homes(&self) -> Result<Vec<(String, CoinDensity)>> {
        let list = self.cfg.homes.clone().unwrap_or_else(|| vec!["0".into()]);
        list.iter()
            .enumerate()
            .map(|(i, h)| {
                Ok((
                    h.clone(),
                    parse_home(h).with_context(|| format!("field `homes[{i}]`"))?,
                ))
            })
            .collect()
    }

    pub fn markers(&self) -> Result<Vec<(String, CoinDensity)>> {
        match &self.cfg.markers {
            Some(list) => list
                .iter()
                .enumerate()
                .map(|(i, h)| {
                    Ok((
                        h.clone(),
                        parse_home(h).with_context(|| format!("field `markers[{i}]`"))?,
                    ))
                })
                .collect(),
            None => self.homes(),
        }
    }

    pub fn design(&self) -> Result<DesignSpec> {
        let d = self
            .cfg
            .design
            .as_ref()
            .ok_or_else(|| anyhow!("field `design` is required"))?;
        if let Some(name) = &d.preset {
            return match name.as_str() {
                "designed-two" => Ok(presets::designed_two_step_spec()),
                "designed-four" => Ok(presets::designed_four_step_spec()),
                _ => bail!(
                    "field `design.preset`: unknown preset `{name}` (designed-two, designed-four)"
                ),
            };
        }
        let target = d
            .target
            .as_deref()
            .ok_or_else(|| anyhow!("field `design.target` is required"))?;
        let target: CoinState = target.parse().context("field `design.target`")?;
        let intermediates = d
            .intermediates
            .iter()
            .enumerate()
            .map(|(i, s)| {
                s.parse()
                    .with_context(|| format!("field `design.intermediates[{i}]`"))
            })
            .collect::<Result<Vec<CoinState>>>()?;
        Ok(DesignSpec {
            target,
            intermediates,
            strides: d.strides.clone(),
        })
    }
}

pub fn parse_home(text: &str) -> Result<CoinDensity> {
    if let Some(d) = presets::home(text) {
        return Ok(d);
    }
    Ok(text.parse()?)
}

/// `NTxNP`, e.g. `181x360`.
pub fn parse_grid(s: &str) -> Result<[usize; 2], String> {
    let (a, b) = s.split_once(['x', 'X']).ok_or("expected <nt>x<np>")?;
    let a = a.trim().parse().map_err(|e| format!("theta count: {e}"))?;
    let b = b.trim().parse().map_err(|e| format!("phi count: {e}"))?;
    Ok([a, b])
}

/// `a..b`, `a-b` or a single `n`.
pub fn parse_range(s: &str) -> Result<[usize; 2], String> {
    let (a, b) = s
        .split_once("..")
        .or_else(|| s.split_once('-'))
        .unwrap_or((s, s));
    let a = a.trim().parse().map_err(|e| format!("range start: {e}"))?;
    let b = b
        .trim()
        .trim_start_matches('=')
        .parse()
        .map_err(|e| format!("range end: {e}"))?;
    Ok([a, b])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_and_range_parse() {
        assert_eq!(parse_grid("19x37").unwrap(), [19, 37]);
        assert!(parse_grid("19").is_err());
        assert_eq!(parse_range("1..19").unwrap(), [1, 19]);
        assert_eq!(parse_range("1..=4").unwrap(), [1, 4]);
        assert_eq!(parse_range("2-5").unwrap(), [2, 5]);
        assert_eq!(parse_range("3").unwrap(), [3, 3]);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let e = serde_json::from_str::<RunConfig>(r#"{"omgea": 1}"#).unwrap_err();
        assert!(e.to_string().contains("omgea"));
    }

    #[test]
    fn homes_resolve_presets_and_text() {
        let r = Resolved {
            cfg: RunConfig {
                homes: Some(vec!["psi1".into(), "mix:0.25,h".into()]),
                ..Default::default()
            },
            base_dir: ".".into(),
        };
        let h = r.homes().unwrap();
        assert_eq!(h.len(), 2);
        assert!((h[1].1.r() - 0.25).abs() < 1e-15);
    }
}
