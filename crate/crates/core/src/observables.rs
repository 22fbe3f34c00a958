//! Hermitian observables on coin⊗position and their expectation values.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use crate::composite::{CompositeEnsemble, CompositeState};
use crate::linalg::Mat2;
use crate::{Error, Result};

/// Orthogonality tolerance for spectral observables.
pub const SPECTRAL_ORTHO_TOL: f64 = 1e-10;

/// A real weight on lattice positions, evaluated lazily on a state's support.
#[derive(Debug, Clone, PartialEq)]
pub enum PositionWeight {
    /// f(m) = m
    Position,
    /// f(m) = sign(m), f(0) = 0
    Sign,
    /// f(m) = 1 at one site, 0 elsewhere
    Indicator(i64),
    /// Explicit table, zero off the listed sites.
    Table(BTreeMap<i64, f64>),
    /// Σ_k c_k f_k(m)
    Combination(Vec<(f64, PositionWeight)>),
}

impl PositionWeight {
    pub fn eval(&self, m: i64) -> f64 {
        match self {
            PositionWeight::Position => m as f64,
            PositionWeight::Sign => m.signum() as f64,
            PositionWeight::Indicator(k) => f64::from(u8::from(m == *k)),
            PositionWeight::Table(t) => t.get(&m).copied().unwrap_or(0.0),
            PositionWeight::Combination(parts) => parts.iter().map(|(c, f)| c * f.eval(m)).sum(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Observable {
    /// Î₂ ⊗ Σ_m f(m)|m⟩⟨m|
    PositionFunction(PositionWeight),
    /// Σ_i λ_i |U_i⟩⟨U_i| with mutually orthogonal U_i.
    Spectral(Vec<(f64, CompositeState)>),
    /// A ⊗ Σ_m f(m)|m⟩⟨m| with Hermitian coin matrix A.
    CoinKronPosition { coin: Mat2, weight: PositionWeight },
}

impl Observable {
    /// The position operator μ.
    pub fn mu() -> Self {
        Observable::PositionFunction(PositionWeight::Position)
    }

    /// Δ: +1 on positive sites, -1 on negative sites.
    pub fn delta() -> Self {
        Observable::PositionFunction(PositionWeight::Sign)
    }

    /// Projector onto position zero.
    pub fn zero_projector() -> Self {
        Observable::PositionFunction(PositionWeight::Indicator(0))
    }

    /// Validated spectral form.
    pub fn spectral(terms: Vec<(f64, CompositeState)>) -> Result<Self> {
        for (i, (li, ui)) in terms.iter().enumerate() {
            if !li.is_finite() {
                return Err(Error::OutOfRange {
                    what: "spectral eigenvalue",
                    value: *li,
                    range: "finite reals",
                });
            }
            for (j, (_, uj)) in terms.iter().enumerate().skip(i + 1) {
                let overlap = ui.inner(uj).norm();
                if overlap > SPECTRAL_ORTHO_TOL {
                    return Err(Error::NonOrthogonalSpectral { i, j, overlap });
                }
            }
        }
        Ok(Observable::Spectral(terms))
    }

    pub fn coin_kron_position(coin: Mat2, weight: PositionWeight) -> Result<Self> {
        if !coin.is_hermitian(1e-10) {
            return Err(Error::Parse {
                what: "coin observable",
                input: format!("{coin:?}"),
                reason: "matrix is not Hermitian".into(),
            });
        }
        Ok(Observable::CoinKronPosition { coin, weight })
    }

    /// ⟨a|Ô|b⟩.
    pub fn matrix_element(&self, a: &CompositeState, b: &CompositeState) -> C64 {
        match self {
            Observable::PositionFunction(f) => a
                .iter()
                .map(|(m, va)| {
                    let vb = b.amplitude(m);
                    (va[0].conj() * vb[0] + va[1].conj() * vb[1]) * f.eval(m)
                })
                .sum(),
            Observable::CoinKronPosition { coin, weight } => a
                .iter()
                .map(|(m, va)| {
                    let vb = coin.apply(b.amplitude(m));
                    (va[0].conj() * vb[0] + va[1].conj() * vb[1]) * weight.eval(m)
                })
                .sum(),
            Observable::Spectral(terms) => terms
                .iter()
                .map(|(l, u)| u.inner(a).conj() * u.inner(b) * *l)
                .sum(),
        }
    }

    /// ⟨x|Ô|x⟩; the imaginary roundoff is discarded.
    pub fn expectation(&self, x: &CompositeState) -> f64 {
        match self {
            Observable::PositionFunction(f) => x
                .iter()
                .map(|(m, v)| f.eval(m) * (v[0].norm_sqr() + v[1].norm_sqr()))
                .sum(),
            _ => self.matrix_element(x, x).re,
        }
    }

    /// Weight-averaged expectation over an ensemble.
    pub fn expectation_ensemble(&self, e: &CompositeEnsemble) -> f64 {
        e.branches()
            .iter()
            .map(|(w, s)| w * self.expectation(s))
            .sum()
    }

    pub fn weight(&self) -> Option<&PositionWeight> {
        match self {
            Observable::PositionFunction(f) => Some(f),
            _ => None,
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Observable::PositionFunction(PositionWeight::Position) => f.write_str("mu"),
            Observable::PositionFunction(PositionWeight::Sign) => f.write_str("delta"),
            Observable::PositionFunction(PositionWeight::Indicator(0)) => f.write_str("zero"),
            Observable::PositionFunction(_) => f.write_str("position-function"),
            Observable::Spectral(t) => write!(f, "spectral({} terms)", t.len()),
            Observable::CoinKronPosition { .. } => f.write_str("coin-kron-position"),
        }
    }
}

/// Tokens `mu`, `delta`, `zero`. `spectral:<file>` needs file access and is
/// handled by [`parse_spectral`].
impl FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "mu" => Ok(Observable::mu()),
            "delta" => Ok(Observable::delta()),
            "zero" => Ok(Observable::zero_projector()),
            other => Err(Error::Parse {
                what: "observable",
                input: other.to_string(),
                reason: "expected mu, delta, zero or spectral:<file>".into(),
            }),
        }
    }
}

/// Parses spectral rows. Each non-empty, non-`#` line is
/// `<lambda> <m>:<re0>,<im0>,<re1>,<im1> [<m>:... ...]`; the listed amplitudes
/// form one (renormalized) composite eigenvector.
pub fn parse_spectral(text: &str) -> Result<Observable> {
    let mut terms = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |reason: String| Error::Parse {
            what: "spectral row",
            input: format!("line {}: {line}", lineno + 1),
            reason,
        };
        let mut fields = line.split_whitespace();
        let lambda: f64 = fields
            .next()
            .unwrap()
            .parse()
            .map_err(|e| err(format!("eigenvalue: {e}")))?;
        let mut entries = Vec::new();
        for f in fields {
            let (m, amps) = f
                .split_once(':')
                .ok_or_else(|| err(format!("`{f}` is not <position>:<amplitudes>")))?;
            let m: i64 = m.parse().map_err(|e| err(format!("position `{m}`: {e}")))?;
            let x: Vec<f64> = amps
                .split(',')
                .map(|v| v.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| err(format!("amplitudes `{amps}`: {e}")))?;
            if x.len() != 4 {
                return Err(err(format!("`{amps}` needs 4 numbers")));
            }
            entries.push((m, [C64::new(x[0], x[1]), C64::new(x[2], x[3])]));
        }
        if entries.is_empty() {
            return Err(err("no amplitudes".into()));
        }
        let u = CompositeState::from_amplitudes(entries)?;
        terms.push((lambda, u));
    }
    Observable::spectral(terms)
}
