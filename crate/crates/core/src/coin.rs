//! Coin-space states: pure states, the perpendicular map, (r, s) mixed states
//! and their qubit (Bloch) vectors.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use crate::linalg::{self, Mat2, ONE, ZERO};
use crate::{Error, Result};

/// Tolerance on the unit norm of stored coin states.
pub const NORM_TOL: f64 = 1e-12;
/// Inputs whose squared norm is within this of 1 are renormalized; worse ones are rejected.
pub const RENORMALIZE_TOL: f64 = 1e-6;
/// Looser bound for decimal text input, which is typically rounded to three places.
pub const TEXT_RENORMALIZE_TOL: f64 = 5e-3;

/// A normalized pure coin state s0|0⟩ + s1|1⟩.
///
/// Amplitudes are stored raw, including global phase. Use
/// [`CoinState::equals_up_to_phase`] for physical equality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinState {
    s0: C64,
    s1: C64,
}

impl CoinState {
    pub const ZERO: CoinState = CoinState { s0: ONE, s1: ZERO };
    pub const ONE: CoinState = CoinState { s0: ZERO, s1: ONE };

    pub fn new(s0: C64, s1: C64) -> Result<Self> {
        let norm_sqr = s0.norm_sqr() + s1.norm_sqr();
        if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > RENORMALIZE_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self::from_normalized([s0, s1]))
    }

    /// Builds a state from any nonzero vector, rescaling it to unit norm.
    pub fn normalized(s0: C64, s1: C64) -> Result<Self> {
        let norm_sqr = s0.norm_sqr() + s1.norm_sqr();
        if !(norm_sqr.is_finite() && norm_sqr > 1e-24) {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self::from_normalized([s0, s1]))
    }

    pub(crate) fn from_normalized(v: [C64; 2]) -> Self {
        let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        if (n - 1.0).abs() <= f64::EPSILON {
            CoinState { s0: v[0], s1: v[1] }
        } else {
            CoinState {
                s0: v[0] / n,
                s1: v[1] / n,
            }
        }
    }

    pub fn s0(&self) -> C64 {
        self.s0
    }

    pub fn s1(&self) -> C64 {
        self.s1
    }

    pub fn amplitudes(&self) -> [C64; 2] {
        [self.s0, self.s1]
    }

    /// The orthogonal state conj(s0)|1⟩ - conj(s1)|0⟩.
    pub fn perp(&self) -> CoinState {
        CoinState {
            s0: -self.s1.conj(),
            s1: self.s0.conj(),
        }
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &CoinState) -> C64 {
        self.s0.conj() * other.s0 + self.s1.conj() * other.s1
    }

    /// ⟨self|v⟩ for a raw coin vector.
    pub fn project(&self, v: [C64; 2]) -> C64 {
        self.s0.conj() * v[0] + self.s1.conj() * v[1]
    }

    /// |⟨self|other⟩|².
    pub fn overlap(&self, other: &CoinState) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn equals_up_to_phase(&self, other: &CoinState, tol: f64) -> bool {
        (1.0 - self.inner(other).norm()).abs() <= tol
    }

    pub fn with_phase(&self, phase: f64) -> CoinState {
        let u = C64::from_polar(1.0, phase);
        CoinState {
            s0: self.s0 * u,
            s1: self.s1 * u,
        }
    }

    /// Same state with the first non-negligible amplitude real and positive.
    pub fn canonical(&self) -> CoinState {
        let [s0, s1] = linalg::canonical_phase(self.amplitudes());
        CoinState { s0, s1 }
    }

    pub fn projector(&self) -> Mat2 {
        Mat2::outer(self.amplitudes(), self.amplitudes())
    }

    pub fn qubit_vector(&self) -> QubitVector {
        let cross = self.s0.conj() * self.s1;
        QubitVector {
            x: 2.0 * cross.re,
            y: 2.0 * cross.im,
            z: self.s0.norm_sqr() - self.s1.norm_sqr(),
        }
    }

    pub fn bloch_angles(&self) -> BlochAngles {
        self.qubit_vector().angles()
    }

    pub fn from_bloch(angles: BlochAngles) -> CoinState {
        let (s, c) = (0.5 * angles.theta).sin_cos();
        CoinState {
            s0: C64::from(c),
            s1: C64::from_polar(s, angles.phi),
        }
    }

    /// Reference states by name: 0, 1, h, v, d, a, f.
    pub fn named(name: &str) -> Result<CoinState> {
        let r = FRAC_1_SQRT_2;
        let st = |s0: C64, s1: C64| CoinState { s0, s1 };
        Ok(match name {
            "0" => CoinState::ZERO,
            "1" => CoinState::ONE,
            "h" => st(C64::new(r, 0.0), C64::new(r, 0.0)),
            "v" => st(C64::new(-r, 0.0), C64::new(r, 0.0)),
            "d" => st(C64::new(r, 0.0), C64::new(0.0, r)),
            "a" => st(C64::new(0.0, r), C64::new(r, 0.0)),
            "f" => st(C64::from((PI / 8.0).cos()), C64::from((PI / 8.0).sin())),
            other => return Err(Error::UnknownState(other.to_string())),
        })
    }

    /// Name of the reference state this is exactly equal to, if any.
    pub fn name(&self) -> Option<&'static str> {
        ["0", "1", "h", "v", "d", "a", "f"].into_iter().find(|n| {
            let s = CoinState::named(n).unwrap();
            (s.s0 - self.s0).norm() < 1e-15 && (s.s1 - self.s1).norm() < 1e-15
        })
    }
}

/// Text form: a reference-state name, `bloch:θ,φ`, or `re0,im0,re1,im1`.
impl FromStr for CoinState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("bloch:") {
            let (t, p) = rest.split_once(',').ok_or_else(|| Error::Parse {
                what: "bloch angles",
                input: s.to_string(),
                reason: "expected `bloch:theta,phi`".into(),
            })?;
            let angles = BlochAngles::new(parse_angle(t)?, parse_angle(p)?)?;
            return Ok(CoinState::from_bloch(angles));
        }
        if s.contains(',') {
            let parts: Vec<&str> = s.split(',').map(str::trim).collect();
            if parts.len() != 4 {
                return Err(Error::Parse {
                    what: "coin state",
                    input: s.to_string(),
                    reason: format!("expected 4 comma-separated numbers, found {}", parts.len()),
                });
            }
            let mut x = [0.0; 4];
            for (slot, p) in x.iter_mut().zip(&parts) {
                *slot = p.parse().map_err(|e| Error::Parse {
                    what: "coin state",
                    input: s.to_string(),
                    reason: format!("`{p}`: {e}"),
                })?;
            }
            let norm_sqr = x.iter().map(|v| v * v).sum::<f64>();
            if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > TEXT_RENORMALIZE_TOL {
                return Err(Error::NotNormalized { norm_sqr });
            }
            return Ok(Self::from_normalized([
                C64::new(x[0], x[1]),
                C64::new(x[2], x[3]),
            ]));
        }
        CoinState::named(s)
    }
}

impl fmt::Display for CoinState {
    /// Writes the reference name when exact, otherwise four round-trippable decimals.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.name() {
            Some(n) => f.write_str(n),
            None => write!(
                f,
                "{},{},{},{}",
                self.s0.re, self.s0.im, self.s1.re, self.s1.im
            ),
        }
    }
}

/// Parses an angle in radians. Accepts plain decimals and multiples of pi
/// such as `pi`, `pi/8`, `13pi/16`, `-0.5pi`, `3*pi/4`.
pub fn parse_angle(s: &str) -> Result<f64> {
    let t = s.trim().replace(' ', "");
    let err = |reason: &str| Error::Parse {
        what: "angle",
        input: s.to_string(),
        reason: reason.to_string(),
    };
    let Some(pos) = t.find("pi") else {
        return t.parse::<f64>().map_err(|e| err(&e.to_string()));
    };
    let coef = t[..pos].trim_end_matches('*');
    let coef = match coef {
        "" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|e| err(&e.to_string()))?,
    };
    let rest = &t[pos + 2..];
    let div = if rest.is_empty() {
        1.0
    } else if let Some(d) = rest.strip_prefix('/') {
        d.parse::<f64>().map_err(|e| err(&e.to_string()))?
    } else {
        return Err(err("expected `/` after pi"));
    };
    if div == 0.0 {
        return Err(err("division by zero"));
    }
    Ok(coef * PI / div)
}

/// Polar and azimuthal Bloch angles, θ ∈ [0, π], φ ∈ [0, 2π).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochAngles {
    theta: f64,
    phi: f64,
}

impl BlochAngles {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::OutOfRange {
                what: "theta",
                value: theta,
                range: "[0, pi]",
            });
        }
        if !(0.0..2.0 * PI).contains(&phi) {
            return Err(Error::OutOfRange {
                what: "phi",
                value: phi,
                range: "[0, 2pi)",
            });
        }
        let phi = if theta == 0.0 || theta == PI {
            0.0
        } else {
            phi
        };
        Ok(BlochAngles { theta, phi })
    }

    /// Wraps φ into [0, 2π) and clamps θ into [0, π].
    pub fn wrapped(theta: f64, phi: f64) -> Self {
        let theta = theta.clamp(0.0, PI);
        let mut phi = phi.rem_euclid(2.0 * PI);
        if phi >= 2.0 * PI {
            phi = 0.0;
        }
        BlochAngles::new(theta, phi).expect("wrapped angles are in range")
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// Real 3-vector of Pauli expectations (tr ρσx, tr ρσy, tr ρσz).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QubitVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl QubitVector {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        QubitVector { x, y, z }
    }

    pub fn dot(&self, o: &QubitVector) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scaled(&self, k: f64) -> QubitVector {
        QubitVector::new(self.x * k, self.y * k, self.z * k)
    }

    /// Bloch angles of the direction; poles get φ = 0. The zero vector maps to θ = 0.
    pub fn angles(&self) -> BlochAngles {
        let n = self.norm();
        if n == 0.0 {
            return BlochAngles {
                theta: 0.0,
                phi: 0.0,
            };
        }
        let theta = (self.z / n).clamp(-1.0, 1.0).acos();
        BlochAngles::wrapped(theta, self.y.atan2(self.x))
    }
}

/// The coin density r|s⟩⟨s| + (1-r)|s⊥⟩⟨s⊥|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinDensity {
    r: f64,
    basis: CoinState,
}

impl CoinDensity {
    pub fn new(r: f64, basis: CoinState) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::OutOfRange {
                what: "mixing fraction r",
                value: r,
                range: "[0, 1]",
            });
        }
        Ok(CoinDensity { r, basis })
    }

    pub fn pure(s: CoinState) -> Self {
        CoinDensity { r: 1.0, basis: s }
    }

    pub fn maximally_mixed() -> Self {
        CoinDensity {
            r: 0.5,
            basis: CoinState::ZERO,
        }
    }

    /// Recovers (r, s) from a Hermitian, unit-trace, positive 2×2 matrix.
    pub fn from_matrix(rho: &Mat2) -> Result<Self> {
        if !rho.is_hermitian(1e-10) {
            return Err(Error::Parse {
                what: "coin density",
                input: format!("{rho:?}"),
                reason: "matrix is not Hermitian".into(),
            });
        }
        let tr = rho.trace().re;
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::BadWeights(tr));
        }
        let e = rho.hermitian_eigen();
        if e.lower < -1e-10 {
            return Err(Error::OutOfRange {
                what: "density eigenvalue",
                value: e.lower,
                range: "[0, 1]",
            });
        }
        CoinDensity::new(
            e.upper.clamp(0.0, 1.0),
            CoinState::from_normalized(e.v_upper),
        )
    }

    /// Density of the ensemble Σ w_i |s_i⟩⟨s_i|; weights must sum to 1.
    pub fn from_mixture(parts: &[(f64, CoinState)]) -> Result<Self> {
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if parts.is_empty() || parts.iter().any(|(w, _)| *w < 0.0) || (total - 1.0).abs() > 1e-10 {
            return Err(Error::BadWeights(total));
        }
        let rho = parts.iter().fold(Mat2::ZERO, |acc, (w, s)| {
            acc + s.projector().scale(C64::from(*w))
        });
        CoinDensity::from_matrix(&rho)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn basis(&self) -> CoinState {
        self.basis
    }

    pub fn is_pure(&self) -> bool {
        self.r == 1.0 || self.r == 0.0
    }

    pub fn matrix(&self) -> Mat2 {
        self.basis.projector().scale(C64::from(self.r))
            + self.basis.perp().projector().scale(C64::from(1.0 - self.r))
    }

    pub fn qubit_vector(&self) -> QubitVector {
        self.basis.qubit_vector().scaled(2.0 * self.r - 1.0)
    }

    /// The pure components with their weights, dropping zero-weight branches.
    pub fn branches(&self) -> Vec<(f64, CoinState)> {
        [(self.r, self.basis), (1.0 - self.r, self.basis.perp())]
            .into_iter()
            .filter(|(w, _)| *w > 0.0)
            .collect()
    }
}

impl From<CoinState> for CoinDensity {
    fn from(s: CoinState) -> Self {
        CoinDensity::pure(s)
    }
}

/// Text form: a pure state, `mix:r,<state>`, or `mixture:w@<state>;w@<state>...`.
impl FromStr for CoinDensity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("mix:") {
            let (r, st) = rest.split_once(',').ok_or_else(|| Error::Parse {
                what: "coin density",
                input: s.to_string(),
                reason: "expected `mix:r,<state>`".into(),
            })?;
            let r: f64 = r.trim().parse().map_err(|e| Error::Parse {
                what: "coin density",
                input: s.to_string(),
                reason: format!("mixing fraction: {e}"),
            })?;
            return CoinDensity::new(r, st.parse()?);
        }
        if let Some(rest) = s.strip_prefix("mixture:") {
            let mut parts = Vec::new();
            for item in rest.split(';') {
                let (w, st) = item.split_once('@').ok_or_else(|| Error::Parse {
                    what: "coin mixture",
                    input: item.to_string(),
                    reason: "expected `weight@<state>`".into(),
                })?;
                let w: f64 = w.trim().parse().map_err(|e| Error::Parse {
                    what: "coin mixture",
                    input: item.to_string(),
                    reason: format!("weight: {e}"),
                })?;
                parts.push((w, st.parse::<CoinState>()?));
            }
            return CoinDensity::from_mixture(&parts);
        }
        Ok(CoinDensity::pure(s.parse()?))
    }
}

impl fmt::Display for CoinDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.r == 1.0 {
            write!(f, "{}", self.basis)
        } else {
            write!(f, "mix:{},{}", self.r, self.basis)
        }
    }
}
