//! Coin⊗position states on the unbounded integer lattice.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64 as C64;

use crate::coin::CoinState;
use crate::linalg::ZERO;
use crate::{Error, Result};

/// Default tolerance for translational-invariance checks.
pub const TI_TOL: f64 = 1e-9;
/// Amplitude pairs with squared norm at or below this are dropped from the support.
pub(crate) const PRUNE_NORM_SQR: f64 = 1e-30;

/// Sparse map from lattice position to the coin vector (a0(m), a1(m)) held there.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CompositeState {
    amps: BTreeMap<i64, [C64; 2]>,
}

impl CompositeState {
    /// The localized product state |s; m⟩.
    pub fn localized(s: CoinState, m: i64) -> Self {
        let mut amps = BTreeMap::new();
        amps.insert(m, s.amplitudes());
        CompositeState { amps }
    }

    /// Builds a state from raw (position, amplitude) pairs, rescaling to unit norm.
    pub fn from_amplitudes<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, [C64; 2])>,
    {
        let mut acc = Accumulator::default();
        for (m, v) in entries {
            acc.add(m, v);
        }
        let mut st = acc.finish();
        let n = st.norm_sqr();
        if !(n.is_finite() && n > 1e-24) {
            return Err(Error::NotNormalized { norm_sqr: n });
        }
        let k = 1.0 / n.sqrt();
        for v in st.amps.values_mut() {
            v[0] *= k;
            v[1] *= k;
        }
        Ok(st)
    }

    pub(crate) fn from_map(amps: BTreeMap<i64, [C64; 2]>) -> Self {
        CompositeState { amps }
    }

    pub fn amplitude(&self, m: i64) -> [C64; 2] {
        self.amps.get(&m).copied().unwrap_or([ZERO, ZERO])
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, [C64; 2])> + '_ {
        self.amps.iter().map(|(&m, &v)| (m, v))
    }

    /// Smallest and largest occupied positions.
    pub fn span(&self) -> Option<(i64, i64)> {
        Some((*self.amps.keys().next()?, *self.amps.keys().next_back()?))
    }

    pub fn support_len(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps
            .values()
            .map(|v| v[0].norm_sqr() + v[1].norm_sqr())
            .sum()
    }

    /// ⟨self|other⟩, conjugate-linear in `self`.
    pub fn inner(&self, other: &CompositeState) -> C64 {
        // Walk the smaller support.
        let (small, large, flip) = if self.amps.len() <= other.amps.len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let z: C64 = small
            .amps
            .iter()
            .filter_map(|(m, a)| {
                large
                    .amps
                    .get(m)
                    .map(|b| a[0].conj() * b[0] + a[1].conj() * b[1])
            })
            .sum();
        if flip {
            z.conj()
        } else {
            z
        }
    }

    /// Every position m moved to m + d.
    pub fn shift_by(&self, d: i64) -> CompositeState {
        CompositeState {
            amps: self.amps.iter().map(|(&m, &v)| (m + d, v)).collect(),
        }
    }

    /// True iff |⟨a|a₊d⟩| <= tol for all d = 1..=e-b.
    pub fn is_translationally_invariant(&self, tol: f64) -> bool {
        self.max_shift_overlap() <= tol
    }

    /// max over d = 1..=e-b of |⟨a|a₊d⟩|; zero for a single-position state.
    pub fn max_shift_overlap(&self) -> f64 {
        let Some((b, e)) = self.span() else {
            return 0.0;
        };
        (1..=e - b)
            .map(|d| {
                self.amps
                    .iter()
                    .filter_map(|(&m, a)| {
                        // ⟨a|a₊d⟩ pairs a(m) with a₊d(m) = a(m - d).
                        self.amps
                            .get(&(m - d))
                            .map(|s| a[0].conj() * s[0] + a[1].conj() * s[1])
                    })
                    .sum::<C64>()
                    .norm()
            })
            .fold(0.0, f64::max)
    }

    /// Occupation probability per position, ascending.
    pub fn histogram(&self) -> Vec<(i64, f64)> {
        self.amps
            .iter()
            .map(|(&m, v)| (m, v[0].norm_sqr() + v[1].norm_sqr()))
            .collect()
    }

    /// Σ_m m·P(m).
    pub fn mean_position(&self) -> f64 {
        self.histogram().iter().map(|&(m, p)| m as f64 * p).sum()
    }
}

/// Accumulates amplitude contributions per position and prunes numerical zeros.
#[derive(Default)]
pub(crate) struct Accumulator {
    amps: BTreeMap<i64, [C64; 2]>,
}

impl Accumulator {
    pub(crate) fn add(&mut self, m: i64, v: [C64; 2]) {
        let slot = self.amps.entry(m).or_insert([ZERO, ZERO]);
        slot[0] += v[0];
        slot[1] += v[1];
    }

    pub(crate) fn finish(mut self) -> CompositeState {
        self.amps
            .retain(|_, v| v[0].norm_sqr() + v[1].norm_sqr() > PRUNE_NORM_SQR);
        CompositeState::from_map(self.amps)
    }
}

/// A finite ensemble Σ w_i |W_i⟩⟨W_i| of composite pure states.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeEnsemble {
    branches: Vec<(f64, CompositeState)>,
}

impl CompositeEnsemble {
    pub fn new(branches: Vec<(f64, CompositeState)>) -> Result<Self> {
        let total: f64 = branches.iter().map(|(w, _)| w).sum();
        if branches.is_empty()
            || branches.iter().any(|(w, _)| !(0.0..=1.0).contains(w))
            || (total - 1.0).abs() > 1e-10
        {
            return Err(Error::BadWeights(total));
        }
        Ok(CompositeEnsemble { branches })
    }

    pub fn pure(state: CompositeState) -> Self {
        CompositeEnsemble {
            branches: vec![(1.0, state)],
        }
    }

    pub fn branches(&self) -> &[(f64, CompositeState)] {
        &self.branches
    }

    /// Weighted occupation probabilities, ascending by position.
    pub fn histogram(&self) -> Vec<(i64, f64)> {
        let mut acc: BTreeMap<i64, f64> = BTreeMap::new();
        for (w, s) in &self.branches {
            for (m, p) in s.histogram() {
                *acc.entry(m).or_default() += w * p;
            }
        }
        acc.into_iter().collect()
    }
}

/// Formats a value with 12 significant digits.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (11 - mag).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // -0.000… prints as negative zero after rounding; normalise it.
    if s.trim_start_matches('-')
        .chars()
        .all(|c| c == '0' || c == '.')
    {
        "0".into()
    } else {
        s
    }
}

/// Histogram CSV: header `position,probability`, 12 significant digits.
pub fn histogram_csv(hist: &[(i64, f64)]) -> String {
    let mut out = String::from("position,probability\n");
    for (m, p) in hist {
        let _ = writeln!(out, "{m},{}", sig12(*p));
    }
    out
}
