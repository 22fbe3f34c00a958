//! Quantum steps: the generalized biased step T(p,q;c,s), the conventional
//! SU(2)-coin step and the split step, plus their algebra.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::coin::CoinState;
use crate::composite::{Accumulator, CompositeState};
use crate::linalg::{Mat2, ZERO};
use crate::{Error, Result};

/// Tolerance on |⟨c_i|s_{i+1}⟩| = 1 when checking daisy chains.
pub const CHAIN_TOL: f64 = 1e-9;

/// T(p,q;c,s): |s;g⟩ → |c;g+p⟩ and |s⊥;g⟩ → |c⊥;g+q⟩, extended linearly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralStep {
    pub p: i64,
    pub q: i64,
    /// Coin state c the |s⟩ branch is rotated into.
    pub coin_out: CoinState,
    /// Shift state s selecting the p-branch.
    pub shift_in: CoinState,
}

impl GeneralStep {
    pub fn new(p: i64, q: i64, coin_out: CoinState, shift_in: CoinState) -> Self {
        GeneralStep {
            p,
            q,
            coin_out,
            shift_in,
        }
    }

    pub fn apply(&self, state: &CompositeState) -> CompositeState {
        let c = self.coin_out.amplitudes();
        let cp = self.coin_out.perp().amplitudes();
        let sp = self.shift_in.perp();
        let mut acc = Accumulator::default();
        for (g, v) in state.iter() {
            let a = self.shift_in.project(v);
            let b = sp.project(v);
            acc.add(g + self.p, [a * c[0], a * c[1]]);
            acc.add(g + self.q, [b * cp[0], b * cp[1]]);
        }
        acc.finish()
    }

    /// The step written as a coin toss ĉ(c;s) followed by the shift Ŝ(p,q;c).
    pub fn factorize(&self) -> Factorization {
        let toss = Mat2::outer(self.coin_out.amplitudes(), self.shift_in.amplitudes())
            + Mat2::outer(
                self.coin_out.perp().amplitudes(),
                self.shift_in.perp().amplitudes(),
            );
        Factorization {
            shift: ShiftOperator {
                p: self.p,
                q: self.q,
                coin: self.coin_out,
            },
            coin_toss: toss,
        }
    }

    /// The physically identical step T(q,p;c⊥,s⊥).
    pub fn swapped(&self) -> GeneralStep {
        GeneralStep::new(self.q, self.p, self.coin_out.perp(), self.shift_in.perp())
    }
}

/// Ŝ(p,q;c): |c;g⟩ → |c;g+p⟩, |c⊥;g⟩ → |c⊥;g+q⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftOperator {
    pub p: i64,
    pub q: i64,
    pub coin: CoinState,
}

impl ShiftOperator {
    pub fn apply(&self, state: &CompositeState) -> CompositeState {
        GeneralStep::new(self.p, self.q, self.coin, self.coin).apply(state)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Factorization {
    pub shift: ShiftOperator,
    pub coin_toss: Mat2,
}

impl Factorization {
    /// Applies the coin toss at every position, then the shift.
    pub fn apply(&self, state: &CompositeState) -> CompositeState {
        let mut acc = Accumulator::default();
        for (g, v) in state.iter() {
            acc.add(g, self.coin_toss.apply(v));
        }
        self.shift.apply(&acc.finish())
    }
}

/// Conventional step: coin toss ĉ(α,β,γ), then |0⟩ moves to g-1 and |1⟩ to g+1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConventionalStep {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

impl ConventionalStep {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let check = |what, v: f64, ok: bool, range| {
            if ok {
                Ok(())
            } else {
                Err(Error::OutOfRange {
                    what,
                    value: v,
                    range,
                })
            }
        };
        check("alpha", alpha, (0.0..2.0 * PI).contains(&alpha), "[0, 2pi)")?;
        check("beta", beta, (0.0..=PI / 2.0).contains(&beta), "[0, pi/2]")?;
        check("gamma", gamma, (0.0..2.0 * PI).contains(&gamma), "[0, 2pi)")?;
        Ok(ConventionalStep { alpha, beta, gamma })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// The SU(2) coin matrix ĉ(α,β,γ).
    pub fn coin_matrix(&self) -> Mat2 {
        let (sb, cb) = self.beta.sin_cos();
        Mat2::new(
            C64::from_polar(cb, self.alpha),
            -C64::from_polar(sb, -self.gamma),
            C64::from_polar(sb, self.gamma),
            C64::from_polar(cb, -self.alpha),
        )
    }

    pub fn apply(&self, state: &CompositeState) -> CompositeState {
        let c = self.coin_matrix();
        let mut acc = Accumulator::default();
        for (g, v) in state.iter() {
            let w = c.apply(v);
            acc.add(g - 1, [w[0], ZERO]);
            acc.add(g + 1, [ZERO, w[1]]);
        }
        acc.finish()
    }

    /// The same step as T(-1,+1; |0⟩, ĉ†|0⟩).
    pub fn to_general(&self) -> GeneralStep {
        let shift = self.coin_matrix().adjoint().apply([C64::from(1.0), ZERO]);
        GeneralStep::new(-1, 1, CoinState::ZERO, CoinState::from_normalized(shift))
    }
}

/// Split step T_Δ(δ;c): only √Δ of the amplitude moves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitStep {
    delta_frac: f64,
    delta_phase: f64,
    coin: CoinState,
}

impl SplitStep {
    pub fn new(delta_frac: f64, delta_phase: f64, coin: CoinState) -> Result<Self> {
        if !(0.0..=1.0).contains(&delta_frac) {
            return Err(Error::OutOfRange {
                what: "split fraction Delta",
                value: delta_frac,
                range: "[0, 1]",
            });
        }
        if !delta_phase.is_finite() {
            return Err(Error::OutOfRange {
                what: "split phase delta",
                value: delta_phase,
                range: "finite reals",
            });
        }
        Ok(SplitStep {
            delta_frac,
            delta_phase,
            coin,
        })
    }

    pub fn delta_frac(&self) -> f64 {
        self.delta_frac
    }
    pub fn delta_phase(&self) -> f64 {
        self.delta_phase
    }
    pub fn coin(&self) -> CoinState {
        self.coin
    }

    pub fn apply(&self, state: &CompositeState) -> CompositeState {
        let moving = self.delta_frac.sqrt();
        let staying = (1.0 - self.delta_frac).sqrt();
        let c = self.coin.amplitudes();
        let cp = self.coin.perp().amplitudes();
        let stay0 = C64::from_polar(staying, self.delta_phase);
        let stay1 = -C64::from_polar(staying, -self.delta_phase);
        let mut acc = Accumulator::default();
        for (g, [x, y]) in state.iter() {
            // |0;g⟩ → √(1-Δ)e^{iδ}|c⊥;g⟩ + √Δ|c;g+1⟩
            acc.add(g, [x * stay0 * cp[0], x * stay0 * cp[1]]);
            acc.add(g + 1, [x * moving * c[0], x * moving * c[1]]);
            // |1;g⟩ → -√(1-Δ)e^{-iδ}|c;g⟩ + √Δ|c⊥;g-1⟩
            acc.add(g, [y * stay1 * c[0], y * stay1 * c[1]]);
            acc.add(g - 1, [y * moving * cp[0], y * moving * cp[1]]);
        }
        acc.finish()
    }

    /// The pair (T(0,-1;0,0), T(1,0;c,b)), applied in that order, with
    /// b = √Δ|0⟩ - √(1-Δ)e^{iδ}|1⟩.
    pub fn decompose(&self) -> (GeneralStep, GeneralStep) {
        let b = CoinState::from_normalized([
            C64::from(self.delta_frac.sqrt()),
            -C64::from_polar((1.0 - self.delta_frac).sqrt(), self.delta_phase),
        ]);
        (
            GeneralStep::new(0, -1, CoinState::ZERO, CoinState::ZERO),
            GeneralStep::new(1, 0, self.coin, b),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StepRepr", into = "StepRepr")]
pub enum QuantumStep {
    General(GeneralStep),
    Conventional(ConventionalStep),
    Split(SplitStep),
}

impl QuantumStep {
    pub fn general(p: i64, q: i64, coin_out: CoinState, shift_in: CoinState) -> Self {
        QuantumStep::General(GeneralStep::new(p, q, coin_out, shift_in))
    }

    pub fn apply(&self, state: &CompositeState) -> CompositeState {
        match self {
            QuantumStep::General(s) => s.apply(state),
            QuantumStep::Conventional(s) => s.apply(state),
            QuantumStep::Split(s) => s.apply(state),
        }
    }

    /// Equivalent sequence of generalized steps, in application order.
    pub fn to_general_steps(&self) -> Vec<GeneralStep> {
        match self {
            QuantumStep::General(s) => vec![*s],
            QuantumStep::Conventional(s) => vec![s.to_general()],
            QuantumStep::Split(s) => {
                let (a, b) = s.decompose();
                vec![a, b]
            }
        }
    }

    /// p + q summed over the equivalent generalized steps.
    pub fn displacement(&self) -> i64 {
        self.to_general_steps().iter().map(|s| s.p + s.q).sum()
    }

    pub fn as_general(&self) -> Option<&GeneralStep> {
        match self {
            QuantumStep::General(s) => Some(s),
            _ => None,
        }
    }
}

impl From<GeneralStep> for QuantumStep {
    fn from(s: GeneralStep) -> Self {
        QuantumStep::General(s)
    }
}

/// Collapses daisy-chained steps (coin of step i equals shift state of step
/// i+1 up to phase) into the single step T(Σp, Σq; c_last, s_first).
///
/// Any phase mismatch along the chain is carried into the returned coin state
/// so the result acts exactly like the sequence.
pub fn compose_daisy_chain(steps: &[GeneralStep]) -> Result<GeneralStep> {
    let first = steps.first().ok_or(Error::EmptyWalk)?;
    let mut phase = C64::from(1.0);
    for (i, pair) in steps.windows(2).enumerate() {
        let z = pair[1].shift_in.inner(&pair[0].coin_out);
        if (1.0 - z.norm()).abs() > CHAIN_TOL {
            return Err(Error::ChainingViolation {
                index: i + 1,
                next: i + 2,
            });
        }
        phase *= z / z.norm();
    }
    let last = steps.last().unwrap();
    let [c0, c1] = last.coin_out.amplitudes();
    Ok(GeneralStep::new(
        steps.iter().map(|s| s.p).sum(),
        steps.iter().map(|s| s.q).sum(),
        CoinState::from_normalized([c0 * phase, c1 * phase]),
        first.shift_in,
    ))
}

/// Tolerance used by [`step_equivalent`].
pub const EQUIVALENCE_TOL: f64 = 1e-10;

/// Whether two step sequences act identically on |0;0⟩ and |1;0⟩ with one shared global phase.
pub fn sequences_equivalent(a: &[QuantumStep], b: &[QuantumStep], tol: f64) -> bool {
    let run = |steps: &[QuantumStep], s: CoinState| {
        steps
            .iter()
            .fold(CompositeState::localized(s, 0), |st, t| t.apply(&st))
    };
    let outs_a = [run(a, CoinState::ZERO), run(a, CoinState::ONE)];
    let outs_b = [run(b, CoinState::ZERO), run(b, CoinState::ONE)];
    equal_up_to_shared_phase(&outs_a, &outs_b, tol)
}

pub fn step_equivalent(a: &GeneralStep, b: &GeneralStep) -> bool {
    sequences_equivalent(&[(*a).into()], &[(*b).into()], EQUIVALENCE_TOL)
}

/// True iff b_i = e^{iχ} a_i for all i with a single χ.
pub fn equal_up_to_shared_phase(a: &[CompositeState], b: &[CompositeState], tol: f64) -> bool {
    let Some(z) = a.first().zip(b.first()).map(|(x, y)| x.inner(y)) else {
        return a.len() == b.len();
    };
    if a.len() != b.len() || (1.0 - z.norm()).abs() > tol {
        return false;
    }
    let u = z / z.norm();
    a.iter().zip(b).all(|(x, y)| {
        let positions: std::collections::BTreeSet<i64> = x
            .iter()
            .map(|(m, _)| m)
            .chain(y.iter().map(|(m, _)| m))
            .collect();
        positions.into_iter().all(|m| {
            let (xa, ya) = (x.amplitude(m), y.amplitude(m));
            (ya[0] - xa[0] * u).norm() <= tol && (ya[1] - xa[1] * u).norm() <= tol
        })
    })
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum StepRepr {
    General {
        p: i64,
        q: i64,
        coin: String,
        shift: String,
    },
    Conventional {
        alpha: f64,
        beta: f64,
        gamma: f64,
    },
    Split {
        delta: f64,
        phase: f64,
        coin: String,
    },
}

impl TryFrom<StepRepr> for QuantumStep {
    type Error = Error;

    fn try_from(r: StepRepr) -> Result<Self> {
        Ok(match r {
            StepRepr::General { p, q, coin, shift } => {
                QuantumStep::general(p, q, coin.parse()?, shift.parse()?)
            }
            StepRepr::Conventional { alpha, beta, gamma } => {
                QuantumStep::Conventional(ConventionalStep::new(alpha, beta, gamma)?)
            }
            StepRepr::Split { delta, phase, coin } => {
                QuantumStep::Split(SplitStep::new(delta, phase, coin.parse()?)?)
            }
        })
    }
}

impl From<QuantumStep> for StepRepr {
    fn from(s: QuantumStep) -> Self {
        match s {
            QuantumStep::General(g) => StepRepr::General {
                p: g.p,
                q: g.q,
                coin: g.coin_out.to_string(),
                shift: g.shift_in.to_string(),
            },
            QuantumStep::Conventional(c) => StepRepr::Conventional {
                alpha: c.alpha,
                beta: c.beta,
                gamma: c.gamma,
            },
            QuantumStep::Split(s) => StepRepr::Split {
                delta: s.delta_frac,
                phase: s.delta_phase,
                coin: s.coin.to_string(),
            },
        }
    }
}
