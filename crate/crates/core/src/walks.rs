//! Walks as (possibly nested, repeated) step sequences and their action on home-states.

use serde::{Deserialize, Serialize};

use crate::coin::{CoinDensity, CoinState};
use crate::composite::{CompositeEnsemble, CompositeState};
use crate::steps::{GeneralStep, QuantumStep};
use crate::{Error, Result};

/// One entry of a walk: a single step or a nested repeated block.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum WalkElement {
    Block(Walk),
    Step(QuantumStep),
}

// Objects with a `steps` key are nested blocks, anything else is a step.
impl<'de> Deserialize<'de> for WalkElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let v = serde_json::Value::deserialize(d)?;
        if v.get("steps").is_some() {
            Walk::deserialize(v)
                .map(WalkElement::Block)
                .map_err(D::Error::custom)
        } else {
            QuantumStep::deserialize(v)
                .map(WalkElement::Step)
                .map_err(D::Error::custom)
        }
    }
}

/// A walk `elements` applied first-to-last, the whole list `repeat` times.
///
/// The list `[T1, T2, ...]` means T1 acts first, i.e. the operator product
/// `... T2 T1`. Repeats are never flattened.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WalkRepr", into = "WalkRepr")]
pub struct Walk {
    elements: Vec<WalkElement>,
    repeat: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WalkRepr {
    steps: Vec<WalkElement>,
    #[serde(default = "one")]
    repeat: usize,
}

fn one() -> usize {
    1
}

impl TryFrom<WalkRepr> for Walk {
    type Error = Error;
    fn try_from(r: WalkRepr) -> Result<Self> {
        Walk::new(r.steps, r.repeat)
    }
}

impl From<Walk> for WalkRepr {
    fn from(w: Walk) -> Self {
        WalkRepr {
            steps: w.elements,
            repeat: w.repeat,
        }
    }
}

impl Walk {
    pub fn new(elements: Vec<WalkElement>, repeat: usize) -> Result<Self> {
        if elements.is_empty() || repeat == 0 {
            return Err(Error::EmptyWalk);
        }
        Ok(Walk { elements, repeat })
    }

    pub fn from_steps<I, S>(steps: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<QuantumStep>,
    {
        Walk::new(
            steps
                .into_iter()
                .map(|s| WalkElement::Step(s.into()))
                .collect(),
            1,
        )
    }

    /// `[steps]^n`.
    pub fn cycle<S: Into<QuantumStep> + Clone>(steps: &[S], n: usize) -> Result<Self> {
        Walk::from_steps(steps.iter().cloned())?.repeated(n)
    }

    /// This walk performed n times in a row.
    pub fn repeated(self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyWalk);
        }
        if n == 1 {
            return Ok(self);
        }
        Ok(Walk {
            elements: vec![WalkElement::Block(self)],
            repeat: n,
        })
    }

    pub fn elements(&self) -> &[WalkElement] {
        &self.elements
    }

    pub fn repeat(&self) -> usize {
        self.repeat
    }

    /// Total number of steps with repeats expanded.
    pub fn step_count(&self) -> usize {
        self.repeat
            * self
                .elements
                .iter()
                .map(|e| match e {
                    WalkElement::Step(_) => 1,
                    WalkElement::Block(w) => w.step_count(),
                })
                .sum::<usize>()
    }

    /// d = Σ (p_i + q_i); conventional and split steps contribute 0.
    pub fn displacement(&self) -> i64 {
        self.repeat as i64
            * self
                .elements
                .iter()
                .map(|e| match e {
                    WalkElement::Step(s) => s.displacement(),
                    WalkElement::Block(w) => w.displacement(),
                })
                .sum::<i64>()
    }

    /// Calls `f` on every step in application order, expanding repeats lazily.
    pub fn for_each_step(&self, f: &mut impl FnMut(&QuantumStep)) {
        for _ in 0..self.repeat {
            for e in &self.elements {
                match e {
                    WalkElement::Step(s) => f(s),
                    WalkElement::Block(w) => w.for_each_step(f),
                }
            }
        }
    }

    /// The walk as generalized steps in application order, if every step is one.
    pub fn general_steps(&self) -> Option<Vec<GeneralStep>> {
        let mut out = Vec::with_capacity(self.step_count());
        let mut ok = true;
        self.for_each_step(&mut |s| match s.as_general() {
            Some(g) => out.push(*g),
            None => ok = false,
        });
        ok.then_some(out)
    }

    pub fn apply(&self, state: &CompositeState) -> CompositeState {
        let mut st = state.clone();
        self.for_each_step(&mut |s| st = s.apply(&st));
        st
    }

    /// The walk started from |home; 0⟩.
    pub fn run(&self, home: CoinState) -> CompositeState {
        self.apply(&CompositeState::localized(home, 0))
    }

    /// The walk on the home density r|s⟩⟨s| + (1-r)|s⊥⟩⟨s⊥| at the origin.
    pub fn run_mixed(&self, home: &CoinDensity) -> CompositeEnsemble {
        let branches = home
            .branches()
            .into_iter()
            .map(|(w, s)| (w, self.run(s)))
            .collect();
        CompositeEnsemble::new(branches).expect("coin density weights sum to 1")
    }

    /// Biased-forward (+1), unbiased (0) or biased-backward (-1).
    pub fn bias(&self) -> i64 {
        self.displacement().signum()
    }
}

impl From<QuantumStep> for Walk {
    fn from(s: QuantumStep) -> Self {
        Walk {
            elements: vec![WalkElement::Step(s)],
            repeat: 1,
        }
    }
}
