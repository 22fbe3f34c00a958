//! Generalized discrete-time quantum walks with biased, coin-conditioned steps,
//! observable payoffs over the Bloch sphere, and Parrondo-state identification.

pub mod coin;
pub mod composite;
pub mod error;
pub mod linalg;
pub mod observables;
pub mod oracle;
pub mod parrondo;
pub mod payoff;
pub mod presets;
pub mod steps;
pub mod svg;
pub mod walks;

pub use coin::{BlochAngles, CoinDensity, CoinState, QubitVector};
pub use composite::{CompositeEnsemble, CompositeState};
pub use error::{Error, Result};
pub use linalg::Mat2;
pub use observables::Observable;
pub use parrondo::{build_family, DesignSpec, RegionMap, WalkFamily};
pub use payoff::{CoinObservableAnalysis, GameSpec, Outcome};
pub use steps::{ConventionalStep, GeneralStep, QuantumStep, SplitStep};
pub use walks::Walk;
