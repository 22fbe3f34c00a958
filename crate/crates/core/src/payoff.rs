//! Payoffs of a single walk, the reduced coin operator ô and win/lose classification.

use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::coin::{CoinDensity, CoinState, QubitVector};
use crate::linalg::Mat2;
use crate::observables::Observable;
use crate::walks::Walk;
use crate::{Error, Result};

/// Default half-width of the tie band on the t = (2r-1)·S(v_max)·S(s) scale.
pub const DEFAULT_TIE_TOL: f64 = 1e-9;
/// Eigenvalue gap at or below which ô is treated as a multiple of identity.
pub const DEGENERACY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Outcome {
    Win,
    Lose,
    Tie,
}

impl Outcome {
    pub fn letter(self) -> char {
        match self {
            Outcome::Win => 'W',
            Outcome::Lose => 'L',
            Outcome::Tie => 'T',
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Win => "Win",
            Outcome::Lose => "Lose",
            Outcome::Tie => "Tie",
        })
    }
}

/// A game: a walk, an observable and a target payoff ω.
#[derive(Debug, Clone)]
pub struct GameSpec {
    pub walk: Walk,
    pub observable: Observable,
    target_payoff: f64,
}

impl GameSpec {
    pub fn new(walk: Walk, observable: Observable, target_payoff: f64) -> Result<Self> {
        if !target_payoff.is_finite() {
            return Err(Error::OutOfRange {
                what: "target payoff",
                value: target_payoff,
                range: "finite reals",
            });
        }
        Ok(GameSpec {
            walk,
            observable,
            target_payoff,
        })
    }

    pub fn target_payoff(&self) -> f64 {
        self.target_payoff
    }

    pub fn payoff(&self, home: &CoinDensity) -> f64 {
        payoff(&self.observable, &self.walk, home)
    }

    pub fn analyze(&self) -> CoinObservableAnalysis {
        analyze(&self.observable, &self.walk, self.target_payoff)
    }
}

/// Expectation of `o` in the walk's output from `home` at the origin.
pub fn payoff(o: &Observable, w: &Walk, home: &CoinDensity) -> f64 {
    o.expectation_ensemble(&w.run_mixed(home))
}

/// ô with entries ⟨W_i|Ô|W_j⟩ where W_0 = run(w, |0⟩), W_1 = run(w, |1⟩).
pub fn reduced_coin_operator(o: &Observable, w: &Walk) -> Mat2 {
    let w0 = w.run(CoinState::ZERO);
    let w1 = w.run(CoinState::ONE);
    let a = C64::from(o.expectation(&w0));
    let d = C64::from(o.expectation(&w1));
    let b = o.matrix_element(&w0, &w1);
    Mat2::new(a, b, b.conj(), d)
}

/// Eigen-data of ô and the Ω threshold for one walk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinObservableAnalysis {
    pub o_matrix: Mat2,
    pub o_max: f64,
    pub o_min: f64,
    pub v_max: CoinState,
    pub v_min: CoinState,
    /// Ω; `None` when ô is degenerate.
    pub omega_cap: Option<f64>,
    pub target_payoff: f64,
}

impl CoinObservableAnalysis {
    pub fn from_matrix(o_matrix: Mat2, target_payoff: f64) -> Self {
        let e = o_matrix.hermitian_eigen();
        let gap = e.upper - e.lower;
        let omega_cap =
            (gap > DEGENERACY_TOL).then(|| (2.0 * target_payoff - (e.upper + e.lower)) / gap);
        CoinObservableAnalysis {
            o_matrix,
            o_max: e.upper,
            o_min: e.lower,
            v_max: CoinState::from_normalized(e.v_upper),
            v_min: CoinState::from_normalized(e.v_lower),
            omega_cap,
            target_payoff,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.omega_cap.is_none()
    }

    /// S(v_max), the normal of the iso-payoff planes.
    pub fn axis(&self) -> QubitVector {
        self.v_max.qubit_vector()
    }

    pub fn payoff(&self, home: &CoinDensity) -> f64 {
        payoff_analytic(self, home)
    }

    pub fn classify(&self, home: &CoinDensity, tie_tol: f64) -> Outcome {
        classify(self, home, tie_tol)
    }

    /// Classification from a Bloch vector S(ρ) = (2r-1)S(s) directly.
    pub fn classify_vector(&self, s: &QubitVector, tie_tol: f64) -> Outcome {
        match self.omega_cap {
            Some(cap) => compare(self.axis().dot(s), cap, tie_tol),
            None => compare(0.5 * (self.o_max + self.o_min), self.target_payoff, tie_tol),
        }
    }
}

fn compare(t: f64, threshold: f64, tie_tol: f64) -> Outcome {
    if t > threshold + tie_tol {
        Outcome::Win
    } else if t < threshold - tie_tol {
        Outcome::Lose
    } else {
        Outcome::Tie
    }
}

pub fn analyze(o: &Observable, w: &Walk, omega: f64) -> CoinObservableAnalysis {
    CoinObservableAnalysis::from_matrix(reduced_coin_operator(o, w), omega)
}

/// ½(2r-1)(o_max-o_min)·S(v_max)·S(s) + ½(o_max+o_min).
pub fn payoff_analytic(a: &CoinObservableAnalysis, home: &CoinDensity) -> f64 {
    0.5 * (a.o_max - a.o_min) * a.axis().dot(&home.qubit_vector()) + 0.5 * (a.o_max + a.o_min)
}

pub fn classify(a: &CoinObservableAnalysis, home: &CoinDensity, tie_tol: f64) -> Outcome {
    a.classify_vector(&home.qubit_vector(), tie_tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn table_payoffs() {
        let fam = presets::two_step_family(3).unwrap();
        let psi1 = CoinDensity::pure(presets::psi1());
        let psi2 = CoinDensity::pure(presets::psi2());
        assert!(close(
            payoff(&Observable::mu(), &fam.walks()[1], &psi2),
            -0.91,
            5e-3
        ));
        assert!(close(
            payoff(&Observable::delta(), &fam.walks()[0], &psi1),
            -0.253,
            5e-3
        ));
    }

    #[test]
    fn designed_two_step_payoff_on_h() {
        for n in 1..=3 {
            let fam = presets::designed_two_step_family(n).unwrap();
            let p = payoff(
                &Observable::mu(),
                &fam.walks()[2],
                &CoinDensity::pure(presets::named("h")),
            );
            assert!(close(p, 2.0 * n as f64, 1e-9));
        }
    }

    #[test]
    fn reduced_operator_examples() {
        let fam = presets::two_step_family(3).unwrap();
        let o1 = reduced_coin_operator(&Observable::mu(), &fam.walks()[0]);
        assert!(close(o1.get(0, 0).re, 3.71, 5e-3));
        assert!(close(o1.get(0, 1).re, 1.123, 5e-3));
        assert!(close(o1.get(1, 1).re, -3.71, 5e-3));
        let d3 = reduced_coin_operator(&Observable::delta(), &fam.walks()[2]);
        let want = Mat2::new(
            C64::from(0.5),
            C64::new(0.0, -0.5),
            C64::new(0.0, 0.5),
            C64::from(-0.5),
        );
        assert!((d3 - want).norm() < 5e-3);
        let single = Walk::from(crate::steps::QuantumStep::general(
            1,
            1,
            presets::named("f"),
            presets::named("d"),
        ));
        let id = reduced_coin_operator(&Observable::mu(), &single);
        assert!((id - Mat2::IDENTITY).norm() < 1e-14);
    }

    #[test]
    fn analysis_examples() {
        let fam = presets::two_step_family(3).unwrap();
        let a = analyze(&Observable::mu(), &fam.walks()[0], 0.0);
        assert!(close(a.o_max, 3.876, 5e-3));
        assert!(close(a.v_max.s0().re, 0.989, 5e-3));
        assert!(close(a.v_max.s1().re, 0.146, 5e-3));
        let b = analyze(&Observable::delta(), &fam.walks()[2], 0.0);
        assert!(close(b.o_max, std::f64::consts::FRAC_1_SQRT_2, 5e-4));
        assert!(close(b.v_max.s0().re, 0.924, 5e-3));
        assert!(close(b.v_max.s1().im, 0.383, 5e-3));
        let deg = CoinObservableAnalysis::from_matrix(Mat2::IDENTITY, 0.0);
        assert!(deg.is_degenerate());
        assert_eq!(
            deg.classify(&CoinDensity::pure(CoinState::ZERO), DEFAULT_TIE_TOL),
            Outcome::Win
        );
    }

    #[test]
    fn analytic_matches_direct() {
        let fam = presets::two_step_family(3).unwrap();
        let a = analyze(&Observable::mu(), &fam.walks()[0], 0.0);
        let psi1 = CoinDensity::pure(presets::psi1());
        assert!(close(payoff_analytic(&a, &psi1), -0.934, 5e-3));
        assert!(close(
            payoff_analytic(&a, &psi1),
            payoff(&Observable::mu(), &fam.walks()[0], &psi1),
            1e-12
        ));
        assert!(close(
            payoff_analytic(&a, &CoinDensity::pure(a.v_max)),
            a.o_max,
            1e-12
        ));
        assert!(close(
            payoff_analytic(&a, &CoinDensity::pure(a.v_min)),
            a.o_min,
            1e-12
        ));
        let half = CoinDensity::new(0.5, presets::psi1()).unwrap();
        assert!(close(
            payoff_analytic(&a, &half),
            0.5 * (a.o_max + a.o_min),
            1e-12
        ));
    }

    #[test]
    fn classify_examples() {
        let fam = presets::two_step_family(3).unwrap();
        let psi1 = CoinDensity::pure(presets::psi1());
        let a3 = analyze(&Observable::mu(), &fam.walks()[2], 0.0);
        let a1 = analyze(&Observable::mu(), &fam.walks()[0], 0.0);
        assert_eq!(classify(&a3, &psi1, DEFAULT_TIE_TOL), Outcome::Win);
        assert_eq!(classify(&a1, &psi1, DEFAULT_TIE_TOL), Outcome::Lose);
        // ω at the payoff of v_max's equator state puts it on the separating circle.
        let eq = CoinDensity::new(0.5, a1.v_max).unwrap();
        let tie = analyze(
            &Observable::mu(),
            &fam.walks()[0],
            payoff_analytic(&a1, &eq),
        );
        assert_eq!(classify(&tie, &eq, DEFAULT_TIE_TOL), Outcome::Tie);
    }
}
