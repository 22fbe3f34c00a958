//! Ready-made states, steps and families used by the worked examples.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::coin::{BlochAngles, CoinDensity, CoinState};
use crate::parrondo::{build_family, DesignSpec, WalkFamily};
use crate::steps::QuantumStep;
use crate::Result;

/// A named coin state; panics on an unknown name.
pub fn named(name: &str) -> CoinState {
    CoinState::named(name).unwrap_or_else(|e| panic!("{e}"))
}

fn t(p: i64, q: i64, c: &str, s: &str) -> QuantumStep {
    QuantumStep::general(p, q, named(c), named(s))
}

/// Bloch angles (π/2, 13π/16).
pub fn psi1() -> CoinState {
    CoinState::from_bloch(BlochAngles::new(PI / 2.0, 13.0 * PI / 16.0).unwrap())
}

/// Bloch angles (π/2, 7π/8).
pub fn psi2() -> CoinState {
    CoinState::from_bloch(BlochAngles::new(PI / 2.0, 7.0 * PI / 8.0).unwrap())
}

/// The equal mixture of ψ1 and ψ2.
pub fn rho12() -> CoinDensity {
    CoinDensity::from_mixture(&[(0.5, psi1()), (0.5, psi2())]).unwrap()
}

/// 0.741|0⟩ - (0.257 + 0.62i)|1⟩, renormalized.
pub fn phi_state() -> CoinState {
    CoinState::normalized(C64::from(0.741), C64::new(-0.257, -0.62)).unwrap()
}

/// T1 = T(1,-1;f,0), T2 = T(1,-1;d,f).
pub fn two_step_steps() -> Vec<QuantumStep> {
    vec![t(1, -1, "f", "0"), t(1, -1, "d", "f")]
}

pub fn two_step_family(n: usize) -> Result<WalkFamily> {
    build_family(&two_step_steps(), n)
}

/// T1 = T(1,-2;h,0), T2 = T(1,-1;f,d), T3 = T(2,-1;f,d).
pub fn three_step_steps() -> Vec<QuantumStep> {
    vec![t(1, -2, "h", "0"), t(1, -1, "f", "d"), t(2, -1, "f", "d")]
}

pub fn three_step_family(n: usize) -> Result<WalkFamily> {
    build_family(&three_step_steps(), n)
}

/// Target h, strides (-1,-1), (3,-4).
pub fn designed_two_step_spec() -> DesignSpec {
    DesignSpec {
        target: named("h"),
        intermediates: vec![],
        strides: vec![(-1, -1), (3, -4)],
    }
}

/// T(-1,-1;v,h), T(3,-4;h,v).
pub fn designed_two_step_steps() -> Vec<QuantumStep> {
    vec![t(-1, -1, "v", "h"), t(3, -4, "h", "v")]
}

pub fn designed_two_step_family(n: usize) -> Result<WalkFamily> {
    build_family(&designed_two_step_steps(), n)
}

/// Target |0⟩, intermediates h, d, strides (-1,-1)×3, (4,-5).
pub fn designed_four_step_spec() -> DesignSpec {
    DesignSpec {
        target: CoinState::ZERO,
        intermediates: vec![named("h"), named("d")],
        strides: vec![(-1, -1), (-1, -1), (-1, -1), (4, -5)],
    }
}

/// T(-1,-1;h,0), T(-1,-1;d,h), T(-1,-1;1,d), T(4,-5;0,1).
pub fn designed_four_step_steps() -> Vec<QuantumStep> {
    vec![
        t(-1, -1, "h", "0"),
        t(-1, -1, "d", "h"),
        t(-1, -1, "1", "d"),
        t(4, -5, "0", "1"),
    ]
}

pub fn designed_four_step_family(n: usize) -> Result<WalkFamily> {
    build_family(&designed_four_step_steps(), n)
}

/// Preset families by name: `two-step`, `three-step`, `designed-two`, `designed-four`.
pub fn family_steps(name: &str) -> Option<Vec<QuantumStep>> {
    match name {
        "two-step" => Some(two_step_steps()),
        "three-step" => Some(three_step_steps()),
        "designed-two" => Some(designed_two_step_steps()),
        "designed-four" => Some(designed_four_step_steps()),
        _ => None,
    }
}

/// Preset home states by name: `psi1`, `psi2`, `rho12`, `phi`.
pub fn home(name: &str) -> Option<CoinDensity> {
    match name {
        "psi1" => Some(psi1().into()),
        "psi2" => Some(psi2().into()),
        "rho12" => Some(rho12()),
        "phi" => Some(phi_state().into()),
        _ => None,
    }
}
