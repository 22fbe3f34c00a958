//! Walk families, Bloch-sphere region maps, Parrondo-state detection,
//! persistence scans and the daisy-chain design of Parrondo walks.

use std::f64::consts::PI;
use std::fmt::{self, Write as _};
use std::ops::RangeInclusive;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::coin::{BlochAngles, CoinDensity, CoinState, QubitVector};
use crate::composite::sig12;
use crate::linalg::Mat2;
use crate::observables::Observable;
use crate::payoff::{analyze, payoff, CoinObservableAnalysis, Outcome};
use crate::steps::{GeneralStep, QuantumStep};
use crate::walks::Walk;
use crate::{Error, Result};

/// Default region grid: 1° spacing in both angles.
pub const DEFAULT_GRID: (usize, usize) = (181, 360);

/// The m homogeneous walks T_i^{nm} and the sequenced walk [T_1 … T_m]^n.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkFamily {
    base_steps: Vec<QuantumStep>,
    cycles: usize,
    walks: Vec<Walk>,
}

pub fn build_family(steps: &[QuantumStep], n: usize) -> Result<WalkFamily> {
    if steps.is_empty() || n == 0 {
        return Err(Error::EmptyWalk);
    }
    let m = steps.len();
    let mut walks = steps
        .iter()
        .map(|s| Walk::cycle(std::slice::from_ref(s), n * m))
        .collect::<Result<Vec<_>>>()?;
    walks.push(Walk::cycle(steps, n)?);
    Ok(WalkFamily {
        base_steps: steps.to_vec(),
        cycles: n,
        walks,
    })
}

impl WalkFamily {
    /// Number of base steps m.
    pub fn m(&self) -> usize {
        self.base_steps.len()
    }

    pub fn cycles(&self) -> usize {
        self.cycles
    }

    pub fn base_steps(&self) -> &[QuantumStep] {
        &self.base_steps
    }

    /// The m+1 walks; the last is the sequenced one.
    pub fn walks(&self) -> &[Walk] {
        &self.walks
    }

    /// The same steps with a different cycle count.
    pub fn with_cycles(&self, n: usize) -> Result<WalkFamily> {
        build_family(&self.base_steps, n)
    }

    pub fn analyze(&self, o: &Observable, omega: f64) -> FamilyAnalysis {
        FamilyAnalysis {
            walks: self.walks.iter().map(|w| analyze(o, w, omega)).collect(),
        }
    }

    pub fn payoffs(&self, o: &Observable, home: &CoinDensity) -> Vec<f64> {
        self.walks.iter().map(|w| payoff(o, w, home)).collect()
    }
}

/// One analysis per walk of a family.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyAnalysis {
    pub walks: Vec<CoinObservableAnalysis>,
}

impl FamilyAnalysis {
    pub fn labels(&self, home: &CoinDensity, tie_tol: f64) -> Vec<Outcome> {
        self.labels_for_vector(&home.qubit_vector(), tie_tol)
    }

    pub fn labels_for_vector(&self, s: &QubitVector, tie_tol: f64) -> Vec<Outcome> {
        self.walks
            .iter()
            .map(|a| a.classify_vector(s, tie_tol))
            .collect()
    }

    pub fn payoffs(&self, home: &CoinDensity) -> Vec<f64> {
        self.walks.iter().map(|a| a.payoff(home)).collect()
    }

    /// Each walk's classification as a half-space of the Bloch ball.
    pub fn caps(&self) -> Vec<CapConstraint> {
        let last = self.walks.len() - 1;
        self.walks
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let sense = if i == last {
                    CapSense::Above
                } else {
                    CapSense::Below
                };
                match a.omega_cap {
                    Some(cap) => CapConstraint {
                        walk_index: i + 1,
                        normal: a.axis(),
                        omega: cap,
                        sense,
                    },
                    None => {
                        // A constant payoff either satisfies the constraint everywhere or nowhere.
                        let constant = a.classify_vector(&QubitVector::default(), 0.0);
                        let holds = match sense {
                            CapSense::Below => constant == Outcome::Lose,
                            CapSense::Above => constant == Outcome::Win,
                        };
                        let omega = match (sense, holds) {
                            (CapSense::Below, true) | (CapSense::Above, false) => f64::INFINITY,
                            _ => f64::NEG_INFINITY,
                        };
                        CapConstraint {
                            walk_index: i + 1,
                            normal: QubitVector::default(),
                            omega,
                            sense,
                        }
                    }
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapSense {
    /// normal·S < Ω (the walk loses)
    Below,
    /// normal·S > Ω (the walk wins)
    Above,
}

/// The half-space {S : normal·S < Ω} or {S : normal·S > Ω}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapConstraint {
    pub walk_index: usize,
    pub normal: QubitVector,
    pub omega: f64,
    pub sense: CapSense,
}

impl CapConstraint {
    pub fn contains(&self, s: &QubitVector) -> bool {
        let t = self.normal.dot(s);
        match self.sense {
            CapSense::Below => t < self.omega,
            CapSense::Above => t > self.omega,
        }
    }
}

/// Header `walk_index,nx,ny,nz,Omega,sense`.
pub fn caps_csv(caps: &[CapConstraint]) -> String {
    let mut out = String::from("walk_index,nx,ny,nz,Omega,sense\n");
    for c in caps {
        let sense = match c.sense {
            CapSense::Below => "lt",
            CapSense::Above => "gt",
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{sense}",
            c.walk_index,
            sig12(c.normal.x),
            sig12(c.normal.y),
            sig12(c.normal.z),
            sig12(c.omega)
        );
    }
    out
}

/// Lose on every homogeneous walk and Win on the sequenced one.
pub fn is_parrondo(labels: &[Outcome]) -> bool {
    match labels.split_last() {
        Some((last, rest)) if !rest.is_empty() => {
            *last == Outcome::Win && rest.iter().all(|l| *l == Outcome::Lose)
        }
        _ => false,
    }
}

/// Labels as a compact string such as `LLW`.
pub fn label_string(labels: &[Outcome]) -> String {
    labels.iter().map(|l| l.letter()).collect()
}

pub fn label_vector(
    fam: &WalkFamily,
    o: &Observable,
    omega: f64,
    home: &CoinDensity,
    tie_tol: f64,
) -> Vec<Outcome> {
    fam.analyze(o, omega).labels(home, tie_tol)
}

pub fn parrondo_test(
    fam: &WalkFamily,
    o: &Observable,
    omega: f64,
    home: &CoinDensity,
    tie_tol: f64,
) -> bool {
    is_parrondo(&label_vector(fam, o, omega, home, tie_tol))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionNode {
    pub theta: f64,
    pub phi: f64,
    pub labels: Vec<Outcome>,
    pub parrondo: bool,
}

/// Classification of the Bloch-sphere nodes θ_j = πj/(n_theta-1), φ_k = 2πk/n_phi.
/// Nodes are stored θ-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionMap {
    pub n_theta: usize,
    pub n_phi: usize,
    pub nodes: Vec<RegionNode>,
}

pub fn grid_angles(n_theta: usize, n_phi: usize, j: usize, k: usize) -> BlochAngles {
    BlochAngles::wrapped(
        PI * j as f64 / (n_theta - 1) as f64,
        2.0 * PI * k as f64 / n_phi as f64,
    )
}

pub fn region_map(
    fam: &WalkFamily,
    o: &Observable,
    omega: f64,
    grid: (usize, usize),
    tie_tol: f64,
) -> Result<RegionMap> {
    region_map_from_analysis(&fam.analyze(o, omega), grid, tie_tol)
}

pub fn region_map_from_analysis(
    analysis: &FamilyAnalysis,
    (n_theta, n_phi): (usize, usize),
    tie_tol: f64,
) -> Result<RegionMap> {
    if n_theta < 2 || n_phi < 2 {
        return Err(Error::GridTooSmall(n_theta, n_phi));
    }
    let node = |idx: usize| {
        let (j, k) = (idx / n_phi, idx % n_phi);
        // Node angles are reported as laid out on the grid; the state uses the wrapped form.
        let theta = PI * j as f64 / (n_theta - 1) as f64;
        let phi = 2.0 * PI * k as f64 / n_phi as f64;
        let s = CoinState::from_bloch(BlochAngles::wrapped(theta, phi)).qubit_vector();
        let labels = analysis.labels_for_vector(&s, tie_tol);
        let parrondo = is_parrondo(&labels);
        RegionNode {
            theta,
            phi,
            labels,
            parrondo,
        }
    };
    let count = n_theta * n_phi;
    #[cfg(feature = "parallel")]
    let nodes = (0..count).into_par_iter().map(node).collect();
    #[cfg(not(feature = "parallel"))]
    let nodes = (0..count).map(node).collect();
    Ok(RegionMap {
        n_theta,
        n_phi,
        nodes,
    })
}

impl RegionMap {
    pub fn node(&self, j: usize, k: usize) -> &RegionNode {
        &self.nodes[j * self.n_phi + k]
    }

    /// Grid indices of the node nearest to the given angles.
    pub fn nearest(&self, angles: BlochAngles) -> (usize, usize) {
        let j = (angles.theta() / PI * (self.n_theta - 1) as f64).round() as usize;
        let k = (angles.phi() / (2.0 * PI) * self.n_phi as f64).round() as usize % self.n_phi;
        (j.min(self.n_theta - 1), k)
    }

    pub fn node_for(&self, s: &CoinState) -> &RegionNode {
        let (j, k) = self.nearest(s.bloch_angles());
        self.node(j, k)
    }

    /// Distinct label vectors with their node counts, sorted by label string.
    pub fn region_counts(&self) -> Vec<(String, usize)> {
        let mut counts = std::collections::BTreeMap::new();
        for n in &self.nodes {
            *counts.entry(label_string(&n.labels)).or_insert(0) += 1;
        }
        counts.into_iter().collect()
    }

    pub fn parrondo_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.parrondo).count()
    }

    /// Header `theta,phi,label_w1,...,parrondo`.
    pub fn csv(&self) -> String {
        let walks = self.nodes.first().map_or(0, |n| n.labels.len());
        let mut out = String::from("theta,phi");
        for i in 1..=walks {
            let _ = write!(out, ",label_w{i}");
        }
        out.push_str(",parrondo\n");
        for n in &self.nodes {
            let _ = write!(out, "{},{}", sig12(n.theta), sig12(n.phi));
            for l in &n.labels {
                let _ = write!(out, ",{}", l.letter());
            }
            let _ = writeln!(out, ",{}", u8::from(n.parrondo));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PersistenceRow {
    pub n: usize,
    pub payoffs: Vec<f64>,
    pub labels: Vec<Outcome>,
    pub parrondo: bool,
    pub o_matrices: Vec<Mat2>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PersistenceScan {
    pub rows: Vec<PersistenceRow>,
    /// Parrondo at the first n where it holds and at every later n in the range.
    pub persistent: bool,
    pub onset: Option<usize>,
}

impl PersistenceScan {
    /// ‖[ô_i(n), ô_i(n')]‖ for consecutive scanned n, per walk.
    pub fn commutator_norms(&self) -> Vec<(usize, usize, Vec<f64>)> {
        self.rows
            .windows(2)
            .map(|w| {
                let norms = w[0]
                    .o_matrices
                    .iter()
                    .zip(&w[1].o_matrices)
                    .map(|(a, b)| a.commutator(b).norm())
                    .collect();
                (w[0].n, w[1].n, norms)
            })
            .collect()
    }

    /// Header `n,payoff_w1,...,parrondo`.
    pub fn csv(&self) -> String {
        let walks = self.rows.first().map_or(0, |r| r.payoffs.len());
        let mut out = String::from("n");
        for i in 1..=walks {
            let _ = write!(out, ",payoff_w{i}");
        }
        out.push_str(",parrondo\n");
        for r in &self.rows {
            let _ = write!(out, "{}", r.n);
            for p in &r.payoffs {
                let _ = write!(out, ",{}", sig12(*p));
            }
            let _ = writeln!(out, ",{}", u8::from(r.parrondo));
        }
        out
    }
}

pub fn persistence_scan(
    steps: &[QuantumStep],
    o: &Observable,
    omega: f64,
    home: &CoinDensity,
    n_range: RangeInclusive<usize>,
    tie_tol: f64,
) -> Result<PersistenceScan> {
    if n_range.is_empty() || *n_range.start() == 0 {
        return Err(Error::EmptyRange);
    }
    let row = |n: usize| -> Result<PersistenceRow> {
        let fam = build_family(steps, n)?;
        let analysis = fam.analyze(o, omega);
        let labels = analysis.labels(home, tie_tol);
        Ok(PersistenceRow {
            n,
            payoffs: fam.payoffs(o, home),
            parrondo: is_parrondo(&labels),
            labels,
            o_matrices: analysis.walks.iter().map(|a| a.o_matrix).collect(),
        })
    };
    let ns: Vec<usize> = n_range.collect();
    #[cfg(feature = "parallel")]
    let rows = ns.into_par_iter().map(row).collect::<Result<Vec<_>>>()?;
    #[cfg(not(feature = "parallel"))]
    let rows = ns.into_iter().map(row).collect::<Result<Vec<_>>>()?;
    let onset = rows.iter().position(|r| r.parrondo);
    let persistent = onset.is_some_and(|i| rows[i..].iter().all(|r| r.parrondo));
    Ok(PersistenceScan {
        onset: onset.map(|i| rows[i].n),
        rows,
        persistent,
    })
}

/// Inputs of the daisy-chain construction: target state w, intermediate
/// coin states c_1 … c_{m-2} and the strides (p_i, q_i).
#[derive(Debug, Clone, PartialEq)]
pub struct DesignSpec {
    pub target: CoinState,
    pub intermediates: Vec<CoinState>,
    pub strides: Vec<(i64, i64)>,
}

/// One violated stride inequality; indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstraintViolation {
    ForwardP { i: usize, p: i64 },
    ForwardQ { i: usize, q: i64 },
    FinalPTooSmall { p_m: i64, bound: i64 },
    FinalQTooLarge { q_m: i64, bound: i64 },
    FinalQNotNegative { q_m: i64 },
    FinalUnbalanced { p_m: i64, q_m: i64 },
}

impl fmt::Display for ConstraintViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintViolation::ForwardP { i, p } => {
                write!(f, "p_i < 0 for i < m fails at p_{i} = {p}")
            }
            ConstraintViolation::ForwardQ { i, q } => {
                write!(f, "q_i < 0 for i < m fails at q_{i} = {q}")
            }
            ConstraintViolation::FinalPTooSmall { p_m, bound } => {
                write!(
                    f,
                    "p_m > -sum(p_i, i < m) fails: p_m = {p_m}, -sum = {bound}"
                )
            }
            ConstraintViolation::FinalQTooLarge { q_m, bound } => {
                write!(f, "q_m < sum(p_i, i < m) fails: q_m = {q_m}, sum = {bound}")
            }
            ConstraintViolation::FinalQNotNegative { q_m } => {
                write!(f, "q_m < 0 fails: q_m = {q_m}")
            }
            ConstraintViolation::FinalUnbalanced { p_m, q_m } => {
                write!(f, "p_m < -q_m fails: p_m = {p_m}, q_m = {q_m}")
            }
        }
    }
}

impl DesignSpec {
    pub fn m(&self) -> usize {
        self.strides.len()
    }

    /// Every violated inequality, in a fixed order.
    pub fn violations(&self) -> Vec<ConstraintViolation> {
        let mut v = Vec::new();
        let Some((&(p_m, q_m), rest)) = self.strides.split_last() else {
            return v;
        };
        for (i, &(p, q)) in rest.iter().enumerate() {
            if p >= 0 {
                v.push(ConstraintViolation::ForwardP { i: i + 1, p });
            }
            if q >= 0 {
                v.push(ConstraintViolation::ForwardQ { i: i + 1, q });
            }
        }
        let sum_p: i64 = rest.iter().map(|s| s.0).sum();
        if p_m <= -sum_p {
            v.push(ConstraintViolation::FinalPTooSmall { p_m, bound: -sum_p });
        }
        if q_m >= sum_p {
            v.push(ConstraintViolation::FinalQTooLarge { q_m, bound: sum_p });
        }
        if q_m >= 0 {
            v.push(ConstraintViolation::FinalQNotNegative { q_m });
        }
        if p_m >= -q_m {
            v.push(ConstraintViolation::FinalUnbalanced { p_m, q_m });
        }
        v
    }
}

/// T_1 = T(p_1,q_1;c_1,w), T_i = T(p_i,q_i;c_i,c_{i-1}), with c_{m-1} = w⊥,
/// and T_m = T(p_m,q_m;w,w⊥).
pub fn design_daisy_chain(spec: &DesignSpec) -> Result<Vec<GeneralStep>> {
    let m = spec.m();
    if m == 0 {
        return Err(Error::EmptyWalk);
    }
    if m % 2 == 1 {
        return Err(Error::OddStepCount(m));
    }
    if spec.intermediates.len() != m - 2 {
        return Err(Error::IntermediateCount {
            m,
            expected: m - 2,
            got: spec.intermediates.len(),
        });
    }
    let v = spec.violations();
    if !v.is_empty() {
        return Err(Error::Constraints(v));
    }
    let w = spec.target;
    let mut chain = vec![w];
    chain.extend(spec.intermediates.iter().copied());
    chain.push(w.perp());
    chain.push(w);
    Ok(spec
        .strides
        .iter()
        .enumerate()
        .map(|(i, &(p, q))| GeneralStep::new(p, q, chain[i + 1], chain[i]))
        .collect())
}

/// A reduced fraction num/den with den > 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rational {
    pub num: i64,
    pub den: i64,
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Option<Rational> {
        if den == 0 {
            return None;
        }
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()).max(1) as i64;
        let s = den.signum();
        Some(Rational {
            num: s * num / g,
            den: s * den / g,
        })
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The Parrondo cap of a designed family: states with |⟨w|s⟩|² > Q.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParrondoCap {
    pub target: CoinState,
    pub q: Rational,
    /// Latitude bound arccos(2Q-1) measured from w.
    pub nu_max: f64,
    pub sum_p: i64,
    pub sum_q: i64,
}

impl ParrondoCap {
    /// The sequenced walk's μ-payoff for `home`, n(Σp·x + Σq·(1-x)) with x = ⟨w|ρ|w⟩.
    pub fn final_payoff(&self, home: &CoinDensity, n: usize) -> f64 {
        let x = (self.target.projector() * home.matrix()).trace().re;
        n as f64 * (self.sum_p as f64 * x + self.sum_q as f64 * (1.0 - x))
    }

    pub fn contains_latitude(&self, nu: f64) -> bool {
        nu < self.nu_max
    }
}

/// Q = Σq / Σ(q - p) and ν_max = arccos(2Q - 1) for steps from [`design_daisy_chain`].
pub fn parrondo_cap(steps: &[GeneralStep]) -> Result<ParrondoCap> {
    let last = steps.last().ok_or(Error::EmptyWalk)?;
    let sum_p: i64 = steps.iter().map(|s| s.p).sum();
    let sum_q: i64 = steps.iter().map(|s| s.q).sum();
    let q = Rational::new(sum_q, sum_q - sum_p).ok_or(Error::OutOfRange {
        what: "Σ(q - p)",
        value: 0.0,
        range: "nonzero",
    })?;
    let nu_max = (2.0 * q.value() - 1.0).clamp(-1.0, 1.0).acos();
    Ok(ParrondoCap {
        target: last.coin_out,
        q,
        nu_max,
        sum_p,
        sum_q,
    })
}

/// The pure state cos(ν/2)|w⟩ + e^{iφ} sin(ν/2)|w⊥⟩.
pub fn state_at_latitude(w: &CoinState, nu: f64, phi: f64) -> CoinState {
    let (s, c) = (0.5 * nu).sin_cos();
    let a = w.amplitudes();
    let b = w.perp().amplitudes();
    let e = num_complex::Complex64::from_polar(s, phi);
    CoinState::normalized(a[0] * c + b[0] * e, a[1] * c + b[1] * e).expect("unit vector")
}

/// T_A = T(m,m;c1,s1) and T_B = T(-m,-m;c2,s2).
pub fn zero_projector_steps(
    m: i64,
    (c1, s1): (CoinState, CoinState),
    (c2, s2): (CoinState, CoinState),
) -> [GeneralStep; 2] {
    [
        GeneralStep::new(m, m, c1, s1),
        GeneralStep::new(-m, -m, c2, s2),
    ]
}

/// (W_A, W_B, W_AB, W_BA) = (T_A^{2n}, T_B^{2n}, [T_B T_A]^n, [T_A T_B]^n).
pub fn zero_projector_walks(steps: &[GeneralStep; 2], n: usize) -> Result<[Walk; 4]> {
    let [a, b] = *steps;
    Ok([
        Walk::cycle(&[a], 2 * n)?,
        Walk::cycle(&[b], 2 * n)?,
        Walk::cycle(&[a, b], n)?,
        Walk::cycle(&[b, a], n)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::payoff::DEFAULT_TIE_TOL;
    use crate::presets;

    fn st(s: &str) -> CoinState {
        s.parse().unwrap()
    }

    #[test]
    fn family_shapes() {
        let fam = presets::two_step_family(3).unwrap();
        assert_eq!(fam.walks().len(), 3);
        assert!(fam.walks().iter().all(|w| w.step_count() == 6));
        let four = build_family(&presets::designed_four_step_steps(), 1).unwrap();
        assert_eq!(four.walks().len(), 5);
        let single = build_family(&[QuantumStep::general(1, -1, st("f"), st("0"))], 2).unwrap();
        assert_eq!(
            single.walks()[0].run(st("h")),
            single.walks()[1].run(st("h"))
        );
        assert!(build_family(&[], 2).is_err());
    }

    #[test]
    fn label_examples() {
        let fam = presets::two_step_family(3).unwrap();
        let labels = label_vector(
            &fam,
            &Observable::mu(),
            0.0,
            &presets::psi1().into(),
            DEFAULT_TIE_TOL,
        );
        assert_eq!(label_string(&labels), "LLW");
        let three = presets::three_step_family(2).unwrap();
        let labels = label_vector(
            &three,
            &Observable::mu(),
            0.0,
            &presets::phi_state().into(),
            DEFAULT_TIE_TOL,
        );
        assert_eq!(label_string(&labels), "LLLW");
        assert!(parrondo_test(
            &fam,
            &Observable::delta(),
            0.0,
            &presets::rho12(),
            DEFAULT_TIE_TOL
        ));
        assert!(parrondo_test(
            &fam,
            &Observable::mu(),
            0.0,
            &presets::psi2().into(),
            DEFAULT_TIE_TOL
        ));
        let last = analyze(&Observable::mu(), &fam.walks()[2], 0.0);
        assert!(!parrondo_test(
            &fam,
            &Observable::mu(),
            0.0,
            &last.v_min.into(),
            DEFAULT_TIE_TOL
        ));
    }

    #[test]
    fn regions() {
        let fam = presets::two_step_family(3).unwrap();
        let map = region_map(&fam, &Observable::mu(), 0.0, (181, 360), DEFAULT_TIE_TOL).unwrap();
        assert!(map.node_for(&presets::psi1()).parrondo);
        assert!(map.node_for(&presets::psi2()).parrondo);
        let tie_free = map
            .region_counts()
            .into_iter()
            .filter(|(l, _)| !l.contains('T'))
            .count();
        assert_eq!(tie_free, 8);
        let tiny = region_map(&fam, &Observable::mu(), 0.0, (2, 2), DEFAULT_TIE_TOL).unwrap();
        assert_eq!(tiny.csv().lines().count(), 5);
        assert!(region_map(&fam, &Observable::mu(), 0.0, (1, 4), DEFAULT_TIE_TOL).is_err());
        let single = build_family(&[QuantumStep::general(1, 1, st("0"), st("0"))], 1).unwrap();
        let lose = region_map(&single, &Observable::mu(), 5.0, (5, 8), DEFAULT_TIE_TOL).unwrap();
        assert!(lose
            .nodes
            .iter()
            .all(|n| n.labels.iter().all(|l| *l == Outcome::Lose)));
    }

    #[test]
    fn caps_agree_with_labels() {
        let fam = presets::two_step_family(3).unwrap();
        let a = fam.analyze(&Observable::mu(), 0.0);
        let caps = a.caps();
        for s in [presets::psi1(), presets::psi2(), st("h"), st("d"), st("1")] {
            let v = s.qubit_vector();
            let in_caps = caps.iter().all(|c| c.contains(&v));
            assert_eq!(in_caps, is_parrondo(&a.labels(&s.into(), 0.0)));
        }
        assert!(caps_csv(&caps).starts_with("walk_index,nx,ny,nz,Omega,sense\n1,"));
    }

    #[test]
    fn persistence_examples() {
        let steps = presets::two_step_steps();
        let scan = persistence_scan(
            &steps,
            &Observable::mu(),
            0.0,
            &presets::psi1().into(),
            1..=19,
            DEFAULT_TIE_TOL,
        )
        .unwrap();
        // Equatorial homes sit on the tie circle of the first and sequenced walks for n <= 2.
        assert!(scan.rows[0].payoffs[0].abs() < 1e-12 && scan.rows[0].payoffs[2].abs() < 1e-12);
        assert!(scan.rows[1].payoffs[2].abs() < 1e-12);
        assert!(scan.rows[2..]
            .iter()
            .all(|r| r.payoffs[2] > 0.0 && r.payoffs[0] < 0.0 && r.payoffs[1] < 0.0));
        assert!(scan.persistent);
        assert_eq!(scan.onset, Some(3));
        assert_eq!(scan.commutator_norms().len(), 18);
        let designed = presets::designed_two_step_steps();
        let scan = persistence_scan(
            &designed,
            &Observable::mu(),
            0.0,
            &st("h").into(),
            1..=4,
            DEFAULT_TIE_TOL,
        )
        .unwrap();
        for r in &scan.rows {
            let n = r.n as f64;
            assert!((r.payoffs[0] + 2.0 * n).abs() < 1e-9);
            assert!((r.payoffs[1] + n).abs() < 1e-9);
            assert!((r.payoffs[2] - 2.0 * n).abs() < 1e-9);
        }
        let one = persistence_scan(
            &steps,
            &Observable::mu(),
            0.0,
            &presets::psi1().into(),
            3..=3,
            DEFAULT_TIE_TOL,
        )
        .unwrap();
        assert_eq!(one.csv().lines().count(), 2);
        assert!(persistence_scan(
            &steps,
            &Observable::mu(),
            0.0,
            &presets::psi1().into(),
            0..=0,
            DEFAULT_TIE_TOL
        )
        .is_err());
    }

    #[test]
    fn zero_projector_family() {
        let steps = zero_projector_steps(2, (st("f"), st("d")), (st("a"), st("h")));
        let fam = build_family(&steps.map(QuantumStep::from), 3).unwrap();
        let o = Observable::zero_projector();
        for home in [
            st("0").into(),
            st("v").into(),
            CoinDensity::new(0.3, st("d")).unwrap(),
        ] {
            let walks = zero_projector_walks(&steps, 3).unwrap();
            let p: Vec<f64> = walks.iter().map(|w| payoff(&o, w, &home)).collect();
            for (got, want) in p.iter().zip([0.0, 0.0, 1.0, 1.0]) {
                assert!((got - want).abs() < 1e-12);
            }
            assert!(parrondo_test(&fam, &o, 0.5, &home, DEFAULT_TIE_TOL));
        }
    }

    #[test]
    fn design_examples() {
        let two = design_daisy_chain(&presets::designed_two_step_spec()).unwrap();
        assert_eq!(
            two,
            presets::designed_two_step_steps()
                .iter()
                .map(|s| *s.as_general().unwrap())
                .collect::<Vec<_>>()
        );
        let four = design_daisy_chain(&presets::designed_four_step_spec()).unwrap();
        assert_eq!(
            four,
            presets::designed_four_step_steps()
                .iter()
                .map(|s| *s.as_general().unwrap())
                .collect::<Vec<_>>()
        );
        let bad = DesignSpec {
            target: st("h"),
            intermediates: vec![],
            strides: vec![(-1, -1), (1, -4)],
        };
        match design_daisy_chain(&bad) {
            Err(Error::Constraints(v)) => assert_eq!(
                v,
                vec![ConstraintViolation::FinalPTooSmall { p_m: 1, bound: 1 }]
            ),
            other => panic!("{other:?}"),
        }
        let odd = DesignSpec {
            target: st("h"),
            intermediates: vec![st("d")],
            strides: vec![(-1, -1), (-1, -1), (4, -5)],
        };
        assert!(matches!(
            design_daisy_chain(&odd),
            Err(Error::OddStepCount(3))
        ));
    }

    #[test]
    fn cap_examples() {
        let two =
            parrondo_cap(&design_daisy_chain(&presets::designed_two_step_spec()).unwrap()).unwrap();
        assert_eq!(two.q, Rational { num: 5, den: 7 });
        assert!((two.nu_max - (3.0f64 / 7.0).acos()).abs() < 1e-15);
        assert!((two.nu_max - 1.1279).abs() < 1e-4);
        let four = parrondo_cap(&design_daisy_chain(&presets::designed_four_step_spec()).unwrap())
            .unwrap();
        assert_eq!(four.q, Rational { num: 8, den: 9 });
        let x: f64 = 0.95;
        let s = state_at_latitude(&st("0"), 2.0 * x.sqrt().acos(), 0.7);
        assert!((four.final_payoff(&s.into(), 2) - 2.0 * (9.0 * x - 8.0)).abs() < 1e-12);
    }

    #[test]
    fn rational_reduces() {
        assert_eq!(
            Rational::new(-10, -14).unwrap(),
            Rational { num: 5, den: 7 }
        );
        assert_eq!(Rational::new(3, -6).unwrap().to_string(), "-1/2");
        assert!(Rational::new(1, 0).is_none());
    }
}
