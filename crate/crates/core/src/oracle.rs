//! Seeded randomized property suites. Each suite draws its own cases from one
//! ChaCha8 stream, so a seed fixes the whole report.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coin::{BlochAngles, CoinDensity, CoinState};
use crate::composite::{CompositeState, TI_TOL};
use crate::observables::Observable;
use crate::parrondo::{is_parrondo, WalkFamily};
use crate::payoff::{analyze, payoff, payoff_analytic};
use crate::steps::{compose_daisy_chain, ConventionalStep, GeneralStep, QuantumStep, SplitStep};
use crate::walks::Walk;

pub const DEFAULT_SEED: u64 = 20_240_611;
/// Agreement tolerance for every suite.
pub const ORACLE_TOL: f64 = 1e-9;

/// Uniform on the Bloch sphere, with a random global phase.
pub fn random_coin_state(rng: &mut impl Rng) -> CoinState {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let phi = rng.gen_range(0.0..2.0 * PI);
    let s = CoinState::from_bloch(BlochAngles::new(z.acos(), phi).unwrap());
    s.with_phase(rng.gen_range(0.0..2.0 * PI))
}

pub fn random_density(rng: &mut impl Rng) -> CoinDensity {
    CoinDensity::new(rng.gen_range(0.0..=1.0), random_coin_state(rng)).unwrap()
}

pub fn random_general_step(rng: &mut impl Rng) -> GeneralStep {
    GeneralStep::new(
        rng.gen_range(-3..=3),
        rng.gen_range(-3..=3),
        random_coin_state(rng),
        random_coin_state(rng),
    )
}

pub fn random_step(rng: &mut impl Rng) -> QuantumStep {
    match rng.gen_range(0..4) {
        0 => QuantumStep::Conventional(
            ConventionalStep::new(
                rng.gen_range(0.0..2.0 * PI),
                rng.gen_range(0.0..=PI / 2.0),
                rng.gen_range(0.0..2.0 * PI),
            )
            .unwrap(),
        ),
        1 => QuantumStep::Split(
            SplitStep::new(
                rng.gen_range(0.0..=1.0),
                rng.gen_range(0.0..2.0 * PI),
                random_coin_state(rng),
            )
            .unwrap(),
        ),
        _ => random_general_step(rng).into(),
    }
}

/// 1..=max_steps random generalized steps.
pub fn random_general_walk(rng: &mut impl Rng, max_steps: usize) -> Walk {
    let k = rng.gen_range(1..=max_steps);
    Walk::from_steps((0..k).map(|_| random_general_step(rng))).unwrap()
}

fn random_observable(rng: &mut impl Rng) -> Observable {
    match rng.gen_range(0..3) {
        0 => Observable::mu(),
        1 => Observable::delta(),
        _ => Observable::zero_projector(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub trials: usize,
    pub failures: usize,
    /// Largest deviation seen; 0 for boolean suites.
    pub max_error: f64,
    pub first_failure: Option<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport {
            name,
            trials: 0,
            failures: 0,
            max_error: 0.0,
            first_failure: None,
        }
    }

    fn record(&mut self, err: f64, ok: bool, describe: impl FnOnce() -> String) {
        self.trials += 1;
        if err.is_finite() {
            self.max_error = self.max_error.max(err);
        }
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }

    fn check(&mut self, err: f64, describe: impl FnOnce() -> String) {
        self.record(err, err <= ORACLE_TOL, describe);
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<24} {} trials={} failures={} max_err={:.3e}",
            self.name,
            if self.passed() { "PASS" } else { "FAIL" },
            self.trials,
            self.failures,
            self.max_error
        )?;
        if let Some(msg) = &self.first_failure {
            write!(f, " first: {msg}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub seed: u64,
    pub trials: usize,
    pub suites: Vec<SuiteReport>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "oracle seed={} trials={}", self.seed, self.trials)?;
        for s in &self.suites {
            writeln!(f, "{s}")?;
        }
        write!(
            f,
            "{}",
            if self.passed() {
                "ALL PASS"
            } else {
                "FAILURES"
            }
        )
    }
}

/// Runs every suite with `trials` cases each.
pub fn run_all(seed: u64, trials: usize) -> OracleReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let suites = vec![
        unitarity(&mut rng, trials),
        translational_invariance(&mut rng, trials),
        step_identities(&mut rng, trials),
        analytic_payoff(&mut rng, trials),
        payoff_extremes(&mut rng, trials),
        mean_complement(&mut rng, trials),
        convexity(&mut rng, trials),
        split_decomposition(&mut rng, trials),
    ];
    OracleReport {
        seed,
        trials,
        suites,
    }
}

/// Walk outputs keep unit norm and orthogonal homes stay orthogonal.
pub fn unitarity(rng: &mut impl Rng, trials: usize) -> SuiteReport {
    let mut r = SuiteReport::new("unitarity");
    for _ in 0..trials {
        let k = rng.gen_range(1..=6);
        let w = Walk::from_steps((0..k).map(|_| random_step(rng))).unwrap();
        let s = random_coin_state(rng);
        let a = w.run(s);
        let b = w.run(s.perp());
        let err = (a.norm_sqr() - 1.0)
            .abs()
            .max((b.norm_sqr() - 1.0).abs())
            .max(a.inner(&b).norm());
        r.check(err, || format!("walk of {k} steps, norm error {err:.3e}"));
    }
    r
}

/// Outputs of localized homes are orthogonal to all their shifts.
pub fn translational_invariance(rng: &mut impl Rng, trials: usize) -> SuiteReport {
    let mut r = SuiteReport::new("translational-invariance");
    for _ in 0..trials {
        let k = rng.gen_range(1..=6);
        let w = Walk::from_steps((0..k).map(|_| random_step(rng))).unwrap();
        let out = w.run(random_coin_state(rng));
        let err = out.max_shift_overlap();
        r.record(err, out.is_translationally_invariant(TI_TOL), || {
            format!("max shift overlap {err:.3e}")
        });
    }
    r
}

fn max_amp_diff(a: &CompositeState, b: &CompositeState, phase: C64) -> f64 {
    let mut positions: Vec<i64> = a
        .iter()
        .map(|(m, _)| m)
        .chain(b.iter().map(|(m, _)| m))
        .collect();
    positions.sort_unstable();
    positions.dedup();
    positions
        .into_iter()
        .map(|m| {
            let (x, y) = (a.amplitude(m), b.amplitude(m));
            (y[0] - x[0] * phase)
                .norm()
                .max((y[1] - x[1] * phase).norm())
        })
        .fold(0.0, f64::max)
}

fn run_sequence(steps: &[GeneralStep], home: CoinState) -> CompositeState {
    steps
        .iter()
        .fold(CompositeState::localized(home, 0), |st, s| s.apply(&st))
}

/// Daisy-chain collapse, powers of a self-chained step, and even powers of a
/// perpendicular-chained step (phase included).
pub fn step_identities(rng: &mut impl Rng, trials: usize) -> SuiteReport {
    let mut r = SuiteReport::new("step-identities");
    for _ in 0..trials {
        // Chain with random phase slips between coin and next shift state.
        let k = rng.gen_range(2..=5);
        let mut chain = vec![random_general_step(rng)];
        for _ in 1..k {
            let prev = chain.last().unwrap().coin_out;
            let mut s = random_general_step(rng);
            s.shift_in = prev.with_phase(rng.gen_range(0.0..2.0 * PI));
            chain.push(s);
        }
        let single = compose_daisy_chain(&chain).unwrap();
        let mut err = 0.0f64;
        for home in [CoinState::ZERO, CoinState::ONE] {
            err = err.max(max_amp_diff(
                &run_sequence(&chain, home),
                &run_sequence(&[single], home),
                C64::from(1.0),
            ));
        }

        let u = random_coin_state(rng);
        let (p, q) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
        let n = rng.gen_range(1..=8);
        let t = GeneralStep::new(p, q, u, u);
        let tn = GeneralStep::new(n * p, n * q, u, u);
        let reps = vec![t; n as usize];
        for home in [CoinState::ZERO, CoinState::ONE] {
            err = err.max(max_amp_diff(
                &run_sequence(&reps, home),
                &run_sequence(&[tn], home),
                C64::from(1.0),
            ));
        }

        let half = rng.gen_range(1..=3i64);
        let t = GeneralStep::new(p, q, u.perp(), u);
        let target = GeneralStep::new(half * (p + q), half * (p + q), u, u);
        let sign = C64::from(if half % 2 == 0 { 1.0 } else { -1.0 });
        let reps = vec![t; 2 * half as usize];
        for home in [CoinState::ZERO, CoinState::ONE] {
            err = err.max(max_amp_diff(
                &run_sequence(&[target], home),
                &run_sequence(&reps, home),
                sign,
            ));
        }
        r.check(err, || {
            format!(
                "chain of {k}, power {n}, perpendicular power {}, error {err:.3e}",
                2 * half
            )
        });
    }
    r
}

/// Closed-form payoff from ô's eigen-data against the direct expectation.
pub fn analytic_payoff(rng: &mut impl Rng, trials: usize) -> SuiteReport {
    let mut r = SuiteReport::new("analytic-payoff");
    for _ in 0..trials {
        let w = random_general_walk(rng, 6);
        let o = random_observable(rng);
        let home = random_density(rng);
        let a = analyze(&o, &w, 0.0);
        let direct = payoff(&o, &w, &home);
        let analytic = payoff_analytic(&a, &home);
        let err = (direct - analytic).abs();
        r.check(err, || {
            format!("{o}: direct {direct} vs analytic {analytic}")
        });
    }
    r
}

/// Every payoff lies between the payoffs of v_min and v_max.
pub fn payoff_extremes(rng: &mut impl Rng, trials: usize) -> SuiteReport {
    let mut r = SuiteReport::new("payoff-extremes");
    for _ in 0..trials {
        let w = random_general_walk(rng, 6);
        let o = random_observable(rng);
        let a = analyze(&o, &w, 0.0);
        let hi = payoff(&o, &w, &a.v_max.into());
        let lo = payoff(&o, &w, &a.v_min.into());
        let p = payoff(&o, &w, &random_density(rng));
        let err = (p - hi).max(lo - p).max(0.0);
        r.check(err, || format!("{o}: payoff {p} outside [{lo}, {hi}]"));
    }
    r
}

/// payoff(μ, w, s⊥) = d - payoff(μ, w, s) for generalized-step walks.
pub fn mean_complement(rng: &mut impl Rng, trials: usize) -> SuiteReport {
    let mut r = SuiteReport::new("mean-complement");
    let mu = Observable::mu();
    for _ in 0..trials {
        let w = random_general_walk(rng, 6);
        let s = random_coin_state(rng);
        let lhs = payoff(&mu, &w, &s.perp().into());
        let rhs = w.displacement() as f64 - payoff(&mu, &w, &s.into());
        let err = (lhs - rhs).abs();
        r.check(err, || format!("d = {}: {lhs} vs {rhs}", w.displacement()));
    }
    r
}

fn convexity_family(rng: &mut impl Rng) -> (WalkFamily, Observable) {
    let fam = match rng.gen_range(0..4) {
        0 => crate::presets::two_step_family(rng.gen_range(3..=6)),
        1 => crate::presets::three_step_family(rng.gen_range(1..=3)),
        2 => crate::presets::designed_two_step_family(rng.gen_range(1..=3)),
        _ => crate::presets::designed_four_step_family(rng.gen_range(1..=2)),
    }
    .unwrap();
    let o = if rng.gen_bool(0.5) {
        Observable::mu()
    } else {
        Observable::delta()
    };
    (fam, o)
}

/// Mixtures of two Parrondo pure states are Parrondo, judged from direct payoffs.
pub fn convexity(rng: &mut impl Rng, trials: usize) -> SuiteReport {
    let mut r = SuiteReport::new("convexity");
    let mut done = 0;
    while done < trials {
        let (fam, o) = convexity_family(rng);
        let analysis = fam.analyze(&o, 0.0);
        let mut found = Vec::new();
        for _ in 0..20_000 {
            let s = random_coin_state(rng);
            if is_parrondo(&analysis.labels(&s.into(), 0.0)) {
                found.push(s);
                if found.len() == 2 {
                    break;
                }
            }
        }
        if found.len() < 2 {
            continue;
        }
        let lambda = rng.gen_range(0.0..=1.0);
        let rho =
            CoinDensity::from_mixture(&[(lambda, found[0]), (1.0 - lambda, found[1])]).unwrap();
        let pays = fam.payoffs(&o, &rho);
        let (last, rest) = pays.split_last().unwrap();
        let ok = *last > 0.0 && rest.iter().all(|p| *p < 0.0);
        r.record(0.0, ok, || {
            format!("{o}, mixture weight {lambda}: payoffs {pays:?}")
        });
        done += 1;
    }
    r
}

/// A split step acts like its two-step generalized decomposition.
pub fn split_decomposition(rng: &mut impl Rng, trials: usize) -> SuiteReport {
    let mut r = SuiteReport::new("split-decomposition");
    for _ in 0..trials {
        let s = SplitStep::new(
            rng.gen_range(0.0..=1.0),
            rng.gen_range(0.0..2.0 * PI),
            random_coin_state(rng),
        )
        .unwrap();
        let (a, b) = s.decompose();
        let home = random_coin_state(rng);
        let x = CompositeState::localized(home, rng.gen_range(-3..=3));
        let direct = s.apply(&x);
        let via = b.apply(&a.apply(&x));
        let err = max_amp_diff(&direct, &via, C64::from(1.0));
        r.check(err, || {
            format!("split step delta={}, error {err:.3e}", s.delta_frac())
        });
    }
    r
}
