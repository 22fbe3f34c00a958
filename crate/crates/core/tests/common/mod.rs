//! Dense-matrix reference: every step is a full unitary on a finite position
//! window, built from the step's definition without the library's sparse code.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use qwalk::{CoinState, GeneralStep};

pub struct Dense {
    /// Positions -half..=half; index = 2*(m+half) + coin.
    pub half: i64,
}

impl Dense {
    pub fn new(half: i64) -> Self {
        Dense { half }
    }

    pub fn dim(&self) -> usize {
        2 * (2 * self.half as usize + 1)
    }

    fn idx(&self, m: i64, c: usize) -> usize {
        2 * (m + self.half) as usize + c
    }

    fn perp(v: [C64; 2]) -> [C64; 2] {
        [-v[1].conj(), v[0].conj()]
    }

    /// Σ_g |c;g+p⟩⟨s;g| + |c⊥;g+q⟩⟨s⊥;g| over the window (periodic wrap never reached).
    pub fn step(&self, t: &GeneralStep) -> DMatrix<C64> {
        let n = self.dim();
        let mut u = DMatrix::<C64>::zeros(n, n);
        let c = t.coin_out.amplitudes();
        let s = t.shift_in.amplitudes();
        let (cp, sp) = (Self::perp(c), Self::perp(s));
        let width = 2 * self.half + 1;
        for g in -self.half..=self.half {
            for (out, inp, d) in [(c, s, t.p), (cp, sp, t.q)] {
                let to = (g + d + self.half).rem_euclid(width) - self.half;
                for a in 0..2 {
                    for b in 0..2 {
                        u[(self.idx(to, a), self.idx(g, b))] += out[a] * inp[b].conj();
                    }
                }
            }
        }
        u
    }

    pub fn walk(&self, steps: &[GeneralStep]) -> DMatrix<C64> {
        steps
            .iter()
            .fold(DMatrix::identity(self.dim(), self.dim()), |acc, t| {
                self.step(t) * acc
            })
    }

    pub fn home(&self, s: &CoinState) -> DVector<C64> {
        let mut v = DVector::zeros(self.dim());
        let a = s.amplitudes();
        v[self.idx(0, 0)] = a[0];
        v[self.idx(0, 1)] = a[1];
        v
    }

    /// diag(f(m)) ⊗ I₂.
    pub fn position_observable(&self, f: impl Fn(i64) -> f64) -> DMatrix<C64> {
        let n = self.dim();
        let mut o = DMatrix::zeros(n, n);
        for m in -self.half..=self.half {
            for c in 0..2 {
                o[(self.idx(m, c), self.idx(m, c))] = C64::from(f(m));
            }
        }
        o
    }

    /// ô_ij = ⟨i;0| W† O W |j;0⟩.
    pub fn reduced(&self, steps: &[GeneralStep], o: &DMatrix<C64>) -> [[C64; 2]; 2] {
        let w = self.walk(steps);
        let m = w.adjoint() * o * &w;
        let (i0, i1) = (self.idx(0, 0), self.idx(0, 1));
        [[m[(i0, i0)], m[(i0, i1)]], [m[(i1, i0)], m[(i1, i1)]]]
    }

    /// Tr(ρ W† O W) for the home density ρ at the origin.
    pub fn payoff(&self, steps: &[GeneralStep], o: &DMatrix<C64>, rho: [[C64; 2]; 2]) -> f64 {
        let r = self.reduced(steps, o);
        let mut t = C64::from(0.0);
        for a in 0..2 {
            for b in 0..2 {
                t += rho[a][b] * r[b][a];
            }
        }
        t.re
    }

    /// Amplitude at (m, coin) of W|home⟩.
    pub fn run(&self, steps: &[GeneralStep], home: &CoinState) -> Vec<(i64, [C64; 2])> {
        let v = self.walk(steps) * self.home(home);
        (-self.half..=self.half)
            .map(|m| (m, [v[self.idx(m, 0)], v[self.idx(m, 1)]]))
            .filter(|(_, a)| a[0].norm_sqr() + a[1].norm_sqr() > 1e-30)
            .collect()
    }
}

/// Window half-width that no walk of these steps can leave.
pub fn reach(steps: &[GeneralStep]) -> i64 {
    steps.iter().map(|t| t.p.abs().max(t.q.abs())).sum::<i64>() + 1
}

pub fn density_matrix(r: f64, s: &CoinState) -> [[C64; 2]; 2] {
    let a = s.amplitudes();
    let b = [-a[1].conj(), a[0].conj()];
    let mut m = [[C64::from(0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = a[i] * a[j].conj() * r + b[i] * b[j].conj() * (1.0 - r);
        }
    }
    m
}
