//! Dense state-vector reference for small Clifford circuits.

use num_complex::Complex64;
use qnc_core::pauli::{Pauli, PauliFrame, QubitId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct State {
    pub n: usize,
    pub amps: Vec<Complex64>,
}

impl State {
    /// A random (almost surely generic) normalized state.
    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Self {
        let mut amps: Vec<Complex64> =
            (0..1 << n).map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        State { n, amps }
    }

    pub fn h(&mut self, q: usize) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let b = 1 << q;
        for i in 0..self.amps.len() {
            if i & b == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | b]);
                self.amps[i] = (a0 + a1) * s;
                self.amps[i | b] = (a0 - a1) * s;
            }
        }
    }

    pub fn s(&mut self, q: usize) {
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i >> q & 1 == 1 {
                *a *= Complex64::i();
            }
        }
    }

    pub fn cnot(&mut self, c: usize, t: usize) {
        for i in 0..self.amps.len() {
            if i >> c & 1 == 1 && i >> t & 1 == 0 {
                self.amps.swap(i, i | 1 << t);
            }
        }
    }

    pub fn pauli(&mut self, q: usize, p: Pauli) {
        if p.has_z() {
            for (i, a) in self.amps.iter_mut().enumerate() {
                if i >> q & 1 == 1 {
                    *a = -*a;
                }
            }
        }
        if p.has_x() {
            for i in 0..self.amps.len() {
                if i >> q & 1 == 0 {
                    self.amps.swap(i, i | 1 << q);
                }
            }
        }
    }

    /// `|⟨self|other⟩| = 1` within tolerance.
    pub fn equal_up_to_phase(&self, other: &State) -> bool {
        let overlap: Complex64 = self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum();
        (overlap.norm() - 1.0).abs() < 1e-9
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Gate {
    H(usize),
    S(usize),
    Cnot(usize, usize),
}

pub fn random_circuit<R: Rng>(n: usize, len: usize, rng: &mut R) -> Vec<Gate> {
    (0..len)
        .map(|_| match rng.random_range(0..3) {
            0 => Gate::H(rng.random_range(0..n)),
            1 => Gate::S(rng.random_range(0..n)),
            _ => {
                let c = rng.random_range(0..n);
                let t = (c + rng.random_range(1..n)) % n;
                Gate::Cnot(c, t)
            }
        })
        .collect()
}

fn q(i: usize) -> QubitId {
    QubitId::new(i).unwrap()
}

fn apply(state: &mut State, g: Gate) {
    match g {
        Gate::H(a) => state.h(a),
        Gate::S(a) => state.s(a),
        Gate::Cnot(c, t) => state.cnot(c, t),
    }
}

fn conjugate(frame: PauliFrame, g: Gate) -> PauliFrame {
    match g {
        Gate::H(a) => frame.conjugate_h(q(a)),
        Gate::S(a) => frame.conjugate_s(q(a)),
        Gate::Cnot(c, t) => frame.conjugate_cnot(q(c), q(t)).unwrap(),
    }
}

/// Runs `gates` on a random state twice, once with `pauli` on `qubit`
/// inserted before gate `at`, and checks the frame prediction.
pub fn frame_matches_dense(seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=6);
    let len = rng.random_range(1..=30);
    let gates = random_circuit(n, len, &mut rng);
    let at = rng.random_range(0..=len);
    let target = rng.random_range(0..n);
    let pauli = Pauli::NON_IDENTITY[rng.random_range(0..3)];

    let start = State::random(n, &mut rng);
    let mut ideal = start.clone();
    let mut noisy = start;
    let mut frame = PauliFrame::IDENTITY;
    for (i, &g) in gates.iter().enumerate() {
        if i == at {
            noisy.pauli(target, pauli);
            frame = PauliFrame::single(q(target), pauli);
        }
        apply(&mut ideal, g);
        apply(&mut noisy, g);
        if i >= at {
            frame = conjugate(frame, g);
        }
    }
    if at == len {
        noisy.pauli(target, pauli);
        frame = PauliFrame::single(q(target), pauli);
    }
    for i in 0..n {
        ideal.pauli(i, frame.get(q(i)));
    }
    ideal.equal_up_to_phase(&noisy)
}
