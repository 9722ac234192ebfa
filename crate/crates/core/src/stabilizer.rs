//! Signed stabilizer tableau (Aaronson–Gottesman layout) for the reference
//! run of a circuit.
//!
//! The executor never simulates the noisy state directly. It tracks a Pauli
//! frame on top of one fixed reference run in which every random
//! measurement returns `+1`. This module produces that reference run: for
//! each measurement, whether it was random, the reference outcome, and a
//! stabilizer anticommuting with the measured observable (the byproduct
//! that maps the `+1` branch onto the `-1` branch).

use crate::pauli::{Basis, Pauli, PauliFrame, QubitId, QUBIT_COUNT};

/// Result of one measurement on the tableau.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeasureRecord {
    /// `true` for the `-1` outcome.
    pub outcome: bool,
    pub random: bool,
    /// For random measurements: a pre-measurement stabilizer anticommuting
    /// with the observable. Identity otherwise.
    pub byproduct: PauliFrame,
}

#[derive(Debug, Clone)]
pub struct Tableau {
    n: usize,
    // rows 0..n destabilizers, n..2n stabilizers, 2n scratch
    x: Vec<u16>,
    z: Vec<u16>,
    r: Vec<bool>,
}

/// Exponent of `i` picked up when multiplying single-qubit Paulis
/// `(x1,z1)·(x2,z2)`.
fn phase_exponent(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
    match (x1, z1) {
        (false, false) => 0,
        (true, true) => z2 as i32 - x2 as i32,
        (true, false) => z2 as i32 * (2 * x2 as i32 - 1),
        (false, true) => x2 as i32 * (1 - 2 * z2 as i32),
    }
}

impl Tableau {
    /// `|0…0⟩` on `n` qubits.
    pub fn new(n: usize) -> Self {
        assert!(n <= QUBIT_COUNT, "tableau supports at most {QUBIT_COUNT} qubits");
        let mut x = vec![0u16; 2 * n + 1];
        let mut z = vec![0u16; 2 * n + 1];
        for i in 0..n {
            x[i] = 1 << i;
            z[n + i] = 1 << i;
        }
        Tableau { n, x, z, r: vec![false; 2 * n + 1] }
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    fn row(&self, i: usize) -> PauliFrame {
        PauliFrame::from_bits(self.x[i], self.z[i])
    }

    pub fn h(&mut self, q: QubitId) {
        let b = 1u16 << q.index();
        for i in 0..2 * self.n {
            let (xb, zb) = (self.x[i] & b != 0, self.z[i] & b != 0);
            self.r[i] ^= xb && zb;
            self.x[i] = (self.x[i] & !b) | if zb { b } else { 0 };
            self.z[i] = (self.z[i] & !b) | if xb { b } else { 0 };
        }
    }

    pub fn s(&mut self, q: QubitId) {
        let b = 1u16 << q.index();
        for i in 0..2 * self.n {
            let (xb, zb) = (self.x[i] & b != 0, self.z[i] & b != 0);
            self.r[i] ^= xb && zb;
            if xb {
                self.z[i] ^= b;
            }
        }
    }

    pub fn cnot(&mut self, control: QubitId, target: QubitId) {
        let (cb, tb) = (1u16 << control.index(), 1u16 << target.index());
        for i in 0..2 * self.n {
            let xa = self.x[i] & cb != 0;
            let za = self.z[i] & cb != 0;
            let xt = self.x[i] & tb != 0;
            let zt = self.z[i] & tb != 0;
            self.r[i] ^= xa && zt && (xt == za);
            if xa {
                self.x[i] ^= tb;
            }
            if zt {
                self.z[i] ^= cb;
            }
        }
    }

    /// Applies a Pauli gate (signs of anticommuting rows flip).
    pub fn pauli(&mut self, q: QubitId, p: Pauli) {
        let probe = PauliFrame::single(q, p);
        for i in 0..2 * self.n {
            if probe.anticommutes_with(self.row(i)) {
                self.r[i] = !self.r[i];
            }
        }
    }

    /// Row `h` ← row `i` · row `h`, tracking the sign.
    fn rowsum(&mut self, h: usize, i: usize) {
        let mut sum = 2 * self.r[h] as i32 + 2 * self.r[i] as i32;
        for j in 0..self.n {
            let b = 1u16 << j;
            sum += phase_exponent(self.x[i] & b != 0, self.z[i] & b != 0, self.x[h] & b != 0, self.z[h] & b != 0);
        }
        self.r[h] = sum.rem_euclid(4) == 2;
        self.x[h] ^= self.x[i];
        self.z[h] ^= self.z[i];
    }

    fn measure_z(&mut self, q: QubitId, forced: bool) -> MeasureRecord {
        let n = self.n;
        let b = 1u16 << q.index();
        if let Some(p) = (n..2 * n).find(|&i| self.x[i] & b != 0) {
            let byproduct = self.row(p);
            for i in 0..2 * n {
                if i != p && self.x[i] & b != 0 {
                    self.rowsum(i, p);
                }
            }
            self.x[p - n] = self.x[p];
            self.z[p - n] = self.z[p];
            self.r[p - n] = self.r[p];
            self.x[p] = 0;
            self.z[p] = b;
            self.r[p] = forced;
            MeasureRecord { outcome: forced, random: true, byproduct }
        } else {
            let s = 2 * n;
            self.x[s] = 0;
            self.z[s] = 0;
            self.r[s] = false;
            for i in 0..n {
                if self.x[i] & b != 0 {
                    self.rowsum(s, i + n);
                }
            }
            MeasureRecord { outcome: self.r[s], random: false, byproduct: PauliFrame::IDENTITY }
        }
    }

    /// Measures `q` in `basis`. A random outcome is forced to `forced`.
    pub fn measure(&mut self, q: QubitId, basis: Basis, forced: bool) -> MeasureRecord {
        match basis {
            Basis::Z => self.measure_z(q, forced),
            Basis::X => {
                self.h(q);
                let mut rec = self.measure_z(q, forced);
                self.h(q);
                rec.byproduct = rec.byproduct.conjugate_h(q);
                rec
            }
        }
    }

    /// Expectation of a Hermitian Pauli string (Y taken as the `x=z=1`
    /// symbol): `Some(false)` for `+1`, `Some(true)` for `-1`, `None` when
    /// the outcome would be random.
    pub fn expectation(&mut self, p: PauliFrame) -> Option<bool> {
        let n = self.n;
        if (n..2 * n).any(|i| p.anticommutes_with(self.row(i))) {
            return None;
        }
        let s = 2 * n;
        self.x[s] = 0;
        self.z[s] = 0;
        self.r[s] = false;
        for i in 0..n {
            if p.anticommutes_with(self.row(i)) {
                self.rowsum(s, i + n);
            }
        }
        debug_assert_eq!(self.row(s), p);
        Some(self.r[s])
    }

    /// Phase-free stabilizer generators.
    pub fn stabilizers(&self) -> impl Iterator<Item = PauliFrame> + '_ {
        (self.n..2 * self.n).map(move |i| self.row(i))
    }

    /// A frame acts trivially on the current state iff it commutes with every
    /// stabilizer generator (the state is pure, so the normalizer equals the
    /// stabilizer group up to phase).
    pub fn acts_trivially(&self, frame: PauliFrame) -> bool {
        self.stabilizers().all(|s| !frame.anticommutes_with(s))
    }
}
