//! Phase-free Pauli algebra over the fourteen butterfly qubits.
//!
//! A [`PauliFrame`] stores one X bit and one Z bit per qubit, so `Y` is the
//! simultaneous presence of both. Signs and global phases are dropped
//! everywhere: every observable this crate reports (measurement flips, Bell
//! indices, fidelities) depends only on commutation.

use std::fmt;
use std::ops::{BitXor, BitXorAssign, Mul};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Number of qubits in the butterfly resource layout.
pub const QUBIT_COUNT: usize = 14;

const MASK: u16 = (1 << QUBIT_COUNT) - 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("gate acts twice on qubit {0}")]
    RepeatedQubit(QubitId),
    #[error("unknown qubit label {0:?}")]
    UnknownQubit(String),
    #[error("unknown Pauli symbol {0:?}")]
    UnknownPauli(String),
}

/// Single-qubit Pauli operator, phase discarded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    pub const NON_IDENTITY: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub const fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub const fn has_x(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    pub const fn has_z(self) -> bool {
        matches!(self, Pauli::Z | Pauli::Y)
    }

    pub const fn is_identity(self) -> bool {
        matches!(self, Pauli::I)
    }

    /// Index in the `σ⁰..σ³` ordering (I, X, Y, Z).
    pub const fn index(self) -> usize {
        match self {
            Pauli::I => 0,
            Pauli::X => 1,
            Pauli::Y => 2,
            Pauli::Z => 3,
        }
    }

    pub const fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Phase-free group product. Commutative at this level.
pub fn pauli_mul(a: Pauli, b: Pauli) -> Pauli {
    Pauli::from_bits(a.has_x() ^ b.has_x(), a.has_z() ^ b.has_z())
}

impl Mul for Pauli {
    type Output = Pauli;

    fn mul(self, rhs: Pauli) -> Pauli {
        pauli_mul(self, rhs)
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl FromStr for Pauli {
    type Err = FrameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "I" => Ok(Pauli::I),
            "X" => Ok(Pauli::X),
            "Y" => Ok(Pauli::Y),
            "Z" => Ok(Pauli::Z),
            other => Err(FrameError::UnknownPauli(other.to_string())),
        }
    }
}

/// One of the fourteen labelled qubits `A..N`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QubitId(u8);

impl QubitId {
    pub const A: QubitId = QubitId(0);
    pub const B: QubitId = QubitId(1);
    pub const C: QubitId = QubitId(2);
    pub const D: QubitId = QubitId(3);
    pub const E: QubitId = QubitId(4);
    pub const F: QubitId = QubitId(5);
    pub const G: QubitId = QubitId(6);
    pub const H: QubitId = QubitId(7);
    pub const I: QubitId = QubitId(8);
    pub const J: QubitId = QubitId(9);
    pub const K: QubitId = QubitId(10);
    pub const L: QubitId = QubitId(11);
    pub const M: QubitId = QubitId(12);
    pub const N: QubitId = QubitId(13);

    pub fn new(index: usize) -> Option<Self> {
        (index < QUBIT_COUNT).then_some(QubitId(index as u8))
    }

    pub fn from_label(label: char) -> Option<Self> {
        let upper = label.to_ascii_uppercase();
        if upper.is_ascii_uppercase() {
            QubitId::new((upper as u8 - b'A') as usize)
        } else {
            None
        }
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }

    pub const fn label(self) -> char {
        (b'A' + self.0) as char
    }

    pub fn all() -> impl Iterator<Item = QubitId> {
        (0..QUBIT_COUNT as u8).map(QubitId)
    }

    const fn bit(self) -> u16 {
        1 << self.0
    }
}

impl fmt::Debug for QubitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl fmt::Display for QubitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl FromStr for QubitId {
    type Err = FrameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => QubitId::from_label(c).ok_or_else(|| FrameError::UnknownQubit(s.to_string())),
            _ => Err(FrameError::UnknownQubit(s.to_string())),
        }
    }
}

impl Serialize for QubitId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_char(self.label())
    }
}

impl<'de> Deserialize<'de> for QubitId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The seven initial Bell pairs in `(control, target)` order of their
/// creating CNOT: `AB, CD, EF, GH, IJ, KL, MN`.
pub const INITIAL_PAIRS: [(QubitId, QubitId); 7] = [
    (QubitId::A, QubitId::B),
    (QubitId::C, QubitId::D),
    (QubitId::E, QubitId::F),
    (QubitId::G, QubitId::H),
    (QubitId::I, QubitId::J),
    (QubitId::K, QubitId::L),
    (QubitId::M, QubitId::N),
];

/// Measurement basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    Z,
    X,
}

/// Which Bell state a qubit pair occupies relative to the intended one.
///
/// Naming follows the convention where `PsiPlus` is the `(|00⟩+|11⟩)/√2`
/// correlation, `PhiPlus` is that state with one bit flipped, `PsiMinus`
/// with one phase flipped and `PhiMinus` with both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BellIndex {
    PsiPlus,
    PhiPlus,
    PsiMinus,
    PhiMinus,
}

impl BellIndex {
    pub const ALL: [BellIndex; 4] = [BellIndex::PsiPlus, BellIndex::PhiPlus, BellIndex::PsiMinus, BellIndex::PhiMinus];

    /// Classification from the pair's X parity and Z parity.
    pub const fn from_parities(x_odd: bool, z_odd: bool) -> Self {
        match (x_odd, z_odd) {
            (false, false) => BellIndex::PsiPlus,
            (true, false) => BellIndex::PhiPlus,
            (false, true) => BellIndex::PsiMinus,
            (true, true) => BellIndex::PhiMinus,
        }
    }

    /// The Bell index produced by a single Pauli on one member of a pair.
    pub const fn from_pauli(p: Pauli) -> Self {
        BellIndex::from_parities(p.has_x(), p.has_z())
    }

    pub const fn x_odd(self) -> bool {
        matches!(self, BellIndex::PhiPlus | BellIndex::PhiMinus)
    }

    pub const fn z_odd(self) -> bool {
        matches!(self, BellIndex::PsiMinus | BellIndex::PhiMinus)
    }

    /// Dense index `x | z << 1`, used for lookup tables.
    pub const fn index(self) -> usize {
        (self.x_odd() as usize) | ((self.z_odd() as usize) << 1)
    }

    pub fn from_index(i: usize) -> Self {
        BellIndex::from_parities(i & 1 != 0, i & 2 != 0)
    }

    pub const fn is_ideal(self) -> bool {
        matches!(self, BellIndex::PsiPlus)
    }

    /// Bell indices compose like the Klein four-group: XOR of the parities.
    pub fn compose(self, other: BellIndex) -> BellIndex {
        BellIndex::from_index(self.index() ^ other.index())
    }

    pub const fn name(self) -> &'static str {
        match self {
            BellIndex::PsiPlus => "psi+",
            BellIndex::PhiPlus => "phi+",
            BellIndex::PsiMinus => "psi-",
            BellIndex::PhiMinus => "phi-",
        }
    }
}

impl fmt::Display for BellIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Accumulated Pauli error on the fourteen qubits, as two bit-vectors.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct PauliFrame {
    x: u16,
    z: u16,
}

impl PauliFrame {
    pub const IDENTITY: PauliFrame = PauliFrame { x: 0, z: 0 };

    pub const fn identity() -> Self {
        Self::IDENTITY
    }

    /// Builds a frame from raw bit masks; bit `i` belongs to qubit `i`.
    pub const fn from_bits(x: u16, z: u16) -> Self {
        PauliFrame { x: x & MASK, z: z & MASK }
    }

    pub fn single(q: QubitId, p: Pauli) -> Self {
        Self::IDENTITY.with(q, p)
    }

    pub const fn x_bits(self) -> u16 {
        self.x
    }

    pub const fn z_bits(self) -> u16 {
        self.z
    }

    pub const fn is_identity(self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Number of qubits carrying a non-identity Pauli.
    pub const fn weight(self) -> u32 {
        (self.x | self.z).count_ones()
    }

    pub fn get(self, q: QubitId) -> Pauli {
        Pauli::from_bits(self.x & q.bit() != 0, self.z & q.bit() != 0)
    }

    /// Multiplies `p` onto qubit `q`.
    #[must_use]
    pub fn with(mut self, q: QubitId, p: Pauli) -> Self {
        self.apply(q, p);
        self
    }

    pub fn apply(&mut self, q: QubitId, p: Pauli) {
        if p.has_x() {
            self.x ^= q.bit();
        }
        if p.has_z() {
            self.z ^= q.bit();
        }
    }

    /// Drops everything on `q`, e.g. after it has been measured and discarded.
    pub fn clear(&mut self, q: QubitId) {
        self.x &= !q.bit();
        self.z &= !q.bit();
    }

    /// Keeps only the qubits listed.
    #[must_use]
    pub fn restricted_to(self, qubits: &[QubitId]) -> Self {
        let mask = qubits.iter().fold(0u16, |m, q| m | q.bit());
        PauliFrame { x: self.x & mask, z: self.z & mask }
    }

    /// Whether the two frames anticommute as Pauli strings.
    pub const fn anticommutes_with(self, other: PauliFrame) -> bool {
        ((self.x & other.z) ^ (self.z & other.x)).count_ones() % 2 == 1
    }

    /// Conjugation through `CNOT(control, target)`: X spreads control → target,
    /// Z spreads target → control.
    pub fn conjugate_cnot(self, control: QubitId, target: QubitId) -> Result<Self, FrameError> {
        if control == target {
            return Err(FrameError::RepeatedQubit(control));
        }
        Ok(self.cnot_unchecked(control, target))
    }

    #[inline]
    pub(crate) fn cnot_unchecked(mut self, control: QubitId, target: QubitId) -> Self {
        if self.x & control.bit() != 0 {
            self.x ^= target.bit();
        }
        if self.z & target.bit() != 0 {
            self.z ^= control.bit();
        }
        self
    }

    /// Conjugation through a Hadamard: X and Z swap on `q`.
    #[must_use]
    pub fn conjugate_h(mut self, q: QubitId) -> Self {
        let b = q.bit();
        let (xb, zb) = (self.x & b, self.z & b);
        self.x = (self.x & !b) | zb;
        self.z = (self.z & !b) | xb;
        self
    }

    /// Conjugation through the phase gate: `X → Y`, `Z → Z`.
    #[must_use]
    pub fn conjugate_s(mut self, q: QubitId) -> Self {
        if self.x & q.bit() != 0 {
            self.z ^= q.bit();
        }
        self
    }

    /// Whether measuring `q` in `basis` reports the flipped outcome.
    pub const fn measurement_flips(self, q: QubitId, basis: Basis) -> bool {
        match basis {
            Basis::Z => self.x & q.bit() != 0,
            Basis::X => self.z & q.bit() != 0,
        }
    }

    /// Bell index of the pair `(a, b)` given this frame on top of `|Ψ⁺⟩`.
    pub const fn classify_pair(self, pair: (QubitId, QubitId)) -> BellIndex {
        let (a, b) = pair;
        let x_odd = ((self.x >> a.0) ^ (self.x >> b.0)) & 1 == 1;
        let z_odd = ((self.z >> a.0) ^ (self.z >> b.0)) & 1 == 1;
        BellIndex::from_parities(x_odd, z_odd)
    }

    /// Sparse rendering such as `X_B Z_F`; the identity prints as `I`.
    pub fn to_sparse_string(self) -> String {
        let parts: Vec<String> = QubitId::all()
            .filter_map(|q| {
                let p = self.get(q);
                (!p.is_identity()).then(|| format!("{p}_{q}"))
            })
            .collect();
        if parts.is_empty() {
            "I".to_string()
        } else {
            parts.join(" ")
        }
    }
}

impl BitXor for PauliFrame {
    type Output = PauliFrame;

    fn bitxor(self, rhs: PauliFrame) -> PauliFrame {
        PauliFrame { x: self.x ^ rhs.x, z: self.z ^ rhs.z }
    }
}

impl BitXorAssign for PauliFrame {
    fn bitxor_assign(&mut self, rhs: PauliFrame) {
        self.x ^= rhs.x;
        self.z ^= rhs.z;
    }
}

impl fmt::Debug for PauliFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliFrame({})", self.to_sparse_string())
    }
}

impl fmt::Display for PauliFrame {
    /// Dense string over `A..N`, e.g. `IXIIIZIIIIIIII`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in QubitId::all() {
            write!(f, "{}", self.get(q))?;
        }
        Ok(())
    }
}

impl FromStr for PauliFrame {
    type Err = FrameError;

    /// Accepts the sparse form `X_B Z_F` (also `XB ZF`) or `I`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut frame = PauliFrame::IDENTITY;
        for token in s.split_whitespace() {
            if token == "I" {
                continue;
            }
            let mut chars = token.chars();
            let p: Pauli = chars.next().map(String::from).unwrap_or_default().parse()?;
            let rest: String = chars.filter(|c| *c != '_').collect();
            let q: QubitId = rest.parse()?;
            frame.apply(q, p);
        }
        Ok(frame)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use QubitId as Q;

    #[test]
    fn mul_examples() {
        assert_eq!(pauli_mul(Pauli::I, Pauli::X), Pauli::X);
        assert_eq!(pauli_mul(Pauli::X, Pauli::Z), Pauli::Y);
        assert_eq!(pauli_mul(Pauli::Z, Pauli::X), Pauli::Y);
        assert_eq!(pauli_mul(Pauli::Y, Pauli::Y), Pauli::I);
    }

    #[test]
    fn cnot_spreads_x_forward_and_z_backward() {
        let f = PauliFrame::single(Q::A, Pauli::X).conjugate_cnot(Q::A, Q::B).unwrap();
        assert_eq!(f, PauliFrame::single(Q::A, Pauli::X).with(Q::B, Pauli::X));
        let f = PauliFrame::single(Q::B, Pauli::Z).conjugate_cnot(Q::A, Q::B).unwrap();
        assert_eq!(f, PauliFrame::single(Q::A, Pauli::Z).with(Q::B, Pauli::Z));
        assert_eq!(PauliFrame::IDENTITY.conjugate_cnot(Q::A, Q::B).unwrap(), PauliFrame::IDENTITY);
    }

    #[test]
    fn cnot_rejects_repeated_qubit() {
        assert_eq!(
            PauliFrame::IDENTITY.conjugate_cnot(Q::C, Q::C),
            Err(FrameError::RepeatedQubit(Q::C))
        );
    }

    #[test]
    fn hadamard_swaps() {
        let h = |p| PauliFrame::single(Q::E, p).conjugate_h(Q::E).get(Q::E);
        assert_eq!(h(Pauli::X), Pauli::Z);
        assert_eq!(h(Pauli::Z), Pauli::X);
        assert_eq!(h(Pauli::Y), Pauli::Y);
    }

    #[test]
    fn measurement_flip_examples() {
        let z = PauliFrame::single(Q::J, Pauli::Z);
        assert!(z.measurement_flips(Q::J, Basis::X));
        assert!(!z.measurement_flips(Q::J, Basis::Z));
        let x = PauliFrame::single(Q::J, Pauli::X);
        assert!(!x.measurement_flips(Q::J, Basis::X));
        assert!(x.measurement_flips(Q::J, Basis::Z));
        assert!(!PauliFrame::IDENTITY.measurement_flips(Q::J, Basis::Z));
        assert!(!PauliFrame::IDENTITY.measurement_flips(Q::J, Basis::X));
    }

    #[test]
    fn classify_examples() {
        let pair = (Q::A, Q::F);
        assert_eq!(PauliFrame::IDENTITY.classify_pair(pair), BellIndex::PsiPlus);
        assert_eq!(PauliFrame::single(Q::F, Pauli::X).classify_pair(pair), BellIndex::PhiPlus);
        assert_eq!(PauliFrame::single(Q::A, Pauli::Z).classify_pair(pair), BellIndex::PsiMinus);
        assert_eq!(PauliFrame::single(Q::A, Pauli::Y).classify_pair(pair), BellIndex::PhiMinus);
        // unrelated qubits do not matter
        assert_eq!(PauliFrame::single(Q::B, Pauli::Y).classify_pair(pair), BellIndex::PsiPlus);
    }

    #[test]
    fn bell_index_roundtrip() {
        for b in BellIndex::ALL {
            assert_eq!(BellIndex::from_index(b.index()), b);
            assert_eq!(BellIndex::from_parities(b.x_odd(), b.z_odd()), b);
        }
        assert_eq!(BellIndex::PhiPlus.compose(BellIndex::PsiMinus), BellIndex::PhiMinus);
    }

    #[test]
    fn frame_parse_and_print() {
        let f: PauliFrame = "X_B Z_F Y_A".parse().unwrap();
        assert_eq!(f.get(Q::A), Pauli::Y);
        assert_eq!(f.to_sparse_string(), "Y_A X_B Z_F");
        assert_eq!(f.to_string(), "YXIIIZIIIIIIII");
        assert_eq!("I".parse::<PauliFrame>().unwrap(), PauliFrame::IDENTITY);
        assert!("Q_A".parse::<PauliFrame>().is_err());
        assert!("X_P".parse::<PauliFrame>().is_err());
    }

    fn frame_on(n: u32) -> impl Strategy<Value = PauliFrame> {
        let mask = (1u16 << n) - 1;
        (any::<u16>(), any::<u16>()).prop_map(move |(x, z)| PauliFrame::from_bits(x & mask, z & mask))
    }

    #[derive(Debug, Clone, Copy)]
    enum Gate {
        H(QubitId),
        S(QubitId),
        Cnot(QubitId, QubitId),
    }

    fn apply(f: PauliFrame, g: Gate) -> PauliFrame {
        match g {
            Gate::H(q) => f.conjugate_h(q),
            Gate::S(q) => f.conjugate_s(q),
            Gate::Cnot(c, t) => f.conjugate_cnot(c, t).unwrap(),
        }
    }

    /// Every gate on three qubits, every pair of frames on those qubits.
    #[test]
    fn conjugation_is_linear_exhaustively_on_three_qubits() {
        let mut gates = Vec::new();
        for a in 0..3 {
            let qa = QubitId::new(a).unwrap();
            gates.push(Gate::H(qa));
            gates.push(Gate::S(qa));
            for b in 0..3 {
                if a != b {
                    gates.push(Gate::Cnot(qa, QubitId::new(b).unwrap()));
                }
            }
        }
        let frames: Vec<PauliFrame> = (0..64u16).map(|bits| PauliFrame::from_bits(bits & 7, bits >> 3)).collect();
        for g in gates {
            assert_eq!(apply(PauliFrame::IDENTITY, g), PauliFrame::IDENTITY);
            for &f1 in &frames {
                for &f2 in &frames {
                    assert_eq!(apply(f1 ^ f2, g), apply(f1, g) ^ apply(f2, g), "{g:?}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn cnot_is_an_involution(f in frame_on(14), c in 0usize..14, t in 0usize..14) {
            prop_assume!(c != t);
            let (c, t) = (QubitId::new(c).unwrap(), QubitId::new(t).unwrap());
            prop_assert_eq!(f.conjugate_cnot(c, t).unwrap().conjugate_cnot(c, t).unwrap(), f);
        }

        #[test]
        fn same_pauli_on_both_members_keeps_bell_index(f in frame_on(14), p in 0usize..4, a in 0usize..14, b in 0usize..14) {
            prop_assume!(a != b);
            let (a, b) = (QubitId::new(a).unwrap(), QubitId::new(b).unwrap());
            let p = Pauli::ALL[p];
            let g = f.with(a, p).with(b, p);
            prop_assert_eq!(f.classify_pair((a, b)), g.classify_pair((a, b)));
        }

        #[test]
        fn sparse_string_roundtrip(f in frame_on(14)) {
            prop_assert_eq!(f.to_sparse_string().parse::<PauliFrame>().unwrap(), f);
        }
    }
}
