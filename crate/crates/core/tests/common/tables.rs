//! Published single-error propagation tables, transcribed as final-state
//! Pauli strings. Only the Bell indices they imply on `AF` and `BE` are
//! compared; Paulis on `A`/`F` act on `AF`, those on `B`/`E` on `BE`.

use qnc_core::pauli::{BellIndex, Pauli, PauliFrame, QubitId};
use QubitId as Q;

/// Initial pair (underlined member = target) × error → final state.
pub const INITIAL_ERRORS: [((QubitId, QubitId), [&str; 3]); 7] = [
    ((Q::A, Q::B), ["I_A X_B", "Z_A X_B", "Z_A I_B"]),
    ((Q::C, Q::D), ["X_F X_B", "Z_A X_F X_B", "Z_A I_B"]),
    ((Q::E, Q::F), ["X_F I_E", "X_F Z_E", "I_F Z_E"]),
    ((Q::G, Q::H), ["X_F X_B", "X_F X_B Z_E", "I_F Z_E"]),
    ((Q::I, Q::J), ["X_F X_B", "Z_A X_F X_B Z_E", "Z_F Z_E"]),
    ((Q::K, Q::L), ["I_A X_B", "Z_A X_B Z_E", "Z_A Z_E"]),
    ((Q::M, Q::N), ["X_F I_B", "Z_A X_F Z_B", "Z_A Z_B"]),
];

/// One row of a step table: the CNOT, which of its qubits is hit, and the
/// final state for an X, Y, Z error on that qubit right after the gate.
pub struct StepRow {
    pub step: u8,
    pub control: QubitId,
    pub target: QubitId,
    pub hit: QubitId,
    pub finals: [&'static str; 3],
}

const fn row(step: u8, control: QubitId, target: QubitId, hit: QubitId, finals: [&'static str; 3]) -> StepRow {
    StepRow { step, control, target, hit, finals }
}

pub const STEP_ERRORS: [StepRow; 16] = [
    row(1, Q::A, Q::C, Q::A, ["X_A", "Y_A", "Z_A"]),
    row(1, Q::A, Q::C, Q::C, ["X_B X_F", "X_B X_F", "I"]),
    row(1, Q::E, Q::G, Q::E, ["X_E", "Y_E", "Z_E"]),
    row(1, Q::E, Q::G, Q::G, ["X_B X_F", "X_B X_F", "I"]),
    row(2, Q::D, Q::I, Q::D, ["I", "Z_A", "Z_A"]),
    row(2, Q::D, Q::I, Q::I, ["X_B X_F", "X_B Z_E X_F", "Z_E"]),
    row(2, Q::H, Q::I, Q::H, ["I", "Z_E", "Z_E"]),
    row(2, Q::H, Q::I, Q::I, ["X_B X_F", "X_B X_F", "I"]),
    row(3, Q::J, Q::K, Q::J, ["X_F", "Z_A Z_E X_F", "Z_A Z_E"]),
    row(3, Q::J, Q::K, Q::K, ["X_B", "X_B", "I"]),
    row(3, Q::J, Q::M, Q::J, ["I", "Z_A Z_E", "Z_A Z_E"]),
    row(3, Q::J, Q::M, Q::M, ["X_F", "X_F", "I"]),
    row(4, Q::L, Q::B, Q::L, ["I", "Z_A Z_E", "Z_A Z_E"]),
    row(4, Q::L, Q::B, Q::B, ["X_B", "Y_B", "Z_B"]),
    row(4, Q::N, Q::F, Q::N, ["I", "Z_A Z_E", "Z_A Z_E"]),
    row(4, Q::N, Q::F, Q::F, ["X_F", "Y_F", "Z_F"]),
];

pub const COLUMNS: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

/// `(AF, BE)` Bell indices implied by a final-state Pauli string.
pub fn expected_bells(s: &str) -> (BellIndex, BellIndex) {
    let f: PauliFrame = s.parse().expect("table entry parses");
    (f.classify_pair((Q::A, Q::F)), f.classify_pair((Q::B, Q::E)))
}
