mod common;

use common::dense::{frame_matches_dense, State};
use proptest::prelude::*;
use qnc_core::pauli::{BellIndex, Pauli, PauliFrame, QubitId};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn frame_propagation_matches_state_vectors() {
    let failures: Vec<u64> = (0..1000).filter(|&s| !frame_matches_dense(s)).collect();
    assert!(failures.is_empty(), "seeds {failures:?}");
}

#[test]
fn wrong_frame_is_detected_by_the_oracle() {
    // sanity: the dense check is not vacuous
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let a = State::random(3, &mut rng);
    let mut b = a.clone();
    b.pauli(1, Pauli::Z);
    assert!(!a.equal_up_to_phase(&b));
}

#[test]
fn spec_examples() {
    let f: PauliFrame = "X_A".parse().unwrap();
    assert_eq!(f.conjugate_cnot(QubitId::A, QubitId::B).unwrap(), "X_A X_B".parse().unwrap());
    let f: PauliFrame = "Z_B".parse().unwrap();
    assert_eq!(f.conjugate_cnot(QubitId::A, QubitId::B).unwrap(), "Z_A Z_B".parse().unwrap());
    assert!(PauliFrame::IDENTITY.conjugate_cnot(QubitId::A, QubitId::A).is_err());
    let y: PauliFrame = "Y_A".parse().unwrap();
    assert_eq!(y.classify_pair((QubitId::A, QubitId::B)), BellIndex::PhiMinus);
}

proptest! {
    #[test]
    fn same_pauli_on_both_members_is_invisible(p in 0usize..4, pair in 0usize..7) {
        let (a, b) = qnc_core::pauli::INITIAL_PAIRS[pair];
        let f = PauliFrame::single(a, Pauli::ALL[p]).with(b, Pauli::ALL[p]);
        prop_assert_eq!(f.classify_pair((a, b)), BellIndex::PsiPlus);
    }
}
