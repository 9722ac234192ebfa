mod common;

use common::tables::{expected_bells, COLUMNS, INITIAL_ERRORS, STEP_ERRORS};
use qnc_core::circuit::{
    build_2es, build_2es_with, build_encoding_demo, build_qnc, build_qnc_with, Circuit, EncodingOp, IdleSchedule,
    Injection, Program, Scripted, SlotTag,
};
use qnc_core::pauli::{BellIndex, PauliFrame};

#[test]
fn initial_error_table_rows() {
    let program = Program::compile(&build_qnc()).unwrap();
    for ((control, target), finals) in INITIAL_ERRORS {
        for (pauli, expected) in COLUMNS.iter().zip(finals) {
            let inj = Injection::initial(PauliFrame::single(target, *pauli));
            let out = program.run(&mut Scripted::new(0, inj));
            let (af, be) = expected_bells(expected);
            assert_eq!(out.finals(), &[af, be], "{pauli} on {target} of {control}{target}");
        }
    }
}

#[test]
fn step_error_table_rows() {
    let circuit = build_qnc();
    let program = Program::compile(&circuit).unwrap();
    for row in &STEP_ERRORS {
        let slot = circuit.cnot_slot(row.control, row.target).expect("CNOT has a gate slot");
        assert_eq!(slot.tag, SlotTag::Gate);
        assert_eq!(slot.step, row.step);
        for (pauli, expected) in COLUMNS.iter().zip(row.finals) {
            let inj = Injection::at_slot(slot.id, PauliFrame::single(row.hit, *pauli));
            let out = program.run(&mut Scripted::new(0, inj));
            assert_eq!(out.finals(), &[expected_bells(expected).0, expected_bells(expected).1], "{pauli} on {}", row.hit);
        }
    }
}

#[test]
fn table_rows_hold_on_every_branch() {
    let program = Program::compile(&build_qnc()).unwrap();
    for ((_, target), _) in INITIAL_ERRORS {
        for pauli in COLUMNS {
            let inj = Injection::initial(PauliFrame::single(target, pauli));
            assert!(program.branch_outcomes(&inj).independent(), "{pauli} on {target}");
        }
    }
}

#[test]
fn ideal_qnc_on_all_branches() {
    let program = Program::compile(&build_qnc()).unwrap();
    let outcomes = program.branch_outcomes(&Injection::none());
    assert_eq!(outcomes.branches, 1024);
    assert_eq!(outcomes.distinct, vec![vec![BellIndex::PsiPlus, BellIndex::PsiPlus]]);
}

#[test]
fn ideal_2es_on_all_branches() {
    for cycles in [1, 2] {
        let program = Program::compile(&build_2es(cycles).unwrap()).unwrap();
        let outcomes = program.branch_outcomes(&Injection::none());
        assert_eq!(outcomes.branches, 1 << (4 * cycles));
        assert_eq!(outcomes.distinct, vec![vec![BellIndex::PsiPlus; cycles]]);
    }
}

#[test]
fn both_schedules_produce_valid_circuits() {
    for s in [IdleSchedule::PerStep, IdleSchedule::PerSlice] {
        let q = build_qnc_with(s);
        let e = build_2es_with(2, s).unwrap();
        Program::compile(&q).unwrap();
        Program::compile(&e).unwrap();
        let mem = |c: &Circuit| c.error_slots().iter().filter(|x| x.tag == SlotTag::Mem).count();
        assert!(mem(&q) > 0 && mem(&e) > 0);
    }
    let step = build_qnc_with(IdleSchedule::PerStep).error_slots().len();
    let slice = build_qnc_with(IdleSchedule::PerSlice).error_slots().len();
    assert!(step < slice);
}

#[test]
fn per_step_idle_slots_skip_busy_qubits() {
    // A is used in step 1 and idles through steps 2..6
    let c = build_qnc_with(IdleSchedule::PerStep);
    let a_mem: Vec<u8> = c
        .error_slots()
        .iter()
        .filter(|s| s.tag == SlotTag::Mem && s.site.qubits().any(|q| q == qnc_core::pauli::QubitId::A))
        .map(|s| s.step)
        .collect();
    assert_eq!(a_mem, vec![2, 3, 4, 5, 6]);
}

#[test]
fn dumps_round_trip_and_count_measurements() {
    let q = build_qnc();
    let text = q.to_text();
    let measured = text.lines().flat_map(|l| l.split("; ")).filter(|t| t.starts_with("MZ ") || t.starts_with("MX "));
    assert_eq!(measured.count(), 10);
    assert_eq!(Circuit::from_text(&text).unwrap(), q);
    assert_eq!(Circuit::from_json(&q.to_json()).unwrap(), q);
    let e = build_2es(2).unwrap();
    assert_eq!(e.measurement_count(), 4);
    assert_eq!(Circuit::from_text(&e.to_text()).unwrap(), e);
    for op in [EncodingOp::Connection, EncodingOp::Add, EncodingOp::Fanout] {
        let d = build_encoding_demo(op);
        assert_eq!(Circuit::from_json(&d.to_json()).unwrap(), d);
    }
}
