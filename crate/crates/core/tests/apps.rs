mod common;

use common::*;
use fermisim::apps::*;
use fermisim::operators::MolecularHamiltonian;
use fermisim::{Error, SectorShape, StateVector};

#[test]
fn fcidump_parse_errors_carry_line_numbers() {
    let bad = "&FCI NORB=2,NELEC=2,MS2=0,\n&END\n 0.5 1 1 1\n";
    assert!(matches!(parse_fcidump(bad.as_bytes()), Err(Error::Parse { line: 3, .. })));
    let out_of_range = "&FCI NORB=2,NELEC=2,MS2=0,\n&END\n 0.5 3 1 0 0\n";
    assert!(parse_fcidump(out_of_range.as_bytes()).is_err());
    assert!(parse_fcidump("NORB=2\n".as_bytes()).is_err());
}

#[test]
fn fcidump_slash_terminator_and_energy() {
    let text = "&FCI NORB=1,NELEC=2,MS2=0,\n/\n 0.5 1 1 1 1\n -1.0 1 1 0 0\n 0.25 0 0 0 0\n";
    let dump = parse_fcidump(text.as_bytes()).unwrap();
    assert_eq!(dump.sector().unwrap(), SectorShape::new(1, 1, 1).unwrap());
    // two electrons in one orbital: 2 h + (pp|pp) + constant
    let e = hartree_fock_energy(&dump.hamiltonian, 1, 1);
    assert!((e - (-2.0 + 0.5 + 0.25)).abs() < 1e-14);
}

#[test]
fn hartree_fock_energy_matches_expectation() {
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(70);
    let n = 4;
    let ham = MolecularHamiltonian::new(
        random_symmetric(n, &mut rng).map(|x| c(x, 0.0)),
        random_symmetric_tensor(n, &mut rng),
        0.1,
    )
    .unwrap();
    let s = SectorShape::new(n, 2, 1).unwrap();
    let mut terms = one_body_terms(&ham.one_body);
    terms.extend(two_body_terms(&ham.two_body));
    terms.push((c(0.1, 0.0), vec![]));
    let m = sector_matrix(&terms, s);
    let hf = StateVector::hartree_fock(s).unwrap();
    assert!((hartree_fock_energy(&ham, 2, 1) - hf.inner(&mat_vec(&m, &hf)).unwrap().re).abs() < 1e-12);
}

#[test]
fn hubbard_matches_explicit_terms() {
    let spec = HubbardSpec { nx: 3, ny: 2, t_hop: 1.5, u_int: 2.0, periodic_x: true };
    let ham = build_hubbard(&spec).unwrap();
    assert_eq!(spec.edges().len(), 2 * 3 + 3);
    for p in 0..6 {
        assert_eq!(ham.j_ab[(p, p)], 2.0);
        for q in 0..6 {
            let bonded = spec.edges().iter().any(|&(a, b)| (a, b) == (p, q) || (a, b) == (q, p));
            assert_eq!(ham.one_body[(p, q)].re, if bonded { -1.5 } else { 0.0 });
        }
    }
}

#[test]
fn filling_parsing() {
    assert_eq!(parse_filling("1/4").unwrap(), 0.25);
    assert_eq!(parse_filling("0.125").unwrap(), 0.125);
    assert!(parse_filling("0").is_err());
    assert!(parse_filling("3/2").is_err());
    assert_eq!(filling_sector(8, 0.25).unwrap(), SectorShape::new(8, 2, 2).unwrap());
    assert!(filling_sector(8, 0.3).is_err());
}

#[test]
fn krylov_requires_normalized_reference() {
    let ham = build_hubbard(&HubbardSpec { nx: 2, ny: 1, t_hop: 1.0, u_int: 1.0, periodic_x: false }).unwrap();
    let mut v = StateVector::hartree_fock(SectorShape::new(2, 1, 1).unwrap()).unwrap();
    v.scale(c(3.0, 0.0));
    assert!(krylov_diagonalize(&ham, None, &v, &KrylovConfig::exact(3, 0.3)).is_err());
}

#[test]
fn krylov_estimates_are_variational() {
    let ham = build_hubbard(&HubbardSpec { nx: 3, ny: 1, t_hop: 1.0, u_int: 4.0, periodic_x: false }).unwrap();
    let s = SectorShape::new(3, 1, 1).unwrap();
    let mut terms = one_body_terms(&ham.one_body);
    terms.extend(coulomb_terms(&ham.j_aa, &ham.j_ab, &ham.j_bb));
    let e0 = ground_energy(&sector_matrix(&terms, s));
    let est = krylov_diagonalize(&ham, None, &StateVector::hartree_fock(s).unwrap(), &KrylovConfig::exact(6, 0.4)).unwrap();
    assert_eq!(est.len(), 6);
    for w in est.windows(2) {
        assert!(w[1].energy <= w[0].energy + 1e-10);
    }
    assert!(est.iter().all(|e| e.energy >= e0 - 1e-10));
}

#[test]
fn gate_counts() {
    let dense = r#"{"norb": 4, "operations": [{"op": "orbital_rotation", "alpha": "dense", "beta": "dense"}]}"#;
    assert_eq!(count_two_qubit_gates(&CircuitPlan::from_json(dense).unwrap()).unwrap(), 12);
    let prep = r#"{"norb": 4, "operations": [{"op": "slater_prep", "nalpha": 1, "nbeta": 2}, {"op": "num_op"}]}"#;
    assert_eq!(count_two_qubit_gates(&CircuitPlan::from_json(prep).unwrap()).unwrap(), 3 + 4);
    assert!(CircuitPlan::from_json(r#"{"norb": 2, "operations": [{"op": "teleport"}]}"#).is_err());
}
