mod common;

use common::*;
use fermisim::gates::*;
use fermisim::linalg::random_unitary;
use fermisim::sector::{rank_string, unrank_string};
use fermisim::{Error, OccupationString, SectorShape, Spin, StateVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn shape(n: usize, a: usize, b: usize) -> SectorShape {
    SectorShape::new(n, a, b).unwrap()
}

#[test]
fn addressing_matches_ascending_integer_order() {
    for n in 1..=7 {
        for k in 0..=n {
            for (addr, &bits) in sector_strings(n, k).iter().enumerate() {
                assert_eq!(rank_string(OccupationString(bits), n, k).unwrap(), addr);
                assert_eq!(unrank_string(addr, n, k).unwrap(), OccupationString(bits));
            }
        }
    }
}

#[test]
fn configuration_is_a_basis_vector() {
    let s = shape(4, 2, 1);
    let v = StateVector::configuration(s, OccupationString(0b0110), OccupationString(0b1000)).unwrap();
    let basis = sector_basis(s);
    let target = 0b0110 | 0b1000 << 4;
    for (i, z) in v.amplitudes().iter().enumerate() {
        assert_eq!(z.re, if basis[i] == target { 1.0 } else { 0.0 });
    }
    assert_eq!(StateVector::hartree_fock(s).unwrap().amplitudes()[0].re, 1.0);
}

#[test]
fn givens_decomposition_reconstructs() {
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    for n in 1..=7 {
        let u = random_unitary(n, &mut rng);
        let dec = givens_decompose(&u).unwrap();
        assert_eq!(dec.rotations.len(), n * (n - 1) / 2);
        assert!(dec.rotations.iter().all(|r| r.q == r.p + 1));
        assert!((dec.reconstruct() - &u).iter().all(|z| z.norm() < 1e-12));
    }
}

#[test]
fn non_unitary_rejected() {
    let mut u = random_unitary(3, &mut ChaCha8Rng::seed_from_u64(41));
    u[(0, 0)] *= 1.1;
    let v = StateVector::hartree_fock(shape(3, 1, 1)).unwrap();
    assert!(matches!(apply_orbital_rotation(&v, &OrbitalRotationSpec::spinless(u)), Err(Error::NotUnitary { .. })));
}

#[test]
fn dimension_mismatch_rejected() {
    let v = StateVector::hartree_fock(shape(3, 1, 1)).unwrap();
    let spec = OrbitalRotationSpec::identity(4);
    assert!(matches!(apply_orbital_rotation(&v, &spec), Err(Error::ShapeMismatch(_))));
}

#[test]
fn in_place_matches_copy() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let s = shape(6, 3, 2);
    let spec = OrbitalRotationSpec { u_alpha: random_unitary(6, &mut rng), u_beta: random_unitary(6, &mut rng) };
    let v = StateVector::random(s, 1).unwrap();
    let copy = apply_orbital_rotation(&v, &spec).unwrap();
    let mut w = v.clone();
    apply_orbital_rotation_in_place(&mut w, &spec).unwrap();
    assert_eq!(copy, w);
}

#[test]
fn one_particle_rotation_is_the_matrix() {
    // with a single alpha electron the amplitudes transform as U itself
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let u = random_unitary(5, &mut rng);
    let s = shape(5, 1, 0);
    for j in 0..5 {
        let v = StateVector::configuration(s, OccupationString(1 << j), OccupationString(0)).unwrap();
        let w = apply_orbital_rotation(&v, &OrbitalRotationSpec::spinless(u.clone())).unwrap();
        for i in 0..5 {
            assert!((w.amplitudes()[i] - u[(i, j)]).norm() < 1e-13);
        }
    }
}

#[test]
fn givens_on_distant_orbitals_matches_oracle() {
    let s = shape(5, 2, 2);
    let rot = GivensRotation::new(0.6, c(0.0, 0.8), 0, 4).unwrap();
    let v = StateVector::random(s, 2).unwrap();
    let k = {
        let theta = 0.8f64.atan2(0.6);
        let mut k = Mat::zeros(5, 5);
        k[(0, 4)] = c(0.0, theta) * c(0.0, 1.0);
        k[(4, 0)] = k[(0, 4)].conj();
        k
    };
    let want = mat_vec(&expm_herm(&sector_matrix(&spin_one_body_terms(&Mat::zeros(5, 5), &k), s), 1.0), &v);
    assert!(max_diff(&apply_givens_rotation(&v, &rot, Spin::Beta).unwrap(), &want) < 1e-13);
}

#[test]
fn invalid_givens_rejected() {
    assert!(GivensRotation::new(0.6, c(0.9, 0.0), 0, 1).is_err());
    assert!(GivensRotation::new(1.0, c(0.0, 0.0), 2, 2).is_err());
}

#[test]
fn spin_summed_coulomb_matches_explicit_blocks() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let j = random_symmetric(4, &mut rng);
    let v = StateVector::random(shape(4, 2, 3), 3).unwrap();
    let a = apply_diag_coulomb_evolution(&v, &DiagCoulombGate::spin_summed(j.clone(), 0.4)).unwrap();
    let b = apply_diag_coulomb_evolution(
        &v,
        &DiagCoulombGate { j_aa: j.clone(), j_ab: j.clone(), j_bb: j, time: 0.4 },
    )
    .unwrap();
    assert!(max_diff(&a, &b) < 1e-14);
}

#[test]
fn quad_ham_evolution_is_periodic_in_spectrum() {
    // M with integer eigenvalues returns to the start at t = 2 pi
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    let u = random_unitary(4, &mut rng);
    let d = Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(-2.0, 0.0), c(3.0, 0.0), c(0.0, 0.0)]));
    let m = &u * d * u.adjoint();
    let v = StateVector::random(shape(4, 2, 2), 4).unwrap();
    let gate = QuadraticHamiltonianGate::spinless(m, 2.0 * std::f64::consts::PI);
    assert!(max_diff(&apply_quad_ham_evolution(&v, &gate).unwrap(), &v) < 1e-12);
}

#[test]
fn empty_and_full_sectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(46);
    for s in [shape(3, 0, 0), shape(3, 3, 3), shape(3, 0, 3)] {
        let v = StateVector::random(s, 5).unwrap();
        let u = random_unitary(3, &mut rng);
        let det = u.determinant();
        let w = apply_orbital_rotation(&v, &OrbitalRotationSpec::spinless(u)).unwrap();
        let expected = det.powu((s.nalpha / 3 + s.nbeta / 3) as u32) * v.amplitudes()[0];
        assert!((w.amplitudes()[0] - expected).norm() < 1e-12);
    }
}

#[test]
fn excitation_signs_match_jordan_wigner() {
    use fermisim::sector::build_excitation_table;
    for n in 1..=6 {
        for k in 0..=n {
            let strs = sector_strings(n, k);
            let table = build_excitation_table(n, k).unwrap();
            for (addr, &bits) in strs.iter().enumerate() {
                for e in table.entries(addr) {
                    let (sign, out) = apply_string(&[(true, e.q), (false, e.p)], bits).unwrap();
                    assert_eq!(strs[e.target], out);
                    assert_eq!(e.sign as f64, sign, "n={n} k={k} string {bits:b} p={} q={}", e.p, e.q);
                }
            }
        }
    }
}
