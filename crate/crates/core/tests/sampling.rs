mod common;

use std::collections::HashMap;

use common::*;
use fermisim::gates::{apply_orbital_rotation, OrbitalRotationSpec};
use fermisim::linalg::random_unitary;
use fermisim::sampling::{sample_slater, sample_state_vector, slater_probability, Configuration, SlaterSpec};
use fermisim::{Error, OccupationString, SectorShape, StateVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn spinful_spec(seed: u64) -> SlaterSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rotation = OrbitalRotationSpec { u_alpha: random_unitary(5, &mut rng), u_beta: random_unitary(5, &mut rng) };
    SlaterSpec::new(5, vec![0, 2], vec![1], rotation).unwrap()
}

#[test]
fn probabilities_match_rotated_vector() {
    let spec = spinful_spec(60);
    let s = SectorShape::new(5, 2, 1).unwrap();
    let reference = StateVector::configuration(s, OccupationString(0b101), OccupationString(0b010)).unwrap();
    let psi = apply_orbital_rotation(&reference, &spec.rotation).unwrap();
    let mut total = 0.0;
    for (i, &bits) in sector_basis(s).iter().enumerate() {
        let cfg = Configuration { alpha: OccupationString(bits & 0b11111), beta: OccupationString(bits >> 5) };
        let p = slater_probability(&spec, &cfg).unwrap();
        assert!((p - psi.amplitudes()[i].norm_sqr()).abs() < 1e-12);
        total += p;
    }
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn wrong_particle_number_rejected() {
    let spec = spinful_spec(61);
    let cfg = Configuration { alpha: OccupationString(0b1), beta: OccupationString(0b10) };
    assert!(matches!(slater_probability(&spec, &cfg), Err(Error::InvalidSector(_))));
}

#[test]
fn spinful_slater_sampling_matches_probabilities() {
    let spec = spinful_spec(62);
    let shots = 40_000;
    let samples = sample_slater(&spec, shots, 3).unwrap();
    let mut counts: HashMap<Configuration, usize> = HashMap::new();
    for s in &samples {
        assert_eq!((s.alpha.count(), s.beta.count()), (2, 1));
        *counts.entry(*s).or_default() += 1;
    }
    let tv: f64 = 0.5
        * counts
            .iter()
            .map(|(cfg, &n)| (n as f64 / shots as f64 - slater_probability(&spec, cfg).unwrap()).abs())
            .sum::<f64>();
    assert!(tv < 0.03, "{tv}");
}

#[test]
fn sampling_is_reproducible() {
    let spec = spinful_spec(63);
    assert_eq!(sample_slater(&spec, 500, 9).unwrap(), sample_slater(&spec, 500, 9).unwrap());
    assert_ne!(sample_slater(&spec, 500, 9).unwrap(), sample_slater(&spec, 500, 10).unwrap());
    let v = StateVector::random(SectorShape::new(4, 2, 2).unwrap(), 1).unwrap();
    assert_eq!(sample_state_vector(&v, 300, 4).unwrap(), sample_state_vector(&v, 300, 4).unwrap());
}

#[test]
fn basis_state_always_sampled() {
    let s = SectorShape::new(4, 2, 1).unwrap();
    let v = StateVector::configuration(s, OccupationString(0b1010), OccupationString(0b0100)).unwrap();
    for cfg in sample_state_vector(&v, 100, 0).unwrap() {
        assert_eq!(cfg.to_bitstrings(4), "0100/1010");
    }
}

#[test]
fn unnormalized_vector_rejected() {
    let s = SectorShape::new(3, 1, 1).unwrap();
    let mut v = StateVector::hartree_fock(s).unwrap();
    v.scale(c(2.0, 0.0));
    assert!(matches!(sample_state_vector(&v, 10, 0), Err(Error::NotNormalized { .. })));
}
