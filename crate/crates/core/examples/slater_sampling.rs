//! Sampling a rotated Slater determinant without building the state vector.

use std::collections::BTreeMap;

use fermisim::gates::OrbitalRotationSpec;
use fermisim::linalg::random_unitary;
use fermisim::sampling::{sample_slater, slater_probability, SlaterSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> fermisim::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 6;
    let spec = SlaterSpec::new(n, vec![0, 1, 2], vec![], OrbitalRotationSpec::spinless(random_unitary(n, &mut rng)))?;
    let shots = 20_000;
    let mut counts = BTreeMap::new();
    for cfg in sample_slater(&spec, shots, 0)? {
        *counts.entry(cfg).or_insert(0usize) += 1;
    }
    println!("bitstring        freq    exact");
    for (cfg, k) in counts.iter().take(10) {
        let p = slater_probability(&spec, cfg)?;
        println!("{}  {:.4}  {:.4}", cfg.to_bitstrings(n), *k as f64 / shots as f64, p);
    }
    Ok(())
}
