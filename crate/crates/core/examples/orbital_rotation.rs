//! Orbital rotations via Givens decomposition, checked against composition.

use fermisim::gates::{apply_orbital_rotation, givens_decompose, OrbitalRotationSpec};
use fermisim::linalg::random_unitary;
use fermisim::{SectorShape, StateVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> fermisim::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 6;
    let u1 = random_unitary(n, &mut rng);
    let u2 = random_unitary(n, &mut rng);

    let dec = givens_decompose(&u1)?;
    println!("{} Givens rotations for a {n}x{n} unitary", dec.rotations.len());

    let v = StateVector::random(SectorShape::new(n, 3, 2)?, 1)?;
    let a = apply_orbital_rotation(
        &apply_orbital_rotation(&v, &OrbitalRotationSpec::spinless(u2.clone()))?,
        &OrbitalRotationSpec::spinless(u1.clone()),
    )?;
    let b = apply_orbital_rotation(&v, &OrbitalRotationSpec::spinless(&u1 * &u2))?;
    println!("|U(u1) U(u2) v - U(u1 u2) v| = {:.2e}", a.distance(&b)?);
    println!("norm after rotation: {:.15}", a.norm());
    Ok(())
}
