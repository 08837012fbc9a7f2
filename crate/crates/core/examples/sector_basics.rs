//! Sector dimensions, string addressing and state-vector memory footprints.

use fermisim::sector::{rank_string, sector_dimension, unrank_string};
use fermisim::{OccupationString, SectorShape, StateVector};

fn main() -> fermisim::Result<()> {
    for (n, a, b) in [(8, 2, 2), (16, 4, 4), (16, 8, 8), (32, 4, 4)] {
        let shape = SectorShape::new(n, a, b)?;
        let (da, db) = sector_dimension(&shape)?;
        let bytes = (da * db * 16) as f64;
        println!("({n:2},{a},{b}): {da} x {db} amplitudes, {:.2} MiB", bytes / (1u64 << 20) as f64);
    }

    let s = unrank_string(5, 5, 2)?;
    println!("address 5 of (5 choose 2) is {} (orbitals {:?})", s.to_bitstring(5), s.orbitals());
    println!("rank of 10100 is {}", rank_string(OccupationString(0b10100), 5, 2)?);

    let hf = StateVector::hartree_fock(SectorShape::new(4, 2, 1)?)?;
    println!("Hartree-Fock amplitude at index 0: {}", hf.amplitudes()[0]);
    Ok(())
}
