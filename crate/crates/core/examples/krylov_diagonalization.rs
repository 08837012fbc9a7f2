//! Krylov ground-energy estimates with exact and Trotterized time steps.

use fermisim::apps::{build_hubbard, krylov_diagonalize, HubbardSpec, KrylovConfig, KrylovEvolution};
use fermisim::operators::lowest_eigenpair;
use fermisim::{SectorShape, StateVector};

fn main() -> fermisim::Result<()> {
    let ham = build_hubbard(&HubbardSpec { nx: 4, ny: 1, t_hop: 1.0, u_int: 8.0, periodic_x: true })?;
    let shape = SectorShape::new(4, 1, 1)?;
    let (exact, _) = lowest_eigenpair(&ham, shape, 1e-12, 0)?;
    let reference = StateVector::hartree_fock(shape)?;

    let exact_cfg = KrylovConfig::exact(10, 0.3);
    let trotter_cfg = KrylovConfig { evolve: KrylovEvolution::Trotter { order: 1, n_steps: 4 }, ..exact_cfg };
    let a = krylov_diagonalize(&ham, None, &reference, &exact_cfg)?;
    let b = krylov_diagonalize(&ham, Some(&ham), &reference, &trotter_cfg)?;
    println!("exact ground energy {exact:.10}");
    for (x, y) in a.iter().zip(&b) {
        println!("D={:2}  exact-step {:+.3e}  trotter-step {:+.3e}", x.dim, x.energy - exact, y.energy - exact);
    }
    Ok(())
}
