//! Molecular Hamiltonian from an FCIDUMP, ground energy and double
//! factorization.

use fermisim::apps::{hartree_fock_energy, parse_fcidump};
use fermisim::operators::{apply_double_factorized_hamiltonian, apply_molecular_hamiltonian, df_from_molecular, lowest_eigenpair};
use fermisim::StateVector;

const H2: &str = "\
&FCI NORB=2,NELEC=2,MS2=0,
&END
  0.6744931 1 1 1 1
  0.6634720 2 2 1 1
  0.1812875 2 1 2 1
  0.6973979 2 2 2 2
 -1.2524500 1 1 0 0
 -0.4759344 2 2 0 0
  0.7137540 0 0 0 0
";

fn main() -> fermisim::Result<()> {
    let dump = parse_fcidump(H2.as_bytes())?;
    let shape = dump.sector()?;
    let ham = &dump.hamiltonian;
    println!("Hartree-Fock energy: {:.8}", hartree_fock_energy(ham, shape.nalpha, shape.nbeta));
    let (e0, _) = lowest_eigenpair(ham, shape, 1e-12, 0)?;
    println!("ground energy:       {e0:.8}");

    let df = df_from_molecular(ham, 0.0, None)?;
    let v = StateVector::random(shape, 3)?;
    let diff = apply_double_factorized_hamiltonian(&df, &v)?.distance(&apply_molecular_hamiltonian(ham, &v)?)?;
    println!("{} factorized terms, action difference {diff:.2e}", df.terms.len());
    Ok(())
}
