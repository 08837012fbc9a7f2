//! Symbolic fermionic operators: parsing, normal ordering and sector action.

use fermisim::operators::{apply_fermion_operator, expectation, normal_order, FermionOperator};
use fermisim::{SectorShape, StateVector};

fn main() -> fermisim::Result<()> {
    let text = "\
(0.5,0) * a_0(alpha) a+_1(alpha)
(0.5,0) * a+_0(alpha) a_1(alpha)
(-1.0,0) * a+_0(beta) a_0(beta)
";
    let op: FermionOperator = text.parse()?;
    let ordered = normal_order(&op);
    print!("normal ordered:\n{ordered}");

    let v = StateVector::random(SectorShape::new(2, 1, 1)?, 5)?;
    let diff = apply_fermion_operator(&op, &v)?.distance(&apply_fermion_operator(&ordered, &v)?)?;
    println!("action difference after ordering: {diff:.2e}");
    println!("<v|op|v> = {:.6}", expectation(&ordered, &v)?);
    Ok(())
}
