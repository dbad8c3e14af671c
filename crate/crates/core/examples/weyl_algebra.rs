//! Arithmetic in the Weyl algebra over F_p: the p-center and point modules.

use modlie::weylalg::{matrix_algebra_rank, PointData, WeylAlgElement};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = 3;
    let x = WeylAlgElement::x(p, 1, 0);
    let d = WeylAlgElement::d(p, 1, 0);
    println!("d x = {}", d.mul(&x)?);
    println!("[d, x] = {}", d.commutator(&x)?);
    let xp = x.pow(p)?;
    println!("x^p central: {}", xp.is_central()?);
    println!("x central: {}", x.is_central()?);
    let rank = matrix_algebra_rank(&PointData::new(p, vec![1], vec![2]))?;
    println!("point module image has dim {rank} = p^2");
    Ok(())
}
