//! p-curvature of rank one connections on the affine plane.

use modlie::weylalg::{p_curvature, CommPoly};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = 5;
    let x = CommPoly::var(p, 2, 0);
    let y = CommPoly::var(p, 2, 1);
    let g = x.mul(&y).add(&x.pow(2));
    let a = vec![vec![vec![g.derivative(0)]], vec![vec![g.derivative(1)]]];
    let psi = p_curvature(&a)?;
    println!("g = {g}");
    for (i, m) in psi.iter().enumerate() {
        println!("psi_{i} = {}", m[0][0]);
    }
    Ok(())
}
