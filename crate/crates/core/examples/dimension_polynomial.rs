//! Dimension polynomials of translates of the simple factors of Z(0).

use modlie::envalg::{baby_verma, dimension_polynomial, PChar, RestrictedLie};
use modlie::fplinalg::composition_factors;
use modlie::rootdata::Weight;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lie = RestrictedLie::new(2, 5)?;
    let chi = PChar::zero(&lie);
    let zero = Weight(vec![0]);
    let z = baby_verma(&lie, &chi, &zero)?;
    for f in composition_factors(&z, 0)? {
        let dp = dimension_polynomial(&lie, &chi, &zero, &f.module)?;
        println!("L of dim {}: d(mu) = {}, d0(nu) = {}", f.dim(), dp.d, dp.d0);
    }
    Ok(())
}
