//! Composition factors of the restricted baby Verma Z(0) for sl2 at p = 5.

use modlie::envalg::{baby_verma, PChar, RestrictedLie};
use modlie::fplinalg::composition_factors;
use modlie::rootdata::Weight;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lie = RestrictedLie::new(2, 5)?;
    let z = baby_verma(&lie, &PChar::zero(&lie), &Weight(vec![0]))?;
    let factors = composition_factors(&z, 1)?;
    println!("dim Z(0) = {}", z.dim());
    for f in &factors {
        println!("  factor of dim {}", f.dim());
    }
    Ok(())
}
