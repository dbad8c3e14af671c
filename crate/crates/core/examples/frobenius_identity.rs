//! Euler characteristic under Frobenius pullback, on a box of weights.

use modlie::eulerbwb::frobenius_identity_check;
use modlie::rootdata::{RootDatum, Weight};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rd = RootDatum::type_a(2);
    let p = 7;
    let mut checked = 0;
    for a in -2..=2 {
        for b in -2..=2 {
            assert!(frobenius_identity_check(&rd, &Weight(vec![a, b]), p)?);
            checked += 1;
        }
    }
    println!("identity holds for {checked} weights at p = {p}");
    Ok(())
}
