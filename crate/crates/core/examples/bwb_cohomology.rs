//! Cohomology of line bundles on the flag variety of SL3.

use modlie::eulerbwb::{bwb, line_cohomology};
use modlie::rootdata::{RootDatum, Weight};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rd = RootDatum::type_a(2);
    for lambda in [[0, 0], [-1, -1], [-2, 1], [-5, -5]] {
        let w = Weight(lambda.to_vec());
        println!("O({lambda:?}): {:?}  {:?}", bwb(&rd, &w)?, line_cohomology(&rd, &w)?);
    }
    Ok(())
}
