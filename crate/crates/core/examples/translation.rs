//! Translation functors on baby Verma modules of sl2.

use modlie::envalg::{baby_verma, translate, PChar, RestrictedLie};
use modlie::rootdata::Weight;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lie = RestrictedLie::new(2, 5)?;
    let chi = PChar::zero(&lie);
    let z = baby_verma(&lie, &chi, &Weight(vec![0]))?;
    for mu in -1..=4 {
        let t = translate(&lie, &z, &Weight(vec![0]), &Weight(vec![mu]), &chi)?;
        println!("T_0^{mu} Z(0) has dim {}", t.dim());
    }
    let wall = baby_verma(&lie, &chi, &Weight(vec![-1]))?;
    let up = translate(&lie, &wall, &Weight(vec![-1]), &Weight(vec![0]), &chi)?;
    println!("T_-1^0 Z(-1) has dim {}", up.dim());
    Ok(())
}
