//! Builds baby Verma modules for a regular nilpotent p-character and checks
//! the defining relations.

use modlie::envalg::{baby_verma, PChar, RestrictedLie};
use modlie::rootdata::Weight;
use modlie::springer::Partition;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lie = RestrictedLie::new(3, 5)?;
    let chi = PChar::from_partition(&lie, Partition::new(vec![3])?)?;
    for mu in [[0, 0], [1, 3], [4, 4]] {
        let z = baby_verma(&lie, &chi, &Weight(mu.to_vec()))?;
        println!(
            "Z_chi({mu:?}): dim {}, brackets {}, p-character {}",
            z.dim(),
            lie.bracket_relations_hold(&z, true)?,
            lie.frobenius_contract_holds(&z, &chi)?,
        );
    }
    Ok(())
}
