//! Enumerates the simple modules in the principal block of sl3 at p = 5 and
//! compares the count with the Springer fiber.

use modlie::envalg::{simples_in_block, PChar, RestrictedLie};
use modlie::rootdata::Weight;
use modlie::springer::Partition;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lie = RestrictedLie::new(3, 5)?;
    for parts in [vec![1, 1, 1], vec![2, 1]] {
        let chi = PChar::from_partition(&lie, Partition::new(parts)?)?;
        let block = simples_in_block(&lie, &chi, &Weight::zero(2), 0)?;
        println!("{}: {} simples, predicted {}, dims {:?}", block.partition, block.count(), block.predicted, block.dims());
        for s in &block.simples {
            println!("  highest weights {:?}", s.highest_weights);
        }
    }
    Ok(())
}
