//! Point counts of Springer fibers in type A.

use modlie::springer::{poincare_fit, springer_fiber_dim, Partition};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for n in 1..=4 {
        for lambda in Partition::all(n) {
            let fit = poincare_fit(&lambda)?;
            println!("{:>9}  dim {}  {}  (total {})", lambda.to_string(), springer_fiber_dim(&lambda), fit.display_poly(), fit.total);
        }
    }
    Ok(())
}
