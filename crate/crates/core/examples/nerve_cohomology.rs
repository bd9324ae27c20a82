// H^0 and H^1 of the surjection category with functor coefficients.

use std::error::Error;

use excisive::diagramlimits::derived_limits;
use excisive::exactlin::RingSpec;
use excisive::functorcalc::{constant_functor, ind_constant};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let q = RingSpec::Rationals;
    let constant = constant_functor(q, 3, 1);
    let induced = ind_constant(q, 3);
    for ell in 1..=3 {
        let a = derived_limits(&constant, ell)?;
        let b = derived_limits(&induced, ell)?;
        println!(
            "l = {ell}: constant H0 {} H1 {}; Ind(const) H0 {} H1 {} (cochains {:?})",
            a.h0, a.h1, b.h0, b.h1, b.cochain_ranks
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
