// Limits over nonempty finite sets with surjections: vanishing for
// bounded degree, and the non-injective comparison without it.

use std::error::Error;

use excisive::diagramlimits::{check_vanishing, counterexample_family, limit_over_surjections};
use excisive::exactlin::RingSpec;
use excisive::functorcalc::ind_constant;
use excisive::functorcalc::random::random_polynomial_functor;
use excisive::polyfunctors::build_p;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let p = build_p(RingSpec::Rationals, 1, 2, 4);
    let lim = limit_over_surjections(&p, 4)?;
    println!("P(1,2), l = 4: limit rank {}, iso {}", lim.rank(), lim.comparison_is_iso());

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 0..=2 {
        let g = random_polynomial_functor(RingSpec::PrimeField(7), 5, n, &mut rng);
        let v = check_vanishing(&g, n, n + 2)?;
        println!("degree <= {n}: limit rank {}, G(*) rank {}, iso {}", v.limit_rank, v.base_rank, v.iso);
    }

    let g = ind_constant(RingSpec::Integers, 4);
    for ell in 1..=4 {
        let c = counterexample_family(&g, ell)?;
        println!(
            "Ind(const), l = {ell}: family compatible {}, maps to zero {}, nonzero {}",
            c.compatible, c.comparison_zero, c.nonzero
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
