// Excision, truncated cube limits and reconstruction from a skeleton.

use std::error::Error;

use excisive::diagramlimits::{cube_reconstruct, is_n_excisive, skeleton_of, truncated_cube_limit};
use excisive::exactlin::RingSpec;
use excisive::pointedsets::HypercubeSpec;
use excisive::polyfunctors::build_p;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let q = RingSpec::Rationals;
    let p = build_p(q, 1, 2, 4);
    println!("P(1,2): 1-excisive {}, 2-excisive {}", is_n_excisive(&p, 1), is_n_excisive(&p, 2));

    let c = truncated_cube_limit(&p, &HypercubeSpec::new(vec![1, 1, 1, 1])?, 2)?;
    println!("height <= 2 limit rank {}, top rank {}, iso {}", c.limit_rank, c.source_rank, c.iso);

    for (d, n) in [(2, 4), (3, 4)] {
        let g = build_p(q, 1, d, n);
        let r = cube_reconstruct(&skeleton_of(&g, n)?)?;
        let cert = r.certify(&g)?;
        println!(
            "degree {d} at n = {n}: rebuilt rank {}, actual {}, iso {}, injective {}",
            r.rank,
            g.rank(n),
            cert.iso,
            cert.injective
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
