// Ind and Prim on a random functor on surjections.

use std::error::Error;

use excisive::exactlin::RingSpec;
use excisive::functorcalc::random::{random_surj_functor, RandomOptions};
use excisive::functorcalc::{ind, ind_prim_isomorphism, prim, validate};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for ring in [RingSpec::Rationals, RingSpec::PrimeField(5), RingSpec::Integers] {
        let f = random_surj_functor(ring, 4, &RandomOptions::default(), &mut rng).functor;
        let g = ind(&f);
        let back = prim(&g);
        let (_, iso) = ind_prim_isomorphism(&g)?;
        println!(
            "{ring}: F ranks {:?}, Ind F ranks {:?}, Prim Ind F ranks {:?}, valid {}, iso {}",
            f.ranks(),
            g.ranks(),
            back.ranks(),
            validate(&g).is_valid(),
            iso.is_isomorphism()
        );
        assert_eq!(back.ranks(), f.ranks());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
