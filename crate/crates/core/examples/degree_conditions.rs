// The four equivalent degree conditions on random polynomial functors.

use std::error::Error;

use excisive::exactlin::RingSpec;
use excisive::functorcalc::random::random_polynomial_functor;
use excisive::functorcalc::{check_condition, degree, Condition};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for d in 0..=3 {
        let g = random_polynomial_functor(RingSpec::Rationals, 4, d, &mut rng);
        print!("degree {} functor, ranks {:?}:", degree(&g), g.ranks());
        for n in 0..=3 {
            let verdicts: Vec<bool> = Condition::ALL.iter().map(|&c| check_condition(&g, n, c)).collect();
            assert!(verdicts.iter().all(|&v| v == verdicts[0]));
            print!(" n={n}:{}", if verdicts[0] { "yes" } else { "no" });
        }
        println!();
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
