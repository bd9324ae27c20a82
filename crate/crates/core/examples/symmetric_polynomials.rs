// The three-variable symmetric polynomial implication and its failure
// in characteristic p.

use std::error::Error;

use excisive::exactlin::RingSpec;
use excisive::polyfunctors::{charp_counterexample, sym_poly_implication};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for d in 1..=8 {
        let s = sym_poly_implication(RingSpec::Rationals, d)?;
        println!("Q, degree {d}: admissible dimension {}, zero map {}", s.space_dim, s.map_is_zero);
    }
    let s = sym_poly_implication(RingSpec::PrimeField(5), 5)?;
    if let (Some(w), Some(v)) = (&s.witness, &s.witness_value) {
        println!("F_5, degree 5: f = {w}, f(x,x,x) = {v}");
    }
    for p in [5, 7, 11] {
        let c = charp_counterexample(p)?;
        println!("p = {p}: f(x,x,y) = {}, f(x,x,x) = {}", c.g, c.h);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
