// Homogeneous polynomial functors and their monomial orbit pieces.

use std::error::Error;

use excisive::diagramlimits::{is_strongly_cartesian, is_weakly_cartesian};
use excisive::exactlin::RingSpec;
use excisive::pointedsets::HypercubeSpec;
use excisive::polyfunctors::{build_p, monomial_basis, monomial_orbit_decomposition};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let basis: Vec<String> = monomial_basis(2, 2, 2).iter().map(|m| m.to_string()).collect();
    println!("degree 2 monomials in 2 colours on 2 slots: {}", basis.join(", "));

    for (n, d) in [(1, 1), (1, 2), (2, 2), (1, 3)] {
        let spec = HypercubeSpec::new(vec![1; d + 1])?;
        let dec = monomial_orbit_decomposition(n, d, &spec)?;
        let g = build_p(RingSpec::Rationals, n, d, d + 1);
        println!(
            "P({n},{d}): {} pieces, weakly cartesian {} ({}), strongly cartesian {} ({})",
            dec.pieces.len(),
            dec.weakly_cartesian,
            is_weakly_cartesian(&g, &spec)?,
            dec.strongly_cartesian,
            is_strongly_cartesian(&g, &spec)?
        );
        if let Some((piece, vertex, b, c)) = dec.square_witness {
            println!("  square at vertex {vertex:#b}, blocks {b},{c} fails on {}", dec.pieces[piece].monomial);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
