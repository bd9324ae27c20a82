// Pointed maps, surjection counts and special hypercubes.

use std::error::Error;

use excisive::pointedsets::{
    enumerate_surjections, phi_map, psi_map, smash, special_hypercube, HypercubeSpec, PointedMap,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let f = PointedMap::new(2, vec![1, 0, 2])?;
    let g = PointedMap::new(2, vec![2, 1])?;
    println!("f = {f}, g = {g}, g o f = {}", g.compose(&f)?);
    println!("f smash g = {}", smash(&f, &g));

    // psi after phi is the identity on the subset.
    let phi = phi_map(4, &[1, 3])?;
    let psi = psi_map(4, &[1, 3])?;
    println!("psi o phi = {}", psi.compose(&phi)?);

    for m in 1..=5 {
        let counts: Vec<usize> = (1..=m).map(|k| enumerate_surjections(m, k).len()).collect();
        println!("surjections out of [{m}]: {counts:?}");
    }

    let cube = special_hypercube(&HypercubeSpec::new(vec![1, 2, 1])?);
    println!(
        "cube on blocks {:?}: {} vertices, {} edges, strongly cocartesian {}",
        cube.spec().blocks(),
        cube.vertices().len(),
        cube.edges().len(),
        cube.is_strongly_cocartesian(5)
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
