// Kernels, ranks and Smith normal form over Q, F_p and Z.

use std::error::Error;

use excisive::exactlin::{kernel_basis, rank, smith_normal_form, solve, ExactMatrix, RingSpec};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let values = [2, 4, 6, 1, 2, 3, 0, 1, 1];
    for ring in [RingSpec::Rationals, RingSpec::PrimeField(3), RingSpec::Integers] {
        let m = ExactMatrix::from_i64(ring, 3, 3, &values);
        let k = kernel_basis(&m);
        println!("over {ring}: rank {}, kernel basis\n{k}", rank(&m));
        assert!((&m * &k).is_zero());
    }

    // Over Z the cokernel of this map is Z/2 ⊕ Z/6, visible in the invariants.
    let z = ExactMatrix::from_i64(RingSpec::Integers, 2, 2, &[2, 0, 0, 6]);
    let snf = smith_normal_form(&z)?;
    println!("Smith invariants {:?}", snf.invariants);

    let q = ExactMatrix::from_i64(RingSpec::Rationals, 2, 2, &[2, 1, 1, 1]);
    let b = ExactMatrix::from_i64(RingSpec::Rationals, 2, 1, &[1, 0]);
    let x = solve(&q, &b)?.ok_or("system is consistent")?;
    println!("solution of q x = b:\n{x}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
