mod exact_linear_algebra {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/exact_linear_algebra.rs"));
}

#[test]
fn exact_linear_algebra_runs() {
    exact_linear_algebra::run_example().expect("exact_linear_algebra example should run");
}

mod pointed_sets {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/pointed_sets.rs"));
}

#[test]
fn pointed_sets_runs() {
    pointed_sets::run_example().expect("pointed_sets example should run");
}

mod ind_prim {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/ind_prim.rs"));
}

#[test]
fn ind_prim_runs() {
    ind_prim::run_example().expect("ind_prim example should run");
}

mod degree_conditions {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/degree_conditions.rs"));
}

#[test]
fn degree_conditions_runs() {
    degree_conditions::run_example().expect("degree_conditions example should run");
}

mod surjection_limits {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/surjection_limits.rs"));
}

#[test]
fn surjection_limits_runs() {
    surjection_limits::run_example().expect("surjection_limits example should run");
}

mod cubes_and_paring {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/cubes_and_paring.rs"));
}

#[test]
fn cubes_and_paring_runs() {
    cubes_and_paring::run_example().expect("cubes_and_paring example should run");
}

mod monomial_functors {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/monomial_functors.rs"));
}

#[test]
fn monomial_functors_runs() {
    monomial_functors::run_example().expect("monomial_functors example should run");
}

mod symmetric_polynomials {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/symmetric_polynomials.rs"));
}

#[test]
fn symmetric_polynomials_runs() {
    symmetric_polynomials::run_example().expect("symmetric_polynomials example should run");
}

mod nerve_cohomology {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/nerve_cohomology.rs"));
}

#[test]
fn nerve_cohomology_runs() {
    nerve_cohomology::run_example().expect("nerve_cohomology example should run");
}

mod spec_files {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/spec_files.rs"));
}

#[test]
fn spec_files_runs() {
    spec_files::run_example().expect("spec_files example should run");
}
