use std::sync::Arc;

use crate::exactlin::{cokernel_projection, kernel_basis, left_inverse, ExactMatrix};
use crate::pointedsets::subsets_in_order;

use super::data::{FunctorData, InducedRule, NatTransform, SurjFunctorData};
use super::indprim::ind;
use super::FunctorError;

/// Pointwise kernel of `t`, with the induced action in the kernel bases.
pub fn nat_kernel(t: &NatTransform) -> FunctorData {
    let g = t.source();
    let inject: Vec<ExactMatrix> = t.components().iter().map(kernel_basis).collect();
    let project = inject.iter().map(|k| left_inverse(k).expect("kernels are direct summands")).collect();
    let ranks = inject.iter().map(|k| k.cols()).collect();
    let rule = InducedRule { base: g.clone(), inject, project, name: "kernel" };
    FunctorData::from_rule(g.ring(), g.max_size(), ranks, Arc::new(rule))
}

/// Pointwise cokernel of `t`. Over Z every cokernel must be free.
pub fn nat_cokernel(t: &NatTransform) -> Result<FunctorData, FunctorError> {
    let g = t.target();
    let mut inject = Vec::new();
    let mut project = Vec::new();
    for c in t.components() {
        let (pi, s) = cokernel_projection(c)?;
        project.push(pi);
        inject.push(s);
    }
    let ranks = project.iter().map(|p| p.rows()).collect();
    let rule = InducedRule { base: g.clone(), inject, project, name: "cokernel" };
    Ok(FunctorData::from_rule(g.ring(), g.max_size(), ranks, Arc::new(rule)))
}

/// `Ind` of a natural transformation `F → F'` of surjection functors, given
/// by its components; block diagonal over subsets.
pub fn ind_nat(
    source: &SurjFunctorData,
    target: &SurjFunctorData,
    components: &[ExactMatrix],
) -> Result<NatTransform, FunctorError> {
    let (a, b) = (ind(source), ind(target));
    let comps = (0..=source.max_size())
        .map(|m| {
            let blocks: Vec<&ExactMatrix> =
                subsets_in_order(m).iter().map(|s| &components[s.count_ones() as usize]).collect();
            ExactMatrix::block_diag(source.ring(), &blocks)
        })
        .collect();
    NatTransform::new(a, b, comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{LinAlgError, RingSpec};
    use crate::functorcalc::{constant_surj, degree, ind_constant, validate};

    #[test]
    fn kernel_of_identity_and_zero() {
        let g = ind_constant(RingSpec::Rationals, 3);
        let k = nat_kernel(&NatTransform::identity(&g));
        assert!(k.ranks().iter().all(|&r| r == 0));
        let k = nat_kernel(&NatTransform::zero(&g, &g).unwrap());
        assert_eq!(k.ranks(), g.ranks());
        assert!(validate(&k).is_valid());
    }

    #[test]
    fn cokernel_of_scalar_two_over_z_is_not_free() {
        let z = RingSpec::Integers;
        let f = constant_surj(z, 2);
        let two: Vec<ExactMatrix> = f.ranks().iter().map(|&r| ExactMatrix::identity(z, r).scale(2)).collect();
        let t = ind_nat(&f, &f, &two).unwrap();
        assert!(matches!(nat_cokernel(&t), Err(FunctorError::Linalg(LinAlgError::NonFreeCokernel(_)))));
    }

    #[test]
    fn cokernel_degree_does_not_grow() {
        let q = RingSpec::Rationals;
        let f = constant_surj(q, 3);
        let comps: Vec<ExactMatrix> =
            (0..=3)
                .map(|m| {
                    if m >= 2 {
                        ExactMatrix::identity(q, f.rank(m))
                    } else {
                        ExactMatrix::zeros(q, f.rank(m), f.rank(m))
                    }
                })
                .collect();
        // zero at sizes < 2 is not natural for the constant functor
        assert!(ind_nat(&f, &f, &comps).is_err());
        let t = NatTransform::identity(&ind(&f));
        let c = nat_cokernel(&t).unwrap();
        assert!(degree(&c) <= degree(t.source()));
    }
}
