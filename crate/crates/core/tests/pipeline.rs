use kform_core::construct::{run_pipeline, PipelineParams};
use kform_core::fields::{ExtElement, GaloisExtension, PrimeField};
use kform_core::groups::{FiniteGroup, GroupExtension};
use kform_core::rep::SemilinearRep;

/// `F_25 = F_5[x]/(x^2 - 2)` with Frobenius `x -> -x`.
fn f25() -> GaloisExtension<PrimeField> {
    let f = PrimeField::new(5).unwrap();
    GaloisExtension::new(f, vec![3, 0, 1], vec![ExtElement(vec![0, 1].into()), ExtElement(vec![0, 4].into())], FiniteGroup::cyclic(2), &[0, 1])
        .unwrap()
}

/// Frobenius swapping the two coordinates of `P^1` over `F_25`.
fn pure_galois() -> SemilinearRep<PrimeField> {
    SemilinearRep::regular(f25(), GroupExtension::pure_galois(FiniteGroup::cyclic(2))).unwrap()
}

#[test]
fn pure_galois_surface_is_green() {
    let res = run_pipeline(&pure_galois(), &PipelineParams::new(2, 3)).unwrap();
    let c = &res.certificates;
    assert!(c.green);
    assert!(c.freeness.tested.is_empty());
    assert_eq!(res.slicing.gs.len(), res.rep.dim() - 1 - 2);
    assert!(c.descent.as_ref().unwrap().check.passed);
}

#[test]
fn same_seed_same_output() {
    let params = PipelineParams::new(2, 11);
    let a = run_pipeline(&pure_galois(), &params).unwrap();
    let b = run_pipeline(&pure_galois(), &params).unwrap();
    assert_eq!(a.slicing.gs, b.slicing.gs);
    assert_eq!(a.slicing.hs, b.slicing.hs);
    assert_eq!(a.certificates.without_timings(), b.certificates.without_timings());
}

#[test]
fn r_below_two_is_refused() {
    assert!(run_pipeline(&pure_galois(), &PipelineParams::new(1, 1)).is_err());
}
