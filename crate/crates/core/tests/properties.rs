use kform_core::action::{act, reynolds, ExtPoly};
use kform_core::bertini::{derived_seed, sample_form};
use kform_core::construct::fixed_locus_ideal;
use kform_core::fields::{ExtElement, Field, GaloisExtension, PrimeField, Rationals, SimpleExtension};
use kform_core::groups::{FiniteGroup, GroupExtension, GroupHom};
use kform_core::ideals::{projective_dimension, GbBudget};
use kform_core::linalg::Matrix;
use kform_core::poly::{twist_coefficients, Monomial, MultiPoly};
use kform_core::rep::SemilinearRep;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn f5() -> PrimeField {
    PrimeField::new(5).unwrap()
}

fn gaussian() -> GaloisExtension<Rationals> {
    let q = Rationals;
    let m = vec![q.one(), q.zero(), q.one()];
    let k = SimpleExtension::new(q, m.clone()).unwrap();
    let x = k.generator();
    GaloisExtension::new(q, m, vec![x.clone(), k.neg(&x)], FiniteGroup::cyclic(2), &[0, 1]).unwrap()
}

/// `F_25 = F_5[x]/(x^2 - 2)` with Frobenius `x -> -x`.
fn f25() -> GaloisExtension<PrimeField> {
    GaloisExtension::new(
        f5(),
        vec![3, 0, 1],
        vec![ExtElement(vec![0, 1].into()), ExtElement(vec![0, 4].into())],
        FiniteGroup::cyclic(2),
        &[0, 1],
    )
    .unwrap()
}

/// `Z/4` acting on `P^1` over `F_25` with the odd elements acting by Frobenius.
fn twisted_z4() -> SemilinearRep<PrimeField> {
    let grp = GroupExtension {
        g: FiniteGroup::cyclic(2),
        e: FiniteGroup::cyclic(4),
        gamma: FiniteGroup::cyclic(2),
        iota: GroupHom::new(vec![0, 2]),
        pi: GroupHom::new(vec![0, 1, 0, 1]),
    };
    SemilinearRep::from_generators(f25(), grp, vec![(1, Matrix::from_rows(vec![vec![2, 0], vec![0, 1]]))]).unwrap()
}

/// Regular representation of `S_3` over `F_5`.
fn s3_regular() -> SemilinearRep<PrimeField> {
    SemilinearRep::regular(GaloisExtension::trivial(f5()), GroupExtension::geometric(FiniteGroup::symmetric(3))).unwrap()
}

fn ext_elem(k: &GaloisExtension<PrimeField>, a: u32, b: u32) -> ExtElement<u32> {
    k.from_coords(&[a % 5, b % 5])
}

/// A form of degree `deg` from a coefficient list, cycling through the monomials.
fn ext_form(k: &GaloisExtension<PrimeField>, nvars: usize, deg: u32, coeffs: &[(u32, u32)]) -> ExtPoly<PrimeField> {
    let monos = kform_core::poly::monomial_basis(nvars, deg);
    let terms = coeffs.iter().zip(monos.iter().cycle()).map(|(&(a, b), m)| (m.clone(), ext_elem(k, a, b))).collect();
    MultiPoly::from_terms(k, nvars, terms)
}

fn mat5(entries: &[u32], n: usize) -> Matrix<u32> {
    Matrix::from_fn(n, n, |i, j| entries[i * n + j] % 5)
}

fn coeffs(n: usize) -> impl Strategy<Value = Vec<(u32, u32)>> {
    prop::collection::vec((0u32..5, 0u32..5), 1..n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugation_is_a_ring_map(a in -9i64..9, b in -9i64..9, c in -9i64..9, d in -9i64..9) {
        let k = gaussian();
        let q = Rationals;
        let x = k.from_coords(&[q.from_i64(a), q.from_i64(b)]);
        let y = k.from_coords(&[q.from_i64(c), q.from_i64(d)]);
        let s = |z: &ExtElement<_>| k.apply_automorphism(1, z);
        prop_assert_eq!(s(&k.mul(&x, &y)), k.mul(&s(&x), &s(&y)));
        prop_assert_eq!(s(&k.add(&x, &y)), k.add(&s(&x), &s(&y)));
        prop_assert_eq!(s(&s(&x)), x.clone());
        prop_assert_eq!(k.is_base(&k.mul(&x, &s(&x))), true);
    }

    #[test]
    fn substitution_composes(cs in coeffs(10), m in prop::collection::vec(0u32..5, 9), n in prop::collection::vec(0u32..5, 9)) {
        let f = f5();
        let p = MultiPoly::from_terms(
            &f,
            3,
            cs.iter().zip(kform_core::poly::monomial_basis(3, 3).iter()).map(|(&(a, _), mono)| (mono.clone(), a)).collect(),
        );
        let (m, n) = (mat5(&m, 3), mat5(&n, 3));
        let lhs = p.substitute_linear(&f, &m.mul(&f, &n)).unwrap();
        let rhs = p.substitute_linear(&f, &n).unwrap().substitute_linear(&f, &m).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitution_matches_evaluation(cs in coeffs(10), m in prop::collection::vec(0u32..5, 9), v in prop::collection::vec(0u32..5, 3)) {
        let k = f25();
        let p = ext_form(&k, 3, 2, &cs);
        let m = mat5(&m, 3).map(|c| k.embed(c));
        let v: Vec<_> = v.iter().map(|&c| k.embed(&c)).collect();
        // v * M as a row vector
        let vm: Vec<_> = (0..3).map(|i| (0..3).fold(k.zero(), |acc, j| k.add(&acc, &k.mul(&v[j], m.get(j, i))))).collect();
        prop_assert_eq!(p.substitute_linear(&k, &m).unwrap().eval(&k, &v), p.eval(&k, &vm));
    }

    #[test]
    fn twist_commutes_with_rational_substitution(cs in coeffs(10), m in prop::collection::vec(0u32..5, 9)) {
        let k = f25();
        let p = ext_form(&k, 3, 2, &cs);
        let m = mat5(&m, 3).map(|c| k.embed(c));
        let lhs = twist_coefficients(&p.substitute_linear(&k, &m).unwrap(), &k, 1);
        let rhs = twist_coefficients(&p, &k, 1).substitute_linear(&k, &m).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn twisted_action_axioms(cs in coeffs(6), ds in coeffs(6), g in 0usize..4, h in 0usize..4, a in 0u32..5, b in 0u32..5) {
        let rep = twisted_z4();
        let k = rep.ext().clone();
        let e = rep.grpext().e.clone();
        let p = ext_form(&k, 2, 2, &cs);
        let q = ext_form(&k, 2, 2, &ds);
        prop_assert_eq!(act(&rep, e.identity(), &p), p.clone());
        prop_assert_eq!(act(&rep, g, &act(&rep, h, &p)), act(&rep, e.mul(g, h), &p));
        prop_assert_eq!(act(&rep, g, &p.mul(&k, &q)), act(&rep, g, &p).mul(&k, &act(&rep, g, &q)));
        let c = ext_elem(&k, a, b);
        // semilinear: scalars are twisted along with the coefficients
        let lin = act(&rep, g, &p.scale(&k, &c).add(&k, &q));
        let expect = act(&rep, g, &p).scale(&k, &k.apply_automorphism(rep.pi(g), &c)).add(&k, &act(&rep, g, &q));
        prop_assert_eq!(lin, expect);
    }

    #[test]
    fn reynolds_projects_onto_invariants(cs in coeffs(8), g in 0usize..4) {
        let rep = twisted_z4();
        let k = rep.ext().clone();
        let p = ext_form(&k, 2, 3, &cs);
        let r = reynolds(&rep, &p).unwrap();
        prop_assert_eq!(reynolds(&rep, &r).unwrap(), r.clone());
        prop_assert_eq!(act(&rep, g, &r), r);
    }

    #[test]
    fn nonabelian_action_axioms(cs in coeffs(12), g in 0usize..6, h in 0usize..6) {
        let rep = s3_regular();
        let f = f5();
        let k = rep.ext().clone();
        let e = rep.grpext().e.clone();
        let p = MultiPoly::from_terms(
            &k,
            6,
            cs.iter().zip(kform_core::poly::monomial_basis(6, 2).iter().step_by(2)).map(|(&(a, _), m)| (m.clone(), k.embed(&(a % f.p())))).collect(),
        );
        prop_assert_eq!(act(&rep, g, &act(&rep, h, &p)), act(&rep, e.mul(g, h), &p));
        let r = reynolds(&rep, &p).unwrap();
        prop_assert_eq!(act(&rep, g, &r), r);
    }

    #[test]
    fn fast_bad_locus_matches_groebner(n in prop::sample::select(vec![2usize, 3, 4]), p in prop::sample::select(vec![3u64, 5, 7, 13]), blocks in prop::collection::vec((any::<bool>(), 0usize..4), 1..4)) {
        prop_assume!(p % n as u64 != 0);
        let f = PrimeField::new(p).unwrap();
        // a primitive n-th root of unity in F_p if there is one, else 1
        let root = (1..p as u32).find(|&w| (1..=n as u32).map(|k| f.pow(&w, k as u64)).position(|x| x == 1) == Some(n - 1)).unwrap_or(1);
        let mut diag_or_perm: Vec<Vec<u32>> = Vec::new();
        let mut size = 0;
        for &(perm, k) in &blocks {
            if perm {
                diag_or_perm.push(Vec::new());
                size += n;
            } else {
                diag_or_perm.push(vec![f.pow(&root, k as u64)]);
                size += 1;
            }
        }
        let mut gen = Matrix::from_fn(size, size, |_, _| 0u32);
        let mut at = 0;
        for block in &diag_or_perm {
            if let [c] = block[..] {
                gen.set(at, at, c);
                at += 1;
            } else {
                for i in 0..n {
                    gen.set(at + (i + 1) % n, at + i, 1);
                }
                at += n;
            }
        }
        prop_assume!(size >= 2);
        let grp = GroupExtension::geometric(FiniteGroup::cyclic(n));
        let rep = SemilinearRep::from_generators(GaloisExtension::trivial(f), grp, vec![(1, gen)]).unwrap();
        let k = rep.ext().field().clone();
        for g in 1..n {
            let fast = rep.bad_locus_dim_fast(g).unwrap();
            let gb = projective_dimension(&k, &fixed_locus_ideal(&rep, g), &GbBudget::default()).unwrap();
            prop_assert_eq!(fast, gb, "element {} of Z/{} over F_{}", g, n, p);
        }
    }

    #[test]
    fn sampling_is_seed_deterministic(seed in any::<u64>(), restart in 0u32..8) {
        let f = f5();
        let s = derived_seed(seed, restart);
        prop_assert_ne!(s, derived_seed(seed, restart + 1));
        let draw = |s: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            (0..3).map(|_| sample_form(&f, 4, 2, 1, &mut rng)).collect::<Vec<_>>()
        };
        let a = draw(s);
        prop_assert_eq!(&a, &draw(s));
        prop_assert!(a.iter().all(|h| h.is_homogeneous() && h.total_degree() == Some(2)));
    }
}

#[test]
fn monomial_substitution_is_a_relabelling() {
    let f = f5();
    let p = MultiPoly::from_terms(&f, 2, vec![(Monomial::new(&[2, 1]), 1), (Monomial::new(&[0, 3]), 2)]);
    let swap = Matrix::from_rows(vec![vec![0, 3], vec![1, 0]]);
    // T0 -> T1, T1 -> 3 T0
    let got = p.substitute_linear(&f, &swap).unwrap();
    assert_eq!(got.format(&f, 'T'), "4*T0^3 + 3*T0*T1^2");
}
