use proptest::prelude::*;

use templikit::cli::format::{parse_instance, serialize_instance};
use templikit::coeff::{finite_limit, normal_form, Diagram, Elem, Matrix, Module, Morphism, Ring, RingExtension, Track};
use templikit::constructors::{free_templicial, generate, nerve, LinearCategory, Profile, SimplicialSetTrunc};
use templikit::deform::{base_change_necklicial, base_change_templicial};
use templikit::kan::{
    check_deg_projective, check_levelwise, check_lifts_wings_templicial, check_quasicategory, ez_check, Levelwise,
};
use templikit::necklace::{necklace_maps, necklaces_up_to};
use templikit::quiver::Quiver;
use templikit::templicial::{hom_necklicial_at, validate_all_homs, validate_templicial};

fn rings() -> Vec<Ring> {
    ["Z", "Q", "F_3", "Z/8", "F_2[e]/(e^2)", "F_3[e]/(e^3)"].iter().map(|s| s.parse().unwrap()).collect()
}

fn matrix(ring: &Ring, rows: usize, cols: usize, seed: &[i64]) -> Matrix {
    let data = (0..rows * cols).map(|i| ring.from_i64(seed[i % seed.len()] * (i as i64 % 3 - 1))).collect();
    Matrix::from_vec(rows, cols, data)
}

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cfg(64))]

    #[test]
    fn normal_form_reconstructs(r in 0usize..6, rows in 1usize..5, cols in 1usize..5,
                                seed in prop::collection::vec(-9i64..10, 1..20)) {
        let ring = &rings()[r];
        let a = matrix(ring, rows, cols, &seed);
        let nf = normal_form(ring, &a, Track::BOTH);
        let back = nf.left().unwrap().mul(ring, &nf.d).mul(ring, nf.right().unwrap());
        prop_assert_eq!(back, a.clone());
        let p = nf.p.as_ref().unwrap().mul(ring, &a).mul(ring, nf.q.as_ref().unwrap());
        prop_assert_eq!(p, nf.d.clone());
        // off-diagonal zero
        for i in 0..rows {
            for j in 0..cols {
                if i != j {
                    prop_assert!(ring.is_zero(&nf.d[(i, j)]));
                }
            }
        }
    }

    #[test]
    fn analyze_is_consistent(r in 0usize..6, rows in 1usize..5, cols in 1usize..5,
                             seed in prop::collection::vec(-9i64..10, 1..20)) {
        let ring = &rings()[r];
        let f = Morphism::new(Module::free(ring, cols), Module::free(ring, rows), matrix(ring, rows, cols, &seed)).unwrap();
        let an = f.analyze();
        // f kills the kernel, and the cokernel projection kills the image
        prop_assert!(f.compose(&an.kernel_inclusion).unwrap().is_zero());
        prop_assert!(an.cokernel_projection.compose(&f).unwrap().is_zero());
        // domain / kernel ≅ image for free domains: lengths add up over fields
        if ring.is_field() {
            prop_assert_eq!(an.kernel.gens() + an.image.gens(), cols);
        }
        prop_assert_eq!(an.surjective, an.cokernel.is_zero());
        if an.surjective {
            prop_assert!(an.cokernel_projection.codomain().is_zero());
        }
    }

    #[test]
    fn base_change_keeps_surjections(rows in 1usize..4, extra in 0usize..3,
                                     seed in prop::collection::vec(-9i64..10, 1..20)) {
        let z8: Ring = "Z/8".parse().unwrap();
        let z2: Ring = "Z/2".parse().unwrap();
        let theta = RingExtension::new(&z8, &z2).unwrap();
        // [I | A] is surjective
        let a = Matrix::identity(&z8, rows).hstack(&matrix(&z8, rows, extra, &seed));
        let f = Morphism::new(Module::free(&z8, rows + extra), Module::free(&z8, rows), a).unwrap();
        prop_assert!(f.is_surjective());
        prop_assert!(theta.base_change_morphism(&f).unwrap().is_surjective());
        let m = Module::free(&z8, rows);
        prop_assert_eq!(theta.base_change(&m).unwrap().free_rank(), rows);
    }

    #[test]
    fn limit_cone_commutes_and_factors_uniquely(seed in prop::collection::vec(-4i64..5, 2..12), n in 1usize..4) {
        let ring: Ring = "Z".parse().unwrap();
        // pullback of f, g: Z^n → Z^n
        let m = Module::free(&ring, n);
        let f = Morphism::new(m.clone(), m.clone(), matrix(&ring, n, n, &seed)).unwrap();
        let g = Morphism::new(m.clone(), m.clone(), matrix(&ring, n, n, &seed[1..])).unwrap();
        let mut d = Diagram::new(&ring);
        let (a, b, c) = (d.add_object(m.clone()), d.add_object(m.clone()), d.add_object(m.clone()));
        d.add_arrow(a, c, f.clone());
        d.add_arrow(b, c, g.clone());
        let l = finite_limit(&d).unwrap();
        prop_assert_eq!(f.compose(&l.cone[a]).unwrap(), l.cone[c].clone());
        prop_assert_eq!(g.compose(&l.cone[b]).unwrap(), l.cone[c].clone());
        // the limit cone factors through itself by the identity
        let u = l.factor(&l.cone).unwrap();
        prop_assert_eq!(u, Morphism::identity(&l.module));
    }

    #[test]
    fn free_quiver_tensor_ranks(ranks in prop::collection::vec(0usize..3, 18)) {
        let ring: Ring = "F_5".parse().unwrap();
        let names: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let mut p = Quiver::zero(&ring, &names);
        let mut q = Quiver::zero(&ring, &names);
        for (i, (a, b)) in p.pairs().collect::<Vec<_>>().into_iter().enumerate() {
            p.set_hom(a, b, Module::free(&ring, ranks[i]));
            q.set_hom(a, b, Module::free(&ring, ranks[9 + i]));
        }
        let pq = p.tensor(&q).unwrap();
        for (a, c) in pq.pairs() {
            let want: usize = (0..3).map(|b| ranks[a * 3 + b] * ranks[9 + b * 3 + c]).sum();
            prop_assert_eq!(pq.hom(a, c).gens(), want);
        }
        // associativity up to reindexing, on invariant factors
        let l = pq.tensor(&p).unwrap();
        let r = p.tensor(&q.tensor(&p).unwrap()).unwrap();
        for (a, c) in l.pairs() {
            prop_assert!(l.hom(a, c).is_isomorphic(r.hom(a, c)));
        }
    }
}

proptest! {
    #![proptest_config(cfg(8))]

    #[test]
    fn validators_agree_on_generated(seed in 0u64..1000, which in 0usize..3) {
        let profile = match which {
            0 => Profile::NerveOfRandomAlgebra { p: 3, rank: 2 },
            1 => Profile::FreeOnRandomQuasicat { ring: "Z/4".parse().unwrap(), elements: 3 },
            _ => Profile::RandomPerturbation(Box::new(
                free_templicial(&SimplicialSetTrunc::simplex(2, 3), &"F_3".parse().unwrap(), 3).unwrap(),
            )),
        };
        let x = generate(seed, &profile, 3).unwrap();
        let t = validate_templicial(&x).unwrap().passed();
        let n = validate_all_homs(&x).unwrap().passed();
        prop_assert!(t && n);
        // canonical round trip
        let s = serialize_instance(&x, None);
        let back = parse_instance(&s).unwrap().module;
        prop_assert_eq!(serialize_instance(&back, None), s);
        prop_assert_eq!(back, x.clone());
        // property implications
        let kan = check_quasicategory(&x, 3).unwrap().passed();
        let wings = check_lifts_wings_templicial(&x, 3).unwrap().passed();
        prop_assert!(!kan || wings);
        if check_deg_projective(&x, 3).unwrap().passed() {
            prop_assert!(check_levelwise(&x, Levelwise::Projective).passed());
            prop_assert!(ez_check(&x, 3).unwrap().passed());
        }
    }

    #[test]
    fn base_change_commutes_with_constructions(c0 in 0u64..4, c1 in 0u64..4, seed in 0u64..1000) {
        let r: Ring = "F_2[e]/(e^2)".parse().unwrap();
        let k: Ring = "F_2".parse().unwrap();
        let theta = RingExtension::new(&r, &k).unwrap();
        let lower = [Elem::Res(c0), Elem::Res(c1)];
        let big = LinearCategory::polynomial_algebra(&r, &lower).unwrap();
        let small_lower: Vec<Elem> = lower.iter().map(|e| theta.reduce(e)).collect();
        let small = LinearCategory::polynomial_algebra(&k, &small_lower).unwrap();
        let x = nerve(&big, 3).unwrap();
        prop_assert_eq!(base_change_templicial(&theta, &x).unwrap(), nerve(&small, 3).unwrap());
        // hom_necklicial commutes with base change
        let lhs = hom_necklicial_at(&base_change_templicial(&theta, &x).unwrap(), 0, 0).unwrap();
        let rhs = base_change_necklicial(&theta, &hom_necklicial_at(&x, 0, 0).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        // free functor
        let z8: Ring = "Z/8".parse().unwrap();
        let z2: Ring = "Z/2".parse().unwrap();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let kset = templikit::constructors::random_poset_nerve(&mut rng, 3, 3).unwrap();
        let y = free_templicial(&kset, &z8, 3).unwrap();
        let t = RingExtension::new(&z8, &z2).unwrap();
        prop_assert_eq!(base_change_templicial(&t, &y).unwrap(), free_templicial(&kset, &z2, 3).unwrap());
    }
}

#[test]
fn necklace_composition_is_associative() {
    let ns = necklaces_up_to(3);
    for a in &ns {
        for b in &ns {
            for f in necklace_maps(a, b) {
                for c in &ns {
                    for g in necklace_maps(b, c) {
                        let gf = g.after(&f).unwrap();
                        for d in &ns {
                            for h in necklace_maps(c, d) {
                                assert_eq!(h.after(&gf).unwrap(), h.after(&g).unwrap().after(&f).unwrap());
                            }
                        }
                    }
                }
            }
        }
    }
}
