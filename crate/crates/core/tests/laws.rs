mod support;

use std::sync::Arc;

use proptest::prelude::*;
use sigma_cat::elements::{
    category_of_elements, check_discrete_fibration, elements_on_nat, is_in_product_set, pi_presheaf,
    product_set_indices, yoneda_slice_witness, FinSet, PresheafMap, SetFunction, SetPresheaf,
};
use sigma_cat::fincat::{check_strict_inverse_pair, enumerate_functors, functor_category};
use sigma_cat::grothendieck::{
    cat_product_set, commutativity_witness, constant_cat_presheaf, discretize, grothendieck, is_in_cat_product_set,
    product_category_pi, sigma_cr, sigma_dr,
};
use sigma_cat::testkit::{gen_category, GenParams};
use sigma_cat::theorems::{check_commutativity, check_theorem_ac, check_theorem_assoc, sigma_pq};
use sigma_cat::{Functor, Limits, Name};
use support::*;

fn seeds() -> impl Strategy<Value = u64> {
    any::<u64>()
}

fn small() -> GenParams {
    params(2, 2, 2)
}

/// Every natural endomorphism of `p`, by brute force over component tables.
fn endomorphisms(p: &SetPresheaf) -> Vec<PresheafMap> {
    let c = p.base();
    let per_object: Vec<Vec<Vec<usize>>> = (0..c.ob_count())
        .map(|a| {
            let n = p.value(a).len();
            product(&vec![(0..n).collect(); n])
        })
        .collect();
    let mut tables = vec![Vec::new()];
    for options in &per_object {
        tables = tables
            .into_iter()
            .flat_map(|t: Vec<Vec<usize>>| {
                options.iter().map(move |o| {
                    let mut t = t.clone();
                    t.push(o.clone());
                    t
                })
            })
            .collect();
    }
    tables
        .into_iter()
        .filter_map(|t| PresheafMap::new(p.clone(), p.clone(), t.into_iter().map(SetFunction::new).collect()).ok())
        .filter(|m| m.validate().is_ok())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, ..ProptestConfig::default() })]

    #[test]
    fn categories_and_derived_categories_validate(seed in seeds()) {
        let (c, d) = categories(&GenParams::default().with_seed(seed));
        prop_assert!(c.validate().is_ok());
        prop_assert!(c.opposite().validate().is_ok());
        prop_assert_eq!(c.opposite().opposite(), (*c).clone());
        prop_assert!(c.product(&d).validate().is_ok());
        for a in c.objects() {
            prop_assert!(c.slice(a).unwrap().validate().is_ok());
        }
    }

    #[test]
    fn functor_categories_validate(seed in seeds()) {
        let (c, d) = categories(&params(2, 3, 2).with_seed(seed));
        let fc = functor_category(&c, &d, &Limits::default()).unwrap();
        prop_assert!(fc.category.validate().is_ok());
        for f in &fc.functors {
            prop_assert!(f.validate().is_ok());
        }
    }

    #[test]
    fn strict_inverse_pairs_are_bijections(seed in seeds()) {
        let c = Arc::new(gen_category(&params(3, 3, 2).with_seed(seed)));
        let fs = enumerate_functors(&c, &c, &Limits::default()).unwrap();
        for f in fs.iter().take(40) {
            for g in fs.iter().take(40) {
                if check_strict_inverse_pair(f, g).unwrap() {
                    prop_assert!(f.is_bijective() && g.is_bijective());
                }
            }
        }
    }

    #[test]
    fn elements_category_laws(seed in seeds()) {
        let p = set_presheaf(&params(3, 5, 3).with_seed(seed)).unwrap();
        prop_assert!(p.validate().is_ok());
        let el = category_of_elements(&p).unwrap();
        prop_assert!(el.category.validate().is_ok());
        prop_assert_eq!(el.category.ob_count(), p.values().iter().map(FinSet::len).sum::<usize>());
        prop_assert!(el.projection.validate().is_ok());
        prop_assert!(check_discrete_fibration(&el.projection));
    }

    #[test]
    fn elements_is_functorial_on_natural_maps(seed in seeds()) {
        let p = set_presheaf(&params(2, 2, 2).with_seed(seed)).unwrap();
        let maps = endomorphisms(&p);
        let id = elements_on_nat(&PresheafMap::identity(&p)).unwrap();
        prop_assert!(id.is_identity());
        for eta in &maps {
            let e = elements_on_nat(eta).unwrap();
            prop_assert!(e.validate().is_ok());
            for theta in &maps {
                let both = elements_on_nat(&PresheafMap::vertical(theta, eta).unwrap()).unwrap();
                let composed = Functor::compose(&elements_on_nat(theta).unwrap(), &e).unwrap();
                prop_assert_eq!(both, composed);
            }
        }
    }

    #[test]
    fn yoneda_elements_are_slices(seed in seeds()) {
        let c = Arc::new(gen_category(&GenParams::default().with_seed(seed)));
        for a in c.objects() {
            let (f, g) = yoneda_slice_witness(&c, a).unwrap();
            prop_assert!(f.validate().is_ok() && g.validate().is_ok());
            prop_assert!(check_strict_inverse_pair(&f, &g).unwrap());
        }
    }

    #[test]
    fn product_set_families_are_exactly_the_compatible_ones(seed in seeds()) {
        let p = set_presheaf(&params(3, 5, 3).with_seed(seed)).unwrap();
        let got = product_set_indices(&p, &Limits::default()).unwrap();
        for fam in &got {
            prop_assert!(is_in_product_set(&p, fam));
        }
        prop_assert_eq!(got, brute_product_set(&p));
    }

    #[test]
    fn pi_presheaf_is_a_presheaf(seed in seeds()) {
        let r = bi_presheaf(&small().with_seed(seed)).unwrap();
        let pi = pi_presheaf(&r, &Limits::default()).unwrap();
        prop_assert!(pi.presheaf.validate().is_ok());
    }

    #[test]
    fn grothendieck_laws(seed in seeds()) {
        let p = cat_presheaf(&params(3, 4, 2).with_seed(seed)).unwrap();
        prop_assert!(p.validate().is_ok());
        let g = grothendieck(&p).unwrap();
        prop_assert!(g.category.validate().is_ok());
        prop_assert!(g.projection.validate().is_ok());
        prop_assert_eq!(g.category.ob_count(), p.fibers().iter().map(|f| f.ob_count()).sum::<usize>());
        for fam in cat_product_set(&p, &Limits::default()).unwrap() {
            prop_assert!(is_in_cat_product_set(&p, &fam));
        }
    }

    #[test]
    fn discrete_fibers_give_the_category_of_elements(seed in seeds()) {
        let p = set_presheaf(&params(3, 4, 2).with_seed(seed)).unwrap();
        let g = grothendieck(&discretize(&p).unwrap()).unwrap();
        let el = category_of_elements(&p).unwrap();
        prop_assert_eq!(g.element_named().unwrap(), (*el.category).clone());
    }

    #[test]
    fn constant_presheaf_gives_the_product(seed in seeds()) {
        let (c, d) = categories(&GenParams::default().with_seed(seed));
        let g = grothendieck(&constant_cat_presheaf(&c, &d)).unwrap();
        prop_assert_eq!(g.pair_named().unwrap(), c.product(&d));
    }

    #[test]
    fn sigma_families_and_product_pi_validate(seed in seeds()) {
        let r = bi_presheaf(&small().with_seed(seed)).unwrap();
        for s in [sigma_dr(&r).unwrap(), sigma_cr(&r).unwrap()] {
            prop_assert!(s.presheaf.validate().is_ok());
            for fiber in &s.fibers {
                prop_assert!(fiber.category.validate().is_ok());
            }
        }
        let pp = product_category_pi(&r, &Limits::default()).unwrap();
        prop_assert!(pp.category.validate().is_ok());
        for t in &pp.transformations {
            prop_assert!(t.validate().is_ok());
        }
    }

    #[test]
    fn choice_isomorphism_holds(seed in seeds()) {
        let r = bi_presheaf(&small().with_seed(seed)).unwrap();
        let report = check_theorem_ac(&r, &Limits::default()).unwrap();
        prop_assert!(report.passed, "{}", report);
    }

    #[test]
    fn commutativity_holds_with_element_count(seed in seeds()) {
        let r = bi_presheaf(&small().with_seed(seed)).unwrap();
        let report = check_commutativity(&r).unwrap();
        prop_assert!(report.passed, "{}", report);
        let w = commutativity_witness(&r).unwrap();
        let n = r.presheaf().element_count();
        prop_assert_eq!(w.left.category.ob_count(), n);
        prop_assert_eq!(w.right.category.ob_count(), n);
    }

    #[test]
    fn associativity_holds(seed in seeds()) {
        let (p, q) = pq_pair(&small().with_seed(seed)).unwrap();
        prop_assert!(q.validate().is_ok());
        let s = sigma_pq(&p, &q).unwrap();
        prop_assert!(s.presheaf.validate().is_ok());
        let report = check_theorem_assoc(&p, &q).unwrap();
        prop_assert!(report.passed, "{}", report);
    }

    #[test]
    fn generation_is_deterministic(seed in seeds()) {
        let p = GenParams::default().with_seed(seed);
        prop_assert_eq!(gen_category(&p), gen_category(&p));
        prop_assert_eq!(set_presheaf(&p).unwrap(), set_presheaf(&p).unwrap());
        prop_assert_eq!(cat_presheaf(&p).unwrap(), cat_presheaf(&p).unwrap());
        prop_assert_eq!(bi_presheaf(&small().with_seed(seed)).unwrap(), bi_presheaf(&small().with_seed(seed)).unwrap());
    }
}

#[test]
fn empty_category_degenerate_cases() {
    let e = Arc::new(sigma_cat::FinCategory::empty());
    let one = Arc::new(sigma_cat::FinCategory::terminal());
    assert!(e.validate().is_ok());
    assert_eq!(enumerate_functors(&e, &one, &Limits::default()).unwrap().len(), 1);
    assert!(enumerate_functors(&one, &e, &Limits::default()).unwrap().is_empty());
    let p = SetPresheaf::constant(e.clone(), FinSet::singleton(Name::atom("u")));
    assert_eq!(product_set_indices(&p, &Limits::default()).unwrap(), vec![Vec::<usize>::new()]);
}
