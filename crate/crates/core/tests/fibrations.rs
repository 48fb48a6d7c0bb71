mod support;

use std::sync::Arc;

use sigma_cat::elements::{category_of_elements, check_discrete_fibration};
use sigma_cat::grothendieck::{
    check_cleavage, check_split_fibration, constant_cat_presheaf, grothendieck, is_fibration, restrict_to_objects,
};
use sigma_cat::{FinCategory, Functor};
use support::params;

#[test]
fn projections_of_generated_instances_are_fibrations() {
    let p = params(3, 5, 3);
    for seed in 0..300 {
        let sp = support::set_presheaf(&p.with_seed(seed)).unwrap();
        assert!(check_discrete_fibration(&category_of_elements(&sp).unwrap().projection), "seed {seed}");
        let cp = support::cat_presheaf(&p.with_seed(seed)).unwrap();
        assert!(check_split_fibration(&cp), "seed {seed}");
        assert!(is_fibration(&grothendieck(&cp).unwrap().projection), "seed {seed}");
    }
}

#[test]
fn non_discrete_fiber_breaks_discreteness() {
    let arrow = Arc::new(FinCategory::arrow());
    let g = grothendieck(&constant_cat_presheaf(&arrow, &arrow)).unwrap();
    assert!(g.projection.validate().is_ok());
    assert!(!check_discrete_fibration(&g.projection));
}

#[test]
fn identity_functor_is_a_discrete_fibration() {
    let c = Arc::new(FinCategory::chain(&["a", "b", "c"], &["f", "g"]));
    assert!(check_discrete_fibration(&Functor::identity(c)));
}

#[test]
fn missing_object_breaks_the_cleavage() {
    let arrow = Arc::new(FinCategory::arrow());
    let g = grothendieck(&constant_cat_presheaf(&arrow, &arrow)).unwrap();
    let keep: Vec<usize> = (1..g.category.ob_count()).collect();
    let q = restrict_to_objects(&g.projection, &keep).unwrap();
    assert!(!is_fibration(&q));
    let e = q.source().clone();
    let lift = |f: usize, x: usize| e.incoming(x).iter().copied().find(|&l| q.mor(l) == f);
    assert!(!check_cleavage(&q, &lift));
}

#[test]
fn non_strict_presheaf_is_not_split() {
    let p = support::pseudo_presheaf();
    assert!(p.validate().has(sigma_cat::Law::PresheafComposition));
    assert!(!check_split_fibration(&p));
}
