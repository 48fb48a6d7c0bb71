mod support;

use std::sync::Arc;

use sigma_cat::testkit::{gen_category, gen_set_presheaf, GenParams};

#[test]
fn generators_reach_non_degenerate_cases() {
    let p = GenParams { max_objects: 3, ..GenParams::default() };
    let (mut non_thin, mut non_injective, mut empty_value) = (0, 0, 0);
    for seed in 0..1000 {
        let p = p.with_seed(seed);
        let c = Arc::new(gen_category(&p));
        assert!(c.validate().is_ok(), "seed {seed}");
        non_thin += usize::from(!c.is_thin());
        let sp = gen_set_presheaf(&c, &p).unwrap();
        assert!(sp.validate().is_ok(), "seed {seed}");
        if (0..c.mor_count()).any(|m| !sp.action(m).is_injective()) {
            non_injective += 1;
        }
        empty_value += usize::from(sp.values().iter().any(|v| v.is_empty()));
    }
    assert!(non_thin > 0, "no non-thin category");
    assert!(non_injective > 0, "no non-injective action");
    assert!(empty_value > 0, "no empty value set");
}

#[test]
fn generated_sizes_respect_the_parameters() {
    for (objs, extra, fiber) in [(1, 0, 1), (2, 2, 2), (3, 5, 3)] {
        let p = support::params(objs, extra, fiber);
        for seed in 0..200 {
            let p = p.with_seed(seed);
            let c = gen_category(&p);
            assert!(c.ob_count() <= objs);
            assert!(c.mor_count() - c.ob_count() <= extra);
            let cp = support::cat_presheaf(&p).unwrap();
            assert!(cp.fibers().iter().all(|f| f.ob_count() <= fiber));
        }
    }
}
