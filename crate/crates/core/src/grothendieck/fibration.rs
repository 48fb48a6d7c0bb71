use std::collections::HashMap;
use std::sync::Arc;

use super::{grothendieck, CatPresheaf};
use crate::error::Result;
use crate::fincat::{CategoryBuilder, Functor};

/// `l : d → x` is cartesian for `p` when every `h : d' → x` with
/// `p(h) = p(l) ∘ g` factors as `h = l ∘ k` for exactly one `k` over `g`.
pub fn is_cartesian(p: &Functor, l: usize) -> bool {
    let (e, c) = (p.source(), p.target());
    let (d, x) = (e.dom(l), e.cod(l));
    let pl = p.mor(l);
    e.incoming(x).iter().all(|&h| {
        let d2 = e.dom(h);
        c.hom(p.obj(d2), p.obj(d))
            .iter()
            .filter(|&&g| c.compose(pl, g) == Some(p.mor(h)))
            .all(|&g| {
                e.hom(d2, d)
                    .iter()
                    .filter(|&&k| p.mor(k) == g && e.compose(l, k) == Some(h))
                    .count()
                    == 1
            })
    })
}

/// Every base morphism into the image of an object has a cartesian lift
/// ending at that object.
pub fn is_fibration(p: &Functor) -> bool {
    let (e, c) = (p.source(), p.target());
    (0..c.mor_count()).all(|f| {
        (0..e.ob_count())
            .filter(|&x| p.obj(x) == c.cod(f))
            .all(|x| e.incoming(x).iter().any(|&l| p.mor(l) == f && is_cartesian(p, l)))
    })
}

/// Checks that `lift(f, x)` is a cartesian lift of `f` ending at `x` for
/// every `x` over `cod f`, and that the chosen lifts are closed under
/// identities and composition.
pub fn check_cleavage(p: &Functor, lift: &dyn Fn(usize, usize) -> Option<usize>) -> bool {
    let (e, c) = (p.source(), p.target());
    for f in 0..c.mor_count() {
        for x in (0..e.ob_count()).filter(|&x| p.obj(x) == c.cod(f)) {
            let Some(l) = lift(f, x) else { return false };
            if p.mor(l) != f || e.cod(l) != x || !is_cartesian(p, l) {
                return false;
            }
        }
    }
    for x in 0..e.ob_count() {
        if lift(c.identity(p.obj(x)), x) != Some(e.identity(x)) {
            return false;
        }
    }
    for (g, f, gf) in c.composites() {
        for x in (0..e.ob_count()).filter(|&x| p.obj(x) == c.cod(g)) {
            let lg = lift(g, x).expect("checked above");
            let lf = lift(f, e.dom(lg)).expect("checked above");
            if lift(gf, x) != e.compose(lg, lf) {
                return false;
            }
        }
    }
    true
}

/// `pr₁ : Σ(C, 𝒫) → C` with the lifts `(f, 1_{𝒫(f)y}) : (a, 𝒫(f)y) → (b, y)`
/// forms a split fibration. False for an invalid presheaf.
pub fn check_split_fibration(p: &CatPresheaf) -> bool {
    let Ok(g) = grothendieck(p) else { return false };
    let c = p.base();
    let lift = |f: usize, x: usize| {
        let (b, y) = g.parts(x);
        if b != c.cod(f) {
            return None;
        }
        let fiber = p.fiber(c.dom(f));
        g.morphism(f, fiber.identity(p.transition(f).obj(y)), x)
    };
    check_cleavage(&g.projection, &lift)
}

/// `p` restricted to the full subcategory on the objects in `keep`.
pub fn restrict_to_objects(p: &Functor, keep: &[usize]) -> Result<Functor> {
    let e = p.source();
    let mut b = CategoryBuilder::new();
    let mut obj_key = HashMap::new();
    for &o in keep {
        obj_key.insert(o, b.object(e.object(o).clone()));
    }
    let mut mor_key = HashMap::new();
    let mut mor_old = Vec::new();
    for m in 0..e.mor_count() {
        if let (Some(&s), Some(&t)) = (obj_key.get(&e.dom(m)), obj_key.get(&e.cod(m))) {
            mor_key.insert(m, b.morphism(e.mor_name(m).clone(), s, t));
            mor_old.push(m);
        }
    }
    for &o in keep {
        b.identity(obj_key[&o], mor_key[&e.identity(o)]);
    }
    for (g, f, gf) in e.composites() {
        if let (Some(&kg), Some(&kf)) = (mor_key.get(&g), mor_key.get(&f)) {
            b.composite(kg, kf, mor_key[&gf]);
        }
    }
    let built = b.build_indexed()?;
    let mut obj_map = vec![0; keep.len()];
    for (k, &o) in keep.iter().enumerate() {
        obj_map[built.objects[k]] = p.obj(o);
    }
    let mut mor_map = vec![0; mor_old.len()];
    for (k, &m) in mor_old.iter().enumerate() {
        mor_map[built.morphisms[k]] = p.mor(m);
    }
    Functor::new(Arc::new(built.category), p.target().clone(), obj_map, mor_map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::FinCategory;
    use crate::grothendieck::constant_cat_presheaf;

    #[test]
    fn missing_lift_is_not_a_fibration() {
        // Σ(arrow, 𝒫^arrow) = arrow × arrow; dropping (a, x) leaves the lift of
        // f ending at (b, x) without a domain.
        let a = Arc::new(FinCategory::arrow());
        let p = constant_cat_presheaf(&a, &a);
        let g = grothendieck(&p).unwrap();
        assert!(is_fibration(&g.projection));
        let missing = g.object(0, 0).unwrap();
        let keep: Vec<usize> = (0..g.category.ob_count()).filter(|&o| o != missing).collect();
        let q = restrict_to_objects(&g.projection, &keep).unwrap();
        assert!(q.source().validate().is_ok());
        assert!(q.validate().is_ok());
        assert!(!is_fibration(&q));
        let cat = q.source().clone();
        let lift = |f: usize, x: usize| {
            cat.incoming(x).iter().copied().find(|&l| q.mor(l) == f)
        };
        assert!(!check_cleavage(&q, &lift));
    }

    #[test]
    fn non_cartesian_lift_is_detected() {
        // in arrow × arrow over the first factor, (f, 1_b) is cartesian but the
        // lift (f, g) : (a, a) → (b, b) of f is not.
        let a = Arc::new(FinCategory::arrow());
        let g = grothendieck(&constant_cat_presheaf(&a, &a)).unwrap();
        let cod = g.object(1, 1).unwrap();
        let good = g.morphism(2, 1, cod).unwrap();
        let bad = g.morphism(2, 2, cod).unwrap();
        assert!(is_cartesian(&g.projection, good));
        assert!(!is_cartesian(&g.projection, bad));
    }
}
