//! Explicit isomorphism witnesses for the choice and associativity
//! isomorphisms, and the checks that certify them.

mod report;

use std::sync::Arc;

pub use report::{SubCheck, TheoremReport};

use crate::elements::{category_of_elements, pi_presheaf, BiPresheaf, ElementsCategory, PiPresheaf};
use crate::error::{Error, Result};
use crate::fincat::{check_strict_inverse_pair, same_category, FinCategory, Functor, Limits, Name};
use crate::grothendieck::{
    commutativity_witness, grothendieck, product_category_pi, CatFamily, CatPresheaf, Grothendieck, ProductPi,
};

fn found<T>(x: Option<T>, what: &str) -> Result<T> {
    x.ok_or_else(|| Error::Witness(format!("{what} is missing")))
}

/// Both sides of `Π(C, Σ^{D,R}) ≅ Σ(Fun(C, D), ΠR)` and the functors
/// between them.
#[derive(Debug, Clone)]
pub struct AcWitness {
    pub product: ProductPi,
    pub pi: PiPresheaf,
    /// `Σ(Fun(C, D), ΠR)`
    pub elements: ElementsCategory,
    pub ac: Functor,
    pub ca: Functor,
}

fn ac_objects(w: &ProductPi, pi: &PiPresheaf, el: &ElementsCategory) -> Result<Vec<usize>> {
    let n = w.sigma.fibers.len();
    (0..w.category.ob_count())
        .map(|i| {
            let fi = found(pi.functors.functor_index(&w.objects[i].associate), "associate in Fun(C, D)")?;
            let phi_star: Vec<usize> = (0..n).map(|a| w.element(i, a)).collect();
            let e = found(pi.family_index(fi, &phi_star), "family in the product set")?;
            found(el.object(fi, e), "object of Σ(Fun(C, D), ΠR)")
        })
        .collect()
}

/// `AC(Φ, F) = (F, Φ*)` with `Φ*_a = u_a`, and `AC(η) = η`; `CA` reverses it
/// with `Φ_a = (F a, Φ*_a)`.
pub fn ac_witness(r: &BiPresheaf, limits: &Limits) -> Result<AcWitness> {
    let product = product_category_pi(r, limits)?;
    let pi = pi_presheaf(r, limits)?;
    let elements = category_of_elements(&pi.presheaf)?;
    let (p, e) = (&product.category, &elements.category);
    let fun = &pi.functors;

    let ac_objs = ac_objects(&product, &pi, &elements)?;
    let ac_mors = (0..p.mor_count())
        .map(|k| {
            let (i, j) = (p.dom(k), p.cod(k));
            let fi = elements.parts(ac_objs[i]).0;
            let gi = elements.parts(ac_objs[j]).0;
            let n = found(
                fun.nat_index(fi, gi, product.transformations[k].components()),
                "transformation in Fun(C, D)",
            )?;
            found(elements.lift(n, ac_objs[j]), "lift in Σ(Fun(C, D), ΠR)")
        })
        .collect::<Result<Vec<_>>>()?;

    let ca_objs = (0..e.ob_count())
        .map(|o| {
            let (fi, el) = elements.parts(o);
            let f = &fun.functors[fi];
            let phi_star = pi.family(fi, el);
            let objects = phi_star
                .iter()
                .enumerate()
                .map(|(a, &u)| found(product.sigma.fibers[a].object(f.obj(a), u), "fiber object"))
                .collect::<Result<Vec<_>>>()?;
            found(product.object(&CatFamily { objects }, f), "object of Π(C, Σ^{D,R})")
        })
        .collect::<Result<Vec<_>>>()?;
    let ca_mors = (0..e.mor_count())
        .map(|m| {
            let eta = &fun.transformations[elements.base_morphism(m)];
            found(
                product.morphism(ca_objs[e.dom(m)], ca_objs[e.cod(m)], eta.components()),
                "compatible transformation",
            )
        })
        .collect::<Result<Vec<_>>>()?;

    let ac = Functor::new(p.clone(), e.clone(), ac_objs, ac_mors)?;
    let ca = Functor::new(e.clone(), p.clone(), ca_objs, ca_mors)?;
    Ok(AcWitness { product, pi, elements, ac, ca })
}

pub fn ac_functor(r: &BiPresheaf, limits: &Limits) -> Result<Functor> {
    Ok(ac_witness(r, limits)?.ac)
}

pub fn ca_functor(r: &BiPresheaf, limits: &Limits) -> Result<Functor> {
    Ok(ac_witness(r, limits)?.ca)
}

pub(crate) fn describe_bi(r: &BiPresheaf) -> String {
    format!(
        "C with {} objects, D with {} objects, {} elements",
        r.left().ob_count(),
        r.right().ob_count(),
        r.presheaf().element_count()
    )
}

/// Records a construction failure as a failed sub-check; resource and input
/// errors are returned.
fn witness_or_report<T>(report: &mut TheoremReport, name: &str, result: Result<T>) -> Result<Option<T>> {
    match result {
        Ok(t) => Ok(Some(t)),
        Err(Error::Witness(msg)) => {
            report.check(name, false, msg);
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn functor_pair_checks(report: &mut TheoremReport, names: (&str, &str), f: &Functor, g: &Functor) -> Result<()> {
    report.laws(format!("{} is a functor", names.0), f.validate());
    report.laws(format!("{} is a functor", names.1), g.validate());
    let inverse = check_strict_inverse_pair(f, g)?;
    report.check(
        "strict inverse pair",
        inverse,
        if inverse { "both composites are identities" } else { "a composite is not an identity" },
    );
    Ok(())
}

fn count_checks(report: &mut TheoremReport, a: &FinCategory, b: &FinCategory) {
    report.counts("object counts agree", a.ob_count(), b.ob_count());
    report.counts("morphism counts agree", a.mor_count(), b.mor_count());
}

/// Builds both sides of the choice isomorphism and checks every law.
pub fn check_theorem_ac(r: &BiPresheaf, limits: &Limits) -> Result<TheoremReport> {
    let mut report = TheoremReport::new("ac", describe_bi(r));
    r.presheaf().require_valid("presheaf")?;
    let Some(w) = witness_or_report(&mut report, "witness construction", ac_witness(r, limits))? else {
        return Ok(report);
    };
    report.laws("Π(C, Σ^{D,R}) is a category", w.product.category.validate());
    report.laws("ΠR is a presheaf", w.pi.presheaf.validate());
    report.laws("Σ(Fun(C, D), ΠR) is a category", w.elements.category.validate());
    functor_pair_checks(&mut report, ("AC", "CA"), &w.ac, &w.ca)?;
    count_checks(&mut report, &w.product.category, &w.elements.category);
    Ok(report)
}

/// Builds the commutativity witness and checks it.
pub fn check_commutativity(r: &BiPresheaf) -> Result<TheoremReport> {
    let mut report = TheoremReport::new("commute", describe_bi(r));
    r.presheaf().require_valid("presheaf")?;
    let Some(w) = witness_or_report(&mut report, "witness construction", commutativity_witness(r))? else {
        return Ok(report);
    };
    report.laws("Σ^{D,R} is a presheaf", w.dr.presheaf.validate());
    report.laws("Σ^{C,R} is a presheaf", w.cr.presheaf.validate());
    report.laws("Σ(C, Σ^{D,R}) is a category", w.left.category.validate());
    report.laws("Σ(D, Σ^{C,R}) is a category", w.right.category.validate());
    functor_pair_checks(&mut report, ("forward", "backward"), &w.forward, &w.backward)?;
    count_checks(&mut report, &w.left.category, &w.right.category);
    report.counts(
        "objects equal the number of elements",
        w.left.category.ob_count(),
        r.presheaf().element_count(),
    );
    Ok(report)
}

pub(crate) fn q_restriction_at(p: &CatPresheaf, gr: &Grothendieck, q: &CatPresheaf, a: usize) -> Result<CatPresheaf> {
    let base = p.fiber(a).clone();
    let id_a = p.base().identity(a);
    let fibers = (0..base.ob_count())
        .map(|x| Ok(q.fiber(found(gr.object(a, x), "object of Σ(C, 𝒫)")?).clone()))
        .collect::<Result<Vec<_>>>()?;
    let transitions = (0..base.mor_count())
        .map(|j| {
            let cod = found(gr.object(a, base.cod(j)), "object of Σ(C, 𝒫)")?;
            Ok(q.transition(found(gr.morphism(id_a, j, cod), "morphism (1_a, j)")?).clone())
        })
        .collect::<Result<Vec<_>>>()?;
    CatPresheaf::new(base, fibers, transitions)
}

fn require_over(gr: &Grothendieck, q: &CatPresheaf) -> Result<()> {
    if same_category(&gr.category, q.base()) {
        Ok(())
    } else {
        Err(Error::Mismatch("second presheaf does not live over Σ(C, 𝒫)".into()))
    }
}

/// `𝒬^a` over `𝒫(a)`: `𝒬^a(x) = 𝒬(a, x)`, and `j` acts by `𝒬(1_a, j)`.
pub fn q_restriction(p: &CatPresheaf, q: &CatPresheaf, a: &Name) -> Result<CatPresheaf> {
    let a = p.base().obj_by_name(a)?;
    let gr = grothendieck(p)?;
    require_over(&gr, q)?;
    q.require_valid("second presheaf")?;
    q_restriction_at(p, &gr, q, a)
}

/// `Σ^{𝒫,𝒬}` with its fibers and the grothendieck construction of `𝒫`.
#[derive(Debug, Clone)]
pub struct SigmaPQ {
    pub presheaf: CatPresheaf,
    /// `Σ(𝒫(a), 𝒬^a)` per object `a`.
    pub fibers: Vec<Grothendieck>,
    pub restrictions: Vec<CatPresheaf>,
    /// `Σ(C, 𝒫)`
    pub base: Grothendieck,
}

/// `Σ^{𝒫,𝒬}(a) = Σ(𝒫(a), 𝒬^a)`; for `f : a → b`, `(y, t) ↦ (x, 𝒬(f, 1_x)(t))`
/// with `x = 𝒫(f)(y)`, and `(j, μ) ↦ (𝒫(f)(j), 𝒬(f, 1_x)(μ))`.
pub fn sigma_pq(p: &CatPresheaf, q: &CatPresheaf) -> Result<SigmaPQ> {
    let gr = grothendieck(p)?;
    require_over(&gr, q)?;
    q.require_valid("second presheaf")?;
    let c = p.base();
    let restrictions = (0..c.ob_count())
        .map(|a| q_restriction_at(p, &gr, q, a))
        .collect::<Result<Vec<_>>>()?;
    let fibers = restrictions.iter().map(grothendieck).collect::<Result<Vec<_>>>()?;

    let mut transitions = Vec::with_capacity(c.mor_count());
    for f in 0..c.mor_count() {
        let (a, b) = (c.dom(f), c.cod(f));
        let (src, tgt) = (&fibers[b], &fibers[a]);
        let pf = p.transition(f);
        // (f, 1_x) : (a, x) → (b, y) with x = 𝒫(f)(y)
        let lift = |y: usize| -> Result<usize> {
            let x = pf.obj(y);
            found(gr.morphism(f, p.fiber(a).identity(x), found(gr.object(b, y), "object")?), "lift (f, 1_x)")
        };
        let e = &src.category;
        let obj_map = (0..e.ob_count())
            .map(|o| {
                let (y, t) = src.parts(o);
                let t2 = q.transition(lift(y)?).obj(t);
                found(tgt.object(pf.obj(y), t2), "reindexed object")
            })
            .collect::<Result<Vec<_>>>()?;
        let mor_map = (0..e.mor_count())
            .map(|m| {
                let (j, mu) = src.mor_parts(m);
                let (y, _) = src.parts(e.dom(m));
                let mu2 = q.transition(lift(y)?).mor(mu);
                found(tgt.morphism(pf.mor(j), mu2, obj_map[e.cod(m)]), "reindexed morphism")
            })
            .collect::<Result<Vec<_>>>()?;
        transitions.push(Functor::new(e.clone(), tgt.category.clone(), obj_map, mor_map)?);
    }
    let presheaf = CatPresheaf::new(
        c.clone(),
        fibers.iter().map(|g| g.category.clone()).collect(),
        transitions,
    )?;
    Ok(SigmaPQ { presheaf, fibers, restrictions, base: gr })
}

/// Both sides of `Σ(C, Σ^{𝒫,𝒬}) ≅ Σ(Σ(C, 𝒫), 𝒬)` and the functors between them.
#[derive(Debug, Clone)]
pub struct AssocWitness {
    pub sigma: SigmaPQ,
    /// `Σ(C, Σ^{𝒫,𝒬})`
    pub left: Grothendieck,
    /// `Σ(Σ(C, 𝒫), 𝒬)`
    pub right: Grothendieck,
    /// `F(a, (x, u)) = ((a, x), u)`, `F(f, (i, λ)) = ((f, i), λ)`
    pub forward: Functor,
    /// `G((a, x), u) = (a, (x, u))`
    pub backward: Functor,
}

pub fn assoc_witness(p: &CatPresheaf, q: &CatPresheaf) -> Result<AssocWitness> {
    let sigma = sigma_pq(p, q)?;
    let left = grothendieck(&sigma.presheaf)?;
    let right = grothendieck(q)?;
    let gr = &sigma.base;
    let c = p.base();
    let (l, rt) = (&left.category, &right.category);

    let f_objs = (0..l.ob_count())
        .map(|o| {
            let (a, s) = left.parts(o);
            let (x, u) = sigma.fibers[a].parts(s);
            found(right.object(found(gr.object(a, x), "object of Σ(C, 𝒫)")?, u), "object")
        })
        .collect::<Result<Vec<_>>>()?;
    let f_mors = (0..l.mor_count())
        .map(|m| {
            let (f, s) = left.mor_parts(m);
            let (i, lambda) = sigma.fibers[c.dom(f)].mor_parts(s);
            let (base_cod, _) = right.parts(f_objs[l.cod(m)]);
            let e = found(gr.morphism(f, i, base_cod), "morphism (f, i)")?;
            found(right.morphism(e, lambda, f_objs[l.cod(m)]), "morphism")
        })
        .collect::<Result<Vec<_>>>()?;

    let g_objs = (0..rt.ob_count())
        .map(|o| {
            let (base_obj, u) = right.parts(o);
            let (a, x) = gr.parts(base_obj);
            found(left.object(a, found(sigma.fibers[a].object(x, u), "fiber object")?), "object")
        })
        .collect::<Result<Vec<_>>>()?;
    let g_mors = (0..rt.mor_count())
        .map(|m| {
            let (e, lambda) = right.mor_parts(m);
            let (f, i) = gr.mor_parts(e);
            let cod = g_objs[rt.cod(m)];
            let (_, s2) = left.parts(cod);
            let reindexed = sigma.presheaf.transition(f).obj(s2);
            let s = found(sigma.fibers[c.dom(f)].morphism(i, lambda, reindexed), "fiber morphism")?;
            found(left.morphism(f, s, cod), "morphism")
        })
        .collect::<Result<Vec<_>>>()?;

    let forward = Functor::new(l.clone(), rt.clone(), f_objs, f_mors)?;
    let backward = Functor::new(rt.clone(), l.clone(), g_objs, g_mors)?;
    Ok(AssocWitness { sigma, left, right, forward, backward })
}

pub(crate) fn describe_pq(p: &CatPresheaf, q: &CatPresheaf) -> String {
    format!(
        "C with {} objects, {} fiber objects over C, {} fiber objects over Σ(C, 𝒫)",
        p.base().ob_count(),
        p.object_count(),
        q.object_count()
    )
}

/// Builds both sides of the associativity isomorphism and checks every law.
pub fn check_theorem_assoc(p: &CatPresheaf, q: &CatPresheaf) -> Result<TheoremReport> {
    let mut report = TheoremReport::new("assoc", describe_pq(p, q));
    p.require_valid("first presheaf")?;
    let Some(w) = witness_or_report(&mut report, "witness construction", assoc_witness(p, q))? else {
        return Ok(report);
    };
    for (a, r) in w.sigma.restrictions.iter().enumerate() {
        report.laws(format!("𝒬^{} is a presheaf", p.base().object(a)), r.validate());
    }
    report.laws("Σ^{𝒫,𝒬} is a presheaf", w.sigma.presheaf.validate());
    report.laws("Σ(C, Σ^{𝒫,𝒬}) is a category", w.left.category.validate());
    report.laws("Σ(Σ(C, 𝒫), 𝒬) is a category", w.right.category.validate());
    functor_pair_checks(&mut report, ("F", "G"), &w.forward, &w.backward)?;
    count_checks(&mut report, &w.left.category, &w.right.category);
    Ok(report)
}

/// The grothendieck construction of `𝒫` as an `Arc`, for building a `𝒬` over it.
pub fn total_category(p: &CatPresheaf) -> Result<Arc<FinCategory>> {
    Ok(grothendieck(p)?.category)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::{FinSet, SetPresheaf};
    use crate::grothendieck::{constant_cat_presheaf, discretize, sigma_dr};

    fn n(s: &str) -> Name {
        Name::atom(s)
    }

    #[test]
    fn ac_over_terminals() {
        let t = Arc::new(FinCategory::terminal());
        let r = BiPresheaf::constant(t.clone(), t.clone(), FinSet::singleton(n("r")));
        let w = ac_witness(&r, &Limits::default()).unwrap();
        assert_eq!(w.product.category.ob_count(), 1);
        assert_eq!(w.elements.category.ob_count(), 1);
        let report = check_theorem_ac(&r, &Limits::default()).unwrap();
        assert!(report.passed, "{report}");

        let r2 = BiPresheaf::constant(t.clone(), t, FinSet::new(vec![n("r1"), n("r2")]).unwrap());
        let report = check_theorem_ac(&r2, &Limits::default()).unwrap();
        assert!(report.passed, "{report}");
        let w = ac_witness(&r2, &Limits::default()).unwrap();
        assert_eq!(w.product.category.ob_count(), 2);
    }

    #[test]
    fn ac_constant_singleton_over_arrows() {
        let a = Arc::new(FinCategory::arrow());
        let r = BiPresheaf::constant(a.clone(), a, FinSet::singleton(n("*")));
        let w = ac_witness(&r, &Limits::default()).unwrap();
        assert_eq!(w.product.category.ob_count(), 3);
        assert_eq!(w.elements.category.ob_count(), 3);
        assert!(check_theorem_ac(&r, &Limits::default()).unwrap().passed);
    }

    #[test]
    fn ac_with_empty_values() {
        let t = Arc::new(FinCategory::terminal());
        let r = BiPresheaf::new(
            t.clone(),
            t.clone(),
            SetPresheaf::constant(Arc::new(t.product(&t)), FinSet::default()),
        )
        .unwrap();
        let report = check_theorem_ac(&r, &Limits::default()).unwrap();
        assert!(report.passed);
    }

    #[test]
    fn commutativity_report() {
        let a = Arc::new(FinCategory::arrow());
        let r = BiPresheaf::constant(a.clone(), a, FinSet::singleton(n("*")));
        let report = check_commutativity(&r).unwrap();
        assert!(report.passed, "{report}");
    }

    #[test]
    fn assoc_with_terminal_fibers() {
        let t = Arc::new(FinCategory::terminal());
        let p = constant_cat_presheaf(&t, &t);
        let q = constant_cat_presheaf(&total_category(&p).unwrap(), &t);
        let w = assoc_witness(&p, &q).unwrap();
        assert_eq!(w.left.category.ob_count(), 1);
        assert!(check_theorem_assoc(&p, &q).unwrap().passed);
    }

    #[test]
    fn restriction_over_terminal_reindexes() {
        let t = Arc::new(FinCategory::terminal());
        let d = Arc::new(FinCategory::arrow());
        let p = constant_cat_presheaf(&t, &d);
        let total = total_category(&p).unwrap();
        let q = constant_cat_presheaf(&total, &d);
        let qa = q_restriction(&p, &q, &n("*")).unwrap();
        assert_eq!(qa.fibers().len(), 2);
        assert!(qa.validate().is_ok());
        let mismatched = constant_cat_presheaf(&d, &d);
        assert!(q_restriction(&p, &mismatched, &n("*")).is_err());
    }

    #[test]
    fn assoc_with_discrete_second_presheaf() {
        // 𝒫 = 𝒫^arrow over arrow, 𝒬 discrete with two elements everywhere
        let a = Arc::new(FinCategory::arrow());
        let p = constant_cat_presheaf(&a, &a);
        let total = total_category(&p).unwrap();
        let two = SetPresheaf::constant(total, FinSet::new(vec![n("s"), n("t")]).unwrap());
        let q = discretize(&two).unwrap();
        let w = assoc_witness(&p, &q).unwrap();
        assert_eq!(w.left.category.ob_count(), 8);
        assert_eq!(w.right.category.ob_count(), 8);
        let report = check_theorem_assoc(&p, &q).unwrap();
        assert!(report.passed, "{report}");
    }

    #[test]
    fn discrete_q_matches_sigma_dr_pattern() {
        // with 𝒫 constant at D and 𝒬 the discretization of R over C × D,
        // Σ^{𝒫,𝒬} agrees fiberwise with Σ^{D,R} up to object count
        let a = Arc::new(FinCategory::arrow());
        let r = BiPresheaf::constant(a.clone(), a.clone(), FinSet::new(vec![n("s"), n("t")]).unwrap());
        let p = constant_cat_presheaf(&a, &a);
        let total = total_category(&p).unwrap();
        let q_set = SetPresheaf::new(total, r.presheaf().values().to_vec(), r.presheaf().actions().to_vec()).unwrap();
        let q = discretize(&q_set).unwrap();
        let spq = sigma_pq(&p, &q).unwrap();
        let sdr = sigma_dr(&r).unwrap();
        for x in 0..2 {
            assert_eq!(spq.presheaf.fiber(x).ob_count(), sdr.presheaf.fiber(x).ob_count());
            assert_eq!(spq.presheaf.fiber(x).mor_count(), sdr.presheaf.fiber(x).mor_count());
        }
    }
}
