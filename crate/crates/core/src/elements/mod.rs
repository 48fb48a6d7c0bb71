//! Set-valued presheaves and their category of elements.

mod presheaf;

use std::collections::HashMap;
use std::sync::Arc;

pub use presheaf::{BiPresheaf, Family, FinSet, PresheafMap, SetFunction, SetPresheaf};

use crate::error::{Error, Result};
use crate::fincat::{functor_category, same_category, CategoryBuilder, FinCategory, Functor, FunctorCategory, Limits, Name};

pub(crate) fn element_object_name(c: &FinCategory, p: &SetPresheaf, a: usize, u: usize) -> Name {
    Name::pair(c.object(a).clone(), p.value(a).element(u).clone())
}

/// `Σ(C, P)` with its projection and index lookups.
#[derive(Debug, Clone)]
pub struct ElementsCategory {
    pub category: Arc<FinCategory>,
    /// `pr₁ : Σ(C, P) → C`.
    pub projection: Functor,
    objects: Vec<(usize, usize)>,
    obj_lookup: HashMap<(usize, usize), usize>,
    mor_base: Vec<usize>,
    /// `(f, codomain) -> f*`
    mor_lookup: HashMap<(usize, usize), usize>,
}

impl ElementsCategory {
    /// Object `(a, u)`.
    pub fn object(&self, a: usize, u: usize) -> Option<usize> {
        self.obj_lookup.get(&(a, u)).copied()
    }

    /// `(a, u)` of an object.
    pub fn parts(&self, o: usize) -> (usize, usize) {
        self.objects[o]
    }

    /// The base morphism `f` under `f*`.
    pub fn base_morphism(&self, m: usize) -> usize {
        self.mor_base[m]
    }

    /// The unique lift of `f` with codomain `cod`, if `cod` lies over `cod f`.
    pub fn lift(&self, f: usize, cod: usize) -> Option<usize> {
        self.mor_lookup.get(&(f, cod)).copied()
    }
}

/// The category of elements: objects `(a, u)`, and a lift `f* : (a, u) → (b, v)`
/// of `f : a → b` whenever `P(f)(v) = u`.
pub fn category_of_elements(p: &SetPresheaf) -> Result<ElementsCategory> {
    p.require_valid("presheaf")?;
    let c = p.base();
    let mut b = CategoryBuilder::new();
    let mut obj_key = HashMap::new();
    let mut obj_parts = Vec::new();
    for a in 0..c.ob_count() {
        for u in 0..p.value(a).len() {
            obj_key.insert((a, u), b.object(element_object_name(c, p, a, u)));
            obj_parts.push((a, u));
        }
    }
    let mut mor_key = HashMap::new();
    let mut mor_parts = Vec::new();
    // outgoing lifts per builder object key
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); obj_parts.len()];
    for f in 0..c.mor_count() {
        let (a, bb) = (c.dom(f), c.cod(f));
        for v in 0..p.value(bb).len() {
            let u = p.act(f, v);
            let (src, tgt) = (obj_key[&(a, u)], obj_key[&(bb, v)]);
            let name = Name::tagged(
                "el",
                Name::pair(
                    c.mor_name(f).clone(),
                    Name::pair(element_object_name(c, p, a, u), element_object_name(c, p, bb, v)),
                ),
            );
            let k = b.morphism(name, src, tgt);
            mor_key.insert((f, tgt), k);
            mor_parts.push((f, src, tgt));
            out[src].push(k);
        }
    }
    for (&(a, _), &o) in &obj_key {
        b.identity(o, mor_key[&(c.identity(a), o)]);
    }
    for (k1, &(f, _, mid)) in mor_parts.iter().enumerate() {
        for &k2 in &out[mid] {
            let (g, _, tgt) = mor_parts[k2];
            let gf = c.compose(g, f).expect("valid base");
            b.composite(k2, k1, mor_key[&(gf, tgt)]);
        }
    }
    let built = b.build_indexed()?;
    let category = Arc::new(built.category);

    let mut objects = vec![(0, 0); obj_parts.len()];
    let mut obj_lookup = HashMap::new();
    for (k, &parts) in obj_parts.iter().enumerate() {
        objects[built.objects[k]] = parts;
        obj_lookup.insert(parts, built.objects[k]);
    }
    let mut mor_base = vec![0; mor_parts.len()];
    let mut lookup = HashMap::new();
    for (k, &(f, _, tgt)) in mor_parts.iter().enumerate() {
        mor_base[built.morphisms[k]] = f;
        lookup.insert((f, built.objects[tgt]), built.morphisms[k]);
    }
    let obj_map = objects.iter().map(|&(a, _)| a).collect();
    let projection = Functor::new(category.clone(), c.clone(), obj_map, mor_base.clone())?;
    Ok(ElementsCategory {
        category,
        projection,
        objects,
        obj_lookup,
        mor_base,
        mor_lookup: lookup,
    })
}

/// `Σ(C, η) : Σ(C, P) → Σ(C, Q)`, sending `(a, u)` to `(a, η_a(u))` and `f*` to `f*`.
pub fn elements_on_nat(eta: &PresheafMap) -> Result<Functor> {
    let report = eta.validate();
    if !report.is_ok() {
        return Err(Error::invalid("natural transformation", report));
    }
    let src = category_of_elements(eta.source())?;
    let tgt = category_of_elements(eta.target())?;
    let obj_map: Vec<usize> = (0..src.category.ob_count())
        .map(|o| {
            let (a, u) = src.parts(o);
            tgt.object(a, eta.component(a).apply(u)).expect("element exists")
        })
        .collect();
    let mor_map = (0..src.category.mor_count())
        .map(|m| {
            let f = src.base_morphism(m);
            let cod = obj_map[src.category.cod(m)];
            tgt.lift(f, cod)
                .ok_or_else(|| Error::Witness(format!("no lift of `{}` in the target", src.category.mor_name(m))))
        })
        .collect::<Result<Vec<_>>>()?;
    Functor::new(src.category, tgt.category, obj_map, mor_map)
}

/// `𝒴^a(b) = Mor(b, a)`, acting by precomposition.
pub fn yoneda_presheaf(c: &Arc<FinCategory>, a: &Name) -> Result<SetPresheaf> {
    let a = c.obj_by_name(a)?;
    let report = c.validate();
    if !report.is_ok() {
        return Err(Error::invalid("category", report));
    }
    let values = (0..c.ob_count())
        .map(|b| FinSet::new(c.hom(b, a).iter().map(|&h| c.mor_name(h).clone()).collect()))
        .collect::<Result<Vec<_>>>()?;
    let actions = (0..c.mor_count())
        .map(|f| {
            let (b, cc) = (c.dom(f), c.cod(f));
            let table = c
                .hom(cc, a)
                .iter()
                .map(|&h| {
                    let hf = c.compose(h, f).expect("valid category");
                    values[b].index_of(c.mor_name(hf)).expect("hom-set member")
                })
                .collect();
            SetFunction::new(table)
        })
        .collect();
    SetPresheaf::new(c.clone(), values, actions)
}

/// The isomorphism `Σ(C, 𝒴^a) ≅ C/a`: `(b, h) ↦ h` and `f* ↦ f`, with its
/// inverse.
pub fn yoneda_slice_witness(c: &Arc<FinCategory>, a: &Name) -> Result<(Functor, Functor)> {
    let y = yoneda_presheaf(c, a)?;
    let el = category_of_elements(&y)?;
    let slice = Arc::new(c.slice(a)?);
    let e = &el.category;
    let slice_obj = |o: usize| -> Result<usize> {
        let (b, h) = el.parts(o);
        slice.obj_by_name(&Name::tagged(
            "slice",
            Name::pair(c.object(b).clone(), y.value(b).element(h).clone()),
        ))
    };
    let obj_map = (0..e.ob_count()).map(slice_obj).collect::<Result<Vec<_>>>()?;
    let mor_map = (0..e.mor_count())
        .map(|m| {
            let (b, h) = el.parts(e.dom(m));
            let (cb, h2) = el.parts(e.cod(m));
            slice.mor_by_name(&Name::tagged(
                "slice",
                Name::pair(
                    c.mor_name(el.base_morphism(m)).clone(),
                    Name::pair(y.value(b).element(h).clone(), y.value(cb).element(h2).clone()),
                ),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let forward = Functor::new(e.clone(), slice, obj_map, mor_map)?;
    let backward = crate::fincat::invert(&forward)
        .ok_or_else(|| Error::Witness("elements-to-slice map is not bijective".into()))?;
    Ok((forward, backward))
}

/// `R^F(a) = R(a, F a)` and `R^F(f) = R(f, F f)`.
pub fn restrict_presheaf(r: &BiPresheaf, f: &Functor) -> Result<SetPresheaf> {
    if !same_category(f.source(), r.left()) || !same_category(f.target(), r.right()) {
        return Err(Error::Mismatch("functor does not run between the factors of the base".into()));
    }
    let c = r.left();
    let values = (0..c.ob_count()).map(|a| r.value(a, f.obj(a)).clone()).collect();
    let actions = (0..c.mor_count())
        .map(|m| r.presheaf().action(r.mor(m, f.mor(m))).clone())
        .collect();
    SetPresheaf::new(c.clone(), values, actions)
}

/// Indices of every family `Φ` with `Φ_a ∈ P(a)` and `P(f)(Φ_b) = Φ_a`
/// for every `f : a → b`, in lexicographic order.
pub fn product_set_indices(p: &SetPresheaf, limits: &Limits) -> Result<Vec<Vec<usize>>> {
    let c = p.base();
    let n = c.ob_count();
    limits.check_candidates(p.values().iter().map(FinSet::len))?;
    // morphisms checked once both endpoints are chosen
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); n];
    for m in 0..c.mor_count() {
        checks[c.dom(m).max(c.cod(m))].push(m);
    }
    let mut out = Vec::new();
    let mut choice = vec![0usize; n];
    fn go(
        p: &SetPresheaf,
        checks: &[Vec<usize>],
        choice: &mut Vec<usize>,
        a: usize,
        out: &mut Vec<Vec<usize>>,
        limits: &Limits,
    ) -> Result<()> {
        if a == choice.len() {
            out.push(choice.clone());
            return limits.check_results(out.len());
        }
        let c = p.base();
        for u in 0..p.value(a).len() {
            choice[a] = u;
            if checks[a].iter().all(|&m| p.act(m, choice[c.cod(m)]) == choice[c.dom(m)]) {
                go(p, checks, choice, a + 1, out, limits)?;
            }
        }
        Ok(())
    }
    go(p, &checks, &mut choice, 0, &mut out, limits)?;
    Ok(out)
}

/// The product set of `P` as named families.
pub fn product_set(p: &SetPresheaf, limits: &Limits) -> Result<Vec<Family>> {
    let c = p.base();
    Ok(product_set_indices(p, limits)?
        .into_iter()
        .map(|phi| Family {
            entries: phi
                .iter()
                .enumerate()
                .map(|(a, &u)| (c.object(a).clone(), p.value(a).element(u).clone()))
                .collect(),
        })
        .collect())
}

/// True when the family of element indices satisfies the product-set
/// condition on every morphism.
pub fn is_in_product_set(p: &SetPresheaf, family: &[usize]) -> bool {
    let c = p.base();
    family.len() == c.ob_count()
        && family.iter().enumerate().all(|(a, &u)| u < p.value(a).len())
        && (0..c.mor_count()).all(|m| p.act(m, family[c.cod(m)]) == family[c.dom(m)])
}

fn tuple_name(p: &SetPresheaf, family: &[usize]) -> Name {
    Name::tagged(
        "fam",
        Name::list(family.iter().enumerate().map(|(a, &u)| p.value(a).element(u).clone())),
    )
}

/// `ΠR` on `Fun(C, D)` with the families behind each element.
#[derive(Debug, Clone)]
pub struct PiPresheaf {
    pub presheaf: SetPresheaf,
    pub functors: FunctorCategory,
    /// Element indices of `R(a, F a)`, per functor and per value element.
    families: Vec<Vec<Vec<usize>>>,
    lookup: Vec<HashMap<Vec<usize>, usize>>,
}

impl PiPresheaf {
    pub fn family(&self, functor: usize, element: usize) -> &[usize] {
        &self.families[functor][element]
    }

    pub fn family_index(&self, functor: usize, family: &[usize]) -> Option<usize> {
        self.lookup[functor].get(family).copied()
    }
}

/// `(ΠR)(F)` is the product set of `R^F`; `η : F ⇒ G` acts by
/// `Φ ↦ (R(1_a, η_a)(Φ_a))_a`.
pub fn pi_presheaf(r: &BiPresheaf, limits: &Limits) -> Result<PiPresheaf> {
    r.presheaf().require_valid("presheaf")?;
    let fun = functor_category(r.left(), r.right(), limits)?;
    let c = r.left();
    let mut values = Vec::new();
    let mut families = Vec::new();
    let mut lookup = Vec::new();
    for f in &fun.functors {
        let rf = restrict_presheaf(r, f)?;
        let fams = product_set_indices(&rf, limits)?;
        let set = FinSet::new(fams.iter().map(|phi| tuple_name(&rf, phi)).collect())?;
        let mut ordered = vec![Vec::new(); fams.len()];
        let mut index = HashMap::new();
        for phi in fams {
            let i = set.index_of(&tuple_name(&rf, &phi)).expect("member");
            index.insert(phi.clone(), i);
            ordered[i] = phi;
        }
        values.push(set);
        families.push(ordered);
        lookup.push(index);
    }
    let cat = &fun.category;
    let mut actions = Vec::with_capacity(cat.mor_count());
    for (k, eta) in fun.transformations.iter().enumerate() {
        let (fi, gi) = (cat.dom(k), cat.cod(k));
        let table = families[gi]
            .iter()
            .map(|phi| {
                let image: Vec<usize> = (0..c.ob_count())
                    .map(|a| r.act(c.identity(a), eta.component(a), phi[a]))
                    .collect();
                lookup[fi].get(&image).copied().ok_or_else(|| {
                    Error::Witness(format!("action of `{}` leaves the product set", cat.mor_name(k)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        actions.push(SetFunction::new(table));
    }
    let presheaf = SetPresheaf::new(cat.clone(), values, actions)?;
    Ok(PiPresheaf {
        presheaf,
        functors: fun,
        families,
        lookup,
    })
}

/// `P^Σ` over `Σ(C, P)`: `P^Σ(a, u) = P(a)` and `P^Σ(f*) = P(f)`.
pub fn lifted_presheaf(p: &SetPresheaf, el: &ElementsCategory) -> Result<SetPresheaf> {
    let e = &el.category;
    let values = (0..e.ob_count()).map(|o| p.value(el.parts(o).0).clone()).collect();
    let actions = (0..e.mor_count())
        .map(|m| p.action(el.base_morphism(m)).clone())
        .collect();
    SetPresheaf::new(e.clone(), values, actions)
}

/// `pr₂(a, u) = u`, checked to lie in the product set of `P^Σ`.
pub fn second_projection(p: &SetPresheaf) -> Result<Family> {
    let el = category_of_elements(p)?;
    let lifted = lifted_presheaf(p, &el)?;
    let indices: Vec<usize> = (0..el.category.ob_count()).map(|o| el.parts(o).1).collect();
    if !is_in_product_set(&lifted, &indices) {
        return Err(Error::Witness("second projection is not in the product set".into()));
    }
    Ok(Family {
        entries: (0..el.category.ob_count())
            .map(|o| {
                let (a, u) = el.parts(o);
                (el.category.object(o).clone(), p.value(a).element(u).clone())
            })
            .collect(),
    })
}

/// Every morphism into the image of an object has exactly one lift ending
/// at that object.
pub fn check_discrete_fibration(p: &Functor) -> bool {
    let (e, c) = (p.source(), p.target());
    (0..e.ob_count()).all(|x| {
        c.incoming(p.obj(x)).iter().all(|&f| {
            e.incoming(x).iter().filter(|&&m| p.mor(m) == f).count() == 1
        })
    })
}
