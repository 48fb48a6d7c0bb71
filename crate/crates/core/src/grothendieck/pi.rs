use std::collections::HashMap;
use std::sync::Arc;

use super::sigma::{sigma_dr, SigmaFamily};
use super::CatPresheaf;
use crate::elements::BiPresheaf;
use crate::error::{Error, Result};
use crate::fincat::{
    enumerate_nat_trans, functor_name, search_functors, CategoryBuilder, FinCategory, Functor, Limits, Name,
    NatTrans,
};

/// A choice of one fiber object per base object, by index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CatFamily {
    pub objects: Vec<usize>,
}

impl CatFamily {
    /// The list of chosen fiber object names, in base object order.
    pub fn name(&self, p: &CatPresheaf) -> Name {
        Name::list(self.objects.iter().enumerate().map(|(a, &x)| p.fiber(a).object(x).clone()))
    }

    /// `(a, Φ_a)` pairs by name.
    pub fn entries(&self, p: &CatPresheaf) -> Vec<(Name, Name)> {
        self.objects
            .iter()
            .enumerate()
            .map(|(a, &x)| (p.base().object(a).clone(), p.fiber(a).object(x).clone()))
            .collect()
    }
}

fn connected(p: &CatPresheaf, f: usize, choice: &[usize]) -> bool {
    let c = p.base();
    let (a, b) = (c.dom(f), c.cod(f));
    !p.fiber(a).hom(choice[a], p.transition(f).obj(choice[b])).is_empty()
}

/// True when every `hom(Φ_a, 𝒫(f)(Φ_b))` is non-empty.
pub fn is_in_cat_product_set(p: &CatPresheaf, family: &CatFamily) -> bool {
    let c = p.base();
    family.objects.len() == c.ob_count()
        && family.objects.iter().enumerate().all(|(a, &x)| x < p.fiber(a).ob_count())
        && (0..c.mor_count()).all(|f| connected(p, f, &family.objects))
}

/// Every family `Φ` with `Φ_a` in the fiber at `a` and, for each `f : a → b`,
/// some morphism `Φ_a → 𝒫(f)(Φ_b)`. Lexicographic order.
pub fn cat_product_set(p: &CatPresheaf, limits: &Limits) -> Result<Vec<CatFamily>> {
    p.require_valid("cat presheaf")?;
    let c = p.base();
    limits.check_candidates(p.fibers().iter().map(|f| f.ob_count()))?;
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); c.ob_count()];
    for f in 0..c.mor_count() {
        checks[c.dom(f).max(c.cod(f))].push(f);
    }
    fn go(
        p: &CatPresheaf,
        checks: &[Vec<usize>],
        choice: &mut Vec<usize>,
        a: usize,
        out: &mut Vec<CatFamily>,
        limits: &Limits,
    ) -> Result<()> {
        if a == choice.len() {
            out.push(CatFamily { objects: choice.clone() });
            return limits.check_results(out.len());
        }
        for x in 0..p.fiber(a).ob_count() {
            choice[a] = x;
            if checks[a].iter().all(|&f| connected(p, f, choice)) {
                go(p, checks, choice, a + 1, out, limits)?;
            }
        }
        Ok(())
    }
    let mut out = Vec::new();
    go(p, &checks, &mut vec![0; c.ob_count()], 0, &mut out, limits)?;
    Ok(out)
}

/// Associates of `Φ`: functors `F : C → D` with `F(a)` the first component of
/// `Φ_a` and, for each `f : a → b`, `u_a = R(f, F f)(u_b)`, i.e. `F f`
/// underlies a fiber morphism `Φ_a → Σ^{D,R}(f)(Φ_b)`.
pub fn find_associates(r: &BiPresheaf, phi: &CatFamily, limits: &Limits) -> Result<Vec<Functor>> {
    let sigma = sigma_dr(r)?;
    find_associates_in(r, &sigma, phi, limits)
}

pub(crate) fn find_associates_in(
    r: &BiPresheaf,
    sigma: &SigmaFamily,
    phi: &CatFamily,
    limits: &Limits,
) -> Result<Vec<Functor>> {
    if !is_in_cat_product_set(&sigma.presheaf, phi) {
        return Err(Error::Mismatch("family is not in the product set".into()));
    }
    let (c, d) = (r.left(), r.right());
    limits.check_category(c)?;
    limits.check_category(d)?;
    let parts: Vec<(usize, usize)> = phi
        .objects
        .iter()
        .enumerate()
        .map(|(a, &o)| sigma.fibers[a].parts(o))
        .collect();
    let objects: Vec<usize> = parts.iter().map(|&(x, _)| x).collect();
    let allow = |f: usize, psi: usize| {
        let (a, b) = (c.dom(f), c.cod(f));
        let (xb, ub) = parts[b];
        let fiber = &sigma.fibers[a];
        fiber
            .object(xb, r.act(f, d.identity(xb), ub))
            .and_then(|target| fiber.lift(psi, target))
            .is_some_and(|l| fiber.category.dom(l) == phi.objects[a])
    };
    search_functors(c, d, Some(&objects), &allow, limits.max_results)
}

/// An object `(Φ, F^Φ)` of the product category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiObject {
    pub family: CatFamily,
    pub associate: Functor,
}

/// `Π(C, Σ^{D,R})`: objects `(Φ, F^Φ)`, morphisms the natural
/// transformations `η : F^Φ ⇒ F^Ψ` with `R(1_a, η_a)(u^Ψ_a) = u^Φ_a`.
#[derive(Debug, Clone)]
pub struct ProductPi {
    pub category: Arc<FinCategory>,
    /// Object data per object index.
    pub objects: Vec<PiObject>,
    /// Transformation per morphism index.
    pub transformations: Vec<NatTrans>,
    pub sigma: SigmaFamily,
    obj_lookup: HashMap<(Vec<usize>, Vec<usize>), usize>,
    mor_lookup: HashMap<(usize, usize, Vec<usize>), usize>,
}

fn key(f: &Functor) -> Vec<usize> {
    let mut k = f.obj_map().to_vec();
    k.extend_from_slice(f.mor_map());
    k
}

impl ProductPi {
    pub fn object(&self, family: &CatFamily, associate: &Functor) -> Option<usize> {
        self.obj_lookup.get(&(family.objects.clone(), key(associate))).copied()
    }

    pub fn morphism(&self, source: usize, target: usize, components: &[usize]) -> Option<usize> {
        self.mor_lookup.get(&(source, target, components.to_vec())).copied()
    }

    /// `u_a`, the element part of `Φ_a`, for the object at `o`.
    pub fn element(&self, o: usize, a: usize) -> usize {
        self.sigma.fibers[a].parts(self.objects[o].family.objects[a]).1
    }
}

pub fn product_category_pi(r: &BiPresheaf, limits: &Limits) -> Result<ProductPi> {
    let sigma = sigma_dr(r)?;
    let c = r.left();
    let mut objects = Vec::new();
    for phi in cat_product_set(&sigma.presheaf, limits)? {
        for f in find_associates_in(r, &sigma, &phi, limits)? {
            objects.push(PiObject { family: phi.clone(), associate: f });
            limits.check_results(objects.len())?;
        }
    }
    let element = |o: &PiObject, a: usize| sigma.fibers[a].parts(o.family.objects[a]).1;
    let names: Vec<Name> = objects
        .iter()
        .map(|o| Name::tagged("pi", Name::pair(o.family.name(&sigma.presheaf), functor_name(&o.associate))))
        .collect();

    let mut b = CategoryBuilder::new();
    for n in &names {
        b.object(n.clone());
    }
    let mut nats: Vec<(usize, usize, NatTrans)> = Vec::new();
    let mut key_of = HashMap::new();
    let d = r.right();
    for (i, src) in objects.iter().enumerate() {
        for (j, tgt) in objects.iter().enumerate() {
            for eta in enumerate_nat_trans(&src.associate, &tgt.associate, limits)? {
                let compatible =
                    (0..c.ob_count()).all(|a| r.act(c.identity(a), eta.component(a), element(tgt, a)) == element(src, a));
                if !compatible {
                    continue;
                }
                let comps = eta.components().iter().map(|&m| d.mor_name(m).clone());
                let name = Name::tagged(
                    "pi",
                    Name::pair(Name::pair(names[i].clone(), names[j].clone()), Name::list(comps)),
                );
                let k = b.morphism(name, i, j);
                key_of.insert((i, j, eta.components().to_vec()), k);
                nats.push((i, j, eta));
                limits.check_results(nats.len())?;
            }
        }
    }
    for (i, o) in objects.iter().enumerate() {
        let id = NatTrans::identity(&o.associate);
        let k = key_of
            .get(&(i, i, id.components().to_vec()))
            .ok_or_else(|| Error::Witness("identity transformation is not compatible".into()))?;
        b.identity(i, *k);
    }
    let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); objects.len()];
    for (k, (i, _, _)) in nats.iter().enumerate() {
        outgoing[*i].push(k);
    }
    for (k1, (i, j, eta)) in nats.iter().enumerate() {
        for &k2 in &outgoing[*j] {
            let (_, l, theta) = &nats[k2];
            let composite = NatTrans::vertical(theta, eta)?;
            let k = key_of
                .get(&(*i, *l, composite.components().to_vec()))
                .ok_or_else(|| Error::Witness("compatibility is not closed under composition".into()))?;
            b.composite(k2, k1, *k);
        }
    }
    let built = b.build_indexed()?;
    let mut placed: Vec<Option<PiObject>> = vec![None; objects.len()];
    let mut obj_lookup = HashMap::new();
    for (k, o) in objects.into_iter().enumerate() {
        let idx = built.objects[k];
        obj_lookup.insert((o.family.objects.clone(), key(&o.associate)), idx);
        placed[idx] = Some(o);
    }
    let mut transformations: Vec<Option<NatTrans>> = vec![None; nats.len()];
    let mut mor_lookup = HashMap::new();
    for (k, (i, j, eta)) in nats.into_iter().enumerate() {
        let idx = built.morphisms[k];
        mor_lookup.insert((built.objects[i], built.objects[j], eta.components().to_vec()), idx);
        transformations[idx] = Some(eta);
    }
    Ok(ProductPi {
        category: Arc::new(built.category),
        objects: placed.into_iter().map(Option::unwrap).collect(),
        transformations: transformations.into_iter().map(Option::unwrap).collect(),
        sigma,
        obj_lookup,
        mor_lookup,
    })
}
