//! Cat-valued presheaves and the Grothendieck construction.

mod fibration;
mod pi;
mod sigma;

use std::collections::HashMap;
use std::sync::Arc;

pub use fibration::{check_cleavage, check_split_fibration, is_cartesian, is_fibration, restrict_to_objects};
pub use pi::{cat_product_set, find_associates, is_in_cat_product_set, product_category_pi, CatFamily, PiObject, ProductPi};
pub use sigma::{commutativity_witness, curry_left, curry_right, sigma_cr, sigma_dr, Commutativity, SigmaFamily};

use crate::elements::SetPresheaf;
use crate::error::{Error, Result};
use crate::fincat::{same_category, CategoryBuilder, FinCategory, Functor, Name};
use crate::report::{Law, ValidationReport};

/// A strict Cat-valued presheaf. The transition of `f : a → b` is a functor
/// from `fiber(b)` to `fiber(a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatPresheaf {
    base: Arc<FinCategory>,
    fibers: Vec<Arc<FinCategory>>,
    transitions: Vec<Functor>,
}

impl CatPresheaf {
    pub fn new(base: Arc<FinCategory>, fibers: Vec<Arc<FinCategory>>, transitions: Vec<Functor>) -> Result<Self> {
        if fibers.len() != base.ob_count() || transitions.len() != base.mor_count() {
            return Err(Error::Malformed("presheaf data is not total".into()));
        }
        for (m, t) in transitions.iter().enumerate() {
            if !same_category(t.source(), &fibers[base.cod(m)])
                || !same_category(t.target(), &fibers[base.dom(m)])
            {
                return Err(Error::Malformed(format!(
                    "transition of `{}` does not run between the right fibers",
                    base.mor_name(m)
                )));
            }
        }
        Ok(CatPresheaf { base, fibers, transitions })
    }

    pub fn base(&self) -> &Arc<FinCategory> {
        &self.base
    }

    pub fn fiber(&self, a: usize) -> &Arc<FinCategory> {
        &self.fibers[a]
    }

    pub fn fibers(&self) -> &[Arc<FinCategory>] {
        &self.fibers
    }

    pub fn transition(&self, m: usize) -> &Functor {
        &self.transitions[m]
    }

    pub fn transitions(&self) -> &[Functor] {
        &self.transitions
    }

    pub fn validate(&self) -> ValidationReport {
        let c = &self.base;
        let mut report = ValidationReport::new();
        let base = c.validate();
        if !base.is_ok() {
            report.absorb(Law::Base, &Name::atom("base"), base);
            return report;
        }
        for (a, fiber) in self.fibers.iter().enumerate() {
            report.absorb(Law::Fiber, c.object(a), fiber.validate());
        }
        for (m, t) in self.transitions.iter().enumerate() {
            report.absorb(Law::TransitionEndpoints, c.mor_name(m), t.validate());
        }
        if !report.is_ok() {
            return report;
        }
        for a in 0..c.ob_count() {
            if !self.transitions[c.identity(a)].is_identity() {
                report.push(
                    Law::PresheafIdentity,
                    vec![c.object(a).clone()],
                    "identity does not act as the identity functor",
                );
            }
        }
        for (g, f, gf) in c.composites() {
            let composite = Functor::compose(&self.transitions[f], &self.transitions[g]).expect("matching fibers");
            if self.transitions[gf] != composite {
                report.push(
                    Law::PresheafComposition,
                    vec![c.mor_name(g).clone(), c.mor_name(f).clone()],
                    format!("𝒫({}) != 𝒫({}) ∘ 𝒫({})", c.mor_name(gf), c.mor_name(f), c.mor_name(g)),
                );
            }
        }
        report
    }

    pub(crate) fn require_valid(&self, what: &str) -> Result<()> {
        let report = self.validate();
        if report.is_ok() {
            Ok(())
        } else {
            Err(Error::invalid(what, report))
        }
    }

    /// Total number of fiber objects.
    pub fn object_count(&self) -> usize {
        self.fibers.iter().map(|f| f.ob_count()).sum()
    }
}

/// `𝒫^D`: the fiber `D` everywhere, identity transitions.
pub fn constant_cat_presheaf(c: &Arc<FinCategory>, d: &Arc<FinCategory>) -> CatPresheaf {
    CatPresheaf {
        base: c.clone(),
        fibers: vec![d.clone(); c.ob_count()],
        transitions: vec![Functor::identity(d.clone()); c.mor_count()],
    }
}

/// A discrete category on the elements of `P(a)`, identities named `1[u]`.
fn discrete_on(p: &SetPresheaf, a: usize) -> Result<FinCategory> {
    let mut b = CategoryBuilder::new();
    for u in p.value(a).elements() {
        let o = b.object(u.clone());
        let m = b.morphism(Name::tagged("1", u.clone()), o, o);
        b.identity(o, m);
        b.composite(m, m, m);
    }
    b.build()
}

/// A Set-valued presheaf viewed as a Cat-valued one with discrete fibers.
pub fn discretize(p: &SetPresheaf) -> Result<CatPresheaf> {
    let c = p.base();
    let fibers = (0..c.ob_count())
        .map(|a| discrete_on(p, a).map(Arc::new))
        .collect::<Result<Vec<_>>>()?;
    let transitions = (0..c.mor_count())
        .map(|m| {
            // the discrete fiber is sorted the same way as the value set
            let table = p.action(m).table().to_vec();
            let (src, tgt) = (&fibers[c.cod(m)], &fibers[c.dom(m)]);
            let mors = table.iter().map(|&u| tgt.identity(u)).collect();
            Functor::new(src.clone(), tgt.clone(), table, mors)
        })
        .collect::<Result<Vec<_>>>()?;
    CatPresheaf::new(c.clone(), fibers, transitions)
}

/// `Σ(C, 𝒫)` with its projection and index lookups.
#[derive(Debug, Clone)]
pub struct Grothendieck {
    pub category: Arc<FinCategory>,
    /// `pr₁ : Σ(C, 𝒫) → C`.
    pub projection: Functor,
    objects: Vec<(usize, usize)>,
    obj_lookup: HashMap<(usize, usize), usize>,
    morphisms: Vec<(usize, usize)>,
    /// `(f, φ, codomain) -> (f, φ)`
    mor_lookup: HashMap<(usize, usize, usize), usize>,
}

impl Grothendieck {
    /// Object `(a, x)`.
    pub fn object(&self, a: usize, x: usize) -> Option<usize> {
        self.obj_lookup.get(&(a, x)).copied()
    }

    /// `(a, x)` of an object.
    pub fn parts(&self, o: usize) -> (usize, usize) {
        self.objects[o]
    }

    /// `(f, φ)` of a morphism.
    pub fn mor_parts(&self, m: usize) -> (usize, usize) {
        self.morphisms[m]
    }

    /// Morphism `(f, φ)` with the given codomain.
    pub fn morphism(&self, f: usize, phi: usize, cod: usize) -> Option<usize> {
        self.mor_lookup.get(&(f, phi, cod)).copied()
    }

    /// The same category with each morphism renamed to its bare pair `(f, φ)`.
    pub fn pair_named(&self) -> Result<FinCategory> {
        self.category.rename(|o| o.clone(), |m| strip(m).0)
    }

    /// The same category with morphisms renamed `el[(f, (src, tgt))]`, the
    /// naming used by the category of elements. Meaningful for discrete
    /// fibers, where objects `(a, u)` already match.
    pub fn element_named(&self) -> Result<FinCategory> {
        self.category.rename(
            |o| o.clone(),
            |m| {
                let (pair, ends) = strip(m);
                let f = pair.as_pair().expect("pair").0.clone();
                Name::tagged("el", Name::pair(f, ends))
            },
        )
    }
}

fn strip(m: &Name) -> (Name, Name) {
    let (_, inner) = m.as_tagged().expect("grothendieck morphism name");
    let (pair, ends) = inner.as_pair().expect("grothendieck morphism name");
    (pair.clone(), ends.clone())
}

/// The Grothendieck construction: objects `(a, x)`, morphisms
/// `(f, φ) : (a, x) → (b, y)` with `φ : x → 𝒫(f)(y)`, and
/// `(g, θ) ∘ (f, φ) = (g ∘ f, 𝒫(f)(θ) ∘ φ)`.
pub fn grothendieck(p: &CatPresheaf) -> Result<Grothendieck> {
    p.require_valid("cat presheaf")?;
    let c = &p.base;
    let obj_name = |a: usize, x: usize| Name::pair(c.object(a).clone(), p.fibers[a].object(x).clone());
    let mut b = CategoryBuilder::new();
    let mut obj_key = HashMap::new();
    let mut obj_parts = Vec::new();
    for a in 0..c.ob_count() {
        for x in 0..p.fibers[a].ob_count() {
            obj_key.insert((a, x), b.object(obj_name(a, x)));
            obj_parts.push((a, x));
        }
    }
    let mut mor_key = HashMap::new();
    let mut mor_parts = Vec::new();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); obj_parts.len()];
    for f in 0..c.mor_count() {
        let (a, bb) = (c.dom(f), c.cod(f));
        let (fa, t) = (&p.fibers[a], &p.transitions[f]);
        for y in 0..p.fibers[bb].ob_count() {
            let tgt = obj_key[&(bb, y)];
            for &phi in fa.incoming(t.obj(y)) {
                let x = fa.dom(phi);
                let src = obj_key[&(a, x)];
                let name = Name::tagged(
                    "gr",
                    Name::pair(
                        Name::pair(c.mor_name(f).clone(), fa.mor_name(phi).clone()),
                        Name::pair(obj_name(a, x), obj_name(bb, y)),
                    ),
                );
                let k = b.morphism(name, src, tgt);
                mor_key.insert((f, phi, tgt), k);
                mor_parts.push((f, phi, src, tgt));
                out[src].push(k);
            }
        }
    }
    for (&(a, x), &o) in &obj_key {
        b.identity(o, mor_key[&(c.identity(a), p.fibers[a].identity(x), o)]);
    }
    for (k1, &(f, phi, _, mid)) in mor_parts.iter().enumerate() {
        let a = c.dom(f);
        for &k2 in &out[mid] {
            let (g, theta, _, tgt) = mor_parts[k2];
            let gf = c.compose(g, f).expect("valid base");
            let reindexed = p.transitions[f].mor(theta);
            let fiber_part = p.fibers[a].compose(reindexed, phi).expect("valid fiber");
            b.composite(k2, k1, mor_key[&(gf, fiber_part, tgt)]);
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
    let mut morphisms = vec![(0, 0); mor_parts.len()];
    let mut mor_lookup = HashMap::new();
    for (k, &(f, phi, _, tgt)) in mor_parts.iter().enumerate() {
        morphisms[built.morphisms[k]] = (f, phi);
        mor_lookup.insert((f, phi, built.objects[tgt]), built.morphisms[k]);
    }
    let projection = Functor::new(
        category.clone(),
        c.clone(),
        objects.iter().map(|&(a, _)| a).collect(),
        morphisms.iter().map(|&(f, _)| f).collect(),
    )?;
    Ok(Grothendieck {
        category,
        projection,
        objects,
        obj_lookup,
        morphisms,
        mor_lookup,
    })
}
