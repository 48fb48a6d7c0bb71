use std::sync::Arc;

use super::{grothendieck, CatPresheaf, Grothendieck};
use crate::elements::{category_of_elements, BiPresheaf, ElementsCategory, SetPresheaf};
use crate::error::{Error, Result};
use crate::fincat::{FinCategory, Functor, Name};

pub(crate) fn curry_left_at(r: &BiPresheaf, a: usize) -> Result<SetPresheaf> {
    let (c, d) = (r.left(), r.right());
    let values = (0..d.ob_count()).map(|x| r.value(a, x).clone()).collect();
    let actions = (0..d.mor_count())
        .map(|phi| r.presheaf().action(r.mor(c.identity(a), phi)).clone())
        .collect();
    SetPresheaf::new(d.clone(), values, actions)
}

pub(crate) fn curry_right_at(r: &BiPresheaf, x: usize) -> Result<SetPresheaf> {
    let (c, d) = (r.left(), r.right());
    let values = (0..c.ob_count()).map(|a| r.value(a, x).clone()).collect();
    let actions = (0..c.mor_count())
        .map(|f| r.presheaf().action(r.mor(f, d.identity(x))).clone())
        .collect();
    SetPresheaf::new(c.clone(), values, actions)
}

/// `R^a` over `D`: `R^a(x) = R(a, x)`, acting by `R(1_a, φ)`.
pub fn curry_left(r: &BiPresheaf, a: &Name) -> Result<SetPresheaf> {
    curry_left_at(r, r.left().obj_by_name(a)?)
}

/// `ˣR` over `C`: `ˣR(a) = R(a, x)`, acting by `R(f, 1_x)`.
pub fn curry_right(r: &BiPresheaf, x: &Name) -> Result<SetPresheaf> {
    curry_right_at(r, r.right().obj_by_name(x)?)
}

/// A Cat-valued presheaf whose fibers are categories of elements, with the
/// fiber lookups kept.
#[derive(Debug, Clone)]
pub struct SigmaFamily {
    pub presheaf: CatPresheaf,
    pub fibers: Vec<ElementsCategory>,
    pub curried: Vec<SetPresheaf>,
}

/// Fibers `Σ(-, curried[i])` over `base`; the transition of `m : i → j`
/// sends `(x, u)` to `(x, reindex(m, x, u))` and each lift to the lift of
/// the same morphism.
fn sigma_family(
    base: &Arc<FinCategory>,
    curried: Vec<SetPresheaf>,
    reindex: impl Fn(usize, usize, usize) -> usize,
) -> Result<SigmaFamily> {
    let fibers = curried.iter().map(category_of_elements).collect::<Result<Vec<_>>>()?;
    let mut transitions = Vec::with_capacity(base.mor_count());
    for m in 0..base.mor_count() {
        let (src, tgt) = (&fibers[base.cod(m)], &fibers[base.dom(m)]);
        let e = &src.category;
        let obj_map = (0..e.ob_count())
            .map(|o| {
                let (x, u) = src.parts(o);
                tgt.object(x, reindex(m, x, u))
                    .ok_or_else(|| Error::Witness("reindexed element is missing".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let mor_map = (0..e.mor_count())
            .map(|k| {
                tgt.lift(src.base_morphism(k), obj_map[e.cod(k)]).ok_or_else(|| {
                    Error::Witness(format!("no lift of `{}` after reindexing", e.mor_name(k)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        transitions.push(Functor::new(e.clone(), tgt.category.clone(), obj_map, mor_map)?);
    }
    let presheaf = CatPresheaf::new(
        base.clone(),
        fibers.iter().map(|f| f.category.clone()).collect(),
        transitions,
    )?;
    Ok(SigmaFamily { presheaf, fibers, curried })
}

/// `Σ^{D,R}` over `C`: fiber `Σ(D, R^a)`, and `f` acts by
/// `(x, u) ↦ (x, R(f, 1_x)(u))`, `φ* ↦ φ*`.
pub fn sigma_dr(r: &BiPresheaf) -> Result<SigmaFamily> {
    r.presheaf().require_valid("presheaf")?;
    let (c, d) = (r.left(), r.right());
    let curried = (0..c.ob_count()).map(|a| curry_left_at(r, a)).collect::<Result<Vec<_>>>()?;
    sigma_family(c, curried, |f, x, u| r.act(f, d.identity(x), u))
}

/// `Σ^{C,R}` over `D`: fiber `Σ(C, ˣR)`, and `φ` acts by
/// `(a, u) ↦ (a, R(1_a, φ)(u))`, `f* ↦ f*`.
pub fn sigma_cr(r: &BiPresheaf) -> Result<SigmaFamily> {
    r.presheaf().require_valid("presheaf")?;
    let (c, d) = (r.left(), r.right());
    let curried = (0..d.ob_count()).map(|x| curry_right_at(r, x)).collect::<Result<Vec<_>>>()?;
    sigma_family(d, curried, |phi, a, u| r.act(c.identity(a), phi, u))
}

/// `Σ(C, Σ^{D,R}) ≅ Σ(D, Σ^{C,R})` with both sides and the witness pair.
#[derive(Debug, Clone)]
pub struct Commutativity {
    pub dr: SigmaFamily,
    pub cr: SigmaFamily,
    /// `Σ(C, Σ^{D,R})`
    pub left: Grothendieck,
    /// `Σ(D, Σ^{C,R})`
    pub right: Grothendieck,
    pub forward: Functor,
    pub backward: Functor,
}

fn found<T>(x: Option<T>, what: &str) -> Result<T> {
    x.ok_or_else(|| Error::Witness(format!("{what} is missing")))
}

/// Builds `(a, (x, u)) ↦ (x, (a, u))` with `(f, φ*) ↦ (φ, f*)`, and the
/// reverse assignment.
pub fn commutativity_witness(r: &BiPresheaf) -> Result<Commutativity> {
    let (c, d) = (r.left(), r.right());
    let dr = sigma_dr(r)?;
    let cr = sigma_cr(r)?;
    let left = grothendieck(&dr.presheaf)?;
    let right = grothendieck(&cr.presheaf)?;

    let (l, rt) = (&left.category, &right.category);
    let fwd_obj = |o: usize| -> Result<usize> {
        let (a, p) = left.parts(o);
        let (x, u) = dr.fibers[a].parts(p);
        found(right.object(x, found(cr.fibers[x].object(a, u), "fiber object")?), "object")
    };
    let fwd_objs = (0..l.ob_count()).map(fwd_obj).collect::<Result<Vec<_>>>()?;
    let fwd_mors = (0..l.mor_count())
        .map(|m| {
            let (f, phi_star) = left.mor_parts(m);
            let (a, p) = left.parts(l.dom(m));
            let (b, p2) = left.parts(l.cod(m));
            let (x, _) = dr.fibers[a].parts(p);
            let (_, v) = dr.fibers[b].parts(p2);
            let phi = dr.fibers[a].base_morphism(phi_star);
            let reindexed = found(cr.fibers[x].object(b, r.act(c.identity(b), phi, v)), "fiber object")?;
            let f_star = found(cr.fibers[x].lift(f, reindexed), "lift")?;
            found(right.morphism(phi, f_star, fwd_objs[l.cod(m)]), "morphism")
        })
        .collect::<Result<Vec<_>>>()?;

    let bwd_obj = |o: usize| -> Result<usize> {
        let (x, q) = right.parts(o);
        let (a, u) = cr.fibers[x].parts(q);
        found(left.object(a, found(dr.fibers[a].object(x, u), "fiber object")?), "object")
    };
    let bwd_objs = (0..rt.ob_count()).map(bwd_obj).collect::<Result<Vec<_>>>()?;
    let bwd_mors = (0..rt.mor_count())
        .map(|m| {
            let (phi, f_star) = right.mor_parts(m);
            let (x, q) = right.parts(rt.dom(m));
            let (y, q2) = right.parts(rt.cod(m));
            let (a, _) = cr.fibers[x].parts(q);
            let (_, v) = cr.fibers[y].parts(q2);
            let f = cr.fibers[x].base_morphism(f_star);
            let reindexed = found(dr.fibers[a].object(y, r.act(f, d.identity(y), v)), "fiber object")?;
            let phi_star = found(dr.fibers[a].lift(phi, reindexed), "lift")?;
            found(left.morphism(f, phi_star, bwd_objs[rt.cod(m)]), "morphism")
        })
        .collect::<Result<Vec<_>>>()?;

    let forward = Functor::new(l.clone(), rt.clone(), fwd_objs, fwd_mors)?;
    let backward = Functor::new(rt.clone(), l.clone(), bwd_objs, bwd_mors)?;
    Ok(Commutativity { dr, cr, left, right, forward, backward })
}
