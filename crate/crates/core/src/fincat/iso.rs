use std::sync::Arc;

use super::enumerate::{search_functors, Limits};
use super::functor::same_category;
use super::{FinCategory, Functor};
use crate::error::{Error, Result};

/// True iff `G ∘ F` and `F ∘ G` are identity functors on the nose.
pub fn check_strict_inverse_pair(f: &Functor, g: &Functor) -> Result<bool> {
    if !same_category(f.target(), g.source()) || !same_category(g.target(), f.source()) {
        return Err(Error::Mismatch(
            "functors do not run in opposite directions between the same categories".into(),
        ));
    }
    Ok(Functor::compose(g, f)?.is_identity() && Functor::compose(f, g)?.is_identity())
}

/// Inverse maps of a functor that is bijective on objects and morphisms.
pub fn invert(f: &Functor) -> Option<Functor> {
    if !f.is_bijective() {
        return None;
    }
    let mut objs = vec![0; f.target().ob_count()];
    for (a, &b) in f.obj_map().iter().enumerate() {
        objs[b] = a;
    }
    let mut mors = vec![0; f.target().mor_count()];
    for (m, &n) in f.mor_map().iter().enumerate() {
        mors[n] = m;
    }
    Functor::new(f.target().clone(), f.source().clone(), objs, mors).ok()
}

/// Brute-force search for a strict isomorphism, for cross-checking tiny
/// instances only.
pub fn find_isomorphism(
    a: &Arc<FinCategory>,
    b: &Arc<FinCategory>,
    limits: &Limits,
) -> Result<Option<(Functor, Functor)>> {
    if a.ob_count() != b.ob_count() || a.mor_count() != b.mor_count() {
        return Ok(None);
    }
    limits.check_category(a)?;
    limits.check_category(b)?;
    let candidates = search_functors(a, b, None, &|_, _| true, limits.max_results)?;
    for f in candidates {
        if let Some(g) = invert(&f) {
            if g.validate().is_ok() {
                return Ok(Some((f, g)));
            }
        }
    }
    Ok(None)
}
