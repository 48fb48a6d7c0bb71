//! Exhaustive enumeration of functors and natural transformations, and the
//! functor category built from them.

use std::collections::HashMap;
use std::sync::Arc;

use super::functor::same_category;
use super::{CategoryBuilder, FinCategory, Functor, Name, NatTrans};
use crate::error::{Error, Result};

/// Resource limits for the exponential searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest object count accepted for an input of functor enumeration.
    pub max_objects: usize,
    /// Largest morphism count accepted for an input of functor enumeration.
    pub max_morphisms: usize,
    /// Largest candidate space for product-set style searches.
    pub max_candidates: usize,
    /// Largest number of results any single enumeration may return.
    pub max_results: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_objects: 4,
            max_morphisms: 12,
            max_candidates: 1_000_000,
            max_results: 200_000,
        }
    }
}

impl Limits {
    pub fn check_category(&self, c: &FinCategory) -> Result<()> {
        if c.ob_count() > self.max_objects {
            return Err(Error::BoundExceeded {
                bound: "max_objects",
                limit: self.max_objects,
                actual: c.ob_count(),
            });
        }
        if c.mor_count() > self.max_morphisms {
            return Err(Error::BoundExceeded {
                bound: "max_morphisms",
                limit: self.max_morphisms,
                actual: c.mor_count(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_results(&self, n: usize) -> Result<()> {
        if n > self.max_results {
            return Err(Error::BoundExceeded {
                bound: "max_results",
                limit: self.max_results,
                actual: n,
            });
        }
        Ok(())
    }

    pub(crate) fn check_candidates(&self, sizes: impl IntoIterator<Item = usize>) -> Result<()> {
        let mut total: usize = 1;
        for s in sizes {
            if s == 0 {
                return Ok(());
            }
            total = total.saturating_mul(s);
        }
        if total > self.max_candidates {
            return Err(Error::BoundExceeded {
                bound: "max_candidates",
                limit: self.max_candidates,
                actual: total,
            });
        }
        Ok(())
    }
}

/// Backtracking functor search. `objects` fixes the object map when given;
/// `allow(m, n)` filters the candidate images `n` of each source morphism `m`.
pub(crate) fn search_functors(
    c: &Arc<FinCategory>,
    d: &Arc<FinCategory>,
    objects: Option<&[usize]>,
    allow: &dyn Fn(usize, usize) -> bool,
    max_results: usize,
) -> Result<Vec<Functor>> {
    let nc = c.ob_count();
    let nd = d.ob_count();
    let mut out = Vec::new();
    if nc == 0 {
        out.push(Functor::new(c.clone(), d.clone(), vec![], vec![])?);
        return Ok(out);
    }
    if nd == 0 {
        return Ok(out);
    }

    // Assignment order: identities first (position 0), then the rest.
    let free: Vec<usize> = (0..c.mor_count()).filter(|&m| !c.is_identity(m)).collect();
    let mut position = vec![0usize; c.mor_count()];
    for (i, &m) in free.iter().enumerate() {
        position[m] = i + 1;
    }
    let mut checks: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); free.len() + 1];
    for (g, f) in c.composable_pairs() {
        if let Some(gf) = c.compose(g, f) {
            let p = position[g].max(position[f]).max(position[gf]);
            checks[p].push((g, f, gf));
        }
    }

    let mut obj_map = vec![0usize; nc];
    let fixed = objects.map(|o| o.to_vec());
    loop {
        if let Some(fx) = &fixed {
            obj_map.clone_from(fx);
        }
        let mut mor_map = vec![usize::MAX; c.mor_count()];
        let mut ok = true;
        for a in 0..nc {
            let id = c.identity(a);
            let img = d.identity(obj_map[a]);
            if !allow(id, img) {
                ok = false;
                break;
            }
            mor_map[id] = img;
        }
        let holds = |mm: &[usize], list: &[(usize, usize, usize)]| {
            list.iter()
                .all(|&(g, f, gf)| d.compose(mm[g], mm[f]) == Some(mm[gf]))
        };
        if ok && holds(&mor_map, &checks[0]) {
            extend(
                c, d, &free, &checks, &obj_map, &mut mor_map, 0, allow, &holds, &mut out, max_results,
            )?;
        }
        if fixed.is_some() || !advance(&mut obj_map, nd) {
            break;
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn extend(
    c: &Arc<FinCategory>,
    d: &Arc<FinCategory>,
    free: &[usize],
    checks: &[Vec<(usize, usize, usize)>],
    obj_map: &[usize],
    mor_map: &mut Vec<usize>,
    depth: usize,
    allow: &dyn Fn(usize, usize) -> bool,
    holds: &dyn Fn(&[usize], &[(usize, usize, usize)]) -> bool,
    out: &mut Vec<Functor>,
    max_results: usize,
) -> Result<()> {
    if depth == free.len() {
        if out.len() == max_results {
            return Err(Error::BoundExceeded {
                bound: "max_results",
                limit: max_results,
                actual: max_results + 1,
            });
        }
        out.push(Functor::new(c.clone(), d.clone(), obj_map.to_vec(), mor_map.clone())?);
        return Ok(());
    }
    let m = free[depth];
    for &n in d.hom(obj_map[c.dom(m)], obj_map[c.cod(m)]) {
        if !allow(m, n) {
            continue;
        }
        mor_map[m] = n;
        if holds(mor_map, &checks[depth + 1]) {
            extend(c, d, free, checks, obj_map, mor_map, depth + 1, allow, holds, out, max_results)?;
        }
    }
    mor_map[m] = usize::MAX;
    Ok(())
}

/// Odometer increment with the first digit most significant.
fn advance(digits: &mut [usize], base: usize) -> bool {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < base {
            return true;
        }
        digits[i] = 0;
    }
    false
}

/// Every functor `C -> D`, ordered by object map then by morphism map.
pub fn enumerate_functors(
    c: &Arc<FinCategory>,
    d: &Arc<FinCategory>,
    limits: &Limits,
) -> Result<Vec<Functor>> {
    limits.check_category(c)?;
    limits.check_category(d)?;
    search_functors(c, d, None, &|_, _| true, limits.max_results)
}

/// Every natural transformation `F ⇒ G`, ordered lexicographically by
/// components.
pub fn enumerate_nat_trans(f: &Functor, g: &Functor, limits: &Limits) -> Result<Vec<NatTrans>> {
    if !same_category(f.source(), g.source()) || !same_category(f.target(), g.target()) {
        return Err(Error::Mismatch("functors are not parallel".into()));
    }
    let c = f.source().clone();
    let d = f.target().clone();
    limits.check_category(&c)?;
    limits.check_category(&d)?;

    // naturality square for each morphism, checked once both endpoints are set
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); c.ob_count()];
    for m in 0..c.mor_count() {
        checks[c.dom(m).max(c.cod(m))].push(m);
    }
    let mut out = Vec::new();
    let mut comps = vec![usize::MAX; c.ob_count()];
    nat_extend(f, g, &c, &d, &checks, &mut comps, 0, &mut out, limits)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn nat_extend(
    f: &Functor,
    g: &Functor,
    c: &FinCategory,
    d: &FinCategory,
    checks: &[Vec<usize>],
    comps: &mut Vec<usize>,
    a: usize,
    out: &mut Vec<NatTrans>,
    limits: &Limits,
) -> Result<()> {
    if a == c.ob_count() {
        limits.check_results(out.len() + 1)?;
        out.push(NatTrans::new(f.clone(), g.clone(), comps.clone())?);
        return Ok(());
    }
    for &m in d.hom(f.obj(a), g.obj(a)) {
        comps[a] = m;
        let natural = checks[a].iter().all(|&k| {
            let (x, y) = (c.dom(k), c.cod(k));
            let lhs = d.compose(g.mor(k), comps[x]);
            lhs.is_some() && lhs == d.compose(comps[y], f.mor(k))
        });
        if natural {
            nat_extend(f, g, c, d, checks, comps, a + 1, out, limits)?;
        }
    }
    comps[a] = usize::MAX;
    Ok(())
}

/// `Fun(C, D)` together with the functors and transformations behind its
/// objects and morphisms.
#[derive(Debug, Clone)]
pub struct FunctorCategory {
    pub category: Arc<FinCategory>,
    /// Functor at each object index.
    pub functors: Vec<Functor>,
    /// Transformation at each morphism index.
    pub transformations: Vec<NatTrans>,
    functor_lookup: HashMap<Vec<usize>, usize>,
    nat_lookup: HashMap<(usize, usize, Vec<usize>), usize>,
}

pub fn functor_name(f: &Functor) -> Name {
    let t = f.target();
    let objs = f.obj_map().iter().map(|&b| t.object(b).clone()).collect::<Vec<_>>();
    let mors = f.mor_map().iter().map(|&n| t.mor_name(n).clone()).collect::<Vec<_>>();
    Name::tagged("fun", Name::pair(Name::list(objs), Name::list(mors)))
}

fn nat_name(source: &Name, target: &Name, eta: &NatTrans) -> Name {
    let d = eta.source().target();
    let comps = eta.components().iter().map(|&m| d.mor_name(m).clone()).collect::<Vec<_>>();
    Name::tagged(
        "nat",
        Name::pair(Name::pair(source.clone(), target.clone()), Name::list(comps)),
    )
}

fn functor_key(f: &Functor) -> Vec<usize> {
    let mut key = f.obj_map().to_vec();
    key.extend_from_slice(f.mor_map());
    key
}

impl FunctorCategory {
    /// Object index of `f`, if `f` is one of the enumerated functors.
    pub fn functor_index(&self, f: &Functor) -> Option<usize> {
        self.functor_lookup.get(&functor_key(f)).copied()
    }

    /// Morphism index of the transformation `source ⇒ target` with the given
    /// components.
    pub fn nat_index(&self, source: usize, target: usize, components: &[usize]) -> Option<usize> {
        self.nat_lookup
            .get(&(source, target, components.to_vec()))
            .copied()
    }
}

/// `Fun(C, D)`: functors as objects, natural transformations as morphisms,
/// vertical composition.
pub fn functor_category(
    c: &Arc<FinCategory>,
    d: &Arc<FinCategory>,
    limits: &Limits,
) -> Result<FunctorCategory> {
    let functors = enumerate_functors(c, d, limits)?;
    let names: Vec<Name> = functors.iter().map(functor_name).collect();
    let mut b = CategoryBuilder::new();
    for n in &names {
        b.object(n.clone());
    }
    let mut nats: Vec<(usize, usize, NatTrans)> = Vec::new();
    let mut key_of: HashMap<(usize, usize, Vec<usize>), usize> = HashMap::new();
    for (i, f) in functors.iter().enumerate() {
        for (j, g) in functors.iter().enumerate() {
            for eta in enumerate_nat_trans(f, g, limits)? {
                let k = b.morphism(nat_name(&names[i], &names[j], &eta), i, j);
                key_of.insert((i, j, eta.components().to_vec()), k);
                nats.push((i, j, eta));
                limits.check_results(nats.len())?;
            }
        }
    }
    for (i, f) in functors.iter().enumerate() {
        let id = NatTrans::identity(f);
        b.identity(i, key_of[&(i, i, id.components().to_vec())]);
    }
    let mut by_source: Vec<Vec<usize>> = vec![Vec::new(); functors.len()];
    for (k, (i, _, _)) in nats.iter().enumerate() {
        by_source[*i].push(k);
    }
    for (k, (i, j, eta)) in nats.iter().enumerate() {
        for &l in &by_source[*j] {
            let (_, h, theta) = &nats[l];
            let comp = NatTrans::vertical(theta, eta)?;
            let target = *key_of
                .get(&(*i, *h, comp.components().to_vec()))
                .ok_or_else(|| Error::Witness("vertical composite not enumerated".into()))?;
            b.composite(l, k, target);
        }
    }
    let built = b.build_indexed()?;
    let category = Arc::new(built.category);

    let mut ordered_functors: Vec<Option<Functor>> = vec![None; functors.len()];
    for (key, f) in functors.into_iter().enumerate() {
        ordered_functors[built.objects[key]] = Some(f);
    }
    let functors: Vec<Functor> = ordered_functors.into_iter().map(Option::unwrap).collect();
    let mut ordered_nats: Vec<Option<NatTrans>> = vec![None; nats.len()];
    let mut nat_lookup = HashMap::with_capacity(nats.len());
    for (key, (i, j, eta)) in nats.into_iter().enumerate() {
        let idx = built.morphisms[key];
        nat_lookup.insert(
            (built.objects[i], built.objects[j], eta.components().to_vec()),
            idx,
        );
        ordered_nats[idx] = Some(eta);
    }
    let functor_lookup = functors
        .iter()
        .enumerate()
        .map(|(i, f)| (functor_key(f), i))
        .collect();
    Ok(FunctorCategory {
        category,
        functors,
        transformations: ordered_nats.into_iter().map(Option::unwrap).collect(),
        functor_lookup,
        nat_lookup,
    })
}
