//! Seeded generators for categories and presheaves.
//!
//! Every generator is a pure function of its parameters and seed. Failed
//! attempts advance the seed deterministically with [`mix`].

use std::collections::HashMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::elements::{BiPresheaf, FinSet, SetFunction, SetPresheaf};
use crate::error::{Error, Result};
use crate::fincat::{enumerate_functors, CategoryBuilder, FinCategory, Functor, Limits, Name};
use crate::grothendieck::{grothendieck, CatPresheaf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenParams {
    pub max_objects: usize,
    /// Cap on the non-identity morphisms of a generated category.
    pub max_extra_morphisms: usize,
    /// Cap on value-set sizes, and on fiber object counts for Cat-valued
    /// presheaves.
    pub max_fiber_size: usize,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            max_objects: 3,
            max_extra_morphisms: 5,
            max_fiber_size: 2,
            seed: 0,
        }
    }
}

impl GenParams {
    pub fn with_seed(self, seed: u64) -> Self {
        GenParams { seed, ..self }
    }
}

/// splitmix64 finalizer.
pub fn mix(seed: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const ATTEMPTS: usize = 64;
const NODE_BUDGET: usize = 50_000;

fn object_name(i: usize) -> Name {
    if i < 26 {
        Name::atom(((b'a' + i as u8) as char).to_string())
    } else {
        Name::atom(format!("o{i}"))
    }
}

fn identity_name(i: usize) -> Name {
    Name::atom(format!("1_{}", object_name(i)))
}

/// A valid category with at most `max_objects` objects and at most
/// `max_extra_morphisms` non-identity morphisms. One object always gives 𝟙.
///
/// Each attempt picks a thin preorder, the free category on a random acyclic
/// graph with parallel edges, or a category of functions between small sets
/// closed under composition. After the retry budget a discrete category is
/// returned.
pub fn gen_category(p: &GenParams) -> FinCategory {
    let mut seed = p.seed;
    for _ in 0..ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = match p.max_objects {
            0 => return FinCategory::empty(),
            1 => return FinCategory::terminal(),
            m => rng.gen_range(1..=m),
        };
        if n == 1 {
            return FinCategory::terminal();
        }
        let attempt = match rng.gen_range(0..3) {
            0 => thin(&mut rng, n, p.max_extra_morphisms),
            1 => free_dag(&mut rng, n, p.max_extra_morphisms),
            _ => concrete(&mut rng, n, p.max_extra_morphisms),
        };
        if let Some(c) = attempt {
            if c.validate().is_ok() {
                return c;
            }
        }
        seed = mix(seed);
    }
    FinCategory::discrete((0..p.max_objects).map(|i| object_name(i).to_string()))
}

fn thin(rng: &mut ChaCha8Rng, n: usize, extra: usize) -> Option<FinCategory> {
    let mut rel = vec![vec![false; n]; n];
    for (i, row) in rel.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = i == j || rng.gen_bool(0.35);
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if rel[i][k] && rel[k][j] {
                    rel[i][j] = true;
                }
            }
        }
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| rel[i][j])
        .collect();
    if pairs.len() - n > extra {
        return None;
    }
    let mut b = CategoryBuilder::new();
    for i in 0..n {
        b.object(object_name(i));
    }
    let mut key = HashMap::new();
    for &(i, j) in &pairs {
        let name = if i == j {
            identity_name(i)
        } else {
            Name::atom(format!("{}{}", object_name(i), object_name(j)))
        };
        key.insert((i, j), b.morphism(name, i, j));
    }
    for i in 0..n {
        b.identity(i, key[&(i, i)]);
    }
    for &(i, j) in &pairs {
        for k in 0..n {
            if rel[j][k] {
                b.composite(key[&(j, k)], key[&(i, j)], key[&(i, k)]);
            }
        }
    }
    b.build().ok()
}

fn free_dag(rng: &mut ChaCha8Rng, n: usize, extra: usize) -> Option<FinCategory> {
    let edges = rng.gen_range(0..=extra);
    let mut gens = Vec::new();
    for _ in 0..edges {
        let i = rng.gen_range(0..n - 1);
        let j = rng.gen_range(i + 1..n);
        gens.push((i, j));
    }
    // paths as edge lists, in traversal order
    let mut paths: Vec<Vec<usize>> = (0..gens.len()).map(|e| vec![e]).collect();
    let mut frontier = paths.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for path in &frontier {
            let end = gens[*path.last().unwrap()].1;
            for (e, &(i, _)) in gens.iter().enumerate() {
                if i == end {
                    let mut longer = path.clone();
                    longer.push(e);
                    next.push(longer);
                }
            }
        }
        paths.extend(next.iter().cloned());
        if paths.len() > extra {
            return None;
        }
        frontier = next;
    }
    let mut b = CategoryBuilder::new();
    for i in 0..n {
        b.object(object_name(i));
    }
    let mut ids = Vec::new();
    for i in 0..n {
        let m = b.morphism(identity_name(i), i, i);
        b.identity(i, m);
        b.composite(m, m, m);
        ids.push(m);
    }
    let mut key = HashMap::new();
    for path in &paths {
        let name = path.iter().rev().map(|e| format!("f{e}")).collect::<Vec<_>>().join(".");
        let (i, j) = (gens[path[0]].0, gens[*path.last().unwrap()].1);
        let k = b.morphism(Name::atom(name), i, j);
        key.insert(path.clone(), k);
        b.composite(k, ids[i], k);
        b.composite(ids[j], k, k);
    }
    for p1 in &paths {
        for p2 in &paths {
            if gens[*p1.last().unwrap()].1 == gens[p2[0]].0 {
                let mut joined = p1.clone();
                joined.extend(p2);
                b.composite(key[p2], key[p1], key[&joined]);
            }
        }
    }
    b.build().ok()
}

fn concrete(rng: &mut ChaCha8Rng, n: usize, extra: usize) -> Option<FinCategory> {
    let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=2)).collect();
    // (dom, cod, table)
    let mut mors: Vec<(usize, usize, Vec<usize>)> = (0..n).map(|i| (i, i, (0..sizes[i]).collect())).collect();
    let mut index: HashMap<(usize, usize, Vec<usize>), usize> =
        mors.iter().enumerate().map(|(k, m)| (m.clone(), k)).collect();
    let gens = rng.gen_range(0..=extra);
    for _ in 0..gens {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let table: Vec<usize> = (0..sizes[i]).map(|_| rng.gen_range(0..sizes[j])).collect();
        let m = (i, j, table);
        if !index.contains_key(&m) {
            index.insert(m.clone(), mors.len());
            mors.push(m);
        }
    }
    if mors.len() - n > extra {
        return None;
    }
    let mut composites = HashMap::new();
    let mut changed = true;
    while changed {
        changed = false;
        let count = mors.len();
        for f in 0..count {
            for g in 0..count {
                if mors[f].1 != mors[g].0 || composites.contains_key(&(g, f)) {
                    continue;
                }
                let table: Vec<usize> = mors[f].2.iter().map(|&x| mors[g].2[x]).collect();
                let m = (mors[f].0, mors[g].1, table);
                let k = match index.get(&m) {
                    Some(&k) => k,
                    None => {
                        index.insert(m.clone(), mors.len());
                        mors.push(m);
                        changed = true;
                        if mors.len() - n > extra {
                            return None;
                        }
                        mors.len() - 1
                    }
                };
                composites.insert((g, f), k);
            }
        }
    }
    let mut b = CategoryBuilder::new();
    for i in 0..n {
        b.object(object_name(i));
    }
    for (k, (i, j, _)) in mors.iter().enumerate() {
        let name = if k < n { identity_name(k) } else { Name::atom(format!("m{}", k - n)) };
        b.morphism(name, *i, *j);
    }
    for i in 0..n {
        b.identity(i, i);
    }
    for (&(g, f), &k) in &composites {
        b.composite(g, f, k);
    }
    b.build().ok()
}

/// Order in which presheaf actions are chosen. A morphism with a
/// factorization through two placed non-identity morphisms is placed as soon
/// as one exists, with its action forced, so clashing factorizations are
/// caught right after the factor that causes them. Among the rest, the
/// morphism that unlocks the most composites goes next.
fn assignment_order(c: &FinCategory) -> Vec<(usize, Option<(usize, usize)>)> {
    let mut factors = vec![Vec::new(); c.mor_count()];
    let mut uses = vec![Vec::new(); c.mor_count()];
    for (g, f, gf) in c.composites() {
        if !c.is_identity(g) && !c.is_identity(f) && g != gf && f != gf {
            factors[gf].push((g, f));
            uses[g].push((f, gf));
            uses[f].push((g, gf));
        }
    }
    let mut placed = vec![false; c.mor_count()];
    let mut rest: Vec<usize> = (0..c.mor_count()).filter(|&m| !c.is_identity(m)).collect();
    let mut order = Vec::new();
    while !rest.is_empty() {
        let forced = rest.iter().enumerate().find_map(|(i, &m)| {
            factors[m].iter().copied().find(|&(g, f)| placed[g] && placed[f]).map(|gf| (i, gf))
        });
        let (i, forced) = match forced {
            Some((i, gf)) => (i, Some(gf)),
            None => {
                let unlocked = |m: usize| uses[m].iter().filter(|&&(o, gf)| (placed[o] || o == m) && !placed[gf]).count();
                let best = (0..rest.len()).max_by_key(|&i| (unlocked(rest[i]), std::cmp::Reverse(i))).expect("non-empty");
                (best, None)
            }
        };
        let m = rest.remove(i);
        placed[m] = true;
        order.push((m, forced));
    }
    order
}

/// Random value-set sizes that admit a presheaf: a retract `a` of `b` gets
/// at most as many elements as `b` (so isomorphic objects get equal sizes),
/// and an empty set at `a` empties every object `a` maps to.
fn value_sets(rng: &mut ChaCha8Rng, c: &FinCategory, max: usize) -> Vec<FinSet> {
    let mut sizes: Vec<usize> = (0..c.ob_count())
        .map(|_| match max {
            0 => 0,
            1 => 1,
            m => {
                if rng.gen_bool(0.1) {
                    0
                } else {
                    rng.gen_range(1..=m)
                }
            }
        })
        .collect();
    let mut retracts = Vec::new();
    // r ∘ s = 1_a with s : a → b
    for (_, s, rs) in c.composites() {
        let (a, b) = (c.dom(s), c.cod(s));
        if rs == c.identity(a) && a != b {
            retracts.push((a, b));
        }
    }
    let mut changed = true;
    while changed {
        changed = false;
        for &(a, b) in &retracts {
            if sizes[b] < sizes[a] {
                sizes[b] = sizes[a];
                changed = true;
            }
        }
    }
    let mut changed = true;
    while changed {
        changed = false;
        for m in 0..c.mor_count() {
            if sizes[c.dom(m)] == 0 && sizes[c.cod(m)] != 0 {
                sizes[c.cod(m)] = 0;
                changed = true;
            }
        }
    }
    sizes
        .into_iter()
        .map(|size| FinSet::new((0..size).map(|i| Name::atom(format!("x{i}"))).collect()).expect("distinct"))
        .collect()
}

fn all_functions(from: usize, to: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..from {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..to).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

/// Backtracking search for an assignment of one candidate per morphism such
/// that every composition triple holds. `forced` computes the value of a
/// morphism from its factorization.
struct Csp<T> {
    order: Vec<(usize, Option<(usize, usize)>)>,
    triples: Vec<Vec<(usize, usize, usize)>>,
    nodes: usize,
    assigned: Vec<Option<T>>,
}

impl<T: Clone + PartialEq> Csp<T> {
    fn new(c: &FinCategory, identities: impl Fn(usize) -> T) -> Self {
        let order = assignment_order(c);
        let mut position = vec![0usize; c.mor_count()];
        for (i, &(m, _)) in order.iter().enumerate() {
            position[m] = i + 1;
        }
        let mut triples = vec![Vec::new(); order.len() + 1];
        for (g, f, gf) in c.composites() {
            let at = position[g].max(position[f]).max(position[gf]);
            triples[at].push((g, f, gf));
        }
        let mut assigned = vec![None; c.mor_count()];
        for a in 0..c.ob_count() {
            assigned[c.identity(a)] = Some(identities(a));
        }
        Csp { order, triples, nodes: 0, assigned }
    }

    fn solve(
        &mut self,
        rng: &mut ChaCha8Rng,
        candidates: &dyn Fn(usize, &mut ChaCha8Rng) -> Vec<T>,
        compose: &dyn Fn(&T, &T) -> T,
    ) -> bool {
        if !self.triples[0].iter().all(|&t| self.holds(t, compose)) {
            return false;
        }
        self.go(0, rng, candidates, compose)
    }

    /// `T(gf) = T(f) ∘ T(g)`, contravariantly.
    fn holds(&self, (g, f, gf): (usize, usize, usize), compose: &dyn Fn(&T, &T) -> T) -> bool {
        let (tg, tf, tgf) = (&self.assigned[g], &self.assigned[f], &self.assigned[gf]);
        compose(tf.as_ref().unwrap(), tg.as_ref().unwrap()) == *tgf.as_ref().unwrap()
    }

    fn go(
        &mut self,
        i: usize,
        rng: &mut ChaCha8Rng,
        candidates: &dyn Fn(usize, &mut ChaCha8Rng) -> Vec<T>,
        compose: &dyn Fn(&T, &T) -> T,
    ) -> bool {
        if i == self.order.len() {
            return true;
        }
        let (m, forced) = self.order[i];
        let options = match forced {
            Some((g, f)) => vec![compose(
                self.assigned[f].as_ref().unwrap(),
                self.assigned[g].as_ref().unwrap(),
            )],
            None => candidates(m, rng),
        };
        for option in options {
            self.nodes += 1;
            if self.nodes > NODE_BUDGET {
                return false;
            }
            self.assigned[m] = Some(option);
            if self.triples[i + 1].iter().all(|&t| self.holds(t, compose)) && self.go(i + 1, rng, candidates, compose)
            {
                return true;
            }
        }
        self.assigned[m] = None;
        false
    }
}

fn try_set_presheaf(c: &Arc<FinCategory>, p: &GenParams, seed: u64) -> Option<SetPresheaf> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = value_sets(&mut rng, c, p.max_fiber_size);
    let sizes: Vec<usize> = values.iter().map(FinSet::len).collect();
    let mut csp = Csp::new(c, |a| SetFunction::identity(sizes[a]));
    let candidates = |m: usize, rng: &mut ChaCha8Rng| {
        let mut all: Vec<SetFunction> = all_functions(sizes[c.cod(m)], sizes[c.dom(m)])
            .into_iter()
            .map(SetFunction::new)
            .collect();
        all.shuffle(rng);
        all
    };
    let compose = |second: &SetFunction, first: &SetFunction| SetFunction::compose(second, first);
    if !csp.solve(&mut rng, &candidates, &compose) {
        return None;
    }
    let actions = csp.assigned.into_iter().map(Option::unwrap).collect();
    let presheaf = SetPresheaf::new(c.clone(), values, actions).ok()?;
    presheaf.validate().is_ok().then_some(presheaf)
}

/// A valid Set-valued presheaf on `c` with value sets of at most
/// `max_fiber_size` elements. A bound of 1 gives the constant singleton.
pub fn gen_set_presheaf(c: &Arc<FinCategory>, p: &GenParams) -> Result<SetPresheaf> {
    let report = c.validate();
    if !report.is_ok() {
        return Err(Error::invalid("base category", report));
    }
    let mut seed = p.seed;
    for _ in 0..ATTEMPTS {
        if let Some(presheaf) = try_set_presheaf(c, p, seed) {
            return Ok(presheaf);
        }
        seed = mix(seed);
    }
    Err(Error::RetryBudgetExhausted {
        what: "set presheaf",
        attempts: ATTEMPTS,
    })
}

/// A valid presheaf on `c × d`.
pub fn gen_bi_presheaf(c: &Arc<FinCategory>, d: &Arc<FinCategory>, p: &GenParams) -> Result<BiPresheaf> {
    let base = Arc::new(c.product(d));
    let presheaf = gen_set_presheaf(&base, p)?;
    BiPresheaf::new(c.clone(), d.clone(), presheaf)
}

fn fiber_params(p: &GenParams, seed: u64) -> GenParams {
    GenParams {
        max_objects: p.max_fiber_size,
        max_extra_morphisms: p.max_extra_morphisms.min(3),
        max_fiber_size: p.max_fiber_size,
        seed,
    }
}

fn try_cat_presheaf(c: &Arc<FinCategory>, p: &GenParams, seed: u64) -> Result<Option<CatPresheaf>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fibers: Vec<Arc<FinCategory>> = if rng.gen_bool(0.4) {
        let shared = Arc::new(gen_category(&fiber_params(p, rng.gen())));
        vec![shared; c.ob_count()]
    } else {
        (0..c.ob_count())
            .map(|_| Arc::new(gen_category(&fiber_params(p, rng.gen()))))
            .collect()
    };
    let limits = Limits {
        max_objects: 8,
        max_morphisms: 64,
        ..Limits::default()
    };
    let mut functors: HashMap<(usize, usize), Vec<Functor>> = HashMap::new();
    for m in 0..c.mor_count() {
        let key = (c.cod(m), c.dom(m));
        if let std::collections::hash_map::Entry::Vacant(slot) = functors.entry(key) {
            slot.insert(enumerate_functors(&fibers[key.0], &fibers[key.1], &limits)?);
        }
    }
    let mut csp = Csp::new(c, |a| Functor::identity(fibers[a].clone()));
    let candidates = |m: usize, rng: &mut ChaCha8Rng| {
        let mut all = functors[&(c.cod(m), c.dom(m))].clone();
        all.shuffle(rng);
        all
    };
    let compose = |second: &Functor, first: &Functor| Functor::compose(second, first).expect("matching fibers");
    if !csp.solve(&mut rng, &candidates, &compose) {
        return Ok(None);
    }
    let transitions = csp.assigned.into_iter().map(Option::unwrap).collect();
    let presheaf = CatPresheaf::new(c.clone(), fibers, transitions)?;
    Ok(presheaf.validate().is_ok().then_some(presheaf))
}

/// A valid strict Cat-valued presheaf on `c` whose fibers have at most
/// `max_fiber_size` objects. Sometimes every fiber is the same category.
pub fn gen_cat_presheaf(c: &Arc<FinCategory>, p: &GenParams) -> Result<CatPresheaf> {
    let report = c.validate();
    if !report.is_ok() {
        return Err(Error::invalid("base category", report));
    }
    let mut seed = p.seed;
    for _ in 0..ATTEMPTS {
        if let Some(presheaf) = try_cat_presheaf(c, p, seed)? {
            return Ok(presheaf);
        }
        seed = mix(seed);
    }
    Err(Error::RetryBudgetExhausted {
        what: "cat presheaf",
        attempts: ATTEMPTS,
    })
}

/// A Cat-valued presheaf over the grothendieck construction of `base`.
pub fn gen_q_over_elements(base: &CatPresheaf, p: &GenParams) -> Result<CatPresheaf> {
    let total = grothendieck(base)?.category;
    gen_cat_presheaf(&total, p)
}
