//! Brute-force oracles and instance builders shared by the test targets.
//!
//! The oracles enumerate every candidate and filter by the defining
//! equations, with no pruning, so they share no search code with the
//! library.

#![allow(dead_code)]

use std::sync::Arc;

use sigma_cat::elements::{BiPresheaf, SetPresheaf};
use sigma_cat::grothendieck::{CatFamily, CatPresheaf, SigmaFamily};
use sigma_cat::testkit::{gen_bi_presheaf, gen_cat_presheaf, gen_category, gen_q_over_elements, gen_set_presheaf, mix, GenParams};
use sigma_cat::{FinCategory, Functor, Name, Result};

/// `(object map, morphism map)` of a functor.
pub type Maps = (Vec<usize>, Vec<usize>);

/// Every tuple picking one entry from each list; one empty tuple for no lists.
pub fn product(lists: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for list in lists {
        out = out
            .into_iter()
            .flat_map(|t| {
                list.iter().map(move |&x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

fn ranges(sizes: impl Iterator<Item = usize>) -> Vec<Vec<usize>> {
    sizes.map(|n| (0..n).collect()).collect()
}

pub fn maps(f: &Functor) -> Maps {
    (f.obj_map().to_vec(), f.mor_map().to_vec())
}

/// Every functor `C → D`: all object maps, all endpoint-respecting morphism
/// maps, filtered by the identity and composition equations.
pub fn brute_functors(c: &FinCategory, d: &FinCategory) -> Vec<Maps> {
    let mut out = Vec::new();
    for objs in product(&ranges((0..c.ob_count()).map(|_| d.ob_count()))) {
        let choices: Vec<Vec<usize>> = (0..c.mor_count())
            .map(|m| {
                (0..d.mor_count())
                    .filter(|&n| d.dom(n) == objs[c.dom(m)] && d.cod(n) == objs[c.cod(m)])
                    .collect()
            })
            .collect();
        for mors in product(&choices) {
            let ids = (0..c.ob_count()).all(|a| mors[c.identity(a)] == d.identity(objs[a]));
            let comp = c
                .composites()
                .into_iter()
                .all(|(g, f, gf)| d.compose(mors[g], mors[f]) == Some(mors[gf]));
            if ids && comp {
                out.push((objs.clone(), mors));
            }
        }
    }
    out.sort();
    out
}

/// Component tuples of every natural transformation `F ⇒ G`.
pub fn brute_nat_trans(f: &Functor, g: &Functor) -> Vec<Vec<usize>> {
    let (c, d) = (f.source(), f.target());
    let choices: Vec<Vec<usize>> = (0..c.ob_count())
        .map(|a| (0..d.mor_count()).filter(|&n| d.dom(n) == f.obj(a) && d.cod(n) == g.obj(a)).collect())
        .collect();
    product(&choices)
        .into_iter()
        .filter(|eta| {
            (0..c.mor_count()).all(|m| {
                let (a, b) = (c.dom(m), c.cod(m));
                d.compose(g.mor(m), eta[a]) == d.compose(eta[b], f.mor(m))
            })
        })
        .collect()
}

/// Every family `(u_a)` with `P(f)(u_b) = u_a` for all `f : a → b`.
pub fn brute_product_set(p: &SetPresheaf) -> Vec<Vec<usize>> {
    let c = p.base();
    product(&ranges((0..c.ob_count()).map(|a| p.value(a).len())))
        .into_iter()
        .filter(|u| (0..c.mor_count()).all(|m| p.act(m, u[c.cod(m)]) == u[c.dom(m)]))
        .collect()
}

/// Every family `(x_a)` with a morphism `x_a → 𝒫(f)(x_b)` for all `f`.
pub fn brute_cat_product_set(p: &CatPresheaf) -> Vec<Vec<usize>> {
    let c = p.base();
    product(&ranges((0..c.ob_count()).map(|a| p.fiber(a).ob_count())))
        .into_iter()
        .filter(|x| {
            (0..c.mor_count()).all(|m| {
                let (a, b) = (c.dom(m), c.cod(m));
                let fa = p.fiber(a);
                let target = p.transition(m).obj(x[b]);
                (0..fa.mor_count()).any(|j| fa.dom(j) == x[a] && fa.cod(j) == target)
            })
        })
        .collect()
}

/// The functors of `all` that are associates of `Φ`: object part `a ↦ x_a`
/// and `R(f, F f)(u_b) = u_a` for every `f : a → b`.
pub fn brute_associates(r: &BiPresheaf, sigma: &SigmaFamily, phi: &CatFamily, all: &[Functor]) -> Vec<Maps> {
    let c = r.left();
    let parts: Vec<(usize, usize)> =
        phi.objects.iter().enumerate().map(|(a, &o)| sigma.fibers[a].parts(o)).collect();
    let mut out: Vec<Maps> = all
        .iter()
        .filter(|f| (0..c.ob_count()).all(|a| f.obj(a) == parts[a].0))
        .filter(|f| {
            (0..c.mor_count()).all(|m| {
                let (a, b) = (c.dom(m), c.cod(m));
                r.act(m, f.mor(m), parts[b].1) == parts[a].1
            })
        })
        .map(maps)
        .collect();
    out.sort();
    out
}

/// `C` and `D` for one seed; `D` uses a derived seed.
pub fn categories(p: &GenParams) -> (Arc<FinCategory>, Arc<FinCategory>) {
    (Arc::new(gen_category(p)), Arc::new(gen_category(&p.with_seed(mix(p.seed)))))
}

pub fn set_presheaf(p: &GenParams) -> Result<SetPresheaf> {
    gen_set_presheaf(&Arc::new(gen_category(p)), p)
}

pub fn bi_presheaf(p: &GenParams) -> Result<BiPresheaf> {
    let (c, d) = categories(p);
    gen_bi_presheaf(&c, &d, p)
}

pub fn cat_presheaf(p: &GenParams) -> Result<CatPresheaf> {
    gen_cat_presheaf(&Arc::new(gen_category(p)), p)
}

/// `(𝒫, 𝒬)` with `𝒬` over the grothendieck construction of `𝒫`.
pub fn pq_pair(p: &GenParams) -> Result<(CatPresheaf, CatPresheaf)> {
    let cp = cat_presheaf(p)?;
    let q = gen_q_over_elements(&cp, &p.with_seed(mix(p.seed ^ 0x5151)))?;
    Ok((cp, q))
}

pub fn params(max_objects: usize, max_extra_morphisms: usize, max_fiber_size: usize) -> GenParams {
    GenParams { max_objects, max_extra_morphisms, max_fiber_size, seed: 0 }
}

/// Chain `a → b → c` over two-point discrete fibers where `𝒫(g ∘ f)` swaps
/// the points but `𝒫(f)` and `𝒫(g)` do not.
pub fn pseudo_presheaf() -> CatPresheaf {
    let c = Arc::new(FinCategory::chain(&["a", "b", "c"], &["f", "g"]));
    let two = Arc::new(FinCategory::discrete(["x", "y"]));
    let id = Functor::identity(two.clone());
    let swap = Functor::new(two.clone(), two.clone(), vec![1, 0], vec![1, 0]).unwrap();
    let transitions = c
        .morphisms()
        .iter()
        .map(|m| if m.name == Name::atom("g.f") { swap.clone() } else { id.clone() })
        .collect();
    CatPresheaf::new(c.clone(), vec![two.clone(), two.clone(), two], transitions).unwrap()
}
