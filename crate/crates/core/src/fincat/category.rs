use std::collections::HashMap;
use std::fmt;

use super::Name;
use crate::error::{Error, Result};
use crate::report::{Law, ValidationReport};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub name: Name,
    pub dom: usize,
    pub cod: usize,
}

/// A finite category stored as an explicit composition table.
///
/// Objects and morphisms are kept sorted by name and addressed by index.
/// The table may violate the category laws; [`FinCategory::validate`]
/// reports every violation. Structural problems (duplicate names, dangling
/// references, a missing identity) are rejected at construction.
#[derive(Clone)]
pub struct FinCategory {
    objects: Vec<Name>,
    morphisms: Vec<Morphism>,
    identities: Vec<usize>,
    /// `(g, f) -> g ∘ f`
    compose: HashMap<(usize, usize), usize>,
    obj_index: HashMap<Name, usize>,
    mor_index: HashMap<Name, usize>,
    outgoing: Vec<Vec<usize>>,
    incoming: Vec<Vec<usize>>,
    hom: HashMap<(usize, usize), Vec<usize>>,
}

impl PartialEq for FinCategory {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.morphisms == other.morphisms
            && self.identities == other.identities
            && self.compose == other.compose
    }
}

impl Eq for FinCategory {}

impl fmt::Debug for FinCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinCategory")
            .field("objects", &self.objects)
            .field(
                "morphisms",
                &self
                    .morphisms
                    .iter()
                    .map(|m| {
                        format!(
                            "{}: {} -> {}",
                            m.name, self.objects[m.dom], self.objects[m.cod]
                        )
                    })
                    .collect::<Vec<_>>(),
            )
            .finish()
    }
}

/// Incremental construction with insertion-order keys; names are sorted on
/// [`CategoryBuilder::build`].
#[derive(Debug, Default, Clone)]
pub struct CategoryBuilder {
    objects: Vec<Name>,
    morphisms: Vec<(Name, usize, usize)>,
    identities: Vec<Option<usize>>,
    compose: Vec<(usize, usize, usize)>,
}

/// Result of [`CategoryBuilder::build_indexed`]: the category plus the maps
/// from builder keys to final indices.
pub struct Built {
    pub category: FinCategory,
    pub objects: Vec<usize>,
    pub morphisms: Vec<usize>,
}

impl CategoryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(&mut self, name: Name) -> usize {
        self.objects.push(name);
        self.identities.push(None);
        self.objects.len() - 1
    }

    pub fn morphism(&mut self, name: Name, dom: usize, cod: usize) -> usize {
        self.morphisms.push((name, dom, cod));
        self.morphisms.len() - 1
    }

    pub fn identity(&mut self, obj: usize, mor: usize) {
        self.identities[obj] = Some(mor);
    }

    /// Records `g ∘ f = gf`.
    pub fn composite(&mut self, g: usize, f: usize, gf: usize) {
        self.compose.push((g, f, gf));
    }

    pub fn build(self) -> Result<FinCategory> {
        Ok(self.build_indexed()?.category)
    }

    pub fn build_indexed(self) -> Result<Built> {
        let obj_perm = sort_permutation(&self.objects);
        let mor_names: Vec<Name> = self.morphisms.iter().map(|m| m.0.clone()).collect();
        let mor_perm = sort_permutation(&mor_names);

        let mut objects = vec![None; self.objects.len()];
        for (key, name) in self.objects.into_iter().enumerate() {
            objects[obj_perm[key]] = Some(name);
        }
        let objects: Vec<Name> = objects.into_iter().map(Option::unwrap).collect();
        for w in objects.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Malformed(format!("duplicate object `{}`", w[0])));
            }
        }

        let n = objects.len();
        let mut morphisms = vec![None; self.morphisms.len()];
        for (key, (name, dom, cod)) in self.morphisms.into_iter().enumerate() {
            if dom >= n || cod >= n {
                return Err(Error::Malformed(format!(
                    "morphism `{name}` has a dangling endpoint"
                )));
            }
            morphisms[mor_perm[key]] = Some(Morphism {
                name,
                dom: obj_perm[dom],
                cod: obj_perm[cod],
            });
        }
        let morphisms: Vec<Morphism> = morphisms.into_iter().map(Option::unwrap).collect();
        for w in morphisms.windows(2) {
            if w[0].name == w[1].name {
                return Err(Error::Malformed(format!(
                    "duplicate morphism `{}`",
                    w[0].name
                )));
            }
        }

        let mut identities = vec![0; n];
        for (key, id) in self.identities.into_iter().enumerate() {
            let id = id.ok_or_else(|| {
                Error::Malformed(format!("object `{}` has no identity", objects[obj_perm[key]]))
            })?;
            if id >= morphisms.len() {
                return Err(Error::Malformed("identity refers to unknown morphism".into()));
            }
            identities[obj_perm[key]] = mor_perm[id];
        }

        let m = morphisms.len();
        let mut compose = HashMap::with_capacity(self.compose.len());
        for (g, f, gf) in self.compose {
            if g >= m || f >= m || gf >= m {
                return Err(Error::Malformed("composite refers to unknown morphism".into()));
            }
            let key = (mor_perm[g], mor_perm[f]);
            let val = mor_perm[gf];
            if let Some(old) = compose.insert(key, val) {
                if old != val {
                    return Err(Error::Malformed(format!(
                        "conflicting composites for ({}, {})",
                        morphisms[key.0].name, morphisms[key.1].name
                    )));
                }
            }
        }

        let category = FinCategory::assemble(objects, morphisms, identities, compose);
        Ok(Built {
            category,
            objects: obj_perm,
            morphisms: mor_perm,
        })
    }
}

fn sort_permutation(names: &[Name]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..names.len()).collect();
    order.sort_by(|&a, &b| names[a].cmp(&names[b]));
    let mut perm = vec![0; names.len()];
    for (rank, key) in order.into_iter().enumerate() {
        perm[key] = rank;
    }
    perm
}

impl FinCategory {
    fn assemble(
        objects: Vec<Name>,
        morphisms: Vec<Morphism>,
        identities: Vec<usize>,
        compose: HashMap<(usize, usize), usize>,
    ) -> Self {
        let n = objects.len();
        let obj_index = objects.iter().cloned().enumerate().map(|(i, o)| (o, i)).collect();
        let mor_index = morphisms
            .iter()
            .enumerate()
            .map(|(i, m)| (m.name.clone(), i))
            .collect();
        let mut outgoing = vec![Vec::new(); n];
        let mut incoming = vec![Vec::new(); n];
        let mut hom: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (i, m) in morphisms.iter().enumerate() {
            outgoing[m.dom].push(i);
            incoming[m.cod].push(i);
            hom.entry((m.dom, m.cod)).or_default().push(i);
        }
        FinCategory {
            objects,
            morphisms,
            identities,
            compose,
            obj_index,
            mor_index,
            outgoing,
            incoming,
            hom,
        }
    }

    /// Builds a category from named parts. Composites involving an identity
    /// that are not listed are filled in when `infer_identity_composites` is
    /// set.
    pub fn from_names(
        objects: Vec<Name>,
        morphisms: Vec<(Name, Name, Name)>,
        identities: Vec<(Name, Name)>,
        composites: Vec<(Name, Name, Name)>,
        infer_identity_composites: bool,
    ) -> Result<Self> {
        let mut b = CategoryBuilder::new();
        let mut obj_keys = HashMap::new();
        for o in objects {
            let k = b.object(o.clone());
            if obj_keys.insert(o.clone(), k).is_some() {
                return Err(Error::Malformed(format!("duplicate object `{o}`")));
            }
        }
        let mut mor_keys = HashMap::new();
        let mut ends = Vec::new();
        for (name, dom, cod) in morphisms {
            let d = *obj_keys.get(&dom).ok_or(Error::UnknownObject(dom))?;
            let c = *obj_keys.get(&cod).ok_or(Error::UnknownObject(cod))?;
            let k = b.morphism(name.clone(), d, c);
            ends.push((d, c));
            if mor_keys.insert(name.clone(), k).is_some() {
                return Err(Error::Malformed(format!("duplicate morphism `{name}`")));
            }
        }
        let mut id_of = vec![None; obj_keys.len()];
        for (o, m) in identities {
            let ok = *obj_keys.get(&o).ok_or(Error::UnknownObject(o))?;
            let mk = *mor_keys.get(&m).ok_or(Error::UnknownMorphism(m))?;
            b.identity(ok, mk);
            id_of[ok] = Some(mk);
        }
        let mut given = std::collections::HashSet::new();
        for (g, f, gf) in composites {
            let gk = *mor_keys.get(&g).ok_or(Error::UnknownMorphism(g))?;
            let fk = *mor_keys.get(&f).ok_or(Error::UnknownMorphism(f))?;
            let hk = *mor_keys.get(&gf).ok_or(Error::UnknownMorphism(gf))?;
            b.composite(gk, fk, hk);
            given.insert((gk, fk));
        }
        if infer_identity_composites {
            for (k, &(d, c)) in ends.iter().enumerate() {
                if let Some(id) = id_of[d] {
                    if given.insert((k, id)) {
                        b.composite(k, id, k);
                    }
                }
                if let Some(id) = id_of[c] {
                    if given.insert((id, k)) {
                        b.composite(id, k, k);
                    }
                }
            }
        }
        b.build()
    }

    pub fn empty() -> Self {
        CategoryBuilder::new().build().expect("empty category")
    }

    /// The category with one object `*` and its identity.
    pub fn terminal() -> Self {
        Self::discrete(["*"])
    }

    pub fn discrete<I, S>(objects: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut b = CategoryBuilder::new();
        for o in objects {
            let o: String = o.into();
            let k = b.object(Name::atom(o.clone()));
            let id = b.morphism(Name::atom(format!("1_{o}")), k, k);
            b.identity(k, id);
            b.composite(id, id, id);
        }
        b.build().expect("discrete category")
    }

    /// `a --f--> b`.
    pub fn arrow() -> Self {
        Self::chain(&["a", "b"], &["f"])
    }

    /// The free category on a path `o0 -> o1 -> ... -> on`, i.e. the total
    /// order on the listed objects. Composite names join step names with `.`
    /// in composition order (`g.f` is `g ∘ f`).
    pub fn chain(objects: &[&str], steps: &[&str]) -> Self {
        assert_eq!(objects.len(), steps.len() + 1, "one step per consecutive pair");
        let mut b = CategoryBuilder::new();
        let keys: Vec<usize> = objects.iter().map(|o| b.object(Name::atom(*o))).collect();
        // path i..j (i <= j) -> morphism key
        let mut path = HashMap::new();
        for i in 0..objects.len() {
            for j in i..objects.len() {
                let name = if i == j {
                    format!("1_{}", objects[i])
                } else {
                    steps[i..j].iter().rev().cloned().collect::<Vec<_>>().join(".")
                };
                let k = b.morphism(Name::atom(name), keys[i], keys[j]);
                if i == j {
                    b.identity(keys[i], k);
                }
                path.insert((i, j), k);
            }
        }
        for i in 0..objects.len() {
            for j in i..objects.len() {
                for l in j..objects.len() {
                    b.composite(path[&(j, l)], path[&(i, j)], path[&(i, l)]);
                }
            }
        }
        b.build().expect("chain category")
    }

    pub fn ob_count(&self) -> usize {
        self.objects.len()
    }

    pub fn mor_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> &[Name] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn object(&self, i: usize) -> &Name {
        &self.objects[i]
    }

    pub fn morphism(&self, m: usize) -> &Morphism {
        &self.morphisms[m]
    }

    pub fn mor_name(&self, m: usize) -> &Name {
        &self.morphisms[m].name
    }

    pub fn dom(&self, m: usize) -> usize {
        self.morphisms[m].dom
    }

    pub fn cod(&self, m: usize) -> usize {
        self.morphisms[m].cod
    }

    pub fn identity(&self, a: usize) -> usize {
        self.identities[a]
    }

    pub fn identities(&self) -> &[usize] {
        &self.identities
    }

    pub fn is_identity(&self, m: usize) -> bool {
        let mm = &self.morphisms[m];
        mm.dom == mm.cod && self.identities[mm.dom] == m
    }

    /// `g ∘ f`, if recorded.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.compose.get(&(g, f)).copied()
    }

    /// All recorded composites as `(g, f, g ∘ f)`, sorted.
    pub fn composites(&self) -> Vec<(usize, usize, usize)> {
        let mut out: Vec<_> = self.compose.iter().map(|(&(g, f), &h)| (g, f, h)).collect();
        out.sort_unstable();
        out
    }

    pub fn obj_index(&self, name: &Name) -> Option<usize> {
        self.obj_index.get(name).copied()
    }

    pub fn mor_index(&self, name: &Name) -> Option<usize> {
        self.mor_index.get(name).copied()
    }

    pub fn obj_by_name(&self, name: &Name) -> Result<usize> {
        self.obj_index(name).ok_or_else(|| Error::UnknownObject(name.clone()))
    }

    pub fn mor_by_name(&self, name: &Name) -> Result<usize> {
        self.mor_index(name).ok_or_else(|| Error::UnknownMorphism(name.clone()))
    }

    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        self.hom.get(&(a, b)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn outgoing(&self, a: usize) -> &[usize] {
        &self.outgoing[a]
    }

    pub fn incoming(&self, b: usize) -> &[usize] {
        &self.incoming[b]
    }

    /// Pairs `(g, f)` with `cod f = dom g`, in index order.
    pub fn composable_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.mor_count()).flat_map(move |f| {
            self.outgoing[self.morphisms[f].cod].iter().map(move |&g| (g, f))
        })
    }

    /// True when every hom-set has at most one morphism.
    pub fn is_thin(&self) -> bool {
        self.hom.values().all(|v| v.len() <= 1)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        let name = |m: usize| self.morphisms[m].name.clone();

        for (a, &id) in self.identities.iter().enumerate() {
            let m = &self.morphisms[id];
            if m.dom != a || m.cod != a {
                report.push(
                    Law::IdentityEndpoints,
                    vec![self.objects[a].clone(), m.name.clone()],
                    "identity is not an endomorphism of its object",
                );
            }
        }

        for (g, f) in self.composable_pairs() {
            match self.compose(g, f) {
                None => report.push(
                    Law::MissingComposite,
                    vec![name(g), name(f)],
                    "composable pair has no composite",
                ),
                Some(h) => {
                    if self.dom(h) != self.dom(f) || self.cod(h) != self.cod(g) {
                        report.push(
                            Law::CompositeEndpoints,
                            vec![name(g), name(f), name(h)],
                            "composite has wrong domain or codomain",
                        );
                    }
                }
            }
        }

        for (g, f, _) in self.composites() {
            if self.cod(f) != self.dom(g) {
                report.push(
                    Law::SpuriousComposite,
                    vec![name(g), name(f)],
                    "composite recorded for a non-composable pair",
                );
            }
        }

        for f in 0..self.mor_count() {
            let left = self.identities[self.cod(f)];
            let right = self.identities[self.dom(f)];
            if let Some(h) = self.compose(f, right) {
                if h != f {
                    report.push(Law::RightUnit, vec![name(f)], format!("f ∘ 1 = {}", name(h)));
                }
            }
            if let Some(h) = self.compose(left, f) {
                if h != f {
                    report.push(Law::LeftUnit, vec![name(f)], format!("1 ∘ f = {}", name(h)));
                }
            }
        }

        for f in 0..self.mor_count() {
            for &g in self.outgoing(self.cod(f)) {
                let Some(gf) = self.compose(g, f) else { continue };
                for &h in self.outgoing(self.cod(g)) {
                    let Some(hg) = self.compose(h, g) else { continue };
                    if let (Some(l), Some(r)) = (self.compose(h, gf), self.compose(hg, f)) {
                        if l != r {
                            report.push(
                                Law::Associativity,
                                vec![name(h), name(g), name(f)],
                                format!("h ∘ (g ∘ f) = {} but (h ∘ g) ∘ f = {}", name(l), name(r)),
                            );
                        }
                    }
                }
            }
        }
        report
    }

    pub fn opposite(&self) -> FinCategory {
        let morphisms = self
            .morphisms
            .iter()
            .map(|m| Morphism {
                name: m.name.clone(),
                dom: m.cod,
                cod: m.dom,
            })
            .collect();
        let compose = self.compose.iter().map(|(&(g, f), &h)| ((f, g), h)).collect();
        FinCategory::assemble(self.objects.clone(), morphisms, self.identities.clone(), compose)
    }

    /// `C × D` with objects `(a, x)` and morphisms `(f, φ)`.
    ///
    /// Object `(a, x)` sits at index `a * |Ob D| + x` and morphism `(f, φ)` at
    /// `f * |Mor D| + φ`, since pairs sort lexicographically.
    pub fn product(&self, other: &FinCategory) -> FinCategory {
        let nd = other.ob_count();
        let md = other.mor_count();
        let mut objects = Vec::with_capacity(self.ob_count() * nd);
        for a in &self.objects {
            for x in &other.objects {
                objects.push(Name::pair(a.clone(), x.clone()));
            }
        }
        let mut morphisms = Vec::with_capacity(self.mor_count() * md);
        for f in &self.morphisms {
            for p in &other.morphisms {
                morphisms.push(Morphism {
                    name: Name::pair(f.name.clone(), p.name.clone()),
                    dom: f.dom * nd + p.dom,
                    cod: f.cod * nd + p.cod,
                });
            }
        }
        let mut identities = Vec::with_capacity(objects.len());
        for a in 0..self.ob_count() {
            for x in 0..nd {
                identities.push(self.identities[a] * md + other.identities[x]);
            }
        }
        let mut compose = HashMap::new();
        for (&(g, f), &h) in &self.compose {
            for (&(q, p), &r) in &other.compose {
                compose.insert((g * md + q, f * md + p), h * md + r);
            }
        }
        FinCategory::assemble(objects, morphisms, identities, compose)
    }

    /// The slice `C/a`: objects are morphisms `h` into `a`, named
    /// `slice[(dom h, h)]`; a morphism `h -> h'` is an `f` with `h' ∘ f = h`,
    /// named `slice[(f, (h, h'))]`.
    pub fn slice(&self, a: &Name) -> Result<FinCategory> {
        let a = self.obj_by_name(a)?;
        let report = self.validate();
        if !report.is_ok() {
            return Err(Error::invalid("slice base", report));
        }
        let over: Vec<usize> = self.incoming(a).to_vec();
        let mut b = CategoryBuilder::new();
        let mut obj_key = HashMap::new();
        for &h in &over {
            let name = Name::tagged(
                "slice",
                Name::pair(self.objects[self.dom(h)].clone(), self.mor_name(h).clone()),
            );
            obj_key.insert(h, b.object(name));
        }
        // (f, h, h') -> key
        let mut mor_key = HashMap::new();
        let mut arrows = Vec::new();
        for &h in &over {
            for &h2 in &over {
                for &f in self.hom(self.dom(h), self.dom(h2)) {
                    if self.compose(h2, f) == Some(h) {
                        let name = Name::tagged(
                            "slice",
                            Name::pair(
                                self.mor_name(f).clone(),
                                Name::pair(self.mor_name(h).clone(), self.mor_name(h2).clone()),
                            ),
                        );
                        let k = b.morphism(name, obj_key[&h], obj_key[&h2]);
                        mor_key.insert((f, h, h2), k);
                        arrows.push((f, h, h2));
                    }
                }
            }
        }
        for &h in &over {
            let id = self.identity(self.dom(h));
            b.identity(obj_key[&h], mor_key[&(id, h, h)]);
        }
        for &(f, h, h2) in &arrows {
            for &(g, k2, h3) in &arrows {
                if k2 != h2 {
                    continue;
                }
                let gf = self.compose(g, f).expect("validated");
                b.composite(mor_key[&(g, h2, h3)], mor_key[&(f, h, h2)], mor_key[&(gf, h, h3)]);
            }
        }
        b.build()
    }

    /// Renames every cell; fails if the renaming is not injective.
    pub fn rename(
        &self,
        obj: impl Fn(&Name) -> Name,
        mor: impl Fn(&Name) -> Name,
    ) -> Result<FinCategory> {
        let mut b = CategoryBuilder::new();
        for o in &self.objects {
            b.object(obj(o));
        }
        for m in &self.morphisms {
            b.morphism(mor(&m.name), m.dom, m.cod);
        }
        for (a, &id) in self.identities.iter().enumerate() {
            b.identity(a, id);
        }
        for (g, f, h) in self.composites() {
            b.composite(g, f, h);
        }
        b.build()
    }
}
