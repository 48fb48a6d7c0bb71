use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::{FinCategory, Name};
use crate::error::{Error, Result};
use crate::report::{Law, ValidationReport};

pub(crate) fn same_category(a: &Arc<FinCategory>, b: &Arc<FinCategory>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A functor between finite categories, stored as index maps.
#[derive(Clone)]
pub struct Functor {
    source: Arc<FinCategory>,
    target: Arc<FinCategory>,
    obj_map: Vec<usize>,
    mor_map: Vec<usize>,
}

impl PartialEq for Functor {
    fn eq(&self, other: &Self) -> bool {
        self.obj_map == other.obj_map
            && self.mor_map == other.mor_map
            && same_category(&self.source, &other.source)
            && same_category(&self.target, &other.target)
    }
}

impl Eq for Functor {}

impl fmt::Debug for Functor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let objs: Vec<String> = self
            .obj_map
            .iter()
            .enumerate()
            .map(|(a, &b)| format!("{} ↦ {}", self.source.object(a), self.target.object(b)))
            .collect();
        let mors: Vec<String> = self
            .mor_map
            .iter()
            .enumerate()
            .map(|(m, &n)| format!("{} ↦ {}", self.source.mor_name(m), self.target.mor_name(n)))
            .collect();
        f.debug_struct("Functor").field("obj", &objs).field("mor", &mors).finish()
    }
}

impl Functor {
    pub fn new(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        obj_map: Vec<usize>,
        mor_map: Vec<usize>,
    ) -> Result<Self> {
        if obj_map.len() != source.ob_count() || mor_map.len() != source.mor_count() {
            return Err(Error::Malformed("functor maps are not total".into()));
        }
        if obj_map.iter().any(|&b| b >= target.ob_count())
            || mor_map.iter().any(|&m| m >= target.mor_count())
        {
            return Err(Error::Malformed("functor maps leave the target".into()));
        }
        Ok(Functor {
            source,
            target,
            obj_map,
            mor_map,
        })
    }

    pub fn from_names(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        obj_map: &BTreeMap<Name, Name>,
        mor_map: &BTreeMap<Name, Name>,
    ) -> Result<Self> {
        let mut objs = Vec::with_capacity(source.ob_count());
        for a in source.objects() {
            let b = obj_map
                .get(a)
                .ok_or_else(|| Error::Malformed(format!("object map misses `{a}`")))?;
            objs.push(target.obj_by_name(b)?);
        }
        let mut mors = Vec::with_capacity(source.mor_count());
        for m in source.morphisms() {
            let n = mor_map
                .get(&m.name)
                .ok_or_else(|| Error::Malformed(format!("morphism map misses `{}`", m.name)))?;
            mors.push(target.mor_by_name(n)?);
        }
        for k in obj_map.keys() {
            source.obj_by_name(k)?;
        }
        for k in mor_map.keys() {
            source.mor_by_name(k)?;
        }
        Functor::new(source, target, objs, mors)
    }

    pub fn identity(category: Arc<FinCategory>) -> Self {
        let obj_map = (0..category.ob_count()).collect();
        let mor_map = (0..category.mor_count()).collect();
        Functor {
            source: category.clone(),
            target: category,
            obj_map,
            mor_map,
        }
    }

    /// `second ∘ first`; the intermediate categories must be structurally equal.
    pub fn compose(second: &Functor, first: &Functor) -> Result<Self> {
        if !same_category(&first.target, &second.source) {
            return Err(Error::Mismatch(
                "target of the first functor differs from the source of the second".into(),
            ));
        }
        Ok(Functor {
            source: first.source.clone(),
            target: second.target.clone(),
            obj_map: first.obj_map.iter().map(|&b| second.obj_map[b]).collect(),
            mor_map: first.mor_map.iter().map(|&m| second.mor_map[m]).collect(),
        })
    }

    pub fn source(&self) -> &Arc<FinCategory> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCategory> {
        &self.target
    }

    pub fn obj(&self, a: usize) -> usize {
        self.obj_map[a]
    }

    pub fn mor(&self, m: usize) -> usize {
        self.mor_map[m]
    }

    pub fn obj_map(&self) -> &[usize] {
        &self.obj_map
    }

    pub fn mor_map(&self) -> &[usize] {
        &self.mor_map
    }

    pub fn obj_names(&self) -> BTreeMap<Name, Name> {
        self.obj_map
            .iter()
            .enumerate()
            .map(|(a, &b)| (self.source.object(a).clone(), self.target.object(b).clone()))
            .collect()
    }

    pub fn mor_names(&self) -> BTreeMap<Name, Name> {
        self.mor_map
            .iter()
            .enumerate()
            .map(|(m, &n)| (self.source.mor_name(m).clone(), self.target.mor_name(n).clone()))
            .collect()
    }

    /// True when this is the identity on its source and `source == target`.
    pub fn is_identity(&self) -> bool {
        same_category(&self.source, &self.target)
            && self.obj_map.iter().enumerate().all(|(a, &b)| a == b)
            && self.mor_map.iter().enumerate().all(|(m, &n)| m == n)
    }

    pub fn is_bijective(&self) -> bool {
        fn bij(map: &[usize], n: usize) -> bool {
            if map.len() != n {
                return false;
            }
            let mut seen = vec![false; n];
            map.iter().all(|&x| !std::mem::replace(&mut seen[x], true))
        }
        bij(&self.obj_map, self.target.ob_count()) && bij(&self.mor_map, self.target.mor_count())
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        let (s, t) = (&*self.source, &*self.target);
        for m in 0..s.mor_count() {
            let img = self.mor_map[m];
            if t.dom(img) != self.obj_map[s.dom(m)] || t.cod(img) != self.obj_map[s.cod(m)] {
                report.push(
                    Law::FunctorEndpoints,
                    vec![s.mor_name(m).clone(), t.mor_name(img).clone()],
                    "image does not connect the images of the endpoints",
                );
            }
        }
        for a in 0..s.ob_count() {
            let img = self.mor_map[s.identity(a)];
            if img != t.identity(self.obj_map[a]) {
                report.push(
                    Law::FunctorIdentity,
                    vec![s.object(a).clone()],
                    format!("identity sent to {}", t.mor_name(img)),
                );
            }
        }
        for (g, f) in s.composable_pairs() {
            let Some(gf) = s.compose(g, f) else { continue };
            let lhs = self.mor_map[gf];
            match t.compose(self.mor_map[g], self.mor_map[f]) {
                Some(rhs) if rhs == lhs => {}
                other => report.push(
                    Law::FunctorComposition,
                    vec![s.mor_name(g).clone(), s.mor_name(f).clone()],
                    format!(
                        "F(g ∘ f) = {} but F(g) ∘ F(f) = {}",
                        t.mor_name(lhs),
                        other.map_or("undefined".to_string(), |r| t.mor_name(r).to_string())
                    ),
                ),
            }
        }
        report
    }
}

/// A natural transformation between parallel functors.
#[derive(Clone, PartialEq, Eq)]
pub struct NatTrans {
    source: Functor,
    target: Functor,
    components: Vec<usize>,
}

impl fmt::Debug for NatTrans {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.source.target();
        let comps: Vec<String> = self
            .components
            .iter()
            .enumerate()
            .map(|(a, &m)| format!("{}: {}", self.source.source().object(a), d.mor_name(m)))
            .collect();
        f.debug_struct("NatTrans").field("components", &comps).finish()
    }
}

impl NatTrans {
    pub fn new(source: Functor, target: Functor, components: Vec<usize>) -> Result<Self> {
        if !same_category(source.source(), target.source())
            || !same_category(source.target(), target.target())
        {
            return Err(Error::Mismatch("functors are not parallel".into()));
        }
        if components.len() != source.source().ob_count()
            || components.iter().any(|&m| m >= source.target().mor_count())
        {
            return Err(Error::Malformed("components are not total".into()));
        }
        Ok(NatTrans {
            source,
            target,
            components,
        })
    }

    pub fn identity(functor: &Functor) -> Self {
        let d = functor.target();
        let components = functor.obj_map().iter().map(|&b| d.identity(b)).collect();
        NatTrans {
            source: functor.clone(),
            target: functor.clone(),
            components,
        }
    }

    /// Vertical composite `second · first`.
    pub fn vertical(second: &NatTrans, first: &NatTrans) -> Result<Self> {
        if first.target != second.source {
            return Err(Error::Mismatch("transformations are not composable".into()));
        }
        let d = first.source.target();
        let components = first
            .components
            .iter()
            .zip(&second.components)
            .map(|(&e, &t)| {
                d.compose(t, e)
                    .ok_or_else(|| Error::Malformed("component composite undefined".into()))
            })
            .collect::<Result<_>>()?;
        Ok(NatTrans {
            source: first.source.clone(),
            target: second.target.clone(),
            components,
        })
    }

    pub fn source(&self) -> &Functor {
        &self.source
    }

    pub fn target(&self) -> &Functor {
        &self.target
    }

    pub fn component(&self, a: usize) -> usize {
        self.components[a]
    }

    pub fn components(&self) -> &[usize] {
        &self.components
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        let c = self.source.source();
        let d = self.source.target();
        for a in 0..c.ob_count() {
            let m = self.components[a];
            if d.dom(m) != self.source.obj(a) || d.cod(m) != self.target.obj(a) {
                report.push(
                    Law::ComponentEndpoints,
                    vec![c.object(a).clone(), d.mor_name(m).clone()],
                    "component does not run from F(a) to G(a)",
                );
            }
        }
        if !report.is_ok() {
            return report;
        }
        for f in 0..c.mor_count() {
            let (a, b) = (c.dom(f), c.cod(f));
            let lhs = d.compose(self.target.mor(f), self.components[a]);
            let rhs = d.compose(self.components[b], self.source.mor(f));
            if lhs.is_none() || lhs != rhs {
                report.push(
                    Law::Naturality,
                    vec![c.mor_name(f).clone()],
                    "G(f) ∘ η_a differs from η_b ∘ F(f)",
                );
            }
        }
        report
    }
}
