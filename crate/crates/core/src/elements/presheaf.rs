use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::{same_category, FinCategory, Name};
use crate::report::{Law, ValidationReport};

/// A finite set of names, sorted.
#[derive(Debug, Clone, Default)]
pub struct FinSet {
    elements: Vec<Name>,
    index: HashMap<Name, usize>,
}

impl PartialEq for FinSet {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for FinSet {}

impl FinSet {
    pub fn new(mut elements: Vec<Name>) -> Result<Self> {
        elements.sort();
        for w in elements.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Malformed(format!("duplicate element `{}`", w[0])));
            }
        }
        let index = elements.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        Ok(FinSet { elements, index })
    }

    pub fn singleton(e: Name) -> Self {
        FinSet::new(vec![e]).expect("one element")
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Name] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Name {
        &self.elements[i]
    }

    pub fn index_of(&self, e: &Name) -> Option<usize> {
        self.index.get(e).copied()
    }
}

/// A function between finite sets, as a table of element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetFunction {
    table: Vec<usize>,
}

impl SetFunction {
    pub fn new(table: Vec<usize>) -> Self {
        SetFunction { table }
    }

    pub fn identity(n: usize) -> Self {
        SetFunction { table: (0..n).collect() }
    }

    /// `second ∘ first`.
    pub fn compose(second: &SetFunction, first: &SetFunction) -> Self {
        SetFunction {
            table: first.table.iter().map(|&i| second.table[i]).collect(),
        }
    }

    pub fn apply(&self, i: usize) -> usize {
        self.table[i]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.table.iter().all(|j| seen.insert(*j))
    }
}

/// A Set-valued presheaf on a finite category. The action of `f: a → b`
/// maps `value(b)` to `value(a)`.
#[derive(Debug, Clone)]
pub struct SetPresheaf {
    base: Arc<FinCategory>,
    values: Vec<FinSet>,
    actions: Vec<SetFunction>,
}

impl PartialEq for SetPresheaf {
    fn eq(&self, other: &Self) -> bool {
        same_category(&self.base, &other.base)
            && self.values == other.values
            && self.actions == other.actions
    }
}

impl Eq for SetPresheaf {}

impl SetPresheaf {
    /// Checks that every table is total and lands in the right set; the
    /// presheaf laws are left to [`SetPresheaf::validate`].
    pub fn new(base: Arc<FinCategory>, values: Vec<FinSet>, actions: Vec<SetFunction>) -> Result<Self> {
        if values.len() != base.ob_count() || actions.len() != base.mor_count() {
            return Err(Error::Malformed("presheaf data is not total".into()));
        }
        for (m, act) in actions.iter().enumerate() {
            let (a, b) = (base.dom(m), base.cod(m));
            if act.table.len() != values[b].len() || act.table.iter().any(|&i| i >= values[a].len()) {
                return Err(Error::Malformed(format!(
                    "action of `{}` does not map {} to {}",
                    base.mor_name(m),
                    base.object(b),
                    base.object(a)
                )));
            }
        }
        Ok(SetPresheaf { base, values, actions })
    }

    /// Builds a presheaf from named data. Missing identity actions are taken
    /// to be identities.
    pub fn from_names(
        base: Arc<FinCategory>,
        values: &BTreeMap<Name, Vec<Name>>,
        actions: &BTreeMap<Name, BTreeMap<Name, Name>>,
    ) -> Result<Self> {
        for o in values.keys() {
            base.obj_by_name(o)?;
        }
        for m in actions.keys() {
            base.mor_by_name(m)?;
        }
        let sets = base
            .objects()
            .iter()
            .map(|o| {
                values
                    .get(o)
                    .ok_or_else(|| Error::Malformed(format!("no value for object `{o}`")))
                    .and_then(|v| FinSet::new(v.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut tables = Vec::with_capacity(base.mor_count());
        for m in 0..base.mor_count() {
            let name = base.mor_name(m);
            let (src, tgt) = (&sets[base.cod(m)], &sets[base.dom(m)]);
            match actions.get(name) {
                None if base.is_identity(m) => tables.push(SetFunction::identity(src.len())),
                None => return Err(Error::Malformed(format!("no action for morphism `{name}`"))),
                Some(map) => {
                    let mut table = Vec::with_capacity(src.len());
                    for e in src.elements() {
                        let img = map.get(e).ok_or_else(|| {
                            Error::Malformed(format!("action of `{name}` undefined at `{e}`"))
                        })?;
                        table.push(tgt.index_of(img).ok_or_else(|| {
                            Error::Malformed(format!("action of `{name}` sends `{e}` outside its target"))
                        })?);
                    }
                    if map.len() != src.len() {
                        return Err(Error::Malformed(format!(
                            "action of `{name}` mentions elements outside its source"
                        )));
                    }
                    tables.push(SetFunction::new(table));
                }
            }
        }
        SetPresheaf::new(base, sets, tables)
    }

    /// The presheaf with value `set` everywhere and identity actions.
    pub fn constant(base: Arc<FinCategory>, set: FinSet) -> Self {
        let values = vec![set.clone(); base.ob_count()];
        let actions = vec![SetFunction::identity(set.len()); base.mor_count()];
        SetPresheaf { base, values, actions }
    }

    pub fn base(&self) -> &Arc<FinCategory> {
        &self.base
    }

    pub fn value(&self, a: usize) -> &FinSet {
        &self.values[a]
    }

    pub fn values(&self) -> &[FinSet] {
        &self.values
    }

    pub fn action(&self, m: usize) -> &SetFunction {
        &self.actions[m]
    }

    pub fn actions(&self) -> &[SetFunction] {
        &self.actions
    }

    /// `[P(m)](v)` for an element index `v` of the value at `cod m`.
    pub fn act(&self, m: usize, v: usize) -> usize {
        self.actions[m].table[v]
    }

    /// Total number of elements over all objects.
    pub fn element_count(&self) -> usize {
        self.values.iter().map(FinSet::len).sum()
    }

    pub fn validate(&self) -> ValidationReport {
        let c = &self.base;
        let mut report = ValidationReport::new();
        let base = c.validate();
        if !base.is_ok() {
            report.absorb(Law::Base, &Name::atom("base"), base);
            return report;
        }
        for a in 0..c.ob_count() {
            if !self.actions[c.identity(a)].is_identity() {
                report.push(
                    Law::PresheafIdentity,
                    vec![c.object(a).clone()],
                    "identity does not act as the identity",
                );
            }
        }
        for (g, f, gf) in c.composites() {
            let expected = SetFunction::compose(&self.actions[f], &self.actions[g]);
            if self.actions[gf] != expected {
                report.push(
                    Law::PresheafComposition,
                    vec![c.mor_name(g).clone(), c.mor_name(f).clone()],
                    format!("P({}) != P({}) ∘ P({})", c.mor_name(gf), c.mor_name(f), c.mor_name(g)),
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
}

/// A natural transformation of Set-valued presheaves: `η_a : P(a) → Q(a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresheafMap {
    source: SetPresheaf,
    target: SetPresheaf,
    components: Vec<SetFunction>,
}

impl PresheafMap {
    pub fn new(source: SetPresheaf, target: SetPresheaf, components: Vec<SetFunction>) -> Result<Self> {
        if !same_category(&source.base, &target.base) {
            return Err(Error::Mismatch("presheaves live over different bases".into()));
        }
        if components.len() != source.values.len() {
            return Err(Error::Malformed("components are not total".into()));
        }
        for (a, comp) in components.iter().enumerate() {
            if comp.table.len() != source.values[a].len()
                || comp.table.iter().any(|&i| i >= target.values[a].len())
            {
                return Err(Error::Malformed(format!(
                    "component at `{}` has the wrong shape",
                    source.base.object(a)
                )));
            }
        }
        Ok(PresheafMap { source, target, components })
    }

    pub fn identity(p: &SetPresheaf) -> Self {
        let components = p.values.iter().map(|s| SetFunction::identity(s.len())).collect();
        PresheafMap { source: p.clone(), target: p.clone(), components }
    }

    /// `second ∘ first`, componentwise.
    pub fn vertical(second: &PresheafMap, first: &PresheafMap) -> Result<Self> {
        if first.target != second.source {
            return Err(Error::Mismatch("maps are not composable".into()));
        }
        let components = first
            .components
            .iter()
            .zip(&second.components)
            .map(|(f, s)| SetFunction::compose(s, f))
            .collect();
        Ok(PresheafMap {
            source: first.source.clone(),
            target: second.target.clone(),
            components,
        })
    }

    pub fn source(&self) -> &SetPresheaf {
        &self.source
    }

    pub fn target(&self) -> &SetPresheaf {
        &self.target
    }

    pub fn component(&self, a: usize) -> &SetFunction {
        &self.components[a]
    }

    /// Naturality: `Q(f) ∘ η_b = η_a ∘ P(f)` for every `f : a → b`.
    pub fn validate(&self) -> ValidationReport {
        let c = &self.source.base;
        let mut report = ValidationReport::new();
        for m in 0..c.mor_count() {
            let (a, b) = (c.dom(m), c.cod(m));
            for v in 0..self.source.values[b].len() {
                let lhs = self.target.act(m, self.components[b].apply(v));
                let rhs = self.components[a].apply(self.source.act(m, v));
                if lhs != rhs {
                    report.push(
                        Law::Naturality,
                        vec![c.mor_name(m).clone(), self.source.values[b].element(v).clone()],
                        "naturality square does not commute",
                    );
                }
            }
        }
        report
    }
}

/// An assignment of a name to each index name.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct Family {
    pub entries: Vec<(Name, Name)>,
}

impl Family {
    pub fn at(&self, index: &Name) -> Option<&Name> {
        self.entries.iter().find(|(i, _)| i == index).map(|(_, v)| v)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// A presheaf on `C × D`, with the factors kept for index arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiPresheaf {
    left: Arc<FinCategory>,
    right: Arc<FinCategory>,
    presheaf: SetPresheaf,
}

impl BiPresheaf {
    pub fn new(left: Arc<FinCategory>, right: Arc<FinCategory>, presheaf: SetPresheaf) -> Result<Self> {
        if **presheaf.base() != left.product(&right) {
            return Err(Error::Mismatch("presheaf base is not the product category".into()));
        }
        Ok(BiPresheaf { left, right, presheaf })
    }

    pub fn constant(left: Arc<FinCategory>, right: Arc<FinCategory>, set: FinSet) -> Self {
        let base = Arc::new(left.product(&right));
        BiPresheaf { left, right, presheaf: SetPresheaf::constant(base, set) }
    }

    pub fn left(&self) -> &Arc<FinCategory> {
        &self.left
    }

    pub fn right(&self) -> &Arc<FinCategory> {
        &self.right
    }

    pub fn presheaf(&self) -> &SetPresheaf {
        &self.presheaf
    }

    pub fn obj(&self, a: usize, x: usize) -> usize {
        a * self.right.ob_count() + x
    }

    pub fn mor(&self, f: usize, phi: usize) -> usize {
        f * self.right.mor_count() + phi
    }

    pub fn value(&self, a: usize, x: usize) -> &FinSet {
        self.presheaf.value(self.obj(a, x))
    }

    /// `[R(f, φ)](v)`.
    pub fn act(&self, f: usize, phi: usize, v: usize) -> usize {
        self.presheaf.act(self.mor(f, phi), v)
    }

    pub fn validate(&self) -> ValidationReport {
        self.presheaf.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> Name {
        Name::atom(s)
    }

    #[test]
    fn constant_presheaf_is_valid() {
        let c = Arc::new(FinCategory::chain(&["a", "b", "c"], &["f", "g"]));
        let p = SetPresheaf::constant(c, FinSet::new(vec![n("u"), n("v")]).unwrap());
        assert!(p.validate().is_ok());
    }

    #[test]
    fn non_identity_unit_is_reported_at_its_object() {
        let c = Arc::new(FinCategory::terminal());
        let set = FinSet::new(vec![n("u"), n("v")]).unwrap();
        let p = SetPresheaf::new(c, vec![set], vec![SetFunction::new(vec![1, 0])]).unwrap();
        let report = p.validate();
        assert!(report.has(Law::PresheafIdentity));
        assert_eq!(report.violations[0].witness, vec![n("*")]);
    }

    #[test]
    fn named_construction_infers_identities() {
        let c = Arc::new(FinCategory::arrow());
        let values = BTreeMap::from([(n("a"), vec![n("u1"), n("u2")]), (n("b"), vec![n("v")])]);
        let actions = BTreeMap::from([(n("f"), BTreeMap::from([(n("v"), n("u1"))]))]);
        let p = SetPresheaf::from_names(c, &values, &actions).unwrap();
        assert!(p.validate().is_ok());
        assert_eq!(p.act(2, 0), 0);
        let bad = BTreeMap::from([(n("f"), BTreeMap::from([(n("v"), n("w"))]))]);
        assert!(SetPresheaf::from_names(p.base().clone(), &values, &bad).is_err());
    }

    #[test]
    fn duplicate_elements_are_rejected() {
        assert!(FinSet::new(vec![n("u"), n("u")]).is_err());
    }

    #[test]
    fn presheaf_map_naturality() {
        let c = Arc::new(FinCategory::arrow());
        let values = BTreeMap::from([(n("a"), vec![n("u1"), n("u2")]), (n("b"), vec![n("v")])]);
        let actions = BTreeMap::from([(n("f"), BTreeMap::from([(n("v"), n("u1"))]))]);
        let p = SetPresheaf::from_names(c.clone(), &values, &actions).unwrap();
        let swap = PresheafMap::new(
            p.clone(),
            p.clone(),
            vec![SetFunction::new(vec![1, 0]), SetFunction::identity(1)],
        )
        .unwrap();
        assert!(swap.validate().has(Law::Naturality));
        assert!(PresheafMap::identity(&p).validate().is_ok());
    }
}
