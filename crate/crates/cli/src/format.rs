//! The JSON instance format.
//!
//! Names are written in their text form. Maps are sorted by that text, and
//! entry arrays follow the canonical index order, so output is byte-stable.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sigma_cat::elements::{BiPresheaf, SetPresheaf};
use sigma_cat::grothendieck::CatPresheaf;
use sigma_cat::{Error, FinCategory, Functor, Name, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismRecord {
    pub id: String,
    pub dom: String,
    pub cod: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryFile {
    pub kind: String,
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismRecord>,
    pub identities: BTreeMap<String, String>,
    /// `[g, f, g∘f]` for every composable pair of non-identities.
    #[serde(default)]
    pub composition: Vec<[String; 3]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetPresheafFile {
    pub kind: String,
    pub base: CategoryFile,
    pub values: BTreeMap<String, Vec<String>>,
    /// Contravariant: the action of `f : a → b` maps `values[b]` to `values[a]`.
    #[serde(default)]
    pub actions: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BiPresheafFile {
    pub kind: String,
    pub base_c: CategoryFile,
    pub base_d: CategoryFile,
    pub values: Vec<([String; 2], Vec<String>)>,
    #[serde(default)]
    pub actions: Vec<([String; 2], BTreeMap<String, String>)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorRecord {
    pub obj_map: BTreeMap<String, String>,
    pub mor_map: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatPresheafFile {
    pub kind: String,
    pub base: CategoryFile,
    pub values: BTreeMap<String, CategoryFile>,
    #[serde(default)]
    pub actions: BTreeMap<String, FunctorRecord>,
}

/// A parsed instance file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Category(FinCategory),
    SetPresheaf(SetPresheaf),
    BiPresheaf(BiPresheaf),
    CatPresheaf(CatPresheaf),
    /// A Cat-valued presheaf over a grothendieck construction.
    QPresheaf(CatPresheaf),
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Category(_) => "category",
            Instance::SetPresheaf(_) => "set_presheaf",
            Instance::BiPresheaf(_) => "bi_presheaf",
            Instance::CatPresheaf(_) => "cat_presheaf",
            Instance::QPresheaf(_) => "q_presheaf",
        }
    }
}

fn name(s: &str) -> Result<Name> {
    s.parse()
}

fn text(n: &Name) -> String {
    n.to_string()
}

pub fn category_to_file(c: &FinCategory) -> CategoryFile {
    let composition = c
        .composites()
        .into_iter()
        .filter(|&(g, f, _)| !c.is_identity(g) && !c.is_identity(f))
        .map(|(g, f, gf)| [text(c.mor_name(g)), text(c.mor_name(f)), text(c.mor_name(gf))])
        .collect();
    CategoryFile {
        kind: "category".into(),
        objects: c.objects().iter().map(text).collect(),
        morphisms: c
            .morphisms()
            .iter()
            .map(|m| MorphismRecord {
                id: text(&m.name),
                dom: text(c.object(m.dom)),
                cod: text(c.object(m.cod)),
            })
            .collect(),
        identities: (0..c.ob_count())
            .map(|a| (text(c.object(a)), text(c.mor_name(c.identity(a)))))
            .collect(),
        composition,
    }
}

fn expect_kind(found: &str, expected: &str) -> Result<()> {
    if found == expected {
        Ok(())
    } else {
        Err(Error::Parse(format!("expected kind `{expected}`, found `{found}`")))
    }
}

pub fn category_from_file(f: &CategoryFile) -> Result<FinCategory> {
    expect_kind(&f.kind, "category")?;
    let objects = f.objects.iter().map(|o| name(o)).collect::<Result<Vec<_>>>()?;
    let morphisms = f
        .morphisms
        .iter()
        .map(|m| Ok((name(&m.id)?, name(&m.dom)?, name(&m.cod)?)))
        .collect::<Result<Vec<_>>>()?;
    let identities = f
        .identities
        .iter()
        .map(|(o, m)| Ok((name(o)?, name(m)?)))
        .collect::<Result<Vec<_>>>()?;
    if identities.len() != objects.len() {
        return Err(Error::Malformed("every object needs exactly one identity".into()));
    }
    let composites = f
        .composition
        .iter()
        .map(|[g, h, gf]| Ok((name(g)?, name(h)?, name(gf)?)))
        .collect::<Result<Vec<_>>>()?;
    FinCategory::from_names(objects, morphisms, identities, composites, true)
}

pub fn set_presheaf_to_file(p: &SetPresheaf) -> SetPresheafFile {
    let c = p.base();
    let values = (0..c.ob_count())
        .map(|a| (text(c.object(a)), p.value(a).elements().iter().map(text).collect()))
        .collect();
    let actions = (0..c.mor_count())
        .filter(|&m| !(c.is_identity(m) && p.action(m).is_identity()))
        .map(|m| {
            let (src, tgt) = (p.value(c.cod(m)), p.value(c.dom(m)));
            let table = (0..src.len())
                .map(|v| (text(src.element(v)), text(tgt.element(p.act(m, v)))))
                .collect();
            (text(c.mor_name(m)), table)
        })
        .collect();
    SetPresheafFile {
        kind: "set_presheaf".into(),
        base: category_to_file(c),
        values,
        actions,
    }
}

fn named_map(m: &BTreeMap<String, String>) -> Result<BTreeMap<Name, Name>> {
    m.iter().map(|(k, v)| Ok((name(k)?, name(v)?))).collect()
}

fn set_presheaf_parts(
    base: Arc<FinCategory>,
    values: &BTreeMap<String, Vec<String>>,
    actions: &BTreeMap<String, BTreeMap<String, String>>,
) -> Result<SetPresheaf> {
    let values = values
        .iter()
        .map(|(k, v)| Ok((name(k)?, v.iter().map(|e| name(e)).collect::<Result<Vec<_>>>()?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let actions = actions
        .iter()
        .map(|(k, v)| Ok((name(k)?, named_map(v)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    SetPresheaf::from_names(base, &values, &actions)
}

pub fn set_presheaf_from_file(f: &SetPresheafFile) -> Result<SetPresheaf> {
    expect_kind(&f.kind, "set_presheaf")?;
    let base = Arc::new(category_from_file(&f.base)?);
    set_presheaf_parts(base, &f.values, &f.actions)
}

fn pair_text(l: &Name, r: &Name) -> [String; 2] {
    [text(l), text(r)]
}

pub fn bi_presheaf_to_file(r: &BiPresheaf) -> BiPresheafFile {
    let (c, d) = (r.left(), r.right());
    let p = r.presheaf();
    let mut values = Vec::new();
    for a in 0..c.ob_count() {
        for x in 0..d.ob_count() {
            values.push((
                pair_text(c.object(a), d.object(x)),
                r.value(a, x).elements().iter().map(text).collect(),
            ));
        }
    }
    let mut actions = Vec::new();
    for f in 0..c.mor_count() {
        for phi in 0..d.mor_count() {
            let m = r.mor(f, phi);
            let base = p.base();
            if base.is_identity(m) && p.action(m).is_identity() {
                continue;
            }
            let (src, tgt) = (p.value(base.cod(m)), p.value(base.dom(m)));
            let table = (0..src.len())
                .map(|v| (text(src.element(v)), text(tgt.element(p.act(m, v)))))
                .collect();
            actions.push((pair_text(c.mor_name(f), d.mor_name(phi)), table));
        }
    }
    BiPresheafFile {
        kind: "bi_presheaf".into(),
        base_c: category_to_file(c),
        base_d: category_to_file(d),
        values,
        actions,
    }
}

pub fn bi_presheaf_from_file(f: &BiPresheafFile) -> Result<BiPresheaf> {
    expect_kind(&f.kind, "bi_presheaf")?;
    let c = Arc::new(category_from_file(&f.base_c)?);
    let d = Arc::new(category_from_file(&f.base_d)?);
    let base = Arc::new(c.product(&d));
    let pair_key = |[l, r]: &[String; 2]| -> Result<String> { Ok(text(&Name::pair(name(l)?, name(r)?))) };
    let mut values = BTreeMap::new();
    for (k, v) in &f.values {
        if values.insert(pair_key(k)?, v.clone()).is_some() {
            return Err(Error::Malformed(format!("duplicate value entry ({}, {})", k[0], k[1])));
        }
    }
    let mut actions = BTreeMap::new();
    for (k, v) in &f.actions {
        if actions.insert(pair_key(k)?, v.clone()).is_some() {
            return Err(Error::Malformed(format!("duplicate action entry ({}, {})", k[0], k[1])));
        }
    }
    let presheaf = set_presheaf_parts(base, &values, &actions)?;
    BiPresheaf::new(c, d, presheaf)
}

fn functor_to_record(f: &Functor) -> FunctorRecord {
    FunctorRecord {
        obj_map: f.obj_names().iter().map(|(k, v)| (text(k), text(v))).collect(),
        mor_map: f.mor_names().iter().map(|(k, v)| (text(k), text(v))).collect(),
    }
}

pub fn cat_presheaf_to_file(p: &CatPresheaf, kind: &str) -> CatPresheafFile {
    let c = p.base();
    CatPresheafFile {
        kind: kind.into(),
        base: category_to_file(c),
        values: (0..c.ob_count())
            .map(|a| (text(c.object(a)), category_to_file(p.fiber(a))))
            .collect(),
        actions: (0..c.mor_count())
            .filter(|&m| !(c.is_identity(m) && p.transition(m).is_identity()))
            .map(|m| (text(c.mor_name(m)), functor_to_record(p.transition(m))))
            .collect(),
    }
}

pub fn cat_presheaf_from_file(f: &CatPresheafFile, kind: &str) -> Result<CatPresheaf> {
    expect_kind(&f.kind, kind)?;
    let base = Arc::new(category_from_file(&f.base)?);
    let mut fibers = Vec::with_capacity(base.ob_count());
    for o in base.objects() {
        let file = f
            .values
            .get(&text(o))
            .ok_or_else(|| Error::Malformed(format!("no fiber for object `{o}`")))?;
        fibers.push(Arc::new(category_from_file(file)?));
    }
    for k in f.values.keys() {
        base.obj_by_name(&name(k)?)?;
    }
    for k in f.actions.keys() {
        base.mor_by_name(&name(k)?)?;
    }
    let mut transitions = Vec::with_capacity(base.mor_count());
    for m in 0..base.mor_count() {
        let (src, tgt) = (&fibers[base.cod(m)], &fibers[base.dom(m)]);
        match f.actions.get(&text(base.mor_name(m))) {
            None if base.is_identity(m) => transitions.push(Functor::identity(src.clone())),
            None => {
                return Err(Error::Malformed(format!("no action for morphism `{}`", base.mor_name(m))))
            }
            Some(rec) => transitions.push(Functor::from_names(
                src.clone(),
                tgt.clone(),
                &named_map(&rec.obj_map)?,
                &named_map(&rec.mor_map)?,
            )?),
        }
    }
    CatPresheaf::new(base, fibers, transitions)
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let kind = value
        .get("kind")
        .and_then(|k| k.as_str())
        .ok_or_else(|| Error::Parse("missing string field `kind`".into()))?
        .to_string();
    fn typed<T: serde::de::DeserializeOwned>(v: serde_json::Value) -> Result<T> {
        serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))
    }
    match kind.as_str() {
        "category" => Ok(Instance::Category(category_from_file(&typed(value)?)?)),
        "set_presheaf" => Ok(Instance::SetPresheaf(set_presheaf_from_file(&typed(value)?)?)),
        "bi_presheaf" => Ok(Instance::BiPresheaf(bi_presheaf_from_file(&typed(value)?)?)),
        "cat_presheaf" => Ok(Instance::CatPresheaf(cat_presheaf_from_file(&typed(value)?, "cat_presheaf")?)),
        "q_presheaf" => Ok(Instance::QPresheaf(cat_presheaf_from_file(&typed(value)?, "q_presheaf")?)),
        other => Err(Error::Parse(format!("unknown kind `{other}`"))),
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn serialize_instance(i: &Instance) -> String {
    match i {
        Instance::Category(c) => pretty(&category_to_file(c)),
        Instance::SetPresheaf(p) => pretty(&set_presheaf_to_file(p)),
        Instance::BiPresheaf(r) => pretty(&bi_presheaf_to_file(r)),
        Instance::CatPresheaf(p) => pretty(&cat_presheaf_to_file(p, "cat_presheaf")),
        Instance::QPresheaf(p) => pretty(&cat_presheaf_to_file(p, "q_presheaf")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn category_round_trip() {
        let c = FinCategory::chain(&["a", "b", "c"], &["f", "g"]);
        let text = serialize_instance(&Instance::Category(c.clone()));
        assert_eq!(parse_instance(&text).unwrap(), Instance::Category(c));
        assert!(text.ends_with("}\n"));
    }

    #[test]
    fn wrong_kind_is_a_parse_error() {
        assert!(matches!(parse_instance(r#"{"kind":"monoid"}"#), Err(Error::Parse(_))));
        assert!(matches!(parse_instance("{"), Err(Error::Parse(_))));
    }
}
