//! Command implementations. Each returns a process exit code:
//! 0 pass, 1 check failure, 2 input error, 3 resource bound.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use sigma_cat::elements::{category_of_elements, check_discrete_fibration, pi_presheaf, yoneda_presheaf};
use sigma_cat::fincat::functor_category;
use sigma_cat::grothendieck::{check_split_fibration, grothendieck, is_fibration, product_category_pi, CatPresheaf};
use sigma_cat::testkit::{gen_bi_presheaf, gen_cat_presheaf, gen_category, gen_q_over_elements, gen_set_presheaf, mix, GenParams};
use sigma_cat::theorems::{check_commutativity, check_theorem_ac, check_theorem_assoc, sigma_pq, TheoremReport};
use sigma_cat::{Error, FinCategory, Limits, Name, Result, ValidationReport};

use crate::format::{parse_instance, serialize_instance, Instance};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BOUND: i32 = 3;

pub fn exit_code(e: &Error) -> i32 {
    if e.is_resource() {
        EXIT_BOUND
    } else if matches!(e, Error::Witness(_)) {
        EXIT_FAIL
    } else {
        EXIT_INPUT
    }
}

/// Where a command writes its report and its diagnostics.
pub struct Io<'a> {
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
}

impl Io<'_> {
    fn fail(&mut self, e: &Error) -> i32 {
        let _ = writeln!(self.err, "error: {e}");
        exit_code(e)
    }
}

fn read_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_instance(&text)
}

fn limits(bound: Option<usize>) -> Limits {
    match bound {
        Some(n) => Limits { max_objects: n, ..Limits::default() },
        None => Limits::default(),
    }
}

fn validate_instance(i: &Instance) -> ValidationReport {
    match i {
        Instance::Category(c) => c.validate(),
        Instance::SetPresheaf(p) => p.validate(),
        Instance::BiPresheaf(r) => r.validate(),
        Instance::CatPresheaf(p) | Instance::QPresheaf(p) => p.validate(),
    }
}

fn summary(i: &Instance) -> String {
    match i {
        Instance::Category(c) => format!("{} objects, {} morphisms", c.ob_count(), c.mor_count()),
        Instance::SetPresheaf(p) => format!("{} base objects, {} elements", p.base().ob_count(), p.element_count()),
        Instance::BiPresheaf(r) => format!(
            "{} x {} base objects, {} elements",
            r.left().ob_count(),
            r.right().ob_count(),
            r.presheaf().element_count()
        ),
        Instance::CatPresheaf(p) | Instance::QPresheaf(p) => {
            format!("{} base objects, {} fiber objects", p.base().ob_count(), p.object_count())
        }
    }
}

#[derive(Serialize)]
struct ValidateJson<'a> {
    path: String,
    kind: &'a str,
    valid: bool,
    #[serde(flatten)]
    report: &'a ValidationReport,
}

pub fn validate(path: &Path, json: bool, io: &mut Io) -> i32 {
    let instance = match read_instance(path) {
        Ok(i) => i,
        Err(e) => return io.fail(&e),
    };
    let report = validate_instance(&instance);
    if json {
        let doc = ValidateJson {
            path: path.display().to_string(),
            kind: instance.kind(),
            valid: report.is_ok(),
            report: &report,
        };
        let _ = writeln!(io.out, "{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    } else if report.is_ok() {
        let _ = writeln!(io.out, "{}: valid {} ({})", path.display(), instance.kind(), summary(&instance));
    } else {
        let _ = writeln!(io.out, "{}: invalid {}: {} violation(s)", path.display(), instance.kind(), report.len());
        for v in &report.violations {
            let names: Vec<String> = v.witness.iter().map(|n| n.to_string()).collect();
            let _ = writeln!(io.out, "  {:?} at [{}]: {}", v.law, names.join(", "), v.detail);
        }
    }
    if report.is_ok() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

/// Constructions offered by `construct`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Construction {
    Elements,
    Grothendieck,
    PiPresheaf,
    ProductPi,
    SigmaPq,
    FunctorCat,
    Slice,
    Yoneda,
}

fn expect_inputs(what: &str, inputs: &[Instance], n: usize) -> Result<()> {
    if inputs.len() == n {
        Ok(())
    } else {
        Err(Error::Mismatch(format!("{what} takes {n} input file(s), got {}", inputs.len())))
    }
}

fn as_category(i: &Instance) -> Result<Arc<FinCategory>> {
    match i {
        Instance::Category(c) => Ok(Arc::new(c.clone())),
        other => Err(Error::Mismatch(format!("expected a category, got {}", other.kind()))),
    }
}

fn as_cat_presheaf(i: &Instance) -> Result<&CatPresheaf> {
    match i {
        Instance::CatPresheaf(p) => Ok(p),
        other => Err(Error::Mismatch(format!("expected a cat_presheaf, got {}", other.kind()))),
    }
}

fn require_valid_category(c: &FinCategory, what: &str) -> Result<()> {
    let report = c.validate();
    if report.is_ok() {
        Ok(())
    } else {
        Err(Error::Invalid { what: what.into(), report })
    }
}

/// The name `construct grothendieck` gives a morphism `gr[((f, φ), ends)]`:
/// the bare pair when `full` is unset.
fn display_mor_name(m: &Name, full: bool) -> Name {
    if full {
        return m.clone();
    }
    m.as_tagged()
        .and_then(|(_, inner)| inner.as_pair())
        .map(|(pair, _)| pair.clone())
        .unwrap_or_else(|| m.clone())
}

/// `Σ(C, 𝒫)` as written by `construct grothendieck`: morphisms are named by
/// their pair `(f, φ)` unless two morphisms share a pair, in which case the
/// codomain-tagged names are kept. Returns the category and whether the
/// tagged names were kept.
pub fn written_total(p: &CatPresheaf) -> Result<(FinCategory, bool)> {
    let gr = grothendieck(p)?;
    match gr.pair_named() {
        Ok(c) => Ok((c, false)),
        Err(_) => Ok(((*gr.category).clone(), true)),
    }
}

/// Moves `q` onto `base`, matching objects by name and morphisms through
/// `rename`, which sends a morphism of `base` to its name in `q.base()`.
fn rebase(q: &CatPresheaf, base: Arc<FinCategory>, rename: impl Fn(&Name) -> Name) -> Result<CatPresheaf> {
    let old = q.base();
    let fibers = base
        .objects()
        .iter()
        .map(|o| Ok(q.fiber(old.obj_by_name(o)?).clone()))
        .collect::<Result<Vec<_>>>()?;
    let transitions = base
        .morphisms()
        .iter()
        .map(|m| Ok(q.transition(old.mor_by_name(&rename(&m.name))?).clone()))
        .collect::<Result<Vec<_>>>()?;
    CatPresheaf::new(base, fibers, transitions)
}

/// Reads a `q_presheaf` written over the `construct grothendieck` output of
/// `p` and moves it onto `Σ(C, 𝒫)` itself.
pub fn attach_q(p: &CatPresheaf, q: &CatPresheaf) -> Result<CatPresheaf> {
    let (written, full) = written_total(p)?;
    if **q.base() != written {
        return Err(Error::Mismatch(
            "the q_presheaf base is not the grothendieck construction of the cat_presheaf".into(),
        ));
    }
    let gr = grothendieck(p)?;
    rebase(q, gr.category.clone(), |m| display_mor_name(m, full))
}

/// Moves a presheaf over `Σ(C, 𝒫)` onto the `construct grothendieck` output.
pub fn detach_q(p: &CatPresheaf, q: &CatPresheaf) -> Result<CatPresheaf> {
    let (written, full) = written_total(p)?;
    let gr = grothendieck(p)?;
    let back: std::collections::HashMap<Name, Name> = gr
        .category
        .morphisms()
        .iter()
        .map(|m| (display_mor_name(&m.name, full), m.name.clone()))
        .collect();
    rebase(q, Arc::new(written), |m| back[m].clone())
}

fn run_construction(kind: Construction, inputs: &[Instance], object: Option<&str>, limits: &Limits) -> Result<Instance> {
    let need_object = || -> Result<Name> {
        object
            .ok_or_else(|| Error::Mismatch("this construction needs --object".into()))?
            .parse()
    };
    match kind {
        Construction::Elements => {
            expect_inputs("elements", inputs, 1)?;
            match &inputs[0] {
                Instance::SetPresheaf(p) => {
                    Ok(Instance::Category((*category_of_elements(p)?.category).clone()))
                }
                other => Err(Error::Mismatch(format!("expected a set_presheaf, got {}", other.kind()))),
            }
        }
        Construction::Grothendieck => {
            expect_inputs("grothendieck", inputs, 1)?;
            Ok(Instance::Category(written_total(as_cat_presheaf(&inputs[0])?)?.0))
        }
        Construction::PiPresheaf | Construction::ProductPi => {
            expect_inputs("this construction", inputs, 1)?;
            let Instance::BiPresheaf(r) = &inputs[0] else {
                return Err(Error::Mismatch(format!("expected a bi_presheaf, got {}", inputs[0].kind())));
            };
            if kind == Construction::PiPresheaf {
                Ok(Instance::SetPresheaf(pi_presheaf(r, limits)?.presheaf))
            } else {
                Ok(Instance::Category((*product_category_pi(r, limits)?.category).clone()))
            }
        }
        Construction::SigmaPq => {
            expect_inputs("sigma-pq", inputs, 2)?;
            let p = as_cat_presheaf(&inputs[0])?;
            let Instance::QPresheaf(q) = &inputs[1] else {
                return Err(Error::Mismatch(format!("expected a q_presheaf, got {}", inputs[1].kind())));
            };
            Ok(Instance::CatPresheaf(sigma_pq(p, &attach_q(p, q)?)?.presheaf))
        }
        Construction::FunctorCat => {
            expect_inputs("functor-cat", inputs, 2)?;
            let (c, d) = (as_category(&inputs[0])?, as_category(&inputs[1])?);
            require_valid_category(&c, "source category")?;
            require_valid_category(&d, "target category")?;
            Ok(Instance::Category((*functor_category(&c, &d, limits)?.category).clone()))
        }
        Construction::Slice => {
            expect_inputs("slice", inputs, 1)?;
            let c = as_category(&inputs[0])?;
            require_valid_category(&c, "category")?;
            Ok(Instance::Category(c.slice(&need_object()?)?))
        }
        Construction::Yoneda => {
            expect_inputs("yoneda", inputs, 1)?;
            let c = as_category(&inputs[0])?;
            require_valid_category(&c, "category")?;
            Ok(Instance::SetPresheaf(yoneda_presheaf(&c, &need_object()?)?))
        }
    }
}

#[derive(Serialize)]
struct CountsJson<'a> {
    kind: &'a str,
    summary: String,
}

pub struct ConstructArgs<'a> {
    pub kind: Construction,
    pub inputs: &'a [PathBuf],
    pub object: Option<&'a str>,
    pub out: Option<&'a Path>,
    pub bound: Option<usize>,
    pub json: bool,
}

pub fn construct(args: &ConstructArgs, io: &mut Io) -> i32 {
    let result = args
        .inputs
        .iter()
        .map(|p| read_instance(p))
        .collect::<Result<Vec<_>>>()
        .and_then(|inputs| run_construction(args.kind, &inputs, args.object, &limits(args.bound)));
    let instance = match result {
        Ok(i) => i,
        Err(e) => return io.fail(&e),
    };
    let text = serialize_instance(&instance);
    match args.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                let _ = writeln!(io.err, "error: {}: {e}", path.display());
                return EXIT_INPUT;
            }
        }
        None => {
            let _ = io.out.write_all(text.as_bytes());
        }
    }
    if args.json {
        let doc = CountsJson { kind: instance.kind(), summary: summary(&instance) };
        let _ = writeln!(io.err, "{}", serde_json::to_string(&doc).expect("serializable"));
    } else {
        let _ = writeln!(io.err, "{}: {}", instance.kind(), summary(&instance));
    }
    EXIT_PASS
}

/// Claims offered by `check`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Claim {
    Ac,
    Assoc,
    Commute,
    DiscFib,
    SplitFib,
}

impl Claim {
    fn arity(self) -> usize {
        if self == Claim::Assoc {
            2
        } else {
            1
        }
    }
}

fn disc_fib_report(i: &Instance) -> Result<TheoremReport> {
    let (instance, projection) = match i {
        Instance::SetPresheaf(p) => ("category of elements", category_of_elements(p)?.projection),
        Instance::CatPresheaf(p) => ("grothendieck construction", grothendieck(p)?.projection),
        other => {
            return Err(Error::Mismatch(format!(
                "disc-fib takes a set_presheaf or cat_presheaf, got {}",
                other.kind()
            )))
        }
    };
    let mut report = TheoremReport::new("disc-fib", format!("first projection of the {instance}"));
    let ok = check_discrete_fibration(&projection);
    report.check(
        "discrete fibration",
        ok,
        if ok { "every morphism has exactly one lift per codomain" } else { "some morphism has zero or several lifts" },
    );
    Ok(report)
}

fn split_fib_report(p: &CatPresheaf) -> Result<TheoremReport> {
    let gr = grothendieck(p)?;
    let mut report = TheoremReport::new("split-fib", "first projection of the grothendieck construction");
    let fib = is_fibration(&gr.projection);
    report.check("fibration", fib, if fib { "cartesian lifts exist" } else { "a cartesian lift is missing" });
    let split = check_split_fibration(p);
    report.check(
        "split cleavage",
        split,
        if split { "the lifts (f, 1) are cartesian and closed under composition" } else { "the lifts (f, 1) do not form a split cleavage" },
    );
    Ok(report)
}

fn check_instances(claim: Claim, inputs: &[Instance], limits: &Limits) -> Result<TheoremReport> {
    expect_inputs("this check", inputs, claim.arity())?;
    let bi = |i: &Instance| match i {
        Instance::BiPresheaf(r) => Ok(r.clone()),
        other => Err(Error::Mismatch(format!("expected a bi_presheaf, got {}", other.kind()))),
    };
    match claim {
        Claim::Ac => check_theorem_ac(&bi(&inputs[0])?, limits),
        Claim::Commute => check_commutativity(&bi(&inputs[0])?),
        Claim::Assoc => {
            let p = as_cat_presheaf(&inputs[0])?;
            let Instance::QPresheaf(q) = &inputs[1] else {
                return Err(Error::Mismatch(format!("expected a q_presheaf, got {}", inputs[1].kind())));
            };
            check_theorem_assoc(p, &attach_q(p, q)?)
        }
        Claim::DiscFib => disc_fib_report(&inputs[0]),
        Claim::SplitFib => split_fib_report(as_cat_presheaf(&inputs[0])?),
    }
}

/// Generator parameters used by `check --seeds`.
pub fn check_params(claim: Claim) -> GenParams {
    match claim {
        Claim::Ac | Claim::Commute | Claim::Assoc => {
            GenParams { max_objects: 2, max_extra_morphisms: 2, max_fiber_size: 2, seed: 0 }
        }
        Claim::DiscFib | Claim::SplitFib => GenParams::default(),
    }
}

/// The instance `check --seeds` builds for one seed.
pub fn generated_instances(claim: Claim, seed: u64) -> Result<Vec<Instance>> {
    let p = check_params(claim).with_seed(seed);
    let c = Arc::new(gen_category(&p));
    match claim {
        Claim::Ac | Claim::Commute => {
            let d = Arc::new(gen_category(&p.with_seed(mix(seed))));
            Ok(vec![Instance::BiPresheaf(gen_bi_presheaf(&c, &d, &p)?)])
        }
        Claim::Assoc => {
            let cp = gen_cat_presheaf(&c, &p)?;
            let q = gen_q_over_elements(&cp, &p.with_seed(mix(seed)))?;
            let q = detach_q(&cp, &q)?;
            Ok(vec![Instance::CatPresheaf(cp), Instance::QPresheaf(q)])
        }
        Claim::DiscFib => Ok(vec![Instance::SetPresheaf(gen_set_presheaf(&c, &p)?)]),
        Claim::SplitFib => Ok(vec![Instance::CatPresheaf(gen_cat_presheaf(&c, &p)?)]),
    }
}

pub struct CheckArgs<'a> {
    pub claim: Claim,
    pub inputs: &'a [PathBuf],
    pub json: bool,
    pub bound: Option<usize>,
    pub seed: u64,
    pub seeds: Option<u64>,
}

pub fn check(args: &CheckArgs, io: &mut Io) -> i32 {
    let limits = limits(args.bound);
    let results: Vec<Result<TheoremReport>> = match (args.inputs.is_empty(), args.seeds) {
        (false, None) => {
            let run = args
                .inputs
                .iter()
                .map(|p| read_instance(p))
                .collect::<Result<Vec<_>>>()
                .and_then(|inputs| check_instances(args.claim, &inputs, &limits));
            vec![run]
        }
        (true, Some(n)) => (args.seed..args.seed.saturating_add(n))
            .into_par_iter()
            .map(|seed| {
                let mut report = check_instances(args.claim, &generated_instances(args.claim, seed)?, &limits)?;
                report.instance = format!("seed {seed}: {}", report.instance);
                Ok(report)
            })
            .collect(),
        _ => {
            let _ = writeln!(io.err, "error: give either input files or --seeds, not both");
            return EXIT_INPUT;
        }
    };
    let mut reports = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Ok(report) => reports.push(report),
            Err(e) => return io.fail(&e),
        }
    }
    if args.json {
        let text = if reports.len() == 1 && args.seeds.is_none() {
            serde_json::to_string_pretty(&reports[0])
        } else {
            serde_json::to_string_pretty(&reports)
        };
        let _ = writeln!(io.out, "{}", text.expect("serializable"));
    } else {
        for r in &reports {
            let _ = write!(io.out, "{r}");
        }
        if reports.len() > 1 {
            let passed = reports.iter().filter(|r| r.passed).count();
            let _ = writeln!(io.out, "{passed}/{} passed", reports.len());
        }
    }
    if reports.iter().all(|r| r.passed) {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

/// Instance kinds offered by `gen`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum GenKind {
    Category,
    SetPresheaf,
    BiPresheaf,
    CatPresheaf,
    QPresheaf,
}

pub struct GenArgs<'a> {
    pub kind: GenKind,
    pub params: GenParams,
    pub over: Option<&'a Path>,
    pub out: Option<&'a Path>,
}

fn generate(kind: GenKind, p: &GenParams, over: Option<&Path>) -> Result<Instance> {
    let c = || Arc::new(gen_category(p));
    Ok(match kind {
        GenKind::Category => Instance::Category(gen_category(p)),
        GenKind::SetPresheaf => Instance::SetPresheaf(gen_set_presheaf(&c(), p)?),
        GenKind::BiPresheaf => {
            let d = Arc::new(gen_category(&p.with_seed(mix(p.seed))));
            Instance::BiPresheaf(gen_bi_presheaf(&c(), &d, p)?)
        }
        GenKind::CatPresheaf => Instance::CatPresheaf(gen_cat_presheaf(&c(), p)?),
        GenKind::QPresheaf => {
            let path = over.ok_or_else(|| Error::Mismatch("q-presheaf needs --over CAT_PRESHEAF".into()))?;
            let base = read_instance(path)?;
            let base = as_cat_presheaf(&base)?;
            let q = gen_q_over_elements(base, p)?;
            Instance::QPresheaf(detach_q(base, &q)?)
        }
    })
}

pub fn gen(args: &GenArgs, io: &mut Io) -> i32 {
    let instance = match generate(args.kind, &args.params, args.over) {
        Ok(i) => i,
        Err(e) => return io.fail(&e),
    };
    let text = serialize_instance(&instance);
    match args.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                let _ = writeln!(io.err, "error: {}: {e}", path.display());
                return EXIT_INPUT;
            }
        }
        None => {
            let _ = io.out.write_all(text.as_bytes());
        }
    }
    EXIT_PASS
}
